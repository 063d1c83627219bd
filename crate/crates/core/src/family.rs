//! Maximal families of actual solutions: one Borel sum per gap between
//! consecutive singular directions, each valid on a sector that reaches
//! `π/(2k)` past both bounding Stokes lines.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::borel::{borel_sum, reduce_angle, BorelSumResult, QuadratureSpec, RiemannPoint};
use crate::datum::CauchyDatum;
use crate::error::{Error, Result};
use crate::formal::Equation;
use crate::stokes::{jump_function, shifted_direction, singular_directions, StokesLine};

/// Open sector `lower < arg t < upper`, `|t| < radius`, on the cover of
/// period `period`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSector {
    pub lower: f64,
    pub upper: f64,
    pub radius: f64,
    pub period: f64,
}

impl SurfaceSector {
    pub fn opening(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// The representative of `arg` (mod period) closest to the center.
    pub fn lift(&self, arg: f64) -> f64 {
        self.center() + reduce_angle(arg - self.center(), self.period)
    }

    pub fn contains_arg(&self, arg: f64) -> bool {
        if self.opening() >= self.period {
            return true;
        }
        let a = (arg - self.lower).rem_euclid(self.period);
        a > 0.0 && a < self.opening()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub sector: SurfaceSector,
    pub representative_theta: f64,
    pub index: usize,
    /// The bounding singular directions `(d_i, d_{i+1})`; `None` for a datum
    /// without poles.
    pub gap: Option<(f64, f64)>,
}

/// Lines whose direction is `d` mod period.
fn lines_at(lines: &[StokesLine], d: f64, period: f64) -> Vec<&StokesLine> {
    lines
        .iter()
        .filter(|l| reduce_angle(l.direction - d, period).abs() < 1e-9)
        .collect()
}

/// Singular direction near `d` as seen from z.
fn adjusted(eq: Equation, datum: &CauchyDatum, lines: &[StokesLine], d: f64, z: Complex64) -> f64 {
    let dirs: Vec<f64> = lines_at(lines, d, eq.period())
        .iter()
        .flat_map(|l| l.contributing_poles.iter())
        .map(|&(i, l)| shifted_direction(eq, datum, i, l, z, d))
        .collect();
    if dirs.is_empty() {
        d
    } else {
        dirs.iter().sum::<f64>() / dirs.len() as f64
    }
}

impl FamilyMember {
    /// `u_i(t, z)`: the sum along a direction of the gap (as seen from z),
    /// as close to arg t as the sector allows.
    pub fn evaluate(&self, eq: Equation, datum: &CauchyDatum, t: RiemannPoint, z: Complex64, quad: &QuadratureSpec) -> Result<BorelSumResult> {
        let arg = self.sector.lift(t.argument);
        if !self.sector.contains_arg(arg) {
            return Err(Error::OutsideSector { arg: t.argument, theta: self.representative_theta, half_opening: self.sector.opening() / 2.0 });
        }
        let t = t.with_argument(arg);
        let theta = match self.gap {
            None => arg,
            Some((g0, g1)) => {
                let lines = singular_directions(eq, datum);
                let a0 = adjusted(eq, datum, &lines, g0, z);
                let a1 = adjusted(eq, datum, &lines, g1, z);
                let eps = 2.0 * (self.sector.lower - g0 + eq.opening() / 2.0);
                let margin = (0.45 * (eps - quad.eps_sector)).max(2.0 * quad.eps_sector).min(0.25 * (a1 - a0));
                arg.clamp(a0 + margin, a1 - margin)
            }
        };
        borel_sum(eq, datum, theta, t, z, quad)
    }
}

/// One member per gap between consecutive singular directions, with sector
/// `(d_i − π/2k + ε/2, d_{i+1} + π/2k − ε/2)`. A datum without poles gets a
/// single member covering the whole surface.
pub fn maximal_family(eq: Equation, datum: &CauchyDatum, eps: f64, r: f64) -> Result<Vec<FamilyMember>> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let period = eq.period();
    let half = eq.opening() / 2.0;
    if !(eps > 0.0) {
        return Err(Error::EpsilonTooLarge(eps));
    }
    let dirs: Vec<f64> = singular_directions(eq, datum).iter().map(|l| l.direction).collect();
    if dirs.is_empty() {
        let sector = SurfaceSector { lower: -half + eps / 2.0, upper: period + half - eps / 2.0, radius: r, period };
        return Ok(vec![FamilyMember { sector, representative_theta: period / 2.0, index: 0, gap: None }]);
    }
    let n = dirs.len();
    let mut members = Vec::with_capacity(n);
    for i in 0..n {
        let d0 = dirs[i];
        let d1 = if i + 1 < n { dirs[i + 1] } else { dirs[0] + period };
        // opening (d1 − d0) + π/k − ε must exceed π/k
        if eps >= d1 - d0 {
            return Err(Error::EpsilonTooLarge(eps));
        }
        let sector = SurfaceSector { lower: d0 - half + eps / 2.0, upper: d1 + half - eps / 2.0, radius: r, period };
        members.push(FamilyMember { sector, representative_theta: 0.5 * (d0 + d1), index: i, gap: Some((d0, d1)) });
    }
    Ok(members)
}

/// Central finite-difference weights (Fornberg) for the `m`-th derivative at
/// 0 on the integer nodes `−k..=k`, fourth order or better.
fn central_weights(m: usize) -> Vec<f64> {
    let k = (m + 1) / 2 + 1;
    let nodes: Vec<f64> = (-(k as i64)..=k as i64).map(|x| x as f64).collect();
    let n = nodes.len();
    // c[j][d]: weight of node j for derivative d
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..n {
        let mut c2 = 1.0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            for d in (0..=m.min(i)).rev() {
                let prev_i = if d > 0 { c[i - 1][d - 1] } else { 0.0 };
                if j == i - 1 {
                    c[i][d] = c1 * (d as f64 * prev_i - nodes[i - 1] * c[i - 1][d]) / c2;
                }
                let prev_j = if d > 0 { c[j][d - 1] } else { 0.0 };
                c[j][d] = (nodes[i] * c[j][d] - d as f64 * prev_j) / c3;
            }
        }
        c1 = c2;
    }
    c.iter().map(|row| row[m]).collect()
}

fn stencil<F: Fn(f64) -> Result<Complex64>>(f: F, m: usize, h: f64) -> Result<Complex64> {
    let w = central_weights(m);
    let k = (w.len() / 2) as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, wj) in w.iter().enumerate() {
        if *wj != 0.0 {
            acc += f((j as i64 - k) as f64 * h)? * *wj;
        }
    }
    Ok(acc / h.powi(m as i32))
}

/// `∂ₜᵖu − ∂_z^q u` by central differences; the t-derivative is taken
/// radially, `∂ₜ = e^{−i arg t} ∂_{|t|}`.
pub fn pde_residual<F>(evaluator: F, eq: Equation, t: RiemannPoint, z: Complex64, h_t: f64, h_z: f64) -> Result<Complex64>
where
    F: Fn(RiemannPoint, Complex64) -> Result<Complex64>,
{
    let p = eq.p() as usize;
    let q = eq.q() as usize;
    let reach = ((p + 1) / 2 + 1) as f64 * h_t;
    if !(h_t > 0.0 && h_z > 0.0) || reach >= t.modulus {
        return Err(Error::StencilOutOfDomain(format!("t-stencil of step {h_t} reaches |t| = {}", t.modulus)));
    }
    let wrap = |e: Error| match e {
        Error::StencilOutOfDomain(_) => e,
        other => Error::StencilOutOfDomain(other.to_string()),
    };
    let dt = stencil(|x| evaluator(t.with_modulus(t.modulus + x), z), p, h_t).map_err(wrap)?;
    let dz = stencil(|x| evaluator(t, z + x), q, h_z).map_err(wrap)?;
    Ok(dt * Complex64::from_polar(1.0, -(p as f64) * t.argument) - dz)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialLimit {
    pub arg: f64,
    pub moduli: Vec<f64>,
    pub deviations: Vec<f64>,
    pub decreasing: bool,
}

/// `|u(t,z) − φ(z)|` along the ray through the middle of `sector`.
pub fn initial_limit<F>(evaluator: F, datum: &CauchyDatum, sector: &SurfaceSector, z: Complex64, t_moduli: &[f64]) -> Result<InitialLimit>
where
    F: Fn(RiemannPoint, Complex64) -> Result<Complex64>,
{
    let phi = datum.eval(z)?;
    let arg = sector.center();
    let mut deviations = Vec::with_capacity(t_moduli.len());
    for &m in t_moduli {
        let t = RiemannPoint::new(m, arg, sector.period)?;
        deviations.push((evaluator(t, z)? - phi).norm());
    }
    let decreasing = deviations.windows(2).all(|w| w[1] < w[0]);
    Ok(InitialLimit { arg, moduli: t_moduli.to_vec(), deviations, decreasing })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub checks: Vec<CheckResult>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Largest relative PDE residual accepted by the actual-solution check.
pub const PDE_TOLERANCE: f64 = 1e-4;

const ABSORPTION_SEED: u64 = 0x5eed_b07e1;

fn check(name: &str, pass: bool, detail: String) -> CheckResult {
    CheckResult { name: name.into(), pass, detail }
}

fn covering(members: &[FamilyMember], period: f64) -> CheckResult {
    // an uncovered point exists iff some lower end is covered by no other sector
    let mut bad = Vec::new();
    for (i, m) in members.iter().enumerate() {
        if m.sector.opening() >= period {
            return check("covering", true, format!("member {i} covers a full period"));
        }
        let covered = members.iter().enumerate().any(|(j, o)| j != i && o.sector.contains_arg(m.sector.lower));
        if !covered {
            bad.push(m.sector.lower);
        }
    }
    let pass = !members.is_empty() && bad.is_empty();
    let detail = if pass { format!("{} sectors cover [0, {period:.6})", members.len()) } else { format!("uncovered near {bad:?}") };
    check("covering", pass, detail)
}

fn opening(members: &[FamilyMember], eq: Equation) -> CheckResult {
    let min = members.iter().map(|m| m.sector.opening()).fold(f64::INFINITY, f64::min);
    check("opening", !members.is_empty() && min > eq.opening(), format!("smallest opening {min:.6} vs required {:.6}", eq.opening()))
}

fn sample_z(datum: &CauchyDatum) -> Complex64 {
    let r = datum.poles().iter().map(|p| p.location().norm()).fold(1.0, f64::min);
    Complex64::from_polar(0.05 * r, 0.7)
}

fn actual_solution(eq: Equation, datum: &CauchyDatum, members: &[FamilyMember], quad: &QuadratureSpec, samples: usize) -> CheckResult {
    let z = sample_z(datum);
    let outcomes: Vec<Result<(f64, bool, f64)>> = members
        .par_iter()
        .map(|m| {
            let eval = |t: RiemannPoint, z: Complex64| m.evaluate(eq, datum, t, z, quad).map(|r| r.value);
            let modulus = (0.05f64).min(0.5 * m.sector.radius);
            let mut worst: f64 = 0.0;
            let half = 0.5 * m.sector.opening();
            for s in 0..samples.max(1) {
                let f = if samples <= 1 { 0.0 } else { -0.7 + 1.4 * s as f64 / (samples - 1) as f64 };
                let t = RiemannPoint::new(modulus, m.sector.center() + f * half, m.sector.period)?;
                let u = eval(t, z)?;
                // steps resolve e^{−c/t}, which oscillates on the scale |t|² near
                // the anti-Stokes edges of the sector
                let h_z = 0.005 * (eq.q() - 1) as f64;
                let res = pde_residual(eval, eq, t, z, 0.005 * modulus, h_z)?;
                worst = worst.max(res.norm() / u.norm().max(f64::MIN_POSITIVE));
            }
            let moduli: Vec<f64> = (0..6).map(|j| 0.1 * 0.5f64.powi(j)).filter(|&x| x < m.sector.radius).collect();
            let lim = initial_limit(eval, datum, &m.sector, z, &moduli)?;
            Ok((worst, lim.decreasing, *lim.deviations.last().unwrap_or(&0.0)))
        })
        .collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        match o {
            Ok((res, dec, last)) => {
                pass &= *res < PDE_TOLERANCE && *dec;
                parts.push(format!("u{}: residual {res:.2e}, limit {} (last {last:.2e})", i + 1, if *dec { "decreasing" } else { "not decreasing" }));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("u{}: {e}", i + 1));
            }
        }
    }
    check("actual_solution", pass, parts.join("; "))
}

fn distinctness(eq: Equation, datum: &CauchyDatum, members: &[FamilyMember], quad: &QuadratureSpec) -> CheckResult {
    let period = eq.period();
    let lines = singular_directions(eq, datum);
    if lines.is_empty() {
        return check("distinctness", members.len() == 1, format!("no Stokes lines, {} member(s)", members.len()));
    }
    let same = |a: f64, b: f64| reduce_angle(a - b, period).abs() < 1e-9;
    let mut pass = true;
    let mut parts = Vec::new();
    for line in &lines {
        let d = line.direction;
        let below = members.iter().find(|m| m.gap.is_some_and(|g| same(g.1, d)));
        let above = members.iter().find(|m| m.gap.is_some_and(|g| same(g.0, d)));
        let (Some(a), Some(b)) = (below, above) else {
            pass = false;
            parts.push(format!("line {d:.6}: no pair of members meets here"));
            continue;
        };
        let outcome = (|| -> Result<(Complex64, f64, Complex64)> {
            let t = RiemannPoint::new(0.1f64.min(0.5 * a.sector.radius), d, period)?;
            let z = Complex64::new(0.0, 0.0);
            let ua = a.evaluate(eq, datum, t, z, quad)?;
            let ub = b.evaluate(eq, datum, t, z, quad)?;
            let jump = jump_function(eq, datum, line, t, z)?;
            Ok((ub.value - ua.value, ua.err_est + ub.err_est, jump))
        })();
        match outcome {
            Ok((diff, err, jump)) => {
                let distinct = diff.norm() > 5.0 * err;
                let matches = (diff - jump).norm() <= 10.0 * err + 1e-8 * jump.norm().max(1.0);
                pass &= distinct && matches;
                parts.push(format!("line {d:.6}: u{} − u{} = {diff:.6e}, jump {jump:.6e}", b.index + 1, a.index + 1));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("line {d:.6}: {e}"));
            }
        }
    }
    check("distinctness", pass, parts.join("; "))
}

fn absorption(eq: Equation, datum: &CauchyDatum, members: &[FamilyMember], quad: &QuadratureSpec) -> CheckResult {
    let period = eq.period();
    let dirs: Vec<f64> = singular_directions(eq, datum).iter().map(|l| l.direction).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(ABSORPTION_SEED);
    let mut draws = Vec::new();
    while draws.len() < 3 {
        let d: f64 = rng.random_range(0.0..period);
        if dirs.iter().all(|&s| reduce_angle(d - s, period).abs() > 0.1) {
            draws.push(d);
        }
    }
    let z = Complex64::new(0.0, 0.0);
    let mut pass = true;
    let mut parts = Vec::new();
    for d in draws {
        let owner = members.iter().find_map(|m| match m.gap {
            Some((g0, g1)) => {
                let lifted = g0 + (d - g0).rem_euclid(period);
                (lifted < g1).then_some((m, lifted, m.representative_theta))
            }
            None => Some((m, d, d + 0.5)),
        });
        let Some((m, d, other)) = owner else {
            pass = false;
            parts.push(format!("d = {d:.6}: no member gap contains it"));
            continue;
        };
        if (other - d).abs() >= eq.opening() - 2.0 * quad.eps_sector {
            pass = false;
            parts.push(format!("d = {d:.6}: no common sector with u{}", m.index + 1));
            continue;
        }
        let outcome = (|| -> Result<(Complex64, f64)> {
            let t = RiemannPoint::new(0.1f64.min(0.5 * m.sector.radius), 0.5 * (d + other), period)?;
            let a = borel_sum(eq, datum, d, t, z, quad)?;
            let b = borel_sum(eq, datum, other, t, z, quad)?;
            Ok((a.value - b.value, a.err_est + b.err_est))
        })();
        match outcome {
            Ok((diff, err)) => {
                let ok = diff.norm() <= 10.0 * err + 1e-10;
                pass &= ok;
                parts.push(format!("d = {d:.6} → u{}: |diff| {:.2e}", m.index + 1, diff.norm()));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("d = {d:.6}: {e}"));
            }
        }
    }
    check("absorption", pass, parts.join("; "))
}

/// Runs the five family checks: covering, opening, actual solution (PDE
/// residual and initial limit at `samples` points per member),
/// distinctness across every Stokes line, absorption of three random sums.
pub fn verify_family(eq: Equation, datum: &CauchyDatum, members: &[FamilyMember], quad: &QuadratureSpec, samples: usize) -> FamilyReport {
    let period = eq.period();
    let ((cover, open), (actual, (distinct, absorb))) = rayon::join(
        || (covering(members, period), opening(members, eq)),
        || {
            rayon::join(
                || actual_solution(eq, datum, members, quad, samples),
                || rayon::join(|| distinctness(eq, datum, members, quad), || absorption(eq, datum, members, quad)),
            )
        },
    );
    FamilyReport { checks: vec![cover, open, actual, distinct, absorb] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pole(z0: Complex64) -> CauchyDatum {
        CauchyDatum::simple_pole(z0, c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn fornberg_weights() {
        let w = central_weights(1);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        assert!(w.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-14), "{w:?}");
        let w = central_weights(2);
        let expect = [-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0];
        assert!(w.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-14), "{w:?}");
        let w = central_weights(3);
        let expect = [1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0];
        assert!(w.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-13), "{w:?}");
    }

    #[test]
    fn residual_examples() {
        let heat = Equation::heat();
        let t = RiemannPoint::on(heat, 0.25, 0.0).unwrap();
        let poly = |t: RiemannPoint, z: Complex64| Ok(z * z + 2.0 * t.to_complex());
        assert!(pde_residual(poly, heat, t, c(0.3, 0.1), 0.05, 0.1).unwrap().norm() < 1e-10);
        let exp = |t: RiemannPoint, z: Complex64| Ok((z + t.to_complex()).exp());
        assert!(pde_residual(exp, heat, t, c(0.0, 0.0), 1e-3, 1e-3).unwrap().norm() < 1e-6);
        let cubic = Equation::new(1, 3).unwrap();
        let t = RiemannPoint::on(cubic, 0.25, 0.0).unwrap();
        assert!(pde_residual(exp, cubic, t, c(0.0, 0.0), 1e-3, 1e-2).unwrap().norm() < 1e-5);
        assert!(matches!(pde_residual(exp, heat, t, c(0.0, 0.0), 0.2, 1e-3), Err(Error::StencilOutOfDomain(_))));
    }

    #[test]
    fn family_examples() {
        let heat = Equation::heat();
        let fam = maximal_family(heat, &pole(c(1.0, 0.0)), 0.1, 1.0).unwrap();
        assert_eq!(fam.len(), 2);
        assert!((fam[0].sector.lower - (-PI / 2.0 + 0.05)).abs() < 1e-12);
        assert!((fam[0].sector.upper - (2.5 * PI - 0.05)).abs() < 1e-12);
        assert!((fam[0].sector.opening() - (3.0 * PI - 0.1)).abs() < 1e-12);
        assert!((fam[0].sector.period - 4.0 * PI).abs() < 1e-12);

        let cubic = Equation::new(1, 3).unwrap();
        let fam = maximal_family(cubic, &pole(c(1.0, 0.0)), 0.1, 1.0).unwrap();
        assert_eq!(fam.len(), 3);
        assert!(fam.iter().all(|m| (m.sector.opening() - (4.0 * PI - 0.1)).abs() < 1e-12));

        let two = pole(c(1.0, 0.0)).plus(&pole(c(0.0, 1.0)));
        assert_eq!(maximal_family(heat, &two, 0.1, 1.0).unwrap().len(), 4);
        assert!(matches!(maximal_family(heat, &two, 3.5, 1.0), Err(Error::EpsilonTooLarge(_))));
        assert_eq!(maximal_family(heat, &CauchyDatum::monomial(2), 0.1, 1.0).unwrap().len(), 1);
    }

    #[test]
    fn covering_is_exact() {
        let heat = Equation::heat();
        let fam = maximal_family(heat, &pole(c(1.0, 0.0)), 0.1, 1.0).unwrap();
        assert!(covering(&fam, heat.period()).pass);
        assert!(!covering(&fam[..1], heat.period()).pass);
    }

    #[test]
    fn members_agree_with_fixed_directions() {
        let heat = Equation::heat();
        let phi = pole(c(1.0, 0.0));
        let fam = maximal_family(heat, &phi, 0.1, 1.0).unwrap();
        let quad = QuadratureSpec::default();
        let t = RiemannPoint::on(heat, 0.1, 1.0).unwrap();
        let a = fam[0].evaluate(heat, &phi, t, c(0.0, 0.0), &quad).unwrap();
        let b = borel_sum(heat, &phi, 1.5, t, c(0.0, 0.0), &quad).unwrap();
        assert!((a.value - b.value).norm() < 1e-10);
    }

    #[test]
    fn initial_limit_of_polynomial_datum() {
        let heat = Equation::heat();
        let phi = CauchyDatum::monomial(2);
        let sector = SurfaceSector { lower: -1.0, upper: 1.6, radius: 1.0, period: heat.period() };
        let eval = |t: RiemannPoint, z: Complex64| Ok(z * z + 2.0 * t.to_complex());
        let lim = initial_limit(eval, &phi, &sector, c(0.5, 0.0), &[0.1, 0.05, 0.025]).unwrap();
        assert!(lim.decreasing);
        for (m, d) in lim.moduli.iter().zip(&lim.deviations) {
            assert!((d - 2.0 * m).abs() < 1e-15);
        }
    }

    #[test]
    fn heat_family_verifies_and_merged_family_does_not() {
        let heat = Equation::heat();
        let phi = pole(c(1.0, 0.0));
        let quad = QuadratureSpec::default();
        let fam = maximal_family(heat, &phi, 0.1, 1.0).unwrap();
        let report = verify_family(heat, &phi, &fam, &quad, 3);
        assert!(report.passed(), "{report:#?}");

        let merged = vec![FamilyMember {
            sector: SurfaceSector { lower: -PI / 2.0, upper: 4.0 * PI + PI / 2.0, radius: 1.0, period: heat.period() },
            representative_theta: 2.0 * PI,
            index: 0,
            gap: Some((0.0, 4.0 * PI)),
        }];
        let report = verify_family(heat, &phi, &merged, &quad, 1);
        assert!(report.check("covering").unwrap().pass);
        assert!(!report.check("distinctness").unwrap().pass);
    }

    #[test]
    fn entire_family_verifies() {
        let heat = Equation::heat();
        let phi = CauchyDatum::exponential(c(1.0, 0.0));
        let fam = maximal_family(heat, &phi, 0.1, 1.0).unwrap();
        let report = verify_family(heat, &phi, &fam, &QuadratureSpec::default(), 2);
        assert!(report.passed(), "{report:#?}");
    }
}
