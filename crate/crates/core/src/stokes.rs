//! Stokes and anti-Stokes lines of a datum and the jumps of the directional
//! sums across Stokes lines.
//!
//! A pole `z₀` produces the q directions `δ_l = (q/p) arg z₀ + 2(l−1)π/p`. On
//! `δ_l` the ray of the Borel integral meets the image `e^{2(l−1)πi/q} z₀` of
//! the pole, and the lateral sums differ by
//!
//! ```text
//! u^{δ⁺} − u^{δ⁻} = −2πi Σ_k a_k w^k C^{(k−1)}(w(z₀−z)/T) / ((k−1)! q T^k),
//! ```
//!
//! with `w = e^{2(l−1)πi/q}` and `T = t^{p/q}` on the continuous branch.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::borel::{self, reduce_angle, wrap_angle, QuadratureSpec, RiemannPoint};
use crate::datum::CauchyDatum;
use crate::error::{Error, Result};
use crate::formal::Equation;
use crate::special_fn::Kernel;

/// Directions closer than this are one line.
pub const LINE_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    Stokes,
    AntiStokes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesLine {
    /// Direction in `[0, 2πq/p)`.
    pub direction: f64,
    /// `(pole index, sheet index l)` with `l` in `1..=q`.
    pub contributing_poles: Vec<(usize, u32)>,
    pub kind: LineKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpRoute {
    ClosedForm,
    Residue,
    QuadratureDiff,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpResult {
    pub value: Complex64,
    pub err_est: f64,
    pub route: JumpRoute,
    pub line: StokesLine,
    pub t: RiemannPoint,
    pub z: Complex64,
}

fn sheet_rotation(q: u32, l: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (l - 1) as f64 / q as f64)
}

/// Merges sorted `(direction, contributors)` pairs closer than the tolerance,
/// including across the wrap at the period.
fn merge_lines(mut raw: Vec<(f64, Vec<(usize, u32)>)>, period: f64, kind: LineKind) -> Vec<StokesLine> {
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<StokesLine> = Vec::new();
    for (d, c) in raw {
        match out.last_mut() {
            Some(last) if d - last.direction <= LINE_MERGE_TOL => last.contributing_poles.extend(c),
            _ => out.push(StokesLine { direction: d, contributing_poles: c, kind }),
        }
    }
    if out.len() > 1 {
        let last = out.last().unwrap();
        if out[0].direction + period - last.direction <= LINE_MERGE_TOL {
            let tail = out.pop().unwrap();
            out[0].contributing_poles.extend(tail.contributing_poles);
        }
    }
    for line in &mut out {
        line.contributing_poles.sort_unstable();
        line.contributing_poles.dedup();
    }
    out
}

/// Stokes lines `δ_l` of every pole, sorted in `[0, 2πq/p)`.
pub fn singular_directions(eq: Equation, datum: &CauchyDatum) -> Vec<StokesLine> {
    let (p, q) = (eq.p() as f64, eq.q());
    let period = eq.period();
    let mut raw = Vec::new();
    for (i, pole) in datum.poles().iter().enumerate() {
        let base = q as f64 / p * pole.location().arg();
        for l in 1..=q {
            raw.push((wrap_angle(base + 2.0 * PI * (l - 1) as f64 / p, period), vec![(i, l)]));
        }
    }
    merge_lines(raw, period, LineKind::Stokes)
}

/// The lines `δ ± π(q−p)/(2p)`, sorted and deduplicated.
pub fn anti_stokes_directions(eq: Equation, datum: &CauchyDatum) -> Vec<StokesLine> {
    let period = eq.period();
    let shift = eq.opening() / 2.0;
    let mut raw = Vec::new();
    for line in singular_directions(eq, datum) {
        for sign in [-1.0, 1.0] {
            raw.push((wrap_angle(line.direction + sign * shift, period), line.contributing_poles.clone()));
        }
    }
    merge_lines(raw, period, LineKind::AntiStokes)
}

/// Direction in which the sums at `z` are actually singular because of the
/// contribution `(pole, l)`, lifted next to `near`.
pub(crate) fn shifted_direction(eq: Equation, datum: &CauchyDatum, pole: usize, l: u32, z: Complex64, near: f64) -> f64 {
    let s = sheet_rotation(eq.q(), l) * (datum.poles()[pole].location() - z);
    let d = eq.q() as f64 / eq.p() as f64 * s.arg();
    near + reduce_angle(d - near, eq.period())
}

/// `h_m(s) = d^m/ds^m e^{−s²/4t}` via `h_{m+1} = −(s/2t) h_m + h_m'`.
fn gaussian_derivative(m: usize, s: Complex64, t: Complex64) -> Complex64 {
    // h_m = P_m(s) e^{−s²/4t}, P_m held by its coefficients in s
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    let c = -1.0 / (2.0 * t);
    for _ in 0..m {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, a) in poly.iter().enumerate() {
            next[k + 1] += c * a;
            if k > 0 {
                next[k - 1] += *a * k as f64;
            }
        }
        poly = next;
    }
    let p = poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * s + a);
    p * (-(s * s) / (4.0 * t)).exp()
}

/// `d^m/ds^m C(s/T)` at `s0`, scaled so that the heat and general paths
/// share one residue formula. Returns the value and an error estimate.
trait KernelDerivatives {
    fn derivative(&self, m: usize, s0: Complex64, tp: Complex64) -> Result<(Complex64, f64)>;
}

struct Exact<'a>(&'a Kernel, bool);

impl KernelDerivatives for Exact<'_> {
    fn derivative(&self, m: usize, s0: Complex64, tp: Complex64) -> Result<(Complex64, f64)> {
        if self.1 {
            let v = gaussian_derivative(m, s0, tp * tp) / PI.sqrt();
            return Ok((v, 0.0));
        }
        let k = Kernel::new(self.0.params(), m);
        Ok((k.value(s0 / tp)? / tp.powi(m as i32), 0.0))
    }
}

/// Richardson-extrapolated central differences of the kernel (general
/// equations) or the exact Gaussian recurrence (heat).
struct Numeric<'a>(&'a Kernel, bool);

const RICHARDSON_STEP: f64 = 0.1;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl KernelDerivatives for Numeric<'_> {
    fn derivative(&self, m: usize, s0: Complex64, tp: Complex64) -> Result<(Complex64, f64)> {
        if self.1 || m == 0 {
            return Exact(self.0, self.1).derivative(m, s0, tp);
        }
        let tau = s0 / tp;
        let diff = |h: f64| -> Result<Complex64> {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=m {
                let x = tau + (m as f64 / 2.0 - i as f64) * h;
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                acc += self.0.value(x)? * sign * binomial(m, i);
            }
            Ok(acc / h.powi(m as i32))
        };
        let mut table: Vec<Complex64> = Vec::new();
        for level in 0..4 {
            let mut row = vec![diff(RICHARDSON_STEP / 2f64.powi(level))?];
            for (k, prev) in table.iter().enumerate() {
                let f = 4f64.powi(k as i32 + 1);
                let better = (row[k] * f - prev) / (f - 1.0);
                row.push(better);
            }
            table = row;
        }
        let n = table.len();
        let value = table[n - 1];
        let err = (table[n - 1] - table[n - 2]).norm();
        let scale = tp.powi(m as i32);
        Ok((value / scale, err / scale.norm()))
    }
}

/// Contribution of `(pole, l)` to the jump, `−2πi` times the residue.
fn contribution(
    eq: Equation,
    datum: &CauchyDatum,
    pole: usize,
    l: u32,
    t: RiemannPoint,
    z: Complex64,
    deriv: &dyn KernelDerivatives,
) -> Result<(Complex64, f64)> {
    let q = eq.q();
    let tp = t.branch_power(eq.p(), q);
    let w = sheet_rotation(q, l);
    let term = &datum.poles()[pole];
    let s0 = w * (term.location() - z);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut fact = 1.0;
    for (i, a) in term.coefficients().iter().enumerate() {
        if i > 0 {
            fact *= i as f64;
        }
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (d, e) = deriv.derivative(i, s0, tp)?;
        let coef = a * w.powi(i as i32 + 1) / (fact * q as f64 * tp);
        acc += coef * d;
        err += coef.norm() * e;
    }
    let factor = Complex64::new(0.0, -2.0 * PI);
    Ok((factor * acc, 2.0 * PI * err))
}

fn kernel_for(eq: Equation) -> Kernel {
    Kernel::new(&eq.kernel_params(), 0)
}

fn check_disc(datum: &CauchyDatum, line: &StokesLine, z: Complex64) -> Result<()> {
    let radius = 0.5
        * line
            .contributing_poles
            .iter()
            .map(|&(i, _)| datum.poles()[i].location().norm())
            .fold(f64::INFINITY, f64::min);
    if z.norm() >= radius {
        return Err(Error::OutsideDisc { z, radius });
    }
    Ok(())
}

fn check_line(datum: &CauchyDatum, line: &StokesLine) -> Result<()> {
    if line.kind != LineKind::Stokes {
        return Err(Error::InvalidInput("jumps are taken across Stokes lines, not anti-Stokes lines".into()));
    }
    if line.contributing_poles.is_empty() {
        return Err(Error::NoStokesLines);
    }
    if line.contributing_poles.iter().any(|&(i, _)| i >= datum.poles().len()) {
        return Err(Error::InvalidInput("line refers to a pole the datum does not have".into()));
    }
    Ok(())
}

/// The closed-form jump as an analytic function of t on the whole surface.
/// Only the disc guard on z applies; [`jump_closed_form`] adds the sector
/// guard.
pub fn jump_function(eq: Equation, datum: &CauchyDatum, line: &StokesLine, t: RiemannPoint, z: Complex64) -> Result<Complex64> {
    check_line(datum, line)?;
    check_disc(datum, line, z)?;
    let kernel = kernel_for(eq);
    let exact = Exact(&kernel, eq.is_heat());
    let mut acc = Complex64::new(0.0, 0.0);
    for &(i, l) in &line.contributing_poles {
        acc += contribution(eq, datum, i, l, t, z, &exact)?.0;
    }
    Ok(acc)
}

/// `u^{δ⁺} − u^{δ⁻}` from the jump formulas, for t in the sector of the line.
pub fn jump_closed_form(eq: Equation, datum: &CauchyDatum, line: &StokesLine, t: RiemannPoint, z: Complex64) -> Result<JumpResult> {
    let half = (eq.opening() - QuadratureSpec::default().eps_sector) / 2.0;
    if reduce_angle(t.argument - line.direction, eq.period()).abs() >= half {
        return Err(Error::OutsideJumpSector { arg: t.argument, direction: line.direction });
    }
    let value = jump_function(eq, datum, line, t, z)?;
    Ok(JumpResult { value, err_est: 4.0 * f64::EPSILON * value.norm(), route: JumpRoute::ClosedForm, line: line.clone(), t, z })
}

/// `u^{θ₂} − u^{θ₁}` as −2πi times the residues of the Borel integrand at
/// the pole images between the two rays.
pub fn residue_jump(eq: Equation, datum: &CauchyDatum, theta1: f64, theta2: f64, t: RiemannPoint, z: Complex64) -> Result<JumpResult> {
    let width = theta2 - theta1;
    let gap = 2.0 * PI / eq.p() as f64;
    if !(width > 0.0 && width < gap) {
        return Err(Error::InvalidInput(format!("need 0 < θ₂ − θ₁ < 2π/p, got {width}")));
    }
    let eps = QuadratureSpec::default().eps_sector;
    let period = eq.period();
    let mut enclosed = Vec::new();
    for (i, pole) in datum.poles().iter().enumerate() {
        if (pole.location() - z).norm() <= CauchyDatum::pole_guard(pole.location()) {
            return Err(Error::AtPole { z, pole: pole.location() });
        }
        for l in 1..=eq.q() {
            let s = sheet_rotation(eq.q(), l) * (pole.location() - z);
            let dir = eq.q() as f64 / eq.p() as f64 * s.arg();
            let a = (dir - theta1).rem_euclid(period);
            if a < eps || (a - width).abs() < eps || period - a < eps {
                return Err(Error::PoleOnBoundaryRay { point: s });
            }
            if a < width {
                enclosed.push((i, l, theta1 + a));
            }
        }
    }
    let kernel = kernel_for(eq);
    let numeric = Numeric(&kernel, eq.is_heat());
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for &(i, l, _) in &enclosed {
        let (v, e) = contribution(eq, datum, i, l, t, z, &numeric)?;
        value += v;
        err += e;
    }
    let direction = enclosed.first().map_or(0.5 * (theta1 + theta2), |e| e.2);
    let line = StokesLine {
        direction: wrap_angle(direction, period),
        contributing_poles: enclosed.iter().map(|&(i, l, _)| (i, l)).collect(),
        kind: LineKind::Stokes,
    };
    Ok(JumpResult { value, err_est: err + 4.0 * f64::EPSILON * value.norm(), route: JumpRoute::Residue, line, t, z })
}

/// Difference of the two lateral sums at `θ = d ± 2 eps_sector`, where `d`
/// is the direction of the line as seen from z.
pub fn jump_quadrature(
    eq: Equation,
    datum: &CauchyDatum,
    line: &StokesLine,
    t: RiemannPoint,
    z: Complex64,
    quad: &QuadratureSpec,
) -> Result<JumpResult> {
    let near = line.direction;
    let dirs: Vec<f64> = line
        .contributing_poles
        .iter()
        .filter(|&&(i, _)| i < datum.poles().len())
        .map(|&(i, l)| shifted_direction(eq, datum, i, l, z, near))
        .collect();
    let d = if dirs.is_empty() { near } else { dirs.iter().sum::<f64>() / dirs.len() as f64 };
    // stay on the sheet of t
    let d = t.argument + reduce_angle(d - t.argument, eq.period());
    let off = 2.0 * quad.eps_sector;
    let (plus, minus) = if eq.is_heat() {
        (borel::heat_sum(datum, d + off, t, z, quad)?, borel::heat_sum(datum, d - off, t, z, quad)?)
    } else {
        let kernel = kernel_for(eq);
        (
            borel::general_sum_with(eq, datum, d + off, t, z, quad, &kernel)?,
            borel::general_sum_with(eq, datum, d - off, t, z, quad, &kernel)?,
        )
    };
    Ok(JumpResult {
        value: plus.value - minus.value,
        err_est: plus.err_est + minus.err_est,
        route: JumpRoute::QuadratureDiff,
        line: line.clone(),
        t,
        z,
    })
}
