//! Directional Borel sums `u^θ(t,z)`.
//!
//! After the substitution `s̃ = t^{p/q} e^{iγ} r` with `γ = (p/q)(θ − arg t)`,
//! the sum along θ becomes
//!
//! ```text
//! u^θ(t,z) = (e^{iγ}/q) ∫₀^∞ Σ_j φ(z + ω^j ρ r) C_{q/p}(r e^{iγ}) dr,
//! ```
//!
//! with `ω = e^{2πi/q}` and `ρ = |t|^{p/q} e^{iθp/q}`, so the kernel argument
//! stays O(1) whatever |t| is. For the heat equation the kernel is a Gaussian
//! and the fast path integrates `e^{−r² e^{2iγ}}` directly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datum::CauchyDatum;
use crate::error::{Error, Result};
use crate::formal::Equation;
use crate::quad;
use crate::special_fn::{asymptotic_decay_rate, Kernel, KernelDecay};

/// Reduces an angle into `(−period/2, period/2]`.
pub fn reduce_angle(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r > period / 2.0 {
        r - period
    } else {
        r
    }
}

/// Reduces an angle into `[0, period)`.
pub fn wrap_angle(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

/// A point of the Riemann surface of `t^{p/q}`: modulus and an argument on
/// the universal cover, identified modulo `period`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RiemannPoint {
    pub modulus: f64,
    pub argument: f64,
    pub period: f64,
}

impl PartialEq for RiemannPoint {
    fn eq(&self, other: &Self) -> bool {
        if self.modulus != other.modulus || self.period != other.period {
            return false;
        }
        let k = (self.argument - other.argument) / self.period;
        (k - k.round()).abs() < 1e-12
    }
}

impl RiemannPoint {
    pub fn new(modulus: f64, argument: f64, period: f64) -> Result<Self> {
        if !(modulus > 0.0) || !modulus.is_finite() {
            return Err(Error::InvalidInput(format!("|t| must be positive, got {modulus}")));
        }
        if !argument.is_finite() || !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidInput("arg t and the period must be finite, period > 0".into()));
        }
        Ok(Self { modulus, argument, period })
    }

    /// A point on the surface belonging to `eq`.
    pub fn on(eq: Equation, modulus: f64, argument: f64) -> Result<Self> {
        Self::new(modulus, argument, eq.period())
    }

    pub fn with_argument(self, argument: f64) -> Self {
        Self { argument, ..self }
    }

    pub fn with_modulus(self, modulus: f64) -> Self {
        Self { modulus, ..self }
    }

    /// The projection `t ∈ ℂ`.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.argument)
    }

    /// `t^{p/q}` on the continuous branch.
    pub fn branch_power(&self, p: u32, q: u32) -> Complex64 {
        let e = p as f64 / q as f64;
        Complex64::from_polar(self.modulus.powf(e), self.argument * e)
    }

    /// `√t` on the continuous branch.
    pub fn sqrt(&self) -> Complex64 {
        Complex64::from_polar(self.modulus.sqrt(), self.argument / 2.0)
    }
}

/// Integration settings shared by all sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Absolute tolerance of the ray integral.
    pub tol: f64,
    /// Budget of integrand evaluations.
    pub max_nodes: usize,
    /// Smallest allowed distance between the ray and a pole image.
    pub ray_margin: f64,
    /// Sector shrinkage ε.
    pub eps_sector: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { tol: 1e-12, max_nodes: 400_000, ray_margin: 1e-4, eps_sector: 1e-3 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.ray_margin > 0.0) || !(self.eps_sector > 0.0 && self.eps_sector < PI) {
            return Err(Error::InvalidInput(format!("invalid quadrature spec {self:?}")));
        }
        if self.max_nodes < 15 {
            return Err(Error::InvalidInput("max_nodes must be at least 15".into()));
        }
        Ok(())
    }
}

/// Where a sum is valid: `S(direction, opening, radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorRecord {
    pub direction: f64,
    pub opening: f64,
    /// `None` when no finite radius is needed (entire parts of order ≤ 1
    /// are dominated by the kernel decay for every |t|).
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BorelSumResult {
    pub value: Complex64,
    pub err_est: f64,
    pub sector: SectorRecord,
}

/// `v(t,z) = (1/q) Σ_j φ(z + ω^j t^{p/q})`.
pub fn borel_transform(eq: Equation, datum: &CauchyDatum, t: RiemannPoint, z: Complex64) -> Result<Complex64> {
    let q = eq.q();
    let tp = t.branch_power(eq.p(), q);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..q {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64);
        acc += datum.eval(z + w * tp)?;
    }
    Ok(acc / q as f64)
}

/// Ray geometry after the sector, direction and margin checks.
struct Ray {
    /// `γ`, direction of the kernel argument.
    gamma: f64,
    /// `ρ` (general) or `2√|t| e^{iθ/2}` (heat): the factor in `z + ω^j ρ r`.
    rho: Complex64,
    /// Pole images `r` in the integration variable.
    images: Vec<Complex64>,
}

/// Images `ω^{−j}(z_l − z)` of the poles in the s̃-plane, with their
/// singular directions `(q/p) arg` on the surface.
pub(crate) fn pole_images(eq: Equation, datum: &CauchyDatum, z: Complex64) -> Vec<(usize, u32, Complex64, f64)> {
    let (p, q) = (eq.p() as f64, eq.q());
    let mut out = Vec::new();
    for (l, pole) in datum.poles().iter().enumerate() {
        for j in 0..q {
            let s = (pole.location() - z) * Complex64::from_polar(1.0, -2.0 * PI * j as f64 / q as f64);
            let dir = wrap_angle(q as f64 / p * s.arg(), eq.period());
            out.push((l, j, s, dir));
        }
    }
    out
}

fn setup_ray(eq: Equation, datum: &CauchyDatum, theta: f64, t: RiemannPoint, z: Complex64, quad: &QuadratureSpec) -> Result<Ray> {
    quad.validate()?;
    let period = eq.period();
    if (t.period - period).abs() > 1e-12 * period {
        return Err(Error::InvalidInput(format!("RiemannPoint period {} does not match 2πq/p = {period}", t.period)));
    }
    let d = reduce_angle(t.argument - theta, period);
    let half = (eq.opening() - quad.eps_sector) / 2.0;
    if d.abs() >= half {
        return Err(Error::OutsideSector { arg: t.argument, theta, half_opening: half });
    }
    let images = pole_images(eq, datum, z);
    for &(_, _, _, dir) in &images {
        if reduce_angle(theta - dir, period).abs() <= quad.eps_sector {
            return Err(Error::SingularDirection { theta, direction: dir, eps: quad.eps_sector });
        }
    }
    let (p, q) = (eq.p() as f64, eq.q() as f64);
    let ray_dir = Complex64::from_polar(1.0, theta * p / q);
    for &(_, _, s, _) in &images {
        let w = s / ray_dir;
        let dist = if w.re > 0.0 { w.im.abs() } else { w.norm() };
        if dist <= quad.ray_margin {
            return Err(Error::RayHitsPole { distance: dist, margin: quad.ray_margin });
        }
    }
    let gamma = -d * p / q;
    let scale = t.modulus.powf(p / q);
    let rho = ray_dir * scale;
    let images = images.iter().map(|&(_, _, s, _)| s / rho).collect();
    Ok(Ray { gamma, rho, images })
}

/// Constant bound on the pole part along the ray, from the smallest
/// distance between the ray and a pole image.
fn pole_part_bound(datum: &CauchyDatum, images: &[Complex64], scale: f64) -> f64 {
    let dist = images
        .iter()
        .map(|w| if w.re > 0.0 { w.im.abs() } else { w.norm() } * scale)
        .fold(f64::INFINITY, f64::min);
    datum
        .poles()
        .iter()
        .map(|p| p.coefficients().iter().enumerate().map(|(i, a)| a.norm() / dist.powi(i as i32 + 1)).sum::<f64>())
        .sum()
}

/// Finds a cut-off L with `∫_L^∞ bound < budget`, plus the tail estimate.
fn choose_cutoff(
    datum: &CauchyDatum,
    images: &[Complex64],
    z: Complex64,
    step: f64,
    decay: &KernelDecay,
    prefactor: f64,
    budget: f64,
) -> Result<(f64, f64)> {
    let poles = pole_part_bound(datum, images, step);
    let entire = datum.entire_part();
    let lam = entire.terms.iter().map(|t| t.lambda.norm()).fold(0.0, f64::max);
    let m_max = entire.terms.iter().map(|t| t.m).max().unwrap_or(0) as f64;
    let beyond = images.iter().filter(|w| w.re > 0.0).map(|w| w.re).fold(0.0, f64::max);
    let mut l = (1.0 / decay.a2).powf(1.0 / decay.beta).max(beyond + 1.0).max(1.0);
    for _ in 0..64 {
        let x = z.norm() + step * l;
        let bound = prefactor * (poles + entire.abs_bound(x)) * decay.bound(l);
        let kernel_rate = decay.a2 * decay.beta * l.powf(decay.beta - 1.0);
        let growth_rate = lam * step + if x > 0.0 { m_max * step / x } else { 0.0 };
        let rate = kernel_rate - growth_rate;
        if !bound.is_finite() {
            return Err(Error::TailBoundFails(format!("bound is not finite at L = {l}")));
        }
        if rate >= 0.5 * kernel_rate {
            let tail = bound / rate;
            if tail < budget {
                return Ok((l, tail));
            }
        }
        l *= 1.25;
        if l > 1e4 {
            break;
        }
    }
    Err(Error::TailBoundFails(format!("no cut-off below 1e4 meets the tail budget {budget:e}")))
}

fn breakpoints(images: &[Complex64], l: f64) -> Vec<f64> {
    let mut pts = vec![0.0, l];
    for w in images {
        if w.re > 0.0 && w.re < l {
            pts.push(w.re);
            for k in [1.0, 4.0, 16.0] {
                for x in [w.re - k * w.im.abs(), w.re + k * w.im.abs()] {
                    if x > 0.0 && x < l {
                        pts.push(x);
                    }
                }
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * l);
    pts
}

fn record(eq: Equation, theta: f64, quad: &QuadratureSpec) -> SectorRecord {
    SectorRecord { direction: theta, opening: eq.opening() - quad.eps_sector, radius: None }
}

/// Heat-equation sum
/// `u^θ(t,z) = (1/√(4πt)) ∫_{e^{iθ/2}ℝ₊} (φ(z+s) + φ(z−s)) e^{−s²/4t} ds`.
pub fn heat_sum(datum: &CauchyDatum, theta: f64, t: RiemannPoint, z: Complex64, quad: &QuadratureSpec) -> Result<BorelSumResult> {
    let eq = Equation::heat();
    let ray = setup_ray(eq, datum, theta, t, z, quad)?;
    // s = 2√|t| e^{iθ/2} r turns the Gaussian into e^{−r² e^{2iγ}}
    let rho = 2.0 * ray.rho;
    let images: Vec<Complex64> = ray.images.iter().map(|w| w / 2.0).collect();
    let decay = KernelDecay { a1: 1.0, a2: (2.0 * ray.gamma).cos(), beta: 2.0 };
    let prefactor = 2.0 / PI.sqrt();
    let (l, tail) = choose_cutoff(datum, &images, z, rho.norm(), &decay, prefactor, quad.tol / 4.0)?;
    let e2 = Complex64::from_polar(1.0, 2.0 * ray.gamma);
    let f = |r: f64| {
        let s = rho * r;
        (datum.eval_unchecked(z + s) + datum.eval_unchecked(z - s)) * (-(r * r) * e2).exp()
    };
    let res = quad::integrate(f, &breakpoints(&images, l), quad.tol / 2.0, quad.max_nodes);
    let value = Complex64::from_polar(1.0 / PI.sqrt(), ray.gamma) * res.value;
    Ok(BorelSumResult { value, err_est: res.err_est / PI.sqrt() + tail, sector: record(eq, theta, quad) })
}

/// Decay constants for `|C(r e^{iγ})| ≤ A₁ e^{−A₂ r^β}`: A₂ is 95% of the
/// asymptotic rate, A₁ the smallest constant that holds on sampled radii.
pub(crate) fn kernel_decay_bound(kernel: &Kernel, gamma: f64) -> Result<KernelDecay> {
    let params = kernel.params();
    let beta = params.beta_f64();
    if params.alpha == num_rational::Rational64::from_integer(2) {
        let g = KernelDecay::gaussian(gamma);
        if g.a2 > 0.0 {
            return Ok(g);
        }
    }
    let a2 = 0.95 * asymptotic_decay_rate(params, gamma);
    if !(a2 > 0.0) {
        return Err(Error::TailBoundFails(format!("kernel does not decay along arg = {gamma}")));
    }
    let r_max = (50.0 / a2).powf(1.0 / beta);
    let rot = Complex64::from_polar(1.0, gamma);
    let mut a1: f64 = 0.0;
    for k in 0..=80 {
        let r = r_max * k as f64 / 80.0;
        a1 = a1.max(kernel.value(rot * r)?.norm() * (a2 * r.powf(beta)).exp());
    }
    Ok(KernelDecay { a1: 1.1 * a1, a2, beta })
}

/// General sum along θ with the kernel `C_{q/p}`.
pub fn general_sum(
    eq: Equation,
    datum: &CauchyDatum,
    theta: f64,
    t: RiemannPoint,
    z: Complex64,
    quad: &QuadratureSpec,
) -> Result<BorelSumResult> {
    let kernel = Kernel::new(&eq.kernel_params(), 0);
    general_sum_with(eq, datum, theta, t, z, quad, &kernel)
}

pub(crate) fn general_sum_with(
    eq: Equation,
    datum: &CauchyDatum,
    theta: f64,
    t: RiemannPoint,
    z: Complex64,
    quad: &QuadratureSpec,
    kernel: &Kernel,
) -> Result<BorelSumResult> {
    let ray = setup_ray(eq, datum, theta, t, z, quad)?;
    let q = eq.q();
    let decay = kernel_decay_bound(kernel, ray.gamma)?;
    let (l, tail) = choose_cutoff(datum, &ray.images, z, ray.rho.norm(), &decay, 1.0, quad.tol / 4.0)?;
    let roots: Vec<Complex64> = (0..q).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64)).collect();
    let rot = Complex64::from_polar(1.0, ray.gamma);
    let mut failure = None;
    let f = |r: f64| {
        let s = ray.rho * r;
        let sum: Complex64 = roots.iter().map(|w| datum.eval_unchecked(z + w * s)).sum();
        match kernel.value(rot * r) {
            Ok(k) => sum * k,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let res = quad::integrate(f, &breakpoints(&ray.images, l), quad.tol / 2.0, quad.max_nodes);
    if let Some(e) = failure {
        return Err(e);
    }
    let value = rot * res.value / q as f64;
    Ok(BorelSumResult { value, err_est: res.err_est / q as f64 + tail, sector: record(eq, theta, quad) })
}

/// Heat fast path for `p = 1, q = 2`, general path otherwise.
pub fn borel_sum(
    eq: Equation,
    datum: &CauchyDatum,
    theta: f64,
    t: RiemannPoint,
    z: Complex64,
    quad: &QuadratureSpec,
) -> Result<BorelSumResult> {
    if eq.is_heat() {
        heat_sum(datum, theta, t, z, quad)
    } else {
        general_sum(eq, datum, theta, t, z, quad)
    }
}

/// Sums on the grid `t_list × z_list` in parallel; each cell keeps its own
/// result or error.
pub fn sum_on_grid(
    eq: Equation,
    datum: &CauchyDatum,
    theta: f64,
    t_list: &[RiemannPoint],
    z_list: &[Complex64],
    quad: &QuadratureSpec,
) -> Vec<Vec<Result<BorelSumResult>>> {
    let kernel = (!eq.is_heat()).then(|| Kernel::new(&eq.kernel_params(), 0));
    t_list
        .par_iter()
        .map(|&t| {
            z_list
                .par_iter()
                .map(|&z| match &kernel {
                    None => heat_sum(datum, theta, t, z, quad),
                    Some(k) => general_sum_with(eq, datum, theta, t, z, quad, k),
                })
                .collect()
        })
        .collect()
}
