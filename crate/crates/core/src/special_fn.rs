//! Complex Gamma function and the summation kernel
//! `C_α(τ) = Σ (−τ)ⁿ / (n! Γ(1 − (n+1)/α))`.
//!
//! Two routes evaluate the kernel. The power series is exact in exact
//! arithmetic but in floating point its error is about `eps · Σ|terms|`,
//! which grows like `exp(c|τ|^β)` while the value itself decays. Once that
//! rounding noise would exceed the requested tolerance, and τ lies where the
//! Hankel integral
//!
//! ```text
//! C_α(τ) = (1/2πi) ∫_Ha exp(σ − τ σ^{1/α}) σ^{1/α − 1} dσ
//! ```
//!
//! can be taken through its saddle point, the integral is summed by the
//! trapezoid rule instead (geometric convergence in the step).

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k(2k−1)) for k = 1..11
const STIRLING: [f64; 11] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    5.0 / 66.0 / 90.0,
    -691.0 / 2730.0 / 132.0,
    7.0 / 6.0 / 182.0,
    -3617.0 / 510.0 / 240.0,
    43867.0 / 798.0 / 306.0,
    -174611.0 / 330.0 / 380.0,
    854513.0 / 138.0 / 462.0,
];

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    // valid for Re z >= 1/2; the Lanczos fit degrades to ~2e-13 far up the
    // imaginary axis, where the Stirling series is already exact
    if z.norm() >= 10.0 {
        let w = z.inv();
        let w2 = w * w;
        let mut p = w;
        let mut tail = Complex64::new(0.0, 0.0);
        for c in STIRLING {
            tail += p * c;
            p *= w2;
        }
        return (z - 0.5) * z.ln() - z + LN_SQRT_2PI + tail;
    }
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + a.ln()
}

/// `sin(πz)` with the real part reduced mod 2 first, so large real parts
/// do not lose digits.
fn sin_pi(z: Complex64) -> Complex64 {
    let re = z.re.rem_euclid(2.0);
    (Complex64::new(re, z.im) * PI).sin()
}

fn nearest_nonpositive_integer(z: Complex64, tol: f64) -> Option<f64> {
    let k = z.re.round();
    (k <= 0.0 && (z - k).norm() < tol).then_some(k)
}

/// Γ(z) for complex z.
///
/// Lanczos approximation (g = 7, nine terms) for `Re z ≥ 1/2`, reflection
/// `Γ(z)Γ(1−z) = π / sin(πz)` otherwise.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if nearest_nonpositive_integer(z, 1e-12).is_some() {
        return Err(Error::PoleOfGamma(z));
    }
    if z.re < 0.5 {
        let s = sin_pi(z);
        Ok(PI / (s * ln_gamma_lanczos(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_lanczos(z).exp())
    }
}

/// 1/Γ(z), entire. Exactly zero at the nonpositive integers.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        // no division, so points near the poles are fine
        sin_pi(z) * ln_gamma_lanczos(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_lanczos(z)).exp()
    }
}

/// 1/Γ(r) for rational r, with pole hits detected in exact arithmetic.
pub fn recip_gamma_rational(r: Rational64) -> f64 {
    if r <= Rational64::from_integer(0) && r.is_integer() {
        return 0.0;
    }
    recip_gamma(Complex64::new(rational_to_f64(r), 0.0)).re
}

pub(crate) fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x)
    } else {
        ln_gamma_lanczos(Complex64::new(x, 0.0)).re
    }
}

/// `(ln|1/Γ(num/den)|, sign of 1/Γ)`; the sign is 0 at poles of Γ.
fn ln_recip_gamma_ratio(num: i64, den: i64) -> (f64, f64) {
    debug_assert!(den > 0);
    if num > 0 {
        return (-ln_gamma_positive(num as f64 / den as f64), 1.0);
    }
    if num % den == 0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    // Γ(x) = π / (sin(πx) Γ(1−x)) and Γ(1−x) > 0 here
    let x = num as f64 / den as f64;
    let reduced = num.rem_euclid(2 * den) as f64 / den as f64;
    let s = (PI * reduced).sin();
    let ln_abs_gamma = PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x);
    (-ln_abs_gamma, s.signum())
}

/// Parameters of the kernel `C_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub alpha: Rational64,
    /// Conjugate exponent, `1/α + 1/β = 1`.
    pub beta: Rational64,
    /// Absolute truncation tolerance.
    pub tol: f64,
    pub max_terms: usize,
}

impl KernelParams {
    pub const DEFAULT_TOL: f64 = 1e-14;
    pub const DEFAULT_MAX_TERMS: usize = 1000;

    pub fn new(alpha: Rational64, tol: f64, max_terms: usize) -> Result<Self> {
        if alpha <= Rational64::from_integer(1) {
            return Err(Error::InvalidInput(format!("kernel needs alpha > 1, got {alpha}")));
        }
        if !(tol > 0.0) || max_terms == 0 {
            return Err(Error::InvalidInput("kernel needs tol > 0 and max_terms >= 1".into()));
        }
        let beta = alpha / (alpha - 1);
        Ok(Self { alpha, beta, tol, max_terms })
    }

    /// The kernel `C_{q/p}` belonging to `∂ₜᵖ = ∂_z^q`.
    pub fn for_equation(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q <= p {
            return Err(Error::InvalidInput(format!("need 1 <= p < q, got p={p}, q={q}")));
        }
        Self::new(Rational64::new(q as i64, p as i64), Self::DEFAULT_TOL, Self::DEFAULT_MAX_TERMS)
    }

    pub fn alpha_f64(&self) -> f64 {
        rational_to_f64(self.alpha)
    }

    pub fn beta_f64(&self) -> f64 {
        rational_to_f64(self.beta)
    }

    /// Half-opening `π/(2β)` of the sector where the kernel decays.
    pub fn decay_half_angle(&self) -> f64 {
        PI / (2.0 * self.beta_f64())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelRoute {
    Series,
    Contour,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    /// Estimated absolute error.
    pub err_est: f64,
    pub route: KernelRoute,
    /// Far outside the decay sector, where the series cancels more digits
    /// than a double carries and no contour route exists.
    pub low_confidence: bool,
}

/// The m-th derivative of `C_α` with its series coefficients precomputed.
///
/// `C^{(m)}(τ) = (−1)^m Σ (−τ)ⁿ / (n! Γ(1 − (n+m+1)/α))`
#[derive(Debug, Clone)]
pub struct Kernel {
    params: KernelParams,
    deriv: usize,
    nu: f64,
    /// `(ln|1/(n! Γ(x_n))|, sign)` for n = 0..=max_terms.
    coeffs: Vec<(f64, f64)>,
    first: f64,
}

impl Kernel {
    pub fn new(params: &KernelParams, deriv: usize) -> Self {
        let a = *params.alpha.numer();
        let b = *params.alpha.denom();
        // 1 − (n+m+1)/α = (a − (n+m+1)b)/a
        let mut coeffs = Vec::with_capacity(params.max_terms + 1);
        let mut ln_fact = 0.0;
        for n in 0..=params.max_terms {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let (lr, sign) = ln_recip_gamma_ratio(a - (n + deriv + 1) as i64 * b, a);
            coeffs.push((lr - ln_fact, sign));
        }
        let first = recip_gamma_rational(Rational64::new(a - (deriv + 1) as i64 * b, a));
        Self { params: *params, deriv, nu: 1.0 / params.alpha_f64(), coeffs, first }
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn deriv(&self) -> usize {
        self.deriv
    }

    fn sign(&self) -> f64 {
        if self.deriv % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn eval(&self, tau: Complex64) -> Result<KernelValue> {
        if tau == Complex64::new(0.0, 0.0) {
            return Ok(KernelValue {
                value: Complex64::new(self.sign() * self.first, 0.0),
                err_est: 0.0,
                route: KernelRoute::Series,
                low_confidence: false,
            });
        }
        let contour_ok = self.contour_applicable(tau);
        match self.series(tau, contour_ok)? {
            Some(v) => Ok(v),
            None => Ok(self.contour(tau)),
        }
    }

    /// Value only.
    pub fn value(&self, tau: Complex64) -> Result<Complex64> {
        self.eval(tau).map(|v| v.value)
    }

    fn contour_applicable(&self, tau: Complex64) -> bool {
        let beta = self.params.beta_f64();
        (beta * tau.arg()).abs() <= PI / 2.0
    }

    /// Returns `None` when the rounding noise exceeds the tolerance and the
    /// caller should switch to the contour.
    fn series(&self, tau: Complex64, may_abort: bool) -> Result<Option<KernelValue>> {
        let tol = self.params.tol;
        let ln_r = tau.norm().ln();
        let phase = (-tau).arg();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut small = 0;
        for (n, &(lc, sign)) in self.coeffs.iter().enumerate() {
            let mag = if sign == 0.0 { 0.0 } else { (lc + n as f64 * ln_r).exp() };
            if mag > 0.0 {
                sum += Complex64::from_polar(sign * mag, n as f64 * phase);
                abs_sum += mag;
            }
            let noise = 8.0 * f64::EPSILON * abs_sum;
            if may_abort && noise > tol {
                return Ok(None);
            }
            small = if mag < tol / 10.0 { small + 1 } else { 0 };
            if small >= 3 && n as f64 > 2.0 * tau.norm() {
                let outside = tau.arg().abs() > self.params.decay_half_angle();
                return Ok(Some(KernelValue {
                    value: self.sign() * sum,
                    err_est: noise + tol,
                    route: KernelRoute::Series,
                    low_confidence: outside && tau.norm() > 30.0,
                }));
            }
        }
        Err(Error::SeriesNotConverged { max_terms: self.params.max_terms, tau })
    }

    /// Trapezoid rule on the parabola `σ(u) = c + μ e^{iψ}(2iu − u²)` through
    /// the saddle of `σ − τσ^ν`.
    fn contour(&self, tau: Complex64) -> KernelValue {
        let nu = self.nu;
        let saddle = (nu * tau).powf(1.0 / (1.0 - nu));
        let psi = saddle.arg() / 2.0;
        let c = if saddle.norm() >= 1.0 { saddle } else { Complex64::from_polar(1.0, 2.0 * psi) };
        let mu = 0.5 * c.norm().max(1.0);
        let rot = Complex64::from_polar(1.0, psi);
        // trapezoid error ~ exp(−2πd/h), d = distance of σ(u) = 0 from the real u axis
        let disc = (c / (mu * rot) - 1.0).sqrt();
        let i = Complex64::i();
        let d = (i + disc).im.abs().min((i - disc).im.abs());
        let h = (0.3 / ((1.0 - nu) * mu).max(1.0).sqrt()).min(2.0 * PI * d / 44.0);
        let u_max = 7.0 / mu.sqrt() + 3.0;
        let n = (u_max / h).ceil() as i64;
        let power = (self.deriv as f64 + 1.0) * nu - 1.0;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in -n..=n {
            let u = k as f64 * h;
            let sigma = c + mu * rot * Complex64::new(-u * u, 2.0 * u);
            let dsigma = mu * rot * Complex64::new(-2.0 * u, 2.0);
            // branch cut along −e^{iψ}, which the contour never crosses
            let l = (sigma / rot).ln() + i * psi;
            sum += (sigma - tau * (nu * l).exp() + power * l).exp() * dsigma;
        }
        let value = self.sign() * sum * h / (2.0 * PI * i);
        KernelValue {
            value,
            err_est: 1e-12 * value.norm() + self.params.tol,
            route: KernelRoute::Contour,
            low_confidence: false,
        }
    }
}

/// `C_α(τ)` to absolute accuracy `params.tol`.
pub fn kernel_c(params: &KernelParams, tau: Complex64) -> Result<Complex64> {
    Kernel::new(params, 0).value(tau)
}

/// m-th derivative of `C_α` at τ.
pub fn kernel_derivative(params: &KernelParams, tau: Complex64, m: usize) -> Result<Complex64> {
    Kernel::new(params, m).value(tau)
}

/// Constants of a decay bound `|C_α(r e^{iγ})| ≤ A₁ exp(−A₂ r^β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelDecay {
    pub a1: f64,
    pub a2: f64,
    pub beta: f64,
}

impl KernelDecay {
    pub fn bound(&self, r: f64) -> f64 {
        self.a1 * (-self.a2 * r.powf(self.beta)).exp()
    }

    /// Exact constants for `C₂(τ) = e^{−τ²/4}/√π` along `arg τ = γ`.
    pub fn gaussian(gamma: f64) -> Self {
        Self { a1: 1.0 / PI.sqrt(), a2: (2.0 * gamma).cos() / 4.0, beta: 2.0 }
    }
}

/// Fits `ln|C(r e^{iγ})| ≈ ln A₁ − A₂ r^β` by least squares over `[r_max/4, r_max]`,
/// then raises `A₁` until the bound holds at every sample on `[0, r_max]`.
pub fn fit_kernel_decay(kernel: &Kernel, gamma: f64, r_max: f64, samples: usize) -> Result<KernelDecay> {
    let beta = kernel.params().beta_f64();
    let rot = Complex64::from_polar(1.0, gamma);
    let mut pts = Vec::with_capacity(samples);
    for k in 0..=samples {
        let r = r_max * k as f64 / samples as f64;
        let v = kernel.value(rot * r)?.norm();
        pts.push((r, v));
    }
    let fit: Vec<(f64, f64)> = pts
        .iter()
        .filter(|&&(r, v)| r >= r_max / 4.0 && v > 1e-280)
        .map(|&(r, v)| (r.powf(beta), v.ln()))
        .collect();
    if fit.len() < 3 {
        return Err(Error::DegenerateFit);
    }
    let m = fit.len() as f64;
    let (sx, sy) = fit.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = fit.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = fit.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let a2 = -sxy / sxx;
    if !(a2 > 0.0) {
        return Err(Error::DegenerateFit);
    }
    let a1 = pts
        .iter()
        .map(|&(r, v)| v * (a2 * r.powf(beta)).exp())
        .fold(0.0, f64::max);
    Ok(KernelDecay { a1, a2, beta })
}

/// Leading-order decay rate along `arg τ = γ`:
/// `(α−1) α^{−β} cos(βγ)`.
pub fn asymptotic_decay_rate(params: &KernelParams, gamma: f64) -> f64 {
    let alpha = params.alpha_f64();
    let beta = params.beta_f64();
    (alpha - 1.0) * alpha.powf(-beta) * (beta * gamma).cos()
}
