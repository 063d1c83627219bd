//! The formal solution `û(t,z) = Σ φ^{(qn)}(z) t^{pn} / (pn)!`.

use std::f64::consts::PI;
use std::sync::RwLock;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::datum::CauchyDatum;
use crate::error::{Error, Result};
use crate::special_fn::{rational_to_f64, KernelParams};

/// The equation `∂ₜᵖu = ∂_z^q u`, `1 ≤ p < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(u32, u32)", into = "(u32, u32)")]
pub struct Equation {
    p: u32,
    q: u32,
}

impl TryFrom<(u32, u32)> for Equation {
    type Error = Error;

    fn try_from((p, q): (u32, u32)) -> Result<Self> {
        Self::new(p, q)
    }
}

impl From<Equation> for (u32, u32) {
    fn from(e: Equation) -> Self {
        (e.p, e.q)
    }
}

impl Equation {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q <= p {
            return Err(Error::InvalidInput(format!("need 1 <= p < q, got p={p}, q={q}")));
        }
        Ok(Self { p, q })
    }

    /// `∂ₜu = ∂_z²u`.
    pub fn heat() -> Self {
        Self { p: 1, q: 2 }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_heat(&self) -> bool {
        self.p == 1 && self.q == 2
    }

    /// Summability index `k = p/(q−p)`.
    pub fn k(&self) -> Rational64 {
        Rational64::new(self.p as i64, (self.q - self.p) as i64)
    }

    /// Gevrey order `s = (q−p)/p`.
    pub fn s(&self) -> Rational64 {
        Rational64::new((self.q - self.p) as i64, self.p as i64)
    }

    /// `q/p`, the exponent of the branch variable is its inverse.
    pub fn alpha(&self) -> Rational64 {
        Rational64::new(self.q as i64, self.p as i64)
    }

    pub fn beta(&self) -> Rational64 {
        Rational64::new(self.q as i64, (self.q - self.p) as i64)
    }

    /// Monodromy period `2πq/p` of `t^{p/q}`.
    pub fn period(&self) -> f64 {
        2.0 * PI * self.q as f64 / self.p as f64
    }

    /// Summability opening `π/k = π(q−p)/p`.
    pub fn opening(&self) -> f64 {
        PI / rational_to_f64(self.k())
    }

    pub fn kernel_params(&self) -> KernelParams {
        KernelParams::for_equation(self.p, self.q).expect("validated equation")
    }
}

/// The formal solution with a lazily extended coefficient list.
///
/// Entry n is the datum `φ^{(qn)} / (pn)!`. Extension happens under a write
/// lock, reads share a read lock, so one value can serve many threads.
#[derive(Debug)]
pub struct FormalSolution {
    equation: Equation,
    datum: CauchyDatum,
    coefficients: RwLock<Vec<CauchyDatum>>,
}

impl Clone for FormalSolution {
    fn clone(&self) -> Self {
        Self {
            equation: self.equation,
            datum: self.datum.clone(),
            coefficients: RwLock::new(self.coefficients.read().expect("lock").clone()),
        }
    }
}

pub fn formal_solution(eq: Equation, datum: &CauchyDatum) -> Result<FormalSolution> {
    let order = rational_to_f64(datum.entire_part().growth_order());
    let limit = rational_to_f64(eq.beta());
    if order > limit {
        return Err(Error::GrowthOrderViolation { order, limit });
    }
    Ok(FormalSolution { equation: eq, datum: datum.clone(), coefficients: RwLock::new(vec![datum.clone()]) })
}

impl FormalSolution {
    pub fn equation(&self) -> Equation {
        self.equation
    }

    pub fn datum(&self) -> &CauchyDatum {
        &self.datum
    }

    /// Extends the coefficient list to at least `n + 1` entries.
    pub fn materialize(&self, n: usize) {
        if self.coefficients.read().expect("lock").len() > n {
            return;
        }
        let mut list = self.coefficients.write().expect("lock");
        let (p, q) = (self.equation.p as usize, self.equation.q as usize);
        while list.len() <= n {
            let m = list.len() - 1;
            // (pm)!/(p(m+1))! applied as a ratio so nothing overflows early
            let ratio: f64 = (p * m + 1..=p * (m + 1)).map(|j| 1.0 / j as f64).product();
            let next = list[m].derivative(q).scaled(Complex64::new(ratio, 0.0));
            list.push(next);
        }
    }

    /// Coefficient datum n, i.e. `φ^{(qn)}/(pn)!`.
    pub fn coefficient(&self, n: usize) -> CauchyDatum {
        self.materialize(n);
        self.coefficients.read().expect("lock")[n].clone()
    }

    /// `a_n(z) = φ^{(qn)}(z)/(pn)!` for n = 0..=n_max.
    pub fn coefficients_at(&self, z: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
        self.materialize(n_max);
        let list = self.coefficients.read().expect("lock");
        list[..=n_max].iter().map(|c| c.eval(z)).collect()
    }

    /// Terms `a_n(z) t^{pn}` for n = 0..=n_max.
    pub fn terms(&self, t: Complex64, z: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
        let tp = t.powu(self.equation.p);
        let mut power = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(n_max + 1);
        for a in self.coefficients_at(z, n_max)? {
            out.push(if a == Complex64::new(0.0, 0.0) { a } else { a * power });
            power *= tp;
        }
        Ok(out)
    }
}

/// `Σ_{n=0}^{N} a_n(z) t^{pn}`.
pub fn partial_sum(f: &FormalSolution, t: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
    Ok(f.terms(t, z, n)?.into_iter().sum())
}

const ZERO_COEFF: f64 = 1e-300;

/// Least-squares fit of `ln|a_n(z)| ≈ s·n ln n + b·n + c` over
/// `n ∈ [N_max/2, N_max]`; returns the estimate of s.
///
/// A series whose coefficients vanish over the whole window terminates and
/// has Gevrey order 0.
pub fn gevrey_estimate(f: &FormalSolution, z: Complex64, n_max: usize) -> Result<f64> {
    if n_max < 8 {
        return Err(Error::InvalidInput(format!("gevrey fit needs N_max >= 8, got {n_max}")));
    }
    let coeffs = f.coefficients_at(z, n_max)?;
    let window: Vec<(f64, f64)> = (n_max / 2..=n_max)
        .filter(|&n| coeffs[n].norm() >= ZERO_COEFF && coeffs[n].norm().is_finite())
        .map(|n| (n as f64, coeffs[n].norm().ln()))
        .collect();
    if window.is_empty() {
        return Ok(0.0);
    }
    if window.len() < 4 {
        return Err(Error::DegenerateFit);
    }
    // normal equations for the basis (n ln n, n, 1)
    let mut ata = [[0.0f64; 3]; 3];
    let mut aty = [0.0f64; 3];
    for &(n, y) in &window {
        let row = [n * n.ln(), n, 1.0];
        for i in 0..3 {
            aty[i] += row[i] * y;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let sol = solve3(ata, aty).ok_or(Error::DegenerateFit)?;
    Ok(sol[0])
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalTruncation {
    pub n_star: usize,
    pub value: Complex64,
    /// Magnitude of the first omitted term.
    pub err_est: f64,
}

/// Truncation just before the smallest term.
///
/// With `m` the first index minimising `|a_n(z) t^{pn}|` over `n ≤ N_cap`,
/// returns `N* = m − 1`, the partial sum through `N*` and `|term_m|`. A
/// terminating series returns its full sum with zero error.
pub fn optimal_truncation(f: &FormalSolution, t: Complex64, z: Complex64, n_cap: usize) -> Result<OptimalTruncation> {
    let terms = f.terms(t, z, n_cap)?;
    let mags: Vec<f64> = terms.iter().map(|x| x.norm()).collect();
    // overflowed terms are NaN, which must not read as zero
    if let Some(last) = mags.iter().rposition(|&m| m != 0.0) {
        if last < n_cap {
            // every term after `last` vanishes
            return Ok(OptimalTruncation { n_star: last, value: terms[..=last].iter().sum(), err_est: 0.0 });
        }
    } else {
        return Ok(OptimalTruncation { n_star: 0, value: Complex64::new(0.0, 0.0), err_est: 0.0 });
    }
    let m = mags
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (n, &v)| if v < best.1 { (n, v) } else { best })
        .0;
    if m == 0 {
        return Err(Error::NoMinimum);
    }
    Ok(OptimalTruncation { n_star: m - 1, value: terms[..m].iter().sum(), err_est: mags[m] })
}
