//! Meromorphic Cauchy data `φ(z) = Σ_l Σ_k a_{lk}/(z − z_l)^k + φ̃(z)` with an
//! entire part from the exponential-polynomial family `Σ c zᵐ e^{λz}`.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Principal part at one pole: `Σ_k a_k / (z − z_l)^k`, `coefficients[k−1] = a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleTerm {
    location: Complex64,
    coefficients: Vec<Complex64>,
}

impl PoleTerm {
    pub fn new(location: Complex64, coefficients: Vec<Complex64>) -> Result<Self> {
        if location == ZERO {
            return Err(Error::InvalidInput("pole at the origin".into()));
        }
        if !location.re.is_finite() || !location.im.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite pole location {location}")));
        }
        match coefficients.last() {
            None => Err(Error::InvalidInput(format!("pole at {location} has no coefficients"))),
            Some(&top) if top == ZERO => Err(Error::InvalidInput(format!(
                "pole at {location} has a zero top coefficient"
            ))),
            Some(_) => Ok(Self { location, coefficients }),
        }
    }

    pub fn simple(location: Complex64, residue: Complex64) -> Result<Self> {
        Self::new(location, vec![residue])
    }

    pub fn location(&self) -> Complex64 {
        self.location
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Order `r_l` of the pole.
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = 1.0 / (z - self.location);
        let mut acc = ZERO;
        for a in self.coefficients.iter().rev() {
            acc = (acc + a) * w;
        }
        acc
    }

    fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let mut coefficients = vec![ZERO; self.order() + order];
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        for (i, &a) in self.coefficients.iter().enumerate() {
            let k = i + 1;
            // k(k+1)…(k+m−1)
            let rising: f64 = (k..k + order).map(|j| j as f64).product();
            coefficients[i + order] = sign * rising * a;
        }
        Self { location: self.location, coefficients }
    }
}

/// One term `c · zᵐ · e^{λz}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntireTerm {
    pub c: Complex64,
    pub lambda: Complex64,
    pub m: u32,
}

impl EntireTerm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let e = if self.lambda == ZERO { Complex64::new(1.0, 0.0) } else { (self.lambda * z).exp() };
        self.c * z.powu(self.m) * e
    }
}

/// Finite sum of [`EntireTerm`]s; closed under differentiation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntirePart {
    pub terms: Vec<EntireTerm>,
}

impl EntirePart {
    pub fn new(terms: Vec<EntireTerm>) -> Self {
        let mut part = Self { terms };
        part.normalize();
        part
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| t.lambda == ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }

    /// Merges like terms and drops zeros, in a canonical order.
    fn normalize(&mut self) {
        let mut merged: Vec<EntireTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.iter_mut().find(|u| u.lambda == t.lambda && u.m == t.m) {
                Some(u) => u.c += t.c,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.c != ZERO);
        merged.sort_by(|a, b| {
            (a.lambda.re, a.lambda.im, a.m)
                .partial_cmp(&(b.lambda.re, b.lambda.im, b.m))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        self.terms = merged;
    }

    /// Leibniz: `dᴺ(zᵐe^{λz}) = Σ_j C(N,j) m!/(m−j)! z^{m−j} λ^{N−j} e^{λz}`.
    pub fn derivative(&self, order: usize) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            let top = order.min(t.m as usize);
            let mut binom = 1.0;
            let mut falling = 1.0;
            for j in 0..=top {
                if j > 0 {
                    binom *= (order - j + 1) as f64 / j as f64;
                    falling *= (t.m as usize - j + 1) as f64;
                }
                let lam_pow = t.lambda.powu((order - j) as u32);
                if lam_pow == ZERO {
                    continue;
                }
                out.push(EntireTerm { c: t.c * binom * falling * lam_pow, lambda: t.lambda, m: t.m - j as u32 });
            }
        }
        Self::new(out)
    }

    /// Majorant `Σ |c| rᵐ e^{|λ| r}` of `|φ̃|` on `|z| = r`.
    pub fn abs_bound(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.c.norm() * r.powi(t.m as i32) * (t.lambda.norm() * r).exp())
            .sum()
    }

    /// Exponential growth order: 0 for a polynomial, 1 otherwise.
    pub fn growth_order(&self) -> Rational64 {
        Rational64::from_integer(if self.is_polynomial() { 0 } else { 1 })
    }
}

/// Constants of `|φ̃(x)| ≤ C₁ e^{C₂|x|^order}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthBounds {
    #[serde(serialize_with = "ser_rational")]
    pub order: Rational64,
    pub c1: f64,
    pub c2: f64,
}

fn ser_rational<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

const GROWTH_MARGIN: f64 = 0.25;

/// Growth constants of an entire part.
///
/// For exponential terms `C₂ = max|λ| + margin` and `C₁` absorbs the
/// polynomial factors via `sup_r rᵐ e^{−margin·r} = (m/(e·margin))ᵐ`.
/// Polynomials report order 0, `C₂ = 0` and `C₁` fitted so that
/// `|φ̃(x)| ≤ C₁ e^{margin·|x|}` on the sample rings. The bound is checked on
/// rings of radius 2^j before returning and enlarged if a sample violates it.
pub fn growth_bounds(entire: &EntirePart) -> GrowthBounds {
    let order = entire.growth_order();
    let poly = entire.is_polynomial();
    let rate = if poly { GROWTH_MARGIN } else { entire.terms.iter().map(|t| t.lambda.norm()).fold(0.0, f64::max) + GROWTH_MARGIN };
    let mut c1: f64 = entire
        .terms
        .iter()
        .map(|t| {
            let m = t.m as f64;
            let poly_factor = if t.m == 0 { 1.0 } else { (m / (std::f64::consts::E * GROWTH_MARGIN)).powf(m) };
            t.c.norm() * poly_factor
        })
        .sum();
    for j in -2..=6 {
        let r = 2f64.powi(j);
        for k in 0..64 {
            let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / 64.0);
            let need = entire.eval(z).norm() * (-rate * r).exp();
            if need > c1 {
                c1 = need * (1.0 + 1e-12);
            }
        }
    }
    GrowthBounds { order, c1, c2: if poly { 0.0 } else { rate } }
}

/// Meromorphic Cauchy datum: finitely many poles plus an entire part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DatumWire", into = "DatumWire")]
pub struct CauchyDatum {
    poles: Vec<PoleTerm>,
    entire: EntirePart,
}

impl CauchyDatum {
    pub fn new(poles: Vec<PoleTerm>, entire: EntirePart) -> Result<Self> {
        for (i, a) in poles.iter().enumerate() {
            for b in &poles[i + 1..] {
                if a.location == b.location {
                    return Err(Error::InvalidInput(format!("duplicate pole location {}", a.location)));
                }
            }
        }
        Ok(Self { poles, entire })
    }

    /// `a / (z − z₀)`.
    pub fn simple_pole(z0: Complex64, a: Complex64) -> Result<Self> {
        Self::new(vec![PoleTerm::simple(z0, a)?], EntirePart::default())
    }

    /// `a / (z − z₀)^k`.
    pub fn pole_of_order(z0: Complex64, a: Complex64, k: usize) -> Result<Self> {
        let mut coeffs = vec![ZERO; k.max(1)];
        coeffs[k.max(1) - 1] = a;
        Self::new(vec![PoleTerm::new(z0, coeffs)?], EntirePart::default())
    }

    pub fn entire(terms: Vec<EntireTerm>) -> Self {
        Self { poles: Vec::new(), entire: EntirePart::new(terms) }
    }

    /// `zᵐ`.
    pub fn monomial(m: u32) -> Self {
        Self::entire(vec![EntireTerm { c: Complex64::new(1.0, 0.0), lambda: ZERO, m }])
    }

    /// `e^{λz}`.
    pub fn exponential(lambda: Complex64) -> Self {
        Self::entire(vec![EntireTerm { c: Complex64::new(1.0, 0.0), lambda, m: 0 }])
    }

    pub fn poles(&self) -> &[PoleTerm] {
        &self.poles
    }

    pub fn entire_part(&self) -> &EntirePart {
        &self.entire
    }

    pub fn has_poles(&self) -> bool {
        !self.poles.is_empty()
    }

    pub fn pole_guard(location: Complex64) -> f64 {
        1e-12 * location.norm().max(1.0)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = self.entire.eval(z);
        for p in &self.poles {
            if (z - p.location).norm() < Self::pole_guard(p.location) {
                return Err(Error::AtPole { z, pole: p.location });
            }
            acc += p.eval(z);
        }
        Ok(acc)
    }

    /// Evaluation without the pole guard; the caller has already checked
    /// the distance to the poles.
    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.entire.eval(z) + self.poles.iter().map(|p| p.eval(z)).sum::<Complex64>()
    }

    /// Exact derivative of the given order.
    pub fn derivative(&self, order: usize) -> Self {
        Self {
            poles: self.poles.iter().map(|p| p.derivative(order)).collect(),
            entire: self.entire.derivative(order),
        }
    }

    /// `ψ(z) = −φ(−z)`.
    pub fn reflect(&self) -> Self {
        let poles = self
            .poles
            .iter()
            .map(|p| PoleTerm {
                location: -p.location,
                coefficients: p
                    .coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if (i + 1) % 2 == 0 { -a } else { a })
                    .collect(),
            })
            .collect();
        let entire = EntirePart::new(
            self.entire
                .terms
                .iter()
                .map(|t| EntireTerm {
                    c: if t.m % 2 == 0 { -t.c } else { t.c },
                    lambda: -t.lambda,
                    m: t.m,
                })
                .collect(),
        );
        Self { poles, entire }
    }

    /// `s · φ`.
    pub fn scaled(&self, s: Complex64) -> Self {
        if s == ZERO {
            return Self { poles: Vec::new(), entire: EntirePart::default() };
        }
        Self {
            poles: self
                .poles
                .iter()
                .map(|p| PoleTerm {
                    location: p.location,
                    coefficients: p.coefficients.iter().map(|a| a * s).collect(),
                })
                .collect(),
            entire: EntirePart::new(self.entire.terms.iter().map(|t| EntireTerm { c: t.c * s, ..*t }).collect()),
        }
    }

    /// `φ + ψ`, merging principal parts at shared locations.
    pub fn plus(&self, other: &Self) -> Self {
        let mut poles = self.poles.clone();
        for q in &other.poles {
            match poles.iter_mut().find(|p| p.location == q.location) {
                Some(p) => {
                    if p.coefficients.len() < q.coefficients.len() {
                        p.coefficients.resize(q.coefficients.len(), ZERO);
                    }
                    for (a, b) in p.coefficients.iter_mut().zip(&q.coefficients) {
                        *a += b;
                    }
                    while p.coefficients.last() == Some(&ZERO) {
                        p.coefficients.pop();
                    }
                }
                None => poles.push(q.clone()),
            }
        }
        poles.retain(|p| !p.coefficients.is_empty());
        let mut terms = self.entire.terms.clone();
        terms.extend_from_slice(&other.entire.terms);
        Self { poles, entire: EntirePart::new(terms) }
    }

    /// Smallest `|z − z_l|` over the poles (infinite without poles).
    pub fn distance_to_poles(&self, z: Complex64) -> f64 {
        self.poles.iter().map(|p| (z - p.location).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("datum: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("datum serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumWire {
    #[serde(default)]
    poles: Vec<PoleWire>,
    #[serde(default)]
    entire: Vec<EntireWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoleWire {
    z: [f64; 2],
    coeffs: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntireWire {
    c: [f64; 2],
    lambda: [f64; 2],
    m: u32,
}

fn cx(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl TryFrom<DatumWire> for CauchyDatum {
    type Error = Error;

    fn try_from(w: DatumWire) -> Result<Self> {
        let poles = w
            .poles
            .into_iter()
            .map(|p| PoleTerm::new(cx(p.z), p.coeffs.into_iter().map(cx).collect()))
            .collect::<Result<Vec<_>>>()?;
        let entire = EntirePart::new(
            w.entire.into_iter().map(|e| EntireTerm { c: cx(e.c), lambda: cx(e.lambda), m: e.m }).collect(),
        );
        CauchyDatum::new(poles, entire)
    }
}

impl From<CauchyDatum> for DatumWire {
    fn from(d: CauchyDatum) -> Self {
        let pair = |z: Complex64| [z.re, z.im];
        DatumWire {
            poles: d
                .poles
                .iter()
                .map(|p| PoleWire { z: pair(p.location), coeffs: p.coefficients.iter().map(|&a| pair(a)).collect() })
                .collect(),
            entire: d
                .entire
                .terms
                .iter()
                .map(|t| EntireWire { c: pair(t.c), lambda: pair(t.lambda), m: t.m })
                .collect(),
        }
    }
}
