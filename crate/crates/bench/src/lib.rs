//! Fixtures shared by the benchmarks.

use borel_stokes::{CauchyDatum, Equation, RiemannPoint};
use num_complex::Complex64;

/// `1/(z − 1)`.
pub fn unit_pole() -> CauchyDatum {
    CauchyDatum::simple_pole(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).expect("valid pole")
}

/// Simple poles at `1` and `i`.
pub fn two_poles() -> CauchyDatum {
    unit_pole().plus(&CauchyDatum::simple_pole(Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)).expect("valid pole"))
}

pub fn cubic() -> Equation {
    Equation::new(1, 3).expect("1 < 3")
}

pub fn point(eq: Equation, modulus: f64, arg: f64) -> RiemannPoint {
    RiemannPoint::on(eq, modulus, arg).expect("positive modulus")
}

/// `n` moduli spread over `(0, 0.5]`.
pub fn moduli(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 0.5 * i as f64 / n as f64).collect()
}
