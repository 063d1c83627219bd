//! Borel summation of the divergent formal solutions of `∂ₜᵖu = ∂_z^q u`
//! (1 ≤ p < q) with meromorphic Cauchy data.
//!
//! The crate is organised bottom-up:
//!
//! * [`special_fn`]: complex Gamma, its reciprocal and the summation kernel `C_α`.
//! * [`datum`]: meromorphic Cauchy data (finite pole list plus an
//!   exponential-polynomial entire part), exact derivatives.
//! * [`formal`]: the formal power-series solution, Gevrey fits, optimal truncation.
//! * [`borel`]: points on the Riemann surface of `t^{p/q}` and the directional sums.
//! * [`stokes`]: Stokes and anti-Stokes lines, jumps by three routes.
//! * [`family`]: maximal families of actual solutions and their verification.
//!
//! ```
//! use borel_stokes::{CauchyDatum, Equation, RiemannPoint, QuadratureSpec, heat_sum};
//! use num_complex::Complex64;
//!
//! let datum = CauchyDatum::monomial(2);
//! let t = RiemannPoint::new(0.5, 0.0, Equation::heat().period()).unwrap();
//! let u = heat_sum(&datum, 0.0, t, Complex64::new(1.0, 0.0), &QuadratureSpec::default()).unwrap();
//! assert!((u.value - Complex64::new(2.0, 0.0)).norm() < 1e-10);
//! ```

pub mod borel;
pub mod datum;
pub mod error;
pub mod family;
pub mod formal;
pub mod quad;
pub mod special_fn;
pub mod stokes;

pub use borel::{
    borel_transform, general_sum, heat_sum, sum_on_grid, BorelSumResult, QuadratureSpec,
    RiemannPoint, SectorRecord,
};
pub use datum::{growth_bounds, CauchyDatum, EntirePart, EntireTerm, GrowthBounds, PoleTerm};
pub use error::{Error, ErrorKind, Result};
pub use family::{
    initial_limit, maximal_family, pde_residual, verify_family, CheckResult, FamilyMember,
    FamilyReport, InitialLimit, SurfaceSector,
};
pub use formal::{
    formal_solution, gevrey_estimate, optimal_truncation, partial_sum, Equation, FormalSolution,
    OptimalTruncation,
};
pub use special_fn::{gamma, kernel_c, recip_gamma, KernelParams};
pub use stokes::{
    anti_stokes_directions, jump_closed_form, jump_quadrature, residue_jump, singular_directions,
    JumpResult, JumpRoute, LineKind, StokesLine,
};

pub use num_complex::Complex64;
