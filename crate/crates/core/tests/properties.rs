use std::f64::consts::PI;

use borel_stokes::borel::borel_sum;
use borel_stokes::stokes::jump_function;
use borel_stokes::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pole(z0: Complex64) -> CauchyDatum {
    CauchyDatum::simple_pole(z0, c(1.0, 0.0)).unwrap()
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn random_pole(rng: &mut ChaCha8Rng) -> CauchyDatum {
    let z0 = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI));
    let order = rng.random_range(1..=3);
    let coeffs = (0..order)
        .map(|_| Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI)))
        .collect();
    CauchyDatum::new(vec![PoleTerm::new(z0, coeffs).unwrap()], EntirePart::default()).unwrap()
}

#[test]
fn jump_routes_agree_on_random_heat_configurations() {
    let heat = Equation::heat();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for case in 0..20 {
        let phi = random_pole(&mut rng);
        let lines = stokes::singular_directions(heat, &phi);
        let line = &lines[rng.random_range(0..2)];
        let m = rng.random_range(0.05..0.2);
        let t = RiemannPoint::on(heat, m, line.direction).unwrap();
        let z = c(0.0, 0.0);
        let a = jump_closed_form(heat, &phi, line, t, z).unwrap();
        let b = residue_jump(heat, &phi, line.direction - 0.5, line.direction + 0.5, t, z).unwrap();
        let q = jump_quadrature(heat, &phi, line, t, z, &quad()).unwrap();
        let tol = |x: &JumpResult, y: &JumpResult| 10.0 * (x.err_est + y.err_est) + 1e-9 * x.value.norm().max(1.0);
        assert!((a.value - b.value).norm() <= tol(&a, &b), "case {case}: {a:?} {b:?}");
        assert!((a.value - q.value).norm() <= tol(&a, &q), "case {case}: {a:?} {q:?}");
        assert!((b.value - q.value).norm() <= tol(&b, &q), "case {case}: {b:?} {q:?}");
    }
}

#[test]
fn jump_is_linear_in_the_datum() {
    let heat = Equation::heat();
    let phi1 = CauchyDatum::simple_pole(c(1.0, 0.0), c(0.7, -0.2)).unwrap();
    let phi2 = CauchyDatum::new(vec![PoleTerm::new(c(1.0, 0.0), vec![c(0.0, 0.0), c(0.4, 0.1)]).unwrap()], EntirePart::default()).unwrap();
    let (x, y) = (c(1.5, 0.5), c(-0.3, 2.0));
    let sum = phi1.scaled(x).plus(&phi2.scaled(y));
    let line = &stokes::singular_directions(heat, &sum)[0];
    let t = RiemannPoint::on(heat, 0.1, 0.0).unwrap();
    let z = c(0.05, 0.0);
    let j = |phi: &CauchyDatum| jump_quadrature(heat, phi, line, t, z, &quad()).unwrap();
    let (j1, j2, js) = (j(&phi1), j(&phi2), j(&sum));
    let err = js.err_est + x.norm() * j1.err_est + y.norm() * j2.err_est;
    assert!((js.value - x * j1.value - y * j2.value).norm() <= 10.0 * err + 1e-12);
}

#[test]
fn exponentially_small_along_the_line() {
    let heat = Equation::heat();
    let phi = pole(c(1.0, 0.0));
    let line = &stokes::singular_directions(heat, &phi)[0];
    // |J|/|t|^N → 0: past the hump near |t| = 1/(4N) the ratios fall
    for n in 0..=10 {
        let mut last = f64::INFINITY;
        for j in 0..5 {
            let m = 0.01 * 0.5f64.powi(j);
            let v = jump_function(heat, &phi, line, RiemannPoint::on(heat, m, 0.0).unwrap(), c(0.0, 0.0)).unwrap().norm();
            let r = v / m.powi(n);
            assert!(r < last, "N = {n}, |t| = {m}");
            last = r;
        }
        assert!(last < 1e-100);
    }
}

#[test]
fn heat_pole_sum_matches_optimal_truncation() {
    let heat = Equation::heat();
    let phi = pole(c(1.0, 0.0));
    let t = RiemannPoint::on(heat, 0.01, PI * 0.999).unwrap();
    let u = heat_sum(&phi, PI, t, c(0.0, 0.0), &quad()).unwrap();
    let f = formal_solution(heat, &phi).unwrap();
    let o = optimal_truncation(&f, t.to_complex(), c(0.0, 0.0), 200).unwrap();
    assert!((u.value - o.value).norm() <= u.err_est + o.err_est, "{u:?} {o:?}");
}

#[test]
fn cubic_pole_sum_matches_optimal_truncation() {
    let cubic = Equation::new(1, 3).unwrap();
    let phi = pole(c(1.0, 0.0));
    let t = RiemannPoint::on(cubic, 1e-3, PI * 0.99).unwrap();
    let u = general_sum(cubic, &phi, PI, t, c(0.0, 0.0), &quad()).unwrap();
    let f = formal_solution(cubic, &phi).unwrap();
    let o = optimal_truncation(&f, t.to_complex(), c(0.0, 0.0), 200).unwrap();
    assert!((u.value - o.value).norm() <= u.err_est + o.err_est, "{u:?} {o:?}");
}

#[test]
fn fast_and_general_heat_paths_agree() {
    let heat = Equation::heat();
    let phi = pole(c(0.6, 0.8)).plus(&CauchyDatum::exponential(c(0.0, 1.0)));
    for (m, a, z) in [(0.1, 0.3, c(0.0, 0.0)), (0.3, -0.6, c(0.2, 0.1)), (0.05, 2.8, c(-0.1, 0.0))] {
        let t = RiemannPoint::on(heat, m, a).unwrap();
        let x = heat_sum(&phi, a, t, z, &quad()).unwrap();
        let y = general_sum(heat, &phi, a, t, z, &quad()).unwrap();
        assert!((x.value - y.value).norm() < 1e-8, "{x:?} {y:?}");
    }
}

#[test]
fn initial_limit_on_and_off_stokes_lines() {
    let heat = Equation::heat();
    let phi = pole(c(1.0, 0.0));
    let moduli: Vec<f64> = (0..6).map(|j| 0.1 * 0.5f64.powi(j)).collect();
    for arg in [0.3, 0.0] {
        let sector = SurfaceSector { lower: arg - 1.0, upper: arg + 1.0, radius: 1.0, period: heat.period() };
        let theta = if arg == 0.0 { 0.01 } else { arg };
        let eval = |t: RiemannPoint, z: Complex64| heat_sum(&phi, theta, t, z, &quad()).map(|r| r.value);
        let lim = initial_limit(eval, &phi, &sector, c(0.0, 0.0), &moduli).unwrap();
        assert!(lim.decreasing, "{lim:?}");
        assert!(*lim.deviations.last().unwrap() < 1e-2);
    }
}

#[test]
fn cyclic_jumps_cancel_for_several_poles() {
    let phi = pole(c(1.0, 0.0)).plus(&pole(c(-0.5, 0.9)));
    for eq in [Equation::heat(), Equation::new(1, 3).unwrap(), Equation::new(2, 5).unwrap()] {
        let t = RiemannPoint::on(eq, 0.2, 0.4).unwrap();
        let total: Complex64 = stokes::singular_directions(eq, &phi)
            .iter()
            .map(|l| jump_function(eq, &phi, l, t, c(0.0, 0.0)).unwrap())
            .sum();
        assert!(total.norm() < 1e-10, "{eq:?}: {total}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sums_are_linear(
        ar in -2.0..2.0f64, ai in -2.0..2.0f64,
        br in -2.0..2.0f64, bi in -2.0..2.0f64,
        zr in 0.6..1.5f64, zi in 0.2..1.0f64,
        lam in -1.0..1.0f64,
    ) {
        let cubic = Equation::new(1, 3).unwrap();
        let phi1 = CauchyDatum::simple_pole(c(zr, zi), c(1.0, 0.0)).unwrap();
        let phi2 = CauchyDatum::exponential(c(lam, 0.5));
        let (x, y) = (c(ar, ai), c(br, bi));
        let comb = phi1.scaled(x).plus(&phi2.scaled(y));
        let t = RiemannPoint::on(cubic, 0.1, -0.8).unwrap();
        let z = c(0.05, -0.05);
        let s = |phi: &CauchyDatum| general_sum(cubic, phi, -0.8, t, z, &quad()).unwrap();
        let (u1, u2, u) = (s(&phi1), s(&phi2), s(&comb));
        let err = u.err_est + x.norm() * u1.err_est + y.norm() * u2.err_est;
        prop_assert!((u.value - x * u1.value - y * u2.value).norm() <= 2.0 * err);
    }

    #[test]
    fn direction_independent_between_stokes_lines(th1 in 0.3..1.7f64, th2 in 1.7..3.1f64, m in 0.02..0.5f64) {
        let heat = Equation::heat();
        let phi = pole(c(1.0, 0.0));
        let t = RiemannPoint::on(heat, m, 1.7).unwrap();
        let a = heat_sum(&phi, th1, t, c(0.0, 0.0), &quad()).unwrap();
        let b = heat_sum(&phi, th2, t, c(0.0, 0.0), &quad()).unwrap();
        prop_assert!((a.value - b.value).norm() < a.err_est + b.err_est);
    }

    #[test]
    fn monodromy_is_exact(m in 0.01..0.5f64, a in -1.0..1.0f64, sheets in 1i32..3) {
        for eq in [Equation::heat(), Equation::new(1, 3).unwrap()] {
            let phi = pole(c(0.0, 1.0));
            let theta = eq.period() / 2.0 + a;
            let t = RiemannPoint::on(eq, m, theta).unwrap();
            let u = borel_sum(eq, &phi, theta, t, c(0.0, 0.0), &quad()).unwrap();
            let v = borel_sum(eq, &phi, theta, t.with_argument(theta + sheets as f64 * eq.period()), c(0.0, 0.0), &quad()).unwrap();
            prop_assert!((u.value - v.value).norm() < 1e-12);
        }
    }

    #[test]
    fn grid_cells_equal_single_calls(m in 0.05..0.4f64, a in -1.0..1.0f64, zr in -0.3..0.3f64) {
        let heat = Equation::heat();
        let phi = pole(c(0.0, 1.0));
        let ts = [RiemannPoint::on(heat, m, a).unwrap(), RiemannPoint::on(heat, m / 2.0, a).unwrap()];
        let zs = [c(zr, 0.0), c(0.0, zr)];
        let grid = sum_on_grid(heat, &phi, a, &ts, &zs, &quad());
        for (i, t) in ts.iter().enumerate() {
            for (j, z) in zs.iter().enumerate() {
                prop_assert_eq!(&grid[i][j], &heat_sum(&phi, a, *t, *z, &quad()));
            }
        }
    }
}
