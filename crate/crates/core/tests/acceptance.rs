//! End-to-end acceptance run: one line per criterion.
//!
//! Runs as a plain binary so the PASS/FAIL lines are always printed. The
//! process fails if the set of failing criteria differs from
//! [`KNOWN_FAILURES`].

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use borel_stokes::stokes::jump_function;
use borel_stokes::*;
use num_rational::Rational64;

/// Criteria that cannot hold as stated. 8 asks |J(t)|/|t|^N to decrease
/// along |t| = 0.1·2^{−j}; with |J| ~ √(π/|t|) e^{−1/(4|t|)} the first
/// halving multiplies the ratio by e^{−2.5}·2^{N+1/2} > 1 once N ≥ 3.
const KNOWN_FAILURES: &[u32] = &[8];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pole(z0: Complex64) -> CauchyDatum {
    CauchyDatum::simple_pole(z0, c(1.0, 0.0)).unwrap()
}

fn heat_t(m: f64, a: f64) -> RiemannPoint {
    RiemannPoint::on(Equation::heat(), m, a).unwrap()
}

type Outcome = Result<(bool, String)>;

fn kernel_identity() -> Outcome {
    let params = KernelParams::new(Rational64::from_integer(2), 1e-14, 1000)?;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let tau = Complex64::from_polar(0.4 * (i + 1) as f64, 2.0 * PI * j as f64 / 10.0 + 0.1);
            let exact = (-tau * tau / 4.0).exp() / PI.sqrt();
            worst = worst.max((kernel_c(&params, tau)? - exact).norm());
        }
    }
    Ok((worst < 1e-10, format!("max |C2 - gaussian| = {worst:.2e} over 100 points")))
}

fn exact_solutions() -> Outcome {
    let quad = QuadratureSpec::default();
    let exp = CauchyDatum::exponential(c(1.0, 0.0));
    let sq = CauchyDatum::monomial(2);
    let (mut e_worst, mut s_worst): (f64, f64) = (0.0, 0.0);
    for k in 0..10 {
        let t = heat_t(0.05 * (k + 1) as f64, -1.2 + 0.25 * k as f64);
        let z = Complex64::from_polar(0.1 * k as f64, 0.7 * k as f64);
        let u = heat_sum(&exp, t.argument, t, z, &quad)?;
        e_worst = e_worst.max((u.value - (z + t.to_complex()).exp()).norm());
        let u = heat_sum(&sq, t.argument, t, z, &quad)?;
        s_worst = s_worst.max((u.value - (z * z + 2.0 * t.to_complex())).norm());
    }
    Ok((e_worst < 1e-8 && s_worst < 1e-10, format!("e^z err {e_worst:.2e}, z^2 err {s_worst:.2e}")))
}

// −i √(π/0.1) e^{−2.5}
const HEAT_JUMP: f64 = -0.460_085_696_284_988_8;

fn triple_agreement() -> Outcome {
    let heat = Equation::heat();
    let phi = pole(c(1.0, 0.0));
    let t = heat_t(0.1, 0.0);
    let z = c(0.0, 0.0);
    let line = &stokes::singular_directions(heat, &phi)[0];
    let a = jump_closed_form(heat, &phi, line, t, z)?.value;
    let b = residue_jump(heat, &phi, -PI / 4.0, PI / 4.0, t, z)?.value;
    let q = jump_quadrature(heat, &phi, line, t, z, &QuadratureSpec::default())?.value;
    let d = (a - b).norm().max((a - q).norm()).max((b - q).norm());
    let anchor = (a - c(0.0, HEAT_JUMP)).norm();
    Ok((d < 1e-5 && anchor < 1e-9, format!("closed {a:.9}, residue {b:.9}, quadrature {q:.9}; max pairwise {d:.2e}")))
}

fn sheet_antisymmetry() -> Outcome {
    let heat = Equation::heat();
    let phi = pole(c(1.0, 0.0));
    let z = c(0.0, 0.0);
    let lines = stokes::singular_directions(heat, &phi);
    let mut closed: f64 = 0.0;
    for arg in [0.0, 2.0 * PI, 1.0] {
        let t = heat_t(0.1, arg);
        let j0 = jump_function(heat, &phi, &lines[0], t, z)?;
        let j1 = jump_function(heat, &phi, &lines[1], t, z)?;
        closed = closed.max((j1 + j0).norm());
    }
    let t2 = heat_t(0.1, 2.0 * PI);
    let quad = jump_quadrature(heat, &phi, &lines[1], t2, z, &QuadratureSpec::default())?.value;
    let quad_err = (quad + jump_function(heat, &phi, &lines[0], t2, z)?).norm();

    let mut cyclic: f64 = 0.0;
    for (eq, arg) in [(heat, 0.3), (Equation::new(1, 3)?, 0.3)] {
        let t = RiemannPoint::on(eq, 0.1, arg)?;
        let mut sum = c(0.0, 0.0);
        for line in stokes::singular_directions(eq, &phi) {
            sum += residue_jump(eq, &phi, line.direction - 0.3, line.direction + 0.3, t, z)?.value;
        }
        cyclic = cyclic.max(sum.norm());
    }
    let pass = closed < 1e-10 && quad_err < 1e-5 && cyclic < 1e-5;
    Ok((pass, format!("closed {closed:.2e}, quadrature {quad_err:.2e}, cyclic sum {cyclic:.2e}")))
}

fn direction_independence() -> Outcome {
    let phi = pole(c(1.0, 0.0));
    let quad = QuadratureSpec::default();
    let samples = [
        (0.05, 1.5, c(0.0, 0.0)),
        (0.1, 1.4, c(0.1, 0.0)),
        (0.2, 1.6, c(0.0, -0.1)),
        (0.3, 1.5, c(0.05, 0.05)),
        (0.15, 1.45, c(-0.2, 0.1)),
    ];
    let mut worst: f64 = 0.0;
    let (mut diff, mut err): (f64, f64) = (0.0, f64::INFINITY);
    let mut pass = true;
    for (m, a, z) in samples {
        let t = heat_t(m, a);
        let u1 = heat_sum(&phi, 0.4, t, z, &quad)?;
        let u2 = heat_sum(&phi, 2.6, t, z, &quad)?;
        let ratio = (u1.value - u2.value).norm() / (u1.err_est + u2.err_est);
        pass &= ratio < 10.0;
        worst = worst.max(ratio);
        diff = diff.max((u1.value - u2.value).norm());
        err = err.min(u1.err_est + u2.err_est);
    }
    Ok((pass, format!("max |u1 - u2| / combined err_est = {worst:.3}, max |u1 - u2| = {diff:.2e}, min err_est = {err:.2e}")))
}

fn monodromy() -> Outcome {
    let phi = pole(c(1.0, 0.0));
    let quad = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for eq in [Equation::heat(), Equation::new(1, 3)?] {
        let t = RiemannPoint::on(eq, 0.1, 1.2)?;
        let z = c(0.1, 0.05);
        let a = borel::borel_sum(eq, &phi, 1.3, t, z, &quad)?;
        let b = borel::borel_sum(eq, &phi, 1.3, t.with_argument(1.2 + eq.period()), z, &quad)?;
        worst = worst.max((a.value - b.value).norm());
    }
    Ok((worst < 1e-12, format!("max difference after one period {worst:.2e}")))
}

fn gevrey_asymptotics() -> Outcome {
    let heat = Equation::heat();
    let phi = pole(c(1.0, 0.0));
    let f = formal_solution(heat, &phi)?;
    let quad = QuadratureSpec::default();
    let z = c(0.0, 0.0);
    // (N, |t|, remainder, first omitted term)
    let mut rows = Vec::new();
    for j in 0..6 {
        let m = 0.02 * 0.5f64.powi(j);
        let t = heat_t(m, PI);
        let u = heat_sum(&phi, PI, t, z, &quad)?;
        let terms = f.terms(t.to_complex(), z, 13)?;
        let mut s = c(0.0, 0.0);
        for n in 0..=12 {
            s += terms[n];
            let omitted = terms[n + 1].norm();
            // the remainder is resolved only above the quadrature noise
            if omitted > 1e3 * u.err_est.max(1e-15) {
                rows.push((n, m, (u.value - s).norm()));
            }
        }
    }
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let scaled: Vec<(f64, f64)> = rows.iter().map(|&(n, m, r)| (n as f64, (r / (fact(n) * m.powi(n as i32 + 1))).ln())).collect();
    let k = scaled.len() as f64;
    let (mx, my) = scaled.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / k, b + y / k));
    let sxx: f64 = scaled.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = scaled.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let ln_b = sxy / sxx;
    let ln_a = scaled.iter().map(|&(x, y)| y - ln_b * x).fold(f64::NEG_INFINITY, f64::max);
    // the max makes every residual nonnegative up to rounding
    let (a, b) = (ln_a.exp() * (1.0 + 1e-12), ln_b.exp());
    let min_residual = rows
        .iter()
        .map(|&(n, m, r)| a * b.powi(n as i32) * fact(n) * m.powi(n as i32 + 1) - r)
        .fold(f64::INFINITY, f64::min);
    let fit_ok = a.is_finite() && b.is_finite() && b > 0.0 && min_residual >= 0.0 && rows.len() >= 20;

    let t = heat_t(0.01, PI);
    let u = heat_sum(&phi, PI, t, z, &quad)?;
    let opt = optimal_truncation(&f, t.to_complex(), z, 200)?;
    let gap = (u.value - opt.value).norm();
    let opt_ok = gap <= u.err_est + opt.err_est;
    Ok((
        fit_ok && opt_ok,
        format!(
            "{} resolved points, A = {a:.3e}, B = {b:.3}, min residual {min_residual:.2e}; optimal truncation N* = {} off by {gap:.2e} (allowed {:.2e})",
            rows.len(),
            opt.n_star,
            u.err_est + opt.err_est
        ),
    ))
}

fn exponential_smallness() -> Outcome {
    let heat = Equation::heat();
    let phi = pole(c(1.0, 0.0));
    let line = &stokes::singular_directions(heat, &phi)[0];
    let mut mags = Vec::new();
    for j in 0..=6 {
        let m = 0.1 * 0.5f64.powi(j);
        mags.push((m, jump_closed_form(heat, &phi, line, heat_t(m, 0.0), c(0.0, 0.0))?.value.norm()));
    }
    let mut bad = Vec::new();
    for n in 0..=10 {
        let ratios: Vec<f64> = mags.iter().map(|&(m, j)| j / m.powi(n)).collect();
        if !ratios.windows(2).all(|w| w[1] < w[0]) {
            bad.push(n);
        }
    }
    Ok((bad.is_empty(), format!("ratio not monotone for N in {bad:?}")))
}

fn family_verification() -> Outcome {
    let quad = QuadratureSpec::default();
    let cases = [
        ("heat z0=1", Equation::heat(), pole(c(1.0, 0.0)), 2),
        ("heat z0 in {1, i}", Equation::heat(), pole(c(1.0, 0.0)).plus(&pole(c(0.0, 1.0))), 4),
        ("p=1 q=3 z0=1", Equation::new(1, 3)?, pole(c(1.0, 0.0)), 3),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, eq, phi, size) in cases {
        let fam = maximal_family(eq, &phi, 0.1, 1.0)?;
        let report = verify_family(eq, &phi, &fam, &quad, 3);
        let ok = fam.len() == size && report.passed();
        if !ok {
            for chk in report.checks.iter().filter(|c| !c.pass) {
                parts.push(format!("{name} {}: {}", chk.name, chk.detail));
            }
        }
        pass &= ok;
        parts.push(format!("{name}: {} members, {}", fam.len(), if ok { "all checks pass" } else { "FAILED" }));
    }
    Ok((pass, parts.join("; ")))
}

fn gevrey_orders() -> Outcome {
    let phi = pole(c(1.0, 0.0));
    let z = c(0.0, 0.0);
    let s_heat = gevrey_estimate(&formal_solution(Equation::heat(), &phi)?, z, 40)?;
    let s_cubic = gevrey_estimate(&formal_solution(Equation::new(1, 3)?, &phi)?, z, 40)?;
    let pass = (s_heat - 1.0).abs() <= 0.15 && (s_cubic - 2.0).abs() <= 0.25;
    Ok((pass, format!("heat {s_heat:.4}, p=1 q=3 {s_cubic:.4}")))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "kernel identity", kernel_identity),
        (2, "exact-solution reproduction", exact_solutions),
        (3, "jump triple agreement", triple_agreement),
        (4, "sheet antisymmetry and cancellation", sheet_antisymmetry),
        (5, "direction independence", direction_independence),
        (6, "monodromy", monodromy),
        (7, "Gevrey asymptotics", gevrey_asymptotics),
        (8, "exponential smallness of jumps", exponential_smallness),
        (9, "family verification", family_verification),
        (10, "Gevrey-order estimates", gevrey_orders),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {id:>2} ({name}): {detail} [{secs:.2}s]", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(id);
        }
    }
    if failed == KNOWN_FAILURES {
        println!("acceptance: failures match the documented set {KNOWN_FAILURES:?}");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing {failed:?}, documented {KNOWN_FAILURES:?}");
        ExitCode::FAILURE
    }
}
