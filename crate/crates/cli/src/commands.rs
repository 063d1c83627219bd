use std::path::PathBuf;

use borel_stokes::borel::{borel_sum, reduce_angle};
use borel_stokes::special_fn::kernel_c;
use borel_stokes::{
    anti_stokes_directions, formal_solution, general_sum, gevrey_estimate, jump_closed_form,
    jump_quadrature, maximal_family, optimal_truncation, residue_jump, singular_directions,
    sum_on_grid, verify_family, BorelSumResult, Complex64, Error, FamilyMember, FamilyReport,
    JumpResult, KernelParams, OptimalTruncation, RiemannPoint, StokesLine,
};
use clap::{Args, ValueEnum};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{num, parse_grid, write_csv, write_json};
use crate::problem::{load, Problem};
use crate::{Failure, Format, OutputArgs};

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// JSON problem file with keys p, q, datum and optional quad.
    #[arg(long)]
    pub problem: PathBuf,
    /// Override the quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, default_value_t = 0.1)]
    pub t_mod: f64,
    /// arg t on the universal cover.
    #[arg(long, allow_hyphen_values = true)]
    pub t_arg: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_im: f64,
}

impl PointArgs {
    fn z(&self) -> Complex64 {
        Complex64::new(self.z_re, self.z_im)
    }

    fn t(&self, problem: &Problem, default_arg: f64) -> Result<RiemannPoint, Failure> {
        Ok(RiemannPoint::on(problem.eq, self.t_mod, self.t_arg.unwrap_or(default_arg))?)
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

// kernel

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// α > 1, integer or fraction such as 3/2.
    #[arg(long)]
    pub alpha: String,
    /// |τ| values as START:END:COUNT.
    #[arg(long, default_value = "0:4:9")]
    pub grid: String,
    /// Direction of the ray in the τ-plane.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau_arg: f64,
    #[arg(long, default_value_t = KernelParams::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct KernelRow {
    tau: [f64; 2],
    value: [f64; 2],
}

pub fn kernel(a: KernelArgs) -> Result<(), Failure> {
    let alpha: Rational64 = a.alpha.trim().parse().map_err(|_| Failure::usage(format!("alpha must be rational, got {:?}", a.alpha)))?;
    let params = KernelParams::new(alpha, a.tol, KernelParams::DEFAULT_MAX_TERMS)?;
    let taus: Vec<Complex64> = parse_grid(&a.grid)?.into_iter().map(|r| Complex64::from_polar(r, a.tau_arg)).collect();
    let values = taus.par_iter().map(|&tau| kernel_c(&params, tau)).collect::<Result<Vec<_>, Error>>()?;
    let out = a.output.out.as_deref();
    match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = taus
                .iter()
                .zip(&values)
                .map(|(t, c)| vec![num(t.re), num(t.im), num(c.re), num(c.im)])
                .collect();
            write_csv(&["tau_re", "tau_im", "C_re", "C_im"], &rows, out)
        }
        Format::Json => {
            let rows: Vec<KernelRow> = taus.iter().zip(&values).map(|(&t, &c)| KernelRow { tau: pair(t), value: pair(c) }).collect();
            write_json(&rows, out)
        }
    }
}

// sum

#[derive(Debug, Args)]
pub struct SumArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub point: PointArgs,
    /// Summation direction; defaults to arg t.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Sweep |t| over START:END:COUNT instead of using --t-mod.
    #[arg(long)]
    pub grid: Option<String>,
    /// Use the general kernel path even for the heat equation.
    #[arg(long)]
    pub force_general: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct GridCell {
    t: RiemannPoint,
    z: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    err_est: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'static str>,
}

pub fn sum(a: SumArgs) -> Result<(), Failure> {
    let problem = load(&a.problem.problem, a.problem.tol)?;
    let z = a.point.z();
    let t = a.point.t(&problem, 0.0)?;
    let theta = a.theta.unwrap_or(t.argument);
    let out = a.output.out.as_deref();
    let Some(grid) = &a.grid else {
        let result = if a.force_general {
            general_sum(problem.eq, &problem.datum, theta, t, z, &problem.quad)
        } else {
            borel_sum(problem.eq, &problem.datum, theta, t, z, &problem.quad)
        }?;
        return match a.output.format.unwrap_or(Format::Json) {
            Format::Json => write_json(&result, out),
            Format::Csv => write_csv(&SUM_HEADER, &[sum_row(t, z, Ok(&result))], out),
        };
    };
    let ts = parse_grid(grid)?
        .into_iter()
        .map(|m| RiemannPoint::new(m, t.argument, t.period))
        .collect::<Result<Vec<_>, Error>>()?;
    let cells: Vec<(RiemannPoint, Result<BorelSumResult, Error>)> = if a.force_general {
        ts.par_iter().map(|&ti| (ti, general_sum(problem.eq, &problem.datum, theta, ti, z, &problem.quad))).collect()
    } else {
        let grid = sum_on_grid(problem.eq, &problem.datum, theta, &ts, &[z], &problem.quad);
        ts.iter().copied().zip(grid.into_iter().map(|mut row| row.remove(0))).collect()
    };
    match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = cells.iter().map(|(ti, r)| sum_row(*ti, z, r.as_ref())).collect();
            write_csv(&SUM_HEADER, &rows, out)
        }
        Format::Json => {
            let rows: Vec<GridCell> = cells
                .iter()
                .map(|(ti, r)| GridCell {
                    t: *ti,
                    z: pair(z),
                    value: r.as_ref().ok().map(|v| pair(v.value)),
                    err_est: r.as_ref().ok().map(|v| v.err_est),
                    error: r.as_ref().err().map(Error::name),
                })
                .collect();
            write_json(&rows, out)
        }
    }
}

const SUM_HEADER: [&str; 8] = ["t_mod", "t_arg", "z_re", "z_im", "u_re", "u_im", "err_est", "error"];

fn sum_row(t: RiemannPoint, z: Complex64, r: Result<&BorelSumResult, &Error>) -> Vec<String> {
    let mut row = vec![num(t.modulus), num(t.argument), num(z.re), num(z.im)];
    match r {
        Ok(v) => row.extend([num(v.value.re), num(v.value.im), num(v.err_est), String::new()]),
        Err(e) => row.extend([String::new(), String::new(), String::new(), e.name().to_string()]),
    }
    row
}

// formal

#[derive(Debug, Args)]
pub struct FormalArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub point: PointArgs,
    /// Highest power of t listed, also the truncation cap.
    #[arg(long, default_value_t = 30)]
    pub terms: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct FormalReport {
    t: [f64; 2],
    z: [f64; 2],
    terms: Vec<[f64; 2]>,
    optimal: Option<OptimalTruncation>,
    gevrey_order: Option<f64>,
}

pub fn formal(a: FormalArgs) -> Result<(), Failure> {
    let problem = load(&a.problem.problem, a.problem.tol)?;
    let z = a.point.z();
    let t = Complex64::from_polar(a.point.t_mod, a.point.t_arg.unwrap_or(0.0));
    let f = formal_solution(problem.eq, &problem.datum)?;
    let terms = f.terms(t, z, a.terms)?;
    let out = a.output.out.as_deref();
    match a.output.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut partial = Complex64::new(0.0, 0.0);
            let rows: Vec<Vec<String>> = terms
                .iter()
                .enumerate()
                .map(|(n, &x)| {
                    partial += x;
                    vec![n.to_string(), num(x.re), num(x.im), num(partial.re), num(partial.im)]
                })
                .collect();
            write_csv(&["n", "term_re", "term_im", "partial_re", "partial_im"], &rows, out)
        }
        Format::Json => {
            // a growing or identically vanishing series has no optimum or fit
            let optimal = optional(optimal_truncation(&f, t, z, a.terms))?;
            let gevrey_order = optional(gevrey_estimate(&f, z, a.terms))?;
            let report = FormalReport { t: pair(t), z: pair(z), terms: terms.into_iter().map(pair).collect(), optimal, gevrey_order };
            write_json(&report, out)
        }
    }
}

fn optional<T>(r: Result<T, Error>) -> Result<Option<T>, Failure> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NoMinimum | Error::DegenerateFit) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

// stokes

#[derive(Debug, Args)]
pub struct StokesArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct StokesReport {
    stokes: Vec<f64>,
    anti_stokes: Vec<f64>,
    period: f64,
}

pub fn stokes(a: StokesArgs) -> Result<(), Failure> {
    let problem = load(&a.problem.problem, a.problem.tol)?;
    let dirs = |lines: Vec<StokesLine>| lines.into_iter().map(|l| l.direction).collect::<Vec<_>>();
    let report = StokesReport {
        stokes: dirs(singular_directions(problem.eq, &problem.datum)),
        anti_stokes: dirs(anti_stokes_directions(problem.eq, &problem.datum)),
        period: problem.eq.period(),
    };
    let out = a.output.out.as_deref();
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&report, out),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .stokes
                .iter()
                .map(|&d| ("stokes", d))
                .chain(report.anti_stokes.iter().map(|&d| ("anti_stokes", d)))
                .map(|(kind, d)| vec![kind.to_string(), num(d), num(report.period)])
                .collect();
            write_csv(&["kind", "direction", "period"], &rows, out)
        }
    }
}

// jump

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Closed,
    Residue,
    Quad,
    All,
}

#[derive(Debug, Args)]
pub struct JumpArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub point: PointArgs,
    /// Index into the sorted Stokes lines.
    #[arg(long, default_value_t = 0)]
    pub line: usize,
    #[arg(long, value_enum, default_value_t = Route::All)]
    pub route: Route,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct JumpReport {
    period: f64,
    results: Vec<JumpResult>,
}

/// Half-width of the residue window around line `i`: at most 0.5 and short
/// of the neighbouring lines.
fn residue_half_width(lines: &[StokesLine], i: usize, period: f64) -> f64 {
    let n = lines.len();
    if n == 1 {
        return 0.5;
    }
    let d = lines[i].direction;
    let next = (lines[(i + 1) % n].direction - d).rem_euclid(period);
    let prev = (d - lines[(i + n - 1) % n].direction).rem_euclid(period);
    0.5f64.min(0.5 * next.min(prev))
}

fn run_jumps(problem: &Problem, lines: &[StokesLine], i: usize, t: RiemannPoint, z: Complex64, routes: &[Route]) -> Result<Vec<JumpResult>, Error> {
    let line = &lines[i];
    // the line lifted to the sheet of t
    let d = t.argument + reduce_angle(line.direction - t.argument, t.period);
    let w = residue_half_width(lines, i, t.period);
    routes
        .iter()
        .map(|route| match route {
            Route::Closed => jump_closed_form(problem.eq, &problem.datum, line, t, z),
            Route::Residue => residue_jump(problem.eq, &problem.datum, d - w, d + w, t, z),
            Route::Quad => jump_quadrature(problem.eq, &problem.datum, line, t, z, &problem.quad),
            Route::All => unreachable!(),
        })
        .collect()
}

pub fn jump(a: JumpArgs) -> Result<(), Failure> {
    let problem = load(&a.problem.problem, a.problem.tol)?;
    let lines = singular_directions(problem.eq, &problem.datum);
    if lines.is_empty() {
        return Err(Error::NoStokesLines.into());
    }
    let line = lines
        .get(a.line)
        .ok_or_else(|| Failure::usage(format!("line index {} out of range, {} lines", a.line, lines.len())))?;
    let t = a.point.t(&problem, line.direction)?;
    let routes = match a.route {
        Route::All => vec![Route::Closed, Route::Residue, Route::Quad],
        r => vec![r],
    };
    let results = run_jumps(&problem, &lines, a.line, t, a.point.z(), &routes)?;
    let out = a.output.out.as_deref();
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&JumpReport { period: problem.eq.period(), results }, out),
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    let route = serde_json::to_value(r.route).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
                    vec![route, num(r.line.direction), num(r.value.re), num(r.value.im), num(r.err_est)]
                })
                .collect();
            write_csv(&["route", "direction", "jump_re", "jump_im", "err_est"], &rows, out)
        }
    }
}

// family

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Amount by which each sector falls short of its maximal opening.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Also run the verification checks; exits 2 if one fails.
    #[arg(long)]
    pub verify: bool,
    /// Sample points per member for the verification checks.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct FamilyOutput {
    period: f64,
    members: Vec<FamilyMember>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<FamilyReport>,
}

fn failed_checks(report: &FamilyReport) -> String {
    report.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join("; ")
}

pub fn family(a: FamilyArgs) -> Result<(), Failure> {
    let problem = load(&a.problem.problem, a.problem.tol)?;
    let members = maximal_family(problem.eq, &problem.datum, a.eps, a.radius)?;
    let report = a.verify.then(|| verify_family(problem.eq, &problem.datum, &members, &problem.quad, a.samples.max(1)));
    let out = a.output.out.as_deref();
    let failed = report.as_ref().filter(|r| !r.passed()).map(failed_checks);
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&FamilyOutput { period: problem.eq.period(), members, report }, out)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = members
                .iter()
                .map(|m| {
                    let s = &m.sector;
                    vec![m.index.to_string(), num(s.lower), num(s.upper), num(s.opening()), num(m.representative_theta), num(s.period)]
                })
                .collect();
            write_csv(&["index", "lower", "upper", "opening", "representative_theta", "period"], &rows, out)?
        }
    }
    failed.map_or(Ok(()), |msg| Err(Failure::check(msg)))
}

// verify

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    /// Largest accepted pairwise difference between jump routes.
    #[arg(long, default_value_t = 1e-5)]
    pub jump_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct JumpAgreement {
    results: Vec<JumpResult>,
    max_pairwise: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    pass: bool,
    family: FamilyReport,
    jumps: Option<JumpAgreement>,
}

pub fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let problem = load(&a.problem.problem, a.problem.tol)?;
    let members = maximal_family(problem.eq, &problem.datum, a.eps, a.radius)?;
    let family = verify_family(problem.eq, &problem.datum, &members, &problem.quad, a.samples.max(1));
    let lines = singular_directions(problem.eq, &problem.datum);
    let jumps = match lines.first() {
        None => None,
        Some(line) => {
            let t = a.point.t(&problem, line.direction)?;
            let results = run_jumps(&problem, &lines, 0, t, a.point.z(), &[Route::Closed, Route::Residue, Route::Quad])?;
            let mut max_pairwise: f64 = 0.0;
            for (i, x) in results.iter().enumerate() {
                for y in &results[i + 1..] {
                    max_pairwise = max_pairwise.max((x.value - y.value).norm());
                }
            }
            Some(JumpAgreement { results, max_pairwise, pass: max_pairwise < a.jump_tol })
        }
    };
    let jumps_pass = jumps.as_ref().map_or(true, |j| j.pass);
    let pass = family.passed() && jumps_pass;
    let mut problems = Vec::new();
    if !family.passed() {
        problems.push(failed_checks(&family));
    }
    if let Some(j) = jumps.as_ref().filter(|j| !j.pass) {
        problems.push(format!("jump routes differ by {:.3e}", j.max_pairwise));
    }
    let out = a.output.out.as_deref();
    let report = VerifyOutput { pass, family, jumps };
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&report, out)?,
        Format::Csv => {
            let mut rows: Vec<Vec<String>> =
                report.family.checks.iter().map(|c| vec![c.name.clone(), c.pass.to_string(), c.detail.clone()]).collect();
            if let Some(j) = &report.jumps {
                rows.push(vec!["jump_agreement".into(), j.pass.to_string(), format!("max pairwise {:.3e}", j.max_pairwise)]);
            }
            write_csv(&["check", "pass", "detail"], &rows, out)?
        }
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::check(problems.join("; ")))
    }
}
