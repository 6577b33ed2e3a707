//! Paired full/homogenized verification suites on the bundled scenarios.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::config::{ResponsePath, Scenario, TimeMode};
use super::pipeline::{run_full, run_macro, RunOutput};
use crate::error::{Error, Result};

/// Bundled scenarios, by file stem.
pub const BUNDLED: &[(&str, &str)] = &[
    ("prism_linear", include_str!("../../configs/prism_linear.toml")),
    ("prism_linear_random", include_str!("../../configs/prism_linear_random.toml")),
    ("prism_nonlinear", include_str!("../../configs/prism_nonlinear.toml")),
    ("prism_transient", include_str!("../../configs/prism_transient.toml")),
    ("small_dam", include_str!("../../configs/small_dam.toml")),
    ("adiabatic_block", include_str!("../../configs/adiabatic_block.toml")),
    ("rve_study", include_str!("../../configs/rve_study.toml")),
    ("rve_3d", include_str!("../../configs/rve_3d.toml")),
    ("skewed", include_str!("../../configs/skewed.toml")),
];

pub fn bundled_scenario(name: &str) -> Result<Scenario> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("no bundled scenario '{name}'")))?;
    Scenario::from_toml_str(text)
}

/// Analytic flux of the homogeneous linear prism (g/day): λ₀ Δp A / L.
pub const LINEAR_PRISM_FLUX: f64 = 121.35;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Linear,
    Nonlinear,
    Transient,
    Htc,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Linear, Suite::Nonlinear, Suite::Transient, Suite::Htc];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Linear => "linear",
            Suite::Nonlinear => "nonlinear",
            Suite::Transient => "transient",
            Suite::Htc => "htc",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// Human-readable tolerance.
    pub expected: String,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &str, measured: f64, limit: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            expected: format!("<= {limit:e}"),
            pass: measured <= limit,
        }
    }

    fn at_least(name: &str, measured: f64, limit: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            expected: format!(">= {limit:e}"),
            pass: measured >= limit,
        }
    }

    fn near(name: &str, measured: f64, target: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            expected: format!("{target} +- {tol}"),
            pass: (measured - target).abs() <= tol,
        }
    }
}

/// Results of one suite; the runs are kept for reporting.
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub runs: Vec<(String, RunOutput)>,
    pub elapsed: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn run(&self, label: &str) -> Option<&RunOutput> {
        self.runs.iter().find(|(l, _)| l == label).map(|(_, r)| r)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {} {}: measured {:.6e}, expected {}",
                if c.pass { "PASS" } else { "FAIL" },
                self.suite,
                c.name,
                c.measured,
                c.expected
            )?;
        }
        write!(f, "{} suite: {} ({:.1} s)", self.suite, if self.passed() { "pass" } else { "fail" }, self.elapsed)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn final_flux(out: &RunOutput, set: &str) -> Result<f64> {
    out.final_flux(set)
        .ok_or_else(|| Error::Config(format!("run has no boundary set '{set}'")))
}

fn profile_rows<'a>(o: &'a RunOutput, name: &str, step: usize) -> Option<&'a [Vec<f64>]> {
    o.profiles
        .iter()
        .find(|p| p.name == name && p.step == step)
        .map(|p| p.rows.as_slice())
}

/// RMS difference of the first field between two profiles of the same name
/// recorded at the same step.
pub fn profile_rms(a: &RunOutput, b: &RunOutput, name: &str, step: usize) -> Option<f64> {
    let (ra, rb) = (profile_rows(a, name, step)?, profile_rows(b, name, step)?);
    if ra.len() != rb.len() || ra.is_empty() {
        return None;
    }
    let ss: f64 = ra.iter().zip(rb).map(|(x, y)| (x[1] - y[1]).powi(2)).sum();
    Some((ss / ra.len() as f64).sqrt())
}

/// RMS of the profile difference averaged over windows of one `period`
/// (trapezoidal, every window start). The averaging removes a fluctuation
/// with that period; the sample spacing must divide it.
pub fn profile_period_rms(a: &RunOutput, b: &RunOutput, name: &str, step: usize, period: f64) -> Option<f64> {
    let (ra, rb) = (profile_rows(a, name, step)?, profile_rows(b, name, step)?);
    if ra.len() != rb.len() || ra.len() < 2 {
        return None;
    }
    let ds = ra[1][0] - ra[0][0];
    let m = (period / ds).round() as usize;
    if m == 0 || (m as f64 * ds - period).abs() > 1e-9 * period || m >= ra.len() {
        return None;
    }
    let d: Vec<f64> = ra.iter().zip(rb).map(|(x, y)| x[1] - y[1]).collect();
    let means: Vec<f64> = (0..d.len() - m)
        .map(|i| (0.5 * (d[i] + d[i + m]) + d[i + 1..i + m].iter().sum::<f64>()) / m as f64)
        .collect();
    Some((means.iter().map(|x| x * x).sum::<f64>() / means.len() as f64).sqrt())
}

/// Checks and the labelled runs behind them.
type SuiteRuns = (Vec<Check>, Vec<(String, RunOutput)>);

fn linear() -> Result<SuiteRuns> {
    let mut checks = Vec::new();
    let homog = run_macro(&bundled_scenario("prism_linear")?)?;
    let h_in = final_flux(&homog, "right")?;
    checks.push(Check::at_most(
        "homogeneous macro inflow vs analytic (rel)",
        rel(h_in, LINEAR_PRISM_FLUX),
        5e-3,
    ));

    let s = bundled_scenario("prism_linear_random")?;
    let (m, f) = rayon::join(|| run_macro(&s), || run_full(&s));
    let (m, f) = (m?, f?);
    for set in ["right", "left"] {
        checks.push(Check::at_most(
            &format!("randomized macro vs full, {set} (rel)"),
            rel(final_flux(&m, set)?, final_flux(&f, set)?),
            1e-2,
        ));
    }
    let (fin, fout) = (final_flux(&f, "right")?, final_flux(&f, "left")?);
    checks.push(Check::at_most("full steady balance (rel)", (fin + fout).abs() / fin, 1e-8));
    Ok((checks, vec![("homogeneous_macro".into(), homog), ("macro".into(), m), ("full".into(), f)]))
}

/// Coarse variant of a prism scenario: four equal elements.
pub fn coarse(mut s: Scenario) -> Scenario {
    if let Some(m) = s.macro_mesh.as_mut() {
        m.x_widths = vec![0.3; 4];
    }
    s.name.push_str("_coarse");
    s
}

fn max_step_deviation(a: &RunOutput, b: &RunOutput, set: &str) -> f64 {
    a.flux_history(set)
        .iter()
        .zip(b.flux_history(set))
        .map(|(x, y)| rel(x.1, y.1))
        .fold(0.0, f64::max)
}

fn nonlinear() -> Result<SuiteRuns> {
    let s = bundled_scenario("prism_nonlinear")?;
    let c = coarse(s.clone());
    let (full, (adaptive, coarse)) = rayon::join(|| run_full(&s), || rayon::join(|| run_macro(&s), || run_macro(&c)));
    let (full, adaptive, coarse) = (full?, adaptive?, coarse?);
    let mut checks = Vec::new();
    for set in ["right", "left"] {
        checks.push(Check::at_most(
            &format!("adaptive macro vs full, {set}, worst step (rel)"),
            max_step_deviation(&adaptive, &full, set),
            3e-2,
        ));
    }
    let last = s.time.segments.iter().map(|x| x.1).sum();
    let period = s.geometry.rve_size[0];
    let ea = profile_period_rms(&adaptive, &full, "center", last, period).unwrap_or(f64::NAN);
    let ec = profile_period_rms(&coarse, &full, "center", last, period).unwrap_or(f64::NAN);
    checks.push(Check::at_least("coarse / adaptive period-averaged profile error", ec / ea, 1.0 + 1e-12));
    Ok((
        checks,
        vec![("full".into(), full), ("adaptive".into(), adaptive), ("coarse".into(), coarse)],
    ))
}

fn transient() -> Result<SuiteRuns> {
    let tr = bundled_scenario("prism_transient")?;
    let mut st = bundled_scenario("prism_nonlinear")?;
    st.outputs = Default::default();
    assert_eq!(st.time.mode, TimeMode::Steady);
    let ((mt, ft), (ms, fs)) = rayon::join(
        || rayon::join(|| run_macro(&tr), || run_full(&tr)),
        || rayon::join(|| run_macro(&st), || run_full(&st)),
    );
    let (mt, ft, ms, fs) = (mt?, ft?, ms?, fs?);
    let mut checks = Vec::new();
    for (label, t, s) in [("macro", &mt, &ms), ("full", &ft, &fs)] {
        for set in ["right", "left"] {
            checks.push(Check::at_most(
                &format!("{label} transient vs steady, {set} (rel)"),
                rel(final_flux(t, set)?, final_flux(s, set)?),
                1e-2,
            ));
        }
    }
    Ok((
        checks,
        vec![
            ("macro_transient".into(), mt),
            ("full_transient".into(), ft),
            ("macro_steady".into(), ms),
            ("full_steady".into(), fs),
        ],
    ))
}

/// `(time, value)` of the maximum of column `col` of a point history.
pub fn peak(rows: &[Vec<f64>], col: usize) -> (f64, f64) {
    rows.iter()
        .map(|r| (r[0], r[col]))
        .fold((f64::NAN, f64::MIN), |a, b| if b.1 > a.1 { b } else { a })
}

fn point<'a>(out: &'a RunOutput, label: &str) -> Result<&'a [Vec<f64>]> {
    out.points
        .iter()
        .find(|(l, _)| l == label)
        .map(|(_, r)| r.as_slice())
        .ok_or_else(|| Error::Config(format!("run has no point '{label}'")))
}

fn htc() -> Result<SuiteRuns> {
    let mut checks = Vec::new();
    let ad = bundled_scenario("adiabatic_block")?;
    let adiabatic = run_macro(&ad)?;
    let (_, t_max) = peak(point(&adiabatic, "center")?, 2);
    checks.push(Check::near("adiabatic temperature rise (K)", t_max - ad.initial.t, 35.6, 0.5));

    // Sequential so the timings are not disturbed by each other.
    let s = bundled_scenario("small_dam")?;
    let m = run_macro(&s)?;
    let f = run_full(&s)?;
    let (pm, pf) = (point(&m, "A")?, point(&f, "A")?);
    let (tm, vm) = peak(pm, 2);
    let (tf, vf) = peak(pf, 2);
    checks.push(Check::at_most("point A peak time difference (h)", (tm - tf).abs() / 3600.0, 6.0));
    checks.push(Check::at_most("point A peak temperature difference (K)", (vm - vf).abs(), 1.0));
    let dh = pm.iter().zip(pf).map(|(a, b)| (a[1] - b[1]).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("point A humidity max deviation", dh, 0.02));
    let da = (pm.last().unwrap()[3] - pf.last().unwrap()[3]).abs();
    checks.push(Check::at_most("point A final alpha_c difference", da, 0.01));
    let dmean = (m.mean_alpha_c.unwrap_or(f64::NAN) - f.mean_alpha_c.unwrap_or(f64::NAN)).abs();
    checks.push(Check::at_most("mean final alpha_c difference", dmean, 0.01));
    checks.push(Check::at_least("speed-up full/macro", f.elapsed / m.elapsed, 10.0));
    Ok((
        checks,
        vec![("adiabatic".into(), adiabatic), ("macro".into(), m), ("full".into(), f)],
    ))
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let started = Instant::now();
    let (checks, runs) = match suite {
        Suite::Linear => linear()?,
        Suite::Nonlinear => nonlinear()?,
        Suite::Transient => transient()?,
        Suite::Htc => htc()?,
    };
    Ok(SuiteReport {
        suite,
        checks,
        runs,
        elapsed: started.elapsed().as_secs_f64(),
    })
}

/// Slow-path variant of a scenario (RVE solved at every integration point).
pub fn with_slow_response(mut s: Scenario) -> Scenario {
    if let Some(m) = s.macro_mesh.as_mut() {
        m.response = ResponsePath::Slow;
    }
    s
}
