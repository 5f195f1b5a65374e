//! Scenario execution and run manifests.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use toml::{Table, Value};

use super::config::{DataRecipe, ExperimentConfig, Scenario};
use super::data::{generate_data, DataContext};
use super::svg::{Axis, LinePlot};
use crate::diagnostics::{
    derivative_gain_trend, square_function_check, strichartz_constant_sample, window_constant, xsb_norm,
    AdmissiblePair, SpaceTimeField, TimeWindow,
};
use crate::evolution::snapshot::{write_snapshot, TRAJECTORY_COLUMNS};
use crate::evolution::{edge_spectrum_ratio, evolve_observed, plane_wave_solution, Integrator, EDGE_SPECTRUM_TOLERANCE};
use crate::fit::median;
use crate::globalizer::{
    almost_conservation_sweep, plan_with, rescale, rescaled_energy_identity_check, scaling_check, CutoffMode,
    PlanInputs, RescaleLimits, SweepResult,
};
use crate::imethod::{case1_multiplier_bound, Case1Regime, EnergyReport, IMultiplier};
use crate::rng::SeededRng;
use crate::spectral::{bernstein_ratio, lp_project, Dyadic, Field2D, LpKind};
use crate::table::{Cell, CsvTable};
use crate::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.toml";

#[derive(Clone, Debug, PartialEq)]
pub struct AssertionOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// What a run produced. Written as `manifest.toml` next to the outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub scenario: Scenario,
    pub seed: u64,
    pub config_digest: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub started: f64,
    pub finished: f64,
    pub files: Vec<String>,
    pub assertions: Vec<AssertionOutcome>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> Vec<&AssertionOutcome> {
        self.assertions.iter().filter(|a| !a.passed).collect()
    }

    pub fn render(&self) -> String {
        let mut t = Table::new();
        t.insert("scenario".into(), Value::String(self.scenario.name().into()));
        t.insert("seed".into(), Value::Integer(self.seed as i64));
        t.insert("config_digest".into(), Value::String(self.config_digest.clone()));
        t.insert("tool_version".into(), Value::String(self.tool_version.clone()));
        t.insert("started".into(), Value::Float(self.started));
        t.insert("finished".into(), Value::Float(self.finished));
        t.insert("passed".into(), Value::Boolean(self.passed()));
        t.insert("files".into(), Value::Array(self.files.iter().cloned().map(Value::String).collect()));
        t.insert("warnings".into(), Value::Array(self.warnings.iter().cloned().map(Value::String).collect()));
        let checks = self
            .assertions
            .iter()
            .map(|a| {
                let mut row = Table::new();
                row.insert("name".into(), Value::String(a.name.clone()));
                row.insert("passed".into(), Value::Boolean(a.passed));
                row.insert("detail".into(), Value::String(a.detail.clone()));
                Value::Table(row)
            })
            .collect();
        t.insert("assertion".into(), Value::Array(checks));
        toml::to_string(&t).expect("manifest serializes")
    }
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Output bookkeeping for one run directory.
struct RunDir {
    dir: PathBuf,
    files: Vec<String>,
    assertions: Vec<AssertionOutcome>,
    warnings: Vec<String>,
}

impl RunDir {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new(), assertions: Vec::new(), warnings: Vec::new() })
    }

    fn csv(&mut self, name: &str, table: &CsvTable) -> Result<()> {
        table.write(&self.dir.join(name))?;
        self.files.push(name.into());
        Ok(())
    }

    fn svg(&mut self, name: &str, plot: &LinePlot) -> Result<()> {
        plot.write(&self.dir.join(name))?;
        self.files.push(name.into());
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        fs::write(self.dir.join(name), body)?;
        self.files.push(name.into());
        Ok(())
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.assertions.push(AssertionOutcome { name: name.into(), passed, detail });
    }
}

fn data_context(cfg: &ExperimentConfig) -> Result<DataContext> {
    let cutoffs = cfg.cutoffs()?;
    let largest_cutoff = cutoffs.iter().copied().max().unwrap_or(Dyadic::from_exponent(5));
    Ok(DataContext { s: cfg.imethod.s, largest_cutoff, dealias_fraction: cfg.solver.dealias })
}

fn initial_data(cfg: &ExperimentConfig) -> Result<Field2D> {
    generate_data(&cfg.data, cfg.seed, cfg.grid_spec()?, &data_context(cfg)?)
}

fn largest_multiplier(cfg: &ExperimentConfig) -> Result<IMultiplier> {
    IMultiplier::new(data_context(cfg)?.largest_cutoff, cfg.imethod.s)
}

/// Runs the configured scenario, writing its outputs and `manifest.toml`
/// into `out_dir`. Assertion failures are recorded in the manifest, not
/// returned as errors.
pub fn run_scenario(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunManifest> {
    cfg.validate()?;
    let started = unix_now();
    let mut run = RunDir::new(out_dir)?;
    match cfg.scenario {
        Scenario::Evolve => evolve_scenario(cfg, &mut run)?,
        Scenario::AlmostConservationSweep => sweep_scenario(cfg, &mut run)?,
        Scenario::ScalingCheck => scaling_scenario(cfg, &mut run)?,
        Scenario::Strichartz => strichartz_scenario(cfg, &mut run)?,
        Scenario::Bernstein => bernstein_scenario(cfg, &mut run)?,
        Scenario::SquareFunction => square_function_scenario(cfg, &mut run)?,
        Scenario::MultiplierBound => multiplier_scenario(cfg, &mut run)?,
        Scenario::PlanGlobalization => plan_scenario(cfg, &mut run)?,
        Scenario::XsbProbe => xsb_scenario(cfg, &mut run)?,
    }
    run.text("config.toml", &cfg.canonical())?;
    let manifest = RunManifest {
        scenario: cfg.scenario,
        seed: cfg.seed,
        config_digest: cfg.digest(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        finished: unix_now(),
        files: run.files,
        assertions: run.assertions,
        warnings: run.warnings,
    };
    fs::write(out_dir.join(MANIFEST_NAME), manifest.render())?;
    Ok(manifest)
}

pub const EVOLVE_COLUMNS: [&str; 7] = ["time", "mass", "energy", "modified_energy", "hs_norm", "linf", "l2_error"];

fn evolve_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    debug_assert_eq!(&EVOLVE_COLUMNS[..6], &TRAJECTORY_COLUMNS[..]);
    let u0 = initial_data(cfg)?;
    let solver = cfg.solver_config();
    let m = largest_multiplier(cfg)?;
    let integ = Integrator::for_config(*u0.grid(), &solver)?;
    let edge = edge_spectrum_ratio(&u0, &integ);
    if edge > EDGE_SPECTRUM_TOLERANCE {
        run.warnings.push(format!("initial spectrum at the dealiasing edge is {edge:.3e} of its peak"));
    }
    let exact = match cfg.data {
        DataRecipe::PlaneWave { wavenumber, amplitude } => Some((wavenumber, amplitude)),
        _ => None,
    };
    let grid = *u0.grid();
    let mut table = CsvTable::new(EVOLVE_COLUMNS);
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    let mut failure = None;
    let last = evolve_observed(&u0, &solver, |t, u| {
        let r = EnergyReport::measure(t, u, Some(&m), cfg.imethod.s);
        let err = exact.map(|(k, a)| {
            plane_wave_solution(grid, k, a, t).and_then(|ex| u.relative_l2_error(&ex)).unwrap_or(f64::NAN)
        });
        if err.is_some_and(|e| e.is_nan()) && failure.is_none() {
            failure = Some(t);
        }
        table.push(vec![
            r.time.into(),
            r.mass.into(),
            r.energy.into(),
            Cell::from(r.modified_energy),
            r.hs_norm.into(),
            r.linf.into(),
            Cell::from(err),
        ]);
        reports.push(r);
        errors.push(err);
    })?;
    if let Some(t) = failure {
        return Err(Error::DegenerateInput(format!("plane-wave reference failed at t = {t}")));
    }
    run.csv("trajectory.csv", &table)?;
    if cfg.evolve.snapshot {
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &last, cfg.solver.t_end)?;
        fs::write(run.dir.join("final.snap"), buf)?;
        run.files.push("final.snap".into());
    }
    let e0 = reports[0].energy;
    let m0 = reports[0].mass;
    let mut plot = LinePlot::new("energy and mass drift", "t", "relative drift", Axis::Linear, Axis::Linear);
    plot.add("energy", reports.iter().map(|r| [r.time, (r.energy - e0) / e0.abs().max(f64::MIN_POSITIVE)]).collect());
    plot.add("mass", reports.iter().map(|r| [r.time, (r.mass - m0) / m0.max(f64::MIN_POSITIVE)]).collect());
    run.svg("drift.svg", &plot)?;

    if exact.is_some() {
        let final_err = errors.last().copied().flatten().unwrap_or(f64::NAN);
        run.check(
            "plane-wave L2 error",
            final_err <= cfg.evolve.max_l2_error,
            format!("{final_err:.3e} <= {:e}", cfg.evolve.max_l2_error),
        );
    }
    if let Some(tol) = cfg.evolve.max_mass_drift {
        let drift = reports.iter().map(|r| ((r.mass - m0) / m0).abs()).fold(0.0, f64::max);
        run.check("mass drift", drift <= tol, format!("{drift:.3e} <= {tol:e}"));
    }
    Ok(())
}

pub const SWEEP_SUMMARY_COLUMNS: [&str; 6] =
    ["seed", "slope", "strictly_decreasing", "trivial_regime", "max_increment_n3", "config_digest"];

fn sweep_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    let grid = cfg.grid_spec()?;
    let ctx = data_context(cfg)?;
    let ns = cfg.cutoffs()?;
    let mut solver = cfg.solver_config();
    solver.t_end = cfg.sweep.delta;
    let digest = cfg.digest();
    let first = cfg.seed;
    let mut results: Vec<SweepResult> = Vec::new();
    for seed in first..first + cfg.sweep.seeds as u64 {
        let u0 = generate_data(&cfg.data, seed, grid, &ctx)?;
        let mut r = almost_conservation_sweep(&u0, cfg.imethod.s, &ns, &solver, seed, cfg.sweep.normalization)?;
        r.config_digest = digest.clone();
        if r.trivial_regime {
            run.warnings.push(format!("seed {seed}: data lie below every cutoff (trivial regime)"));
        }
        results.push(r);
    }
    let mut all: Option<CsvTable> = None;
    for r in &results {
        let t = r.table();
        match &mut all {
            None => all = Some(t),
            Some(acc) => {
                for row in t.rows() {
                    acc.push(row.clone());
                }
            }
        }
    }
    run.csv("sweep.csv", &all.expect("at least one seed"))?;

    let mut summary = CsvTable::new(SWEEP_SUMMARY_COLUMNS);
    let mut c_inc = 0.0f64;
    for r in &results {
        let worst = r.ns.iter().zip(&r.increments).map(|(n, i)| i * n.as_f64().powi(3)).fold(0.0, f64::max);
        c_inc = c_inc.max(worst);
        summary.push(vec![
            r.seed.into(),
            r.slope.into(),
            u64::from(r.strictly_decreasing()).into(),
            u64::from(r.trivial_regime).into(),
            worst.into(),
            digest.clone().into(),
        ]);
    }
    run.csv("summary.csv", &summary)?;

    let slopes: Vec<f64> = results.iter().map(|r| r.slope).collect();
    let med = median(&slopes);
    let decreasing = results.iter().filter(|r| r.strictly_decreasing()).count();
    let mut agg = CsvTable::new(["seeds", "strictly_decreasing", "median_slope", "reference_slope", "implied_c1"]);
    let implied_c1 = if c_inc > 0.0 { Some(0.5 / c_inc) } else { None };
    agg.push(vec![results.len().into(), decreasing.into(), med.into(), (-3.0).into(), Cell::from(implied_c1)]);
    run.csv("aggregate.csv", &agg)?;

    let mut plot = LinePlot::new("modified-energy increment", "N", "sup |E(I u(t)) - E(I u(0))|", Axis::Log, Axis::Log);
    for r in &results {
        plot.add(
            format!("seed {}", r.seed),
            r.ns.iter().zip(&r.increments).map(|(n, &i)| [n.as_f64(), i]).collect(),
        );
    }
    let first_medians = median(&results.iter().map(|r| r.increments[0]).collect::<Vec<_>>());
    let n0 = ns[0].as_f64();
    plot.add("N^-3", ns.iter().map(|n| [n.as_f64(), first_medians * (n.as_f64() / n0).powi(-3)]).collect());
    run.svg("sweep.svg", &plot)?;

    let need = (cfg.sweep.min_decreasing_fraction * results.len() as f64 - 1e-9).ceil() as usize;
    run.check(
        "increments strictly decreasing in N",
        decreasing >= need,
        format!("{decreasing}/{} seeds (need {need})", results.len()),
    );
    run.check(
        "median log-log slope",
        med <= cfg.sweep.max_median_slope,
        format!("{med:.3} <= {} (asymptotic rate -3)", cfg.sweep.max_median_slope),
    );
    Ok(())
}

pub const SCALING_COLUMNS: [&str; 6] =
    ["dt", "lambda", "discrepancy", "mass_defect", "identity_fixed", "identity_covariant"];

fn scaling_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    let u0 = initial_data(cfg)?;
    let sc = &cfg.scaling;
    let limits = RescaleLimits { max_points_per_side: cfg.limits.max_grid, ..Default::default() };
    let m = largest_multiplier(cfg)?;
    let v0 = rescale(&u0, sc.lambda, &limits)?;
    let mass_defect = (v0.l2_norm() / u0.l2_norm() - 1.0).abs();
    let mut table = CsvTable::new(SCALING_COLUMNS);
    let mut discrepancies = Vec::new();
    for dt in [cfg.solver.dt, cfg.solver.dt / 2.0] {
        let solver = crate::evolution::SolverConfig { dt, ..cfg.solver_config() };
        let d = scaling_check(&u0, sc.lambda, sc.t, &solver, &limits)?;
        let fixed =
            rescaled_energy_identity_check(&u0, &m, sc.lambda, sc.t, &solver, CutoffMode::Fixed, &limits)?;
        let cov =
            rescaled_energy_identity_check(&u0, &m, sc.lambda, sc.t, &solver, CutoffMode::Covariant, &limits)?;
        table.push(vec![
            dt.into(),
            sc.lambda.into(),
            d.into(),
            mass_defect.into(),
            fixed.discrepancy.into(),
            cov.discrepancy.into(),
        ]);
        discrepancies.push(d);
    }
    run.csv("scaling.csv", &table)?;
    let mut plot = LinePlot::new("scaling discrepancy", "dt", "relative L2 discrepancy", Axis::Log, Axis::Log);
    plot.add(
        "u_lambda vs rescaled u",
        [cfg.solver.dt, cfg.solver.dt / 2.0].into_iter().zip(&discrepancies).map(|(a, &b)| [a, b]).collect(),
    );
    run.svg("scaling.svg", &plot)?;
    run.check(
        "scaling discrepancy",
        discrepancies[0] <= sc.tolerance,
        format!(
            "{:.3e} <= {:e} (dt/2 gives {:.3e}, reduction {:.2})",
            discrepancies[0],
            sc.tolerance,
            discrepancies[1],
            discrepancies[0] / discrepancies[1]
        ),
    );
    run.check("mass invariance", mass_defect <= sc.mass_tolerance, format!("{mass_defect:.3e} <= {:e}", sc.mass_tolerance));
    Ok(())
}

fn strichartz_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    let st = &cfg.strichartz;
    let pair = AdmissiblePair::new(st.p, st.q, st.mu)?;
    if st.mu == 0.0 {
        let window = TimeWindow::new(st.delta, st.time_samples)?;
        let rep = strichartz_constant_sample(pair, st.trials, cfg.seed, cfg.grid_spec()?, window)?;
        let mut t = CsvTable::new(["trial", "ratio"]);
        for (i, r) in rep.ratios.iter().enumerate() {
            t.push(vec![i.into(), (*r).into()]);
        }
        run.csv("ratios.csv", &t)?;
        let mut s = CsvTable::new(["p", "q", "mu", "trials", "max", "median", "max_over_median"]);
        s.push(vec![
            st.p.into(),
            st.q.into(),
            st.mu.into(),
            st.trials.into(),
            rep.max.into(),
            rep.median.into(),
            rep.max_over_median().into(),
        ]);
        run.csv("summary.csv", &s)?;
        let mut plot = LinePlot::new(&format!("Strichartz ratio, pair {pair}"), "trial", "ratio", Axis::Linear, Axis::Linear);
        plot.add("ratio", rep.ratios.iter().enumerate().map(|(i, &r)| [i as f64, r]).collect());
        run.svg("ratios.svg", &plot)?;
        run.check(
            "max over median",
            rep.max_over_median() <= st.max_ratio_spread,
            format!("{:.4} <= {}", rep.max_over_median(), st.max_ratio_spread),
        );
    } else {
        let shells = st.shells.iter().map(|&n| Dyadic::new(n)).collect::<Result<Vec<_>>>()?;
        let setup = cfg.gain_setup();
        let trend = derivative_gain_trend(pair, &shells, &setup)?;
        let mut t = CsvTable::new(["N", "horizon", "median", "max", "slope"]);
        for (n, rep) in trend.shells.iter().zip(&trend.reports) {
            t.push(vec![n.value().into(), setup.horizon(*n).into(), rep.median.into(), rep.max.into(), trend.slope.into()]);
        }
        run.csv("gain.csv", &t)?;
        let mut plot = LinePlot::new(&format!("normalized ratio, pair {pair}"), "N", "median ratio", Axis::Log, Axis::Log);
        plot.add("median", trend.shells.iter().zip(&trend.reports).map(|(n, r)| [n.as_f64(), r.median]).collect());
        run.svg("gain.svg", &plot)?;
        run.check(
            "derivative-gain trend",
            trend.slope.abs() <= st.max_abs_slope,
            format!("|{:.4}| <= {}", trend.slope, st.max_abs_slope),
        );
    }
    Ok(())
}

fn bernstein_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    let b = &cfg.bernstein;
    let grid = cfg.grid_spec()?;
    let mut t = CsvTable::new(["N", "p", "s", "sample", "ratio"]);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &n in &b.shells {
        let shell = Dyadic::new(n)?;
        let mut rng = SeededRng::with_stream(cfg.seed, n);
        for k in 0..b.samples {
            let noise = Field2D::from_spectrum(grid, |_| rng.complex_normal());
            let f = lp_project(&noise, shell, LpKind::Band);
            for &p in &b.exponents {
                for &s in &b.derivatives {
                    let r = bernstein_ratio(&f, shell, s, p)?;
                    lo = lo.min(r);
                    hi = hi.max(r);
                    t.push(vec![n.into(), p.into(), s.into(), k.into(), r.into()]);
                }
            }
        }
    }
    run.csv("bernstein.csv", &t)?;
    run.check(
        "Bernstein bracket",
        lo >= b.lower && hi <= b.upper,
        format!("ratios in [{lo:.4}, {hi:.4}], bracket [{}, {}]", b.lower, b.upper),
    );
    Ok(())
}

fn square_function_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    let sf = &cfg.square_function;
    let grid = cfg.grid_spec()?;
    let mut t = CsvTable::new(["trial", "p", "width", "ratio"]);
    let mut ranges = vec![(f64::INFINITY, 0.0f64); sf.exponents.len()];
    let top = grid.nyquist_frequency() / 3.0;
    for trial in 0..sf.trials {
        let mut rng = SeededRng::with_stream(cfg.seed, trial as u64);
        let width = (rng.uniform_in(0.0, (top.max(1.0)).ln())).exp();
        let f = Field2D::from_spectrum(grid, |[a, b]| rng.complex_normal() * (-(a * a + b * b) / (2.0 * width * width)).exp());
        for (k, &p) in sf.exponents.iter().enumerate() {
            let r = square_function_check(&f, p)?;
            ranges[k] = (ranges[k].0.min(r), ranges[k].1.max(r));
            t.push(vec![trial.into(), p.into(), width.into(), r.into()]);
        }
    }
    run.csv("square_function.csv", &t)?;
    for (&p, &(lo, hi)) in sf.exponents.iter().zip(&ranges) {
        let (a, b) = if p == 2.0 { (sf.l2_lower, sf.l2_upper) } else { (sf.lower, sf.upper) };
        run.check(
            &format!("square-function bracket p={p}"),
            lo >= a && hi <= b,
            format!("ratios in [{lo:.4}, {hi:.4}], bracket [{a}, {b}]"),
        );
    }
    Ok(())
}

fn multiplier_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    let mc = &cfg.multiplier;
    let m = IMultiplier::with_cutoff(mc.cutoff, cfg.imethod.s)?;
    let regime = Case1Regime { high_min: mc.high_min, high_max: mc.high_max, low_min: mc.low_min, low_max: mc.low_max };
    let rep = case1_multiplier_bound(&m, &regime, mc.samples, cfg.seed);
    let mut t = CsvTable::new(["N", "s", "samples", "seed", "max_ratio", "mean_ratio", "bound"]);
    t.push(vec![
        mc.cutoff.into(),
        cfg.imethod.s.into(),
        rep.samples.into(),
        rep.seed.into(),
        rep.max_ratio.into(),
        rep.mean_ratio.into(),
        mc.bound.into(),
    ]);
    run.csv("multiplier.csv", &t)?;
    let mut w = CsvTable::new(["j", "xi_x", "xi_y"]);
    for (j, xi) in rep.worst.iter().enumerate() {
        w.push(vec![(j + 1).into(), xi[0].into(), xi[1].into()]);
    }
    run.csv("worst_tuple.csv", &w)?;
    run.check(
        "Case-1 multiplier bound",
        rep.max_ratio <= mc.bound,
        format!("{:.4} <= {}", rep.max_ratio, mc.bound),
    );
    Ok(())
}

fn plan_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    let p = &cfg.plan;
    let plan = plan_with(&PlanInputs {
        s: cfg.imethod.s,
        t0: p.t0,
        c0: p.c0,
        c1: p.c1,
        hs_norm_u0: p.hs_norm,
        epsilon: p.epsilon,
    })?;
    run.csv("plan.csv", &plan.table())?;
    run.text("plan.txt", &plan.to_string())?;
    run.warnings.extend(plan.warnings.iter().cloned());
    Ok(())
}

pub const XSB_COLUMNS: [&str; 7] = ["flow", "s", "b", "value", "reference", "outer_fraction", "under_resolved"];

fn xsb_scenario(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<()> {
    let x = &cfg.xsb;
    let b = x.b.unwrap_or(0.5 + cfg.imethod.epsilon);
    let u0 = initial_data(cfg)?;
    let window = TimeWindow::new(x.delta, x.time_samples)?;
    let m = largest_multiplier(cfg)?;
    let integ = Integrator::new(*u0.grid(), cfg.solver.scheme, cfg.solver.dealias)?;

    let free = SpaceTimeField::free_evolution(&u0, window.clone());
    let free_est = xsb_norm(&free, 0.0, b);
    let reference = window_constant(&window, b) * u0.l2_norm();
    let flow = SpaceTimeField::from_flow(&u0, window, &integ, x.substeps)?;
    let iu = flow.map(|f| m.apply(f));
    let est = xsb_norm(&iu, x.s, b);

    let mut t = CsvTable::new(XSB_COLUMNS);
    t.push(vec![
        "free".into(),
        0.0.into(),
        b.into(),
        free_est.value.into(),
        reference.into(),
        free_est.outer_fraction.into(),
        u64::from(free_est.under_resolved).into(),
    ]);
    t.push(vec![
        "nonlinear-I".into(),
        x.s.into(),
        b.into(),
        est.value.into(),
        Cell::Empty,
        est.outer_fraction.into(),
        u64::from(est.under_resolved).into(),
    ]);
    run.csv("xsb.csv", &t)?;
    let rel = (free_est.value - reference).abs() / reference;
    run.check("free flow matches the window constant", rel <= 1e-10, format!("relative {rel:.3e} <= 1e-10"));
    run.check(
        "time resolution",
        !free_est.under_resolved && !est.under_resolved,
        format!("outer fractions {:.3e}, {:.3e}", free_est.outer_fraction, est.outer_fraction),
    );
    Ok(())
}
