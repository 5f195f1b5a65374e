//! Experiment configuration: TOML with one table per concern.
//!
//! Every key is optional; omitted keys take the documented defaults. Unknown
//! sections or keys are rejected so that typos surface before any compute.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::evolution::{Scheme, SolverConfig};
use crate::imethod::{IMultiplier, S_MIN};
use crate::spectral::{Dyadic, GridSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    Evolve,
    AlmostConservationSweep,
    ScalingCheck,
    Strichartz,
    Bernstein,
    SquareFunction,
    MultiplierBound,
    PlanGlobalization,
    XsbProbe,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::Evolve,
        Scenario::AlmostConservationSweep,
        Scenario::ScalingCheck,
        Scenario::Strichartz,
        Scenario::Bernstein,
        Scenario::SquareFunction,
        Scenario::MultiplierBound,
        Scenario::PlanGlobalization,
        Scenario::XsbProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Evolve => "evolve",
            Scenario::AlmostConservationSweep => "almost-conservation-sweep",
            Scenario::ScalingCheck => "scaling-check",
            Scenario::Strichartz => "strichartz",
            Scenario::Bernstein => "bernstein",
            Scenario::SquareFunction => "square-function",
            Scenario::MultiplierBound => "multiplier-bound",
            Scenario::PlanGlobalization => "plan-globalization",
            Scenario::XsbProbe => "xsb-probe",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL.into_iter().find(|sc| sc.name() == s).ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// Initial data recipes.
#[derive(Clone, Debug, PartialEq)]
pub enum DataRecipe {
    /// `A exp(−|x − c|²/(2w²))` centred in the box.
    Gaussian { amplitude: f64, width: f64 },
    /// `A e^{i k·x 2π/L}`.
    PlaneWave { wavenumber: [i64; 2], amplitude: f64 },
    /// `û ∝ ⟨ξ⟩^{−s−1} e^{iθ(ξ)}` with seeded uniform phases on the
    /// dealiased band, scaled so that `E(I_N u₀) ≤ energy_target` at the
    /// largest configured cutoff.
    RoughTail { decay: Option<f64>, energy_target: f64 },
    /// Listed unitary coefficients `(k₁, k₂, re, im)`.
    CustomSpectrum { modes: Vec<([i64; 2], [f64; 2])> },
}

impl DataRecipe {
    pub fn name(&self) -> &'static str {
        match self {
            DataRecipe::Gaussian { .. } => "gaussian",
            DataRecipe::PlaneWave { .. } => "plane-wave",
            DataRecipe::RoughTail { .. } => "rough-tail",
            DataRecipe::CustomSpectrum { .. } => "custom-spectrum",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSection {
    pub points: usize,
    pub box_length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSection {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub dealias: f64,
    pub record_every: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IMethodSection {
    pub s: f64,
    pub cutoffs: Vec<u64>,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Limits {
    pub max_grid: usize,
    pub max_steps: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveSection {
    /// Bound on the final relative L² error against the exact plane wave.
    pub max_l2_error: f64,
    pub max_mass_drift: Option<f64>,
    pub snapshot: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSection {
    pub delta: f64,
    pub seeds: usize,
    pub normalization: crate::globalizer::SweepNormalization,
    pub min_decreasing_fraction: f64,
    pub max_median_slope: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingSection {
    pub lambda: f64,
    pub t: f64,
    pub tolerance: f64,
    pub mass_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrichartzSection {
    pub p: f64,
    pub q: f64,
    pub mu: f64,
    pub trials: usize,
    pub delta: f64,
    pub time_samples: usize,
    pub shells: Vec<u64>,
    pub packets: usize,
    /// Box of the derivative-gain sampler; its grids are sized per shell.
    pub gain_box_length: f64,
    /// Random packet sets per shell in the derivative-gain mode.
    pub gain_trials: usize,
    pub max_ratio_spread: f64,
    pub max_abs_slope: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinSection {
    pub shells: Vec<u64>,
    pub exponents: Vec<f64>,
    pub derivatives: Vec<f64>,
    pub samples: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquareFunctionSection {
    pub exponents: Vec<f64>,
    pub trials: usize,
    /// Bracket at `p = 2`.
    pub l2_lower: f64,
    pub l2_upper: f64,
    /// Bracket at every other `p`.
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSection {
    pub cutoff: u64,
    pub samples: usize,
    pub bound: f64,
    pub high_min: f64,
    pub high_max: f64,
    pub low_min: f64,
    pub low_max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanSection {
    pub t0: f64,
    pub c0: f64,
    pub c1: f64,
    pub hs_norm: f64,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct XsbSection {
    pub s: f64,
    pub b: Option<f64>,
    pub delta: f64,
    pub time_samples: usize,
    pub substeps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub grid: GridSection,
    pub solver: SolverSection,
    pub imethod: IMethodSection,
    pub data: DataRecipe,
    pub limits: Limits,
    pub evolve: EvolveSection,
    pub sweep: SweepSection,
    pub scaling: ScalingSection,
    pub strichartz: StrichartzSection,
    pub bernstein: BernsteinSection,
    pub square_function: SquareFunctionSection,
    pub multiplier: MultiplierSection,
    pub plan: PlanSection,
    pub xsb: XsbSection,
    raw: Table,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Typed reads from one table; remembers which keys were consumed.
struct Section<'a> {
    name: &'a str,
    table: Option<&'a Table>,
    used: RefCell<BTreeSet<String>>,
}

impl<'a> Section<'a> {
    fn new(root: &'a Table, name: &'a str) -> Result<Self> {
        let table = match root.get(name) {
            None => None,
            Some(Value::Table(t)) => Some(t),
            Some(_) => return Err(config_err(format!("`{name}` must be a section"))),
        };
        Ok(Self { name, table, used: RefCell::new(BTreeSet::new()) })
    }

    fn raw(&self, key: &str) -> Option<&'a Value> {
        self.used.borrow_mut().insert(key.to_string());
        self.table.and_then(|t| t.get(key))
    }

    fn bad(&self, key: &str, want: &str) -> Error {
        config_err(format!("{}.{key} must be {want}", self.name))
    }

    fn number(&self, key: &str, v: &Value) -> Result<f64> {
        match v {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(self.bad(key, "a number")),
        }
    }

    fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key).map(|v| self.number(key, v)).transpose()
    }

    fn f64(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    fn int(&self, key: &str) -> Result<Option<i64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(*i)),
            Some(_) => Err(self.bad(key, "an integer")),
        }
    }

    fn u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.int(key)? {
            None => Ok(default),
            Some(i) if i >= 0 => Ok(i as u64),
            Some(_) => Err(self.bad(key, "a nonnegative integer")),
        }
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.u64(key, default as u64)? as usize)
    }

    fn bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some(Value::Boolean(b)) => Ok(*b),
            Some(_) => Err(self.bad(key, "true or false")),
        }
    }

    fn str(&self, key: &str) -> Result<Option<&'a str>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.as_str())),
            Some(_) => Err(self.bad(key, "a string")),
        }
    }

    fn array(&self, key: &str) -> Result<Option<&'a Vec<Value>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Array(a)) => Ok(Some(a)),
            Some(_) => Err(self.bad(key, "an array")),
        }
    }

    fn f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.array(key)? {
            None => Ok(default.to_vec()),
            Some(a) => a.iter().map(|v| self.number(key, v)).collect(),
        }
    }

    fn i64_list(&self, key: &str) -> Result<Option<Vec<i64>>> {
        match self.array(key)? {
            None => Ok(None),
            Some(a) => a
                .iter()
                .map(|v| v.as_integer().ok_or_else(|| self.bad(key, "an array of integers")))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }

    fn u64_list(&self, key: &str, default: &[u64]) -> Result<Vec<u64>> {
        match self.i64_list(key)? {
            None => Ok(default.to_vec()),
            Some(v) => {
                v.into_iter().map(|i| u64::try_from(i).map_err(|_| self.bad(key, "nonnegative"))).collect()
            }
        }
    }

    fn finish(self) -> Result<()> {
        if let Some(t) = self.table {
            let used = self.used.borrow();
            if let Some(k) = t.keys().find(|k| !used.contains(k.as_str())) {
                return Err(config_err(format!("unknown key `{}.{k}`", self.name)));
            }
        }
        Ok(())
    }
}

const SECTIONS: [&str; 16] = [
    "run",
    "grid",
    "solver",
    "imethod",
    "data",
    "limits",
    "evolve",
    "sweep",
    "scaling",
    "strichartz",
    "bernstein",
    "square_function",
    "multiplier",
    "plan",
    "xsb",
    "notes",
];

impl ExperimentConfig {
    /// Defaults for a scenario, as if the config file were empty.
    pub fn defaults(scenario: Scenario) -> Self {
        let mut raw = Table::new();
        let mut run = Table::new();
        run.insert("scenario".into(), Value::String(scenario.name().into()));
        raw.insert("run".into(), Value::Table(run));
        Self::from_table(raw).expect("defaults are valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: Table = text.parse().map_err(|e: toml::de::Error| config_err(e.to_string()))?;
        Self::from_table(raw)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    fn from_table(raw: Table) -> Result<Self> {
        if let Some(k) = raw.keys().find(|k| !SECTIONS.contains(&k.as_str())) {
            return Err(config_err(format!("unknown section `{k}`")));
        }
        let run = Section::new(&raw, "run")?;
        let scenario: Scenario =
            run.str("scenario")?.ok_or_else(|| config_err("run.scenario is required"))?.parse()?;
        let seed = run.u64("seed", 0)?;
        let out = run.str("out")?.map(PathBuf::from);
        run.finish()?;

        let d = ScenarioDefaults::for_scenario(scenario);

        let g = Section::new(&raw, "grid")?;
        let grid = GridSection { points: g.usize("points", d.points)?, box_length: g.f64("box_length", d.box_length)? };
        g.finish()?;

        let s = Section::new(&raw, "solver")?;
        let scheme = match s.str("scheme")? {
            None => Scheme::Strang,
            Some(name) => name.parse().map_err(|_| config_err(format!("unknown scheme `{name}`")))?,
        };
        let solver = SolverSection {
            dt: s.f64("dt", d.dt)?,
            t_end: s.f64("t_end", d.t_end)?,
            scheme,
            dealias: s.f64("dealias", 1.0 / 3.0)?,
            record_every: s.usize("record_every", d.record_every)?,
        };
        s.finish()?;

        let im = Section::new(&raw, "imethod")?;
        let imethod = IMethodSection {
            s: im.f64("s", 1.5)?,
            cutoffs: im.u64_list("cutoffs", &[4, 8, 16, 32])?,
            epsilon: im.f64("epsilon", crate::diagnostics::DEFAULT_EPSILON)?,
        };
        im.finish()?;

        let ds = Section::new(&raw, "data")?;
        let recipe = ds.str("recipe")?.unwrap_or(d.recipe);
        let data = match recipe {
            "gaussian" => {
                DataRecipe::Gaussian { amplitude: ds.f64("amplitude", 1.0)?, width: ds.f64("width", 1.0)? }
            }
            "plane-wave" => {
                let k = ds.i64_list("wavenumber")?.unwrap_or_else(|| vec![1, 0]);
                if k.len() != 2 {
                    return Err(config_err("data.wavenumber must have two entries"));
                }
                DataRecipe::PlaneWave { wavenumber: [k[0], k[1]], amplitude: ds.f64("amplitude", 1.0)? }
            }
            "rough-tail" => {
                DataRecipe::RoughTail { decay: ds.f64_opt("decay")?, energy_target: ds.f64("energy_target", 1.0)? }
            }
            "custom-spectrum" => {
                let flat = ds.f64_list("modes", &[])?;
                if flat.is_empty() || flat.len() % 4 != 0 {
                    return Err(config_err("data.modes must list k1, k2, re, im quadruples"));
                }
                let mut modes = Vec::new();
                for q in flat.chunks(4) {
                    if q[0].fract() != 0.0 || q[1].fract() != 0.0 {
                        return Err(config_err("data.modes wavenumbers must be integers"));
                    }
                    modes.push(([q[0] as i64, q[1] as i64], [q[2], q[3]]));
                }
                DataRecipe::CustomSpectrum { modes }
            }
            other => return Err(config_err(format!("unknown data recipe `{other}`"))),
        };
        ds.finish()?;

        let l = Section::new(&raw, "limits")?;
        let limits = Limits { max_grid: l.usize("max_grid", 2048)?, max_steps: l.u64("max_steps", 10_000_000)? };
        l.finish()?;

        let e = Section::new(&raw, "evolve")?;
        let evolve = EvolveSection {
            max_l2_error: e.f64("max_l2_error", 1e-7)?,
            max_mass_drift: e.f64_opt("max_mass_drift")?,
            snapshot: e.bool("snapshot", true)?,
        };
        e.finish()?;

        let sw = Section::new(&raw, "sweep")?;
        let normalization = match sw.str("normalization")? {
            None => crate::globalizer::SweepNormalization::default(),
            Some(n) => crate::globalizer::SweepNormalization::parse(n)
                .ok_or_else(|| config_err(format!("unknown sweep normalization `{n}`")))?,
        };
        let sweep = SweepSection {
            delta: sw.f64("delta", 0.05)?,
            seeds: sw.usize("seeds", 10)?,
            normalization,
            min_decreasing_fraction: sw.f64("min_decreasing_fraction", 0.9)?,
            max_median_slope: sw.f64("max_median_slope", -1.0)?,
        };
        sw.finish()?;

        let sc = Section::new(&raw, "scaling")?;
        let scaling = ScalingSection {
            lambda: sc.f64("lambda", 2.0)?,
            t: sc.f64("t", 0.01)?,
            tolerance: sc.f64("tolerance", 1e-3)?,
            mass_tolerance: sc.f64("mass_tolerance", 1e-10)?,
        };
        sc.finish()?;

        let st = Section::new(&raw, "strichartz")?;
        let strichartz = StrichartzSection {
            p: st.f64("p", 6.0)?,
            q: st.f64("q", 6.0)?,
            mu: st.f64("mu", 0.0)?,
            trials: st.usize("trials", 100)?,
            delta: st.f64("delta", 0.05)?,
            time_samples: st.usize("time_samples", 64)?,
            shells: st.u64_list("shells", &[4, 8, 16, 32])?,
            packets: st.usize("packets", 3)?,
            gain_box_length: st.f64("gain_box_length", crate::diagnostics::GainSetup::default().box_length)?,
            gain_trials: st.usize("gain_trials", crate::diagnostics::GainSetup::default().trials)?,
            max_ratio_spread: st.f64("max_ratio_spread", 5.0)?,
            max_abs_slope: st.f64("max_abs_slope", 0.2)?,
        };
        st.finish()?;

        let b = Section::new(&raw, "bernstein")?;
        let bernstein = BernsteinSection {
            shells: b.u64_list("shells", &[4, 8, 16, 32, 64])?,
            exponents: b.f64_list("exponents", &[2.0, 4.0, f64::INFINITY])?,
            derivatives: b.f64_list("derivatives", &[1.0, 2.0])?,
            samples: b.usize("samples", 4)?,
            lower: b.f64("lower", 0.1)?,
            upper: b.f64("upper", 10.0)?,
        };
        b.finish()?;

        let sf = Section::new(&raw, "square_function")?;
        let square_function = SquareFunctionSection {
            exponents: sf.f64_list("exponents", &[2.0, 4.0])?,
            trials: sf.usize("trials", 100)?,
            l2_lower: sf.f64("l2_lower", 0.7)?,
            l2_upper: sf.f64("l2_upper", 1.5)?,
            lower: sf.f64("lower", 0.1)?,
            upper: sf.f64("upper", 10.0)?,
        };
        sf.finish()?;

        let mu = Section::new(&raw, "multiplier")?;
        let regime = crate::imethod::Case1Regime::default();
        let multiplier = MultiplierSection {
            cutoff: mu.u64("cutoff", 16)?,
            samples: mu.usize("samples", 100_000)?,
            bound: mu.f64("bound", crate::imethod::CASE1_CONSTANT)?,
            high_min: mu.f64("high_min", regime.high_min)?,
            high_max: mu.f64("high_max", regime.high_max)?,
            low_min: mu.f64("low_min", regime.low_min)?,
            low_max: mu.f64("low_max", regime.low_max)?,
        };
        mu.finish()?;

        let p = Section::new(&raw, "plan")?;
        let plan = PlanSection {
            t0: p.f64("t0", 1024.0)?,
            c0: p.f64("c0", crate::globalizer::CALIBRATED_C0)?,
            c1: p.f64("c1", crate::globalizer::CALIBRATED_C1)?,
            hs_norm: p.f64("hs_norm", 0.0)?,
            epsilon: p.f64("epsilon", 0.0)?,
        };
        p.finish()?;

        let x = Section::new(&raw, "xsb")?;
        let xsb = XsbSection {
            s: x.f64("s", 2.0)?,
            b: x.f64_opt("b")?,
            delta: x.f64("delta", 0.05)?,
            time_samples: x.usize("time_samples", 64)?,
            substeps: x.usize("substeps", 4)?,
        };
        x.finish()?;

        let cfg = Self {
            scenario,
            seed,
            out,
            grid,
            solver,
            imethod,
            data,
            limits,
            evolve,
            sweep,
            scaling,
            strichartz,
            bernstein,
            square_function,
            multiplier,
            plan,
            xsb,
            raw,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Replaces the seed (command-line override); the digest follows.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        run_table(&mut self.raw).insert("seed".into(), Value::Integer(seed as i64));
        self
    }

    /// Tightens the grid cap (command-line override) and revalidates.
    pub fn with_max_grid(mut self, max_grid: usize) -> Result<Self> {
        self.limits.max_grid = max_grid;
        let limits = match self.raw.entry("limits").or_insert_with(|| Value::Table(Table::new())) {
            Value::Table(t) => t,
            _ => unreachable!("validated as a section"),
        };
        limits.insert("max_grid".into(), Value::Integer(max_grid as i64));
        self.validate()?;
        Ok(self)
    }

    /// The config with keys sorted at every level; reordering the file does
    /// not change it.
    pub fn canonical(&self) -> String {
        toml::to_string(&self.raw).expect("tables always serialize")
    }

    /// Hex SHA-256 of [`Self::canonical`].
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.box_length, self.grid.points)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig::new(self.solver.dt, self.solver.t_end)
            .scheme(self.solver.scheme)
            .dealias(self.solver.dealias)
            .record_every(self.solver.record_every)
            .regularity(self.imethod.s)
    }

    pub fn cutoffs(&self) -> Result<Vec<Dyadic>> {
        self.imethod.cutoffs.iter().map(|&n| Dyadic::new(n)).collect()
    }

    fn check_grid_cap(&self, points: usize, what: &str) -> Result<()> {
        if points > self.limits.max_grid {
            return Err(Error::Resource(format!(
                "{what} needs {points} points per side, above the cap of {}",
                self.limits.max_grid
            )));
        }
        Ok(())
    }

    fn check_steps(&self, t_end: f64, dt: f64) -> Result<()> {
        let steps = (t_end / dt).ceil();
        if steps > self.limits.max_steps as f64 {
            return Err(Error::Resource(format!("{steps} steps exceed the cap of {}", self.limits.max_steps)));
        }
        Ok(())
    }

    /// Checks every parameter the scenario will use.
    pub fn validate(&self) -> Result<()> {
        let cfg = |e: Error| match e {
            Error::Parameter(m) => config_err(m),
            other => other,
        };
        let grid = self.grid_spec().map_err(cfg)?;
        self.check_grid_cap(grid.points_per_side(), "the grid")?;
        match &self.data {
            DataRecipe::Gaussian { width, .. } if !(*width > 0.0) => {
                return Err(config_err("data.width must be positive"))
            }
            DataRecipe::RoughTail { energy_target, decay } => {
                if !(*energy_target > 0.0) {
                    return Err(config_err("data.energy_target must be positive"));
                }
                if decay.is_some_and(|d| !(d > 0.0)) {
                    return Err(config_err("data.decay must be positive"));
                }
            }
            _ => {}
        }
        let needs_solver = matches!(
            self.scenario,
            Scenario::Evolve | Scenario::AlmostConservationSweep | Scenario::ScalingCheck | Scenario::XsbProbe
        );
        if needs_solver {
            let mut sc = self.solver_config();
            if self.scenario == Scenario::AlmostConservationSweep {
                sc.t_end = self.sweep.delta;
            }
            if self.scenario == Scenario::ScalingCheck {
                sc.t_end = self.scaling.t;
            }
            if self.scenario != Scenario::XsbProbe {
                sc.validate().map_err(cfg)?;
                self.check_steps(sc.t_end, sc.dt)?;
            }
        }
        let needs_s = !matches!(self.scenario, Scenario::Strichartz | Scenario::Bernstein | Scenario::SquareFunction);
        if needs_s && !(self.imethod.s > S_MIN && self.imethod.s < 2.0) {
            return Err(config_err(format!(
                "imethod.s = {} outside (8/7, 2): global well-posedness is only established for s > 8/7",
                self.imethod.s
            )));
        }
        if !(self.imethod.epsilon > 0.0 && self.imethod.epsilon < 0.5) {
            return Err(config_err("imethod.epsilon must lie in (0, 1/2)"));
        }
        let cutoffs = self.cutoffs().map_err(cfg)?;
        match self.scenario {
            Scenario::Evolve => {
                if cutoffs.is_empty() {
                    return Err(config_err("imethod.cutoffs must not be empty"));
                }
            }
            Scenario::AlmostConservationSweep => {
                if cutoffs.len() < 2 || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(config_err("imethod.cutoffs must be at least two increasing powers of two"));
                }
                if self.sweep.seeds == 0 {
                    return Err(config_err("sweep.seeds must be positive"));
                }
                if !(0.0..=1.0).contains(&self.sweep.min_decreasing_fraction) {
                    return Err(config_err("sweep.min_decreasing_fraction must lie in [0, 1]"));
                }
            }
            Scenario::ScalingCheck => {
                let lambda = self.scaling.lambda;
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(config_err("scaling.lambda must be positive"));
                }
                let n = crate::globalizer::rescaled_points(grid.points_per_side(), lambda);
                self.check_grid_cap(n, "the rescaled grid")?;
                self.check_steps(self.scaling.t, self.solver.dt / 2.0)?;
            }
            Scenario::Strichartz => {
                let st = &self.strichartz;
                crate::diagnostics::AdmissiblePair::new(st.p, st.q, st.mu).map_err(cfg)?;
                crate::diagnostics::TimeWindow::new(st.delta, st.time_samples).map_err(cfg)?;
                if st.trials == 0 {
                    return Err(config_err("strichartz.trials must be positive"));
                }
                if st.mu > 0.0 {
                    let setup = self.gain_setup();
                    for &n in &st.shells {
                        let g = setup.grid_for(Dyadic::new(n).map_err(cfg)?).map_err(cfg)?;
                        self.check_grid_cap(g.points_per_side(), "a derivative-gain shell")?;
                    }
                }
            }
            Scenario::Bernstein => {
                let b = &self.bernstein;
                for &n in &b.shells {
                    let n = Dyadic::new(n).map_err(cfg)?;
                    if 2.0 * n.as_f64() > grid.nyquist_frequency() * (1.0 - 1e-12) {
                        return Err(config_err(format!(
                            "shell {} does not fit below the Nyquist frequency {:.3}",
                            n.value(),
                            grid.nyquist_frequency()
                        )));
                    }
                }
                if b.exponents.iter().any(|&p| !(p >= 1.0)) {
                    return Err(config_err("bernstein.exponents must be >= 1"));
                }
                if b.samples == 0 || !(b.lower > 0.0 && b.lower < b.upper) {
                    return Err(config_err("bernstein needs samples > 0 and 0 < lower < upper"));
                }
            }
            Scenario::SquareFunction => {
                let sf = &self.square_function;
                if sf.exponents.iter().any(|&p| !(p > 1.0 && p.is_finite())) {
                    return Err(config_err("square_function.exponents must lie in (1, ∞)"));
                }
                if sf.trials == 0 {
                    return Err(config_err("square_function.trials must be positive"));
                }
            }
            Scenario::MultiplierBound => {
                let m = &self.multiplier;
                IMultiplier::with_cutoff(m.cutoff, self.imethod.s).map_err(cfg)?;
                if !(m.high_min > 0.0 && m.high_min <= m.high_max && m.low_min > 0.0 && m.low_max > 0.0) {
                    return Err(config_err("multiplier regime bounds must be positive and ordered"));
                }
            }
            Scenario::PlanGlobalization => {
                let p = &self.plan;
                if !(p.t0 > 1.0 && p.t0.is_finite()) {
                    return Err(config_err(format!("plan.t0 must exceed 1, got {}", p.t0)));
                }
                if !(p.c0 > 0.0 && p.c1 > 0.0 && p.hs_norm >= 0.0 && p.epsilon >= 0.0 && p.epsilon < 1.0) {
                    return Err(config_err("plan needs c0, c1 > 0, hs_norm >= 0 and epsilon in [0, 1)"));
                }
            }
            Scenario::XsbProbe => {
                let x = &self.xsb;
                crate::diagnostics::TimeWindow::new(x.delta, x.time_samples).map_err(cfg)?;
                if x.substeps == 0 {
                    return Err(config_err("xsb.substeps must be positive"));
                }
                if cutoffs.is_empty() {
                    return Err(config_err("imethod.cutoffs must not be empty"));
                }
            }
        }
        Ok(())
    }

    pub fn gain_setup(&self) -> crate::diagnostics::GainSetup {
        let st = &self.strichartz;
        crate::diagnostics::GainSetup {
            box_length: st.gain_box_length,
            delta: st.delta,
            packets: st.packets,
            trials: st.gain_trials,
            seed: self.seed,
            epsilon: self.imethod.epsilon,
            ..Default::default()
        }
    }
}

fn run_table(raw: &mut Table) -> &mut Table {
    match raw.entry("run").or_insert_with(|| Value::Table(Table::new())) {
        Value::Table(t) => t,
        _ => unreachable!("validated as a section"),
    }
}

/// Per-scenario defaults for the shared sections.
struct ScenarioDefaults {
    points: usize,
    box_length: f64,
    dt: f64,
    t_end: f64,
    record_every: usize,
    recipe: &'static str,
}

impl ScenarioDefaults {
    fn for_scenario(s: Scenario) -> Self {
        let base = Self {
            points: 64,
            box_length: GridSpec::DEFAULT_BOX_LENGTH,
            dt: 1e-4,
            t_end: 0.5,
            record_every: 100,
            recipe: "gaussian",
        };
        match s {
            Scenario::Evolve => Self { box_length: TAU, recipe: "plane-wave", ..base },
            Scenario::AlmostConservationSweep => {
                Self { points: 384, box_length: TAU, dt: 2.5e-4, record_every: 1, recipe: "rough-tail", ..base }
            }
            Scenario::ScalingCheck => Self { points: 96, box_length: 16.0, ..base },
            Scenario::Strichartz => Self { box_length: TAU, ..base },
            Scenario::Bernstein => Self { points: 512, box_length: TAU, ..base },
            Scenario::SquareFunction => Self { points: 128, box_length: TAU, ..base },
            Scenario::XsbProbe => Self { points: 128, box_length: 20.0, ..base },
            Scenario::MultiplierBound | Scenario::PlanGlobalization => base,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_for_every_scenario() {
        for sc in Scenario::ALL {
            let c = ExperimentConfig::defaults(sc);
            assert_eq!(c.scenario, sc);
            assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
        }
        assert!(matches!("nope".parse::<Scenario>(), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn digest_ignores_key_order() {
        let a = "[run]\nscenario = \"evolve\"\nseed = 3\n[grid]\npoints = 32\nbox_length = 10.0\n";
        let b = "[grid]\nbox_length = 10.0\npoints = 32\n[run]\nseed = 3\nscenario = \"evolve\"\n";
        let ca = ExperimentConfig::from_toml_str(a).unwrap();
        let cb = ExperimentConfig::from_toml_str(b).unwrap();
        assert_eq!(ca.digest(), cb.digest());
        assert_eq!(ca.digest().len(), 64);
        let c = ExperimentConfig::from_toml_str(&a.replace("seed = 3", "seed = 4")).unwrap();
        assert_ne!(ca.digest(), c.digest());
        assert_eq!(ca.clone().with_seed(4).digest(), c.digest());
    }

    #[test]
    fn typos_are_rejected() {
        let bad = [
            "[run]\nscenario = \"evolve\"\n[grid]\npointz = 32\n",
            "[run]\nscenario = \"evolve\"\n[gird]\npoints = 32\n",
            "[run]\nscenario = \"evolve\"\n[grid]\npoints = \"32\"\n",
            "[run]\nscenario = \"evolve\"\n[grid]\npoints = 33\n",
            "[run]\nscenario = \"evolve\"\n[solver]\nscheme = \"rk4\"\n",
            "[run]\nscenario = \"plan-globalization\"\n[imethod]\ns = 1.1\n",
            "[run]\nscenario = \"evolve\"\n[data]\nrecipe = \"noise\"\n",
            "[run]\nscenario = \"strichartz\"\n[strichartz]\np = 5.0\n",
            "[run]\nseed = 1\n",
        ];
        for text in bad {
            assert!(matches!(ExperimentConfig::from_toml_str(text), Err(Error::Config(_))), "{text}");
        }
        assert!(matches!(
            ExperimentConfig::from_toml_str("[run]\nscenario = \"warp\"\n"),
            Err(Error::UnknownScenario(_))
        ));
    }

    #[test]
    fn resource_caps_precede_compute() {
        let text = "[run]\nscenario = \"evolve\"\n[grid]\npoints = 4096\n";
        assert!(matches!(ExperimentConfig::from_toml_str(text), Err(Error::Resource(_))));
        let c = ExperimentConfig::defaults(Scenario::ScalingCheck);
        assert!(matches!(c.with_max_grid(128), Err(Error::Resource(_))));
        let steps = "[run]\nscenario = \"evolve\"\n[limits]\nmax_steps = 10\n";
        assert!(matches!(ExperimentConfig::from_toml_str(steps), Err(Error::Resource(_))));
    }

    #[test]
    fn custom_spectrum_modes() {
        let text = "[run]\nscenario = \"evolve\"\n[data]\nrecipe = \"custom-spectrum\"\nmodes = [1, 0, 0.5, 0.0, -2, 3, 0.0, 1.0]\n";
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(c.data, DataRecipe::CustomSpectrum { modes: vec![([1, 0], [0.5, 0.0]), ([-2, 3], [0.0, 1.0])] });
        let odd = text.replace(", 1.0]", "]");
        assert!(ExperimentConfig::from_toml_str(&odd).is_err());
    }
}
