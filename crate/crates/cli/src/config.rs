//! Experiment config files: TOML with a `schema` version and the blocks
//! `[chain]`, `[initial_state]`, `[evolution]`, `[envelope]` and `[outputs]`.
//!
//! Parameters may also be given in experimental vocabulary: a Rabi
//! frequency `Ω_n = 2 g √(n+1)` instead of `g0`, and tunneling energies as
//! multiples of ω_B. Parsing collects every problem it finds, each tagged
//! with its key path.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use blochdress_core::pulse::Envelope;
use blochdress_core::state_prep::Window;
use blochdress_core::{
    Branch, ChainConfig, Complex64, CouplingSchedule, EvolutionPlan, GaussianSpec, PhotonPrep,
};
use toml::{Table, Value};

pub const SCHEMA_VERSION: i64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Every problem found in one config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl ConfigErrors {
    pub fn mentions(&self, path: &str) -> bool {
        self.0.iter().any(|e| e.path == path)
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observable {
    Inversion,
    Current,
    Photons,
    MeanN,
    Variance,
    Entropy,
    Center,
}

impl Observable {
    pub const ALL: [Observable; 7] = [
        Observable::Inversion,
        Observable::Current,
        Observable::Photons,
        Observable::MeanN,
        Observable::Variance,
        Observable::Entropy,
        Observable::Center,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Inversion => "inversion",
            Observable::Current => "current",
            Observable::Photons => "photons",
            Observable::MeanN => "mean_n",
            Observable::Variance => "variance",
            Observable::Entropy => "entropy",
            Observable::Center => "center",
        }
    }

    fn parse(s: &str) -> Option<Observable> {
        Observable::ALL.into_iter().find(|o| o.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Gaussian packets on both bands times a photon state.
    Product { a: GaussianSpec, b: GaussianSpec, photons: PhotonPrep },
    /// `G(p) (|a, p, n⟩ ± |b, p, n+1⟩)`.
    Entangled { n: usize, u: f64, sigma: f64, sign: i8 },
    /// Dressed plane wave of sector `n`.
    Dressed { n: usize, branch: Branch, phi: f64, window: Window },
}

impl InitialState {
    /// Smallest truncation able to hold the state.
    fn min_n_max(&self) -> usize {
        match *self {
            InitialState::Product { photons: PhotonPrep::Coherent { mean }, .. } => {
                ChainConfig::default_n_max(mean)
            }
            InitialState::Product { photons: PhotonPrep::Vacuum, .. } => 1,
            InitialState::Product { photons: PhotonPrep::Fock { n }, .. } => n + 1,
            InitialState::Entangled { n, .. } | InitialState::Dressed { n, .. } => n + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub directory: Option<PathBuf>,
    pub observables: BTreeSet<Observable>,
    pub sample_stride: usize,
}

impl Outputs {
    pub fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub description: String,
    pub chain: ChainConfig,
    pub initial_state: InitialState,
    pub plan: EvolutionPlan,
    pub envelope: Option<Envelope>,
    pub outputs: Outputs,
    /// The parsed file, echoed into run metadata.
    pub raw: Table,
}

impl ExperimentConfig {
    pub fn schedule(&self) -> CouplingSchedule {
        match self.envelope {
            Some(env) => CouplingSchedule::Pulsed(env),
            None => CouplingSchedule::Constant,
        }
    }

    /// 2π/ω_B, when there is a bias.
    pub fn bloch_period(&self) -> Option<f64> {
        (self.chain.omega_b > 0.0).then(|| 2.0 * PI / self.chain.omega_b)
    }
}

/// Reads and validates a config file.
pub fn load(path: &Path) -> Result<ExperimentConfig, ConfigErrors> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        ConfigErrors(vec![ConfigError { path: path.display().to_string(), message: e.to_string() }])
    })?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    let raw: Table = toml::from_str(text).map_err(|e| {
        ConfigErrors(vec![ConfigError { path: "<file>".into(), message: e.message().to_string() }])
    })?;
    let mut p = Parser::default();
    match raw.get("schema") {
        None => {
            p.err("schema", format!("missing schema version (expected schema = {SCHEMA_VERSION})"));
            return Err(ConfigErrors(p.errors));
        }
        Some(Value::Integer(SCHEMA_VERSION)) => {}
        Some(v) => {
            p.err("schema", format!("unsupported schema version {v} (expected {SCHEMA_VERSION})"));
            return Err(ConfigErrors(p.errors));
        }
    }
    p.unknown_keys(&raw, "", &["schema", "description", "chain", "initial_state", "evolution", "envelope", "outputs"]);
    let description = p.string(&raw, "", "description").unwrap_or_default();

    let chain_t = p.section(&raw, "chain", true);
    let init_t = p.section(&raw, "initial_state", true);
    let evo_t = p.section(&raw, "evolution", true);
    let env_t = p.section(&raw, "envelope", false);
    let out_t = p.section(&raw, "outputs", false);

    let n_sites_hint = chain_t.as_ref().and_then(|t| t.get("n_sites")).and_then(Value::as_integer);
    let initial_state = init_t.as_ref().and_then(|t| p.initial_state(t, n_sites_hint));
    let chain = chain_t.as_ref().and_then(|t| p.chain(t, initial_state.as_ref()));
    let envelope = match (&env_t, &chain) {
        (Some(t), Some(c)) => p.envelope(t, c.g0),
        _ => None,
    };
    let schedule = envelope.map_or(CouplingSchedule::Constant, CouplingSchedule::Pulsed);
    let plan_parts = match (&evo_t, &chain) {
        (Some(t), Some(c)) => p.evolution(t, c, envelope.as_ref(), &schedule),
        _ => None,
    };
    let outputs = p.outputs(out_t.as_ref().unwrap_or(&Table::new()), plan_parts.map(|(plan, _)| plan.effective_dt()));

    // Cross-block checks that need the assembled pieces.
    if let (Some(c), Some(init)) = (&chain, &initial_state) {
        p.check_state_fits(c, init);
    }

    if !p.errors.is_empty() {
        return Err(ConfigErrors(p.errors));
    }
    let (plan, _) = plan_parts.expect("no errors implies a plan");
    let outputs = outputs.expect("no errors implies outputs");
    Ok(ExperimentConfig {
        description,
        chain: chain.expect("checked"),
        initial_state: initial_state.expect("checked"),
        plan: EvolutionPlan { sample_stride: outputs.sample_stride, ..plan },
        envelope,
        outputs,
        raw,
    })
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

#[derive(Default)]
struct Parser {
    errors: Vec<ConfigError>,
}

impl Parser {
    fn err(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(ConfigError { path: path.into(), message: message.into() });
    }

    fn unknown_keys(&mut self, t: &Table, prefix: &str, allowed: &[&str]) {
        for k in t.keys() {
            if !allowed.contains(&k.as_str()) {
                self.err(join(prefix, k), "unknown key");
            }
        }
    }

    fn section(&mut self, root: &Table, key: &str, required: bool) -> Option<Table> {
        match root.get(key) {
            Some(Value::Table(t)) => Some(t.clone()),
            Some(_) => {
                self.err(key, "expected a table");
                None
            }
            None => {
                if required {
                    self.err(key, "missing section");
                }
                None
            }
        }
    }

    fn number(&mut self, t: &Table, prefix: &str, key: &str) -> Option<f64> {
        match t.get(key)? {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            other => {
                self.err(join(prefix, key), format!("expected a number, found {}", other.type_str()));
                None
            }
        }
    }

    fn required_number(&mut self, t: &Table, prefix: &str, key: &str) -> Option<f64> {
        if !t.contains_key(key) {
            self.err(join(prefix, key), "missing key");
            return None;
        }
        self.number(t, prefix, key)
    }

    fn count(&mut self, t: &Table, prefix: &str, key: &str) -> Option<usize> {
        match t.get(key)? {
            Value::Integer(i) if *i >= 0 => Some(*i as usize),
            Value::Integer(_) => {
                self.err(join(prefix, key), "must be non-negative");
                None
            }
            other => {
                self.err(join(prefix, key), format!("expected an integer, found {}", other.type_str()));
                None
            }
        }
    }

    fn string(&mut self, t: &Table, prefix: &str, key: &str) -> Option<String> {
        match t.get(key)? {
            Value::String(s) => Some(s.clone()),
            other => {
                self.err(join(prefix, key), format!("expected a string, found {}", other.type_str()));
                None
            }
        }
    }

    /// A complex weight given as a number or as `[re, im]`.
    fn complex(&mut self, t: &Table, prefix: &str, key: &str) -> Option<Complex64> {
        let as_f64 = |v: &Value| match v {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        };
        match t.get(key)? {
            Value::Array(a) if a.len() == 2 => match (as_f64(&a[0]), as_f64(&a[1])) {
                (Some(re), Some(im)) => Some(Complex64::new(re, im)),
                _ => {
                    self.err(join(prefix, key), "expected [re, im] numbers");
                    None
                }
            },
            v => match as_f64(v) {
                Some(x) => Some(Complex64::new(x, 0.0)),
                None => {
                    self.err(join(prefix, key), "expected a number or [re, im]");
                    None
                }
            },
        }
    }

    /// Exactly one of `direct` or `alt` must be present.
    fn either(&mut self, t: &Table, prefix: &str, direct: &str, alt: &str) -> Option<(bool, f64)> {
        match (t.contains_key(direct), t.contains_key(alt)) {
            (true, true) => {
                self.err(join(prefix, direct), format!("give either `{direct}` or `{alt}`, not both"));
                None
            }
            (false, false) => {
                self.err(join(prefix, direct), format!("missing key (or give `{alt}`)"));
                None
            }
            (true, false) => self.number(t, prefix, direct).map(|v| (true, v)),
            (false, true) => self.number(t, prefix, alt).map(|v| (false, v)),
        }
    }

    fn chain(&mut self, t: &Table, init: Option<&InitialState>) -> Option<ChainConfig> {
        const P: &str = "chain";
        self.unknown_keys(
            t,
            P,
            &[
                "n_sites", "t_a", "t_a_over_omega_b", "t_b", "t_b_over_omega_b", "g0", "rabi_frequency",
                "rabi_photon_number", "omega_b", "delta_eps", "n_max", "phi0",
            ],
        );
        let before = self.errors.len();
        let n_sites = if t.contains_key("n_sites") {
            self.count(t, P, "n_sites")
        } else {
            self.err(join(P, "n_sites"), "missing key");
            None
        };
        let omega_b = self.number(t, P, "omega_b").unwrap_or(0.0);
        let hop = |p: &mut Parser, direct: &str, alt: &str| -> Option<f64> {
            let (is_direct, v) = p.either(t, P, direct, alt)?;
            if is_direct {
                Some(v)
            } else if omega_b > 0.0 {
                Some(v * omega_b)
            } else {
                p.err(join(P, alt), "needs a positive chain.omega_b");
                None
            }
        };
        let t_a = hop(self, "t_a", "t_a_over_omega_b");
        let t_b = hop(self, "t_b", "t_b_over_omega_b");
        let g0 = match self.either(t, P, "g0", "rabi_frequency")? {
            (true, g) => {
                if t.contains_key("rabi_photon_number") {
                    self.err(join(P, "rabi_photon_number"), "only meaningful with rabi_frequency");
                }
                Some(g)
            }
            (false, omega) => {
                let n = self.count(t, P, "rabi_photon_number").unwrap_or(0);
                Some(omega / (2.0 * ((n + 1) as f64).sqrt()))
            }
        };
        let delta_eps = self.number(t, P, "delta_eps").unwrap_or(0.0);
        let phi0 = self.number(t, P, "phi0").unwrap_or(0.0);
        let n_max = match t.get("n_max") {
            Some(_) => self.count(t, P, "n_max"),
            None => Some(init.map_or(1, InitialState::min_n_max).max(1)),
        };
        if self.errors.len() > before {
            return None;
        }
        let mut cfg = ChainConfig::new(n_sites?, t_a?, t_b?, g0?, omega_b, n_max?);
        cfg.delta_eps = delta_eps;
        cfg.phi0 = phi0;
        let mut ok = true;
        for e in cfg.validation_errors() {
            ok = false;
            match e {
                blochdress_core::Error::Validation { field, message } => self.err(join(P, &field), message),
                other => self.err(P, other.to_string()),
            }
        }
        ok.then_some(cfg)
    }

    fn initial_state(&mut self, t: &Table, n_sites: Option<i64>) -> Option<InitialState> {
        const P: &str = "initial_state";
        let kind = match self.string(t, P, "kind") {
            Some(k) => k,
            None => {
                if !t.contains_key("kind") {
                    self.err(join(P, "kind"), "missing key");
                }
                return None;
            }
        };
        let positive = |p: &mut Parser, key: &str, v: Option<f64>| -> Option<f64> {
            match v {
                Some(x) if x > 0.0 && x.is_finite() => Some(x),
                Some(_) => {
                    p.err(join(P, key), "must be positive");
                    None
                }
                None => None,
            }
        };
        match kind.as_str() {
            "coherent" | "vacuum" | "fock" => {
                let mut allowed = vec!["kind", "u", "sigma", "k", "a0", "b0", "u_b", "sigma_b", "k_b"];
                match kind.as_str() {
                    "coherent" => allowed.push("mean"),
                    "fock" => allowed.push("n"),
                    _ => {}
                }
                self.unknown_keys(t, P, &allowed);
                let u = self.required_number(t, P, "u");
                let sigma = self.required_number(t, P, "sigma");
                let sigma = positive(self, "sigma", sigma);
                let k = self.number(t, P, "k").unwrap_or(0.0);
                let a0 = self.complex(t, P, "a0").unwrap_or(Complex64::new(1.0, 0.0));
                let b0 = self.complex(t, P, "b0").unwrap_or(Complex64::new(0.0, 0.0));
                let u_b = self.number(t, P, "u_b");
                let sigma_b = self.number(t, P, "sigma_b");
                let sigma_b = if sigma_b.is_some() { positive(self, "sigma_b", sigma_b) } else { sigma };
                let k_b = self.number(t, P, "k_b").unwrap_or(k);
                if a0.norm() == 0.0 && b0.norm() == 0.0 {
                    self.err(join(P, "a0"), "a0 and b0 are both zero");
                }
                let photons = match kind.as_str() {
                    "coherent" => {
                        let mean = self.required_number(t, P, "mean")?;
                        if !(mean >= 0.0 && mean.is_finite()) {
                            self.err(join(P, "mean"), "must be non-negative");
                            return None;
                        }
                        PhotonPrep::Coherent { mean }
                    }
                    "fock" => {
                        if !t.contains_key("n") {
                            self.err(join(P, "n"), "missing key");
                        }
                        PhotonPrep::Fock { n: self.count(t, P, "n")? }
                    }
                    _ => PhotonPrep::Vacuum,
                };
                let (u, sigma) = (u?, sigma?);
                Some(InitialState::Product {
                    a: GaussianSpec::new(u, sigma, k, a0),
                    b: GaussianSpec::new(u_b.unwrap_or(u), sigma_b?, k_b, b0),
                    photons,
                })
            }
            "entangled" => {
                self.unknown_keys(t, P, &["kind", "n", "u", "sigma", "phase"]);
                let n = self.count(t, P, "n").unwrap_or(0);
                let u = self.required_number(t, P, "u");
                let sigma = self.required_number(t, P, "sigma");
                let sigma = positive(self, "sigma", sigma);
                let sign = match self.string(t, P, "phase").as_deref() {
                    None | Some("in") => 1,
                    Some("out") => -1,
                    Some(other) => {
                        self.err(join(P, "phase"), format!("expected \"in\" or \"out\", found {other:?}"));
                        return None;
                    }
                };
                Some(InitialState::Entangled { n, u: u?, sigma: sigma?, sign })
            }
            "dressed" => {
                self.unknown_keys(t, P, &["kind", "n", "branch", "phi", "phi_index", "window", "u", "sigma"]);
                let n = self.count(t, P, "n").unwrap_or(0);
                let branch = match self.count(t, P, "branch") {
                    Some(b) => match Branch::from_index(b as u8) {
                        Some(b) => Some(b),
                        None => {
                            self.err(join(P, "branch"), "must be 1 or 2");
                            None
                        }
                    },
                    None => {
                        if !t.contains_key("branch") {
                            self.err(join(P, "branch"), "missing key");
                        }
                        None
                    }
                };
                // `phi_index = m` means φ = 2πm/N, commensurate with the ring.
                let phi = match (t.contains_key("phi"), t.contains_key("phi_index")) {
                    (true, true) => {
                        self.err(join(P, "phi"), "give either `phi` or `phi_index`, not both");
                        None
                    }
                    (_, true) => match (self.number(t, P, "phi_index"), n_sites) {
                        (Some(m), Some(n)) if n > 0 => Some(2.0 * PI * m / n as f64),
                        _ => None,
                    },
                    _ => Some(self.number(t, P, "phi").unwrap_or(0.0)),
                };
                let window = match self.string(t, P, "window").as_deref() {
                    None | Some("uniform") => Some(Window::Uniform),
                    Some("gaussian") => {
                        let u = self.required_number(t, P, "u");
                        let sigma = self.required_number(t, P, "sigma");
                        let sigma = positive(self, "sigma", sigma);
                        Some(Window::Gaussian { u: u?, sigma: sigma? })
                    }
                    Some(other) => {
                        self.err(join(P, "window"), format!("expected \"uniform\" or \"gaussian\", found {other:?}"));
                        None
                    }
                };
                Some(InitialState::Dressed { n, branch: branch?, phi: phi?, window: window? })
            }
            other => {
                self.err(
                    join(P, "kind"),
                    format!("unknown kind {other:?} (expected coherent, vacuum, fock, entangled or dressed)"),
                );
                None
            }
        }
    }

    fn envelope(&mut self, t: &Table, peak_g: f64) -> Option<Envelope> {
        const P: &str = "envelope";
        let shape = self.string(t, P, "shape").unwrap_or_else(|| "constant".into());
        let env = match shape.as_str() {
            "constant" => {
                self.unknown_keys(t, P, &["shape"]);
                Envelope::constant(peak_g)
            }
            "gaussian" => {
                self.unknown_keys(t, P, &["shape", "center", "width"]);
                let c = self.required_number(t, P, "center");
                let w = self.required_number(t, P, "width");
                Envelope::gaussian(peak_g, c?, w?)
            }
            "raised_cosine" => {
                self.unknown_keys(t, P, &["shape", "start", "duration"]);
                let s = self.required_number(t, P, "start");
                let d = self.required_number(t, P, "duration");
                Envelope::raised_cosine(peak_g, s?, d?)
            }
            other => {
                self.err(join(P, "shape"), format!("unknown shape {other:?}"));
                return None;
            }
        };
        for check in [env.validate(), env.check_slow_envelope()] {
            if let Err(e) = check {
                match e {
                    blochdress_core::Error::Validation { field, message } => self.err(join(P, &field), message),
                    other => self.err(P, other.to_string()),
                }
                return None;
            }
        }
        Some(env)
    }

    fn evolution(
        &mut self,
        t: &Table,
        chain: &ChainConfig,
        envelope: Option<&Envelope>,
        schedule: &CouplingSchedule,
    ) -> Option<(EvolutionPlan, f64)> {
        const P: &str = "evolution";
        self.unknown_keys(t, P, &["t_end", "bloch_periods", "dt"]);
        let t_end = match self.either(t, P, "t_end", "bloch_periods")? {
            (true, v) => v,
            (false, periods) => {
                if chain.omega_b <= 0.0 {
                    self.err(join(P, "bloch_periods"), "needs a positive chain.omega_b");
                    return None;
                }
                // Pulsed runs count the periods from the end of the pulse.
                let offset = envelope.and_then(Envelope::support).map_or(0.0, |(_, end)| end);
                offset + periods * 2.0 * PI / chain.omega_b
            }
        };
        let plan = match self.number(t, P, "dt") {
            Some(dt) => EvolutionPlan::new(dt, t_end, 1),
            None => EvolutionPlan::with_default_dt(chain, schedule, t_end, 1),
        };
        if let Err(e) = plan.validate(chain, schedule) {
            match e {
                blochdress_core::Error::Validation { field, message } => self.err(join(P, &field), message),
                other => self.err(P, other.to_string()),
            }
            return None;
        }
        Some((plan, t_end))
    }

    fn outputs(&mut self, t: &Table, dt: Option<f64>) -> Option<Outputs> {
        const P: &str = "outputs";
        self.unknown_keys(t, P, &["directory", "observables", "sample_stride", "sample_interval"]);
        let directory = self.string(t, P, "directory").map(PathBuf::from);
        let observables = match t.get("observables") {
            None => Observable::ALL.into_iter().collect(),
            Some(Value::Array(items)) => {
                let mut set = BTreeSet::new();
                for (i, item) in items.iter().enumerate() {
                    match item.as_str().and_then(Observable::parse) {
                        Some(o) => {
                            set.insert(o);
                        }
                        None => self.err(
                            format!("{P}.observables[{i}]"),
                            format!(
                                "unknown observable {item} (expected one of {})",
                                Observable::ALL.map(Observable::name).join(", ")
                            ),
                        ),
                    }
                }
                set
            }
            Some(_) => {
                self.err(join(P, "observables"), "expected an array of names");
                BTreeSet::new()
            }
        };
        let sample_stride = match (t.contains_key("sample_stride"), t.contains_key("sample_interval")) {
            (true, true) => {
                self.err(join(P, "sample_stride"), "give either `sample_stride` or `sample_interval`, not both");
                return None;
            }
            (true, false) => match self.count(t, P, "sample_stride")? {
                0 => {
                    self.err(join(P, "sample_stride"), "must be at least 1");
                    return None;
                }
                s => s,
            },
            (false, true) => {
                let interval = self.number(t, P, "sample_interval")?;
                if !(interval > 0.0) {
                    self.err(join(P, "sample_interval"), "must be positive");
                    return None;
                }
                ((interval / dt?).round() as usize).max(1)
            }
            (false, false) => 1,
        };
        Some(Outputs { directory, observables, sample_stride })
    }

    fn check_state_fits(&mut self, chain: &ChainConfig, init: &InitialState) {
        let needed = init.min_n_max();
        let exact = !matches!(init, InitialState::Product { photons: PhotonPrep::Coherent { .. }, .. });
        if exact && chain.n_max < needed {
            self.err("chain.n_max", format!("initial state needs n_max >= {needed}, found {}", chain.n_max));
        }
        let n_sites = chain.n_sites as f64;
        let mut center = |key: &str, u: f64| {
            if !(u >= 0.0 && u < n_sites) {
                self.err(join("initial_state", key), format!("must lie in [0, {n_sites})"));
            }
        };
        match init {
            InitialState::Product { a, b, .. } => {
                center("u", a.u);
                center("u_b", b.u);
            }
            InitialState::Entangled { u, .. } => center("u", *u),
            InitialState::Dressed { window: Window::Gaussian { u, .. }, .. } => center("u", *u),
            InitialState::Dressed { .. } => {}
        }
    }
}
