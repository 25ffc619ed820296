//! Command-line front end of the `qgc` binary.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 invalid configuration,
//! 3 enumeration guard exceeded, 4 a verification failed. All randomness
//! comes from `--seed` (default 0).

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::mcsim::{
    empirical_covering, empirical_packing, km_dimensions, simulate_comp_mac, simulate_km,
    CompMacSim, CoveringConfig, KmSim, PackingConfig, SimConfig, SimReport,
};
use crate::oracle::{default_suite, OracleVerdict, LEMMA_IDS};
use crate::prob::{JointPmf, Pmf};
use crate::regions::presets::{adder_mac, aux_with_one, km_source, mac_states_example, noise_law};
use crate::regions::{
    comp_mac_baselines, comp_mac_corollary_rate, comp_mac_qgc_rate, gp_example_outer_check,
    km_baselines, km_qgc_rate, mac_linear_objective, mac_states_sum_rate, optimize,
    optimize_km_aux, AuxPair, GridSpec, RateResult, Sense,
};
use config::Node;
use output::{fmt_num, Cell, Format, Table};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

/// A module error attributed to a configuration key.
fn at_key(node: &Node, e: Error) -> Failure {
    let f = Failure::from(e);
    Failure {
        code: f.code,
        message: format!("key `{}`: {}", node.path(), f.message),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Guard { .. }) {
            3
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qgc",
    version,
    about = "Quasi group code rate regions, simulations and lemma checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Decimal places of emitted numbers.
    #[arg(long, default_value_t = 4, global = true)]
    pub precision: usize,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an achievable-rate formula from a configuration file.
    Rates {
        #[arg(value_enum)]
        problem: Problem,
        #[command(flatten)]
        input: ConfigArg,
        /// Search auxiliary laws (and the linear baseline's input laws) on a grid.
        #[arg(long)]
        optimize: bool,
    },
    /// Regenerate a built-in table.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
    },
    /// Run a Monte Carlo experiment.
    Simulate {
        #[arg(value_enum)]
        scheme: Scheme,
        #[command(flatten)]
        input: ConfigArg,
        /// Number of trials (overrides `sim.trials`).
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the exhaustive lemma checks (`all` for every suite).
    Verify {
        /// pphi, typical-intersection, sum-typical, entropy-conv, noise-entropy,
        /// claim-decomp, injectivity, gp-outer, or all
        id: String,
    },
}

#[derive(Args, Debug)]
pub struct ConfigArg {
    /// TOML configuration file.
    #[arg(short, long)]
    pub config: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    DistSrc,
    CompMac,
    MacStates,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table1,
    Table2,
    Table3,
    MacStatesExample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Km,
    CompMac,
    Covering,
    Packing,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Results go to `out` (or `--out`), diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let mut notes = Vec::new();
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| execute(&cli, &mut notes)),
            Err(e) => Err(Failure::usage(e.to_string())),
        },
        None => execute(&cli, &mut notes),
    };
    for n in &notes {
        let _ = writeln!(err, "{n}");
    }
    let emitted = result.and_then(|(bytes, status)| {
        match &cli.out {
            Some(path) => std::fs::write(path, &bytes)
                .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?,
            None => out
                .write_all(&bytes)
                .map_err(|e| Failure::io(e.to_string()))?,
        }
        Ok(status)
    });
    match emitted {
        Ok(status) => status,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, notes: &mut Vec<String>) -> Result<(Vec<u8>, i32), Failure> {
    let (table, status) = match &cli.command {
        Command::Rates {
            problem,
            input,
            optimize,
        } => (rates(*problem, &load(&input.config)?, *optimize)?, 0),
        Command::Reproduce { target } => (reproduce(*target)?, 0),
        Command::Simulate {
            scheme,
            input,
            trials,
            seed,
        } => {
            let start = Instant::now();
            let t = simulate(*scheme, &load(&input.config)?, *trials, *seed)?;
            notes.push(format!(
                "wall-clock: {:.3} s",
                start.elapsed().as_secs_f64()
            ));
            (t, 0)
        }
        Command::Verify { id } => {
            let (t, failed) = verify(id, cli.precision)?;
            for (lemma, instance, witness) in &failed {
                notes.push(format!("FAIL {lemma} [{instance}]: {witness}"));
            }
            (t, if failed.is_empty() { 0 } else { 4 })
        }
    };
    Ok((table.render(cli.format, cli.precision)?, status))
}

/// Reads and parses a TOML file; syntax errors are parse failures (exit 1).
pub fn load(path: &std::path::Path) -> Result<toml::Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<toml::Value, Failure> {
    text.parse::<toml::Table>()
        .map(toml::Value::Table)
        .map_err(|e| Failure::usage(format!("config parse error: {e}")))
}

const RATE_COLUMNS: [&str; 3] = ["scheme", "formula", "value"];

fn trace_rows(t: &mut Table, tag: &str, r: &RateResult) {
    for term in &r.trace {
        let label = match &term.note {
            Some(n) => format!("{} ({n})", term.label),
            None => term.label.clone(),
        };
        t.push(vec![
            format!("{tag} trace").into(),
            label.into(),
            term.value.into(),
        ]);
    }
}

fn aux_label(aux: &AuxPair) -> String {
    let law = |p: &Pmf| {
        p.probs()
            .iter()
            .map(|x| fmt_num(*x, 4))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let q = aux.q().len();
    if q == 1 && aux.laws(0) == aux.laws(1) {
        format!("({})", law(&aux.laws(0)[0]))
    } else {
        format!("|Q|={q}")
    }
}

pub fn rates(problem: Problem, cfg: &toml::Value, opt: bool) -> Result<Table, Failure> {
    let root = Node::root(cfg);
    let md = config::modulus(&root)?;
    let mut t = Table::new(&RATE_COLUMNS);
    match problem {
        Problem::DistSrc => {
            let src = config::source(&root, md)?;
            let b = km_baselines(&src)?;
            t.push(vec![
                "unstructured".into(),
                "H(X1,X2)".into(),
                b.unstructured.into(),
            ]);
            t.push(vec![
                "linear".into(),
                format!("2 H(X1 +_{} X2)", b.field).into(),
                b.linear.into(),
            ]);
            t.push(vec![
                "group".into(),
                "2 max_s [r/(r-s)] H(Z|[Z]_s)".into(),
                b.group.into(),
            ]);
            let (aux, r) = if opt {
                let (aux, r, _) = optimize_km_aux(&src, &config::grid(&root)?)?;
                (aux, r)
            } else {
                let aux = config::aux_pair(&root.get("aux"), md, "w")?;
                let r = km_qgc_rate(&src, &aux)?;
                (aux, r)
            };
            let label = format!("R1+R2, W law {}", aux_label(&aux));
            t.push(vec!["qgc".into(), label.into(), r.sum().into()]);
            trace_rows(&mut t, "qgc", &r);
        }
        Problem::CompMac => {
            let mac = config::mac(&root, md)?;
            let inputs = config::inputs(&root, md)?;
            let m = md.order() as usize;
            let uniform = inputs.iter().all(|p| *p == Pmf::uniform(m));
            let grid = config::grid(&root)?;
            let j = mac.joint(&inputs[0], &inputs[1])?;
            t.push(vec![
                "unstructured".into(),
                "I(X1X2;Y)/2".into(),
                (j.mutual_info(&["x1", "x2"], &["y"])? / 2.0).into(),
            ]);
            let field = (2 * m as u64 - 1..)
                .find(|c| (2..*c).take_while(|d| d * d <= *c).all(|d| c % d != 0))
                .unwrap_or(2);
            if opt {
                let b = comp_mac_baselines(&mac, &grid)?;
                t.push(vec![
                    "linear".into(),
                    format!(
                        "max min H(Xi) - H(X1 +_{field} X2|Y), step {}",
                        fmt_num(b.linear_grid_step, 6)
                    )
                    .into(),
                    b.linear.into(),
                ]);
                t.push(vec![
                    "group".into(),
                    "min_s [r/(r-s)] I(Z;Y|[Z]_s), uniform inputs".into(),
                    b.group.into(),
                ]);
            } else {
                let lin = mac_linear_objective(&mac, &inputs[0], &inputs[1], field)?;
                t.push(vec![
                    "linear".into(),
                    format!("min H(Xi) - H(X1 +_{field} X2|Y) at the given inputs").into(),
                    lin.into(),
                ]);
                let group = comp_mac_corollary_rate(&mac, &AuxPair::uniform(md))?;
                t.push(vec![
                    "group".into(),
                    "min_s [r/(r-s)] I(Z;Y|[Z]_s), uniform inputs".into(),
                    group.rates[0].into(),
                ]);
            }
            let w_node = root.get("aux");
            let has_w = w_node.get("w").present() || w_node.get("w1").present();
            let eval = |v: &AuxPair| -> crate::Result<RateResult> {
                if has_w {
                    let w = config::aux_pair(&w_node, md, "w")
                        .map_err(|f| Error::InvalidSpec(f.message))?;
                    comp_mac_qgc_rate(&mac, &inputs[0], &inputs[1], v, &w)
                } else {
                    comp_mac_corollary_rate(&mac, v)
                }
            };
            if !has_w && !uniform {
                return Err(w_node
                    .get("w")
                    .invalid("required when the inputs are not uniform"));
            }
            // Validate the W laws up front so their key path is reported.
            if has_w {
                config::aux_pair(&w_node, md, "w")?;
            }
            let (v, r) = if opt {
                let res = optimize(&[m], &grid, Sense::Maximize, |p| {
                    AuxPair::symmetric(md, p[0].clone())
                        .and_then(|v| eval(&v))
                        .map_or(f64::NEG_INFINITY, |r| r.rates[0].min(r.rates[1]))
                })?;
                let v = AuxPair::symmetric(md, res.point[0].clone())?;
                let r = eval(&v)?;
                (v, r)
            } else {
                let v = config::aux_pair(&w_node, md, "v")?;
                let r = eval(&v)?;
                (v, r)
            };
            let label = format!("V law {}", aux_label(&v));
            t.push(vec![
                "qgc R1".into(),
                label.clone().into(),
                r.rates[0].into(),
            ]);
            t.push(vec!["qgc R2".into(), label.into(), r.rates[1].into()]);
            trace_rows(&mut t, "qgc", &r);
        }
        Problem::MacStates => {
            let mut cfg = config::mac_states(&root, md)?;
            if opt {
                let grid = config::grid(&root)?;
                let base = cfg.clone();
                let m = md.order() as usize;
                let res = optimize(&[m], &grid, Sense::Maximize, |p| {
                    let mut c = base.clone();
                    match AuxPair::symmetric(md, p[0].clone()) {
                        Ok(v) => c.v = v,
                        Err(_) => return f64::NEG_INFINITY,
                    }
                    mac_states_sum_rate(&c).map_or(f64::NEG_INFINITY, |r| r.sum())
                })?;
                cfg.v = AuxPair::symmetric(md, res.point[0].clone())?;
            }
            let r = mac_states_sum_rate(&cfg).map_err(|e| match e {
                Error::CostViolation { .. } => at_key(&root.get("costs").get("caps"), e),
                e => at_key(&root.get("aux"), e),
            })?;
            let label = format!("R1+R2, V law {}", aux_label(&cfg.v));
            t.push(vec!["qgc".into(), label.into(), r.sum().into()]);
            trace_rows(&mut t, "qgc", &r);
        }
    }
    Ok(t)
}

/// Parameter of the built-in Z_4 examples.
pub const DELTA_N: f64 = 0.6;

pub fn reproduce(target: Target) -> Result<Table, Failure> {
    let mut t = Table::new(&RATE_COLUMNS);
    match target {
        Target::Table1 => {
            let n = noise_law(DELTA_N)?;
            let formulas = ["0.1 d", "0.9 d", "0.1 (1-d)", "0.9 (1-d)"];
            for (a, f) in formulas.iter().enumerate() {
                t.push(vec![
                    format!("P_N({a})").into(),
                    format!("{f}, d={DELTA_N}").into(),
                    n.get(a).into(),
                ]);
            }
            t.push(vec!["H(N)".into(), "entropy".into(), n.entropy().into()]);
        }
        Target::Table2 => {
            let src = km_source(DELTA_N)?;
            let b = km_baselines(&src)?;
            let q = km_qgc_rate(&src, &aux_with_one(0.05)?)?;
            t.push(vec![
                "unstructured".into(),
                "H(X1,X2)".into(),
                b.unstructured.into(),
            ]);
            t.push(vec![
                "linear".into(),
                format!("2 H(X1 +_{} X2)", b.field).into(),
                b.linear.into(),
            ]);
            t.push(vec![
                "group".into(),
                "2 max{H(Z), 2 H(Z|[Z]_1)}".into(),
                b.group.into(),
            ]);
            t.push(vec![
                "qgc".into(),
                "R1+R2, P(W_i=1)=0.05".into(),
                q.sum().into(),
            ]);
        }
        Target::Table3 => {
            let mac = adder_mac(&noise_law(DELTA_N)?)?;
            let b = comp_mac_baselines(&mac, &GridSpec::default())?;
            let q = comp_mac_corollary_rate(&mac, &aux_with_one(0.05)?)?;
            t.push(vec![
                "unstructured".into(),
                "I(X1X2;Y)/2".into(),
                b.unstructured.into(),
            ]);
            t.push(vec![
                "linear".into(),
                format!("max min{{H(X1),H(X2)}} - H(X1 +_{} X2|Y)", b.field).into(),
                b.linear.into(),
            ]);
            t.push(vec![
                "group".into(),
                "min{I(Z;Y), 2 I(Z;Y|[Z]_1)}".into(),
                b.group.into(),
            ]);
            t.push(vec![
                "qgc".into(),
                "R_i, P(V_i=1)=0.05".into(),
                q.rates[0].into(),
            ]);
        }
        Target::MacStatesExample => {
            let cfg = mac_states_example()?;
            let r = mac_states_sum_rate(&cfg)?;
            t.push(vec!["qgc".into(), "R1+R2".into(), r.sum().into()]);
            trace_rows(&mut t, "qgc", &r);
            let gp = gp_example_outer_check(0.02);
            let verdict = if gp.below_one { "< 1" } else { ">= 1" };
            t.push(vec![
                "gp-outer".into(),
                format!("max over grid step {}: {verdict}", gp.step).into(),
                gp.max.into(),
            ]);
        }
    }
    Ok(t)
}

const SIM_COLUMNS: [&str; 27] = [
    "scheme",
    "n",
    "k",
    "l1",
    "l2",
    "trials",
    "structural",
    "e1",
    "e2",
    "ec",
    "ed",
    "success",
    "no_candidate",
    "multiple",
    "wrong_unique",
    "truth_outside",
    "error",
    "error_lower",
    "error_upper",
    "ed_given_encoded",
    "ed_lower",
    "ed_upper",
    "rate_inner1",
    "rate_inner2",
    "rate_bin1",
    "rate_bin2",
    "rate_decoder",
];

fn sim_row(cfg: &SimConfig, r: &SimReport) -> Vec<Cell> {
    vec![
        r.scheme.clone().into(),
        cfg.n.into(),
        cfg.k.into(),
        cfg.l[0].into(),
        cfg.l[1].into(),
        r.trials.into(),
        r.structural.into(),
        r.e1.into(),
        r.e2.into(),
        r.ec.into(),
        r.ed.into(),
        r.success.into(),
        r.detail.no_candidate.into(),
        r.detail.multiple.into(),
        r.detail.wrong_unique.into(),
        r.detail.truth_outside.into(),
        r.error.estimate.into(),
        r.error.lower.into(),
        r.error.upper.into(),
        r.ed_given_encoded.estimate.into(),
        r.ed_given_encoded.lower.into(),
        r.ed_given_encoded.upper.into(),
        r.rates.inner[0].into(),
        r.rates.inner[1].into(),
        r.rates.bins[0].into(),
        r.rates.bins[1].into(),
        r.rates.decoder_index.into(),
    ]
}

const PROBE_COLUMNS: [&str; 11] = [
    "probe",
    "n",
    "k",
    "trials",
    "failures",
    "estimate",
    "lower",
    "upper",
    "code_rate",
    "bound",
    "margin",
];

/// Blocklengths with matching per-n lists of `key` (a scalar repeats).
fn per_n(sim: &Node, key: &str, len: usize) -> Result<Option<Vec<usize>>, Failure> {
    let node = sim.get(key);
    if !node.present() {
        return Ok(None);
    }
    let v = node.usize_list()?;
    if v.contains(&0) {
        return Err(node.invalid("must be positive"));
    }
    match v.len() {
        1 => Ok(Some(vec![v[0]; len])),
        l if l == len => Ok(Some(v)),
        _ => Err(node.invalid(format!("expected one value or {len} values, one per n"))),
    }
}

pub fn simulate(
    scheme: Scheme,
    cfg: &toml::Value,
    trials: Option<u64>,
    seed: u64,
) -> Result<Table, Failure> {
    let root = Node::root(cfg);
    let md = config::modulus(&root)?;
    let sim = root.get("sim");
    let ns = sim.get("n").usize_list()?;
    if ns.is_empty() || ns.contains(&0) {
        return Err(sim.get("n").invalid("blocklengths must be positive"));
    }
    let trials = match trials {
        Some(t) => t,
        None => sim.get("trials").usize_or(1000)? as u64,
    };
    if trials == 0 {
        return Err(sim.get("trials").invalid("must be positive"));
    }
    let eps = sim.get("eps").f64()?;
    let mut t;
    match scheme {
        Scheme::Km | Scheme::CompMac => {
            t = Table::new(&SIM_COLUMNS);
            let eps_dec = sim.get("eps_dec").opt_f64()?;
            let eps_index = sim.get("eps_index").opt_f64()?;
            let ks = per_n(&sim, "k", ns.len())?;
            let ls = per_n(&sim, "l", ns.len())?;
            let aux = root.get("aux");
            for (i, &n) in ns.iter().enumerate() {
                let mut sc = SimConfig {
                    n,
                    k: 0,
                    l: [0, 0],
                    eps,
                    eps_dec,
                    eps_index,
                    trials,
                    seed,
                };
                let report = if scheme == Scheme::Km {
                    let source = config::source(&root, md)?;
                    let w = config::aux_pair(&aux, md, "w")?;
                    let v_law = aux.get("v").ring_pmf(md)?;
                    (sc.k, sc.l) = match (&ks, &ls) {
                        (Some(k), Some(l)) => (k[i], [l[i], l[i]]),
                        (None, None) => {
                            km_dimensions(&source, &w, n, sim.get("margin").f64_or(0.15)?)?
                        }
                        _ => return Err(sim.invalid("give both `k` and `l`, or neither")),
                    };
                    simulate_km(&KmSim {
                        source,
                        w,
                        v_law,
                        sim: sc.clone(),
                    })
                    .map_err(|e| at_key(&sim, e))?
                } else {
                    let (Some(k), Some(l)) = (&ks, &ls) else {
                        return Err(sim.get("k").invalid("`k` and `l` are required"));
                    };
                    (sc.k, sc.l) = (k[i], [l[i], l[i]]);
                    let cm = CompMacSim {
                        mac: config::mac(&root, md)?,
                        inputs: config::inputs(&root, md)?,
                        w: config::aux_pair(&aux, md, "w")?,
                        v: config::aux_pair(&aux, md, "v")?,
                        sim: sc.clone(),
                    };
                    simulate_comp_mac(&cm).map_err(|e| at_key(&sim, e))?
                };
                t.push(sim_row(&sc, &report));
            }
        }
        Scheme::Covering | Scheme::Packing => {
            t = Table::new(&PROBE_COLUMNS);
            let ks = per_n(&sim, "k", ns.len())?.ok_or_else(|| sim.get("k").invalid("missing"))?;
            let index = root.get("index");
            let index_eps = index.get("eps").f64_or(eps)?;
            for (&n, &k) in ns.iter().zip(&ks) {
                let idx = config::index_set(&index, md, k, index_eps)?;
                let (name, rep) = if scheme == Scheme::Covering {
                    let cov = root.get("covering");
                    let px = cov.get("x").pmf()?;
                    let kernel = config::kernel(&cov.get("channel"), px.len())?;
                    if kernel.target_len() as u64 != md.order() {
                        return Err(cov
                            .get("channel")
                            .invalid("reconstruction letters must lie on the ring"));
                    }
                    let joint = JointPmf::from_pmf("x", &px)
                        .with_kernel("xhat", &["x"], &kernel)
                        .map_err(|e| cov.invalid(e))?;
                    let c = CoveringConfig {
                        modulus: md,
                        joint,
                        index: idx,
                        n,
                        eps,
                        trials,
                        seed,
                    };
                    (
                        "covering",
                        empirical_covering(&c).map_err(|e| at_key(&sim, e))?,
                    )
                } else {
                    let pk = root.get("packing");
                    let input = pk.get("input").ring_pmf(md)?;
                    let channel = config::kernel(&pk.get("channel"), md.order() as usize)?;
                    let c = PackingConfig {
                        modulus: md,
                        input,
                        channel,
                        index: idx,
                        n,
                        eps,
                        trials,
                        seed,
                    };
                    (
                        "packing",
                        empirical_packing(&c).map_err(|e| at_key(&sim, e))?,
                    )
                };
                t.push(vec![
                    name.into(),
                    n.into(),
                    k.into(),
                    rep.failures.trials.into(),
                    rep.failures.count.into(),
                    rep.failures.estimate.into(),
                    rep.failures.lower.into(),
                    rep.failures.upper.into(),
                    rep.code_rate.into(),
                    rep.bound.into(),
                    rep.margin.into(),
                ]);
            }
        }
    }
    t.echo = Some(
        toml::to_string(cfg)
            .map_err(|e| Failure::io(e.to_string()))?
            .trim_end()
            .to_string()
            + &format!("\ntrials = {trials}, seed = {seed}"),
    );
    Ok(t)
}

const VERIFY_COLUMNS: [&str; 6] = ["lemma", "instance", "pass", "checked", "metrics", "witness"];

/// A failing `(lemma, instance, witness)`.
pub type FailedCheck = (String, String, String);

/// Runs one suite or all of them; returns the table and the failing checks.
pub fn verify(id: &str, precision: usize) -> Result<(Table, Vec<FailedCheck>), Failure> {
    let ids: Vec<&str> = if id == "all" {
        LEMMA_IDS.to_vec()
    } else if LEMMA_IDS.contains(&id) {
        vec![id]
    } else {
        return Err(Failure::usage(format!(
            "unknown lemma id `{id}`; expected one of {} or `all`",
            LEMMA_IDS.join(", ")
        )));
    };
    let mut t = Table::new(&VERIFY_COLUMNS);
    let mut failed = Vec::new();
    for id in ids {
        for v in default_suite(id)? {
            if !v.pass {
                failed.push((
                    v.lemma.clone(),
                    v.instance.clone(),
                    v.witness.clone().unwrap_or_default(),
                ));
            }
            t.push(verdict_row(&v, precision));
        }
    }
    Ok((t, failed))
}

fn verdict_row(v: &OracleVerdict, precision: usize) -> Vec<Cell> {
    let metrics = v
        .metrics
        .iter()
        .map(|(k, x)| format!("{k}={}", fmt_num(*x, precision)))
        .collect::<Vec<_>>()
        .join(";");
    vec![
        v.lemma.clone().into(),
        v.instance.clone().into(),
        v.pass.into(),
        v.checked.into(),
        metrics.into(),
        v.witness.clone().unwrap_or_default().into(),
    ]
}

#[cfg(test)]
mod tests;
