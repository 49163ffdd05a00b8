//! Command-line front end for `grsn`. [`run`] parses arguments, performs one
//! command and returns the exit code with a single JSON document.

pub mod cache;

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grsn::closed_forms::{
    comparison_refined, comparison_total, connected_series, jackson_series, long_cycle_series, phi_series,
};
use grsn::counting::{Counter, ElementIndex, Limits};
use grsn::polynomiality::{
    fit_grsn_polynomial, fit_sn_polynomial, generate_samples, normalization_verdict, Genus, Normalization,
    SampleMethod,
};
use grsn::series::EgfSeries;
use grsn::{reflections, DecoratedGraph, Error, GroupElement, GroupParams};
use serde_json::{json, Value};

use crate::cache::CacheFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Failed(_) => 5,
            CliError::Core(Error::ResourceLimit { .. }) => 4,
            CliError::Core(e) if e.is_consistency_failure() => 5,
            CliError::Core(_) => 3,
        }
    }
}

/// Exit code, stdout document and stderr diagnostics of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "grsn", version, about = "Reflection factorizations in G(r,s,n)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true)]
    r: Option<u32>,
    #[arg(long, global = true)]
    s: Option<u32>,
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Element as inline JSON `{"perm":[..],"exps":[..]}` or `@file`.
    #[arg(long, global = true)]
    omega: Option<String>,
    /// Worker threads for counting (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON-lines count cache to load and extend.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    max_tuples: Option<u128>,
    #[arg(long, global = true)]
    max_dp_states: Option<u128>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the reflections of G(r,s,n).
    Reflections,
    /// Number of m-tuples of reflections with product omega.
    Count {
        #[arg(long)]
        m: u32,
    },
    /// Number of tuples with m1 swaps and m2 diagonal reflections.
    CountRefined {
        #[arg(long)]
        m1: u32,
        #[arg(long)]
        m2: u32,
    },
    /// Number of transitive tuples.
    CountConnected {
        #[arg(long, required_unless_present_all = ["m1", "m2"])]
        m: Option<u32>,
        #[arg(long, requires = "m2", conflicts_with = "m")]
        m1: Option<u32>,
        #[arg(long, requires = "m1", conflicts_with = "m")]
        m2: Option<u32>,
        #[arg(long, value_enum, default_value_t = Method::Inversion)]
        method: Method,
    },
    /// Checks the comparison formula against enumeration on every element.
    VerifyComparison {
        #[arg(long, default_value_t = 5)]
        max_m: u32,
    },
    /// Exponential generating series to a given order.
    Series {
        #[arg(long, value_enum)]
        kind: SeriesKind,
        #[arg(long)]
        order: usize,
        /// Exponent of φ(ω) in Z/(r/s); taken from omega when absent.
        #[arg(long)]
        t: Option<u32>,
    },
    /// Fits the polynomial behind connected counts of genus g with l cycles.
    Fit {
        #[arg(long)]
        g: String,
        #[arg(long)]
        l: usize,
        /// Required unless r = s = 1.
        #[arg(long)]
        delta: Option<u8>,
        #[arg(long, value_enum, default_value_t = NormArg::Derived)]
        normalization: NormArg,
        /// Comma-separated values of n to sample.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<u32>,
        #[arg(long, value_enum, default_value_t = SampleArg::Inversion)]
        samples: SampleArg,
        /// Try both normalizations and report which is n-independent.
        #[arg(long)]
        verdict: bool,
    },
    /// Ordered walks and weights of a decorated graph.
    Walks {
        /// Graph as inline JSON or `@file`.
        #[arg(long)]
        graph: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Enum,
    Inversion,
    Comparison,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesKind {
    Phi,
    Connected,
    Jackson,
    LongCycle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Printed,
    Derived,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleArg {
    Inversion,
    Enumeration,
}

fn read_arg(s: &str) -> Result<String, CliError> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

impl Global {
    fn params(&self) -> Result<GroupParams, CliError> {
        match (self.r, self.s, self.n) {
            (Some(r), Some(s), Some(n)) => Ok(GroupParams::new(r, s, n)?),
            _ => Err(CliError::Usage("--r, --s and --n are required".into())),
        }
    }

    fn rs(&self) -> Result<(u32, u32), CliError> {
        match (self.r, self.s) {
            (Some(r), Some(s)) => Ok((r, s)),
            _ => Err(CliError::Usage("--r and --s are required".into())),
        }
    }

    fn omega(&self) -> Result<GroupElement, CliError> {
        let params = self.params()?;
        let raw = self.omega.as_deref().ok_or_else(|| CliError::Usage("--omega is required".into()))?;
        let text = read_arg(raw)?;
        let mut v: Value =
            serde_json::from_str(&text).map_err(|e| CliError::Core(Error::InvalidElement(format!("bad JSON: {e}"))))?;
        let obj = v
            .as_object_mut()
            .ok_or_else(|| CliError::Core(Error::InvalidElement("element must be a JSON object".into())))?;
        for (k, val) in [("r", params.r()), ("s", params.s()), ("n", params.n())] {
            match obj.get(k) {
                Some(given) if given != &json!(val) => {
                    return Err(CliError::Core(Error::ParamMismatch(
                        format!("--{k} {val}"),
                        format!("element {k}={given}"),
                    )));
                }
                _ => {
                    obj.insert(k.into(), json!(val));
                }
            }
        }
        serde_json::from_value(v).map_err(|e| CliError::Core(Error::InvalidElement(e.to_string())))
    }

    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(t) = self.max_tuples {
            l.max_enum_tuples = t;
        }
        if let Some(d) = self.max_dp_states {
            l.max_dp_states = d;
        }
        l
    }
}

fn series_json(s: &EgfSeries) -> Result<Value, CliError> {
    Ok(serde_json::to_value(s.to_json()?).expect("series serialize"))
}

fn execute(cli: &Cli, counter: &Counter) -> Result<Value, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Reflections => {
            let p = g.params()?;
            let refl = reflections(p);
            Ok(json!({ "group": p.to_string(), "count": refl.len(), "reflections": refl }))
        }
        Command::Count { m } => Ok(json!({ "count": counter.count_all(&g.omega()?, *m)?.to_string() })),
        Command::CountRefined { m1, m2 } => {
            Ok(json!({ "count": counter.count_refined(&g.omega()?, *m1, *m2)?.to_string() }))
        }
        Command::CountConnected { m, m1, m2, method } => {
            let w = g.omega()?;
            let count = match (method, m, m1.zip(*m2)) {
                (Method::Enum, Some(m), _) => counter.count_connected_enum_total(&w, *m)?,
                (Method::Enum, None, Some((a, b))) => counter.count_connected_enum(&w, a, b)?,
                (Method::Inversion, Some(m), _) => counter.connected_from_all(&w, *m)?,
                (Method::Inversion, None, Some(_)) => {
                    return Err(CliError::Usage("--method inversion needs --m, not --m1/--m2".into()))
                }
                (Method::Comparison, Some(m), _) => comparison_total(counter, &w, *m)?,
                (Method::Comparison, None, Some((a, b))) => comparison_refined(counter, &w, a, b)?,
                (_, None, None) => return Err(CliError::Usage("give --m or --m1 and --m2".into())),
            };
            let method = match method {
                Method::Enum => "enum",
                Method::Inversion => "inversion",
                Method::Comparison => "comparison",
            };
            Ok(json!({ "count": count.to_string(), "method": method }))
        }
        Command::VerifyComparison { max_m } => {
            let p = g.params()?;
            let index = ElementIndex::new(p)?;
            let mut checked = 0u64;
            let mut mismatches = Vec::new();
            for m in 0..=*max_m {
                for m1 in 0..=m {
                    let m2 = m - m1;
                    for idx in 0..index.size() {
                        let w = index.unrank(idx);
                        let by_enum = counter.count_connected_enum(&w, m1, m2)?;
                        let by_formula = comparison_refined(counter, &w, m1, m2)?;
                        checked += 1;
                        if by_enum != by_formula {
                            mismatches.push(json!({
                                "element": w, "m1": m1, "m2": m2,
                                "enumeration": by_enum.to_string(), "formula": by_formula.to_string(),
                            }));
                        }
                    }
                }
            }
            let out = json!({ "group": p.to_string(), "max_m": max_m, "checked": checked, "mismatches": mismatches });
            if !mismatches.is_empty() {
                return Err(CliError::Failed(out.to_string()));
            }
            Ok(out)
        }
        Command::Series { kind, order, t } => {
            let (name, s) = match kind {
                SeriesKind::Jackson => {
                    let n = g.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
                    ("jackson", jackson_series(n, *order)?)
                }
                SeriesKind::Connected => ("connected", connected_series(counter, &g.omega()?, *order)?),
                SeriesKind::Phi | SeriesKind::LongCycle => {
                    let p = g.params()?;
                    let t = match t {
                        Some(t) => *t,
                        None => g.omega()?.project_phi(),
                    };
                    if matches!(kind, SeriesKind::Phi) {
                        ("phi", phi_series(p, t, *order)?)
                    } else {
                        ("long-cycle", long_cycle_series(p, t, *order)?)
                    }
                }
            };
            let mut v = series_json(&s)?;
            v["kind"] = json!(name);
            v["order"] = json!(order);
            Ok(v)
        }
        Command::Fit { g: genus, l, delta, normalization, ns, samples, verdict } => {
            let genus: Genus = genus.parse()?;
            let (r, s) = g.rs()?;
            let method = match samples {
                SampleArg::Inversion => SampleMethod::Inversion,
                SampleArg::Enumeration => SampleMethod::Enumeration,
            };
            let ns: Vec<u32> = ns.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            let first = *ns.first().ok_or_else(|| CliError::Usage("--ns is empty".into()))?;
            let params = GroupParams::new(r, s, first)?;
            let nz = match normalization {
                NormArg::Printed => Normalization::Printed,
                NormArg::Derived => Normalization::Derived,
            };
            if r == 1 && s == 1 && delta.is_none() && !verdict {
                if !genus.is_integer() {
                    return Err(CliError::Core(Error::InvalidRequest("S_n genus must be an integer".into())));
                }
                let data = generate_samples(counter, params, genus, *l, 1, &ns, method)?;
                let pairs: Vec<_> = data.into_iter().map(|x| (x.cycle_type, x.count)).collect();
                let report = fit_sn_polynomial(genus.twice() / 2, *l, &pairs)?;
                return Ok(serde_json::to_value(report).expect("report serializes"));
            }
            let delta = delta.ok_or_else(|| CliError::Usage("--delta is required for G(r,s,n) fits".into()))?;
            let data = generate_samples(counter, params, genus, *l, delta, &ns, method)?;
            if *verdict {
                let v = normalization_verdict(genus, *l, delta, params, &data)?;
                let ok = v.successful();
                let mut out = serde_json::to_value(&v).expect("verdict serializes");
                out["n_independent"] = json!(ok.iter().map(ToString::to_string).collect::<Vec<_>>());
                if ok.is_empty() {
                    return Err(CliError::Failed(out.to_string()));
                }
                return Ok(out);
            }
            let report = fit_grsn_polynomial(genus, *l, delta, params, nz, &data)?;
            Ok(serde_json::to_value(report).expect("report serializes"))
        }
        Command::Walks { graph } => {
            let text = read_arg(graph)?;
            let graph: DecoratedGraph =
                serde_json::from_str(&text).map_err(|e| CliError::Core(Error::InvalidGraph(e.to_string())))?;
            let walks: Vec<Value> = graph
                .ordered_walks()
                .iter()
                .map(|w| {
                    json!({
                        "start": w.start,
                        "end": w.end,
                        "edges": w.steps.iter().map(|s| s.edge + 1).collect::<Vec<_>>(),
                        "vertices": std::iter::once(w.start).chain(w.steps.iter().map(|s| s.head)).collect::<Vec<_>>(),
                        "weight": graph.walk_weight(w),
                    })
                })
                .collect();
            Ok(json!({ "walks": walks, "product": graph.evaluate(), "connected": graph.is_connected() }))
        }
    }
}

fn run_parsed(cli: &Cli) -> Result<Value, CliError> {
    let cache = cli.global.cache.as_ref().map(CacheFile::new);
    let table = match &cache {
        Some(c) => c.load()?,
        None => Default::default(),
    };
    let counter = Counter::with_table(cli.global.limits(), table);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Io(e.to_string()))?;
    let result = pool.install(|| execute(cli, &counter));
    // record whatever was computed, even on failure, unless the table itself conflicts
    if let Some(c) = &cache {
        if !matches!(result, Err(CliError::Core(Error::Conflict { .. }))) {
            c.append(&counter.table())?;
        }
    }
    result
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match run_parsed(&cli) {
        Ok(v) => Outcome { code: 0, stdout: format!("{v}\n"), stderr: String::new() },
        Err(CliError::Failed(doc)) => {
            Outcome { code: 5, stdout: format!("{doc}\n"), stderr: "consistency check failed\n".into() }
        }
        Err(e) => {
            let code = e.exit_code();
            let doc = json!({ "error": e.to_string(), "exit_code": code });
            Outcome { code, stdout: format!("{doc}\n"), stderr: format!("error: {e}\n") }
        }
    }
}
