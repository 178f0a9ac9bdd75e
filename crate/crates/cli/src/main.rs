use anyhow::{anyhow, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gowerslab::coset::recover_structured;
use gowerslab::decoder::{decode_group, decode_interval};
use gowerslab::engine::{self, bench_backends, NormResult};
use gowerslab::euclid;
use gowerslab::generate::{generate, GenParams, Kind};
use gowerslab::nil::{self, HeisenbergSpec, SweepConfig};
use gowerslab::selftest;
use gowerslab::{DomainSpec, Signal, Tolerances};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Bad arguments or unreadable inputs; maps to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

#[derive(Parser)]
#[command(name = "gowerslab", version, about = "Gowers uniformity norms and their extremisers")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Tolerance profile: default, strict or loose.
    #[arg(long, global = true, default_value = "default")]
    tolerance_profile: String,
    /// Write the report (JSON or CSV) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock timings in JSON reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated signal as JSON.
    Generate(GenArgs),
    /// Compute a U^k norm.
    Norm {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
        backend: BackendArg,
    },
    /// Recover c·e(P) from a near-extremiser on a group or interval.
    Decode {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Recover a coset-supported phase from a near-extremiser of the critical inequality.
    Coset {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Near-extremality slack.
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// Sharp constants, the cube-form determinant and the Gaussian sharpness check.
    Euclid {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 8.0)]
        extent: f64,
        #[arg(long, default_value_t = 2048)]
        points: usize,
        /// Coarser grids for the refinement study.
        #[arg(long, value_delimiter = ',', default_values_t = [24usize, 48, 96])]
        ladder: Vec<usize>,
    },
    /// Build a threshold witness signal.
    Nil(NilArgs),
    /// Quadratic correlation scan at one denominator.
    Scan {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        denominator: usize,
    },
    /// Run a threshold sweep from a JSON configuration; emits CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Time the direct and recursive backends; emits CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64, 128])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Comma-separated ids, names or tags.
        #[arg(long)]
        filter: Option<String>,
        /// Exit 0 when only the known unattainable criteria fail.
        #[arg(long)]
        allow_known: bool,
    },
}

#[derive(clap::Args)]
struct Source {
    /// Signal JSON file.
    #[arg(long, conflicts_with = "kind")]
    input: Option<PathBuf>,
    /// Generate the input instead of reading it.
    #[arg(long)]
    kind: Option<String>,
    /// Domain for generated input, e.g. cyclic:27, group:2x4, interval:100, grid:1:8:2048.
    #[arg(long)]
    domain: Option<String>,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    #[arg(long, default_value = "cyclic:16")]
    domain: String,
    /// JSON file with generator parameters; flags below override it.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    step: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    offset: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    frequency: Option<Vec<i64>>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    phase_noise: Option<f64>,
    #[arg(long)]
    magnitude_noise: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construct {
    Heisenberg,
    Quadext,
    Skew,
}

#[derive(clap::Args)]
struct NilArgs {
    #[arg(long, value_enum)]
    construct: Construct,
    /// Length N of the sequence or group.
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Extension factor for quadext.
    #[arg(long, default_value_t = 3)]
    q: usize,
    /// Skew-shift rotation.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 0.0)]
    y0: f64,
    /// Also compute the U³/L² ratio and a scan at this denominator.
    #[arg(long)]
    denominator: Option<usize>,
    /// Write the signal itself here.
    #[arg(long)]
    signal_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Auto,
    Direct,
    Recursive,
    Fft,
}

fn parse_domain(s: &str) -> Result<DomainSpec> {
    let bad = || usage(format!("cannot parse domain '{s}' (try cyclic:27, group:2x4, interval:100, grid:1:8:2048)"));
    let mut parts = s.split(':');
    let kind = parts.next().ok_or_else(bad)?;
    let rest: Vec<&str> = parts.collect();
    let d = match (kind, rest.as_slice()) {
        ("cyclic", [n]) => DomainSpec::cyclic(n.parse().map_err(|_| bad())?),
        ("group", [m]) => {
            let moduli: Vec<usize> = m.split('x').map(|v| v.parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
            DomainSpec::group(&moduli)
        }
        ("interval", [n]) => DomainSpec::interval(n.parse().map_err(|_| bad())?),
        ("grid", [dim, extent, points]) => DomainSpec::grid(
            dim.parse().map_err(|_| bad())?,
            extent.parse().map_err(|_| bad())?,
            points.parse().map_err(|_| bad())?,
        ),
        _ => return Err(bad()),
    };
    d.validate()?;
    Ok(d)
}

fn parse_kind(s: &str) -> Result<Kind> {
    Ok(s.parse::<Kind>()?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("cannot parse {}: {e}", path.display())))
}

fn load(source: &Source, seed: u64) -> Result<Signal> {
    match (&source.input, &source.kind) {
        (Some(path), _) => {
            let f: Signal = read_json(path)?;
            f.domain.validate()?;
            if f.values.len() != f.domain.cardinality() {
                return Err(usage(format!(
                    "{}: {} values for a domain of size {}",
                    path.display(),
                    f.values.len(),
                    f.domain.cardinality()
                )));
            }
            Ok(f)
        }
        (None, Some(kind)) => {
            let domain = parse_domain(source.domain.as_deref().unwrap_or("cyclic:16"))?;
            let p = GenParams {
                domain,
                ..GenParams::default()
            };
            Ok(generate(parse_kind(kind)?, &p, seed)?)
        }
        (None, None) => Err(usage("give --input FILE or --kind KIND")),
    }
}

struct Output {
    out: Option<PathBuf>,
    timings: bool,
}

impl Output {
    fn json(&self, mut report: Value, summary: &str) -> Result<()> {
        if !self.timings {
            strip_timings(&mut report);
        }
        let text = serde_json::to_string_pretty(&report)? + "\n";
        self.emit(&text, summary)
    }

    fn emit(&self, text: &str, summary: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
                println!("{summary}");
            }
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for key in ["elapsed", "elapsed_s"] {
                map.remove(key);
            }
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn csv_text<T: Serialize>(rows: &[T], header: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}

fn norm(f: &Signal, k: usize, backend: BackendArg, tol: &Tolerances) -> Result<NormResult> {
    Ok(match backend {
        BackendArg::Auto => engine::uk(f, k, tol)?,
        BackendArg::Direct => engine::uk_direct(f, k, tol)?,
        BackendArg::Recursive => engine::uk_recursive(f, k)?,
        BackendArg::Fft => {
            if k != 2 {
                return Err(usage("the fft backend computes U² only; pass --k 2"));
            }
            engine::u2_fft(f)?
        }
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let tol = Tolerances::profile(&cli.tolerance_profile).ok_or_else(|| {
        usage(format!(
            "unknown tolerance profile '{}' (expected default, strict or loose)",
            cli.tolerance_profile
        ))
    })?;
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let seed = cli.seed;
    let out = Output {
        out: cli.out.clone(),
        timings: cli.timings,
    };
    match cli.command {
        Command::Generate(a) => {
            let mut p: GenParams = match &a.params {
                Some(path) => read_json(path)?,
                None => GenParams::default(),
            };
            p.domain = parse_domain(&a.domain)?;
            if let Some(v) = a.degree {
                p.degree = v;
            }
            if let Some(v) = a.k {
                p.k = v;
            }
            if let Some(v) = a.step {
                p.step = v;
            }
            if let Some(v) = a.offset {
                p.offset = v;
            }
            if let Some(v) = a.frequency {
                p.frequency = v;
            }
            if let Some(v) = a.sigma {
                p.sigma = v;
            }
            if let Some(v) = a.phase_noise {
                p.phase_noise = v;
            }
            if let Some(v) = a.magnitude_noise {
                p.magnitude_noise = v;
            }
            let f = generate(parse_kind(&a.kind)?, &p, seed)?;
            let summary = format!("{} signal on {} (seed {seed})", a.kind, f.domain.describe());
            out.json(to_value(&f)?, &summary)?;
        }
        Command::Norm { source, k, backend } => {
            let f = load(&source, seed)?;
            let r = norm(&f, k, backend, &tol)?;
            let summary = format!("U^{k} = {:.12} ({})", r.value, r.backend.name());
            out.json(json!({"command": "norm", "seed": seed, "domain": f.domain, "result": r}), &summary)?;
        }
        Command::Decode { source, k } => {
            let f = load(&source, seed)?;
            let r = match f.domain {
                DomainSpec::Interval { .. } => decode_interval(&f, k, &tol)?,
                _ => decode_group(&f, k, &tol)?,
            };
            let summary = format!("decoded degree {} phase, residual {:.3e}", r.phase.degree, r.residual_l1);
            out.json(json!({"command": "decode", "seed": seed, "k": k, "report": r}), &summary)?;
        }
        Command::Coset { source, k, eps } => {
            let f = load(&source, seed)?;
            let r = recover_structured(&f, k, eps, &tol)?;
            let summary = format!(
                "coset of size {} at offset {}, total residual {:.3e}",
                r.coset.elements.len(),
                r.coset.offset,
                r.total_residual
            );
            out.json(json!({"command": "coset", "seed": seed, "k": k, "eps": eps, "report": r}), &summary)?;
        }
        Command::Euclid {
            d,
            extent,
            points,
            ladder,
        } => {
            let constants: Vec<Value> = (1..=8)
                .map(|k| -> Result<Value> {
                    Ok(json!({
                        "k": k,
                        "c_k": euclid::sharp_gowers_constant(k)?,
                        "recursion": if k >= 2 { Some(euclid::constant_recursion(k)?) } else { None },
                    }))
                })
                .collect::<Result<_>>()?;
            let dets: Vec<Value> = (1..=12)
                .map(|d| -> Result<Value> { Ok(json!({"d": d, "det": euclid::cube_form_det(d)?.to_string()})) })
                .collect::<Result<_>>()?;
            let sharp = euclid::verify_sharpness(d, extent, points, &ladder, &tol)?;
            let gauss = euclid::gaussian_uk_exact(d)?;
            let summary = format!("d={d}: ratio {:.6} vs C_d {:.6}, error {:.2e}", sharp.ratio, sharp.c_d, sharp.error);
            out.json(
                json!({"command": "euclid", "constants": constants, "cube_form_det": dets, "gaussian": gauss, "sharpness": sharp}),
                &summary,
            )?;
        }
        Command::Nil(a) => nil_command(a, seed, &tol, &out)?,
        Command::Scan { source, denominator } => {
            let f = load(&source, seed)?;
            let s = nil::quad_correlation_scan(&f, denominator, &tol)?;
            let summary = format!("max correlation {:.6} at (a, b) = ({}, {}) mod {}", s.max_corr, s.a, s.b, denominator);
            out.json(json!({"command": "scan", "seed": seed, "result": s}), &summary)?;
        }
        Command::Sweep { config } => {
            let mut cfg: SweepConfig = read_json(&config)?;
            if seed != 0 {
                cfg.seed = seed;
            }
            let rows = nil::threshold_sweep(&cfg, &tol)?;
            let text = csv_text(&rows, &["construction", "params", "u3_ratio", "max_corr", "argmax_a", "argmax_b"])?;
            out.emit(&text, &format!("{} sweep rows", rows.len()))?;
        }
        Command::Bench { sizes, k } => {
            #[derive(Serialize)]
            struct Row<'a> {
                size: usize,
                backend: &'a str,
                k: usize,
                elapsed_s: f64,
                work: u64,
            }
            let rows = bench_backends(&sizes, k, seed, &tol)?;
            let rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    size: r.size,
                    backend: &r.backend,
                    k: r.k,
                    elapsed_s: r.elapsed_s,
                    work: r.work,
                })
                .collect();
            let text = csv_text(&rows, &["size", "backend", "k", "elapsed_s", "work"])?;
            out.emit(&text, &format!("{} bench rows", rows.len()))?;
        }
        Command::Selftest { filter, allow_known } => {
            if selftest::select(filter.as_deref()).is_empty() {
                return Err(usage(format!("filter '{}' matches no criterion", filter.unwrap_or_default())));
            }
            let ctx = selftest::Context {
                tol,
                seed: if seed == 0 { selftest::Context::default().seed } else { seed },
                ..selftest::Context::default()
            };
            // Progress goes to stderr when the report itself is on stdout.
            let to_stderr = out.out.is_none();
            let outcomes = selftest::run(filter.as_deref(), &ctx, |o| {
                if to_stderr {
                    eprintln!("{}", o.line());
                } else {
                    println!("{}", o.line());
                }
            });
            let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
            let unexpected = failed.iter().any(|id| !selftest::KNOWN_UNATTAINABLE.contains(id));
            let summary = format!("{}/{} criteria passed", outcomes.len() - failed.len(), outcomes.len());
            out.json(json!({"command": "selftest", "seed": ctx.seed, "outcomes": outcomes}), &summary)?;
            if unexpected || (!failed.is_empty() && !allow_known) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn nil_command(a: NilArgs, seed: u64, tol: &Tolerances, out: &Output) -> Result<()> {
    let (f, params) = match a.construct {
        Construct::Heisenberg => {
            let base = HeisenbergSpec::default();
            let spec = HeisenbergSpec {
                alpha1: a.alpha1.unwrap_or(base.alpha1),
                alpha2: a.alpha2.unwrap_or(base.alpha2),
                sigma: a.sigma,
                n: a.n,
                ..base
            };
            let cert = nil::gamma_certificate(&spec, 100);
            (nil::heisenberg_nilsequence(&spec)?, json!({"spec": spec, "certificate": cert}))
        }
        Construct::Quadext => (nil::quadratic_example(a.n, a.q)?, json!({"n": a.n, "q": a.q})),
        Construct::Skew => {
            let alpha = a.alpha.unwrap_or_else(nil::golden);
            (
                nil::skew_shift_orbit(alpha, a.x0, a.y0, a.n)?,
                json!({"alpha": alpha, "x0": a.x0, "y0": a.y0, "n": a.n}),
            )
        }
    };
    if let Some(path) = &a.signal_out {
        std::fs::write(path, serde_json::to_string(&f)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    let l2 = gowerslab::domains::lp_norm(&f, 2.0)?;
    let mut report = json!({"command": "nil", "seed": seed, "params": params, "l2": l2});
    let mut summary = format!("{} values, L2 {l2:.6}", f.len());
    if let Some(d) = a.denominator {
        let ratio = nil::u3_ratio(&f, tol)?;
        let scan = nil::quad_correlation_scan(&f, d, tol)?;
        summary = format!("{summary}, U3/L2 {ratio:.6}, max correlation {:.4} mod {d}", scan.max_corr);
        report["u3_ratio"] = json!(ratio);
        report["scan"] = to_value(&scan)?;
    }
    out.json(report, &summary)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let is_usage = err.downcast_ref::<Usage>().is_some()
                || err.downcast_ref::<gowerslab::Error>().map(|e| e.is_usage()).unwrap_or(false);
            ExitCode::from(if is_usage { 2 } else { 1 })
        }
    }
}
