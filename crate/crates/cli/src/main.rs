mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use reality_domain::analytic::membership_reparam_with;
use reality_domain::oracle::{quartic_spectrum, spectrum, Roots};
use reality_domain::scan::{scan_slice_with, trace_boundary_with, ScanOptions, TraceOptions};
use reality_domain::{
    figure1_data, figure2_data, figures, secular_quartic, self_duality_residual, to_reparam, Axis,
    Couplings, Error, RealityClass, SliceSpec, Verdict,
};
use serde_json::{json, Value};

use crate::config::{parse_list, Format, RunConfig, CONFIG_ENV};
use crate::output::{document, emit, fmt_num, num_json, Field, Table};

#[derive(Parser)]
#[command(name = "reality-domain", version, about = "Real-spectrum domain of the 4x4 chain Hamiltonian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues along both root paths.
    Spectrum(Point),
    /// Closed-form membership verdict; exit 0 inside, 1 outside, 4 boundary.
    Classify(Point),
    /// Classify a grid over an (a, c) window at fixed f.
    Scan {
        #[arg(long)]
        f: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Trace the boundary of a fixed-f slice along a fan of rays.
    Trace {
        #[arg(long)]
        f: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Curve data: 1 = secular curve split, 2 = critical-point cubic.
    Figure {
        #[arg(long, value_parser = ["1", "2"])]
        which: String,
        #[command(flatten)]
        point: Point,
    },
}

#[derive(Args)]
struct Point {
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    #[arg(long, allow_hyphen_values = true)]
    f: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// key = value config file; defaults to $REALITY_DOMAIN_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    /// lo_a,hi_a,lo_c,hi_c
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    res: Option<usize>,
    #[arg(long)]
    rays: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// lo,hi
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

impl Common {
    fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut cfg = RunConfig::default();
        let path = self.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        if let Some(p) = path {
            cfg.apply_file(&p).map_err(Failure::Usage)?;
        }
        if let Some(w) = &self.window {
            cfg.window = parse_list(w).map_err(|e| Failure::Usage(format!("--window: {e}")))?;
        }
        if let Some(r) = &self.range {
            cfg.range = parse_list(r).map_err(|e| Failure::Usage(format!("--range: {e}")))?;
        }
        cfg.res = self.res.unwrap_or(cfg.res);
        cfg.rays = self.rays.unwrap_or(cfg.rays);
        cfg.tol = self.tol.unwrap_or(cfg.tol);
        cfg.steps = self.steps.unwrap_or(cfg.steps);
        cfg.format = self.format.unwrap_or(cfg.format);
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        cfg.validate().map_err(Failure::Usage)?;
        Ok(cfg)
    }
}

fn couplings(p: &Point) -> Result<Couplings, Failure> {
    Couplings::new(p.a, p.c, p.f).map_err(|e| Failure::Usage(e.to_string()))
}

fn config_json(cfg: &RunConfig, extra: Value) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

/// Data to `--out` (summary on stdout) or to stdout (summary on stderr).
fn deliver(cfg: &RunConfig, table: &Table, extra: Value, summary: Vec<(&str, Value)>) -> Result<(), Failure> {
    let bytes = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let s: serde_json::Map<String, Value> = summary.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            document(config_json(cfg, extra), Value::Object(s), table.rows_json())
        }
    };
    let out = cfg.out.as_deref();
    emit(out, &bytes).map_err(|e| {
        let target = out.map_or("stdout".to_string(), |p| p.display().to_string());
        Failure::Io(format!("cannot write {target}: {e}"))
    })?;
    let text: String = summary.iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect();
    if out.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    Ok(())
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |x| {
            if n.is_f64() { fmt_num(x) } else { n.to_string() }
        }),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// Small reports (spectrum, classify): text lines, or one JSON document.
fn report(cfg: &RunConfig, lines: Vec<(String, Value)>, rows: Table, extra: Value) -> Result<(), Failure> {
    let bytes = match cfg.format {
        Format::Csv => {
            let mut s: String = lines.iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect();
            s.push_str(&String::from_utf8(rows.to_csv()).expect("csv is utf-8"));
            s.into_bytes()
        }
        Format::Json => {
            let summary: serde_json::Map<String, Value> = lines.into_iter().collect();
            document(config_json(cfg, extra), Value::Object(summary), rows.rows_json())
        }
    };
    let out = cfg.out.as_deref();
    emit(out, &bytes).map_err(|e| Failure::Io(format!("cannot write output: {e}")))
}

fn root_rows(route: &'static str, roots: &Roots, rows: &mut Vec<Vec<Field>>) {
    for (i, z) in roots.iter().enumerate() {
        rows.push(vec![Field::Text(route), Field::Int(i as u64 + 1), Field::Num(z.re), Field::Num(z.im)]);
    }
}

fn cmd_spectrum(p: &Point) -> Outcome {
    let cfg = p.common.resolve()?;
    let x = couplings(p)?;
    let tol = cfg.tolerance();
    let q = secular_quartic(&x)?;
    let m = spectrum(&x, &tol)?;
    let r = quartic_spectrum(&q, &tol)?;

    let mut lines = vec![
        ("A".to_string(), num_json(q.a_coeff)),
        ("C".to_string(), num_json(q.c_coeff)),
        ("b".to_string(), num_json(x.b())),
        ("classification".to_string(), json!(m.classification.as_str())),
        ("quartic_classification".to_string(), json!(r.classification.as_str())),
    ];
    if x.f() == 0.0 {
        let residual = if m.classification.is_real() {
            num_json(self_duality_residual(&m.roots)?)
        } else {
            json!("n/a")
        };
        lines.push(("self_duality_residual".to_string(), residual));
    }
    let mut rows = Vec::new();
    root_rows("matrix", &m.roots, &mut rows);
    root_rows("quartic", &r.roots, &mut rows);
    let table = Table { header: &["route", "index", "re", "im"], rows };
    report(&cfg, lines, table, json!({"a": x.a(), "c": x.c(), "f": x.f()}))?;
    Ok(0)
}

fn cmd_classify(p: &Point) -> Outcome {
    let cfg = p.common.resolve()?;
    let x = couplings(p)?;
    let band = cfg.boundary_band();
    let m = reality_domain::analytic::membership_analytic_with(&x, band)?;
    let mut lines = vec![
        ("verdict".to_string(), json!(m.verdict.as_str())),
        ("slack".to_string(), num_json(m.slack)),
        ("reason".to_string(), json!(m.reason.as_str())),
    ];
    match to_reparam(&x).and_then(|pt| membership_reparam_with(&pt, band).map(|r| (pt, r))) {
        Ok((pt, r)) => lines.extend([
            ("alpha".to_string(), num_json(pt.alpha)),
            ("delta".to_string(), num_json(pt.delta)),
            ("phi".to_string(), num_json(pt.phi)),
            ("reparam_verdict".to_string(), json!(r.verdict.as_str())),
            ("reparam_slack".to_string(), num_json(r.slack)),
            ("reparam_reason".to_string(), json!(r.reason.as_str())),
        ]),
        Err(e) => lines.push(("reparam_verdict".to_string(), json!(format!("not representable: {e}")))),
    }
    let table = Table { header: &["a", "c", "f"], rows: vec![vec![Field::Num(x.a()), Field::Num(x.c()), Field::Num(x.f())]] };
    report(&cfg, lines, table, json!({"a": x.a(), "c": x.c(), "f": x.f()}))?;
    Ok(match m.verdict {
        Verdict::Inside => 0,
        Verdict::Outside => 1,
        Verdict::Boundary => 4,
    })
}

fn cmd_scan(f: f64, common: &Common) -> Outcome {
    let cfg = common.resolve()?;
    let [alo, ahi, clo, chi] = cfg.window;
    let spec = SliceSpec::new(f, Axis::new(alo, ahi, cfg.res)?, Axis::new(clo, chi, cfg.res)?)?;
    let options = ScanOptions { tolerance: cfg.tolerance(), band: cfg.boundary_band(), ..ScanOptions::default() };
    let grid = scan_slice_with(&spec, &options)?;
    let rows = grid
        .cells
        .iter()
        .map(|c| {
            vec![
                Field::Num(c.a),
                Field::Num(c.c),
                Field::Num(c.f),
                Field::Num(c.a_coeff),
                Field::Num(c.c_coeff),
                Field::Text(c.verdict.as_str()),
                Field::Num(c.slack),
                Field::Text(c.oracle.map_or("failed", RealityClass::as_str)),
                Field::Bool(c.agree),
            ]
        })
        .collect();
    let table = Table { header: &["a", "c", "f", "A", "C", "verdict", "slack", "oracle_class", "agree"], rows };
    let s = grid.summary;
    let summary = vec![
        ("cells", json!(s.cells)),
        ("inside", json!(s.inside)),
        ("outside", json!(s.outside)),
        ("boundary", json!(s.boundary)),
        ("disagreements", json!(s.disagreements)),
        ("oracle_failures", json!(s.oracle_failures)),
        ("decisive", json!(s.decisive)),
        ("decisive_disagreements", json!(s.decisive_disagreements)),
        ("agreement_rate", num_json(s.agreement_rate())),
    ];
    deliver(&cfg, &table, json!({"command": "scan", "f": f}), summary)?;
    Ok(0)
}

fn cmd_trace(f: f64, common: &Common) -> Outcome {
    let cfg = common.resolve()?;
    let options = TraceOptions { band: cfg.boundary_band(), ..TraceOptions::default() };
    let t = trace_boundary_with(f, cfg.rays, cfg.tol, &options)?;
    let rows = t
        .points
        .iter()
        .map(|p| vec![Field::Num(p.ray_angle), Field::Num(p.a), Field::Num(p.c), Field::Num(p.slack)])
        .collect();
    let table = Table { header: &["ray_angle", "a", "c", "slack"], rows };
    let max_slack = t.points.iter().map(|p| p.slack.abs()).fold(0.0, f64::max);
    let summary = vec![
        ("points", json!(t.points.len())),
        ("seed_a", num_json(t.seed.0)),
        ("seed_c", num_json(t.seed.1)),
        ("max_abs_slack", num_json(max_slack)),
    ];
    deliver(&cfg, &table, json!({"command": "trace", "f": f}), summary)?;
    Ok(0)
}

fn cmd_figure(which: &str, p: &Point) -> Outcome {
    let cfg = p.common.resolve()?;
    let x = couplings(p)?;
    let axis = Axis::new(cfg.range[0], cfg.range[1], cfg.steps)?;
    let samples = if which == "1" {
        figure1_data(&x, axis)?
    } else {
        figure2_data(secular_quartic(&x)?.a_coeff, x.f(), axis)?
    };
    let rows = samples
        .iter()
        .map(|s| vec![Field::Num(s.x), Field::Num(s.curve_left), Field::Num(s.curve_right)])
        .collect();
    let table = Table { header: &["x", "curve_left", "curve_right"], rows };
    let crossings: Vec<Value> = figures::crossings(&samples).into_iter().map(num_json).collect();
    let summary = vec![
        ("samples", json!(samples.len())),
        ("sign_changes", json!(figures::sign_changes(&samples))),
        ("crossings", Value::Array(crossings)),
    ];
    let extra = json!({"command": "figure", "which": which.parse::<u8>().unwrap_or(1), "a": x.a(), "c": x.c(), "f": x.f()});
    deliver(&cfg, &table, extra, summary)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            eprintln!("\n{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Spectrum(p) => cmd_spectrum(p),
        Command::Classify(p) => cmd_classify(p),
        Command::Scan { f, common } => cmd_scan(*f, common),
        Command::Trace { f, common } => cmd_trace(*f, common),
        Command::Figure { which, point } => cmd_figure(which, point),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(5)
        }
    }
}
