use clap::{Args, Parser, Subcommand, ValueEnum};
use cmcert::analytic;
use cmcert::arith::{parse_decimal, Integer, Rational};
use cmcert_cli::report::{self, Format};
use cmcert_cli::{cache, exit_code, run_pipeline, Checks, PipelineConfig, PipelineOutput, Stage, Status};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Certified genus-2 CM computations over cyclic quartic CM fields containing
/// Q(sqrt 5). Exit codes: 0 all checks pass, 2 some check undecidable,
/// 3 certified violation, 1 usage or I/O error.
#[derive(Parser)]
#[command(name = "cmcert", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Numeric values are decimal strings.
#[derive(Args, Clone)]
struct Opts {
    /// upper bound for disc_K
    #[arg(long, global = true, default_value = "4000000")]
    disc_bound: String,
    /// starting working precision in bits
    #[arg(long, global = true, default_value = "256")]
    prec: String,
    /// largest precision tried before reporting undecidable
    #[arg(long, global = true, default_value = "2048")]
    prec_cap: String,
    #[arg(long, global = true, default_value = "0")]
    seed: String,
    /// worker threads over fields
    #[arg(long, global = true, default_value = "1")]
    jobs: String,
    /// restrict to these discriminants (repeatable)
    #[arg(long = "disc", global = true)]
    disc: Vec<String>,
    /// report directory
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// json, csv or svg
    #[arg(long, global = true)]
    format: Option<String>,
    /// write the printed output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the fields (JSON Lines field database)
    Fields,
    /// Class groups
    Classgroup,
    /// CM triples per CM type class
    Triples,
    /// Reduced period matrices with the inequality suite
    Reduce,
    /// Faltings heights and their bounds
    Heights,
    /// Absolute invariants, class polynomials and the integrality shortlist
    Invariants,
    /// Run a check suite and set the exit code
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Main-theorem bound for F = Q(sqrt 5)
    Bound {
        #[arg(long, default_value = "0")]
        h0: String,
        #[arg(long, default_value = "2")]
        gamma_f: String,
    },
    /// Full pipeline with JSON, CSV and SVG outputs
    Report,
    /// Single analytic checks
    Analytic {
        #[arg(long, value_enum)]
        check: AnalyticCheck,
        #[arg(long, default_value = "10")]
        lo: String,
        #[arg(long, default_value = "1000000")]
        hi: String,
        #[arg(long, default_value = "0")]
        h0: String,
        #[arg(long, default_value = "2")]
        gamma_f: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Inequalities,
    Analytic,
    Constants,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyticCheck {
    #[value(name = "S-bounds")]
    SBounds,
    Kappa,
    DeltaLemma,
    CosetBound,
    MainBound,
}

type Res<T> = Result<T, String>;

// any decimal string denoting an integer, so "4e6" is fine
fn int(name: &str, s: &str) -> Res<Integer> {
    parse_decimal(s)
        .filter(|q| *q.denom() == 1)
        .map(|q| q.numer().clone())
        .ok_or_else(|| format!("--{}: expected a decimal integer, got {:?}", name, s))
}

fn num<T: std::str::FromStr>(name: &str, s: &str) -> Res<T> {
    int(name, s)?.to_string().parse().map_err(|_| format!("--{}: out of range: {:?}", name, s))
}

fn rat(name: &str, s: &str) -> Res<Rational> {
    parse_decimal(s).ok_or_else(|| format!("--{}: expected a decimal number, got {:?}", name, s))
}

fn config(o: &Opts, stage: Stage, checks: Checks) -> Res<PipelineConfig> {
    let cfg = PipelineConfig {
        disc_bound: int("disc-bound", &o.disc_bound)?,
        only: o.disc.clone(),
        prec: num("prec", &o.prec)?,
        prec_cap: num("prec-cap", &o.prec_cap)?,
        seed: num("seed", &o.seed)?,
        jobs: num("jobs", &o.jobs)?,
        out_dir: o.out_dir.clone(),
        cache_dir: cache::dir_from_env(),
        stage,
        checks,
        ..PipelineConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn none() -> Checks {
    Checks { inequalities: false, heights: false, invariants: false, analytic: false }
}

fn emit(o: &Opts, text: &str) -> Res<()> {
    match &o.out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {}", p.display(), e)),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn pipeline(o: &Opts, stage: Stage, checks: Checks) -> Res<PipelineOutput> {
    let cfg = config(o, stage, checks)?;
    let out = run_pipeline(&cfg).map_err(|e| e.to_string())?;
    for d in &out.dossiers {
        if let Some(e) = &d.error {
            eprintln!("disc {}: {}", d.disc(), e);
        }
    }
    Ok(out)
}

/// Per-field JSON with selected dossier members.
fn per_field(out: &PipelineOutput, keys: &[&str]) -> Value {
    let rows: Vec<Value> = out
        .dossiers
        .iter()
        .map(|d| {
            let full = serde_json::to_value(d).expect("dossier json");
            let mut m = serde_json::Map::new();
            m.insert("disc_K".into(), json!(d.disc().to_string()));
            for k in keys {
                m.insert(k.to_string(), full[*k].clone());
            }
            m.insert("status".into(), json!(d.status().as_str()));
            m.insert("error".into(), json!(d.error));
            Value::Object(m)
        })
        .collect();
    json!(rows)
}

/// Aggregated pass/fail lines over all fields.
fn check_lines(out: &PipelineOutput) -> Vec<String> {
    let mut agg: std::collections::BTreeMap<String, (Status, bool, usize)> = Default::default();
    for d in &out.dossiers {
        for (k, c) in &d.checks {
            let e = agg.entry(k.clone()).or_insert((Status::Pass, c.informational, 0));
            e.0 = e.0.and(c.status);
            e.2 += 1;
        }
    }
    let mut lines: Vec<String> = agg
        .iter()
        .map(|(k, (s, info, n))| format!("{:<32} {:<10} fields={}{}", k, s.as_str(), n, if *info { " (informational)" } else { "" }))
        .collect();
    let errs = out.dossiers.iter().filter(|d| d.error.is_some()).count();
    lines.push(format!("{:<32} {}", "field_errors", errs));
    lines
}

fn run(cli: Cli) -> Res<Status> {
    let o = &cli.opts;
    match cli.cmd {
        Cmd::Fields => {
            let cfg = config(o, Stage::Fields, none())?;
            let fs = cmcert_cli::select_fields(&cfg).map_err(|e| e.to_string())?;
            let fmt = o.format.as_deref().unwrap_or("json");
            let mut text = String::new();
            match fmt {
                "json" => {
                    for f in &fs {
                        text += &serde_json::to_string(&f.db_row()).map_err(|e| e.to_string())?;
                        text.push('\n');
                    }
                }
                "csv" => {
                    text += "disc_K,disc_F,conductor_f,poly\n";
                    for f in &fs {
                        let r = f.db_row().record;
                        let poly: Vec<String> = r.poly.iter().map(|c| c.to_string()).collect();
                        text += &format!("{},{},{},\"{}\"\n", r.disc_k, r.disc_f, r.conductor_f, poly.join(" "));
                    }
                }
                other => return Err(format!("fields: unsupported format {}", other)),
            }
            eprintln!("{} fields", fs.len());
            emit(o, &text)?;
            Ok(Status::Pass)
        }
        Cmd::Classgroup => {
            let out = pipeline(o, Stage::ClassGroup, none())?;
            emit(o, &pretty(&per_field(&out, &["class_group"])))?;
            Ok(out.status)
        }
        Cmd::Triples => {
            let out = pipeline(o, Stage::Triples, none())?;
            emit(o, &pretty(&per_field(&out, &["class_group", "types"])))?;
            Ok(out.status)
        }
        Cmd::Reduce => {
            let out = pipeline(o, Stage::Points, Checks { inequalities: true, ..none() })?;
            emit(o, &pretty(&per_field(&out, &["types", "checks"])))?;
            Ok(out.status)
        }
        Cmd::Heights => {
            let out = pipeline(o, Stage::Full, Checks { heights: true, ..none() })?;
            let mut v = per_field(&out, &["heights", "checks"]);
            // h_i^inf per type class
            for (row, d) in v.as_array_mut().expect("array").iter_mut().zip(&out.dossiers) {
                row["h_inf"] = json!(d.types.iter().map(|t| &t.h_inf).collect::<Vec<_>>());
            }
            emit(o, &pretty(&v))?;
            Ok(out.status)
        }
        Cmd::Invariants => {
            let out = pipeline(o, Stage::Full, Checks { invariants: true, ..none() })?;
            let v = json!({
                "fields": per_field(&out, &["invariants", "good_reduction"]),
                "shortlist": out.shortlist,
                "shortlist_undecided": out.shortlist_undecided,
            });
            emit(o, &pretty(&v))?;
            Ok(out.status)
        }
        Cmd::Verify { suite } => {
            let mut lines = Vec::new();
            let mut status = Status::Pass;
            let checks = match suite {
                Suite::Inequalities => Some((Stage::Points, Checks { inequalities: true, ..none() })),
                Suite::Analytic => Some((Stage::Full, Checks { analytic: true, ..none() })),
                Suite::Constants => None,
                Suite::All => Some((Stage::Full, Checks::all())),
            };
            if let Some((stage, c)) = checks {
                let out = pipeline(o, stage, c)?;
                lines.extend(check_lines(&out));
                status = status.and(out.status);
                if matches!(suite, Suite::All) {
                    lines.push(format!("{:<32} {:?}", "shortlist", out.shortlist));
                }
            }
            if matches!(suite, Suite::Constants | Suite::All) {
                let c = analytic::constants_report(128).map_err(|e| e.to_string())?;
                let s = if c.all_ok() { Status::Pass } else { Status::Fail };
                lines.push(format!(
                    "{:<32} {:<10} quartic={:.2} (<= 263: {}) aggregate={:.2} (<= 839: {}) exponents {} / {}",
                    "constants",
                    s.as_str(),
                    c.quartic.constant,
                    c.quartic_le_263,
                    c.aggregate,
                    c.aggregate_le_839,
                    c.quartic.delta_exponent,
                    c.aggregate_t_exponent
                ));
                status = status.and(s);
            }
            lines.push(format!("{:<32} {}", "overall", status.as_str()));
            emit(o, &(lines.join("\n") + "\n"))?;
            Ok(status)
        }
        Cmd::Bound { h0, gamma_f } => {
            let b = cmcert_cli::main_bound(&rat("h0", &h0)?, &rat("gamma-f", &gamma_f)?).map_err(|e| e.to_string())?;
            emit(o, &pretty(&serde_json::to_value(&b).expect("json")))?;
            Ok(Status::Pass)
        }
        Cmd::Report => {
            let out = pipeline(o, Stage::Full, Checks::all())?;
            let dir = o.out_dir.clone().unwrap_or_else(|| PathBuf::from("report"));
            let formats = match &o.format {
                Some(f) => vec![f.parse::<Format>()?],
                None => vec![Format::Json, Format::Csv, Format::Svg],
            };
            let mut files = Vec::new();
            for f in formats {
                files.extend(report::emit_report(&out, f, &dir).map_err(|e| e.to_string())?);
            }
            let v = json!({
                "status": out.status.as_str(),
                "fields": out.dossiers.len(),
                "shortlist": out.shortlist,
                "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            });
            emit(o, &pretty(&v))?;
            Ok(out.status)
        }
        Cmd::Analytic { check, lo, hi, h0, gamma_f } => match check {
            AnalyticCheck::SBounds => {
                let out = pipeline(o, Stage::Full, Checks { analytic: true, ..none() })?;
                let mut v = per_field(&out, &["analytic"]);
                for row in v.as_array_mut().expect("array") {
                    let a = row["analytic"].take();
                    row["s_bounds"] = a["s_bounds"].clone();
                    row["sandwich"] = a["sandwich"].clone();
                }
                emit(o, &pretty(&v))?;
                Ok(out.status)
            }
            AnalyticCheck::Kappa | AnalyticCheck::CosetBound => {
                let out = pipeline(o, Stage::Full, Checks { analytic: true, ..none() })?;
                let key = if matches!(check, AnalyticCheck::Kappa) { "kappa" } else { "coset_bound" };
                let mut v = per_field(&out, &["analytic"]);
                for row in v.as_array_mut().expect("array") {
                    let a = row["analytic"].take();
                    row[key] = a[key].clone();
                    if key == "coset_bound" {
                        row["min_norm"] = a["min_norm"].clone();
                    }
                }
                emit(o, &pretty(&v))?;
                Ok(out.status)
            }
            AnalyticCheck::DeltaLemma => {
                let (lo, hi): (u64, u64) = (num("lo", &lo)?, num("hi", &hi)?);
                let bad = analytic::delta_lemma_scan(lo, hi).map_err(|e| e.to_string())?;
                emit(o, &pretty(&json!({ "lo": lo.to_string(), "hi": hi.to_string(), "counterexamples": bad })))?;
                Ok(if bad.is_empty() { Status::Pass } else { Status::Fail })
            }
            AnalyticCheck::MainBound => {
                let b = cmcert_cli::main_bound(&rat("h0", &h0)?, &rat("gamma-f", &gamma_f)?).map_err(|e| e.to_string())?;
                emit(o, &pretty(&serde_json::to_value(&b).expect("json")))?;
                Ok(Status::Pass)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(s) => ExitCode::from(exit_code(s) as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
