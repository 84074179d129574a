use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use circle_reeb::arrangement::Arrangement;
use circle_reeb::digraph::{parse_graph_json, to_dot, LeveledDigraph};
use circle_reeb::numeric::{format_rational, set_max_precision, ExactValue, NumericError};
use circle_reeb::sweep::{reeb, PRGraph, SweepError, SweepOptions};
use circle_reeb::synthesis::{synthesize, SynthesisError, TheoremInstance};
use circle_reeb::validate::{ra_region, recheck, verify_against, verify_theorem, ValidationReport};

use crate::{
    CheckArgs, CliError, ExportDotArgs, InstanceArgs, SweepArgs, SynthArgs, TargetArgs, VerifyArgs, EXIT_FAIL, EXIT_OK,
    EXIT_PRECISION, PRECISION_ENV,
};

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub(crate) fn apply_precision_env() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var(PRECISION_ENV) {
        let bits: u32 = raw
            .trim()
            .parse()
            .map_err(|_| CliError::invalid(format!("{PRECISION_ENV} must be a bit count, got {raw:?}")))?;
        set_max_precision(bits);
    }
    Ok(())
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::fail(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::fail(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_arrangement(path: &Path) -> Result<Arrangement, CliError> {
    Arrangement::from_json(&read_json(path)?).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn split_list(s: &str) -> Vec<Value> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| match x.parse::<u64>() {
            Ok(n) => json!(n),
            Err(_) => json!(x),
        })
        .collect()
}

fn instance_from(a: &InstanceArgs) -> Result<TheoremInstance, CliError> {
    let v = match &a.instance {
        Some(path) => read_json(path)?,
        None => {
            let mut m = Map::new();
            let theorem = a.theorem.ok_or_else(|| CliError::invalid("--theorem or --instance is required"))?;
            m.insert("theorem".into(), json!(theorem));
            let children = a.children.as_deref().ok_or_else(|| CliError::invalid("--children is required"))?;
            m.insert("children".into(), Value::Array(split_list(children)));
            if let Some(c2) = &a.children2 {
                m.insert("children2".into(), Value::Array(split_list(c2)));
            }
            let levels = a.levels.as_deref().ok_or_else(|| CliError::invalid("--levels is required"))?;
            let levels: Vec<Value> = levels.split(',').map(|x| json!(x.trim())).collect();
            m.insert("levels".into(), Value::Array(levels));
            m.insert("radius".into(), json!(a.radius));
            m.insert("mode".into(), json!(a.mode));
            Value::Object(m)
        }
    };
    TheoremInstance::from_json(&v).map_err(CliError::invalid)
}

fn sweep_error(e: SweepError) -> CliError {
    if e.is_precision_exhausted() {
        CliError::precision(e)
    } else {
        CliError::fail(e)
    }
}

fn report_code(r: &ValidationReport) -> i32 {
    if r.overall {
        EXIT_OK
    } else if r.precision_exhausted {
        EXIT_PRECISION
    } else {
        EXIT_FAIL
    }
}

/// Report JSON with a re-check verdict for every failing witness.
fn report_json(arr: &Arrangement, r: &ValidationReport, targets: &[ExactValue]) -> Value {
    let mut v = r.to_json();
    let rechecks: Vec<Value> = r
        .failures()
        .map(|c| {
            let verdict = match recheck(arr, c, targets) {
                Ok(b) => json!(b),
                Err(e) => json!(e.to_string()),
            };
            json!({"id": c.id, "confirmed": verdict})
        })
        .collect();
    v["witness_rechecks"] = json!(rechecks);
    v
}

pub(crate) fn synth(a: &SynthArgs) -> Result<i32, CliError> {
    let inst = instance_from(&a.instance)?;
    write_file(&a.out.join("instance.json"), &canonical_json(&inst.to_json()))?;
    match synthesize(&inst) {
        Ok(s) => {
            write_file(&a.out.join("arrangement.json"), &canonical_json(&s.arrangement.to_json()))?;
            write_file(&a.out.join("report.json"), &canonical_json(&s.report_json(&inst)))?;
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "{} circles in dimension {}, radius {}",
                s.arrangement.constraints.len(),
                s.arrangement.ambient_dim,
                s.layout.radius
            );
            Ok(EXIT_OK)
        }
        Err(e) => {
            let report = json!({"instance": inst.to_json(), "error": e.to_string()});
            write_file(&a.out.join("report.json"), &canonical_json(&report))?;
            Err(match e {
                SynthesisError::InvalidInstance(_) => CliError::invalid(e),
                SynthesisError::Numeric(NumericError::PrecisionExhausted { .. }) => CliError::precision(e),
                _ => CliError::fail(e),
            })
        }
    }
}

/// CSV of every gap component: sample, coordinate, interval ends.
pub fn trace_csv(g: &PRGraph) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["gap", "t", "coord", "component", "lo", "hi"]).expect("in-memory write");
    for row in g.trace() {
        w.write_record([
            row.gap.to_string(),
            format_rational(&row.t),
            row.coord.to_string(),
            row.component.to_string(),
            row.lo.to_string(),
            row.hi.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV of ASCII fields")
}

pub(crate) fn sweep(a: &SweepArgs) -> Result<i32, CliError> {
    let arr = read_arrangement(&a.arrangement)?;
    let g = reeb(
        &arr,
        SweepOptions {
            allow_unbounded: a.allow_unbounded,
        },
    )
    .map_err(sweep_error)?;
    write_file(&a.out.join("graph.json"), &canonical_json(&g.to_json(&arr)))?;
    if a.dot {
        let dot = to_dot(&g.graph, "reeb").map_err(CliError::precision)?;
        write_file(&a.out.join("graph.dot"), &dot)?;
    }
    if a.trace {
        write_file(&a.out.join("trace.csv"), &trace_csv(&g))?;
    }
    println!("{} vertices, {} edges", g.graph.vertex_count(), g.graph.edge_count());
    Ok(EXIT_OK)
}

fn read_graph(path: &Path) -> Result<LeveledDigraph, CliError> {
    parse_graph_json(&read_json(path)?).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

pub(crate) fn verify(a: &VerifyArgs) -> Result<i32, CliError> {
    let has_instance = a.instance.instance.is_some() || a.instance.theorem.is_some();
    let inst = if has_instance { Some(instance_from(&a.instance)?) } else { None };
    let arr = match (&a.arrangement, a.resynth, &inst) {
        (Some(p), false, _) => read_arrangement(p)?,
        (None, true, Some(inst)) => match synthesize(inst) {
            Ok(s) => s.arrangement,
            Err(SynthesisError::InvalidInstance(m)) => return Err(CliError::invalid(m)),
            Err(e) => return Err(CliError::fail(e)),
        },
        (Some(_), true, _) => return Err(CliError::invalid("--arrangement and --resynth are exclusive")),
        (None, true, None) => return Err(CliError::invalid("--resynth needs an instance")),
        (None, false, _) => return Err(CliError::invalid("--arrangement or --resynth is required")),
    };
    let (report, targets) = match (&a.target, &inst) {
        (Some(t), _) => {
            let target = read_graph(t)?;
            let levels = target.level_set().map_err(CliError::invalid)?;
            (verify_against(&arr, &target), levels)
        }
        (None, Some(inst)) => (verify_theorem(inst, &arr), inst.level_values()),
        (None, None) => return Err(CliError::invalid("--target or an instance is required")),
    };
    emit(a.out.as_deref(), &canonical_json(&report_json(&arr, &report, &targets)))?;
    if let Some(f) = report.first_failure() {
        eprintln!("FAIL {f}");
    }
    Ok(report_code(&report))
}

pub(crate) fn target(a: &TargetArgs) -> Result<i32, CliError> {
    let inst = instance_from(&a.instance)?;
    let g = inst.target().map_err(CliError::invalid)?;
    emit(a.out.as_deref(), &canonical_json(&g.to_json()))?;
    if let Some(p) = &a.dot {
        write_file(p, &to_dot(&g, "target").map_err(CliError::precision)?)?;
    }
    Ok(EXIT_OK)
}

pub(crate) fn check(a: &CheckArgs) -> Result<i32, CliError> {
    let arr = read_arrangement(&a.arrangement)?;
    let report = ra_region(&arr);
    emit(a.out.as_deref(), &canonical_json(&report_json(&arr, &report, &[])))?;
    if let Some(f) = report.first_failure() {
        eprintln!("FAIL {f}");
    }
    Ok(report_code(&report))
}

pub(crate) fn export_dot(a: &ExportDotArgs) -> Result<i32, CliError> {
    let g = read_graph(&a.graph)?;
    let dot = to_dot(&g, &a.name).map_err(CliError::precision)?;
    emit(a.out.as_deref(), &dot)?;
    Ok(EXIT_OK)
}
