//! Command-line front end.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::algebra::{RationalFunction, Symbol};
use crate::corpus::{corpus_cases, run_cases, CorpusReport};
use crate::geometry::{
    complete, curvature, gauge_search, geodesic_conditions, path_independence_check,
    ChristoffelSet, GaugeChoice, MetricState,
};
use crate::linearize::{
    classify, generate, generate_coefficients, tresse_criteria, FormClass, RootCoefficients,
};
use crate::parser::{parse, parse_rational, print_canonical};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "condlin",
    version,
    about = "Classify and verify conditionally linearizable ODEs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct RootArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub c: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub g: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub h: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub d: String,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Classify an equation given inline, as a file path, or on stdin.
    Classify {
        input: Option<String>,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Build a class form from root coefficients.
    Generate {
        #[command(flatten)]
        root: RootArgs,
        #[arg(long)]
        class: String,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the two linearizability criteria for a root.
    Criteria {
        #[command(flatten)]
        root: RootArgs,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Curvature and flatness conditions of a Christoffel set, given either
    /// directly (`--a .. --f`) or as a root plus a gauge.
    Curvature {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        c: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        g: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        h: String,
        /// `b=<expr>,e=<expr>`
        #[arg(long, allow_hyphen_values = true)]
        gauge: Option<String>,
        #[arg(long, default_value_t = 2)]
        bound: i32,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Numeric parameter values, `k=1,l=2`.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        /// Integrate the metric along two paths to each target.
        #[arg(long)]
        integrate: bool,
        #[arg(long, allow_hyphen_values = true, default_value = "1,1")]
        start: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1,0,1")]
        metric: String,
        /// Targets separated by `;`, e.g. `2,2;1.5,0.5`.
        #[arg(long, allow_hyphen_values = true, default_value = "2,2")]
        targets: String,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long, default_value_t = 1024)]
        steps: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in example corpus.
    Corpus {
        /// Case ids, e.g. `1,3,6-10`.
        #[arg(long)]
        cases: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Outcome = Result<i32, String>;

fn refs(params: &[String]) -> Vec<&str> {
    params.iter().map(String::as_str).collect()
}

fn rf(text: &str, params: &[String], what: &str) -> Result<RationalFunction, String> {
    parse_rational(text, &refs(params)).map_err(|e| format!("{}: {}", what, e))
}

fn root_from(r: &RootArgs, params: &[String]) -> Result<RootCoefficients, String> {
    Ok(RootCoefficients::new(
        rf(&r.c, params, "c")?,
        rf(&r.g, params, "g")?,
        rf(&r.h, params, "h")?,
        rf(&r.d, params, "d")?,
    ))
}

fn read_input(input: Option<&str>, stdin: &mut dyn Read) -> Result<String, String> {
    match input {
        None | Some("-") => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| e.to_string())?;
            Ok(s.trim().to_string())
        }
        Some(t) if std::path::Path::new(t).is_file() => std::fs::read_to_string(t)
            .map(|s| s.trim().to_string())
            .map_err(|e| format!("{}: {}", t, e)),
        Some(t) => Ok(t.to_string()),
    }
}

fn cmd_classify(io: &mut Io, input: Option<&str>, params: &[String], as_json: bool) -> Outcome {
    let text = read_input(input, io.stdin)?;
    let f = parse(&text, &refs(params)).map_err(|e| e.to_string())?;
    let rep = classify(&f).map_err(|e| e.to_string())?;
    if as_json {
        writeln!(io.out, "{}", rep.to_json().to_pretty()).map_err(|e| e.to_string())?;
    } else {
        write!(io.out, "{}", rep).map_err(|e| e.to_string())?;
    }
    Ok(if rep.is_linearizable() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_generate(
    io: &mut Io,
    root: &RootArgs,
    class: &str,
    params: &[String],
    as_json: bool,
) -> Outcome {
    let class: FormClass = class.parse()?;
    let root = root_from(root, params)?;
    let f = generate(&root, class);
    if as_json {
        let coeffs = generate_coefficients(&root, class);
        let named: BTreeMap<String, String> = coeffs
            .named
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect();
        let doc = json!({ "class": class.name(), "equation": print_canonical(&f), "coefficients": named });
        writeln!(io.out, "{}", serde_json::to_string_pretty(&doc).unwrap())
            .map_err(|e| e.to_string())?;
    } else {
        writeln!(io.out, "{}", print_canonical(&f)).map_err(|e| e.to_string())?;
    }
    Ok(EXIT_OK)
}

fn cmd_criteria(io: &mut Io, root: &RootArgs, params: &[String], as_json: bool) -> Outcome {
    let root = root_from(root, params)?;
    let (r1, r2) = tresse_criteria(&root);
    let ok = r1.is_zero() && r2.is_zero();
    if as_json {
        let doc = json!({ "criteria": [r1.to_string(), r2.to_string()], "linearizable": ok });
        writeln!(io.out, "{}", serde_json::to_string_pretty(&doc).unwrap())
            .map_err(|e| e.to_string())?;
    } else {
        writeln!(io.out, "residuals: ({}, {})", r1, r2).map_err(|e| e.to_string())?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn numbers(text: &str, n: usize, what: &str) -> Result<Vec<f64>, String> {
    let v: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(format!("{}: expected {} comma-separated numbers", what, n)),
    }
}

fn gauge_from(text: &str, params: &[String]) -> Result<GaugeChoice, String> {
    let mut g = GaugeChoice::default();
    for part in text.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("gauge: expected b=..,e=.., got `{}`", part))?;
        match k.trim() {
            "b" => g.b = rf(v, params, "gauge b")?,
            "e" => g.e = rf(v, params, "gauge e")?,
            other => return Err(format!("gauge: unknown component `{}`", other)),
        }
    }
    Ok(g)
}

fn values_from(values: &[String]) -> Result<HashMap<Symbol, f64>, String> {
    values
        .iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| format!("values: expected name=number, got `{}`", kv))?;
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| format!("values: bad number `{}`", v))?;
            Ok((Symbol::new(k.trim()), x))
        })
        .collect()
}

fn cmd_curvature(io: &mut Io, cmd: &Command) -> Outcome {
    let Command::Curvature {
        a,
        b,
        c,
        d,
        e,
        f,
        g,
        h,
        gauge,
        bound,
        params,
        values,
        integrate,
        start,
        metric,
        targets,
        tolerance,
        steps,
        json: as_json,
    } = cmd
    else {
        unreachable!()
    };
    let cv = rf(c, params, "c")?;
    let dv = rf(d, params, "d")?;
    let mut notes = Vec::new();
    let cs = match (a, b, e, f) {
        (Some(a), Some(b), Some(e), Some(f)) => ChristoffelSet::new(
            rf(a, params, "a")?,
            rf(b, params, "b")?,
            cv,
            dv,
            rf(e, params, "e")?,
            rf(f, params, "f")?,
        ),
        (None, None, None, None) => {
            let root = RootCoefficients::new(cv, rf(g, params, "g")?, rf(h, params, "h")?, dv);
            let choice = match gauge {
                Some(t) => gauge_from(t, params)?,
                None => match gauge_search(&root, *bound) {
                    Ok(found) => {
                        notes.push(format!("gauge found: b={}, e={}", found.b, found.e));
                        found
                    }
                    Err(err) => {
                        notes.push(format!("{}; using b=0, e=0", err));
                        GaugeChoice::default()
                    }
                },
            };
            complete(&root, &choice)
        }
        _ => return Err("give all of --a --b --e --f, or none of them".into()),
    };
    let k = curvature(&cs);
    let res = geodesic_conditions(&cs);
    let flat = k.is_flat();
    let mut path = None;
    if *integrate {
        let s = numbers(start, 2, "start")?;
        let m = numbers(metric, 3, "metric")?;
        let ts: Result<Vec<(f64, f64)>, String> = targets
            .split(';')
            .map(|t| numbers(t, 2, "targets").map(|v| (v[0], v[1])))
            .collect();
        let rep = path_independence_check(
            &cs,
            &values_from(values)?,
            (s[0], s[1]),
            MetricState::new(m[0], m[1], m[2]),
            &ts?,
            *steps,
            *tolerance,
        )
        .map_err(|e| e.to_string())?;
        path = Some(rep);
    }
    let w = |e: std::io::Error| e.to_string();
    if *as_json {
        let comps: Vec<String> = k.as_array().iter().map(|r| r.to_string()).collect();
        let conds: Vec<String> = res.iter().map(|r| r.to_string()).collect();
        let mut doc = json!({
            "set": { "a": cs.a.to_string(), "b": cs.b.to_string(), "c": cs.c.to_string(),
                     "d": cs.d.to_string(), "e": cs.e.to_string(), "f": cs.f.to_string() },
            "curvature": { "R1_112": comps[0], "R1_212": comps[1], "R2_112": comps[2], "R2_212": comps[3] },
            "conditions": conds,
            "flat": flat,
            "notes": notes,
        });
        if let Some(p) = &path {
            doc["path_discrepancy"] = json!(p.max_discrepancy);
            doc["path_consistent"] = json!(p.consistent());
            doc["endpoints"] = json!(p
                .rows
                .iter()
                .map(|(t, s, _, _)| json!({ "target": [t.0, t.1], "p": s.p, "q": s.q, "r": s.r }))
                .collect::<Vec<_>>());
        }
        writeln!(io.out, "{}", serde_json::to_string_pretty(&doc).unwrap()).map_err(w)?;
    } else {
        writeln!(io.out, "set: {}", cs).map_err(w)?;
        for (name, r) in ["R1_112", "R1_212", "R2_112", "R2_212"]
            .iter()
            .zip(k.as_array())
        {
            writeln!(io.out, "{}: {}", name, r).map_err(w)?;
        }
        writeln!(
            io.out,
            "conditions: ({}, {}, {}, {})",
            res[0], res[1], res[2], res[3]
        )
        .map_err(w)?;
        for n in &notes {
            writeln!(io.out, "note: {}", n).map_err(w)?;
        }
        if let Some(p) = &path {
            for (t, s, _, gap) in &p.rows {
                writeln!(
                    io.out,
                    "metric at ({}, {}): p={:.10} q={:.10} r={:.10} (path gap {:.3e})",
                    t.0, t.1, s.p, s.q, s.r, gap
                )
                .map_err(w)?;
            }
            writeln!(io.out, "path independent: {}", p.consistent()).map_err(w)?;
        }
        writeln!(io.out, "flat: {}", flat).map_err(w)?;
    }
    let ok = flat && path.map(|p| p.consistent()).unwrap_or(true);
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn parse_ids(text: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let bad = || format!("cases: bad selection `{}`", part);
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u32, u32) =
                    (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn corpus_json(rep: &CorpusReport) -> serde_json::Value {
    let cases: Vec<_> = rep
        .results
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "class": r.class.name(),
                "passed": r.passed(),
                "root_recovered": r.root_recovered,
                "criteria_zero": r.criteria_zero,
                "exact_ok": r.exact_ok,
                "solution_ok": r.solution_ok,
                "branch_notes": r.branch_notes,
                "root_equation": r.root_equation.as_ref().map(|j| j.to_string()),
                "failures": r.failures,
                "source_diff": match &r.source_diff {
                    Ok(d) => json!(d.iter().map(|x| x.name.clone()).collect::<Vec<_>>()),
                    Err(e) => json!(e),
                },
            })
        })
        .collect();
    json!({ "cases": cases, "passed": rep.passed(), "total": rep.results.len() })
}

fn cmd_corpus(io: &mut Io, cases: Option<&str>, as_json: bool) -> Outcome {
    let mut all = corpus_cases();
    if let Some(sel) = cases {
        let ids = parse_ids(sel)?;
        all.retain(|c| ids.contains(&c.id));
        if all.is_empty() {
            return Err("cases: selection matches no case".into());
        }
    }
    let rep = run_cases(&all);
    if as_json {
        writeln!(
            io.out,
            "{}",
            serde_json::to_string_pretty(&corpus_json(&rep)).unwrap()
        )
        .map_err(|e| e.to_string())?;
    } else {
        writeln!(io.out, "{}", rep).map_err(|e| e.to_string())?;
    }
    Ok(rep.failed().min(125) as i32)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{}", text)
            } else {
                write!(out, "{}", text)
            };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    let result = match &cli.command {
        Command::Classify {
            input,
            params,
            json,
        } => cmd_classify(&mut io, input.as_deref(), params, *json),
        Command::Generate {
            root,
            class,
            params,
            json,
        } => cmd_generate(&mut io, root, class, params, *json),
        Command::Criteria { root, params, json } => cmd_criteria(&mut io, root, params, *json),
        c @ Command::Curvature { .. } => cmd_curvature(&mut io, c),
        Command::Corpus { cases, json } => cmd_corpus(&mut io, cases.as_deref(), *json),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(io.err, "error: {}", msg);
            EXIT_INPUT
        }
    }
}
