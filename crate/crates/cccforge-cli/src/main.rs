//! `cccforge`: verify, develop, search and tabulate [2,1,1] codes.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 malformed input,
//! 3 budget exhausted or data-gated.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cccforge::bounds;
use cccforge::constructions::{run_pipeline, write_artifacts, Context, Pipeline};
use cccforge::core::format::{load_code, save_code, save_gdc, CodeFile};
use cccforge::core::{verify_code, verify_gdc};
use cccforge::designs::{
    backtrack_design, load_design, save_design, td_prime_power, verify_design, DesignSpec, SearchOutcome,
};
use cccforge::devgen::{audit_catalog, audit_entry, closed_form_size, Developed, Recipe};
use cccforge::rooms::{run_room_pipeline, starter_code};
use cccforge::search::max_code_exact;
use cccforge::table::{table, Known};
use cccforge::Error;

const OK: u8 = 0;
const FAILED: u8 = 1;
const MALFORMED: u8 = 2;
const GATED: u8 = 3;

#[derive(Parser)]
#[command(name = "cccforge", version, about = "Constant-composition [2,1,1] code toolkit")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify a code or GDC file (composition, distance, groups).
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Expand a development recipe, verify it and check its stated size.
    Develop {
        #[arg(long)]
        recipe: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a starter recipe through strong check, Room array and code.
    Starter {
        #[arg(long)]
        recipe: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper bounds and best known value for A_4(n, d, [2,1,1]).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
    },
    /// Exact maximum code size by clique search.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// Seconds.
        #[arg(long, default_value_t = 60)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a construction pipeline.
    Build {
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Transversal design TD(k, q) from GF(q).
    Td {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify or search block designs.
    Design {
        #[command(subcommand)]
        cmd: DesignCmd,
    },
    /// Audit the recipe catalog.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Per-length summary table.
    Table {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 4)]
        from: u32,
        /// Inclusive.
        #[arg(long, default_value_t = 30)]
        to: u32,
    },
}

#[derive(Subcommand)]
enum DesignCmd {
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Backtracking search for a k-GDD (`--type 3^5`) or a PBD (`--v`).
    Search {
        #[arg(long)]
        k: u32,
        #[arg(long = "type")]
        group_type: Option<String>,
        #[arg(long)]
        v: Option<u32>,
        /// Node budget.
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Audit every entry, or one by name.
    Verify {
        #[arg(long)]
        name: Option<String>,
    },
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, text: &str, value: Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json value"));
        } else {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Construction(_) => FAILED,
        Error::DataGated(_) => GATED,
        _ => MALFORMED,
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable report")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { json: cli.json };
    let code = match run(cli.cmd, &out) {
        Ok(c) => c,
        Err(e) => {
            let c = error_code(&e);
            if out.json {
                println!("{}", json!({"error": e.to_string(), "exit": c}));
            } else {
                eprintln!("error: {e}");
            }
            c
        }
    };
    ExitCode::from(code)
}

fn run(cmd: Cmd, out: &Out) -> cccforge::Result<u8> {
    match cmd {
        Cmd::Verify { input } => verify(&input, out),
        Cmd::Develop { recipe, out: dest } => develop(&recipe, dest.as_deref(), out),
        Cmd::Starter { recipe, out: dest } => starter(&recipe, dest.as_deref(), out),
        Cmd::Bounds { n, d } => {
            let summary = bounds::summary_value(n, d)?;
            let upper = bounds::u_bound(n, d).ok();
            let chain = bounds::johnson_chain(n, d, &[2, 1, 1]).ok();
            let text = format!(
                "n = {n}, d = {d}\nbest known: {}  [{}]\nclosed-form bound: {}\nJohnson chain: {}\n",
                summary.value,
                summary.rule,
                upper.map_or("-".into(), |u| u.to_string()),
                chain.map_or("-".into(), |u| u.to_string()),
            );
            out.emit(&text, json!({"n": n, "d": d, "summary": summary, "u": upper, "johnson_chain": chain}));
            Ok(OK)
        }
        Cmd::Search { n, d, budget, out: dest } => {
            let r = max_code_exact(n, d, Duration::from_secs(budget))?;
            if let Some(p) = dest {
                save_code(&p, &r.witness)?;
            }
            let text = format!(
                "A_4({n},{d},[2,1,1]) {} {}  ({} nodes)\n",
                if r.proven { "=" } else { ">=" },
                r.size,
                r.nodes
            );
            out.emit(&text, to_value(&r));
            Ok(if r.proven { OK } else { GATED })
        }
        Cmd::Build { pipeline, out_dir } => build(&pipeline, out_dir.as_deref(), out),
        Cmd::Td { k, q, out: dest } => {
            let td = td_prime_power(k, q)?;
            let rep = verify_design(&td);
            if let Some(p) = dest {
                save_design(&p, &td)?;
            }
            let text = format!(
                "TD({k},{q}): {} blocks, {}\n",
                td.blocks.len(),
                if rep.passed { "verified".to_string() } else { rep.violations.join("; ") }
            );
            out.emit(&text, json!({"k": k, "q": q, "blocks": td.blocks.len(), "report": rep}));
            Ok(if rep.passed { OK } else { FAILED })
        }
        Cmd::Design { cmd } => design(cmd, out),
        Cmd::Catalog { cmd: CatalogCmd::Verify { name } } => catalog(name, out),
        Cmd::Table { d, from, to } => {
            let report = audit_catalog(&cccforge::catalog_dir())?;
            let mut known: Vec<Known> = [(4, 1), (5, if d == 5 { 2 } else { 1 }), (6, if d == 5 { 6 } else { 3 }), (7, if d == 5 { 10 } else { 4 })]
                .into_iter()
                .map(|(n, size)| Known { n, d, size, source: "exact search".into() })
                .collect();
            known.extend(pipeline_results(d, from..=to)?);
            let t = table(d, from..=to, &report, &known)?;
            out.emit(&format!("d = {d}\n{}", t.render()), to_value(&t));
            Ok(OK)
        }
    }
}

/// Final codes of the bundled pipelines whose declared length falls in `ns`.
fn pipeline_results(d: u32, ns: std::ops::RangeInclusive<u32>) -> cccforge::Result<Vec<Known>> {
    let dir = cccforge::data_dir().join("pipelines");
    let mut found = Vec::new();
    for path in cccforge::devgen::catalog_files(&dir).unwrap_or_default() {
        let p = Pipeline::load(&path)?;
        let target = p.steps.last().and_then(|s| s.expect.as_ref()).and_then(|e| e.n);
        if !target.is_some_and(|n| ns.contains(&n)) {
            continue;
        }
        let (report, _) = run_pipeline(&p, &Context::new(dir.clone(), cccforge::catalog_dir()));
        if let Some(last) = report.last().filter(|_| report.passed()) {
            if last.kind == Some("code") && last.d == Some(d) {
                found.push(Known {
                    n: last.n.unwrap_or(0),
                    d,
                    size: last.size.unwrap_or(0) as u64,
                    source: format!("pipeline {}", p.name),
                });
            }
        }
    }
    Ok(found)
}

fn verify(input: &Path, out: &Out) -> cccforge::Result<u8> {
    let file = load_code(input)?;
    let (rep, code) = match &file {
        CodeFile::Code(c) => (verify_code(c), c),
        CodeFile::Gdc(g) => (verify_gdc(g), &g.code),
    };
    let mut text = format!(
        "n = {}, d = {}, {} words, min distance {}\n",
        rep.n,
        rep.declared_distance,
        rep.size,
        rep.min_distance.map_or("-".into(), |m| m.to_string())
    );
    match rep.first_violation(code) {
        None => text.push_str("PASS\n"),
        Some(v) => text.push_str(&format!("FAIL: {v}\n")),
    }
    out.emit(&text, to_value(&rep));
    Ok(if rep.passed { OK } else { FAILED })
}

fn develop(path: &Path, dest: Option<&Path>, out: &Out) -> cccforge::Result<u8> {
    // parse first so malformed recipes exit 2 before the audit runs
    let recipe = Recipe::load(path)?;
    let rep = audit_entry(path);
    if rep.passed {
        if let Some(p) = dest {
            match recipe.kind {
                cccforge::devgen::RecipeKind::Starter | cccforge::devgen::RecipeKind::FrameStarter => {
                    save_code(p, &starter_code(&recipe)?.0)?
                }
                _ => match recipe.expand()? {
                    Developed::Code(c) => save_code(p, &c)?,
                    Developed::Gdc(g) => save_gdc(p, &g)?,
                },
            }
        }
    }
    let text = format!(
        "{}: n = {}, d = {}, size {} (stated {}, closed form {})\n{}: {}\n",
        rep.name,
        rep.n,
        rep.d,
        rep.size.map_or("-".into(), |s| s.to_string()),
        rep.expected_size,
        closed_form_size(&recipe).map_or("-".into(), |s| s.to_string()),
        if rep.passed { "PASS" } else { "FAIL" },
        rep.detail
    );
    out.emit(&text, to_value(&rep));
    Ok(if rep.passed { OK } else { FAILED })
}

fn starter(path: &Path, dest: Option<&Path>, out: &Out) -> cccforge::Result<u8> {
    let recipe = Recipe::load(path)?;
    let rep = run_room_pipeline(&recipe);
    if rep.passed {
        if let Some(p) = dest {
            save_code(p, &starter_code(&recipe)?.0)?;
        }
    }
    let mark = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!(
        "n = {}\nstarter: {}\nstrong: {}\nRoom array verified: {}\nsuper-simple: {}\ncode: {}\n",
        rep.n,
        mark(rep.starter),
        mark(rep.strong),
        mark(rep.room_verified),
        mark(rep.super_simple),
        rep.code_size.map_or("-".into(), |s| format!("{s} words, verified {}", mark(rep.code_verified))),
    );
    text.push_str(&match &rep.failure {
        None => "PASS\n".to_string(),
        Some(f) => format!("FAIL at {f}\n"),
    });
    out.emit(&text, to_value(&rep));
    Ok(if rep.passed { OK } else { FAILED })
}

fn build(path: &Path, out_dir: Option<&Path>, out: &Out) -> cccforge::Result<u8> {
    let p = Pipeline::load(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let (report, artifacts) = run_pipeline(&p, &Context::new(base, cccforge::catalog_dir()));
    if let Some(dir) = out_dir {
        write_artifacts(dir, &report, &artifacts)?;
    }
    out.emit(&report.table(), to_value(&report));
    Ok(if report.passed() {
        OK
    } else if report.data_gated() {
        GATED
    } else {
        FAILED
    })
}

fn parse_type(s: &str) -> cccforge::Result<Vec<(u32, u32)>> {
    s.split_whitespace()
        .map(|part| {
            let (g, c) = part.split_once('^').unwrap_or((part, "1"));
            match (g.parse(), c.parse()) {
                (Ok(g), Ok(c)) => Ok((g, c)),
                _ => Err(Error::Invalid(format!("bad group type {s:?}"))),
            }
        })
        .collect()
}

fn design(cmd: DesignCmd, out: &Out) -> cccforge::Result<u8> {
    match cmd {
        DesignCmd::Verify { input } => {
            let d = load_design(&input)?;
            let rep = verify_design(&d);
            let mut text = format!("{:?} on {} points, {} blocks\n", d.kind, d.v, d.blocks.len());
            if !d.groups.is_empty() {
                text.push_str(&format!("type {}\n", d.type_string()));
            }
            text.push_str(&if rep.passed { "PASS\n".to_string() } else { format!("FAIL: {}\n", rep.violations.join("; ")) });
            out.emit(&text, to_value(&rep));
            Ok(if rep.passed { OK } else { FAILED })
        }
        DesignCmd::Search { k, group_type, v, budget, out: dest } => {
            let spec = match (group_type, v) {
                (Some(t), _) => DesignSpec::Gdd { k, group_type: parse_type(&t)? },
                (None, Some(v)) => DesignSpec::Pbd { v, k },
                (None, None) => return Err(Error::Invalid("give --type or --v".into())),
            };
            let (text, value, code) = match backtrack_design(&spec, budget)? {
                SearchOutcome::Found(d) => {
                    if let Some(p) = dest {
                        save_design(&p, &d)?;
                    }
                    (format!("found: {} blocks\n", d.blocks.len()), json!({"outcome": "found", "blocks": d.blocks}), OK)
                }
                SearchOutcome::Exhausted => ("no such design (search exhausted)\n".into(), json!({"outcome": "exhausted"}), FAILED),
                SearchOutcome::BudgetExceeded => ("budget exhausted\n".into(), json!({"outcome": "budget_exceeded"}), GATED),
            };
            out.emit(&text, value);
            Ok(code)
        }
    }
}

fn catalog(name: Option<String>, out: &Out) -> cccforge::Result<u8> {
    let dir = cccforge::catalog_dir();
    if !dir.is_dir() {
        return Err(Error::DataGated(format!("catalog directory {} not found", dir.display())));
    }
    let entries = match name {
        Some(n) => {
            let path = dir.join(format!("{n}.json"));
            if !path.exists() {
                return Err(Error::DataGated(format!("no catalog entry {n} in {}", dir.display())));
            }
            vec![audit_entry(&path)]
        }
        None => audit_catalog(&dir)?.entries,
    };
    let mut text = String::new();
    for e in &entries {
        text.push_str(&format!(
            "{:<4} {:<28} n={:<4} d={} size={:<6} {}\n",
            if e.passed { "PASS" } else { "FAIL" },
            e.name,
            e.n,
            e.d,
            e.size.map_or("-".into(), |s| s.to_string()),
            e.detail
        ));
    }
    let failed = entries.iter().filter(|e| !e.passed).count();
    text.push_str(&format!("{} entries, {} failed\n", entries.len(), failed));
    out.emit(&text, to_value(&entries));
    Ok(if failed == 0 { OK } else { FAILED })
}
