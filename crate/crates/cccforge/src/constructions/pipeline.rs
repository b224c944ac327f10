//! Declarative pipelines: an ordered list of named steps, each re-verified.
//!
//! ```json
//! {"name": "60-optimal", "steps": [
//!   {"id": "base", "op": "catalog_load", "entry": "d5_gdc_4^5"},
//!   {"id": "td", "op": "td", "k": 4, "q": 3},
//!   {"id": "big", "op": "inflate", "input": "base", "td": "td", "expect": {"size": 1440}}
//! ]}
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::ops::{adjoin_points, fill_groups, fundamental, inflate, shorten};
use crate::bounds;
use crate::core::format::{gdc_to_json, load_code, code_to_json, CodeFile};
use crate::core::{verify_code, verify_gdc, Code, Gdc};
use crate::designs::{
    backtrack_design, complete_parallel_classes, delete_point, design_to_json, load_design, td_prime_power,
    td_product, verify_design, BlockDesign, DesignSpec, SearchOutcome,
};
use crate::devgen::{load_entry, Recipe, RecipeKind};
use crate::error::{invalid, read_file, write_file, Error, Result};

#[derive(Clone, Debug, Deserialize)]
pub struct Step {
    pub id: String,
    pub op: String,
    #[serde(default)]
    pub expect: Option<Expect>,
    #[serde(flatten)]
    pub params: Map<String, Value>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct Expect {
    pub size: Option<usize>,
    #[serde(rename = "type")]
    pub group_type: Option<String>,
    pub n: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Pipeline {
    pub name: String,
    #[serde(default)]
    pub steps: Vec<Step>,
}

impl Pipeline {
    pub fn parse(text: &str) -> Result<Pipeline> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Pipeline> {
        Pipeline::parse(&read_file(path)?)
    }
}

#[derive(Clone, Debug)]
pub enum Artifact {
    Code(Code),
    Gdc(Gdc),
    Design(BlockDesign),
}

impl Artifact {
    fn kind(&self) -> &'static str {
        match self {
            Artifact::Code(_) => "code",
            Artifact::Gdc(_) => "gdc",
            Artifact::Design(_) => "design",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Ok,
    Failed,
    DataGated,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub id: String,
    pub op: String,
    pub status: StepStatus,
    pub kind: Option<&'static str>,
    pub n: Option<u32>,
    pub d: Option<u32>,
    pub size: Option<usize>,
    #[serde(rename = "type")]
    pub group_type: Option<String>,
    /// Closed-form bound for plain codes at d = 5 or 6.
    pub bound: Option<u64>,
    pub optimal: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub name: String,
    pub steps: Vec<StepReport>,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.status == StepStatus::Ok)
    }

    pub fn data_gated(&self) -> bool {
        self.steps.iter().any(|s| s.status == StepStatus::DataGated)
    }

    pub fn last(&self) -> Option<&StepReport> {
        self.steps.last()
    }

    /// Plain-text table: one row per step.
    pub fn table(&self) -> String {
        let mut s = format!("pipeline {}\n", self.name);
        s.push_str(&format!(
            "{:<12} {:<16} {:<10} {:>5} {:>3} {:>7} {:<14} {:>7} {:<8}\n",
            "step", "op", "status", "n", "d", "size", "type", "bound", "optimal"
        ));
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        for st in &self.steps {
            s.push_str(&format!(
                "{:<12} {:<16} {:<10} {:>5} {:>3} {:>7} {:<14} {:>7} {:<8}\n",
                st.id,
                st.op,
                format!("{:?}", st.status).to_lowercase(),
                opt(st.n.map(|x| x as usize)),
                opt(st.d.map(|x| x as usize)),
                opt(st.size),
                st.group_type.clone().unwrap_or_else(|| "-".into()),
                opt(st.bound.map(|x| x as usize)),
                st.optimal.map_or("-".to_string(), |o| if o { "yes".into() } else { "no".into() }),
            ));
            if st.status != StepStatus::Ok && !st.detail.is_empty() {
                s.push_str(&format!("  -> {}\n", st.detail));
            }
        }
        s
    }
}

/// Where relative paths and catalog entries are looked up.
#[derive(Clone, Debug)]
pub struct Context {
    pub base_dir: PathBuf,
    pub catalog_dir: PathBuf,
}

impl Context {
    pub fn new(base_dir: PathBuf, catalog_dir: PathBuf) -> Context {
        Context { base_dir, catalog_dir }
    }

    fn resolve(&self, p: &str) -> Result<PathBuf> {
        let cands = [self.base_dir.join(p), crate::data_dir().join(p)];
        cands
            .iter()
            .find(|c| c.exists())
            .cloned()
            .ok_or_else(|| Error::DataGated(format!("file {p} not found")))
    }
}

struct Run<'a> {
    ctx: &'a Context,
    artifacts: BTreeMap<String, Artifact>,
}

fn str_param<'p>(p: &'p Map<String, Value>, key: &str) -> Result<&'p str> {
    p.get(key).and_then(Value::as_str).ok_or_else(|| invalid(format!("missing string parameter {key:?}")))
}

fn u64_param(p: &Map<String, Value>, key: &str) -> Result<u64> {
    p.get(key).and_then(Value::as_u64).ok_or_else(|| invalid(format!("missing integer parameter {key:?}")))
}

fn list_param<'p>(p: &'p Map<String, Value>, key: &str) -> Result<Vec<&'p str>> {
    p.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| invalid(format!("missing list parameter {key:?}")))?
        .iter()
        .map(|v| v.as_str().ok_or_else(|| invalid(format!("{key:?} must list step ids"))))
        .collect()
}

fn from_recipe(r: &Recipe) -> Result<Artifact> {
    Ok(match r.kind {
        RecipeKind::Starter | RecipeKind::FrameStarter => Artifact::Code(crate::rooms::starter_code(r)?.0),
        _ => match r.expand()? {
            crate::devgen::Developed::Code(c) => Artifact::Code(c),
            crate::devgen::Developed::Gdc(g) => Artifact::Gdc(g),
        },
    })
}

impl Run<'_> {
    fn get(&self, id: &str) -> Result<&Artifact> {
        self.artifacts.get(id).ok_or_else(|| invalid(format!("unknown step {id:?}")))
    }

    fn code(&self, id: &str) -> Result<Code> {
        match self.get(id)? {
            Artifact::Code(c) => Ok(c.clone()),
            Artifact::Gdc(g) => Ok(g.code.clone()),
            Artifact::Design(_) => Err(invalid(format!("step {id:?} is a design, not a code"))),
        }
    }

    /// A plain code is accepted as a GDC of type 1^n.
    fn gdc(&self, id: &str) -> Result<Gdc> {
        match self.get(id)? {
            Artifact::Code(c) => Ok(Gdc::trivial(c.clone())),
            Artifact::Gdc(g) => Ok(g.clone()),
            Artifact::Design(_) => Err(invalid(format!("step {id:?} is a design, not a GDC"))),
        }
    }

    fn design(&self, id: &str) -> Result<BlockDesign> {
        match self.get(id)? {
            Artifact::Design(d) => Ok(d.clone()),
            _ => Err(invalid(format!("step {id:?} is not a design"))),
        }
    }

    fn exec(&self, step: &Step) -> Result<Artifact> {
        let p = &step.params;
        match step.op.as_str() {
            "catalog_load" => from_recipe(&load_entry(&self.ctx.catalog_dir, str_param(p, "entry")?).map_err(gate)?),
            "develop" | "starter" => from_recipe(&Recipe::load(&self.ctx.resolve(str_param(p, "recipe")?)?)?),
            "load_code" => Ok(match load_code(&self.ctx.resolve(str_param(p, "path")?)?)? {
                CodeFile::Code(c) => Artifact::Code(c),
                CodeFile::Gdc(g) => Artifact::Gdc(g),
            }),
            "load_design" => Ok(Artifact::Design(load_design(&self.ctx.resolve(str_param(p, "path")?)?)?)),
            "td" => Ok(Artifact::Design(td_prime_power(u64_param(p, "k")? as u32, u64_param(p, "q")? as u32)?)),
            "td_product" => Ok(Artifact::Design(td_product(
                &self.design(str_param(p, "a")?)?,
                &self.design(str_param(p, "b")?)?,
            )?)),
            "delete_point" => Ok(Artifact::Design(delete_point(
                &self.design(str_param(p, "input")?)?,
                u64_param(p, "point")? as u32,
            )?)),
            "complete_parallel_classes" => Ok(Artifact::Design(complete_parallel_classes(
                &self.design(str_param(p, "input")?)?,
                u64_param(p, "u")? as u32,
            )?)),
            "backtrack_design" => {
                let k = u64_param(p, "k")? as u32;
                let spec = match p.get("type").and_then(Value::as_object) {
                    Some(t) => DesignSpec::Gdd {
                        k,
                        group_type: t
                            .iter()
                            .map(|(g, c)| {
                                Ok((
                                    g.parse().map_err(|_| invalid(format!("group size {g:?}")))?,
                                    c.as_u64().ok_or_else(|| invalid("group count"))? as u32,
                                ))
                            })
                            .collect::<Result<_>>()?,
                    },
                    None => DesignSpec::Pbd { v: u64_param(p, "v")? as u32, k },
                };
                let budget = p.get("budget").and_then(Value::as_u64).unwrap_or(5_000_000);
                match backtrack_design(&spec, budget)? {
                    SearchOutcome::Found(d) => Ok(Artifact::Design(d)),
                    SearchOutcome::Exhausted => Err(Error::Construction("no such design exists".into())),
                    SearchOutcome::BudgetExceeded => Err(Error::DataGated("search budget exhausted".into())),
                }
            }
            "fundamental" => {
                let master = self.design(str_param(p, "master")?)?;
                let weights: Vec<u32> = match p.get("weights").and_then(Value::as_array) {
                    Some(ws) => ws.iter().map(|w| w.as_u64().unwrap_or(0) as u32).collect(),
                    None => vec![u64_param(p, "weight")? as u32; master.v as usize],
                };
                let ingredients = list_param(p, "ingredients")?
                    .into_iter()
                    .map(|id| self.gdc(id))
                    .collect::<Result<Vec<Gdc>>>()?;
                let d = match p.get("d").and_then(Value::as_u64) {
                    Some(d) => d as u32,
                    None => ingredients.first().map(|g| g.code.d).ok_or_else(|| invalid("no ingredients"))?,
                };
                let supplier = |ty: &[u32]| -> Option<Gdc> {
                    let mut want: Vec<u32> = ty.to_vec();
                    want.sort_unstable();
                    ingredients
                        .iter()
                        .find(|g| {
                            let mut have: Vec<u32> = g.groups().iter().map(|x| x.len() as u32).collect();
                            have.sort_unstable();
                            have == want && g.code.d >= d
                        })
                        .cloned()
                };
                Ok(Artifact::Gdc(fundamental(&master, &weights, d, &supplier)?))
            }
            "inflate" => Ok(Artifact::Gdc(inflate(
                &self.gdc(str_param(p, "input")?)?,
                &self.design(str_param(p, "td")?)?,
            )?)),
            "fill_groups" => {
                let fillers = list_param(p, "fillers")?
                    .into_iter()
                    .map(|id| self.code(id).map(|c| (c.n(), c)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(Artifact::Code(fill_groups(&self.gdc(str_param(p, "input")?)?, &fillers)?))
            }
            "adjoin_points" => {
                let y = u64_param(p, "y")? as u32;
                let edge = list_param(p, "edge")?
                    .into_iter()
                    .map(|id| self.gdc(id).map(|g| (g.code.n() - y, g)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let first_group = p.get("first_group").and_then(Value::as_u64).unwrap_or(0) as usize;
                Ok(Artifact::Code(adjoin_points(
                    &self.gdc(str_param(p, "input")?)?,
                    y,
                    first_group,
                    &self.code(str_param(p, "first")?)?,
                    &edge,
                )?))
            }
            "shorten" => {
                let c = self.code(str_param(p, "input")?)?;
                let x = u64_param(p, "coordinate")? as u32;
                if let Some(want) = p.get("census").and_then(Value::as_u64) {
                    let census = c.coordinate_census();
                    if let Some(bad) = census.iter().position(|&k| k as u64 != want) {
                        return Err(Error::Construction(format!(
                            "coordinate {bad} carries {} nonzeros, expected {want}",
                            census[bad]
                        )));
                    }
                }
                Ok(Artifact::Code(shorten(&c, x)?))
            }
            other => Err(invalid(format!("unknown pipeline op {other:?}"))),
        }
    }
}

fn gate(e: Error) -> Error {
    match e {
        Error::Io { path, .. } => Error::DataGated(format!("catalog entry {path} missing")),
        other => other,
    }
}

fn describe(a: &Artifact, step: &Step) -> StepReport {
    let mut r = StepReport {
        id: step.id.clone(),
        op: step.op.clone(),
        status: StepStatus::Ok,
        kind: Some(a.kind()),
        n: None,
        d: None,
        size: None,
        group_type: None,
        bound: None,
        optimal: None,
        detail: String::new(),
    };
    let problem = match a {
        Artifact::Code(c) => {
            r.n = Some(c.n());
            r.d = Some(c.d);
            r.size = Some(c.len());
            r.bound = bounds::u_bound(c.n() as u64, c.d as u64).ok();
            r.optimal = r.bound.map(|b| b == c.len() as u64);
            let v = verify_code(c);
            (!v.passed).then(|| v.first_violation(c).unwrap_or_default())
        }
        Artifact::Gdc(g) => {
            r.n = Some(g.code.n());
            r.d = Some(g.code.d);
            r.size = Some(g.code.len());
            r.group_type = Some(g.type_string());
            let v = verify_gdc(g);
            (!v.passed).then(|| v.first_violation(&g.code).unwrap_or_default())
        }
        Artifact::Design(d) => {
            r.n = Some(d.v);
            r.size = Some(d.blocks.len());
            r.group_type = (!d.groups.is_empty()).then(|| d.type_string());
            let v = verify_design(d);
            (!v.passed).then(|| v.violations.first().cloned().unwrap_or_default())
        }
    };
    if let Some(p) = problem {
        r.status = StepStatus::Failed;
        r.detail = format!("re-verification failed: {p}");
        return r;
    }
    if let Some(e) = &step.expect {
        let mut miss = Vec::new();
        if e.size.is_some() && e.size != r.size {
            miss.push(format!("size {:?} != expected {:?}", r.size, e.size));
        }
        if e.n.is_some() && e.n != r.n {
            miss.push(format!("n {:?} != expected {:?}", r.n, e.n));
        }
        if let Some(t) = &e.group_type {
            if r.group_type.as_deref() != Some(t.as_str()) {
                miss.push(format!("type {:?} != expected {t}", r.group_type));
            }
        }
        if !miss.is_empty() {
            r.status = StepStatus::Failed;
            r.detail = miss.join("; ");
        }
    }
    r
}

fn referenced(step: &Step) -> Vec<String> {
    let mut ids = Vec::new();
    for key in ["input", "td", "master", "first", "a", "b"] {
        if let Some(s) = step.params.get(key).and_then(Value::as_str) {
            ids.push(s.to_string());
        }
    }
    for key in ["ingredients", "fillers", "edge"] {
        if let Some(list) = step.params.get(key).and_then(Value::as_array) {
            ids.extend(list.iter().filter_map(|v| v.as_str().map(String::from)));
        }
    }
    ids
}

/// Execute the steps in order. A step whose inputs did not succeed is
/// skipped; every produced artifact is re-verified before later use.
pub fn run_pipeline(p: &Pipeline, ctx: &Context) -> (PipelineReport, BTreeMap<String, Artifact>) {
    let mut run = Run { ctx, artifacts: BTreeMap::new() };
    let mut steps = Vec::new();
    let mut ok: BTreeMap<String, StepStatus> = BTreeMap::new();
    for step in &p.steps {
        let blocked: Vec<String> = referenced(step)
            .into_iter()
            .filter(|id| ok.get(id) != Some(&StepStatus::Ok))
            .collect();
        let report = if !blocked.is_empty() {
            let gated = blocked.iter().any(|id| matches!(ok.get(id), Some(StepStatus::DataGated)));
            StepReport {
                id: step.id.clone(),
                op: step.op.clone(),
                status: if gated { StepStatus::DataGated } else { StepStatus::Skipped },
                kind: None,
                n: None,
                d: None,
                size: None,
                group_type: None,
                bound: None,
                optimal: None,
                detail: format!("inputs not available: {}", blocked.join(", ")),
            }
        } else {
            match run.exec(step) {
                Ok(a) => {
                    let r = describe(&a, step);
                    if r.status == StepStatus::Ok {
                        run.artifacts.insert(step.id.clone(), a);
                    }
                    r
                }
                Err(e) => StepReport {
                    id: step.id.clone(),
                    op: step.op.clone(),
                    status: if matches!(e, Error::DataGated(_)) { StepStatus::DataGated } else { StepStatus::Failed },
                    kind: None,
                    n: None,
                    d: None,
                    size: None,
                    group_type: None,
                    bound: None,
                    optimal: None,
                    detail: e.to_string(),
                },
            }
        };
        ok.insert(step.id.clone(), report.status);
        steps.push(report);
    }
    (PipelineReport { name: p.name.clone(), steps }, run.artifacts)
}

/// Write every artifact in its canonical format plus `summary.txt` and
/// `summary.json`.
pub fn write_artifacts(dir: &Path, report: &PipelineReport, artifacts: &BTreeMap<String, Artifact>) -> Result<()> {
    for (id, a) in artifacts {
        let text = match a {
            Artifact::Code(c) => code_to_json(c),
            Artifact::Gdc(g) => gdc_to_json(g),
            Artifact::Design(d) => design_to_json(d),
        };
        write_file(&dir.join(format!("{id}.json")), &text)?;
    }
    write_file(&dir.join("summary.txt"), &report.table())?;
    write_file(&dir.join("summary.json"), &(serde_json::to_string_pretty(report)? + "\n"))?;
    Ok(())
}
