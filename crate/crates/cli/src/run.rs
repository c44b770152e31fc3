//! Batch subcommands over instance files.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use ideal_rpm::generation::{generate_answer, similarity, GeneratedAnswer, SimilarityReport};
use ideal_rpm::invariance::{plain_accuracy, select_answer, weighted_accuracy, BinOp, ExtractionConfig, Module, SelectionReport};
use ideal_rpm::io::json::{load_json, load_json_with, resolve_schema, save_document, save_json};
use ideal_rpm::io::raven::{load_raven_xml, RavenMapping};
use ideal_rpm::io::synthetic::{family_instance, Layout, RuleFamily};
use ideal_rpm::{RpmInstance, Schema};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{svg, GlobalOpts, Inputs};

/// Settings echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: Option<String>,
    pub seed: u64,
    pub deltas: Vec<i64>,
    pub ops: Vec<String>,
    pub modules: Vec<Module>,
    #[serde(skip)]
    pub jobs: usize,
}

impl RunConfig {
    fn from_opts(g: &GlobalOpts) -> Result<Self> {
        if g.deltas.contains(&0) {
            bail!("--deltas must be nonzero");
        }
        if g.ops.is_empty() {
            bail!("--ops needs at least one operator");
        }
        if let Some(s) = &g.schema {
            resolve_schema(s)?;
        }
        let modules: BTreeSet<Module> = g.modules.iter().copied().collect();
        Ok(RunConfig {
            schema: g.schema.clone(),
            seed: g.seed,
            deltas: g.deltas.clone(),
            ops: g.ops.iter().map(|o| o.symbol().to_string()).collect(),
            modules: modules.into_iter().collect(),
            jobs: g.jobs,
        })
    }

    pub fn extraction(&self) -> ExtractionConfig {
        let mut c = ExtractionConfig::default().only(&self.modules);
        c.deltas = self.deltas.clone();
        c.binary_ops = self.ops.iter().map(|o| o.parse::<BinOp>().expect("validated")).collect();
        c
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FileError {
    pub path: String,
    pub message: String,
}

struct Loaded {
    path: String,
    instance: RpmInstance,
    schema: Schema,
}

/// Files named directly, found in directories, or matched by glob patterns; sorted.
fn expand(inputs: &Inputs) -> Result<Vec<PathBuf>> {
    let mut out = BTreeSet::new();
    for raw in &inputs.paths {
        let p = Path::new(raw);
        if p.is_dir() {
            for entry in std::fs::read_dir(p).with_context(|| format!("reading {raw}"))? {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json" || e == "xml") {
                    out.insert(path);
                }
            }
        } else if p.is_file() {
            out.insert(p.to_path_buf());
        } else {
            let matches = glob::glob(raw).with_context(|| format!("bad pattern {raw}"))?;
            out.extend(matches.filter_map(Result::ok).filter(|m| m.is_file()));
        }
    }
    if out.is_empty() {
        bail!("no instance files match {:?}", inputs.paths);
    }
    Ok(out.into_iter().collect())
}

fn load_one(path: &Path, schema: Option<&Schema>) -> Result<Loaded, FileError> {
    let fail = |message: String| FileError { path: path.display().to_string(), message };
    let is_xml = path.extension().is_some_and(|e| e == "xml");
    let (instance, schema) = if is_xml {
        let schema = schema.cloned().unwrap_or_else(Schema::iraven_full);
        (load_raven_xml(path, &schema, &RavenMapping::default()).map_err(|e| fail(e.to_string()))?, schema)
    } else if let Some(s) = schema {
        (load_json_with(path, s).map_err(|e| fail(e.to_string()))?, s.clone())
    } else {
        let inst = load_json(path).map_err(|e| fail(e.to_string()))?;
        let s = Schema::preset(&inst.schema_name).map_err(|e| fail(e.to_string()))?;
        (inst, s)
    };
    Ok(Loaded { path: path.display().to_string(), instance, schema })
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

/// Loads every input in parallel; results come back ordered by instance id.
fn load_all(g: &GlobalOpts, inputs: &Inputs) -> Result<(Vec<Loaded>, Vec<FileError>)> {
    let files = expand(inputs)?;
    let schema = g.schema.as_deref().map(resolve_schema).transpose()?;
    let results: Vec<Result<Loaded, FileError>> =
        pool(g.jobs)?.install(|| files.par_iter().map(|p| load_one(p, schema.as_ref())).collect());
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(l) => ok.push(l),
            Err(e) => errors.push(e),
        }
    }
    ok.sort_by(|a, b| (&a.instance.id, &a.path).cmp(&(&b.instance.id, &b.path)));
    for e in &errors {
        eprintln!("{}: {}", e.path, e.message);
    }
    Ok((ok, errors))
}

fn emit<T: Serialize>(g: &GlobalOpts, report: &T) -> Result<()> {
    match &g.out {
        Some(path) => save_document(report, path)?,
        None => {
            let text = serde_json::to_string_pretty(report)?;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn ratio(r: Option<Rational64>) -> Option<f64> {
    r.map(|r| *r.numer() as f64 / *r.denom() as f64)
}

fn throughput(what: &str, n: usize, start: Instant) {
    let secs = start.elapsed().as_secs_f64();
    eprintln!("{what}: {n} instances in {secs:.2}s ({:.1}/s)", n as f64 / secs.max(1e-9));
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveEntry {
    pub id: String,
    pub path: String,
    pub ground_truth: Option<usize>,
    pub report: Option<SelectionReport>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Accuracy {
    pub scored: usize,
    pub plain: Option<f64>,
    pub weighted: Option<f64>,
    /// Exact weighted accuracy as `numerator/denominator`.
    pub weighted_exact: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub config: RunConfig,
    pub instances: Vec<SolveEntry>,
    pub accuracy: Accuracy,
    pub errors: Vec<FileError>,
}

fn solve_batch(loaded: &[Loaded], config: &ExtractionConfig, jobs: usize) -> Result<(Vec<SolveEntry>, Accuracy)> {
    let entries: Vec<SolveEntry> = pool(jobs)?.install(|| {
        loaded
            .par_iter()
            .map(|l| {
                let r = select_answer(&l.instance, &l.schema, config);
                SolveEntry {
                    id: l.instance.id.clone(),
                    path: l.path.clone(),
                    ground_truth: l.instance.ground_truth,
                    error: r.as_ref().err().map(|e| e.to_string()),
                    report: r.ok(),
                }
            })
            .collect()
    });
    let scored: Vec<(&SelectionReport, usize)> =
        entries.iter().filter_map(|e| Some((e.report.as_ref()?, e.ground_truth?))).collect();
    let weighted = weighted_accuracy(scored.iter().copied());
    let accuracy = Accuracy {
        scored: scored.len(),
        plain: ratio(plain_accuracy(scored.iter().copied())),
        weighted: ratio(weighted),
        weighted_exact: weighted.map(|w| format!("{}/{}", w.numer(), w.denom())),
    };
    Ok((entries, accuracy))
}

pub fn solve(g: &GlobalOpts, inputs: &Inputs) -> Result<bool> {
    let config = RunConfig::from_opts(g)?;
    let start = Instant::now();
    let (loaded, errors) = load_all(g, inputs)?;
    let (instances, accuracy) = solve_batch(&loaded, &config.extraction(), g.jobs)?;
    throughput("solve", loaded.len(), start);
    if let Some(w) = accuracy.weighted {
        eprintln!("weighted accuracy {w:.4} over {}", accuracy.scored);
    }
    let clean = errors.is_empty() && instances.iter().all(|e| e.error.is_none());
    emit(g, &SolveReport { config, instances, accuracy, errors })?;
    Ok(clean)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GenerateEntry {
    pub id: String,
    pub path: String,
    /// The generated panel in ideal notation.
    pub concept: Option<String>,
    pub answer: Option<GeneratedAnswer>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GenerateReport {
    pub config: RunConfig,
    pub instances: Vec<GenerateEntry>,
    pub errors: Vec<FileError>,
}

fn generate_batch(loaded: &[Loaded], run: &RunConfig) -> Result<Vec<GenerateEntry>> {
    let config = run.extraction();
    Ok(pool(run.jobs)?.install(|| {
        loaded
            .par_iter()
            .map(|l| {
                let r = generate_answer(&l.instance.question_matrix(), &l.schema, &config, run.seed);
                GenerateEntry {
                    id: l.instance.id.clone(),
                    path: l.path.clone(),
                    concept: r.as_ref().ok().map(|a| l.schema.show(&a.concept)),
                    error: r.as_ref().err().map(|e| format!("generation failed: {e}")),
                    answer: r.ok(),
                }
            })
            .collect()
    }))
}

fn file_stem(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

pub fn generate(g: &GlobalOpts, inputs: &Inputs, svg_dir: Option<&Path>) -> Result<bool> {
    let run = RunConfig::from_opts(g)?;
    let start = Instant::now();
    let (loaded, errors) = load_all(g, inputs)?;
    let instances = generate_batch(&loaded, &run)?;
    throughput("generate", loaded.len(), start);
    if let Some(dir) = svg_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (l, e) in loaded.iter().zip(&instances) {
            let Some(a) = &e.answer else { continue };
            let path = dir.join(format!("{}.svg", file_stem(&e.id)));
            std::fs::write(&path, svg::render(&a.concept, &l.schema))
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    let clean = errors.is_empty();
    emit(g, &GenerateReport { config: run, instances, errors })?;
    Ok(clean)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvaluateEntry {
    pub id: String,
    pub path: String,
    pub phi: Option<f64>,
    pub similarity: Option<SimilarityReport>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvaluateReport {
    pub config: RunConfig,
    pub instances: Vec<EvaluateEntry>,
    pub evaluated: usize,
    pub mean_phi: Option<f64>,
    pub errors: Vec<FileError>,
}

pub fn evaluate_gen(g: &GlobalOpts, inputs: &Inputs) -> Result<bool> {
    let run = RunConfig::from_opts(g)?;
    let start = Instant::now();
    let (loaded, errors) = load_all(g, inputs)?;
    let generated = generate_batch(&loaded, &run)?;
    let mut instances = Vec::with_capacity(loaded.len());
    let mut total = Rational64::from_integer(0);
    let mut evaluated = 0usize;
    for (l, e) in loaded.iter().zip(generated) {
        let mut entry = EvaluateEntry { id: e.id, path: e.path, phi: None, similarity: None, error: e.error };
        match (e.answer, l.instance.ground_truth) {
            (Some(a), Some(gt)) => match similarity(&a.concept, &l.instance.answers[gt], &l.schema) {
                Ok(s) => {
                    total += s.phi;
                    evaluated += 1;
                    entry.phi = ratio(Some(s.phi));
                    entry.similarity = Some(s);
                }
                Err(err) => entry.error = Some(err.to_string()),
            },
            (Some(_), None) => entry.error = Some("no ground truth".into()),
            (None, _) => {}
        }
        instances.push(entry);
    }
    throughput("evaluate-gen", loaded.len(), start);
    let mean_phi = ratio((evaluated > 0).then(|| total / Rational64::from_integer(evaluated as i64)));
    if let Some(m) = mean_phi {
        eprintln!("mean similarity {m:.4} over {evaluated}");
    }
    let clean = errors.is_empty();
    emit(g, &EvaluateReport { config: run, instances, evaluated, mean_phi, errors })?;
    Ok(clean)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AblationRow {
    /// `none`, a module name, or `all`.
    pub disabled: String,
    pub accuracy: Accuracy,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AblationReport {
    pub config: RunConfig,
    pub rows: Vec<AblationRow>,
    pub errors: Vec<FileError>,
}

pub fn ablate(g: &GlobalOpts, inputs: &Inputs) -> Result<bool> {
    let run = RunConfig::from_opts(g)?;
    let start = Instant::now();
    let (loaded, errors) = load_all(g, inputs)?;
    let base = run.extraction();
    let mut variants: Vec<(String, ExtractionConfig)> = vec![("none".into(), base.clone())];
    for m in &run.modules {
        variants.push((m.to_string(), base.clone().without(*m)));
    }
    variants.push(("all".into(), base.clone().only(&[])));
    let mut rows = Vec::with_capacity(variants.len());
    for (name, config) in variants {
        let (_, accuracy) = solve_batch(&loaded, &config, run.jobs)?;
        rows.push(AblationRow { disabled: name, accuracy });
    }
    throughput("ablate", loaded.len() * rows.len(), start);
    eprintln!("{:<10} {:>10} {:>10}", "disabled", "weighted", "plain");
    for r in &rows {
        let f = |x: Option<f64>| x.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
        eprintln!("{:<10} {:>10} {:>10}", r.disabled, f(r.accuracy.weighted), f(r.accuracy.plain));
    }
    let clean = errors.is_empty();
    emit(g, &AblationReport { config: run, rows, errors })?;
    Ok(clean)
}

pub fn make_synthetic(g: &GlobalOpts, family: RuleFamily, layout: Option<Layout>, count: u64, dir: &Path) -> Result<()> {
    let schema = match &g.schema {
        Some(s) => resolve_schema(s)?,
        None => Schema::iraven_full(),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let seeds: Vec<u64> = (0..count).map(|k| g.seed + k).collect();
    let written: Result<Vec<()>> = pool(g.jobs)?.install(|| {
        seeds
            .par_iter()
            .map(|&seed| {
                let l = layout.unwrap_or(Layout::ALL[(seed % 3) as usize]);
                let si = family_instance(family, l, &schema, seed)?;
                save_json(&si.instance, &schema, &dir.join(format!("{}.json", si.instance.id)))?;
                Ok(())
            })
            .collect()
    });
    written?;
    eprintln!("wrote {count} {family} instances to {}", dir.display());
    Ok(())
}
