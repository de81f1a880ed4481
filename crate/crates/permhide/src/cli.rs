//! Command-line front end: `gen`, `verify` and `analyze`.
//!
//! Randomness: every command seeds one `ChaCha8Rng` from `--seed`; a child
//! stream is forked by drawing a `u64` from its parent and seeding a fresh
//! `ChaCha8Rng` with it.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dist::{
    build_irreps, concat_decay_check, convolution_theorem_check, fourier, inverse_fourier, kl, plancherel_check,
    strengthened_pinsker_check, tvd, DistSb,
};
use crate::hiding::{gen_general, vertex_count, GenParams};
use crate::hph::{referee_answer, sample_instance, Answer, MultiHphInstance, Verdict};
use crate::layered::{extract_permutation, LayeredGraph, Provenance};
use crate::matching::{bipartite_of, max_matching, max_matching_of_edges, sigma_cross, sigma_eq};
use crate::perm::{compose, vec, Permutation};
use crate::rs::{validate_rs, RsGraph};
use crate::sorting::{build_sort_network, ceil_log};
use crate::stream::{advantage_estimate, augmenting_baseline, EdgeStream, FullMemory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Graphs above this size are not run through the matching oracle in `verify`.
const VERIFY_MATCHING_CAP: usize = 2_000_000;

#[derive(Parser, Debug)]
#[command(name = "permhide", version, about = "Permutation-hiding graph generator and verifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a graph, Multi-HPH instance or RS graph and write it with a manifest.
    Gen(GenArgs),
    /// Check generated files and print an aggregate JSON report.
    Verify(VerifyArgs),
    /// Run a numeric analysis and print a table.
    Analyze(AnalyzeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Graph,
    Hph,
    Rs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 8)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub b: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// RS graph size as a multiple of r.
    #[arg(long, default_value_t = 2)]
    pub rs_multiplier: usize,
}

impl ParamArgs {
    fn params(&self) -> anyhow::Result<GenParams> {
        let p = GenParams::new(self.m, self.b, self.k, self.p)
            .and_then(|p| p.with_rs_multiplier(self.rs_multiplier))
            .map_err(|e| anyhow!("{e} (choose b >= 2 dividing m, and k, p >= 1 with p <= 3)"))?;
        Ok(p)
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// `id`, `cross`, an image list such as `2,3,1`, or `random:<seed>`.
    pub sigma: String,
    #[arg(long, value_enum, default_value_t = Kind::Graph)]
    pub kind: Kind,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Shuffle the graph stream with this seed instead of the canonical order.
    #[arg(long)]
    pub shuffle: Option<u64>,
    #[arg(long, env = "PERMHIDE_OUT", default_value = "permhide-out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    Decay,
    Fourier,
    Pinsker,
    Advantage,
    Depth,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(value_enum)]
    pub kind: Analysis,
    /// Permutation size for `depth` and `advantage`; `depth` sweeps sizes when omitted.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub b: usize,
    /// Number of distributions convolved by `decay`.
    #[arg(long, default_value_t = 3)]
    pub g: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub kind: Kind,
    pub params: GenParams,
    pub seed: u64,
    pub sigma_spec: String,
    /// One-indexed images.
    pub sigma: Vec<usize>,
    pub shuffle: Option<u64>,
    pub vertex_count: Option<usize>,
    /// Layer sizes, first to last.
    pub layers: Option<Vec<usize>>,
    /// File name to hex SHA-256.
    pub files: BTreeMap<String, String>,
}

pub fn fork(rng: &mut ChaCha8Rng) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(rng.gen())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_sigma(spec: &str, m: usize) -> anyhow::Result<Permutation> {
    let sigma = match spec {
        "id" => sigma_eq(m),
        "cross" => {
            if m % 2 != 0 {
                bail!("cross needs an even m, got {m}");
            }
            sigma_cross(m)
        }
        _ => {
            if let Some(seed) = spec.strip_prefix("random:") {
                let seed: u64 = seed.parse().with_context(|| format!("bad seed in {spec:?}"))?;
                Permutation::random(m, &mut ChaCha8Rng::seed_from_u64(seed))
            } else {
                let images = spec
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().with_context(|| format!("bad image {s:?} in σ")))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                Permutation::from_images(&images).map_err(|e| anyhow!("σ is not a permutation: {e}"))?
            }
        }
    };
    if sigma.len() != m {
        bail!("σ has {} entries but --m is {m}", sigma.len());
    }
    Ok(sigma)
}

fn write(dir: &Path, name: &str, text: &str, files: &mut BTreeMap<String, String>) -> anyhow::Result<()> {
    fs::write(dir.join(name), text).with_context(|| format!("writing {}", dir.join(name).display()))?;
    files.insert(name.to_string(), sha256_hex(text.as_bytes()));
    Ok(())
}

/// Writes the outputs of `gen` and returns the manifest.
pub fn cmd_gen(args: &GenArgs) -> anyhow::Result<RunManifest> {
    let params = args.params.params()?;
    let sigma = parse_sigma(&args.sigma, params.m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.params.seed);
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut files = BTreeMap::new();
    let (mut vc, mut layers) = (None, None);
    match args.kind {
        Kind::Graph => {
            let g = gen_general(&sigma, &params, &mut fork(&mut rng))?;
            write(&args.out, "graph.json", &g.to_json(), &mut files)?;
            write(&args.out, "graph.provenance.json", &g.provenance_json(), &mut files)?;
            let mut stream = EdgeStream::from_layered(&g);
            if let Some(s) = args.shuffle {
                stream = stream.shuffled(s);
            }
            write(&args.out, "graph.phstream", &stream.to_text(), &mut files)?;
            if params.m % 2 == 0 {
                let h = bipartite_of(&g, params.m)?;
                write(&args.out, "matching.phstream", &h.to_stream().to_text(), &mut files)?;
            }
            vc = Some(g.num_vertices());
            layers = Some(g.layers().to_vec());
        }
        Kind::Hph => {
            let yes = vec(&sigma, params.b).map_err(|e| anyhow!("--kind hph needs σ simple on consecutive groups of b: {e}"))?;
            let mut no = yes.clone();
            let mut swap: Vec<usize> = (1..=params.b).collect();
            swap.swap(0, 1);
            no.entries[0] = compose(&no.entries[0], &Permutation::from_images(&swap)?)?;
            let rs = params.rs();
            let inst = sample_instance(rs.r, rs.t, params.b, params.k, &yes, &no, args.params.seed, &mut fork(&mut rng))?;
            write(&args.out, "instance.json", &inst.to_json(), &mut files)?;
        }
        Kind::Rs => {
            write(&args.out, "rs.txt", &params.rs().to_text(), &mut files)?;
        }
    }
    let manifest = RunManifest {
        tool: "permhide".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: "gen".into(),
        kind: args.kind,
        params,
        seed: args.params.seed,
        sigma_spec: args.sigma.clone(),
        sigma: sigma.images(),
        shuffle: args.shuffle,
        vertex_count: vc,
        layers,
        files,
    };
    fs::write(args.out.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(manifest)
}

#[derive(Clone, Debug, Serialize)]
pub struct FileReport {
    pub path: String,
    pub kind: String,
    pub ok: bool,
    pub checks: Vec<String>,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checked: usize,
    pub failed: usize,
    pub files: Vec<FileReport>,
}

fn sibling_manifest(path: &Path) -> Option<RunManifest> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let text = fs::read_to_string(dir.join("manifest.json")).ok()?;
    serde_json::from_str(&text).ok()
}

fn verify_graph(text: &str, path: &Path, rep: &mut FileReport) {
    let g = match LayeredGraph::from_json(text) {
        Ok(g) => g,
        Err(e) => return rep.violations.push(format!("parse: {e}")),
    };
    let manifest = sibling_manifest(path).filter(|m| m.kind == Kind::Graph);
    let m = manifest.as_ref().map_or(g.first_size(), |mf| mf.params.m);
    match extract_permutation(&g, m) {
        Ok(p) => {
            rep.checks.push(format!("permutation graph on {m} sources"));
            if let Some(mf) = &manifest {
                if p.images() == mf.sigma {
                    rep.checks.push("extracted permutation equals manifest σ".into());
                } else {
                    rep.violations.push(format!("extracted {p:?} differs from manifest σ"));
                }
                if mf.vertex_count.is_some_and(|n| n != g.num_vertices()) {
                    rep.violations.push(format!("graph has {} vertices, manifest says {:?}", g.num_vertices(), mf.vertex_count));
                }
            }
            let half = m / 2;
            let expect = if p == sigma_eq(m) {
                Some(g.num_vertices() + half)
            } else if m % 2 == 0 && p == sigma_cross(m) {
                Some(g.num_vertices())
            } else {
                None
            };
            if let Some(want) = expect.filter(|_| m % 2 == 0 && g.num_vertices() <= VERIFY_MATCHING_CAP) {
                match bipartite_of(&g, m).and_then(|h| max_matching(&h)) {
                    Ok(mm) if mm.size == want => rep.checks.push(format!("matching dichotomy: max matching {want}")),
                    Ok(mm) => rep.violations.push(format!("max matching {} but the dichotomy requires {want}", mm.size)),
                    Err(e) => rep.violations.push(format!("matching oracle: {e}")),
                }
            }
        }
        Err(e) => rep.violations.push(e.to_string()),
    }
}

fn verify_instance(text: &str, rep: &mut FileReport) {
    match MultiHphInstance::from_json(text) {
        Ok(inst) => {
            if MultiHphInstance::from_json(&inst.to_json()).ok().as_ref() == Some(&inst) {
                rep.checks.push("instance JSON roundtrip".into());
            } else {
                rep.violations.push("instance does not survive a JSON roundtrip".into());
            }
            match referee_answer(&inst) {
                Ok(Verdict::Yes) if inst.answer == Answer::Yes => rep.checks.push("referee recovers yes".into()),
                Ok(Verdict::No) if inst.answer == Answer::No => rep.checks.push("referee recovers no".into()),
                Ok(v) => rep.violations.push(format!("referee answers {v:?}, stored answer is {:?}", inst.answer)),
                Err(e) => rep.violations.push(e.to_string()),
            }
        }
        Err(e) => rep.violations.push(format!("parse: {e}")),
    }
}

fn verify_manifest(text: &str, path: &Path, rep: &mut FileReport) {
    let mf: RunManifest = match serde_json::from_str(text) {
        Ok(m) => m,
        Err(e) => return rep.violations.push(format!("parse: {e}")),
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    for (name, digest) in &mf.files {
        match fs::read(dir.join(name)) {
            Ok(bytes) if sha256_hex(&bytes) == *digest => rep.checks.push(format!("digest of {name}")),
            Ok(_) => rep.violations.push(format!("digest mismatch for {name}")),
            Err(e) => rep.violations.push(format!("{name}: {e}")),
        }
    }
}

fn verify_provenance(text: &str, path: &Path, rep: &mut FileReport) {
    let codes: Vec<String> = match serde_json::from_str(text) {
        Ok(c) => c,
        Err(e) => return rep.violations.push(format!("parse: {e}")),
    };
    if let Some(bad) = codes.iter().find(|c| Provenance::from_code(c).is_err()) {
        return rep.violations.push(format!("unknown provenance tag {bad:?}"));
    }
    rep.checks.push(format!("{} provenance tags", codes.len()));
    let graph = path.with_file_name("graph.json");
    if let Some(g) = fs::read_to_string(graph).ok().and_then(|t| LayeredGraph::from_json(&t).ok()) {
        if g.edges().len() == codes.len() {
            rep.checks.push("one tag per graph edge".into());
        } else {
            rep.violations.push(format!("{} tags for {} graph edges", codes.len(), g.edges().len()));
        }
    }
}

pub fn verify_file(path: &Path) -> std::io::Result<FileReport> {
    let text = fs::read_to_string(path)?;
    let mut rep = FileReport { path: path.display().to_string(), kind: String::new(), ok: false, checks: vec![], violations: vec![] };
    if text.starts_with(crate::stream::MAGIC) {
        rep.kind = "stream".into();
        match EdgeStream::from_text(&text) {
            Ok(s) => rep.checks.push(format!("{} edges on {} vertices", s.len(), s.n)),
            Err(e) => rep.violations.push(e.to_string()),
        }
    } else if let Ok(v) = serde_json::from_str::<Value>(&text) {
        if v.get("tool").is_some() {
            rep.kind = "manifest".into();
            verify_manifest(&text, path, &mut rep);
        } else if v.get("layers").is_some() {
            rep.kind = "graph".into();
            verify_graph(&text, path, &mut rep);
        } else if v.get("schema_version").is_some() {
            rep.kind = "hph".into();
            verify_instance(&text, &mut rep);
        } else if v.is_array() {
            rep.kind = "provenance".into();
            verify_provenance(&text, path, &mut rep);
        } else {
            rep.kind = "unknown".into();
            rep.violations.push("unrecognised JSON document".into());
        }
    } else {
        rep.kind = "rs".into();
        match RsGraph::from_text(&text) {
            Ok(g) => match validate_rs(&g) {
                Ok(()) => rep.checks.push(format!("{} induced matchings of size {}", g.t, g.r)),
                Err(v) => rep.violations.push(v.to_string()),
            },
            Err(e) => rep.violations.push(format!("not a recognised file: {e}")),
        }
    }
    rep.ok = rep.violations.is_empty();
    Ok(rep)
}

pub fn cmd_verify(files: &[PathBuf]) -> std::io::Result<VerifyReport> {
    let files = files.iter().map(|f| verify_file(f)).collect::<std::io::Result<Vec<_>>>()?;
    Ok(VerifyReport { checked: files.len(), failed: files.iter().filter(|f| !f.ok).count(), files })
}

/// A table rendered as CSV or as a JSON array of row objects.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn all_hold(&self) -> bool {
        let Some(i) = self.columns.iter().position(|c| *c == "holds") else { return true };
        self.rows.iter().all(|r| r[i] != Value::Bool(false))
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                    .collect();
                Ok(serde_json::to_string_pretty(&rows)? + "\n")
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    }))?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
        }
    }
}

fn analyze_decay(a: &AnalyzeArgs, rng: &mut ChaCha8Rng) -> anyhow::Result<Table> {
    let mut t = Table::new(&["case", "index", "eps", "lhs", "bound", "holds"]);
    let eps_set = [0.25, 1.0 / 9.0, 1.0 / 16.0];
    for b in [2, 3, 4] {
        for g in 1..=4 {
            let eps: Vec<f64> = (0..g).map(|i| eps_set[(i + b) % 3]).collect();
            let nus = eps.iter().map(|&e| DistSb::parity(b, e)).collect::<crate::Result<Vec<_>>>()?;
            let rep = concat_decay_check(&nus)?;
            let equal = (rep.lhs - rep.bound).abs() <= 1e-12;
            let label = eps.iter().map(|e| format!("{e:.6}")).collect::<Vec<_>>().join("/");
            t.rows.push(vec![json!(format!("parity b={b} g={g}")), json!(g), json!(label), json!(rep.lhs), json!(rep.bound), json!(equal)]);
        }
    }
    for i in 0..a.trials {
        let nus = (0..a.g).map(|_| DistSb::random(a.b, rng)).collect::<crate::Result<Vec<_>>>()?;
        let rep = concat_decay_check(&nus)?;
        let label = rep.eps.iter().map(|e| format!("{e:.6}")).collect::<Vec<_>>().join("/");
        t.rows.push(vec![json!(format!("random b={} g={}", a.b, a.g)), json!(i), json!(label), json!(rep.lhs), json!(rep.bound), json!(rep.holds)]);
    }
    Ok(t)
}

fn analyze_fourier(a: &AnalyzeArgs, rng: &mut ChaCha8Rng) -> anyhow::Result<Table> {
    let ir = build_irreps(a.b)?;
    let mut t = Table::new(&["check", "b", "max_error", "holds"]);
    let n = crate::perm::factorial(a.b);
    t.rows.push(vec![json!("dimension_sum_sq"), json!(a.b), json!(ir.dimension_sum_sq() as f64 - n as f64), json!(ir.dimension_sum_sq() == n)]);
    let hom = ir.homomorphism_error();
    t.rows.push(vec![json!("homomorphism"), json!(a.b), json!(hom), json!(hom <= 1e-9)]);
    let orth = ir.orthogonality_error();
    t.rows.push(vec![json!("orthogonality"), json!(a.b), json!(orth), json!(orth <= 1e-9)]);
    let (mut round, mut conv, mut planch) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..a.trials {
        let f = DistSb::random(a.b, rng)?;
        let back = inverse_fourier(&fourier(&f, &ir)?, &ir);
        round = round.max(back.iter().zip(f.probs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        let g = DistSb::random(a.b, rng)?;
        conv = conv.max(convolution_theorem_check(&f, &g, &ir)?.err_forward);
        let pl = plancherel_check(&f, &g, &ir)?;
        planch = planch.max((pl.direct - pl.spectral).abs());
    }
    for (name, e) in [("roundtrip", round), ("convolution_theorem", conv), ("plancherel", planch)] {
        t.rows.push(vec![json!(name), json!(a.b), json!(e), json!(e <= 1e-9)]);
    }
    Ok(t)
}

fn analyze_pinsker(a: &AnalyzeArgs, rng: &mut ChaCha8Rng) -> anyhow::Result<Table> {
    let mut t = Table::new(&["index", "tvd", "kl", "pinsker_bound", "strengthened_rhs", "holds"]);
    for i in 0..a.trials {
        let (mu, nu) = (DistSb::random(a.b, rng)?, DistSb::random(a.b, rng)?);
        let (d, k) = (tvd(&mu, &nu)?, kl(&mu, &nu)?);
        let sp = strengthened_pinsker_check(&mu, &nu)?;
        let bound = (k / 2.0).sqrt();
        t.rows.push(vec![json!(i), json!(d), json!(k), json!(bound), json!(sp.rhs), json!(d <= bound + 1e-12 && sp.holds)]);
    }
    Ok(t)
}

fn analyze_depth(a: &AnalyzeArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(&["m", "b", "depth", "bound", "holds"]);
    let cases: Vec<(usize, usize)> = match a.m {
        Some(m) => vec![(m, a.b)],
        None => [2, 3, 4].iter().flat_map(|&b| [8, 16, 32, 64, 128].map(|m| (m, b))).collect(),
    };
    for (m, b) in cases {
        let depth = build_sort_network(m, b)?.depth();
        let bound = 4 * ceil_log(m, b).pow(2);
        t.rows.push(vec![json!(m), json!(b), json!(depth), json!(bound), json!(depth <= bound)]);
    }
    Ok(t)
}

fn analyze_advantage(a: &AnalyzeArgs, rng: &mut ChaCha8Rng) -> anyhow::Result<Table> {
    let m = a.m.unwrap_or(8);
    let b = if m % a.b == 0 { a.b } else { 2 };
    let params = GenParams::new(m, b, a.k, a.p)?;
    let n = vertex_count(&params, true)?;
    let sample = |sigma: Permutation| {
        let params = params.clone();
        move |r: &mut ChaCha8Rng| -> crate::Result<EdgeStream> { Ok(bipartite_of(&gen_general(&sigma, &params, r)?, m)?.to_stream()) }
    };
    let perfect = n + m / 2;
    let mut t = Table::new(&["experiment", "passes", "trials", "accuracy", "ci_low", "ci_high"]);
    let full = advantage_estimate(
        sample(sigma_eq(m)),
        sample(sigma_cross(m)),
        &FullMemory,
        |(nv, edges): &(usize, Vec<(usize, usize)>), _: &mut ChaCha8Rng| Ok(max_matching_of_edges(*nv, edges)? < perfect),
        a.trials,
        1,
        rng,
    )?;
    let greedy = advantage_estimate(
        sample(sigma_eq(m)),
        sample(sigma_cross(m)),
        &augmenting_baseline(a.p),
        |mm: &Vec<(usize, usize)>, _: &mut ChaCha8Rng| Ok(mm.len() < n),
        a.trials,
        a.p,
        rng,
    )?;
    let null = advantage_estimate(
        sample(sigma_eq(m)),
        sample(sigma_eq(m)),
        &FullMemory,
        |(nv, edges): &(usize, Vec<(usize, usize)>), _: &mut ChaCha8Rng| Ok(max_matching_of_edges(*nv, edges)? < perfect),
        a.trials,
        1,
        rng,
    )?;
    for (name, passes, r) in [("full_memory_eq_vs_cross", 1, full), ("baseline_size_eq_vs_cross", a.p, greedy), ("null_eq_vs_eq", 1, null)] {
        t.rows.push(vec![json!(name), json!(passes), json!(r.trials), json!(r.accuracy), json!(r.ci_low), json!(r.ci_high)]);
    }
    Ok(t)
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> anyhow::Result<Table> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    match a.kind {
        Analysis::Decay => analyze_decay(a, &mut rng),
        Analysis::Fourier => analyze_fourier(a, &mut rng),
        Analysis::Pinsker => analyze_pinsker(a, &mut rng),
        Analysis::Depth => analyze_depth(a),
        Analysis::Advantage => analyze_advantage(a, &mut rng),
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Gen(args) => match cmd_gen(&args) {
            Ok(m) => {
                println!("wrote {} files to {}", m.files.len() + 1, args.out.display());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_USAGE
            }
        },
        Command::Verify(args) => match cmd_verify(&args.files) {
            Ok(rep) => {
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
                if rep.failed == 0 {
                    EXIT_OK
                } else {
                    EXIT_VERIFY
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Command::Analyze(args) => {
            let rendered = cmd_analyze(&args).and_then(|t| Ok((t.render(args.format)?, t.all_hold())));
            match rendered {
                Ok((text, holds)) => {
                    let written = match &args.out {
                        Some(p) => fs::write(p, &text).map_err(|e| eprintln!("error: {e}")).is_ok(),
                        None => {
                            print!("{text}");
                            true
                        }
                    };
                    match (written, holds) {
                        (false, _) => EXIT_USAGE,
                        (true, true) => EXIT_OK,
                        (true, false) => EXIT_VERIFY,
                    }
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    EXIT_USAGE
                }
            }
        }
    }
}
