//! Request handling behind the `assocwidth` binary: input parsing, family
//! generation, dispatch to the library, and deterministic report output.

pub mod input;

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use assocwidth::{
    certify, delzant_check, edges, enumerate_vertices_bruteforce, enumerate_vertices_nested,
    gromov_width, hrep, nestohedron_bounds, nonsqueezing_report, permutohedron_width,
    polytope::redundant_constraints, project, subgraph_monotonicity, verify_edge_directions,
    BuildingSet, CertifyOptions, ErrorKind, Graph, Limits, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::input::{parse_building_set, parse_graph, split_batch, BuildingSetDoc, GraphDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] assocwidth::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Parse { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => EXIT_INPUT,
                ErrorKind::ResourceLimit => EXIT_RESOURCE,
                ErrorKind::Internal => EXIT_INTERNAL,
            },
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.exit_code() {
            EXIT_IO => "io",
            EXIT_RESOURCE => "resource_limit",
            EXIT_INTERNAL => "internal_inconsistency",
            _ => "input",
        }
    }

    fn shifted(self, lines: usize) -> Self {
        match self {
            CliError::Parse { line, column, message } => CliError::Parse {
                line: line + lines,
                column,
                message,
            },
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Complete,
    Path,
    Cycle,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub size: usize,
}

impl FromStr for FamilySpec {
    type Err = CliError;

    /// `KIND:N`, e.g. `cycle:5`.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, size) = s
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("expected KIND:N, found `{s}`")))?;
        let kind = match kind {
            "complete" => FamilyKind::Complete,
            "path" => FamilyKind::Path,
            "cycle" => FamilyKind::Cycle,
            "star" => FamilyKind::Star,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown family `{other}`; expected complete, path, cycle or star"
                )))
            }
        };
        let size = size
            .parse()
            .map_err(|_| CliError::Usage(format!("family size `{size}` is not a number")))?;
        Ok(FamilySpec { kind, size })
    }
}

/// The named graph on `1..=size`; stars are centred at 1.
pub fn generate_family(family: FamilySpec) -> Result<Graph, CliError> {
    let g = match family.kind {
        FamilyKind::Complete => Graph::complete(family.size),
        FamilyKind::Path => Graph::path(family.size),
        FamilyKind::Cycle => Graph::cycle(family.size),
        FamilyKind::Star => Graph::star(family.size),
    };
    Ok(g?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Width,
    Certify,
    Polytope,
    Delzant,
    Nestohedron,
    Family,
    Monotonicity,
    Nonsqueeze,
    Permutohedron,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    GraphFile(PathBuf),
    Family(FamilySpec),
    BuildingSetFile(PathBuf),
    Coords(Vec<Rational>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub command: Command,
    pub source: Source,
    /// Smaller graph for `monotonicity` and `nonsqueeze`.
    pub subgraph: Option<Source>,
    /// Vertex `i` of the subgraph is vertex `embedding[i - 1]` of the graph.
    pub embedding: Option<Vec<usize>>,
    /// Stabilisation exponent for `nonsqueeze`.
    pub m: u64,
    /// Random subgraphs drawn by `monotonicity` when no subgraph is given.
    pub samples: usize,
    pub geometry: bool,
    pub limits: Limits,
    pub seed: u64,
    pub batch: bool,
    pub timing: bool,
}

impl Request {
    pub fn new(command: Command, source: Source) -> Self {
        Request {
            command,
            source,
            subgraph: None,
            embedding: None,
            m: 0,
            samples: 20,
            geometry: true,
            limits: Limits::default(),
            seed: 0,
            batch: false,
            timing: false,
        }
    }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("`{s}` is not a rational number"));
    let s = s.trim();
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: num::BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: num::BigInt = den.trim().parse().map_err(|_| bad())?;
    if den == num::BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn parse_coords(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(parse_rational).collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

enum Item {
    Graph(Graph),
    Sets(BuildingSet),
    Coords(Vec<Rational>),
}

impl Item {
    fn echo(&self) -> Value {
        match self {
            Item::Graph(g) => json!({ "graph": GraphDoc::of(g) }),
            Item::Sets(b) => json!({ "building_set": BuildingSetDoc::of(b) }),
            Item::Coords(c) => json!({ "coords": c.iter().map(|x| x.to_string()).collect::<Vec<_>>() }),
        }
    }

    fn building_set(&self, limits: &Limits) -> Result<BuildingSet, CliError> {
        match self {
            Item::Graph(g) => Ok(BuildingSet::from_graph(g, limits)?),
            Item::Sets(b) => Ok(b.clone()),
            Item::Coords(_) => Err(CliError::Usage("expected a graph or a building set".into())),
        }
    }

    fn graph(&self) -> Result<&Graph, CliError> {
        match self {
            Item::Graph(g) => Ok(g),
            _ => Err(CliError::Usage("this command needs a graph input".into())),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialise")
}

fn load_graph(src: &Source) -> Result<Graph, CliError> {
    match src {
        Source::GraphFile(p) => parse_graph(&read(p)?),
        Source::Family(f) => generate_family(*f),
        _ => Err(CliError::Usage("expected a graph file or a family".into())),
    }
}

type Items = Vec<(usize, Result<Item, CliError>)>;

/// Items of the request, each with the line its text starts on.
fn load_items(req: &Request) -> Result<Items, CliError> {
    let parse = |text: &str, sets: bool| -> Result<Item, CliError> {
        if sets {
            parse_building_set(text).map(Item::Sets)
        } else {
            parse_graph(text).map(Item::Graph)
        }
    };
    match &req.source {
        Source::Family(f) => Ok(vec![(1, generate_family(*f).map(Item::Graph))]),
        Source::Coords(c) => Ok(vec![(1, Ok(Item::Coords(c.clone())))]),
        Source::GraphFile(p) | Source::BuildingSetFile(p) => {
            let sets = matches!(req.source, Source::BuildingSetFile(_));
            let text = read(p)?;
            if req.batch {
                Ok(split_batch(&text)
                    .into_iter()
                    .map(|(start, block)| (start, parse(&block, sets).map_err(|e| e.shifted(start - 1))))
                    .collect())
            } else {
                Ok(vec![(1, parse(&text, sets))])
            }
        }
    }
}

#[derive(Serialize)]
struct PolytopeReport {
    dimension: usize,
    ambient: assocwidth::HalfspaceSystem,
    projected: assocwidth::HalfspaceSystem,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry: Option<PolytopeGeometry>,
}

#[derive(Serialize)]
struct PolytopeGeometry {
    vertex_count: usize,
    edge_count: usize,
    nested_set_count: usize,
    oracles_agree: bool,
    redundant_constraints: Vec<usize>,
    #[serde(serialize_with = "assocwidth::ser::rational_vec_vec")]
    vertices: Vec<Vec<Rational>>,
    vertex_facets: Vec<Vec<usize>>,
    edges: Vec<assocwidth::EdgeDescriptor>,
}

fn polytope_report(b: &BuildingSet, req: &Request) -> Result<Value, CliError> {
    let ambient = hrep(b)?;
    let projected = project(&ambient)?;
    let geometry = if req.geometry {
        let p = enumerate_vertices_bruteforce(&projected, &req.limits)?;
        let es = edges(&p)?;
        let nested = enumerate_vertices_nested(b)?.len();
        Some(PolytopeGeometry {
            vertex_count: p.vertices.len(),
            edge_count: es.len(),
            nested_set_count: nested,
            oracles_agree: nested == p.vertices.len(),
            redundant_constraints: redundant_constraints(&p),
            vertices: p.vertices,
            vertex_facets: p.vertex_facets,
            edges: es,
        })
    } else {
        None
    };
    Ok(to_value(&PolytopeReport {
        dimension: projected.dimension,
        ambient,
        projected,
        geometry,
    }))
}

fn delzant_report(b: &BuildingSet, req: &Request) -> Result<Value, CliError> {
    let p = enumerate_vertices_bruteforce(&project(&hrep(b)?)?, &req.limits)?;
    Ok(json!({
        "dimension": p.dimension(),
        "vertex_count": p.vertices.len(),
        "delzant": delzant_check(&p)?,
        "edge_directions_are_roots": verify_edge_directions(&p)?,
    }))
}

fn random_subgraph(g: &Graph, rng: &mut ChaCha8Rng) -> (Graph, Vec<usize>) {
    let n = g.vertex_count();
    let mut chosen: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.7)).collect();
    if chosen.is_empty() {
        chosen.push(rng.gen_range(1..=n));
    }
    let pos = |l: usize| chosen.iter().position(|&x| x == l).unwrap() + 1;
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| chosen.contains(&u) && chosen.contains(&v) && rng.gen_bool(0.8))
        .map(|(u, v)| (pos(u), pos(v)))
        .collect();
    (Graph::new(chosen.len(), edges).expect("a subgraph of a simple graph is simple"), chosen)
}

fn subgraph_of(req: &Request) -> Result<(Graph, Vec<usize>), CliError> {
    let src = req
        .subgraph
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --subgraph or --subfamily".into()))?;
    let h = load_graph(src)?;
    let embedding = req.embedding.clone().unwrap_or_else(|| (1..=h.vertex_count()).collect());
    Ok((h, embedding))
}

fn evaluate(item: &Item, req: &Request) -> Result<Value, CliError> {
    let opts = CertifyOptions {
        limits: req.limits,
        geometry: req.geometry,
    };
    match req.command {
        Command::Width => Ok(to_value(&gromov_width(item.graph()?, &req.limits)?)),
        Command::Certify => Ok(to_value(&certify(item.graph()?, &opts)?)),
        Command::Polytope => polytope_report(&item.building_set(&req.limits)?, req),
        Command::Delzant => delzant_report(&item.building_set(&req.limits)?, req),
        Command::Nestohedron => Ok(to_value(&nestohedron_bounds(&item.building_set(&req.limits)?, &req.limits)?)),
        Command::Family => {
            let g = item.graph()?;
            let w = gromov_width(g, &req.limits)?;
            Ok(json!({
                "building_set_size": assocwidth::count_connected_subsets(g, &req.limits)?,
                "width": w.width,
                "pivot_vertex": w.pivot_vertex,
                "k": w.k,
            }))
        }
        Command::Monotonicity => {
            let g = item.graph()?;
            if req.subgraph.is_some() {
                let (h, embedding) = subgraph_of(req)?;
                let rep = subgraph_monotonicity(g, &h, &embedding, &req.limits)?;
                return Ok(json!({
                    "subgraph": GraphDoc::of(&h),
                    "embedding": embedding,
                    "report": rep,
                }));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
            let mut samples = Vec::with_capacity(req.samples);
            let mut all_hold = true;
            for _ in 0..req.samples {
                let (h, embedding) = random_subgraph(g, &mut rng);
                let rep = subgraph_monotonicity(g, &h, &embedding, &req.limits)?;
                all_hold &= rep.holds;
                samples.push(json!({
                    "subgraph": GraphDoc::of(&h),
                    "embedding": embedding,
                    "report": rep,
                }));
            }
            Ok(json!({ "seed": req.seed, "samples": samples, "all_hold": all_hold }))
        }
        Command::Nonsqueeze => {
            let (h, embedding) = subgraph_of(req)?;
            let rep = nonsqueezing_report(item.graph()?, &h, &embedding, req.m, &req.limits)?;
            Ok(json!({ "subgraph": GraphDoc::of(&h), "embedding": embedding, "report": rep }))
        }
        Command::Permutohedron => match item {
            Item::Coords(c) => Ok(to_value(&permutohedron_width(c, &opts)?)),
            _ => Err(CliError::Usage("permutohedron needs --coords".into())),
        },
    }
}

fn error_value(e: &CliError) -> Value {
    json!({ "kind": e.kind_name(), "exit_code": e.exit_code(), "message": e.to_string() })
}

fn header(req: &Request) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!("assocwidth"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), to_value(&req.command));
    m.insert(
        "options".into(),
        json!({
            "geometry": req.geometry,
            "max_enum": req.limits.max_enum,
            "max_count": req.limits.max_count,
            "max_dim": req.limits.max_dim,
            "max_subsets": req.limits.max_subsets,
            "seed": req.seed,
        }),
    );
    m
}

/// A finished report and the exit status it implies.
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

/// Runs a request. Errors that prevent any report (unreadable input,
/// unusable options) are returned; per-item failures in batch mode are
/// recorded in the report and reflected in the exit status.
pub fn run(req: &Request) -> Result<Outcome, CliError> {
    let started = Instant::now();
    if req.limits.max_enum == 0 || req.limits.max_dim == 0 || req.limits.max_count == 0 {
        return Err(CliError::Usage("caps must be positive".into()));
    }
    let items = load_items(req)?;
    let mut report = header(req);
    let mut exit_code = EXIT_OK;
    if req.batch {
        let mut out = Vec::with_capacity(items.len());
        for (index, (line, item)) in items.into_iter().enumerate() {
            let mut entry = Map::new();
            entry.insert("index".into(), json!(index));
            entry.insert("line".into(), json!(line));
            let result = item.and_then(|it| {
                entry.insert("input".into(), it.echo());
                evaluate(&it, req)
            });
            match result {
                Ok(v) => {
                    entry.insert("result".into(), v);
                }
                Err(e) => {
                    exit_code = exit_code.max(e.exit_code());
                    entry.insert("error".into(), error_value(&e));
                }
            }
            out.push(Value::Object(entry));
        }
        report.insert("items".into(), Value::Array(out));
    } else {
        let (_, item) = items.into_iter().next().expect("single input");
        let item = item?;
        report.insert("input".into(), item.echo());
        report.insert("result".into(), evaluate(&item, req)?);
    }
    if req.timing {
        report.insert("timing_ms".into(), json!(started.elapsed().as_millis() as u64));
    }
    Ok(Outcome {
        report: Value::Object(report),
        exit_code,
    })
}

/// Report for a request that failed outright.
pub fn error_report(req: &Request, e: &CliError) -> Value {
    let mut report = header(req);
    report.insert("error".into(), error_value(e));
    Value::Object(report)
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => {
            out.push_str(prefix);
            out.push_str(": ");
            out.push_str(&match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            });
            out.push('\n');
        }
    }
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("values serialise");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            flatten("", report, &mut s);
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(s: &str) -> Source {
        Source::Family(s.parse().unwrap())
    }

    #[test]
    fn families() {
        let g = generate_family("path:3".parse().unwrap()).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (2, 3)]);
        assert_eq!(generate_family("complete:3".parse().unwrap()).unwrap().edge_count(), 3);
        let c = generate_family("cycle:4".parse().unwrap()).unwrap();
        assert_eq!(c.edges(), vec![(1, 2), (1, 4), (2, 3), (3, 4)]);
        let star = generate_family("star:4".parse().unwrap()).unwrap();
        assert_eq!(star.degree(1), 3);
        let err = generate_family("cycle:2".parse().unwrap()).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INPUT);
        assert!("wheel:4".parse::<FamilySpec>().is_err());
        assert!("path".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn width_report() {
        let out = run(&Request::new(Command::Width, fam("complete:4"))).unwrap();
        assert_eq!(out.report["result"]["width"], json!(7));
        assert_eq!(out.report["input"]["graph"]["vertex_count"], json!(4));
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn certify_report() {
        let out = run(&Request::new(Command::Certify, fam("path:3"))).unwrap();
        let c = &out.report["result"]["components"][0];
        assert_eq!(c["lower"]["rho"], json!("2"));
        assert_eq!(c["upper"]["bound"], json!("2"));
        assert_eq!(c["lower"]["containment_checked"], json!(true));
        assert_eq!(c["upper"]["edge_pairings_ok"], json!(true));
        assert_eq!(out.report["result"]["tight"], json!(true));
    }

    #[test]
    fn exit_code_classes() {
        let internal = CliError::Core(assocwidth::Error::Internal("vertex outside".into()));
        let input = CliError::Core(assocwidth::Error::Input("bad".into()));
        let parse = CliError::Parse { line: 1, column: 1, message: String::new() };
        assert_eq!(internal.exit_code(), EXIT_INTERNAL);
        assert_eq!(input.exit_code(), EXIT_INPUT);
        assert_eq!(parse.exit_code(), EXIT_INPUT);
        assert_eq!(internal.kind_name(), "internal_inconsistency");
        let codes = [EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_RESOURCE, EXIT_INTERNAL];
        let distinct: std::collections::BTreeSet<_> = codes.iter().collect();
        assert_eq!(distinct.len(), codes.len());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("5/2").unwrap().to_string(), "5/2");
        assert_eq!(parse_rational("-3").unwrap().to_string(), "-3");
        assert_eq!(parse_rational("4/2").unwrap().to_string(), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_coords("1,2,4").unwrap().len(), 3);
    }

    #[test]
    fn permutohedron_and_resource_errors() {
        let req = Request::new(Command::Permutohedron, Source::Coords(parse_coords("1,2,4").unwrap()));
        assert_eq!(run(&req).unwrap().report["result"]["width"], json!("3"));
        let mut req = Request::new(Command::Polytope, fam("complete:6"));
        req.limits.max_dim = 3;
        assert_eq!(run(&req).err().unwrap().exit_code(), EXIT_RESOURCE);
        let mut req = Request::new(Command::Width, fam("path:30"));
        req.limits.max_count = 20;
        assert_eq!(run(&req).err().unwrap().exit_code(), EXIT_RESOURCE);
    }

    #[test]
    fn text_rendering() {
        let out = run(&Request::new(Command::Width, fam("path:3"))).unwrap();
        let text = render(&out.report, Format::Text);
        assert!(text.contains("result.width: 2\n"));
        assert!(text.contains("result.k: [3,4,3]\n"));
    }

    #[test]
    fn monotonicity_samples_are_seeded() {
        let mut req = Request::new(Command::Monotonicity, fam("cycle:6"));
        req.seed = 7;
        let a = render(&run(&req).unwrap().report, Format::Json);
        let b = render(&run(&req).unwrap().report, Format::Json);
        assert_eq!(a, b);
        req.seed = 8;
        assert_ne!(a, render(&run(&req).unwrap().report, Format::Json));
    }
}
