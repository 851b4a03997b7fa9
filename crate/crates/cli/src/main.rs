use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use assocwidth::Limits;
use assocwidth_cli::{
    error_report, parse_coords, render, run, CliError, Command, FamilySpec, Format, Request, Source,
    EXIT_INPUT, EXIT_IO,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "assocwidth", version, about = "Gromov widths of graph associahedra and nestohedra")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Width of the graph associahedron
    Width(Common),
    /// Lower and upper certificates for the width
    Certify(Common),
    /// Halfspace systems, vertices and edges
    Polytope(Common),
    /// Delzant and root-direction checks
    Delzant(Common),
    /// Width bounds for an arbitrary building set
    Nestohedron(Common),
    /// Width for a named family; requires --family
    Family(Common),
    /// Width monotonicity under subgraphs
    Monotonicity(Common),
    /// Non-squeezing obstruction between two graphs
    Nonsqueeze(Common),
    /// Width of the permutohedron with coordinates c; requires --coords
    Permutohedron(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Graph file: edge list or JSON
    #[arg(long, short, group = "source")]
    input: Option<PathBuf>,
    /// Named family KIND:N with KIND one of complete, path, cycle, star
    #[arg(long, group = "source")]
    family: Option<String>,
    /// Building-set file: ground size, then one member per line
    #[arg(long, group = "source")]
    building_set: Option<PathBuf>,
    /// Comma-separated rational coordinates, e.g. 1,2,4
    #[arg(long, group = "source", allow_hyphen_values = true)]
    coords: Option<String>,
    /// Subgraph file for monotonicity and nonsqueeze
    #[arg(long, conflicts_with = "subfamily")]
    subgraph: Option<PathBuf>,
    /// Subgraph given as a named family KIND:N
    #[arg(long)]
    subfamily: Option<String>,
    /// Images of subgraph vertices 1, 2, ... in the graph, comma-separated
    #[arg(long, value_delimiter = ',')]
    embedding: Option<Vec<usize>>,
    /// Stabilisation exponent for nonsqueeze
    #[arg(long, default_value_t = 0)]
    m: u64,
    /// Random subgraphs sampled by monotonicity without --subgraph
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, value_enum, default_value = "on")]
    geometry: OnOff,
    /// Largest vertex count for subset enumeration
    #[arg(long)]
    max_enum: Option<usize>,
    /// Largest vertex count for connected-subset counting
    #[arg(long)]
    max_count: Option<usize>,
    /// Largest polytope dimension for vertex enumeration
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Treat the input file as several inputs separated by `---` lines
    #[arg(long)]
    batch: bool,
    /// Include wall-clock time in the report
    #[arg(long)]
    timing: bool,
}

fn source(c: &Common) -> Result<Source, CliError> {
    if let Some(p) = &c.input {
        Ok(Source::GraphFile(p.clone()))
    } else if let Some(f) = &c.family {
        Ok(Source::Family(f.parse()?))
    } else if let Some(p) = &c.building_set {
        Ok(Source::BuildingSetFile(p.clone()))
    } else if let Some(s) = &c.coords {
        Ok(Source::Coords(parse_coords(s)?))
    } else {
        Err(CliError::Usage(
            "give one of --input, --family, --building-set or --coords".into(),
        ))
    }
}

fn request(cmd: Cmd) -> (Command, Common) {
    match cmd {
        Cmd::Width(c) => (Command::Width, c),
        Cmd::Certify(c) => (Command::Certify, c),
        Cmd::Polytope(c) => (Command::Polytope, c),
        Cmd::Delzant(c) => (Command::Delzant, c),
        Cmd::Nestohedron(c) => (Command::Nestohedron, c),
        Cmd::Family(c) => (Command::Family, c),
        Cmd::Monotonicity(c) => (Command::Monotonicity, c),
        Cmd::Nonsqueeze(c) => (Command::Nonsqueeze, c),
        Cmd::Permutohedron(c) => (Command::Permutohedron, c),
    }
}

fn build(command: Command, c: &Common) -> Result<Request, CliError> {
    let src = source(c)?;
    match (command, &src) {
        (Command::Family, Source::Family(_)) | (Command::Permutohedron, Source::Coords(_)) => {}
        (Command::Family, _) => return Err(CliError::Usage("family needs --family KIND:N".into())),
        (Command::Permutohedron, _) => return Err(CliError::Usage("permutohedron needs --coords".into())),
        (_, Source::Coords(_)) => return Err(CliError::Usage("--coords only applies to permutohedron".into())),
        _ => {}
    }
    if c.batch && !matches!(src, Source::GraphFile(_) | Source::BuildingSetFile(_)) {
        return Err(CliError::Usage("--batch needs --input or --building-set".into()));
    }
    let mut req = Request::new(command, src);
    req.subgraph = match (&c.subgraph, &c.subfamily) {
        (Some(p), _) => Some(Source::GraphFile(p.clone())),
        (None, Some(f)) => Some(Source::Family(f.parse::<FamilySpec>()?)),
        (None, None) => None,
    };
    req.embedding = c.embedding.clone();
    req.m = c.m;
    req.samples = c.samples;
    req.geometry = matches!(c.geometry, OnOff::On);
    let d = Limits::default();
    req.limits = Limits {
        max_enum: c.max_enum.unwrap_or(d.max_enum),
        max_count: c.max_count.unwrap_or(d.max_count),
        max_dim: c.max_dim.unwrap_or(d.max_dim),
        ..d
    };
    req.seed = c.seed;
    req.batch = c.batch;
    req.timing = c.timing;
    Ok(req)
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = request(cli.command);
    let format = match common.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let req = match build(command, &common) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("assocwidth: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let (report, code) = match run(&req) {
        Ok(o) => (o.report, o.exit_code),
        Err(e) => {
            eprintln!("assocwidth: {e}");
            (error_report(&req, &e), e.exit_code())
        }
    };
    if let Err(e) = emit(&render(&report, format), common.output.as_ref()) {
        eprintln!("assocwidth: {e}");
        return ExitCode::from(EXIT_IO as u8);
    }
    ExitCode::from(code as u8)
}
