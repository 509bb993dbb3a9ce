//! `lapsep`: batch analysis of graph Laplacians as bipartite and multipartite
//! quantum states. Reports go to stdout as JSON, diagnostics to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lapsep::constructions::construct_entangling_labeling;
use lapsep::decomposition::verify_certificate;
use lapsep::entanglement::degree_entangled;
use lapsep::experiments::{
    all_labelings_verdict, bipartite_census, census_n4, find_entangling_labeling,
    noncomplete_experiment, ExperimentOptions, ReportLine, SearchOutcome,
};
use lapsep::graph::laplacian_density;
use lapsep::io::{parse_graph6_catalog, read_graph, to_graph6};
use lapsep::labeling::{partial_transpose_graph, single_factor_splits, LabelingDoc};
use lapsep::products::{product_chain, product_laplacian_certificate};
use lapsep::{verdict, DimVector, Error, Graph, ProductMask, Status, VertexLabeling};

#[derive(Parser)]
#[command(name = "lapsep", version, about = "Separability of graph Laplacian states")]
struct Cli {
    /// Worker threads for search and census (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verdict for one labeling (identity unless --labeling is given).
    /// Exit code 0 separable, 1 entangled, 2 undecided.
    Analyze {
        /// Edge list, .g6 file, or a name such as K_4, K_{1,3}, C6.
        graph: String,
        #[arg(long)]
        dims: String,
        /// JSON file {"dims": [..], "labeling": [[1-based multi-index], ..]}.
        #[arg(long)]
        labeling: Option<PathBuf>,
    },
    /// Look for an entangling labeling, or classify all labelings.
    Search {
        graph: String,
        #[arg(long)]
        dims: String,
        #[arg(long, value_enum, default_value_t = Mode::Any)]
        mode: Mode,
    },
    /// Graph product of two or more graphs, optionally with a separability certificate.
    Product {
        /// Product name (strong, cartesian, tensor, lexicographic), "R1,R2,R4", or an integer mask.
        #[arg(long)]
        mask: String,
        #[arg(required = true, num_args = 2..)]
        graphs: Vec<String>,
        #[arg(long)]
        certify: bool,
    },
    /// Exhaustive experiments, one JSON line per graph.
    Census {
        #[arg(long, value_enum)]
        experiment: Experiment,
        /// Number of vertices (bipartite experiment).
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// graph6 catalog (regular9 experiment).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Dimension vectors; repeat to run several.
        #[arg(long)]
        dims: Vec<String>,
        /// Run the exhaustive search even where a construction applies.
        #[arg(long)]
        always_search: bool,
    },
    /// Randomized consistency checks of the library.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Any,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    N4,
    Bipartite,
    Regular9,
}

/// Failures of the command line itself, kept apart from library errors.
enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(
                Error::Parse(_) | Error::BadGraph6(_) | Error::UnknownName(_) | Error::InvalidLabeling(_),
            )
            | Failure::Usage(_) => 3,
            Failure::Lib(Error::DimensionMismatch { .. } | Error::InvalidDims(_)) => 4,
            _ => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(s) | Failure::Usage(s) => s.clone(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn graph_json(g: &Graph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .into_iter()
        .map(|(u, v, w)| if w == 1.0 { json!([u, v]) } else { json!([u, v, w]) })
        .collect();
    json!({ "n": g.n(), "edges": edges })
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(v).expect("serializable report"));
}

fn load_graph(spec: &str, dims: &DimVector) -> CliResult<Graph> {
    let g = read_graph(spec, dims.product())?;
    dims.check_order(g.n())?;
    Ok(g)
}

fn load_labeling(path: &PathBuf, dims: &DimVector) -> CliResult<VertexLabeling> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let doc: LabelingDoc = serde_json::from_str(&text)
        .map_err(|e| Failure::Lib(Error::Parse(format!("{}: {e}", path.display()))))?;
    if doc.dims != dims.dims() {
        return Err(Error::InvalidDims(format!(
            "labeling dims {:?} differ from --dims {dims}",
            doc.dims
        ))
        .into());
    }
    Ok(VertexLabeling::try_from(doc)?)
}

fn analyze(graph: &str, dims: &str, labeling: Option<&PathBuf>) -> CliResult<u8> {
    let dims = DimVector::parse(dims)?;
    let g = load_graph(graph, &dims)?;
    let lab = match labeling {
        Some(path) => load_labeling(path, &dims)?,
        None => VertexLabeling::identity(dims.clone()),
    };
    let v = verdict(&g, &dims, &lab)?;
    print_json(&json!({
        "graph": graph_json(&g),
        "dims": dims.dims(),
        "labeling": LabelingDoc::from(&lab),
        "verdict": v,
    }));
    Ok(match v.status {
        Status::Separable => 0,
        Status::Entangled => 1,
        Status::Undecided => 2,
    })
}

fn search(graph: &str, dims: &str, mode: Mode) -> CliResult<u8> {
    let dims = DimVector::parse(dims)?;
    let g = load_graph(graph, &dims)?;
    match mode {
        Mode::Any => {
            let outcome = find_entangling_labeling(&g, &dims, ExperimentOptions::default())?;
            let report = match outcome {
                SearchOutcome::Skipped(why) => json!({ "found": false, "reason": why }),
                SearchOutcome::Found {
                    method,
                    labeling,
                    examined,
                } => json!({
                    "found": true,
                    "method": method,
                    "examined": examined,
                    "entangling_labeling": LabelingDoc::from(&labeling),
                }),
                SearchOutcome::NotFound { examined } => {
                    json!({ "found": false, "examined": examined })
                }
            };
            print_json(&json!({ "graph": graph_json(&g), "dims": dims.dims(), "search": report }));
        }
        Mode::All => {
            let r = all_labelings_verdict(&g, &dims)?;
            print_json(&json!({
                "graph": graph_json(&g),
                "dims": dims.dims(),
                "classification": r.classification,
                "counts": r.counts,
                "undecided_present": r.undecided_present,
                "entangling_labeling": r.entangling_labeling.as_ref().map(LabelingDoc::from),
            }));
        }
    }
    Ok(0)
}

fn product(mask: &str, specs: &[String], certify: bool) -> CliResult<u8> {
    let mask = ProductMask::parse(mask)?;
    let graphs = specs
        .iter()
        .map(|s| read_graph(s, 0))
        .collect::<lapsep::Result<Vec<_>>>()?;
    let p = product_chain(mask, &graphs)?;
    let mut out = json!({
        "mask": mask.to_string(),
        "factors": graphs.iter().map(Graph::n).collect::<Vec<_>>(),
        "graph": graph_json(&p),
    });
    if let Ok(code) = to_graph6(&p) {
        out["graph6"] = json!(code);
    }
    if certify {
        let cert = product_laplacian_certificate(mask, &graphs)?;
        let check = verify_certificate(&cert, &laplacian_density(&p)?);
        if !check.is_valid() {
            return Err(Error::CertificateMismatch {
                residual: check.residual,
            }
            .into());
        }
        out["certificate"] = serde_json::to_value(cert.to_doc(Some(check.residual)))
            .expect("serializable certificate");
        eprintln!(
            "certificate: {} terms, residual {:.3e}, min weight {:.3e}",
            cert.terms.len(),
            check.residual,
            check.min_weight
        );
    }
    print_json(&out);
    Ok(0)
}

fn two_factor_dims(n: usize) -> Vec<DimVector> {
    (2..n)
        .filter(|&p| n.is_multiple_of(p) && p <= n / p)
        .filter_map(|p| DimVector::new(vec![p, n / p]).ok())
        .collect()
}

fn emit_lines(lines: &[ReportLine]) {
    for line in lines {
        print_json(line);
    }
}

fn census(
    experiment: Experiment,
    n: usize,
    input: Option<&PathBuf>,
    dims: &[String],
    always_search: bool,
) -> CliResult<u8> {
    let dims = dims
        .iter()
        .map(|d| DimVector::parse(d))
        .collect::<lapsep::Result<Vec<_>>>()?;
    match experiment {
        Experiment::N4 => {
            let report = census_n4()?;
            emit_lines(&report.lines);
            let sep = report.all_separable();
            eprintln!(
                "{} isomorphism classes ({} nontrivial); {} separable under every labeling: {}",
                report.total_classes,
                report.lines.len(),
                sep.len(),
                sep.iter().map(|l| l.graph6.as_str()).collect::<Vec<_>>().join(" ")
            );
        }
        Experiment::Bipartite => {
            let all = if dims.is_empty() { two_factor_dims(n) } else { dims };
            if all.is_empty() {
                return Err(Failure::Usage(format!("{n} has no factorization into factors >= 2")));
            }
            for d in &all {
                d.check_order(n)?;
                let lines = bipartite_census(d)?;
                emit_lines(&lines);
                let entangled = lines.iter().filter(|l| l.classification == "all_entangled").count();
                eprintln!("dims {d}: {entangled} of {} graphs entangled under every labeling", lines.len());
            }
        }
        Experiment::Regular9 => {
            let path = input.ok_or_else(|| Failure::Usage("--in FILE is required".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let graphs = parse_graph6_catalog(&text)?;
            let n = graphs.first().map(|(_, g)| g.n()).unwrap_or(9);
            if let Some((code, g)) = graphs.iter().find(|(_, g)| g.n() != n) {
                return Err(Error::InvalidGraph(format!(
                    "{code} has {} vertices, expected {n}",
                    g.n()
                ))
                .into());
            }
            let all = if dims.is_empty() {
                let mut all = two_factor_dims(n);
                if n == 8 {
                    all.push(DimVector::new(vec![2, 2, 2])?);
                }
                all
            } else {
                dims
            };
            for d in &all {
                let lines = noncomplete_experiment(&graphs, d, ExperimentOptions { always_search })?;
                emit_lines(&lines);
                let count = |c: &str| lines.iter().filter(|l| l.classification == c).count();
                let searched = lines
                    .iter()
                    .filter(|l| l.method.as_deref().is_some_and(|m| m.starts_with("search")))
                    .count();
                eprintln!(
                    "dims {d}: {} graphs, {} skipped, {} found ({} by search), {} without an entangling labeling",
                    lines.len(),
                    count("skipped"),
                    count("entangling_labeling_found"),
                    searched,
                    count("no_entangling_labeling")
                );
            }
        }
    }
    Ok(0)
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p = rng.random_range(0.15..0.85);
    let mut g = Graph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.random_bool(p) {
                g.set_weight(u, v, 1.0).expect("valid pair");
            }
        }
    }
    g
}

fn selftest(seed: u64, count: usize) -> CliResult<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices = [vec![2, 2], vec![2, 3], vec![2, 4], vec![3, 3], vec![2, 2, 2]];
    let mut checks = 0usize;
    let mut failures = Vec::new();
    for case in 0..count {
        let dims = DimVector::new(choices[rng.random_range(0..choices.len())].clone())?;
        let g = random_graph(&mut rng, dims.product());
        let mut check = |ok: bool, what: &str| {
            checks += 1;
            if !ok {
                failures.push(json!({ "case": case, "check": what, "graph6": to_graph6(&g).ok() }));
            }
        };
        for split in single_factor_splits(&dims) {
            let pt = partial_transpose_graph(&g, &dims, &split)?;
            check(
                partial_transpose_graph(&pt, &dims, &split)? == g,
                "partial transpose is an involution",
            );
            check(
                (pt.total_weight() - g.total_weight()).abs() < 1e-12,
                "partial transpose keeps the edge weight",
            );
        }
        if !g.is_trivial() {
            check(laplacian_density(&g).is_ok(), "normalized Laplacian is a density matrix");
            let id = VertexLabeling::identity(dims.clone());
            let v = verdict(&g, &dims, &id)?;
            check(
                v.status != Status::Entangled || v.witness.is_some() || v.ppt_violation.is_some(),
                "entangled verdicts carry a witness",
            );
        }
        if let Some((_, _, lab)) = construct_entangling_labeling(&g, &dims) {
            check(degree_entangled(&g, &lab)?, "constructed labeling violates the degree criterion");
        }
        let mask = ProductMask(rng.random());
        let h = random_graph(&mut rng, 3);
        let k = random_graph(&mut rng, 2);
        match product_laplacian_certificate(mask, &[h.clone(), k.clone()]) {
            Ok(cert) => {
                let p = product_chain(mask, &[h, k])?;
                check(
                    verify_certificate(&cert, &laplacian_density(&p)?).is_valid(),
                    "product certificate reconstructs the product Laplacian",
                );
            }
            Err(Error::ZeroTrace) => {}
            Err(e) => return Err(e.into()),
        }
    }
    print_json(&json!({
        "seed": seed,
        "cases": count,
        "checks": checks,
        "failures": failures,
    }));
    Ok(if failures.is_empty() { 0 } else { 5 })
}

fn run(cli: Cli) -> CliResult<u8> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(format!("--jobs: {e}")))?;
    }
    match &cli.command {
        Command::Analyze {
            graph,
            dims,
            labeling,
        } => analyze(graph, dims, labeling.as_ref()),
        Command::Search { graph, dims, mode } => search(graph, dims, *mode),
        Command::Product {
            mask,
            graphs,
            certify,
        } => product(mask, graphs, *certify),
        Command::Census {
            experiment,
            n,
            input,
            dims,
            always_search,
        } => census(*experiment, *n, input.as_ref(), dims, *always_search),
        Command::Selftest { seed, count } => selftest(*seed, *count),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
