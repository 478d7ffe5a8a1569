use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use planemu::constructions::{
    apex_insertion, build_named, figure2_asset, figure3_asset, figure3_base, verify_asset, ConstructionError,
    FigureAsset,
};
use planemu::covers::{is_projective_planar, quotient_by_involution, CoverError, VoltageFile};
use planemu::embedding::EmbeddingJson;
use planemu::formats::{
    asset_to_string, embedding_from_json, embedding_to_json, load_asset, load_graph, load_involution, load_map,
    read_file, to_dot, to_graphml, FormatError, MapFile,
};
use planemu::search::{
    find_emulator_labeling, refute_small_hosts, SearchError, SearchLimits, SearchOutcome, SearchProblem,
};
use planemu::{test_planarity, Graph, GraphMap, MapClass, VertexId};

#[derive(Parser)]
#[command(name = "planemu", version, about = "Graph covers, planar emulators and projective planarity")]
struct Cli {
    /// Worker threads for parallel enumeration (advisory).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Graphml,
}

#[derive(Clone, Copy, ValueEnum)]
enum Require {
    Emulator,
    Cover,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named graph (cube, octahedron, k45_minus_4k2, k1222,
    /// cone(<name>)) or a bundled asset (figure2, figure3, figure3-base).
    Build {
        name: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Classify a map file; fails unless it is an emulator (or a cover).
    VerifyMap {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "emulator")]
        require: Require,
    },
    /// Re-verify an asset file.
    VerifyAsset { file: PathBuf },
    /// Planarity test with a spherical embedding when planar.
    Planarity { graph: PathBuf },
    /// Faces of an embedding file, or of the planar embedding of a graph.
    Faces { file: PathBuf },
    /// Derived double cover of a voltage file.
    DoubleCover { file: PathBuf },
    /// Projective-planarity decision by double-cover enumeration.
    Projective { graph: PathBuf },
    /// Quotient of an asset by its involution, or of a graph by
    /// `--involution`.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        involution: Option<PathBuf>,
    },
    /// Insert apex copies into the shaded faces of an asset.
    ApexInsert {
        file: PathBuf,
        /// Target graph including the apex as its last vertex.
        #[arg(long)]
        target: Option<String>,
    },
    /// Search for an emulator labeling of a host onto a target.
    Search {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// JSON object {"<host id>": <target id>}.
        #[arg(long)]
        partial: Option<PathBuf>,
        #[arg(long)]
        nodes: Option<u64>,
    },
    /// Search every connected planar host up to a size.
    Refute {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        max_vertices: usize,
        #[arg(long)]
        nodes: Option<u64>,
    },
    /// Export a graph or asset graph.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
}

enum Failure {
    /// Exit 1: the input was read but failed a check.
    Verification { witness: Value, message: String },
    /// Exit 2: the input could not be read or used.
    Usage(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn verification(witness: Value, message: impl Into<String>) -> Failure {
    Failure::Verification { witness, message: message.into() }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable output"));
}

fn render(g: &Graph, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(g).unwrap() + "\n",
        Format::Dot => to_dot(g),
        Format::Graphml => to_graphml(g),
    }
}

fn limits(nodes: Option<u64>) -> SearchLimits {
    nodes.map_or_else(SearchLimits::default, |nodes| SearchLimits { nodes })
}

/// Construction errors that mean the asset is wrong rather than unreadable.
fn construction_failure(e: ConstructionError) -> Failure {
    let witness = match &e {
        ConstructionError::NotEmulator(f) => serde_json::to_value(f).unwrap(),
        ConstructionError::Map(planemu::MapError::NotHomomorphism(f)) => serde_json::to_value(f).unwrap(),
        ConstructionError::UnknownName(_) | ConstructionError::Graph(_) => return usage(e),
        _ => json!({ "error": e.to_string() }),
    };
    verification(witness, e.to_string())
}

fn builtin_asset(name: &str) -> Option<Result<FigureAsset, ConstructionError>> {
    match name {
        "figure2" => Some(figure2_asset()),
        "figure3" => Some(figure3_asset()),
        "figure3-base" => Some(figure3_base()),
        _ => None,
    }
}

fn read_graph_arg(arg: &str) -> Result<Graph, Failure> {
    Ok(load_graph(Path::new(arg))?)
}

fn map_report(m: &GraphMap) -> Value {
    let c = m.classify();
    json!({
        "classification": c.class,
        "witness": c.witness.map(|w| w.named(m)),
        "fiber_sizes": m.fiber_sizes(),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        // a second initialization only fails when a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    match cli.command {
        Command::Build { name, format } => {
            if let Some(asset) = builtin_asset(&name) {
                let asset = asset.map_err(usage)?;
                match format {
                    Format::Json => print!("{}", asset_to_string(&asset)),
                    other => print!("{}", render(&asset.graph, other)),
                }
                eprintln!("{name}: {} vertices, {} edges", asset.graph.vertex_count(), asset.graph.edge_count());
            } else {
                let g = build_named(&name).map_err(usage)?;
                print!("{}", render(&g, format));
                eprintln!("{name}: {} vertices, {} edges", g.vertex_count(), g.edge_count());
            }
        }
        Command::VerifyMap { file, require } => {
            let m = load_map(&file)?;
            let report = map_report(&m);
            print_json(&report);
            let class = m.classify();
            let ok = match require {
                Require::Cover => class.class == MapClass::Cover,
                Require::Emulator => matches!(class.class, MapClass::Cover | MapClass::ProperEmulator),
            };
            eprintln!("{}", class.class);
            if !ok {
                // the classification witness explains the first missing property
                let failure = class.witness.expect("failing map has a witness");
                let wanted = match require {
                    Require::Cover => "cover",
                    Require::Emulator => "emulator",
                };
                return Err(verification(serde_json::to_value(failure).unwrap(), format!("not a {wanted}")));
            }
        }
        Command::VerifyAsset { file } => {
            let asset = load_asset(&file)?;
            let report = verify_asset(&asset).map_err(construction_failure)?;
            print_json(&report);
            eprintln!(
                "{}, {}, {} vertices",
                report.classification,
                if report.planar { "planar" } else { "non-planar" },
                report.vertices
            );
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
        }
        Command::Planarity { graph } => {
            let g = read_graph_arg(graph.to_str().unwrap_or_default())?;
            let r = test_planarity(&g);
            print_json(&json!({
                "planar": r.planar,
                "embedding": r.embedding.as_ref().map(embedding_to_json),
            }));
            eprintln!("{}", if r.planar { "planar" } else { "not planar" });
        }
        Command::Faces { file } => {
            let text = if file.to_string_lossy().starts_with("builtin:") { String::new() } else { read_file(&file)? };
            let emb = match serde_json::from_str::<EmbeddingJson>(&text) {
                Ok(e) => embedding_from_json(e)?,
                Err(_) if text.contains("\"map\"") => match load_asset(&file)?.embedding {
                    Some(e) => e,
                    None => return Err(usage("asset has no embedding")),
                },
                Err(_) => {
                    let g = load_graph(&file)?;
                    match test_planarity(&g).embedding {
                        Some(e) => e,
                        None => return Err(verification(json!({ "planar": false }), "graph is not planar")),
                    }
                }
            };
            let faces = emb.faces();
            let genus = emb.euler_genus().map_err(usage)?;
            print_json(&json!({ "faces": faces, "euler_genus": genus }));
            eprintln!("{} faces, euler genus {genus}", faces.len());
        }
        Command::DoubleCover { file } => {
            let vf: VoltageFile = serde_json::from_str(&read_file(&file)?).map_err(FormatError::from)?;
            let va = vf.into_assignment().map_err(usage)?;
            let (cover, projection) = va.derive_double_cover();
            print_json(&json!({ "cover": cover, "projection": MapFile::from_map(&projection) }));
            eprintln!("double cover: {} vertices, {} edges", cover.vertex_count(), cover.edge_count());
        }
        Command::Projective { graph } => {
            let g = read_graph_arg(graph.to_str().unwrap_or_default())?;
            let d = is_projective_planar(&g).map_err(usage)?;
            let certificate = d.certificate.as_ref().map(|c| {
                json!({
                    "voltage": VoltageFile::from_assignment(&c.voltage),
                    "cover": c.cover,
                    "embedding": embedding_to_json(&c.embedding),
                })
            });
            print_json(&json!({
                "projective_planar": d.projective_planar,
                "cycle_rank": d.cycle_rank,
                "assignments_checked": d.assignments_checked,
                "certificate": certificate,
            }));
            if d.projective_planar {
                eprintln!("projective-planar (certificate after {} assignments)", d.assignments_checked);
            } else {
                eprintln!(
                    "not projective-planar ({} of {} assignments checked)",
                    d.assignments_checked,
                    1u64 << d.cycle_rank
                );
            }
        }
        Command::Quotient { file, involution } => {
            let (graph, inv, map) = match involution {
                Some(path) => {
                    let g = load_graph(&file)?;
                    let inv = load_involution(&path, &g)?;
                    (g, inv, None)
                }
                None => {
                    let asset = load_asset(&file)?;
                    let inv = asset.involution.ok_or_else(|| usage("asset has no involution; pass --involution"))?;
                    (asset.graph, inv, Some(asset.map))
                }
            };
            let q = quotient_by_involution(&graph, &inv, map.as_ref()).map_err(|e| match e {
                CoverError::PairingLength { .. } | CoverError::BadKey(_) => usage(e),
                other => verification(json!({ "error": other.to_string() }), other.to_string()),
            })?;
            let induced = q.induced.as_ref().map(|m| (MapFile::from_map(m), map_report(m)));
            print_json(&json!({
                "graph": q.graph,
                "projection": MapFile::from_map(&q.projection),
                "induced": induced.as_ref().map(|i| &i.0),
                "induced_report": induced.as_ref().map(|i| &i.1),
            }));
            eprintln!("quotient: {} vertices, {} edges", q.graph.vertex_count(), q.graph.edge_count());
            if let Some(m) = &q.induced {
                if let Err(f) = m.verify_emulator().map_err(usage)? {
                    return Err(verification(serde_json::to_value(f).unwrap(), "induced map is not an emulator"));
                }
            }
        }
        Command::ApexInsert { file, target } => {
            let asset = load_asset(&file)?;
            let target_name =
                target.or_else(|| asset.meta.insertion_target.clone()).ok_or_else(|| usage("no target given"))?;
            let t = read_graph_arg(&target_name).or_else(|_| build_named(&target_name).map_err(usage))?;
            let apex = VertexId::from(t.vertex_count().checked_sub(1).ok_or_else(|| usage("empty target"))?);
            let out = apex_insertion(&asset, &t, apex).map_err(construction_failure)?;
            print!("{}", asset_to_string(&out));
            eprintln!("apex insertion: {} vertices", out.graph.vertex_count());
        }
        Command::Search { host, target, partial, nodes } => {
            let host = load_graph(&host)?;
            let target = load_graph(&target)?;
            let mut problem = SearchProblem::new(host, target);
            problem.limits = limits(nodes);
            if let Some(p) = partial {
                let raw: BTreeMap<String, VertexId> =
                    serde_json::from_str(&read_file(&p)?).map_err(FormatError::from)?;
                for (k, t) in raw {
                    let v = k.parse().map(VertexId).map_err(|_| usage(format!("bad key {k:?}")))?;
                    problem.partial.insert(v, t);
                }
            }
            let outcome = find_emulator_labeling(&problem).map_err(usage)?;
            match &outcome {
                SearchOutcome::Found { map, .. } => print_json(&MapFile::from_map(map)),
                other => print_json(&json!({ "outcome": other.label(), "nodes": other.nodes() })),
            }
            eprintln!("{} after {} nodes", outcome.label(), outcome.nodes());
        }
        Command::Refute { target, max_vertices, nodes } => {
            let target = load_graph(&target)?;
            match refute_small_hosts(&target, max_vertices, limits(nodes)) {
                Ok(report) => {
                    print_json(&report);
                    eprintln!(
                        "{} hosts checked, {} with an emulator labeling",
                        report.hosts_checked, report.hosts_with_emulator
                    );
                }
                Err(e @ SearchError::BudgetExceeded(_)) => {
                    return Err(verification(json!({ "error": e.to_string() }), e.to_string()))
                }
                Err(e) => return Err(usage(e)),
            }
        }
        Command::Export { file, format } if file.to_string_lossy().starts_with("builtin:") => {
            print!("{}", render(&load_graph(&file)?, format));
        }
        Command::Export { file, format } => {
            let text = read_file(&file)?;
            #[derive(Deserialize)]
            struct Probe {
                map: Option<Value>,
            }
            let probe: Probe = serde_json::from_str(&text).map_err(FormatError::from)?;
            let g = if probe.map.is_some() {
                load_asset(&file)?.graph
            } else {
                serde_json::from_str(&text).map_err(FormatError::from)?
            };
            print!("{}", render(&g, format));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification { witness, message }) => {
            eprintln!("{}", serde_json::to_string(&witness).unwrap());
            eprintln!("verification failed: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
