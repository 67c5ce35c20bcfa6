use std::fs::{self, File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use walker_core::rational::{parse_rational, pq};
use walker_core::render::{self, build_artifacts};
use walker_core::store::restore;
use walker_core::{
    enumerate_partitions, open_store, verify_trace, AccessPoint, BlockAddress, BlockStore,
    ConstructionConfig, ConstructionResult, LabeledGraph, Mode, PartitionTable, Point2, Resolution,
    Trace,
};

/// Walker constructor: build the figure, query its graph, and store data in its partitions.
#[derive(Parser)]
#[command(name = "walker", version)]
struct Cli {
    /// State directory written by `build` and read by the other commands.
    #[arg(long, global = true, default_value = ".")]
    dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the construction and write trace, graph, partition table and figures.
    Build {
        /// Block resolution as p or p/q.
        #[arg(long, default_value = "1")]
        theta: String,
        /// Output directory (defaults to --dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render one figure as SVG.
    Render {
        #[arg(long, value_enum)]
        figure: Figure,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Structure graph queries.
    Graph {
        #[command(subcommand)]
        op: GraphOp,
    },
    /// Block store operations.
    Store {
        /// Store log path; the manifest sits next to it with a `.manifest` suffix.
        #[arg(long)]
        store: Option<PathBuf>,
        #[command(subcommand)]
        op: StoreOp,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Construction,
    Partitions,
    Graph,
}

#[derive(Subcommand)]
enum GraphOp {
    /// Breadth-first order from a vertex.
    Bfs { start: String },
    /// Depth-first order from a vertex.
    Dfs { start: String },
    /// Hamiltonian path, or `none`.
    Ham,
    /// Minimum dominating set.
    Dom,
    /// Shortest path between two vertices.
    Path { from: String, to: String },
}

#[derive(Subcommand)]
enum StoreOp {
    /// Ingest a payload and print its address.
    Put {
        /// Payload text; use --file for binary data.
        payload: Option<String>,
        #[arg(long, conflicts_with = "payload")]
        file: Option<PathBuf>,
    },
    /// Print the payload stored at `i,j,k:x`.
    Get { address: String },
    /// Print every address whose payload contains the pattern.
    Find { pattern: String },
    /// Print the manifest.
    Manifest,
    /// Halve θ for every partition.
    Refine,
}

enum Failure {
    User(String),
    Internal(String),
}

type Outcome = Result<Vec<u8>, Failure>;

fn user(e: impl ToString) -> Failure {
    Failure::User(e.to_string())
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::User(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(&out)
                .and_then(|()| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Build { theta, out } => build(&theta, out.as_deref().unwrap_or(&cli.dir)),
        Command::Render { figure, svg } => {
            let state = State::load(&cli.dir)?;
            write_file(&svg, state.render(figure).as_bytes())?;
            Ok(Vec::new())
        }
        Command::Graph { op } => graph(&State::load(&cli.dir)?, op),
        Command::Store { store, op } => {
            let path = store.unwrap_or_else(|| cli.dir.join("store.log"));
            store_cmd(&cli.dir, &path, op)
        }
    }
}

fn parse_theta(s: &str) -> Result<Resolution, Failure> {
    let r = parse_rational(s).map_err(|e| user(format!("bad theta: {e}")))?;
    Resolution::new(r).map_err(user)
}

struct State {
    config: ConstructionConfig,
    theta: Resolution,
    result: ConstructionResult,
    trace: Trace,
    graph: LabeledGraph,
    table: PartitionTable,
}

impl State {
    fn new(config: ConstructionConfig, theta: Resolution) -> Result<State, Failure> {
        let internal = |e: &dyn std::fmt::Display| Failure::Internal(e.to_string());
        let (result, trace) = walker_core::run_construction(&config).map_err(|e| internal(&e))?;
        let arr = result.arrangement().map_err(|e| internal(&e))?;
        let verdict = verify_trace(&trace, &arr).map_err(|e| internal(&e))?;
        if !verdict.accepted() {
            return Err(Failure::Internal(format!(
                "construction trace rejected: {verdict:?}"
            )));
        }
        let graph = LabeledGraph::from_walker(&result).map_err(|e| internal(&e))?;
        let table = enumerate_partitions(&arr, &result.labeled_points).map_err(|e| internal(&e))?;
        Ok(State {
            config,
            theta,
            result,
            trace,
            graph,
            table,
        })
    }

    fn load(dir: &Path) -> Result<State, Failure> {
        let path = dir.join("build.conf");
        let text = fs::read_to_string(&path).map_err(|_| {
            user(format!(
                "no build state in {}; run `walker build` first",
                dir.display()
            ))
        })?;
        let bad = |k: &str| user(format!("{}: bad or missing `{k}`", path.display()));
        let get = |k: &str| {
            text.lines()
                .find_map(|l| l.strip_prefix(k).and_then(|r| r.strip_prefix('=')))
                .ok_or_else(|| bad(k))
        };
        let (x, y) = get("anchor")?
            .split_once(',')
            .ok_or_else(|| bad("anchor"))?;
        let anchor = Point2::new(
            parse_rational(x).map_err(|_| bad("anchor"))?,
            parse_rational(y).map_err(|_| bad("anchor"))?,
        );
        let unit = parse_rational(get("scale")?).map_err(|_| bad("scale"))?;
        let theta = parse_theta(get("theta")?)?;
        let config = ConstructionConfig {
            anchor,
            unit,
            theta: theta.theta().clone(),
        };
        State::new(config, theta)
    }

    fn conf(&self) -> String {
        format!(
            "anchor={}\nscale={}\ntheta={}\n",
            self.config.anchor,
            pq(&self.config.unit),
            self.theta
        )
    }

    fn render(&self, figure: Figure) -> String {
        match figure {
            Figure::Construction => render::construction(&self.result),
            Figure::Partitions => render::partitions(&self.result, &self.table, &self.theta),
            Figure::Graph => render::graph_view(&self.result, &self.graph),
        }
    }

    fn fresh_store(&self) -> Result<BlockStore, Failure> {
        open_store(&self.result, self.theta.clone(), AccessPoint::default())
            .map_err(|e| Failure::Internal(e.to_string()))
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(io_err(path))
}

fn build(theta: &str, out: &Path) -> Outcome {
    let theta = parse_theta(theta)?;
    let config = ConstructionConfig {
        theta: theta.theta().clone(),
        ..ConstructionConfig::default()
    };
    let state = State::new(config, theta)?;
    fs::create_dir_all(out).map_err(io_err(out))?;
    let mut files = vec![("build.conf", state.conf())];
    files.extend(
        build_artifacts(&state.result, &state.trace, &state.theta)
            .map_err(|e| Failure::Internal(e.to_string()))?,
    );
    let mut report = String::new();
    for (name, body) in files {
        write_file(&out.join(name), body.as_bytes())?;
        report.push_str(&format!("wrote {name}\n"));
    }
    Ok(report.into_bytes())
}

fn graph(state: &State, op: GraphOp) -> Outcome {
    let g = &state.graph;
    let join =
        |ls: &[walker_core::Label]| ls.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ");
    let text = match op {
        GraphOp::Bfs { start } => traversal(g, &start, Mode::BreadthFirst)?,
        GraphOp::Dfs { start } => traversal(g, &start, Mode::DepthFirst)?,
        GraphOp::Ham => match g.hamiltonian_path() {
            Some(p) => format!("{}\n", join(&p)),
            None => "none\n".into(),
        },
        GraphOp::Dom => {
            let d = g.min_dominating_set().map_err(user)?;
            let names: Vec<&str> = d.iter().map(|l| l.as_str()).collect();
            format!("size={} {{{}}}\n", d.len(), names.join(","))
        }
        GraphOp::Path { from, to } => {
            format!("{}\n", join(&g.shortest_path(&from, &to).map_err(user)?))
        }
    };
    Ok(text.into_bytes())
}

fn traversal(g: &LabeledGraph, start: &str, mode: Mode) -> Result<String, Failure> {
    let rep = g.traverse(start, mode).map_err(user)?;
    let order: Vec<&str> = rep.order.iter().map(|l| l.as_str()).collect();
    Ok(format!(
        "{}\nnode_inspections={} edge_inspections={}\n",
        order.join(" "),
        rep.node_inspections,
        rep.edge_inspections
    ))
}

fn manifest_path(log: &Path) -> PathBuf {
    let mut s = log.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

/// Loads the store behind an already locked log file.
fn load_store(dir: &Path, log: &Path, file: &mut File) -> Result<(BlockStore, Vec<u8>), Failure> {
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes).map_err(io_err(log))?;
    if bytes.is_empty() {
        return Ok((State::load(dir)?.fresh_store()?, bytes));
    }
    let mpath = manifest_path(log);
    let manifest = fs::read_to_string(&mpath).map_err(io_err(&mpath))?;
    let store = restore(&manifest, &bytes).map_err(user)?;
    Ok((store, bytes))
}

fn save_store(log: &Path, file: &mut File, old: &[u8], store: &BlockStore) -> Result<(), Failure> {
    let new = store.to_log();
    if !new.starts_with(old) {
        return Err(Failure::Internal("store log would be rewritten".into()));
    }
    file.write_all(&new[old.len()..]).map_err(io_err(log))?;
    file.sync_data().map_err(io_err(log))?;
    let mpath = manifest_path(log);
    let tmp = mpath.with_extension("manifest.tmp");
    write_file(&tmp, store.export_manifest().to_string().as_bytes())?;
    fs::rename(&tmp, &mpath).map_err(io_err(&mpath))
}

fn store_cmd(dir: &Path, log: &Path, op: StoreOp) -> Outcome {
    let writes = matches!(op, StoreOp::Put { .. } | StoreOp::Refine);
    if writes {
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(log)
            .map_err(io_err(log))?;
        file.lock().map_err(io_err(log))?;
        let (mut store, old) = load_store(dir, log, &mut file)?;
        let out = match op {
            StoreOp::Put {
                payload,
                file: input,
            } => {
                let bytes = match (payload, input) {
                    (Some(p), None) => p.into_bytes(),
                    (None, Some(f)) => fs::read(&f).map_err(io_err(&f))?,
                    _ => return Err(user("put needs a payload or --file")),
                };
                let addr = store.ingest(&bytes).map_err(|e| match e {
                    walker_core::StoreError::CapacityExhausted => {
                        user(format!("{e} (run `walker store refine`)"))
                    }
                    e => user(e),
                })?;
                format!("{addr}\n")
            }
            _ => {
                store.refine_all();
                format!("theta={} capacity={}\n", store.theta(), store.capacity())
            }
        };
        save_store(log, &mut file, &old, &store)?;
        return Ok(out.into_bytes());
    }

    let (store, _) = match File::open(log) {
        Ok(mut file) => {
            file.lock_shared().map_err(io_err(log))?;
            load_store(dir, log, &mut file)?
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            (State::load(dir)?.fresh_store()?, Vec::new())
        }
        Err(e) => return Err(io_err(log)(e)),
    };
    match op {
        StoreOp::Get { address } => {
            let addr: BlockAddress = address.parse().map_err(user)?;
            let mut out = store.read(&addr).map_err(user)?.payload.clone();
            out.push(b'\n');
            Ok(out)
        }
        StoreOp::Find { pattern } => Ok(store
            .search(pattern.as_bytes())
            .iter()
            .map(|a| format!("{a}\n"))
            .collect::<String>()
            .into_bytes()),
        StoreOp::Manifest => Ok(store.export_manifest().to_string().into_bytes()),
        StoreOp::Put { .. } | StoreOp::Refine => unreachable!("handled above"),
    }
}
