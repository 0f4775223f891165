//! `rsr`: preprocess, solve, benchmark, generate, verify and mutate grid maps.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rsr_core::harness::{
    generate, run_bench, sample_instances, summarize, verify, write_csv, GenKind, GenSpec, Instance,
};
use rsr_core::movingai::load_scenario;
use rsr_core::{
    astar_rsr, decompose, refine_path, repair_consistency_check, Cell, CellChange, Connectivity, DynamicMap,
    Error, GridMap, SearchOptions,
};

#[derive(Parser)]
#[command(name = "rsr", version, about = "Rectangle-based symmetry reduction for grid pathfinding")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a map and print rectangle and node counts.
    Preprocess(PreprocessArgs),
    /// Find one optimal path.
    Solve(SolveArgs),
    /// Time reduced against plain A* and write CSV rows.
    Bench(BenchArgs),
    /// Generate a synthetic map.
    Gen(GenArgs),
    /// Check reduced search against plain A* under every flag combination.
    Verify(VerifyArgs),
    /// Apply a script of obstacle changes and check the repaired state.
    Mutate(MutateArgs),
}

#[derive(Args)]
struct MapArgs {
    /// Map file in octile format.
    #[arg(long)]
    map: PathBuf,
    /// Grid connectivity: 4 or 8.
    #[arg(long, default_value = "8")]
    conn: Connectivity,
}

#[derive(Args)]
struct Flags {
    /// Disable perimeter reduction.
    #[arg(long)]
    no_pr: bool,
    /// Disable online pruning.
    #[arg(long)]
    no_op: bool,
}

impl Flags {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            online_pruning: !self.no_op,
            perimeter_reduction: !self.no_pr,
        }
    }
}

#[derive(Args)]
struct PreprocessArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Also print every rectangle.
    #[arg(long)]
    dump: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Start cell as `x,y`.
    #[arg(long, value_parser = parse_cell)]
    start: Cell,
    /// Goal cell as `x,y`.
    #[arg(long, value_parser = parse_cell)]
    goal: Cell,
    /// Print the path as single grid steps.
    #[arg(long)]
    refine: bool,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Scenario file; instances are sampled when absent.
    #[arg(long)]
    scen: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct GenArgs {
    /// `empty`, `random:<density>` or `rooms:<room>[:<door probability>]`.
    kind: GenKind,
    /// Side length of a square map.
    #[arg(long, conflicts_with_all = ["width", "height"])]
    size: Option<u32>,
    #[arg(long, requires = "height")]
    width: Option<u32>,
    #[arg(long, requires = "width")]
    height: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace every cell with a k-by-k block.
    #[arg(long, default_value_t = 1)]
    scale: u32,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Map file; a generated map is used when absent.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Generator for the map when `--map` is absent.
    #[arg(long, default_value = "random:0.3")]
    gen: GenKind,
    #[arg(long, default_value_t = 64)]
    size: u32,
    /// Check only this connectivity; both when absent.
    #[arg(long)]
    conn: Option<Connectivity>,
    #[arg(long, default_value_t = 500)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Damage the decomposition before checking.
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Args)]
struct MutateArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Script of `add x y` (block) and `del x y` (free) lines.
    #[arg(long)]
    changes: PathBuf,
    /// Random queries for the final consistency check.
    #[arg(long, default_value_t = 200)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl Fail {
    fn io(e: impl std::fmt::Display) -> Self {
        Fail(2, e.to_string())
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfBounds(_) | Error::Blocked(_) => Fail(3, e.to_string()),
            _ => Fail(2, e.to_string()),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::io(e)
    }
}

type CmdResult = Result<(), Fail>;

fn parse_cell(s: &str) -> Result<Cell, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let n = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("{v}: {e}"));
    Ok(Cell::new(n(x)?, n(y)?))
}

fn load_map(args: &MapArgs) -> Result<GridMap, Fail> {
    let map = GridMap::load(&args.map).map_err(|e| Fail(2, format!("{}: {e}", args.map.display())))?;
    Ok(map.with_conn(args.conn))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Fail> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Fail(2, format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn preprocess(args: PreprocessArgs) -> CmdResult {
    let map = load_map(&args.map)?;
    let t0 = Instant::now();
    let d = decompose(&map);
    let ms = t0.elapsed().as_secs_f64() * 1000.0;
    let s = d.stats();
    println!("rectangles {}", s.rectangles);
    println!("interior {}", s.interior);
    println!("pruned {}", s.pruned);
    println!("active {}", s.active);
    println!("preprocess_ms {ms:.3}");
    if args.dump {
        print!("{}", d.dump());
    }
    Ok(())
}

fn solve(args: SolveArgs) -> CmdResult {
    let map = load_map(&args.map)?;
    for c in [args.start, args.goal] {
        if !map.contains(c) || !map.is_free(c) {
            return Err(Fail(3, format!("endpoint {c} is blocked or outside the map")));
        }
    }
    let d = decompose(&map);
    let Some(path) = astar_rsr(&map, &d, args.start, args.goal, args.flags.options())? else {
        println!("no path");
        return Ok(());
    };
    println!("cost {:.6}", path.cost);
    println!("expanded {}", path.stats.expanded);
    println!("generated {}", path.stats.generated);
    println!("elapsed_us {}", path.stats.elapsed.as_micros());
    if args.refine {
        let steps = refine_path(&path, &map)?;
        let cells: Vec<String> = steps.nodes.iter().map(|c| c.to_string()).collect();
        println!("path {}", cells.join(" "));
    }
    Ok(())
}

fn bench(args: BenchArgs) -> CmdResult {
    let map = load_map(&args.map)?;
    let name = args
        .map
        .map
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "map".into());
    let instances: Vec<Instance> = match &args.scen {
        Some(p) => load_scenario(p)
            .map_err(|e| Fail(2, format!("{}: {e}", p.display())))?
            .into_iter()
            .map(|e| Instance {
                start: e.start,
                goal: e.goal,
            })
            .collect(),
        None => sample_instances(&map, args.instances, args.seed),
    };
    let d = decompose(&map);
    let records = run_bench(&name, &map, &d, &instances, args.flags.options()).map_err(|e| match e {
        Error::Invalid(msg) => Fail(1, msg),
        other => other.into(),
    })?;
    let mut out = output(args.out.as_deref())?;
    write_csv(&records, &mut out)?;
    out.flush()?;
    let s = summarize(&records);
    eprintln!(
        "{} queries, {} same-rectangle, mean expanded {:.1} vs {:.1}, speedup {:.2}",
        s.queries, s.same_rect, s.mean_expanded_rsr, s.mean_expanded_plain, s.speedup
    );
    Ok(())
}

fn gen(args: GenArgs) -> CmdResult {
    let (w, h) = match (args.size, args.width, args.height) {
        (Some(s), _, _) => (s, s),
        (None, Some(w), Some(h)) => (w, h),
        _ => return Err(Fail(2, "give --size or --width and --height".into())),
    };
    let spec = GenSpec::new(w, h, args.kind).seed(args.seed).scale(args.scale);
    let map = generate(&spec)?;
    let mut out = output(args.out.as_deref())?;
    out.write_all(map.to_map_string().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> CmdResult {
    let base = match &args.map {
        Some(p) => GridMap::load(p).map_err(|e| Fail(2, format!("{}: {e}", p.display())))?,
        None => generate(&GenSpec::new(args.size, args.size, args.gen).seed(args.seed))?,
    };
    let conns = match args.conn {
        Some(c) => vec![c],
        None => vec![Connectivity::Four, Connectivity::Eight],
    };
    let mut failed = false;
    for conn in conns {
        let map = base.clone().with_conn(conn);
        let mut d = decompose(&map);
        if args.corrupt {
            d.corrupt_for_testing();
        }
        let inst = sample_instances(&map, args.instances, args.seed);
        let report = verify(&map, &d, &inst, &SearchOptions::matrix())?;
        println!("== conn {conn} ==");
        println!("instances {}", inst.len());
        println!("checked {}", report.checked);
        if let Some(v) = &report.structure {
            println!("structure FAIL: {v}");
        }
        for m in &report.mismatches {
            println!("mismatch {m}");
        }
        for i in &report.oracle_disagreements {
            println!("oracle disagreement {} -> {}", i.start, i.goal);
        }
        println!("result {}", if report.ok() { "PASS" } else { "FAIL" });
        failed |= !report.ok();
    }
    if failed {
        Err(Fail(1, "verification failed".into()))
    } else {
        Ok(())
    }
}

fn parse_script(text: &str) -> Result<Vec<CellChange>, Fail> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Fail(4, format!("line {}: expected `add x y` or `del x y`", i + 1));
        let f: Vec<&str> = line.split_whitespace().collect();
        let [op, x, y] = f.as_slice() else {
            return Err(bad());
        };
        let c = Cell::new(x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?);
        out.push(match *op {
            "add" => CellChange::Block(c),
            "del" => CellChange::Free(c),
            _ => return Err(bad()),
        });
    }
    Ok(out)
}

fn mutate(args: MutateArgs) -> CmdResult {
    let map = load_map(&args.map)?;
    let text = std::fs::read_to_string(&args.changes)
        .map_err(|e| Fail(2, format!("{}: {e}", args.changes.display())))?;
    let changes = parse_script(&text)?;
    let mut dm = DynamicMap::new(map);
    for (i, ch) in changes.iter().enumerate() {
        let t0 = Instant::now();
        dm.apply(*ch).map_err(|e| Fail(4, format!("change {}: {e}", i + 1)))?;
        let us = t0.elapsed().as_micros();
        let (op, c) = match ch {
            CellChange::Block(c) => ("add", c),
            CellChange::Free(c) => ("del", c),
        };
        println!("change {} {op} {} {} {us}us", i + 1, c.x, c.y);
    }
    let pairs: Vec<(Cell, Cell)> = sample_instances(dm.map(), args.queries, args.seed)
        .into_iter()
        .map(|i| (i.start, i.goal))
        .collect();
    match repair_consistency_check(dm.map(), dm.decomposition(), &pairs)? {
        Ok(()) => {
            println!("consistent: {} changes, {} queries", changes.len(), pairs.len());
            Ok(())
        }
        Err(msg) => Err(Fail(1, format!("inconsistent: {msg}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Preprocess(a) => preprocess(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => gen(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Mutate(a) => mutate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
