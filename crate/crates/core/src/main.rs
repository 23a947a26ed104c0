use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lowcross::evaluation::{self, BenchDescriptor, BenchRow, CSV_HEADER};
use lowcross::generators::GenSpec;
use lowcross::io::{read_partition_file, read_setsystem_file, write_partition, write_setsystem};
use lowcross::partitioner::{default_d_candidates, run_partition, search_d, Algorithm, PartitionParams};
use lowcross::system::Provenance;
use lowcross::{crossing_number, validate_partition, Error, PotentialMode, Result, SetSystem};

#[derive(Parser)]
#[command(name = "lowcross", version, about = "Low-crossing partitions of finite set systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set system and write it in the set-system text format.
    Gen(GenArgs),
    /// Partition a set system into t parts.
    Partition(PartitionArgs),
    /// Report the crossing number and validity of a partition.
    Eval(EvalArgs),
    /// Compare a one-element-per-part sample against a uniform sample.
    Approx(ApproxArgs),
    /// Run an experiment descriptor (TOML) and write CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// grid, random-halfspaces, power-law, graph-neighborhood, projective-plane or circle-disks
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Neighborhood radius for graph families.
    #[arg(long)]
    r: Option<u32>,
    /// Order of the projective plane (a prime).
    #[arg(long)]
    order: Option<u64>,
    #[arg(long)]
    circles: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// SNAP edge list for graph-neighborhood.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value = "minweight")]
    algo: Algorithm,
    /// Potential exponent.
    #[arg(long, conflicts_with = "d_search")]
    d: Option<f64>,
    /// Try a geometric ladder of exponents and keep the best run.
    #[arg(long)]
    d_search: bool,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "practical")]
    mode: String,
    #[arg(long)]
    threads: Option<usize>,
    /// Family of the input system; selects the default w and labels the report.
    #[arg(long)]
    family: Option<String>,
    /// Partition file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV file receiving the run's report row.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Leave runtime_ms empty in the report so reruns are byte-identical.
    #[arg(long)]
    omit_runtime: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    partition: PathBuf,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    partition: PathBuf,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment descriptor.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn require<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| Error::arg(format!("family {family} requires --{flag}")))
}

fn gen_spec(a: &GenArgs) -> Result<GenSpec> {
    let family = a.family.as_str();
    let given = [
        ("n", a.n.is_some()),
        ("d", a.d.is_some()),
        ("m", a.m.is_some()),
        ("beta", a.beta.is_some()),
        ("r", a.r.is_some()),
        ("order", a.order.is_some()),
        ("circles", a.circles.is_some()),
        ("seed", a.seed.is_some()),
        ("in", a.input.is_some()),
    ];
    let allowed: &[&str] = match family {
        "grid" => &["n", "d", "seed"],
        "random-halfspaces" => &["n", "d", "m", "seed"],
        "power-law" => &["n", "beta", "r", "seed"],
        "graph-neighborhood" => &["in", "r"],
        "projective-plane" => &["order"],
        "circle-disks" => &["n", "circles", "m", "seed"],
        other => return Err(Error::arg(format!("unknown family {other}"))),
    };
    if let Some((flag, _)) = given.iter().find(|(f, set)| *set && !allowed.contains(f)) {
        return Err(Error::arg(format!("--{flag} does not apply to family {family}")));
    }
    let req = |v, flag| require(v, flag, family);
    Ok(match family {
        "grid" => GenSpec::Grid { n: req(a.n, "n")?, d: req(a.d, "d")?, seed: require(a.seed, "seed", family)? },
        "random-halfspaces" => GenSpec::RandomHalfspaces {
            n: req(a.n, "n")?,
            d: req(a.d, "d")?,
            m: req(a.m, "m")?,
            seed: require(a.seed, "seed", family)?,
        },
        "power-law" => GenSpec::PowerLaw {
            n: req(a.n, "n")?,
            beta: require(a.beta, "beta", family)?,
            r: a.r.unwrap_or(1),
            seed: require(a.seed, "seed", family)?,
        },
        "graph-neighborhood" => {
            GenSpec::GraphNeighborhood { path: require(a.input.clone(), "in", family)?, r: a.r.unwrap_or(1) }
        }
        "projective-plane" => GenSpec::ProjectivePlane { order: require(a.order, "order", family)? },
        _ => GenSpec::CircleDisks {
            n: req(a.n, "n")?,
            circles: req(a.circles, "circles")?,
            m: req(a.m, "m")?,
            seed: require(a.seed, "seed", family)?,
        },
    })
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let system = gen_spec(&a)?.generate()?;
    let mut out = output(a.out.as_deref())?;
    write_setsystem(&system, &mut out)?;
    out.flush()?;
    eprintln!("generated {} elements, {} ranges", system.n(), system.m());
    Ok(())
}

fn parse_mode(s: &str) -> Result<PotentialMode> {
    match s {
        "practical" => Ok(PotentialMode::Practical),
        "theoretical" => Ok(PotentialMode::Theoretical),
        other => Err(Error::arg(format!("unknown potential mode {other}"))),
    }
}

fn cmd_partition(a: PartitionArgs) -> Result<()> {
    if a.t == 0 {
        return Err(Error::arg("--t must be at least 1"));
    }
    let mut system = read_setsystem_file(&a.input)?;
    let family = a.family.clone().unwrap_or_else(|| "file".into());
    if a.family.is_some() {
        system = system.with_provenance(Provenance { family: family.clone(), ..Default::default() });
    }
    let d = match (a.d, a.d_search) {
        (Some(d), _) => d,
        (None, true) => 1.0,
        (None, false) => return Err(Error::arg("give --d or --d-search")),
    };
    let mut params = PartitionParams::new(a.t, d, a.algo, a.seed)?.with_mode(parse_mode(&a.mode)?);
    params.w = a.w;
    params.threads = a.threads;
    let run = if a.d_search {
        search_d(&system, &params, &default_d_candidates(system.n()))?.1
    } else {
        run_partition(&system, &params)?
    };

    let mut out = output(a.out.as_deref())?;
    write_partition(&run.partition, &mut out)?;
    out.flush()?;
    drop(out);
    if let Some(path) = &a.report {
        let mut row = BenchRow::from_report(&family, &run.report, None);
        if a.omit_runtime {
            row.runtime_ms = None;
        }
        std::fs::write(path, format!("{CSV_HEADER}\n{}\n", row.to_csv()))?;
    }
    let r = &run.report;
    let summary = format!(
        "kappa {}\nd {}\nviolations practical {} theoretical {}",
        r.kappa,
        r.d,
        r.total_violations_practical(),
        r.total_violations_theoretical()
    );
    // Keep stdout a clean partition file when no --out is given.
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn load_pair(input: &Path, partition: &Path) -> Result<(SetSystem, lowcross::Partition)> {
    Ok((read_setsystem_file(input)?, read_partition_file(partition)?))
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let (system, partition) = load_pair(&a.input, &a.partition)?;
    let problems = validate_partition(&system, &partition);
    let report = crossing_number(&system, &partition)?;
    println!("kappa {}", report.kappa);
    match report.argmax_range {
        Some(f) => println!("argmax_range {f}"),
        None => println!("argmax_range none"),
    }
    if problems.is_empty() {
        println!("valid yes");
    } else {
        println!("valid no");
        for p in problems {
            println!("violation {p}");
        }
    }
    Ok(())
}

fn cmd_approx(a: ApproxArgs) -> Result<()> {
    let (system, partition) = load_pair(&a.input, &a.partition)?;
    let by_parts = evaluation::eps_approx_from_partition(&system, &partition, a.seed)?;
    let uniform = evaluation::uniform_sample(&system, partition.t(), a.seed)?;
    println!("epsilon_partition {}", by_parts.epsilon);
    println!("epsilon_uniform {}", uniform.epsilon);
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.input)?;
    let desc = BenchDescriptor::from_toml(&text)?;
    let table = evaluation::run_bench(&desc)?;
    let mut out = output(a.out.as_deref())?;
    table.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Approx(a) => cmd_approx(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lowcross: {e}");
            ExitCode::FAILURE
        }
    }
}
