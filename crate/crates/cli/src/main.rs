//! `av321`: sampling, enumeration, bijection and verification experiments
//! for 321-avoiding permutations and plane trees.

use std::path::PathBuf;
use std::process::ExitCode;

use av321::dist::{tv_distance, EmpiricalDist, Pmf};
use av321::experiment::{fixed_point_batch, run_batch, try_run_batch, DEFAULT_STREAMS};
use av321::perm::{enumerate_avoiders, pattern_from_digits};
use av321::report::{convergence_table, write_report, ConvergencePoint, Metadata, Table};
use av321::sample::{
    gw_tree_truncated, kesten_truncated, sample_limit_process, uniform_avoider_321, uniform_tree,
};
use av321::stats::{exact_fp_distribution, midrange_fp_probability, Proportion, Z_95};
use av321::{acceptance, perm_to_tree, tree_to_perm, Error, Permutation, PlaneTree, RngStream};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_OVERFLOW: u8 = 3;

#[derive(Parser)]
#[command(
    name = "av321",
    version,
    about = "Fixed points of 321-avoiding permutations and plane trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Uniform samples from Av_n(321), one permutation per line.
    SamplePerm {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        mc: MonteCarlo,
        #[command(flatten)]
        out: Output,
    },
    /// Random plane trees as Dyck words.
    SampleTree {
        /// Vertex count (uniform model only).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = TreeModel::Uniform)]
        model: TreeModel,
        /// Truncation height (kesten: required; gw: optional).
        #[arg(long)]
        height: Option<usize>,
        #[command(flatten)]
        mc: MonteCarlo,
        #[command(flatten)]
        out: Output,
    },
    /// Draws of the limiting front/back fixed-point measures.
    SampleLimit {
        #[command(flatten)]
        mc: MonteCarlo,
        #[command(flatten)]
        out: Output,
    },
    /// Applies the tree/permutation bijection to one object.
    Biject {
        #[arg(long, value_enum)]
        direction: Direction,
        /// A Dyck word (tree-to-perm) or space-separated permutation (perm-to-tree).
        #[arg(long = "in")]
        input: String,
    },
    /// Lists Av_n(pattern) in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Pattern::P321)]
        pattern: Pattern,
        #[command(flatten)]
        out: Output,
    },
    /// Exact law of the number of fixed points over Av_n(pattern).
    ExactDist {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Pattern::P321)]
        pattern: Pattern,
        #[command(flatten)]
        out: Output,
    },
    /// Runs the acceptance suite; exits 1 if any criterion fails.
    Verify,
    /// Total variation between empirical fixed-point counts and their limit law.
    Convergence {
        /// Comma-separated sizes, e.g. 50,200,1000.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Stat::Front)]
        stat: Stat,
        /// Fail (exit 1) if the TV at the largest n exceeds this.
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        mc: MonteCarlo,
        #[command(flatten)]
        out: Output,
    },
    /// Probability that some fixed point lies in [a, b].
    Midrange {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Fail (exit 1) if the estimate exceeds this.
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        mc: MonteCarlo,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct MonteCarlo {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_STREAMS, value_parser = clap::value_parser!(u64).range(1..))]
    streams: u64,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeModel {
    Uniform,
    Kesten,
    Gw,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    TreeToPerm,
    PermToTree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pattern {
    #[value(name = "321")]
    P321,
    #[value(name = "132")]
    P132,
    #[value(name = "213")]
    P213,
}

impl Pattern {
    fn digits(self) -> &'static str {
        match self {
            Pattern::P321 => "321",
            Pattern::P132 => "132",
            Pattern::P213 => "213",
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    Front,
    Back,
    Total,
}

enum Failure {
    Usage(String),
    Overflow(String),
    Verify(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Overflow { .. } => Failure::Overflow(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Overflow(m)) => {
            eprintln!("overflow: {m}");
            ExitCode::from(EXIT_OVERFLOW)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}

fn meta(command: &str, n: Option<usize>, mc: Option<&MonteCarlo>) -> Metadata {
    let mut m = Metadata::new(command);
    m.n = n.map(|n| n as u64);
    if let Some(mc) = mc {
        m.seed = Some(mc.seed);
        m.streams = Some(mc.streams);
        m.samples = Some(mc.count);
    }
    m
}

fn emit(out: &Output, meta: &Metadata, body: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => write_report(path, meta, body).map_err(|e| Failure::Io(e.to_string())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json_lines(),
    }
}

/// One object per line: its text form for csv, a JSON value for json.
fn lines<T>(
    items: &[T],
    format: Format,
    text: impl Fn(&T) -> String,
    json: impl Fn(&T) -> String,
) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&if format == Format::Json {
            json(it)
        } else {
            text(it)
        });
        s.push('\n');
    }
    s
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::SamplePerm { n, mc, out } => {
            let perms = try_run_batch(mc.seed, mc.streams, mc.count, |rng| {
                uniform_avoider_321(n, rng)
            })?;
            let body = lines(&perms, out.format, Permutation::to_string, |p| {
                to_json(p.values())
            });
            emit(&out, &meta("sample-perm", Some(n), Some(&mc)), &body)
        }
        Command::SampleTree {
            n,
            model,
            height,
            mc,
            out,
        } => {
            let trees: Vec<PlaneTree> = match model {
                TreeModel::Uniform => {
                    let v = n.ok_or_else(|| {
                        Failure::Usage("--n is required for the uniform model".into())
                    })?;
                    try_run_batch(mc.seed, mc.streams, mc.count, |rng| uniform_tree(v, rng))?
                }
                TreeModel::Kesten => {
                    let h = height.ok_or_else(|| {
                        Failure::Usage("--height is required for the kesten model".into())
                    })?;
                    run_batch(mc.seed, mc.streams, mc.count, |rng| {
                        kesten_truncated(h, rng).tree
                    })
                }
                TreeModel::Gw => {
                    let offspring = Pmf::geometric(0.5)?;
                    try_run_batch(mc.seed, mc.streams, mc.count, |rng| {
                        gw_tree_truncated(&offspring, height, rng, av321::sample::DEFAULT_NODE_CAP)
                    })?
                }
            };
            let body = lines(&trees, out.format, PlaneTree::to_string, |t| {
                to_json(&t.to_string())
            });
            emit(&out, &meta("sample-tree", n, Some(&mc)), &body)
        }
        Command::SampleLimit { mc, out } => {
            let draws = run_batch(mc.seed, mc.streams, mc.count, sample_limit_process);
            let body = match out.format {
                Format::Json => lines(&draws, Format::Json, |_| String::new(), to_json),
                Format::Csv => {
                    let mut t = Table::new(&["n_front", "n_back", "front", "back"]);
                    for d in &draws {
                        t.push(vec![
                            d.n_front.to_string(),
                            d.n_back.to_string(),
                            d.front.to_string(),
                            d.back.to_string(),
                        ]);
                    }
                    t.to_csv()
                }
            };
            emit(&out, &meta("sample-limit", None, Some(&mc)), &body)
        }
        Command::Biject { direction, input } => {
            let text = match direction {
                Direction::TreeToPerm => {
                    let tree: PlaneTree = input.trim().parse()?;
                    tree_to_perm(&tree)?.to_string()
                }
                Direction::PermToTree => {
                    let perm: Permutation = input.trim().parse()?;
                    perm_to_tree(&perm)?.to_string()
                }
            };
            println!("{text}");
            Ok(())
        }
        Command::Enumerate { n, pattern, out } => {
            let pat = pattern_from_digits(pattern.digits())?;
            let perms: Vec<Permutation> = enumerate_avoiders(n, &pat)?.collect();
            let body = lines(&perms, out.format, Permutation::to_string, |p| {
                to_json(p.values())
            });
            emit(&out, &meta("enumerate", Some(n), None), &body)
        }
        Command::ExactDist { n, pattern, out } => {
            let pat = pattern_from_digits(pattern.digits())?;
            let dist = exact_fp_distribution(n, &pat)?;
            let mut t = Table::new(&["outcome", "probability"]);
            for (&k, &c) in &dist.counts {
                t.push(vec![
                    k.to_string(),
                    (c as f64 / dist.total as f64).to_string(),
                ]);
            }
            emit(
                &out,
                &meta("exact-dist", Some(n), None),
                &render(&t, out.format),
            )
        }
        Command::Verify => {
            let reports = acceptance::run_all(|r| println!("{r}"));
            let failed: Vec<String> = reports
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.id.to_string())
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verify(format!("criteria {}", failed.join(", "))))
            }
        }
        Command::Convergence {
            n,
            stat,
            tolerance,
            mc,
            out,
        } => {
            let limit = match stat {
                Stat::Front | Stat::Back => Pmf::geometric(2.0 / 3.0)?,
                Stat::Total => Pmf::negbin_2_one_third(),
            };
            let mut points = Vec::with_capacity(n.len());
            for &size in &n {
                let batch = fixed_point_batch(size, mc.count, mc.seed, mc.streams)?;
                let emp: EmpiricalDist<u64> = batch
                    .iter()
                    .map(|r| match stat {
                        Stat::Front => r.front.mass() as u64,
                        Stat::Back => r.back.mass() as u64,
                        Stat::Total => r.total(),
                    })
                    .collect();
                points.push(ConvergencePoint {
                    n: size as u64,
                    tv: tv_distance(&emp, &limit),
                    ci: av321::report::tv_noise_scale(&emp),
                });
            }
            let body = render(&convergence_table(&points), out.format);
            emit(
                &out,
                &meta("convergence", n.iter().max().copied(), Some(&mc)),
                &body,
            )?;
            let last = points.iter().max_by_key(|p| p.n).map_or(0.0, |p| p.tv);
            match tolerance {
                Some(tol) if last > tol => Err(Failure::Verify(format!("tv {last:.6} > {tol}"))),
                _ => Ok(()),
            }
        }
        Command::Midrange {
            n,
            a,
            b,
            tolerance,
            mc,
            out,
        } => {
            let parts = try_run_batch(
                mc.seed,
                mc.streams,
                mc.streams.min(mc.count),
                |rng: &mut RngStream| {
                    let share = mc.count / mc.streams.min(mc.count)
                        + u64::from(rng.stream() < mc.count % mc.streams.min(mc.count));
                    midrange_fp_probability(n, a, b, share, rng).map(|p| (p.successes, p.trials))
                },
            )?;
            let (hits, trials) = parts
                .iter()
                .fold((0, 0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
            let p = Proportion::new(hits, trials, Z_95);
            let mut t = Table::new(&["n", "a", "b", "estimate", "lower", "upper"]);
            t.push(vec![
                n.to_string(),
                a.to_string(),
                b.to_string(),
                format!("{:.6}", p.estimate),
                format!("{:.6}", p.lower),
                format!("{:.6}", p.upper),
            ]);
            emit(
                &out,
                &meta("midrange", Some(n), Some(&mc)),
                &render(&t, out.format),
            )?;
            match tolerance {
                Some(tol) if p.estimate > tol => Err(Failure::Verify(format!(
                    "estimate {:.6} > {tol}",
                    p.estimate
                ))),
                _ => Ok(()),
            }
        }
    }
}
