use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use permcanon::canon::{canon_oracle, canonize, validate};
use permcanon::gen::{self, IntraEdges};
use permcanon::group::membership_by_order;
use permcanon::io::{self, ColoredGraphFile, GroupFile, MatrixFile};
use permcanon::rank::{gauss_rank, rank_p};
use permcanon::selftest::{self, Options};
use permcanon::{Error, Permutation, StabilizerChain};

#[derive(Parser)]
#[command(name = "permcanon", version, about = "Permutation groups, ranks mod p and canonical forms of graphs with abelian colors")]
struct Cli {
    /// Cross-check against the brute-force oracle; exit 3 on a mismatch.
    #[arg(long, global = true)]
    oracle: bool,
    /// Extra internal cross-checks.
    #[arg(long, global = true)]
    paranoid: bool,
    /// Size bound for brute-force oracles.
    #[arg(long, global = true, default_value_t = 10_000)]
    cap: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order of the group generated by a group file.
    Order { path: PathBuf },
    /// Whether a permutation lies in the group.
    Member {
        path: PathBuf,
        /// Image sequence, as `1,0,2` or `[1,0,2]`.
        #[arg(long)]
        perm: String,
    },
    /// Rank of a matrix file over its prime modulus.
    Rank { path: PathBuf },
    /// Canonical form of a colored graph file.
    Canon { path: PathBuf },
    /// Generate a colored graph file.
    Gen(GenArgs),
    /// Run every invariant suite.
    Selftest {
        /// Number of seeds, starting at --seed.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, hide = true)]
        corrupt_convention: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    /// cyclic, bipartite, abelian or cfi.
    kind: String,
    /// Class sizes, comma separated (cyclic, abelian, bipartite).
    #[arg(long, value_delimiter = ',', default_value = "3,3")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    /// Intra-class edges: none, cycle or random.
    #[arg(long, default_value = "none")]
    intra: IntraEdges,
    /// Base graph for cfi: triangle, k4, k33, prism or cube.
    #[arg(long, default_value = "triangle")]
    base: String,
    #[arg(long)]
    twisted: bool,
    #[arg(long, default_value_t = 0)]
    twist_vertex: usize,
}

enum Failure {
    Input(Error),
    Internal(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e)
        } else {
            Failure::Input(e)
        }
    }
}

fn parse_perm(text: &str) -> Result<Permutation, Error> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let images = inner
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Permutation::from_images(images)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Order { path } => {
            let s = io::read_file::<GroupFile>(path)?.to_generator_set()?;
            Ok(format!("{}\n", s.order()))
        }
        Command::Member { path, perm } => {
            let s = io::read_file::<GroupFile>(path)?.to_generator_set()?;
            let sigma = parse_perm(perm)?;
            let inside = StabilizerChain::build(&s).contains(&sigma)?;
            if (cli.paranoid || cli.oracle) && membership_by_order(&s, &sigma)? != inside {
                return Err(Failure::Mismatch("membership by order disagrees".into()));
            }
            Ok(format!("{inside}\n"))
        }
        Command::Rank { path } => {
            let m = io::read_file::<MatrixFile>(path)?.to_matrix()?;
            let r = rank_p(&m)?;
            if cli.oracle && gauss_rank(&m)? != r {
                return Err(Failure::Mismatch(format!("elimination rank differs from {r}")));
            }
            Ok(format!("{r}\n"))
        }
        Command::Canon { path } => {
            let file = io::read_file::<ColoredGraphFile>(path)?;
            let g = file.to_graph()?;
            let form = canonize(&g)?;
            if cli.oracle {
                match canon_oracle(&g, cli.cap) {
                    Ok(slow) if slow != form => return Err(Failure::Mismatch("oracle form differs".into())),
                    Ok(_) | Err(Error::CapExceeded { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            if cli.paranoid {
                let other = gen::relabel(&file.to_raw(), &mut gen::rng(cli.seed));
                if canonize(&validate(&other)?)? != form {
                    return Err(Failure::Mismatch("a relabeled copy has a different form".into()));
                }
            }
            Ok(form.to_json())
        }
        Command::Gen(a) => {
            let file = match a.kind.as_str() {
                "cyclic" => gen::cyclic(&a.sizes, a.density, a.intra, cli.seed)?,
                "abelian" => gen::abelian(&a.sizes, a.density, a.intra, cli.seed)?,
                "bipartite" => {
                    let [s1, s2] = a.sizes[..] else {
                        return Err(Error::Parse("bipartite takes exactly two sizes".into()).into());
                    };
                    gen::bipartite(s1, s2, a.density, cli.seed)?
                }
                "cfi" => {
                    let (v, e) = gen::named_base(&a.base)?;
                    gen::cfi(v, &e, a.twisted, a.twist_vertex, cli.seed)?
                }
                k => return Err(Error::Parse(format!("unknown generator kind {k:?}")).into()),
            };
            Ok(io::to_json(&file))
        }
        Command::Selftest {
            seeds,
            corrupt_convention,
        } => {
            let report = selftest::run(&Options {
                seeds: (cli.seed..cli.seed + seeds).collect(),
                cap: cli.cap,
                corrupt_convention: *corrupt_convention,
            });
            if report.passed() {
                Ok(report.to_string())
            } else {
                print!("{report}");
                Err(Failure::Mismatch("selftest failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("oracle mismatch: {m}");
            ExitCode::from(3)
        }
    }
}
