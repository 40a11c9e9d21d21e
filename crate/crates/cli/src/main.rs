use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ringload_cli::{
    cmd_boost, cmd_export_milp, cmd_gen, cmd_round, cmd_search, cmd_verify, format_split, parse_eps, read_input,
    write_output, CliError, Input, RoundMethod,
};
use ringload_core::adversary::SearchConfig;
use ringload_core::exact::DEFAULT_CAP;
use ringload_core::rational::Rational;

#[derive(Parser)]
#[command(name = "ringload", version, about = "Exact tools for unsplittable ring loading")]
struct Cli {
    /// Worker threads for enumeration and search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Round a split routing to an unsplittable one.
    Round {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "main")]
        method: RoundMethod,
        /// Largest number of demands enumerated by `brute`.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Validate an instance and report its loads.
    Verify { input: PathBuf },
    /// Build the boosted ring instance of a split routing.
    Boost {
        input: PathBuf,
        /// Also compute L*, L and the optimum of the source routing.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write the worst-case MILP in LP format.
    ExportMilp {
        m: usize,
        #[arg(long)]
        no_reduce: bool,
        #[arg(long)]
        no_symmetry: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Local search for routings with a large optimum.
    Search {
        m: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 20)]
        denominator: i64,
        /// Split instance to start the first restart from.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print a catalog instance.
    Gen {
        name: String,
        #[arg(long, value_parser = parse_eps)]
        eps: Option<Rational>,
        #[arg(long)]
        m: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Round { input, method, cap } => {
            let input = read_input(&input)?;
            match cmd_round(&input, method, cap) {
                Ok(report) => write_output(None, &report),
                Err(e) => {
                    if e.exit_code() == 3 {
                        if let Input::Split(r) = &input {
                            eprint!("# offending routing\n{}", format_split(r));
                        }
                    }
                    Err(e)
                }
            }
        }
        Command::Verify { input } => write_output(None, &cmd_verify(&read_input(&input)?)?),
        Command::Boost { input, check, cap, out } => {
            write_output(out.as_deref(), &cmd_boost(&read_input(&input)?, check, cap)?)
        }
        Command::ExportMilp { m, no_reduce, no_symmetry, out } => {
            let (text, summary) = cmd_export_milp(m, !no_reduce, !no_symmetry)?;
            eprintln!("{summary}");
            write_output(out.as_deref(), &text)
        }
        Command::Search { m, seed, budget, restarts, denominator, from, out } => {
            let mut cfg = SearchConfig::new(m, budget, seed);
            cfg.restarts = restarts;
            cfg.denominator = denominator;
            if let Some(path) = from {
                match read_input(&path)? {
                    Input::Split(r) => cfg.start = Some(r),
                    Input::Ring(_) => {
                        return Err(ringload_core::Error::InvalidRouting("--from needs a split instance".into()).into())
                    }
                }
            }
            write_output(out.as_deref(), &cmd_search(&cfg)?)
        }
        Command::Gen { name, eps, m } => write_output(None, &cmd_gen(&name, eps.as_ref(), m)?),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
