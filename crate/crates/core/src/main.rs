use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use slstar::harness::{commands, experiments, error_exit_code, Report};
use slstar::sl_star::DEFAULT_CAP;
use slstar::Result;

/// Rings with involution, *-Euclidean division, SL_*(2,A) and adelic division.
#[derive(Parser)]
#[command(name = "slstar", version)]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Directory for report files.
    #[arg(long, global = true, default_value = "./reports")]
    out: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ring operations.
    Ring {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Classify a ring as one-local, two-local or not *-local.
    Classify { descriptor: String },
    /// One division step a = s c + r.
    Divide { descriptor: String, a: String, c: String },
    /// SL_*(2,A) group operations.
    Slstar {
        #[command(subcommand)]
        cmd: SlCmd,
    },
    /// Restricted-product matrices.
    Adelic {
        #[command(subcommand)]
        cmd: AdelicCmd,
    },
    /// Run a canned experiment.
    Experiment { name: String },
}

#[derive(Subcommand)]
enum RingCmd {
    /// Check the ring and involution axioms.
    Selftest {
        descriptor: String,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum SlCmd {
    /// Membership test for a block matrix [[a, b], [c, d]].
    Check { descriptor: String, g: String },
    /// Bruhat word for a group element.
    Factor { descriptor: String, g: String },
    /// Closure of the Bruhat elements compared with the whole group.
    Closure {
        descriptor: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Size of SL_*(2,A).
    Enumerate {
        descriptor: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum AdelicCmd {
    /// Divide a by c.
    Divide {
        base: String,
        a: String,
        c: String,
        /// Matrix size; inferred from the literals when absent.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Split a along a comma separated place set.
    Split {
        base: String,
        a: String,
        places: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Apply the involution at every place.
    Involute {
        base: String,
        a: String,
        #[arg(long)]
        n: Option<usize>,
    },
}

fn run(cli: &Cli) -> Result<Report> {
    let seed = cli.seed;
    match &cli.cmd {
        Cmd::Ring { cmd: RingCmd::Selftest { descriptor, samples } } => commands::ring_selftest(descriptor, *samples, seed),
        Cmd::Classify { descriptor } => commands::classify(descriptor),
        Cmd::Divide { descriptor, a, c } => commands::divide(descriptor, a, c, seed),
        Cmd::Slstar { cmd } => match cmd {
            SlCmd::Check { descriptor, g } => commands::slstar_check(descriptor, g),
            SlCmd::Factor { descriptor, g } => commands::slstar_factor(descriptor, g),
            SlCmd::Closure { descriptor, cap } => commands::slstar_closure(descriptor, *cap),
            SlCmd::Enumerate { descriptor, cap } => commands::slstar_enumerate(descriptor, *cap),
        },
        Cmd::Adelic { cmd } => match cmd {
            AdelicCmd::Divide { base, a, c, n } => commands::adelic_divide(base, *n, a, c, seed),
            AdelicCmd::Split { base, a, places, n } => commands::adelic_split(base, *n, a, places),
            AdelicCmd::Involute { base, a, n } => commands::adelic_involute(base, *n, a),
        },
        Cmd::Experiment { name } => experiments::run(name, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let outcome = run(&cli).and_then(|rep| {
        let (path, text) = rep.write(&cli.out)?;
        print!("{text}");
        eprintln!("report written to {}", path.display());
        Ok(rep.verdict.exit_code())
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
