//! Command-line front end for the exact motivic-avatar toolkit.
//!
//! Every command is deterministic given its flags and seed; reports are
//! emitted as JSON (default) or CSV, version-stamped, and byte-identical
//! across runs. Exit codes: 0 ok, 2 parse error, 3 bound violation,
//! 4 verification failed.

mod commands;
mod scenario;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(msg: &str) -> Self {
        CliError {
            code: 2,
            message: msg.to_string(),
        }
    }

    pub fn bounds(msg: &str) -> Self {
        CliError {
            code: 3,
            message: msg.to_string(),
        }
    }

    pub fn verification(msg: &str) -> Self {
        CliError {
            code: 4,
            message: msg.to_string(),
        }
    }
}

impl From<motivic_core::Error> for CliError {
    fn from(e: motivic_core::Error) -> Self {
        use motivic_core::Error::*;
        let code = match &e {
            BoundExceeded(_) | Unstable(_) => 3,
            UnsupportedVariety(_) | InvalidParameter(_) | TruncationMismatch(_) => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "motivic",
    about = "Exact computations in Grothendieck-ring avatars: symmetric powers, Euler products, vanishing cycles, and function-field Fourier analysis",
    version
)]
struct Cli {
    /// Directory to write the report file into (in addition to stdout).
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Report format.
    #[arg(long, global = true, default_value = "json")]
    format: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kapranov zeta function of a catalog variety, with rational-form
    /// cross-checks.
    Zeta {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 6)]
        prec: u32,
    },
    /// Symmetric power of an avatar class.
    Sympow {
        /// Class as [[p,q,c],...] or a catalog name.
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: u32,
    },
    /// Evaluate a motivic Euler product from a scenario file.
    Eulerprod {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        prec: u32,
        /// "counting" or "epoly".
        #[arg(long, default_value = "counting")]
        avatar: String,
    },
    /// Compare an Euler product against the configuration oracle.
    Oracle {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        prec: u32,
    },
    /// Multiplicativity of Euler products for seeded mixed-sign families.
    MultCheck {
        #[arg(long, default_value_t = 50)]
        trials: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        prec: u32,
    },
    /// Double products over a tower.
    DoubleCheck {
        /// "trivial" or "squaring".
        #[arg(long)]
        tower: String,
        #[arg(long, default_value_t = 2)]
        sheets: u32,
        #[arg(long, default_value = "p1")]
        base: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        prec: u32,
    },
    /// Exhaustive verification of the combinatorial alternating-sum lemma,
    /// or a single tuple given as nested integer lists.
    Howe {
        #[arg(long, default_value_t = 8)]
        max_blocks: u32,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        /// One tuple of gap-free ordered partitions, e.g. [[1,1],[2]].
        #[arg(long)]
        tuple: Option<String>,
    },
    /// The worked convolution example: vanishing cycles of x^2 and
    /// x^2 + y^2 and the square root of L.
    TsExample {
        #[arg(long, default_value_t = 13)]
        q: u64,
    },
    /// Denef–Loeser zeta function from resolution data.
    DlZeta {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 8)]
        prec: u32,
    },
    /// Weight of a serialized class.
    Weight {
        /// EPoly [[p,q,c],...] or MonClass [[num,den,epoly],...] (with
        /// --monodromy).
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = false)]
        monodromy: bool,
    },
    /// Finite-window radius of convergence of a Kapranov zeta function or
    /// a series scenario.
    Radius {
        #[arg(long)]
        variety: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        window: Vec<u32>,
    },
    /// Coefficient growth of Z = F/(1 - L^a T^a)^r from the numerator F.
    CoefGrowth {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Optional observed series to compare the prediction against.
        #[arg(long)]
        observed: Option<String>,
    },
    /// Pole order of the height zeta function from compactification data.
    PoleOrder {
        #[arg(long)]
        scenario: String,
    },
    /// Desk-scale height-count demonstration for G_a inside P^1.
    HeightDemo {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 8)]
        dmax: u32,
        #[arg(long, default_value_t = 6)]
        prec: u32,
    },
    /// Seeded Poisson-formula verification corpus, or a single check on
    /// explicit Schwartz–Bruhat tables from a scenario file.
    Poisson {
        #[arg(long, required_unless_present = "scenario")]
        q: Option<u32>,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Explicit factors: tables in carrier order per place.
        #[arg(long)]
        scenario: Option<String>,
    },
    /// The annulus integral and its case split.
    Annulus {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        /// Polynomial P as [[t-coeffs of c_0], [c_1], ...]; default 1.
        #[arg(long)]
        poly: Option<String>,
        /// Sweep all m, d up to this bound with seeded polynomials.
        #[arg(long)]
        sweep: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Per-divisor Poisson checks over symmetric powers of the base.
    FamilyPoisson {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Multidegree, comma-separated.
        #[arg(long, default_value = "1")]
        m: String,
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = commands::dispatch(&cli.command);
    match result {
        Ok(report) => {
            let rendered = commands::render(&report, &cli.format);
            println!("{rendered}");
            if let Some(dir) = &cli.out {
                if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| {
                    let ext = if cli.format == "csv" { "csv" } else { "json" };
                    std::fs::write(dir.join(format!("{}.{ext}", report.name)), &rendered)
                }) {
                    eprintln!("error: cannot write report: {e}");
                    std::process::exit(2);
                }
            }
            if !report.ok {
                std::process::exit(4);
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
