//! `dtwc`: wall-crossing coefficients, invariant transforms, catalog
//! verification and finite-field counts from the command line.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dtwc_core::fforacle::DEFAULT_BUDGET;

use output::Format;

#[derive(Parser)]
#[command(name = "dtwc", version, about = "Exact generalized DT wall-crossing")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration cap for the finite-field oracle.
    #[arg(long, global = true, env = "DTWC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect quivers and their Euler forms.
    #[command(subcommand)]
    Quiver(QuiverCmd),
    /// Wall-crossing coefficients S, U, V.
    #[command(subcommand)]
    Coeff(CoeffCmd),
    /// Invariant transforms.
    #[command(subcommand)]
    Transform(TransformCmd),
    /// Worked examples with closed forms.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Finite-field point counts.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Truncated power series.
    #[command(subcommand)]
    Series(SeriesCmd),
}

#[derive(Subcommand)]
pub enum QuiverCmd {
    /// Vertices, edges and Euler forms. QUIVER is a JSON file, `loops:m`, or a catalog name.
    Info { quiver: String },
    /// `χ̂(d,e)`, `χ̂(e,d)` and `χ̄(d,e)`.
    Euler {
        quiver: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        e: String,
    },
}

#[derive(Args)]
pub struct Wall {
    /// Context JSON file.
    #[arg(long)]
    pub context: PathBuf,
    /// Source stability name.
    #[arg(long)]
    pub from: String,
    /// Target stability name.
    #[arg(long)]
    pub to: String,
}

#[derive(Subcommand)]
pub enum CoeffCmd {
    /// `S(α_1, ..., α_n; τ, τ̃)`.
    #[command(name = "S")]
    S {
        #[command(flatten)]
        wall: Wall,
        /// Classes separated by `;`, e.g. `(0,1);(1,0)`.
        #[arg(long)]
        parts: String,
    },
    /// `U(α_1, ..., α_n; τ, τ̃)`.
    #[command(name = "U")]
    U {
        #[command(flatten)]
        wall: Wall,
        /// Classes separated by `;`, coordinates by `,`.
        #[arg(long)]
        parts: String,
    },
    /// `V(I, Γ, κ; τ, τ̃)` for a tree with directed edges `a-b`.
    #[command(name = "V")]
    V {
        #[command(flatten)]
        wall: Wall,
        /// Vertex classes separated by `;`.
        #[arg(long)]
        parts: String,
        /// Directed edges, e.g. `0-1,0-2`.
        #[arg(long, default_value = "")]
        edges: String,
    },
}

#[derive(Subcommand)]
pub enum TransformCmd {
    /// Invariant of a class under the target stability from a table under the source.
    Wall {
        /// Context JSON file.
        #[arg(long)]
        context: PathBuf,
        /// Invariant table JSON file.
        #[arg(long)]
        table: PathBuf,
        /// Source stability (defaults to the table's).
        #[arg(long)]
        from: Option<String>,
        /// Target stability, by name in the context.
        #[arg(long)]
        to: String,
        /// Class as comma-separated coordinates.
        #[arg(long)]
        target: String,
        /// Drop signs (input holds `J` rather than DT̄).
        #[arg(long)]
        unsigned: bool,
        /// Sum over trees on all orientations through `V` instead of `U`.
        #[arg(long)]
        v_form: bool,
        #[arg(long, default_value_t = 6)]
        max_parts: usize,
    },
    /// DT̄ table to BPS invariants.
    Bps { table: PathBuf },
    /// BPS invariants to a DT̄ table.
    Dt { table: PathBuf },
    /// Pair invariants from DT̄ (or `χ` from `J` with `--unsigned`).
    Pair {
        /// Context JSON file.
        #[arg(long)]
        context: PathBuf,
        /// Invariant table JSON file.
        #[arg(long)]
        table: PathBuf,
        /// Stability the table is taken under (defaults to the table's).
        #[arg(long)]
        stability: Option<String>,
        /// One class; without it the generating series to `--order` is printed.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long)]
        unsigned: bool,
        #[arg(long, default_value_t = 12)]
        max_parts: usize,
    },
    /// DT̄ from a pair-invariant generating series.
    PairInverse {
        /// Context JSON file.
        #[arg(long)]
        context: PathBuf,
        /// Series JSON file.
        #[arg(long)]
        series: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum CatalogCmd {
    /// Entry names and their formulas.
    List,
    /// Expand, extract invariants and compare with closed forms.
    Verify {
        name: String,
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Use formulas as printed, without known corrections.
        #[arg(long)]
        printed: bool,
    },
}

#[derive(Subcommand)]
pub enum OracleCmd {
    /// Count stable framed representations over finite fields and interpolate.
    Ffcount {
        /// JSON file, `loops:m`, or a catalog name.
        #[arg(long)]
        quiver: String,
        /// Dimension vector, e.g. `2,1`.
        #[arg(long)]
        dim: String,
        /// Framing vector.
        #[arg(long)]
        frame: String,
        /// Field orders to sample; at least the moduli dimension plus one.
        #[arg(long, default_value = "2,3,4,5,7,8,9")]
        fields: String,
        /// Slope weights `θ`, giving `μ(d) = θ·d / Σd`; trivial stability if absent.
        #[arg(long)]
        theta: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum SeriesCmd {
    /// Expand `∏ (1 + c q^e)^p` from a JSON factor list.
    Product { spec: PathBuf },
    Exp { series: PathBuf },
    Log { series: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = commands::Settings { budget: cli.budget };
    let result = match cli.command {
        Command::Quiver(c) => commands::quiver(c),
        Command::Coeff(c) => commands::coeff(c),
        Command::Transform(c) => commands::transform(c),
        Command::Catalog(c) => commands::catalog(c),
        Command::Oracle(c) => commands::oracle(c, &ctx),
        Command::Series(c) => commands::series(c),
    };
    match result {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{}", report.render(cli.format)) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
