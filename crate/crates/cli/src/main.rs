mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use njump_core::Rational;

#[derive(Parser, Debug)]
#[command(name = "njump", version, about = "Multiplier ideals and jumping numbers of toric singularities in dimension two")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Worker threads for parallel sections.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a body and print it.
    Body {
        #[arg(long = "in")]
        input: String,
        /// Print canonical JSON instead.
        #[arg(long)]
        normalize: bool,
    },
    /// Multiplier ideal J(c·φ).
    Mi {
        #[arg(long)]
        body: String,
        #[arg(long, value_parser = rational)]
        c: Rational,
    },
    /// Jumping numbers up to a bound.
    Jump {
        #[arg(long)]
        body: String,
        #[arg(long, value_parser = rational)]
        bound: Rational,
        #[arg(long)]
        window: u64,
    },
    /// Cluster points up to a bound.
    Clusters {
        #[arg(long)]
        body: String,
        #[arg(long, value_parser = rational)]
        bound: Rational,
    },
    /// Mixed jumping numbers of c·φ + ψ.
    Mixed {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long, value_parser = rational)]
        bound: Rational,
        #[arg(long)]
        window: u64,
    },
    /// Log canonical threshold.
    Lct {
        #[arg(long)]
        body: String,
    },
    /// Asymptotic multiplier ideal of the inner graded system.
    Graded {
        #[arg(long)]
        body: String,
        #[arg(long, value_parser = rational)]
        c: Rational,
        #[arg(long)]
        qmax: u64,
        #[arg(long, default_value_t = 16)]
        xcap: u64,
    },
    /// Numerical integrability probes against exact membership.
    Oracle {
        #[arg(long)]
        body: String,
        #[arg(long)]
        cases: String,
        #[arg(long)]
        margin: f64,
        #[arg(long)]
        tmax: f64,
    },
    /// Look for evidence against a period of a builtin jump set.
    Period {
        #[arg(long, value_enum)]
        set: SetLabel,
        #[arg(long, conflicts_with = "m")]
        a: Option<u64>,
        #[arg(long, value_delimiter = ',', value_parser = rational)]
        m: Vec<Rational>,
        #[arg(long, value_parser = rational)]
        bound: Rational,
        #[arg(long, value_parser = rational)]
        period: Rational,
        #[arg(long)]
        probes: u64,
    },
    /// Pairs r ≤ s ≤ n with rs/(r+s) = e/(e+1) + c.
    Search {
        #[arg(long)]
        e: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetLabel {
    Koike,
    Saito,
    Elsv,
    Diagonal,
}

impl SetLabel {
    fn as_str(self) -> &'static str {
        match self {
            SetLabel::Koike => "koike",
            SetLabel::Saito => "saito",
            SetLabel::Elsv => "elsv",
            SetLabel::Diagonal => "diagonal",
        }
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    njump_core::number::parse_rational(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.into()).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
