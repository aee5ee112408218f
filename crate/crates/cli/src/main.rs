use clap::{Args, Parser, Subcommand};
use splq_cli::{
    parse_params, run_casimir, run_consistency, run_normal_order, run_qes_enumerate, run_rank,
    run_verify_rep, Algebra, Format, RunConfig, RunResult,
};

/// Exact-arithmetic workbench for quommutator-deformed spl(N,1)
/// superalgebras: consistency checking, finite-difference representations
/// and quasi-exactly-solvable operators.
#[derive(Parser)]
#[command(name = "splq", version, disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct CommonArgs {
    /// Output format
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "json"])]
    format: String,
}

#[derive(Subcommand)]
enum Verb {
    /// Run the overlap (associativity) check of a structure table
    Consistency {
        #[arg(long)]
        algebra: Algebra,
        /// Rank N for the spl family
        #[arg(long = "N")]
        n: Option<u8>,
        /// Parameter assignments name=a/b (repeatable)
        #[arg(long = "param")]
        params: Vec<String>,
        /// Custom table document path
        #[arg(long)]
        table: Option<String>,
        /// Force fully symbolic parameters
        #[arg(long)]
        symbolic: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Verify a finite-difference representation against its relations
    VerifyRep {
        #[arg(long)]
        algebra: Algebra,
        /// Degree of the lower polynomial module P(n)
        #[arg(long)]
        n: usize,
        /// Rational deformation parameter; omitted means symbolic
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rewrite an expression to canonical normal-ordered form
    NormalOrder {
        /// Expression in the published grammar, e.g. "V(2)*V(1)"
        expr: String,
        #[arg(long)]
        algebra: Algebra,
        #[arg(long = "N")]
        n: Option<u8>,
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        symbolic: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The Casimir value of deformed osp(1,2)
    Casimir {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Effective parameter count of the gl(N) sector
    Rank {
        #[arg(long = "N")]
        n: u8,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate and certify enveloping-algebra operators
    QesEnumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn parse_format(s: &str) -> Format {
    match s {
        "json" => Format::Json,
        _ => Format::Text,
    }
}

fn parse_q(q: Option<String>) -> Result<Option<splq_core::rational::Rat>, String> {
    match q {
        None => Ok(None),
        Some(s) => s
            .parse::<splq_core::rational::Rat>()
            .map(Some)
            .map_err(|e| e.to_string()),
    }
}

fn dispatch(cli: Cli) -> RunResult {
    match cli.verb {
        Verb::Consistency {
            algebra,
            n,
            params,
            table,
            symbolic,
            common,
        } => {
            let config = RunConfig {
                algebra,
                n_rank: n,
                params: parse_params(&params)?,
                table_path: table,
                symbolic,
                format: parse_format(&common.format),
                ..RunConfig::default()
            };
            run_consistency(&config)
        }
        Verb::VerifyRep {
            algebra,
            n,
            q,
            common,
        } => {
            let config = RunConfig {
                algebra,
                rep_degree: Some(n),
                q: parse_q(q)?,
                format: parse_format(&common.format),
                ..RunConfig::default()
            };
            run_verify_rep(&config)
        }
        Verb::NormalOrder {
            expr,
            algebra,
            n,
            params,
            table,
            symbolic,
            common,
        } => {
            let config = RunConfig {
                algebra,
                n_rank: n,
                params: parse_params(&params)?,
                table_path: table,
                symbolic,
                format: parse_format(&common.format),
                ..RunConfig::default()
            };
            run_normal_order(&config, &expr)
        }
        Verb::Casimir { n, q, common } => {
            let config = RunConfig {
                rep_degree: Some(n),
                q: parse_q(q)?,
                format: parse_format(&common.format),
                ..RunConfig::default()
            };
            run_casimir(&config)
        }
        Verb::Rank { n, common } => {
            let config = RunConfig {
                n_rank: Some(n),
                format: parse_format(&common.format),
                ..RunConfig::default()
            };
            run_rank(&config)
        }
        Verb::QesEnumerate {
            n,
            q,
            degree,
            seed,
            common,
        } => {
            let config = RunConfig {
                rep_degree: Some(n),
                q: parse_q(Some(q))?,
                qes_degree: Some(degree),
                seed,
                format: parse_format(&common.format),
                ..RunConfig::default()
            };
            run_qes_enumerate(&config)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(outcome) => {
            print!("{}", outcome.body);
            if !outcome.body.ends_with('\n') {
                println!();
            }
            std::process::exit(if outcome.passed { 0 } else { 1 });
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
