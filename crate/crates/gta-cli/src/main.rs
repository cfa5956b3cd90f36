//! `gta`: checks and computations for algebras with a graded triangular basis.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gradtri::cli::{run, Command, Format, Options, Source};
use gradtri::gta::parse_field;

#[derive(Parser)]
#[command(name = "gta", version, about = "Graded triangular bases: axioms, standard modules, flags, BGG reciprocity")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// A .gta file, or corpus:<name>[:<cutoff>] for a built-in algebra.
    input: String,
    /// Comparison window; at most the cutoff.
    #[arg(long, global = true)]
    window: Option<i64>,
    /// Ground field: rational or fp:<p>.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Output format: text or json.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Use the declared anti-involution for dualities.
    #[arg(long, global = true)]
    tau: bool,
    /// Worker threads for axiom verification.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the axioms of a graded triangular basis.
    Verify(Common),
    /// Summarize the declared data.
    Info(Common),
    /// Blocks, simples and projectives of the Cartan algebras.
    Cartan(Common),
    /// Construct a module FAMILY:block[^*].
    Module {
        #[command(flatten)]
        common: Common,
        module: String,
    },
    /// Graded composition multiplicities.
    Decompose {
        #[command(flatten)]
        common: Common,
        module: String,
    },
    /// Graded dimension of Hom.
    Hom {
        #[command(flatten)]
        common: Common,
        from: String,
        to: String,
    },
    /// Graded dimension of Ext^1.
    Ext1 {
        #[command(flatten)]
        common: Common,
        from: String,
        to: String,
    },
    /// Build and verify a standard flag.
    Flag {
        #[command(flatten)]
        common: Common,
        /// Block whose projective flag is built.
        #[arg(long = "b")]
        block: Option<String>,
        /// Module whose flag is discovered.
        #[arg(long)]
        module: Option<String>,
    },
    /// Check BGG reciprocity.
    Bgg {
        #[command(flatten)]
        common: Common,
        /// Block to check; all blocks by default.
        #[arg(long = "b")]
        block: Option<String>,
    },
    /// Apply a truncation functor for a lower set of weights.
    Truncate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated lower set of weights.
        #[arg(long)]
        gamma: String,
        /// TRUNCATE, SHRIEK, STAR, SUB or QUOT.
        #[arg(long)]
        op: String,
        module: String,
    },
    /// Check the flags of the truncations V_Gamma.
    Ascending {
        #[command(flatten)]
        common: Common,
        module: String,
        /// Lower sets, each comma-separated; repeat the option for several.
        #[arg(long = "gamma", required = true)]
        gammas: Vec<String>,
    },
    /// Write the algebra as a .gta file.
    Export(Common),
}

fn split(cmd: Cmd) -> (Common, Command) {
    match cmd {
        Cmd::Verify(c) => (c, Command::Verify),
        Cmd::Info(c) => (c, Command::Info),
        Cmd::Cartan(c) => (c, Command::Cartan),
        Cmd::Module { common, module } => (common, Command::Module { module }),
        Cmd::Decompose { common, module } => (common, Command::Decompose { module }),
        Cmd::Hom { common, from, to } => (common, Command::Hom { from, to }),
        Cmd::Ext1 { common, from, to } => (common, Command::Ext1 { from, to }),
        Cmd::Flag { common, block, module } => (common, Command::Flag { block, module }),
        Cmd::Bgg { common, block } => (common, Command::Bgg { block }),
        Cmd::Truncate { common, gamma, op, module } => (common, Command::Truncate { gamma, op, module }),
        Cmd::Ascending { common, module, gammas } => (common, Command::Ascending { module, gammas }),
        Cmd::Export(c) => (c, Command::Export),
    }
}

fn options(c: &Common) -> gradtri::error::Result<Options> {
    Ok(Options {
        window: c.window,
        field: c.field.as_deref().map(parse_field).transpose()?,
        format: Format::parse(&c.format)?,
        tau: c.tau,
        threads: c.threads,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (common, command) = split(cli.command);
    let prepared = options(&common).and_then(|o| Source::from_arg(&common.input, |p| std::fs::read_to_string(p)).map(|s| (o, s)));
    let (opts, source) = match prepared {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let out = run(&source, &command, &opts);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
