use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

mod cache;
mod check;
mod enumerate;
mod error;
mod model;
mod output;
mod render;
mod square;
mod transform;

use error::Result;
use output::Format;

/// Exact second-order free probability from the command line.
///
/// Exit codes: 0 success, 1 a check failed, 2 usage error, 3 enumeration cap exceeded.
#[derive(Parser)]
#[command(name = "sofree", version)]
struct Cli {
    /// Output format; json unless the command says otherwise.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Directory for cached enumerations.
    #[arg(long, env = "SOFREE_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List non-crossing structures in canonical order.
    Enumerate(enumerate::Args),
    /// Convert between moments and cumulants of a model.
    Transform(transform::Args),
    /// Determining sequence and cumulants of `a a*` or `x^2`.
    Square(square::Args),
    /// Run a verification and report pass or fail.
    Check(check::Args),
    /// Draw an annular non-crossing permutation as SVG.
    Render(render::Args),
}

impl Cli {
    fn format(&self) -> Format {
        let default = if matches!(self.command, Command::Render(_)) { Format::Svg } else { Format::Json };
        self.format.unwrap_or(default)
    }
}

fn run(cli: Cli, format: Format, out: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Enumerate(a) => enumerate::run(a, format, cli.cache_dir.as_deref(), out),
        Command::Transform(a) => transform::run(a, format, out),
        Command::Square(a) => square::run(a, format, out),
        Command::Check(a) => check::run(a, format, out),
        Command::Render(a) => render::run(a, format, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, format, &mut out);
    let code = match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            if format == Format::Json {
                let doc = json!({ "tool": "sofree", "version": output::VERSION, "error": e.to_string(), "exit_code": e.exit_code() });
                let _ = output::print_json(&mut out, &doc);
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
