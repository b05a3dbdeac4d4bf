use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vpyc::driver::{self, BuildConfig};
use vpyc::oracle;

#[derive(Parser)]
#[command(name = "oracle", version, about = "Reference interpreter for vPython")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Interpret a program and print what it prints.
    Run {
        /// Source (.vpy) or textual AST (.oast); `-` reads stdin.
        input: String,
        #[arg(long)]
        stdin: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        int_width: u32,
        #[arg(long, default_value_t = 64)]
        real_width: u32,
        #[arg(long, default_value_t = driver::DEFAULT_HEAP_BYTES)]
        heap_bytes: u64,
        /// Interpret the tree after loop lowering instead of before.
        #[arg(long)]
        lowered: bool,
    },
}

fn main() -> ExitCode {
    let Cmd::Run {
        input,
        stdin,
        int_width,
        real_width,
        heap_bytes,
        lowered,
    } = Cli::parse().cmd;
    let cfg = BuildConfig {
        int_bits: int_width,
        real_bits: real_width,
        heap_bytes,
        ..BuildConfig::default()
    };
    let result = (|| -> Result<oracle::Outcome, driver::DriverError> {
        cfg.validate()?;
        let text = if input == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        } else {
            std::fs::read_to_string(&input)?
        };
        let data = match &stdin {
            Some(p) => std::fs::read_to_string(p)?,
            None if input == "-" => String::new(),
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            }
        };
        let tree = driver::advance(driver::load(&text)?, if lowered { 3 } else { 2 }, cfg.numeric())?;
        Ok(oracle::interpret_with(
            &tree,
            &data,
            oracle::Limits::for_heap(heap_bytes),
        ))
    })();
    match result {
        Ok(out) => {
            let _ = std::io::stdout().write_all(&out.stdout);
            let _ = std::io::stdout().flush();
            if let Some(t) = &out.trap {
                eprintln!("trap: {t}");
            }
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("oracle: {e}");
            ExitCode::from(1)
        }
    }
}
