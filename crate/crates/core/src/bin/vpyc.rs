use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vpyc::codegen::Backend;
use vpyc::driver::{self, bench, BuildConfig, DriverError, OptLevel};
use vpyc::oracle;

#[derive(Parser)]
#[command(name = "vpyc", version, about = "vPython to Olympus abstract-machine compiler")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the pipeline; build an executable for the olympus backend.
    Compile {
        /// Source (.vpy) or textual AST (.oast); `-` reads stdin.
        input: String,
        #[arg(short, long)]
        output: Option<String>,
        /// What to write for the olympus backend.
        #[arg(long, value_enum, default_value_t = Emit::Exe)]
        emit: Emit,
        /// With `--emit ast`, stop after this phase.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
        phase: u8,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Compile, run, and optionally compare against the oracle.
    Run {
        input: String,
        /// File fed to the program's stdin (default: this process's stdin).
        #[arg(long)]
        stdin: Option<PathBuf>,
        /// Also interpret with the oracle and fail on any difference.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Benchmark variants across opt levels.
    Bench {
        /// Variants to run (default: all).
        #[arg(long = "variant")]
        variants: Vec<String>,
        /// Opt levels (default: size and speed).
        #[arg(long = "opts", value_delimiter = ',')]
        opts: Vec<String>,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        #[arg(long)]
        sieve_size: Option<i64>,
        #[arg(long)]
        sieve_reps: Option<i64>,
        #[arg(long)]
        linpack_n: Option<i64>,
        /// Write JSON-lines records here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Segment sizes of a built program (source is compiled first).
    Size {
        input: String,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Textual AST after a phase (same as `compile --emit ast`).
    Ast {
        input: String,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
        phase: u8,
        #[arg(short, long)]
        output: Option<String>,
        #[command(flatten)]
        build: BuildArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Exe,
    C,
    Ast,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args, Clone)]
struct BuildArgs {
    /// olympus, dot, ast (merlin is reserved).
    #[arg(long, default_value = "olympus")]
    backend: String,
    /// size (-Os) or speed (-O3).
    #[arg(long, short = 'O', default_value = "speed")]
    opt: String,
    #[arg(long, default_value_t = driver::DEFAULT_HEAP_BYTES)]
    heap_bytes: u64,
    #[arg(long, default_value_t = 32)]
    int_width: u32,
    #[arg(long, default_value_t = 64)]
    real_width: u32,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    bounds: Switch,
    /// C compiler (default: $VPYC_CC or gcc).
    #[arg(long)]
    cc: Option<String>,
}

impl BuildArgs {
    fn config(&self) -> Result<BuildConfig, DriverError> {
        let cfg = BuildConfig {
            backend: self.backend.parse().map_err(vpyc::Error::from)?,
            opt: self.opt.parse()?,
            heap_bytes: self.heap_bytes,
            int_bits: self.int_width,
            real_bits: self.real_width,
            bounds: matches!(self.bounds, Switch::On),
            cc: self.cc.clone().unwrap_or_else(driver::default_cc),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_input(input: &str) -> Result<String, DriverError> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(input)?)
    }
}

fn write_output(output: Option<&str>, text: &str) -> Result<(), DriverError> {
    match output {
        None | Some("-") => std::io::stdout().write_all(text.as_bytes())?,
        Some(path) => std::fs::write(path, text)?,
    }
    Ok(())
}

fn default_exe(input: &str) -> PathBuf {
    if input == "-" {
        return PathBuf::from("a.out");
    }
    let p = Path::new(input);
    p.with_extension("")
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("vpyc: {e}");
            ExitCode::from(1)
        }
    }
}

fn real_main() -> Result<ExitCode, DriverError> {
    match Cli::parse().cmd {
        Cmd::Compile {
            input,
            output,
            emit,
            phase,
            build,
        } => {
            let cfg = build.config()?;
            let text = read_input(&input)?;
            if emit == Emit::Ast {
                write_output(output.as_deref(), &driver::pipe_stage(&text, phase, &cfg)?)?;
                return Ok(ExitCode::SUCCESS);
            }
            let rendered = driver::compile_source(&text, &cfg)?;
            if cfg.backend != Backend::Olympus || emit == Emit::C {
                write_output(output.as_deref(), &rendered)?;
            } else {
                let exe = output.map(PathBuf::from).unwrap_or_else(|| default_exe(&input));
                driver::build_executable(&rendered, &cfg, &exe)?;
                eprintln!("wrote {}", exe.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ast {
            input,
            phase,
            output,
            build,
        } => {
            let cfg = build.config()?;
            let text = read_input(&input)?;
            write_output(output.as_deref(), &driver::pipe_stage(&text, phase, &cfg)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Run {
            input,
            stdin,
            check,
            build,
        } => run(&input, stdin, check, &build.config()?),
        Cmd::Bench {
            variants,
            opts,
            repetitions,
            sieve_size,
            sieve_reps,
            linpack_n,
            json,
            build,
        } => {
            let mut spec = bench::BenchSpec::new(build.config()?);
            if !variants.is_empty() {
                spec.variants = variants;
            }
            if !opts.is_empty() {
                spec.opts = opts.iter().map(|o| o.parse()).collect::<Result<Vec<OptLevel>, _>>()?;
            }
            spec.repetitions = repetitions;
            spec.params.sieve_size = sieve_size.unwrap_or(spec.params.sieve_size);
            spec.params.sieve_reps = sieve_reps.unwrap_or(spec.params.sieve_reps);
            spec.params.linpack_n = linpack_n.unwrap_or(spec.params.linpack_n);
            let rows = bench::run_bench(&spec)?;
            let records = bench::records(&rows);
            match json {
                Some(path) => {
                    std::fs::write(path, records)?;
                    print!("{}", bench::table(&rows));
                }
                None => {
                    eprint!("{}", bench::table(&rows));
                    print!("{records}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Size { input, build } => {
            let cfg = build.config()?;
            let dir = tempfile::tempdir()?;
            let exe = if input.ends_with(".vpy") || input.ends_with(".oast") || input == "-" {
                let unit = driver::compile_source(&read_input(&input)?, &cfg)?;
                driver::build_executable(&unit, &cfg, &dir.path().join("prog"))?
            } else {
                PathBuf::from(&input)
            };
            let s = driver::segment_sizes(&exe)?;
            println!("{:>10} {:>10} {:>10}", "text", "data", "zeroinit");
            println!("{:>10} {:>10} {:>10}", s.text, s.data, s.zeroinit);
            if s.zeroinit >= cfg.heap_bytes {
                println!("zero-init is dominated by the {}-byte heap array", cfg.heap_bytes);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run(input: &str, stdin: Option<PathBuf>, check: bool, cfg: &BuildConfig) -> Result<ExitCode, DriverError> {
    if cfg.backend != Backend::Olympus {
        return Err(DriverError::Usage("run needs the olympus backend".into()));
    }
    let text = read_input(input)?;
    let data = match stdin {
        Some(p) => std::fs::read(p)?,
        None if input == "-" => Vec::new(),
        None => {
            let mut v = Vec::new();
            std::io::stdin().read_to_end(&mut v)?;
            v
        }
    };
    let unit = driver::compile_source(&text, cfg)?;
    let dir = tempfile::tempdir()?;
    let exe = driver::build_executable(&unit, cfg, &dir.path().join("prog"))?;
    let out = driver::run_executable(&exe, &data)?;
    std::io::stdout().write_all(&out.stdout)?;
    std::io::stdout().flush()?;
    eprint!("{}", out.stderr);
    if check {
        let tree = driver::typed_tree(&text, cfg)?;
        let expected = oracle::interpret_with(
            &tree,
            &String::from_utf8_lossy(&data),
            oracle::Limits::for_heap(cfg.heap_bytes),
        );
        let mut problems = Vec::new();
        if let Err(d) = driver::compare_outputs(&expected.stdout, &out.stdout, 1e-9) {
            problems.push(d);
        }
        if expected.exit != out.exit {
            problems.push(format!("exit status: oracle {}, program {}", expected.exit, out.exit));
        }
        if !problems.is_empty() {
            eprintln!("vpyc: {}", DriverError::Mismatch(problems.join("\n")));
            return Ok(ExitCode::from(3));
        }
    }
    Ok(ExitCode::from(out.exit.clamp(0, 255) as u8))
}
