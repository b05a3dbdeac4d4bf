//! Benchmark harness: sieve and LINPACK variants, vPython against native C.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::toolchain::{build_executable, build_native, compile_flags, run_executable, segment_sizes, BASE_FLAGS};
use super::{compile_source, BuildConfig, DriverError, OptLevel, Result, MICRO_HEAP_BYTES};

pub const SIEVE_FOR: &str = include_str!("../../bench/sieve_for.vpy");
pub const SIEVE_WHILE: &str = include_str!("../../bench/sieve_while.vpy");
pub const SIEVE_NATIVE: &str = include_str!("../../bench/sieve.c");
pub const LINPACK: &str = include_str!("../../bench/linpack.vpy");
pub const LINPACK_NATIVE: &str = include_str!("../../bench/linpack.c");

pub const VARIANTS: &[&str] = &["sieve-for", "sieve-while", "sieve-native", "linpack", "linpack-native"];

/// Problem sizes. Micro-profile heaps get the reduced sizes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Params {
    pub sieve_size: i64,
    pub sieve_reps: i64,
    pub linpack_n: i64,
}

impl Params {
    pub fn for_heap(heap_bytes: u64) -> Params {
        if heap_bytes <= 65_536 {
            Params {
                sieve_size: 4095,
                sieve_reps: 100,
                linpack_n: 50,
            }
        } else {
            Params {
                sieve_size: 8190,
                sieve_reps: 2000,
                linpack_n: 1000,
            }
        }
    }
}

/// Replace the literal of the first top-level `name = <int>` line.
pub fn set_param(src: &str, name: &str, value: i64) -> Result<String> {
    let prefix = format!("{name} = ");
    let mut found = false;
    let mut out = String::with_capacity(src.len());
    for line in src.split_inclusive('\n') {
        if !found && line.starts_with(&prefix) && line[prefix.len()..].trim().parse::<i64>().is_ok() {
            found = true;
            out.push_str(&format!("{prefix}{value}\n"));
        } else {
            out.push_str(line);
        }
    }
    if found {
        Ok(out)
    } else {
        Err(DriverError::Usage(format!(
            "benchmark source has no `{name}` parameter"
        )))
    }
}

pub fn suite_of(variant: &str) -> &'static str {
    if variant.starts_with("sieve") {
        "sieve"
    } else {
        "linpack"
    }
}

/// vPython source of a variant with its parameters applied.
pub fn vpy_source(variant: &str, p: &Params) -> Result<Option<String>> {
    Ok(match variant {
        "sieve-for" | "sieve-while" => {
            let src = if variant == "sieve-for" { SIEVE_FOR } else { SIEVE_WHILE };
            Some(set_param(&set_param(src, "size", p.sieve_size)?, "reps", p.sieve_reps)?)
        }
        "linpack" => Some(set_param(LINPACK, "n", p.linpack_n)?),
        "sieve-native" | "linpack-native" => None,
        other => return Err(DriverError::Usage(format!("unknown bench variant `{other}`"))),
    })
}

/// Heap large enough for the LINPACK matrix: columns of reals plus headers,
/// with room for one generation of garbage.
pub fn linpack_heap(n: i64, configured: u64) -> u64 {
    let need = 3 * (n as u64) * (n as u64 * 8 + 32) + 65_536;
    configured.max(need)
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub suite: String,
    pub variant: String,
    pub opt: OptLevel,
    pub seconds_median: f64,
    pub size_text: u64,
    pub size_data: u64,
    pub size_zeroinit: u64,
    pub output_digest: String,
    pub exit: i32,
    pub repetitions: usize,
    pub flags: String,
    pub cc: String,
    pub heap_bytes: u64,
    pub int_bits: u32,
    pub real_bits: u32,
    pub bounds: bool,
    pub params: Params,
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub variants: Vec<String>,
    pub opts: Vec<OptLevel>,
    pub repetitions: usize,
    pub params: Params,
    pub base: BuildConfig,
}

impl BenchSpec {
    pub fn new(base: BuildConfig) -> BenchSpec {
        BenchSpec {
            variants: VARIANTS.iter().map(|s| s.to_string()).collect(),
            opts: vec![OptLevel::Size, OptLevel::Speed],
            repetitions: 5,
            params: Params::for_heap(base.heap_bytes),
            base,
        }
    }
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// A built variant waiting to be timed.
struct Prepared {
    exe: std::path::PathBuf,
    row: BenchRow,
    times: Vec<f64>,
    first: Option<super::RunOutput>,
}

fn prepare(variant: &str, opt: OptLevel, spec: &BenchSpec, dir: &Path) -> Result<Prepared> {
    let p = &spec.params;
    let mut cfg = BuildConfig {
        opt,
        ..spec.base.clone()
    };
    if suite_of(variant) == "linpack" {
        cfg.heap_bytes = linpack_heap(p.linpack_n, cfg.heap_bytes);
    }
    let exe = dir.join(format!("{variant}-{opt}"));
    let flags = match vpy_source(variant, p)? {
        Some(src) => {
            let unit = compile_source(&src, &cfg)?;
            build_executable(&unit, &cfg, &exe)?;
            compile_flags(&cfg)
        }
        None => {
            let (source, defines) = if variant == "sieve-native" {
                (
                    SIEVE_NATIVE,
                    vec![("SIZE", p.sieve_size.to_string()), ("REPS", p.sieve_reps.to_string())],
                )
            } else {
                (LINPACK_NATIVE, vec![("N", p.linpack_n.to_string())])
            };
            build_native(source, &cfg, &defines, &exe)?;
            let mut f: Vec<String> = BASE_FLAGS.iter().map(|s| s.to_string()).collect();
            f.push(opt.flag().into());
            f.extend(defines.iter().map(|(k, v)| format!("-D{k}={v}")));
            f
        }
    };
    let sizes = segment_sizes(&exe)?;
    let row = BenchRow {
        suite: suite_of(variant).into(),
        variant: variant.into(),
        opt,
        seconds_median: f64::NAN,
        size_text: sizes.text,
        size_data: sizes.data,
        size_zeroinit: sizes.zeroinit,
        output_digest: String::new(),
        exit: 0,
        repetitions: spec.repetitions.max(1),
        flags: flags.join(" "),
        cc: cfg.cc.clone(),
        heap_bytes: cfg.heap_bytes,
        int_bits: cfg.int_bits,
        real_bits: cfg.real_bits,
        bounds: cfg.bounds,
        params: *p,
    };
    Ok(Prepared {
        exe,
        row,
        times: Vec::new(),
        first: None,
    })
}

fn time_once(b: &mut Prepared) -> Result<()> {
    let start = Instant::now();
    let out = run_executable(&b.exe, b"")?;
    b.times.push(start.elapsed().as_secs_f64());
    b.first.get_or_insert(out);
    Ok(())
}

fn finish(mut b: Prepared) -> BenchRow {
    let out = b.first.take().expect("at least one run");
    b.row.seconds_median = median(b.times);
    b.row.output_digest = digest(&out.stdout);
    b.row.exit = out.exit;
    b.row
}

/// Build one variant at one opt level, run it `repetitions` times.
pub fn bench_one(variant: &str, opt: OptLevel, spec: &BenchSpec, dir: &Path) -> Result<BenchRow> {
    let mut b = prepare(variant, opt, spec, dir)?;
    for _ in 0..spec.repetitions.max(1) {
        time_once(&mut b)?;
    }
    Ok(finish(b))
}

/// Builds everything first, then times in rounds that visit every build
/// once, so slow drift in machine speed hits all variants alike.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let dir = tempfile::tempdir()?;
    let mut built = Vec::new();
    for v in &spec.variants {
        for &opt in &spec.opts {
            built.push(prepare(v, opt, spec, dir.path())?);
        }
    }
    for _ in 0..spec.repetitions.max(1) {
        for b in &mut built {
            time_once(b)?;
        }
    }
    Ok(built.into_iter().map(finish).collect())
}

/// `numerator / denominator` runtime ratio at one opt level. `None` when a
/// row is missing, failed, or printed different output.
#[derive(Debug, Clone, Serialize)]
pub struct Ratio {
    pub label: String,
    pub opt: OptLevel,
    pub value: Option<f64>,
    pub note: String,
}

pub fn ratio(rows: &[BenchRow], num: &str, den: &str, opt: OptLevel) -> Ratio {
    let find = |v: &str| rows.iter().find(|r| r.variant == v && r.opt == opt);
    let label = format!("{num} / {den}");
    let (value, note) = match (find(num), find(den)) {
        (Some(a), Some(b)) if a.exit != 0 || b.exit != 0 => (None, "a run failed".to_string()),
        (Some(a), Some(b)) if a.output_digest != b.output_digest => (None, "outputs differ".to_string()),
        (Some(a), Some(b)) => (Some(a.seconds_median / b.seconds_median), String::new()),
        _ => (None, "not measured".to_string()),
    };
    Ratio {
        label,
        opt,
        value,
        note,
    }
}

pub fn ratios(rows: &[BenchRow]) -> Vec<Ratio> {
    let mut out = Vec::new();
    let mut opts: Vec<OptLevel> = rows.iter().map(|r| r.opt).collect();
    opts.dedup();
    for opt in opts {
        for (num, den) in [
            ("sieve-while", "sieve-for"),
            ("sieve-for", "sieve-native"),
            ("sieve-while", "sieve-native"),
            ("linpack", "linpack-native"),
        ] {
            let r = ratio(rows, num, den, opt);
            if r.note != "not measured" {
                out.push(r);
            }
        }
    }
    out
}

/// JSON lines, one record per row.
pub fn records(rows: &[BenchRow]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("serializable row") + "\n")
        .collect()
}

pub fn table(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:<15} {:<6} {:>10} {:>9} {:>7} {:>10}  {}\n",
        "variant", "opt", "seconds", "text", "data", "zeroinit", "digest"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<15} {:<6} {:>10.4} {:>9} {:>7} {:>10}  {}{}\n",
            r.variant,
            r.opt,
            r.seconds_median,
            r.size_text,
            r.size_data,
            r.size_zeroinit,
            &r.output_digest[..12],
            if r.exit != 0 {
                format!("  exit {}", r.exit)
            } else {
                String::new()
            }
        ));
    }
    for q in ratios(rows) {
        match q.value {
            Some(v) => s.push_str(&format!("{:<30} {:<6} {:>6.2}x\n", q.label, q.opt, v)),
            None => s.push_str(&format!("{:<30} {:<6} n/a ({})\n", q.label, q.opt, q.note)),
        }
    }
    s
}

/// The micro-core heap, for callers that want that profile.
pub fn micro_config(base: &BuildConfig) -> BuildConfig {
    BuildConfig {
        heap_bytes: MICRO_HEAP_BYTES,
        ..base.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_substitute() {
        let s = set_param(SIEVE_FOR, "size", 4095).unwrap();
        assert!(s.contains("\nsize = 4095\n"));
        assert!(set_param("x = 1\n", "size", 3).is_err());
        assert_eq!(Params::for_heap(MICRO_HEAP_BYTES).sieve_size, 4095);
        assert_eq!(Params::for_heap(8_388_608).linpack_n, 1000);
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn mismatched_outputs_abort_the_ratio() {
        let row = |variant: &str, digest: &str| BenchRow {
            suite: "sieve".into(),
            variant: variant.into(),
            opt: OptLevel::Speed,
            seconds_median: 1.0,
            size_text: 0,
            size_data: 0,
            size_zeroinit: 0,
            output_digest: digest.into(),
            exit: 0,
            repetitions: 1,
            flags: String::new(),
            cc: "cc".into(),
            heap_bytes: 0,
            int_bits: 32,
            real_bits: 64,
            bounds: true,
            params: Params::for_heap(0),
        };
        let rows = vec![row("sieve-for", "aa"), row("sieve-native", "bb")];
        let r = ratio(&rows, "sieve-for", "sieve-native", OptLevel::Speed);
        assert!(r.value.is_none());
        assert_eq!(r.note, "outputs differ");
    }
}
