//! Command-line front end: enumeration with a persistent JSONL class cache,
//! verification of the mass identities, Dirichlet series dumps, local genus
//! dumps, and single-determinant mass queries.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O error.

use clap::{Parser, Subcommand, ValueEnum};
use std::io::{Read, Seek, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ternary_mass::arith::{format_rat, rat_int};
use ternary_mass::dirichlet::DirichletSeries;
use ternary_mass::forms::{
    divisor_formula, enumerate_records, records_from_jsonl, records_to_jsonl, FormRecord,
    MassTable,
};
use ternary_mass::local_odd::{
    a_star_odd, b_star_odd, enumerate_odd_local_genera, hasse_odd, normalized_density_odd,
};
use ternary_mass::local_two::{
    a_star_two, b_star_two, enumerate_two_adic_genera, hasse_two, normalized_density_two,
};
use ternary_mass::series::{
    build_a_series, build_a_series_local, build_b_series, build_b_series_local,
    build_mass_series, verify_bundle,
};

const DEFAULT_CACHE: &str = "ternary-mass-cache.jsonl";

#[derive(Parser)]
#[command(
    name = "ternary-mass",
    version,
    about = "Exact masses of positive definite integral ternary quadratic forms"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Mass,
    PrimitiveMass,
    A,
    B,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate reduced classes up to a Hessian determinant bound and
    /// persist the class table as JSON lines.
    Enumerate {
        /// Even Hessian determinant bound (>= 2).
        #[arg(long)]
        max_det: i64,
        /// Worker threads for enumeration (never affects output bytes).
        #[arg(long)]
        workers: Option<usize>,
        /// Cache file (default: $TERNARY_MASS_CACHE or ./ternary-mass-cache.jsonl).
        #[arg(long)]
        cache_path: Option<PathBuf>,
    },
    /// Check enumerated masses against the divisor formula and the
    /// Dirichlet-series route; exit 0 iff every determinant passes.
    Verify {
        /// Even Hessian determinant bound (>= 2).
        #[arg(long)]
        max_det: i64,
        /// Fail instead of building when the cache is missing or too small.
        #[arg(long)]
        no_build: bool,
        /// Worker threads for enumeration.
        #[arg(long)]
        workers: Option<usize>,
        /// Cache file (default: $TERNARY_MASS_CACHE or ./ternary-mass-cache.jsonl).
        #[arg(long)]
        cache_path: Option<PathBuf>,
        /// Emit machine-readable JSON lines instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Dump coefficients of one of the global Dirichlet series.
    Series {
        /// Which series: the total mass, its primitive companion, or the
        /// untwisted (A) / Hasse-twisted (B) local density series.
        #[arg(long, value_enum)]
        which: Which,
        /// Truncation bound (>= 1).
        #[arg(long)]
        bound: usize,
    },
    /// Dump the local genus list at one prime, valuation, and unit class,
    /// with densities, Hasse invariants, and the density sum totals.
    Local {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        valuation: u32,
        /// Unit class: +1/-1 at odd primes; 1, 3, 5, or 7 at p = 2.
        #[arg(long, allow_hyphen_values = true)]
        unit: i64,
    },
    /// Print the total mass at one Hessian determinant.
    Mass {
        #[arg(long)]
        det: i64,
    },
}

enum CliError {
    Usage(String),
    Mismatch(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Mismatch(m) | CliError::Io(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Enumerate { max_det, workers, cache_path } => {
            check_max_det(max_det)?;
            let pool = make_pool(workers)?;
            let path = resolve_cache(cache_path);
            let records = pool.install(|| enumerate_records(max_det));
            let written = update_cache(&path, &records, max_det)?;
            println!("wrote {} class records (det_h <= {}) to {}", written, max_det, path.display());
            Ok(())
        }
        Cmd::Verify { max_det, no_build, workers, cache_path, json } => {
            check_max_det(max_det)?;
            let path = resolve_cache(cache_path);
            let records = load_or_build(&path, max_det, no_build, workers)?;
            let table = MassTable::from_records(&records, max_det);
            let bundle = build_mass_series(max_det as usize);
            let report = verify_bundle(&bundle, &table);
            if json {
                for row in &report.rows {
                    println!("{}", row.to_json());
                }
            } else {
                println!("{:>6}  {:>10}  {:>14}  {:>14}  {}", "S", "which", "enumerated", "formula", "pass");
                for row in &report.rows {
                    println!(
                        "{:>6}  {:>10}  {:>14}  {:>14}  {}",
                        row.s,
                        row.which,
                        format_rat(&row.enumerated),
                        format_rat(&row.formula),
                        if row.pass { "ok" } else { "FAIL" }
                    );
                }
            }
            for (name, ok) in &report.internal_checks {
                println!("check: {} ... {}", name, if *ok { "ok" } else { "FAIL" });
            }
            if report.all_pass() {
                println!("verify: all determinants <= {} pass", max_det);
                Ok(())
            } else {
                Err(CliError::Mismatch(format!(
                    "mismatch at S = {:?}",
                    report.failing_s()
                )))
            }
        }
        Cmd::Series { which, bound } => {
            if bound < 1 {
                return Err(CliError::Usage("--bound must be >= 1".into()));
            }
            let (series, routes_agree) = match which {
                Which::Mass => (build_mass_series(bound).d_mass, None),
                Which::PrimitiveMass => (build_mass_series(bound).d_mass_star, None),
                Which::A => {
                    let closed = build_a_series(bound);
                    let agree = build_a_series_local(bound) == closed;
                    (closed, Some(agree))
                }
                Which::B => {
                    let closed = build_b_series(bound);
                    let agree = build_b_series_local(bound) == closed;
                    (closed, Some(agree))
                }
            };
            print!("{}", dump_even_aware(&series, which));
            if let Some(agree) = routes_agree {
                println!("routes-agree={}", agree);
                if !agree {
                    return Err(CliError::Mismatch("local and closed-form routes disagree".into()));
                }
            }
            Ok(())
        }
        Cmd::Local { prime, valuation, unit } => cmd_local(prime, valuation, unit),
        Cmd::Mass { det } => {
            if det < 1 {
                return Err(CliError::Usage("--det must be positive".into()));
            }
            println!("{}", format_rat(&divisor_formula(det)));
            Ok(())
        }
    }
}

fn check_max_det(max_det: i64) -> Result<(), CliError> {
    if max_det < 2 || max_det % 2 != 0 {
        Err(CliError::Usage("--max-det must be an even integer >= 2".into()))
    } else {
        Ok(())
    }
}

fn make_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let k = workers.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    if k < 1 {
        return Err(CliError::Usage("--workers must be >= 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build()
        .map_err(|e| CliError::Io(format!("cannot build worker pool: {e}")))
}

fn resolve_cache(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("TERNARY_MASS_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE))
}

/// Mass series dumps skip odd indices (always zero); A/B dumps print all.
fn dump_even_aware(series: &DirichletSeries, which: Which) -> String {
    match which {
        Which::Mass | Which::PrimitiveMass => {
            let mut out = String::new();
            for n in 1..=series.bound() {
                if n % 2 == 0 {
                    out.push_str(&format!("{}\t{}\n", n, format_rat(series.coeff(n))));
                }
            }
            out
        }
        _ => series.dump(),
    }
}

/// Merges freshly computed records into the cache under an exclusive lock:
/// overlapping records must agree, records beyond the new bound are kept.
/// Returns the number of records written.
fn update_cache(path: &PathBuf, records: &[FormRecord], max_det: i64) -> Result<usize, CliError> {
    let mut file = std::fs::OpenOptions::new()
        .read(true)
        .write(true)
        .create(true)
        .truncate(false)
        .open(path)
        .map_err(|e| CliError::Io(format!("cannot open cache {}: {e}", path.display())))?;
    file.lock()
        .map_err(|e| CliError::Io(format!("cannot lock cache {}: {e}", path.display())))?;
    let mut text = String::new();
    file.read_to_string(&mut text)
        .map_err(|e| CliError::Io(format!("cannot read cache {}: {e}", path.display())))?;
    let existing = records_from_jsonl(&text)
        .map_err(|e| CliError::Io(format!("cache {}: {e}", path.display())))?;
    for old in existing.iter().filter(|r| r.det_h <= max_det) {
        if !records.contains(old) {
            return Err(CliError::Mismatch(format!(
                "cache {} disagrees with recomputation at det_h = {}",
                path.display(),
                old.det_h
            )));
        }
    }
    let mut merged: Vec<FormRecord> = records.to_vec();
    merged.extend(existing.into_iter().filter(|r| r.det_h > max_det));
    merged.sort_unstable_by_key(|r| (r.det_h, r.a, r.b, r.c, r.r, r.s, r.t));
    merged.dedup();
    let out = records_to_jsonl(&merged);
    file.set_len(0)
        .and_then(|_| file.rewind())
        .and_then(|_| file.write_all(out.as_bytes()))
        .map_err(|e| CliError::Io(format!("cannot write cache {}: {e}", path.display())))?;
    Ok(merged.len())
}

/// Loads cached records covering `max_det`, or (unless `no_build`) builds
/// and persists them.
fn load_or_build(
    path: &PathBuf,
    max_det: i64,
    no_build: bool,
    workers: Option<usize>,
) -> Result<Vec<FormRecord>, CliError> {
    let cached = match std::fs::read_to_string(path) {
        Ok(text) => Some(
            records_from_jsonl(&text)
                .map_err(|e| CliError::Io(format!("cache {}: {e}", path.display())))?,
        ),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => {
            return Err(CliError::Io(format!("cannot read cache {}: {e}", path.display())))
        }
    };
    // A cache covers the bound when it holds a class at the largest even
    // S <= max_det with nonzero formula mass (the divisor formula guarantees
    // a class exists there).
    let covers = |records: &[FormRecord]| -> bool {
        let mut s = max_det;
        while s >= 2 {
            if divisor_formula(s) != rat_int(0) {
                return records.iter().any(|r| r.det_h == s);
            }
            s -= 2;
        }
        true
    };
    match cached {
        Some(records) if covers(&records) => Ok(records),
        Some(_) | None if no_build => Err(CliError::Io(format!(
            "cache {} missing or below --max-det {} and --no-build given",
            path.display(),
            max_det
        ))),
        _ => {
            let pool = make_pool(workers)?;
            let records = pool.install(|| enumerate_records(max_det));
            update_cache(path, &records, max_det)?;
            Ok(records)
        }
    }
}

fn cmd_local(prime: u64, valuation: u32, unit: i64) -> Result<(), CliError> {
    if prime < 2 || ternary_mass::arith::factor(prime).len() != 1
        || ternary_mass::arith::factor(prime)[0].0 != prime
    {
        return Err(CliError::Usage(format!("--prime {} is not prime", prime)));
    }
    if prime == 2 {
        if ![1, 3, 5, 7].contains(&unit) {
            return Err(CliError::Usage("--unit must be 1, 3, 5, or 7 at p = 2".into()));
        }
        let genera = enumerate_two_adic_genera(valuation, unit);
        println!(
            "p=2 hessian-valuation={} unit={} : {} decorated genera",
            valuation,
            unit,
            genera.len()
        );
        for g in &genera {
            let blocks: Vec<String> = g
                .blocks
                .iter()
                .map(|(k, s, st)| format!("{:?}@{}[det {} odd {} sign {:+}]", k, s, st.det, st.oddity, st.sign))
                .collect();
            println!(
                "  {}  density={}  c2={:+}",
                blocks.join(" "),
                format_rat(&normalized_density_two(g)),
                hasse_two(g)
            );
        }
        println!("A* = {}", format_rat(&a_star_two(valuation, unit)));
        println!("B* = {}", format_rat(&b_star_two(valuation, unit)));
    } else {
        if unit != 1 && unit != -1 {
            return Err(CliError::Usage("--unit must be +1 or -1 at odd primes".into()));
        }
        let genera = enumerate_odd_local_genera(prime, valuation, unit as i32);
        println!(
            "p={} gram-valuation={} unit-character={:+} : {} genera",
            prime,
            valuation,
            unit,
            genera.len()
        );
        for g in &genera {
            println!(
                "  (a,b)=({},{}) eps=({:+},{:+},{:+})  density={}  hasse={:+}",
                g.a,
                g.b,
                g.eps1,
                g.eps2,
                g.eps3,
                format_rat(&normalized_density_odd(g)),
                hasse_odd(g)
            );
        }
        println!("A* = {}", format_rat(&a_star_odd(prime, valuation, unit as i32)));
        println!("B* = {}", format_rat(&b_star_odd(prime, valuation, unit as i32)));
    }
    Ok(())
}
