//! Command-line surface for the record scans and criterion checks.
//!
//! Exit codes: 0 on success, 1 when a verification finds a violation above
//! the expected cutoff (or an oracle mismatch), 2 on usage errors. All
//! diagnostics go to stderr; stdout carries only the machine-readable
//! report, so identical flags produce byte-identical output regardless of
//! worker count.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use grosswald::analytic::{self, BurgessConstant, CriterionParams};
use grosswald::records::{self, RecordKind, ScanConfig, RECORDS_HEADER};
use grosswald::sieve::{enumerate_primes, factor_range, factored_prime, DEFAULT_SEGMENT_WIDTH};
use grosswald::{oracle, proots, Error};

#[derive(Parser)]
#[command(
    name = "grosswald",
    version,
    about = "Least-primitive-root record scans and Grosswald-inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Least primitive root g(p).
    G,
    /// Least prime primitive root.
    Gp,
    /// Least magnitude m such that -m is a primitive root.
    Gn,
}

impl Kind {
    fn record(self) -> RecordKind {
        match self {
            Kind::G => RecordKind::G,
            Kind::Gp => RecordKind::Gp,
            Kind::Gn => RecordKind::Gn,
        }
    }

    /// Largest prime known to violate the inequality for this kind;
    /// anything above it makes `verify` fail.
    fn default_cutoff(self) -> u64 {
        match self {
            Kind::G | Kind::Gn => 409,
            Kind::Gp => 2791,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Section {
    Table1,
    Thresholds,
    Candidates,
    Corollary,
}

#[derive(Subcommand)]
enum Command {
    /// Print the primes in [from, to), one per line.
    Primes {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Print a prime p with the odd prime factors of p-1.
    Factor {
        #[arg(long)]
        p: u64,
    },
    /// Print the least primitive root of p of the requested kind.
    Gp {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Kind::G)]
        kind: Kind,
    },
    /// Scan a range for record values and Grosswald violations.
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Record kinds to track; repeat the flag for several.
        #[arg(long, value_enum, default_values_t = [Kind::G])]
        kind: Vec<Kind>,
        #[arg(long, default_value_t = DEFAULT_SEGMENT_WIDTH)]
        segment_width: u64,
        /// Worker threads; 0 sizes the pool to the available cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Records file; records go to stdout in the same format when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Checkpoint file for resumable runs.
        #[arg(long, requires = "out")]
        checkpoint: Option<PathBuf>,
    },
    /// Scan a range and fail if any violation lies above the known cutoff.
    Verify {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = Kind::G)]
        kind: Kind,
        /// Largest prime allowed to violate the inequality; defaults to the
        /// last known violation for the kind (g: 409, gp: 2791, gn: 409).
        #[arg(long)]
        expect_last_violation: Option<u64>,
    },
    /// Print the analytic criterion report (all sections by default).
    Analytic {
        #[arg(value_enum)]
        section: Option<Section>,
    },
    /// Compare the fast search paths against the brute-force oracle.
    OracleCheck {
        /// Check g(p) for primes below this bound (at most 10^6); the gp
        /// and gn variants are checked below min(bound, 10^4).
        #[arg(long)]
        to: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> grosswald::Result<ExitCode> {
    match command {
        Command::Primes { from, to } => {
            for p in enumerate_primes(from, to, DEFAULT_SEGMENT_WIDTH)? {
                println!("{p}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Factor { p } => {
            let fp = factored_prime(p)?;
            let odd = fp.odd_factors.iter().map(u64::to_string).collect::<Vec<_>>();
            println!("{}\t{}", fp.p, odd.join(","));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gp { p, kind } => {
            let fp = factored_prime(p)?;
            let value = match kind {
                Kind::G => proots::least_primitive_root(&fp),
                Kind::Gp => proots::least_prime_primitive_root(&fp),
                Kind::Gn => proots::least_negative_primitive_root(&fp, None),
            };
            println!("{}({p}) = {value}", kind.record().label());
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { from, to, kind, segment_width, workers, out, checkpoint } => {
            run_scan(from, to, &kind, segment_width, workers, out.as_deref(), checkpoint.as_deref())
        }
        Command::Verify { from, to, kind, expect_last_violation } => {
            run_verify(from, to, kind, expect_last_violation)
        }
        Command::Analytic { section } => run_analytic(section),
        Command::OracleCheck { to } => run_oracle_check(to),
    }
}

fn run_scan(
    from: u64,
    to: u64,
    kinds: &[Kind],
    segment_width: u64,
    workers: usize,
    out: Option<&Path>,
    checkpoint: Option<&Path>,
) -> grosswald::Result<ExitCode> {
    let record_kinds: Vec<RecordKind> = kinds.iter().map(|k| k.record()).collect();
    let mut config = ScanConfig::new(from, to, &record_kinds);
    config.segment_width = segment_width;
    config.workers = workers;

    let outcome = match out {
        Some(path) => records::scan_to_files(&config, path, checkpoint)?,
        None => {
            let outcome = records::scan(&config)?;
            println!("{RECORDS_HEADER}");
            for r in &outcome.records {
                println!("{}\t{}\t{}", r.kind.label(), r.p, r.value);
            }
            outcome
        }
    };
    for v in &outcome.violations {
        eprintln!("violation: {}({}) = {}", v.kind.label(), v.p, v.value);
    }
    eprintln!(
        "scan complete through {}: {} new records, {} violations",
        outcome.last_hi,
        outcome.records.len(),
        outcome.violations.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_verify(
    from: u64,
    to: u64,
    kind: Kind,
    expect_last_violation: Option<u64>,
) -> grosswald::Result<ExitCode> {
    let config = ScanConfig::new(from, to, &[kind.record()]);
    let outcome = records::scan(&config)?;
    let cutoff = expect_last_violation.unwrap_or_else(|| kind.default_cutoff());
    let label = kind.record().label();
    match outcome.violations.iter().map(|v| v.p).max() {
        Some(last) => println!(
            "{} violations of {label}(p) < sqrt(p) - 2 in [{from}, {to}); last at p = {last}",
            outcome.violations.len()
        ),
        None => println!("0 violations of {label}(p) < sqrt(p) - 2 in [{from}, {to})"),
    }
    let above: Vec<_> = outcome.violations.iter().filter(|v| v.p > cutoff).collect();
    if above.is_empty() {
        println!("ok: no violation above {cutoff}");
        Ok(ExitCode::SUCCESS)
    } else {
        for v in above {
            eprintln!("unexpected violation: {}({}) = {}", v.kind.label(), v.p, v.value);
        }
        Ok(ExitCode::from(1))
    }
}

fn run_analytic(section: Option<Section>) -> grosswald::Result<ExitCode> {
    let bc = BurgessConstant::default();
    match section {
        Some(Section::Table1) => print_table1(&bc),
        Some(Section::Thresholds) => print_thresholds(&bc)?,
        Some(Section::Candidates) => print_candidates(),
        Some(Section::Corollary) => print_corollary(&bc)?,
        None => {
            print_table1(&bc);
            print_thresholds(&bc)?;
            print_candidates();
            print_corollary(&bc)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_table1(bc: &BurgessConstant) {
    for row in analytic::verify_table1(bc) {
        let tag = if row.synthetic { "residual" } else { "row" };
        let status = if row.all_hold { "holds" } else { "fails" };
        let mut line = format!("{tag}\t{}..{}\t{}\t{status}", row.n_lo, row.n_hi, row.s);
        if !row.failing.is_empty() {
            let failing: Vec<String> = row.failing.iter().map(u32::to_string).collect();
            line = format!("{line}\t{}", failing.join(","));
        }
        println!("{line}");
    }
}

fn print_thresholds(bc: &BurgessConstant) -> grosswald::Result<()> {
    let min_omega = analytic::min_omega_for_theorem3(bc)?;
    let upper = analytic::solve_p_threshold(analytic::theorem3_rhs_log(min_omega - 1, bc))?;
    println!("min_omega\t{min_omega}");
    println!("upper_exponent_log10\t{upper:.4}");
    let params = CriterionParams::worst_case(41, 37, bc.p_floor);
    let rhs = analytic::theorem4_rhs_log(&params, bc)?.natural_log;
    println!("theorem4_rhs\t{}", format_pow10(rhs / std::f64::consts::LN_10));
    println!("theorem4_rhs_published\t4.97e62");
    println!("p_threshold\t{}", format_pow10(analytic::solve_p_threshold(rhs)?));
    let from_published = analytic::solve_p_threshold(4.97e62f64.ln())?;
    println!("p_threshold_from_published_rhs\t{}", format_pow10(from_published));
    Ok(())
}

fn print_candidates() {
    let p41_log10 = analytic::log10_big(&analytic::primorial(41));
    let p_max_log10 = 3.67e71f64.log10();
    println!("primorial_41\t{}", format_pow10(p41_log10));
    println!("p_max\t{}", format_pow10(p_max_log10));
    println!("candidate_count\t{}", analytic::count_candidate_primes(41, p_max_log10));
    println!("candidate_count_published\t329");
}

fn print_corollary(bc: &BurgessConstant) -> grosswald::Result<()> {
    let p_max_log10 = 3.67e71f64.log10();
    println!("corollary_c\t{:.4}", analytic::corollary_constant(p_max_log10));
    println!("corollary_c_published\t5.19");
    let params = CriterionParams::worst_case(41, 37, bc.p_floor);
    let rhs = analytic::theorem4_rhs_log(&params, bc)?.natural_log;
    let computed = analytic::solve_p_threshold(rhs)?;
    println!(
        "corollary_c_at_computed_threshold\t{:.4}",
        analytic::corollary_constant(computed)
    );
    Ok(())
}

/// Renders a base-10 logarithm as mantissa-and-exponent scientific form.
fn format_pow10(log10: f64) -> String {
    let exp = log10.floor();
    format!("{:.3}e{}", 10f64.powf(log10 - exp), exp as i64)
}

fn run_oracle_check(to: u64) -> grosswald::Result<ExitCode> {
    if to > oracle::ORACLE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "--to {to} exceeds the oracle limit {}",
            oracle::ORACLE_LIMIT
        )));
    }
    let mut mismatches = 0u64;
    let mut checked = 0u64;
    for fp in factor_range(3, to, DEFAULT_SEGMENT_WIDTH)? {
        let got = proots::least_primitive_root(&fp);
        let want = oracle::naive_g(fp.p);
        if got != want {
            eprintln!("mismatch: g({}) = {got}, oracle says {want}", fp.p);
            mismatches += 1;
        }
        checked += 1;
    }
    println!("g agrees with the oracle for {checked} primes below {to}");

    let cap = to.min(10_000);
    checked = 0;
    for fp in factor_range(3, cap, DEFAULT_SEGMENT_WIDTH)? {
        let got_gp = proots::least_prime_primitive_root(&fp);
        let want_gp = oracle::naive_ghat(fp.p);
        if got_gp != want_gp {
            eprintln!("mismatch: gp({}) = {got_gp}, oracle says {want_gp}", fp.p);
            mismatches += 1;
        }
        let got_gn = proots::least_negative_primitive_root(&fp, None);
        let want_gn = oracle::naive_h(fp.p);
        if got_gn != want_gn {
            eprintln!("mismatch: gn({}) = {got_gn}, oracle says {want_gn}", fp.p);
            mismatches += 1;
        }
        checked += 1;
    }
    println!("gp and gn agree with the oracle for {checked} primes below {cap}");

    if mismatches == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{mismatches} mismatches");
        Ok(ExitCode::from(1))
    }
}
