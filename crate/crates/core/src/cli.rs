//! The `kneser` command line.
//!
//! Exit status is the machine contract: 0 for success or acceptance, 1 for
//! a rejection or any nonzero failure count, 2 for usage errors. Results go
//! to `out`, diagnostics to `err`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::engine::{audit_contradiction, certify, kneser_bound, verify, Certificate};
use crate::error::Error;
use crate::group::{embed_integers, FinAbGroup, IntegerEmbedding};
use crate::oracle::{self, ExhaustOptions, CSV_HEADER};
use crate::parse::{parse_elem_literal, parse_group_spec, parse_integer_set, parse_set_literal, GroupSpec};
use crate::set::GSet;

pub const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (certificate format kneser-certificate v1)"
);

#[derive(Parser, Debug)]
#[command(name = "kneser", version = VERSION, about = "Sumsets, stabilizers and Kneser bound certificates in finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SetInput {
    /// Group spec: `Z6`, `Z2xZ4`, or `Z` for integer sets
    group: String,
    /// Set literals such as "{0,1,3}" or "{(0,1),(1,0)}"
    sets: Vec<String>,
    /// Read set literals from a file, one per line (blank lines and `#` comments skipped)
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(required = true)]
    groups: Vec<String>,
    /// Also round-trip certify/verify on every pair
    #[arg(long)]
    certify: bool,
    #[arg(long)]
    max_set_size: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Largest group order accepted for exhaustive sweeps
    #[arg(long, default_value_t = oracle::DEFAULT_EXHAUST_CAP)]
    cap: usize,
    /// Append wall-clock time to the summary lines
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print A+B
    Sumset(SetInput),
    /// Print the stabilizer of each set
    Stabilizer(SetInput),
    /// Evaluate the Kneser bound for A and B
    Check(SetInput),
    /// Build a certificate for A and B
    Certify {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate against A and B
    Verify {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Check every ordered pair of nonempty subsets
    Exhaust(SweepArgs),
    /// Check seeded pseudorandom pairs
    Sample {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Exhaustive Cauchy-Davenport check in Z_p
    #[command(name = "cd-check")]
    CdCheck {
        #[arg(required = true)]
        primes: Vec<u32>,
        #[arg(long, default_value_t = oracle::DEFAULT_EXHAUST_CAP)]
        cap: usize,
    },
    /// Report the descent diagnostics for convergent C and the pair (a, b)
    Audit {
        group: String,
        c: String,
        a_set: String,
        b_set: String,
        a: String,
        b: String,
    },
}

/// A failure carrying its exit status.
struct Exit(i32, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit(2, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Exit {
    Exit(2, msg.into())
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| Exit(2, format!("write failed: {e}")))?
    };
}

fn read_sets(input: &SetInput) -> Result<Vec<String>, Exit> {
    let Some(path) = &input.file else {
        return Ok(input.sets.clone());
    };
    if !input.sets.is_empty() {
        return Err(usage("give set literals either inline or with --file, not both"));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn with_literal(err: Error, literal: &str) -> Exit {
    match err {
        Error::Parse { position, message } => {
            usage(format!("in {literal:?} at position {position}: {message}"))
        }
        other => other.into(),
    }
}

fn group_of(spec: &str) -> Result<GroupSpec, Exit> {
    parse_group_spec(spec).map_err(|e| with_literal(e, spec))
}

fn finite_group(spec: &str) -> Result<FinAbGroup, Exit> {
    Ok(group_of(spec)?.build()?)
}

fn set_in(g: &FinAbGroup, literal: &str) -> Result<GSet, Exit> {
    parse_set_literal(g, literal).map_err(|e| with_literal(e, literal))
}

/// Resolves a pair of literals, embedding integer sets when the group is `Z`.
fn pair(spec: &GroupSpec, group: &str, a: &str, b: &str) -> Result<(GSet, GSet, Option<IntegerEmbedding>), Exit> {
    match spec {
        GroupSpec::Integers => {
            let ia = parse_integer_set(a).map_err(|e| with_literal(e, a))?;
            let ib = parse_integer_set(b).map_err(|e| with_literal(e, b))?;
            let (emb, ea, eb) = embed_integers(&ia, &ib)?;
            let sa = GSet::from_elems(&emb.group, &ea)?;
            let sb = GSet::from_elems(&emb.group, &eb)?;
            Ok((sa, sb, Some(emb)))
        }
        GroupSpec::Product(_) => {
            let g = finite_group(group)?;
            Ok((set_in(&g, a)?, set_in(&g, b)?, None))
        }
    }
}

fn pairs_of(sets: &[String]) -> Result<Vec<(&str, &str)>, Exit> {
    if sets.is_empty() || !sets.len().is_multiple_of(2) {
        return Err(usage(format!(
            "expected set literals in pairs (A B), got {}",
            sets.len()
        )));
    }
    Ok(sets.chunks(2).map(|c| (c[0].as_str(), c[1].as_str())).collect())
}

fn exactly_two(sets: &[String]) -> Result<(&str, &str), Exit> {
    match sets {
        [a, b] => Ok((a, b)),
        _ => Err(usage(format!("expected exactly two set literals, got {}", sets.len()))),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Exit> {
    match command {
        Command::Sumset(input) => {
            let spec = group_of(&input.group)?;
            let sets = read_sets(&input)?;
            for (a, b) in pairs_of(&sets)? {
                let (sa, sb, emb) = pair(&spec, &input.group, a, b)?;
                if sa.is_empty() || sb.is_empty() {
                    say!(out, "{{}}");
                    continue;
                }
                let sum = sa.sumset(&sb)?;
                match emb {
                    None => say!(out, "{sum}"),
                    Some(emb) => {
                        let lifted: Vec<String> =
                            sum.members().iter().map(|x| emb.lift_sum(x).to_string()).collect();
                        say!(out, "{{{}}}", lifted.join(","));
                    }
                }
            }
            Ok(0)
        }
        Command::Stabilizer(input) => {
            let g = finite_group(&input.group)?;
            let sets = read_sets(&input)?;
            if sets.is_empty() {
                return Err(usage("expected at least one set literal"));
            }
            for literal in &sets {
                say!(out, "{}", set_in(&g, literal)?.stabilizer());
            }
            Ok(0)
        }
        Command::Check(input) => {
            let spec = group_of(&input.group)?;
            let sets = read_sets(&input)?;
            let mut status = 0;
            for (a, b) in pairs_of(&sets)? {
                let (sa, sb, emb) = pair(&spec, &input.group, a, b)?;
                let r = kneser_bound(&sa, &sb)?;
                say!(out, "group: {}", sa.group());
                if let Some(emb) = &emb {
                    say!(out, "embedding: {emb}");
                }
                say!(out, "A: {sa}");
                say!(out, "B: {sb}");
                say!(out, "K: {}", r.k);
                say!(
                    out,
                    "|A+B| = {}, |A+K| + |B+K| - |K| = {} + {} - {} = {}",
                    r.lhs,
                    r.a_plus_k,
                    r.b_plus_k,
                    r.k.order(),
                    r.rhs
                );
                let verdict = if !r.holds {
                    status = 1;
                    "VIOLATED"
                } else if r.equality {
                    "equality"
                } else {
                    "strict"
                };
                say!(out, "lhs={} rhs={} {verdict}", r.lhs, r.rhs);
            }
            Ok(status)
        }
        Command::Certify { input, out: path } => {
            let spec = group_of(&input.group)?;
            let sets = read_sets(&input)?;
            let (a, b) = exactly_two(&sets)?;
            let (sa, sb, emb) = pair(&spec, &input.group, a, b)?;
            let cert = certify(&sa, &sb)?;
            let text = cert.to_json();
            match path {
                Some(path) => {
                    fs::write(&path, &text)
                        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
                    if let Some(emb) = &emb {
                        say!(out, "embedding: {emb}");
                    }
                    say!(out, "wrote certificate for claimed bound {} to {}", cert.claimed_bound, path.display());
                }
                None => write!(out, "{text}").map_err(|e| Exit(2, format!("write failed: {e}")))?,
            }
            Ok(0)
        }
        Command::Verify { input, cert } => {
            let spec = group_of(&input.group)?;
            let sets = read_sets(&input)?;
            let (a, b) = exactly_two(&sets)?;
            let (sa, sb, _) = pair(&spec, &input.group, a, b)?;
            let text = fs::read_to_string(&cert)
                .map_err(|e| usage(format!("cannot read {}: {e}", cert.display())))?;
            let report = match Certificate::from_json(&text) {
                Ok(c) => verify(&c, &sa, &sb),
                Err(e) => {
                    say!(out, "reject: {e}");
                    return Ok(1);
                }
            };
            say!(out, "{report}");
            Ok(if report.accepted { 0 } else { 1 })
        }
        Command::Exhaust(sweep) => {
            let opts = sweep_options(&sweep);
            let reports = sweep
                .groups
                .iter()
                .map(|g| Ok(oracle::exhaust(&finite_group(g)?, &opts)?))
                .collect::<Result<Vec<_>, Exit>>()?;
            print_reports(out, &reports, sweep.timing)
        }
        Command::Sample { sweep, count, seed } => {
            let opts = sweep_options(&sweep);
            let reports = sweep
                .groups
                .iter()
                .map(|g| Ok(oracle::sample(&finite_group(g)?, count, seed, &opts)?))
                .collect::<Result<Vec<_>, Exit>>()?;
            print_reports(out, &reports, sweep.timing)
        }
        Command::CdCheck { primes, cap } => {
            let reports = primes
                .iter()
                .map(|&p| Ok(oracle::cauchy_davenport_check(p, cap)?))
                .collect::<Result<Vec<_>, Exit>>()?;
            say!(out, "group,pairs_checked,violations");
            for r in &reports {
                say!(out, "{}", r.csv_row());
            }
            let violations: u64 = reports.iter().map(|r| r.violations).sum();
            for r in &reports {
                let verdict = if r.violations == 0 { "OK" } else { "FAIL" };
                say!(out, "# {verdict} Z{}: {} pairs, {} violations", r.p, r.pairs_checked, r.violations);
            }
            Ok(if violations == 0 { 0 } else { 1 })
        }
        Command::Audit { group, c, a_set, b_set, a, b } => {
            let g = finite_group(&group)?;
            let (sc, sa, sb) = (set_in(&g, &c)?, set_in(&g, &a_set)?, set_in(&g, &b_set)?);
            let x = parse_elem_literal(&g, &a).map_err(|e| with_literal(e, &a))?;
            let y = parse_elem_literal(&g, &b).map_err(|e| with_literal(e, &b))?;
            let d = audit_contradiction(&sc, &sa, &sb, &x, &y)?;
            say!(out, "H: {}", d.h);
            say!(out, "a+H = b+H: {}", d.cosets_equal);
            say!(out, "S: {}", d.s);
            say!(out, "T: {}", d.t);
            say!(out, "S and T disjoint: {}", d.s_t_disjoint);
            for p in &d.parts {
                say!(out, "i={}: A_i={} B_i={} H_i={} |A_i+B_i|={} H_i=S(C_i): {}", p.i, p.a_i, p.b_i, p.h_i, p.sumset_size, p.h_i_is_stab_c_i);
                say!(out, "  slack: union {}, sumset {}, parts {}", p.union_loss, p.sumset_slack, p.parts_slack);
                say!(out, "  |H| = {} vs |A_i|+|B_i|+|H_i| = {}", p.coset_size, p.parts_total);
                say!(out, "  deficit: {} vs {} vs {}", p.deficit_from_c, p.deficit_from_sumset, p.deficit_from_parts);
            }
            say!(out, "a+H = S ∪ A_1 ∪ B_2: {}", d.a_coset_partitioned);
            say!(out, "b+H = T ∪ A_2 ∪ B_1: {}", d.b_coset_partitioned);
            say!(out, "final: {} vs {}", d.final_lhs, d.final_rhs);
            Ok(0)
        }
    }
}

fn sweep_options(sweep: &SweepArgs) -> ExhaustOptions {
    ExhaustOptions {
        certify: sweep.certify,
        max_set_size: sweep.max_set_size,
        jobs: sweep.jobs,
        cap: sweep.cap,
    }
}

fn print_reports(out: &mut dyn Write, reports: &[oracle::ExhaustReport], timing: bool) -> Result<i32, Exit> {
    say!(out, "{CSV_HEADER}");
    for r in reports {
        say!(out, "{}", r.csv_row());
    }
    for r in reports {
        say!(out, "# {}", r.summary(timing));
    }
    Ok(if reports.iter().all(|r| r.failures() == 0) { 0 } else { 1 })
}
