//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.
//!
//! Every criterion also emits an artifact (CSV rows, certificate JSON,
//! verifier reasons). Criterion 9 reruns 1 through 8 on a single worker
//! thread and compares the artifacts byte for byte.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kneser::engine::{certify, initial_convergent, verify, Certificate, Step};
use kneser::oracle::{
    brute_min_stab_convergent, cauchy_davenport_check, convergent_agreement, exhaust, progression_equality_check,
    sample, sample_pairs, ExhaustOptions, ExhaustReport,
};
use kneser::{make_group, FinAbGroup, GSet, GroupElem};

const SEED: u64 = 20_240_601;

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
    artifact: String,
}

fn group(f: &[u32]) -> FinAbGroup {
    make_group(f).expect("valid group")
}

fn set(g: &FinAbGroup, xs: &[u32]) -> GSet {
    let elems: Vec<_> = xs.iter().map(|&x| GroupElem::scalar(x)).collect();
    GSet::from_elems(g, &elems).expect("valid set")
}

fn sweep(groups: &[FinAbGroup], opts: &ExhaustOptions) -> (Vec<ExhaustReport>, Duration) {
    let start = Instant::now();
    let reports = groups.iter().map(|g| exhaust(g, opts).expect("sweep runs")).collect();
    (reports, start.elapsed())
}

fn csv(reports: &[ExhaustReport]) -> String {
    reports.iter().map(|r| r.csv_row() + "\n").collect()
}

fn total(reports: &[ExhaustReport], f: impl Fn(&ExhaustReport) -> u64) -> u64 {
    reports.iter().map(f).sum()
}

fn ac1(jobs: Option<usize>) -> Outcome {
    let groups: Vec<_> = (1..=8).map(|n| group(&[n])).collect();
    let (reports, took) = sweep(&groups, &ExhaustOptions { jobs, ..Default::default() });
    let pairs = total(&reports, |r| r.pairs_checked);
    let violations = total(&reports, |r| r.bound_violations);
    let disagreements = total(&reports, |r| r.oracle_disagreements);
    Outcome {
        id: 1,
        title: "exhaustive bound, Z1..Z8",
        pass: violations == 0 && disagreements == 0 && took < Duration::from_secs(60),
        detail: format!("{pairs} pairs, {violations} violations, {disagreements} oracle disagreements, {took:.2?} (limit 60s)"),
        artifact: csv(&reports),
    }
}

fn ac2(jobs: Option<usize>) -> Outcome {
    let groups: Vec<_> = (1..=6).map(|n| group(&[n])).collect();
    let opts = ExhaustOptions { certify: true, jobs, ..Default::default() };
    let (reports, took) = sweep(&groups, &opts);
    let pairs = total(&reports, |r| r.pairs_checked);
    let failures = total(&reports, |r| r.certify_failures + r.verify_rejections);
    let z6 = reports.last().map_or(0, |r| r.pairs_checked);
    Outcome {
        id: 2,
        title: "exhaustive certify/verify, Z1..Z6",
        pass: failures == 0 && z6 == 3969 && took < Duration::from_secs(120),
        detail: format!("{pairs} pairs ({z6} in Z6), {failures} failures, {took:.2?} (limit 120s)"),
        artifact: csv(&reports),
    }
}

fn ac3(jobs: Option<usize>) -> Outcome {
    let groups = [group(&[2, 2]), group(&[2, 4]), group(&[3, 3]), group(&[2, 2, 2])];
    let (exhaustive, _) = sweep(&groups, &ExhaustOptions { jobs, ..Default::default() });
    let opts = ExhaustOptions { certify: true, jobs, ..Default::default() };
    let sampled: Vec<_> = groups.iter().map(|g| sample(g, 1000, SEED, &opts).expect("sample runs")).collect();
    let violations = total(&exhaustive, |r| r.bound_violations + r.oracle_disagreements);
    let failures = total(&sampled, |r| r.failures());
    let sampled_pairs = total(&sampled, |r| r.pairs_checked);
    Outcome {
        id: 3,
        title: "non-cyclic groups",
        pass: violations == 0 && failures == 0 && sampled_pairs == 4000,
        detail: format!(
            "{} exhaustive pairs with {violations} violations; {sampled_pairs} seeded certify/verify pairs with {failures} failures",
            total(&exhaustive, |r| r.pairs_checked)
        ),
        artifact: csv(&exhaustive) + &csv(&sampled),
    }
}

fn ac4() -> Outcome {
    let reports: Vec<_> = [2, 3, 5, 7].iter().map(|&p| cauchy_davenport_check(p, 12).expect("check runs")).collect();
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    let pairs: u64 = reports.iter().map(|r| r.pairs_checked).sum();
    Outcome {
        id: 4,
        title: "Cauchy-Davenport, p in {2,3,5,7}",
        pass: violations == 0,
        detail: format!("{pairs} pairs, {violations} violations"),
        artifact: reports.iter().map(|r| r.csv_row() + "\n").collect(),
    }
}

fn ac5() -> Outcome {
    let mut cases = 0;
    let mut mismatches = 0;
    let mut artifact = String::new();
    for n in 1..=12 {
        let r = progression_equality_check(n).expect("check runs");
        cases += r.cases;
        mismatches += r.mismatches;
        writeln!(artifact, "Z{n},{},{}", r.cases, r.mismatches).unwrap();
    }
    Outcome {
        id: 5,
        title: "arithmetic progressions are extremal, n <= 12",
        pass: mismatches == 0 && cases > 0,
        detail: format!("{cases} cases, {mismatches} mismatches"),
        artifact,
    }
}

fn ac6() -> Outcome {
    let z8 = group(&[8]);
    let (a, b) = (set(&z8, &[0, 1, 4]), set(&z8, &[0, 4, 5]));
    let mut problems = Vec::new();
    let c0 = initial_convergent(&a, &b).expect("A and B meet");
    if c0 != set(&z8, &[0, 1, 4, 5]) || c0.stabilizer().as_set() != &set(&z8, &[0, 4]) {
        problems.push(format!("C0 = {c0} with stabilizer {}", c0.stabilizer()));
    }
    let cert = certify(&a, &b).expect("certify runs");
    match &cert.step {
        Step::Derivation { translate: None, chain, final_c } if chain.len() == 1 => {
            let m = &chain[0];
            let new_c = GSet::from_elems(&z8, &m.new_c).expect("valid set");
            if new_c != set(&z8, &[0, 1, 4, 5, 6]) || m.new_h != vec![GroupElem::scalar(0)] {
                problems.push(format!("move produced {new_c}"));
            }
            if *final_c != m.new_c {
                problems.push("final convergent differs from the last move".into());
            }
        }
        other => problems.push(format!("unexpected step {other:?}")),
    }
    let sum = a.sumset(&b).expect("same group").len();
    if cert.claimed_bound != 5 || sum != 5 {
        problems.push(format!("claimed {} with |A+B| = {sum}", cert.claimed_bound));
    }
    let brute = brute_min_stab_convergent(&a, &b, 12).expect("within budget");
    if !brute.stabilizer().is_trivial() {
        problems.push(format!("brute minimum stabilizer is {}", brute.stabilizer()));
    }
    if !verify(&cert, &a, &b).accepted {
        problems.push("certificate rejected".into());
    }
    Outcome {
        id: 6,
        title: "worked instance in Z8",
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("C0 = {c0} -> {{0,1,4,5,6}}, claimed_bound {}, |A+B| = {sum}, brute minimum trivial", cert.claimed_bound)
        } else {
            problems.join("; ")
        },
        artifact: cert.to_json(),
    }
}

/// Seeded pairs whose certificates contain at least one descent move.
fn certificates_with_moves(count: usize) -> Vec<(GSet, GSet, Certificate)> {
    let groups = [group(&[2, 4]), group(&[3, 3]), group(&[2, 6]), group(&[12]), group(&[10]), group(&[8])];
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < count {
        for g in &groups {
            for (a, b) in sample_pairs(g, 200, SEED + round) {
                let cert = certify(&a, &b).expect("certify runs");
                if cert.chain_length() > 0 && out.len() < count {
                    out.push((a, b, cert));
                }
            }
        }
        round += 1;
    }
    out
}

type Corruption = fn(&mut Certificate);

fn other_elem(avoid: &GroupElem, pool: &[GroupElem]) -> GroupElem {
    pool.iter().find(|x| *x != avoid).expect("a convergent has at least two elements").clone()
}

fn ac7() -> Outcome {
    let certs = certificates_with_moves(100);
    let mut artifact = String::new();
    let mut failures = Vec::new();
    let mut bound_rejected = 0;
    let mut move_rejected = 0;
    let mut untouched_accepted = 0;
    for (n, (a, b, cert)) in certs.iter().enumerate() {
        if verify(cert, a, b).accepted {
            untouched_accepted += 1;
        }
        let mut bumped = cert.clone();
        bumped.claimed_bound += 1;
        let r = verify(&bumped, a, b);
        writeln!(artifact, "{n} bound: {r}").unwrap();
        if r.accepted {
            failures.push(format!("#{n} accepted claimed_bound + 1"));
        } else {
            bound_rejected += 1;
        }

        let corruptions: [(&str, Corruption); 4] = [
            ("new_C", |c| {
                c.first_move_mut().unwrap().new_c.pop();
            }),
            ("i", |c| {
                let m = c.first_move_mut().unwrap();
                m.i = 3 - m.i;
            }),
            ("a", |c| {
                let m = c.first_move_mut().unwrap();
                m.a = other_elem(&m.a, &m.new_c);
            }),
            ("b", |c| {
                let m = c.first_move_mut().unwrap();
                m.b = other_elem(&m.b, &m.new_c);
            }),
        ];
        for (field, corrupt) in corruptions {
            let mut bad = cert.clone();
            corrupt(&mut bad);
            let r = verify(&bad, a, b);
            writeln!(artifact, "{n} {field}: {r}").unwrap();
            if r.accepted {
                failures.push(format!("#{n} accepted corrupted {field}"));
            } else if !r.reason.as_deref().is_some_and(|why| why.contains("move 0:")) {
                failures.push(format!("#{n} {field}: reason not tied to the move: {r}"));
            } else {
                move_rejected += 1;
            }
        }
    }
    let pass = certs.len() == 100 && untouched_accepted == 100 && failures.is_empty();
    Outcome {
        id: 7,
        title: "tampered certificates are rejected",
        pass,
        detail: if failures.is_empty() {
            format!(
                "{} certificates ({untouched_accepted} accepted untouched); claimed_bound+1 rejected {bound_rejected}/100; move corruptions rejected at the move {move_rejected}/400",
                certs.len()
            )
        } else {
            failures.into_iter().take(5).collect::<Vec<_>>().join("; ")
        },
        artifact,
    }
}

fn ac8() -> Outcome {
    let mut artifact = String::new();
    let (mut pairs, mut mismatches, mut below, mut stalls, mut skipped, mut trivial) = (0, 0, 0, 0, 0, 0);
    for n in 1..=6 {
        let r = convergent_agreement(&group(&[n]), 12, 12).expect("agreement runs");
        writeln!(
            artifact,
            "{},{},{},{},{},{},{}",
            r.group, r.normalized_pairs, r.trivial_minimum, r.mismatches, r.below_minimum, r.descent_stalls, r.skipped
        )
        .unwrap();
        pairs += r.normalized_pairs;
        trivial += r.trivial_minimum;
        mismatches += r.mismatches;
        below += r.below_minimum;
        stalls += r.descent_stalls;
        skipped += r.skipped;
    }
    if stalls > 0 {
        println!("       note: {stalls} descent stalls observed (logged, not a failure)");
    }
    Outcome {
        id: 8,
        title: "engine agrees with brute-force convergents, Z1..Z6",
        pass: mismatches == 0 && below == 0 && skipped == 0,
        detail: format!(
            "{pairs} normalized pairs, {trivial} with trivial brute minimum, {mismatches} mismatches, {below} below minimum, {stalls} descent stalls, {skipped} skipped"
        ),
        artifact,
    }
}

fn criteria(jobs: Option<usize>) -> Vec<Outcome> {
    vec![ac1(jobs), ac2(jobs), ac3(jobs), ac4(), ac5(), ac6(), ac7(), ac8()]
}

fn report(o: &Outcome) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("[{tag}] AC{} {}: {}", o.id, o.title, o.detail);
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture or a name filter are accepted and ignored
    let first = criteria(None);
    first.iter().for_each(report);

    let second = criteria(Some(1));
    let differing: Vec<String> = first
        .iter()
        .zip(&second)
        .filter(|(x, y)| x.artifact != y.artifact || x.pass != y.pass)
        .map(|(x, _)| format!("AC{}", x.id))
        .collect();
    let bytes: usize = first.iter().map(|o| o.artifact.len()).sum();
    let ac9 = Outcome {
        id: 9,
        title: "determinism",
        pass: differing.is_empty(),
        detail: if differing.is_empty() {
            format!("rerun of AC1..AC8 on one worker thread reproduced all {bytes} artifact bytes")
        } else {
            format!("artifacts differ for {}", differing.join(", "))
        },
        artifact: String::new(),
    };
    report(&ac9);

    let failed = first.iter().chain([&ac9]).filter(|o| !o.pass).count();
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
