//! Brute-force ground truth over small groups.
//!
//! Sweeps recompute the bound with a naive path (boolean membership tables,
//! stabilizers by testing every group element) and compare it against the
//! engine. Subset pairs are enumerated by ascending bitmask, outer loop over
//! `A`, inner over `B`; parallel workers take disjoint ranges of the outer
//! loop and their tallies merge by sum and max, so reports do not depend on
//! scheduling.

use std::time::{Duration, Instant};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::engine::{certify, verify, Step};
use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem};
use crate::set::GSet;

/// Largest group order [`exhaust`] accepts unless told otherwise.
pub const DEFAULT_EXHAUST_CAP: usize = 12;

/// Largest `|A+B|` for [`brute_min_stab_convergent`] by default.
pub const DEFAULT_CONVERGENT_BUDGET: usize = 18;

/// Identifies the sampling procedure: a ChaCha8 stream seeded through
/// `SeedableRng::seed_from_u64`, one bit of `next_u64` per group element
/// (element `i` takes bit `i % 64` of word `i / 64`), empty draws redrawn,
/// `A` drawn before `B`.
pub const SAMPLER_ID: &str = "chacha8-seed_from_u64-bitmask-v1";

pub const CSV_HEADER: &str = "group,mode,seed,generator,pairs_checked,bound_violations,equality_pairs,certify_failures,verify_rejections,descent_stalls,max_chain_length,oracle_disagreements";

#[derive(Clone, Debug)]
pub struct ExhaustOptions {
    pub certify: bool,
    pub max_set_size: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub cap: usize,
}

impl Default for ExhaustOptions {
    fn default() -> Self {
        ExhaustOptions {
            certify: false,
            max_set_size: None,
            jobs: None,
            cap: DEFAULT_EXHAUST_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExhaustReport {
    pub group: String,
    pub mode: SweepMode,
    pub pairs_checked: u64,
    pub bound_violations: u64,
    pub equality_pairs: u64,
    pub certify_failures: u64,
    pub verify_rejections: u64,
    pub descent_stalls: u64,
    pub max_chain_length: u64,
    /// Pairs where the naive recomputation disagrees with the engine's report.
    pub oracle_disagreements: u64,
    /// Wall-clock time; excluded from the CSV row so rows are reproducible.
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

impl ExhaustReport {
    pub fn failures(&self) -> u64 {
        self.bound_violations + self.certify_failures + self.verify_rejections + self.oracle_disagreements
    }

    pub fn csv_row(&self) -> String {
        let (mode, seed, generator) = match self.mode {
            SweepMode::Exhaustive => ("exhaustive", String::new(), String::new()),
            SweepMode::Sampled { seed, .. } => ("sampled", seed.to_string(), SAMPLER_ID.to_string()),
        };
        format!(
            "{},{mode},{seed},{generator},{},{},{},{},{},{},{},{}",
            self.group,
            self.pairs_checked,
            self.bound_violations,
            self.equality_pairs,
            self.certify_failures,
            self.verify_rejections,
            self.descent_stalls,
            self.max_chain_length,
            self.oracle_disagreements
        )
    }

    /// One human-readable line; wall-clock time only when `timing` is set.
    pub fn summary(&self, timing: bool) -> String {
        let verdict = if self.failures() == 0 { "OK" } else { "FAIL" };
        let mut line = format!(
            "{verdict} {}: {} pairs, {} violations, {} equality cases, {} certify failures, \
             {} verify rejections, {} descent stalls, longest chain {}, {} oracle disagreements",
            self.group,
            self.pairs_checked,
            self.bound_violations,
            self.equality_pairs,
            self.certify_failures,
            self.verify_rejections,
            self.descent_stalls,
            self.max_chain_length,
            self.oracle_disagreements,
        );
        if timing {
            line.push_str(&format!(" in {:.3}s", self.elapsed.as_secs_f64()));
        }
        line
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    pairs: u64,
    violations: u64,
    equality: u64,
    certify_failures: u64,
    verify_rejections: u64,
    stalls: u64,
    max_chain: u64,
    disagreements: u64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.pairs += o.pairs;
        self.violations += o.violations;
        self.equality += o.equality;
        self.certify_failures += o.certify_failures;
        self.verify_rejections += o.verify_rejections;
        self.stalls += o.stalls;
        self.max_chain = self.max_chain.max(o.max_chain);
        self.disagreements += o.disagreements;
        self
    }

    fn into_report(self, group: &FinAbGroup, mode: SweepMode, elapsed: Duration) -> ExhaustReport {
        ExhaustReport {
            group: group.spec().to_string(),
            mode,
            pairs_checked: self.pairs,
            bound_violations: self.violations,
            equality_pairs: self.equality,
            certify_failures: self.certify_failures,
            verify_rejections: self.verify_rejections,
            descent_stalls: self.stalls,
            max_chain_length: self.max_chain,
            oracle_disagreements: self.disagreements,
            elapsed,
        }
    }
}

/// Naive sides of the bound: `(|A+B|, |A+K| + |B+K| - |K|)`.
pub fn naive_bound(g: &FinAbGroup, a: &[usize], b: &[usize]) -> (usize, usize) {
    let sum = naive_sumset(g, a, b);
    let k = naive_stabilizer(g, &sum);
    let a_k = naive_sumset(g, a, &k);
    let b_k = naive_sumset(g, b, &k);
    let count = |s: &[bool]| s.iter().filter(|&&x| x).count();
    (count(&sum), count(&a_k) + count(&b_k) - k.len())
}

/// Membership table of `A + B`.
pub fn naive_sumset(g: &FinAbGroup, a: &[usize], b: &[usize]) -> Vec<bool> {
    let mut out = vec![false; g.order()];
    for &x in a {
        for &y in b {
            out[g.add_idx(x, y)] = true;
        }
    }
    out
}

/// Every `t` with `S + t = S`, found by testing all group elements.
pub fn naive_stabilizer(g: &FinAbGroup, s: &[bool]) -> Vec<usize> {
    (0..g.order())
        .filter(|&t| (0..g.order()).all(|x| !s[x] || s[g.add_idx(x, t)]))
        .collect()
}

fn check_pair(a: &GSet, b: &GSet, a_idx: &[usize], b_idx: &[usize], with_certify: bool) -> Tally {
    let g = a.group();
    let mut t = Tally {
        pairs: 1,
        ..Tally::default()
    };
    let (lhs, rhs) = naive_bound(g, a_idx, b_idx);
    if lhs < rhs {
        t.violations = 1;
    }
    if lhs == rhs {
        t.equality = 1;
    }
    match crate::engine::kneser_bound(a, b) {
        Ok(r) if r.lhs == lhs && r.rhs == rhs => {}
        _ => t.disagreements = 1,
    }
    if with_certify {
        match certify(a, b) {
            Err(_) => t.certify_failures = 1,
            Ok(cert) => {
                if !verify(&cert, a, b).accepted {
                    t.verify_rejections = 1;
                }
                if cert.has_direct_step() {
                    t.stalls = 1;
                }
                t.max_chain = cert.chain_length() as u64;
            }
        }
    }
    t
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Checks every ordered pair of nonempty subsets of `g`.
pub fn exhaust(g: &FinAbGroup, options: &ExhaustOptions) -> Result<ExhaustReport> {
    let n = g.order();
    if n > options.cap || n > 30 {
        return Err(Error::TooLarge {
            order: n,
            cap: options.cap.min(30),
        });
    }
    let start = Instant::now();
    let keep = |m: &u64| options.max_set_size.is_none_or(|k| m.count_ones() as usize <= k);
    let masks: Vec<u64> = (1..1u64 << n).filter(keep).collect();
    let sets: Vec<(GSet, Vec<usize>)> = masks
        .iter()
        .map(|&m| {
            let idx = mask_indices(m);
            (GSet::from_indices(g, idx.iter().copied()), idx)
        })
        .collect();

    let tally = in_pool(options.jobs, || {
        sets.par_iter()
            .map(|(a, ai)| {
                sets.iter()
                    .map(|(b, bi)| check_pair(a, b, ai, bi, options.certify))
                    .fold(Tally::default(), Tally::merge)
            })
            .reduce(Tally::default, Tally::merge)
    })?;
    Ok(tally.into_report(g, SweepMode::Exhaustive, start.elapsed()))
}

fn random_subset(g: &FinAbGroup, rng: &mut ChaCha8Rng) -> Vec<usize> {
    loop {
        let mut idx = Vec::new();
        let mut word = 0u64;
        for i in 0..g.order() {
            if i % 64 == 0 {
                word = rng.next_u64();
            }
            if word >> (i % 64) & 1 == 1 {
                idx.push(i);
            }
        }
        if !idx.is_empty() {
            return idx;
        }
    }
}

/// The `count` pairs drawn by [`sample`] for this seed.
pub fn sample_pairs(g: &FinAbGroup, count: u64, seed: u64) -> Vec<(GSet, GSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = random_subset(g, &mut rng);
            let b = random_subset(g, &mut rng);
            (GSet::from_indices(g, a), GSet::from_indices(g, b))
        })
        .collect()
}

/// Same checks as [`exhaust`] on `count` pseudorandom pairs.
pub fn sample(g: &FinAbGroup, count: u64, seed: u64, options: &ExhaustOptions) -> Result<ExhaustReport> {
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let start = Instant::now();
    let pairs = sample_pairs(g, count, seed);
    let tally = in_pool(options.jobs, || {
        pairs
            .par_iter()
            .map(|(a, b)| {
                let ai: Vec<usize> = a.indices().collect();
                let bi: Vec<usize> = b.indices().collect();
                check_pair(a, b, &ai, &bi, options.certify)
            })
            .reduce(Tally::default, Tally::merge)
    })?;
    Ok(tally.into_report(g, SweepMode::Sampled { seed, count }, start.elapsed()))
}

/// Exhaustive search for a convergent of least stabilizer order among all
/// subsets of `A + B`; ties go to the lexicographically least set.
pub fn brute_min_stab_convergent(a: &GSet, b: &GSet, budget: usize) -> Result<GSet> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let sum = a.sumset(b)?;
    let inter = a.intersection(b)?;
    if !sum.stabilizer().is_trivial() || inter.is_empty() || inter == *a {
        return Err(Error::Precondition(
            "inputs must be normalized: aperiodic A+B and A ∩ B nonempty and proper".into(),
        ));
    }
    if sum.len() > budget || sum.len() > 63 {
        return Err(Error::BudgetExceeded {
            size: sum.len(),
            budget,
        });
    }
    let g = a.group();
    let union = a.union(b)?;
    let members: Vec<usize> = sum.indices().collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for mask in 0..1u64 << members.len() {
        let idx: Vec<usize> = members
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        let c = GSet::from_indices(g, idx.iter().copied());
        let h = c.stabilizer();
        if c.len() + h.order() < inter.len() + union.saturate(&h)?.len() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((order, prev)) => (h.order(), &idx) < (*order, prev),
        };
        if better {
            best = Some((h.order(), idx));
        }
    }
    let (_, idx) = best.ok_or_else(|| {
        Error::ProofFalsified("no convergent exists although C0 should qualify".into())
    })?;
    Ok(GSet::from_indices(g, idx))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyDavenportReport {
    pub p: u32,
    pub pairs_checked: u64,
    pub violations: u64,
}

impl CauchyDavenportReport {
    pub fn csv_row(&self) -> String {
        format!("Z{},{},{}", self.p, self.pairs_checked, self.violations)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d: u32| !p.is_multiple_of(d))
}

/// Checks `|A+B| >= min(p, |A| + |B| - 1)` over all nonempty `A, B` in `Z_p`.
pub fn cauchy_davenport_check(p: u32, cap: usize) -> Result<CauchyDavenportReport> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p as usize > cap.min(30) {
        return Err(Error::TooLarge {
            order: p as usize,
            cap: cap.min(30),
        });
    }
    let g = FinAbGroup::cyclic(p)?;
    let sets: Vec<Vec<usize>> = (1..1u64 << p).map(mask_indices).collect();
    let violations: u64 = sets
        .par_iter()
        .map(|a| {
            sets.iter()
                .filter(|b| {
                    let size = naive_sumset(&g, a, b).iter().filter(|&&x| x).count();
                    size < (p as usize).min(a.len() + b.len() - 1)
                })
                .count() as u64
        })
        .sum();
    Ok(CauchyDavenportReport {
        p,
        pairs_checked: (sets.len() * sets.len()) as u64,
        violations,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgressionReport {
    pub cases: u64,
    pub mismatches: u64,
}

/// For `A = {0, d, ..., (k-1)d}` and `B = {0, d, ..., (l-1)d}` in `Z_n` with
/// `gcd(d, n) = 1` and `k + l - 1 <= n`, checks the bound is tight with
/// `|A+B| = k + l - 1`.
pub fn progression_equality_check(n: u32) -> Result<ProgressionReport> {
    let g = FinAbGroup::cyclic(n)?;
    let progression = |d: u32, len: u32| {
        let elems: Vec<GroupElem> = (0..len)
            .map(|j| GroupElem::scalar(((j as u64 * d as u64) % n as u64) as u32))
            .collect();
        GSet::from_elems(&g, &elems)
    };
    let mut report = ProgressionReport::default();
    for d in (0..n.max(1)).filter(|&d| gcd(d, n) == 1) {
        for k in 1..=n {
            for l in 1..=n + 1 - k {
                let r = crate::engine::kneser_bound(&progression(d, k)?, &progression(d, l)?)?;
                report.cases += 1;
                if !(r.equality && r.lhs == (k + l - 1) as usize) {
                    report.mismatches += 1;
                }
            }
        }
    }
    Ok(report)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgreementReport {
    pub group: String,
    pub normalized_pairs: u64,
    /// Pairs where the brute-force minimum stabilizer is trivial.
    pub trivial_minimum: u64,
    /// Pairs where the brute minimum is trivial but the engine ended elsewhere.
    pub mismatches: u64,
    /// Pairs where the engine's final stabilizer is smaller than the brute minimum.
    pub below_minimum: u64,
    pub descent_stalls: u64,
    /// Pairs with `|A+B|` above the budget, left unchecked.
    pub skipped: u64,
}

/// Compares the engine's final convergent against [`brute_min_stab_convergent`]
/// on every already-normalized pair of `g`.
pub fn convergent_agreement(g: &FinAbGroup, budget: usize, cap: usize) -> Result<AgreementReport> {
    let n = g.order();
    if n > cap.min(30) {
        return Err(Error::TooLarge {
            order: n,
            cap: cap.min(30),
        });
    }
    let sets: Vec<GSet> = (1..1u64 << n)
        .map(|m| GSet::from_indices(g, mask_indices(m)))
        .collect();
    let mut report = AgreementReport {
        group: g.spec().to_string(),
        ..AgreementReport::default()
    };
    for a in &sets {
        for b in &sets {
            let inter = a.intersection(b)?;
            let sum = a.sumset(b)?;
            if inter.is_empty() || inter == *a || !sum.stabilizer().is_trivial() {
                continue;
            }
            report.normalized_pairs += 1;
            if sum.len() > budget {
                report.skipped += 1;
                continue;
            }
            let brute = brute_min_stab_convergent(a, b, budget)?.stabilizer();
            let cert = certify(a, b)?;
            let engine = match &cert.step {
                Step::Derivation { final_c, .. } => Some(GSet::from_elems(g, final_c)?.stabilizer()),
                Step::Direct => None,
                other => {
                    return Err(Error::ProofFalsified(format!(
                        "normalized pair certified with {other:?}"
                    )))
                }
            };
            if brute.is_trivial() {
                report.trivial_minimum += 1;
            }
            match engine {
                None => report.descent_stalls += 1,
                Some(h) => {
                    if brute.is_trivial() && !h.is_trivial() {
                        report.mismatches += 1;
                    }
                    if h.order() < brute.order() {
                        report.below_minimum += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}
