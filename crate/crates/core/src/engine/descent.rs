//! Convergents, translation normalization and the descent step.
//!
//! For a pair `(A, B)`, a subset `C` of `A + B` with stabilizer `H` is a
//! convergent when `|C| + |H| >= |A ∩ B| + |(A ∪ B) + H|`. Starting from
//! `C0 = (A ∩ B) + (A ∪ B)`, each descent move enlarges `C` by some
//! `A_i + B_i` so that the stabilizer strictly shrinks while the convergent
//! inequality is kept. Once the stabilizer is trivial,
//! `|A + B| >= |C| >= |A| + |B| - 1`.

use crate::error::{Error, Result};
use crate::group::GroupElem;
use crate::set::{GSet, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentReport {
    pub c: GSet,
    pub h: Subgroup,
    /// `|C| + |H|`
    pub lhs: usize,
    /// `|A ∩ B| + |(A ∪ B) + H|`
    pub rhs: usize,
    pub is_convergent: bool,
}

pub fn is_convergent(c: &GSet, a: &GSet, b: &GSet) -> Result<ConvergentReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let sum = a.sumset(b)?;
    if !c.is_subset(&sum)? {
        return Err(Error::Containment(format!("{c} is not contained in A+B = {sum}")));
    }
    Ok(convergent_report(c, a, b))
}

/// Same as [`is_convergent`] without the argument checks.
pub(crate) fn convergent_report(c: &GSet, a: &GSet, b: &GSet) -> ConvergentReport {
    let h = c.stabilizer();
    let inter = a.intersection(b).expect("same group");
    let union = a.union(b).expect("same group");
    let lhs = c.len() + h.order();
    let rhs = inter.len() + union.saturate(&h).expect("same group").len();
    ConvergentReport {
        c: c.clone(),
        h,
        lhs,
        rhs,
        is_convergent: lhs >= rhs,
    }
}

/// `C0 = (A ∩ B) + (A ∪ B)`.
pub fn initial_convergent(a: &GSet, b: &GSet) -> Result<GSet> {
    let inter = a.intersection(b)?;
    if inter.is_empty() {
        return Err(Error::Precondition(
            "A and B are disjoint; normalize the translation first".into(),
        ));
    }
    inter.sumset(&a.union(b)?)
}

/// The choice of `a, a'` in `A` and `b` in `B` that justifies replacing `B`
/// by `B - b + a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslateWitness {
    pub a: GroupElem,
    pub a_prime: GroupElem,
    pub b: GroupElem,
    pub translated_b: GSet,
}

fn properly_overlaps(a: &GSet, b: &GSet) -> bool {
    let inter = a.intersection(b).expect("same group");
    !inter.is_empty() && inter != *a
}

/// Ensures `∅ ≠ A ∩ B ≠ A`, translating `B` when needed.
///
/// Returns `None` when the condition already holds. Otherwise returns the
/// lexicographically first `(a, a', b)` with `a ≠ a'` and `b + a' - a ∉ B`;
/// one exists because `a' - a` cannot stabilize `B` when `A + B` is
/// aperiodic.
pub fn normalize_translation(a: &GSet, b: &GSet) -> Result<Option<TranslateWitness>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.len() < 2 {
        return Err(Error::CallerOrder(
            "translation needs |A| >= 2; singletons are base cases".into(),
        ));
    }
    if !a.sumset(b)?.stabilizer().is_trivial() {
        return Err(Error::CallerOrder(
            "A+B is periodic; take the quotient first".into(),
        ));
    }
    if properly_overlaps(a, b) {
        return Ok(None);
    }
    let g = a.group();
    for x in a.indices() {
        for xp in a.indices().filter(|&xp| xp != x) {
            for y in b.indices() {
                if b.contains_index(g.add_idx(y, g.sub_idx(xp, x))) {
                    continue;
                }
                let translated = b.translate_index(g.sub_idx(x, y));
                if properly_overlaps(a, &translated) {
                    return Ok(Some(TranslateWitness {
                        a: g.element(x).clone(),
                        a_prime: g.element(xp).clone(),
                        b: g.element(y).clone(),
                        translated_b: translated,
                    }));
                }
            }
        }
    }
    Err(Error::ProofFalsified(format!(
        "no translation witness for A = {a}, B = {b} although A+B is aperiodic"
    )))
}

/// One step `C -> C ∪ (A_i + B_i)` of the descent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentMove {
    pub a: GroupElem,
    pub b: GroupElem,
    pub i: u8,
    pub a_i: GSet,
    pub b_i: GSet,
    pub new_c: GSet,
    pub new_h: Subgroup,
}

/// `A_i` and `B_i` for the pair `(a, b)`:
/// `A_1 = A ∩ (a+H)`, `B_1 = B ∩ (b+H)`, `A_2 = A ∩ (b+H)`, `B_2 = B ∩ (a+H)`.
pub(crate) fn parts(
    a: &GSet,
    b: &GSet,
    h: &Subgroup,
    x: usize,
    y: usize,
    i: u8,
) -> (GSet, GSet) {
    let a_coset = h.as_set().translate_index(x);
    let b_coset = h.as_set().translate_index(y);
    let (for_a, for_b) = if i == 1 { (&a_coset, &b_coset) } else { (&b_coset, &a_coset) };
    (
        a.intersection(for_a).expect("same group"),
        b.intersection(for_b).expect("same group"),
    )
}

/// Moves from the convergent `C` to a convergent with strictly smaller
/// stabilizer.
///
/// Pairs `(a, b)` are scanned in lexicographic order, keeping those with
/// `a + b + H ⊄ A + B`. For each pair, `i = 1` is tried, then `i = 2` when
/// `A_2` and `B_2` are both nonempty. The first pair with an acceptable
/// candidate wins; between its two candidates the smaller new stabilizer is
/// preferred, then `i = 1`.
pub fn descend(c: &GSet, a: &GSet, b: &GSet) -> Result<DescentMove> {
    let report = is_convergent(c, a, b)?;
    if !report.is_convergent {
        return Err(Error::Precondition(format!("{c} is not a convergent")));
    }
    if report.h.is_trivial() {
        return Err(Error::Precondition(
            "the convergent already has trivial stabilizer".into(),
        ));
    }
    let sum = a.sumset(b)?;
    if !sum.stabilizer().is_trivial() {
        return Err(Error::Precondition("A+B is periodic".into()));
    }
    if !properly_overlaps(a, b) {
        return Err(Error::Precondition("A ∩ B must be nonempty and proper".into()));
    }
    descend_unchecked(c, a, b, &sum, &report.h).ok_or(Error::DescentStall)
}

pub(crate) fn descend_unchecked(
    c: &GSet,
    a: &GSet,
    b: &GSet,
    sum: &GSet,
    h: &Subgroup,
) -> Option<DescentMove> {
    let g = a.group();
    for x in a.indices() {
        for y in b.indices() {
            if sum.contains_coset(g.add_idx(x, y), h) {
                continue;
            }
            let best = [1u8, 2]
                .into_iter()
                .filter_map(|i| candidate(c, a, b, h, x, y, i))
                .min_by_key(|m| (m.new_h.order(), m.i));
            if best.is_some() {
                return best;
            }
        }
    }
    None
}

fn candidate(c: &GSet, a: &GSet, b: &GSet, h: &Subgroup, x: usize, y: usize, i: u8) -> Option<DescentMove> {
    let (a_i, b_i) = parts(a, b, h, x, y, i);
    if a_i.is_empty() || b_i.is_empty() {
        return None;
    }
    let new_c = c.union(&a_i.sumset(&b_i).ok()?).ok()?;
    let report = convergent_report(&new_c, a, b);
    if !report.is_convergent || !report.h.is_proper_subgroup_of(h) {
        return None;
    }
    let g = a.group();
    Some(DescentMove {
        a: g.element(x).clone(),
        b: g.element(y).clone(),
        i,
        a_i,
        b_i,
        new_c,
        new_h: report.h,
    })
}
