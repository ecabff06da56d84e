//! Diagnostic evaluation of the quantities behind the descent argument.
//!
//! Nothing here is asserted: the inequalities only hold under the
//! hypothesis that no descent move exists, so they are reported as numbers
//! for inspection when a descent stalls.

use super::descent::convergent_report;
use crate::error::{Error, Result};
use crate::group::GroupElem;
use crate::set::{GSet, Subgroup};

/// Per-`i` quantities for `A_i`, `B_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartDiagnostics {
    pub i: u8,
    pub a_i: GSet,
    pub b_i: GSet,
    /// Stabilizer of `A_i + B_i` (the whole group when a part is empty).
    pub h_i: Subgroup,
    pub sumset_size: usize,
    /// Whether the stabilizer of `C ∪ (A_i + B_i)` equals `h_i`.
    pub h_i_is_stab_c_i: bool,
    /// `|(A∪B)+H| - |(A∪B)+H_i|`
    pub union_loss: i64,
    /// `|H| - |A_i+B_i| - |H_i|`
    pub sumset_slack: i64,
    /// `|H| - |A_i+H_i| - |B_i+H_i|`
    pub parts_slack: i64,
    /// `|H|` against `|A_i| + |B_i| + |H_i|`
    pub coset_size: i64,
    pub parts_total: i64,
    /// `|(A∪B)+H| + |A∩B| - |C|`
    pub deficit_from_c: i64,
    /// `|S| + |T| + |A∪B| + |A∩B| - |A+B| + |A_i+B_i|`
    pub deficit_from_sumset: i64,
    /// `|S| + |T| + |A_i| + |B_i| - |H_i|`
    pub deficit_from_parts: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentDiagnostics {
    pub h: Subgroup,
    pub cosets_equal: bool,
    /// `(a+H) \ (A_1 ∪ B_2)`
    pub s: GSet,
    /// `(b+H) \ (A_2 ∪ B_1)`
    pub t: GSet,
    pub s_t_disjoint: bool,
    pub parts: [PartDiagnostics; 2],
    /// `a + H = S ∪ A_1 ∪ B_2`
    pub a_coset_partitioned: bool,
    /// `b + H = T ∪ A_2 ∪ B_1`
    pub b_coset_partitioned: bool,
    /// `2|H|`
    pub final_lhs: i64,
    /// `|A_1| + |B_2| + |S| + |A_2| + |B_1| + |T|`
    pub final_rhs: i64,
}

pub fn audit_contradiction(
    c: &GSet,
    a: &GSet,
    b: &GSet,
    x: &GroupElem,
    y: &GroupElem,
) -> Result<DescentDiagnostics> {
    let g = a.group();
    let xi = g.index_of(x)?;
    let yi = g.index_of(y)?;
    if !a.contains_index(xi) || !b.contains_index(yi) {
        return Err(Error::Precondition("need a in A and b in B".into()));
    }
    let report = super::descent::is_convergent(c, a, b)?;
    if !report.is_convergent {
        return Err(Error::Precondition(format!("{c} is not a convergent")));
    }
    let h = report.h;
    if h.is_trivial() {
        return Err(Error::Precondition("the convergent has trivial stabilizer".into()));
    }
    let sum = a.sumset(b)?;
    if sum.contains_coset(g.add_idx(xi, yi), &h) {
        return Err(Error::Precondition("a + b + H lies inside A+B".into()));
    }

    let a_coset = h.as_set().translate_index(xi);
    let b_coset = h.as_set().translate_index(yi);
    let a1 = a.intersection(&a_coset)?;
    let b1 = b.intersection(&b_coset)?;
    let a2 = a.intersection(&b_coset)?;
    let b2 = b.intersection(&a_coset)?;
    let s = a_coset.difference(&a1.union(&b2)?)?;
    let t = b_coset.difference(&a2.union(&b1)?)?;

    let inter = a.intersection(b)?;
    let union = a.union(b)?;
    let union_h = union.saturate(&h)?.len() as i64;
    let hn = h.order() as i64;
    let (sn, tn) = (s.len() as i64, t.len() as i64);

    let part = |i: u8, a_i: GSet, b_i: GSet| -> Result<PartDiagnostics> {
        let sub = a_i.sumset(&b_i)?;
        let h_i = sub.stabilizer();
        let c_i = c.union(&sub)?;
        let stab_c_i = convergent_report(&c_i, a, b).h;
        let hin = h_i.order() as i64;
        let (ain, bin, subn) = (a_i.len() as i64, b_i.len() as i64, sub.len() as i64);
        Ok(PartDiagnostics {
            i,
            union_loss: union_h - union.saturate(&h_i)?.len() as i64,
            sumset_slack: hn - subn - hin,
            parts_slack: hn - a_i.saturate(&h_i)?.len() as i64 - b_i.saturate(&h_i)?.len() as i64,
            coset_size: hn,
            parts_total: ain + bin + hin,
            deficit_from_c: union_h + inter.len() as i64 - c.len() as i64,
            deficit_from_sumset: sn + tn + union.len() as i64 + inter.len() as i64 - sum.len() as i64 + subn,
            deficit_from_parts: sn + tn + ain + bin - hin,
            h_i_is_stab_c_i: stab_c_i == h_i,
            sumset_size: sub.len(),
            h_i,
            a_i,
            b_i,
        })
    };

    let a_coset_partitioned = s.union(&a1)?.union(&b2)? == a_coset;
    let b_coset_partitioned = t.union(&a2)?.union(&b1)? == b_coset;
    let final_rhs = (a1.len() + b2.len() + s.len() + a2.len() + b1.len() + t.len()) as i64;
    Ok(DescentDiagnostics {
        cosets_equal: a_coset == b_coset,
        s_t_disjoint: s.intersection(&t)?.is_empty(),
        parts: [part(1, a1, b1)?, part(2, a2, b2)?],
        a_coset_partitioned,
        b_coset_partitioned,
        final_lhs: 2 * hn,
        final_rhs,
        h,
        s,
        t,
    })
}
