//! Independent replay of a certificate.
//!
//! Every quantity is recomputed from the instance; nothing recorded in the
//! certificate is trusted beyond being a claim to check. The only engine
//! routine consulted is the descent search, and only after a move has
//! already passed every soundness check, to confirm the move is the
//! deterministic choice (so certificates stay byte-reproducible).

use std::fmt;

use super::certificate::{Certificate, MoveRecord, Step, TranslateRecord};
use super::descent::descend_unchecked;
use crate::group::{quotient, FinAbGroup, GroupElem};
use crate::set::{GSet, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub accepted: bool,
    /// First failed check, with the path of the step that failed.
    pub reason: Option<String>,
}

impl VerifyReport {
    fn accept() -> Self {
        VerifyReport {
            accepted: true,
            reason: None,
        }
    }

    fn reject(reason: String) -> Self {
        VerifyReport {
            accepted: false,
            reason: Some(reason),
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            None => write!(f, "accept"),
            Some(r) => write!(f, "reject: {r}"),
        }
    }
}

/// Checks `cert` against the instance `(A, B)`. Total: malformed input is
/// a rejection, never an error.
pub fn verify(cert: &Certificate, a: &GSet, b: &GSet) -> VerifyReport {
    match check(cert, a, b, "root") {
        Ok(()) => VerifyReport::accept(),
        Err(reason) => VerifyReport::reject(reason),
    }
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, at: &str, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(format!("{at}: {}", what()))
    }
}

fn parse_set(g: &FinAbGroup, elems: &[GroupElem], at: &str, name: &str) -> Result<GSet, String> {
    let s = GSet::from_elems(g, elems).map_err(|e| format!("{at}: {name}: {e}"))?;
    ensure(s.members() == elems, at, || {
        format!("{name} is not listed in canonical order")
    })?;
    Ok(s)
}

fn parse_elem(g: &FinAbGroup, x: &GroupElem, at: &str, name: &str) -> Result<usize, String> {
    g.index_of(x).map_err(|e| format!("{at}: {name}: {e}"))
}

fn check(cert: &Certificate, a: &GSet, b: &GSet, at: &str) -> Check {
    let g = a.group();
    ensure(cert.group == g.spec(), at, || {
        format!("group {} does not match {}", cert.group, g.spec())
    })?;
    ensure(b.group() == g, at, || "A and B live in different groups".into())?;
    ensure(!a.is_empty() && !b.is_empty(), at, || "empty set".into())?;
    ensure(cert.a == a.members(), at, || "A does not match the certificate".into())?;
    ensure(cert.b == b.members(), at, || "B does not match the certificate".into())?;

    let sum = a.sumset(b).expect("same group");
    let k = sum.stabilizer();
    let a_k = a.saturate(&k).expect("same group").len();
    let b_k = b.saturate(&k).expect("same group").len();
    let bound = a_k + b_k - k.order();
    ensure(cert.claimed_bound == bound, at, || {
        format!("claimed bound mismatch ({} recorded, {bound} recomputed)", cert.claimed_bound)
    })?;

    match &cert.step {
        Step::Quotient { kernel, sub } => {
            let at = &format!("{at}/quotient");
            ensure(!k.is_trivial(), at, || "stabilizer of A+B is trivial".into())?;
            ensure(*kernel == k.as_set().members(), at, || {
                "kernel is not the stabilizer of A+B".into()
            })?;
            let q = quotient(g, &k).map_err(|e| format!("{at}: {e}"))?;
            let qa = a.image(&q).expect("same group");
            let qb = b.image(&q).expect("same group");
            let qsum = qa.sumset(&qb).expect("same group");
            ensure(qsum.stabilizer().is_trivial(), at, || {
                "image of A+B in the quotient is periodic".into()
            })?;
            let kk = k.order();
            ensure(
                sum.len() == kk * qsum.len() && a_k == kk * qa.len() && b_k == kk * qb.len(),
                at,
                || "cardinalities do not lift through the quotient".into(),
            )?;
            check(sub, &qa, &qb, at)?;
            ensure(sum.len() >= bound, at, || "lifted bound fails".into())
        }
        Step::Base => {
            let at = &format!("{at}/base");
            ensure(a.len() == 1, at, || format!("base step requires |A| = 1, got {}", a.len()))?;
            ensure(sum.len() >= bound, at, || "bound fails".into())
        }
        Step::Direct => {
            let at = &format!("{at}/direct");
            ensure(k.is_trivial(), at, || "direct step requires aperiodic A+B".into())?;
            ensure(sum.len() + 1 >= a.len() + b.len(), at, || {
                "|A+B| < |A| + |B| - 1".into()
            })
        }
        Step::Derivation {
            translate,
            chain,
            final_c,
        } => check_derivation(a, b, &k, bound, translate.as_ref(), chain, final_c, &format!("{at}/derivation")),
    }
}

#[allow(clippy::too_many_arguments)]
fn check_derivation(
    a: &GSet,
    b: &GSet,
    k: &Subgroup,
    bound: usize,
    translate: Option<&TranslateRecord>,
    chain: &[MoveRecord],
    final_c: &[GroupElem],
    at: &str,
) -> Check {
    let g = a.group();
    ensure(k.is_trivial(), at, || "derivation requires aperiodic A+B".into())?;

    let b = match translate {
        None => b.clone(),
        Some(w) => {
            let at = &format!("{at}/translate");
            let x = parse_elem(g, &w.a, at, "a")?;
            let xp = parse_elem(g, &w.a_prime, at, "a'")?;
            let y = parse_elem(g, &w.b, at, "b")?;
            ensure(a.contains_index(x) && a.contains_index(xp), at, || "a or a' is not in A".into())?;
            ensure(x != xp, at, || "a and a' coincide".into())?;
            ensure(b.contains_index(y), at, || "b is not in B".into())?;
            ensure(!b.contains_index(g.add_idx(y, g.sub_idx(xp, x))), at, || {
                "b + a' - a lies in B".into()
            })?;
            let shifted = b.translate_index(g.sub_idx(x, y));
            ensure(w.translated_b == shifted.members(), at, || {
                "translated B is not B - b + a".into()
            })?;
            shifted
        }
    };
    let inter = a.intersection(&b).expect("same group");
    let union = a.union(&b).expect("same group");
    ensure(!inter.is_empty() && inter != *a, at, || {
        "A ∩ B must be nonempty and different from A".into()
    })?;

    let sum = a.sumset(&b).expect("same group");
    let convergent = |c: &GSet, h: &Subgroup| {
        c.len() + h.order() >= inter.len() + union.saturate(h).expect("same group").len()
    };

    let mut c = inter.sumset(&union).expect("same group");
    ensure(c.is_subset(&sum).expect("same group"), at, || "C0 is not inside A+B".into())?;
    ensure(convergent(&c, &c.stabilizer()), at, || "C0 is not a convergent".into())?;

    for (n, mv) in chain.iter().enumerate() {
        let at = &format!("{at}/move {n}");
        let h = c.stabilizer();
        ensure(!h.is_trivial(), at, || "chain continues past a trivial stabilizer".into())?;
        let x = parse_elem(g, &mv.a, at, "a")?;
        let y = parse_elem(g, &mv.b, at, "b")?;
        ensure(a.contains_index(x), at, || format!("a = {} is not in A", mv.a))?;
        ensure(b.contains_index(y), at, || format!("b = {} is not in B", mv.b))?;
        let s = g.add_idx(x, y);
        ensure(!h.as_set().indices().all(|t| sum.contains_index(g.add_idx(s, t))), at, || {
            "a + b + H lies inside A+B".into()
        })?;
        ensure(mv.i == 1 || mv.i == 2, at, || format!("i = {} is not 1 or 2", mv.i))?;

        let a_coset = h.as_set().translate_index(x);
        let b_coset = h.as_set().translate_index(y);
        let (for_a, for_b) = if mv.i == 1 { (&a_coset, &b_coset) } else { (&b_coset, &a_coset) };
        let a_i = a.intersection(for_a).expect("same group");
        let b_i = b.intersection(for_b).expect("same group");
        ensure(mv.a_i == a_i.members(), at, || "A_i does not match its definition".into())?;
        ensure(mv.b_i == b_i.members(), at, || "B_i does not match its definition".into())?;
        ensure(!a_i.is_empty() && !b_i.is_empty(), at, || "A_i or B_i is empty".into())?;

        let new_c = parse_set(g, &mv.new_c, at, "new_C")?;
        let new_h = new_c.stabilizer();
        ensure(new_h.is_proper_subgroup_of(&h), at, || {
            "stabilizer not strictly smaller".into()
        })?;
        ensure(mv.new_h == new_h.as_set().members(), at, || {
            "new_H is not the stabilizer of new_C".into()
        })?;
        let grown = c.union(&a_i.sumset(&b_i).expect("same group")).expect("same group");
        ensure(new_c == grown, at, || "new_C is not C ∪ (A_i + B_i)".into())?;
        ensure(new_c.is_subset(&sum).expect("same group"), at, || "new_C is not inside A+B".into())?;
        ensure(convergent(&new_c, &new_h), at, || "new_C is not a convergent".into())?;

        let canonical = descend_unchecked(&c, a, &b, &sum, &h);
        ensure(
            canonical.as_ref().is_some_and(|m| m.a == mv.a && m.b == mv.b && m.i == mv.i),
            at,
            || "not the canonical descent choice".into(),
        )?;
        c = new_c;
    }

    ensure(final_c == c.members(), at, || "final_C does not match the end of the chain".into())?;
    let h = c.stabilizer();
    ensure(h.is_trivial(), at, || "final convergent has nontrivial stabilizer".into())?;
    ensure(c.len() + 1 >= a.len() + b.len(), at, || "final convergent is too small".into())?;
    ensure(sum.len() >= c.len() && sum.len() >= bound, at, || "bound does not follow".into())
}
