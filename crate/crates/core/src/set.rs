//! Finite subsets of a group: sumsets, translates, stabilizers and saturation.
//!
//! Sets are dense bitsets keyed by element index. Because element indices
//! follow lexicographic order, iterating the bitset yields the canonical
//! sorted member list.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem, QuotientMap};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GSet {
    group: FinAbGroup,
    bits: FixedBitSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
}

impl GSet {
    pub fn empty(group: &FinAbGroup) -> Self {
        GSet {
            group: group.clone(),
            bits: FixedBitSet::with_capacity(group.order()),
        }
    }

    pub fn full(group: &FinAbGroup) -> Self {
        let mut s = Self::empty(group);
        s.bits.insert_range(..);
        s
    }

    pub fn from_elems(group: &FinAbGroup, elems: &[GroupElem]) -> Result<Self> {
        let mut s = Self::empty(group);
        for x in elems {
            s.bits.insert(group.index_of(x)?);
        }
        Ok(s)
    }

    /// Panics if an index is out of range for `group`.
    pub fn from_indices(group: &FinAbGroup, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(group);
        for i in indices {
            assert!(i < group.order(), "index {i} out of range for {group}");
            s.bits.insert(i);
        }
        s
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn contains(&self, x: &GroupElem) -> bool {
        self.group
            .index_of(x)
            .map(|i| self.bits.contains(i))
            .unwrap_or(false)
    }

    /// Element indices in ascending (canonical) order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn members(&self) -> Vec<GroupElem> {
        self.indices().map(|i| self.group.element(i).clone()).collect()
    }

    pub fn first_index(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn is_subset(&self, other: &GSet) -> Result<bool> {
        self.group.check_same(&other.group)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn union(&self, other: &GSet) -> Result<GSet> {
        set_algebra(SetOp::Union, self, other)
    }

    pub fn intersection(&self, other: &GSet) -> Result<GSet> {
        set_algebra(SetOp::Intersect, self, other)
    }

    pub fn difference(&self, other: &GSet) -> Result<GSet> {
        set_algebra(SetOp::Difference, self, other)
    }

    pub fn sumset(&self, other: &GSet) -> Result<GSet> {
        sumset(self, other)
    }

    pub fn translate(&self, g: &GroupElem) -> Result<GSet> {
        translate(self, g)
    }

    pub fn translate_index(&self, g: usize) -> GSet {
        GSet::from_indices(&self.group, self.indices().map(|a| self.group.add_idx(a, g)))
    }

    pub fn stabilizer(&self) -> Subgroup {
        stabilizer(self)
    }

    pub fn saturate(&self, h: &Subgroup) -> Result<GSet> {
        saturate(self, h)
    }

    /// `phi(A)`: the image of this set under a quotient map, deduplicated.
    pub fn image(&self, q: &QuotientMap) -> Result<GSet> {
        self.group.check_same(q.parent())?;
        Ok(GSet::from_indices(
            q.quotient(),
            self.indices().map(|p| q.map_index(p)),
        ))
    }

    /// Whether `x + H` lies entirely inside this set, for `x` an index.
    pub(crate) fn contains_coset(&self, x: usize, h: &Subgroup) -> bool {
        h.as_set()
            .indices()
            .all(|k| self.bits.contains(self.group.add_idx(x, k)))
    }
}

impl fmt::Display for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.group.element(i))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.group.spec(), self)
    }
}

/// `{a + b : a in A, b in B}`.
pub fn sumset(a: &GSet, b: &GSet) -> Result<GSet> {
    a.group.check_same(&b.group)?;
    let g = &a.group;
    let mut out = GSet::empty(g);
    for x in a.indices() {
        for y in b.indices() {
            out.bits.insert(g.add_idx(x, y));
        }
    }
    Ok(out)
}

pub fn translate(a: &GSet, g: &GroupElem) -> Result<GSet> {
    let gi = a.group.index_of(g)?;
    Ok(a.translate_index(gi))
}

/// The subgroup of all `g` with `A + g = A`. The empty set is fixed by every
/// element, so its stabilizer is the whole group.
pub fn stabilizer(a: &GSet) -> Subgroup {
    let g = &a.group;
    let Some(a0) = a.first_index() else {
        return Subgroup::whole(g);
    };
    // A + g = A forces a0 + g in A, so only differences s - a0 are candidates.
    let mut stab = GSet::empty(g);
    for s in a.indices() {
        let cand = g.sub_idx(s, a0);
        if a.indices().all(|x| a.bits.contains(g.add_idx(x, cand))) {
            stab.bits.insert(cand);
        }
    }
    Subgroup::new(stab).expect("stabilizer is closed under the group law")
}

/// `A + H`, a union of `H`-cosets containing `A`.
pub fn saturate(a: &GSet, h: &Subgroup) -> Result<GSet> {
    sumset(a, h.as_set())
}

pub fn set_algebra(op: SetOp, a: &GSet, b: &GSet) -> Result<GSet> {
    a.group.check_same(&b.group)?;
    let mut bits = a.bits.clone();
    match op {
        SetOp::Union => bits.union_with(&b.bits),
        SetOp::Intersect => bits.intersect_with(&b.bits),
        SetOp::Difference => bits.difference_with(&b.bits),
    }
    Ok(GSet {
        group: a.group.clone(),
        bits,
    })
}

/// A set verified to be closed under addition and negation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    carrier: GSet,
}

impl Subgroup {
    pub fn new(carrier: GSet) -> Result<Self> {
        let g = carrier.group.clone();
        if !carrier.contains_index(g.zero_idx()) {
            return Err(Error::InvalidSubgroup(format!(
                "{carrier} does not contain zero"
            )));
        }
        for x in carrier.indices() {
            if !carrier.contains_index(g.neg_idx(x)) {
                return Err(Error::InvalidSubgroup(format!(
                    "{carrier} is not closed under negation"
                )));
            }
            for y in carrier.indices() {
                if !carrier.contains_index(g.add_idx(x, y)) {
                    return Err(Error::InvalidSubgroup(format!(
                        "{carrier} is not closed under addition"
                    )));
                }
            }
        }
        debug_assert_eq!(g.order() % carrier.len(), 0);
        Ok(Subgroup { carrier })
    }

    pub fn trivial(g: &FinAbGroup) -> Self {
        Subgroup {
            carrier: GSet::from_indices(g, [g.zero_idx()]),
        }
    }

    pub fn whole(g: &FinAbGroup) -> Self {
        Subgroup {
            carrier: GSet::full(g),
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.carrier.group
    }

    pub fn as_set(&self) -> &GSet {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.carrier.contains_index(i)
    }

    /// Strict containment `self < other`.
    pub fn is_proper_subgroup_of(&self, other: &Subgroup) -> bool {
        self.carrier.group.same_as(&other.carrier.group)
            && self.carrier.bits.is_subset(&other.carrier.bits)
            && self.order() < other.order()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.carrier, f)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.carrier, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn set(g: &FinAbGroup, xs: &[u32]) -> GSet {
        let elems: Vec<_> = xs.iter().map(|&x| GroupElem::scalar(x)).collect();
        GSet::from_elems(g, &elems).unwrap()
    }

    fn tset(g: &FinAbGroup, xs: &[[u32; 2]]) -> GSet {
        let elems: Vec<_> = xs.iter().map(|x| GroupElem::new(x.to_vec())).collect();
        GSet::from_elems(g, &elems).unwrap()
    }

    #[test]
    fn sumset_examples() {
        let z5 = make_group(&[5]).unwrap();
        assert_eq!(sumset(&set(&z5, &[0, 1]), &set(&z5, &[0, 1])).unwrap(), set(&z5, &[0, 1, 2]));
        let a = set(&z5, &[1, 3]);
        assert_eq!(sumset(&set(&z5, &[0]), &a).unwrap(), a);
        assert!(sumset(&GSet::empty(&z5), &a).unwrap().is_empty());

        let k = make_group(&[2, 2]).unwrap();
        let s = sumset(&tset(&k, &[[0, 0], [1, 0]]), &tset(&k, &[[0, 0], [0, 1]])).unwrap();
        assert_eq!(s, GSet::full(&k));
    }

    #[test]
    fn translate_examples() {
        let z6 = make_group(&[6]).unwrap();
        let a = set(&z6, &[0, 1]);
        assert_eq!(a.translate(&GroupElem::scalar(4)).unwrap(), set(&z6, &[4, 5]));
        assert_eq!(a.translate(&z6.zero()).unwrap(), a);
        let back = a
            .translate(&GroupElem::scalar(4))
            .unwrap()
            .translate(&GroupElem::scalar(2))
            .unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn stabilizer_examples() {
        let z6 = make_group(&[6]).unwrap();
        assert_eq!(set(&z6, &[0, 2, 4]).stabilizer().as_set(), &set(&z6, &[0, 2, 4]));
        assert!(set(&z6, &[0, 1]).stabilizer().is_trivial());
        assert_eq!(GSet::full(&z6).stabilizer(), Subgroup::whole(&z6));
        assert_eq!(GSet::empty(&z6).stabilizer(), Subgroup::whole(&z6));
    }

    #[test]
    fn saturate_examples() {
        let z6 = make_group(&[6]).unwrap();
        let h = Subgroup::new(set(&z6, &[0, 3])).unwrap();
        assert_eq!(set(&z6, &[1]).saturate(&h).unwrap(), set(&z6, &[1, 4]));
        let a = set(&z6, &[2, 5]);
        assert_eq!(a.saturate(&Subgroup::trivial(&z6)).unwrap(), a);
        let evens = Subgroup::new(set(&z6, &[0, 2, 4])).unwrap();
        assert_eq!(set(&z6, &[0, 1]).saturate(&evens).unwrap(), GSet::full(&z6));
    }

    #[test]
    fn set_algebra_examples() {
        let z5 = make_group(&[5]).unwrap();
        let (a, b) = (set(&z5, &[0, 1]), set(&z5, &[0, 4]));
        assert_eq!(a.intersection(&b).unwrap(), set(&z5, &[0]));
        assert_eq!(a.union(&b).unwrap(), set(&z5, &[0, 1, 4]));
        let z8 = make_group(&[8]).unwrap();
        assert_eq!(set(&z8, &[1, 5]).difference(&set(&z8, &[1])).unwrap(), set(&z8, &[5]));
    }

    #[test]
    fn mixed_groups_are_rejected() {
        let z5 = make_group(&[5]).unwrap();
        let z6 = make_group(&[6]).unwrap();
        let (a, b) = (set(&z5, &[0]), set(&z6, &[0]));
        assert!(matches!(sumset(&a, &b), Err(Error::DomainMismatch(_))));
        assert!(matches!(a.union(&b), Err(Error::DomainMismatch(_))));
        assert!(matches!(a.translate(&GroupElem::scalar(5)), Err(Error::DomainMismatch(_))));
        let h = Subgroup::trivial(&z6);
        assert!(matches!(a.saturate(&h), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn subgroup_validation() {
        let z6 = make_group(&[6]).unwrap();
        assert!(matches!(Subgroup::new(set(&z6, &[1, 4])), Err(Error::InvalidSubgroup(_))));
        assert!(matches!(Subgroup::new(set(&z6, &[0, 1])), Err(Error::InvalidSubgroup(_))));
        assert!(Subgroup::new(set(&z6, &[0, 3])).is_ok());
        let h = Subgroup::new(set(&z6, &[0, 3])).unwrap();
        assert!(Subgroup::trivial(&z6).is_proper_subgroup_of(&h));
        assert!(!h.is_proper_subgroup_of(&h));
    }

    #[test]
    fn display_is_canonical() {
        let z6 = make_group(&[6]).unwrap();
        assert_eq!(set(&z6, &[5, 0, 3]).to_string(), "{0,3,5}");
        let g = make_group(&[2, 2]).unwrap();
        assert_eq!(tset(&g, &[[1, 0], [0, 1]]).to_string(), "{(0,1),(1,0)}");
    }
}
