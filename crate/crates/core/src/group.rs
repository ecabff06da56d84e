//! Concrete finite abelian groups.
//!
//! A group is either a direct product `Z_{n1} x ... x Z_{nk}` or a quotient
//! of another group by a subgroup. Elements are addressed two ways: by their
//! encoding (a [`GroupElem`], a coordinate tuple) and by their index in the
//! group's lexicographic enumeration. Index arithmetic is the fast path used
//! by the set layer; encodings are the interchange form.
//!
//! Quotient elements are encoded by the lexicographically least member of
//! their coset, written in the coordinates of the root product group. Since
//! the parent enumeration is already lexicographic, the least member of a
//! coset is also the one with the smallest parent index.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::set::{GSet, Subgroup};

/// Default bound on group order for construction.
pub const DEFAULT_ORDER_CAP: usize = 4096;

/// Groups at most this large get a precomputed addition table.
const TABLE_MAX_ORDER: usize = 128;

/// An element encoding: one coordinate per cyclic factor of the root group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem(Vec<u32>);

impl GroupElem {
    pub fn new(coords: Vec<u32>) -> Self {
        GroupElem(coords)
    }

    pub fn scalar(x: u32) -> Self {
        GroupElem(vec![x])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [x] = self.0.as_slice() {
            return write!(f, "{x}");
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Single-coordinate elements serialize as bare integers, tuples as arrays.
impl Serialize for GroupElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.as_slice() {
            [x] => serializer.serialize_u32(*x),
            coords => coords.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for GroupElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Scalar(u32),
            Tuple(Vec<u32>),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Scalar(x) => GroupElem(vec![x]),
            Repr::Tuple(v) => GroupElem(v),
        })
    }
}

/// A finite abelian group. Cheap to clone; all clones share one immutable table.
#[derive(Clone)]
pub struct FinAbGroup {
    data: Arc<GroupData>,
}

struct GroupData {
    kind: Kind,
    spec: String,
    order: usize,
    elems: Vec<GroupElem>,
    neg: Vec<usize>,
    table: Option<Vec<u32>>,
}

enum Kind {
    Product {
        factors: Vec<u32>,
    },
    Quotient {
        parent: FinAbGroup,
        /// quotient index -> parent index of the coset representative
        reps: Vec<usize>,
        /// parent index -> quotient index
        project: Vec<usize>,
    },
}

/// Builds `Z_{n1} x ... x Z_{nk}` with the default order cap.
pub fn make_group(factor_orders: &[u32]) -> Result<FinAbGroup> {
    FinAbGroup::product_with_cap(factor_orders, DEFAULT_ORDER_CAP)
}

impl FinAbGroup {
    pub fn product(factor_orders: &[u32]) -> Result<Self> {
        Self::product_with_cap(factor_orders, DEFAULT_ORDER_CAP)
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::product(&[n])
    }

    pub fn product_with_cap(factor_orders: &[u32], cap: usize) -> Result<Self> {
        if factor_orders.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors given".into()));
        }
        if let Some(pos) = factor_orders.iter().position(|&n| n == 0) {
            return Err(Error::InvalidGroup(format!("factor {pos} has order 0")));
        }
        let order = factor_orders
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .filter(|&o| o <= cap)
            .ok_or_else(|| Error::TooLarge {
                order: factor_orders
                    .iter()
                    .fold(1usize, |acc, &n| acc.saturating_mul(n as usize)),
                cap,
            })?;

        let mut elems = Vec::with_capacity(order);
        let mut coords = vec![0u32; factor_orders.len()];
        for _ in 0..order {
            elems.push(GroupElem(coords.clone()));
            // odometer increment, last coordinate fastest
            for (c, &n) in coords.iter_mut().zip(factor_orders).rev() {
                *c += 1;
                if *c < n {
                    break;
                }
                *c = 0;
            }
        }
        let neg = (0..order)
            .map(|i| product_neg(factor_orders, i))
            .collect();
        let spec = factor_orders
            .iter()
            .map(|n| format!("Z{n}"))
            .collect::<Vec<_>>()
            .join("x");

        let mut data = GroupData {
            kind: Kind::Product {
                factors: factor_orders.to_vec(),
            },
            spec,
            order,
            elems,
            neg,
            table: None,
        };
        data.table = build_table(&data);
        Ok(FinAbGroup {
            data: Arc::new(data),
        })
    }

    /// Quotient by a subgroup given as sorted parent indices (already closure-checked).
    fn quotient_by_indices(&self, kernel: &[usize], kernel_literal: &str) -> FinAbGroup {
        let n = self.order();
        let mut project = vec![usize::MAX; n];
        let mut reps = Vec::with_capacity(n / kernel.len());
        for p in 0..n {
            if project[p] != usize::MAX {
                continue;
            }
            let q = reps.len();
            reps.push(p);
            for &k in kernel {
                project[self.add_idx(p, k)] = q;
            }
        }
        let elems = reps.iter().map(|&p| self.data.elems[p].clone()).collect();
        let neg = reps
            .iter()
            .map(|&p| project[self.neg_idx(p)])
            .collect();
        let order = reps.len();
        let mut data = GroupData {
            kind: Kind::Quotient {
                parent: self.clone(),
                reps,
                project,
            },
            spec: format!("{}/{}", self.spec(), kernel_literal),
            order,
            elems,
            neg,
            table: None,
        };
        data.table = build_table(&data);
        FinAbGroup {
            data: Arc::new(data),
        }
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    /// Canonical name: `Z6`, `Z2xZ4`, or `parent/{kernel}` for quotients.
    pub fn spec(&self) -> &str {
        &self.data.spec
    }

    pub fn is_quotient(&self) -> bool {
        matches!(self.data.kind, Kind::Quotient { .. })
    }

    /// Cyclic factor orders of a product group; `None` for quotients.
    pub fn factor_orders(&self) -> Option<&[u32]> {
        match &self.data.kind {
            Kind::Product { factors } => Some(factors),
            Kind::Quotient { .. } => None,
        }
    }

    pub fn parent(&self) -> Option<&FinAbGroup> {
        match &self.data.kind {
            Kind::Product { .. } => None,
            Kind::Quotient { parent, .. } => Some(parent),
        }
    }

    /// All elements in lexicographic order of their encodings.
    pub fn elements(&self) -> &[GroupElem] {
        &self.data.elems
    }

    pub fn element(&self, index: usize) -> &GroupElem {
        &self.data.elems[index]
    }

    /// Position of `x` in [`elements`](Self::elements).
    pub fn index_of(&self, x: &GroupElem) -> Result<usize> {
        match &self.data.kind {
            Kind::Product { factors } => {
                if x.0.len() != factors.len() {
                    return Err(Error::DomainMismatch(format!(
                        "element {x} has {} coordinates, {} expects {}",
                        x.0.len(),
                        self.spec(),
                        factors.len()
                    )));
                }
                let mut idx = 0usize;
                for (&c, &n) in x.0.iter().zip(factors) {
                    if c >= n {
                        return Err(Error::DomainMismatch(format!(
                            "coordinate {c} of {x} is out of range for Z{n}"
                        )));
                    }
                    idx = idx * n as usize + c as usize;
                }
                Ok(idx)
            }
            Kind::Quotient {
                parent,
                reps,
                project,
            } => {
                let p = parent.index_of(x)?;
                let q = project[p];
                if reps[q] != p {
                    return Err(Error::DomainMismatch(format!(
                        "{x} is not the canonical representative of its coset in {}",
                        self.spec()
                    )));
                }
                Ok(q)
            }
        }
    }

    pub fn contains(&self, x: &GroupElem) -> bool {
        self.index_of(x).is_ok()
    }

    pub fn zero_idx(&self) -> usize {
        0
    }

    pub fn add_idx(&self, i: usize, j: usize) -> usize {
        if let Some(table) = &self.data.table {
            return table[i * self.data.order + j] as usize;
        }
        self.add_uncached(i, j)
    }

    pub fn neg_idx(&self, i: usize) -> usize {
        self.data.neg[i]
    }

    pub fn sub_idx(&self, i: usize, j: usize) -> usize {
        self.add_idx(i, self.neg_idx(j))
    }

    fn add_uncached(&self, i: usize, j: usize) -> usize {
        match &self.data.kind {
            Kind::Product { factors } => product_add(factors, i, j),
            Kind::Quotient {
                parent,
                reps,
                project,
            } => project[parent.add_idx(reps[i], reps[j])],
        }
    }

    pub fn zero(&self) -> GroupElem {
        self.data.elems[0].clone()
    }

    pub fn add(&self, x: &GroupElem, y: &GroupElem) -> Result<GroupElem> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        Ok(self.data.elems[self.add_idx(i, j)].clone())
    }

    pub fn neg(&self, x: &GroupElem) -> Result<GroupElem> {
        let i = self.index_of(x)?;
        Ok(self.data.elems[self.neg_idx(i)].clone())
    }

    pub fn sub(&self, x: &GroupElem, y: &GroupElem) -> Result<GroupElem> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        Ok(self.data.elems[self.sub_idx(i, j)].clone())
    }

    pub(crate) fn same_as(&self, other: &FinAbGroup) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.spec == other.data.spec
    }

    pub(crate) fn check_same(&self, other: &FinAbGroup) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "operands live in {} and {}",
                self.spec(),
                other.spec()
            )))
        }
    }
}

impl PartialEq for FinAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FinAbGroup {}

impl Hash for FinAbGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.data.spec.hash(state);
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({})", self.spec())
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.spec())
    }
}

fn product_add(factors: &[u32], mut x: usize, mut y: usize) -> usize {
    let (mut out, mut stride) = (0, 1);
    for &n in factors.iter().rev() {
        let n = n as usize;
        out += ((x % n + y % n) % n) * stride;
        stride *= n;
        x /= n;
        y /= n;
    }
    out
}

fn product_neg(factors: &[u32], mut x: usize) -> usize {
    let (mut out, mut stride) = (0, 1);
    for &n in factors.iter().rev() {
        let n = n as usize;
        out += ((n - x % n) % n) * stride;
        stride *= n;
        x /= n;
    }
    out
}

fn build_table(data: &GroupData) -> Option<Vec<u32>> {
    if data.order > TABLE_MAX_ORDER {
        return None;
    }
    let n = data.order;
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let s = match &data.kind {
                Kind::Product { factors } => product_add(factors, i, j),
                Kind::Quotient {
                    parent,
                    reps,
                    project,
                } => project[parent.add_idx(reps[i], reps[j])],
            };
            table.push(s as u32);
        }
    }
    Some(table)
}

/// The canonical homomorphism from a group onto its quotient by `kernel`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    parent: FinAbGroup,
    kernel: Subgroup,
    quotient: FinAbGroup,
}

/// Builds `g / kernel` with lex-least coset representatives.
pub fn quotient(g: &FinAbGroup, kernel: &Subgroup) -> Result<QuotientMap> {
    g.check_same(kernel.group()).map_err(|_| {
        Error::InvalidSubgroup(format!(
            "kernel lives in {}, not {}",
            kernel.group().spec(),
            g.spec()
        ))
    })?;
    let indices: Vec<usize> = kernel.as_set().indices().collect();
    let quotient = g.quotient_by_indices(&indices, &kernel.as_set().to_string());
    Ok(QuotientMap {
        parent: g.clone(),
        kernel: kernel.clone(),
        quotient,
    })
}

impl QuotientMap {
    pub fn new(kernel: &Subgroup) -> Result<Self> {
        quotient(kernel.group(), kernel)
    }

    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn quotient(&self) -> &FinAbGroup {
        &self.quotient
    }

    /// Quotient index of the coset containing parent index `p`.
    pub fn map_index(&self, p: usize) -> usize {
        match &self.quotient.data.kind {
            Kind::Quotient { project, .. } => project[p],
            Kind::Product { .. } => unreachable!("quotient map over a product group"),
        }
    }

    /// Parent index of the representative of quotient index `q`.
    pub fn representative_index(&self, q: usize) -> usize {
        match &self.quotient.data.kind {
            Kind::Quotient { reps, .. } => reps[q],
            Kind::Product { .. } => unreachable!("quotient map over a product group"),
        }
    }

    pub fn map_forward(&self, x: &GroupElem) -> Result<GroupElem> {
        let p = self.parent.index_of(x)?;
        Ok(self.quotient.element(self.map_index(p)).clone())
    }

    /// The full coset `rep(xbar) + K` in the parent.
    pub fn preimage(&self, xbar: &GroupElem) -> Result<GSet> {
        let q = self.quotient.index_of(xbar)?;
        let rep = self.representative_index(q);
        Ok(GSet::from_indices(
            &self.parent,
            self.kernel
                .as_set()
                .indices()
                .map(|k| self.parent.add_idx(rep, k)),
        ))
    }
}

/// Placement of two integer sets into a cyclic group large enough that
/// no sum wraps around.
#[derive(Clone, Debug)]
pub struct IntegerEmbedding {
    pub group: FinAbGroup,
    pub modulus: u32,
    /// Amount added to every element of `A` (that is, `-min(A)`).
    pub shift_a: i64,
    /// Amount added to every element of `B`.
    pub shift_b: i64,
}

impl IntegerEmbedding {
    /// Maps an element of the embedded sumset back to the integer it stands for.
    pub fn lift_sum(&self, x: &GroupElem) -> i64 {
        x.coords()[0] as i64 - self.shift_a - self.shift_b
    }
}

impl fmt::Display for IntegerEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z -> Z{} (A shifted by {:+}, B shifted by {:+})",
            self.modulus, self.shift_a, self.shift_b
        )
    }
}

/// Embeds finite integer sets into `Z_N` with `N = 2 * (span + 1)`, where
/// `span = max(A) + max(B) - min(A) - min(B)`. Every sum lands in
/// `[0, span]`, which is less than half the group, so the embedded sumset is
/// aperiodic exactly as an integer sumset is.
pub fn embed_integers(a: &[i64], b: &[i64]) -> Result<(IntegerEmbedding, Vec<GroupElem>, Vec<GroupElem>)> {
    let (Some(&amin), Some(&amax)) = (a.iter().min(), a.iter().max()) else {
        return Err(Error::EmptySet);
    };
    let (Some(&bmin), Some(&bmax)) = (b.iter().min(), b.iter().max()) else {
        return Err(Error::EmptySet);
    };
    let span = (amax - amin) as i128 + (bmax - bmin) as i128;
    let modulus = 2 * (span + 1);
    if modulus > DEFAULT_ORDER_CAP as i128 {
        return Err(Error::TooLarge {
            order: usize::try_from(modulus).unwrap_or(usize::MAX),
            cap: DEFAULT_ORDER_CAP,
        });
    }
    let modulus = modulus as u32;
    let group = FinAbGroup::cyclic(modulus)?;
    let place = |xs: &[i64], min: i64| -> Vec<GroupElem> {
        xs.iter()
            .map(|&x| GroupElem::scalar((x - min) as u32))
            .collect()
    };
    let ea = place(a, amin);
    let eb = place(b, bmin);
    Ok((
        IntegerEmbedding {
            group,
            modulus,
            shift_a: -amin,
            shift_b: -bmin,
        },
        ea,
        eb,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(x: u32) -> GroupElem {
        GroupElem::scalar(x)
    }

    fn t(v: &[u32]) -> GroupElem {
        GroupElem::new(v.to_vec())
    }

    #[test]
    fn make_group_orders() {
        assert_eq!(make_group(&[6]).unwrap().order(), 6);
        assert_eq!(make_group(&[2, 4]).unwrap().order(), 8);
        let trivial = make_group(&[1]).unwrap();
        assert_eq!(trivial.elements(), &[e(0)]);
    }

    #[test]
    fn make_group_rejects_bad_orders() {
        assert!(matches!(make_group(&[0]), Err(Error::InvalidGroup(_))));
        assert!(matches!(make_group(&[3, 0]), Err(Error::InvalidGroup(_))));
        assert!(matches!(make_group(&[]), Err(Error::InvalidGroup(_))));
        assert!(matches!(make_group(&[4097]), Err(Error::TooLarge { .. })));
        assert!(FinAbGroup::product_with_cap(&[5000], 10_000).is_ok());
    }

    #[test]
    fn element_arithmetic() {
        let z6 = make_group(&[6]).unwrap();
        assert_eq!(z6.add(&e(4), &e(5)).unwrap(), e(3));
        let z2z4 = make_group(&[2, 4]).unwrap();
        assert_eq!(z2z4.neg(&t(&[1, 3])).unwrap(), t(&[1, 1]));
        for x in z2z4.elements() {
            assert_eq!(&z2z4.add(x, &z2z4.zero()).unwrap(), x);
        }
    }

    #[test]
    fn arithmetic_rejects_foreign_elements() {
        let z6 = make_group(&[6]).unwrap();
        assert!(matches!(z6.add(&e(6), &e(0)), Err(Error::DomainMismatch(_))));
        assert!(matches!(z6.neg(&t(&[0, 1])), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        assert_eq!(make_group(&[3]).unwrap().elements(), &[e(0), e(1), e(2)]);
        assert_eq!(
            make_group(&[2, 2]).unwrap().elements(),
            &[t(&[0, 0]), t(&[0, 1]), t(&[1, 0]), t(&[1, 1])]
        );
    }

    #[test]
    fn table_and_uncached_paths_agree() {
        let g = make_group(&[3, 5, 4]).unwrap();
        for i in 0..g.order() {
            for j in 0..g.order() {
                assert_eq!(g.add_idx(i, j), g.add_uncached(i, j));
            }
        }
    }

    fn subgroup(g: &FinAbGroup, xs: &[u32]) -> Subgroup {
        let elems: Vec<_> = xs.iter().map(|&x| e(x)).collect();
        Subgroup::new(GSet::from_elems(g, &elems).unwrap()).unwrap()
    }

    #[test]
    fn quotient_of_z6_by_order_two() {
        let z6 = make_group(&[6]).unwrap();
        let q = quotient(&z6, &subgroup(&z6, &[0, 3])).unwrap();
        assert_eq!(q.quotient().order(), 3);
        assert_eq!(q.quotient().elements(), &[e(0), e(1), e(2)]);
        assert_eq!(q.map_forward(&e(4)).unwrap(), e(1));
        assert_eq!(q.preimage(&e(1)).unwrap().members(), vec![e(1), e(4)]);
        assert_eq!(q.quotient().spec(), "Z6/{0,3}");
    }

    #[test]
    fn quotient_by_trivial_and_full_kernels() {
        let g = make_group(&[2, 3]).unwrap();
        let triv = quotient(&g, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(triv.quotient().elements(), g.elements());
        for x in g.elements() {
            assert_eq!(&triv.map_forward(x).unwrap(), x);
            assert_eq!(triv.preimage(x).unwrap().members(), vec![x.clone()]);
        }
        let full = quotient(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(full.quotient().order(), 1);
        for x in g.elements() {
            assert_eq!(full.map_forward(x).unwrap(), t(&[0, 0]));
        }
    }

    #[test]
    fn quotient_rejects_noncanonical_encodings() {
        let z6 = make_group(&[6]).unwrap();
        let q = quotient(&z6, &subgroup(&z6, &[0, 3])).unwrap();
        assert!(matches!(
            q.quotient().index_of(&e(4)),
            Err(Error::DomainMismatch(_))
        ));
        assert!(matches!(q.preimage(&e(5)), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn quotient_rejects_foreign_kernel() {
        let z6 = make_group(&[6]).unwrap();
        let z4 = make_group(&[4]).unwrap();
        let k = Subgroup::trivial(&z4);
        assert!(matches!(quotient(&z6, &k), Err(Error::InvalidSubgroup(_))));
    }

    #[test]
    fn nested_quotient_canonicalizes() {
        let z8 = make_group(&[8]).unwrap();
        let q1 = quotient(&z8, &subgroup(&z8, &[0, 4])).unwrap();
        let g1 = q1.quotient().clone();
        // {0, 2} in Z8/{0,4} is the coset image of {0,2,4,6}
        let k2 = subgroup(&g1, &[0, 2]);
        let q2 = quotient(&g1, &k2).unwrap();
        assert_eq!(q2.quotient().order(), 2);
        assert_eq!(q2.quotient().elements(), &[e(0), e(1)]);
        for x in q2.quotient().elements() {
            assert_eq!(q2.quotient().index_of(x).map(|i| q2.quotient().element(i)), Ok(x));
        }
        assert_eq!(q2.quotient().spec(), "Z8/{0,4}/{0,2}");
    }

    #[test]
    fn integer_embedding_avoids_wraparound() {
        let (emb, a, b) = embed_integers(&[-3, 0, 2], &[10, 11]).unwrap();
        assert_eq!(emb.modulus, 2 * (5 + 1 + 1));
        assert_eq!(a, vec![e(0), e(3), e(5)]);
        assert_eq!(b, vec![e(0), e(1)]);
        assert_eq!(emb.lift_sum(&e(6)), 6 - 3 + 10);
        assert!(matches!(embed_integers(&[], &[1]), Err(Error::EmptySet)));
    }

    #[test]
    fn elem_serde_shapes() {
        assert_eq!(serde_json::to_string(&e(5)).unwrap(), "5");
        assert_eq!(serde_json::to_string(&t(&[1, 2])).unwrap(), "[1,2]");
        assert_eq!(serde_json::from_str::<GroupElem>("7").unwrap(), e(7));
        assert_eq!(serde_json::from_str::<GroupElem>("[0,3]").unwrap(), t(&[0, 3]));
    }
}
