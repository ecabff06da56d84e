use crate::error::{Error, Result};
use crate::set::{GSet, Subgroup};

/// Both sides of `|A+B| >= |A+K| + |B+K| - |K|` with `K` the stabilizer of `A+B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub k: Subgroup,
    pub sumset_size: usize,
    pub a_plus_k: usize,
    pub b_plus_k: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
    pub equality: bool,
}

pub fn kneser_bound(a: &GSet, b: &GSet) -> Result<BoundReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let sum = a.sumset(b)?;
    let k = sum.stabilizer();
    let a_plus_k = a.saturate(&k)?.len();
    let b_plus_k = b.saturate(&k)?.len();
    let lhs = sum.len();
    let rhs = a_plus_k + b_plus_k - k.order();
    Ok(BoundReport {
        k,
        sumset_size: lhs,
        a_plus_k,
        b_plus_k,
        lhs,
        rhs,
        holds: lhs >= rhs,
        equality: lhs == rhs,
    })
}
