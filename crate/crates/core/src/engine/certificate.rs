//! Certificate records and their generation.
//!
//! Certificates hold plain encodings (group spec strings and element lists)
//! rather than live sets, so a verifier rebuilds every object it checks.

use serde::{Deserialize, Serialize};

use super::bound::kneser_bound;
use super::descent::{descend_unchecked, initial_convergent, normalize_translation, DescentMove, TranslateWitness};
use crate::error::{Error, Result};
use crate::group::{quotient, GroupElem};
use crate::set::GSet;

pub const CERTIFICATE_FORMAT: &str = "kneser-certificate";
pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub group: String,
    pub a: Vec<GroupElem>,
    pub b: Vec<GroupElem>,
    pub claimed_bound: usize,
    pub step: Step,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Step {
    /// `A + B` has nontrivial stabilizer `K`; the bound lifts from `G/K`.
    Quotient {
        kernel: Vec<GroupElem>,
        sub: Box<Certificate>,
    },
    /// `|A| = 1`.
    Base,
    Derivation {
        translate: Option<TranslateRecord>,
        chain: Vec<MoveRecord>,
        final_c: Vec<GroupElem>,
    },
    /// Descent stalled; the bound is checked numerically.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslateRecord {
    pub a: GroupElem,
    pub a_prime: GroupElem,
    pub b: GroupElem,
    pub translated_b: Vec<GroupElem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRecord {
    pub a: GroupElem,
    pub b: GroupElem,
    pub i: u8,
    pub a_i: Vec<GroupElem>,
    pub b_i: Vec<GroupElem>,
    pub new_c: Vec<GroupElem>,
    pub new_h: Vec<GroupElem>,
}

impl From<&TranslateWitness> for TranslateRecord {
    fn from(w: &TranslateWitness) -> Self {
        TranslateRecord {
            a: w.a.clone(),
            a_prime: w.a_prime.clone(),
            b: w.b.clone(),
            translated_b: w.translated_b.members(),
        }
    }
}

impl From<&DescentMove> for MoveRecord {
    fn from(m: &DescentMove) -> Self {
        MoveRecord {
            a: m.a.clone(),
            b: m.b.clone(),
            i: m.i,
            a_i: m.a_i.members(),
            b_i: m.b_i.members(),
            new_c: m.new_c.members(),
            new_h: m.new_h.as_set().members(),
        }
    }
}

/// The on-disk wrapper: format tag, version, then the certificate tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub format: String,
    pub version: u32,
    pub certificate: Certificate,
}

impl Certificate {
    /// Pretty JSON with a trailing newline. Deterministic for a given certificate.
    pub fn to_json(&self) -> String {
        let doc = CertificateDocument {
            format: CERTIFICATE_FORMAT.to_string(),
            version: CERTIFICATE_VERSION,
            certificate: self.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        let doc: CertificateDocument =
            serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))?;
        if doc.format != CERTIFICATE_FORMAT {
            return Err(Error::Certificate(format!("unknown format tag {:?}", doc.format)));
        }
        if doc.version != CERTIFICATE_VERSION {
            return Err(Error::Certificate(format!("unsupported version {}", doc.version)));
        }
        Ok(doc.certificate)
    }

    /// Number of descent moves in this certificate and its sub-certificates.
    pub fn chain_length(&self) -> usize {
        match &self.step {
            Step::Quotient { sub, .. } => sub.chain_length(),
            Step::Derivation { chain, .. } => chain.len(),
            Step::Base | Step::Direct => 0,
        }
    }

    /// Whether any step fell back to the direct numeric check.
    pub fn has_direct_step(&self) -> bool {
        match &self.step {
            Step::Quotient { sub, .. } => sub.has_direct_step(),
            Step::Direct => true,
            Step::Base | Step::Derivation { .. } => false,
        }
    }

    /// The first descent move anywhere in the tree, for inspection and tampering tests.
    pub fn first_move_mut(&mut self) -> Option<&mut MoveRecord> {
        match &mut self.step {
            Step::Quotient { sub, .. } => sub.first_move_mut(),
            Step::Derivation { chain, .. } => chain.first_mut(),
            Step::Base | Step::Direct => None,
        }
    }
}

/// Builds a certificate for `|A+B| >= |A+K| + |B+K| - |K|`.
pub fn certify(a: &GSet, b: &GSet) -> Result<Certificate> {
    let report = kneser_bound(a, b)?;
    let k = &report.k;
    let step = if !k.is_trivial() {
        let q = quotient(a.group(), k)?;
        let sub = certify(&a.image(&q)?, &b.image(&q)?)?;
        Step::Quotient {
            kernel: k.as_set().members(),
            sub: Box::new(sub),
        }
    } else if a.len() == 1 {
        Step::Base
    } else {
        derivation(a, b, report.lhs)?
    };
    Ok(Certificate {
        group: a.group().spec().to_string(),
        a: a.members(),
        b: b.members(),
        claimed_bound: report.rhs,
        step,
    })
}

fn derivation(a: &GSet, b: &GSet, sumset_size: usize) -> Result<Step> {
    let witness = normalize_translation(a, b)?;
    let b = witness.as_ref().map_or(b, |w| &w.translated_b);
    let sum = a.sumset(b)?;
    let mut c = initial_convergent(a, b)?;
    let mut chain = Vec::new();
    let stalled = loop {
        let report = super::descent::convergent_report(&c, a, b);
        if !report.is_convergent {
            break true;
        }
        if report.h.is_trivial() {
            break false;
        }
        match descend_unchecked(&c, a, b, &sum, &report.h) {
            Some(m) => {
                chain.push(MoveRecord::from(&m));
                c = m.new_c;
            }
            None => break true,
        }
    };
    if !stalled {
        return Ok(Step::Derivation {
            translate: witness.as_ref().map(TranslateRecord::from),
            chain,
            final_c: c.members(),
        });
    }
    if sumset_size + 1 >= a.len() + b.len() {
        Ok(Step::Direct)
    } else {
        Err(Error::ProofFalsified(format!(
            "descent stalled and |A+B| = {sumset_size} < |A| + |B| - 1 for A = {a}, B = {b}"
        )))
    }
}
