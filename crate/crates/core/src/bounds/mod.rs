//! Finite certification of order bounds for metacyclic group actions,
//! signature-level lemmas and explicit extremal families.

mod families;
mod scan;
mod signatures;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_squarefree;
use crate::fuchsian::SignatureError;
use crate::groups::{Group, GroupError, GroupFingerprint, MetacyclicParams};
use crate::rational::ExactRational;

pub use families::{
    construct_family, large_actions_on_genus, verify_explicit_family,
    verify_no_large_action_on_prime_successor, ExplicitFamily, FamilyCheck, FamilyInstance,
    FamilyVariant, FoundAction, GenusActionReport,
};
pub use scan::{
    default_genus_cap, verify_bound_scan, verify_bound_scan_with, verify_odd_order_scan,
    write_rows_csv, MatchedException, OrderFilter, RecordStore, ReportRow, ScanConfig, ScanReport,
    ScanRow,
};
pub use signatures::{
    derived_kernel_signature, verify_c2p_quotient_bound, verify_c4_quotient_signatures,
    verify_c8_quotient_bound, verify_derived_chains, DerivedChain, DerivedStep, SignatureEntry,
    SignatureListing,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("coefficient {0} must exceed 4")]
    CoefficientTooLow(ExactRational),
    #[error(
        "{params} (order {order}) has no action up to genus cap {genus_cap} and the cap is too small to certify the bound"
    )]
    GenusCapTooSmall {
        params: MetacyclicParams,
        order: u64,
        genus_cap: u64,
    },
    #[error("genus {genus} is not valid here: {reason}")]
    InvalidGenus { genus: u64, reason: String },
    #[error("{p} is not a valid prime here: {reason}")]
    InvalidPrime { p: u64, reason: String },
    #[error("no generating vector for {signature} in any group of order {order}")]
    NoWitness {
        order: u64,
        signature: crate::fuchsian::Signature,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Group classes a scan can be restricted to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum ClassTag {
    #[serde(rename = "metacyclic")]
    Metacyclic,
    #[serde(rename = "zgroup")]
    ZGroup,
    #[serde(rename = "squarefree")]
    Squarefree,
    #[serde(rename = "cyclic_sylow2_metacyclic")]
    CyclicSylow2Metacyclic,
}

impl ClassTag {
    pub const ALL: [ClassTag; 4] = [
        ClassTag::Metacyclic,
        ClassTag::ZGroup,
        ClassTag::Squarefree,
        ClassTag::CyclicSylow2Metacyclic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Metacyclic => "metacyclic",
            ClassTag::ZGroup => "zgroup",
            ClassTag::Squarefree => "squarefree",
            ClassTag::CyclicSylow2Metacyclic => "cyclic_sylow2_metacyclic",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown class tag {s:?}"))
    }
}

/// Every class the group belongs to. All enumerated groups are metacyclic.
pub fn classify(g: &Group) -> BTreeSet<ClassTag> {
    let mut tags = BTreeSet::from([ClassTag::Metacyclic]);
    if g.is_z_group() {
        tags.insert(ClassTag::ZGroup);
    }
    if is_squarefree(g.order()) {
        tags.insert(ClassTag::Squarefree);
    }
    if g.has_cyclic_sylow2() {
        tags.insert(ClassTag::CyclicSylow2Metacyclic);
    }
    tags
}

/// A known exceptional action, matched on `(order, min_genus, fingerprint)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExceptionDescriptor {
    pub order: u64,
    pub min_genus: u64,
    pub fingerprint: GroupFingerprint,
    pub label: String,
}

impl ExceptionDescriptor {
    pub fn from_params(
        params: MetacyclicParams,
        min_genus: u64,
        label: &str,
    ) -> Result<Self, GroupError> {
        let g = Group::new(params)?;
        Ok(ExceptionDescriptor {
            order: g.order(),
            min_genus,
            fingerprint: g.fingerprint(),
            label: label.to_string(),
        })
    }

    pub fn matches(&self, g: &Group, min_genus: u64) -> bool {
        self.order == g.order()
            && self.min_genus == min_genus
            && self.fingerprint == g.fingerprint()
    }

    /// The order-16 group `C8 x| C2` with `b a b^-1 = a^3` on genus 2.
    pub fn order16_genus2() -> Self {
        Self::from_params(MetacyclicParams::new(8, 2, 3, 0), 2, "order16@g2").expect("valid")
    }

    /// `C3 x| C4` on genus 2.
    pub fn c3_c4_genus2() -> Self {
        Self::from_params(MetacyclicParams::new(3, 4, 2, 0), 2, "C3xC4@g2").expect("valid")
    }

    /// `C7 x| C3` on genus 3.
    pub fn c7_c3_genus3() -> Self {
        Self::from_params(MetacyclicParams::new(7, 3, 2, 0), 3, "C7xC3@g3").expect("valid")
    }
}
