//! Surface-kernel generating vectors and minimal genus.
//!
//! A group `G` acts on a surface of genus `g` with signature
//! `(h; m_1..m_r)` exactly when there are elements
//! `a_1, b_1, ..., a_h, b_h, x_1, ..., x_r` generating `G` with
//! `ord(x_i) = m_i` and `[a_1,b_1] ... [a_h,b_h] x_1 ... x_r = 1`, where
//! `[a, b] = a b a^-1 b^-1`.

mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuchsian::{divisor_periods, enumerate_signatures_for, Signature};
use crate::groups::{Element, Group, MetacyclicParams};

pub use search::find_generating_vector;

/// Identifies the search order. Stored witnesses from another version are
/// recomputed rather than trusted.
pub const ENGINE_VERSION: &str = concat!("metagenus-", env!("CARGO_PKG_VERSION"), "/search-1");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenvecError {
    #[error("vector shape ({pairs} hyperbolic, {elliptic} elliptic) does not fit {signature}")]
    ShapeMismatch {
        signature: Signature,
        pairs: usize,
        elliptic: usize,
    },
}

/// Witness of an epimorphism from a signature group onto `G` with
/// torsion-free kernel.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GeneratingVector {
    /// `a_1, b_1, ..., a_h, b_h`.
    pub hyperbolic_pairs: Vec<Element>,
    /// `x_1, ..., x_r`, aligned with the ascending periods.
    pub elliptic: Vec<Element>,
}

impl GeneratingVector {
    fn indices(&self, g: &Group) -> Option<(Vec<usize>, Vec<usize>)> {
        let hyp = self
            .hyperbolic_pairs
            .iter()
            .map(|&e| g.index(e))
            .collect::<Option<Vec<_>>>()?;
        let ell = self
            .elliptic
            .iter()
            .map(|&e| g.index(e))
            .collect::<Option<Vec<_>>>()?;
        Some((hyp, ell))
    }

    pub(crate) fn from_indices(g: &Group, hyp: &[usize], ell: &[usize]) -> Self {
        GeneratingVector {
            hyperbolic_pairs: hyp.iter().map(|&x| g.element(x)).collect(),
            elliptic: ell.iter().map(|&x| g.element(x)).collect(),
        }
    }

    /// Every entry conjugated by `by` (index in `g`).
    pub fn conjugated(&self, g: &Group, by: usize) -> Option<Self> {
        let (hyp, ell) = self.indices(g)?;
        let c = |v: Vec<usize>| {
            v.into_iter()
                .map(|x| g.conjugate(by, x))
                .collect::<Vec<_>>()
        };
        Some(GeneratingVector::from_indices(g, &c(hyp), &c(ell)))
    }
}

/// Checks element orders, the long relation and generation.
pub fn is_surface_kernel_vector(
    g: &Group,
    sig: &Signature,
    vec: &GeneratingVector,
) -> Result<bool, GenvecError> {
    if vec.hyperbolic_pairs.len() != 2 * sig.h() as usize || vec.elliptic.len() != sig.r() {
        return Err(GenvecError::ShapeMismatch {
            signature: sig.clone(),
            pairs: vec.hyperbolic_pairs.len(),
            elliptic: vec.elliptic.len(),
        });
    }
    let Some((hyp, ell)) = vec.indices(g) else {
        return Ok(false);
    };
    Ok(check_indices(g, sig.periods(), &hyp, &ell))
}

pub(crate) fn check_indices(g: &Group, periods: &[u64], hyp: &[usize], ell: &[usize]) -> bool {
    if ell
        .iter()
        .zip(periods)
        .any(|(&x, &m)| g.element_order(x) != m)
    {
        return false;
    }
    let mut prod = Group::IDENTITY;
    for pair in hyp.chunks(2) {
        prod = g.mul(prod, g.commutator(pair[0], pair[1]));
    }
    for &x in ell {
        prod = g.mul(prod, x);
    }
    if prod != Group::IDENTITY {
        return false;
    }
    let all: Vec<usize> = hyp.iter().chain(ell).copied().collect();
    g.generates(&all)
}

/// First signature (in enumeration order) on which `g` acts on `genus`,
/// with its witness. Only element orders of `g` are used as periods.
pub fn acts_on_genus(g: &Group, genus: u64) -> Option<(Signature, GeneratingVector)> {
    assert!(genus >= 2);
    signatures_for_group(g, genus)
        .into_iter()
        .find_map(|sig| find_generating_vector(g, &sig).map(|v| (sig, v)))
}

/// Candidate signatures for an action of `g` on `genus`.
pub fn signatures_for_group(g: &Group, genus: u64) -> Vec<Signature> {
    let allowed: Vec<u64> = g.element_orders().into_iter().filter(|&o| o >= 2).collect();
    debug_assert!(allowed
        .iter()
        .all(|p| divisor_periods(g.order()).contains(p)));
    enumerate_signatures_for(g.order(), genus, &allowed)
}

/// Least genus of an action, with witness.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MinGenusRecord {
    pub params: MetacyclicParams,
    pub min_genus: u64,
    pub witness_signature: Signature,
    pub witness_vector: GeneratingVector,
    /// Genus cap of the search that produced the record.
    pub search_cap: u64,
}

impl MinGenusRecord {
    /// Re-checks the witness: parameters, vector validity and the
    /// Riemann-Hurwitz genus. Minimality itself is not re-established.
    pub fn revalidate(&self) -> bool {
        let Ok(g) = Group::new(self.params) else {
            return false;
        };
        self.revalidate_against(&g)
    }

    pub fn revalidate_against(&self, g: &Group) -> bool {
        g.params() == self.params
            && self.min_genus >= 2
            && self.min_genus <= self.search_cap
            && self.witness_signature.genus_of_action(g.order()).ok() == Some(self.min_genus)
            && is_surface_kernel_vector(g, &self.witness_signature, &self.witness_vector)
                .unwrap_or(false)
    }
}

/// Scans `g = 2, 3, ..., genus_cap` and returns the first genus carrying
/// an action.
pub fn min_genus(g: &Group, genus_cap: u64) -> Option<MinGenusRecord> {
    (2..=genus_cap).find_map(|genus| {
        acts_on_genus(g, genus).map(|(sig, vec)| MinGenusRecord {
            params: g.params(),
            min_genus: genus,
            witness_signature: sig,
            witness_vector: vec,
            search_cap: genus_cap,
        })
    })
}
