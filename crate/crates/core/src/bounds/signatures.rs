use serde::{Deserialize, Serialize};

use super::BoundsError;
use crate::arith::is_prime;
use crate::fuchsian::{
    abelianization, admits_cyclic_quotient, enumerate_signatures_above_ratio_with_quotient,
    image_order_in_abelianization, kernel_signature, AbelianInvariants, Signature, SignatureError,
};
use crate::rational::ExactRational;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SignatureEntry {
    pub signature: Signature,
    pub multiplier: ExactRational,
}

impl SignatureEntry {
    fn of(sig: Signature) -> Result<Self, SignatureError> {
        let multiplier = sig.order_multiplier()?;
        Ok(SignatureEntry {
            signature: sig,
            multiplier,
        })
    }
}

/// Outcome of a signature-level check: the enumerated set and the
/// boundary signatures inspected alongside it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SignatureListing {
    pub holds: bool,
    pub threshold: ExactRational,
    pub quotient: u64,
    pub entries: Vec<SignatureEntry>,
    pub boundary: Vec<SignatureEntry>,
}

fn sig(periods: &[u64]) -> Signature {
    Signature::triangle_like(periods)
}

fn listing(threshold: ExactRational, d: u64) -> Result<SignatureListing, BoundsError> {
    let entries = enumerate_signatures_above_ratio_with_quotient(&threshold, d)?
        .into_iter()
        .map(|(signature, multiplier)| SignatureEntry {
            signature,
            multiplier,
        })
        .collect();
    Ok(SignatureListing {
        holds: false,
        threshold,
        quotient: d,
        entries,
        boundary: Vec::new(),
    })
}

/// Signatures with multiplier above 10 and a `C4` quotient are exactly
/// `(0;3,4,4)`, `(0;2,4,8)`, `(0;2,4,12)`, `(0;2,4,16)`.
pub fn verify_c4_quotient_signatures() -> Result<SignatureListing, BoundsError> {
    let mut out = listing(ExactRational::from(10u64), 4)?;
    let expected = [
        (sig(&[3, 4, 4]), ExactRational::from(12u64)),
        (sig(&[2, 4, 8]), ExactRational::from(16u64)),
        (sig(&[2, 4, 12]), ExactRational::from(12u64)),
        (sig(&[2, 4, 16]), ExactRational::new(32, 3)),
    ];
    let mut got: Vec<_> = out
        .entries
        .iter()
        .map(|e| (e.signature.clone(), e.multiplier.clone()))
        .collect();
    got.sort();
    let mut want = expected.to_vec();
    want.sort();

    out.boundary = vec![
        SignatureEntry::of(sig(&[2, 4, 20]))?,
        SignatureEntry::of(sig(&[4, 4, 4]))?,
    ];
    out.holds = got == want
        && out.boundary[0].multiplier == 10
        && out.boundary[1].multiplier == 8
        && out
            .boundary
            .iter()
            .all(|e| admits_cyclic_quotient(&e.signature, 4));
    Ok(out)
}

/// No signature with multiplier above 8 has a `C8` quotient, while
/// `(0;2,8,8)` has one at multiplier exactly 8.
pub fn verify_c8_quotient_bound() -> Result<SignatureListing, BoundsError> {
    let mut out = listing(ExactRational::from(8u64), 8)?;
    out.boundary = vec![
        SignatureEntry::of(sig(&[2, 8, 8]))?,
        SignatureEntry::of(sig(&[2, 4, 8]))?,
    ];
    out.holds = out.entries.is_empty()
        && out.boundary[0].multiplier == 8
        && admits_cyclic_quotient(&out.boundary[0].signature, 8)
        && !admits_cyclic_quotient(&out.boundary[1].signature, 8);
    Ok(out)
}

/// For an odd prime `p >= 5`, no signature with multiplier above
/// `4p / (p - 3)` has a `C_2p` quotient, and `(0;2,p,2p)` attains it.
pub fn verify_c2p_quotient_bound(p: u64) -> Result<SignatureListing, BoundsError> {
    if p < 5 || !is_prime(p) {
        return Err(BoundsError::InvalidPrime {
            p,
            reason: "expected a prime of at least 5".into(),
        });
    }
    let threshold = ExactRational::new(4 * p as i64, p as i64 - 3);
    let mut out = listing(threshold.clone(), 2 * p)?;
    out.boundary = vec![SignatureEntry::of(sig(&[2, p, 2 * p]))?];
    out.holds = out.entries.is_empty()
        && out.boundary[0].multiplier == threshold
        && admits_cyclic_quotient(&out.boundary[0].signature, 2 * p);
    Ok(out)
}

/// Signature of the commutator subgroup of a signature group with finite
/// abelianization, together with that abelianization.
pub fn derived_kernel_signature(
    sig: &Signature,
) -> Result<(AbelianInvariants, Signature), SignatureError> {
    let ab = abelianization(sig);
    let q = ab.order().ok_or_else(|| {
        SignatureError::InconsistentData(format!("{sig} has infinite abelianization {ab}"))
    })?;
    let orders = (0..sig.r())
        .map(|i| image_order_in_abelianization(sig, i))
        .collect::<Result<Vec<_>, _>>()?;
    let kernel = kernel_signature(sig, q, &orders)?;
    Ok((ab, kernel))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DerivedStep {
    pub signature: Signature,
    pub measure: ExactRational,
    pub abelianization: AbelianInvariants,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DerivedChain {
    pub holds: bool,
    pub steps: Vec<DerivedStep>,
    pub expected: Vec<Signature>,
}

fn chain(
    start: Signature,
    expected: Vec<Signature>,
    last_torsion: &[u64],
) -> Result<DerivedChain, SignatureError> {
    let mut steps = Vec::new();
    let mut cur = start;
    for _ in 0..expected.len() {
        let (ab, next) = derived_kernel_signature(&cur)?;
        steps.push(DerivedStep {
            signature: cur.clone(),
            measure: cur.measure(),
            abelianization: ab,
        });
        cur = next;
    }
    let ab = abelianization(&cur);
    steps.push(DerivedStep {
        signature: cur.clone(),
        measure: cur.measure(),
        abelianization: ab,
    });

    let sigs_ok = steps[1..].iter().map(|s| &s.signature).eq(expected.iter());
    let measures_ok = steps.windows(2).all(|w| {
        w[0].abelianization
            .order()
            .is_some_and(|q| w[1].measure == ExactRational::from(q) * w[0].measure.clone())
    });
    let last = steps.last().expect("nonempty");
    let torsion_ok =
        last.abelianization.free_rank == 0 && last.abelianization.torsion == last_torsion;
    Ok(DerivedChain {
        holds: sigs_ok && measures_ok && torsion_ok,
        steps,
        expected,
    })
}

/// Commutator chains `(0;2,3,10) > (0;3,3,5) > (0;5,5,5)` and
/// `(0;2,3,14) > (0;3,3,7) > (0;7,7,7)`.
pub fn verify_derived_chains() -> Result<Vec<DerivedChain>, BoundsError> {
    let first = chain(
        sig(&[2, 3, 10]),
        vec![sig(&[3, 3, 5]), sig(&[5, 5, 5])],
        &[5, 5],
    )?;
    let second = chain(
        sig(&[2, 3, 14]),
        vec![sig(&[3, 3, 7]), sig(&[7, 7, 7])],
        &[7, 7],
    )?;
    let ab0 = &first.steps[0].abelianization;
    let first_ab_ok = ab0.free_rank == 0 && ab0.torsion == [2];
    let mut out = vec![first, second];
    out[0].holds &= first_ab_ok;
    Ok(out)
}
