use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BoundsError;
use crate::arith::is_prime;
use crate::fuchsian::Signature;
use crate::genvec::{acts_on_genus, find_generating_vector, min_genus, GeneratingVector};
use crate::groups::{enumerate_metacyclic, Group, MetacyclicParams};

/// Extremal families of order `c p` on genus `p + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyVariant {
    /// Order `12p` via `(0;2,6,6)`, `p = 1 mod 3`.
    A,
    /// Order `10p` via `(0;2,5,10)`, `p = 1 mod 5`.
    B,
    /// Order `8p` via `(0;2,8,8)`, `p = 1 mod 8`.
    C,
}

impl FamilyVariant {
    pub fn coefficient(self) -> u64 {
        match self {
            FamilyVariant::A => 12,
            FamilyVariant::B => 10,
            FamilyVariant::C => 8,
        }
    }

    pub fn signature(self) -> Signature {
        Signature::triangle_like(match self {
            FamilyVariant::A => &[2, 6, 6],
            FamilyVariant::B => &[2, 5, 10],
            FamilyVariant::C => &[2, 8, 8],
        })
    }

    /// `p` must be congruent to 1 modulo this.
    pub fn modulus(self) -> u64 {
        match self {
            FamilyVariant::A => 3,
            FamilyVariant::B => 5,
            FamilyVariant::C => 8,
        }
    }
}

impl fmt::Display for FamilyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyVariant::A => "a",
            FamilyVariant::B => "b",
            FamilyVariant::C => "c",
        })
    }
}

impl FromStr for FamilyVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(FamilyVariant::A),
            "b" => Ok(FamilyVariant::B),
            "c" => Ok(FamilyVariant::C),
            _ => Err(format!("unknown family variant {s:?}, expected a, b or c")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub variant: FamilyVariant,
    pub p: u64,
    pub params: MetacyclicParams,
    pub order: u64,
    pub genus: u64,
    pub signature: Signature,
    pub vector: GeneratingVector,
    pub coefficient: u64,
}

impl FamilyInstance {
    /// `order = coefficient * (genus - 1)`.
    pub fn attains_coefficient(&self) -> bool {
        self.order == self.coefficient * (self.genus - 1)
    }
}

/// First enumerated metacyclic group of the variant's order that admits a
/// generating vector for its signature.
pub fn construct_family(variant: FamilyVariant, p: u64) -> Result<FamilyInstance, BoundsError> {
    if !is_prime(p) {
        return Err(BoundsError::InvalidPrime {
            p,
            reason: "not prime".into(),
        });
    }
    if p % variant.modulus() != 1 {
        return Err(BoundsError::InvalidPrime {
            p,
            reason: format!("variant {variant} needs p = 1 mod {}", variant.modulus()),
        });
    }
    let order = variant.coefficient() * p;
    let signature = variant.signature();
    let genus = signature.genus_of_action(order)?;
    for params in enumerate_metacyclic(order, order) {
        let g = Group::new(params)?;
        if let Some(vector) = find_generating_vector(&g, &signature) {
            return Ok(FamilyInstance {
                variant,
                p,
                params,
                order,
                genus,
                signature,
                vector,
                coefficient: variant.coefficient(),
            });
        }
    }
    Err(BoundsError::NoWitness { order, signature })
}

/// Split metacyclic families whose minimal genus is `g` and whose order is
/// linear in `g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExplicitFamily {
    /// `a^{3g} = b^2 = 1`, `b a b^-1 = a^{g-1}`, order `6g`, `g = 5 mod 6`.
    SixG,
    /// `a^{4g} = b^2 = 1`, `b a b^-1 = a^{2g-1}`, order `8g`.
    EightG,
}

impl ExplicitFamily {
    pub fn params(self, g: u64) -> MetacyclicParams {
        match self {
            ExplicitFamily::SixG => MetacyclicParams::new(3 * g, 2, g - 1, 0),
            ExplicitFamily::EightG => MetacyclicParams::new(4 * g, 2, 2 * g - 1, 0),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub family: ExplicitFamily,
    pub genus: u64,
    pub params: MetacyclicParams,
    pub order: u64,
    pub min_genus: Option<u64>,
    pub witness_signature: Option<Signature>,
    pub holds: bool,
}

/// Checks that the family member for `g` has minimal genus exactly `g`.
pub fn verify_explicit_family(family: ExplicitFamily, g: u64) -> Result<FamilyCheck, BoundsError> {
    if g < 2 {
        return Err(BoundsError::InvalidGenus {
            genus: g,
            reason: "genus must be at least 2".into(),
        });
    }
    if family == ExplicitFamily::SixG && g % 6 != 5 {
        return Err(BoundsError::InvalidGenus {
            genus: g,
            reason: "this family needs g = 5 mod 6".into(),
        });
    }
    let params = family.params(g);
    let group = Group::new(params)?;
    let rec = min_genus(&group, g);
    Ok(FamilyCheck {
        family,
        genus: g,
        params,
        order: group.order(),
        min_genus: rec.as_ref().map(|r| r.min_genus),
        witness_signature: rec.as_ref().map(|r| r.witness_signature.clone()),
        holds: rec.is_some_and(|r| r.min_genus == g),
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FoundAction {
    pub params: MetacyclicParams,
    pub signature: Signature,
    pub vector: GeneratingVector,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GenusActionReport {
    pub genus: u64,
    /// Exclusive.
    pub order_lo: u64,
    /// Inclusive.
    pub order_hi: u64,
    pub groups_scanned: usize,
    pub actions: Vec<FoundAction>,
    pub holds: bool,
}

/// Every enumerated metacyclic group with order in `(order_lo, order_hi]`
/// that acts on `genus`, in enumeration order.
pub fn large_actions_on_genus(
    genus: u64,
    order_lo: u64,
    order_hi: u64,
) -> Result<GenusActionReport, BoundsError> {
    if genus < 2 {
        return Err(BoundsError::InvalidGenus {
            genus,
            reason: "genus must be at least 2".into(),
        });
    }
    let params: Vec<MetacyclicParams> = if order_lo < order_hi {
        enumerate_metacyclic(order_lo + 1, order_hi).collect()
    } else {
        Vec::new()
    };
    let found: Vec<Result<Option<FoundAction>, BoundsError>> = params
        .par_iter()
        .map(|&p| {
            let g = Group::new(p)?;
            Ok(
                acts_on_genus(&g, genus).map(|(signature, vector)| FoundAction {
                    params: p,
                    signature,
                    vector,
                }),
            )
        })
        .collect();
    let mut actions = Vec::new();
    for f in found {
        actions.extend(f?);
    }
    Ok(GenusActionReport {
        genus,
        order_lo,
        order_hi,
        groups_scanned: params.len(),
        holds: actions.is_empty(),
        actions,
    })
}

/// For a prime `p >= 17` with `p mod 15` in `{2, 8, 14}`, no metacyclic
/// group of order in `(8(p+1), 12p]` acts on genus `p + 1`.
pub fn verify_no_large_action_on_prime_successor(p: u64) -> Result<GenusActionReport, BoundsError> {
    if p < 17 || !is_prime(p) || ![2, 8, 14].contains(&(p % 15)) {
        return Err(BoundsError::InvalidPrime {
            p,
            reason: "expected a prime p >= 17 with p mod 15 in {2, 8, 14}".into(),
        });
    }
    large_actions_on_genus(p + 1, 8 * (p + 1), 12 * p)
}
