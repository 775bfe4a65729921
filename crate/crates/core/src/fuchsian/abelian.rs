use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::snf::{smith_normal_form, smith_with_column_transform};
use super::{Signature, SignatureError};
use crate::arith::lcm;
use crate::rational::ExactRational;

/// Finitely generated abelian group `Z^free_rank + Z/d_1 + ... + Z/d_s`
/// in invariant-factor form, `d_1 | d_2 | ... | d_s`, every `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: u64,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    /// Normalizes the diagonal of a Smith form: zeros become free rank,
    /// units are dropped.
    pub fn from_diagonal(extra_free: u64, diagonal: &[BigInt]) -> Self {
        let mut free_rank = extra_free;
        let mut torsion = Vec::new();
        for d in diagonal {
            if d.is_zero() {
                free_rank += 1;
            } else {
                let d = d.to_u64().expect("invariant factor exceeds u64");
                if d > 1 {
                    torsion.push(d);
                }
            }
        }
        AbelianInvariants { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        AbelianInvariants {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Largest invariant factor (1 for the trivial group); `None` when infinite.
    pub fn exponent(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.last().copied().unwrap_or(1))
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion.len() as u64 <= 1
    }

    /// Whether the group surjects onto `Z/d`.
    pub fn has_cyclic_quotient(&self, d: u64) -> bool {
        d <= 1 || self.free_rank > 0 || self.torsion.last().is_some_and(|&top| top % d == 0)
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("C{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl fmt::Debug for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Relation matrix of the elliptic part: rows `m_i e_i` and `sum e_i`.
fn elliptic_relations(sig: &Signature) -> Vec<Vec<BigInt>> {
    let r = sig.r();
    let mut rows = Vec::with_capacity(r + 1);
    for (i, &m) in sig.periods().iter().enumerate() {
        let mut row = vec![BigInt::zero(); r];
        row[i] = BigInt::from(m);
        rows.push(row);
    }
    if r > 0 {
        rows.push(vec![BigInt::from(1); r]);
    }
    rows
}

/// Abelianization of the signature group. The hyperbolic generators
/// contribute `2h` free summands since every commutator dies.
pub fn abelianization(sig: &Signature) -> AbelianInvariants {
    let rel = elliptic_relations(sig);
    let diag = if rel.is_empty() {
        Vec::new()
    } else {
        smith_normal_form(&rel)
    };
    AbelianInvariants::from_diagonal(2 * sig.h(), &diag)
}

/// Order of the image of the `index`-th elliptic generator in the
/// abelianization.
pub fn image_order_in_abelianization(sig: &Signature, index: usize) -> Result<u64, SignatureError> {
    if index >= sig.r() {
        return Err(SignatureError::IndexOutOfRange {
            signature: sig.clone(),
            index,
        });
    }
    let (diag, v) = smith_with_column_transform(&elliptic_relations(sig));
    let mut order = 1u64;
    for (j, d) in diag.iter().enumerate() {
        let coord = &v[index][j];
        // Every column has a nonzero diagonal entry: m_i e_i is a relation.
        debug_assert!(!d.is_zero());
        let g = d.gcd(coord);
        let part = (d / g).to_u64().expect("order fits in u64");
        order = lcm(order, part);
    }
    Ok(order)
}

/// Whether the signature group surjects onto the cyclic group of order `d`.
pub fn admits_cyclic_quotient(sig: &Signature, d: u64) -> bool {
    abelianization(sig).has_cyclic_quotient(d)
}

/// Signature of the kernel of an epimorphism onto a group of order
/// `quotient_order` in which the `i`-th elliptic generator has image of
/// order `image_orders[i]`.
pub fn kernel_signature(
    sig: &Signature,
    quotient_order: u64,
    image_orders: &[u64],
) -> Result<Signature, SignatureError> {
    let bad = |msg: String| Err(SignatureError::InconsistentData(msg));
    if image_orders.len() != sig.r() {
        return bad(format!(
            "{} image orders for {} periods",
            image_orders.len(),
            sig.r()
        ));
    }
    if quotient_order == 0 {
        return bad("quotient order 0".into());
    }
    let mut periods = Vec::new();
    for (&m, &o) in sig.periods().iter().zip(image_orders) {
        if o == 0 || m % o != 0 {
            return bad(format!("image order {o} does not divide period {m}"));
        }
        if !quotient_order.is_multiple_of(o) {
            return bad(format!(
                "image order {o} does not divide quotient order {quotient_order}"
            ));
        }
        let p = m / o;
        if p > 1 {
            periods.extend(std::iter::repeat_n(p, (quotient_order / o) as usize));
        }
    }
    let target = ExactRational::from(quotient_order) * sig.measure();
    // 2h' = target + 2 - sum(1 - 1/p)
    let mut two_h = target.clone() + ExactRational::from(2u64);
    for &p in &periods {
        two_h = two_h - ExactRational::new(p as i64 - 1, p as i64);
    }
    let h = match two_h.to_integer().and_then(|x| x.to_u64()) {
        Some(x) if x % 2 == 0 => x / 2,
        _ => {
            return bad(format!(
                "kernel orbit genus would be {two_h}/2 for measure {target}"
            ))
        }
    };
    Signature::new(h, periods)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    fn torsion(s: &str) -> Vec<u64> {
        let ab = abelianization(&sig(s));
        assert_eq!(ab.free_rank, 2 * sig(s).h());
        ab.torsion
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(torsion("(0;2,4,8)"), vec![2, 4]);
        assert_eq!(torsion("(0;2,3,12)"), vec![6]);
        assert_eq!(torsion("(0;7,7,7)"), vec![7, 7]);
        assert_eq!(torsion("(0;2,3,10)"), vec![2]);
        assert_eq!(torsion("(0;2,3,7)"), Vec::<u64>::new());
        assert_eq!(torsion("(2;-)"), Vec::<u64>::new());
        assert_eq!(abelianization(&sig("(1;5)")).to_string(), "Z^2");
    }

    #[test]
    fn image_orders() {
        let s = sig("(0;2,3,10)");
        assert_eq!(image_order_in_abelianization(&s, 1).unwrap(), 1);
        assert_eq!(image_order_in_abelianization(&s, 0).unwrap(), 2);
        assert_eq!(image_order_in_abelianization(&s, 2).unwrap(), 2);
        let s = sig("(0;7,7,7)");
        for i in 0..3 {
            assert_eq!(image_order_in_abelianization(&s, i).unwrap(), 7);
        }
        assert!(image_order_in_abelianization(&s, 3).is_err());
    }

    #[test]
    fn kernel_chain() {
        let k1 = kernel_signature(&sig("(0;2,3,10)"), 2, &[2, 1, 2]).unwrap();
        assert_eq!(k1, sig("(0;3,3,5)"));
        let k2 = kernel_signature(&k1, 3, &[3, 3, 1]).unwrap();
        assert_eq!(k2, sig("(0;5,5,5)"));
        let k3 = kernel_signature(&sig("(0;2,3,14)"), 2, &[2, 1, 2]).unwrap();
        assert_eq!(k3, sig("(0;3,3,7)"));
    }

    #[test]
    fn kernel_inconsistent() {
        // image orders that no epimorphism can have
        assert!(kernel_signature(&sig("(0;2,3,10)"), 2, &[2, 1, 1]).is_err());
        assert!(kernel_signature(&sig("(0;2,3,10)"), 2, &[2, 3, 2]).is_err());
        assert!(kernel_signature(&sig("(0;2,3,10)"), 2, &[2, 1]).is_err());
    }

    #[test]
    fn cyclic_quotients() {
        assert!(admits_cyclic_quotient(&sig("(0;2,8,8)"), 8));
        assert!(!admits_cyclic_quotient(&sig("(0;2,3,10)"), 4));
        assert!(admits_cyclic_quotient(&sig("(0;2,3,10)"), 2));
        for d in [2, 3, 97, 1000] {
            assert!(admits_cyclic_quotient(&sig("(1;5)"), d));
        }
    }
}
