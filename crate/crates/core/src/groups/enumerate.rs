use std::collections::HashSet;

use super::{Group, MetacyclicParams};
use crate::arith::{divisors, gcd, pow_mod};

/// Metacyclic parameterizations of every order in `[order_min, order_max]`,
/// lexicographic in `(order, m, n, k, t)`.
///
/// Every metacyclic group of each order appears at least once. The
/// extension class `t` is only emitted below `gcd(m, 1 + k + ... + k^(n-1))`:
/// replacing `b` by `b a^s` shifts `t` by `s k (1 + k + ... + k^(n-1))`, so
/// larger values repeat a group already listed.
pub fn enumerate_metacyclic(
    order_min: u64,
    order_max: u64,
) -> impl Iterator<Item = MetacyclicParams> {
    assert!(order_min >= 1 && order_min <= order_max);
    (order_min..=order_max).flat_map(params_of_order)
}

fn params_of_order(order: u64) -> Vec<MetacyclicParams> {
    let mut out = Vec::new();
    for m in divisors(order) {
        let n = order / m;
        for k in 1..=m {
            if gcd(k, m) != 1 || pow_mod(k, n, m) != 1 % m {
                continue;
            }
            let geometric = (0..n).fold(0u64, |acc, j| (acc + pow_mod(k, j, m)) % m);
            let t_bound = gcd(m, geometric);
            for t in 0..t_bound {
                if (t as u128 * (k as u128 - 1)).is_multiple_of(m as u128) {
                    out.push(MetacyclicParams { m, n, k, t });
                }
            }
        }
    }
    out
}

/// As [`enumerate_metacyclic`], keeping only the first parameterization of
/// each [`GroupFingerprint`](super::GroupFingerprint). Fingerprints may merge
/// non-isomorphic groups, so this can drop classes; use it for display only.
pub fn enumerate_metacyclic_distinct(order_min: u64, order_max: u64) -> Vec<MetacyclicParams> {
    let mut seen = HashSet::new();
    enumerate_metacyclic(order_min, order_max)
        .filter(|&p| {
            let grp = Group::new(p).expect("enumerated params are valid");
            seen.insert(grp.fingerprint())
        })
        .collect()
}
