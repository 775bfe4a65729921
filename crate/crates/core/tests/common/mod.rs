//! Slow, direct re-implementations used as oracles. None of these share
//! code paths with the library beyond group multiplication.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use metagenus::fuchsian::Signature;
use metagenus::groups::Group;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by Bareiss fraction-free elimination.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k x k` minors and the `k`-th factor is `d_k / d_{k-1}`. Zeros mark
/// ranks never reached. Length `min(rows, cols)`.
pub fn invariant_factors_by_minors(a: &[Vec<i64>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let size = rows.min(cols);
    let mut out = Vec::with_capacity(size);
    let mut prev = 1i128;
    for k in 1..=size {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| a[r][c] as i128).collect())
                    .collect();
                d = gcd(d, bareiss_det(sub));
            }
        }
        if d == 0 {
            out.extend(std::iter::repeat_n(0, size - out.len()));
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// `(numerator, denominator)` of `2 / mu` compared against `c = cn / cd`
/// purely in integers: multiplier > c iff `0 < mu < 2 cd / cn`.
fn above(h: u64, periods: &[u64], cn: i128, cd: i128) -> bool {
    let lcm = periods
        .iter()
        .fold(1i128, |l, &p| l / gcd(l, p as i128) * p as i128);
    // mu * lcm
    let mut mu = (2 * h as i128 - 2) * lcm;
    for &p in periods {
        mu += lcm - lcm / p as i128;
    }
    mu > 0 && mu * cn < 2 * cd * lcm
}

/// All signatures with `h <= 1`, at most 4 (h = 0) or 2 (h = 1) periods,
/// each at most `max_period`, whose multiplier exceeds `cn / cd`.
/// Five or more periods, or h = 1 with a period, or h >= 2, already give
/// measure at least 1/2, i.e. multiplier at most 4.
pub fn brute_signatures_above(cn: i128, cd: i128, max_period: u64) -> BTreeSet<Signature> {
    let mut out = BTreeSet::new();
    let mut push = |h: u64, ps: &[u64]| {
        if above(h, ps, cn, cd) {
            out.insert(Signature::new(h, ps.to_vec()).unwrap());
        }
    };
    for a in 2..=max_period {
        push(1, &[a]);
        for b in a..=max_period {
            push(1, &[a, b]);
            for c in b..=max_period {
                push(0, &[a, b, c]);
                for d in c..=max_period {
                    push(0, &[a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Whether some homomorphism onto `Z/d` exists, by trying every image
/// of the elliptic generators.
pub fn brute_cyclic_quotient(sig: &Signature, d: u64) -> bool {
    if d == 1 || sig.h() > 0 {
        return true;
    }
    let r = sig.r();
    let mut xs = vec![0u64; r];
    loop {
        let ok_orders = xs
            .iter()
            .zip(sig.periods())
            .all(|(&x, &m)| (x * m) % d == 0);
        if ok_orders && xs.iter().sum::<u64>() % d == 0 {
            let g = xs.iter().fold(d as i128, |g, &x| gcd(g, x as i128));
            if g == 1 {
                return true;
            }
        }
        let mut i = 0;
        loop {
            if i == r {
                return false;
            }
            xs[i] += 1;
            if xs[i] < d {
                break;
            }
            xs[i] = 0;
            i += 1;
        }
    }
}

/// Size of the subgroup generated by `gens`, by naive closure.
pub fn closure_size(g: &Group, gens: &[usize]) -> usize {
    let mut seen = vec![false; g.size()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

fn naive_order(g: &Group, x: usize) -> u64 {
    let mut acc = x;
    let mut o = 1;
    while acc != 0 {
        acc = g.mul(acc, x);
        o += 1;
    }
    o
}

/// Exhaustive search over every tuple of group elements.
pub fn brute_vector_exists(g: &Group, sig: &Signature) -> bool {
    let n = g.size();
    let h = sig.h() as usize;
    let periods = sig.periods();
    let len = 2 * h + periods.len();
    let orders: Vec<u64> = (0..n).map(|x| naive_order(g, x)).collect();
    // Elliptic slot i only accepts elements of order periods[i]; checking
    // this slot by slot is the same enumeration with the order test early.
    let allowed = |slot: usize, x: usize| slot < 2 * h || orders[x] == periods[slot - 2 * h];
    let mut tuple = vec![0usize; len];

    fn rec(
        g: &Group,
        slot: usize,
        tuple: &mut Vec<usize>,
        h: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if slot == tuple.len() {
            let mut prod = 0;
            for l in 0..h {
                let (a, b) = (tuple[2 * l], tuple[2 * l + 1]);
                let ab = g.mul(a, b);
                let ba = g.mul(b, a);
                // [a, b] = a b (b a)^-1
                let comm = (0..g.size())
                    .find(|&z| g.mul(ba, z) == 0)
                    .map(|inv| g.mul(ab, inv))
                    .unwrap();
                prod = g.mul(prod, comm);
            }
            for &x in &tuple[2 * h..] {
                prod = g.mul(prod, x);
            }
            return prod == 0 && closure_size(g, tuple) == g.size();
        }
        for x in 0..g.size() {
            if !allowed(slot, x) {
                continue;
            }
            tuple[slot] = x;
            if rec(g, slot + 1, tuple, h, allowed) {
                return true;
            }
        }
        false
    }
    rec(g, 0, &mut tuple, h, &allowed)
}

/// Smith diagonal by elementary row and column operations on `i128`,
/// pivoting on the smallest non-zero entry. Non-negative, zeros last.
pub fn invariant_factors_by_reduction(a: &[Vec<i64>]) -> Vec<i128> {
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let size = rows.min(cols);
    for t in 0..size {
        loop {
            let mut pivot = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0
                        && pivot
                            .is_none_or(|(pi, pj): (usize, usize)| m[i][j].abs() < m[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return (0..size).map(|i| if i < t { m[i][i] } else { 0 }).collect();
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                for i in t..rows {
                    m[i][j] -= q * m[i][t];
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Pivot must divide the rest; otherwise fold an offending row in.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for j in t..cols {
                m[t][j] = -m[t][j];
            }
        }
    }
    (0..size).map(|i| m[i][i]).collect()
}
