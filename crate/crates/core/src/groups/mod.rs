//! Metacyclic groups `<a, b | a^m = 1, b^n = a^t, b a b^-1 = a^k>`.
//!
//! Elements are normal words `a^i b^j` with `0 <= i < m`, `0 <= j < n`,
//! indexed as `i * n + j` so index order is lexicographic in `(i, j)`.

mod enumerate;
mod iso;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, gcd, lcm, pow_mod, radical, valuation};
use crate::fuchsian::snf::smith_normal_form;
use crate::fuchsian::{int_matrix, AbelianInvariants};

pub use enumerate::{enumerate_metacyclic, enumerate_metacyclic_distinct};
pub use iso::{find_isomorphism, is_isomorphic, is_isomorphic_with_cap, DEFAULT_ISO_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid metacyclic parameters {params}: {reason}")]
    InvalidParams {
        params: MetacyclicParams,
        reason: String,
    },
    #[error("isomorphism test on order {order} exceeds cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
}

/// Parameters `(m, n, k, t)` of a metacyclic presentation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MetacyclicParams {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub t: u64,
}

impl MetacyclicParams {
    pub const fn new(m: u64, n: u64, k: u64, t: u64) -> Self {
        MetacyclicParams { m, n, k, t }
    }

    pub fn order(&self) -> u64 {
        self.m * self.n
    }

    /// Checks `gcd(k, m) = 1`, `k^n = 1` and `t (k - 1) = 0` modulo `m`.
    pub fn validate(&self) -> Result<(), GroupError> {
        let fail = |reason: String| {
            Err(GroupError::InvalidParams {
                params: *self,
                reason,
            })
        };
        let MetacyclicParams { m, n, k, t } = *self;
        if m == 0 || n == 0 {
            return fail("m and n must be positive".into());
        }
        if k == 0 || k > m {
            return fail(format!("k = {k} must lie in [1, m]"));
        }
        if t >= m {
            return fail(format!("t = {t} must lie in [0, m)"));
        }
        if gcd(k, m) != 1 {
            return fail(format!("gcd(k, m) = {} != 1", gcd(k, m)));
        }
        if pow_mod(k, n, m) != 1 % m {
            return fail(format!("k^n = {} != 1 (mod m)", pow_mod(k, n, m)));
        }
        if !(t as u128 * (k as u128 + m as u128 - 1)).is_multiple_of(m as u128) {
            return fail("t (k - 1) != 0 (mod m)".into());
        }
        Ok(())
    }

    pub fn is_split(&self) -> bool {
        self.t == 0
    }
}

impl fmt::Display for MetacyclicParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(m={}, n={}, k={}, t={})",
            self.m, self.n, self.k, self.t
        )
    }
}

impl fmt::Debug for MetacyclicParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m, self.n, self.k, self.t)
    }
}

/// The word `a^i b^j`; serialized as the pair `[i, j]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(from = "[u64; 2]", into = "[u64; 2]")]
pub struct Element {
    pub i: u64,
    pub j: u64,
}

impl From<[u64; 2]> for Element {
    fn from([i, j]: [u64; 2]) -> Self {
        Element { i, j }
    }
}

impl From<Element> for [u64; 2] {
    fn from(e: Element) -> Self {
        [e.i, e.j]
    }
}

/// Invariants that isomorphic groups share. Unequal fingerprints prove
/// non-isomorphism; equal ones prove nothing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct GroupFingerprint {
    pub order: u64,
    pub element_order_multiset: Vec<u64>,
    pub abelianization: AbelianInvariants,
    pub derived_order: u64,
    pub exponent: u64,
}

/// Above this order the multiplication table is not materialized.
const TABLE_LIMIT: usize = 2048;

/// A constructed metacyclic group. Everything is computed at construction
/// and immutable afterwards.
pub struct Group {
    params: MetacyclicParams,
    size: usize,
    k_powers: Vec<u64>,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    orders: Vec<u64>,
    by_order: BTreeMap<u64, Vec<u32>>,
}

pub fn make_group(params: MetacyclicParams) -> Result<Group, GroupError> {
    Group::new(params)
}

impl Group {
    pub fn new(params: MetacyclicParams) -> Result<Group, GroupError> {
        params.validate()?;
        let size = usize::try_from(params.order()).expect("group order fits in usize");
        assert!(size <= u32::MAX as usize, "group too large");
        let k_powers = (0..params.n)
            .map(|j| pow_mod(params.k, j, params.m))
            .collect();
        let mut g = Group {
            params,
            size,
            k_powers,
            table: None,
            inverses: Vec::new(),
            orders: Vec::new(),
            by_order: BTreeMap::new(),
        };
        if size <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(size * size);
            for x in 0..size {
                for y in 0..size {
                    table.push(g.mul_direct(x, y) as u32);
                }
            }
            g.table = Some(table);
        }
        let mut orders = Vec::with_capacity(size);
        for x in 0..size {
            let mut acc = x;
            let mut ord = 1u64;
            while acc != 0 {
                acc = g.mul(acc, x);
                ord += 1;
            }
            orders.push(ord);
        }
        let mut inverses = vec![0u32; size];
        for x in 0..size {
            // x^(ord - 1)
            inverses[x] = g.pow(x, orders[x] - 1) as u32;
        }
        let mut by_order: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for (x, &o) in orders.iter().enumerate() {
            by_order.entry(o).or_default().push(x as u32);
        }
        g.orders = orders;
        g.inverses = inverses;
        g.by_order = by_order;
        Ok(g)
    }

    pub fn params(&self) -> MetacyclicParams {
        self.params
    }

    pub fn order(&self) -> u64 {
        self.size as u64
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub const IDENTITY: usize = 0;

    pub fn element(&self, idx: usize) -> Element {
        let n = self.params.n as usize;
        Element {
            i: (idx / n) as u64,
            j: (idx % n) as u64,
        }
    }

    /// Index of an element; `None` if its exponents are out of range.
    pub fn index(&self, e: Element) -> Option<usize> {
        (e.i < self.params.m && e.j < self.params.n).then(|| (e.i * self.params.n + e.j) as usize)
    }

    /// The generator `a`.
    pub fn a(&self) -> usize {
        if self.params.m > 1 {
            self.params.n as usize
        } else {
            0
        }
    }

    /// The generator `b`.
    pub fn b(&self) -> usize {
        if self.params.n > 1 {
            1
        } else {
            self.index(Element {
                i: self.params.t,
                j: 0,
            })
            .unwrap()
        }
    }

    fn mul_direct(&self, x: usize, y: usize) -> usize {
        let MetacyclicParams { m, n, t, .. } = self.params;
        let (n_us, m_u) = (n as usize, m);
        let (i1, j1) = ((x / n_us) as u64, (x % n_us) as u64);
        let (i2, j2) = ((y / n_us) as u64, (y % n_us) as u64);
        let js = j1 + j2;
        let carry = if js >= n { t } else { 0 };
        let i = (i1 + self.k_powers[j1 as usize] * i2 % m_u + carry) % m_u;
        let j = js % n;
        (i * n + j) as usize
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t[x * self.size + y] as usize,
            None => self.mul_direct(x, y),
        }
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x] as usize
    }

    pub fn pow(&self, x: usize, mut e: u64) -> usize {
        let mut base = x;
        let mut acc = Self::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x y x^-1 y^-1`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(xy, self.inv(yx))
    }

    /// `g x g^-1`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    #[inline]
    pub fn element_order(&self, x: usize) -> u64 {
        self.orders[x]
    }

    /// Distinct element orders, ascending.
    pub fn element_orders(&self) -> Vec<u64> {
        self.by_order.keys().copied().collect()
    }

    /// Elements of exactly the given order, in index order.
    pub fn elements_of_order(&self, o: u64) -> &[u32] {
        self.by_order.get(&o).map_or(&[], |v| v.as_slice())
    }

    pub fn is_abelian(&self) -> bool {
        self.commutator(self.a(), self.b()) == Self::IDENTITY
    }

    /// Least subgroup containing `gens`, as sorted indices.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.size];
        let mut elems = vec![Self::IDENTITY];
        member[Self::IDENTITY] = true;
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut head = 0;
        while head < elems.len() && elems.len() < self.size {
            let x = elems[head];
            head += 1;
            for &g in &gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
        }
        if elems.len() == self.size {
            return (0..self.size).collect();
        }
        elems.sort_unstable();
        elems
    }

    /// Whether `gens` generate the whole group.
    pub fn generates(&self, gens: &[usize]) -> bool {
        self.subgroup_closure(gens).len() == self.size
    }

    /// The commutator subgroup, as the normal closure of `[a, b]`.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let (a, b) = (self.a(), self.b());
        let mut gens = vec![self.commutator(a, b)];
        loop {
            let sub = self.subgroup_closure(&gens);
            let mut member = vec![false; self.size];
            for &x in &sub {
                member[x] = true;
            }
            let extra: Vec<usize> = gens
                .iter()
                .flat_map(|&x| [self.conjugate(a, x), self.conjugate(b, x)])
                .filter(|&y| !member[y])
                .collect();
            if extra.is_empty() {
                return sub;
            }
            gens.extend(extra);
        }
    }

    /// `G / G'` from the abelianized relations `m A = 0`, `(k - 1) A = 0`,
    /// `n B = t A`.
    pub fn abelianization(&self) -> AbelianInvariants {
        let MetacyclicParams { m, n, k, t } = self.params;
        let rel = int_matrix(&[[m as i64, 0], [k as i64 - 1, 0], [-(t as i64), n as i64]]);
        AbelianInvariants::from_diagonal(0, &smith_normal_form(&rel))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.by_order.keys().fold(1, |acc, &o| lcm(acc, o))
    }

    /// Every Sylow subgroup cyclic: for each prime power `p^e` exactly
    /// dividing the order some element has order `p^e`.
    pub fn is_z_group(&self) -> bool {
        let n = self.order();
        factorize(n)
            .iter()
            .all(|&(p, e)| self.has_element_of_order(p.pow(e)))
    }

    pub fn has_cyclic_sylow2(&self) -> bool {
        let n = self.order();
        n % 2 == 1 || self.has_element_of_order(1 << valuation(n, 2))
    }

    fn has_element_of_order(&self, o: u64) -> bool {
        self.by_order.contains_key(&o)
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        GroupFingerprint {
            order: self.order(),
            element_order_multiset: self.orders.to_vec().sorted(),
            abelianization: self.abelianization(),
            derived_order: self.derived_subgroup().len() as u64,
            exponent: self.exponent(),
        }
    }

    /// Conjugacy classes in order of their least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let (a, b) = (self.a(), self.b());
        let mut seen = vec![false; self.size];
        let mut classes = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            seen[x] = true;
            let mut class = vec![x];
            let mut head = 0;
            while head < class.len() {
                let y = class[head];
                head += 1;
                for g in [a, b] {
                    let z = self.conjugate(g, y);
                    if !seen[z] {
                        seen[z] = true;
                        class.push(z);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// One representative (the least index) per conjugacy class.
    pub fn conjugacy_class_representatives(&self) -> Vec<usize> {
        self.conjugacy_classes().iter().map(|c| c[0]).collect()
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group{:?}", self.params)
    }
}

trait Sorted {
    fn sorted(self) -> Self;
}

impl Sorted for Vec<u64> {
    fn sorted(mut self) -> Self {
        self.sort_unstable();
        self
    }
}

/// Product of the distinct primes dividing `n`.
pub fn radical_of_order(n: u64) -> u64 {
    radical(n)
}
