use super::GeneratingVector;
use crate::fuchsian::Signature;
use crate::groups::Group;

#[derive(Clone, Copy)]
enum Slot {
    /// Conjugacy class representatives of the given order (0 = any order).
    Reps(u64),
    ByOrder(u64),
    Any,
}

/// Subgroup generated by a prefix of the chosen elements.
#[derive(Clone)]
struct Tracker {
    member: Vec<bool>,
    elems: Vec<usize>,
    gens: Vec<usize>,
}

impl Tracker {
    fn trivial(size: usize) -> Self {
        let mut member = vec![false; size];
        member[Group::IDENTITY] = true;
        Tracker {
            member,
            elems: vec![Group::IDENTITY],
            gens: Vec::new(),
        }
    }

    fn is_full(&self) -> bool {
        self.elems.len() == self.member.len()
    }

    /// Adds `x`, stopping as soon as the closure is the whole group.
    fn extend(&mut self, g: &Group, x: usize) {
        if self.member[x] {
            return;
        }
        self.gens.push(x);
        let gens = self.gens.clone();
        // Old elements are closed under the old generators, so only their
        // products with `x` can be new.
        let mut head = 0;
        let old = self.elems.len();
        while head < self.elems.len() && !self.is_full() {
            let e = self.elems[head];
            let used = if head >= old {
                &gens[..]
            } else {
                &gens[gens.len() - 1..]
            };
            head += 1;
            for &s in used {
                let y = g.mul(e, s);
                if !self.member[y] {
                    self.member[y] = true;
                    self.elems.push(y);
                }
            }
        }
    }

    /// Whether adding `x` would give the whole group, without mutating.
    fn generates_with(&self, g: &Group, x: usize) -> bool {
        if self.is_full() {
            return true;
        }
        if self.member[x] {
            return false;
        }
        let mut t = self.clone();
        t.extend(g, x);
        t.is_full()
    }
}

struct Search<'a> {
    g: &'a Group,
    slots: Vec<Slot>,
    /// Periods of the looped elliptic slots followed by the computed one.
    desc: Vec<u64>,
    /// Number of looped elliptic slots (they come first).
    looped_elliptic: usize,
    h: usize,
    chosen: Vec<usize>,
    trackers: Vec<Tracker>,
    reps_cache: Option<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn candidates(&mut self, slot: Slot) -> Vec<usize> {
        match slot {
            Slot::Reps(o) => {
                let reps = self
                    .reps_cache
                    .get_or_insert_with(|| self.g.conjugacy_class_representatives());
                reps.iter()
                    .copied()
                    .filter(|&x| o == 0 || self.g.element_order(x) == o)
                    .collect()
            }
            Slot::ByOrder(o) => self
                .g
                .elements_of_order(o)
                .iter()
                .map(|&x| x as usize)
                .collect(),
            Slot::Any => (0..self.g.size()).collect(),
        }
    }

    /// Product of commutators over the chosen hyperbolic slots times the
    /// product of the chosen elliptic slots, in relation order.
    fn relation_value(&self) -> (usize, usize) {
        let g = self.g;
        let ell = &self.chosen[..self.looped_elliptic];
        let hyp = &self.chosen[self.looped_elliptic..];
        let p = ell.iter().fold(Group::IDENTITY, |acc, &x| g.mul(acc, x));
        let c = hyp.chunks(2).fold(Group::IDENTITY, |acc, pr| {
            g.mul(acc, g.commutator(pr[0], pr[1]))
        });
        (c, p)
    }

    /// Computed final elliptic element (if any) when all slots are chosen,
    /// or `None` if the relation or its order fails.
    fn close(&self) -> Option<Option<usize>> {
        let (c, p) = self.relation_value();
        let cp = self.g.mul(c, p);
        if self.desc.len() > self.looped_elliptic {
            let last = self.g.inv(cp);
            (self.g.element_order(last) == *self.desc.last().unwrap()).then_some(Some(last))
        } else {
            (cp == Group::IDENTITY).then_some(None)
        }
    }

    fn run(&mut self, depth: usize) -> Option<Option<usize>> {
        let slot = self.slots[depth];
        let last = depth + 1 == self.slots.len();
        for x in self.candidates(slot) {
            self.chosen.push(x);
            if last {
                if let Some(computed) = self.close() {
                    if self.trackers[depth].generates_with(self.g, x) {
                        return Some(computed);
                    }
                }
            } else {
                let mut t = self.trackers[depth].clone();
                t.extend(self.g, x);
                self.trackers.push(t);
                let found = self.run(depth + 1);
                self.trackers.pop();
                if found.is_some() {
                    return found;
                }
            }
            self.chosen.pop();
        }
        None
    }
}

/// Deterministic backtracking search for a generating vector of `g` on
/// `sig`.
///
/// Periods are handled in descending order, with the first element fixed
/// up to conjugacy, and the last elliptic element solved from the
/// relation. The vector is then rearranged into ascending period order by
/// braid moves `(u, v) -> (v, v^-1 u v)`, which keep the product and the
/// generated subgroup.
pub fn find_generating_vector(g: &Group, sig: &Signature) -> Option<GeneratingVector> {
    let periods = sig.periods();
    if periods.iter().any(|&m| g.elements_of_order(m).is_empty()) {
        return None;
    }
    let r = periods.len();
    let h = sig.h() as usize;
    let desc: Vec<u64> = periods.iter().rev().copied().collect();

    if r == 0 && h == 0 {
        return None;
    }
    // The trivial group needs no generators, but every period is > 1.
    if g.size() == 1 {
        return (r == 0).then(|| GeneratingVector::from_indices(g, &vec![0; 2 * h], &[]));
    }

    let looped_elliptic = r.saturating_sub(1);
    let mut slots = Vec::with_capacity(looped_elliptic + 2 * h);
    for (i, &m) in desc[..looped_elliptic].iter().enumerate() {
        slots.push(if i == 0 {
            Slot::Reps(m)
        } else {
            Slot::ByOrder(m)
        });
    }
    for i in 0..2 * h {
        slots.push(if slots.is_empty() && i == 0 {
            Slot::Reps(0)
        } else {
            Slot::Any
        });
    }

    if slots.is_empty() {
        return None;
    }
    let mut s = Search {
        g,
        slots,
        desc: desc.clone(),
        looped_elliptic,
        h,
        chosen: Vec::new(),
        trackers: vec![Tracker::trivial(g.size())],
        reps_cache: None,
    };
    let computed = s.run(0)?;
    debug_assert_eq!(s.chosen.len(), looped_elliptic + 2 * s.h);

    let mut ell: Vec<(u64, usize)> = desc[..looped_elliptic]
        .iter()
        .copied()
        .zip(s.chosen[..looped_elliptic].iter().copied())
        .collect();
    if let Some(y) = computed {
        ell.push((desc[r - 1], y));
    }
    let hyp = s.chosen[looped_elliptic..].to_vec();

    // Bubble sort into ascending periods.
    for pass in 0..ell.len() {
        for i in 0..ell.len().saturating_sub(pass + 1) {
            if ell[i].0 > ell[i + 1].0 {
                let (pu, u) = ell[i];
                let (pv, v) = ell[i + 1];
                let moved = g.mul(g.mul(g.inv(v), u), v);
                ell[i] = (pv, v);
                ell[i + 1] = (pu, moved);
            }
        }
    }
    let ell: Vec<usize> = ell.into_iter().map(|(_, x)| x).collect();
    let out = GeneratingVector::from_indices(g, &hyp, &ell);
    debug_assert!(super::check_indices(g, periods, &hyp, &ell));
    Some(out)
}
