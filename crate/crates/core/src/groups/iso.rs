use super::{Group, GroupError};

pub const DEFAULT_ISO_CAP: u64 = 500;

pub fn is_isomorphic(g: &Group, h: &Group) -> Result<bool, GroupError> {
    is_isomorphic_with_cap(g, h, DEFAULT_ISO_CAP)
}

pub fn is_isomorphic_with_cap(g: &Group, h: &Group, cap: u64) -> Result<bool, GroupError> {
    Ok(find_isomorphism_with_cap(g, h, cap)?.is_some())
}

/// Images `(x, y)` in `h` of the generators `a, b` of `g` defining an
/// isomorphism, if one exists.
pub fn find_isomorphism(g: &Group, h: &Group) -> Result<Option<(usize, usize)>, GroupError> {
    find_isomorphism_with_cap(g, h, DEFAULT_ISO_CAP)
}

fn find_isomorphism_with_cap(
    g: &Group,
    h: &Group,
    cap: u64,
) -> Result<Option<(usize, usize)>, GroupError> {
    if g.order() != h.order() {
        return Ok(None);
    }
    if g.order() > cap {
        return Err(GroupError::CapExceeded {
            order: g.order(),
            cap,
        });
    }
    if g.fingerprint() != h.fingerprint() {
        return Ok(None);
    }
    let p = g.params();
    // An isomorphism preserves element orders, so a and b keep theirs.
    let ord_a = g.element_order(g.a());
    let ord_b = g.element_order(g.b());
    for &x in h.elements_of_order(ord_a) {
        let x = x as usize;
        let x_k = h.pow(x, p.k);
        let x_t = h.pow(x, p.t);
        for &y in h.elements_of_order(ord_b) {
            let y = y as usize;
            if h.pow(y, p.n) != x_t || h.conjugate(y, x) != x_k {
                continue;
            }
            // A surjection between groups of equal order is a bijection.
            if h.generates(&[x, y]) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}
