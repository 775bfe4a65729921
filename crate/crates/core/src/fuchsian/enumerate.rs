//! Finite enumerations of signatures.

use super::abelian::admits_cyclic_quotient;
use super::{Signature, SignatureError};
use crate::arith::divisors;
use crate::rational::ExactRational;

/// Every divisor of `order` that is at least 2.
pub fn divisor_periods(order: u64) -> Vec<u64> {
    divisors(order).into_iter().filter(|&d| d >= 2).collect()
}

/// All signatures `(h; m_1..m_r)` with periods drawn from `allowed` whose
/// measure is exactly `2 (genus - 1) / order`, i.e. every signature a group
/// of that order could use to act on that genus.
///
/// Periods in `allowed` that are not divisors of `order` are ignored. The
/// result is sorted by `(h, r, periods)`.
pub fn enumerate_signatures_for(order: u64, genus: u64, allowed: &[u64]) -> Vec<Signature> {
    assert!(order >= 1 && genus >= 2);
    let mut periods: Vec<u64> = allowed
        .iter()
        .copied()
        .filter(|&p| p >= 2 && order.is_multiple_of(p))
        .collect();
    periods.sort_unstable();
    periods.dedup();

    // Everything is scaled by `order`: measure * order = 2 (genus - 1) and a
    // period p contributes order - order / p.
    let n = order as i128;
    let target = 2 * (genus as i128 - 1);
    let weights: Vec<i128> = periods.iter().map(|&p| n - n / p as i128).collect();

    let mut out = Vec::new();
    let mut h = 0i128;
    while (2 * h - 2) * n <= target {
        let remaining = target - (2 * h - 2) * n;
        let mut chosen = Vec::new();
        fill(&periods, &weights, 0, remaining, &mut chosen, &mut |ps| {
            out.push(Signature::new(h as u64, ps.to_vec()).expect("periods >= 2"));
        });
        h += 1;
    }
    out.sort_by(|a, b| (a.h(), a.r(), a.periods()).cmp(&(b.h(), b.r(), b.periods())));
    out
}

fn fill(
    periods: &[u64],
    weights: &[i128],
    start: usize,
    remaining: i128,
    chosen: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    if remaining == 0 {
        emit(chosen);
        return;
    }
    for idx in start..periods.len() {
        // Weights increase with the period, so nothing later fits either.
        if weights[idx] > remaining {
            break;
        }
        chosen.push(periods[idx]);
        fill(
            periods,
            weights,
            idx,
            remaining - weights[idx],
            chosen,
            emit,
        );
        chosen.pop();
    }
}

/// The complete list of hyperbolic signatures whose order multiplier
/// `2 / measure` exceeds `threshold`, sorted by descending multiplier.
///
/// A threshold of at most 4 is rejected outright. For thresholds at most
/// 12 the triangle family `(0; 2,3,x)` alone is infinite, and
/// [`SignatureError::InfiniteFamily`] names the first such family found
/// instead of truncating it.
pub fn enumerate_signatures_above_ratio(
    threshold: &ExactRational,
) -> Result<Vec<(Signature, ExactRational)>, SignatureError> {
    above_ratio(threshold, None)
}

/// As [`enumerate_signatures_above_ratio`], restricted to signatures
/// admitting a cyclic quotient of order `d`. Infinite families are only
/// reported when infinitely many of their members admit the quotient.
pub fn enumerate_signatures_above_ratio_with_quotient(
    threshold: &ExactRational,
    d: u64,
) -> Result<Vec<(Signature, ExactRational)>, SignatureError> {
    above_ratio(threshold, Some(d))
}

fn above_ratio(
    threshold: &ExactRational,
    quotient: Option<u64>,
) -> Result<Vec<(Signature, ExactRational)>, SignatureError> {
    if *threshold <= 4 {
        return Err(SignatureError::ThresholdTooLow(threshold.clone()));
    }
    // multiplier > threshold  <=>  0 < measure < tau
    let tau = ExactRational::from(2u64) / threshold.clone();
    // With tau < 1/2 every period adds at least 1/2 to the measure, so the
    // orbit genus is 0 and only r = 3, 4 remain.
    let mut found = Vec::new();
    let mut r = 3usize;
    while ExactRational::new(r as i64 - 4, 2) < tau {
        let mut prefix = Vec::with_capacity(r);
        walk(r, &tau, threshold, quotient, &mut prefix, &mut found)?;
        r += 1;
    }
    let mut out: Vec<(Signature, ExactRational)> = found
        .into_iter()
        .map(|s| {
            let mult = s.order_multiplier().expect("hyperbolic by construction");
            (s, mult)
        })
        .collect();
    out.sort_by(|(sa, ma), (sb, mb)| mb.cmp(ma).then_with(|| sa.cmp(sb)));
    Ok(out)
}

/// Measure of `(0; periods)` with `pad` further copies of the last period.
fn padded_measure(periods: &[u64], pad: usize) -> ExactRational {
    let mut mu = ExactRational::from(-2i64);
    for &p in periods {
        mu = mu + ExactRational::new(p as i64 - 1, p as i64);
    }
    if let Some(&last) = periods.last() {
        mu = mu + ExactRational::new(pad as i64 * (last as i64 - 1), last as i64);
    }
    mu
}

fn passes(sig: &Signature, quotient: Option<u64>) -> bool {
    quotient.is_none_or(|d| admits_cyclic_quotient(sig, d))
}

fn walk(
    r: usize,
    tau: &ExactRational,
    threshold: &ExactRational,
    quotient: Option<u64>,
    prefix: &mut Vec<u64>,
    found: &mut Vec<Signature>,
) -> Result<(), SignatureError> {
    let start = prefix.last().copied().unwrap_or(2);
    if prefix.len() + 1 < r {
        // Non-decreasing completions are smallest when the new period repeats.
        let mut p = start;
        loop {
            prefix.push(p);
            let lower = padded_measure(prefix, r - prefix.len());
            if lower >= *tau {
                prefix.pop();
                return Ok(());
            }
            walk(r, tau, threshold, quotient, prefix, found)?;
            prefix.pop();
            p += 1;
        }
    }

    // Last slot: measure(x) = limit - 1/x increases towards `limit`.
    let limit = padded_measure(prefix, 0) + ExactRational::one();
    if !limit.is_positive() {
        return Ok(());
    }
    if limit <= *tau {
        // Every hyperbolic member lies above the threshold. With a quotient
        // filter, admission for x implies admission for every multiple of x,
        // and all multiples of d behave alike, so one probe decides.
        if let Some(d) = quotient {
            let mut probe = prefix.clone();
            probe.push(d * start.max(2));
            let probe = Signature::new(0, probe).expect("periods >= 2");
            if !admits_cyclic_quotient(&probe, d) {
                return Ok(());
            }
        }
        return Err(SignatureError::InfiniteFamily {
            prefix: prefix.clone(),
            threshold: threshold.clone(),
        });
    }
    let mut x = start;
    loop {
        let mu = limit.clone() - ExactRational::new(1, x as i64);
        if mu >= *tau {
            return Ok(());
        }
        if mu.is_positive() {
            prefix.push(x);
            let sig = Signature::new(0, prefix.clone()).expect("periods >= 2");
            prefix.pop();
            if passes(&sig, quotient) {
                found.push(sig);
            }
        }
        x += 1;
    }
}
