//! Smith normal form over the integers.
//!
//! Only unimodular row and column operations are used, so the diagonal is
//! the invariant-factor decomposition of the cokernel `Z^cols / rowspace`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Builds a [`IntMatrix`] from small literals.
pub fn int_matrix<R: AsRef<[i64]>>(rows: &[R]) -> IntMatrix {
    rows.iter()
        .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Diagonal of the Smith normal form: `min(rows, cols)` non-negative
/// entries with `d[0] | d[1] | ...` (zeros last).
pub fn smith_normal_form(mat: &[Vec<BigInt>]) -> Vec<BigInt> {
    reduce(mat.to_vec(), false).0
}

/// Diagonal together with the unimodular column transform `V` such that
/// `U * mat * V` is diagonal for some unimodular `U`. A row vector `v`
/// has coordinates `v * V` in the diagonal basis of the cokernel.
pub fn smith_with_column_transform(mat: &[Vec<BigInt>]) -> (Vec<BigInt>, IntMatrix) {
    let (d, v) = reduce(mat.to_vec(), true);
    (d, v.expect("transform requested"))
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn reduce(mut a: IntMatrix, track: bool) -> (Vec<BigInt>, Option<IntMatrix>) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    assert!(a.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut v = track.then(|| identity(cols));

    let col_axpy =
        |a: &mut IntMatrix, v: &mut Option<IntMatrix>, dst: usize, src: usize, q: &BigInt| {
            // column dst -= q * column src
            for row in a.iter_mut() {
                let s = &row[src] * q;
                row[dst] -= s;
            }
            if let Some(v) = v.as_mut() {
                for row in v.iter_mut() {
                    let s = &row[src] * q;
                    row[dst] -= s;
                }
            }
        };
    let col_swap = |a: &mut IntMatrix, v: &mut Option<IntMatrix>, x: usize, y: usize| {
        if x == y {
            return;
        }
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        if let Some(v) = v.as_mut() {
            for row in v.iter_mut() {
                row.swap(x, y);
            }
        }
    };
    let col_negate = |a: &mut IntMatrix, v: &mut Option<IntMatrix>, x: usize| {
        for row in a.iter_mut() {
            row[x] = -&row[x];
        }
        if let Some(v) = v.as_mut() {
            for row in v.iter_mut() {
                row[x] = -&row[x];
            }
        }
    };

    let diag_len = rows.min(cols);
    for t in 0..diag_len {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            col_swap(&mut a, &mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in tail[0].iter_mut().zip(head[t].iter()) {
                        *x -= y * &q;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block.
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(tail[0].iter()) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            col_negate(&mut a, &mut v, t);
        }
    }
    let diag = (0..diag_len).map(|t| a[t][t].clone()).collect();
    (diag, v)
}
