use std::cmp::Ordering;

use super::{chebyshev_distance, Convention, MatchCounts, TemplateCounts};
use crate::scalar::Scalar;

/// Every ordered pair, every distance recomputed from scratch.
///
/// Callers guarantee `values.len() >= m + 2`, `m >= 1` and finite inputs.
pub fn brute_force_counts<T: Scalar>(
    values: &[T],
    m: usize,
    r: T,
    convention: Convention,
) -> MatchCounts {
    let n = values.len();
    let template = |i: usize, len: usize| &values[i..i + len];
    match convention {
        Convention::NoSelfCounting => {
            let count = n - m;
            let (mut b, mut a) = (0u64, 0u64);
            for i in 0..count {
                for j in 0..count {
                    if i == j {
                        continue;
                    }
                    if chebyshev_distance(template(i, m), template(j, m)) <= r {
                        b += 1;
                    }
                    if chebyshev_distance(template(i, m + 1), template(j, m + 1)) <= r {
                        a += 1;
                    }
                }
            }
            MatchCounts {
                convention,
                len_m: b,
                len_m_plus_1: a,
                per_template: None,
            }
        }
        Convention::SelfCounting => {
            let per_len = |len: usize| -> Vec<u64> {
                let count = n - len + 1;
                (0..count)
                    .map(|i| {
                        (0..count)
                            .filter(|&j| {
                                chebyshev_distance(template(i, len), template(j, len)) <= r
                            })
                            .count() as u64
                    })
                    .collect()
            };
            self_counting(per_len(m), per_len(m + 1))
        }
    }
}

fn self_counting(len_m: Vec<u64>, len_m_plus_1: Vec<u64>) -> MatchCounts {
    MatchCounts {
        convention: Convention::SelfCounting,
        len_m: len_m.iter().sum(),
        len_m_plus_1: len_m_plus_1.iter().sum(),
        per_template: Some(TemplateCounts {
            len_m,
            len_m_plus_1,
        }),
    }
}

/// Sorted neighbour scan.
///
/// Template start indices are ordered by their first value, so for each
/// template only the following run whose first value lies within `r` can
/// match. `b - a` for `b >= a` is exact-sign and monotone in `b`, so the
/// early break never skips a pair the closed predicate would accept. Each
/// unordered pair is visited once; the `m + 1` extension costs one extra
/// comparison on top of the length-`m` check.
pub fn sorted_scan_counts<T: Scalar>(
    values: &[T],
    m: usize,
    r: T,
    convention: Convention,
) -> MatchCounts {
    let n = values.len();
    // templates with an (m+1) extension start below n - m
    let extendable = n - m;
    let count = match convention {
        Convention::SelfCounting => n - m + 1,
        Convention::NoSelfCounting => n - m,
    };

    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(Ordering::Equal));
    let keys: Vec<T> = order.iter().map(|&i| values[i]).collect();

    let mut pair_m = 0u64;
    let mut pair_ext = 0u64;
    let mut per_m = Vec::new();
    let mut per_ext = Vec::new();
    let track = convention == Convention::SelfCounting;
    if track {
        per_m = vec![1u64; count];
        per_ext = vec![1u64; extendable];
    }

    for (a, &i) in order.iter().enumerate() {
        let key = keys[a];
        for (b, &j) in order.iter().enumerate().skip(a + 1) {
            if keys[b] - key > r {
                break;
            }
            if !(1..m).all(|k| (values[i + k] - values[j + k]).abs() <= r) {
                continue;
            }
            pair_m += 1;
            let ext =
                i < extendable && j < extendable && (values[i + m] - values[j + m]).abs() <= r;
            if ext {
                pair_ext += 1;
            }
            if track {
                per_m[i] += 1;
                per_m[j] += 1;
                if ext {
                    per_ext[i] += 1;
                    per_ext[j] += 1;
                }
            }
        }
    }

    if track {
        self_counting(per_m, per_ext)
    } else {
        MatchCounts {
            convention,
            len_m: 2 * pair_m,
            len_m_plus_1: 2 * pair_ext,
            per_template: None,
        }
    }
}
