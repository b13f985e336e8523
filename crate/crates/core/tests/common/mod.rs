//! Independent oracles shared by the integration tests. Nothing here calls
//! the code paths it is used to check.

#![allow(dead_code)]

use cellcipher::attack::PartialDiagram;
use cellcipher::{BooleanFunction, Rule};
use num_rational::Ratio;

/// Walsh coefficients straight from the double sum.
pub fn naive_walsh(f: &BooleanFunction) -> Vec<i64> {
    let size = 1usize << f.variables();
    (0..size)
        .map(|w| {
            (0..size)
                .map(|x| {
                    let fx = i64::from(f.eval(x));
                    if (x & w).count_ones() % 2 == 0 {
                        fx
                    } else {
                        -fx
                    }
                })
                .sum()
        })
        .collect()
}

/// Empirical `P[F = 1 | <x, w> = 1]` by enumeration.
pub fn conditional_frequency(f: &BooleanFunction, mask: usize) -> Ratio<i64> {
    let size = 1usize << f.variables();
    let (mut hits, mut total) = (0i64, 0i64);
    for x in 0..size {
        if (x & mask).count_ones() % 2 == 1 {
            total += 1;
            hits += i64::from(f.eval(x));
        }
    }
    Ratio::new(hits, total)
}

/// Centre cell after `steps` updates of an open segment, leftmost cell first,
/// using only `Rule::apply` on explicit neighbourhoods.
pub fn open_boundary_center(rule: Rule, window: &[bool], steps: usize) -> bool {
    let k = rule.neighborhood_size();
    let mut row = window.to_vec();
    for _ in 0..steps {
        row = row.windows(k).map(|hood| rule.apply(hood).unwrap()).collect();
    }
    assert_eq!(row.len(), 1);
    row[0]
}

/// Window bits for packed index `x` over `n` cells, bit `n-1` leftmost.
pub fn unpack_window(x: usize, n: usize) -> Vec<bool> {
    (0..n).rev().map(|i| (x >> i) & 1 == 1).collect()
}

/// Every known cell at time `t + 1` must equal the rule applied to its three
/// parents whenever all three are known.
pub fn local_relations_hold(rule: Rule, d: &PartialDiagram) -> bool {
    let n = d.ring_width();
    let span = n as isize - 1;
    for t in 0..n - 1 {
        for j in -span..=span {
            let (Some(child), Some(a), Some(b), Some(c)) = (
                d.get(t + 1, j),
                d.get(t, j - 1),
                d.get(t, j),
                d.get(t, j + 1),
            ) else {
                continue;
            };
            if rule.apply(&[a, b, c]).unwrap() != child {
                return false;
            }
        }
    }
    true
}
