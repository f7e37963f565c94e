//! Brute-force oracles on plain integer masks, independent of the gf2 module.

#![allow(dead_code)]

use ldpc_distance::ensembles::{sample_a, sample_b, EnsembleSpec};
use ldpc_distance::{BitMatrix, Code, Seed};

/// Column `j` of `h` as a bitmask over rows.
pub fn column_masks(h: &BitMatrix) -> Vec<u128> {
    assert!(h.rows() <= 128);
    (0..h.cols())
        .map(|c| (0..h.rows()).filter(|&r| h.get(r, c)).fold(0u128, |m, r| m | 1 << r))
        .collect()
}

/// Calls `visit` on every `k`-subset of `0..n`.
pub fn subsets(n: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..n {
            cur.push(i);
            if !rec(i + 1, n, k, cur, visit) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(0, n, k, &mut Vec::new(), visit)
}

/// Smallest number of columns (up to `max_w`) whose XOR equals `target`.
pub fn min_weight_with_syndrome(cols: &[u128], target: u128, max_w: usize) -> Option<usize> {
    let start = if target == 0 { 1 } else { 0 };
    (start..=max_w).find(|&w| {
        let mut hit = false;
        subsets(cols.len(), w, &mut |s| {
            hit = s.iter().fold(0u128, |acc, &j| acc ^ cols[j]) == target;
            !hit
        });
        hit
    })
}

/// Minimum distance by scanning supports of increasing size.
pub fn brute_distance(h: &BitMatrix) -> Option<usize> {
    min_weight_with_syndrome(&column_masks(h), 0, h.cols())
}

/// `log₂ |{c ∈ C : c_I = 0}|`, counting all subsets of the complement `J`.
pub fn brute_shortened_dim(h: &BitMatrix, j: &[usize]) -> u32 {
    let cols = column_masks(h);
    assert!(j.len() < 26);
    let count = (0u64..1 << j.len())
        .filter(|mask| {
            j.iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .fold(0u128, |acc, (_, &c)| acc ^ cols[c])
                == 0
        })
        .count();
    assert!(count.is_power_of_two());
    count.trailing_zeros()
}

pub fn a36(n: usize, seed: u64) -> Code {
    Code::new(sample_a(&EnsembleSpec::new(3, 6, n).unwrap(), Seed(seed)).unwrap())
}

pub fn b36(n: usize, seed: u64) -> Code {
    Code::new(sample_b(&EnsembleSpec::new(3, 6, n).unwrap(), Seed(seed)).unwrap())
}

pub fn hamming() -> Code {
    Code::new(BitMatrix::parse_rows("1010101 0110011 0001111").unwrap())
}
