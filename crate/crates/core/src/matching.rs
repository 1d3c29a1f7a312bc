//! Bottleneck matching between two point multisets.
//!
//! Used to compare root sets: the result is the smallest `d` such that the
//! two multisets can be paired one-to-one with every pair closer than `d`.

use num_complex::Complex64;

/// Smallest achievable maximum pair distance over all perfect matchings.
///
/// `None` when the multisets have different sizes. Two empty sets match at 0.
pub fn bottleneck_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(0.0);
    }
    let n = a.len();
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| (x - y).norm()).collect())
        .collect();
    let mut levels: Vec<f64> = cost.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // Every level at or above the row-wise minima max is a candidate floor.
    let floor = cost
        .iter()
        .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let mut lo = levels.partition_point(|&v| v < floor);
    let mut hi = levels.len() - 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(&cost, levels[mid], n) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(levels[lo])
}

fn has_perfect_matching(cost: &[Vec<f64>], limit: f64, n: usize) -> bool {
    let mut match_of_b: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, cost, limit, &mut seen, &mut match_of_b) {
            return false;
        }
    }
    true
}

fn augment(
    i: usize,
    cost: &[Vec<f64>],
    limit: f64,
    seen: &mut [bool],
    match_of_b: &mut [Option<usize>],
) -> bool {
    for j in 0..cost.len() {
        if cost[i][j] <= limit && !seen[j] {
            seen[j] = true;
            let free = match match_of_b[j] {
                None => true,
                Some(k) => augment(k, cost, limit, seen, match_of_b),
            };
            if free {
                match_of_b[j] = Some(i);
                return true;
            }
        }
    }
    false
}

/// Symmetric Hausdorff distance between two finite sets.
///
/// Infinite when exactly one side is empty, 0 when both are.
pub fn hausdorff_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let directed = |from: &[Complex64], to: &[Complex64]| {
        from.iter()
            .map(|x| to.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}
