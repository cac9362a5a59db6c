//! Truncated q-series with nonnegative integer coefficients.

use serde::{Deserialize, Serialize};

/// Order of a q-Pochhammer symbol `(q)_n = (1-q)(1-q^2)...(1-q^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PochhammerOrder {
    Finite(u64),
    Infinite,
}

/// Truncated expansion of `1/(q)_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPochhammer {
    pub order: PochhammerOrder,
    /// `expansion[m]` is the coefficient of `q^m`, for `m <= q_max`.
    pub expansion: Vec<u64>,
}

/// Expansion of `1/(q)_n` up to `q^q_max`: the coefficient of `q^m` counts
/// partitions of `m` into parts of size at most `n`. An empty vector is
/// returned for negative `q_max`.
pub fn inv_pochhammer(order: PochhammerOrder, q_max: i64) -> QPochhammer {
    if q_max < 0 {
        return QPochhammer { order, expansion: Vec::new() };
    }
    let len = q_max as usize + 1;
    let largest = match order {
        PochhammerOrder::Finite(n) => (n as usize).min(q_max as usize),
        PochhammerOrder::Infinite => q_max as usize,
    };
    let mut c = vec![0u64; len];
    c[0] = 1;
    for part in 1..=largest {
        for m in part..len {
            c[m] = c[m].checked_add(c[m - part]).expect("q-series coefficient overflow");
        }
    }
    QPochhammer { order, expansion: c }
}

/// Product of two truncated series, keeping terms up to `q^q_max`.
pub fn mul_truncated(a: &[u64], b: &[u64], q_max: i64) -> Vec<u64> {
    if q_max < 0 {
        return Vec::new();
    }
    let len = (q_max as usize + 1).min(a.len() + b.len().saturating_sub(1));
    let mut out = vec![0u64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            let t = x.checked_mul(y).expect("q-series coefficient overflow");
            out[i + j] = out[i + j].checked_add(t).expect("q-series coefficient overflow");
        }
    }
    out
}

/// Memoized `1/(q)_n` expansions for one truncation order. Orders at or above
/// `q_max` coincide with the infinite product inside the window.
#[derive(Clone, Debug)]
pub struct PochhammerTable {
    q_max: i64,
    finite: Vec<Vec<u64>>,
    infinite: Vec<u64>,
}

impl PochhammerTable {
    pub fn new(q_max: i64) -> Self {
        let top = q_max.max(0) as u64;
        let finite = (0..=top).map(|n| inv_pochhammer(PochhammerOrder::Finite(n), q_max).expansion).collect();
        let infinite = inv_pochhammer(PochhammerOrder::Infinite, q_max).expansion;
        PochhammerTable { q_max, finite, infinite }
    }

    pub fn q_max(&self) -> i64 {
        self.q_max
    }

    pub fn get(&self, order: PochhammerOrder) -> &[u64] {
        match order {
            PochhammerOrder::Finite(n) if (n as usize) < self.finite.len() => &self.finite[n as usize],
            _ => &self.infinite,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_and_empty_cases() {
        assert_eq!(inv_pochhammer(PochhammerOrder::Finite(1), 4).expansion, vec![1, 1, 1, 1, 1]);
        assert_eq!(inv_pochhammer(PochhammerOrder::Finite(0), 5).expansion, vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(inv_pochhammer(PochhammerOrder::Finite(0), 0).expansion, vec![1]);
    }

    #[test]
    fn at_most_two_parts() {
        // partitions of 0..4 into at most two parts: 1,1,2,2,3
        assert_eq!(inv_pochhammer(PochhammerOrder::Finite(2), 4).expansion, vec![1, 1, 2, 2, 3]);
    }

    #[test]
    fn infinite_order_is_partition_numbers() {
        assert_eq!(
            inv_pochhammer(PochhammerOrder::Infinite, 10).expansion,
            vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
        );
    }

    #[test]
    fn truncated_product() {
        assert_eq!(mul_truncated(&[1, 1], &[1, 1], 1), vec![1, 2]);
        assert_eq!(mul_truncated(&[1, 1], &[1, 1], 5), vec![1, 2, 1]);
    }
}
