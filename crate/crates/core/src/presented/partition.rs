use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PresentationError;

/// Weakly decreasing sequence `λ_0 ≥ λ_1 ≥ ... ≥ λ_s ≥ 0` with `λ_0 ≥ 1`.
/// Trailing zero parts are kept: `(2, 0)` and `(2)` are different diagrams
/// here, since the length fixes the number of `b`-relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PresentationError> {
        if parts.is_empty() || parts[0] == 0 {
            return Err(PresentationError::InvalidPartition(parts));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PresentationError::InvalidPartition(parts));
        }
        Ok(Partition { parts })
    }

    /// Single-row diagram `(k)`.
    pub fn row(k: usize) -> Result<Self, PresentationError> {
        Self::new(vec![k])
    }

    /// `(k1+k2, k1+k2-2, ..., |k1-k2|)`, the diagram attached to the fusion
    /// of levels `k1` and `k2`.
    pub fn fusion_shape(k1: usize, k2: usize) -> Result<Self, PresentationError> {
        let total = k1 + k2;
        let parts = (0..=k1.min(k2)).map(|j| total - 2 * j).collect();
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `λ_0`.
    pub fn first(&self) -> usize {
        self.parts[0]
    }

    /// `λ_j`; zero past the end.
    pub fn part(&self, j: usize) -> usize {
        self.parts.get(j).copied().unwrap_or(0)
    }

    /// `s`, the index of the last part.
    pub fn s(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `λ_{i-1} - λ_i ≤ λ_i - λ_{i+1}` for `i = 1..s-1`.
    pub fn is_convex(&self) -> bool {
        (1..self.s()).all(|i| self.parts[i - 1] - self.parts[i] <= self.parts[i] - self.parts[i + 1])
    }

    /// All partitions with positive parts and `|λ| ≤ max_size`, ordered by
    /// size and then lexicographically decreasing.
    pub fn all_up_to(max_size: usize) -> Vec<Partition> {
        fn rec(remaining: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if remaining == 0 {
                out.push(cur.clone());
                return;
            }
            for p in (1..=cap.min(remaining)).rev() {
                cur.push(p);
                rec(remaining - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for n in 1..=max_size {
            let mut level = Vec::new();
            rec(n, n, &mut Vec::new(), &mut level);
            out.extend(level.into_iter().map(|parts| Partition { parts }));
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = PresentationError;
    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = PresentationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = parse_list(s).map_err(|_| PresentationError::Parse(s.to_string()))?;
        Partition::new(parts)
    }
}

/// Parses a comma-separated list of nonnegative integers; the empty string is
/// the empty list.
pub fn parse_list(s: &str) -> Result<Vec<usize>, std::num::ParseIntError> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse()).collect()
}

/// Divisibility data `c` (length `λ_0`) and `d` (length `s`) for the ideal
/// generated by `a(z)^i ÷ z^{c_i + 2c_{i-1} + ... + i c_1}` and the same for
/// `b(z)^j` with `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InitialConditions {
    pub c: Vec<usize>,
    pub d: Vec<usize>,
}

impl InitialConditions {
    pub fn zero(lambda: &Partition) -> Self {
        InitialConditions { c: vec![0; lambda.first()], d: vec![0; lambda.s()] }
    }

    /// `c = δ^{(c_index)}`, `d = δ^{(d_index)}` (1-based); an index of zero
    /// or past the end gives the zero vector.
    pub fn deltas(lambda: &Partition, c_index: usize, d_index: usize) -> Self {
        InitialConditions { c: delta_vector(c_index, lambda.first()), d: delta_vector(d_index, lambda.s()) }
    }

    pub fn check(&self, lambda: &Partition) -> Result<(), PresentationError> {
        if self.c.len() != lambda.first() || self.d.len() != lambda.s() {
            return Err(PresentationError::LengthMismatch {
                expected: (lambda.first(), lambda.s()),
                found: (self.c.len(), self.d.len()),
            });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().chain(&self.d).all(|&x| x == 0)
    }

    /// Number of low z-coefficients of `a(z)^i` (1-based `i`) that vanish.
    pub fn a_order(&self, i: usize) -> usize {
        weighted_tail(&self.c, i)
    }

    /// Number of low z-coefficients of `b(z)^j` that vanish.
    pub fn b_order(&self, j: usize) -> usize {
        weighted_tail(&self.d, j)
    }
}

/// `x_i + 2 x_{i-1} + ... + i x_1` (1-based).
fn weighted_tail(x: &[usize], i: usize) -> usize {
    (1..=i).map(|l| l * x[i - l]).sum()
}

/// `(δ^{(i)})_j = δ_{i,j}` for `j = 1..len`.
pub fn delta_vector(i: usize, len: usize) -> Vec<usize> {
    (1..=len).map(|j| usize::from(j == i)).collect()
}
