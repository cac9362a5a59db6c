//! Truncated `(z, u, q)`-characters and the q-series helpers shared by the
//! brute-force engine and the formula evaluators.
//!
//! A [`GradedCharacter`] is a sparse map from exponent triples to dimensions
//! together with the window in which it is known to be complete. Every
//! comparison happens on the common window of its operands.

mod qseries;
mod render;

pub use qseries::{inv_pochhammer, mul_truncated, PochhammerOrder, PochhammerTable, QPochhammer};
pub use render::CharacterJsonError;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent triple `(z, u, q)`.
pub type Exponents = (i64, i64, i64);

/// Window in which a character is complete. `None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub q_max: i64,
    pub z_max: Option<i64>,
    pub u_max: Option<i64>,
}

impl Truncation {
    pub fn new(q_max: i64, z_max: Option<i64>, u_max: Option<i64>) -> Self {
        Truncation { q_max, z_max, u_max }
    }

    /// Window bounded in every grading.
    pub fn finite(q_max: i64, z_max: i64, u_max: i64) -> Self {
        Truncation { q_max, z_max: Some(z_max), u_max: Some(u_max) }
    }

    pub fn q_only(q_max: i64) -> Self {
        Truncation { q_max, z_max: None, u_max: None }
    }

    pub fn contains(&self, (z, u, q): Exponents) -> bool {
        q <= self.q_max && self.z_max.is_none_or(|m| z <= m) && self.u_max.is_none_or(|m| u <= m)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Truncation) -> Truncation {
        fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
            match (a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            }
        }
        Truncation {
            q_max: self.q_max.min(other.q_max),
            z_max: min_opt(self.z_max, other.z_max),
            u_max: min_opt(self.u_max, other.u_max),
        }
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<i64>| v.map_or("inf".to_string(), |x| x.to_string());
        write!(f, "q<={} z<={} u<={}", self.q_max, show(self.z_max), show(self.u_max))
    }
}

/// Exponent substitution `(z, u, q) -> (z_scale*z + z_shift, u, q + q_per_z*z + q_shift)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reweight {
    pub z_scale: i64,
    pub z_shift: i64,
    pub q_per_z: i64,
    pub q_shift: i64,
}

impl Reweight {
    pub const IDENTITY: Reweight = Reweight { z_scale: 1, z_shift: 0, q_per_z: 0, q_shift: 0 };

    pub fn new(z_scale: i64, z_shift: i64, q_per_z: i64, q_shift: i64) -> Self {
        Reweight { z_scale, z_shift, q_per_z, q_shift }
    }

    pub fn apply(&self, (z, u, q): Exponents) -> Exponents {
        (self.z_scale * z + self.z_shift, u, q + self.q_per_z * z + self.q_shift)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Reweight) -> Reweight {
        Reweight {
            z_scale: next.z_scale * self.z_scale,
            z_shift: next.z_scale * self.z_shift + next.z_shift,
            q_per_z: self.q_per_z + next.q_per_z * self.z_scale,
            q_shift: self.q_shift + next.q_per_z * self.z_shift + next.q_shift,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "EQUAL")]
    Equal,
    /// Left is coefficientwise at most right, and somewhere strictly smaller.
    #[serde(rename = "LE")]
    LessOrEqual,
    #[serde(rename = "MISMATCH")]
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "EQUAL",
            Verdict::LessOrEqual => "LE",
            Verdict::Mismatch => "MISMATCH",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Difference {
    pub z: i64,
    pub u: i64,
    pub q: i64,
    pub left: u64,
    pub right: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub window: Truncation,
    pub verdict: Verdict,
    /// Lexicographically first key where the two sides differ.
    pub first_diff: Option<Difference>,
}

/// Sparse truncated `(z, u, q)`-character with nonnegative integer
/// coefficients. Stored coefficients are positive and lie in the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCharacter {
    coeffs: BTreeMap<Exponents, u64>,
    truncation: Truncation,
}

impl GradedCharacter {
    pub fn zero(truncation: Truncation) -> Self {
        GradedCharacter { coeffs: BTreeMap::new(), truncation }
    }

    /// The character `1` (a single vector in degree zero).
    pub fn one(truncation: Truncation) -> Self {
        let mut c = Self::zero(truncation);
        c.add_term((0, 0, 0), 1);
        c
    }

    pub fn from_entries(truncation: Truncation, entries: impl IntoIterator<Item = (Exponents, u64)>) -> Self {
        let mut c = Self::zero(truncation);
        for (k, v) in entries {
            c.add_term(k, v);
        }
        c
    }

    /// `z^z u^u` times a q-series whose `i`-th entry is the coefficient of
    /// `q^(q_offset + i)`.
    pub fn from_q_series(truncation: Truncation, z: i64, u: i64, q_offset: i64, series: &[u64]) -> Self {
        let mut c = Self::zero(truncation);
        for (i, &v) in series.iter().enumerate() {
            c.add_term((z, u, q_offset + i as i64), v);
        }
        c
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Adds `dim` to the coefficient at `key`; keys outside the window and
    /// zero contributions are ignored.
    pub fn add_term(&mut self, key: Exponents, dim: u64) {
        if dim == 0 || !self.truncation.contains(key) {
            return;
        }
        let slot = self.coeffs.entry(key).or_insert(0);
        *slot = slot.checked_add(dim).expect("character coefficient overflow");
    }

    pub fn get(&self, key: Exponents) -> u64 {
        self.coeffs.get(&key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Exponents, u64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn total_dimension(&self) -> u64 {
        self.coeffs.values().sum()
    }

    /// Same character on a (componentwise) smaller window.
    pub fn restrict(&self, window: &Truncation) -> Self {
        let truncation = self.truncation.meet(window);
        let coeffs = self.coeffs.iter().filter(|(k, _)| truncation.contains(**k)).map(|(k, v)| (*k, *v)).collect();
        GradedCharacter { coeffs, truncation }
    }

    /// Coefficientwise sum on the common window.
    pub fn add(&self, other: &GradedCharacter) -> GradedCharacter {
        let mut out = GradedCharacter::zero(self.truncation.meet(&other.truncation));
        for (k, v) in self.iter().chain(other.iter()) {
            out.add_term(k, v);
        }
        out
    }

    /// Product of characters (convolution of exponents) on the common window.
    pub fn mul(&self, other: &GradedCharacter) -> GradedCharacter {
        let mut out = GradedCharacter::zero(self.truncation.meet(&other.truncation));
        for ((z1, u1, q1), a) in self.iter() {
            for ((z2, u2, q2), b) in other.iter() {
                let key = (z1 + z2, u1 + u2, q1 + q2);
                if out.truncation.contains(key) {
                    out.add_term(key, a.checked_mul(b).expect("character coefficient overflow"));
                }
            }
        }
        out
    }

    /// Applies an exponent substitution. Colliding keys add. The new window
    /// is the largest one whose preimage lies in the old window, taking the
    /// source z-range as `[min(0, lowest stored z), z_max]` (the highest
    /// stored z when `z_max` is unbounded).
    pub fn reweight(&self, w: &Reweight) -> GradedCharacter {
        let t = self.truncation;
        let z_lo = self.coeffs.keys().map(|k| k.0).min().unwrap_or(0).min(0);
        let z_hi = t.z_max.unwrap_or_else(|| self.coeffs.keys().map(|k| k.0).max().unwrap_or(0));
        let q_max = t.q_max + w.q_shift + (w.q_per_z * z_lo).min(w.q_per_z * z_hi);
        let z_max = match t.z_max {
            Some(z) if w.z_scale > 0 => Some(w.z_scale * z + w.z_shift),
            _ => None,
        };
        let mut out = GradedCharacter::zero(Truncation { q_max, z_max, u_max: t.u_max });
        for (k, v) in self.iter() {
            out.add_term(w.apply(k), v);
        }
        out
    }

    /// Coefficientwise comparison on the common window.
    pub fn compare(&self, other: &GradedCharacter) -> Comparison {
        let window = self.truncation.meet(&other.truncation);
        let mut keys: Vec<Exponents> =
            self.coeffs.keys().chain(other.coeffs.keys()).filter(|k| window.contains(**k)).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let mut first_diff = None;
        let mut left_exceeds = false;
        for k in keys {
            let (l, r) = (self.get(k), other.get(k));
            if l != r {
                if first_diff.is_none() {
                    first_diff = Some(Difference { z: k.0, u: k.1, q: k.2, left: l, right: r });
                }
                if l > r {
                    left_exceeds = true;
                }
            }
        }
        let verdict = match (first_diff, left_exceeds) {
            (None, _) => Verdict::Equal,
            (Some(_), false) => Verdict::LessOrEqual,
            (Some(_), true) => Verdict::Mismatch,
        };
        Comparison { window, verdict, first_diff }
    }

    /// Sum over the u-grading, keyed by `(z, q)`.
    pub fn sum_over_u(&self) -> BTreeMap<(i64, i64), u64> {
        let mut out = BTreeMap::new();
        for ((z, _, q), v) in self.iter() {
            *out.entry((z, q)).or_insert(0) += v;
        }
        out
    }
}
