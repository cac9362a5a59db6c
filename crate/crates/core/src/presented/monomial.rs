use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::presentation::Presentation;

/// `(z, u, q)`-degree of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tridegree {
    pub z: u32,
    pub u: u32,
    pub q: u32,
}

impl Tridegree {
    pub const ZERO: Tridegree = Tridegree { z: 0, u: 0, q: 0 };

    pub fn new(z: u32, u: u32, q: u32) -> Self {
        Tridegree { z, u, q }
    }

    pub fn checked_sub(&self, other: &Tridegree) -> Option<Tridegree> {
        Some(Tridegree {
            z: self.z.checked_sub(other.z)?,
            u: self.u.checked_sub(other.u)?,
            q: self.q.checked_sub(other.q)?,
        })
    }

    pub fn add(&self, other: &Tridegree) -> Tridegree {
        Tridegree { z: self.z + other.z, u: self.u + other.u, q: self.q + other.q }
    }

    pub fn exponents(&self) -> crate::gradedchar::Exponents {
        (i64::from(self.z), i64::from(self.u), i64::from(self.q))
    }
}

impl fmt::Display for Tridegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(z={}, u={}, q={})", self.z, self.u, self.q)
    }
}

/// Numbering of the modes `f_{-n}`, `min_mode ≤ n ≤ q_max`, of every family:
/// family-major, modes ascending within a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableLayout {
    names: Vec<String>,
    min_modes: Vec<u32>,
    u_degrees: Vec<u32>,
    offsets: Vec<usize>,
    q_max: u32,
    len: usize,
}

impl VariableLayout {
    pub fn new(p: &Presentation, q_max: u32) -> Self {
        let mut offsets = Vec::with_capacity(p.families.len());
        let mut len = 0;
        for f in &p.families {
            offsets.push(len);
            len += (q_max + 1).saturating_sub(f.min_mode) as usize;
        }
        VariableLayout {
            names: p.families.iter().map(|f| f.name.clone()).collect(),
            min_modes: p.families.iter().map(|f| f.min_mode).collect(),
            u_degrees: p.families.iter().map(|f| f.u_degree).collect(),
            offsets,
            q_max,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn q_max(&self) -> u32 {
        self.q_max
    }

    pub fn families(&self) -> usize {
        self.offsets.len()
    }

    pub fn var(&self, family: usize, mode: u32) -> Option<u32> {
        let lo = self.min_modes[family];
        (mode >= lo && mode <= self.q_max).then(|| (self.offsets[family] + (mode - lo) as usize) as u32)
    }

    pub fn family_and_mode(&self, v: u32) -> (usize, u32) {
        let v = v as usize;
        let family = self.offsets.partition_point(|&o| o <= v) - 1;
        (family, self.min_modes[family] + (v - self.offsets[family]) as u32)
    }

    pub fn degree(&self, v: u32) -> Tridegree {
        let (family, mode) = self.family_and_mode(v);
        Tridegree { z: 1, u: self.u_degrees[family], q: mode }
    }

    pub fn name(&self, v: u32) -> String {
        let (family, mode) = self.family_and_mode(v);
        if mode == 0 {
            format!("{}_0", self.names[family])
        } else {
            format!("{}_{{-{}}}", self.names[family], mode)
        }
    }
}

/// Commutative monomial as a multiset of variable indices (ascending).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_vars(mut vars: Vec<u32>) -> Self {
        vars.sort_unstable();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self, layout: &VariableLayout) -> Tridegree {
        self.0.iter().fold(Tridegree::ZERO, |acc, &v| acc.add(&layout.degree(v)))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn display(&self, layout: &VariableLayout) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let mut e = 1;
            while i + e < self.0.len() && self.0[i + e] == v {
                e += 1;
            }
            out.push_str(&layout.name(v));
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
            i += e;
        }
        out
    }
}

/// Graded reverse lexicographic order, ascending, for monomials of equal
/// total degree: the list of variables sorted in descending index order is
/// compared lexicographically and reversed.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.0.len().cmp(&b.0.len()).then_with(|| b.0.iter().rev().cmp(a.0.iter().rev()))
}

/// Every monomial with `z ≤ z_max`, `u ≤ u_max`, `q ≤ layout.q_max()`,
/// bucketed by tridegree and sorted by [`grevlex_cmp`] within each bucket.
pub fn enumerate_monomials(layout: &VariableLayout, z_max: u32, u_max: u32) -> HashMap<Tridegree, Vec<Monomial>> {
    fn rec(
        layout: &VariableLayout,
        start: u32,
        deg: Tridegree,
        z_max: u32,
        u_max: u32,
        cur: &mut Vec<u32>,
        out: &mut HashMap<Tridegree, Vec<Monomial>>,
    ) {
        out.entry(deg).or_default().push(Monomial(cur.clone()));
        if deg.z == z_max {
            return;
        }
        for v in start..layout.len() as u32 {
            let d = deg.add(&layout.degree(v));
            if d.q > layout.q_max() || d.u > u_max {
                continue;
            }
            cur.push(v);
            rec(layout, v, d, z_max, u_max, cur, out);
            cur.pop();
        }
    }
    let mut out = HashMap::new();
    rec(layout, 0, Tridegree::ZERO, z_max, u_max, &mut Vec::new(), &mut out);
    for list in out.values_mut() {
        list.sort_by(grevlex_cmp);
    }
    out
}
