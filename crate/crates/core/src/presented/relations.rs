use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::{Monomial, Tridegree, VariableLayout};
use super::presentation::{Factor, Presentation};

/// One z-coefficient of a relation family: a homogeneous polynomial in the
/// modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCoefficient {
    pub relation: usize,
    /// Exponent of `z`.
    pub r: u64,
    pub degree: Tridegree,
    /// Terms sorted by monomial; coefficients nonzero.
    pub terms: Vec<(Monomial, BigInt)>,
}

type Poly = BTreeMap<Monomial, BigInt>;
/// Series in `z` truncated at `z^r_max`; entry `r` is the coefficient of `z^r`.
type Series = Vec<Poly>;

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// `f^{(k)}(z) = Σ_n n(n-1)...(n-k+1) f_{-n} z^{n-k}`.
fn factor_series(layout: &VariableLayout, family: usize, k: u32, r_max: u64) -> Series {
    let mut s: Series = vec![Poly::new(); r_max as usize + 1];
    for n in k..=layout.q_max() {
        let Some(v) = layout.var(family, n) else { continue };
        let r = u64::from(n - k);
        if r > r_max {
            break;
        }
        s[r as usize].insert(Monomial(vec![v]), falling(n, k));
    }
    s
}

fn mul_series(a: &Series, b: &Series, r_max: u64) -> Series {
    let mut out: Series = vec![Poly::new(); r_max as usize + 1];
    for (i, pa) in a.iter().enumerate() {
        for (j, pb) in b.iter().enumerate() {
            if (i + j) as u64 > r_max {
                break;
            }
            let slot = &mut out[i + j];
            for (ma, ca) in pa {
                for (mb, cb) in pb {
                    let e = slot.entry(ma.mul(mb)).or_insert_with(BigInt::zero);
                    *e += ca * cb;
                }
            }
            slot.retain(|_, c| !c.is_zero());
        }
    }
    out
}

fn product_series(layout: &VariableLayout, factors: &[Factor], r_max: u64) -> Series {
    let mut acc: Series = vec![Poly::new(); r_max as usize + 1];
    acc[0].insert(Monomial::one(), BigInt::one());
    for f in factors {
        let base = factor_series(layout, f.family, f.derivative, r_max);
        for _ in 0..f.power {
            acc = mul_series(&acc, &base, r_max);
        }
    }
    acc
}

/// All nonzero relation coefficients with q-degree at most `layout.q_max()`,
/// z-degree at most `z_max` and u-degree at most `u_max`.
pub fn relation_coefficients(p: &Presentation, layout: &VariableLayout, z_max: u32, u_max: u32) -> Vec<RelationCoefficient> {
    let mut out = Vec::new();
    for (idx, rel) in p.relations.iter().enumerate() {
        let z = rel.z_degree();
        let u: u64 = rel.factors.iter().map(|f| u64::from(p.families[f.family].u_degree) * u64::from(f.power)).sum();
        let dw = rel.derivative_weight();
        if z > u64::from(z_max) || u > u64::from(u_max) || dw > u64::from(layout.q_max()) {
            continue;
        }
        let mut r_max = u64::from(layout.q_max()) - dw;
        if let super::CoefficientRange::Low(bound) = rel.range {
            if bound == 0 {
                continue;
            }
            r_max = r_max.min(u64::from(bound) - 1);
        }
        let series = product_series(layout, &rel.factors, r_max);
        for (r, poly) in series.into_iter().enumerate() {
            if poly.is_empty() {
                continue;
            }
            out.push(RelationCoefficient {
                relation: idx,
                r: r as u64,
                degree: Tridegree::new(z as u32, u as u32, (r as u64 + dw) as u32),
                terms: poly.into_iter().collect(),
            });
        }
    }
    out
}
