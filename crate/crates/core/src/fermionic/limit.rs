//! Characters of fusion products of integrable modules, as limits of the
//! principal-subspace sums under the extremal-vector shift.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::enumerate::{points_below, QuadraticForm, VarBound};
use super::formulas::{a_matrix, w_fusion_spec, FusionPair};
use super::sum::{denominator_series, FermionicSumSpec};
use super::FermionicError;
use crate::gradedchar::{Comparison, GradedCharacter, PochhammerOrder, PochhammerTable, Reweight, Truncation};

pub const DEFAULT_N_MAX: usize = 6;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The substitution taking the principal-subspace sum to the `N`-th shifted
/// sum: `z ↦ z^2` for the `h_0`-weight, the vacuum moved to
/// `z^{-i1-i2-2NK} q^{N²K + N(i1+i2)}`, and `q^{-2N}` per generator.
pub fn shift_reweight(pair: &FusionPair, n: i64) -> Reweight {
    let k = pair.total_level() as i64;
    let i = pair.total_weight() as i64;
    Reweight::new(2, -i - 2 * n * k, -2 * n, n * n * k + n * i)
}

pub fn shifted_spec(pair: &FusionPair, n: i64) -> FermionicSumSpec {
    w_fusion_spec(pair).reweighted(&shift_reweight(pair, n))
}

/// The `N`-th approximant on `q ≤ q_max` (all z and u).
pub fn approximant(pair: &FusionPair, n: i64, q_max: i64) -> Result<GradedCharacter, FermionicError> {
    Ok(shifted_spec(pair, n).evaluate(Truncation::q_only(q_max))?)
}

/// The q-exponent after the change of variables `n ↦ s`:
///
/// `Σ s_i² − μ(|m| + K − I + 2Σ s_i) + Σ_{i+2j ≥ K+1} m_j s_i + mAm/2
///  − Σ_{i ≤ I} s_i + Σ_{j > min} (j − min) m_j`, with `μ = |m|/K`.
pub fn p_exponent(pair: &FusionPair, s: &[BigRational], m: &[i64]) -> BigRational {
    let k = pair.total_level();
    let big_i = pair.total_weight();
    let mn = pair.min_weight();
    assert_eq!(s.len(), k);
    assert_eq!(m.len(), pair.k1);
    let m_norm: i64 = m.iter().enumerate().map(|(j, x)| (j as i64 + 1) * x).sum();
    let mu = BigRational::new(BigInt::from(m_norm), BigInt::from(k as i64));
    let sum_s: BigRational = s.iter().fold(BigRational::zero(), |acc, x| acc + x);
    let mut p: BigRational = s.iter().fold(BigRational::zero(), |acc, x| acc + x * x);
    p -= &mu * (rat(m_norm) + rat(k as i64) - rat(big_i as i64) + rat(2) * &sum_s);
    for (j, mj) in m.iter().enumerate() {
        for (i, si) in s.iter().enumerate() {
            if (i + 1) + 2 * (j + 1) > k {
                p += rat(*mj) * si;
            }
        }
    }
    let a = a_matrix(pair.k1);
    let mut mam = 0i64;
    for i in 0..m.len() {
        for j in 0..m.len() {
            mam += m[i] * a[i][j] * m[j];
        }
    }
    p += rat(mam / 2);
    for si in s.iter().take(big_i) {
        p -= si;
    }
    for (j, mj) in m.iter().enumerate() {
        if j + 1 > mn {
            p += rat((j + 1 - mn) as i64 * mj);
        }
    }
    p
}

/// `s` from `(n_1..n_{K-1}, s_K)`: `s_i = s_K + n_i + ... + n_{K-1}`.
fn s_from(head: &[i64], s_last: &BigRational) -> Vec<BigRational> {
    let k = head.len() + 1;
    let mut s = vec![s_last.clone(); k];
    for i in (0..k - 1).rev() {
        s[i] = &s[i + 1] + rat(head[i]);
    }
    s
}

/// `s` from the original summation index at level `N`:
/// `n_i = s_i − s_{i+1}`, `n_K = s_K + N − |m|/K`.
pub fn s_from_n(pair: &FusionPair, n_vec: &[i64], m: &[i64], big_n: i64) -> Vec<BigRational> {
    let k = pair.total_level();
    let m_norm: i64 = m.iter().enumerate().map(|(j, x)| (j as i64 + 1) * x).sum();
    let s_last = rat(n_vec[k - 1] - big_n) + BigRational::new(BigInt::from(m_norm), BigInt::from(k as i64));
    s_from(&n_vec[..k - 1], &s_last)
}

/// Result of summing the closed formula in the variables `s`.
#[derive(Clone, Debug, Serialize)]
pub struct SLatticeReport {
    #[serde(skip)]
    pub character: GradedCharacter,
    pub comparison: Comparison,
    /// Summation points whose exponent is not an integer (skipped).
    pub nonintegral_terms: usize,
    pub integral_terms: usize,
}

/// Limit character with its diagnostics.
#[derive(Clone, Debug)]
pub struct LimitCharacter {
    pub character: GradedCharacter,
    /// First `N` whose approximant equals the one for `N + 1`; confirming
    /// this needs `n_max > stabilized_at`.
    pub stabilized_at: i64,
    /// `s_K` in the coset `|m|/K + Z` forced by integrality of `n`.
    pub reconstructed: SLatticeReport,
    /// `s_K` read literally as an integer.
    pub literal: SLatticeReport,
}

/// Which lattice `s_K` runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SLattice {
    Reconstructed,
    Literal,
}

/// Sums `z^{-I + 2Σs} u^{|m|} q^{P(s,m)} / ((q)_m Π_{i<K}(q)_{s_i - s_{i+1}} (q)_∞)`
/// over `s_1 ≥ ... ≥ s_K`, `m ≥ 0`.
fn s_lattice_sum(pair: &FusionPair, q_max: i64, lattice: SLattice) -> Result<(GradedCharacter, usize, usize), FermionicError> {
    let k = pair.total_level();
    let km = pair.k1;
    let dim = k + km;
    let unpack = |y: &[i64]| -> (Vec<BigRational>, Vec<i64>) {
        let m = y[k..].to_vec();
        let m_norm: i64 = m.iter().enumerate().map(|(j, x)| (j as i64 + 1) * x).sum();
        let s_last = match lattice {
            SLattice::Reconstructed => rat(y[k - 1]) + BigRational::new(BigInt::from(m_norm), BigInt::from(k as i64)),
            SLattice::Literal => rat(y[k - 1]),
        };
        (s_from(&y[..k - 1], &s_last), m)
    };
    let form = QuadraticForm::fit(dim, |y| {
        let (s, m) = unpack(y);
        p_exponent(pair, &s, &m)
    });
    let mut bounds = vec![VarBound::NonNegative; dim];
    bounds[k - 1] = VarBound::Free;
    let points = points_below(&form, &bounds, &rat(q_max))?;
    let lowest = points.iter().map(|y| {
        let (s, m) = unpack(y);
        p_exponent(pair, &s, &m).floor().to_integer().to_i64().expect("exponent fits")
    }).min().unwrap_or(0).min(0);
    let table = PochhammerTable::new(q_max - lowest);
    let window = Truncation::q_only(q_max);
    let mut out = GradedCharacter::zero(window);
    let (mut integral, mut nonintegral) = (0, 0);
    for y in points {
        let (s, m) = unpack(&y);
        let p = p_exponent(pair, &s, &m);
        let sum_s: BigRational = s.iter().fold(BigRational::zero(), |acc, x| acc + x);
        let z = rat(-(pair.total_weight() as i64)) + rat(2) * sum_s;
        if !p.is_integer() || !z.is_integer() {
            nonintegral += 1;
            continue;
        }
        integral += 1;
        let q = p.to_integer().to_i64().expect("exponent fits");
        let z = z.to_integer().to_i64().expect("exponent fits");
        let u: i64 = m.iter().enumerate().map(|(j, x)| (j as i64 + 1) * x).sum();
        let mut denominators: Vec<i64> = y[..k - 1].to_vec();
        denominators.extend(&m);
        let finite = denominator_series(&table, &denominators, q_max - q);
        let series = crate::gradedchar::mul_truncated(&finite, table.get(PochhammerOrder::Infinite), q_max - q);
        for (d, &c) in series.iter().enumerate() {
            out.add_term((z, u, q + d as i64), c);
        }
    }
    Ok((out, integral, nonintegral))
}

/// The closed formula summed with `s_K ∈ |m|/K + Z`.
pub fn s_lattice_character(pair: &FusionPair, q_max: i64) -> Result<GradedCharacter, FermionicError> {
    Ok(s_lattice_sum(pair, q_max, SLattice::Reconstructed)?.0)
}

/// Stabilized limit on `q ≤ q_max`, cross-checked against the closed formula
/// in the `s` variables.
pub fn character_l_fusion(
    i1: usize,
    k1: usize,
    i2: usize,
    k2: usize,
    q_max: i64,
    n_max: usize,
) -> Result<LimitCharacter, FermionicError> {
    let pair = FusionPair::new(i1, k1, i2, k2)?;
    let mut previous = approximant(&pair, 1, q_max)?;
    let mut stable = None;
    for n in 2..=n_max as i64 {
        let next = approximant(&pair, n, q_max)?;
        if next == previous {
            stable = Some(n - 1);
            break;
        }
        previous = next;
    }
    let Some(stabilized_at) = stable else {
        let last = approximant(&pair, n_max as i64, q_max)?;
        let before = approximant(&pair, n_max as i64 - 1, q_max)?;
        return Err(FermionicError::NoStabilization { n_max, previous: Box::new(before), last: Box::new(last) });
    };
    let character = previous;
    let report = |lattice| -> Result<SLatticeReport, FermionicError> {
        let (c, integral, nonintegral) = s_lattice_sum(&pair, q_max, lattice)?;
        Ok(SLatticeReport {
            comparison: c.compare(&character),
            character: c,
            nonintegral_terms: nonintegral,
            integral_terms: integral,
        })
    };
    let reconstructed = report(SLattice::Reconstructed)?;
    let literal = report(SLattice::Literal)?;
    Ok(LimitCharacter { character, stabilized_at, reconstructed, literal })
}
