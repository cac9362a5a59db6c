use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::enumerate::{points_below, EnumerationError, QuadraticForm, VarBound};
use crate::gradedchar::{mul_truncated, GradedCharacter, PochhammerOrder, PochhammerTable, Reweight, Truncation};

/// `Σ_{x ≥ 0} z^{z(x)} u^{u(x)} q^{xQx/2 + l·x + q0} / Π_i (q)_{x_i}` with
/// `z(x) = z0 + Σ z_i x_i` and `u(x) = Σ u_i x_i`.
///
/// For the sums built here the variables are `n` followed by `m`, and the
/// quadratic part is the block matrix `[[A, B], [Bᵀ, A']]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermionicSumSpec {
    /// Symmetric, with even diagonal, so that the exponent is an integer.
    pub quadratic: Vec<Vec<i64>>,
    pub q_linear: Vec<i64>,
    pub q0: i64,
    pub z_weights: Vec<i64>,
    pub z0: i64,
    pub u_weights: Vec<i64>,
}

impl FermionicSumSpec {
    pub fn dim(&self) -> usize {
        self.q_linear.len()
    }

    /// Builds the spec for `n ∈ Z^{a.len()}`, `m ∈ Z^{c.len()}` with
    /// quadratic part `nAn/2 + nBm + mCm/2`.
    pub fn from_blocks(a: &[Vec<i64>], b: &[Vec<i64>], c: &[Vec<i64>]) -> Self {
        let (kn, km) = (a.len(), c.len());
        let dim = kn + km;
        let mut quadratic = vec![vec![0i64; dim]; dim];
        for i in 0..kn {
            for j in 0..kn {
                quadratic[i][j] = a[i][j];
            }
            for j in 0..km {
                quadratic[i][kn + j] = b[i][j];
                quadratic[kn + j][i] = b[i][j];
            }
        }
        for i in 0..km {
            for j in 0..km {
                quadratic[kn + i][kn + j] = c[i][j];
            }
        }
        FermionicSumSpec {
            quadratic,
            q_linear: vec![0; dim],
            q0: 0,
            z_weights: vec![0; dim],
            z0: 0,
            u_weights: vec![0; dim],
        }
    }

    /// The same sum with every monomial `z^a u^b q^c` replaced by
    /// `z^{z_scale·a + z_shift} u^b q^{c + q_per_z·a + q_shift}`.
    pub fn reweighted(&self, w: &Reweight) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim() {
            out.q_linear[i] += w.q_per_z * self.z_weights[i];
            out.z_weights[i] = w.z_scale * self.z_weights[i];
        }
        out.q0 = self.q0 + w.q_per_z * self.z0 + w.q_shift;
        out.z0 = w.z_scale * self.z0 + w.z_shift;
        out
    }

    pub fn form(&self) -> QuadraticForm {
        QuadraticForm::from_integers(&self.quadratic, &self.q_linear, self.q0)
    }

    pub fn exponents(&self, x: &[i64]) -> (i64, i64, i64) {
        let dot = |w: &[i64]| w.iter().zip(x).map(|(a, b)| a * b).sum::<i64>();
        let twice: i64 = (0..self.dim())
            .map(|i| x[i] * self.quadratic[i].iter().zip(x).map(|(a, b)| a * b).sum::<i64>())
            .sum();
        assert!(twice % 2 == 0, "fermionic exponent is not an integer");
        (self.z0 + dot(&self.z_weights), dot(&self.u_weights), twice / 2 + dot(&self.q_linear) + self.q0)
    }

    /// Index vectors whose leading exponent is at most `q_max`.
    pub fn terms(&self, q_max: i64) -> Result<Vec<Vec<i64>>, EnumerationError> {
        let bounds = vec![VarBound::NonNegative; self.dim()];
        points_below(&self.form(), &bounds, &BigRational::from_integer(BigInt::from(q_max)))
    }

    /// Expansion on `window`; complete there because every term has
    /// nonnegative q-corrections from the denominators.
    pub fn evaluate(&self, window: Truncation) -> Result<GradedCharacter, EnumerationError> {
        let q_max = window.q_max;
        let terms = self.terms(q_max)?;
        let lowest = terms.iter().map(|x| self.exponents(x).2).min().unwrap_or(0).min(0);
        let table = PochhammerTable::new(q_max - lowest);
        let partials: Vec<Vec<((i64, i64, i64), u64)>> = terms
            .par_chunks(256)
            .map(|chunk| {
                let mut acc = Vec::new();
                for x in chunk {
                    let (z, u, q) = self.exponents(x);
                    if !window.contains((z, u, q)) {
                        continue;
                    }
                    let series = denominator_series(&table, x, q_max - q);
                    for (k, &c) in series.iter().enumerate() {
                        if c != 0 {
                            acc.push(((z, u, q + k as i64), c));
                        }
                    }
                }
                acc
            })
            .collect();
        let mut out = GradedCharacter::zero(window);
        for part in partials {
            for (k, v) in part {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }
}

/// `Π 1/(q)_{x_i}` up to `q^budget`.
pub(crate) fn denominator_series(table: &PochhammerTable, x: &[i64], budget: i64) -> Vec<u64> {
    let mut series = vec![1u64];
    for &xi in x {
        if xi > 0 {
            series = mul_truncated(&series, table.get(PochhammerOrder::Finite(xi as u64)), budget);
        }
    }
    series.truncate(budget.max(-1).saturating_add(1) as usize);
    series
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_geometric_sum() {
        // Σ z^n q^{n^2 - n} / (q)_n, level one
        let mut s = FermionicSumSpec::from_blocks(&[vec![2]], &[], &[]);
        s.q_linear = vec![-1];
        s.z_weights = vec![1];
        let c = s.evaluate(Truncation::new(3, Some(2), None)).unwrap();
        let expected = GradedCharacter::from_entries(
            Truncation::new(3, Some(2), None),
            [((0, 0, 0), 1), ((1, 0, 0), 1), ((1, 0, 1), 1), ((1, 0, 2), 1), ((1, 0, 3), 1), ((2, 0, 2), 1), ((2, 0, 3), 1)],
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn reweighted_spec_matches_character_reweight() {
        let mut s = FermionicSumSpec::from_blocks(&[vec![2, 2], vec![2, 4]], &[vec![1], vec![2]], &[vec![2]]);
        s.q_linear = vec![-1, -2, 0];
        s.z_weights = vec![1, 2, 1];
        s.u_weights = vec![0, 0, 1];
        let w = Reweight::new(2, -3, -1, 1);
        let base = s.evaluate(Truncation::new(12, Some(4), None)).unwrap();
        let expected = base.reweight(&w);
        let direct = s.reweighted(&w).evaluate(expected.truncation()).unwrap();
        let cmp = direct.compare(&expected);
        assert_eq!(cmp.verdict, crate::Verdict::Equal, "{:?} {:?}", cmp.first_diff, expected.truncation());
    }
}
