use serde::{Deserialize, Serialize};

use super::sum::FermionicSumSpec;
use super::FermionicError;
use crate::gradedchar::{GradedCharacter, Truncation};
use crate::presented::{InitialConditions, Partition};

/// `A_{ij} = 2 min(i, j)`, 1-based, `k × k`.
pub fn a_matrix(k: usize) -> Vec<Vec<i64>> {
    (1..=k).map(|i| (1..=k).map(|j| 2 * i.min(j) as i64).collect()).collect()
}

/// `B_{ij} = max(0, i - λ_j)` for `i = 1..λ_0`, `j = 1..s`.
pub fn b_matrix(lambda: &Partition) -> Vec<Vec<i64>> {
    (1..=lambda.first())
        .map(|i| (1..=lambda.s()).map(|j| (i as i64 - lambda.part(j) as i64).max(0)).collect())
        .collect()
}

/// Gram matrix in the basis `p_1..p_{λ_0}, q_1..q_s`: all norms 2, and
/// `(p_i, q_j) = 1` exactly when `λ_{j-1} ≥ i > λ_j`.
pub fn gram_matrix_for_partition(lambda: &Partition) -> Vec<Vec<i64>> {
    let (l0, s) = (lambda.first(), lambda.s());
    let n = l0 + s;
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for i in 1..=l0 {
        for j in 1..=s {
            if lambda.part(j - 1) >= i && i > lambda.part(j) {
                g[i - 1][l0 + j - 1] = 1;
                g[l0 + j - 1][i - 1] = 1;
            }
        }
    }
    g
}

/// Cumulative sums of `c`, then of `d`, matching the Gram matrix basis.
pub fn shift_vector(ic: &InitialConditions) -> Vec<i64> {
    let cumulative = |x: &[usize]| {
        x.iter()
            .scan(0i64, |acc, &v| {
                *acc += v as i64;
                Some(*acc)
            })
            .collect::<Vec<_>>()
    };
    let mut v = cumulative(&ic.c);
    v.extend(cumulative(&ic.d));
    v
}

/// Lattice data `(M, v)` for the principal-subspace character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub gram: Vec<Vec<i64>>,
    pub shift: Vec<i64>,
}

impl LatticeSpec {
    pub fn new(gram: Vec<Vec<i64>>, shift: Vec<i64>) -> Result<Self, FermionicError> {
        let n = gram.len();
        if shift.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(FermionicError::Config("Gram matrix and shift vector sizes disagree".into()));
        }
        for i in 0..n {
            if gram[i][i] % 2 != 0 {
                return Err(FermionicError::Config(format!("diagonal entry {i} is odd")));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(FermionicError::Config(format!("Gram matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(LatticeSpec { gram, shift })
    }
}

/// `Σ_n (z q^{-1})^{|n|} q^{nAn/2} / (q)_n` with `|n| = Σ i n_i`.
pub fn gordon_spec(k: usize) -> FermionicSumSpec {
    let mut s = FermionicSumSpec::from_blocks(&a_matrix(k), &[], &[]);
    for i in 0..k {
        s.q_linear[i] = -(i as i64 + 1);
        s.z_weights[i] = i as i64 + 1;
    }
    s
}

/// The sum for `A_{λ;c,d}`: `n ∈ Z^{λ_0}`, `m ∈ Z^s`, weight
/// `u^{|m|} (z q^{-1})^{|n|+|m|} q^{nAn/2 + nBm + mAm/2}` times the extra
/// linear term from `c` and `d`.
pub fn gmf_spec(lambda: &Partition, ic: &InitialConditions) -> Result<FermionicSumSpec, FermionicError> {
    ic.check(lambda).map_err(|e| FermionicError::Config(e.to_string()))?;
    let (l0, s) = (lambda.first(), lambda.s());
    let mut spec = FermionicSumSpec::from_blocks(&a_matrix(l0), &b_matrix(lambda), &a_matrix(s));
    for j in 1..=l0 {
        let extra: i64 = (1..=j).map(|i| (j - i + 1) as i64 * ic.c[i - 1] as i64).sum();
        spec.q_linear[j - 1] = -(j as i64) + extra;
        spec.z_weights[j - 1] = j as i64;
    }
    for j in 1..=s {
        let extra: i64 = (1..=j).map(|i| (j - i + 1) as i64 * ic.d[i - 1] as i64).sum();
        spec.q_linear[l0 + j - 1] = -(j as i64) + extra;
        spec.z_weights[l0 + j - 1] = j as i64;
        spec.u_weights[l0 + j - 1] = j as i64;
    }
    Ok(spec)
}

/// Normalized fusion data: levels ordered so that `k1 ≤ k2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionPair {
    pub i1: usize,
    pub k1: usize,
    pub i2: usize,
    pub k2: usize,
}

impl FusionPair {
    pub fn new(i1: usize, k1: usize, i2: usize, k2: usize) -> Result<Self, FermionicError> {
        if i1 > k1 || i2 > k2 {
            return Err(FermionicError::Config(format!("need 0 ≤ i ≤ k, got ({i1},{k1}) and ({i2},{k2})")));
        }
        if k1 + k2 == 0 {
            return Err(FermionicError::Config("at least one level must be positive".into()));
        }
        Ok(if k1 <= k2 { FusionPair { i1, k1, i2, k2 } } else { FusionPair { i1: i2, k1: k2, i2: i1, k2: k1 } })
    }

    /// `k1 + k2`.
    pub fn total_level(&self) -> usize {
        self.k1 + self.k2
    }

    /// `i1 + i2`.
    pub fn total_weight(&self) -> usize {
        self.i1 + self.i2
    }

    pub fn min_weight(&self) -> usize {
        self.i1.min(self.i2)
    }

    /// `λ^{(k1,k2)}` with `c = δ^{(i1+i2+1)}` and `d = δ^{(min(i1,i2)+1)}`.
    pub fn algebra_data(&self) -> (Partition, InitialConditions) {
        let lambda = Partition::fusion_shape(self.k1, self.k2).expect("positive total level");
        let ic = InitialConditions::deltas(&lambda, self.total_weight() + 1, self.min_weight() + 1);
        (lambda, ic)
    }
}

pub fn w_fusion_spec(pair: &FusionPair) -> FermionicSumSpec {
    let (lambda, ic) = pair.algebra_data();
    gmf_spec(&lambda, &ic).expect("fusion data is consistent")
}

pub fn lattice_spec(lattice: &LatticeSpec) -> FermionicSumSpec {
    let mut s = FermionicSumSpec::from_blocks(&lattice.gram, &[], &[]);
    for i in 0..lattice.gram.len() {
        s.q_linear[i] = lattice.shift[i] - lattice.gram[i][i] / 2;
        s.z_weights[i] = 1;
    }
    s
}

pub fn gordon_character(k: usize, window: Truncation) -> Result<GradedCharacter, FermionicError> {
    if k == 0 {
        return Err(FermionicError::Config("level must be positive".into()));
    }
    Ok(gordon_spec(k).evaluate(window)?)
}

pub fn character_a_lambda(lambda: &Partition, window: Truncation) -> Result<GradedCharacter, FermionicError> {
    character_a_lambda_cd(lambda, &InitialConditions::zero(lambda), window)
}

pub fn character_a_lambda_cd(
    lambda: &Partition,
    ic: &InitialConditions,
    window: Truncation,
) -> Result<GradedCharacter, FermionicError> {
    Ok(gmf_spec(lambda, ic)?.evaluate(window)?)
}

pub fn character_w_fusion(i1: usize, k1: usize, i2: usize, k2: usize, window: Truncation) -> Result<GradedCharacter, FermionicError> {
    let pair = FusionPair::new(i1, k1, i2, k2)?;
    Ok(w_fusion_spec(&pair).evaluate(window)?)
}

pub fn lattice_principal_character(lattice: &LatticeSpec, window: Truncation) -> Result<GradedCharacter, FermionicError> {
    Ok(lattice_spec(lattice).evaluate(window)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: Vec<usize>) -> Partition {
        Partition::new(p).unwrap()
    }

    #[test]
    fn a_matrices() {
        assert_eq!(a_matrix(1), vec![vec![2]]);
        assert_eq!(a_matrix(2), vec![vec![2, 2], vec![2, 4]]);
        assert_eq!(a_matrix(3), vec![vec![2, 2, 2], vec![2, 4, 4], vec![2, 4, 6]]);
    }

    #[test]
    fn b_matrices() {
        assert_eq!(b_matrix(&part(vec![4, 2])), vec![vec![0], vec![0], vec![1], vec![2]]);
        assert_eq!(b_matrix(&part(vec![1, 1])), vec![vec![0]]);
        assert_eq!(b_matrix(&part(vec![2, 0])), vec![vec![1], vec![2]]);
    }

    #[test]
    fn gram_matrices() {
        assert_eq!(gram_matrix_for_partition(&part(vec![2, 1])), vec![vec![2, 0, 0], vec![0, 2, 1], vec![0, 1, 2]]);
        assert_eq!(gram_matrix_for_partition(&part(vec![1, 1])), vec![vec![2, 0], vec![0, 2]]);
        let g = gram_matrix_for_partition(&part(vec![3, 1]));
        assert_eq!((g[1][3], g[2][3], g[0][3]), (1, 1, 0));
    }

    #[test]
    fn shift_vectors() {
        assert_eq!(shift_vector(&InitialConditions { c: vec![1, 0], d: vec![1] }), vec![1, 1, 1]);
        assert_eq!(shift_vector(&InitialConditions { c: vec![0, 0], d: vec![0] }), vec![0, 0, 0]);
        assert_eq!(shift_vector(&InitialConditions { c: vec![2, 1, 1], d: vec![] }), vec![2, 3, 4]);
    }

    #[test]
    fn gordon_level_one() {
        let w = Truncation::new(3, Some(2), None);
        let c = gordon_character(1, w).unwrap();
        let expected = GradedCharacter::from_entries(
            w,
            [((0, 0, 0), 1), ((1, 0, 0), 1), ((1, 0, 1), 1), ((1, 0, 2), 1), ((1, 0, 3), 1), ((2, 0, 2), 1), ((2, 0, 3), 1)],
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn one_one_u_slice() {
        let c = character_a_lambda(&part(vec![1, 1]), Truncation::q_only(4)).unwrap();
        for q in 0..=3 {
            assert_eq!(c.get((1, 1, q)), 1);
        }
    }

    #[test]
    fn w_fusion_matches_gmf_and_is_symmetric() {
        let w = Truncation::new(6, Some(4), Some(3));
        let lam = part(vec![2, 0]);
        let direct = character_a_lambda_cd(&lam, &InitialConditions { c: vec![1, 0], d: vec![1] }, w).unwrap();
        assert_eq!(character_w_fusion(0, 1, 0, 1, w).unwrap(), direct);
        assert_eq!(character_w_fusion(1, 1, 0, 2, w).unwrap(), character_w_fusion(0, 2, 1, 1, w).unwrap());
        assert!(character_w_fusion(2, 1, 0, 1, w).is_err());
    }

    #[test]
    fn lattice_rank_one_is_gordon_level_one() {
        let w = Truncation::new(8, Some(5), None);
        let l = LatticeSpec::new(vec![vec![2]], vec![0]).unwrap();
        assert_eq!(lattice_principal_character(&l, w).unwrap(), gordon_character(1, w).unwrap());
    }

    #[test]
    fn lattice_block_diagonal_factorizes() {
        let w = Truncation::new(7, Some(6), None);
        let one = lattice_principal_character(&LatticeSpec::new(vec![vec![2]], vec![0]).unwrap(), w).unwrap();
        let two = lattice_principal_character(&LatticeSpec::new(vec![vec![2, 0], vec![0, 2]], vec![0, 0]).unwrap(), w).unwrap();
        assert_eq!(two, one.mul(&one));
    }
}
