use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::field::{Field, PrimeField, Rationals};
use super::primes::PrimePair;
use super::MatrixError;

type Row<E> = Vec<(usize, E)>;

/// Row-major sparse matrix over an exact field. Each row is sorted by column
/// and stores no zero entries.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Field> {
    field: F,
    cols: usize,
    rows: Vec<Row<F::Elem>>,
}

impl<F: Field> PartialEq for SparseMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.tag() == other.field.tag() && self.cols == other.cols && self.rows == other.rows
    }
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, cols, rows: vec![Vec::new(); rows] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let rows = (0..n).map(|i| vec![(i, one.clone())]).collect();
        SparseMatrix { field, cols: n, rows }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Zero values are
    /// dropped; repeated positions and out-of-range indices are rejected.
    pub fn from_triplets(
        field: F,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Result<Self, MatrixError> {
        let mut grid: Vec<BTreeMap<usize, F::Elem>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(MatrixError::IndexOutOfRange { row: r, col: c, rows, cols });
            }
            if grid[r].insert(c, v).is_some() {
                return Err(MatrixError::DuplicateEntry { row: r, col: c });
            }
        }
        let rows = grid
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !field.is_zero(v)).collect())
            .collect();
        Ok(SparseMatrix { field, cols, rows })
    }

    pub fn from_dense(field: F, cols: usize, dense: &[Vec<F::Elem>]) -> Result<Self, MatrixError> {
        let mut triplets = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::RaggedRow { row: r, len: row.len(), cols });
            }
            for (c, v) in row.iter().enumerate() {
                triplets.push((r, c, v.clone()));
            }
        }
        Self::from_triplets(field, dense.len(), cols, triplets)
    }

    pub fn from_i64_rows(field: F, cols: usize, dense: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let converted: Vec<Vec<F::Elem>> =
            dense.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_dense(field, cols, &converted)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
    pub fn row(&self, r: usize) -> &[(usize, F::Elem)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.rows[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![self.field.zero(); self.cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    /// Same matrix with rows reordered by `perm` (row `i` of the result is
    /// row `perm[i]` of `self`).
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let rows = perm.iter().map(|&i| self.rows[i].clone()).collect();
        SparseMatrix { field: self.field.clone(), cols: self.cols, rows }
    }

    /// Same matrix with column `c` moved to position `perm[c]`.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut moved: Vec<_> = row.iter().map(|(c, v)| (perm[*c], v.clone())).collect();
                moved.sort_by_key(|(c, _)| *c);
                moved
            })
            .collect();
        SparseMatrix { field: self.field.clone(), cols: self.cols, rows }
    }

    /// Rank by sparse elimination. Pivot rule: the sparsest remaining row,
    /// pivoting on its lowest column; ties go to the lower row index.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut active: Vec<Option<Row<F::Elem>>> =
            self.rows.iter().map(|r| if r.is_empty() { None } else { Some(r.clone()) }).collect();
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); self.cols];
        for (i, row) in active.iter().enumerate() {
            if let Some(row) = row {
                for (c, _) in row {
                    col_rows[*c].push(i);
                }
            }
        }
        let mut rank = 0;
        loop {
            let pick = active
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.as_ref().map(|r| (r.len(), r[0].0, i)))
                .min();
            let Some((_, col, pivot_idx)) = pick else { break };
            let pivot = active[pivot_idx].take().expect("picked row is active");
            let pivot_inv = f.inv(&pivot[0].1);
            rank += 1;
            let touched = std::mem::take(&mut col_rows[col]);
            for r in touched {
                let Some(row) = active[r].as_mut() else { continue };
                let Ok(pos) = row.binary_search_by_key(&col, |(c, _)| *c) else { continue };
                let factor = f.mul(&row[pos].1, &pivot_inv);
                let before: Vec<usize> = row.iter().map(|(c, _)| *c).collect();
                *row = sub_scaled(f, row, &factor, &pivot);
                for (c, _) in row.iter() {
                    if before.binary_search(c).is_err() {
                        col_rows[*c].push(r);
                    }
                }
                if row.is_empty() {
                    active[r] = None;
                }
            }
        }
        rank
    }

    /// Reduced row-echelon form. Columns are processed left to right; among
    /// the rows eligible to pivot in a column the sparsest is chosen (ties to
    /// the lower row index). Zero rows are dropped from the output.
    pub fn row_reduce(&self) -> (SparseMatrix<F>, Vec<usize>) {
        let f = &self.field;
        let mut rows: Vec<Row<F::Elem>> = self.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); self.cols];
        for (i, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].push(i);
            }
        }
        let mut pivoted = vec![false; rows.len()];
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for col in 0..self.cols {
            let mut holders: Vec<usize> = std::mem::take(&mut col_rows[col]);
            holders.sort_unstable();
            holders.dedup();
            holders.retain(|&r| rows[r].binary_search_by_key(&col, |(c, _)| *c).is_ok());
            let Some(&pivot_idx) = holders
                .iter()
                .filter(|&&r| !pivoted[r])
                .min_by_key(|&&r| (rows[r].len(), r))
            else {
                col_rows[col] = holders;
                continue;
            };
            let lead = rows[pivot_idx][0].1.clone();
            debug_assert_eq!(rows[pivot_idx][0].0, col);
            let lead_inv = f.inv(&lead);
            for entry in rows[pivot_idx].iter_mut() {
                entry.1 = f.mul(&entry.1, &lead_inv);
            }
            let pivot_row = rows[pivot_idx].clone();
            for &r in &holders {
                if r == pivot_idx {
                    continue;
                }
                let pos = rows[r].binary_search_by_key(&col, |(c, _)| *c).expect("holder has column");
                let factor = rows[r][pos].1.clone();
                let before: Vec<usize> = rows[r].iter().map(|(c, _)| *c).collect();
                rows[r] = sub_scaled(f, &rows[r], &factor, &pivot_row);
                for (c, _) in rows[r].iter() {
                    if before.binary_search(c).is_err() {
                        col_rows[*c].push(r);
                    }
                }
            }
            pivoted[pivot_idx] = true;
            pivots.push((col, pivot_idx));
        }
        let pivot_columns: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
        let echelon_rows = pivots.iter().map(|(_, r)| rows[*r].clone()).collect();
        (SparseMatrix { field: self.field.clone(), cols: self.cols, rows: echelon_rows }, pivot_columns)
    }
}

/// `a - factor * b` for sorted sparse rows.
fn sub_scaled<F: Field>(f: &F, a: &[(usize, F::Elem)], factor: &F::Elem, b: &[(usize, F::Elem)]) -> Row<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            let v = f.neg(&f.mul(factor, &b[j].1));
            if !f.is_zero(&v) {
                out.push((cb, v));
            }
            j += 1;
        } else {
            let v = f.sub_mul(&a[i].1, factor, &b[j].1);
            if !f.is_zero(&v) {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sparse matrix with arbitrary-precision integer entries; the form in which
/// relation matrices are assembled before reduction into a field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub cols: usize,
    pub rows: Vec<Vec<(usize, BigInt)>>,
}

impl IntegerMatrix {
    pub fn new(cols: usize) -> Self {
        IntegerMatrix { cols, rows: Vec::new() }
    }

    pub fn push_row(&mut self, mut row: Vec<(usize, BigInt)>) {
        row.retain(|(_, v)| !v.is_zero());
        row.sort_by_key(|(c, _)| *c);
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0), "duplicate column in row");
        debug_assert!(row.iter().all(|(c, _)| *c < self.cols));
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn to_field<F: Field>(&self, field: &F) -> SparseMatrix<F> {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(c, v)| {
                        let e = field.from_bigint(v);
                        (!field.is_zero(&e)).then_some((*c, e))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix { field: field.clone(), cols: self.cols, rows }
    }
}

/// How ranks of integer matrices are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// Rank modulo two primes; accepted only when both agree, otherwise
    /// recomputed over the rationals.
    TwoPrime(PrimePair),
    Exact,
}

/// A prime that returned a smaller rank than the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankEscalation {
    pub first_prime_rank: usize,
    pub second_prime_rank: usize,
    pub exact_rank: usize,
    pub dropped_primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedRank {
    pub rank: usize,
    pub escalation: Option<RankEscalation>,
}

pub fn certified_rank(m: &IntegerMatrix, mode: RankMode) -> CertifiedRank {
    match mode {
        RankMode::Exact => CertifiedRank { rank: m.to_field(&Rationals).rank(), escalation: None },
        RankMode::TwoPrime(pair) => {
            let r1 = m.to_field(&PrimeField::new(pair.first)).rank();
            let r2 = m.to_field(&PrimeField::new(pair.second)).rank();
            if r1 == r2 {
                return CertifiedRank { rank: r1, escalation: None };
            }
            let exact = m.to_field(&Rationals).rank();
            let dropped_primes = [(pair.first, r1), (pair.second, r2)]
                .into_iter()
                .filter(|(_, r)| *r < exact)
                .map(|(p, _)| p)
                .collect();
            log::warn!("prime ranks disagree ({r1} vs {r2}); exact rank {exact}");
            CertifiedRank {
                rank: exact,
                escalation: Some(RankEscalation {
                    first_prime_rank: r1,
                    second_prime_rank: r2,
                    exact_rank: exact,
                    dropped_primes,
                }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(rows: &[Vec<i64>], cols: usize) -> SparseMatrix<Rationals> {
        SparseMatrix::from_i64_rows(Rationals, cols, rows).unwrap()
    }

    #[test]
    fn rank_basic_cases() {
        assert_eq!(SparseMatrix::zeros(Rationals, 0, 0).rank(), 0);
        assert_eq!(SparseMatrix::identity(Rationals, 3).rank(), 3);
        assert_eq!(q(&[vec![1, 2, 3], vec![2, 4, 6]], 3).rank(), 1);
    }

    #[test]
    fn row_reduce_basic_cases() {
        let id = SparseMatrix::identity(Rationals, 3);
        let (e, p) = id.row_reduce();
        assert_eq!(e, id);
        assert_eq!(p, vec![0, 1, 2]);

        let z = SparseMatrix::zeros(Rationals, 2, 3);
        let (e, p) = z.row_reduce();
        assert_eq!(e.nrows(), 0);
        assert!(p.is_empty());

        let (e, p) = q(&[vec![2, 4], vec![1, 3]], 2).row_reduce();
        assert_eq!(e, SparseMatrix::identity(Rationals, 2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn row_reduce_half_coefficient() {
        let (e, p) = q(&[vec![2, 1]], 2).row_reduce();
        assert_eq!(p, vec![0]);
        assert_eq!(e.get(0, 1), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn rank_drops_modulo_a_divisor_of_the_determinant() {
        let mut m = IntegerMatrix::new(2);
        m.push_row(vec![(0, 3.into()), (1, 1.into())]);
        m.push_row(vec![(1, 1.into())]);
        assert_eq!(m.to_field(&PrimeField::new(3)).rank(), 1);
        assert_eq!(m.to_field(&PrimeField::new(5)).rank(), 2);
        assert_eq!(certified_rank(&m, RankMode::Exact).rank, 2);
    }

    #[test]
    fn prime_disagreement_escalates_to_exact() {
        let mut m = IntegerMatrix::new(2);
        m.push_row(vec![(0, 2.into()), (1, 2.into())]);
        let cert = certified_rank(&m, RankMode::TwoPrime(PrimePair { first: 2, second: 3 }));
        assert_eq!(cert.rank, 1);
        let e = cert.escalation.unwrap();
        assert_eq!((e.first_prime_rank, e.second_prime_rank, e.exact_rank), (0, 1, 1));
        assert_eq!(e.dropped_primes, vec![2]);
    }

    #[test]
    fn triplet_validation() {
        assert!(matches!(
            SparseMatrix::from_triplets(Rationals, 1, 1, vec![(0, 1, Rationals.one())]),
            Err(MatrixError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            SparseMatrix::from_triplets(Rationals, 1, 1, vec![(0, 0, Rationals.one()), (0, 0, Rationals.one())]),
            Err(MatrixError::DuplicateEntry { .. })
        ));
    }
}
