use super::field::Field;

/// Incrementally grown basis of a subspace of `F^dim`, kept in semi-echelon
/// form: each stored row has a unit pivot and vanishes at the pivots of all
/// rows stored before it.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, dim: usize) -> Self {
        EchelonBasis { field, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn vectors(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Residual of `v` after elimination against the stored rows; zero iff
    /// `v` lies in the span.
    pub fn reduce(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub_mul(x, &c, r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = &self.field;
        self.reduce(v.to_vec()).iter().all(|x| f.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<F::Elem>) -> bool {
        if self.is_full() {
            return false;
        }
        let f = self.field.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else { return false };
        let inv = f.inv(&r[p]);
        for x in r.iter_mut() {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}
