use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::FusionError;
use crate::exactlin::{EchelonBasis, Field};
use crate::gradedchar::{GradedCharacter, Truncation};
use crate::presented::{build_presentation_a, delta_vector, InitialConditions, Monomial, Partition, QuotientEngine};

/// `(z, q)` bidegree of a component.
pub type Bidegree = (u32, u32);

/// Sparse column: the image of one basis vector.
pub type Column<E> = Vec<(usize, E)>;

/// Graded module over `C[e_0, e_{-1}, ...]` generated by the vector in
/// degree `(0, 0)`, stored componentwise inside a window. `e_{-j}` raises the
/// bidegree by `(1, j)`.
#[derive(Clone, Debug)]
pub struct CyclicModule<F: Field> {
    field: F,
    z_max: u32,
    q_max: u32,
    dims: BTreeMap<Bidegree, usize>,
    labels: BTreeMap<Bidegree, Vec<String>>,
    /// `actions[(j, z, q)][b]` is `e_{-j}` applied to basis vector `b` of
    /// component `(z, q)`.
    actions: HashMap<(u32, u32, u32), Vec<Column<F::Elem>>>,
}

impl<F: Field> CyclicModule<F> {
    /// The one-dimensional module on which every mode acts by zero.
    pub fn trivial(field: F, z_max: u32, q_max: u32) -> Self {
        let mut dims = BTreeMap::new();
        dims.insert((0, 0), 1);
        let mut labels = BTreeMap::new();
        labels.insert((0, 0), vec!["1".to_string()]);
        CyclicModule { field, z_max, q_max, dims, labels, actions: HashMap::new() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn window(&self) -> (u32, u32) {
        (self.z_max, self.q_max)
    }

    pub fn dim(&self, c: Bidegree) -> usize {
        self.dims.get(&c).copied().unwrap_or(0)
    }

    /// Components of positive dimension, ordered by `(z, q)`.
    pub fn components(&self) -> impl Iterator<Item = (Bidegree, usize)> + '_ {
        self.dims.iter().map(|(k, v)| (*k, *v))
    }

    pub fn labels(&self, c: Bidegree) -> &[String] {
        self.labels.get(&c).map_or(&[], Vec::as_slice)
    }

    /// `e_{-j}` on basis vector `b` of component `c`; empty when the image
    /// is zero or leaves the window.
    pub fn act(&self, j: u32, c: Bidegree, b: usize) -> &[(usize, F::Elem)] {
        self.actions.get(&(j, c.0, c.1)).map_or(&[], |cols| cols[b].as_slice())
    }

    /// `e_{-j}` on an arbitrary vector of component `c`.
    pub fn act_vector(&self, j: u32, c: Bidegree, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let target = (c.0 + 1, c.1 + j);
        let mut out = vec![f.zero(); self.dim(target)];
        for (b, x) in v.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (r, a) in self.act(j, c, b) {
                out[*r] = f.add(&out[*r], &f.mul(x, a));
            }
        }
        out
    }

    /// Graded character with all u-degrees zero.
    pub fn character(&self) -> GradedCharacter {
        let window = Truncation::finite(i64::from(self.q_max), i64::from(self.z_max), 0);
        GradedCharacter::from_entries(window, self.dims.iter().map(|((z, q), d)| ((i64::from(*z), 0, i64::from(*q)), *d as u64)))
    }

    /// Checks `e_{-i} e_{-j} = e_{-j} e_{-i}` on every basis vector whose
    /// images stay in the window.
    pub fn actions_commute(&self) -> bool {
        let f = &self.field;
        for (&(z, q), &d) in &self.dims {
            if z + 2 > self.z_max {
                continue;
            }
            for i in 0..=self.q_max - q {
                for j in i..=self.q_max - q - i {
                    for b in 0..d {
                        let mut e = vec![f.zero(); d];
                        e[b] = f.one();
                        let ij = self.act_vector(j, (z + 1, q + i), &self.act_vector(i, (z, q), &e));
                        let ji = self.act_vector(i, (z + 1, q + j), &self.act_vector(j, (z, q), &e));
                        if ij != ji {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Checks that every component is spanned by images of lower components
    /// (so everything is reachable from the cyclic vector).
    pub fn is_cyclic(&self) -> bool {
        for (&(z, q), &d) in &self.dims {
            if z == 0 {
                if (z, q) != (0, 0) || d != 1 {
                    return false;
                }
                continue;
            }
            let mut span = EchelonBasis::new(self.field.clone(), d);
            for j in 0..=q {
                let src = (z - 1, q - j);
                for b in 0..self.dim(src) {
                    let mut v = vec![self.field.zero(); d];
                    for (r, a) in self.act(j, src, b) {
                        v[*r] = a.clone();
                    }
                    span.insert(v);
                }
            }
            if !span.is_full() {
                return false;
            }
        }
        true
    }

    /// Same module seen in a window with a larger `q_max`; modes that leave
    /// the old window act by zero. Used for the modules over a single
    /// nilpotent generator.
    fn widen_q(mut self, q_max: u32) -> Self {
        self.q_max = self.q_max.max(q_max);
        self
    }
}

/// `W_{i,k}`: the quotient of `C[e_0, e_{-1}, ...]` by `e(z)^{k+1}` and the
/// low coefficients of `e(z)^l` for `l > i`, realized on its monomial normal
/// form basis.
pub fn principal_subspace<F: Field>(i: usize, k: usize, z_max: u32, q_max: u32, field: &F) -> Result<CyclicModule<F>, FusionError> {
    if k == 0 || i > k {
        return Err(FusionError::Config(format!("need k ≥ 1 and 0 ≤ i ≤ k, got i={i}, k={k}")));
    }
    let lambda = Partition::row(k).expect("k ≥ 1");
    let ic = InitialConditions { c: delta_vector(i + 1, k), d: Vec::new() };
    let p = build_presentation_a(&lambda, &ic).expect("consistent lengths");
    let engine = QuotientEngine::new(&p, z_max, 0, q_max).expect("valid presentation");
    let layout = engine.layout();
    let bases: BTreeMap<Bidegree, _> =
        engine.tridegrees().into_iter().map(|t| ((t.z, t.q), engine.basis(t, field))).collect();
    let mut dims = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (c, basis) in &bases {
        if basis.dimension() > 0 {
            dims.insert(*c, basis.dimension());
            labels.insert(*c, basis.standard.iter().map(|&s| basis.monomials[s].display(layout)).collect());
        }
    }
    let mut actions = HashMap::new();
    for (&(z, q), basis) in &bases {
        if basis.dimension() == 0 || z + 1 > z_max {
            continue;
        }
        for j in 0..=q_max - q {
            let Some(target) = bases.get(&(z + 1, q + j)) else { continue };
            if target.dimension() == 0 {
                continue;
            }
            let var = Monomial(vec![layout.var(0, j).expect("mode inside the window")]);
            let cols: Vec<Column<F::Elem>> = basis
                .standard
                .iter()
                .map(|&s| {
                    let product = basis.monomials[s].mul(&var);
                    let nf = target.normal_form_of(&product).expect("product has the target degree");
                    nf.into_iter().enumerate().filter(|(_, x)| !field.is_zero(x)).collect()
                })
                .collect();
            actions.insert((j, z, q), cols);
        }
    }
    Ok(CyclicModule { field: field.clone(), z_max, q_max, dims, labels, actions })
}

/// `C[e]/e^{k+1}` with `e = e_0`; all other modes act by zero.
pub fn nilpotent_module<F: Field>(k: usize, z_max: u32, q_max: u32, field: &F) -> Result<CyclicModule<F>, FusionError> {
    Ok(principal_subspace(k, k, z_max, 0, field)?.widen_q(q_max))
}

/// Field-independent description of a fusion factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ModuleSpec {
    Principal { i: usize, k: usize },
    Nilpotent { k: usize },
    Trivial,
}

impl ModuleSpec {
    pub fn build<F: Field>(&self, z_max: u32, q_max: u32, field: &F) -> Result<CyclicModule<F>, FusionError> {
        match *self {
            ModuleSpec::Principal { i, k } => principal_subspace(i, k, z_max, q_max, field),
            ModuleSpec::Nilpotent { k } => nilpotent_module(k, z_max, q_max, field),
            ModuleSpec::Trivial => Ok(CyclicModule::trivial(field.clone(), z_max, q_max)),
        }
    }
}
