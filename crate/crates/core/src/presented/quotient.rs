use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::monomial::{enumerate_monomials, Monomial, Tridegree, VariableLayout};
use super::presentation::Presentation;
use super::relations::{relation_coefficients, RelationCoefficient};
use super::PresentationError;
use crate::exactlin::{certified_rank, Field, IntegerMatrix, RankEscalation, SparseMatrix};
use crate::gradedchar::{GradedCharacter, Truncation};
use crate::FieldMode;

/// Dimension of one graded component and how it was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDimension {
    pub tridegree: Tridegree,
    pub monomials: usize,
    pub relation_rows: usize,
    pub rank: usize,
    pub dimension: usize,
    pub escalation: Option<RankEscalation>,
}

/// Character together with the components whose prime ranks disagreed.
#[derive(Clone, Debug)]
pub struct CharacterComputation {
    pub character: GradedCharacter,
    pub escalations: Vec<(Tridegree, RankEscalation)>,
}

/// Monomial basis of the quotient in one component: the monomials that are
/// not pivots of the reduced relation matrix, with the rewriting rule for the
/// pivots.
#[derive(Clone, Debug)]
pub struct ComponentBasis<F: Field> {
    pub tridegree: Tridegree,
    pub monomials: Vec<Monomial>,
    /// Indices (into `monomials`) of the basis monomials, ascending.
    pub standard: Vec<usize>,
    field: F,
    /// `position[i]` is the coordinate of monomial `i` if it is standard.
    position: Vec<Option<usize>>,
    /// For a pivot monomial, its row of the reduced echelon form.
    pivot_row: Vec<Option<usize>>,
    echelon: SparseMatrix<F>,
    index: HashMap<Monomial, usize>,
}

impl<F: Field> ComponentBasis<F> {
    pub fn dimension(&self) -> usize {
        self.standard.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates, in the standard basis, of `Σ x_i m_i`.
    pub fn normal_form(&self, terms: &[(usize, F::Elem)]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.standard.len()];
        for (i, x) in terms {
            if f.is_zero(x) {
                continue;
            }
            if let Some(pos) = self.position[*i] {
                out[pos] = f.add(&out[pos], x);
                continue;
            }
            let row = self.pivot_row[*i].expect("monomial is either standard or a pivot");
            for (c, r) in self.echelon.row(row) {
                if *c == *i {
                    continue;
                }
                let pos = self.position[*c].expect("reduced rows meet other pivots only at zero");
                out[pos] = f.sub_mul(&out[pos], x, r);
            }
        }
        out
    }

    /// Coordinates of a single monomial; `None` if it is not of this degree.
    pub fn normal_form_of(&self, m: &Monomial) -> Option<Vec<F::Elem>> {
        let i = self.index_of(m)?;
        Some(self.normal_form(&[(i, self.field.one())]))
    }
}

/// Monomials and relation coefficients of a presentation inside a window,
/// shared by all component computations.
#[derive(Clone, Debug)]
pub struct QuotientEngine {
    presentation: Presentation,
    layout: VariableLayout,
    z_max: u32,
    u_max: u32,
    monomials: HashMap<Tridegree, Vec<Monomial>>,
    index: HashMap<Tridegree, HashMap<Monomial, usize>>,
    relations: Vec<RelationCoefficient>,
}

impl QuotientEngine {
    pub fn new(p: &Presentation, z_max: u32, u_max: u32, q_max: u32) -> Result<Self, PresentationError> {
        p.validate()?;
        let layout = VariableLayout::new(p, q_max);
        let monomials = enumerate_monomials(&layout, z_max, u_max);
        let index = monomials
            .iter()
            .map(|(t, list)| (*t, list.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()))
            .collect();
        let relations = relation_coefficients(p, &layout, z_max, u_max);
        Ok(QuotientEngine { presentation: p.clone(), layout, z_max, u_max, monomials, index, relations })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }

    pub fn relations(&self) -> &[RelationCoefficient] {
        &self.relations
    }

    fn in_window(&self, t: Tridegree) -> bool {
        t.z <= self.z_max && t.u <= self.u_max && t.q <= self.layout.q_max()
    }

    /// Tridegrees with at least one monomial, sorted.
    pub fn tridegrees(&self) -> Vec<Tridegree> {
        let mut ts: Vec<Tridegree> = self.monomials.keys().copied().collect();
        ts.sort_unstable();
        ts
    }

    /// Column monomials of a component, in ascending grevlex order.
    pub fn monomials(&self, t: Tridegree) -> &[Monomial] {
        self.monomials.get(&t).map_or(&[], Vec::as_slice)
    }

    pub fn monomial_index(&self, t: Tridegree, m: &Monomial) -> Option<usize> {
        self.index.get(&t)?.get(m).copied()
    }

    /// Rows `g · M` for every relation coefficient `g` and monomial `M` with
    /// `deg g + deg M = t`.
    pub fn relation_matrix(&self, t: Tridegree) -> IntegerMatrix {
        assert!(self.in_window(t), "component {t} outside the engine window");
        let cols = self.monomials(t);
        let mut m = IntegerMatrix::new(cols.len());
        if cols.is_empty() {
            return m;
        }
        let index = &self.index[&t];
        for g in &self.relations {
            let Some(rest) = t.checked_sub(&g.degree) else { continue };
            for mono in self.monomials(rest) {
                let row: Vec<(usize, BigInt)> =
                    g.terms.iter().map(|(gm, c)| (index[&gm.mul(mono)], c.clone())).collect();
                m.push_row(row);
            }
        }
        m
    }

    pub fn dimension(&self, t: Tridegree, mode: FieldMode) -> ComponentDimension {
        let m = self.relation_matrix(t);
        let cert = certified_rank(&m, mode.rank_mode());
        ComponentDimension {
            tridegree: t,
            monomials: m.cols,
            relation_rows: m.rows.len(),
            rank: cert.rank,
            dimension: m.cols - cert.rank,
            escalation: cert.escalation,
        }
    }

    /// Every component of the window, computed in parallel.
    pub fn character(&self, mode: FieldMode) -> CharacterComputation {
        let window = Truncation::finite(
            i64::from(self.layout.q_max()),
            i64::from(self.z_max),
            i64::from(self.u_max),
        );
        let dims: Vec<ComponentDimension> =
            self.tridegrees().into_par_iter().map(|t| self.dimension(t, mode)).collect();
        let mut character = GradedCharacter::zero(window);
        let mut escalations = Vec::new();
        for d in dims {
            character.add_term(d.tridegree.exponents(), d.dimension as u64);
            if let Some(e) = d.escalation {
                escalations.push((d.tridegree, e));
            }
        }
        CharacterComputation { character, escalations }
    }

    pub fn basis<F: Field>(&self, t: Tridegree, field: &F) -> ComponentBasis<F> {
        let m = self.relation_matrix(t).to_field(field);
        let (echelon, pivots) = m.row_reduce();
        let monomials = self.monomials(t).to_vec();
        let mut pivot_row = vec![None; monomials.len()];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_row[c] = Some(r);
        }
        let standard: Vec<usize> = (0..monomials.len()).filter(|&i| pivot_row[i].is_none()).collect();
        let mut position = vec![None; monomials.len()];
        for (pos, &i) in standard.iter().enumerate() {
            position[i] = Some(pos);
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        ComponentBasis { tridegree: t, monomials, standard, field: field.clone(), position, pivot_row, echelon, index }
    }
}

/// Default u-bound: the largest u reachable with `z_max` generators.
fn u_bound(p: &Presentation, z_max: u32) -> u32 {
    p.max_u_degree() * z_max
}

/// The relation matrix of one component over `field`; columns are the
/// monomials of degree `t` in ascending grevlex order.
pub fn relation_generators<F: Field>(p: &Presentation, t: Tridegree, field: &F) -> Result<SparseMatrix<F>, PresentationError> {
    let engine = QuotientEngine::new(p, t.z, t.u, t.q)?;
    Ok(engine.relation_matrix(t).to_field(field))
}

pub fn component_dimension(p: &Presentation, t: Tridegree, mode: FieldMode) -> Result<ComponentDimension, PresentationError> {
    let engine = QuotientEngine::new(p, t.z, t.u, t.q)?;
    Ok(engine.dimension(t, mode))
}

/// Character on `window`; `z_max` is required, `u_max` defaults to the
/// largest reachable value.
pub fn graded_character(p: &Presentation, window: &Truncation, mode: FieldMode) -> Result<CharacterComputation, PresentationError> {
    let z_max = window.z_max.ok_or(PresentationError::UnboundedWindow)?;
    if window.q_max < 0 || z_max < 0 {
        return Ok(CharacterComputation { character: GradedCharacter::zero(*window), escalations: Vec::new() });
    }
    let z_max = z_max as u32;
    let u_max = match window.u_max {
        Some(u) if u < 0 => {
            return Ok(CharacterComputation { character: GradedCharacter::zero(*window), escalations: Vec::new() })
        }
        Some(u) => (u as u32).min(u_bound(p, z_max)),
        None => u_bound(p, z_max),
    };
    let engine = QuotientEngine::new(p, z_max, u_max, window.q_max as u32)?;
    let mut out = engine.character(mode);
    out.character = GradedCharacter::from_entries(*window, out.character.iter());
    Ok(out)
}

pub fn normal_form_basis<F: Field>(p: &Presentation, t: Tridegree, field: &F) -> Result<ComponentBasis<F>, PresentationError> {
    let engine = QuotientEngine::new(p, t.z, t.u, t.q)?;
    Ok(engine.basis(t, field))
}
