use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::module::{Bidegree, CyclicModule, ModuleSpec};
use super::FusionError;
use crate::exactlin::{EchelonBasis, Field, PrimeField, PrimePair, Rationals};
use crate::gradedchar::{GradedCharacter, Truncation};
use crate::FieldMode;

type Slot = (Bidegree, usize);

/// Basis of one `(z, q)` component of a tensor product: one basis vector of
/// each factor, tuples in lexicographic order.
#[derive(Clone, Debug, Default)]
struct TensorComponent {
    tuples: Vec<Vec<Slot>>,
    index: HashMap<Vec<Slot>, usize>,
}

fn tensor_component<F: Field>(modules: &[CyclicModule<F>], z: u32, q: u32) -> TensorComponent {
    fn go<F: Field>(modules: &[CyclicModule<F>], z: u32, q: u32, prefix: &mut Vec<Slot>, out: &mut Vec<Vec<Slot>>) {
        let Some((first, rest)) = modules.split_first() else {
            if z == 0 && q == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        for ((cz, cq), d) in first.components() {
            if cz > z || cq > q {
                continue;
            }
            for b in 0..d {
                prefix.push(((cz, cq), b));
                go(rest, z - cz, q - cq, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut tuples = Vec::new();
    go(modules, z, q, &mut Vec::new(), &mut tuples);
    tuples.sort();
    let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    TensorComponent { tuples, index }
}

/// Fusion filtration on `M_1 ⊗ ... ⊗ M_n` for pairwise distinct evaluation
/// points. `F_l` is spanned by the products of `E_j(m) = Σ_t z_t^m e_{-j}^{(t)}`
/// with total `m`-weight at most `l`, applied to the tensor product of the
/// cyclic vectors.
pub struct FusionFiltration<F: Field> {
    field: F,
    modules: Vec<CyclicModule<F>>,
    /// `powers[m][t] = z_t^m`.
    powers: Vec<Vec<F::Elem>>,
    window: Truncation,
    components: BTreeMap<Bidegree, TensorComponent>,
    /// Vectors added at each level, per component.
    levels: BTreeMap<Bidegree, Vec<Vec<Vec<F::Elem>>>>,
}

impl<F: Field> FusionFiltration<F> {
    pub fn new(modules: Vec<CyclicModule<F>>, points: &[F::Elem], z_max: u32, q_max: u32, u_max: u32) -> Result<Self, FusionError> {
        let field = modules.first().ok_or_else(|| FusionError::Config("no factors".into()))?.field().clone();
        if points.len() != modules.len() {
            return Err(FusionError::Config(format!("{} points for {} factors", points.len(), modules.len())));
        }
        for (a, x) in points.iter().enumerate() {
            if points[..a].contains(x) {
                return Err(FusionError::CoincidentPoints);
            }
        }
        for m in &modules {
            let (mz, mq) = m.window();
            if mz < z_max || mq < q_max {
                return Err(FusionError::Config(format!("factor window (z ≤ {mz}, q ≤ {mq}) smaller than (z ≤ {z_max}, q ≤ {q_max})")));
            }
        }
        let n = modules.len();
        let mut powers = vec![vec![field.one(); n]];
        for m in 1..n {
            let next = powers[m - 1].iter().zip(points).map(|(p, x)| field.mul(p, x)).collect();
            powers.push(next);
        }
        let mut this = FusionFiltration {
            field,
            modules,
            powers,
            window: Truncation::finite(i64::from(q_max), i64::from(z_max), i64::from(u_max)),
            components: BTreeMap::new(),
            levels: BTreeMap::new(),
        };
        this.build(z_max, q_max, u_max);
        Ok(this)
    }

    fn build(&mut self, z_max: u32, q_max: u32, u_max: u32) {
        let n = self.modules.len();
        for z in 0..=z_max {
            for q in 0..=q_max {
                let comp = tensor_component(&self.modules, z, q);
                let dim = comp.tuples.len();
                if dim == 0 {
                    continue;
                }
                self.components.insert((z, q), comp);
                let mut levels: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new(); u_max as usize + 1];
                if z == 0 {
                    // only the tensor product of the cyclic vectors
                    let mut v = vec![self.field.zero(); dim];
                    v[0] = self.field.one();
                    levels[0].push(v);
                    self.levels.insert((z, q), levels);
                    continue;
                }
                let mut span = EchelonBasis::new(self.field.clone(), dim);
                'levels: for l in 0..=u_max as usize {
                    for j in 0..=q {
                        let src = (z - 1, q - j);
                        let Some(src_levels) = self.levels.get(&src) else { continue };
                        for m in 0..n.min(l + 1) {
                            for v in &src_levels[l - m] {
                                let w = self.apply(j, m, src, v);
                                if span.insert(w.clone()) {
                                    levels[l].push(w);
                                }
                                if span.is_full() {
                                    break 'levels;
                                }
                            }
                        }
                    }
                }
                self.levels.insert((z, q), levels);
            }
        }
    }

    /// `e_{-j}^{(t)} v` for every factor `t`.
    fn apply_each(&self, j: u32, src: Bidegree, v: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let target = (src.0 + 1, src.1 + j);
        let tc = &self.components[&target];
        let sc = &self.components[&src];
        let mut out = vec![vec![f.zero(); tc.tuples.len()]; self.modules.len()];
        for (pos, x) in v.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            let tuple = &sc.tuples[pos];
            for (t, module) in self.modules.iter().enumerate() {
                let (c, b) = tuple[t];
                for (r, a) in module.act(j, c, b) {
                    let mut image = tuple.clone();
                    image[t] = ((c.0 + 1, c.1 + j), *r);
                    let k = tc.index[&image];
                    out[t][k] = f.add(&out[t][k], &f.mul(x, a));
                }
            }
        }
        out
    }

    /// `E_j(m) v` for `v` in component `src`.
    pub fn apply(&self, j: u32, m: usize, src: Bidegree, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let each = self.apply_each(j, src, v);
        let mut out = vec![f.zero(); each[0].len()];
        for (t, w) in each.iter().enumerate() {
            let c = &self.powers[m][t];
            for (o, x) in out.iter_mut().zip(w) {
                if !f.is_zero(x) {
                    *o = f.add(o, &f.mul(c, x));
                }
            }
        }
        out
    }

    pub fn factors(&self) -> usize {
        self.modules.len()
    }

    pub fn dim(&self, c: Bidegree) -> usize {
        self.components.get(&c).map_or(0, |t| t.tuples.len())
    }

    /// The cyclic vector `v_1 ⊗ ... ⊗ v_n`.
    pub fn cyclic_vector(&self) -> Vec<F::Elem> {
        vec![self.field.one()]
    }

    /// `dim F_l` in component `c`; levels past the computed range count as
    /// the last computed one.
    pub fn filtered_dim(&self, c: Bidegree, l: usize) -> usize {
        self.levels.get(&c).map_or(0, |ls| ls.iter().take(l + 1).map(Vec::len).sum())
    }

    /// Span of `F_l` in component `c`.
    pub fn level_span(&self, c: Bidegree, l: usize) -> EchelonBasis<F> {
        let mut span = EchelonBasis::new(self.field.clone(), self.dim(c));
        if let Some(ls) = self.levels.get(&c) {
            for v in ls.iter().take(l + 1).flatten() {
                span.insert(v.clone());
            }
        }
        span
    }

    /// `F_0` straight from its definition: all products of `E_j(0)` of total
    /// degree `(z, q)` applied to the cyclic vector.
    pub fn f0_by_definition(&self, z: u32, q: u32) -> usize {
        let mut span = EchelonBasis::new(self.field.clone(), self.dim((z, q)));
        // weakly increasing mode sequences with the given sum
        fn words(len: u32, sum: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if len == 0 {
                if sum == 0 {
                    out.push(prefix.clone());
                }
                return;
            }
            for j in min..=sum {
                if j * len > sum {
                    break;
                }
                prefix.push(j);
                words(len - 1, sum - j, j, prefix, out);
                prefix.pop();
            }
        }
        let mut all = Vec::new();
        words(z, q, 0, &mut Vec::new(), &mut all);
        for word in all {
            let mut v = self.cyclic_vector();
            let (mut cz, mut cq) = (0, 0);
            for &j in &word {
                if self.dim((cz + 1, cq + j)) == 0 {
                    v.clear();
                    break;
                }
                v = self.apply(j, 0, (cz, cq), &v);
                cz += 1;
                cq += j;
            }
            if !v.is_empty() {
                span.insert(v);
            }
        }
        span.rank()
    }

    /// `Σ dim(F_l / F_{l-1}) z^z u^l q^q` on the window.
    pub fn character(&self) -> GradedCharacter {
        let mut entries = Vec::new();
        for (&(z, q), ls) in &self.levels {
            for (l, vs) in ls.iter().enumerate() {
                if !vs.is_empty() {
                    entries.push(((i64::from(z), l as i64, i64::from(q)), vs.len() as u64));
                }
            }
        }
        GradedCharacter::from_entries(self.window, entries)
    }

    /// Character of the plain tensor product on the `(z, q)` window.
    pub fn tensor_character(&self) -> GradedCharacter {
        let window = Truncation::finite(self.window.q_max, self.window.z_max.unwrap_or(0), 0);
        let entries = self.components.iter().map(|((z, q), t)| ((i64::from(*z), 0, i64::from(*q)), t.tuples.len() as u64));
        GradedCharacter::from_entries(window, entries)
    }
}

/// Field-independent fusion problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionSpec {
    pub modules: Vec<ModuleSpec>,
    pub points: Vec<i64>,
    pub z_max: u32,
    pub q_max: u32,
    pub u_max: u32,
}

/// `1, 0, 2, 3, ..., n-1`.
pub fn default_points(n: usize) -> Vec<i64> {
    let mut p: Vec<i64> = (0..n as i64).collect();
    if n >= 2 {
        p.swap(0, 1);
    }
    p
}

impl FusionSpec {
    pub fn new(modules: Vec<ModuleSpec>, z_max: u32, q_max: u32, u_max: u32) -> Self {
        let points = default_points(modules.len());
        FusionSpec { modules, points, z_max, q_max, u_max }
    }

    pub fn with_points(mut self, points: Vec<i64>) -> Self {
        self.points = points;
        self
    }

    pub fn window(&self) -> Truncation {
        Truncation::finite(i64::from(self.q_max), i64::from(self.z_max), i64::from(self.u_max))
    }

    pub fn filtration<F: Field>(&self, field: &F) -> Result<FusionFiltration<F>, FusionError> {
        if self.modules.is_empty() {
            return Err(FusionError::Config("no factors".into()));
        }
        for (a, x) in self.points.iter().enumerate() {
            if self.points[..a].contains(x) {
                return Err(FusionError::CoincidentPoints);
            }
        }
        let modules =
            self.modules.iter().map(|m| m.build(self.z_max, self.q_max, field)).collect::<Result<Vec<_>, _>>()?;
        let points: Vec<F::Elem> = self.points.iter().map(|x| field.from_bigint(&BigInt::from(*x))).collect();
        FusionFiltration::new(modules, &points, self.z_max, self.q_max, self.u_max)
    }
}

#[derive(Clone, Debug)]
pub struct FusionResult {
    pub character: GradedCharacter,
    pub tensor_character: GradedCharacter,
    /// Field of the accepted result.
    pub field: FieldMode,
    /// Set when the two primes disagreed (or collapsed the points) and the
    /// result was recomputed over the rationals.
    pub escalated: bool,
}

fn characters<F: Field>(spec: &FusionSpec, field: &F) -> Result<(GradedCharacter, GradedCharacter), FusionError> {
    let f = spec.filtration(field)?;
    Ok((f.character(), f.tensor_character()))
}

/// u-graded character of the fusion product. In two-prime mode the result is
/// accepted when both primes agree, otherwise recomputed exactly.
pub fn fusion_character(spec: &FusionSpec, mode: FieldMode) -> Result<FusionResult, FusionError> {
    if let FieldMode::TwoPrime { seed } = mode {
        let PrimePair { first, second } = PrimePair::from_seed(seed);
        let run = |p: u64| match characters(spec, &PrimeField::new(p)) {
            Err(FusionError::CoincidentPoints) => Ok(None),
            other => other.map(Some),
        };
        if let (Some(a), Some(b)) = (run(first)?, run(second)?) {
            if a.0 == b.0 {
                return Ok(FusionResult { character: a.0, tensor_character: a.1, field: mode, escalated: false });
            }
        }
        let (character, tensor_character) = characters(spec, &Rationals)?;
        return Ok(FusionResult { character, tensor_character, field: FieldMode::Exact, escalated: true });
    }
    let (character, tensor_character) = characters(spec, &Rationals)?;
    Ok(FusionResult { character, tensor_character, field: mode, escalated: false })
}

/// For `C[e]/e^{k1+1} * C[e]/e^{k2+1}` at points `(1, 0)`: whether
/// `E(0)^{k1+k2-2r+1} E(1)^r` maps the cyclic vector into `F_{r-1}`, for
/// `r = 0..=min(k1, k2)`.
pub fn nilpotent_fusion_relations<F: Field>(k1: usize, k2: usize, field: &F) -> Result<Vec<(usize, bool)>, FusionError> {
    let total = (k1 + k2 + 1) as u32;
    let spec = FusionSpec::new(vec![ModuleSpec::Nilpotent { k: k1 }, ModuleSpec::Nilpotent { k: k2 }], total, 0, total);
    let filt = spec.filtration(field)?;
    let mut out = Vec::new();
    for r in 0..=k1.min(k2) {
        let mut v = filt.cyclic_vector();
        let mut z = 0;
        let mut ok = true;
        for m in std::iter::repeat(1).take(r).chain(std::iter::repeat(0).take(k1 + k2 - 2 * r + 1)) {
            if filt.dim((z + 1, 0)) == 0 {
                // the image lands in a zero component
                v.clear();
                break;
            }
            v = filt.apply(0, m, (z, 0), &v);
            z += 1;
        }
        if !v.is_empty() && v.iter().any(|x| !field.is_zero(x)) {
            ok = r > 0 && filt.level_span((z, 0), r - 1).contains(&v);
        }
        out.push((r, ok));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(i: usize, k: usize) -> ModuleSpec {
        ModuleSpec::Principal { i, k }
    }

    #[test]
    fn trivial_factor_is_neutral() {
        let spec = FusionSpec::new(vec![w(1, 1), ModuleSpec::Trivial], 3, 4, 2);
        let f = spec.filtration(&Rationals).unwrap();
        let ch = f.character();
        assert!(ch.iter().all(|((_, u, _), _)| u == 0));
        let single = w(1, 1).build(3, 4, &Rationals).unwrap().character();
        assert!(ch.restrict(&Truncation::finite(4, 3, 0)).compare(&single.restrict(&Truncation::finite(4, 3, 0))).verdict == crate::Verdict::Equal);
    }

    #[test]
    fn u_sum_recovers_tensor_product() {
        let spec = FusionSpec::new(vec![w(1, 1), w(0, 1)], 3, 5, 6);
        let f = spec.filtration(&Rationals).unwrap();
        let summed = f.character().sum_over_u();
        for ((z, _, q), d) in f.tensor_character().iter() {
            assert_eq!(summed.get(&(z, q)).copied().unwrap_or(0), d, "z={z} q={q}");
        }
    }

    #[test]
    fn f0_two_ways() {
        let spec = FusionSpec::new(vec![w(1, 1), w(1, 2)], 3, 4, 3);
        let f = spec.filtration(&PrimeField::new(1_000_003)).unwrap();
        for z in 0..=3 {
            for q in 0..=4 {
                assert_eq!(f.filtered_dim((z, q), 0), f.f0_by_definition(z, q), "z={z} q={q}");
            }
        }
    }

    #[test]
    fn coincident_points_rejected() {
        let spec = FusionSpec::new(vec![w(1, 1), w(1, 1)], 2, 2, 2).with_points(vec![4, 4]);
        assert!(matches!(spec.filtration(&Rationals), Err(FusionError::CoincidentPoints)));
    }

    #[test]
    fn nilpotent_relations_hold() {
        for (k1, k2) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
            let rel = nilpotent_fusion_relations(k1, k2, &Rationals).unwrap();
            assert!(rel.iter().all(|(_, ok)| *ok), "k1={k1} k2={k2}: {rel:?}");
        }
    }

    #[test]
    fn default_points_start_with_one_zero() {
        assert_eq!(default_points(2), vec![1, 0]);
        assert_eq!(default_points(3), vec![1, 0, 2]);
    }
}
