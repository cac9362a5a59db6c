use ferchar::fermionic::character_w_fusion;
use ferchar::fusion::{fusion_character, nilpotent_fusion_relations, FusionSpec, ModuleSpec};
use ferchar::presented::{build_presentation_a, graded_character, InitialConditions, Partition};
use ferchar::{FieldMode, Truncation, Verdict};

fn spec(i1: usize, k1: usize, i2: usize, k2: usize, z: u32, q: u32, u: u32) -> FusionSpec {
    FusionSpec::new(vec![ModuleSpec::Principal { i: i1, k: k1 }, ModuleSpec::Principal { i: i2, k: k2 }], z, q, u)
}

#[test]
fn fusion_matches_fermionic_sum_small() {
    for (i1, k1, i2, k2) in [(0, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 1), (0, 1, 1, 2), (0, 1, 2, 2), (0, 2, 0, 2)] {
        let s = spec(i1, k1, i2, k2, 4, 5, 3);
        let fused = fusion_character(&s, FieldMode::two_prime_default()).unwrap();
        let formula = character_w_fusion(i1, k1, i2, k2, s.window()).unwrap();
        let cmp = fused.character.compare(&formula);
        assert_eq!(cmp.verdict, Verdict::Equal, "({i1},{k1},{i2},{k2}): {:?}", cmp.first_diff);
    }
}

#[test]
fn sum_overcounts_when_both_weights_are_positive_at_level_one() {
    // W_{1,1} * W_{1,2}: e_0 ⊗ e_0 spans degree (2, 0), the sum has 2 there
    let s = spec(1, 1, 1, 2, 3, 3, 3);
    let fused = fusion_character(&s, FieldMode::Exact).unwrap();
    let formula = character_w_fusion(1, 1, 1, 2, s.window()).unwrap();
    let total_at = |c: &ferchar::GradedCharacter| (0..=3).map(|u| c.get((2, u, 0))).sum::<u64>();
    assert_eq!(total_at(&fused.tensor_character), 1);
    assert_eq!(total_at(&fused.character), 1);
    assert_eq!(total_at(&formula), 2);
    assert_eq!(fused.character.compare(&formula).verdict, Verdict::LessOrEqual);
}

#[test]
fn fusion_algebra_bounds_the_filtration() {
    for (i1, k1, i2, k2) in [(1, 1, 0, 2), (2, 2, 1, 2)] {
        let s = spec(i1, k1, i2, k2, 3, 4, 3);
        let fused = fusion_character(&s, FieldMode::two_prime_default()).unwrap().character;
        let (lambda, ic) = ferchar::fermionic::FusionPair::new(i1, k1, i2, k2).unwrap().algebra_data();
        let algebra = graded_character(&build_presentation_a(&lambda, &ic).unwrap(), &s.window(), FieldMode::Exact).unwrap().character;
        assert_ne!(fused.compare(&algebra).verdict, Verdict::Mismatch, "({i1},{k1},{i2},{k2})");
    }
}

#[test]
fn u_sum_is_the_tensor_character() {
    let s = spec(1, 2, 0, 2, 4, 4, 4);
    let r = fusion_character(&s, FieldMode::two_prime_default()).unwrap();
    assert_eq!(r.character.sum_over_u(), r.tensor_character.sum_over_u());
}

#[test]
fn characters_do_not_depend_on_the_points() {
    let base = spec(1, 2, 1, 1, 3, 4, 3);
    let a = fusion_character(&base, FieldMode::Exact).unwrap().character;
    for points in [vec![0, 1], vec![5, -2], vec![-7, 11]] {
        let b = fusion_character(&base.clone().with_points(points.clone()), FieldMode::Exact).unwrap().character;
        assert_eq!(a, b, "{points:?}");
    }
}

#[test]
fn exact_and_two_prime_agree() {
    let s = spec(1, 2, 2, 2, 3, 3, 3);
    let a = fusion_character(&s, FieldMode::Exact).unwrap().character;
    let b = fusion_character(&s, FieldMode::TwoPrime { seed: 17 }).unwrap().character;
    assert_eq!(a, b);
}

#[test]
fn level_one_vacuum_squared_is_the_level_two_vacuum_shape() {
    // W_{0,1} * W_{0,1} against A_{(2,0)} with c = δ^{(1)}, d = δ^{(1)}
    let s = spec(0, 1, 0, 1, 4, 5, 4);
    let fused = fusion_character(&s, FieldMode::Exact).unwrap().character;
    let lambda = Partition::new(vec![2, 0]).unwrap();
    let ic = InitialConditions { c: vec![1, 0], d: vec![1] };
    let algebra = graded_character(&build_presentation_a(&lambda, &ic).unwrap(), &Truncation::finite(5, 4, 4), FieldMode::Exact).unwrap();
    assert_eq!(fused, algebra.character);
}

#[test]
fn nilpotent_fusion_relations_hold() {
    for (k1, k2) in [(1, 1), (2, 1), (2, 3)] {
        for (r, ok) in nilpotent_fusion_relations(k1, k2, &ferchar::exactlin::Rationals).unwrap() {
            assert!(ok, "k1={k1} k2={k2} r={r}");
        }
    }
}
