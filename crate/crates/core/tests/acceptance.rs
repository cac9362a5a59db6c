//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 4 is red. For 7 of its 19 weight pairs the fermionic fusion sum
//! (and the algebra with the same character) is strictly larger than the
//! fusion product, which has the character of the plain tensor product.
//! Criterion 6 is red for one of those pairs, whose limit inherits the extra
//! states. The run pins exactly these sets, so it still fails if anything
//! else changes.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use ferchar::fermionic::{
    approximant, character_a_lambda_cd, character_l_fusion, character_w_fusion, gram_matrix_for_partition, FusionPair,
};
use ferchar::fusion::{fusion_character, FusionSpec, ModuleSpec};
use ferchar::gradedchar::{inv_pochhammer, PochhammerOrder};
use ferchar::presented::{
    build_presentation_a, build_presentation_quadratic, delta_vector, graded_character, InitialConditions, Partition,
    Presentation,
};
use ferchar::verify::{Case, WindowSpec};
use ferchar::{FieldMode, GradedCharacter, Reweight, Truncation, Verdict};
use rayon::prelude::*;

const TWO_PRIME: FieldMode = FieldMode::TwoPrime { seed: FieldMode::DEFAULT_SEED };

/// Weight pairs of criterion 4 where the fusion product is strictly smaller.
const KNOWN_RED_4: &[(usize, usize, usize, usize)] =
    &[(1, 1, 0, 2), (1, 1, 1, 2), (0, 2, 2, 2), (1, 2, 1, 2), (1, 2, 2, 2), (2, 2, 0, 2), (2, 2, 1, 2)];
/// Weight pairs of criterion 6 whose q^0 slice is too large.
const KNOWN_RED_6: &[(usize, usize, usize, usize)] = &[(1, 1, 1, 2)];

struct Outcome {
    pass: bool,
    detail: String,
    /// First word of each failure, for criteria with a pinned red set.
    failures: BTreeSet<String>,
}

impl Outcome {
    fn from_failures(total: usize, failures: Vec<String>) -> Self {
        let pass = failures.is_empty();
        let detail = if pass {
            format!("{total} cases")
        } else {
            format!("{} of {total} cases differ: {}", failures.len(), failures.join("; "))
        };
        let failures = failures.iter().map(|f| f.split(' ').next().unwrap_or_default().to_string()).collect();
        Outcome { pass, detail, failures }
    }
}

fn win(q: i64, z: i64, u: i64) -> WindowSpec {
    WindowSpec { q, z: Some(z), u: Some(u) }
}

fn mf_partitions() -> Vec<Partition> {
    [vec![1, 1], vec![2, 1], vec![2, 2], vec![3, 1], vec![4, 2], vec![3, 2, 1]]
        .into_iter()
        .map(|p| Partition::new(p).unwrap())
        .collect()
}

/// `c`, `d` over the zero vector and every unit vector.
fn gmf_conditions(lambda: &Partition) -> Vec<InitialConditions> {
    let mut out = Vec::new();
    for ci in 0..=lambda.first() {
        for di in 0..=lambda.s() {
            out.push(InitialConditions { c: delta_vector(ci, lambda.first()), d: delta_vector(di, lambda.s()) });
        }
    }
    out
}

fn lattice_cases() -> Vec<(Vec<Vec<i64>>, Vec<i64>)> {
    let grams = vec![
        vec![vec![2]],
        vec![vec![2, 0], vec![0, 2]],
        vec![vec![2, 1], vec![1, 2]],
        gram_matrix_for_partition(&Partition::new(vec![2, 1]).unwrap()),
    ];
    let mut out = Vec::new();
    for g in grams {
        let n = g.len();
        out.push((g.clone(), vec![0; n]));
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = 1;
            out.push((g.clone(), v));
        }
    }
    out
}

fn fusion_pairs() -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for (k1, k2) in [(1, 1), (1, 2), (2, 2)] {
        for i1 in 0..=k1 {
            for i2 in 0..=k2 {
                out.push((i1, k1, i2, k2));
            }
        }
    }
    out
}

fn label4((i1, k1, i2, k2): (usize, usize, usize, usize)) -> String {
    format!("({i1},{k1};{i2},{k2})")
}

fn failing_reports(case: &Case, window: WindowSpec, mode: FieldMode) -> Option<String> {
    let reports = case.run(window, mode).unwrap_or_else(|e| panic!("{case}: {e}"));
    let bad: Vec<String> = reports.iter().filter(|r| !r.passes()).map(|r| r.summary_line()).collect();
    (!bad.is_empty()).then(|| bad.join(" | "))
}

fn criterion_1() -> Outcome {
    let fails: Vec<String> = (1..=3)
        .into_par_iter()
        .filter_map(|k| failing_reports(&Case::Gordon { k }, WindowSpec { q: 10, z: Some(6), u: None }, TWO_PRIME))
        .collect();
    Outcome::from_failures(3, fails)
}

fn criterion_2() -> Outcome {
    let parts = mf_partitions();
    let fails: Vec<String> =
        parts.par_iter().filter_map(|l| failing_reports(&Case::Mf { lambda: l.clone() }, win(6, 5, 3), TWO_PRIME)).collect();
    Outcome::from_failures(parts.len(), fails)
}

fn criterion_3() -> Outcome {
    let cases: Vec<Case> = mf_partitions()
        .into_iter()
        .flat_map(|l| gmf_conditions(&l).into_iter().map(move |ic| Case::Gmf { lambda: l.clone(), ic }))
        .collect();
    let fails: Vec<String> = cases.par_iter().filter_map(|c| failing_reports(c, win(5, 5, 3), TWO_PRIME)).collect();
    Outcome::from_failures(cases.len(), fails)
}

/// Product of the single-module fermionic characters, summed over u, against
/// the fermionic fusion sum summed over u. Independent of the fusion code.
fn formula_exceeds_tensor((i1, k1, i2, k2): (usize, usize, usize, usize)) -> bool {
    let t = Truncation::finite(6, 4, 0);
    let single = |i: usize, k: usize| {
        let ic = InitialConditions { c: delta_vector(i + 1, k), d: Vec::new() };
        character_a_lambda_cd(&Partition::row(k).unwrap(), &ic, t).unwrap()
    };
    let tensor = single(i1, k1).mul(&single(i2, k2)).restrict(&t);
    let summed = character_w_fusion(i1, k1, i2, k2, Truncation::finite(6, 4, 8)).unwrap().sum_over_u();
    let mut strictly = false;
    for ((z, q), d) in summed {
        let tq = tensor.get((z, 0, q));
        assert!(d >= tq, "fermionic fusion sum below tensor product at z={z} q={q}");
        strictly |= d > tq;
    }
    strictly
}

fn criterion_4() -> Outcome {
    let pairs = fusion_pairs();
    let fails: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i1, k1, i2, k2)| {
            failing_reports(&Case::Fusion { i1, k1, i2, k2, points: None }, win(6, 4, 3), TWO_PRIME)
                .map(|why| format!("{} {why}", label4((i1, k1, i2, k2))))
        })
        .collect();
    let mut out = Outcome::from_failures(pairs.len(), fails);
    let exceed: Vec<String> = pairs.iter().filter(|p| formula_exceeds_tensor(**p)).map(|p| label4(*p)).collect();
    out.detail.push_str(&format!(
        ". Fermionic fusion sum strictly exceeds the tensor product character (fusion-independent check) for: {}",
        exceed.join(", ")
    ));
    out
}

fn criterion_5() -> Outcome {
    let cases = lattice_cases();
    let fails: Vec<String> = cases
        .par_iter()
        .filter_map(|(g, v)| failing_reports(&Case::Lattice { gram: g.clone(), shift: v.clone() }, WindowSpec { q: 6, z: Some(6), u: None }, TWO_PRIME))
        .collect();
    Outcome::from_failures(cases.len(), fails)
}

fn criterion_6() -> Outcome {
    let pairs: Vec<_> = fusion_pairs().into_iter().filter(|p| (p.1, p.3) != (2, 2)).collect();
    let fails: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i1, k1, i2, k2)| {
            let label = label4((i1, k1, i2, k2));
            // one step past N = 6 is needed to see that N = 6 is already stable
            let l = match character_l_fusion(i1, k1, i2, k2, 5, 7) {
                Ok(l) => l,
                Err(e) => return Some(format!("{label} {e}")),
            };
            if l.stabilized_at > 6 {
                return Some(format!("{label} first stable at N={}", l.stabilized_at));
            }
            let pair = FusionPair::new(i1, k1, i2, k2).unwrap();
            if approximant(&pair, l.stabilized_at + 2, 5).unwrap() != l.character {
                return Some(format!("{label} changes again at N={}", l.stabilized_at + 2));
            }
            let weight = -((i1 + i2) as i64);
            let vacuum: u64 = (0..=4).map(|u| l.character.get((weight, u, 0))).sum();
            let below = l.character.iter().any(|((z, _, q), _)| q == 0 && z < weight);
            if vacuum != 1 || below {
                // the q^0 slice is the fusion of two sl2 modules of dimensions i1+1, i2+1
                let top: u64 = l.character.iter().filter(|((_, _, q), _)| *q == 0).map(|(_, d)| d).sum();
                return Some(format!(
                    "{label} q^0 slice has {vacuum} at z={weight} (lower weights present: {below}); q^0 total {top}, expected {}",
                    (i1 + 1) * (i2 + 1)
                ));
            }
            None
        })
        .collect();
    Outcome::from_failures(pairs.len(), fails)
}

fn criterion_7() -> Outcome {
    let mut fails = Vec::new();
    let mut literal = Vec::new();
    let pairs: Vec<_> = fusion_pairs().into_iter().filter(|p| (p.1, p.3) == (1, 1)).collect();
    for &(i1, k1, i2, k2) in &pairs {
        let label = label4((i1, k1, i2, k2));
        let l = character_l_fusion(i1, k1, i2, k2, 5, 7).unwrap();
        let rc = &l.reconstructed.comparison;
        if rc.verdict != Verdict::Equal {
            fails.push(format!("{label} reconstructed {} {:?}", rc.verdict, rc.first_diff));
        }
        literal.push(format!(
            "{label} {} ({} of {} terms non-integral)",
            l.literal.comparison.verdict,
            l.literal.nonintegral_terms,
            l.literal.nonintegral_terms + l.literal.integral_terms
        ));
    }
    let mut out = Outcome::from_failures(pairs.len(), fails);
    out.detail.push_str(&format!(". Integer s-lattice reading: {}", literal.join(", ")));
    out
}

fn brute(p: &Presentation, w: WindowSpec, mode: FieldMode) -> GradedCharacter {
    graded_character(p, &w.into(), mode).unwrap().character
}

fn criterion_8() -> Outcome {
    let mut jobs: Vec<(String, Presentation, WindowSpec)> = Vec::new();
    for k in 1..=3 {
        let l = Partition::row(k).unwrap();
        jobs.push((format!("gordon k={k}"), build_presentation_a(&l, &InitialConditions::zero(&l)).unwrap(), win(4, 6, 0)));
    }
    for l in mf_partitions() {
        for ic in gmf_conditions(&l) {
            jobs.push((format!("A{l} c={:?} d={:?}", ic.c, ic.d), build_presentation_a(&l, &ic).unwrap(), win(4, 5, 3)));
        }
    }
    for (g, v) in lattice_cases() {
        jobs.push((format!("lattice {g:?} {v:?}"), build_presentation_quadratic(&g, &v).unwrap(), WindowSpec { q: 4, z: Some(6), u: None }));
    }
    for p in fusion_pairs() {
        let (l, ic) = FusionPair::new(p.0, p.1, p.2, p.3).unwrap().algebra_data();
        jobs.push((format!("fusion algebra {}", label4(p)), build_presentation_a(&l, &ic).unwrap(), win(4, 4, 3)));
    }
    let mut fails: Vec<String> = jobs
        .par_iter()
        .filter_map(|(name, p, w)| (brute(p, *w, FieldMode::Exact) != brute(p, *w, TWO_PRIME)).then(|| name.clone()))
        .collect();
    let fusion: Vec<String> = fusion_pairs()
        .par_iter()
        .filter_map(|&(i1, k1, i2, k2)| {
            let spec = FusionSpec::new(vec![ModuleSpec::Principal { i: i1, k: k1 }, ModuleSpec::Principal { i: i2, k: k2 }], 4, 4, 3);
            let exact = fusion_character(&spec, FieldMode::Exact).unwrap().character;
            let fast = fusion_character(&spec, TWO_PRIME).unwrap().character;
            (exact != fast).then(|| format!("fusion filtration {}", label4((i1, k1, i2, k2))))
        })
        .collect();
    fails.extend(fusion);
    Outcome::from_failures(jobs.len() + fusion_pairs().len(), fails)
}

fn partitions_at_most(m: u64, parts: u64, largest: u64) -> u64 {
    if m == 0 {
        return 1;
    }
    if parts == 0 {
        return 0;
    }
    (1..=largest.min(m)).map(|p| partitions_at_most(m - p, parts - 1, p)).sum()
}

fn criterion_9() -> Outcome {
    let mut fails = Vec::new();
    // u-sum of the filtration against the tensor product, and point independence
    let per_pair: Vec<Vec<String>> = fusion_pairs()
        .par_iter()
        .map(|&(i1, k1, i2, k2)| {
            let mut f = Vec::new();
            let label = label4((i1, k1, i2, k2));
            let spec = FusionSpec::new(vec![ModuleSpec::Principal { i: i1, k: k1 }, ModuleSpec::Principal { i: i2, k: k2 }], 4, 6, 4);
            let a = fusion_character(&spec, TWO_PRIME).unwrap();
            let summed = a.character.sum_over_u();
            for ((z, _, q), d) in a.tensor_character.iter() {
                if summed.get(&(z, q)).copied().unwrap_or(0) != d {
                    f.push(format!("{label} u-sum differs at z={z} q={q}"));
                    break;
                }
            }
            let b = fusion_character(&spec.clone().with_points(vec![3, -1]), TWO_PRIME).unwrap();
            if b.character != a.character {
                f.push(format!("{label} depends on the points"));
            }
            f
        })
        .collect();
    fails.extend(per_pair.into_iter().flatten());
    // reweight composition
    let base = ferchar::fermionic::gordon_character(2, Truncation::new(12, Some(6), None)).unwrap();
    let ws = [
        Reweight::new(1, 0, 0, 0),
        Reweight::new(2, -1, 0, 3),
        Reweight::new(1, 2, -1, 0),
        Reweight::new(2, -3, -2, 5),
        Reweight::new(1, 0, 1, -2),
    ];
    for a in &ws {
        for b in &ws {
            let two_step = base.reweight(a).reweight(b);
            let one_step = base.reweight(&a.then(b));
            if two_step.compare(&one_step).verdict != Verdict::Equal {
                fails.push(format!("reweight composition {a:?} then {b:?}"));
            }
        }
    }
    // 1/(q)_n counts partitions into at most n parts
    for n in 0..=5u64 {
        let e = inv_pochhammer(PochhammerOrder::Finite(n), 12).expansion;
        for m in 0..=12u64 {
            if e[m as usize] != partitions_at_most(m, n, m) {
                fails.push(format!("1/(q)_{n} at q^{m}"));
            }
        }
    }
    Outcome::from_failures(fusion_pairs().len() * 2 + ws.len() * ws.len() + 6 * 13, fails)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Gordon sums, k = 1..3, q <= 10, z <= 6", criterion_1),
        ("partition algebras vs fermionic sums, q <= 6, z <= 5, u <= 3", criterion_2),
        ("initial conditions c, d, q <= 5, z <= 5, u <= 3", criterion_3),
        ("fusion filtration = fusion sum = fusion algebra, q <= 6, z <= 4, u <= 3", criterion_4),
        ("quadratic presentations vs lattice sums, q <= 6, z <= 6", criterion_5),
        ("limit stabilization by N <= 6, q <= 5", criterion_6),
        ("P-sum in s variables vs stabilized limit, q <= 5", criterion_7),
        ("exact rationals vs two primes, q <= 4", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut unexpected = false;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {n} {}: {title} ({:.1}s) {}", if outcome.pass { "PASS" } else { "FAIL" }, secs, outcome.detail);
        let pinned: BTreeSet<String> = match n {
            4 => KNOWN_RED_4,
            6 => KNOWN_RED_6,
            _ => &[],
        }
        .iter()
        .map(|p| label4(*p))
        .collect();
        if outcome.failures != pinned {
            println!("criterion {n}: failing set {:?} differs from the known set {:?}", outcome.failures, pinned);
            unexpected = true;
        }
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
