use std::collections::BTreeMap;
use std::sync::mpsc;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use ferchar::fermionic::{
    character_a_lambda, character_a_lambda_cd, character_l_fusion, character_w_fusion, gordon_character,
    lattice_principal_character, EnumerationError, FermionicError, LatticeSpec,
};
use ferchar::fusion::{fusion_character, FusionError, FusionSpec, ModuleSpec};
use ferchar::presented::{build_presentation_a, build_presentation_quadratic, graded_character, InitialConditions, Presentation, PresentationError};
use ferchar::verify::{Scan, VerificationReport, VerifyError, WindowSpec};
use ferchar::{FieldMode, GradedCharacter, Truncation};
use rayon::prelude::*;

use crate::args::Evaluator;
use crate::config::{Pair, VerifyTarget};
use crate::Failure;

impl From<PresentationError> for Failure {
    fn from(e: PresentationError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<FermionicError> for Failure {
    fn from(e: FermionicError) -> Self {
        match e {
            FermionicError::Enumeration(EnumerationError::TooManyPoints(_)) => Failure::Resource(e.to_string()),
            FermionicError::NoStabilization { .. } => Failure::Resource(format!("{e}; raise --nmax")),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<FusionError> for Failure {
    fn from(e: FusionError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        if e.is_resource_limit() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn need_z(w: WindowSpec) -> Result<i64, Failure> {
    w.z.ok_or_else(|| Failure::Config("brute-force evaluators need --zmax".into()))
}

fn brute(label: &str, p: &Presentation, w: WindowSpec, mode: FieldMode) -> Result<GradedCharacter, Failure> {
    let t = Truncation::new(w.q, Some(need_z(w)?), w.u);
    let out = graded_character(p, &t, mode)?;
    for (deg, e) in &out.escalations {
        log::warn!("{label}: primes disagreed at {deg} ({} vs {}), exact rank {}", e.first_prime_rank, e.second_prime_rank, e.exact_rank);
    }
    Ok(out.character)
}

fn fusion(label: &str, modules: Vec<ModuleSpec>, points: Option<Vec<i64>>, w: WindowSpec, mode: FieldMode) -> Result<GradedCharacter, Failure> {
    let z = need_z(w)?;
    let u = w.u.unwrap_or(z);
    let mut spec = FusionSpec::new(modules, z as u32, w.q as u32, u as u32);
    if let Some(p) = points {
        spec = spec.with_points(p);
    }
    let r = fusion_character(&spec, mode)?;
    if r.escalated {
        log::warn!("{label}: primes disagreed on the fusion filtration; recomputed exactly");
    }
    Ok(r.character)
}

/// Character of one evaluator on the window.
pub fn evaluate(e: &Evaluator, w: WindowSpec, mode: FieldMode) -> Result<GradedCharacter, Failure> {
    let t: Truncation = w.into();
    let label = e.to_string();
    let ic = |lambda, c: &Option<crate::args::Naturals>, d: &Option<crate::args::Naturals>| {
        let zero = InitialConditions::zero(lambda);
        let ic = InitialConditions { c: c.as_ref().map_or(zero.c, |v| v.0.clone()), d: d.as_ref().map_or(zero.d, |v| v.0.clone()) };
        ic.check(lambda).map(|_| ic)
    };
    Ok(match e {
        Evaluator::Algebra { lambda, c, d } => brute(&label, &build_presentation_a(lambda, &ic(lambda, c, d)?)?, w, mode)?,
        Evaluator::Presentation { file } => {
            let text = std::fs::read_to_string(file).map_err(|err| Failure::Config(format!("cannot read {}: {err}", file.display())))?;
            brute(&label, &Presentation::from_json_str(&text)?, w, mode)?
        }
        Evaluator::Quadratic { gram, shift } => brute(&label, &build_presentation_quadratic(&gram.0, &shift.0)?, w, mode)?,
        Evaluator::Fusion { i1, k1, i2, k2, points } => {
            let modules = vec![ModuleSpec::Principal { i: *i1, k: *k1 }, ModuleSpec::Principal { i: *i2, k: *k2 }];
            fusion(&label, modules, points.as_ref().map(|p| p.0.clone()), w, mode)?
        }
        Evaluator::FusionProduct { modules, points } => fusion(&label, modules.0.clone(), points.as_ref().map(|p| p.0.clone()), w, mode)?,
        Evaluator::Gordon { k } => gordon_character(*k, t)?,
        Evaluator::Mf { lambda } => character_a_lambda(lambda, t)?,
        Evaluator::Gmf { lambda, c, d } => character_a_lambda_cd(lambda, &ic(lambda, c, d)?, t)?,
        Evaluator::FusionW { i1, k1, i2, k2 } => character_w_fusion(*i1, *k1, *i2, *k2, t)?,
        Evaluator::Lattice { gram, shift } => lattice_principal_character(&LatticeSpec::new(gram.0.clone(), shift.0.clone())?, t)?,
        Evaluator::Limform { i1, k1, i2, k2, nmax } => {
            let l = character_l_fusion(*i1, *k1, *i2, *k2, w.q, *nmax)?;
            log::info!("{label}: stable from N={}", l.stabilized_at);
            l.character.restrict(&t)
        }
    })
}

fn verify_pair(p: &Pair, w: WindowSpec, mode: FieldMode) -> Result<Vec<VerificationReport>, Failure> {
    let start = Instant::now();
    let (l, r) = (p.left.to_string(), p.right.to_string());
    let left = evaluate(&p.left, w, mode)?;
    let right = evaluate(&p.right, w, mode)?;
    let ms = start.elapsed().as_millis() as u64;
    Ok(vec![VerificationReport::compare(format!("{l} vs {r}"), (&l, &left), (&r, &right), p.expect, mode, ms)])
}

pub fn verify(target: &VerifyTarget, w: WindowSpec, mode: FieldMode) -> Result<Vec<VerificationReport>, Failure> {
    match target {
        VerifyTarget::Case(c) => Ok(c.run(w, mode)?),
        VerifyTarget::Pair(p) => verify_pair(p, w, mode),
    }
}

/// Reports finished so far, keyed by case index.
pub type Partial = Arc<Mutex<BTreeMap<usize, Vec<VerificationReport>>>>;

/// Runs the cases in parallel, filing each case's reports under its index.
/// The first failing case (in case order) decides the error.
pub fn scan(s: &Scan, w: WindowSpec, mode: FieldMode, done: &Partial) -> Result<(), Failure> {
    let cases = s.cases();
    let errors: Vec<(usize, Failure)> = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| match c.run(w, mode) {
            Ok(r) => {
                done.lock().expect("report map").insert(i, r);
                None
            }
            Err(e) => Some((i, Failure::from(e))),
        })
        .collect();
    match errors.into_iter().min_by_key(|(i, _)| *i) {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}

pub enum Outcome<T> {
    Done(T),
    TimedOut,
}

/// Runs `f` on a worker pool of the requested size, giving up after
/// `timeout`. A timed-out worker is abandoned; the process exits soon after.
pub fn run_bounded<T: Send + 'static>(
    threads: Option<usize>,
    timeout: Option<Duration>,
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<Outcome<T>, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::Config(format!("cannot start worker pool: {e}")))?;
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let out = pool.install(f);
        let _ = tx.send(out);
    });
    let got = match timeout {
        Some(t) => rx.recv_timeout(t),
        None => rx.recv().map_err(|_| mpsc::RecvTimeoutError::Disconnected),
    };
    match got {
        Ok(v) => Ok(Outcome::Done(v)),
        Err(mpsc::RecvTimeoutError::Timeout) => Ok(Outcome::TimedOut),
        Err(mpsc::RecvTimeoutError::Disconnected) => Err(Failure::Internal("worker thread panicked".into())),
    }
}
