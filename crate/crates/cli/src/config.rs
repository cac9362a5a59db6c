use std::path::PathBuf;

use ferchar::presented::InitialConditions;
use ferchar::verify::{Case, Expectation, Scan, WindowSpec};
use ferchar::FieldMode;
use serde::{Deserialize, Serialize};

use crate::args::{Cli, Command, Evaluator, FieldArg, Format, Naturals, ScanCmd, VerifyCmd};
use crate::Failure;

/// Two evaluators compared coefficientwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub left: Evaluator,
    pub right: Evaluator,
    #[serde(default)]
    pub expect: Expectation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VerifyTarget {
    Case(Case),
    Pair(Pair),
}

/// Everything a run needs. The JSON form uses the flag names; exactly one of
/// `char`, `verify` and `scan` selects the command.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char: Option<Evaluator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyTarget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<Scan>,
    pub qmax: Option<i64>,
    pub zmax: Option<i64>,
    pub umax: Option<i64>,
    pub field: Option<FieldArg>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub timeout_secs: Option<u64>,
}

pub enum Job {
    Char(Evaluator),
    Verify(VerifyTarget),
    Scan(Scan),
}

fn ic(c: Option<Naturals>, d: Option<Naturals>, lambda: &ferchar::presented::Partition) -> InitialConditions {
    let zero = InitialConditions::zero(lambda);
    InitialConditions { c: c.map_or(zero.c, |v| v.0), d: d.map_or(zero.d, |v| v.0) }
}

impl VerifyCmd {
    fn into_target(self) -> Result<VerifyTarget, Failure> {
        let case = match self {
            VerifyCmd::Gordon { k } => Case::Gordon { k },
            VerifyCmd::Mf { lambda } => Case::Mf { lambda },
            VerifyCmd::Gmf { lambda, c, d } => {
                let ic = ic(c, d, &lambda);
                Case::Gmf { lambda, ic }
            }
            VerifyCmd::Fusion { i1, k1, i2, k2, points } => Case::Fusion { i1, k1, i2, k2, points: points.map(|p| p.0) },
            VerifyCmd::Lattice { gram, shift } => Case::Lattice { gram: gram.0, shift: shift.0 },
            VerifyCmd::Limform { i1, k1, i2, k2, nmax } => Case::Limform { i1, k1, i2, k2, n_max: nmax },
            VerifyCmd::Conjecture { modules, points_a, points_b } => Case::Conjecture { modules: modules.0, points: [points_a.0, points_b.0] },
            VerifyCmd::Pair { left, right, expect } => {
                let parse = |s: &str| serde_json::from_str::<Evaluator>(s).map_err(|e| Failure::Config(format!("bad evaluator {s:?}: {e}")));
                return Ok(VerifyTarget::Pair(Pair { left: parse(&left)?, right: parse(&right)?, expect: expect.into() }));
            }
        };
        Ok(VerifyTarget::Case(case))
    }
}

impl From<ScanCmd> for Scan {
    fn from(s: ScanCmd) -> Self {
        match s {
            ScanCmd::Mf { max_size } => Scan::Mf { max_size },
            ScanCmd::Fusion { max_level } => Scan::Fusion { max_level },
            ScanCmd::Gordon { max_level } => Scan::Gordon { max_level },
        }
    }
}

impl RunConfig {
    pub fn load(path: &PathBuf) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }

    /// Config file (if any) overlaid with the command line.
    pub fn resolve(cli: Cli) -> Result<Self, Failure> {
        let mut cfg = match &cli.config {
            Some(p) => Self::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(cmd) = cli.command {
            cfg.char = None;
            cfg.verify = None;
            cfg.scan = None;
            match cmd {
                Command::Char { evaluator } => cfg.char = Some(evaluator),
                Command::Verify { case } => cfg.verify = Some(case.into_target()?),
                Command::Scan { scan } => cfg.scan = Some(scan.into()),
            }
        }
        macro_rules! overlay {
            ($($f:ident),*) => { $( if cli.$f.is_some() { cfg.$f = cli.$f; } )* };
        }
        overlay!(qmax, zmax, umax, field, seed, format, output, threads, timeout_secs);
        Ok(cfg)
    }

    pub fn job(&self) -> Result<Job, Failure> {
        match (&self.char, &self.verify, &self.scan) {
            (Some(e), None, None) => Ok(Job::Char(e.clone())),
            (None, Some(v), None) => Ok(Job::Verify(v.clone())),
            (None, None, Some(s)) => Ok(Job::Scan(s.clone())),
            (None, None, None) => Err(Failure::Config("no command given (use char, verify or scan, or --config)".into())),
            _ => Err(Failure::Config("configuration selects more than one command".into())),
        }
    }

    pub fn window(&self) -> Result<WindowSpec, Failure> {
        let q = self.qmax.ok_or_else(|| Failure::Config("--qmax is required".into()))?;
        for (name, v) in [("qmax", Some(q)), ("zmax", self.zmax), ("umax", self.umax)] {
            if v.is_some_and(|v| v < 0) {
                return Err(Failure::Config(format!("--{name} must be nonnegative")));
            }
        }
        Ok(WindowSpec { q, z: self.zmax, u: self.umax })
    }

    pub fn field_mode(&self) -> FieldMode {
        match self.field.unwrap_or(FieldArg::TwoPrime) {
            FieldArg::TwoPrime => FieldMode::TwoPrime { seed: self.seed.unwrap_or(FieldMode::DEFAULT_SEED) },
            FieldArg::Exact => FieldMode::Exact,
        }
    }

    /// `FERCHAR_THREADS` first, then the config.
    pub fn thread_count(&self) -> Result<Option<usize>, Failure> {
        let n = match std::env::var("FERCHAR_THREADS") {
            Ok(s) if !s.trim().is_empty() => {
                Some(s.trim().parse::<usize>().map_err(|_| Failure::Config(format!("FERCHAR_THREADS={s:?} is not a count")))?)
            }
            _ => self.threads,
        };
        match n {
            Some(0) => Err(Failure::Config("thread count must be positive".into())),
            n => Ok(n),
        }
    }
}
