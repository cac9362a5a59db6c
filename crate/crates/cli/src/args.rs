use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use ferchar::fermionic::DEFAULT_N_MAX;
use ferchar::fusion::ModuleSpec;
use ferchar::presented::{parse_list, Partition};
use ferchar::verify::Expectation;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "ferchar", version, about = "Graded characters: brute force, fermionic sums and their comparison")]
pub struct Cli {
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the resolved configuration to this file before running.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub field: Option<FieldArg>,
    /// Seed for the prime pair in two-prime mode.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (FERCHAR_THREADS wins if set).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub timeout_secs: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub qmax: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub zmax: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub umax: Option<i64>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one character.
    Char {
        #[command(subcommand)]
        evaluator: Evaluator,
    },
    /// Run a built-in comparison or compare two evaluators.
    Verify {
        #[command(subcommand)]
        case: VerifyCmd,
    },
    /// Run a family of comparisons.
    Scan {
        #[command(subcommand)]
        scan: ScanCmd,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldArg {
    TwoPrime,
    Exact,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ExpectArg {
    #[default]
    Equal,
    AtMost,
    Informational,
}

impl From<ExpectArg> for Expectation {
    fn from(e: ExpectArg) -> Self {
        match e {
            ExpectArg::Equal => Expectation::Equal,
            ExpectArg::AtMost => Expectation::AtMost,
            ExpectArg::Informational => Expectation::Informational,
        }
    }
}

/// Comma-separated nonnegative integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Naturals(pub Vec<usize>);

impl FromStr for Naturals {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_list(s).map(Naturals).map_err(|e| format!("{s:?}: {e}"))
    }
}

/// Comma-separated integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Integers(pub Vec<i64>);

impl FromStr for Integers {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Ok(Integers(Vec::new()));
        }
        t.split(',').map(|x| x.trim().parse().map_err(|e| format!("{s:?}: {e}"))).collect::<Result<_, _>>().map(Integers)
    }
}

/// Rows separated by `;`, entries by `,`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix(pub Vec<Vec<i64>>);

impl FromStr for Matrix {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(';').map(|row| row.parse::<Integers>().map(|r| r.0)).collect::<Result<_, _>>().map(Matrix)
    }
}

/// Fusion factors separated by `;`: `w:i,k`, `nil:k` or `trivial`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModuleList(pub Vec<ModuleSpec>);

impl FromStr for ModuleList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let one = |t: &str| -> Result<ModuleSpec, String> {
            let t = t.trim();
            let (kind, rest) = t.split_once(':').unwrap_or((t, ""));
            let nums = parse_list(rest).map_err(|e| format!("{t:?}: {e}"))?;
            match (kind, nums.as_slice()) {
                ("w", [i, k]) => Ok(ModuleSpec::Principal { i: *i, k: *k }),
                ("nil", [k]) => Ok(ModuleSpec::Nilpotent { k: *k }),
                ("trivial", []) => Ok(ModuleSpec::Trivial),
                _ => Err(format!("{t:?}: expected w:i,k or nil:k or trivial")),
            }
        };
        s.split(';').map(one).collect::<Result<_, _>>().map(ModuleList)
    }
}

fn default_n_max() -> usize {
    DEFAULT_N_MAX
}

/// Something that produces a character.
#[derive(Clone, Debug, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "evaluator", rename_all = "snake_case")]
pub enum Evaluator {
    /// Brute force: the algebra A_{λ;c,d} (c, d default to zero).
    Algebra {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        c: Option<Naturals>,
        #[arg(long)]
        d: Option<Naturals>,
    },
    /// Brute force: a presentation read from a JSON file.
    Presentation {
        #[arg(long)]
        file: PathBuf,
    },
    /// Brute force: the quadratic presentation of a Gram matrix and shift.
    Quadratic {
        #[arg(long)]
        gram: Matrix,
        #[arg(long, allow_hyphen_values = true)]
        shift: Integers,
    },
    /// Brute force: fusion filtration of W_{i1,k1} and W_{i2,k2}.
    Fusion {
        #[arg(long)]
        i1: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        i2: usize,
        #[arg(long)]
        k2: usize,
        #[arg(long, allow_hyphen_values = true)]
        points: Option<Integers>,
    },
    /// Brute force: fusion filtration of any list of factors.
    FusionProduct {
        #[arg(long)]
        modules: ModuleList,
        #[arg(long, allow_hyphen_values = true)]
        points: Option<Integers>,
    },
    /// Formula: level-k Gordon sum.
    Gordon {
        #[arg(long)]
        k: usize,
    },
    /// Formula: fermionic sum for A_λ.
    Mf {
        #[arg(long)]
        lambda: Partition,
    },
    /// Formula: fermionic sum for A_{λ;c,d}.
    Gmf {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        c: Option<Naturals>,
        #[arg(long)]
        d: Option<Naturals>,
    },
    /// Formula: fermionic sum for the fusion W_{i1,k1} * W_{i2,k2}.
    FusionW {
        #[arg(long)]
        i1: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        i2: usize,
        #[arg(long)]
        k2: usize,
    },
    /// Formula: lattice sum of a Gram matrix and shift.
    Lattice {
        #[arg(long)]
        gram: Matrix,
        #[arg(long, allow_hyphen_values = true)]
        shift: Integers,
    },
    /// Formula: stabilized limit for the fusion L_{i1,k1} * L_{i2,k2}.
    Limform {
        #[arg(long)]
        i1: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        i2: usize,
        #[arg(long)]
        k2: usize,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        #[serde(default = "default_n_max")]
        nmax: usize,
    },
}

fn opt_list(x: &Option<Naturals>) -> String {
    x.as_ref().map(|v| v.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).unwrap_or_else(|| "0".into())
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluator::Algebra { lambda, c, d } => write!(f, "algebra lambda={lambda} c=({}) d=({})", opt_list(c), opt_list(d)),
            Evaluator::Presentation { file } => write!(f, "presentation {}", file.display()),
            Evaluator::Quadratic { gram, shift } => write!(f, "quadratic gram={:?} shift={:?}", gram.0, shift.0),
            Evaluator::Fusion { i1, k1, i2, k2, .. } => write!(f, "fusion filtration W({i1},{k1})*W({i2},{k2})"),
            Evaluator::FusionProduct { modules, .. } => write!(f, "fusion filtration of {} factors", modules.0.len()),
            Evaluator::Gordon { k } => write!(f, "gordon k={k}"),
            Evaluator::Mf { lambda } => write!(f, "mf lambda={lambda}"),
            Evaluator::Gmf { lambda, c, d } => write!(f, "gmf lambda={lambda} c=({}) d=({})", opt_list(c), opt_list(d)),
            Evaluator::FusionW { i1, k1, i2, k2 } => write!(f, "fusion sum W({i1},{k1})*W({i2},{k2})"),
            Evaluator::Lattice { gram, shift } => write!(f, "lattice gram={:?} shift={:?}", gram.0, shift.0),
            Evaluator::Limform { i1, k1, i2, k2, .. } => write!(f, "limit L({i1},{k1})*L({i2},{k2})"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Algebra A_(k) against the Gordon sum.
    Gordon {
        #[arg(long)]
        k: usize,
    },
    /// Algebra A_λ against its fermionic sum.
    Mf {
        #[arg(long)]
        lambda: Partition,
    },
    /// Algebra A_{λ;c,d} against its fermionic sum.
    Gmf {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        c: Option<Naturals>,
        #[arg(long)]
        d: Option<Naturals>,
    },
    /// Fusion filtration, fusion sum and fusion algebra, pairwise.
    Fusion {
        #[arg(long)]
        i1: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        i2: usize,
        #[arg(long)]
        k2: usize,
        #[arg(long, allow_hyphen_values = true)]
        points: Option<Integers>,
    },
    /// Quadratic presentation against the lattice sum.
    Lattice {
        #[arg(long)]
        gram: Matrix,
        #[arg(long, allow_hyphen_values = true)]
        shift: Integers,
    },
    /// Stabilized limit against the closed sum in the s variables.
    Limform {
        #[arg(long)]
        i1: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        i2: usize,
        #[arg(long)]
        k2: usize,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        nmax: usize,
    },
    /// Fusion of several factors at two point sets (reported, never asserted).
    Conjecture {
        #[arg(long)]
        modules: ModuleList,
        #[arg(long, allow_hyphen_values = true)]
        points_a: Integers,
        #[arg(long, allow_hyphen_values = true)]
        points_b: Integers,
    },
    /// Two evaluators given as JSON objects, e.g. '{"evaluator":"gordon","k":2}'.
    Pair {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, value_enum, default_value_t)]
        expect: ExpectArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScanCmd {
    /// Every partition with at most this many boxes.
    Mf {
        #[arg(long)]
        max_size: usize,
    },
    /// Every fusion pair with 1 ≤ k1 ≤ k2 ≤ max level.
    Fusion {
        #[arg(long)]
        max_level: usize,
    },
    /// Gordon levels 1 to max level.
    Gordon {
        #[arg(long)]
        max_level: usize,
    },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsers() {
        assert_eq!("1,0".parse::<Naturals>().unwrap().0, vec![1, 0]);
        assert_eq!("3,-1".parse::<Integers>().unwrap().0, vec![3, -1]);
        assert_eq!("2,1;1,2".parse::<Matrix>().unwrap().0, vec![vec![2, 1], vec![1, 2]]);
        assert!("1,x".parse::<Naturals>().is_err());
    }

    #[test]
    fn module_list_parser() {
        let m: ModuleList = "w:1,1; nil:2;trivial".parse().unwrap();
        assert_eq!(m.0, vec![ModuleSpec::Principal { i: 1, k: 1 }, ModuleSpec::Nilpotent { k: 2 }, ModuleSpec::Trivial]);
        assert!("w:1".parse::<ModuleList>().is_err());
    }

    #[test]
    fn evaluator_json_round_trip() {
        let e = Evaluator::Limform { i1: 0, k1: 1, i2: 0, k2: 1, nmax: 7 };
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<Evaluator>(&s).unwrap(), e);
        let g: Evaluator = serde_json::from_str(r#"{"evaluator":"gmf","lambda":[2,0],"c":[1,0]}"#).unwrap();
        assert!(matches!(g, Evaluator::Gmf { d: None, .. }));
    }
}
