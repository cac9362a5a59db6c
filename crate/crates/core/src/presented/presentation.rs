use serde::{Deserialize, Serialize};

use super::partition::{InitialConditions, Partition};
use super::PresentationError;

/// A generating series `f(z) = Σ_{n ≥ min_mode} f_{-n} z^n`. Every mode has
/// z-degree 1, u-degree `u_degree` and q-degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFamily {
    pub name: String,
    pub u_degree: u32,
    pub min_mode: u32,
}

/// `f^{(derivative)}(z)^{power}` for the family with index `family`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub family: usize,
    pub derivative: u32,
    pub power: u32,
}

/// Which z-coefficients of a product of factors are imposed as relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientRange {
    All,
    /// Coefficients of `z^r` for `0 ≤ r < R`.
    Low(u32),
}

impl CoefficientRange {
    pub fn admits(&self, r: u64) -> bool {
        match self {
            CoefficientRange::All => true,
            CoefficientRange::Low(bound) => r < u64::from(*bound),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFamily {
    pub factors: Vec<Factor>,
    pub range: CoefficientRange,
}

impl RelationFamily {
    pub fn all(factors: Vec<Factor>) -> Self {
        RelationFamily { factors, range: CoefficientRange::All }
    }

    pub fn low(factors: Vec<Factor>, bound: u32) -> Self {
        RelationFamily { factors, range: CoefficientRange::Low(bound) }
    }

    /// z-degree of every coefficient.
    pub fn z_degree(&self) -> u64 {
        self.factors.iter().map(|f| u64::from(f.power)).sum()
    }

    /// `Σ derivative · power`; the coefficient of `z^r` has q-degree `r` plus
    /// this.
    pub fn derivative_weight(&self) -> u64 {
        self.factors.iter().map(|f| u64::from(f.derivative) * u64::from(f.power)).sum()
    }
}

/// Commutative graded algebra `C[modes]/I` with `I` generated by the chosen
/// z-coefficients of each relation family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub families: Vec<GeneratorFamily>,
    pub relations: Vec<RelationFamily>,
}

impl Presentation {
    pub fn validate(&self) -> Result<(), PresentationError> {
        if self.families.is_empty() {
            return Err(PresentationError::NoFamilies);
        }
        for (k, rel) in self.relations.iter().enumerate() {
            if rel.factors.is_empty() {
                return Err(PresentationError::EmptyRelation(k));
            }
            for f in &rel.factors {
                if f.family >= self.families.len() {
                    return Err(PresentationError::UnknownFamily { relation: k, family: f.family });
                }
                if f.power == 0 {
                    return Err(PresentationError::ZeroPower(k));
                }
            }
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self, PresentationError> {
        let p: Presentation = serde_json::from_str(s).map_err(|e| PresentationError::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn has_u_grading(&self) -> bool {
        self.families.iter().any(|f| f.u_degree > 0)
    }

    pub fn max_u_degree(&self) -> u32 {
        self.families.iter().map(|f| f.u_degree).max().unwrap_or(0)
    }
}

fn factor(family: usize, power: usize) -> Factor {
    Factor { family, derivative: 0, power: power as u32 }
}

/// `A_{λ;c,d}`: families `a` (u-degree 0) and, for `s ≥ 1`, `b` (u-degree 1);
/// relations `a(z)^{λ_j+1} b(z)^j` for `j = 0..s` and `b(z)^{s+1}`, all
/// coefficients; then the low coefficients of `a(z)^i` and `b(z)^j` fixed by
/// `c` and `d`.
pub fn build_presentation_a(lambda: &Partition, ic: &InitialConditions) -> Result<Presentation, PresentationError> {
    ic.check(lambda)?;
    let s = lambda.s();
    let mut families = vec![GeneratorFamily { name: "a".into(), u_degree: 0, min_mode: 0 }];
    if s >= 1 {
        families.push(GeneratorFamily { name: "b".into(), u_degree: 1, min_mode: 0 });
    }
    let mut relations = Vec::new();
    for j in 0..=s {
        let mut fs = vec![factor(0, lambda.part(j) + 1)];
        if j > 0 {
            fs.push(factor(1, j));
        }
        relations.push(RelationFamily::all(fs));
    }
    if s >= 1 {
        relations.push(RelationFamily::all(vec![factor(1, s + 1)]));
    }
    for i in 1..=lambda.first() {
        let r = ic.a_order(i);
        if r > 0 {
            relations.push(RelationFamily::low(vec![factor(0, i)], r as u32));
        }
    }
    for j in 1..=s {
        let r = ic.b_order(j);
        if r > 0 {
            relations.push(RelationFamily::low(vec![factor(1, j)], r as u32));
        }
    }
    Ok(Presentation { families, relations })
}

/// Families `a1..aN` with `min_mode = v_i` and relations
/// `a_i^{(k)}(z) a_j^{(l)}(z) = 0` for `i ≤ j`, `k + l < m_ij`.
pub fn build_presentation_quadratic(m: &[Vec<i64>], v: &[i64]) -> Result<Presentation, PresentationError> {
    let n = m.len();
    if v.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(PresentationError::Shape);
    }
    for i in 0..n {
        for j in 0..n {
            if m[i][j] != m[j][i] {
                return Err(PresentationError::NonSymmetric { i, j });
            }
            if m[i][j] < 0 {
                return Err(PresentationError::NegativeEntry { i, j });
            }
        }
        if m[i][i] <= 0 || m[i][i] % 2 != 0 {
            return Err(PresentationError::BadDiagonal(i));
        }
        if v[i] < 0 {
            return Err(PresentationError::NegativeShift(i));
        }
    }
    let families = (0..n)
        .map(|i| GeneratorFamily { name: format!("a{}", i + 1), u_degree: 0, min_mode: v[i] as u32 })
        .collect();
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i..n {
            for total in 0..m[i][j] as u32 {
                for k in 0..=total {
                    let l = total - k;
                    // for i == j the pair (k, l) and (l, k) give the same series
                    if i == j && k > l {
                        continue;
                    }
                    let fs = if i == j && k == l {
                        vec![Factor { family: i, derivative: k, power: 2 }]
                    } else {
                        vec![
                            Factor { family: i, derivative: k, power: 1 },
                            Factor { family: j, derivative: l, power: 1 },
                        ]
                    };
                    relations.push(RelationFamily::all(fs));
                }
            }
        }
    }
    Ok(Presentation { families, relations })
}
