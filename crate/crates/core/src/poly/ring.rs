use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::PrimeField;
use crate::poly::{parse_ideal, parse_poly, Poly};
use crate::toric;

/// `R = F_p[vars] / (relations)` with homogeneous relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    field: PrimeField,
    vars: Vec<String>,
    relations: Vec<Poly>,
}

impl RingSpec {
    pub fn new(p: u32, vars: Vec<String>, relations: Vec<Poly>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if vars.is_empty() {
            return Err(Error::Invalid("a ring needs at least one variable".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Invalid(format!("`{v}` is not a valid variable name")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("variable `{v}` declared twice")));
            }
        }
        let mut kept = Vec::with_capacity(relations.len());
        for r in relations {
            if r.field() != field || r.nvars() != vars.len() {
                return Err(Error::Invalid("relation built over a different ring".into()));
            }
            if !r.is_homogeneous() {
                return Err(Error::NonHomogeneous(r.display(&vars)));
            }
            if !r.is_zero() {
                kept.push(r);
            }
        }
        Ok(Self {
            field,
            vars,
            relations: kept,
        })
    }

    /// Polynomial ring with no relations.
    pub fn polynomial_ring(p: u32, vars: &[&str]) -> Result<Self> {
        Self::new(p, vars.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    /// Parses relation strings against the declared variables.
    pub fn parse(p: u32, vars: &[&str], relations: &[&str]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|r| parse_poly(r, field, &names))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, names, rels)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn relation_degrees(&self) -> Vec<u32> {
        self.relations
            .iter()
            .filter_map(Poly::homogeneous_degree)
            .collect()
    }

    pub fn parse_poly(&self, text: &str) -> Result<Poly> {
        Ok(parse_poly(text, self.field, &self.vars)?)
    }

    /// Comma-separated generators, or `m` for the maximal ideal.
    pub fn parse_ideal(&self, text: &str) -> Result<Vec<Poly>> {
        Ok(parse_ideal(text, self.field, &self.vars)?)
    }

    pub fn maximal_ideal(&self) -> Vec<Poly> {
        (0..self.nvars())
            .map(|i| Poly::var(self.field, self.nvars(), i))
            .collect()
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.field, self.nvars(), i)
    }

    pub fn format_poly(&self, p: &Poly) -> String {
        p.display(&self.vars)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: RingFile =
            toml::from_str(text).map_err(|e| Error::Invalid(format!("ring file: {e}")))?;
        file.into_spec()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

/// On-disk ring description (TOML).
///
/// ```toml
/// p = 3
/// vars = ["x", "y", "z"]
/// relations = ["x^4 + y^4 + z^4"]
/// ```
///
/// Instead of `relations`, a projective monomial curve may be given by the
/// exponent pairs `(i, j)` of its parametrization `s^i t^j`; its defining
/// binomial ideal is then computed on load:
///
/// ```toml
/// p = 2
/// vars = ["a", "b", "c", "d"]
/// monomial_curve = [[0, 5], [1, 4], [4, 1], [5, 0]]
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub p: u32,
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub monomial_curve: Option<Vec<[u32; 2]>>,
    /// Default ideal for commands that take one: `"m"` or generators.
    #[serde(default)]
    pub ideal: Option<String>,
}

impl RingFile {
    pub fn into_spec(&self) -> Result<RingSpec> {
        let field = PrimeField::new(self.p)?;
        match &self.monomial_curve {
            Some(curve) => {
                if !self.relations.is_empty() {
                    return Err(Error::Invalid(
                        "give either `relations` or `monomial_curve`, not both".into(),
                    ));
                }
                if curve.len() != self.vars.len() {
                    return Err(Error::Invalid(format!(
                        "monomial_curve has {} entries but there are {} variables",
                        curve.len(),
                        self.vars.len()
                    )));
                }
                let rels = toric::monomial_curve_ideal(field, curve)?;
                RingSpec::new(self.p, self.vars.clone(), rels)
            }
            None => {
                let rels = self
                    .relations
                    .iter()
                    .map(|r| parse_poly(r, field, &self.vars))
                    .collect::<Result<Vec<_>, _>>()?;
                RingSpec::new(self.p, self.vars.clone(), rels)
            }
        }
    }
}
