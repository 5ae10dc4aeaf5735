//! On-disk algebra definitions (JSON or TOML) and the JSON report document.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::chain::ChainReport;
use crate::error::{Error, Result};
use crate::lie::{JordanHolderFlag, LieAlgebra};
use crate::scalar::{format_rational, parse_rational, Rational};

/// A basis vector referenced by name or by 1-based index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisRef {
    Index(usize),
    Name(String),
}

/// A rational written as an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Self::Int(n) => Ok(Rational::from_integer((*n).into())),
            Self::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: BasisRef,
    pub j: BasisRef,
    pub coeffs: Vec<RationalValue>,
}

/// Either an ordering of the defining basis or explicit flag vectors (rows,
/// in defining coordinates).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FlagSpec {
    Order(Vec<BasisRef>),
    Matrix(Vec<Vec<RationalValue>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagSpec>,
}

const MAX_DIM: usize = 64;

fn field_error(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{field}: {msg}"))
}

impl AlgebraFile {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("invalid JSON algebra file: {e}")))
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Parse(format!("invalid TOML algebra file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Writes out an algebra with brackets referenced by name.
    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        let m = alg.dim();
        let names = alg.basis_names();
        let mut brackets = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let c = alg.structure_constant(i, j);
                if c.iter().any(|x| *x != Rational::from_integer(0.into())) {
                    brackets.push(BracketEntry {
                        i: BasisRef::Name(names[i].clone()),
                        j: BasisRef::Name(names[j].clone()),
                        coeffs: c
                            .iter()
                            .map(|x| {
                                if x.is_integer() {
                                    x.to_integer()
                                        .try_into()
                                        .map(RationalValue::Int)
                                        .unwrap_or_else(|_| RationalValue::Text(format_rational(x)))
                                } else {
                                    RationalValue::Text(format_rational(x))
                                }
                            })
                            .collect(),
                    });
                }
            }
        }
        Self {
            name: alg.name().to_string(),
            dim: m,
            basis: names.to_vec(),
            brackets,
            flag: None,
        }
    }

    fn resolve(&self, r: &BasisRef, field: &str) -> Result<usize> {
        match r {
            BasisRef::Index(k) if (1..=self.dim).contains(k) => Ok(k - 1),
            BasisRef::Index(k) => Err(field_error(field, format!("index {k} outside 1..={}", self.dim))),
            BasisRef::Name(n) => self
                .basis
                .iter()
                .position(|b| b == n)
                .ok_or_else(|| field_error(field, format!("unknown basis name {n:?}"))),
        }
    }

    /// Checks the schema-level invariants and builds the algebra, which is
    /// then validated for antisymmetry and the Jacobi identity.
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(field_error("dim", format!("must be in 1..={MAX_DIM}")));
        }
        if self.basis.len() != self.dim {
            return Err(field_error(
                "basis",
                format!("expected {} names, found {}", self.dim, self.basis.len()),
            ));
        }
        let mut seen = BTreeSet::new();
        for (k, n) in self.basis.iter().enumerate() {
            if n.is_empty() {
                return Err(field_error(&format!("basis[{k}]"), "empty name"));
            }
            if !seen.insert(n) {
                return Err(field_error(&format!("basis[{k}]"), format!("duplicate name {n:?}")));
            }
        }
        let mut pairs = BTreeSet::new();
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for (k, b) in self.brackets.iter().enumerate() {
            let field = format!("brackets[{k}]");
            let i = self.resolve(&b.i, &format!("{field}.i"))?;
            let j = self.resolve(&b.j, &format!("{field}.j"))?;
            if i >= j {
                return Err(field_error(&field, "entries must have i < j (antisymmetry is implied)"));
            }
            if !pairs.insert((i, j)) {
                return Err(field_error(&field, "duplicate bracket entry"));
            }
            if b.coeffs.len() != self.dim {
                return Err(field_error(
                    &format!("{field}.coeffs"),
                    format!("expected {} entries, found {}", self.dim, b.coeffs.len()),
                ));
            }
            let coeffs = b
                .coeffs
                .iter()
                .enumerate()
                .map(|(c, v)| v.to_rational().map_err(|e| field_error(&format!("{field}.coeffs[{c}]"), e)))
                .collect::<Result<Vec<_>>>()?;
            brackets.push((i, j, coeffs));
        }
        LieAlgebra::from_brackets(&self.name, self.basis.clone(), &brackets)
    }

    /// The flag given in the file, if any, validated against `alg`.
    pub fn to_flag(&self, alg: &LieAlgebra) -> Result<Option<JordanHolderFlag>> {
        let Some(spec) = &self.flag else { return Ok(None) };
        let m = alg.dim();
        let flag = match spec {
            FlagSpec::Order(order) => {
                if order.len() != m {
                    return Err(field_error("flag", format!("expected {m} entries, found {}", order.len())));
                }
                let idx = order
                    .iter()
                    .enumerate()
                    .map(|(k, r)| self.resolve(r, &format!("flag[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                JordanHolderFlag::from_order(alg, &idx)?
            }
            FlagSpec::Matrix(rows) => {
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(r, row)| {
                        if row.len() != m {
                            return Err(field_error(&format!("flag[{r}]"), format!("expected {m} entries")));
                        }
                        row.iter()
                            .enumerate()
                            .map(|(c, v)| v.to_rational().map_err(|e| field_error(&format!("flag[{r}][{c}]"), e)))
                            .collect()
                    })
                    .collect::<Result<Vec<_>>>()?;
                JordanHolderFlag::new(alg, rows)?
            }
        };
        Ok(Some(flag))
    }
}

/// Reads `catalog:<name>` or a `.json` / `.toml` file.
pub fn load_algebra_file(spec: &str) -> Result<AlgebraFile> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return Ok(AlgebraFile::from_algebra(&catalog::lookup(name)?));
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    let parsed = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("toml") => AlgebraFile::from_toml_str(&text),
        _ => AlgebraFile::from_json_str(&text),
    };
    parsed.map_err(|e| Error::Parse(format!("{spec}: {e}")))
}

/// The report document is the serialized chain report.
pub type ReportDocument = ChainReport;

/// Pretty JSON with a trailing newline.
pub fn report_to_json(report: &ChainReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}

pub fn report_from_json(s: &str) -> Result<ChainReport> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("invalid report document: {e}")))
}
