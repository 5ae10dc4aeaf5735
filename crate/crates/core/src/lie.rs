//! Lie algebras given by structure constants, Jordan-Hölder flags, roots,
//! adjoint and coadjoint matrices, and modular-function exponents.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, embed, kernel, unit_vector, Matrix, Subspace};
use crate::poly::Poly;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// A linear functional in coordinates (flag coordinates unless stated
/// otherwise). Serialized as an array of rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functional(pub Vec<Rational>);

impl Functional {
    pub fn zero(m: usize) -> Self {
        Self(vec![Rational::zero(); m])
    }

    pub fn dual_basis(m: usize, j: usize) -> Self {
        Self(unit_vector(m, j))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.0, x)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        crate::scalar::parse_rational_list(s).map(Self)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_strings().join(","))
    }
}

impl Serialize for Functional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Functional {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(Functional)
            .map_err(serde::de::Error::custom)
    }
}

/// Finite-dimensional real Lie algebra with rational structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    basis_names: Vec<String>,
    /// `constants[i][j]` = coordinates of `[e_i, e_j]`.
    constants: Vec<Vec<Vec<Rational>>>,
    ad: Vec<Matrix<Rational>>,
}

/// Checks antisymmetry and the Jacobi identity, returning the validated
/// algebra or the first violation.
pub fn validate_algebra(
    name: impl Into<String>,
    basis_names: Vec<String>,
    constants: Vec<Vec<Vec<Rational>>>,
) -> Result<LieAlgebra> {
    LieAlgebra::new(name, basis_names, constants)
}

impl LieAlgebra {
    pub fn new(
        name: impl Into<String>,
        basis_names: Vec<String>,
        constants: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Self> {
        let m = basis_names.len();
        if m == 0 {
            return Err(Error::Parse("algebra must have positive dimension".into()));
        }
        if constants.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: constants.len(),
            });
        }
        for row in &constants {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            if let Some(v) = row.iter().find(|v| v.len() != m) {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
        }
        for i in 0..m {
            for j in i..m {
                let ok = constants[i][j]
                    .iter()
                    .zip(&constants[j][i])
                    .all(|(a, b)| (a + b).is_zero());
                if !ok {
                    return Err(Error::Antisymmetry { i: i + 1, j: j + 1 });
                }
            }
        }
        let ad = (0..m)
            .map(|i| {
                let mut a = Matrix::zeros(m, m);
                for j in 0..m {
                    for k in 0..m {
                        a[(k, j)] = constants[i][j][k].clone();
                    }
                }
                a
            })
            .collect();
        let alg = Self {
            name: name.into(),
            basis_names,
            constants,
            ad,
        };
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// Builds an algebra from the brackets `[e_i, e_j]` with `i < j`
    /// (0-based); all other brackets follow by antisymmetry or are zero.
    pub fn from_brackets(
        name: impl Into<String>,
        basis_names: Vec<String>,
        brackets: &[(usize, usize, Vec<Rational>)],
    ) -> Result<Self> {
        let m = basis_names.len();
        let mut c = vec![vec![vec![Rational::zero(); m]; m]; m];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= j || j >= m {
                return Err(Error::Parse(format!(
                    "bracket entry ({}, {}) must satisfy i < j <= {m}",
                    i + 1,
                    j + 1
                )));
            }
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
            c[i][j] = v.clone();
            c[j][i] = v.iter().map(|x| -x.clone()).collect();
        }
        Self::new(name, basis_names, c)
    }

    fn check_jacobi(&self) -> Result<()> {
        let m = self.dim();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let (ei, ej, ek) = (
                        unit_vector::<Rational>(m, i),
                        unit_vector::<Rational>(m, j),
                        unit_vector::<Rational>(m, k),
                    );
                    let mut r = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let t2 = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let t3 = self.bracket(&ek, &self.bracket(&ei, &ej));
                    axpy(&Rational::one(), &t2, &mut r);
                    axpy(&Rational::one(), &t3, &mut r);
                    if r.iter().any(|x| !x.is_zero()) {
                        return Err(Error::Jacobi {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            residual: self.format_vector(&r),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &[Rational] {
        &self.constants[i][j]
    }

    /// `[x, y]` for coordinate vectors over any scalar field.
    pub fn bracket<F: Scalar>(&self, x: &[F], y: &[F]) -> Vec<F> {
        let m = self.dim();
        let mut out = vec![F::zero(); m];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let s = xi.clone() * yj.clone();
                for (k, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + s.clone() * F::from_rational(c);
                    }
                }
            }
        }
        out
    }

    /// `ad(x)` with columns `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[Rational]) -> Matrix<Rational> {
        let m = self.dim();
        let mut a = Matrix::zeros(m, m);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                a = a.add(&self.ad[i].scale(xi));
            }
        }
        a
    }

    pub fn ad_basis(&self, i: usize) -> &Matrix<Rational> {
        &self.ad[i]
    }

    /// `coad(x) = −ad(x)ᵀ`, acting on dual coordinates.
    pub fn coad_matrix(&self, x: &[Rational]) -> Matrix<Rational> {
        self.ad_matrix(x).transpose().neg()
    }

    /// `x ↦ tr(ad x)` as a row vector.
    pub fn modular_exponent(&self) -> Functional {
        Functional(self.ad.iter().map(Matrix::trace).collect())
    }

    pub fn is_unimodular(&self) -> bool {
        self.modular_exponent().is_zero()
    }

    /// Returns a witness pair `(x, y)` with `[x, y] ∉ k`, if any.
    pub fn subalgebra_violation(
        &self,
        k: &Subspace<Rational>,
    ) -> Result<Option<(Vec<Rational>, Vec<Rational>)>> {
        if k.ambient_dim() != self.dim() {
            return Err(Error::AmbientMismatch {
                left: self.dim(),
                right: k.ambient_dim(),
            });
        }
        let b = k.basis();
        for (a, x) in b.iter().enumerate() {
            for y in &b[a + 1..] {
                if !k.contains(&self.bracket(x, y))? {
                    return Ok(Some((x.clone(), y.clone())));
                }
            }
        }
        Ok(None)
    }

    pub fn check_subalgebra(&self, k: &Subspace<Rational>) -> Result<()> {
        match self.subalgebra_violation(k)? {
            None => Ok(()),
            Some((x, y)) => Err(Error::NotASubalgebra {
                x: self.format_vector(&x),
                y: self.format_vector(&y),
            }),
        }
    }

    /// The exponent of `ρ_K` on a subalgebra `k`: the functional
    /// `y ↦ tr(ad_g y) − tr(ad_k y)`, in coordinates of `k`'s stored basis.
    pub fn relative_modular_exponent(&self, k: &Subspace<Rational>) -> Result<Vec<Rational>> {
        self.check_subalgebra(k)?;
        let global = self.modular_exponent();
        let b = k.basis();
        b.iter()
            .map(|y| {
                let mut tr_k = Rational::zero();
                for (pos, kb) in b.iter().enumerate() {
                    let coords = k.coordinates(&self.bracket(y, kb))?;
                    tr_k += &coords[pos];
                }
                Ok(global.eval(y) - tr_k)
            })
            .collect()
    }

    /// `[g, g]`.
    pub fn derived_algebra(&self) -> Subspace<Rational> {
        let m = self.dim();
        let vs: Vec<Vec<Rational>> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .map(|(i, j)| self.constants[i][j].clone())
            .collect();
        Subspace::span(&vs, m).expect("consistent dimensions")
    }

    /// Nilpotency via the lower central series.
    pub fn is_nilpotent(&self) -> bool {
        let m = self.dim();
        let mut current = Subspace::<Rational>::full(m);
        loop {
            let next: Vec<Vec<Rational>> = (0..m)
                .flat_map(|i| {
                    let ei = unit_vector::<Rational>(m, i);
                    current
                        .basis()
                        .iter()
                        .map(|c| self.bracket(&ei, c))
                        .collect::<Vec<_>>()
                })
                .collect();
            let next = Subspace::span(&next, m).expect("consistent dimensions");
            if next.is_zero() {
                return true;
            }
            if next == current {
                return false;
            }
            current = next;
        }
    }

    pub fn format_vector<F: Scalar>(&self, v: &[F]) -> String {
        let terms: Vec<String> = v
            .iter()
            .zip(&self.basis_names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| {
                if c.is_one() {
                    n.clone()
                } else {
                    format!("({c})·{n}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// A basis `f_1, …, f_m` of `g` such that every `g_j = span(f_1..f_j)` is an
/// ideal. All stratification code works in these coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanHolderFlag {
    algebra: LieAlgebra,
    /// Rows are the flag vectors in defining coordinates.
    basis: Matrix<Rational>,
    inverse: Matrix<Rational>,
    adapted: LieAlgebra,
}

/// Validates that the given ordered basis (rows in defining coordinates)
/// spans a chain of ideals.
pub fn validate_jh_flag(algebra: &LieAlgebra, basis: Vec<Vec<Rational>>) -> Result<JordanHolderFlag> {
    JordanHolderFlag::new(algebra, basis)
}

impl JordanHolderFlag {
    pub fn new(algebra: &LieAlgebra, basis: Vec<Vec<Rational>>) -> Result<Self> {
        let m = algebra.dim();
        if basis.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: basis.len(),
            });
        }
        let basis = Matrix::from_rows(basis, m)?;
        let inverse = basis.inverse().ok_or(Error::SingularBasis)?;
        let to_flag = inverse.transpose();
        let rows = basis.to_rows();
        let mut constants = vec![vec![vec![Rational::zero(); m]; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    constants[i][j] = to_flag.mul_vec(&algebra.bracket(&rows[i], &rows[j]));
                }
            }
        }
        let names: Vec<String> = rows
            .iter()
            .map(|r| {
                let s = algebra.format_vector(r);
                if s.contains(' ') || s.contains('(') {
                    format!("[{s}]")
                } else {
                    s
                }
            })
            .collect();
        // ideal property: [f_i, f_j] ∈ g_j
        for j in 0..m {
            for i in 0..m {
                if constants[i][j][j + 1..].iter().any(|c| !c.is_zero()) {
                    return Err(Error::NotAnIdeal {
                        j: j + 1,
                        witness: names[i].clone(),
                    });
                }
            }
        }
        let adapted = LieAlgebra::new(format!("{} (flag basis)", algebra.name()), names, constants)?;
        Ok(Self {
            algebra: algebra.clone(),
            basis,
            inverse,
            adapted,
        })
    }

    /// Flag given as a reordering of the defining basis (0-based indices).
    pub fn from_order(algebra: &LieAlgebra, order: &[usize]) -> Result<Self> {
        let m = algebra.dim();
        if order.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: order.len(),
            });
        }
        if order.iter().any(|&i| i >= m) {
            return Err(Error::SingularBasis);
        }
        Self::new(algebra, order.iter().map(|&i| unit_vector(m, i)).collect())
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// The algebra rewritten in the flag basis.
    pub fn adapted(&self) -> &LieAlgebra {
        &self.adapted
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn basis_rows(&self) -> Vec<Vec<Rational>> {
        self.basis.to_rows()
    }

    pub fn basis_names(&self) -> &[String] {
        self.adapted.basis_names()
    }

    /// `g_j` in flag coordinates.
    pub fn step<F: Scalar>(&self, j: usize) -> Subspace<F> {
        Subspace::coordinate(self.dim(), j)
    }

    /// Converts a functional from defining to flag coordinates.
    pub fn functional_to_flag(&self, xi: &Functional) -> Result<Functional> {
        if xi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: xi.dim(),
            });
        }
        Ok(Functional(self.basis.mul_vec(&xi.0)))
    }

    pub fn functional_to_defining(&self, xi: &Functional) -> Result<Functional> {
        if xi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: xi.dim(),
            });
        }
        Ok(Functional(self.inverse.mul_vec(&xi.0)))
    }

    pub fn vector_to_defining(&self, x: &[Rational]) -> Vec<Rational> {
        self.basis.transpose().mul_vec(x)
    }

    pub fn vector_to_flag(&self, x: &[Rational]) -> Vec<Rational> {
        self.inverse.transpose().mul_vec(x)
    }
}

/// Greedy search for a flag with rational roots: repeatedly picks a common
/// eigenvector of all `ad(e_i)` modulo the ideal built so far.
///
/// Failure does not prove that the algebra is not completely solvable.
pub fn find_jh_flag(algebra: &LieAlgebra) -> Result<JordanHolderFlag> {
    let m = algebra.dim();
    let mut spectra = Vec::with_capacity(m);
    for i in 0..m {
        let ad = algebra.ad_basis(i);
        let roots = if ad.is_zero() {
            vec![Rational::zero()]
        } else {
            Poly::characteristic(ad).rational_roots().ok_or_else(|| {
                Error::FlagNotFound(format!(
                    "eigenvalues of ad({}) could not be enumerated",
                    algebra.basis_names()[i]
                ))
            })?
        };
        spectra.push(roots);
    }

    let mut chosen: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for step in 0..m {
        let ideal = Subspace::span(&chosen, m)?;
        let ann = ideal.annihilator();
        let joint = joint_eigenspace(algebra, &spectra, &ideal, &ann, 0, Subspace::full(m))?
            .ok_or_else(|| {
                Error::FlagNotFound(format!(
                    "no common eigenvector with rational weight modulo g_{step}"
                ))
            })?;
        let v = joint
            .basis()
            .iter()
            .rev()
            .find(|v| !ideal.contains(v).unwrap_or(true))
            .expect("joint eigenspace strictly contains the ideal")
            .clone();
        chosen.push(v);
    }
    JordanHolderFlag::new(algebra, chosen)
}

fn joint_eigenspace(
    algebra: &LieAlgebra,
    spectra: &[Vec<Rational>],
    ideal: &Subspace<Rational>,
    ann: &Subspace<Rational>,
    i: usize,
    current: Subspace<Rational>,
) -> Result<Option<Subspace<Rational>>> {
    if current.dim() == ideal.dim() {
        return Ok(None);
    }
    if i == spectra.len() {
        return Ok(Some(current));
    }
    let m = algebra.dim();
    for mu in &spectra[i] {
        let shifted = algebra
            .ad_basis(i)
            .add(&Matrix::identity(m).scale(&-mu.clone()));
        // v with (ad e_i − μ) v ∈ ideal
        let constraints: Vec<Vec<Rational>> = ann
            .basis()
            .iter()
            .map(|alpha| shifted.transpose().mul_vec(alpha))
            .collect();
        let k = Subspace::span(&kernel(&constraints, m), m)?;
        let next = current.intersect(&k)?;
        if let Some(found) = joint_eigenspace(algebra, spectra, ideal, ann, i + 1, next)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Roots `λ_1, …, λ_m` in flag coordinates: `λ_j(x)` is the `f_j`
/// coefficient of `[x, f_j]`.
pub fn roots(flag: &JordanHolderFlag) -> Vec<Functional> {
    let a = flag.adapted();
    let m = a.dim();
    (0..m)
        .map(|j| Functional((0..m).map(|i| a.structure_constant(i, j)[j].clone()).collect()))
        .collect()
}

/// `ker λ` as a subspace of `F^m`.
pub fn root_kernel<F: Scalar>(root: &Functional) -> Subspace<F> {
    let m = root.dim();
    let row: Vec<F> = embed(&root.0);
    Subspace::span(&kernel(&[row], m), m).expect("consistent dimensions")
}

/// True iff every root vanishes, which for a completely solvable algebra is
/// equivalent to nilpotency.
pub fn roots_vanish(roots: &[Functional]) -> bool {
    roots.iter().all(Functional::is_zero)
}
