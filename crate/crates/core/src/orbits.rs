//! Coadjoint action by one-parameter subgroups, orbit dimensions, and
//! canonical orbit representatives on nilpotent fine layers.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Functional, JordanHolderFlag, LieAlgebra};
use crate::linalg::{unit_vector, Matrix};
use crate::poly::Poly;
use crate::scalar::{format_rational, int, parse_rational, rational_to_f64, Rational};
use crate::stratify::{form_of, jump_set};

/// Result of `exp(t·x)·ξ`: exact when `ad x` is nilpotent.
#[derive(Clone, Debug, PartialEq)]
pub enum CoadjointImage {
    Exact(Functional),
    Approximate(Vec<f64>),
}

impl CoadjointImage {
    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn exact(self) -> Option<Functional> {
        match self {
            Self::Exact(f) => Some(f),
            Self::Approximate(_) => None,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Self::Exact(f) => f.coords().iter().map(rational_to_f64).collect(),
            Self::Approximate(v) => v.clone(),
        }
    }
}

/// `Σ_k M^k v / k!`, truncated where it terminates. Only valid for
/// nilpotent `M`.
fn nilpotent_exp_apply(m: &Matrix<Rational>, v: &[Rational]) -> Vec<Rational> {
    let mut term = v.to_vec();
    let mut out = v.to_vec();
    for k in 1..=m.nrows() {
        term = m.mul_vec(&term);
        let inv_k = Rational::one() / int(k as i64);
        term.iter_mut().for_each(|x| *x = x.clone() * inv_k.clone());
        if term.iter().all(Zero::is_zero) {
            break;
        }
        out.iter_mut().zip(&term).for_each(|(o, t)| *o = o.clone() + t.clone());
    }
    out
}

/// `ξ ∘ Ad(exp(−t x))`, i.e. `e^{t·coad(x)} ξ`. `x` and `ξ` are in the
/// coordinates of `algebra`.
pub fn coadjoint_apply(algebra: &LieAlgebra, x: &[Rational], t: &Rational, xi: &Functional) -> CoadjointImage {
    let c = algebra.coad_matrix(x).scale(t);
    if c.is_nilpotent() {
        CoadjointImage::Exact(Functional(nilpotent_exp_apply(&c, xi.coords())))
    } else {
        let e = c.to_f64().exp();
        let v = nalgebra::DVector::from_iterator(xi.dim(), xi.coords().iter().map(rational_to_f64));
        CoadjointImage::Approximate((e * v).iter().copied().collect())
    }
}

/// `exp(t_1 f_{a_1}) ⋯ exp(t_r f_{a_r})`; the rightmost factor acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupWord {
    pub factors: Vec<(usize, Rational)>,
}

impl GroupWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// Left-multiplies by `exp(t f_a)`.
    pub fn push_left(&mut self, a: usize, t: Rational) {
        self.factors.insert(0, (a, t));
    }

    pub fn inverse(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().map(|(a, t)| (*a, -t.clone())).collect(),
        }
    }

    /// Exact action; fails if some factor is not ad-nilpotent.
    pub fn apply(&self, algebra: &LieAlgebra, xi: &Functional) -> Result<Functional> {
        let m = algebra.dim();
        let mut cur = xi.clone();
        for (a, t) in self.factors.iter().rev() {
            if *a >= m {
                return Err(Error::DimensionMismatch { expected: m, found: *a + 1 });
            }
            cur = coadjoint_apply(algebra, &unit_vector(m, *a), t, &cur)
                .exact()
                .ok_or_else(|| Error::NotNilpotent(format!("ad({}) is not nilpotent", algebra.basis_names()[*a])))?;
        }
        Ok(cur)
    }
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    /// 1-based flag index
    generator: usize,
    t: String,
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.factors
            .iter()
            .map(|(a, t)| FactorRepr {
                generator: a + 1,
                t: format_rational(t),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<FactorRepr>::deserialize(d)?;
        let factors = raw
            .into_iter()
            .map(|f| {
                if f.generator == 0 {
                    return Err(serde::de::Error::custom("generator indices are 1-based"));
                }
                let t = parse_rational(&f.t).map_err(serde::de::Error::custom)?;
                Ok((f.generator - 1, t))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Ok(Self { factors })
    }
}

/// `dim g − dim g(ξ)`, cross-checked against `card jump(g(ξ))`.
pub fn orbit_dimension(flag: &JordanHolderFlag, xi: &Functional) -> Result<usize> {
    let form = form_of(flag, xi.coords())?;
    let stab = form.radical();
    let dim = flag.dim() - stab.dim();
    let e = jump_set(&stab);
    if e.len() != dim || form.rank() != dim {
        return Err(Error::InvariantViolation(format!(
            "orbit dimension {dim} disagrees with card e = {} or rank B = {}",
            e.len(),
            form.rank()
        )));
    }
    Ok(dim)
}

/// Canonical point of a coadjoint orbit: all coordinates in the jump set
/// `e` vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRepresentative {
    pub representative: Functional,
    /// `word · ξ = representative`.
    pub word: GroupWord,
    /// 1-based flag indices.
    pub zeroed: Vec<usize>,
}

/// Coefficients (in `t`) of `e^{t C} ξ`: entry `k` is `C^k ξ / k!`.
fn series_terms(c: &Matrix<Rational>, xi: &[Rational]) -> Vec<Vec<Rational>> {
    let mut terms = vec![xi.to_vec()];
    let mut cur = xi.to_vec();
    for k in 1..=c.nrows() {
        cur = c.mul_vec(&cur);
        let inv_k = Rational::one() / int(k as i64);
        cur.iter_mut().for_each(|x| *x = x.clone() * inv_k.clone());
        if cur.iter().all(Zero::is_zero) {
            break;
        }
        terms.push(cur.clone());
    }
    terms
}

fn coordinate_poly(terms: &[Vec<Rational>], j: usize) -> Poly {
    Poly::new(terms.iter().map(|v| v[j].clone()).collect())
}

/// Moves `ξ` along its orbit until it vanishes on every jump index,
/// recording the group word used.
///
/// Jump indices are processed in decreasing order. For each one the
/// smallest generator whose action changes that coordinate affinely (and
/// leaves already-zeroed coordinates alone) is used; otherwise any
/// generator with a rational zero is tried before giving up.
pub fn nilpotent_cross_section(flag: &JordanHolderFlag, xi: &Functional) -> Result<OrbitRepresentative> {
    if !flag.algebra().is_nilpotent() {
        return Err(Error::NotNilpotent(format!(
            "{}: cross-sections are only implemented for nilpotent algebras",
            flag.algebra().name()
        )));
    }
    let m = flag.dim();
    let alg = flag.adapted();
    let stab = form_of(flag, xi.coords())?.radical();
    let e = jump_set(&stab);
    let coads: Vec<Matrix<Rational>> = (0..m).map(|a| alg.coad_matrix(&unit_vector(m, a))).collect();

    let mut cur = xi.clone();
    let mut word = GroupWord::new();
    let mut zeroed: Vec<usize> = Vec::new();
    for &j1 in e.iter().rev() {
        let j = j1 - 1;
        if !cur.coords()[j].is_zero() {
            let (a, t) = zeroing_step(&coads, &cur, j, &zeroed)?;
            cur = GroupWord { factors: vec![(a, t.clone())] }.apply(alg, &cur)?;
            word.push_left(a, t);
        }
        zeroed.push(j);
    }
    if zeroed.iter().any(|&j| !cur.coords()[j].is_zero()) {
        return Err(Error::InvariantViolation("cross-section left a jump coordinate nonzero".into()));
    }
    Ok(OrbitRepresentative {
        representative: cur,
        word,
        zeroed: e,
    })
}

fn zeroing_step(coads: &[Matrix<Rational>], cur: &Functional, j: usize, zeroed: &[usize]) -> Result<(usize, Rational)> {
    let keeps_zeroed = |terms: &[Vec<Rational>], t: &Rational| {
        zeroed.iter().all(|&z| coordinate_poly(terms, z).eval(t).is_zero())
    };
    let all_terms: Vec<Vec<Vec<Rational>>> = coads.iter().map(|c| series_terms(c, cur.coords())).collect();

    // affine steps first
    for (a, terms) in all_terms.iter().enumerate() {
        let p = coordinate_poly(terms, j);
        if p.degree() == Some(1) {
            let t = -p.coeffs()[0].clone() / p.coeffs()[1].clone();
            let untouched = zeroed
                .iter()
                .all(|&z| coordinate_poly(terms, z).degree().is_none_or(|d| d == 0));
            if untouched && keeps_zeroed(terms, &t) {
                return Ok((a, t));
            }
        }
    }
    // fallback: any rational zero that keeps earlier zeros
    let mut first_nonconstant = None;
    for (a, terms) in all_terms.iter().enumerate() {
        let p = coordinate_poly(terms, j);
        if p.degree().is_some_and(|d| d >= 1) {
            first_nonconstant.get_or_insert_with(|| p.clone());
            for t in p.rational_roots().unwrap_or_default() {
                if keeps_zeroed(terms, &t) {
                    return Ok((a, t));
                }
            }
        }
    }
    Err(Error::ZeroingStepUnsolvable {
        index: j + 1,
        polynomial: first_nonconstant
            .unwrap_or_else(|| Poly::new(vec![cur.coords()[j].clone()]))
            .to_string(),
    })
}
