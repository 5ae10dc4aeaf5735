//! Skew forms `B_ξ(x, y) = ξ([x, y])`, restricted radicals, jump sets, and
//! the fine and ultrafine labels of a functional.
//!
//! All indices exposed in labels are 1-based flag positions.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{root_kernel, Functional, JordanHolderFlag};
use crate::linalg::{embed, unit_vector, Matrix, Subspace};
use crate::polarize::{descending_sequence_of, PolarizationTrace};
use crate::scalar::{GaussianRational, Rational, Scalar};

/// `B_ξ` in flag coordinates: entry `(i, j)` is `ξ([f_i, f_j])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm<F>(Matrix<F>);

impl<F: Scalar> SkewForm<F> {
    pub fn matrix(&self) -> &Matrix<F> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `N(B_j) = {x ∈ g_j : B(x, g_j) = 0}`.
    pub fn restricted_radical(&self, j: usize) -> Subspace<F> {
        let gj = Subspace::coordinate(self.dim(), j);
        gj.perp_wrt_form(&self.0, &gj).expect("same ambient, skew form")
    }

    /// The radical `g(ξ)` of the whole form.
    pub fn radical(&self) -> Subspace<F> {
        self.restricted_radical(self.dim())
    }
}

pub fn form_of<F: Scalar>(flag: &JordanHolderFlag, xi: &[F]) -> Result<SkewForm<F>> {
    let m = flag.dim();
    if xi.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: xi.len(),
        });
    }
    let a = flag.adapted();
    let mut b = Matrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let v = a
                .structure_constant(i, j)
                .iter()
                .zip(xi)
                .filter(|(c, x)| !c.is_zero() && !x.is_zero())
                .fold(F::zero(), |acc, (c, x)| acc + F::from_rational(c) * x.clone());
            b[(j, i)] = -v.clone();
            b[(i, j)] = v;
        }
    }
    Ok(SkewForm(b))
}

pub fn restricted_radical(flag: &JordanHolderFlag, xi: &Functional, j: usize) -> Result<Subspace<Rational>> {
    if j == 0 || j > flag.dim() {
        return Err(Error::DimensionMismatch {
            expected: flag.dim(),
            found: j,
        });
    }
    Ok(form_of(flag, xi.coords())?.restricted_radical(j))
}

/// `k_j = dim g_j(ξ|g_j)` for `j = 1..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FineIndex(pub Vec<usize>);

impl FineIndex {
    pub fn of_form<F: Scalar>(form: &SkewForm<F>) -> Self {
        Self((1..=form.dim()).map(|j| form.restricted_radical(j).dim()).collect())
    }

    /// The stabilizer dimension `k_m`.
    pub fn stabilizer_dim(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn is_admissible(&self) -> bool {
        self.0.iter().enumerate().all(|(j, &k)| k <= j + 1)
    }
}

pub fn fine_index(flag: &JordanHolderFlag, xi: &Functional) -> Result<FineIndex> {
    Ok(FineIndex::of_form(&form_of(flag, xi.coords())?))
}

/// `{j : f_j ∉ g_{j−1} + W}`, 1-based.
pub fn jump_set<F: Scalar>(w: &Subspace<F>) -> Vec<usize> {
    let m = w.ambient_dim();
    let mut acc = w.clone();
    let mut out = Vec::new();
    for j in 0..m {
        let ej = unit_vector::<F>(m, j);
        if !acc.contains(&ej).expect("same ambient") {
            out.push(j + 1);
        }
        acc = acc
            .sum(&Subspace::span(&[ej], m).expect("same ambient"))
            .expect("same ambient");
    }
    out
}

/// The triple `(e, j, b)`: jump set of `g(ξ)`, the index map `k ↦ j_k`, and
/// the root condition set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UltrafineLabel {
    pub e: Vec<usize>,
    pub jmap: Vec<usize>,
    pub b: Vec<usize>,
}

impl UltrafineLabel {
    /// Orbit half-dimension `d`.
    pub fn half_dim(&self) -> usize {
        self.jmap.len()
    }

    pub fn is_character(&self) -> bool {
        self.e.is_empty()
    }

    /// Structural checks: `card e = 2d`, `jmap` injective into `e`,
    /// `b ⊆ {1..d}`.
    pub fn is_well_formed(&self) -> bool {
        let d = self.jmap.len();
        let mut seen = std::collections::BTreeSet::new();
        self.e.len() == 2 * d
            && self.jmap.iter().all(|j| self.e.contains(j) && seen.insert(*j))
            && self.b.iter().all(|&k| (1..=d).contains(&k))
    }
}

/// Fine index together with the ultrafine triple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "LabelRepr", try_from = "LabelRepr")]
pub struct LayerLabel {
    pub fine: FineIndex,
    pub ultrafine: UltrafineLabel,
}

impl LayerLabel {
    pub fn orbit_dim(&self) -> usize {
        self.ultrafine.e.len()
    }

    pub fn is_character(&self) -> bool {
        self.ultrafine.is_character()
    }
}

#[derive(Serialize, Deserialize)]
struct LabelRepr {
    k: Vec<usize>,
    e: Vec<usize>,
    jmap: BTreeMap<usize, usize>,
    b: Vec<usize>,
}

impl From<LayerLabel> for LabelRepr {
    fn from(l: LayerLabel) -> Self {
        Self {
            k: l.fine.0,
            e: l.ultrafine.e,
            jmap: l
                .ultrafine
                .jmap
                .iter()
                .enumerate()
                .map(|(k, &j)| (k + 1, j))
                .collect(),
            b: l.ultrafine.b,
        }
    }
}

impl TryFrom<LabelRepr> for LayerLabel {
    type Error = String;
    fn try_from(r: LabelRepr) -> std::result::Result<Self, String> {
        let d = r.jmap.len();
        if r.jmap.keys().copied().ne(1..=d) {
            return Err("jmap keys must be 1..d".into());
        }
        let label = LayerLabel {
            fine: FineIndex(r.k),
            ultrafine: UltrafineLabel {
                e: r.e,
                jmap: r.jmap.into_values().collect(),
                b: r.b,
            },
        };
        if !label.ultrafine.is_well_formed() || !label.fine.is_admissible() {
            return Err("malformed layer label".into());
        }
        Ok(label)
    }
}

/// Everything computed while classifying one functional.
#[derive(Clone, Debug)]
pub struct Classification<F> {
    pub form: SkewForm<F>,
    pub fine: FineIndex,
    pub stabilizer: Subspace<F>,
    pub trace: PolarizationTrace<F>,
    pub label: UltrafineLabel,
}

impl<F: Scalar> Classification<F> {
    pub fn layer_label(&self) -> LayerLabel {
        LayerLabel {
            fine: self.fine.clone(),
            ultrafine: self.label.clone(),
        }
    }
}

/// Runs the whole stratification pipeline over the field `F`.
pub fn classify<F: Scalar>(
    flag: &JordanHolderFlag,
    roots: &[Functional],
    xi: &[F],
) -> Result<Classification<F>> {
    let m = flag.dim();
    if roots.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: roots.len(),
        });
    }
    let form = form_of(flag, xi)?;
    let fine = FineIndex::of_form(&form);
    let stabilizer = form.radical();
    let trace = descending_sequence_of(&form)?;
    let e = jump_set(&stabilizer);
    let d = trace.half_dim();
    if e.len() != 2 * d || fine.stabilizer_dim() != stabilizer.dim() {
        return Err(Error::InvariantViolation(format!(
            "card e = {} but descending sequence has {d} steps",
            e.len()
        )));
    }
    let mut b = Vec::new();
    for k in 1..=d {
        let root = &roots[trace.i[k - 1] - 1];
        let cut = trace.chain[k - 1].intersect(&root_kernel::<F>(root))?;
        if cut == trace.chain[k] {
            b.push(k);
        }
    }
    let label = UltrafineLabel {
        e,
        jmap: trace.j.clone(),
        b,
    };
    Ok(Classification {
        form,
        fine,
        stabilizer,
        trace,
        label,
    })
}

pub fn ultrafine_label(flag: &JordanHolderFlag, roots: &[Functional], xi: &Functional) -> Result<UltrafineLabel> {
    Ok(classify(flag, roots, xi.coords())?.label)
}

pub fn layer_label(flag: &JordanHolderFlag, roots: &[Functional], xi: &Functional) -> Result<LayerLabel> {
    Ok(classify(flag, roots, xi.coords())?.layer_label())
}

/// The same pipeline run over `Q(i)` on the complexified data.
pub fn complexified_label(
    flag: &JordanHolderFlag,
    roots: &[Functional],
    xi: &Functional,
) -> Result<UltrafineLabel> {
    let xi_c: Vec<GaussianRational> = embed(xi.coords());
    Ok(classify(flag, roots, &xi_c)?.label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::{find_jh_flag, roots};
    use crate::scalar::int;

    fn f(xs: &[i64]) -> Functional {
        Functional(xs.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn form_examples() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        assert!(form_of(&flag, f(&[0, 0, 0]).coords()).unwrap().is_zero());
        // flag (Z, Y, X), ξ = Z*
        let b = form_of(&flag, f(&[1, 0, 0]).coords()).unwrap();
        assert_eq!(b.matrix()[(1, 2)], int(-1));
        assert_eq!(b.matrix()[(2, 1)], int(1));
        assert_eq!(b.rank(), 2);

        let axb = find_jh_flag(&catalog::axb()).unwrap();
        let b = form_of(&axb, f(&[1, 0]).coords()).unwrap();
        // B(A, Y) = ξ([A, Y]) = 1
        assert_eq!(b.matrix()[(1, 0)], int(1));
        assert!(form_of(&axb, f(&[1, 0, 0]).coords()).is_err());
    }

    #[test]
    fn radical_examples() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let z = restricted_radical(&flag, &f(&[1, 0, 0]), 3).unwrap();
        assert_eq!(z, Subspace::coordinate(3, 1));
        assert_eq!(restricted_radical(&flag, &f(&[5, 1, 2]), 2).unwrap(), Subspace::coordinate(3, 2));
        let axb = find_jh_flag(&catalog::axb()).unwrap();
        assert!(restricted_radical(&axb, &f(&[1, 0]), 2).unwrap().is_zero());
        assert!(restricted_radical(&axb, &f(&[1, 0]), 0).is_err());
    }

    #[test]
    fn fine_index_examples() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        assert_eq!(fine_index(&flag, &f(&[1, 0, 0])).unwrap(), FineIndex(vec![1, 2, 1]));
        assert_eq!(fine_index(&flag, &f(&[0, 0, 1])).unwrap(), FineIndex(vec![1, 2, 3]));
        let axb = find_jh_flag(&catalog::axb()).unwrap();
        assert_eq!(fine_index(&axb, &f(&[1, 0])).unwrap(), FineIndex(vec![1, 0]));
    }

    #[test]
    fn jump_set_examples() {
        assert_eq!(jump_set(&Subspace::<Rational>::full(3)), Vec::<usize>::new());
        assert_eq!(jump_set(&Subspace::<Rational>::zero(3)), vec![1, 2, 3]);
        assert_eq!(jump_set(&Subspace::<Rational>::coordinate(3, 1)), vec![2, 3]);
    }

    #[test]
    fn ultrafine_examples() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let r = roots(&flag);
        let l = ultrafine_label(&flag, &r, &f(&[1, 0, 0])).unwrap();
        assert_eq!(l, UltrafineLabel { e: vec![2, 3], jmap: vec![3], b: vec![] });
        assert_eq!(complexified_label(&flag, &r, &f(&[1, 0, 0])).unwrap(), l);

        let zero = ultrafine_label(&flag, &r, &f(&[0, 0, 0])).unwrap();
        assert!(zero.is_character());
        assert_eq!(complexified_label(&flag, &r, &f(&[0, 0, 0])).unwrap(), zero);

        let axb = find_jh_flag(&catalog::axb()).unwrap();
        let ra = roots(&axb);
        let l = ultrafine_label(&axb, &ra, &f(&[1, 0])).unwrap();
        assert_eq!(l, UltrafineLabel { e: vec![1, 2], jmap: vec![2], b: vec![1] });
    }

    #[test]
    fn label_json_shape() {
        let flag = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let l = layer_label(&flag, &roots(&flag), &f(&[1, 0, 0])).unwrap();
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(json, r#"{"k":[1,2,1],"e":[2,3],"jmap":{"1":3},"b":[]}"#);
        let back: LayerLabel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<LayerLabel>(r#"{"k":[1],"e":[1],"jmap":{},"b":[]}"#).is_err());
    }
}
