//! Exact dense linear algebra and canonical subspaces.
//!
//! A [`Subspace`] is stored as the nonzero rows of its reduced row-echelon
//! form, so two values describe the same subspace iff they compare equal.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Rational, Scalar};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(num_traits::Zero::is_zero)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (i..self.cols).all(|j| self[(i, j)].clone() + self[(j, i)].clone() == F::zero())
            })
    }

    /// True iff some power of the matrix vanishes.
    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        let mut p = self.clone();
        for _ in 0..self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self);
        }
        p.is_zero()
    }

    /// `u^T M w`.
    pub fn bilinear(&self, u: &[F], w: &[F]) -> F {
        dot(u, &self.mul_vec(w))
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rref(self.to_rows(), self.cols).1.len()
    }

    /// Exact inverse, or `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let augmented: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
                r
            })
            .collect();
        let (rows, pivots) = rref(augmented, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Matrix::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect(), n).ok()
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix<Rational> {
    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| rational_to_f64(&self[(i, j)]))
    }
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x.clone() * y.clone()
        }
    })
}

pub fn axpy<F: Scalar>(alpha: &F, x: &[F], y: &mut [F]) {
    if alpha.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = yi.clone() + alpha.clone() * xi.clone();
        }
    }
}

pub fn unit_vector<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

pub fn embed<F: Scalar>(v: &[Rational]) -> Vec<F> {
    v.iter().map(F::from_rational).collect()
}

/// Reduced row-echelon form. Zero rows are dropped; returns the rows and
/// their pivot columns (strictly increasing).
pub fn rref<F: Scalar>(mut rows: Vec<Vec<F>>, ncols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one() / rows[r][col].clone();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = -row[col].clone();
                axpy(&f, &pivot_row, row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows.
pub fn kernel<F: Scalar>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let (red, pivots) = rref(rows.to_vec(), ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(); ncols];
            v[free] = F::one();
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// A linear subspace of `F^n` in canonical (RREF) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Scalar> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, ambient)
    }

    /// `span(e_1, …, e_j)`.
    pub fn coordinate(ambient: usize, j: usize) -> Self {
        Self {
            ambient,
            basis: (0..j).map(|i| unit_vector(ambient, i)).collect(),
        }
    }

    pub fn span(vectors: &[Vec<F>], ambient: usize) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
        let (basis, _) = rref(vectors.to_vec(), ambient);
        Ok(Self { ambient, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(&rows, self.ambient)
    }

    /// Linear functionals (as coordinate vectors) vanishing on the subspace.
    pub fn annihilator(&self) -> Self {
        let ker = kernel(&self.basis, self.ambient);
        let (basis, _) = rref(ker, self.ambient);
        Self {
            ambient: self.ambient,
            basis,
        }
    }

    /// Intersection as the common kernel of both annihilators.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut constraints = self.annihilator().basis;
        constraints.extend(other.annihilator().basis);
        Self::span(&kernel(&constraints, self.ambient), self.ambient)
    }

    pub fn contains(&self, v: &[F]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(self.reduce(v).iter().all(num_traits::Zero::is_zero))
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Remainder of `v` after eliminating the pivot coordinates.
    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut r = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if !r[p].is_zero() {
                let f = -r[p].clone();
                axpy(&f, row, &mut r);
            }
        }
        r
    }

    /// Coordinates of `v` in the stored basis; fails if `v` is outside.
    pub fn coordinates(&self, v: &[F]) -> Result<Vec<F>> {
        if !self.contains(v)? {
            return Err(Error::NotInSubspace);
        }
        Ok(self
            .basis
            .iter()
            .map(|row| {
                let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
                v[p].clone()
            })
            .collect())
    }

    /// `{u ∈ within : form(u, w) = 0 for all w ∈ self}`.
    pub fn perp_wrt_form(&self, form: &Matrix<F>, within: &Self) -> Result<Self> {
        self.check_same(within)?;
        if form.nrows() != self.ambient || form.ncols() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: form.nrows(),
            });
        }
        if !form.is_skew() {
            return Err(Error::NotSkew);
        }
        let images: Vec<Vec<F>> = self.basis.iter().map(|w| form.mul_vec(w)).collect();
        // constraint[w][i] = a_i^T B w
        let constraints: Vec<Vec<F>> = images
            .iter()
            .map(|bw| within.basis.iter().map(|a| dot(a, bw)).collect())
            .collect();
        let coeffs = kernel(&constraints, within.dim());
        let vectors: Vec<Vec<F>> = coeffs
            .iter()
            .map(|c| {
                let mut u = vec![F::zero(); self.ambient];
                for (ci, a) in c.iter().zip(&within.basis) {
                    axpy(ci, a, &mut u);
                }
                u
            })
            .collect();
        Self::span(&vectors, self.ambient)
    }

    /// True iff `form(u, w) = 0` for all `u ∈ self`, `w ∈ other`.
    pub fn is_orthogonal_to(&self, form: &Matrix<F>, other: &Self) -> bool {
        self.basis
            .iter()
            .all(|u| other.basis.iter().all(|w| form.bilinear(u, w).is_zero()))
    }

    /// Image under the field embedding `Q → F`.
    pub fn embed_from(sub: &Subspace<Rational>) -> Self {
        Self {
            ambient: sub.ambient,
            basis: sub.basis.iter().map(|r| embed(r)).collect(),
        }
    }
}

impl Subspace<Rational> {
    /// Orthogonal projection onto the subspace, computed exactly.
    pub fn projection(&self) -> Matrix<Rational> {
        let n = self.ambient;
        if self.basis.is_empty() {
            return Matrix::zeros(n, n);
        }
        let a = Matrix::from_rows(self.basis.clone(), n).expect("consistent rows");
        let at = a.transpose();
        let gram_inv = a.mul(&at).inverse().expect("basis rows are independent");
        at.mul(&gram_inv).mul(&a)
    }
}

impl<F: Scalar> fmt::Display for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (k, row) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

/// Serialized form: ambient dimension plus basis rows as rational strings.
#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient: usize,
    basis: Vec<Vec<String>>,
}

impl Serialize for Subspace<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient: self.ambient,
            basis: self
                .basis
                .iter()
                .map(|r| r.iter().map(crate::scalar::format_rational).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        let rows = repr
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| crate::scalar::parse_rational(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Subspace::span(&rows, repr.ambient).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn span_examples() {
        let z = Subspace::<Rational>::span(&[], 3).unwrap();
        assert_eq!(z.dim(), 0);
        let line = Subspace::span(&[v(&[1, 0, 0]), v(&[2, 0, 0])], 3).unwrap();
        assert_eq!(line.basis(), &[v(&[1, 0, 0])]);
        let plane = Subspace::span(&[v(&[1, 1, 0]), v(&[0, 1, 1])], 3).unwrap();
        assert_eq!(plane.basis(), &[v(&[1, 0, -1]), v(&[0, 1, 1])]);
        assert!(Subspace::span(&[v(&[1, 0])], 3).is_err());
    }

    #[test]
    fn sum_and_intersect_examples() {
        let x = Subspace::span(&[v(&[1, 0, 0])], 3).unwrap();
        let y = Subspace::span(&[v(&[0, 1, 0])], 3).unwrap();
        let zero = Subspace::zero(3);
        assert_eq!(x.sum(&zero).unwrap(), x);
        assert_eq!(x.sum(&y).unwrap(), Subspace::coordinate(3, 2));

        let xy = Subspace::span(&[v(&[1, 0, 0]), v(&[0, 1, 0])], 3).unwrap();
        let yz = Subspace::span(&[v(&[0, 1, 0]), v(&[0, 0, 1])], 3).unwrap();
        assert_eq!(xy.intersect(&yz).unwrap(), y);
        assert_eq!(xy.intersect(&Subspace::full(3)).unwrap(), xy);
        assert!(xy.intersect(&Subspace::full(2)).is_err());
    }

    #[test]
    fn membership() {
        let zero = Subspace::<Rational>::zero(3);
        assert!(zero.contains(&v(&[0, 0, 0])).unwrap());
        let x = Subspace::span(&[v(&[1, 0, 0])], 3).unwrap();
        assert!(!x.contains(&v(&[0, 1, 0])).unwrap());
        assert!(x.contains(&v(&[0, 1])).is_err());
    }

    #[test]
    fn perp_examples() {
        let plane = Subspace::<Rational>::full(2);
        let xaxis = Subspace::span(&[v(&[1, 0])], 2).unwrap();
        let zero_form = Matrix::zeros(2, 2);
        assert_eq!(xaxis.perp_wrt_form(&zero_form, &plane).unwrap(), plane);
        let sympl = Matrix::from_rows(vec![v(&[0, 1]), v(&[-1, 0])], 2).unwrap();
        assert_eq!(xaxis.perp_wrt_form(&sympl, &plane).unwrap(), xaxis);
        let not_skew = Matrix::from_rows(vec![v(&[1, 0]), v(&[0, 0])], 2).unwrap();
        assert_eq!(xaxis.perp_wrt_form(&not_skew, &plane), Err(Error::NotSkew));
    }

    #[test]
    fn inverse_and_projection() {
        let m = Matrix::from_rows(vec![v(&[2, 1]), v(&[1, 1])], 2).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let singular = Matrix::from_rows(vec![v(&[1, 2]), v(&[2, 4])], 2).unwrap();
        assert!(singular.inverse().is_none());

        let diag = Subspace::span(&[v(&[1, 1])], 2).unwrap();
        let p = diag.projection();
        assert_eq!(p.mul(&p), p);
        assert_eq!(p[(0, 1)], crate::scalar::frac(1, 2));
    }

    #[test]
    fn coordinates_in_basis() {
        let plane = Subspace::span(&[v(&[1, 1, 0]), v(&[0, 1, 1])], 3).unwrap();
        let w = v(&[2, 5, 3]);
        let c = plane.coordinates(&w).unwrap();
        let mut back = vec![int(0); 3];
        for (ci, b) in c.iter().zip(plane.basis()) {
            axpy(ci, b, &mut back);
        }
        assert_eq!(back, w);
        assert_eq!(plane.coordinates(&v(&[1, 0, 0])), Err(Error::NotInSubspace));
    }
}
