//! Connected closed subgroups through their subalgebras, modular exponents
//! of subgroups, and the projection gap between subspaces.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::lie::{Functional, LieAlgebra};
use crate::linalg::Subspace;
use crate::scalar::Rational;

/// A subgroup `exp(k)`, represented by its subalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupDescriptor {
    pub subalgebra: Subspace<Rational>,
    /// `y ↦ tr(ad_g y) − tr(ad_k y)` in coordinates of the stored basis of `k`.
    pub relative_exponent: Vec<Rational>,
    /// `x ↦ tr(ad_g x)` on all of `g`.
    pub ambient_exponent: Functional,
}

pub fn subgroup_from_subalgebra(algebra: &LieAlgebra, k: &Subspace<Rational>) -> Result<SubgroupDescriptor> {
    let relative_exponent = algebra.relative_modular_exponent(k)?;
    Ok(SubgroupDescriptor {
        subalgebra: k.clone(),
        relative_exponent,
        ambient_exponent: algebra.modular_exponent(),
    })
}

/// `r` with `ρ_K(exp y) = e^r`.
pub fn rho_exponent(descriptor: &SubgroupDescriptor, y: &[Rational]) -> Result<Rational> {
    let coords = descriptor.subalgebra.coordinates(y)?;
    Ok(coords
        .iter()
        .zip(&descriptor.relative_exponent)
        .map(|(a, b)| a * b)
        .sum())
}

/// `‖P_1 − P_2‖` for the orthogonal projections; `1` when the dimensions
/// differ.
pub fn grassmann_gap(k1: &Subspace<Rational>, k2: &Subspace<Rational>) -> Result<f64> {
    if k1.ambient_dim() != k2.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: k1.ambient_dim(),
            right: k2.ambient_dim(),
        });
    }
    if k1 == k2 {
        return Ok(0.0);
    }
    if k1.dim() != k2.dim() {
        return Ok(1.0);
    }
    let diff = k1.projection().to_f64() - k2.projection().to_f64();
    let eig = SymmetricEigen::new(diff);
    Ok(eig.eigenvalues.iter().fold(0f64, |acc, v| acc.max(v.abs())).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::int;

    fn span(rows: &[&[i64]], m: usize) -> Subspace<Rational> {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Subspace::span(&rows, m).unwrap()
    }

    #[test]
    fn subgroup_examples() {
        let h3 = catalog::heisenberg(1);
        let g = subgroup_from_subalgebra(&h3, &Subspace::full(3)).unwrap();
        assert!(g.relative_exponent.iter().all(|r| *r == int(0)));
        // basis X, Y, Z
        let zy = subgroup_from_subalgebra(&h3, &span(&[&[0, 0, 1], &[0, 1, 0]], 3)).unwrap();
        assert_eq!(rho_exponent(&zy, &[int(0), int(3), int(-2)]).unwrap(), int(0));
        match subgroup_from_subalgebra(&h3, &span(&[&[1, 0, 0], &[0, 1, 0]], 3)) {
            Err(Error::NotASubalgebra { x, y }) => assert_eq!((x.as_str(), y.as_str()), ("X", "Y")),
            other => panic!("{other:?}"),
        }
        assert!(rho_exponent(&zy, &[int(1), int(0), int(0)]).is_err());
    }

    #[test]
    fn rho_on_axb() {
        let axb = catalog::axb();
        let y = subgroup_from_subalgebra(&axb, &span(&[&[0, 1]], 2)).unwrap();
        assert_eq!(rho_exponent(&y, &[int(0), int(5)]).unwrap(), int(0));
        // k = span{A}: tr ad_g(A) = 1, tr ad_k(A) = 0
        let a = subgroup_from_subalgebra(&axb, &span(&[&[1, 0]], 2)).unwrap();
        assert_eq!(rho_exponent(&a, &[int(2), int(0)]).unwrap(), int(2));
        let full = subgroup_from_subalgebra(&axb, &Subspace::full(2)).unwrap();
        assert_eq!(rho_exponent(&full, &[int(2), int(7)]).unwrap(), int(0));
    }

    #[test]
    fn gap_examples() {
        let x = span(&[&[1, 0]], 2);
        let y = span(&[&[0, 1]], 2);
        assert_eq!(grassmann_gap(&x, &x).unwrap(), 0.0);
        assert!((grassmann_gap(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        let diag = span(&[&[1, 1]], 2);
        assert!((grassmann_gap(&x, &diag).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(grassmann_gap(&x, &Subspace::full(2)).unwrap(), 1.0);
    }
}
