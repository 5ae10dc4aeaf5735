//! The Vergne polarization `p(B) = Σ N(B_j)`, its descending recursion
//! `p^0 ⊋ p^1 ⊋ ⋯ ⊋ p^d`, and checks that a subspace is a polarization.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{Functional, JordanHolderFlag, LieAlgebra};
use crate::linalg::{Matrix, Subspace};
use crate::orbits::{coadjoint_apply, CoadjointImage};
use crate::scalar::{frac, rational_to_f64, Rational, Scalar};
use crate::stratify::{form_of, jump_set, FineIndex, SkewForm};
use crate::subgroup::grassmann_gap;

/// The recursion of a skew form, with 1-based indices `i_k`, `j_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationTrace<F> {
    pub d: usize,
    pub chain: Vec<Subspace<F>>,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

impl<F: Scalar> PolarizationTrace<F> {
    pub fn half_dim(&self) -> usize {
        self.d
    }

    pub fn polarization(&self) -> &Subspace<F> {
        self.chain.last().expect("chain starts with g")
    }
}

/// `p(B) = N(B_1) + ⋯ + N(B_m)`.
pub fn vergne_polarization_of<F: Scalar>(form: &SkewForm<F>) -> Subspace<F> {
    let m = form.dim();
    (1..=m).fold(Subspace::zero(m), |acc, j| {
        acc.sum(&form.restricted_radical(j)).expect("same ambient")
    })
}

pub fn vergne_polarization(flag: &JordanHolderFlag, xi: &Functional) -> Result<Subspace<Rational>> {
    Ok(vergne_polarization_of(&form_of(flag, xi.coords())?))
}

fn restricted_is_zero<F: Scalar>(b: &Matrix<F>, u: &Subspace<F>, w: &Subspace<F>) -> bool {
    u.basis()
        .iter()
        .all(|x| w.basis().iter().all(|y| b.bilinear(x, y).is_zero()))
}

/// Runs the recursion on `B` and checks every index property on the way
/// out; a failure is reported as [`Error::InvariantViolation`].
pub fn descending_sequence_of<F: Scalar>(form: &SkewForm<F>) -> Result<PolarizationTrace<F>> {
    let m = form.dim();
    let b = form.matrix();
    let steps: Vec<Subspace<F>> = (0..=m).map(|j| Subspace::coordinate(m, j)).collect();

    let mut chain = vec![Subspace::full(m)];
    let mut is = Vec::new();
    let mut js = Vec::new();
    loop {
        let p = chain.last().expect("nonempty");
        if restricted_is_zero(b, p, p) {
            break;
        }
        let i = (1..=m)
            .find(|&i| {
                let cut = steps[i].intersect(p).expect("same ambient");
                !restricted_is_zero(b, &cut, p)
            })
            .expect("g ∩ p = p is not isotropic");
        let cut = steps[i].intersect(p).expect("same ambient");
        let next = cut.perp_wrt_form(b, p)?;
        let j = (1..=m)
            .find(|&j| {
                !steps[j]
                    .intersect(p)
                    .and_then(|s| s.is_subspace_of(&next))
                    .expect("same ambient")
            })
            .expect("p^{k+1} is a proper subspace");
        is.push(i);
        js.push(j);
        if next.dim() + 1 != p.dim() {
            return Err(Error::InvariantViolation(format!(
                "step {} dropped dimension from {} to {}",
                is.len(),
                p.dim(),
                next.dim()
            )));
        }
        chain.push(next);
    }
    let trace = PolarizationTrace {
        d: is.len(),
        chain,
        i: is,
        j: js,
    };
    check_trace(form, &trace)?;
    Ok(trace)
}

fn check_trace<F: Scalar>(form: &SkewForm<F>, t: &PolarizationTrace<F>) -> Result<()> {
    let fail = |what: &str| Err(Error::InvariantViolation(format!("descending sequence: {what}")));
    let m = form.dim();
    let p = vergne_polarization_of(form);
    if t.polarization() != &p {
        return fail("last term differs from the Vergne polarization");
    }
    if !t.i.windows(2).all(|w| w[0] < w[1]) {
        return fail("i_k not strictly increasing");
    }
    if t.i.iter().zip(&t.j).any(|(i, j)| i >= j) {
        return fail("i_k >= j_k");
    }
    let jump_p = jump_set(&p);
    let jump_n: Vec<usize> = jump_set(&form.radical())
        .into_iter()
        .filter(|x| !jump_p.contains(x))
        .collect();
    if t.i != jump_n {
        return fail("i-set differs from jump(N(B)) minus jump(p(B))");
    }
    let mut js = t.j.clone();
    js.sort_unstable();
    if js != jump_p {
        return fail("j-set differs from jump(p(B))");
    }
    if 2 * t.d != form.rank() || t.d != m - p.dim() {
        return fail("d differs from half the rank of B");
    }
    Ok(())
}

pub fn descending_sequence(flag: &JordanHolderFlag, xi: &Functional) -> Result<PolarizationTrace<Rational>> {
    descending_sequence_of(&form_of(flag, xi.coords())?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizationCheck {
    pub is_subalgebra: bool,
    pub is_isotropic: bool,
    pub has_polarization_dimension: bool,
    pub contains_stabilizer: bool,
}

impl PolarizationCheck {
    pub fn is_polarization(&self) -> bool {
        self.is_subalgebra && self.is_isotropic && self.has_polarization_dimension
    }
}

/// `p` and `ξ` in flag coordinates.
pub fn check_polarization(flag: &JordanHolderFlag, xi: &Functional, p: &Subspace<Rational>) -> Result<PolarizationCheck> {
    let alg = flag.adapted();
    if p.ambient_dim() != flag.dim() {
        return Err(Error::AmbientMismatch {
            left: flag.dim(),
            right: p.ambient_dim(),
        });
    }
    let form = form_of(flag, xi.coords())?;
    let stab = form.radical();
    Ok(PolarizationCheck {
        is_subalgebra: alg.subalgebra_violation(p)?.is_none(),
        is_isotropic: restricted_is_zero(form.matrix(), p, p),
        has_polarization_dimension: 2 * p.dim() == flag.dim() + stab.dim(),
        contains_stabilizer: stab.is_subspace_of(p)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PukanszkyReport {
    pub samples: usize,
    pub exact: bool,
    pub max_residual: f64,
    pub within_tolerance: bool,
    /// `dim p − dim(p ∩ g(ξ))` against `dim p^⊥ = m − dim p`.
    pub dimension_count_holds: bool,
}

/// Samples `y ∈ p` and checks `exp(y)·ξ − ξ` annihilates `p`.
pub fn pukanszky_containment_check(
    flag: &JordanHolderFlag,
    xi: &Functional,
    p: &Subspace<Rational>,
    samples: usize,
    tolerance: f64,
    seed: u64,
) -> Result<PukanszkyReport> {
    let alg: &LieAlgebra = flag.adapted();
    alg.check_subalgebra(p)?;
    let m = flag.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exact = true;
    let mut max_residual = 0f64;
    for s in 0..samples {
        let mut y = vec![Rational::zero(); m];
        if s > 0 {
            for v in p.basis() {
                let c = frac(rng.random_range(-3..=3), rng.random_range(1..=4));
                y.iter_mut().zip(v).for_each(|(a, b)| *a = a.clone() + c.clone() * b.clone());
            }
        }
        let img = coadjoint_apply(alg, &y, &crate::scalar::int(1), xi);
        let residual = match &img {
            CoadjointImage::Exact(eta) => {
                let diff = eta.sub(xi);
                p.basis()
                    .iter()
                    .map(|v| rational_to_f64(&diff.eval(v)).abs())
                    .fold(0f64, f64::max)
            }
            CoadjointImage::Approximate(eta) => {
                exact = false;
                p.basis()
                    .iter()
                    .map(|v| {
                        eta.iter()
                            .zip(xi.coords())
                            .zip(v)
                            .map(|((e, x), c)| (e - rational_to_f64(x)) * rational_to_f64(c))
                            .sum::<f64>()
                            .abs()
                    })
                    .fold(0f64, f64::max)
            }
        };
        max_residual = max_residual.max(residual);
    }
    let stab = form_of(flag, xi.coords())?.radical();
    let orbit_piece = p.dim() - p.intersect(&stab)?.dim();
    Ok(PukanszkyReport {
        samples,
        exact,
        max_residual,
        within_tolerance: if exact { max_residual == 0.0 } else { max_residual <= tolerance },
        dimension_count_holds: orbit_piece == m - p.dim(),
    })
}

/// Gaps between `p(ξ)` and `p(ξ + δ/2^s)` for `s = 1..=depth`, skipping
/// perturbations that leave the fine layer of `ξ`.
pub fn continuity_gaps(flag: &JordanHolderFlag, xi: &Functional, direction: &Functional, depth: u32) -> Result<Vec<f64>> {
    let base_form = form_of(flag, xi.coords())?;
    let base_k = FineIndex::of_form(&base_form);
    let base_p = vergne_polarization_of(&base_form);
    let mut gaps = Vec::new();
    for s in 1..=depth {
        let scale = Rational::new(1.into(), num_bigint::BigInt::from(2u8).pow(s));
        let moved = xi.add(&direction.scale(&scale));
        let form = form_of(flag, moved.coords())?;
        if FineIndex::of_form(&form) != base_k {
            continue;
        }
        gaps.push(grassmann_gap(&base_p, &vergne_polarization_of(&form))?);
    }
    Ok(gaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::find_jh_flag;
    use crate::scalar::int;

    fn f(xs: &[i64]) -> Functional {
        Functional(xs.iter().map(|&x| int(x)).collect())
    }

    fn span(rows: &[&[i64]], m: usize) -> Subspace<Rational> {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Subspace::span(&rows, m).unwrap()
    }

    #[test]
    fn polarization_examples() {
        let h3 = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        // flag (Z, Y, X): span{Z, Y} = g_2
        assert_eq!(vergne_polarization(&h3, &f(&[1, 0, 0])).unwrap(), Subspace::coordinate(3, 2));
        assert!(vergne_polarization(&h3, &f(&[0, 4, -1])).unwrap().is_full());
        let axb = find_jh_flag(&catalog::axb()).unwrap();
        assert_eq!(vergne_polarization(&axb, &f(&[1, 0])).unwrap(), Subspace::coordinate(2, 1));
    }

    #[test]
    fn descending_examples() {
        let h3 = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let t = descending_sequence(&h3, &f(&[1, 0, 0])).unwrap();
        assert_eq!((t.d, t.i.clone(), t.j.clone()), (1, vec![2], vec![3]));
        assert_eq!(t.chain[1], Subspace::coordinate(3, 2));

        let t0 = descending_sequence(&h3, &f(&[0, 1, 1])).unwrap();
        assert_eq!(t0.d, 0);
        assert_eq!(t0.chain, vec![Subspace::full(3)]);

        let axb = find_jh_flag(&catalog::axb()).unwrap();
        let t = descending_sequence(&axb, &f(&[1, 0])).unwrap();
        assert_eq!((t.d, t.i.clone(), t.j.clone()), (1, vec![1], vec![2]));
        assert_eq!(t.chain[1], Subspace::coordinate(2, 1));
    }

    #[test]
    fn check_examples() {
        let h3 = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let zstar = f(&[1, 0, 0]);
        let c = check_polarization(&h3, &zstar, &span(&[&[1, 0, 0], &[0, 1, 0]], 3)).unwrap();
        assert!(c.is_polarization() && c.contains_stabilizer);
        let c = check_polarization(&h3, &zstar, &Subspace::full(3)).unwrap();
        assert!(c.is_subalgebra && !c.is_isotropic);
        let c = check_polarization(&h3, &f(&[0, 0, 0]), &Subspace::full(3)).unwrap();
        assert!(c.is_polarization() && c.contains_stabilizer);
    }

    #[test]
    fn pukanszky_examples() {
        let h3 = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let p = Subspace::coordinate(3, 2);
        let r = pukanszky_containment_check(&h3, &f(&[1, 0, 0]), &p, 50, 1e-9, 0).unwrap();
        assert!(r.exact && r.max_residual == 0.0 && r.within_tolerance && r.dimension_count_holds);

        let axb = find_jh_flag(&catalog::axb()).unwrap();
        let r = pukanszky_containment_check(&axb, &f(&[1, 0]), &Subspace::coordinate(2, 1), 200, 1e-9, 0).unwrap();
        assert!(r.within_tolerance && r.max_residual < 1e-9 && r.dimension_count_holds);

        let not_sub = span(&[&[0, 1, 0], &[0, 0, 1]], 3);
        assert!(pukanszky_containment_check(&h3, &f(&[1, 0, 0]), &not_sub, 5, 1e-9, 0).is_err());
    }

    #[test]
    fn continuity_on_generic_heisenberg_layer() {
        let h3 = find_jh_flag(&catalog::heisenberg(1)).unwrap();
        let gaps = continuity_gaps(&h3, &f(&[1, 2, 3]), &f(&[1, -1, 2]), 12).unwrap();
        assert_eq!(gaps.len(), 12);
        assert!(gaps.iter().all(|g| *g < 1e-12));
    }
}
