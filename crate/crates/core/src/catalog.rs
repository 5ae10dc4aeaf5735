//! Built-in example algebras.

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::scalar::{int, parse_rational, Rational};

/// Names accepted by [`lookup`] (parametrized families shown with a
/// representative).
pub const NAMES: &[&str] = &[
    "abelian1",
    "abelian2",
    "abelian3",
    "abelian4",
    "heisenberg3",
    "heisenberg5",
    "filiform4",
    "free2step3",
    "axb",
    "diag3",
    "noflag",
];

fn unit(m: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![int(0); m];
    v[k] = int(1);
    v
}

fn build(name: &str, names: Vec<String>, brackets: &[(usize, usize, Vec<Rational>)]) -> LieAlgebra {
    LieAlgebra::from_brackets(name, names, brackets).expect("catalog algebras are valid")
}

pub fn abelian(n: usize) -> LieAlgebra {
    assert!(n > 0);
    build(
        &format!("abelian{n}"),
        (1..=n).map(|i| format!("E{i}")).collect(),
        &[],
    )
}

/// `h_{2n+1}` with basis `X1..Xn, Y1..Yn, Z` and `[Xi, Yi] = Z`
/// (plain `X, Y, Z` when `n = 1`).
pub fn heisenberg(n: usize) -> LieAlgebra {
    assert!(n > 0);
    let m = 2 * n + 1;
    let names: Vec<String> = if n == 1 {
        vec!["X".into(), "Y".into(), "Z".into()]
    } else {
        (1..=n)
            .map(|i| format!("X{i}"))
            .chain((1..=n).map(|i| format!("Y{i}")))
            .chain(["Z".to_string()])
            .collect()
    };
    let brackets: Vec<_> = (0..n).map(|i| (i, n + i, unit(m, m - 1))).collect();
    build(&format!("heisenberg{m}"), names, &brackets)
}

/// `[X1, X2] = X3`, `[X1, X3] = X4`.
pub fn filiform4() -> LieAlgebra {
    build(
        "filiform4",
        vec!["X1".into(), "X2".into(), "X3".into(), "X4".into()],
        &[(0, 1, unit(4, 2)), (0, 2, unit(4, 3))],
    )
}

/// Free 2-step nilpotent algebra on three generators.
pub fn free2step3() -> LieAlgebra {
    build(
        "free2step3",
        ["X1", "X2", "X3", "Z12", "Z13", "Z23"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        &[(0, 1, unit(6, 3)), (0, 2, unit(6, 4)), (1, 2, unit(6, 5))],
    )
}

/// The `ax+b` algebra: `[A, Y] = Y`.
pub fn axb() -> LieAlgebra {
    build("axb", vec!["A".into(), "Y".into()], &[(0, 1, unit(2, 1))])
}

/// `[A, X] = X`, `[A, Y] = λY`.
pub fn diag3(lambda: Rational) -> LieAlgebra {
    let y = {
        let mut v = vec![int(0); 3];
        v[2] = lambda.clone();
        v
    };
    build(
        &format!("diag3:{lambda}"),
        vec!["A".into(), "X".into(), "Y".into()],
        &[(0, 1, unit(3, 1)), (0, 2, y)],
    )
}

/// `[A, X] = Y`, `[A, Y] = 2X`: completely solvable over the reals but
/// `ad(A)` has eigenvalues `±√2`, so no flag exists over the rationals.
pub fn no_rational_flag() -> LieAlgebra {
    build(
        "noflag",
        vec!["A".into(), "X".into(), "Y".into()],
        &[(0, 1, unit(3, 2)), (0, 2, {
            let mut v = vec![int(0); 3];
            v[1] = int(2);
            v
        })],
    )
}

/// Resolves a catalog name such as `heisenberg5`, `abelian7` or
/// `diag3:-1/2`.
pub fn lookup(name: &str) -> Result<LieAlgebra> {
    let unknown = || Error::Parse(format!("unknown catalog algebra {name:?}"));
    let numeric_suffix = |prefix: &str| -> Option<usize> {
        name.strip_prefix(prefix)
            .filter(|s| !s.is_empty() && s.len() <= 3)
            .and_then(|s| s.parse().ok())
    };
    match name {
        "filiform4" => Ok(filiform4()),
        "free2step3" => Ok(free2step3()),
        "axb" => Ok(axb()),
        "diag3" => Ok(diag3(int(2))),
        "noflag" => Ok(no_rational_flag()),
        _ => {
            if let Some(lambda) = name.strip_prefix("diag3:") {
                return Ok(diag3(parse_rational(lambda)?));
            }
            if let Some(n) = numeric_suffix("abelian") {
                if (1..=64).contains(&n) {
                    return Ok(abelian(n));
                }
            }
            if let Some(m) = numeric_suffix("heisenberg") {
                if m >= 3 && m % 2 == 1 && m <= 63 {
                    return Ok(heisenberg((m - 1) / 2));
                }
            }
            Err(unknown())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_resolves() {
        for n in NAMES {
            let alg = lookup(n).unwrap();
            assert!(alg.dim() > 0);
        }
        assert_eq!(lookup("heisenberg7").unwrap().dim(), 7);
        assert_eq!(lookup("diag3:-1/2").unwrap().dim(), 3);
        assert!(lookup("heisenberg4").is_err());
        assert!(lookup("abelian0").is_err());
        assert!(lookup("sl2").is_err());
    }
}
