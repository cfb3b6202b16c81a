//! Built-in algebras and contraction fixtures.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::contraction::ContractionFamily;
use crate::lie::{BasisChange, LieAlgebra};
use crate::scalar_poly::{int, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{name}`; available: {}", available.join(", "))]
    UnknownName { name: String, available: Vec<&'static str> },
    #[error("`{name}` expects {expected} integer parameter(s), got {found}")]
    ParamCount { name: String, expected: usize, found: usize },
    #[error("`{name}` requires n >= {min}")]
    ParamRange { name: String, min: usize },
}

/// Names accepted by [`build`].
pub const NAMES: [&str; 5] = ["abelian", "heisenberg", "frobenius_model", "sl2", "so3"];

fn labeled(labels: &[&str], constants: &[(usize, usize, usize, i64)]) -> LieAlgebra {
    let mut alg = LieAlgebra::with_labels(labels.len(), labels.iter().map(|s| s.to_string()).collect())
        .expect("label count matches");
    for &(i, j, k, c) in constants {
        alg.add_constant(i, j, k, int(c)).expect("catalog indices are in range");
    }
    alg
}

pub fn abelian(n: usize) -> LieAlgebra {
    LieAlgebra::new(n)
}

/// Basis `X1..Xn, Y1..Yn, Z` with `[X_i, Y_i] = Z`.
pub fn heisenberg(n: usize) -> LieAlgebra {
    assert!(n >= 1, "heisenberg(n) needs n >= 1");
    let mut labels: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    labels.extend((1..=n).map(|i| format!("Y{i}")));
    labels.push("Z".into());
    let mut alg = LieAlgebra::with_labels(2 * n + 1, labels).unwrap();
    for i in 0..n {
        alg.add_constant(i, n + i, 2 * n, int(1)).unwrap();
    }
    alg
}

/// Basis `U, X1..Xn, Y1..Yn, Z` with `[X_i, Y_i] = Z`, `[U, X_i] = X_i`,
/// `[U, Z] = Z`: a rank one extension of the Heisenberg algebra by a
/// derivation with weights 1, 0, 1 on X, Y, Z.
pub fn frobenius_model(n: usize) -> LieAlgebra {
    assert!(n >= 1, "frobenius_model(n) needs n >= 1");
    let z = 2 * n + 1;
    let mut labels = vec!["U".to_string()];
    labels.extend((1..=n).map(|i| format!("X{i}")));
    labels.extend((1..=n).map(|i| format!("Y{i}")));
    labels.push("Z".into());
    let mut alg = LieAlgebra::with_labels(2 * n + 2, labels).unwrap();
    for i in 1..=n {
        alg.add_constant(i, n + i, z, int(1)).unwrap();
        alg.add_constant(0, i, i, int(1)).unwrap();
    }
    alg.add_constant(0, z, z, int(1)).unwrap();
    alg
}

/// Basis `H, E, F`.
pub fn sl2() -> LieAlgebra {
    labeled(&["H", "E", "F"], &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
}

/// `[X1,X2] = X3`, `[X2,X3] = X1`, `[X3,X1] = X2`.
pub fn so3() -> LieAlgebra {
    labeled(&["X1", "X2", "X3"], &[(0, 1, 2, 1), (1, 2, 0, 1), (0, 2, 1, -1)])
}

/// Euclidean algebra e(2) as the limit of so(3): `[X2,X3] = X1`, `[X3,X1] = X2`.
pub fn euclidean2() -> LieAlgebra {
    labeled(&["X1", "X2", "X3"], &[(1, 2, 0, 1), (0, 2, 1, -1)])
}

pub fn build(name: &str, params: &[usize]) -> Result<LieAlgebra, CatalogError> {
    let want = |expected: usize| {
        if params.len() == expected {
            Ok(())
        } else {
            Err(CatalogError::ParamCount {
                name: name.to_string(),
                expected,
                found: params.len(),
            })
        }
    };
    let at_least_one = || {
        if params[0] >= 1 {
            Ok(())
        } else {
            Err(CatalogError::ParamRange {
                name: name.to_string(),
                min: 1,
            })
        }
    };
    match name {
        "abelian" => {
            want(1)?;
            Ok(abelian(params[0]))
        }
        "heisenberg" => {
            want(1)?;
            at_least_one()?;
            Ok(heisenberg(params[0]))
        }
        "frobenius_model" => {
            want(1)?;
            at_least_one()?;
            Ok(frobenius_model(params[0]))
        }
        "sl2" => {
            want(0)?;
            Ok(sl2())
        }
        "so3" => {
            want(0)?;
            Ok(so3())
        }
        _ => Err(CatalogError::UnknownName {
            name: name.to_string(),
            available: NAMES.to_vec(),
        }),
    }
}

/// A catalog algebra together with its known invariant count.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: Vec<usize>,
    pub algebra: LieAlgebra,
    pub expected_invariants: usize,
}

/// The standard instances with dimension at most `max_dim`.
pub fn entries(max_dim: usize) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let mut push = |name, params: Vec<usize>, algebra: LieAlgebra, expected_invariants| {
        if algebra.dim() <= max_dim {
            out.push(CatalogEntry {
                name,
                params,
                algebra,
                expected_invariants,
            });
        }
    };
    for n in 0..=max_dim {
        push("abelian", vec![n], abelian(n), n);
    }
    for n in 1..=(max_dim.saturating_sub(1) / 2) {
        push("heisenberg", vec![n], heisenberg(n), 1);
    }
    for n in 1..=(max_dim.saturating_sub(2) / 2) {
        push("frobenius_model", vec![n], frobenius_model(n), 0);
    }
    push("sl2", vec![], sl2(), 1);
    push("so3", vec![], so3(), 1);
    push("e2", vec![], euclidean2(), 1);
    out
}

/// A one-parameter family `L0 -> L1` with the limit it is expected to produce.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub source: LieAlgebra,
    pub family: ContractionFamily,
    pub expected_limit: LieAlgebra,
}

/// The frobenius_model(1) family whose limit keeps zero invariants.
/// Upper triangular, singular at `e = 0`; in old coordinates the new basis is
/// `U' = U`, `X' = e X`, `Y' = Y + U`, `Z' = e Z + e^2 X`.
pub fn frobenius_triangular_family() -> ContractionFamily {
    let e = RationalFunction::epsilon;
    let zero = RationalFunction::zero;
    let one = RationalFunction::one;
    ContractionFamily::from_matrix(vec![
        vec![one(), zero(), one(), zero()],
        vec![zero(), e(), zero(), RationalFunction::epsilon_pow(2)],
        vec![zero(), zero(), one(), zero()],
        vec![zero(), zero(), zero(), e()],
    ])
    .expect("triangular with nonzero diagonal")
}

fn uniform(n: usize) -> ContractionFamily {
    ContractionFamily::diagonal(vec![1; n])
}

pub fn fixture_families() -> Vec<Fixture> {
    let mut out = Vec::new();

    // (E, F, H) weights (1, 1, 2) in the stored order (H, E, F).
    let h1_in_sl2_basis = heisenberg(1)
        .change_basis(&BasisChange::permutation(&[2, 0, 1]).unwrap())
        .unwrap();
    out.push(Fixture {
        name: "sl2_to_h1".into(),
        source: sl2(),
        family: ContractionFamily::diagonal(vec![2, 1, 1]),
        expected_limit: relabel(h1_in_sl2_basis, &sl2()),
    });
    out.push(Fixture {
        name: "so3_to_e2".into(),
        source: so3(),
        family: ContractionFamily::diagonal(vec![1, 1, 0]),
        expected_limit: euclidean2(),
    });
    for n in 1..=3 {
        // U decouples: the limit is h_n plus a central U.
        let mut weights = vec![0; 2 * n + 2];
        weights[0] = 1;
        let limit = abelian(1).direct_sum(&heisenberg(n));
        out.push(Fixture {
            name: format!("frobenius_model{n}_to_h{n}_plus_abelian"),
            source: frobenius_model(n),
            family: ContractionFamily::diagonal(weights),
            expected_limit: relabel(limit, &frobenius_model(n)),
        });
    }
    out.push(Fixture {
        name: "frobenius_model1_triangular".into(),
        source: frobenius_model(1),
        family: frobenius_triangular_family(),
        expected_limit: frobenius_triangular_limit(),
    });
    let to_abelian: Vec<(String, LieAlgebra)> = vec![
        ("sl2".into(), sl2()),
        ("so3".into(), so3()),
        ("heisenberg1".into(), heisenberg(1)),
        ("heisenberg2".into(), heisenberg(2)),
        ("heisenberg3".into(), heisenberg(3)),
        ("frobenius_model1".into(), frobenius_model(1)),
        ("frobenius_model2".into(), frobenius_model(2)),
        ("frobenius_model3".into(), frobenius_model(3)),
    ];
    for (name, alg) in to_abelian {
        let n = alg.dim();
        out.push(Fixture {
            name: format!("{name}_to_abelian"),
            expected_limit: relabel(abelian(n), &alg),
            family: uniform(n),
            source: alg,
        });
    }
    out
}

/// Limit of [`frobenius_triangular_family`] applied to frobenius_model(1):
/// `[U,X] = X`, `[U,Z] = Z`, `[X,Y] = Z - X`, `[Y,Z] = Z`.
pub fn frobenius_triangular_limit() -> LieAlgebra {
    labeled(
        &["U", "X1", "Y1", "Z"],
        &[(0, 1, 1, 1), (0, 3, 3, 1), (1, 2, 3, 1), (1, 2, 1, -1), (2, 3, 3, 1)],
    )
}

fn relabel(mut alg: LieAlgebra, like: &LieAlgebra) -> LieAlgebra {
    alg.set_labels(like.labels().to_vec()).unwrap();
    alg
}
