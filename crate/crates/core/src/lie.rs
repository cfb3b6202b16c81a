//! Lie algebras given by structure constants over the rationals.
//!
//! Only brackets `[X_i, X_j]` with `i < j` are stored; the opposite order is
//! synthesized with a sign flip, so antisymmetry cannot be violated.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::scalar_poly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("[X{i}, X{i}] must vanish but a nonzero constant was given", i = .index + 1)]
    SelfBracket { index: usize },
    #[error("expected a vector or matrix of size {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis change matrix is singular")]
    SingularBasisChange,
    #[error("{found} basis labels given for dimension {dim}")]
    LabelCount { dim: usize, found: usize },
}

/// A finite-dimensional Lie algebra `[X_i, X_j] = sum_k C^k_ij X_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
}

/// A basis of the new algebra given by the columns of an invertible matrix:
/// new basis vector `a` is `sum_b matrix[b][a] X_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    matrix: Matrix<Rational>,
    inverse: Matrix<Rational>,
}

/// A cyclic Jacobi sum that did not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    /// 0-based `i < j < k`.
    pub triple: (usize, usize, usize),
    pub residual: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JacobiReport {
    pub violations: Vec<JacobiViolation>,
}

impl JacobiReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("X{i}")).collect()
}

impl LieAlgebra {
    /// The abelian algebra of dimension `dim` with labels `X1..Xn`.
    pub fn new(dim: usize) -> Self {
        LieAlgebra {
            labels: default_labels(dim),
            brackets: BTreeMap::new(),
        }
    }

    pub fn with_labels(dim: usize, labels: Vec<String>) -> Result<Self, LieError> {
        if labels.len() != dim {
            return Err(LieError::LabelCount { dim, found: labels.len() });
        }
        Ok(LieAlgebra {
            labels,
            brackets: BTreeMap::new(),
        })
    }

    /// Builds an algebra from `(i, j, k, C^k_ij)` records (0-based). Records
    /// with `i > j` are folded in with a sign flip; repeated keys accumulate.
    pub fn from_constants(
        dim: usize,
        constants: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self, LieError> {
        let mut alg = Self::new(dim);
        for (i, j, k, c) in constants {
            alg.add_constant(i, j, k, c)?;
        }
        Ok(alg)
    }

    /// Adds `c` to `C^k_ij`.
    pub fn add_constant(&mut self, i: usize, j: usize, k: usize, c: Rational) -> Result<(), LieError> {
        let dim = self.dim();
        for index in [i, j, k] {
            if index >= dim {
                return Err(LieError::IndexOutOfRange { index, dim });
            }
        }
        if c.is_zero() {
            return Ok(());
        }
        if i == j {
            return Err(LieError::SelfBracket { index: i });
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let entry = self.brackets.entry(key).or_default();
        let slot = entry.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            entry.remove(&k);
            if entry.is_empty() {
                self.brackets.remove(&key);
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<(), LieError> {
        if labels.len() != self.dim() {
            return Err(LieError::LabelCount {
                dim: self.dim(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Nonzero constants as `(i, j, k, C^k_ij)` with `i < j`, in key order.
    pub fn constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.brackets
            .iter()
            .flat_map(|(&(i, j), terms)| terms.iter().map(move |(&k, c)| (i, j, k, c)))
    }

    /// `C^k_ij` for any ordering of `i, j`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Rational::zero(),
            std::cmp::Ordering::Less => self.lookup(i, j, k),
            std::cmp::Ordering::Greater => -self.lookup(j, i, k),
        }
    }

    fn lookup(&self, i: usize, j: usize, k: usize) -> Rational {
        self.brackets
            .get(&(i, j))
            .and_then(|t| t.get(&k))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `[X_i, X_j]` as sparse `(k, coefficient)` terms.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<(usize, Rational)> {
        let (key, sign) = match i.cmp(&j) {
            std::cmp::Ordering::Equal => return Vec::new(),
            std::cmp::Ordering::Less => ((i, j), Rational::one()),
            std::cmp::Ordering::Greater => ((j, i), -Rational::one()),
        };
        self.brackets
            .get(&key)
            .map(|t| t.iter().map(|(&k, c)| (k, c * &sign)).collect())
            .unwrap_or_default()
    }

    /// Same constants and dimension, ignoring labels.
    pub fn structure_eq(&self, other: &LieAlgebra) -> bool {
        self.dim() == other.dim() && self.brackets == other.brackets
    }

    fn check_len(&self, v: &[Rational]) -> Result<(), LieError> {
        if v.len() != self.dim() {
            return Err(LieError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `[u, v]` for coordinate vectors in the stored basis.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>, LieError> {
        self.check_len(u)?;
        self.check_len(v)?;
        let mut out = vec![Rational::zero(); self.dim()];
        for (&(i, j), terms) in &self.brackets {
            // u_i v_j - u_j v_i
            let w = &u[i] * &v[j] - &u[j] * &v[i];
            if w.is_zero() {
                continue;
            }
            for (&k, c) in terms {
                out[k] += &w * c;
            }
        }
        Ok(out)
    }

    fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); self.dim()];
        e[i] = Rational::one();
        e
    }

    /// Checks `[[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj] = 0` for every
    /// `i < j < k` and collects every failure.
    pub fn jacobi_check(&self) -> JacobiReport {
        let n = self.dim();
        let basis: Vec<_> = (0..n).map(|i| self.basis_vector(i)).collect();
        let br = |i: usize, j: usize| {
            let mut v = vec![Rational::zero(); n];
            for (k, c) in self.basis_bracket(i, j) {
                v[k] = c;
            }
            v
        };
        let mut violations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let ij = br(i, j);
                for k in j + 1..n {
                    let t1 = self.bracket(&ij, &basis[k]).unwrap();
                    let t2 = self.bracket(&br(j, k), &basis[i]).unwrap();
                    let t3 = self.bracket(&br(k, i), &basis[j]).unwrap();
                    let residual: Vec<Rational> = t1
                        .into_iter()
                        .zip(t2)
                        .zip(t3)
                        .map(|((a, b), c)| a + b + c)
                        .collect();
                    if residual.iter().any(|c| !c.is_zero()) {
                        violations.push(JacobiViolation {
                            triple: (i, j, k),
                            residual,
                        });
                    }
                }
            }
        }
        JacobiReport { violations }
    }

    /// Structure constants in the basis given by the columns of `g`:
    /// `(g . mu)(x, y) = g^{-1} mu(g x, g y)`. Labels are kept.
    pub fn change_basis(&self, g: &BasisChange) -> Result<LieAlgebra, LieError> {
        let n = self.dim();
        if g.dim() != n {
            return Err(LieError::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
        let columns: Vec<Vec<Rational>> = (0..n).map(|a| g.matrix.iter().map(|row| row[a].clone()).collect()).collect();
        let mut out = LieAlgebra {
            labels: self.labels.clone(),
            brackets: BTreeMap::new(),
        };
        for a in 0..n {
            for b in a + 1..n {
                let img = self.bracket(&columns[a], &columns[b])?;
                let coords = linalg::mat_vec(&g.inverse, &img);
                for (k, c) in coords.into_iter().enumerate() {
                    out.add_constant(a, b, k, c)?;
                }
            }
        }
        Ok(out)
    }

    /// Rows indexed by `(j, k)`, columns by `i`, entry `C^k_ij`.
    /// Its kernel is the center.
    pub fn adjoint_stack(&self) -> Matrix<Rational> {
        let n = self.dim();
        let mut rows = vec![vec![Rational::zero(); n]; n * n];
        for (i, j, k, c) in self.constants() {
            // [X_i, X_j] = c X_k contributes to ad(X_j) acting on the i-coordinate
            rows[j * n + k][i] += c;
            rows[i * n + k][j] -= c;
        }
        rows.retain(|r| r.iter().any(|c| !c.is_zero()));
        rows
    }

    /// Basis of the center, from the kernel of the stacked adjoint maps.
    pub fn center(&self) -> Vec<Vec<Rational>> {
        linalg::kernel(&self.adjoint_stack(), self.dim())
    }

    /// `self ⊕ other`, with `other`'s basis shifted after `self`'s.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let shift = self.dim();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut brackets = self.brackets.clone();
        for (&(i, j), terms) in &other.brackets {
            brackets.insert(
                (i + shift, j + shift),
                terms.iter().map(|(&k, c)| (k + shift, c.clone())).collect(),
            );
        }
        LieAlgebra { labels, brackets }
    }
}

impl BasisChange {
    pub fn new(matrix: Matrix<Rational>) -> Result<Self, LieError> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(LieError::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        let inverse = linalg::inverse(&matrix).ok_or(LieError::SingularBasisChange)?;
        Ok(BasisChange { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        BasisChange {
            matrix: linalg::identity(n),
            inverse: linalg::identity(n),
        }
    }

    /// New basis vector `a` is old basis vector `perm[a]`.
    pub fn permutation(perm: &[usize]) -> Result<Self, LieError> {
        let n = perm.len();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (a, &b) in perm.iter().enumerate() {
            if b >= n {
                return Err(LieError::IndexOutOfRange { index: b, dim: n });
            }
            m[b][a] = Rational::one();
        }
        Self::new(m)
    }

    pub fn diagonal(entries: Vec<Rational>) -> Result<Self, LieError> {
        let n = entries.len();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (i, d) in entries.into_iter().enumerate() {
            m[i][i] = d;
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar_poly::{frac, int};
    use proptest::prelude::*;

    fn vec_of(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn heisenberg_defining_bracket() {
        let h = catalog::heisenberg(1);
        assert_eq!(h.bracket(&vec_of(&[1, 0, 0]), &vec_of(&[0, 1, 0])).unwrap(), vec_of(&[0, 0, 1]));
    }

    #[test]
    fn self_bracket_vanishes() {
        let sl2 = catalog::sl2();
        let u = vec![frac(3, 2), int(-1), int(7)];
        assert!(sl2.bracket(&u, &u).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn sl2_linearity() {
        // basis (H, E, F); [H, E + F] = 2E - 2F
        let sl2 = catalog::sl2();
        assert_eq!(sl2.bracket(&vec_of(&[1, 0, 0]), &vec_of(&[0, 1, 1])).unwrap(), vec_of(&[0, 2, -2]));
    }

    #[test]
    fn bracket_length_mismatch() {
        let err = catalog::sl2().bracket(&vec_of(&[1, 0]), &vec_of(&[0, 1, 0])).unwrap_err();
        assert_eq!(err, LieError::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn jacobi_passes_on_fixtures() {
        assert!(catalog::heisenberg(2).jacobi_check().is_pass());
        assert!(catalog::sl2().jacobi_check().is_pass());
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [X1,X2] = X3, [X1,X3] = X1, [X2,X3] = X2
        let bad = LieAlgebra::from_constants(3, [(0, 1, 2, int(1)), (0, 2, 0, int(1)), (1, 2, 1, int(1))]).unwrap();
        let report = bad.jacobi_check();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].triple, (0, 1, 2));
        // [X3,X3] + [X2,X1] + [-X1,X2] = -2 X3
        assert_eq!(report.violations[0].residual, vec_of(&[0, 0, -2]));
    }

    #[test]
    fn constants_are_stored_antisymmetrically() {
        let a = LieAlgebra::from_constants(3, [(2, 1, 0, int(5))]).unwrap();
        assert_eq!(a.structure_constant(1, 2, 0), int(-5));
        assert_eq!(a.structure_constant(2, 1, 0), int(5));
        assert_eq!(
            LieAlgebra::from_constants(2, [(1, 1, 0, int(1))]),
            Err(LieError::SelfBracket { index: 1 })
        );
        assert_eq!(
            LieAlgebra::from_constants(2, [(0, 1, 2, int(1))]),
            Err(LieError::IndexOutOfRange { index: 2, dim: 2 })
        );
    }

    #[test]
    fn identity_change_of_basis() {
        let sl2 = catalog::sl2();
        assert_eq!(sl2.change_basis(&BasisChange::identity(3)).unwrap(), sl2);
    }

    #[test]
    fn swapping_heisenberg_generators_flips_sign() {
        let h = catalog::heisenberg(1);
        let swapped = h.change_basis(&BasisChange::permutation(&[1, 0, 2]).unwrap()).unwrap();
        assert_eq!(swapped.basis_bracket(0, 1), vec![(2, int(-1))]);
    }

    #[test]
    fn sl2_rescaling_keeps_constants() {
        let sl2 = catalog::sl2();
        let g = BasisChange::diagonal(vec![int(1), int(2), frac(1, 2)]).unwrap();
        assert!(sl2.change_basis(&g).unwrap().structure_eq(&sl2));
    }

    #[test]
    fn singular_basis_change() {
        assert_eq!(
            BasisChange::new(vec![vec![int(1), int(2)], vec![int(2), int(4)]]),
            Err(LieError::SingularBasisChange)
        );
    }

    #[test]
    fn centers() {
        let c = catalog::heisenberg(2).center();
        assert_eq!(c, vec![vec_of(&[0, 0, 0, 0, 1])]);
        assert_eq!(catalog::abelian(5).center().len(), 5);
        assert!(catalog::sl2().center().is_empty());
        assert_eq!(catalog::abelian(0).center().len(), 0);
    }

    #[test]
    fn center_vectors_commute_with_basis() {
        for alg in [catalog::heisenberg(3), catalog::frobenius_model(2), catalog::heisenberg(1).direct_sum(&catalog::abelian(2))] {
            for v in alg.center() {
                for j in 0..alg.dim() {
                    assert!(alg.bracket(&v, &alg.basis_vector(j)).unwrap().iter().all(Zero::is_zero));
                }
            }
            assert_eq!(alg.center().len() + linalg::rank(&alg.adjoint_stack()), alg.dim());
        }
    }

    fn arb_algebra() -> impl Strategy<Value = LieAlgebra> {
        prop_oneof![
            Just(catalog::sl2()),
            Just(catalog::so3()),
            Just(catalog::heisenberg(1)),
            Just(catalog::frobenius_model(1)),
            Just(catalog::euclidean2()),
        ]
    }

    fn arb_basis_change(n: usize) -> impl Strategy<Value = BasisChange> {
        prop::collection::vec(-3i64..4, n * n)
            .prop_filter_map("singular", move |xs| BasisChange::new(xs.chunks(n).map(vec_of).collect()).ok())
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-9i64..10, 1i64..4), n).prop_map(|v| v.into_iter().map(|(a, b)| frac(a, b)).collect())
    }

    proptest! {
        #[test]
        fn bracket_is_bilinear_and_antisymmetric(
            alg in arb_algebra(),
            (u, v, w) in (arb_vec(4), arb_vec(4), arb_vec(4)),
            s in -5i64..5,
        ) {
            let n = alg.dim();
            let (u, v, w) = (&u[..n], &v[..n], &w[..n]);
            let uv = alg.bracket(u, v).unwrap();
            let vu = alg.bracket(v, u).unwrap();
            prop_assert!(uv.iter().zip(&vu).all(|(a, b)| (a + b).is_zero()));
            let su_w: Vec<Rational> = u.iter().zip(w).map(|(a, b)| a * int(s) + b).collect();
            let lhs = alg.bracket(&su_w, v).unwrap();
            let wv = alg.bracket(w, v).unwrap();
            let rhs: Vec<Rational> = uv.iter().zip(&wv).map(|(a, b)| a * int(s) + b).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn change_of_basis_round_trips((alg, g) in arb_algebra().prop_flat_map(|a| {
            let n = a.dim();
            (Just(a), arb_basis_change(n))
        })) {
            let moved = alg.change_basis(&g).unwrap();
            prop_assert!(moved.jacobi_check().is_pass());
            prop_assert_eq!(moved.change_basis(&g.inverse()).unwrap(), alg);
        }
    }
}
