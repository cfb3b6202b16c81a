//! One-parameter basis families `g(e)`, the limit `e -> 0` of the transformed
//! structure constants, and the rank/invariant inequalities a contraction
//! must satisfy.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::invariants::{self, CommutatorMatrix, CountOptions, InvariantReport};
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::{self, Matrix};
use crate::scalar_poly::{ratfunc_matrix_inverse, Limit, Rational, RationalFunction, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractionError {
    #[error("family matrix is singular over Q(e)")]
    SingularFamily,
    #[error("family matrix is not square")]
    NotSquare,
    #[error("dimension mismatch: algebra has dimension {algebra}, family {family}")]
    DimensionMismatch { algebra: usize, family: usize },
    #[error("limit of C^{k}_{i}{j}(e) at e = 0 does not exist", i = .i + 1, j = .j + 1, k = .k + 1)]
    DivergentLimit { i: usize, j: usize, k: usize },
    #[error("pole of C^{k}_{i}{j}(e) at e = {at}", i = .i + 1, j = .j + 1, k = .k + 1)]
    Pole { i: usize, j: usize, k: usize, at: Rational },
    #[error("limit constants violate the Jacobi identity at {0} triple(s)")]
    LimitNotLie(usize),
    #[error(transparent)]
    Lie(#[from] LieError),
}

impl From<ScalarError> for ContractionError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::SingularFamily => ContractionError::SingularFamily,
            _ => ContractionError::NotSquare,
        }
    }
}

/// An invertible matrix over Q(e) whose columns are the new basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionFamily {
    matrix: Matrix<RationalFunction>,
    inverse: Matrix<RationalFunction>,
    weights: Option<Vec<i64>>,
}

impl ContractionFamily {
    /// `g(e) = diag(e^a_1, .., e^a_n)`.
    pub fn diagonal(weights: Vec<i64>) -> Self {
        let n = weights.len();
        let mut matrix = linalg::identity::<RationalFunction>(n);
        let mut inverse = linalg::identity::<RationalFunction>(n);
        for (i, &a) in weights.iter().enumerate() {
            matrix[i][i] = RationalFunction::epsilon_pow(a);
            inverse[i][i] = RationalFunction::epsilon_pow(-a);
        }
        ContractionFamily {
            matrix,
            inverse,
            weights: Some(weights),
        }
    }

    pub fn from_matrix(matrix: Matrix<RationalFunction>) -> Result<Self, ContractionError> {
        let inverse = ratfunc_matrix_inverse(&matrix)?;
        Ok(ContractionFamily {
            matrix,
            inverse,
            weights: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix<RationalFunction> {
        &self.matrix
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn determinant(&self) -> RationalFunction {
        match &self.weights {
            Some(w) => RationalFunction::epsilon_pow(w.iter().sum()),
            None => linalg::determinant(&self.matrix),
        }
    }
}

/// Structure constants `C^k_ij(e)` of the transformed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonStructure {
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, RationalFunction>>,
    determinant: RationalFunction,
}

impl EpsilonStructure {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Nonzero `(i, j, k, C^k_ij(e))` with `i < j`.
    pub fn constants(&self) -> impl Iterator<Item = (usize, usize, usize, &RationalFunction)> {
        self.brackets
            .iter()
            .flat_map(|(&(i, j), t)| t.iter().map(move |(&k, c)| (i, j, k, c)))
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> RationalFunction {
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        let c = self
            .brackets
            .get(&key)
            .and_then(|t| t.get(&k))
            .cloned()
            .unwrap_or_else(RationalFunction::zero);
        if neg {
            -c
        } else {
            c
        }
    }

    /// Determinant of the family that produced these constants.
    pub fn family_determinant(&self) -> &RationalFunction {
        &self.determinant
    }

    /// The algebra at a fixed parameter value.
    pub fn evaluate(&self, at: &Rational) -> Result<LieAlgebra, ContractionError> {
        let mut alg = LieAlgebra::with_labels(self.dim(), self.labels.clone())?;
        for (i, j, k, c) in self.constants() {
            let v = c.eval(at).ok_or_else(|| ContractionError::Pole { i, j, k, at: at.clone() })?;
            alg.add_constant(i, j, k, v)?;
        }
        Ok(alg)
    }

    fn insert(&mut self, i: usize, j: usize, k: usize, c: RationalFunction) {
        if !c.is_zero() {
            self.brackets.entry((i, j)).or_default().insert(k, c);
        }
    }
}

/// `C^k_ij(e)` for the basis `g(e)`: `(g . mu)(x, y) = g^{-1} mu(g x, g y)`.
pub fn apply_family(alg: &LieAlgebra, g: &ContractionFamily) -> Result<EpsilonStructure, ContractionError> {
    let n = alg.dim();
    if g.dim() != n {
        return Err(ContractionError::DimensionMismatch {
            algebra: n,
            family: g.dim(),
        });
    }
    let mut out = EpsilonStructure {
        labels: alg.labels().to_vec(),
        brackets: BTreeMap::new(),
        determinant: g.determinant(),
    };
    if let Some(w) = &g.weights {
        // [e^a_i X_i, e^a_j X_j] = sum_k e^(a_i + a_j - a_k) C^k_ij (e^a_k X_k)
        for (i, j, k, c) in alg.constants() {
            let scaled = RationalFunction::epsilon_pow(w[i] + w[j] - w[k]) * RationalFunction::constant(c.clone());
            out.insert(i, j, k, scaled);
        }
        return Ok(out);
    }
    Ok(apply_matrix(alg, &g.matrix, &g.inverse, out))
}

fn apply_matrix(
    alg: &LieAlgebra,
    matrix: &Matrix<RationalFunction>,
    inverse: &Matrix<RationalFunction>,
    mut out: EpsilonStructure,
) -> EpsilonStructure {
    let n = alg.dim();
    let columns: Vec<Vec<RationalFunction>> = (0..n).map(|a| matrix.iter().map(|row| row[a].clone()).collect()).collect();
    let constants: Vec<(usize, usize, usize, RationalFunction)> = alg
        .constants()
        .map(|(i, j, k, c)| (i, j, k, RationalFunction::constant(c.clone())))
        .collect();
    for a in 0..n {
        for b in a + 1..n {
            let (u, v) = (&columns[a], &columns[b]);
            let mut img = vec![RationalFunction::zero(); n];
            for (i, j, k, c) in &constants {
                let w = u[*i].clone() * v[*j].clone() - u[*j].clone() * v[*i].clone();
                if !w.is_zero() {
                    img[*k] = img[*k].clone() + w * c.clone();
                }
            }
            for (k, c) in linalg::mat_vec(inverse, &img).into_iter().enumerate() {
                out.insert(a, b, k, c);
            }
        }
    }
    out
}

/// The generic GL action even when `g` is diagonal; a second route to the
/// weighted fast path in [`apply_family`].
pub fn apply_family_generic(alg: &LieAlgebra, g: &ContractionFamily) -> Result<EpsilonStructure, ContractionError> {
    let n = alg.dim();
    if g.dim() != n {
        return Err(ContractionError::DimensionMismatch {
            algebra: n,
            family: g.dim(),
        });
    }
    let out = EpsilonStructure {
        labels: alg.labels().to_vec(),
        brackets: BTreeMap::new(),
        determinant: linalg::determinant(&g.matrix),
    };
    Ok(apply_matrix(alg, &g.matrix, &g.inverse, out))
}

/// Limit of every constant at `e = 0`, re-checked against the Jacobi identity.
pub fn contract_limit(eps: &EpsilonStructure) -> Result<LieAlgebra, ContractionError> {
    let mut alg = LieAlgebra::with_labels(eps.dim(), eps.labels.clone())?;
    for (i, j, k, c) in eps.constants() {
        match c.limit_at_zero() {
            Limit::Finite(v) => alg.add_constant(i, j, k, v)?,
            Limit::Divergent => return Err(ContractionError::DivergentLimit { i, j, k }),
        }
    }
    let report = alg.jacobi_check();
    if !report.is_pass() {
        return Err(ContractionError::LimitNotLie(report.violations.len()));
    }
    Ok(alg)
}

/// `apply_family` followed by `contract_limit`.
pub fn contract(alg: &LieAlgebra, g: &ContractionFamily) -> Result<LieAlgebra, ContractionError> {
    contract_limit(&apply_family(alg, g)?)
}

/// The parameter values used when none are given.
pub fn default_samples() -> Vec<Rational> {
    [2, 3, 7, 101]
        .into_iter()
        .map(|d| Rational::new(1.into(), d.into()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleOutcome {
    Checked { rank: usize, holds: bool },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSample {
    pub eps: Rational,
    pub outcome: SampleOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemicontinuityReport {
    pub limit_rank: usize,
    pub samples: Vec<EpsSample>,
}

impl SemicontinuityReport {
    /// Every evaluated sample satisfies `rank(e0) >= rank(limit)`, and at
    /// least one sample was evaluated.
    pub fn holds(&self) -> bool {
        let mut any = false;
        for s in &self.samples {
            if let SampleOutcome::Checked { holds, .. } = s.outcome {
                any = true;
                if !holds {
                    return false;
                }
            }
        }
        any
    }
}

/// Compares the generic rank of the commutator matrix at each sampled `e0`
/// with that of the limit. Samples at zero, at poles, or where `g(e0)` is not
/// invertible are skipped.
pub fn semicontinuity_check(
    eps: &EpsilonStructure,
    limit: &LieAlgebra,
    samples: &[Rational],
    opts: &CountOptions,
) -> SemicontinuityReport {
    let rank_of = |alg: &LieAlgebra| {
        let m = CommutatorMatrix::new(alg);
        invariants::generic_rank(&m, &opts.rank_options(alg.dim())).rank
    };
    let limit_rank = rank_of(limit);
    let samples = samples
        .iter()
        .map(|e0| {
            let skip = |reason: String| EpsSample {
                eps: e0.clone(),
                outcome: SampleOutcome::Skipped { reason },
            };
            if e0.is_zero() {
                return skip("e = 0 is the limit point".into());
            }
            match eps.family_determinant().eval(e0) {
                Some(d) if !d.is_zero() => {}
                _ => return skip(format!("g(e) is not invertible at e = {e0}")),
            }
            match eps.evaluate(e0) {
                Ok(alg) => {
                    let rank = rank_of(&alg);
                    EpsSample {
                        eps: e0.clone(),
                        outcome: SampleOutcome::Checked {
                            rank,
                            holds: rank >= limit_rank,
                        },
                    }
                }
                Err(e) => skip(e.to_string()),
            }
        })
        .collect();
    SemicontinuityReport { limit_rank, samples }
}

#[derive(Clone, Debug)]
pub struct MonotonicityReport {
    pub source: InvariantReport,
    pub limit: InvariantReport,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.limit.invariant_count >= self.source.invariant_count
    }
}

/// Certified invariant counts of both algebras and the verdict `N(L1) >= N(L0)`.
pub fn verify_monotonicity(
    source: &LieAlgebra,
    limit: &LieAlgebra,
    opts: &CountOptions,
) -> Result<MonotonicityReport, ContractionError> {
    if source.dim() != limit.dim() {
        return Err(ContractionError::DimensionMismatch {
            algebra: source.dim(),
            family: limit.dim(),
        });
    }
    let opts = CountOptions {
        certify: invariants::Certify::Always,
        ..opts.clone()
    };
    Ok(MonotonicityReport {
        source: invariants::invariant_count(source, &opts),
        limit: invariants::invariant_count(limit, &opts),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NecessaryCondition {
    RuledOut { reason: String },
    Possible,
}

/// `RuledOut` when `limit` cannot be a contraction of `source`: different
/// dimensions or fewer invariants. `Possible` is not a proof of existence.
pub fn contraction_necessary_condition(source: &LieAlgebra, limit: &LieAlgebra, opts: &CountOptions) -> NecessaryCondition {
    if source.dim() != limit.dim() {
        return NecessaryCondition::RuledOut {
            reason: format!("dimensions differ: {} vs {}", source.dim(), limit.dim()),
        };
    }
    let n0 = invariants::invariant_count(source, opts).invariant_count;
    let n1 = invariants::invariant_count(limit, opts).invariant_count;
    if n1 < n0 {
        NecessaryCondition::RuledOut {
            reason: format!("invariant count would decrease from {n0} to {n1}"),
        }
    } else {
        NecessaryCondition::Possible
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar_poly::{frac, int};

    fn eps_pow(k: i64) -> RationalFunction {
        RationalFunction::epsilon_pow(k)
    }

    fn rf(c: i64) -> RationalFunction {
        RationalFunction::constant(int(c))
    }

    #[test]
    fn identity_family_is_constant() {
        let sl2 = catalog::sl2();
        let c = apply_family(&sl2, &ContractionFamily::diagonal(vec![0, 0, 0])).unwrap();
        for (i, j, k, v) in sl2.constants() {
            assert_eq!(c.constant(i, j, k), RationalFunction::constant(v.clone()));
        }
        assert!(contract_limit(&c).unwrap().structure_eq(&sl2));
    }

    #[test]
    fn so3_weighted_constants() {
        let c = apply_family(&catalog::so3(), &ContractionFamily::diagonal(vec![1, 1, 0])).unwrap();
        assert_eq!(c.constant(0, 1, 2), eps_pow(2));
        assert_eq!(c.constant(1, 2, 0), rf(1));
        assert_eq!(c.constant(2, 0, 1), rf(1));
        let limit = contract_limit(&c).unwrap();
        assert!(limit.structure_eq(&catalog::euclidean2()));
        assert!(limit.basis_bracket(0, 1).is_empty());
    }

    #[test]
    fn sl2_weighted_constants() {
        // E' = eE, F' = eF, H' = e^2 H in the stored order (H, E, F)
        let c = apply_family(&catalog::sl2(), &ContractionFamily::diagonal(vec![2, 1, 1])).unwrap();
        assert_eq!(c.constant(1, 2, 0), rf(1));
        assert_eq!(c.constant(0, 1, 1), eps_pow(2) * rf(2));
        assert_eq!(c.constant(0, 2, 2), eps_pow(2) * rf(-2));
        let limit = contract_limit(&c).unwrap();
        assert_eq!(limit.constants().count(), 1);
        assert_eq!(limit.basis_bracket(1, 2), vec![(0, int(1))]);
    }

    #[test]
    fn uniform_weights_give_abelian_limit() {
        for alg in [catalog::sl2(), catalog::frobenius_model(2), catalog::heisenberg(2)] {
            let limit = contract(&alg, &ContractionFamily::diagonal(vec![1; alg.dim()])).unwrap();
            assert!(limit.is_abelian());
        }
    }

    #[test]
    fn divergent_heisenberg_family() {
        let err = contract(&catalog::heisenberg(1), &ContractionFamily::diagonal(vec![0, 0, 1])).unwrap_err();
        assert_eq!(err, ContractionError::DivergentLimit { i: 0, j: 1, k: 2 });
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            apply_family(&catalog::sl2(), &ContractionFamily::diagonal(vec![1, 1])),
            Err(ContractionError::DimensionMismatch { algebra: 3, family: 2 })
        ));
    }

    #[test]
    fn singular_family_rejected() {
        let e = RationalFunction::epsilon();
        let m = vec![vec![e.clone(), e.clone()], vec![e.clone(), e]];
        assert_eq!(ContractionFamily::from_matrix(m), Err(ContractionError::SingularFamily));
    }

    #[test]
    fn diagonal_fast_path_matches_generic_action() {
        for f in catalog::fixture_families() {
            let fast = apply_family(&f.source, &f.family).unwrap();
            let slow = apply_family_generic(&f.source, &f.family).unwrap();
            assert_eq!(fast, slow, "{}", f.name);
        }
    }

    #[test]
    fn evaluation_matches_rational_change_of_basis() {
        use crate::lie::BasisChange;
        let f = catalog::frobenius_triangular_family();
        let alg = catalog::frobenius_model(1);
        let c = apply_family(&alg, &f).unwrap();
        let e0 = frac(1, 3);
        let g0: Vec<Vec<Rational>> = f.matrix().iter().map(|r| r.iter().map(|x| x.eval(&e0).unwrap()).collect()).collect();
        let direct = alg.change_basis(&BasisChange::new(g0).unwrap()).unwrap();
        assert_eq!(c.evaluate(&e0).unwrap(), direct);
    }

    #[test]
    fn triangular_fixture_limit() {
        let limit = contract(&catalog::frobenius_model(1), &catalog::frobenius_triangular_family()).unwrap();
        assert_eq!(limit, catalog::frobenius_triangular_limit());
    }

    #[test]
    fn semicontinuity_on_fixtures() {
        let opts = CountOptions::default();
        let sl2 = catalog::sl2();
        let c = apply_family(&sl2, &ContractionFamily::diagonal(vec![2, 1, 1])).unwrap();
        let limit = contract_limit(&c).unwrap();
        let r = semicontinuity_check(&c, &limit, &[frac(1, 7)], &opts);
        assert_eq!(r.limit_rank, 2);
        assert_eq!(r.samples[0].outcome, SampleOutcome::Checked { rank: 2, holds: true });

        let so3 = catalog::so3();
        let c = apply_family(&so3, &ContractionFamily::diagonal(vec![1, 1, 0])).unwrap();
        let limit = contract_limit(&c).unwrap();
        let r = semicontinuity_check(&c, &limit, &[frac(1, 3)], &opts);
        assert_eq!(r.samples[0].outcome, SampleOutcome::Checked { rank: 2, holds: true });

        let c = apply_family(&sl2, &ContractionFamily::diagonal(vec![1, 1, 1])).unwrap();
        let limit = contract_limit(&c).unwrap();
        let r = semicontinuity_check(&c, &limit, &[frac(1, 2)], &opts);
        assert_eq!(r.limit_rank, 0);
        assert_eq!(r.samples[0].outcome, SampleOutcome::Checked { rank: 2, holds: true });
        assert!(r.holds());
    }

    #[test]
    fn semicontinuity_skips_singular_points() {
        // g(e) = [[1, 0], [0, e - 1/2]] is singular at e = 1/2
        let m = vec![
            vec![rf(1), rf(0)],
            vec![rf(0), RationalFunction::epsilon() - RationalFunction::constant(frac(1, 2))],
        ];
        let g = ContractionFamily::from_matrix(m).unwrap();
        let alg = LieAlgebra::from_constants(2, [(0, 1, 1, int(1))]).unwrap();
        let c = apply_family(&alg, &g).unwrap();
        let limit = contract_limit(&c).unwrap();
        let r = semicontinuity_check(&c, &limit, &[int(0), frac(1, 2), frac(1, 3)], &CountOptions::default());
        assert!(matches!(r.samples[0].outcome, SampleOutcome::Skipped { .. }));
        assert!(matches!(r.samples[1].outcome, SampleOutcome::Skipped { .. }));
        assert!(matches!(r.samples[2].outcome, SampleOutcome::Checked { holds: true, .. }));
        assert!(r.holds());
    }

    #[test]
    fn monotonicity_examples() {
        let opts = CountOptions::default();
        let cases = [
            (catalog::sl2(), catalog::heisenberg(1), 1, 1),
            (catalog::sl2(), catalog::abelian(3), 1, 3),
            (catalog::so3(), catalog::euclidean2(), 1, 1),
        ];
        for (l0, l1, n0, n1) in cases {
            let r = verify_monotonicity(&l0, &l1, &opts).unwrap();
            assert_eq!((r.source.invariant_count, r.limit.invariant_count), (n0, n1));
            assert!(r.source.rank_certified && r.limit.rank_certified);
            assert!(r.holds());
        }
        assert!(verify_monotonicity(&catalog::sl2(), &catalog::abelian(4), &opts).is_err());
    }

    #[test]
    fn necessary_condition_examples() {
        let opts = CountOptions::default();
        assert!(matches!(
            contraction_necessary_condition(&catalog::abelian(3), &catalog::heisenberg(1), &opts),
            NecessaryCondition::RuledOut { .. }
        ));
        assert_eq!(
            contraction_necessary_condition(&catalog::sl2(), &catalog::heisenberg(1), &opts),
            NecessaryCondition::Possible
        );
        assert_eq!(
            contraction_necessary_condition(&catalog::frobenius_model(1), &catalog::abelian(4), &opts),
            NecessaryCondition::Possible
        );
        assert!(matches!(
            contraction_necessary_condition(&catalog::sl2(), &catalog::abelian(4), &opts),
            NecessaryCondition::RuledOut { .. }
        ));
    }
}
