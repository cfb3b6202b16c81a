//! Counting coadjoint invariants from the generic rank of the commutator
//! matrix `M_ij(x) = sum_k C^k_ij x_k`, and searching for polynomial ones.
//!
//! The number of functionally independent invariants is `n - r`, where `r`
//! is the rank of `M(x)` over the field of rational functions in `x`. The rank
//! is estimated by evaluating `M` at random integer points (a nonzero minor
//! survives a random point with high probability) and can be certified by
//! fraction-free elimination over the polynomial ring.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lie::LieAlgebra;
use crate::linalg::{self, Matrix};
use crate::scalar_poly::{Monomial, MultiPoly, Rational};

pub const DEFAULT_TRIALS: usize = 5;
pub const DEFAULT_BOUND: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x00C0_FFEE;
/// Largest dimension certified symbolically under [`Certify::Auto`].
pub const AUTO_CERTIFY_MAX_DIM: usize = 8;

/// The antisymmetric matrix of linear forms attached to a Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorMatrix {
    entries: Matrix<MultiPoly>,
}

impl CommutatorMatrix {
    pub fn new(alg: &LieAlgebra) -> Self {
        let n = alg.dim();
        let mut entries = vec![vec![MultiPoly::zero(n); n]; n];
        for (i, j, k, c) in alg.constants() {
            let term = MultiPoly::var(n, k).scale(c);
            entries[i][j] = &entries[i][j] + &term;
            entries[j][i] = &entries[j][i] - &term;
        }
        CommutatorMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &Matrix<MultiPoly> {
        &self.entries
    }

    /// `M + M^T = 0` as polynomials.
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (&self.entries[i][j] + &self.entries[j][i]).is_zero()))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Matrix<Rational> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval(point)).collect())
            .collect()
    }

    /// Pfaffian by expansion along the first row. Zero in odd dimension.
    pub fn pfaffian(&self) -> MultiPoly {
        let idx: Vec<usize> = (0..self.dim()).collect();
        pfaffian_of(&self.entries, &idx, self.dim())
    }

    /// Rank over the fraction field of `Q[x]`, by Bareiss elimination with
    /// full pivoting. Every intermediate division is exact.
    pub fn symbolic_rank(&self) -> usize {
        let n = self.dim();
        let mut a = self.entries.clone();
        let mut prev = MultiPoly::constant(n, Rational::one());
        for k in 0..n {
            let pivot = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| (a[i][j].num_terms(), a[i][j].degree()));
            let Some((pi, pj)) = pivot else {
                return k;
            };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let cross = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = cross
                        .div_exact(&prev)
                        .expect("Bareiss step divides exactly by the previous pivot");
                }
            }
            prev = a[k][k].clone();
        }
        n
    }
}

fn pfaffian_of(m: &Matrix<MultiPoly>, idx: &[usize], nvars: usize) -> MultiPoly {
    if idx.is_empty() {
        return MultiPoly::constant(nvars, Rational::one());
    }
    if idx.len() % 2 == 1 {
        return MultiPoly::zero(nvars);
    }
    let first = idx[0];
    let mut acc = MultiPoly::zero(nvars);
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let a = &m[first][j];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&r| r != j).collect();
        let term = a * &pfaffian_of(m, &rest, nvars);
        // sign (-1)^(pos + 1) with pos counted from the removed first index
        acc = if pos % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOptions {
    pub trials: usize,
    pub bound: u64,
    pub certify: bool,
    pub seed: u64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            trials: DEFAULT_TRIALS,
            bound: DEFAULT_BOUND,
            certify: false,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankResult {
    /// Certified rank when `certified`, otherwise the sampled rank.
    pub rank: usize,
    pub sampled_rank: usize,
    pub certified: bool,
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, bound: u64) -> Vec<Rational> {
    let b = bound as i64;
    (0..n).map(|_| Rational::from_integer(rng.gen_range(-b..=b).into())).collect()
}

/// Maximum exact rank of `M(p)` over `trials` random integer points in
/// `[-bound, bound]^n`, optionally confirmed by [`CommutatorMatrix::symbolic_rank`].
pub fn generic_rank(m: &CommutatorMatrix, opts: &RankOptions) -> RankResult {
    assert!(opts.trials >= 1, "at least one sample is required");
    assert!(opts.bound >= 2, "sample bound must be at least 2");
    let n = m.dim();
    let ceiling = n - n % 2;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sampled_rank = 0;
    for _ in 0..opts.trials {
        if sampled_rank == ceiling {
            break;
        }
        let p = random_point(&mut rng, n, opts.bound);
        sampled_rank = sampled_rank.max(linalg::rank(&m.evaluate(&p)));
    }
    if !opts.certify {
        return RankResult {
            rank: sampled_rank,
            sampled_rank,
            certified: false,
        };
    }
    let rank = m.symbolic_rank();
    debug_assert!(sampled_rank <= rank);
    RankResult {
        rank,
        sampled_rank,
        certified: true,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certify {
    /// Certify when the dimension is at most [`AUTO_CERTIFY_MAX_DIM`].
    Auto,
    Always,
    Never,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub trials: usize,
    pub bound: u64,
    pub certify: Certify,
    pub seed: u64,
    /// Also search for polynomial invariants up to this degree.
    pub max_degree: Option<u32>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            trials: DEFAULT_TRIALS,
            bound: DEFAULT_BOUND,
            certify: Certify::Auto,
            seed: DEFAULT_SEED,
            max_degree: None,
        }
    }
}

impl CountOptions {
    pub fn certifies(&self, dim: usize) -> bool {
        match self.certify {
            Certify::Auto => dim <= AUTO_CERTIFY_MAX_DIM,
            Certify::Always => true,
            Certify::Never => false,
        }
    }

    pub fn rank_options(&self, dim: usize) -> RankOptions {
        RankOptions {
            trials: self.trials,
            bound: self.bound,
            certify: self.certifies(dim),
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub dim: usize,
    pub generic_rank: usize,
    pub invariant_count: usize,
    pub rank_certified: bool,
    pub sampled_rank: usize,
    pub sample_trials: usize,
    pub sample_bound: u64,
    pub seed: u64,
    pub polynomial_invariants: Option<Vec<MultiPoly>>,
}

/// Number of functionally independent coadjoint invariants, `n - rank M(x)`.
pub fn invariant_count(alg: &LieAlgebra, opts: &CountOptions) -> InvariantReport {
    let m = CommutatorMatrix::new(alg);
    let r = generic_rank(&m, &opts.rank_options(alg.dim()));
    InvariantReport {
        dim: alg.dim(),
        generic_rank: r.rank,
        invariant_count: alg.dim() - r.rank,
        rank_certified: r.certified,
        sampled_rank: r.sampled_rank,
        sample_trials: opts.trials,
        sample_bound: opts.bound,
        seed: opts.seed,
        polynomial_invariants: opts.max_degree.map(|d| polynomial_invariants(alg, d)),
    }
}

/// `sum_j M_ij(x) dF/dx_j` for each basis element `i`; all zero exactly
/// when `F` is a coadjoint invariant.
pub fn coadjoint_residuals(alg: &LieAlgebra, f: &MultiPoly) -> Vec<MultiPoly> {
    let m = CommutatorMatrix::new(alg);
    let grads: Vec<MultiPoly> = (0..alg.dim()).map(|j| f.partial_derivative(j)).collect();
    m.entries
        .iter()
        .map(|row| {
            row.iter()
                .zip(&grads)
                .filter(|(a, g)| !a.is_zero() && !g.is_zero())
                .fold(MultiPoly::zero(alg.dim()), |acc, (a, g)| &acc + &(a * g))
        })
        .collect()
}

/// Basis of the polynomial invariants of degree `1..=max_degree` without
/// constant term, in reduced echelon form: ascending degree, and within a
/// degree each element has leading (graded-lex largest) coefficient 1 and no
/// other element's leading monomial in its support.
pub fn polynomial_invariants(alg: &LieAlgebra, max_degree: u32) -> Vec<MultiPoly> {
    let n = alg.dim();
    let m = CommutatorMatrix::new(alg);
    let mut out = Vec::new();
    for degree in 1..=max_degree {
        let monomials = Monomial::all_of_degree(n, degree);
        // The operators preserve degree, so each homogeneous piece is solved alone.
        let mut row_of: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
        let mut columns: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(monomials.len());
        for mono in &monomials {
            let f = MultiPoly::from_terms(n, [(mono.clone(), Rational::one())]);
            let mut col = Vec::new();
            for i in 0..n {
                let mut image = MultiPoly::zero(n);
                for j in 0..n {
                    let a = &m.entries[i][j];
                    if a.is_zero() || mono.exponents()[j] == 0 {
                        continue;
                    }
                    image = &image + &(a * &f.partial_derivative(j));
                }
                for (t, c) in image.terms() {
                    let next = row_of.len();
                    let r = *row_of.entry((i, t.clone())).or_insert(next);
                    col.push((r, c.clone()));
                }
            }
            columns.push(col);
        }
        let mut system = vec![vec![Rational::zero(); monomials.len()]; row_of.len()];
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                system[r][c] += v;
            }
        }
        let mut kernel = linalg::kernel(&system, monomials.len());
        linalg::rref(&mut kernel);
        for v in kernel {
            let f = MultiPoly::from_terms(n, monomials.iter().cloned().zip(v));
            debug_assert!(coadjoint_residuals(alg, &f).iter().all(MultiPoly::is_zero));
            out.push(f);
        }
    }
    out
}

/// Maximum rank of the Jacobian `[df_i/dx_j]` over random integer points:
/// a lower bound on how many of `fs` are functionally independent.
pub fn functional_independence_check(fs: &[MultiPoly], trials: usize, bound: u64, seed: u64) -> usize {
    let Some(first) = fs.first() else {
        return 0;
    };
    let n = first.num_vars();
    assert!(fs.iter().all(|f| f.num_vars() == n), "all functions must share a ring");
    let jacobian: Matrix<MultiPoly> = fs
        .iter()
        .map(|f| (0..n).map(|j| f.partial_derivative(j)).collect())
        .collect();
    let ceiling = fs.len().min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        if best == ceiling {
            break;
        }
        let p = random_point(&mut rng, n, bound.max(2));
        let jp: Matrix<Rational> = jacobian
            .iter()
            .map(|row| row.iter().map(|d| d.eval(&p)).collect())
            .collect();
        best = best.max(linalg::rank(&jp));
    }
    best
}
