//! The system at `(t0, t) = (0, 1)`:
//!
//! `Σ_j a_ij x_j^d = 0` for `i ∈ S` and `d x_j^{d-1} (λ0 a_0j - Σ_i λ_i σ_i a_ij) = 0`
//! for `j = 1..n`. Solutions are sorted by the set `J` of vanishing
//! coordinates among `x_1..x_n`; each case reduces to exact linear algebra
//! on submatrices of `A`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{rank_rational, Matrix};
use crate::perturb::{combinations, PerturbationMatrix, SubsetSelector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JCase {
    /// `#J = n - s`: unique multipliers, unique `y_j = x_j^d` with `x0 = 1`,
    /// all nonzero, hence `d^s` affine solutions.
    Regular { solutions: BigUint, y: Vec<BigRational> },
    /// `#J < n - s`: the multiplier conditions have full rank, only `λ = 0`.
    TooFewZeros { lambda_rank: usize },
    /// `#J > n - s`: the constraint rows force every `x_j^d`, including `x0^d`, to 0.
    TooManyZeros { y_rank: usize },
    /// Rank conditions that the small-matrix property should rule out.
    Unexpected(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JReport {
    /// Vanishing coordinates, 1-based.
    pub zero_coords: Vec<usize>,
    pub case: JCase,
    /// Whether a solution with `x0 = 0` exists for this `J`.
    pub x0_zero_solution: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitSystemReport {
    pub n: usize,
    pub s: usize,
    pub d: u32,
    pub per_j: Vec<JReport>,
    pub x0_zero_solutions: usize,
    /// Sum of `d^s` over regular `J`.
    pub affine_solutions: BigUint,
    /// Affine count weighted by the multiplicity `(d-1)^{n-s}` of the vanishing coordinates.
    pub weighted_count: BigUint,
}

impl LimitSystemReport {
    /// No solution at infinity and the expected count for every regular `J`.
    pub fn is_consistent(&self) -> bool {
        let expect = BigUint::from(self.d).pow(self.s as u32);
        self.x0_zero_solutions == 0
            && self.per_j.iter().all(|r| match &r.case {
                JCase::Regular { solutions, y } => {
                    *solutions == expect && y.iter().all(|v| !v.is_zero())
                }
                JCase::TooFewZeros { .. } | JCase::TooManyZeros { .. } => true,
                JCase::Unexpected(_) => false,
            })
    }
}

fn q(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Solves the square system `m y = rhs` by Gaussian elimination; `None` if singular.
fn solve(m: &Matrix<BigRational>, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, p);
        let piv = a[k][k].clone();
        for j in k..=n {
            a[k][j] = &a[k][j] / &piv;
        }
        for r in 0..n {
            if r != k && !a[r][k].is_zero() {
                let f = a[r][k].clone();
                for j in k..=n {
                    let t = &a[k][j] * &f;
                    a[r][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Case analysis of the `(t0, t) = (0, 1)` system over every `J ⊆ {1..n}`.
pub fn limit_system_solutions(
    a: &PerturbationMatrix,
    sel: &SubsetSelector,
    n: usize,
    d: u32,
) -> Result<LimitSystemReport> {
    let s = sel.len();
    if s > n {
        return Err(Error::InvalidSelector(format!("#S = {s} exceeds n = {n}")));
    }
    if n > 16 {
        return Err(Error::Budget {
            what: "coordinate subsets".into(),
            size: 1u128 << n,
            limit: 1 << 16,
        });
    }
    if a.cols() != n + 1 || sel.subset().iter().any(|&i| i >= a.rows()) {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: a.cols(),
        });
    }
    let sign = |k: usize| BigInt::from(sel.signs()[k].as_int());
    let mut per_j = Vec::new();
    let mut x0_zero = 0;
    let mut affine = BigUint::zero();
    for size in 0..=n {
        for jz in combinations(n, size) {
            let zero_coords: Vec<usize> = jz.iter().map(|j| j + 1).collect();
            let nonzero: Vec<usize> = (1..=n).filter(|j| !zero_coords.contains(j)).collect();
            let k = nonzero.len();
            // multiplier conditions, one row per nonzero coordinate
            let lam: Matrix<BigRational> = nonzero
                .iter()
                .map(|&j| {
                    let mut row = vec![q(a.entry(0, j))];
                    for (t, &i) in sel.subset().iter().enumerate() {
                        row.push(q(&(-(a.entry(i, j) * sign(t)))));
                    }
                    row
                })
                .collect();
            // constraint rows in y = (x0^d, x_j^d for nonzero j)
            let ys: Matrix<BigRational> = sel
                .subset()
                .iter()
                .map(|&i| {
                    let mut row = vec![q(a.entry(i, 0))];
                    row.extend(nonzero.iter().map(|&j| q(a.entry(i, j))));
                    row
                })
                .collect();
            let lambda_rank = if k == 0 { 0 } else { rank_rational(&lam) };
            let y_rank = if s == 0 { 0 } else { rank_rational(&ys) };
            let lambda_free = lambda_rank < s + 1;
            // x0 = 0: need nonzero y on the nonzero coordinates alone
            let tail: Matrix<BigRational> = ys.iter().map(|r| r[1..].to_vec()).collect();
            let tail_rank = if s == 0 || k == 0 { 0 } else { rank_rational(&tail) };
            let x0_zero_solution = k > 0 && lambda_free && tail_rank < k;
            if x0_zero_solution {
                x0_zero += 1;
            }
            let case = if k > s {
                if lambda_free {
                    JCase::Unexpected(format!("multiplier rank {lambda_rank} < {}", s + 1))
                } else {
                    JCase::TooFewZeros { lambda_rank }
                }
            } else if k < s {
                if y_rank < k + 1 {
                    JCase::Unexpected(format!("constraint rank {y_rank} < {}", k + 1))
                } else {
                    JCase::TooManyZeros { y_rank }
                }
            } else if !lambda_free || (s > 0 && tail_rank < k) {
                JCase::Unexpected("regular case without a unique solution".into())
            } else {
                // x0 = 1: tail * y_K = -column 0
                let rhs: Vec<BigRational> = ys.iter().map(|r| -r[0].clone()).collect();
                match solve(&tail, &rhs) {
                    Some(y) if y.iter().all(|v| !v.is_zero()) => {
                        let sols = BigUint::from(d).pow(s as u32);
                        affine += &sols;
                        JCase::Regular { solutions: sols, y }
                    }
                    Some(_) => JCase::Unexpected("a coordinate of the solution vanishes".into()),
                    None => JCase::Unexpected("singular constraint block".into()),
                }
            };
            per_j.push(JReport {
                zero_coords,
                case,
                x0_zero_solution,
            });
        }
    }
    let weighted_count = &affine * BigUint::from(d - 1).pow((n - s) as u32);
    Ok(LimitSystemReport {
        n,
        s,
        d,
        per_j,
        x0_zero_solutions: x0_zero,
        affine_solutions: affine,
        weighted_count,
    })
}
