//! Determinant of one multigraded strand of a Koszul complex.
//!
//! For forms `f_1..f_N` on a product of projective spaces and a multidegree
//! `ν` for which the strand is exact, the alternating product of maximal
//! minors of the differentials is the multihomogeneous resultant. Which rows
//! and columns enter each minor is decided once, modulo a word prime at a
//! random point, and reused at every evaluation point; the identity
//! `R · Π(even minors) = Π(odd minors)` then holds as polynomials, so any
//! point where the even minors are nonzero gives the exact value of `R`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, independent_rows_mod, reduce_mod, Matrix, MODULUS};
use crate::perturb::combinations;

/// Exponents of the parameters `(t0, t, U)`.
pub type ParamExps = [u32; 3];

/// A form in the eliminated variables whose coefficients are polynomials in `(t0, t, U)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedForm {
    pub group_degrees: Vec<u32>,
    pub terms: Vec<(Vec<u32>, Vec<(ParamExps, BigInt)>)>,
}

// one nonzero entry of a differential, stored per column
#[derive(Clone, Copy, Debug)]
struct Entry {
    row: usize,
    form: usize,
    term: usize,
    negate: bool,
}

#[derive(Clone, Debug)]
struct Block {
    k: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

/// A degree-`ν` strand with a fixed minor plan.
#[derive(Clone, Debug)]
pub struct KoszulStrand {
    forms: Vec<GradedForm>,
    dims: Vec<usize>,
    // columns[k][col] = entries of d_k in that column
    columns: Vec<Vec<Vec<Entry>>>,
    plan: Vec<Block>,
}

/// All exponent vectors of multidegree `degs` over the variable groups.
fn monomials(groups: &[Vec<usize>], degs: &[i64], num_vars: usize) -> Vec<Vec<u32>> {
    if degs.iter().any(|&d| d < 0) {
        return Vec::new();
    }
    let mut out = vec![vec![0u32; num_vars]];
    for (g, &deg) in groups.iter().zip(degs) {
        let mut next = Vec::new();
        for base in &out {
            compositions(g, deg as u32, 0, &mut base.clone(), &mut next);
        }
        out = next;
    }
    out
}

fn compositions(vars: &[usize], left: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == vars.len() {
        cur[vars[pos]] = left;
        out.push(cur.clone());
        cur[vars[pos]] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[vars[pos]] = e;
        compositions(vars, left - e, pos + 1, cur, out);
    }
    cur[vars[pos]] = 0;
}

/// Number of monomials of the strand's largest term, without building it.
pub fn strand_dimensions(groups: &[Vec<usize>], nu: &[u32], degrees: &[Vec<u32>]) -> Vec<u128> {
    let n = degrees.len();
    (0..=n)
        .map(|k| {
            combinations(n, k)
                .iter()
                .map(|subset| {
                    groups
                        .iter()
                        .enumerate()
                        .map(|(g, vars)| {
                            let deg = nu[g] as i64 - subset.iter().map(|&i| degrees[i][g] as i64).sum::<i64>();
                            if deg < 0 {
                                0
                            } else {
                                binom_u128(deg as u128 + vars.len() as u128 - 1, vars.len() as u128 - 1)
                            }
                        })
                        .product::<u128>()
                })
                .sum()
        })
        .collect()
}

fn binom_u128(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl KoszulStrand {
    /// Builds the strand and its minor plan. `groups` partitions the
    /// eliminated variables; each form must be homogeneous of its
    /// `group_degrees`.
    pub fn new(
        forms: Vec<GradedForm>,
        groups: Vec<Vec<usize>>,
        nu: Vec<u32>,
        num_vars: usize,
        max_dim: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        let n = forms.len();
        let degrees: Vec<Vec<u32>> = forms.iter().map(|f| f.group_degrees.clone()).collect();
        let est = strand_dimensions(&groups, &nu, &degrees);
        if let Some(&big) = est.iter().max() {
            if big > max_dim as u128 {
                return Err(Error::Budget {
                    what: "Koszul strand dimension".into(),
                    size: big,
                    limit: max_dim as u128,
                });
            }
        }
        let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| combinations(n, k)).collect();
        let mut bases: Vec<Vec<(usize, Vec<u32>)>> = Vec::with_capacity(n + 1);
        let mut index: Vec<HashMap<(usize, Vec<u32>), usize>> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut basis = Vec::new();
            let mut idx = HashMap::new();
            for (si, subset) in subsets[k].iter().enumerate() {
                let degs: Vec<i64> = (0..groups.len())
                    .map(|g| nu[g] as i64 - subset.iter().map(|&i| degrees[i][g] as i64).sum::<i64>())
                    .collect();
                for m in monomials(&groups, &degs, num_vars) {
                    idx.insert((si, m.clone()), basis.len());
                    basis.push((si, m));
                }
            }
            bases.push(basis);
            index.push(idx);
        }
        let subset_index: Vec<HashMap<Vec<usize>, usize>> = subsets
            .iter()
            .map(|ss| ss.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut columns = vec![Vec::new()];
        for k in 1..=n {
            let mut cols = Vec::with_capacity(bases[k].len());
            for (si, mono) in &bases[k] {
                let subset = &subsets[k][*si];
                let mut entries = Vec::new();
                for (pos, &i) in subset.iter().enumerate() {
                    let mut rest = subset.clone();
                    rest.remove(pos);
                    let ri = subset_index[k - 1][&rest];
                    for (ti, (exps, _)) in forms[i].terms.iter().enumerate() {
                        let target: Vec<u32> = exps.iter().zip(mono).map(|(a, b)| a + b).collect();
                        let row = *index[k - 1]
                            .get(&(ri, target))
                            .ok_or_else(|| Error::InvalidSystem(format!("form {i} is not homogeneous of its degree")))?;
                        entries.push(Entry {
                            row,
                            form: i,
                            term: ti,
                            negate: pos % 2 == 1,
                        });
                    }
                }
                cols.push(entries);
            }
            columns.push(cols);
        }
        let dims = bases.iter().map(Vec::len).collect();
        let mut strand = KoszulStrand {
            forms,
            dims,
            columns,
            plan: Vec::new(),
        };
        strand.build_plan(rng)?;
        Ok(strand)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn term_values_mod(&self, point: [u64; 3]) -> Vec<Vec<u64>> {
        let m = MODULUS as u128;
        let pw = |b: u64, e: u32| -> u128 {
            let mut r = 1u128;
            for _ in 0..e {
                r = r * b as u128 % m;
            }
            r
        };
        self.forms
            .iter()
            .map(|f| {
                f.terms
                    .iter()
                    .map(|(_, coeffs)| {
                        coeffs.iter().fold(0u128, |acc, (e, c)| {
                            let v = reduce_mod(c) as u128 * pw(point[0], e[0]) % m * pw(point[1], e[1]) % m
                                * pw(point[2], e[2])
                                % m;
                            (acc + v) % m
                        }) as u64
                    })
                    .collect()
            })
            .collect()
    }

    fn term_values(&self, point: &[BigInt; 3]) -> Vec<Vec<BigInt>> {
        self.forms
            .iter()
            .map(|f| {
                f.terms
                    .iter()
                    .map(|(_, coeffs)| {
                        coeffs.iter().fold(BigInt::zero(), |acc, (e, c)| {
                            acc + c * point[0].pow(e[0]) * point[1].pow(e[1]) * point[2].pow(e[2])
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn build_plan(&mut self, rng: &mut ChaCha8Rng) -> Result<()> {
        let top = match (1..self.dims.len()).rev().find(|&k| self.dims[k] > 0) {
            Some(k) => k,
            None if self.dims[0] == 0 => return Ok(()),
            None => return Err(Error::Degenerate("strand has no differentials".into())),
        };
        'attempt: for _ in 0..4 {
            let point = [
                rng.gen_range(1..MODULUS),
                rng.gen_range(1..MODULUS),
                rng.gen_range(1..MODULUS),
            ];
            let values = self.term_values_mod(point);
            let mut cols: Vec<usize> = (0..self.dims[top]).collect();
            let mut plan = Vec::new();
            for k in (1..=top).rev() {
                let mut dense = vec![vec![0u64; cols.len()]; self.dims[k - 1]];
                for (c, &col) in cols.iter().enumerate() {
                    for e in &self.columns[k][col] {
                        let v = values[e.form][e.term];
                        dense[e.row][c] = if e.negate { (MODULUS - v) % MODULUS } else { v };
                    }
                }
                let rows = independent_rows_mod(&dense);
                if rows.len() != cols.len() {
                    continue 'attempt;
                }
                let mut chosen = vec![false; self.dims[k - 1]];
                for &r in &rows {
                    chosen[r] = true;
                }
                plan.push(Block {
                    k,
                    rows,
                    cols: cols.clone(),
                });
                cols = (0..self.dims[k - 1]).filter(|&r| !chosen[r]).collect();
            }
            if !cols.is_empty() {
                continue;
            }
            self.plan = plan;
            return Ok(());
        }
        Err(Error::Degenerate(format!(
            "Koszul strand with dimensions {:?} is not exact at random points",
            self.dims
        )))
    }

    fn minor(&self, block: &Block, values: &[Vec<BigInt>]) -> Matrix<BigInt> {
        let mut pos = vec![usize::MAX; self.dims[block.k - 1]];
        for (i, &r) in block.rows.iter().enumerate() {
            pos[r] = i;
        }
        let size = block.cols.len();
        let mut m = vec![vec![BigInt::zero(); size]; size];
        for (c, &col) in block.cols.iter().enumerate() {
            for e in &self.columns[block.k][col] {
                let r = pos[e.row];
                if r != usize::MAX {
                    let v = &values[e.form][e.term];
                    m[r][c] = if e.negate { -v } else { v.clone() };
                }
            }
        }
        m
    }

    /// The resultant at `(t0, t, U)`, or `None` when a denominator minor
    /// of the plan vanishes there.
    pub fn evaluate(&self, point: &[BigInt; 3]) -> Option<BigRational> {
        let values = self.term_values(point);
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for block in &self.plan {
            let det = det_bareiss(&self.minor(block, &values));
            if block.k % 2 == 1 {
                num *= det;
            } else {
                if det.is_zero() {
                    return None;
                }
                den *= det;
            }
        }
        Some(BigRational::new(num, den))
    }

    /// Rank deficiency of the first differential at a point: positive
    /// exactly when the specialized forms have a common zero.
    pub fn first_map_corank(&self, point: &[BigInt; 3]) -> usize {
        if self.dims.len() < 2 {
            return 0;
        }
        let values = self.term_values(point);
        let mut m = vec![vec![BigRational::zero(); self.dims[1]]; self.dims[0]];
        for (c, col) in self.columns[1].iter().enumerate() {
            for e in col {
                let v = BigRational::from_integer(values[e.form][e.term].clone());
                m[e.row][c] = if e.negate { -v } else { v };
            }
        }
        self.dims[0] - crate::linalg::rank_rational(&m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::SeedableRng;

    fn form(degs: Vec<u32>, terms: Vec<(Vec<u32>, i64)>) -> GradedForm {
        GradedForm {
            group_degrees: degs,
            terms: terms
                .into_iter()
                .map(|(e, c)| (e, vec![([0, 0, 0], BigInt::from(c))]))
                .collect(),
        }
    }

    #[test]
    fn linear_forms_give_the_determinant() {
        // three linear forms in P^2: resultant = det of the coefficient matrix
        let rows = [[2, -1, 3], [0, 4, 1], [5, 2, -2]];
        let forms = rows
            .iter()
            .map(|r| {
                form(
                    vec![1],
                    (0..3)
                        .map(|j| {
                            let mut e = vec![0; 3];
                            e[j] = 1;
                            (e, r[j])
                        })
                        .collect(),
                )
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k = KoszulStrand::new(forms, vec![vec![0, 1, 2]], vec![1], 3, 100, &mut rng).unwrap();
        let v = k.evaluate(&[BigInt::one(), BigInt::one(), BigInt::one()]).unwrap();
        let m: Matrix<BigInt> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(v.abs(), BigRational::from_integer(det_bareiss(&m).abs()));
    }

    #[test]
    fn binary_forms_give_sylvester_resultant() {
        // x^2 - 3 y^2 and x - 2 y on P^1: resultant = 4 - 3 = 1 up to sign
        let f = form(vec![2], vec![(vec![2, 0], 1), (vec![0, 2], -3)]);
        let g = form(vec![1], vec![(vec![1, 0], 1), (vec![0, 1], -2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = KoszulStrand::new(vec![f, g], vec![vec![0, 1]], vec![2], 2, 100, &mut rng).unwrap();
        let v = k.evaluate(&[BigInt::one(), BigInt::one(), BigInt::one()]).unwrap();
        assert_eq!(v.abs(), BigRational::one());
        // common root x = y: x^2 - y^2 and x - y
        let f = form(vec![2], vec![(vec![2, 0], 1), (vec![0, 2], -1)]);
        let g = form(vec![1], vec![(vec![1, 0], 1), (vec![0, 1], -1)]);
        let k = KoszulStrand::new(vec![f, g], vec![vec![0, 1]], vec![2], 2, 100, &mut rng);
        assert!(matches!(k, Err(Error::Degenerate(_))));
    }

    #[test]
    fn dimension_guard() {
        let f = form(vec![2], vec![(vec![2, 0], 1), (vec![0, 2], -3)]);
        let g = form(vec![1], vec![(vec![1, 0], 1), (vec![0, 1], -2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = KoszulStrand::new(vec![f, g], vec![vec![0, 1]], vec![2], 2, 2, &mut rng);
        assert!(matches!(k, Err(Error::Budget { .. })));
    }
}
