//! Small exact linear algebra: Bareiss determinants over the integers,
//! rank over the rationals, and pivot selection modulo a word prime.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix.
pub type Matrix<T> = Vec<Vec<T>>;

/// Determinant by fraction-free Gaussian elimination.
pub fn det_bareiss(m: &Matrix<BigInt>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant over the rationals.
pub fn det_rational(m: &Matrix<BigRational>) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if piv != k {
            a.swap(k, piv);
            det = -det;
        }
        let p = a[k][k].clone();
        det *= &p;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let v = &a[k][j] * &f;
                a[i][j] -= v;
            }
        }
    }
    det
}

/// Rank over the rationals.
pub fn rank_rational(m: &Matrix<BigRational>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let p = a[rank][c].clone();
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &p;
            for j in c..cols {
                let v = &a[rank][j] * &f;
                a[i][j] -= v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn to_rational_matrix(m: &Matrix<BigInt>) -> Matrix<BigRational> {
    m.iter()
        .map(|row| row.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect()
}

/// A 61-bit Mersenne prime used for fast rank decisions. Nonsingular
/// modulo this prime implies nonsingular over the rationals.
pub const MODULUS: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, MODULUS - 2)
}

pub fn reduce_mod(v: &BigInt) -> u64 {
    let m = BigInt::from(MODULUS);
    let mut r = v % &m;
    if r.is_negative() {
        r += &m;
    }
    r.try_into().expect("residue fits in u64")
}

/// Greedily selects a maximal set of linearly independent rows modulo
/// [`MODULUS`], scanning rows in order. Returns their indices.
pub fn independent_rows_mod(m: &Matrix<u64>) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    // basis rows kept in reduced form keyed by pivot column
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in m.iter().enumerate() {
        let mut r = row.clone();
        for (pc, b) in &basis {
            let f = r[*pc];
            if f != 0 {
                for j in 0..cols {
                    r[j] = (r[j] + MODULUS - mulmod(f, b[j])) % MODULUS;
                }
            }
        }
        if let Some(pc) = r.iter().position(|&v| v != 0) {
            let inv = invmod(r[pc]);
            for v in r.iter_mut() {
                *v = mulmod(*v, inv);
            }
            basis.push((pc, r));
            chosen.push(idx);
            if chosen.len() == cols {
                break;
            }
        }
    }
    chosen
}
