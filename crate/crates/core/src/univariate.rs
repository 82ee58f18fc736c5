//! Dense univariate integer polynomials and real root isolation.
//!
//! Isolation runs Descartes' rule of signs on the squarefree part, bisecting
//! dyadic intervals; a root hit exactly by a midpoint is returned as a
//! degenerate interval `[r, r]`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polycore::IntPolynomial;

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// From a polynomial in a single variable.
    pub fn from_multivariate(p: &IntPolynomial) -> Result<Self> {
        if p.num_vars() != 1 {
            return Err(Error::VarCountMismatch {
                left: 1,
                right: p.num_vars(),
            });
        }
        let deg = p.degree_in(0).unwrap_or(0) as usize;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.exponents()[0] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        UniPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        // sign of den^deg * p(num/den) equals sign of p(x)
        let (num, den) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * num + c * &den_pow;
            if k > 0 {
                den_pow *= den;
            }
        }
        acc.sign_ordering()
    }

    fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    fn from_rational(c: &[BigRational]) -> UniPoly {
        let lcm = c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        UniPoly::new(c.iter().map(|x| (x * &lcm).to_integer()).collect()).primitive()
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = trim(self.to_rational());
        let mut b = trim(other.to_rational());
        while !b.is_empty() {
            let r = rem_rational(&a, &b);
            a = b;
            b = r;
        }
        UniPoly::from_rational(&a)
    }

    /// Exact quotient; `None` if `other` does not divide `self` over the rationals.
    pub fn div_exact(&self, other: &UniPoly) -> Option<UniPoly> {
        let (q, r) = divrem_rational(&self.to_rational(), &other.to_rational());
        if !r.is_empty() {
            return None;
        }
        Some(UniPoly::from_rational(&q))
    }

    /// Primitive squarefree part.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").primitive()
    }

    /// Multiplicity of `0` as a root, and the cofactor.
    pub fn split_zero_root(&self) -> (usize, UniPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, UniPoly::new(self.coeffs[k..].to_vec()))
    }

    /// `p(x + a)` over the rationals.
    fn shifted(c: &[BigRational], a: &BigRational) -> Vec<BigRational> {
        let mut out = c.to_vec();
        let n = out.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &out[j + 1] * a;
                out[j] += t;
            }
        }
        out
    }

    /// Upper bound on the number of roots in the open interval `(a, b)`,
    /// exact when it is 0 or 1.
    pub fn descartes_bound(&self, a: &BigRational, b: &BigRational) -> usize {
        let c = self.to_rational();
        if c.len() <= 1 {
            return 0;
        }
        // r(x) = p(a + (b - a) x), roots in (0, 1)
        let mut r = UniPoly::shifted(&c, a);
        let w = b - a;
        let mut wp = BigRational::one();
        for coef in r.iter_mut() {
            *coef = &*coef * &wp;
            wp = &wp * &w;
        }
        // x^n r(1/(x + 1)), roots in (0, inf)
        r.reverse();
        let s = UniPoly::shifted(&r, &BigRational::one());
        sign_variations(&s)
    }
}

fn sign_variations(c: &[BigRational]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn divrem_rational(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (k, bc) in b.iter().enumerate() {
            let t = bc * &f;
            r[shift + k] -= t;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn rem_rational(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    divrem_rational(a, b).1
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("U")?,
                (1, false) => write!(f, "{mag}*U")?,
                (_, true) => write!(f, "U^{k}")?,
                (_, false) => write!(f, "{mag}*U^{k}")?,
            }
        }
        Ok(())
    }
}

/// An interval `[lo, hi]` holding exactly one real root; `lo == hi` for an
/// exactly known rational root, otherwise the root is interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersects(&self, lo: &BigRational, hi: &BigRational) -> bool {
        &self.lo <= hi && lo <= &self.hi
    }
}

impl fmt::Display for RootInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{{{}}}", self.lo)
        } else {
            write!(f, "({}, {})", self.lo, self.hi)
        }
    }
}

/// Power of two strictly above every root's absolute value (Cauchy bound).
fn root_bound(p: &UniPoly) -> BigRational {
    let lead = p.leading().unwrap().abs();
    let max = p.coeffs[..p.coeffs.len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    let bound = BigRational::one() + BigRational::new(max, lead);
    let mut b = BigRational::one();
    while b <= bound {
        b *= BigRational::from_integer(BigInt::from(2));
    }
    b
}

/// Isolates the real roots of the squarefree part of `q`, in increasing order.
pub fn isolate_real_roots(q: &UniPoly) -> Result<Vec<RootInterval>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = q.squarefree_part();
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let (zero_mult, rest) = sf.split_zero_root();
    let mut out = Vec::new();
    let b = root_bound(&rest);
    let zero = BigRational::zero();
    if rest.degree().unwrap_or(0) > 0 {
        bisect(&rest, -b.clone(), zero.clone(), &mut out);
    }
    if zero_mult > 0 {
        out.push(RootInterval {
            lo: zero.clone(),
            hi: zero.clone(),
        });
    }
    if rest.degree().unwrap_or(0) > 0 {
        bisect(&rest, zero, b, &mut out);
    }
    Ok(out)
}

// p has no root at a or b; pushes isolating intervals for roots in (a, b)
fn bisect(p: &UniPoly, a: BigRational, b: BigRational, out: &mut Vec<RootInterval>) {
    match p.descartes_bound(&a, &b) {
        0 => {}
        1 => out.push(RootInterval { lo: a, hi: b }),
        _ => {
            let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
            bisect(p, a, mid.clone(), out);
            if p.sign_at(&mid) == Ordering::Equal {
                out.push(RootInterval {
                    lo: mid.clone(),
                    hi: mid.clone(),
                });
            }
            bisect(p, mid, b, out);
        }
    }
}

/// Shrinks an isolating interval of a root of squarefree `p` below `width` by sign bisection.
pub fn refine_root(p: &UniPoly, iv: &RootInterval, width: &BigRational) -> RootInterval {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    if lo == hi {
        return iv.clone();
    }
    let two = BigRational::from_integer(BigInt::from(2));
    // endpoints may themselves be roots of `p` (a bisection midpoint, or 0
    // when `iv` came from the zero-free part); the root sought is the one
    // strictly inside
    let mut slo = p.sign_at(&lo);
    let mut shi = p.sign_at(&hi);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let sm = p.sign_at(&mid);
        if sm == Ordering::Equal {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        let left = if slo != Ordering::Equal {
            sm != slo
        } else if shi != Ordering::Equal {
            sm == shi
        } else {
            // Descartes' bound has the parity of the root count
            p.descartes_bound(&lo, &mid) % 2 == 1
        };
        if left {
            hi = mid;
            shi = sm;
        } else {
            lo = mid;
            slo = sm;
        }
    }
    RootInterval { lo, hi }
}

/// The rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_rational_in(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational_in(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return lo.clone();
    }
    if &(&fl + BigRational::one()) <= hi {
        return fl + BigRational::one();
    }
    // lo, hi share integer part; recurse on reciprocals of fractional parts
    let a = &fl;
    let inner = simplest_rational_in(&(hi - a).recip(), &(lo - a).recip());
    a + inner.recip()
}

/// If the root isolated by `iv` is rational, returns it. Skipped (None) when
/// the leading coefficient exceeds `max_lead_bits`.
pub fn rational_root_in(p: &UniPoly, iv: &RootInterval, max_lead_bits: u64) -> Option<BigRational> {
    if iv.is_exact() {
        return Some(iv.lo.clone());
    }
    let lead = p.leading()?.abs();
    if lead.bits() > max_lead_bits {
        return None;
    }
    // distinct rationals with denominators dividing `lead` are >= 1/lead^2 apart
    let width = BigRational::new(BigInt::one(), BigInt::from(2) * &lead * &lead);
    let r = refine_root(p, iv, &width);
    let cand = simplest_rational_in(&r.lo, &r.hi);
    (p.sign_at(&cand) == Ordering::Equal).then_some(cand)
}

/// Upper bound on the algebraic degree of the root isolated by `iv` in
/// squarefree `p`: 1 if rational, else the degree of `p` with its rational
/// roots divided out.
pub fn algebraic_degree_bound(p: &UniPoly, iv: &RootInterval, roots: &[RootInterval]) -> usize {
    const LEAD_BITS: u64 = 256;
    if rational_root_in(p, iv, LEAD_BITS).is_some() {
        return 1;
    }
    let rational_count = roots
        .iter()
        .filter(|r| rational_root_in(p, r, LEAD_BITS).is_some())
        .count();
    // rational roots are found only when the leading coefficient is small
    p.degree().unwrap_or(0) - rational_count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn isolation_examples() {
        let roots = isolate_real_roots(&UniPoly::from_i64(&[-1, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].contains(&r(-1, 1)) && roots[1].contains(&r(1, 1)));
        assert!(isolate_real_roots(&UniPoly::from_i64(&[1, 0, 1])).unwrap().is_empty());
        let third = isolate_real_roots(&UniPoly::from_i64(&[-1, 3])).unwrap();
        assert_eq!(third.len(), 1);
        assert!(third[0].contains(&r(1, 3)));
        assert_eq!(isolate_real_roots(&UniPoly::from_i64(&[])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn multiple_roots_collapse() {
        // (U-1)^2 (U+2) U
        let p = UniPoly::from_i64(&[1, -1]).mul(&UniPoly::from_i64(&[1, -1]));
        let p = p.mul(&UniPoly::from_i64(&[2, 1])).mul(&UniPoly::from_i64(&[0, 1]));
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[1].is_exact() && roots[1].lo.is_zero());
        assert_eq!(p.squarefree_part().degree(), Some(3));
    }

    #[test]
    fn refinement_and_rationality() {
        // 6U^2 - U - 1 = (3U + 1)(2U - 1)
        let p = UniPoly::from_i64(&[-1, -1, 6]);
        let roots = isolate_real_roots(&p).unwrap();
        let rs: Vec<_> = roots.iter().map(|iv| rational_root_in(&p, iv, 64)).collect();
        assert_eq!(rs, vec![Some(r(-1, 3)), Some(r(1, 2))]);
        let two = UniPoly::from_i64(&[-2, 0, 1]);
        let roots = isolate_real_roots(&two).unwrap();
        let tight = refine_root(&two, &roots[1], &r(1, 1 << 30));
        assert!(tight.width() <= r(1, 1 << 30));
        assert!(tight.contains(&r(14142135, 10000000)) || tight.lo > r(14142135, 10000000));
        assert_eq!(rational_root_in(&two, &roots[1], 64), None);
        assert_eq!(algebraic_degree_bound(&two, &roots[1], &roots), 2);
    }

    #[test]
    fn refinement_with_roots_at_endpoints() {
        // U^3 - 2U: isolating intervals touch the root at 0
        let p = UniPoly::from_i64(&[0, -2, 0, 1]);
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        for iv in roots.iter().filter(|iv| !iv.is_exact()) {
            let t = refine_root(&p, iv, &r(1, 1 << 20));
            assert!(t.width() <= r(1, 1 << 20));
            assert!(t.lo.abs() > r(14, 10) && t.hi.abs() < r(15, 10), "{t:?}");
        }
        // every subset of {-2, -3/2, ..., 2}: bisection midpoints and 0 are
        // often roots, so both ends of an interval can vanish
        let w = r(1, 1 << 16);
        for mask in 1u32..(1 << 9) {
            let rs: Vec<i64> = (0..9).filter(|k| mask >> k & 1 == 1).map(|k| k as i64 - 4).collect();
            let mut p = UniPoly::from_i64(&[1]);
            for &k in &rs {
                p = p.mul(&UniPoly::from_i64(&[-k, 2]));
            }
            let roots = isolate_real_roots(&p).unwrap();
            assert_eq!(roots.len(), rs.len());
            for (iv, &k) in roots.iter().zip(&rs) {
                let t = refine_root(&p, iv, &w);
                assert!(t.contains(&r(k, 2)) && t.width() <= w, "{rs:?}: {t:?}");
            }
        }
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_rational_in(&r(3, 10), &r(2, 5)), r(1, 3));
        assert_eq!(simplest_rational_in(&r(-7, 3), &r(-2, 1)), r(-2, 1));
        assert_eq!(simplest_rational_in(&r(-1, 2), &r(1, 3)), r(0, 1));
    }
}
