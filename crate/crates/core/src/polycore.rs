//! Sparse multivariate polynomials with exact coefficients.
//!
//! A polynomial is a map from exponent vectors to nonzero coefficients,
//! kept in graded-lexicographic order. The same type carries integer
//! polynomials (`IntPolynomial`) and rational ones (`RatPolynomial`).
//!
//! Homogenization always prepends the new variable as index 0, so a
//! polynomial in `x1..xn` becomes one in `x0, x1..xn`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Ring operations needed by [`Polynomial`].
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    // graded lex: total degree first, then the first differing exponent
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<C> {
    num_vars: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type IntPolynomial = Polynomial<BigInt>;
pub type RatPolynomial = Polynomial<BigRational>;

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: C) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::one(num_vars), c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, C::one())
    }

    /// The variable `x_index`. Panics if `index >= num_vars`.
    pub fn var(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable index {index} >= {num_vars}");
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::var(num_vars, index), C::one());
        p
    }

    pub fn monomial(exponents: Vec<u32>, c: C) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(Monomial(exponents), c);
        p
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::VarCountMismatch {
                    left: num_vars,
                    right: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Adds `c * m` in place, purging a coefficient that cancels to zero.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.len(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&Monomial::one(self.num_vars))
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VarCountMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.num_vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Maximum total degree of a term. The zero polynomial has none.
    pub fn total_degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Degree in a single variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Degree in the variables listed in `vars` jointly.
    pub fn degree_in_group(&self, vars: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|&v| m.0[v]).sum())
            .max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// True when every term has the same degree `deg` in the variables `vars`.
    pub fn is_homogeneous_in(&self, vars: &[usize], deg: u32) -> bool {
        self.terms
            .keys()
            .all(|m| vars.iter().map(|&v| m.0[v]).sum::<u32>() == deg)
    }

    /// `x0^e * p(x1/x0, ..., xn/x0)` with `x0` prepended as variable 0.
    pub fn homogenize(&self, e: u32) -> Result<Self> {
        if let Ok(deg) = self.total_degree() {
            if deg > e {
                return Err(Error::HomogenizationDegree {
                    degree: deg,
                    target: e,
                });
            }
        }
        let mut out = Self::zero(self.num_vars + 1);
        for (m, c) in &self.terms {
            let mut exps = Vec::with_capacity(self.num_vars + 1);
            exps.push(e - m.degree());
            exps.extend_from_slice(&m.0);
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Sets variable 0 to one and drops it.
    pub fn dehomogenize(&self) -> Self {
        assert!(self.num_vars > 0);
        let mut out = Self::zero(self.num_vars - 1);
        for (m, c) in &self.terms {
            out.add_term(Monomial(m.0[1..].to_vec()), c.clone());
        }
        out
    }

    pub fn partial_derivative(&self, j: usize) -> Result<Self> {
        if j >= self.num_vars {
            return Err(Error::VarIndexOutOfRange {
                index: j,
                num_vars: self.num_vars,
            });
        }
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            let k = m.0[j];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[j] -= 1;
            out.add_term(Monomial(e), c.clone() * small::<C>(k));
        }
        Ok(out)
    }

    /// Moves variable `i` to slot `mapping[i]` of a polynomial in `target_vars` variables.
    pub fn embed(&self, target_vars: usize, mapping: &[usize]) -> Self {
        assert_eq!(mapping.len(), self.num_vars);
        let mut out = Self::zero(target_vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; target_vars];
            for (i, &k) in m.0.iter().enumerate() {
                e[mapping[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`; all images share one variable count.
    pub fn compose(&self, images: &[Polynomial<C>]) -> Result<Self> {
        if images.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: images.len(),
            });
        }
        let target = images.first().map_or(0, |p| p.num_vars);
        if let Some(bad) = images.iter().find(|p| p.num_vars != target) {
            return Err(Error::VarCountMismatch {
                left: target,
                right: bad.num_vars,
            });
        }
        let mut powers: Vec<Vec<Polynomial<C>>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &k) in m.0.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    term = &term * &powers[i][k];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(self.num_vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

fn small<C: Coefficient>(k: u32) -> C {
    let mut acc = C::zero();
    for _ in 0..k {
        acc = acc + C::one();
    }
    acc
}

impl<'a, C: Coefficient> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<'a, C: Coefficient> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a, C: Coefficient> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        self.scale(&-C::one())
    }
}

impl IntPolynomial {
    /// Largest absolute coefficient; zero for the zero polynomial.
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn to_rational(&self) -> RatPolynomial {
        self.map_coefficients(|c| BigRational::from_integer(c.clone()))
    }

    pub fn evaluate(&self, pt: &RationalPoint) -> Result<BigRational> {
        self.to_rational().evaluate(pt)
    }

    /// Evaluates at integer arguments without leaving the integers.
    pub fn evaluate_int(&self, args: &[BigInt]) -> Result<BigInt> {
        if args.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: args.len(),
            });
        }
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (a, &k) in args.iter().zip(&m.0) {
                if k > 0 {
                    v *= num_traits::pow(a.clone(), k as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    pub fn to_canonical_string(&self, names: &[String]) -> String {
        format_terms(self.terms.iter().rev(), names, |c| {
            (c.is_negative(), c.abs().to_string(), c.abs().is_one())
        })
    }
}

impl RatPolynomial {
    pub fn evaluate(&self, pt: &RationalPoint) -> Result<BigRational> {
        if pt.dim() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: pt.dim(),
            });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in pt.coords.iter().zip(&m.0) {
                if k > 0 {
                    v *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Clears denominators; returns the integer polynomial and the positive multiplier used.
    pub fn clear_denominators(&self) -> (IntPolynomial, BigInt) {
        use num_integer::Integer;
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let p = self.map_coefficients(|c| (c * BigRational::from_integer(lcm.clone())).to_integer());
        (p, lcm)
    }
}

fn format_terms<'a, C: 'a>(
    terms: impl Iterator<Item = (&'a Monomial, &'a C)>,
    names: &[String],
    parts: impl Fn(&C) -> (bool, String, bool),
) -> String {
    let mut out = String::new();
    for (idx, (m, c)) in terms.enumerate() {
        let (neg, mag, unit) = parts(c);
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if !unit || m.degree() == 0 {
            factors.push(mag);
        }
        for (i, &k) in m.0.iter().enumerate() {
            let name = names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("x{}", i + 1));
            match k {
                0 => {}
                1 => factors.push(name),
                _ => factors.push(format!("{name}^{k}")),
            }
        }
        out.push_str(&factors.join(" * "));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.num_vars);
        f.write_str(&self.to_canonical_string(&names))
    }
}

/// `x1, ..., xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Parses a sum of terms `c * v1^a1 * ... * vk^ak` over the given variable names.
pub fn parse_polynomial(text: &str, names: &[String]) -> Result<IntPolynomial> {
    let n = names.len();
    let mut out = IntPolynomial::zero(n);
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = cleaned.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let mut sign = BigInt::one();
        while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
            pos += 1;
        }
        let term = &cleaned[start..pos];
        if term.is_empty() {
            return Err(Error::Parse(format!("missing term in {text:?}")));
        }
        let mut coeff = sign;
        let mut exps = vec![0u32; n];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in {term:?}")));
            }
            if factor.as_bytes()[0].is_ascii_digit() {
                let c: BigInt = factor
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {factor:?}")))?;
                coeff *= c;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((v, e)) => (
                    v,
                    e.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let idx = names
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            exps[idx] += exp;
        }
        out.add_term(Monomial(exps), coeff);
    }
    Ok(out)
}

/// A point with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalPoint {
    pub coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint { coords }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        RationalPoint {
            coords: values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `p/q` as a big rational.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        default_names(n)
    }

    fn p(s: &str, n: usize) -> IntPolynomial {
        parse_polynomial(s, &names(n)).unwrap()
    }

    #[test]
    fn add_cancels_and_merges() {
        assert!((&p("x1", 2) + &p("-x1", 2)).is_zero());
        assert_eq!(&p("x1^2 + 1", 1) + &p("x1", 1), p("x1^2 + x1 + 1", 1));
        assert_eq!(&p("3*x1*x2", 2) + &p("4*x1*x2", 2), p("7*x1*x2", 2));
    }

    #[test]
    fn mismatched_variable_counts_are_errors() {
        let err = p("x1", 1).try_add(&p("x1", 2)).unwrap_err();
        assert_eq!(err, Error::VarCountMismatch { left: 1, right: 2 });
        assert!(p("x1", 1).try_mul(&p("x2", 2)).is_err());
    }

    #[test]
    fn products() {
        assert_eq!(&p("x1 + 1", 1) * &p("x1 - 1", 1), p("x1^2 - 1", 1));
        let q = p("5*x1*x2 - 3", 2);
        assert_eq!(&q * &IntPolynomial::one(2), q);
        assert_eq!(p("x1 + x2", 2).pow(2), p("x1^2 + 2*x1*x2 + x2^2", 2));
    }

    #[test]
    fn homogenize_examples() {
        let h = p("x1^2 + 3", 1).homogenize(2).unwrap();
        assert_eq!(h, parse_polynomial("x1^2 + 3*x0^2", &["x0".into(), "x1".into()]).unwrap());
        let h = p("x1", 1).homogenize(3).unwrap();
        assert_eq!(h, IntPolynomial::monomial(vec![2, 1], BigInt::one()));
        let c = IntPolynomial::constant(0, BigInt::from(5));
        assert_eq!(c.homogenize(0).unwrap(), IntPolynomial::constant(1, BigInt::from(5)));
        assert!(matches!(
            p("x1^3", 1).homogenize(2),
            Err(Error::HomogenizationDegree { degree: 3, target: 2 })
        ));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x1^2*x2", 2).partial_derivative(0).unwrap(), p("2*x1*x2", 2));
        assert!(p("17", 2).partial_derivative(1).unwrap().is_zero());
        assert_eq!(p("x1^3 + x2", 2).partial_derivative(1).unwrap(), p("1", 2));
        assert!(p("x1", 2).partial_derivative(2).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let circle = p("x1^2 + x2^2 - 1", 2);
        assert!(circle.evaluate(&RationalPoint::from_integers(&[1, 0])).unwrap().is_zero());
        let pt = RationalPoint::new(vec![rat(3, 2), rat(7, 1)]);
        assert_eq!(p("x1", 2).evaluate(&pt).unwrap(), rat(3, 2));
        let pt = RationalPoint::new(vec![rat(2, 3), rat(3, 2)]);
        assert_eq!(p("x1*x2", 2).evaluate(&pt).unwrap(), rat(1, 1));
        assert!(p("x1", 2).evaluate(&RationalPoint::from_integers(&[1])).is_err());
    }

    #[test]
    fn height_and_degree() {
        assert_eq!(p("x1^2 - 7*x2", 2).height(), BigInt::from(7));
        assert_eq!(IntPolynomial::zero(2).height(), BigInt::zero());
        assert_eq!(p("4*x1 - 1", 2).height(), BigInt::from(4));
        assert_eq!(p("x1^2*x2 + x1", 2).total_degree().unwrap(), 3);
        assert_eq!(p("5", 2).total_degree().unwrap(), 0);
        assert_eq!(p("x2^2 - x1^2", 2).total_degree().unwrap(), 2);
        assert_eq!(IntPolynomial::zero(2).total_degree(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn canonical_text_round_trips() {
        let q = p("-3*x1^2*x2 + x2 - 9999999999999999999999", 2);
        let text = q.to_string();
        assert_eq!(text, "-3 * x1^2 * x2 + x2 - 9999999999999999999999");
        assert_eq!(p(&text, 2), q);
        assert_eq!(IntPolynomial::zero(2).to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        assert!(parse_polynomial("x1 + y", &names(1)).is_err());
        assert!(parse_polynomial("", &names(1)).is_err());
        assert!(parse_polynomial("x1^a", &names(1)).is_err());
        assert!(parse_polynomial("2**x1", &names(1)).is_err());
    }

    #[test]
    fn compose_substitutes() {
        // (x1 + x2)^2 with x1 -> y, x2 -> 1 gives y^2 + 2y + 1
        let q = p("x1^2 + 2*x1*x2 + x2^2", 2);
        let y = IntPolynomial::var(1, 0);
        let r = q.compose(&[y, IntPolynomial::one(1)]).unwrap();
        assert_eq!(r, p("x1^2 + 2*x1 + 1", 1));
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4, 1));
        assert!(parse_rational("1/0").is_err());
    }
}
