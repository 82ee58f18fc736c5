//! Closed `f64` intervals with outward rounding.
//!
//! Every arithmetic result is widened by one ulp on each side, which covers
//! the half-ulp error of a correctly rounded IEEE operation. Library
//! transcendental functions get a wider margin.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY || x.is_nan() {
        x
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x == f64::INFINITY || x.is_nan() {
        x
    } else {
        x.next_up()
    }
}

fn down_n(mut x: f64, k: usize) -> f64 {
    for _ in 0..k {
        x = down(x);
    }
    x
}

fn up_n(mut x: f64, k: usize) -> f64 {
    for _ in 0..k {
        x = up(x);
    }
    x
}

// margin for libm functions, in ulps
const LIBM_ULPS: usize = 3;

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(!(lo > hi), "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The exact point `x`.
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn entire() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    fn widened(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Interval::entire();
        }
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        match v.to_f64() {
            Some(f) if f.is_finite() => {
                if f.abs() < 9007199254740992.0 && BigInt::from(f as i64) == *v {
                    Interval::point(f)
                } else {
                    Interval::widened(f, f)
                }
            }
            _ if v.is_negative() => Interval::new(f64::NEG_INFINITY, -f64::MAX),
            _ => Interval::new(f64::MAX, f64::INFINITY),
        }
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        Interval::from_bigint(&BigInt::from(v.clone()))
    }

    pub fn from_rational(v: &BigRational) -> Self {
        let (num, den) = (v.numer(), v.denom());
        let bits = num.bits().max(den.bits());
        if bits <= 1000 {
            return Interval::from_bigint(num).div(&Interval::from_bigint(den));
        }
        // shift both down; |num| in [a 2^k, (a+1) 2^k], den in [b 2^k, (b+1) 2^k]
        let shift = bits - 1000;
        let a = num.abs() >> shift;
        let b = den >> shift;
        let a_iv = Interval::from_bigint(&a).hull(&Interval::from_bigint(&(&a + 1)));
        let b_iv = Interval::from_bigint(&b).hull(&Interval::from_bigint(&(&b + 1)));
        let q = if b.is_zero() {
            Interval::new(0.0, f64::INFINITY)
        } else {
            a_iv.div(&b_iv)
        };
        if num.is_negative() {
            -q
        } else {
            q
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            self.lo / 2.0 + self.hi / 2.0
        } else if self.lo.is_finite() {
            self.lo
        } else if self.hi.is_finite() {
            self.hi
        } else {
            0.0
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `self` lies entirely below `other`.
    pub fn precedes(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn div(&self, other: &Interval) -> Interval {
        if other.contains_zero() {
            return Interval::entire();
        }
        let c = [
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        ];
        Interval::widened(min4(c), max4(c))
    }

    pub fn sqr(&self) -> Interval {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let hi = up((a * a).max(b * b));
        let lo = if self.contains_zero() {
            0.0
        } else {
            down((a * a).min(b * b)).max(0.0)
        };
        Interval { lo, hi }
    }

    pub fn powi(&self, k: u32) -> Interval {
        match k {
            0 => Interval::point(1.0),
            1 => *self,
            _ if k % 2 == 0 => self.powi(k / 2).sqr(),
            _ => &self.powi(k - 1) * self,
        }
    }

    pub fn sqrt(&self) -> Interval {
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt()).max(0.0) };
        Interval {
            lo,
            hi: up(self.hi.max(0.0).sqrt()),
        }
    }

    /// Natural log; the lower end is `-inf` when the interval reaches 0.
    pub fn ln(&self) -> Interval {
        let lo = if self.lo <= 0.0 {
            f64::NEG_INFINITY
        } else {
            down_n(self.lo.ln(), LIBM_ULPS)
        };
        let hi = if self.hi <= 0.0 {
            f64::NEG_INFINITY
        } else {
            up_n(self.hi.ln(), LIBM_ULPS)
        };
        Interval { lo, hi }
    }

    pub fn log2(&self) -> Interval {
        self.ln().div(&ln2())
    }

    pub fn scale(&self, c: f64) -> Interval {
        self * &Interval::point(c)
    }

    /// Exact rational enclosure `[lo, hi]`.
    pub fn to_rationals(&self) -> Option<(BigRational, BigRational)> {
        Some((BigRational::from_float(self.lo)?, BigRational::from_float(self.hi)?))
    }
}

fn min4(c: [f64; 4]) -> f64 {
    c.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max4(c: [f64; 4]) -> f64 {
    c.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn ln2() -> Interval {
    Interval::widened(std::f64::consts::LN_2, std::f64::consts::LN_2)
}

pub fn two_pi() -> Interval {
    Interval::widened(std::f64::consts::TAU, std::f64::consts::TAU)
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval::widened(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval::widened(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        // 0 * inf is NaN; treat as 0 since the other factor is finite in that corner
        let c = c.map(|v| if v.is_nan() { 0.0 } else { v });
        Interval::widened(min4(c), max4(c))
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        &self + &o
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        &self - &o
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        &self * &o
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// Certified `log2(v)` for a positive integer.
pub fn log2_biguint(v: &BigUint) -> Interval {
    assert!(!v.is_zero(), "log2 of zero");
    let bits = v.bits();
    if bits <= 53 {
        let f = v.to_f64().unwrap();
        return Interval::point(f).log2();
    }
    let shift = bits - 53;
    let top = (v >> shift).to_f64().unwrap();
    let lo = Interval::point(top).log2();
    let hi = Interval::point(top + 1.0).log2();
    &lo.hull(&hi) + &Interval::point(shift as f64)
}

/// Certified `log2(|v|)` for a nonzero rational.
pub fn log2_abs_rational(v: &BigRational) -> Interval {
    let n = log2_biguint(v.numer().magnitude());
    let d = log2_biguint(v.denom().magnitude());
    &n - &d
}

// below this, ln n! is summed term by term
const DIRECT_FACTORIAL_LIMIT: u64 = 2000;

/// Certified `ln(n!)`, using Robbins' bounds `1/(12n+1) < r_n < 1/(12n)`
/// on the Stirling remainder for large `n`.
pub fn ln_factorial(n: u64) -> Interval {
    if n <= DIRECT_FACTORIAL_LIMIT {
        let mut acc = Interval::point(0.0);
        for k in 2..=n {
            acc = &acc + &Interval::point(k as f64).ln();
        }
        return acc;
    }
    let x = Interval::from_bigint(&BigInt::from(n));
    let main = &(&x * &x.ln()) - &x;
    let half_log = (&two_pi() * &x).ln().scale(0.5);
    let one = Interval::point(1.0);
    let r_lo = one.div(&(&x.scale(12.0) + &one));
    let r_hi = one.div(&x.scale(12.0));
    &(&main + &half_log) + &Interval::new(r_lo.lo(), r_hi.hi())
}

/// Certified `log2 C(a, b)`.
pub fn log2_binomial(a: u64, b: u64) -> Interval {
    assert!(b <= a, "binomial C({a}, {b})");
    let b = b.min(a - b);
    if b == 0 {
        return Interval::point(0.0);
    }
    let ln = if b <= DIRECT_FACTORIAL_LIMIT {
        // Σ ln((a - b + k) / k)
        let mut acc = Interval::point(0.0);
        for k in 1..=b {
            let q = Interval::point((a - b + k) as f64).div(&Interval::point(k as f64));
            acc = &acc + &q.ln();
        }
        acc
    } else {
        &(&ln_factorial(a) - &ln_factorial(b)) - &ln_factorial(a - b)
    };
    ln.div(&ln2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses_exact_results() {
        let third = Interval::point(1.0).div(&Interval::point(3.0));
        let back = &third * &Interval::point(3.0);
        assert!(back.contains(1.0));
        let s = &Interval::new(-1.0, 2.0) * &Interval::new(-3.0, 0.5);
        assert!(s.lo() <= -6.0 && s.hi() >= 3.0);
        assert_eq!(Interval::new(-2.0, 1.0).sqr().lo(), 0.0);
    }

    #[test]
    fn logs_of_large_integers() {
        let v = BigUint::from(3u32).pow(1000);
        let l = log2_biguint(&v);
        let exact = 1000.0 * 3f64.log2();
        assert!(l.contains(exact) || (l.lo() - exact).abs() < 1e-9);
        assert!(l.width() < 1e-9);
    }

    #[test]
    fn factorials_and_binomials() {
        // 20! = 2432902008176640000
        let f = ln_factorial(20);
        assert!(f.contains(2432902008176640000f64.ln()));
        // Stirling branch against the direct branch at the crossover
        let direct = {
            let mut acc = Interval::point(0.0);
            for k in 2..=3000u64 {
                acc = &acc + &Interval::point(k as f64).ln();
            }
            acc
        };
        assert!(direct.intersects(&ln_factorial(3000)));
        let b = log2_binomial(10, 3);
        assert!(b.contains(120f64.log2()));
        let big = log2_binomial(10_000_000, 5000);
        let small = log2_binomial(10_000_000, 1999);
        assert!(small.hi() < big.lo());
    }

    #[test]
    fn rationals_convert_with_enclosure() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(10));
        assert!(Interval::from_rational(&r).contains(0.1));
        let huge = BigRational::new(BigInt::from(7) * BigInt::from(2).pow(2000), BigInt::from(2).pow(2000));
        assert!(Interval::from_rational(&huge).contains(7.0));
    }
}
