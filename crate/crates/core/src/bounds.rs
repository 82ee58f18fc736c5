//! Closed-form degree, magnitude and separation bounds, the Bézout numbers
//! and support sizes that feed the coefficient bound `M_{S,σ}`, and exact
//! comparisons against bounds far too small to write out.
//!
//! Bounds are kept as [`PowerExpr`] products. Comparisons try certified
//! `log2` enclosures first and fall back to exact big-integer arithmetic,
//! after raising both sides to a power that clears exponent denominators.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{log2_abs_rational, log2_binomial, log2_biguint, Interval};
use crate::perturb::SemialgSystem;

/// Default size limit, in bits, for exact comparisons.
pub const DEFAULT_EXACT_BITS: u64 = 1 << 18;

/// Parameters of the magnitude bound and of the coefficient bound for one `s = #S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub s: usize,
    pub d: u32,
    pub d0: u32,
    pub h: BigUint,
    pub h0: BigUint,
    pub htilde: BigUint,
}

impl BoundParams {
    /// `H̃ = max(H, 2n + 2m)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(n: usize, m: usize, l: usize, s: usize, d: u32, d0: u32, h: BigUint, h0: BigUint) -> Result<Self> {
        let htilde = h.clone().max(BigUint::from(2 * n + 2 * m));
        let p = BoundParams { n, m, l, s, d, d0, h, h0, htilde };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `H̃` given directly (and `H = H̃`), for sweeps over the formulas.
    pub fn with_htilde(n: usize, s: usize, d: u32, d0: u32, h0: BigUint, htilde: BigUint) -> Result<Self> {
        let p = BoundParams {
            n,
            m: 0,
            l: 0,
            s,
            d,
            d0,
            h: htilde.clone(),
            h0,
            htilde,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for a system and a subset size, using the bound-relevant `(m, d, H)`.
    pub fn from_system(sys: &SemialgSystem, s: usize) -> Result<Self> {
        BoundParams::new(
            sys.n(),
            sys.bound_m(),
            sys.l(),
            s,
            sys.bound_d(),
            sys.d0(),
            sys.bound_height().magnitude().clone(),
            sys.h0().magnitude().clone(),
        )
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n < 2 {
            return fail(format!("n = {} < 2", self.n));
        }
        if self.s > self.n {
            return fail(format!("s = {} exceeds n = {}", self.s, self.n));
        }
        if self.d < 2 || self.d % 2 == 1 {
            return fail(format!("d = {} must be even and at least 2", self.d));
        }
        if self.d0 > self.d {
            return fail(format!("d0 = {} exceeds d = {}", self.d0, self.d));
        }
        if self.h0 > self.h {
            return fail(format!("H0 = {} exceeds H = {}", self.h0, self.h));
        }
        if self.htilde < self.h {
            return fail("H~ below H".into());
        }
        Ok(())
    }
}

/// A symbolic product `Π base^exp` with integer bases `>= 1` and rational exponents.
///
/// Equality is value equality: two expressions are equal when their
/// quotient reduces to the empty product over a coprime basis.
#[derive(Clone, Debug)]
pub struct PowerExpr {
    factors: Vec<(BigUint, BigRational)>,
}

impl PowerExpr {
    pub fn one() -> Self {
        PowerExpr { factors: Vec::new() }
    }

    pub fn power(base: BigUint, exp: BigRational) -> Self {
        assert!(!base.is_zero(), "PowerExpr base must be positive");
        PowerExpr { factors: vec![(base, exp)] }.merged()
    }

    pub fn int_power(base: u64, exp: i64) -> Self {
        PowerExpr::power(BigUint::from(base), BigRational::from_integer(BigInt::from(exp)))
    }

    pub fn factors(&self) -> &[(BigUint, BigRational)] {
        &self.factors
    }

    fn merged(mut self) -> Self {
        self.factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(BigUint, BigRational)> = Vec::new();
        for (b, e) in self.factors {
            if b.is_one() || e.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some((lb, le)) if *lb == b => *le += e,
                _ => out.push((b, e)),
            }
        }
        out.retain(|(_, e)| !e.is_zero());
        PowerExpr { factors: out }
    }

    pub fn mul(&self, other: &PowerExpr) -> PowerExpr {
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().cloned());
        PowerExpr { factors: f }.merged()
    }

    pub fn pow(&self, e: &BigRational) -> PowerExpr {
        PowerExpr {
            factors: self.factors.iter().map(|(b, x)| (b.clone(), x * e)).collect(),
        }
        .merged()
    }

    pub fn inv(&self) -> PowerExpr {
        self.pow(&-BigRational::one())
    }

    pub fn square(&self) -> PowerExpr {
        self.pow(&BigRational::from_integer(BigInt::from(2)))
    }

    /// Rewrites over pairwise coprime bases.
    pub fn coprime_form(&self) -> PowerExpr {
        let mut f = self.factors.clone();
        loop {
            let mut changed = false;
            'scan: for i in 0..f.len() {
                for j in i + 1..f.len() {
                    let g = f[i].0.gcd(&f[j].0);
                    if g.is_one() {
                        continue;
                    }
                    let (bi, ei) = f[i].clone();
                    let (bj, ej) = f[j].clone();
                    f.swap_remove(j);
                    f.swap_remove(i);
                    if bi == bj {
                        f.push((bi, ei + ej));
                    } else {
                        f.push((g.clone(), &ei + &ej));
                        f.push((&bi / &g, ei));
                        f.push((&bj / &g, ej));
                    }
                    f.retain(|(b, e)| !b.is_one() && !e.is_zero());
                    changed = true;
                    break 'scan;
                }
            }
            if !changed {
                return PowerExpr { factors: f }.merged();
            }
        }
    }

    pub fn is_one(&self) -> bool {
        self.coprime_form().factors.is_empty()
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.factors.iter().all(|(_, e)| e.is_integer())
    }

    /// Least common multiple of the exponent denominators.
    pub fn exponent_denominator(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()))
    }

    /// Certified enclosure of `log2` of the value.
    pub fn log2_enclosure(&self) -> Interval {
        self.factors.iter().fold(Interval::point(0.0), |acc, (b, e)| {
            &acc + &(&log2_biguint(b) * &Interval::from_rational(e))
        })
    }

    /// Approximate size of the exact value in bits.
    fn approx_bits(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| b.bits() as f64 * e.to_f64().unwrap_or(f64::INFINITY).abs())
            .sum()
    }

    /// The value as a rational. Requires integer exponents and at most `max_bits` bits.
    pub fn to_rational(&self, max_bits: u64) -> Result<BigRational> {
        if !self.has_integer_exponents() {
            return Err(Error::InvalidParameter("PowerExpr has fractional exponents".into()));
        }
        let bits = self.approx_bits();
        if bits > max_bits as f64 {
            return Err(Error::Budget {
                what: "exact power expression".into(),
                size: bits as u128,
                limit: max_bits as u128,
            });
        }
        let (num, den) = self.split_integer_parts(&BigInt::one());
        Ok(BigRational::new(num.into(), den.into()))
    }

    // (Π_{e>0} b^{eL}, Π_{e<0} b^{-eL}); exponents scaled by L must be integers
    fn split_integer_parts(&self, scale: &BigInt) -> (BigUint, BigUint) {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (b, e) in &self.factors {
            let k = e * BigRational::from_integer(scale.clone());
            debug_assert!(k.is_integer());
            let k = k.to_integer();
            let p = k.abs().to_u32().expect("exponent guarded by bit budget");
            if k.is_positive() {
                num *= b.pow(p);
            } else {
                den *= b.pow(p);
            }
        }
        (num, den)
    }
}

impl PartialEq for PowerExpr {
    fn eq(&self, other: &Self) -> bool {
        self.mul(&other.inv()).is_one()
    }
}

impl fmt::Display for PowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| {
                if e.is_integer() {
                    format!("{b}^{e}")
                } else {
                    format!("{b}^({e})")
                }
            })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

/// `2^{n-1} d^n`.
pub fn degree_bound(n: usize, d: u32) -> BigUint {
    assert!(n >= 2 && d >= 2, "degree_bound needs n >= 2, d >= 2");
    BigUint::from(2u32).pow(n as u32 - 1) * BigUint::from(d).pow(n as u32)
}

/// `(2^{4-n/2} H̃ d^n)^{-n 2^n d^n}` for explicit `n, d, H̃`.
pub fn magnitude_bound_raw(n: usize, d: u32, htilde: &BigUint) -> PowerExpr {
    let big_e = BigInt::from(n) * BigInt::from(2).pow(n as u32) * BigInt::from(d).pow(n as u32);
    let e = BigRational::from_integer(-big_e);
    let two_exp = BigRational::new(BigInt::from(8 - n as i64), BigInt::from(2));
    let base = PowerExpr::power(BigUint::from(2u32), two_exp)
        .mul(&PowerExpr::power(htilde.clone(), BigRational::one()))
        .mul(&PowerExpr::power(BigUint::from(d), BigRational::from_integer(BigInt::from(n))));
    base.pow(&e)
}

pub fn magnitude_bound(params: &BoundParams) -> PowerExpr {
    magnitude_bound_raw(params.n, params.d, &params.htilde)
}

/// `(2^{4-n} H̃ d^{2n})^{-n 2^{2n} d^{2n}}` with `H̃ = max(H, 4n + 2m1 + 2m2)`.
pub fn separation_bound(n: usize, d: u32, h: &BigUint, m1: usize, m2: usize) -> Result<PowerExpr> {
    if n < 2 || d < 2 || d % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "separation bound needs n >= 2 and even d >= 2, got n = {n}, d = {d}"
        )));
    }
    let htilde = h.clone().max(BigUint::from(4 * n + 2 * m1 + 2 * m2));
    let big_e = BigInt::from(n) * BigInt::from(2).pow(2 * n as u32) * BigInt::from(d).pow(2 * n as u32);
    let base = PowerExpr::power(
        BigUint::from(2u32),
        BigRational::from_integer(BigInt::from(4 - n as i64)),
    )
    .mul(&PowerExpr::power(htilde, BigRational::one()))
    .mul(&PowerExpr::power(
        BigUint::from(d),
        BigRational::from_integer(BigInt::from(2 * n)),
    ));
    Ok(base.pow(&BigRational::from_integer(-big_e)))
}

/// Exact binomial coefficient by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `(M1, M2, M3)`; `M2 = 0` when `s = 0` and `M3 = 0` when `s = n`.
pub fn bezout_numbers(n: usize, s: usize, d: u32, d0: u32) -> Result<(BigUint, BigUint, BigUint)> {
    if s > n {
        return Err(Error::InvalidParameter(format!("s = {s} exceeds n = {n}")));
    }
    let (n32, s32) = (n as u32, s as u32);
    let dd = BigUint::from(d);
    let dm1 = BigUint::from(d - 1);
    let m1 = binomial(n as u64, s as u64) * dd.pow(s32) * dm1.pow(n32 - s32);
    let m2 = if s == 0 {
        BigUint::zero()
    } else {
        binomial(n as u64, s as u64) * BigUint::from(d0) * dd.pow(s32 - 1) * dm1.pow(n32 - s32)
    };
    let m3 = if s == n {
        BigUint::zero()
    } else {
        binomial(n as u64 - 1, s as u64) * BigUint::from(d0) * dd.pow(s32) * dm1.pow(n32 - s32 - 1)
    };
    Ok((m1, m2, m3))
}

/// `(N1, N2, N3) = (C(d0+n, n), C(d+n, n), C(d-1+n, n)(s+1))`.
pub fn support_sizes(n: usize, s: usize, d: u32, d0: u32) -> (BigUint, BigUint, BigUint) {
    let n64 = n as u64;
    (
        binomial(d0 as u64 + n64, n64),
        binomial(d as u64 + n64, n64),
        binomial(d as u64 - 1 + n64, n64) * BigUint::from(s + 1),
    )
}

/// The ingredients of `M_{S,σ}` for one parameter set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientData {
    pub m1: BigUint,
    pub m2: BigUint,
    pub m3: BigUint,
    pub n1: BigUint,
    pub n2: BigUint,
    pub n3: BigUint,
}

impl CoefficientData {
    pub fn new(p: &BoundParams) -> Result<Self> {
        let (m1, m2, m3) = bezout_numbers(p.n, p.s, p.d, p.d0)?;
        let (n1, n2, n3) = support_sizes(p.n, p.s, p.d, p.d0);
        Ok(CoefficientData { m1, m2, m3, n1, n2, n3 })
    }

    /// `s M2 + n M3`, the total `(t0, t)`-degree of the resultant.
    pub fn t_degree(&self, p: &BoundParams) -> BigUint {
        &self.m2 * BigUint::from(p.s) + &self.m3 * BigUint::from(p.n)
    }
}

fn to_u64(v: &BigUint, what: &str) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::Budget {
        what: what.into(),
        size: u128::MAX,
        limit: u64::MAX as u128,
    })
}

fn iv(v: &BigUint) -> Interval {
    Interval::from_biguint(v)
}

/// Certified enclosure of `log2 M_{S,σ}`.
pub fn coefficient_bound_log2(p: &BoundParams) -> Result<Interval> {
    let c = CoefficientData::new(p)?;
    let (n, s) = (BigUint::from(p.n), BigUint::from(p.s));
    let two = BigUint::from(2u32);
    let mut acc = &iv(&c.m1) * &log2_biguint(&(&two * &p.h0));
    acc = &acc + &(&iv(&(&s * &c.m2 + &n * &c.m3)) * &log2_biguint(&(&two * &p.htilde)));
    acc = &acc + &(&iv(&(&n * &c.m3)) * &log2_biguint(&BigUint::from(p.d)));
    acc = &acc + &(&iv(&c.m1) * &log2_biguint(&c.n1));
    acc = &acc + &(&iv(&(&s * &c.m2)) * &log2_biguint(&c.n2));
    acc = &acc + &(&iv(&(&n * &c.m3)) * &log2_biguint(&c.n3));
    let binom = |m: &BigUint, nn: &BigUint| -> Result<Interval> {
        let a = to_u64(&(m + nn - 1u32), "binomial argument")?;
        Ok(log2_binomial(a, to_u64(&(nn - 1u32), "binomial argument")?))
    };
    acc = &acc + &binom(&c.m1, &c.n1)?;
    acc = &acc + &(&binom(&c.m2, &c.n2)? * &Interval::point(p.s as f64));
    acc = &acc + &(&binom(&c.m3, &c.n3)? * &Interval::point(p.n as f64));
    Ok(acc)
}

/// Exact `M_{S,σ}`; refuses when it would exceed `max_bits`.
pub fn coefficient_bound_m_limited(p: &BoundParams, max_bits: u64) -> Result<BigUint> {
    let est = coefficient_bound_log2(p)?;
    if est.hi() > max_bits as f64 {
        return Err(Error::Budget {
            what: "coefficient bound bits".into(),
            size: est.hi().min(u128::MAX as f64) as u128,
            limit: max_bits as u128,
        });
    }
    let c = CoefficientData::new(p)?;
    let exp = |v: &BigUint| v.to_u32().expect("exponent bounded by bit budget");
    let two = BigUint::from(2u32);
    let (n, s) = (p.n as u32, p.s as u32);
    let m2s = &c.m2 * s;
    let m3n = &c.m3 * n;
    let mut out = (&two * &p.h0).pow(exp(&c.m1));
    out *= (&two * &p.htilde).pow(exp(&(&m2s + &m3n)));
    out *= BigUint::from(p.d).pow(exp(&m3n));
    out *= c.n1.pow(exp(&c.m1));
    out *= c.n2.pow(exp(&m2s));
    out *= c.n3.pow(exp(&m3n));
    let b = |m: &BigUint, nn: &BigUint| {
        binomial(
            (m + nn - 1u32).to_u64().unwrap(),
            (nn - 1u32).to_u64().unwrap(),
        )
    };
    out *= b(&c.m1, &c.n1);
    out *= b(&c.m2, &c.n2).pow(s);
    out *= b(&c.m3, &c.n3).pow(n);
    Ok(out)
}

/// Exact `M_{S,σ}` under the default size limit.
pub fn coefficient_bound_m(p: &BoundParams) -> Result<BigUint> {
    coefficient_bound_m_limited(p, DEFAULT_EXACT_BITS)
}

/// How a comparison was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Disjoint certified `log2` enclosures.
    Log2,
    /// Big-integer cross-multiplication.
    Exact,
}

/// `|value|` against a bound, by `log2` enclosures or, when they overlap,
/// by comparing `|value|^L` with `bound^L` exactly, `L` clearing exponent denominators.
pub fn compare_abs_to_bound_with(
    value: &BigRational,
    bound: &PowerExpr,
    max_bits: u64,
) -> Result<(Ordering, Decision)> {
    if value.is_zero() {
        return Err(Error::InvalidParameter(
            "comparison against the bound needs a nonzero value".into(),
        ));
    }
    let lv = log2_abs_rational(value);
    let lb = bound.log2_enclosure();
    if lv.precedes(&lb) {
        return Ok((Ordering::Less, Decision::Log2));
    }
    if lb.precedes(&lv) {
        return Ok((Ordering::Greater, Decision::Log2));
    }
    let scale = bound.exponent_denominator();
    let l = scale.to_u32().unwrap_or(u32::MAX);
    let bits = bound.approx_bits() * l as f64
        + l as f64 * (value.numer().bits() + value.denom().bits()) as f64;
    if bits > max_bits as f64 {
        return Err(Error::Undecided(format!(
            "|{value}| vs {bound} needs about {bits:.0} bits (limit {max_bits})"
        )));
    }
    let (bn, bd) = bound.split_integer_parts(&scale);
    let vn = value.numer().magnitude().pow(l);
    let vd = value.denom().magnitude().pow(l);
    // |v|^L = vn/vd  vs  bound^L = bn/bd
    Ok(((vn * bd).cmp(&(bn * vd)), Decision::Exact))
}

pub fn compare_abs_to_bound(value: &BigRational, bound: &PowerExpr) -> Result<Ordering> {
    compare_abs_to_bound_with(value, bound, DEFAULT_EXACT_BITS).map(|(o, _)| o)
}

/// Orders two power expressions.
pub fn compare_power_exprs(a: &PowerExpr, b: &PowerExpr, max_bits: u64) -> Result<Ordering> {
    let q = a.mul(&b.inv()).coprime_form();
    if q.factors.is_empty() {
        return Ok(Ordering::Equal);
    }
    compare_abs_to_bound_with(&BigRational::one(), &q.inv(), max_bits).map(|(o, _)| o)
}

/// Result of checking `M_{S,σ} <= (2^{4-n/2} H̃ d^n)^{n 2^n d^n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CeilingCheck {
    pub holds: bool,
    pub decision: Decision,
    pub log2_m: Interval,
    pub log2_ceiling: Interval,
}

/// Checks the coefficient bound against the inverse magnitude bound. Small
/// instances are compared exactly in squared form; the rest are decided by
/// disjoint certified `log2` enclosures.
pub fn check_coefficient_ceiling(p: &BoundParams, max_bits: u64) -> Result<CeilingCheck> {
    let ceiling = magnitude_bound(p).inv();
    let log2_m = coefficient_bound_log2(p)?;
    let log2_ceiling = ceiling.log2_enclosure();
    let exact_size = log2_m.hi().max(0.0) * 2.0 + ceiling.square().approx_bits();
    if exact_size <= max_bits as f64 {
        let m = coefficient_bound_m_limited(p, max_bits)?;
        let (num, den) = ceiling.square().split_integer_parts(&BigInt::one());
        let exact = (&m * &m * den).cmp(&num);
        return Ok(CeilingCheck {
            holds: exact != Ordering::Greater,
            decision: Decision::Exact,
            log2_m,
            log2_ceiling,
        });
    }
    if log2_m.hi() <= log2_ceiling.lo() {
        return Ok(CeilingCheck {
            holds: true,
            decision: Decision::Log2,
            log2_m,
            log2_ceiling,
        });
    }
    if log2_m.lo() > log2_ceiling.hi() {
        return Ok(CeilingCheck {
            holds: false,
            decision: Decision::Log2,
            log2_m,
            log2_ceiling,
        });
    }
    Err(Error::Undecided(format!(
        "log2 M in {log2_m}, log2 ceiling in {log2_ceiling}"
    )))
}

/// Rational enclosure `lo < log2 3 < hi`, certified by `2^p` vs `3^q`.
pub fn log2_3_enclosure() -> &'static (BigRational, BigRational) {
    static CELL: OnceLock<(BigRational, BigRational)> = OnceLock::new();
    CELL.get_or_init(|| {
        // continued-fraction convergents of log2 3
        let (lp, lq) = (50508u32, 31867u32);
        let (hp, hq) = (24727u32, 15601u32);
        let two = BigUint::from(2u32);
        let three = BigUint::from(3u32);
        assert!(two.pow(lp) < three.pow(lq), "lower convergent not certified");
        assert!(two.pow(hp) > three.pow(hq), "upper convergent not certified");
        (
            BigRational::new(BigInt::from(lp), BigInt::from(lq)),
            BigRational::new(BigInt::from(hp), BigInt::from(hq)),
        )
    })
}

fn final_chain_lhs(n: usize, log3: &BigRational) -> BigRational {
    let n_r = BigRational::from_integer(BigInt::from(n));
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let poly = -(&two * &n_r * &n_r) + (log3 + &two) * &n_r + &four * log3 + &four;
    let pow = BigRational::from_integer(BigInt::from(2).pow(n as u32 - 2));
    poly * pow
        + BigRational::new(BigInt::from(3), BigInt::from(2)) * BigRational::from_integer(BigInt::from(n + 1))
        + BigRational::new(BigInt::from(9), BigInt::from(4)) * n_r
}

fn final_chain_rhs(n: usize) -> BigRational {
    let n_r = BigRational::from_integer(BigInt::from(n));
    (BigRational::from_integer(BigInt::from(4)) - &n_r / BigRational::from_integer(BigInt::from(2)))
        * &n_r
        * BigRational::from_integer(BigInt::from(2).pow(n as u32))
}

/// The last inequality of the magnitude-bound chain. `None` if the
/// `log2 3` enclosure is too coarse to decide.
pub fn final_chain_inequality(n: usize) -> Option<bool> {
    let (lo, hi) = log2_3_enclosure();
    let rhs = final_chain_rhs(n);
    // the left side increases with log2 3
    if final_chain_lhs(n, hi) <= rhs {
        Some(true)
    } else if final_chain_lhs(n, lo) > rhs {
        Some(false)
    } else {
        None
    }
}

fn binomial_power_inequality(m: &BigUint, nn: &BigUint) -> Result<bool> {
    // C(M+N-1, N-1) <= 2^{M+N}
    let a = to_u64(&(m + nn - 1u32), "binomial argument")?;
    let b = to_u64(&(nn - 1u32), "binomial argument")?;
    let lhs = log2_binomial(a, b);
    let rhs = (a + 1) as f64;
    if lhs.hi() <= rhs {
        return Ok(true);
    }
    if lhs.lo() > rhs {
        return Ok(false);
    }
    Ok(binomial(a, b) <= BigUint::one() << (a + 1))
}

/// Every inequality of the magnitude-bound proof chain, evaluated for `p`.
pub fn proof_inequalities(p: &BoundParams) -> Result<Vec<(String, bool)>> {
    let c = CoefficientData::new(p)?;
    let dn = BigUint::from(p.d).pow(p.n as u32);
    let n = BigUint::from(p.n);
    let s = BigUint::from(p.s);
    let mut out = vec![
        ("N1 <= 3/2 d^n".to_string(), &c.n1 * 2u32 <= &dn * 3u32),
        ("N2 <= 3/2 d^n".to_string(), &c.n2 * 2u32 <= &dn * 3u32),
        ("N3 <= 9/4 d^n".to_string(), &c.n3 * 4u32 <= &dn * 9u32),
        (
            "C(M1+N1-1, N1-1) <= 2^(M1+N1)".to_string(),
            binomial_power_inequality(&c.m1, &c.n1)?,
        ),
        (
            "C(M2+N2-1, N2-1) <= 2^(M2+N2)".to_string(),
            binomial_power_inequality(&c.m2, &c.n2)?,
        ),
        (
            "C(M3+N3-1, N3-1) <= 2^(M3+N3)".to_string(),
            binomial_power_inequality(&c.m3, &c.n3)?,
        ),
    ];
    out.push((
        "final exponent inequality".to_string(),
        final_chain_inequality(p.n).unwrap_or(false),
    ));
    let pow = BigUint::from(2u32).pow(p.n as u32 - 1);
    out.push((
        "M1 + s M2 + n M3 <= (n+1) 2^(n-1) d^n".to_string(),
        &c.m1 + &s * &c.m2 + &n * &c.m3 <= (&n + 1u32) * &pow * &dn,
    ));
    // M3 <= 2^(n-2) d^n
    out.push(("M3 <= 2^(n-2) d^n".to_string(), &c.m3 * 2u32 <= &pow * &dn));
    Ok(out)
}

/// Per-`s` entries of a [`BoundReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetBounds {
    pub s: usize,
    pub data: CoefficientData,
    pub log2_m: Interval,
    /// `None` when the exact value exceeds the report's size limit.
    pub m_exact: Option<BigUint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub params: BoundParams,
    pub degree_bound: BigUint,
    pub magnitude_bound: PowerExpr,
    pub log2_magnitude: Interval,
    pub per_subset: Vec<SubsetBounds>,
}

/// Bounds for a system; `s` ranges over `0..=min(n, m)`.
pub fn bound_report(sys: &SemialgSystem, exact_bits: u64) -> Result<BoundReport> {
    let params = BoundParams::from_system(sys, 0)?;
    let magnitude = magnitude_bound(&params);
    let mut per_subset = Vec::new();
    for s in 0..=params.n.min(params.m) {
        let p = BoundParams { s, ..params.clone() };
        let log2_m = coefficient_bound_log2(&p)?;
        let m_exact = coefficient_bound_m_limited(&p, exact_bits).ok();
        per_subset.push(SubsetBounds {
            s,
            data: CoefficientData::new(&p)?,
            log2_m,
            m_exact,
        });
    }
    Ok(BoundReport {
        degree_bound: degree_bound(params.n, params.d),
        log2_magnitude: magnitude.log2_enclosure(),
        magnitude_bound: magnitude,
        params,
        per_subset,
    })
}
