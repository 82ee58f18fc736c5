//! Parametric resultants `R_{S,σ}(t0, t, U)`, their `t`-power stripping,
//! the certificate polynomials `Q_{S,σ}(U) = R̃_{S,σ}(1, 0, U)`, and the
//! candidate set collected over all admissible `(S, σ)`.
//!
//! `R` is obtained pointwise from a Koszul strand determinant and
//! interpolated: first in `U` for fixed `t` (with `t0 = 1`), then each
//! `U`-coefficient in `t`, then rehomogenized in `(t0, t)`. The result is
//! checked at extra points with `t0 != 1` before it is accepted.

mod koszul;
mod limit;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{bezout_numbers, coefficient_bound_log2, coefficient_bound_m_limited, BoundParams};
use crate::error::{Error, Result};
use crate::interval::{log2_biguint, Interval};
use crate::perturb::{
    homogenized_constraint, lagrange_family, u_polynomial, ParamPolynomial, PerturbationMatrix,
    SemialgSystem, SubsetSelector, VarLayout, VarRole,
};
use crate::polycore::{IntPolynomial, Monomial};
use crate::univariate::{isolate_real_roots, RootInterval, UniPoly};

pub use koszul::{strand_dimensions, GradedForm, KoszulStrand, ParamExps};
pub use limit::{limit_system_solutions, JCase, JReport, LimitSystemReport};

/// Size guards for one resultant computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantOptions {
    /// Largest allowed dimension of a Koszul strand term.
    pub max_matrix_dim: usize,
    /// Largest allowed interpolation grid `(D + 1)(M1 + 1)`.
    pub max_grid_points: usize,
    /// Extra consistency points with `t0 != 1`.
    pub verify_points: usize,
    pub seed: u64,
    /// Size limit, in bits, for computing `M_{S,σ}` exactly.
    pub exact_bits: u64,
}

impl Default for ResultantOptions {
    fn default() -> Self {
        ResultantOptions {
            max_matrix_dim: 3000,
            max_grid_points: 100_000,
            verify_points: 2,
            seed: 0x5eed,
            exact_bits: crate::bounds::DEFAULT_EXACT_BITS,
        }
    }
}

/// `{P; F̄_i^{σ_i}, i ∈ S; Ḡ_{S,σ,j}, j = 1..n}` over the resultant layout,
/// with their `(x, λ)` bidegrees.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultantSystem {
    pub selector: SubsetSelector,
    pub layout: VarLayout,
    pub polys: Vec<ParamPolynomial>,
    pub bidegrees: Vec<(u32, u32)>,
    pub n: usize,
    pub d: u32,
    pub d0: u32,
}

impl ResultantSystem {
    pub fn new(sys: &SemialgSystem, a: &PerturbationMatrix, sel: &SubsetSelector) -> Result<Self> {
        sel.validate(sys)?;
        if sys.d0() == 0 {
            return Err(Error::InvalidSystem("constant objective".into()));
        }
        let n = sys.n();
        let layout = VarLayout::resultant(n, sel);
        let mut polys = vec![u_polynomial(sys)?.embed_into(&layout)?];
        let mut bidegrees = vec![(sys.d0(), 0)];
        for (i, sign) in sel.iter() {
            polys.push(homogenized_constraint(sys, a, i, sign)?.embed_into(&layout)?);
            bidegrees.push((sys.d(), 0));
        }
        for g in lagrange_family(sys, a, sel)? {
            polys.push(g.embed_into(&layout)?);
            bidegrees.push((sys.d() - 1, 1));
        }
        let rs = ResultantSystem {
            selector: sel.clone(),
            layout,
            polys,
            bidegrees,
            n,
            d: sys.d(),
            d0: sys.d0(),
        };
        rs.validate()?;
        Ok(rs)
    }

    pub fn s(&self) -> usize {
        self.selector.len()
    }

    fn x_indices(&self) -> Vec<usize> {
        (3..self.n + 4).collect()
    }

    fn lambda_indices(&self) -> Vec<usize> {
        (self.n + 4..self.layout.len()).collect()
    }

    /// Checks the bidegree tags and that the parameter slots are `(t0, t, U)`.
    pub fn validate(&self) -> Result<()> {
        let params = self.layout.indices_with_role(VarRole::Parameter);
        let names: Vec<&str> = params.iter().map(|&i| self.layout.names()[i].as_str()).collect();
        if names != ["t0", "t", "U"] {
            return Err(Error::InvalidSystem(format!("parameter slots {names:?}")));
        }
        let (xs, ls) = (self.x_indices(), self.lambda_indices());
        for (p, &(dx, dl)) in self.polys.iter().zip(&self.bidegrees) {
            if !p.poly.is_homogeneous_in(&xs, dx) || !p.poly.is_homogeneous_in(&ls, dl) {
                return Err(Error::InvalidSystem(format!(
                    "form does not have bidegree ({dx}, {dl})"
                )));
            }
        }
        Ok(())
    }

    /// `(M1, D)` with `D = s M2 + n M3` the `(t0, t)`-degree of `R`.
    pub fn degree_ceilings(&self) -> Result<(BigUint, BigUint)> {
        let (m1, m2, m3) = bezout_numbers(self.n, self.s(), self.d, self.d0)?;
        Ok((m1, m2 * BigUint::from(self.s()) + m3 * BigUint::from(self.n)))
    }

    /// The Koszul strand whose determinant is `R`. With `S = ∅` the
    /// multiplier space is a point, so `l0` is set to 1 and dropped.
    pub fn strand(&self, opts: &ResultantOptions) -> Result<KoszulStrand> {
        let n = self.n;
        let s = self.s();
        let nx = n + 1;
        let keep_lambda = s > 0;
        let nvars = if keep_lambda { nx + s + 1 } else { nx };
        let mut groups = vec![(0..nx).collect::<Vec<_>>()];
        let mut nu = vec![self.bidegrees.iter().map(|b| b.0).sum::<u32>() - n as u32];
        if keep_lambda {
            groups.push((nx..nx + s + 1).collect());
            nu.push(self.bidegrees.iter().map(|b| b.1).sum::<u32>() - s as u32);
        }
        let forms = self
            .polys
            .iter()
            .zip(&self.bidegrees)
            .map(|(p, &(dx, dl))| {
                let mut terms: Vec<(Vec<u32>, Vec<(ParamExps, BigInt)>)> = Vec::new();
                for (m, c) in p.poly.terms() {
                    let e = m.exponents();
                    let key: Vec<u32> = e[3..3 + nvars].to_vec();
                    let pe = [e[0], e[1], e[2]];
                    match terms.iter_mut().find(|(k, _)| *k == key) {
                        Some((_, v)) => v.push((pe, c.clone())),
                        None => terms.push((key, vec![(pe, c.clone())])),
                    }
                }
                let group_degrees = if keep_lambda { vec![dx, dl] } else { vec![dx] };
                GradedForm { group_degrees, terms }
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        KoszulStrand::new(forms, groups, nu, nvars, opts.max_matrix_dim, &mut rng)
    }
}

/// `R(t0, t, U)` with its stripped form `R = t^e R̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamResultant {
    /// Over `[t0, t, U]`.
    pub r: IntPolynomial,
    /// Homogeneity degree in `(t0, t)`.
    pub t_degree: u32,
    pub e: u32,
    pub r_tilde: IntPolynomial,
}

impl ParamResultant {
    pub fn new(r: IntPolynomial, t_degree: u32) -> Result<Self> {
        strip_t_power(&ParamResultant {
            r_tilde: r.clone(),
            r,
            t_degree,
            e: 0,
        })
    }

    pub fn layout() -> VarLayout {
        VarLayout::new(
            ["t0", "t", "U"]
                .iter()
                .map(|n| (n.to_string(), VarRole::Parameter))
                .collect(),
        )
    }
}

/// Recomputes `e` and `R̃` from `R`.
pub fn strip_t_power(pr: &ParamResultant) -> Result<ParamResultant> {
    if pr.r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let e = pr.r.terms().map(|(m, _)| m.exponents()[1]).min().unwrap();
    let mut r_tilde = IntPolynomial::zero(3);
    for (m, c) in pr.r.terms() {
        let mut x = m.exponents().to_vec();
        x[1] -= e;
        r_tilde.add_term(Monomial::new(x), c.clone());
    }
    Ok(ParamResultant {
        r: pr.r.clone(),
        t_degree: pr.t_degree,
        e,
        r_tilde,
    })
}

/// Coefficients of the polynomial of degree `< xs.len()` through the points.
pub fn interpolate(xs: &[BigInt], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let xs: Vec<BigRational> = xs.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    // divided differences
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // expand Newton form from the top
    let mut coeffs = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &coeffs[k] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

fn to_integer(v: &BigRational, what: &str) -> Result<BigInt> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::Degenerate(format!("non-integral interpolated {what}: {v}")))
    }
}

fn u_sequence(k: usize) -> BigInt {
    // 0, 1, -1, 2, -2, ...
    let h = k.div_ceil(2) as i64;
    BigInt::from(if k % 2 == 1 { h } else { -h })
}

/// Computes `R_{S,σ}(t0, t, U)` exactly.
pub fn multihomog_resultant(rs: &ResultantSystem, opts: &ResultantOptions) -> Result<ParamResultant> {
    let (m1, dtot) = rs.degree_ceilings()?;
    let m1 = m1.to_usize().ok_or_else(|| Error::Budget {
        what: "M1".into(),
        size: u128::MAX,
        limit: usize::MAX as u128,
    })?;
    let dtot = dtot.to_usize().unwrap_or(usize::MAX);
    let grid = (dtot as u128 + 1) * (m1 as u128 + 1);
    if grid > opts.max_grid_points as u128 {
        return Err(Error::Budget {
            what: "interpolation grid points".into(),
            size: grid,
            limit: opts.max_grid_points as u128,
        });
    }
    let strand = rs.strand(opts)?;
    let one = BigInt::one();

    // U-interpolation at t0 = 1 for one t value
    let column = |tau: &BigInt| -> Option<Vec<BigRational>> {
        let mut us = Vec::with_capacity(m1 + 1);
        let mut vals = Vec::with_capacity(m1 + 1);
        let mut k = 0;
        while us.len() <= m1 && k < 4 * (m1 + 1) + 8 {
            let u = u_sequence(k);
            k += 1;
            if let Some(v) = strand.evaluate(&[one.clone(), tau.clone(), u.clone()]) {
                us.push(u);
                vals.push(v);
            }
        }
        (us.len() == m1 + 1).then(|| interpolate(&us, &vals))
    };

    let mut taus = Vec::new();
    let mut cols = Vec::new();
    let mut next = 1i64;
    while taus.len() <= dtot && next <= 4 * (dtot as i64 + 1) + 8 {
        let batch: Vec<BigInt> = (next..next + (dtot as i64 + 1 - taus.len() as i64))
            .map(BigInt::from)
            .collect();
        next += batch.len() as i64;
        let results: Vec<Option<Vec<BigRational>>> = batch.par_iter().map(&column).collect();
        for (tau, res) in batch.into_iter().zip(results) {
            if let Some(c) = res {
                if taus.len() <= dtot {
                    taus.push(tau);
                    cols.push(c);
                }
            }
        }
    }
    if taus.len() <= dtot {
        return Err(Error::Degenerate(
            "too few evaluation points avoid the extraneous factor".into(),
        ));
    }
    let mut r = IntPolynomial::zero(3);
    for k in 0..=m1 {
        let ys: Vec<BigRational> = cols.iter().map(|c| c[k].clone()).collect();
        let coeffs = interpolate(&taus, &ys);
        for (j, c) in coeffs.iter().enumerate() {
            let c = to_integer(c, "coefficient")?;
            if !c.is_zero() {
                r.add_term(
                    Monomial::new(vec![(dtot - j) as u32, j as u32, k as u32]),
                    c,
                );
            }
        }
    }
    if r.is_zero() {
        return Err(Error::Degenerate("resultant vanished identically".into()));
    }
    // consistency away from t0 = 1, which also exercises homogeneity
    let checks = [(2i64, 3i64, 5i64), (3, -2, -3), (-2, 5, 2), (5, 7, -4), (7, 1, 3)];
    let mut verified = 0;
    for &(a, b, c) in checks.iter() {
        if verified >= opts.verify_points {
            break;
        }
        let pt = [BigInt::from(a), BigInt::from(b), BigInt::from(c)];
        if let Some(v) = strand.evaluate(&pt) {
            let expect = r.evaluate_int(&pt)?;
            if v != BigRational::from_integer(expect) {
                return Err(Error::Degenerate(format!(
                    "interpolated resultant disagrees with the strand at ({a}, {b}, {c})"
                )));
            }
            verified += 1;
        }
    }
    ParamResultant::new(r, dtot as u32)
}

/// Degree and height ceilings for one `(S, σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ceilings {
    pub m1: BigUint,
    /// `M_{S,σ}` when small enough to write out.
    pub m_exact: Option<BigUint>,
    pub log2_m: Interval,
}

impl Ceilings {
    pub fn for_system(sys: &SemialgSystem, s: usize, exact_bits: u64) -> Result<Self> {
        let p = BoundParams::from_system(sys, s)?;
        let (m1, _, _) = bezout_numbers(p.n, p.s, p.d, p.d0)?;
        Ok(Ceilings {
            m1,
            m_exact: coefficient_bound_m_limited(&p, exact_bits).ok(),
            log2_m: coefficient_bound_log2(&p)?,
        })
    }

    /// `Some(true)` when `height <= M`, decided exactly or by disjoint log enclosures.
    pub fn height_within(&self, height: &BigUint) -> Option<bool> {
        if let Some(m) = &self.m_exact {
            return Some(height <= m);
        }
        if height.is_zero() {
            return Some(true);
        }
        let l = log2_biguint(height);
        if l.hi() <= self.log2_m.lo() {
            Some(true)
        } else if l.lo() > self.log2_m.hi() {
            Some(false)
        } else {
            None
        }
    }
}

/// `Q_{S,σ}(U)` with its provenance and ceilings.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificatePoly {
    pub selector: SubsetSelector,
    pub q: UniPoly,
    pub e: u32,
    pub t_degree: u32,
    pub ceilings: Ceilings,
}

impl fmt::Display for CertificatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(U) = {}", self.selector, self.q)
    }
}

/// `Q = R̃(1, 0, U)`, checked against `deg Q <= M1` and `height Q <= M_{S,σ}`.
pub fn q_poly(pr: &ParamResultant, selector: &SubsetSelector, ceilings: &Ceilings) -> Result<CertificatePoly> {
    let mut coeffs: Vec<BigInt> = Vec::new();
    for (m, c) in pr.r_tilde.terms() {
        let e = m.exponents();
        if e[1] != 0 {
            continue;
        }
        let k = e[2] as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigInt::zero());
        }
        coeffs[k] += c;
    }
    let q = UniPoly::new(coeffs);
    if q.is_zero() {
        return Err(Error::Degenerate("certificate polynomial is zero".into()));
    }
    let deg = q.degree().unwrap();
    if BigUint::from(deg) > ceilings.m1 {
        return Err(Error::CeilingViolation(format!(
            "deg Q_{selector} = {deg} exceeds M1 = {}",
            ceilings.m1
        )));
    }
    let height = q.height().magnitude().clone();
    match ceilings.height_within(&height) {
        Some(true) => {}
        Some(false) => {
            return Err(Error::CeilingViolation(format!(
                "height of Q_{selector} = {height} exceeds M_S,sigma"
            )))
        }
        None => return Err(Error::Undecided(format!("height of Q_{selector} against M_S,sigma"))),
    }
    Ok(CertificatePoly {
        selector: selector.clone(),
        q,
        e: pr.e,
        t_degree: pr.t_degree,
        ceilings: ceilings.clone(),
    })
}

/// Resultant, stripping and `Q` for one `(S, σ)`.
pub fn certificate_for(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
    sel: &SubsetSelector,
    opts: &ResultantOptions,
) -> Result<(ParamResultant, CertificatePoly)> {
    let rs = ResultantSystem::new(sys, a, sel)?;
    let pr = multihomog_resultant(&rs, opts)?;
    let ceilings = Ceilings::for_system(sys, sel.len(), opts.exact_bits)?;
    let cert = q_poly(&pr, sel, &ceilings)?;
    Ok((pr, cert))
}

/// Certificates for every admissible `(S, σ)` and the isolated real roots
/// of the squarefree product of their `Q`s.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    pub certificates: Vec<CertificatePoly>,
    pub squarefree_product: UniPoly,
    pub roots: Vec<RootInterval>,
}

impl CandidateSet {
    pub fn from_certificates(certificates: Vec<CertificatePoly>) -> Result<Self> {
        let mut prod = UniPoly::from_i64(&[1]);
        for c in &certificates {
            prod = prod.mul(&c.q.squarefree_part());
        }
        let squarefree_product = prod.squarefree_part();
        let roots = isolate_real_roots(&squarefree_product)?;
        Ok(CandidateSet {
            certificates,
            squarefree_product,
            roots,
        })
    }

    /// Indices of roots whose isolating interval meets `[lo, hi]`.
    pub fn roots_meeting(&self, lo: &BigRational, hi: &BigRational) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| self.roots[i].intersects(lo, hi))
            .collect()
    }

    /// Certificates having `x` as an exact root.
    pub fn certificates_vanishing_at(&self, x: &BigRational) -> Vec<&CertificatePoly> {
        self.certificates.iter().filter(|c| c.q.eval(x).is_zero()).collect()
    }
}

/// Runs every admissible `(S, σ)`, in parallel.
pub fn candidate_minima(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
    opts: &ResultantOptions,
) -> Result<CandidateSet> {
    let selectors = SubsetSelector::enumerate(sys);
    let certificates = selectors
        .par_iter()
        .map(|sel| certificate_for(sys, a, sel, opts).map(|(_, c)| c))
        .collect::<Result<Vec<_>>>()?;
    CandidateSet::from_certificates(certificates)
}

/// Certificates for the coordinate objective `x_i` (1-based) over the same constraints.
pub fn coordinate_candidates(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
    i: usize,
    opts: &ResultantOptions,
) -> Result<CandidateSet> {
    if i == 0 || i > sys.n() {
        return Err(Error::VarIndexOutOfRange {
            index: i,
            num_vars: sys.n(),
        });
    }
    let xi = IntPolynomial::var(sys.n(), i - 1);
    candidate_minima(&sys.with_objective(xi)?, a, opts)
}

/// Absolute values of coefficients, sorted, for sign-insensitive comparisons.
pub fn coefficient_magnitudes(q: &UniPoly) -> Vec<BigInt> {
    q.coeffs().iter().map(|c| c.abs()).collect()
}
