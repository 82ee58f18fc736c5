//! Deformation apparatus: the positive matrix `A`, the positive
//! polynomials built from its rows, the `t`-perturbed constraint and
//! objective families, their bihomogeneous lifts, the Lagrange forms
//! used for elimination, the `U`-polynomial, and ball compactification.
//!
//! Conventions for `A`: row 0 belongs to the objective, rows `1..=m` to the
//! constraints in order (equalities first); column 0 multiplies the
//! constant term, column `j` multiplies `x_j^d`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, Matrix};
use crate::polycore::{IntPolynomial, Monomial, RationalPoint};

/// A basic closed semialgebraic set together with an objective.
///
/// `d`, `H`, `d0` and `H0` are recomputed from the polynomials; only an even
/// `d` override at least the observed degree is accepted from outside.
#[derive(Clone, Debug, PartialEq)]
pub struct SemialgSystem {
    n: usize,
    equalities: Vec<IntPolynomial>,
    inequalities: Vec<IntPolynomial>,
    objective: IntPolynomial,
    d: u32,
    height: BigInt,
    d0: u32,
    h0: BigInt,
    // parameters the magnitude bound must be evaluated with, when they
    // differ from the system's own (ball compactification)
    bound_source: Option<BoundSource>,
}

#[derive(Clone, Debug, PartialEq)]
struct BoundSource {
    m: usize,
    d: u32,
    height: BigInt,
}

impl SemialgSystem {
    pub fn new(
        n: usize,
        equalities: Vec<IntPolynomial>,
        inequalities: Vec<IntPolynomial>,
        objective: IntPolynomial,
        d_override: Option<u32>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSystem(format!("need n >= 2 variables, got {n}")));
        }
        if equalities.is_empty() && inequalities.is_empty() {
            return Err(Error::InvalidSystem("at least one constraint is required".into()));
        }
        let mut max_deg = 0;
        let mut height = BigInt::zero();
        for (k, f) in equalities.iter().chain(&inequalities).enumerate() {
            if f.num_vars() != n {
                return Err(Error::VarCountMismatch {
                    left: n,
                    right: f.num_vars(),
                });
            }
            let deg = f
                .total_degree()
                .map_err(|_| Error::InvalidSystem(format!("constraint {} is zero", k + 1)))?;
            max_deg = max_deg.max(deg);
            height = height.max(f.height());
        }
        if objective.num_vars() != n {
            return Err(Error::VarCountMismatch {
                left: n,
                right: objective.num_vars(),
            });
        }
        let d0 = objective
            .total_degree()
            .map_err(|_| Error::InvalidSystem("objective is the zero polynomial".into()))?;
        let h0 = objective.height();
        max_deg = max_deg.max(d0);
        let d = match d_override {
            Some(d) if d % 2 == 1 => return Err(Error::OddDegree(d)),
            Some(d) if d < max_deg || d < 2 => {
                return Err(Error::InvalidSystem(format!(
                    "d = {d} is below the observed degree {max_deg}"
                )))
            }
            Some(d) => d,
            None => smallest_even_at_least(max_deg),
        };
        let height = height.max(h0.clone());
        Ok(SemialgSystem {
            n,
            equalities,
            inequalities,
            objective,
            d,
            height,
            d0,
            h0,
            bound_source: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of equality constraints `l`.
    pub fn l(&self) -> usize {
        self.equalities.len()
    }

    /// Total number of constraints `m`.
    pub fn m(&self) -> usize {
        self.equalities.len() + self.inequalities.len()
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn height(&self) -> &BigInt {
        &self.height
    }

    pub fn d0(&self) -> u32 {
        self.d0
    }

    pub fn h0(&self) -> &BigInt {
        &self.h0
    }

    pub fn equalities(&self) -> &[IntPolynomial] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[IntPolynomial] {
        &self.inequalities
    }

    pub fn objective(&self) -> &IntPolynomial {
        &self.objective
    }

    /// Constraint `f_i` with 1-based index, equalities first.
    pub fn constraint(&self, i: usize) -> &IntPolynomial {
        assert!(i >= 1 && i <= self.m(), "constraint index {i} out of range");
        if i <= self.l() {
            &self.equalities[i - 1]
        } else {
            &self.inequalities[i - 1 - self.l()]
        }
    }

    pub fn is_equality(&self, i: usize) -> bool {
        i <= self.l()
    }

    /// `m` to use in bound formulas.
    pub fn bound_m(&self) -> usize {
        self.bound_source.as_ref().map_or(self.m(), |b| b.m)
    }

    /// `d` to use in bound formulas.
    pub fn bound_d(&self) -> u32 {
        self.bound_source.as_ref().map_or(self.d, |b| b.d)
    }

    /// `H` to use in bound formulas.
    pub fn bound_height(&self) -> &BigInt {
        self.bound_source.as_ref().map_or(&self.height, |b| &b.height)
    }

    pub fn is_compactified(&self) -> bool {
        self.bound_source.is_some()
    }

    /// Same constraints, different objective. `d` is kept unless the new
    /// objective needs a larger one.
    pub fn with_objective(&self, objective: IntPolynomial) -> Result<Self> {
        let keep = objective.total_degree().map_or(true, |e| e <= self.d);
        let mut out = SemialgSystem::new(
            self.n,
            self.equalities.clone(),
            self.inequalities.clone(),
            objective,
            keep.then_some(self.d),
        )?;
        out.bound_source = self.bound_source.clone();
        Ok(out)
    }

    /// Exact membership test for the set itself.
    pub fn contains(&self, pt: &RationalPoint) -> Result<bool> {
        for f in &self.equalities {
            if !f.evaluate(pt)?.is_zero() {
                return Ok(false);
            }
        }
        for f in &self.inequalities {
            if f.evaluate(pt)?.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn smallest_even_at_least(k: u32) -> u32 {
    let k = k.max(2);
    k + (k % 2)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|q| q * q <= p).all(|q| p % q != 0)
}

/// Smallest prime in `[n+m+2, 2n+2m+1]`.
pub fn bertrand_prime(n: usize, m: usize) -> u64 {
    let lo = (n + m + 2) as u64;
    let hi = (2 * n + 2 * m + 1) as u64;
    (lo..=hi)
        .find(|&p| is_prime(p))
        .expect("Bertrand's postulate guarantees a prime in range")
}

/// The `(m+1) x (n+1)` positive integer matrix whose square submatrices are all nonsingular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationMatrix {
    entries: Matrix<BigInt>,
    prime: u64,
}

impl PerturbationMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &Matrix<BigInt> {
        &self.entries
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn max_entry(&self) -> BigInt {
        self.entries.iter().flatten().max().cloned().unwrap_or_default()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<BigInt> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect()
    }

    /// Checks every square submatrix exhaustively. Returns the first
    /// singular `(rows, cols)` pair if one exists.
    pub fn find_singular_submatrix(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let (r, c) = (self.rows(), self.cols());
        for k in 1..=r.min(c) {
            for rows in combinations(r, k) {
                for cols in combinations(c, k) {
                    if det_bareiss(&self.submatrix(&rows, &cols)).is_zero() {
                        return Some((rows, cols));
                    }
                }
            }
        }
        None
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Reduces `(n+m+1)!/(i+j+1)` modulo the Bertrand prime entrywise.
pub fn build_matrix_a(n: usize, m: usize) -> PerturbationMatrix {
    let p = bertrand_prime(n, m);
    let fact: BigInt = (1..=(n + m + 1) as u64).map(BigInt::from).product();
    let pb = BigInt::from(p);
    let entries = (0..=m)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    let (q, r) = fact.div_rem(&BigInt::from((i + j + 1) as u64));
                    debug_assert!(r.is_zero());
                    q.mod_floor(&pb)
                })
                .collect()
        })
        .collect();
    PerturbationMatrix { entries, prime: p }
}

fn tilde_row(row: usize, a: &PerturbationMatrix, n: usize, d: u32) -> Result<IntPolynomial> {
    if d % 2 == 1 {
        return Err(Error::OddDegree(d));
    }
    if a.cols() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: a.cols(),
        });
    }
    let mut p = IntPolynomial::constant(n, a.entry(row, 0).clone());
    for j in 1..=n {
        let mut e = vec![0; n];
        e[j - 1] = d;
        p.add_term(Monomial::new(e), a.entry(row, j).clone());
    }
    Ok(p)
}

/// `Σ_j a_ij x_j^d + a_i0`, strictly positive on `R^n`.
pub fn tilde_constraint(i: usize, a: &PerturbationMatrix, n: usize, d: u32) -> Result<IntPolynomial> {
    if i == 0 || i >= a.rows() {
        return Err(Error::InvalidParameter(format!(
            "constraint row {i} outside 1..={}",
            a.rows() - 1
        )));
    }
    tilde_row(i, a, n, d)
}

/// `Σ_j a_0j x_j^d + a_00`.
pub fn tilde_objective(a: &PerturbationMatrix, n: usize, d: u32) -> Result<IntPolynomial> {
    tilde_row(0, a, n, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A set `S` of active constraints (1-based, increasing) with a sign per element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetSelector {
    subset: Vec<usize>,
    signs: Vec<Sign>,
}

impl SubsetSelector {
    pub fn new(subset: Vec<usize>, signs: Vec<Sign>) -> Result<Self> {
        if subset.len() != signs.len() {
            return Err(Error::InvalidSelector(format!(
                "{} indices but {} signs",
                subset.len(),
                signs.len()
            )));
        }
        if subset.windows(2).any(|w| w[0] >= w[1]) || subset.first() == Some(&0) {
            return Err(Error::InvalidSelector(
                "indices must be 1-based and strictly increasing".into(),
            ));
        }
        Ok(SubsetSelector { subset, signs })
    }

    pub fn empty() -> Self {
        SubsetSelector {
            subset: Vec::new(),
            signs: Vec::new(),
        }
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Sign)> + '_ {
        self.subset.iter().copied().zip(self.signs.iter().copied())
    }

    /// Checks `#S <= n`, indices within `1..=m`, and `+` on inequality indices.
    pub fn validate(&self, sys: &SemialgSystem) -> Result<()> {
        if self.len() > sys.n() {
            return Err(Error::InvalidSelector(format!(
                "#S = {} exceeds n = {}",
                self.len(),
                sys.n()
            )));
        }
        for (i, s) in self.iter() {
            if i > sys.m() {
                return Err(Error::InvalidSelector(format!(
                    "index {i} exceeds m = {}",
                    sys.m()
                )));
            }
            if !sys.is_equality(i) && s == Sign::Minus {
                return Err(Error::InvalidSelector(format!(
                    "inequality index {i} must carry sign +"
                )));
            }
        }
        Ok(())
    }

    /// Every admissible selector with `#S <= min(n, m)`, by size then lexicographically.
    pub fn enumerate(sys: &SemialgSystem) -> Vec<SubsetSelector> {
        let mut out = Vec::new();
        let m = sys.m();
        for k in 0..=sys.n().min(m) {
            for subset in combinations(m, k) {
                let subset: Vec<usize> = subset.into_iter().map(|i| i + 1).collect();
                let free: Vec<usize> = (0..k).filter(|&p| sys.is_equality(subset[p])).collect();
                for mask in 0..(1usize << free.len()) {
                    let mut signs = vec![Sign::Plus; k];
                    for (b, &p) in free.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            signs[p] = Sign::Minus;
                        }
                    }
                    out.push(SubsetSelector {
                        subset: subset.clone(),
                        signs,
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for SubsetSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(i, s)| format!("{i}{s}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarRole {
    /// Kept symbolic through elimination (`t0`, `t`, `U`).
    Parameter,
    /// Point coordinates `x0, x1, ..., xn`.
    Point,
    /// Lagrange multipliers `l0, l_i`.
    Multiplier,
}

/// Names and roles of the variable slots of a [`ParamPolynomial`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarLayout {
    names: Vec<String>,
    roles: Vec<VarRole>,
}

impl VarLayout {
    pub fn new(slots: Vec<(String, VarRole)>) -> Self {
        let (names, roles) = slots.into_iter().unzip();
        VarLayout { names, roles }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn role(&self, idx: usize) -> VarRole {
        self.roles[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn indices_with_role(&self, role: VarRole) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.roles[i] == role).collect()
    }

    fn affine(params: &[&str], n: usize) -> Self {
        let mut slots: Vec<(String, VarRole)> =
            params.iter().map(|p| (p.to_string(), VarRole::Parameter)).collect();
        slots.extend((1..=n).map(|j| (format!("x{j}"), VarRole::Point)));
        VarLayout::new(slots)
    }

    fn projective(params: &[&str], n: usize) -> Self {
        let mut slots: Vec<(String, VarRole)> =
            params.iter().map(|p| (p.to_string(), VarRole::Parameter)).collect();
        slots.extend((0..=n).map(|j| (format!("x{j}"), VarRole::Point)));
        VarLayout::new(slots)
    }

    /// `[t0, t, U, x0..xn, l0, l_i (i in S)]`: the layout of a resultant system.
    pub fn resultant(n: usize, sel: &SubsetSelector) -> Self {
        let mut slots: Vec<(String, VarRole)> = ["t0", "t", "U"]
            .iter()
            .map(|p| (p.to_string(), VarRole::Parameter))
            .collect();
        slots.extend((0..=n).map(|j| (format!("x{j}"), VarRole::Point)));
        slots.push(("l0".into(), VarRole::Multiplier));
        slots.extend(sel.subset().iter().map(|i| (format!("l{i}"), VarRole::Multiplier)));
        VarLayout::new(slots)
    }

    fn lagrange(n: usize, sel: &SubsetSelector) -> Self {
        let mut slots: Vec<(String, VarRole)> = ["t0", "t"]
            .iter()
            .map(|p| (p.to_string(), VarRole::Parameter))
            .collect();
        slots.extend((0..=n).map(|j| (format!("x{j}"), VarRole::Point)));
        slots.push(("l0".into(), VarRole::Multiplier));
        slots.extend(sel.subset().iter().map(|i| (format!("l{i}"), VarRole::Multiplier)));
        VarLayout::new(slots)
    }
}

/// A polynomial over named variable slots with recorded roles.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPolynomial {
    pub poly: IntPolynomial,
    pub layout: VarLayout,
}

impl ParamPolynomial {
    pub fn new(poly: IntPolynomial, layout: VarLayout) -> Result<Self> {
        if poly.num_vars() != layout.len() {
            return Err(Error::VarCountMismatch {
                left: layout.len(),
                right: poly.num_vars(),
            });
        }
        Ok(ParamPolynomial { poly, layout })
    }

    /// Re-expresses the polynomial over a larger layout, matching slots by name.
    pub fn embed_into(&self, target: &VarLayout) -> Result<ParamPolynomial> {
        let mapping = self
            .layout
            .names()
            .iter()
            .map(|name| {
                target
                    .index_of(name)
                    .ok_or_else(|| Error::InvalidParameter(format!("slot {name} missing in target layout")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ParamPolynomial {
            poly: self.poly.embed(target.len(), &mapping),
            layout: target.clone(),
        })
    }

    /// Degree in the named slots jointly.
    pub fn degree_in(&self, names: &[&str]) -> Option<u32> {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.layout.index_of(n)).collect();
        self.poly.degree_in_group(&idx)
    }

    /// Substitutes integers for the named slots and drops them.
    pub fn specialize(&self, values: &[(&str, BigInt)]) -> Result<ParamPolynomial> {
        let mut images = Vec::with_capacity(self.layout.len());
        let mut kept = Vec::new();
        for (i, name) in self.layout.names().iter().enumerate() {
            if !values.iter().any(|(v, _)| v == name) {
                kept.push(i);
            }
        }
        let target = kept.len();
        for (i, name) in self.layout.names().iter().enumerate() {
            match values.iter().find(|(v, _)| v == name) {
                Some((_, val)) => images.push(IntPolynomial::constant(target, val.clone())),
                None => {
                    let pos = kept.iter().position(|&k| k == i).unwrap();
                    images.push(IntPolynomial::var(target, pos));
                }
            }
        }
        let poly = self.poly.compose(&images)?;
        let layout = VarLayout::new(
            kept.iter()
                .map(|&i| (self.layout.names()[i].clone(), self.layout.role(i)))
                .collect(),
        );
        Ok(ParamPolynomial { poly, layout })
    }
}

/// Identifies a member of a perturbed family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyMember {
    Constraint { index: usize, sign: Sign },
    Objective,
}

fn check_matrix(sys: &SemialgSystem, a: &PerturbationMatrix) -> Result<()> {
    if a.rows() != sys.m() + 1 || a.cols() != sys.n() + 1 {
        return Err(Error::DimensionMismatch {
            expected: (sys.m() + 1) * (sys.n() + 1),
            found: a.rows() * a.cols(),
        });
    }
    Ok(())
}

fn affine_lift(p: &IntPolynomial, n: usize) -> IntPolynomial {
    // [x1..xn] -> [t, x1..xn]
    let mapping: Vec<usize> = (1..=n).collect();
    p.embed(n + 1, &mapping)
}

/// `F_i^σ(t, x) = f_i(x) σ t f̃_i(x)` over `[t, x1..xn]`.
pub fn perturbed_constraint(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
    i: usize,
    sign: Sign,
) -> Result<ParamPolynomial> {
    check_matrix(sys, a)?;
    let n = sys.n();
    let tilde = tilde_constraint(i, a, n, sys.d())?;
    let t = IntPolynomial::var(n + 1, 0).scale(&BigInt::from(sign.as_int()));
    let poly = &affine_lift(sys.constraint(i), n) + &(&t * &affine_lift(&tilde, n));
    ParamPolynomial::new(poly, VarLayout::affine(&["t"], n))
}

/// `G(t, x) = g(x) + t g̃(x)`.
pub fn perturbed_objective(sys: &SemialgSystem, a: &PerturbationMatrix) -> Result<ParamPolynomial> {
    check_matrix(sys, a)?;
    let n = sys.n();
    let tilde = tilde_objective(a, n, sys.d())?;
    let t = IntPolynomial::var(n + 1, 0);
    let poly = &affine_lift(sys.objective(), n) + &(&t * &affine_lift(&tilde, n));
    ParamPolynomial::new(poly, VarLayout::affine(&["t"], n))
}

/// `F_i^±` for equalities, `F_i^+` for inequalities, then `G`.
pub fn perturbed_family(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
) -> Result<Vec<(FamilyMember, ParamPolynomial)>> {
    let mut out = Vec::new();
    for i in 1..=sys.m() {
        let signs: &[Sign] = if sys.is_equality(i) {
            &[Sign::Plus, Sign::Minus]
        } else {
            &[Sign::Plus]
        };
        for &sign in signs {
            out.push((
                FamilyMember::Constraint { index: i, sign },
                perturbed_constraint(sys, a, i, sign)?,
            ));
        }
    }
    out.push((FamilyMember::Objective, perturbed_objective(sys, a)?));
    Ok(out)
}

fn homogeneous_lift(p: &IntPolynomial, e: u32, offset: usize, total: usize) -> Result<IntPolynomial> {
    let h = p.homogenize(e)?;
    let mapping: Vec<usize> = (0..h.num_vars()).map(|k| k + offset).collect();
    Ok(h.embed(total, &mapping))
}

fn power_sum_row(a: &PerturbationMatrix, row: usize, n: usize, d: u32, offset: usize, total: usize) -> IntPolynomial {
    let mut p = IntPolynomial::zero(total);
    for j in 0..=n {
        let mut e = vec![0; total];
        e[offset + j] = d;
        p.add_term(Monomial::new(e), a.entry(row, j).clone());
    }
    p
}

/// `F̄_i^σ = t0 h(f_i)_d(x0, x) σ t Σ_{j=0}^n a_ij x_j^d` over `[t0, t, x0..xn]`.
pub fn homogenized_constraint(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
    i: usize,
    sign: Sign,
) -> Result<ParamPolynomial> {
    check_matrix(sys, a)?;
    if i == 0 || i > sys.m() {
        return Err(Error::InvalidParameter(format!("constraint index {i}")));
    }
    let n = sys.n();
    let total = n + 3;
    let t0 = IntPolynomial::var(total, 0);
    let t = IntPolynomial::var(total, 1).scale(&BigInt::from(sign.as_int()));
    let hf = homogeneous_lift(sys.constraint(i), sys.d(), 2, total)?;
    let sum = power_sum_row(a, i, n, sys.d(), 2, total);
    let poly = &(&t0 * &hf) + &(&t * &sum);
    ParamPolynomial::new(poly, VarLayout::projective(&["t0", "t"], n))
}

/// `F̄_i^±` for equalities and `F̄_i^+` for inequalities.
pub fn homogenized_family(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
) -> Result<Vec<(FamilyMember, ParamPolynomial)>> {
    let mut out = Vec::new();
    for i in 1..=sys.m() {
        let signs: &[Sign] = if sys.is_equality(i) {
            &[Sign::Plus, Sign::Minus]
        } else {
            &[Sign::Plus]
        };
        for &sign in signs {
            out.push((
                FamilyMember::Constraint { index: i, sign },
                homogenized_constraint(sys, a, i, sign)?,
            ));
        }
    }
    Ok(out)
}

/// The `n` forms `Ḡ_{S,σ,j}`, `j = 1..n`, over `[t0, t, x0..xn, l0, l_i]`:
///
/// `t0 (l0 h(∂g/∂x_j) - Σ l_i h(∂f_i/∂x_j)) + t d x_j^{d-1} (l0 a_0j - Σ l_i σ_i a_ij)`
/// with every `h(·)` taken to degree `d - 1`.
pub fn lagrange_family(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
    sel: &SubsetSelector,
) -> Result<Vec<ParamPolynomial>> {
    check_matrix(sys, a)?;
    sel.validate(sys)?;
    let n = sys.n();
    let d = sys.d();
    let layout = VarLayout::lagrange(n, sel);
    let total = layout.len();
    let t0 = IntPolynomial::var(total, 0);
    let t = IntPolynomial::var(total, 1);
    let x_offset = 2;
    let lam0 = IntPolynomial::var(total, n + 3);
    let lams: Vec<IntPolynomial> = (0..sel.len())
        .map(|k| IntPolynomial::var(total, n + 4 + k))
        .collect();
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let dg = sys.objective().partial_derivative(j - 1)?;
        let mut classical = &lam0 * &homogeneous_lift(&dg, d - 1, x_offset, total)?;
        for (k, (i, _)) in sel.iter().enumerate() {
            let df = sys.constraint(i).partial_derivative(j - 1)?;
            let term = &lams[k] * &homogeneous_lift(&df, d - 1, x_offset, total)?;
            classical = &classical - &term;
        }
        let mut linear = lam0.scale(a.entry(0, j));
        for (k, (i, s)) in sel.iter().enumerate() {
            let c = a.entry(i, j) * BigInt::from(s.as_int());
            linear = &linear - &lams[k].scale(&c);
        }
        let mut xpow = vec![0; total];
        xpow[x_offset + j] = d - 1;
        let lead = IntPolynomial::monomial(xpow, BigInt::from(d));
        let poly = &(&t0 * &classical) + &(&(&t * &lead) * &linear);
        out.push(ParamPolynomial::new(poly, layout.clone())?);
    }
    Ok(out)
}

/// `P(U, x0, x) = U x0^{d0} - h(g)_{d0}(x0, x)` over `[U, x0..xn]`.
pub fn u_polynomial(sys: &SemialgSystem) -> Result<ParamPolynomial> {
    let n = sys.n();
    let total = n + 2;
    let mut e = vec![0; total];
    e[0] = 1;
    e[1] = sys.d0();
    let lead = IntPolynomial::monomial(e, BigInt::one());
    let hg = homogeneous_lift(sys.objective(), sys.d0(), 1, total)?;
    ParamPolynomial::new(&lead - &hg, VarLayout::projective(&["U"], n))
}

/// Adds the ball constraint `(M+1)^2 - Σ x_i^2 >= 0`, scaled to integer
/// coefficients. Bound formulas for the result keep using the original
/// `(m, d, H)`.
pub fn compactify(sys: &SemialgSystem, radius: &BigRational) -> Result<SemialgSystem> {
    if radius.is_negative() {
        return Err(Error::InvalidParameter(format!("ball radius {radius} is negative")));
    }
    let n = sys.n();
    let r1 = radius + BigRational::one();
    // q^2 (M+1)^2 - q^2 Σ x_i^2 with q the denominator of M + 1
    let q = r1.denom().clone();
    let p = r1.numer().clone();
    let mut ball = IntPolynomial::constant(n, &p * &p);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 2;
        ball.add_term(Monomial::new(e), -(&q * &q));
    }
    let mut inequalities = sys.inequalities.clone();
    inequalities.push(ball);
    let mut out = SemialgSystem::new(
        n,
        sys.equalities.clone(),
        inequalities,
        sys.objective.clone(),
        Some(sys.d()),
    )?;
    out.bound_source = Some(sys.bound_source.clone().unwrap_or(BoundSource {
        m: sys.m(),
        d: sys.d(),
        height: sys.height().clone(),
    }));
    Ok(out)
}

/// Membership in `T_t`: `F_i^+(t, x) >= 0` for all `i` and `F_i^-(t, x) <= 0` for equalities.
pub fn membership_t_t(
    sys: &SemialgSystem,
    a: &PerturbationMatrix,
    t: &BigRational,
    pt: &RationalPoint,
) -> Result<bool> {
    if t.is_negative() {
        return Err(Error::InvalidParameter(format!("t = {t} is negative")));
    }
    check_matrix(sys, a)?;
    if pt.dim() != sys.n() {
        return Err(Error::DimensionMismatch {
            expected: sys.n(),
            found: pt.dim(),
        });
    }
    for i in 1..=sys.m() {
        let f = sys.constraint(i).evaluate(pt)?;
        let ft = tilde_constraint(i, a, sys.n(), sys.d())?.evaluate(pt)?;
        let scaled = t * &ft;
        if (&f + &scaled).is_negative() {
            return Ok(false);
        }
        if sys.is_equality(i) && (&f - &scaled).is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{default_names, parse_polynomial, rat};

    fn poly(s: &str, names: &[&str]) -> IntPolynomial {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        parse_polynomial(s, &names).unwrap()
    }

    fn p2(s: &str) -> IntPolynomial {
        parse_polynomial(s, &default_names(2)).unwrap()
    }

    fn circle(g: &str) -> SemialgSystem {
        SemialgSystem::new(2, vec![p2("x1^2 + x2^2 - 1")], vec![], p2(g), None).unwrap()
    }

    fn ints(rows: &[&[i64]]) -> Matrix<BigInt> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn bertrand_examples() {
        assert_eq!(bertrand_prime(2, 1), 5);
        assert_eq!(bertrand_prime(2, 2), 7);
        assert_eq!(bertrand_prime(3, 3), 11);
    }

    #[test]
    fn matrix_for_two_variables_one_constraint() {
        // 4! * Hilbert = [[24,12,8],[12,8,6]], reduced mod 5
        let a = build_matrix_a(2, 1);
        assert_eq!(a.prime(), 5);
        assert_eq!(a.entries(), &ints(&[&[4, 2, 3], &[2, 3, 1]]));
        assert_eq!(a.max_entry(), BigInt::from(4));
        assert!(a.find_singular_submatrix().is_none());
    }

    #[test]
    fn tilde_polynomials_follow_row_convention() {
        let a = build_matrix_a(2, 1);
        // row 1 = [a10, a11, a12] = [2, 3, 1]
        assert_eq!(tilde_constraint(1, &a, 2, 2).unwrap(), p2("3*x1^2 + x2^2 + 2"));
        // row 0 = [4, 2, 3]
        let g = tilde_objective(&a, 2, 2).unwrap();
        assert_eq!(g, p2("2*x1^2 + 3*x2^2 + 4"));
        assert_eq!(g.total_degree().unwrap(), 2);
        assert_eq!(g.constant_term(), BigInt::from(4));
        assert_eq!(tilde_constraint(1, &a, 2, 3), Err(Error::OddDegree(3)));
        assert!(tilde_constraint(0, &a, 2, 2).is_err());
    }

    #[test]
    fn system_summaries_are_recomputed() {
        let sys = circle("x1");
        assert_eq!((sys.n(), sys.l(), sys.m(), sys.d(), sys.d0()), (2, 1, 1, 2, 1));
        assert_eq!(sys.height(), &BigInt::one());
        let odd = SemialgSystem::new(2, vec![p2("x1^3 - x2")], vec![], p2("x1"), None).unwrap();
        assert_eq!(odd.d(), 4);
        assert_eq!(
            SemialgSystem::new(2, vec![p2("x1")], vec![], p2("x1"), Some(3)),
            Err(Error::OddDegree(3))
        );
        assert!(SemialgSystem::new(2, vec![], vec![], p2("x1"), None).is_err());
        assert!(SemialgSystem::new(1, vec![poly("x1", &["x1"])], vec![], poly("x1", &["x1"]), None).is_err());
    }

    #[test]
    fn perturbed_constraint_examples() {
        let sys = circle("x1");
        let a = build_matrix_a(2, 1);
        let fp = perturbed_constraint(&sys, &a, 1, Sign::Plus).unwrap();
        let names = ["t", "x1", "x2"];
        assert_eq!(fp.poly, poly("x1^2 + x2^2 - 1 + 3*t*x1^2 + t*x2^2 + 2*t", &names));
        let fm = perturbed_constraint(&sys, &a, 1, Sign::Minus).unwrap();
        // F+ - F- = 2 t f̃
        assert_eq!(&fp.poly - &fm.poly, poly("6*t*x1^2 + 2*t*x2^2 + 4*t", &names));
        // t = 0 recovers f
        let at0 = fp.specialize(&[("t", BigInt::zero())]).unwrap();
        assert_eq!(at0.poly, p2("x1^2 + x2^2 - 1"));
        let fam = perturbed_family(&sys, &a).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam[2].0, FamilyMember::Objective);
    }

    #[test]
    fn homogenized_constraint_examples() {
        let sys = circle("x1");
        let a = build_matrix_a(2, 1);
        let f = homogenized_constraint(&sys, &a, 1, Sign::Plus).unwrap();
        let names = ["t0", "t", "x0", "x1", "x2"];
        let expected = poly(
            "t0*x1^2 + t0*x2^2 - t0*x0^2 + 2*t*x0^2 + 3*t*x1^2 + t*x2^2",
            &names,
        );
        assert_eq!(f.poly, expected);
        let pure_f = f.specialize(&[("t0", BigInt::one()), ("t", BigInt::zero())]).unwrap();
        assert_eq!(pure_f.poly, poly("x1^2 + x2^2 - x0^2", &["x0", "x1", "x2"]));
        let pure_sum = f.specialize(&[("t0", BigInt::zero()), ("t", BigInt::one())]).unwrap();
        assert_eq!(pure_sum.poly, poly("2*x0^2 + 3*x1^2 + x2^2", &["x0", "x1", "x2"]));
        assert!(f.poly.is_homogeneous_in(&[0, 1], 1));
        assert!(f.poly.is_homogeneous_in(&[2, 3, 4], 2));
    }

    #[test]
    fn lagrange_family_examples() {
        let sys = circle("x1");
        let a = build_matrix_a(2, 1);
        let sel = SubsetSelector::new(vec![1], vec![Sign::Plus]).unwrap();
        let g = lagrange_family(&sys, &a, &sel).unwrap();
        assert_eq!(g.len(), 2);
        let names = ["t0", "t", "x0", "x1", "x2", "l0", "l1"];
        // a01 = 2, a11 = 3; a02 = 3, a12 = 1
        let g1 = poly("t0*l0*x0 - 2*t0*l1*x1 + 4*t*x1*l0 - 6*t*x1*l1", &names);
        assert_eq!(g[0].poly, g1);
        let g2 = poly("-2*t0*l1*x2 + 6*t*x2*l0 - 2*t*x2*l1", &names);
        assert_eq!(g[1].poly, g2);
        for gj in &g {
            assert!(gj.poly.is_homogeneous_in(&[0, 1], 1));
            assert!(gj.poly.is_homogeneous_in(&[2, 3, 4], 1));
            assert!(gj.poly.is_homogeneous_in(&[5, 6], 1));
        }
        let bad = SubsetSelector::new(vec![1, 2, 3], vec![Sign::Plus; 3]).unwrap();
        assert!(lagrange_family(&sys, &a, &bad).is_err());
    }

    #[test]
    fn u_polynomial_examples() {
        let p = u_polynomial(&circle("x1")).unwrap();
        assert_eq!(p.poly, poly("U*x0 - x1", &["U", "x0", "x1", "x2"]));
        let p = u_polynomial(&circle("x1^2 + x2^2")).unwrap();
        assert_eq!(p.poly, poly("U*x0^2 - x1^2 - x2^2", &["U", "x0", "x1", "x2"]));
    }

    #[test]
    fn compactify_adds_ball_and_keeps_bound_parameters() {
        let sys = circle("x1");
        let c = compactify(&sys, &rat(1, 1)).unwrap();
        assert_eq!(c.inequalities().last().unwrap(), &p2("4 - x1^2 - x2^2"));
        assert_eq!((c.bound_m(), c.bound_d()), (1, 2));
        assert_eq!(c.bound_height(), &BigInt::one());
        assert_eq!(c.m(), 2);
        assert!(!c.contains(&RationalPoint::from_integers(&[3, 0])).unwrap());
        let half = compactify(&sys, &rat(1, 2)).unwrap();
        assert_eq!(half.inequalities().last().unwrap(), &p2("9 - 4*x1^2 - 4*x2^2"));
        assert!(compactify(&sys, &rat(-1, 1)).is_err());
    }

    #[test]
    fn membership_examples() {
        let sys = circle("x1");
        let a = build_matrix_a(2, 1);
        let on = RationalPoint::from_integers(&[1, 0]);
        let off = RationalPoint::from_integers(&[2, 0]);
        let zero = BigRational::zero();
        assert!(membership_t_t(&sys, &a, &zero, &on).unwrap());
        assert!(!membership_t_t(&sys, &a, &zero, &off).unwrap());
        assert!(membership_t_t(&sys, &a, &rat(7, 3), &on).unwrap());
        assert!(membership_t_t(&sys, &a, &rat(-1, 3), &on).is_err());
    }

    #[test]
    fn selector_enumeration_counts() {
        let sys = circle("x1");
        let sels = SubsetSelector::enumerate(&sys);
        assert_eq!(sels.len(), 3);
        let two = SemialgSystem::new(2, vec![p2("x1^2 + x2^2 - 1")], vec![p2("x1")], p2("x2"), None).unwrap();
        // ∅; {1}±; {2}+; {1,2} with σ1 ∈ {±}
        assert_eq!(SubsetSelector::enumerate(&two).len(), 6);
        let bad = SubsetSelector::new(vec![2], vec![Sign::Minus]).unwrap();
        assert!(bad.validate(&two).is_err());
    }
}
