//! Independent numeric ground truth at desk scale.
//!
//! * [`reference_minimum`]: branch and bound over the grid-connected region
//!   of a seed, with interval lower bounds (a Lagrangian mean-value form once
//!   multipliers are known) and polished, certified witnesses.
//! * [`enumerate_kkt`]: Lagrange critical points per active set.
//! * [`separation_oracle`]: the same search on the product of two components
//!   with objective `Σ (x_i - y_i)^2`.
//! * [`example_family`]: the two-point family whose separation is `2 H^{-d^{n-1}/2}`.
//!
//! Bounds are rigorous up to the designation of the component: boxes are
//! discarded only when interval arithmetic proves them infeasible or worse
//! than a certified witness.

mod fpoly;
mod local;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bounds::PowerExpr;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::perturb::{SemialgSystem, SubsetSelector};
use crate::polycore::{default_names, parse_polynomial, IntPolynomial, RationalPoint};
use crate::univariate::simplest_rational_in;

use fpoly::FPoly;
use local::Compiled;

/// A component designated by a feasible seed inside a bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSpec {
    pub seed: RationalPoint,
    pub bbox: Vec<(BigRational, BigRational)>,
    /// Grid cells per axis for the initial scan.
    pub resolution: u32,
}

impl ComponentSpec {
    pub fn new(seed: RationalPoint, bbox: Vec<(BigRational, BigRational)>, resolution: u32) -> Result<Self> {
        if seed.dim() != bbox.len() {
            return Err(Error::DimensionMismatch {
                expected: bbox.len(),
                found: seed.dim(),
            });
        }
        if resolution == 0 {
            return Err(Error::InvalidParameter("resolution must be positive".into()));
        }
        for (j, (lo, hi)) in bbox.iter().enumerate() {
            if lo >= hi {
                return Err(Error::InvalidParameter(format!("empty box side {}", j + 1)));
            }
            let s = &seed.coords[j];
            if s < lo || s > hi {
                return Err(Error::Oracle(format!("seed coordinate {} lies outside the box", j + 1)));
            }
        }
        Ok(ComponentSpec { seed, bbox, resolution })
    }

    /// Box `[-r, r]^n` around a seed.
    pub fn centered(seed: RationalPoint, radius: &BigRational, resolution: u32) -> Result<Self> {
        let n = seed.dim();
        ComponentSpec::new(seed, vec![(-radius.clone(), radius.clone()); n], resolution)
    }

    pub fn dim(&self) -> usize {
        self.bbox.len()
    }
}

/// How the upper end of an enclosure is justified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WitnessStatus {
    /// The witness satisfies every constraint exactly.
    Exact,
    /// An interval-Newton box around the witness contains a feasible point;
    /// `hi` bounds the objective over that box.
    IntervalNewton,
    /// Constraint residuals at the witness are at most `2^-40`.
    Tolerance,
}

impl fmt::Display for WitnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessStatus::Exact => "exact",
            WitnessStatus::IntervalNewton => "interval-newton",
            WitnessStatus::Tolerance => "tolerance",
        })
    }
}

/// `[lo, hi]` around a minimum, with a witness whose value lies in it.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
    pub witness: RationalPoint,
    pub status: WitnessStatus,
}

impl Enclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] ({})", self.lo, self.hi, self.status)
    }
}

/// Search limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Largest number of live boxes (and of initial grid cells).
    pub max_boxes: usize,
    pub max_rounds: usize,
    /// Starting points per axis for critical-point enumeration.
    pub kkt_samples: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_boxes: 400_000,
            max_rounds: 600,
            kkt_samples: 9,
        }
    }
}

// ---------------------------------------------------------------------------
// problems and grid regions

struct Problem {
    n: usize,
    eqs: Vec<IntPolynomial>,
    ineqs: Vec<IntPolynomial>,
    objective: IntPolynomial,
    c: Compiled,
}

impl Problem {
    fn new(n: usize, eqs: Vec<IntPolynomial>, ineqs: Vec<IntPolynomial>, objective: IntPolynomial) -> Self {
        let c = Compiled::new(n, &objective, &eqs, &ineqs);
        Problem {
            n,
            eqs,
            ineqs,
            objective,
            c,
        }
    }

    fn from_system(sys: &SemialgSystem) -> Self {
        Problem::new(
            sys.n(),
            sys.equalities().to_vec(),
            sys.inequalities().to_vec(),
            sys.objective().clone(),
        )
    }

    fn feasible_exact(&self, pt: &RationalPoint) -> Result<bool> {
        for f in &self.eqs {
            if !f.evaluate(pt)?.is_zero() {
                return Ok(false);
            }
        }
        for f in &self.ineqs {
            if f.evaluate(pt)?.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Residuals within `tol` in exact arithmetic.
    fn feasible_within(&self, pt: &RationalPoint, tol: &BigRational) -> Result<bool> {
        for f in &self.eqs {
            if &f.evaluate(pt)?.abs() > tol {
                return Ok(false);
            }
        }
        for f in &self.ineqs {
            if f.evaluate(pt)? < -tol.clone() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `false` only when the box provably contains no feasible point.
    fn box_may_be_feasible(&self, b: &[Interval]) -> bool {
        self.c.cons.iter().all(|c| {
            let v = c.p.enclose(&c.grad, b);
            if c.equality {
                v.contains_zero()
            } else {
                v.hi() >= 0.0
            }
        })
    }
}

fn f64_down(x: &BigRational) -> f64 {
    let iv = Interval::from_rational(x);
    iv.lo()
}

fn f64_up(x: &BigRational) -> f64 {
    Interval::from_rational(x).hi()
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Grid cells face-connected to the seed's cell through cells that may be feasible.
fn grid_region(prob: &Problem, comp: &ComponentSpec, max_cells: usize) -> Result<Vec<Vec<Interval>>> {
    let n = comp.dim();
    if n != prob.n {
        return Err(Error::DimensionMismatch {
            expected: prob.n,
            found: n,
        });
    }
    if !prob.feasible_exact(&comp.seed)? {
        return Err(Error::Oracle("seed violates the constraints".into()));
    }
    let r = comp.resolution as usize;
    let total = (r as u128).pow(n as u32);
    if total > max_cells as u128 {
        return Err(Error::Budget {
            what: "initial grid cells".into(),
            size: total,
            limit: max_cells as u128,
        });
    }
    let edges: Vec<Vec<f64>> = comp
        .bbox
        .iter()
        .map(|(lo, hi)| {
            let step = (hi - lo) / BigRational::from_integer(BigInt::from(r));
            (0..=r)
                .map(|k| {
                    let e = lo + &step * BigRational::from_integer(BigInt::from(k));
                    if k == 0 {
                        f64_down(&e)
                    } else if k == r {
                        f64_up(&e)
                    } else {
                        e.to_f64().unwrap_or(f64::NAN)
                    }
                })
                .collect()
        })
        .collect();
    let cell_box = |idx: &[usize]| -> Vec<Interval> {
        idx.iter()
            .enumerate()
            .map(|(j, &k)| Interval::new(edges[j][k], edges[j][k + 1]))
            .collect()
    };
    let unflatten = |mut flat: usize| -> Vec<usize> {
        let mut idx = vec![0; n];
        for slot in idx.iter_mut().rev() {
            *slot = flat % r;
            flat /= r;
        }
        idx
    };
    let flatten = |idx: &[usize]| idx.iter().fold(0usize, |acc, &k| acc * r + k);
    let feasible: Vec<bool> = (0..total as usize)
        .into_par_iter()
        .map(|f| prob.box_may_be_feasible(&cell_box(&unflatten(f))))
        .collect();
    // cells containing the seed (several when it sits on cell faces)
    let per_axis: Vec<Vec<usize>> = (0..n)
        .map(|j| {
            let s = &comp.seed.coords[j];
            (0..r)
                .filter(|&k| &exact(edges[j][k]) <= s && s <= &exact(edges[j][k + 1]))
                .collect()
        })
        .collect();
    let mut starts = vec![Vec::new()];
    for axis in &per_axis {
        starts = starts
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                axis.iter().map(move |&k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for s in starts {
        let f = flatten(&s);
        if feasible[f] && seen.insert(f) {
            queue.push_back(s);
        }
    }
    if queue.is_empty() {
        return Err(Error::Oracle("no feasible cell contains the seed".into()));
    }
    while let Some(idx) = queue.pop_front() {
        for j in 0..n {
            for step in [-1i64, 1] {
                let k = idx[j] as i64 + step;
                if k < 0 || k >= r as i64 {
                    continue;
                }
                let mut nb = idx.clone();
                nb[j] = k as usize;
                let f = flatten(&nb);
                if feasible[f] && seen.insert(f) {
                    queue.push_back(nb);
                }
            }
        }
    }
    Ok(seen.into_iter().map(|f| cell_box(&unflatten(f))).collect())
}

fn box_contains(b: &[Interval], x: &[f64]) -> bool {
    b.iter().zip(x).all(|(iv, &v)| iv.contains(v))
}

// ---------------------------------------------------------------------------
// branch and bound

#[derive(Clone, Debug)]
struct Incumbent {
    witness: RationalPoint,
    x: Vec<f64>,
    hi: BigRational,
    hi_f: f64,
    status: WitnessStatus,
}

impl Incumbent {
    fn better_than(&self, other: &Incumbent) -> bool {
        let certified = |s: WitnessStatus| s != WitnessStatus::Tolerance;
        match (certified(self.status), certified(other.status)) {
            (true, false) => true,
            (false, true) => false,
            _ => self.hi < other.hi,
        }
    }
}

fn snap(x: &[f64], relative: bool) -> RationalPoint {
    RationalPoint::new(
        x.iter()
            .map(|&v| {
                if v.abs() < 1e-300 {
                    return BigRational::zero();
                }
                let c = exact(v);
                let delta = if relative {
                    exact(v.abs() * 2f64.powi(-30))
                } else {
                    exact(2f64.powi(-30))
                };
                simplest_rational_in(&(&c - &delta), &(&c + &delta))
            })
            .collect(),
    )
}

/// Certifies an upper bound at a near-feasible point.
fn certify_point(prob: &Problem, x: &[f64]) -> Result<Option<Incumbent>> {
    let make = |pt: RationalPoint, hi: BigRational, status| -> Incumbent {
        let hi_f = f64_up(&hi);
        Incumbent {
            x: pt.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(),
            witness: pt,
            hi,
            hi_f,
            status,
        }
    };
    let mut best: Option<Incumbent> = None;
    let dyadic = RationalPoint::new(x.iter().map(|&v| exact(v)).collect());
    for pt in [snap(x, false), snap(x, true), dyadic.clone()] {
        if prob.feasible_exact(&pt)? {
            let v = prob.objective.evaluate(&pt)?;
            let inc = make(pt, v, WitnessStatus::Exact);
            if best.as_ref().map_or(true, |b| inc.better_than(b)) {
                best = Some(inc);
            }
        }
    }
    if best.is_some() {
        return Ok(best);
    }
    if let Some(b) = prob.c.krawczyk_box(x) {
        let ineq_ok = prob
            .c
            .cons
            .iter()
            .filter(|c| !c.equality)
            .all(|c| c.p.eval_box(&b).lo() >= 0.0);
        if ineq_ok {
            let gb = prob.c.g.eval_box(&b);
            if gb.hi().is_finite() {
                let v = prob.objective.evaluate(&dyadic)?;
                let hi = exact(gb.hi()).max(v);
                return Ok(Some(make(dyadic, hi, WitnessStatus::IntervalNewton)));
            }
        }
    }
    let tol = exact(2f64.powi(-40));
    if prob.feasible_within(&dyadic, &tol)? {
        let v = prob.objective.evaluate(&dyadic)?;
        return Ok(Some(make(dyadic, v, WitnessStatus::Tolerance)));
    }
    Ok(None)
}

/// Projection onto the constraints, then Newton on the Lagrange system of
/// the nearly active constraints.
fn polish(prob: &Problem, start: &[f64]) -> Option<Vec<f64>> {
    let x = prob.c.project(start, 1e-15)?;
    let active: Vec<usize> = (0..prob.c.cons.len())
        .filter(|&i| prob.c.cons[i].equality || prob.c.cons[i].p.eval(&x).abs() < 1e-9)
        .collect();
    if active.len() <= prob.n {
        if let Some((y, _)) = prob.c.kkt_newton(&active, &x, 60) {
            if let Some(y) = prob.c.project(&y, 1e-15) {
                let dist = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                if prob.c.g.eval(&y) <= prob.c.g.eval(&x) + 1e-15 && dist < 1e3 {
                    return Some(y);
                }
            }
        }
    }
    Some(x)
}

struct Lagrangian {
    l: FPoly,
    grad: Vec<FPoly>,
}

fn lagrangian_at(prob: &Problem, x: &[f64]) -> Option<Lagrangian> {
    let active: Vec<usize> = (0..prob.c.cons.len())
        .filter(|&i| prob.c.cons[i].equality || prob.c.cons[i].p.eval(x).abs() < 1e-9)
        .collect();
    if active.is_empty() {
        return None;
    }
    let lam = prob.c.multipliers(&active, x);
    let mut fs = Vec::new();
    let mut ls = Vec::new();
    for (k, &i) in active.iter().enumerate() {
        let c = &prob.c.cons[i];
        // g - λ f <= g on the feasible set needs λ >= 0 for f >= 0
        let l = if c.equality { lam[k] } else { lam[k].max(0.0) };
        fs.push(&c.p);
        ls.push(l);
    }
    let l = FPoly::lagrangian(&prob.c.g, &fs, &ls);
    let grad = l.gradient();
    Some(Lagrangian { l, grad })
}

fn lower_bound(prob: &Problem, b: &[Interval], lag: Option<&Lagrangian>) -> Option<f64> {
    if !prob.box_may_be_feasible(b) {
        return None;
    }
    let mut lb = prob.c.g.enclose(&prob.c.g_grad, b).lo();
    if let Some(lag) = lag {
        lb = lb.max(lag.l.enclose(&lag.grad, b).lo());
    }
    Some(if lb.is_nan() { f64::NEG_INFINITY } else { lb })
}

fn bisect(b: &[Interval]) -> [Vec<Interval>; 2] {
    let (j, _) = b
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (j, iv)| if iv.hi() - iv.lo() > acc.1 { (j, iv.hi() - iv.lo()) } else { acc });
    let m = b[j].mid();
    let mut left = b.to_vec();
    let mut right = b.to_vec();
    left[j] = Interval::new(b[j].lo(), m);
    right[j] = Interval::new(m, b[j].hi());
    [left, right]
}

struct SearchGoal<'a> {
    /// Allowed `hi - lb` before a box stops being split, given `hi`.
    gap: &'a (dyn Fn(f64) -> f64 + Sync),
    done: &'a dyn Fn(&BigRational, &BigRational) -> bool,
    /// Whether a polished point belongs to the designated component.
    admissible: &'a (dyn Fn(&[f64]) -> bool + Sync),
    /// A known lower bound on the objective (e.g. 0 for squared distances).
    floor: Option<f64>,
}

const CANDIDATES_PER_ROUND: usize = 4;

fn branch_and_bound(
    prob: &Problem,
    region: Vec<Vec<Interval>>,
    goal: &SearchGoal<'_>,
    opts: &OracleOptions,
) -> Result<Enclosure> {
    let mut boxes = region;
    let mut best: Option<Incumbent> = None;
    let mut lag: Option<Lagrangian> = None;
    let floor = goal.floor.unwrap_or(f64::NEG_INFINITY);
    for _round in 0..opts.max_rounds {
        if boxes.len() > opts.max_boxes {
            return Err(Error::Budget {
                what: "oracle boxes".into(),
                size: boxes.len() as u128,
                limit: opts.max_boxes as u128,
            });
        }
        // rank boxes, polish the most promising centres
        let ranked: Vec<Option<f64>> = boxes.par_iter().map(|b| lower_bound(prob, b, lag.as_ref())).collect();
        let mut live: Vec<(Vec<Interval>, f64)> = boxes
            .into_iter()
            .zip(ranked)
            .filter_map(|(b, lb)| lb.map(|lb| (b, lb.max(floor))))
            .collect();
        if live.is_empty() {
            return Err(Error::Oracle("no feasible box left in the component".into()));
        }
        let mut order: Vec<usize> = (0..live.len()).collect();
        order.sort_by(|&a, &b| live[a].1.total_cmp(&live[b].1).then(a.cmp(&b)));
        let mut starts: Vec<Vec<f64>> = order
            .iter()
            .take(CANDIDATES_PER_ROUND)
            .map(|&i| live[i].0.iter().map(Interval::mid).collect())
            .collect();
        if let Some(b) = &best {
            starts.push(b.x.clone());
        }
        let found: Vec<Option<Incumbent>> = starts
            .par_iter()
            .map(|s| match polish(prob, s) {
                Some(x) if (goal.admissible)(&x) => certify_point(prob, &x).ok().flatten(),
                _ => None,
            })
            .collect();
        for inc in found.into_iter().flatten() {
            if best.as_ref().map_or(true, |b| inc.better_than(b)) {
                best = Some(inc);
            }
        }
        if let Some(b) = &best {
            lag = lagrangian_at(prob, &b.x);
            let lbs: Vec<Option<f64>> = live
                .par_iter()
                .map(|(bx, _)| lower_bound(prob, bx, lag.as_ref()))
                .collect();
            live = live
                .into_iter()
                .zip(lbs)
                .filter_map(|((bx, _), lb)| lb.map(|lb| (bx, lb.max(floor))))
                .collect();
            // boxes above a certified value cannot hold the minimum
            if b.status != WitnessStatus::Tolerance {
                live.retain(|(_, lb)| *lb <= b.hi_f);
            }
        }
        let lb_min = live.iter().map(|(_, lb)| *lb).fold(f64::INFINITY, f64::min);
        if let Some(b) = &best {
            if lb_min.is_finite() {
                let lo = exact(lb_min).min(b.hi.clone());
                if (goal.done)(&lo, &b.hi) {
                    return Ok(Enclosure {
                        lo,
                        hi: b.hi.clone(),
                        witness: b.witness.clone(),
                        status: b.status,
                    });
                }
            }
        }
        let threshold = best.as_ref().map(|b| b.hi_f - (goal.gap)(b.hi_f));
        boxes = Vec::with_capacity(live.len() * 2);
        for (b, lb) in live {
            match threshold {
                Some(t) if lb >= t => boxes.push(b),
                _ => boxes.extend(bisect(&b)),
            }
        }
    }
    Err(Error::Budget {
        what: "oracle refinement rounds".into(),
        size: opts.max_rounds as u128 + 1,
        limit: opts.max_rounds as u128,
    })
}

fn width_goal(target_width: &BigRational) -> Result<f64> {
    if !target_width.is_positive() {
        return Err(Error::InvalidParameter("target width must be positive".into()));
    }
    Ok(f64_down(target_width))
}

/// Encloses the minimum of the objective over the grid-connected feasible
/// region of `comp.seed`, to width at most `target_width`.
pub fn reference_minimum(sys: &SemialgSystem, comp: &ComponentSpec, target_width: &BigRational) -> Result<Enclosure> {
    reference_minimum_with(sys, comp, target_width, &OracleOptions::default())
}

pub fn reference_minimum_with(
    sys: &SemialgSystem,
    comp: &ComponentSpec,
    target_width: &BigRational,
    opts: &OracleOptions,
) -> Result<Enclosure> {
    let tw = width_goal(target_width)?;
    let prob = Problem::from_system(sys);
    let region = grid_region(&prob, comp, opts.max_boxes)?;
    let cells = region.clone();
    let admissible = move |x: &[f64]| cells.iter().any(|b| box_contains(b, x));
    let gap = move |_: f64| tw / 2.0;
    let done = |lo: &BigRational, hi: &BigRational| &(hi - lo) <= target_width;
    let goal = SearchGoal {
        gap: &gap,
        done: &done,
        admissible: &admissible,
        floor: None,
    };
    branch_and_bound(&prob, region, &goal, opts)
}

// ---------------------------------------------------------------------------
// critical points

/// An approximate critical point of `g` on `{f_i = 0, i ∈ S}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KktPoint {
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    pub value: f64,
    /// All constraints hold to `1e-9`.
    pub feasible: bool,
    pub in_box: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KktFamily {
    pub selector: SubsetSelector,
    pub points: Vec<KktPoint>,
}

const KKT_MAX_POINTS: usize = 64;

/// Critical points per admissible `(S, σ)`: rank deficiency of `[∇g; ∇f_i, i ∈ S]`
/// with `f_i = 0` on `S`, found from a sampling grid over the component box
/// by Newton on the Lagrange system with `λ_0 = 1`.
pub fn enumerate_kkt(sys: &SemialgSystem, comp: &ComponentSpec) -> Result<Vec<KktFamily>> {
    enumerate_kkt_with(sys, comp, &OracleOptions::default())
}

pub fn enumerate_kkt_with(sys: &SemialgSystem, comp: &ComponentSpec, opts: &OracleOptions) -> Result<Vec<KktFamily>> {
    let n = sys.n();
    if comp.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: comp.dim(),
        });
    }
    let k = opts.kkt_samples.max(1);
    let total = (k as u128).pow(n as u32);
    if total > opts.max_boxes as u128 {
        return Err(Error::Budget {
            what: "critical point starting grid".into(),
            size: total,
            limit: opts.max_boxes as u128,
        });
    }
    let prob = Problem::from_system(sys);
    let bounds: Vec<(f64, f64)> = comp.bbox.iter().map(|(a, b)| (f64_down(a), f64_up(b))).collect();
    let starts: Vec<Vec<f64>> = (0..total as usize)
        .map(|mut f| {
            let mut x = vec![0.0; n];
            for j in (0..n).rev() {
                let (lo, hi) = bounds[j];
                x[j] = lo + (hi - lo) * ((f % k) as f64 + 0.5) / k as f64;
                f /= k;
            }
            x
        })
        .collect();
    let mut cache: Vec<(Vec<usize>, Vec<KktPoint>)> = Vec::new();
    let mut out = Vec::new();
    for sel in SubsetSelector::enumerate(sys) {
        // compiled constraints share the 1-based numbering, equalities first
        let s_idx: Vec<usize> = sel.subset().iter().map(|&i| i - 1).collect();
        if let Some((_, pts)) = cache.iter().find(|(s, _)| *s == s_idx) {
            out.push(KktFamily {
                selector: sel,
                points: pts.clone(),
            });
            continue;
        }
        let raw: Vec<Option<(Vec<f64>, Vec<f64>)>> = starts
            .par_iter()
            .map(|x0| prob.c.kkt_newton(&s_idx, x0, 80))
            .collect();
        let mut pts: Vec<KktPoint> = Vec::new();
        for (x, lambda) in raw.into_iter().flatten() {
            if x.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if pts
                .iter()
                .any(|p| p.x.iter().zip(&x).all(|(a, b)| (a - b).abs() <= 1e-7 * scale))
            {
                continue;
            }
            if pts.len() >= KKT_MAX_POINTS {
                break;
            }
            let in_box = x
                .iter()
                .zip(&bounds)
                .all(|(v, (lo, hi))| *lo - 1e-9 <= *v && *v <= *hi + 1e-9);
            pts.push(KktPoint {
                value: prob.c.g.eval(&x),
                feasible: prob.c.violation(&x) <= 1e-9,
                in_box,
                x,
                lambda,
            });
        }
        pts.sort_by(|a, b| a.x.iter().zip(&b.x).map(|(p, q)| p.total_cmp(q)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
        cache.push((s_idx, pts.clone()));
        out.push(KktFamily {
            selector: sel,
            points: pts,
        });
    }
    Ok(out)
}

/// Smallest value over feasible critical points inside the box.
pub fn best_feasible_kkt(families: &[KktFamily]) -> Option<f64> {
    families
        .iter()
        .flat_map(|f| f.points.iter())
        .filter(|p| p.feasible && p.in_box)
        .map(|p| p.value)
        .min_by(f64::total_cmp)
}

// ---------------------------------------------------------------------------
// separation

/// `⌊√x⌋` and `⌈√x⌉` on the grid `2^-bits`, or `√x` twice when it is rational.
pub fn sqrt_bounds(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    if !x.is_positive() {
        return (BigRational::zero(), BigRational::zero());
    }
    let (num, den) = (x.numer().magnitude(), x.denom().magnitude());
    let (rn, rd) = (num.sqrt(), den.sqrt());
    if &(&rn * &rn) == num && &(&rd * &rd) == den {
        let r = BigRational::new(rn.into(), rd.into());
        return (r.clone(), r);
    }
    let scaled: BigUint = (num << (2 * bits as usize)) / den;
    let s = scaled.sqrt();
    let unit = BigInt::one() << bits as usize;
    let lo = BigRational::new(BigInt::from(s.clone()), unit.clone());
    let hi = BigRational::new(BigInt::from(s + 1u32), unit);
    (lo, hi)
}

fn bits_for_width(tw: &BigRational) -> u32 {
    // 2^-bits <= tw / 8
    let q = tw.recip() * BigRational::from_integer(8.into());
    let c = q.ceil().to_integer();
    c.bits() as u32 + 1
}

/// Encloses the distance between the designated components of two systems
/// on the same variables, via the minimum of `Σ (x_i - y_i)^2` over their product.
/// The witness lists both points, `x` first.
pub fn separation_oracle(
    sys_a: &SemialgSystem,
    sys_b: &SemialgSystem,
    comp_a: &ComponentSpec,
    comp_b: &ComponentSpec,
    target_width: &BigRational,
) -> Result<Enclosure> {
    separation_oracle_with(sys_a, sys_b, comp_a, comp_b, target_width, &OracleOptions::default())
}

pub fn separation_oracle_with(
    sys_a: &SemialgSystem,
    sys_b: &SemialgSystem,
    comp_a: &ComponentSpec,
    comp_b: &ComponentSpec,
    target_width: &BigRational,
    opts: &OracleOptions,
) -> Result<Enclosure> {
    let n = sys_a.n();
    if sys_b.n() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: sys_b.n(),
        });
    }
    let tw = width_goal(target_width)?;
    let bits = bits_for_width(target_width);
    let pa = Problem::from_system(sys_a);
    let pb = Problem::from_system(sys_b);
    let ra = grid_region(&pa, comp_a, opts.max_boxes)?;
    let rb = grid_region(&pb, comp_b, opts.max_boxes)?;
    let size = ra.len() as u128 * rb.len() as u128;
    if size > opts.max_boxes as u128 {
        return Err(Error::Budget {
            what: "product region cells".into(),
            size,
            limit: opts.max_boxes as u128,
        });
    }
    let first: Vec<usize> = (0..n).collect();
    let second: Vec<usize> = (n..2 * n).collect();
    let lift = |ps: &[IntPolynomial], map: &[usize]| -> Vec<IntPolynomial> {
        ps.iter().map(|p| p.embed(2 * n, map)).collect()
    };
    let mut eqs = lift(sys_a.equalities(), &first);
    eqs.extend(lift(sys_b.equalities(), &second));
    let mut ineqs = lift(sys_a.inequalities(), &first);
    ineqs.extend(lift(sys_b.inequalities(), &second));
    let mut dist = IntPolynomial::zero(2 * n);
    for j in 0..n {
        let diff = &IntPolynomial::var(2 * n, j) - &IntPolynomial::var(2 * n, n + j);
        dist = &dist + &(&diff * &diff);
    }
    let prob = Problem::new(2 * n, eqs, ineqs, dist);
    let mut region = Vec::with_capacity(size as usize);
    for a in &ra {
        for b in &rb {
            let mut bx = a.clone();
            bx.extend(b.iter().copied());
            region.push(bx);
        }
    }
    let admissible = move |x: &[f64]| {
        ra.iter().any(|b| box_contains(b, &x[..n])) && rb.iter().any(|b| box_contains(b, &x[n..]))
    };
    let gap = move |hi: f64| (tw * hi.max(0.0).sqrt()).max(tw * tw) / 2.0;
    let done = |lo: &BigRational, hi: &BigRational| {
        let lo = lo.clone().max(BigRational::zero());
        &(sqrt_bounds(hi, bits).1 - sqrt_bounds(&lo, bits).0) <= target_width
    };
    let goal = SearchGoal {
        gap: &gap,
        done: &done,
        admissible: &admissible,
        floor: Some(0.0),
    };
    let sq = branch_and_bound(&prob, region, &goal, opts)?;
    let lo = sq.lo.clone().max(BigRational::zero());
    Ok(Enclosure {
        lo: sqrt_bounds(&lo, bits).0,
        hi: sqrt_bounds(&sq.hi, bits).1,
        witness: sq.witness,
        status: sq.status,
    })
}

// ---------------------------------------------------------------------------
// the two-point family

fn check_family_params(n: usize, d: u32, h: u64) -> Result<()> {
    if n < 2 || d < 2 || d % 2 == 1 || h < 2 {
        return Err(Error::InvalidParameter(format!(
            "the two-point family needs n >= 2, even d >= 2 and H >= 2, got n = {n}, d = {d}, H = {h}"
        )));
    }
    Ok(())
}

/// Polynomials `H x1 - 1`, `x_i - x_{i-1}^d` (`1 < i < n`) and `x_n^2 - x_{n-1}^d`.
pub fn example_polynomials(n: usize, d: u32, h: u64) -> Result<Vec<IntPolynomial>> {
    check_family_params(n, d, h)?;
    let names = default_names(n);
    let mut out = vec![parse_polynomial(&format!("{h}*x1 - 1"), &names)?];
    for i in 2..n {
        out.push(parse_polynomial(&format!("x{i} - x{}^{d}", i - 1), &names)?);
    }
    out.push(parse_polynomial(&format!("x{n}^2 - x{}^{d}", n - 1), &names)?);
    Ok(out)
}

/// The family as a system (objective `x_n`) and the exact distance
/// `2 H^{-d^{n-1}/2}` between its two points.
pub fn example_family(n: usize, d: u32, h: u64) -> Result<(SemialgSystem, PowerExpr)> {
    let eqs = example_polynomials(n, d, h)?;
    let g = IntPolynomial::var(n, n - 1);
    let sys = SemialgSystem::new(n, eqs, Vec::new(), g, None)?;
    let e: BigInt = BigInt::from(d).pow(n as u32 - 1) / 2u32;
    let dist = PowerExpr::int_power(2, 1).mul(&PowerExpr::power(
        BigUint::from(h),
        BigRational::from_integer(-e),
    ));
    Ok((sys, dist))
}

/// The two points `(1/H, ..., ±x_{n-1}^{d/2})`, positive last coordinate first.
pub fn example_points(n: usize, d: u32, h: u64) -> Result<(RationalPoint, RationalPoint)> {
    check_family_params(n, d, h)?;
    let mut x = vec![BigRational::new(BigInt::one(), BigInt::from(h))];
    for _ in 2..n {
        let prev = x.last().unwrap().clone();
        x.push(num_traits::pow(prev, d as usize));
    }
    let last = num_traits::pow(x.last().unwrap().clone(), d as usize / 2);
    let mut p = x.clone();
    p.push(last.clone());
    let mut q = x;
    q.push(-last);
    Ok((RationalPoint::new(p), RationalPoint::new(q)))
}

/// Seeds at the two points; boxes `[0, 1]^{n-1} × [0, 1]` and `[0, 1]^{n-1} × [-1, 0]`.
pub fn example_components(n: usize, d: u32, h: u64, resolution: u32) -> Result<(ComponentSpec, ComponentSpec)> {
    let (p, q) = example_points(n, d, h)?;
    let unit = (BigRational::zero(), BigRational::one());
    let mut ba = vec![unit.clone(); n];
    let mut bb = ba.clone();
    ba[n - 1] = unit;
    bb[n - 1] = (-BigRational::one(), BigRational::zero());
    Ok((
        ComponentSpec::new(p, ba, resolution)?,
        ComponentSpec::new(q, bb, resolution)?,
    ))
}

#[cfg(test)]
mod tests;
