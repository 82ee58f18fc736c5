//! End-to-end checks: certificates against the oracle minimum, and oracle
//! distances against the separation bound.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bounds::{bound_report, compare_abs_to_bound_with, separation_bound, BoundReport, PowerExpr};
use crate::elimination::{candidate_minima, CandidateSet, ResultantOptions};
use crate::error::{Error, Result};
use crate::oracle::{
    reference_minimum_with, separation_oracle_with, ComponentSpec, Enclosure, OracleOptions,
};
use crate::perturb::{build_matrix_a, SemialgSystem};
use crate::univariate::{algebraic_degree_bound, isolate_real_roots, rational_root_in, refine_root, RootInterval};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// The check does not apply to this instance (e.g. a zero minimum).
    Inapplicable,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Fail => "fail",
            VerdictStatus::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub status: VerdictStatus,
    pub detail: String,
}

impl Verdict {
    fn new(name: &str, status: VerdictStatus, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.to_string(),
            status,
            detail: detail.into(),
        }
    }
}

pub fn all_pass(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.status != VerdictStatus::Fail)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOptions {
    pub resultant: ResultantOptions,
    pub oracle: OracleOptions,
    pub target_width: BigRational,
    pub exact_bits: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            resultant: ResultantOptions::default(),
            oracle: OracleOptions::default(),
            target_width: BigRational::new(1.into(), (1u64 << 20).into()),
            exact_bits: crate::bounds::DEFAULT_EXACT_BITS,
        }
    }
}

/// A candidate root whose isolating interval meets the oracle enclosure.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchedRoot {
    pub interval: RootInterval,
    pub rational: Option<BigRational>,
    /// Certificates vanishing at the root, by selector.
    pub selectors: Vec<String>,
    /// Smallest algebraic degree bound over those certificates.
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyReport {
    pub bounds: BoundReport,
    pub candidates: CandidateSet,
    pub enclosure: Enclosure,
    pub matched: Vec<MatchedRoot>,
    pub verdicts: Vec<Verdict>,
}

const RATIONAL_LEAD_BITS: u64 = 256;

fn match_root(candidates: &CandidateSet, iv: &RootInterval) -> Result<MatchedRoot> {
    let mut selectors = Vec::new();
    let mut degree = usize::MAX;
    for c in &candidates.certificates {
        let sq = c.q.squarefree_part();
        let roots = isolate_real_roots(&sq)?;
        // roots of a factor are roots of the product, so meeting the
        // product's isolating interval means being that root
        if let Some(r) = roots.iter().find(|r| r.intersects(&iv.lo, &iv.hi) && shares_root(&sq, r, iv)) {
            selectors.push(c.selector.to_string());
            degree = degree.min(algebraic_degree_bound(&sq, r, &roots));
        }
    }
    let rational = rational_root_in(&candidates.squarefree_product, iv, RATIONAL_LEAD_BITS);
    Ok(MatchedRoot {
        interval: iv.clone(),
        rational,
        selectors,
        degree,
    })
}

fn shares_root(p: &crate::univariate::UniPoly, r: &RootInterval, iv: &RootInterval) -> bool {
    // shrink the factor's interval until it lies inside `iv` or leaves it
    let mut r = r.clone();
    for _ in 0..200 {
        if r.lo >= iv.lo && r.hi <= iv.hi {
            return true;
        }
        if !r.intersects(&iv.lo, &iv.hi) {
            return false;
        }
        let w = r.width() / BigRational::from_integer(2.into());
        r = refine_root(p, &r, &w);
    }
    false
}

/// Runs bounds, certificates and the oracle on one designated component.
pub fn certify(sys: &SemialgSystem, comp: &ComponentSpec, opts: &PipelineOptions) -> Result<CertifyReport> {
    let bounds = bound_report(sys, opts.exact_bits)?;
    let a = build_matrix_a(sys.n(), sys.m());
    let candidates = candidate_minima(sys, &a, &opts.resultant)?;
    let enclosure = reference_minimum_with(sys, comp, &opts.target_width, &opts.oracle)?;
    let mut matched = Vec::new();
    for iv in &candidates.roots {
        if !iv.intersects(&enclosure.lo, &enclosure.hi) {
            continue;
        }
        let fine = refine_root(&candidates.squarefree_product, iv, &opts.target_width);
        if fine.intersects(&enclosure.lo, &enclosure.hi) {
            matched.push(match_root(&candidates, &fine)?);
        }
    }
    let mut verdicts = Vec::new();
    let cert_list: Vec<String> = candidates.certificates.iter().map(|c| c.selector.to_string()).collect();
    verdicts.push(Verdict::new(
        "certificate ceilings",
        VerdictStatus::Pass,
        format!(
            "{} certificates {} within deg <= M1 and height <= M_S,sigma",
            cert_list.len(),
            cert_list.join(" ")
        ),
    ));
    verdicts.push(if matched.is_empty() {
        Verdict::new(
            "root meets enclosure",
            VerdictStatus::Fail,
            format!("no candidate root meets {enclosure}"),
        )
    } else {
        let m = &matched[0];
        Verdict::new(
            "root meets enclosure",
            VerdictStatus::Pass,
            format!("root in [{}, {}] from Q_{}", m.interval.lo, m.interval.hi, m.selectors.join(" Q_")),
        )
    });
    verdicts.push(magnitude_verdict(&bounds, &enclosure, &matched, opts.exact_bits, &candidates));
    verdicts.push(match matched.iter().map(|m| m.degree).min() {
        Some(deg) => {
            let ok = BigUint::from(deg) <= bounds.degree_bound;
            Verdict::new(
                "algebraic degree",
                if ok { VerdictStatus::Pass } else { VerdictStatus::Fail },
                format!("matched root degree <= {deg}, bound {}", bounds.degree_bound),
            )
        }
        None => Verdict::new("algebraic degree", VerdictStatus::Fail, "no matched root"),
    });
    Ok(CertifyReport {
        bounds,
        candidates,
        enclosure,
        matched,
        verdicts,
    })
}

fn magnitude_verdict(
    bounds: &BoundReport,
    enc: &Enclosure,
    matched: &[MatchedRoot],
    exact_bits: u64,
    candidates: &CandidateSet,
) -> Verdict {
    const NAME: &str = "magnitude bound";
    let bound = &bounds.magnitude_bound;
    let compare = |v: &BigRational, source: &str| -> Verdict {
        match compare_abs_to_bound_with(v, bound, exact_bits) {
            Ok((Ordering::Less, _)) => Verdict::new(NAME, VerdictStatus::Fail, format!("|{v}| < {bound} ({source})")),
            Ok((_, how)) => Verdict::new(
                NAME,
                VerdictStatus::Pass,
                format!("|min| >= {} >= {bound} ({source}, {how:?})", v.abs()),
            ),
            Err(e) => Verdict::new(NAME, VerdictStatus::Fail, e.to_string()),
        }
    };
    if !enc.contains_zero() {
        let nearer = if enc.lo.is_positive() { &enc.lo } else { &enc.hi };
        return compare(nearer, "oracle enclosure");
    }
    if matched.iter().any(|m| m.rational.as_ref().is_some_and(Zero::is_zero)) {
        return Verdict::new(NAME, VerdictStatus::Inapplicable, "inapplicable: minimum is zero");
    }
    // the enclosure straddles 0 but the certificate root does not
    for m in matched {
        let mut iv = m.interval.clone();
        for _ in 0..64 {
            if !iv.contains(&BigRational::zero()) {
                let nearer = if iv.lo.is_positive() { iv.lo.clone() } else { iv.hi.clone() };
                if !nearer.is_zero() {
                    return compare(&nearer, "certificate root");
                }
            }
            let w = iv.width() / BigRational::from_integer(2.into());
            iv = refine_root(&candidates.squarefree_product, &iv, &w);
        }
    }
    Verdict::new(NAME, VerdictStatus::Fail, format!("undecided: {enc} contains 0"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparateReport {
    pub bound: PowerExpr,
    pub enclosure: Enclosure,
    pub verdicts: Vec<Verdict>,
}

/// Separation bound parameters for two systems: common `n`, largest `d` and `H`.
pub fn separation_bound_for(a: &SemialgSystem, b: &SemialgSystem) -> Result<PowerExpr> {
    if a.n() != b.n() {
        return Err(Error::VarCountMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let d = a.bound_d().max(b.bound_d());
    let h = a.bound_height().magnitude().max(b.bound_height().magnitude()).clone();
    separation_bound(a.n(), d, &h, a.bound_m(), b.bound_m())
}

/// Oracle distance between two components against the separation bound.
pub fn separate(
    a: &SemialgSystem,
    b: &SemialgSystem,
    ca: &ComponentSpec,
    cb: &ComponentSpec,
    opts: &PipelineOptions,
) -> Result<SeparateReport> {
    let bound = separation_bound_for(a, b)?;
    let enclosure = separation_oracle_with(a, b, ca, cb, &opts.target_width, &opts.oracle)?;
    let verdict = if enclosure.lo.is_zero() {
        Verdict::new(
            "separation bound",
            VerdictStatus::Inapplicable,
            format!("inapplicable: distance enclosure {enclosure} reaches 0, the components may meet"),
        )
    } else {
        // lo^2 against bound^2
        let lo2 = &enclosure.lo * &enclosure.lo;
        match compare_abs_to_bound_with(&lo2, &bound.square(), opts.exact_bits) {
            Ok((Ordering::Less, _)) => Verdict::new(
                "separation bound",
                VerdictStatus::Fail,
                format!("distance lower end {} below {bound}", enclosure.lo),
            ),
            Ok((_, how)) => Verdict::new(
                "separation bound",
                VerdictStatus::Pass,
                format!("distance >= {} >= {bound} ({how:?})", enclosure.lo),
            ),
            Err(e) => Verdict::new("separation bound", VerdictStatus::Fail, e.to_string()),
        }
    };
    Ok(SeparateReport {
        bound,
        enclosure,
        verdicts: vec![verdict],
    })
}
