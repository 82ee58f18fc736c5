use minbound::bounds::{bound_report, BoundReport};
use minbound::elimination::{candidate_minima, certificate_for, CertificatePoly, ResultantOptions};
use minbound::oracle::{example_components, example_polynomials, Enclosure, OracleOptions};
use minbound::perturb::{build_matrix_a, SemialgSystem, Sign, SubsetSelector};
use minbound::pipeline::{certify, separate, separation_bound_for, PipelineOptions, Verdict, VerdictStatus};
use minbound::polycore::default_names;
use minbound::univariate::{isolate_real_roots, refine_root};
use minbound::{Error, Result};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::input::{serialize, InputDocument, SystemSpec};
use crate::report::{enclosure, exact, float, Report};

/// Settings shared by all commands.
#[derive(Clone, Debug)]
pub struct Settings {
    pub budget: usize,
    pub resolution: Option<u32>,
    pub target_width: BigRational,
}

impl Settings {
    pub fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            resultant: ResultantOptions {
                max_matrix_dim: self.budget,
                max_grid_points: self.budget.saturating_mul(32),
                ..ResultantOptions::default()
            },
            oracle: OracleOptions {
                max_boxes: self.budget.saturating_mul(128).max(1024),
                ..OracleOptions::default()
            },
            target_width: self.target_width.clone(),
            ..PipelineOptions::default()
        }
    }

    fn apply_resolution(&self, doc: &mut InputDocument) {
        if let Some(r) = self.resolution {
            for s in &mut doc.systems {
                if let Some(c) = &mut s.component {
                    c.resolution = r;
                }
            }
        }
    }
}

fn echo(report: &mut Report, doc: &InputDocument) {
    report.heading("input");
    for (i, s) in doc.systems.iter().enumerate() {
        let sys = &s.system;
        if doc.systems.len() > 1 {
            report.line(format!("system {}:", i + 1));
        }
        for (k, f) in sys.equalities().iter().chain(sys.inequalities()).enumerate() {
            let rel = if sys.is_equality(k + 1) { "= 0" } else { ">= 0" };
            report.line(format!("  f{} = {} {rel}", k + 1, f.to_canonical_string(&s.names)));
        }
        report.line(format!("  g = {}", sys.objective().to_canonical_string(&s.names)));
        report.line(format!(
            "  n = {}, l = {}, m = {}, d = {}, H = {}, d0 = {}, H0 = {}",
            sys.n(),
            sys.l(),
            sys.m(),
            sys.d(),
            sys.height(),
            sys.d0(),
            sys.h0()
        ));
    }
    report.set("input", Value::String(serialize(doc)));
}

fn bounds_json(b: &BoundReport) -> Value {
    let p = &b.params;
    json!({
        "n": exact(p.n), "m": exact(p.m), "l": exact(p.l), "d": exact(p.d), "d0": exact(p.d0),
        "H": exact(&p.h), "H0": exact(&p.h0), "H_tilde": exact(&p.htilde),
        "degree_bound": exact(&b.degree_bound),
        "magnitude_bound": exact(b.magnitude_bound.coprime_form()),
        "log2_magnitude_bound": enclosure(b.log2_magnitude.lo(), b.log2_magnitude.hi()),
        "per_s": b.per_subset.iter().map(|e| json!({
            "s": exact(e.s),
            "M1": exact(&e.data.m1), "M2": exact(&e.data.m2), "M3": exact(&e.data.m3),
            "N1": exact(&e.data.n1), "N2": exact(&e.data.n2), "N3": exact(&e.data.n3),
            "M_S_sigma": match &e.m_exact { Some(m) => exact(m), None => Value::Null },
            "log2_M_S_sigma": enclosure(e.log2_m.lo(), e.log2_m.hi()),
        })).collect::<Vec<_>>(),
    })
}

fn bounds_lines(report: &mut Report, b: &BoundReport) {
    let p = &b.params;
    report.line(format!("H~ = max(H, 2n + 2m) = {}", p.htilde));
    report.line(format!("degree bound 2^(n-1) d^n = {}", b.degree_bound));
    report.line(format!(
        "magnitude bound = {} (log2 ~ {:.4}, display only)",
        b.magnitude_bound.coprime_form(),
        b.log2_magnitude.mid()
    ));
    for e in &b.per_subset {
        let m = match &e.m_exact {
            Some(m) if m.bits() <= 256 => m.to_string(),
            _ => format!("2^{:.4} (display only)", e.log2_m.mid()),
        };
        report.line(format!(
            "s = {}: M1 = {}, M2 = {}, M3 = {}, N1 = {}, N2 = {}, N3 = {}, M_S,sigma = {m}",
            e.s, e.data.m1, e.data.m2, e.data.m3, e.data.n1, e.data.n2, e.data.n3
        ));
    }
}

pub fn cmd_bounds(doc: &InputDocument, settings: &Settings) -> Result<Report> {
    let opts = settings.pipeline();
    let mut report = Report::new("bounds");
    echo(&mut report, doc);
    let mut all = Vec::new();
    for (i, s) in doc.systems.iter().enumerate() {
        let b = bound_report(&s.system, opts.exact_bits)?;
        report.heading(&if doc.systems.len() > 1 { format!("bounds, system {}", i + 1) } else { "bounds".into() });
        bounds_lines(&mut report, &b);
        all.push(bounds_json(&b));
    }
    report.set("bounds", Value::Array(all));
    if let [a, b] = &doc.systems[..] {
        let sep = separation_bound_for(&a.system, &b.system)?;
        report.heading("separation");
        report.line(format!("separation bound = {} (log2 ~ {:.4}, display only)", sep.coprime_form(), sep.log2_enclosure().mid()));
        report.set("separation_bound", exact(sep.coprime_form()));
    }
    Ok(report)
}

fn cert_json(c: &CertificatePoly, roots: &[(BigRational, BigRational)]) -> Value {
    json!({
        "selector": c.selector.to_string(),
        "q": exact(&c.q),
        "degree": exact(c.q.degree().unwrap_or(0)),
        "height": exact(c.q.height()),
        "t_power": exact(c.e),
        "t_degree": exact(c.t_degree),
        "M1": exact(&c.ceilings.m1),
        "M_S_sigma": match &c.ceilings.m_exact { Some(m) => exact(m), None => Value::Null },
        "log2_M_S_sigma": enclosure(c.ceilings.log2_m.lo(), c.ceilings.log2_m.hi()),
        "real_roots": roots.iter().map(|(lo, hi)| enclosure(lo, hi)).collect::<Vec<_>>(),
    })
}

fn cert_roots(c: &CertificatePoly, width: &BigRational) -> Result<Vec<(BigRational, BigRational)>> {
    let sq = c.q.squarefree_part();
    Ok(isolate_real_roots(&sq)?
        .iter()
        .map(|r| {
            let f = refine_root(&sq, r, width);
            (f.lo, f.hi)
        })
        .collect())
}

fn cert_lines(report: &mut Report, c: &CertificatePoly, roots: &[(BigRational, BigRational)]) {
    report.line(format!("Q_{}(U) = {}", c.selector, c.q));
    report.line(format!(
        "  degree {} <= M1 = {}, height {}, t-power stripped {}",
        c.q.degree().unwrap_or(0),
        c.ceilings.m1,
        c.q.height(),
        c.e
    ));
    let rs: Vec<String> = roots
        .iter()
        .map(|(lo, hi)| if lo == hi { lo.to_string() } else { format!("[{lo}, {hi}]") })
        .collect();
    report.line(format!("  real roots: {}", if rs.is_empty() { "none".into() } else { rs.join(", ") }));
}

fn parse_selector(sys: &SemialgSystem, subset: &[usize], signs: Option<&str>) -> Result<SubsetSelector> {
    let signs: Vec<Sign> = match signs {
        None => vec![Sign::Plus; subset.len()],
        Some(text) => text
            .split(',')
            .map(|t| match t.trim() {
                "+" => Ok(Sign::Plus),
                "-" => Ok(Sign::Minus),
                other => Err(Error::InvalidSelector(format!("bad sign {other:?}"))),
            })
            .collect::<Result<_>>()?,
    };
    let sel = SubsetSelector::new(subset.to_vec(), signs)?;
    sel.validate(sys)?;
    Ok(sel)
}

pub fn cmd_qpoly(doc: &InputDocument, subset: Option<&[usize]>, signs: Option<&str>, settings: &Settings) -> Result<Report> {
    let opts = settings.pipeline();
    let spec = first_system(doc)?;
    let sys = &spec.system;
    let a = build_matrix_a(sys.n(), sys.m());
    let certs = match subset {
        Some(s) => {
            let sel = parse_selector(sys, s, signs)?;
            vec![certificate_for(sys, &a, &sel, &opts.resultant)?.1]
        }
        None => candidate_minima(sys, &a, &opts.resultant)?.certificates,
    };
    let mut report = Report::new("qpoly");
    echo(&mut report, doc);
    report.heading("certificates");
    let mut js = Vec::new();
    let mut verdicts = Vec::new();
    for c in &certs {
        let roots = cert_roots(c, &opts.target_width)?;
        cert_lines(&mut report, c, &roots);
        js.push(cert_json(c, &roots));
        verdicts.push(Verdict {
            name: format!("ceilings Q_{}", c.selector),
            status: VerdictStatus::Pass,
            detail: "deg Q <= M1 and height Q <= M_S,sigma".into(),
        });
    }
    report.set("certificates", Value::Array(js));
    report.add_verdicts(&verdicts);
    Ok(report)
}

fn first_system(doc: &InputDocument) -> Result<&SystemSpec> {
    doc.systems
        .first()
        .ok_or_else(|| Error::InvalidSystem("no system".into()))
}

fn enclosure_json(e: &Enclosure) -> Value {
    json!({
        "value": enclosure(&e.lo, &e.hi),
        "width": exact(e.width()),
        "witness": e.witness.coords.iter().map(exact).collect::<Vec<_>>(),
        "witness_status": e.status.to_string(),
    })
}

pub fn cmd_certify(doc: &InputDocument, settings: &Settings) -> Result<Report> {
    let mut doc = doc.clone();
    settings.apply_resolution(&mut doc);
    let spec = first_system(&doc)?;
    let comp = spec
        .component
        .as_ref()
        .ok_or_else(|| Error::InvalidSystem("certify needs a [component] with seed and box".into()))?;
    let opts = settings.pipeline();
    let r = certify(&spec.system, comp, &opts)?;
    let mut report = Report::new("certify");
    echo(&mut report, &doc);
    report.heading("bounds");
    bounds_lines(&mut report, &r.bounds);
    report.set("bounds", bounds_json(&r.bounds));
    report.heading("certificates");
    let mut js = Vec::new();
    for c in &r.candidates.certificates {
        let roots = cert_roots(c, &opts.target_width)?;
        cert_lines(&mut report, c, &roots);
        js.push(cert_json(c, &roots));
    }
    report.set("certificates", Value::Array(js));
    report.heading("oracle");
    report.line(format!("minimum in {}", r.enclosure));
    report.line(format!(
        "  (~ {:.9}, display only)",
        num_traits::ToPrimitive::to_f64(&r.enclosure.hi).unwrap_or(f64::NAN)
    ));
    let w: Vec<String> = r.enclosure.witness.coords.iter().map(|c| c.to_string()).collect();
    report.line(format!("witness ({})", w.join(", ")));
    report.set("enclosure", enclosure_json(&r.enclosure));
    report.set(
        "minimum_display",
        float(num_traits::ToPrimitive::to_f64(&r.enclosure.hi).unwrap_or(f64::NAN)),
    );
    for m in &r.matched {
        let what = match &m.rational {
            Some(q) => format!("rational root {q}"),
            None => format!("root in [{}, {}]", m.interval.lo, m.interval.hi),
        };
        let from: Vec<String> = m.selectors.iter().map(|s| format!("Q_{s}")).collect();
        report.line(format!("matched {what} of {}, degree <= {}", from.join(", "), m.degree));
    }
    report.set(
        "matched_roots",
        Value::Array(
            r.matched
                .iter()
                .map(|m| {
                    json!({
                        "interval": enclosure(&m.interval.lo, &m.interval.hi),
                        "rational": m.rational.as_ref().map(exact),
                        "certificates": m.selectors,
                        "degree_at_most": exact(m.degree),
                    })
                })
                .collect(),
        ),
    );
    report.add_verdicts(&r.verdicts);
    Ok(report)
}

pub fn cmd_separate(doc: &InputDocument, settings: &Settings) -> Result<Report> {
    let mut doc = doc.clone();
    settings.apply_resolution(&mut doc);
    let [a, b] = &doc.systems[..] else {
        return Err(Error::InvalidSystem("separate needs exactly two [[system]] tables".into()));
    };
    let (Some(ca), Some(cb)) = (&a.component, &b.component) else {
        return Err(Error::InvalidSystem("separate needs a component for both systems".into()));
    };
    let r = separate(&a.system, &b.system, ca, cb, &settings.pipeline())?;
    let mut report = Report::new("separate");
    echo(&mut report, &doc);
    report.heading("separation");
    report.line(format!("separation bound = {} (log2 ~ {:.4}, display only)", r.bound.coprime_form(), r.bound.log2_enclosure().mid()));
    report.line(format!("distance in {}", r.enclosure));
    report.set("separation_bound", exact(r.bound.coprime_form()));
    report.set("distance", enclosure_json(&r.enclosure));
    report.add_verdicts(&r.verdicts);
    Ok(report)
}

/// The two-point family as a two-system document, one component per point.
pub fn cmd_example(n: usize, d: u32, h: u64, resolution: u32) -> Result<String> {
    let eqs = example_polynomials(n, d, h)?;
    let names = default_names(n);
    let (ca, cb) = example_components(n, d, h, resolution)?;
    let mut systems = Vec::new();
    for comp in [ca, cb] {
        let system = SemialgSystem::new(n, eqs.clone(), Vec::new(), minbound::polycore::IntPolynomial::var(n, 0), None)?;
        systems.push(SystemSpec {
            names: names.clone(),
            system,
            d_override: None,
            explicit_objective: false,
            component: Some(comp),
        });
    }
    Ok(serialize(&InputDocument { systems }))
}
