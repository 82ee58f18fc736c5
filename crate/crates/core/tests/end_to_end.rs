use minbound::bounds::bound_report;
use minbound::elimination::{candidate_minima, coordinate_candidates, ResultantOptions};
use minbound::oracle::{best_feasible_kkt, enumerate_kkt, reference_minimum, ComponentSpec, OracleOptions};
use minbound::perturb::{build_matrix_a, SemialgSystem};
use minbound::pipeline::{certify, PipelineOptions, VerdictStatus};
use minbound::polycore::{default_names, parse_polynomial, rat, RationalPoint};
use minbound::Error;
use num_traits::ToPrimitive;

fn system(eqs: &[&str], ineqs: &[&str], g: &str) -> SemialgSystem {
    let names = default_names(2);
    let p = |s: &&str| parse_polynomial(s, &names).unwrap();
    SemialgSystem::new(2, eqs.iter().map(p).collect(), ineqs.iter().map(p).collect(), p(&g), None).unwrap()
}

fn component(seed: [i64; 2]) -> ComponentSpec {
    ComponentSpec::new(RationalPoint::from_integers(&seed), vec![(rat(-3, 1), rat(3, 1)); 2], 16).unwrap()
}

#[test]
fn certified_minimum_is_a_root_of_some_certificate() {
    // circle of radius 1 around (2, 0): min x1 = 1
    let sys = system(&["x1^2 - 4*x1 + x2^2 + 3"], &[], "x1");
    let r = certify(&sys, &component([3, 0]), &PipelineOptions::default()).unwrap();
    assert!(r.enclosure.contains(&rat(1, 1)), "{}", r.enclosure);
    assert!(r.verdicts.iter().all(|v| v.status == VerdictStatus::Pass), "{:?}", r.verdicts);
    assert!(r.matched.iter().any(|m| m.rational == Some(rat(1, 1))));
}

#[test]
fn certify_is_deterministic() {
    let sys = system(&["4*x1^2 + x2^2 - 4"], &[], "x1 + x2");
    let a = certify(&sys, &component([1, 0]), &PipelineOptions::default()).unwrap();
    let b = certify(&sys, &component([1, 0]), &PipelineOptions::default()).unwrap();
    assert_eq!(a.enclosure, b.enclosure);
    assert_eq!(a.candidates, b.candidates);
    // min of x1 + x2 on the ellipse is -sqrt(5)
    let mid = (&a.enclosure.lo + &a.enclosure.hi) / rat(2, 1);
    assert!((mid.to_f64().unwrap() + 5f64.sqrt()).abs() < 1e-6);
}

#[test]
fn kkt_enumeration_agrees_with_the_oracle() {
    let sys = system(&["x1^2 + x2^2 - 1"], &["x1"], "x2");
    let comp = component([1, 0]);
    let enc = reference_minimum(&sys, &comp, &rat(1, 1 << 20)).unwrap();
    let best = best_feasible_kkt(&enumerate_kkt(&sys, &comp).unwrap()).unwrap();
    assert!((enc.hi.to_f64().unwrap() - best).abs() < 1e-9);
}

#[test]
fn coordinate_certificates_contain_coordinates_of_the_minimizer() {
    let sys = system(&["4*x1^2 + x2^2 - 4"], &[], "x2");
    let a = build_matrix_a(2, sys.m());
    let set = coordinate_candidates(&sys, &a, 2, &ResultantOptions::default()).unwrap();
    assert!(set.roots.iter().any(|r| r.contains(&rat(-2, 1))));
    assert!(coordinate_candidates(&sys, &a, 3, &ResultantOptions::default()).is_err());
}

#[test]
fn tight_budgets_raise_budget_errors() {
    let sys = system(&["x1^4 + x2^4 - 1"], &[], "x1");
    let a = build_matrix_a(2, 1);
    let opts = ResultantOptions {
        max_matrix_dim: 4,
        ..ResultantOptions::default()
    };
    assert!(matches!(candidate_minima(&sys, &a, &opts), Err(Error::Budget { .. })));

    let opts = PipelineOptions {
        oracle: OracleOptions {
            max_boxes: 2,
            ..OracleOptions::default()
        },
        ..PipelineOptions::default()
    };
    let sys = system(&["x1^2 + x2^2 - 1"], &[], "x1 + x2");
    assert!(matches!(certify(&sys, &component([1, 0]), &opts), Err(Error::Budget { .. })));
}

#[test]
fn bound_report_lists_every_subset_size() {
    let sys = system(&["x1^2 + x2^2 - 1"], &["x1", "x2"], "x1");
    let b = bound_report(&sys, 1 << 16).unwrap();
    assert_eq!(b.per_subset.iter().map(|e| e.s).collect::<Vec<_>>(), vec![0, 1, 2]);
    assert_eq!(b.params.htilde, (2u32 * 2 + 2 * 3).into());
    assert!(b.log2_magnitude.hi() < 0.0);
}
