use super::*;
use crate::polycore::rat;
use crate::univariate::{isolate_real_roots, UniPoly};

fn circle_with(g: &str, ineqs: &[&str]) -> SemialgSystem {
    let names = default_names(2);
    SemialgSystem::new(
        2,
        vec![parse_polynomial("x1^2 + x2^2 - 1", &names).unwrap()],
        ineqs.iter().map(|s| parse_polynomial(s, &names).unwrap()).collect(),
        parse_polynomial(g, &names).unwrap(),
        None,
    )
    .unwrap()
}

fn comp(seed: &[i64], lo: i64, hi: i64) -> ComponentSpec {
    ComponentSpec::new(
        RationalPoint::from_integers(seed),
        vec![(rat(lo, 1), rat(hi, 1)); seed.len()],
        16,
    )
    .unwrap()
}

fn tw() -> BigRational {
    rat(1, 1 << 20)
}

fn check(enc: &Enclosure, sys: &SemialgSystem, value: &BigRational) {
    assert!(enc.contains(value), "{enc} misses {value}");
    assert!(enc.width() <= tw(), "{enc} too wide");
    let gw = sys.objective().evaluate(&enc.witness).unwrap();
    assert!(enc.lo <= gw && gw <= enc.hi, "witness value {gw} outside {enc}");
}

#[test]
fn circle_linear_objective() {
    let sys = circle_with("x1", &[]);
    let enc = reference_minimum(&sys, &comp(&[1, 0], -2, 2), &tw()).unwrap();
    check(&enc, &sys, &rat(-1, 1));
    assert_eq!(enc.status, WitnessStatus::Exact);
    assert_eq!(enc.hi, rat(-1, 1));
}

#[test]
fn circle_constant_objective() {
    let sys = circle_with("x1^2 + x2^2", &[]);
    let enc = reference_minimum(&sys, &comp(&[1, 0], -2, 2), &tw()).unwrap();
    check(&enc, &sys, &rat(1, 1));
}

#[test]
fn half_circle() {
    let sys = circle_with("x2", &["x1"]);
    let enc = reference_minimum(&sys, &comp(&[1, 0], -2, 2), &tw()).unwrap();
    check(&enc, &sys, &rat(-1, 1));
}

#[test]
fn irrational_minimum_gets_interval_newton_witness() {
    // min of x1 + x2 on the circle is -sqrt(2)
    let sys = circle_with("x1 + x2", &[]);
    let enc = reference_minimum(&sys, &comp(&[1, 0], -2, 2), &tw()).unwrap();
    assert!(enc.width() <= tw());
    assert!(enc.lo < rat(-1414213, 1000000) && enc.hi > rat(-1414214, 1000000), "{enc}");
    assert_ne!(enc.status, WitnessStatus::Tolerance);
}

#[test]
fn infeasible_seed_is_rejected() {
    let sys = circle_with("x1", &[]);
    assert!(matches!(
        reference_minimum(&sys, &comp(&[2, 2], -2, 2), &tw()),
        Err(Error::Oracle(_))
    ));
    assert!(ComponentSpec::new(RationalPoint::from_integers(&[3, 0]), vec![(rat(-2, 1), rat(2, 1)); 2], 8).is_err());
}

#[test]
fn kkt_points_on_circle() {
    let sys = circle_with("x1", &[]);
    let fams = enumerate_kkt(&sys, &comp(&[1, 0], -2, 2)).unwrap();
    let empty = fams.iter().find(|f| f.selector.is_empty()).unwrap();
    assert!(empty.points.is_empty());
    for f in fams.iter().filter(|f| f.selector.len() == 1) {
        assert_eq!(f.points.len(), 2, "{:?}", f.points);
        assert!((f.points[0].x[0] + 1.0).abs() < 1e-12 && f.points[0].x[1].abs() < 1e-12);
        assert!((f.points[1].x[0] - 1.0).abs() < 1e-12);
        assert!(f.points.iter().all(|p| p.feasible));
    }
    assert_eq!(best_feasible_kkt(&fams), Some(-1.0));
}

#[test]
fn kkt_origin_is_infeasible() {
    let sys = circle_with("x1^2 + x2^2", &[]);
    let fams = enumerate_kkt(&sys, &comp(&[1, 0], -2, 2)).unwrap();
    let empty = fams.iter().find(|f| f.selector.is_empty()).unwrap();
    assert_eq!(empty.points.len(), 1);
    assert!(empty.points[0].x.iter().all(|v| v.abs() < 1e-12));
    assert!(!empty.points[0].feasible);
    assert!((best_feasible_kkt(&fams).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn two_circles_are_two_apart() {
    let names = default_names(2);
    let a = circle_with("x1", &[]);
    let b = SemialgSystem::new(
        2,
        vec![parse_polynomial("x1^2 - 8*x1 + x2^2 + 15", &names).unwrap()],
        vec![],
        parse_polynomial("x1", &names).unwrap(),
        None,
    )
    .unwrap();
    let ca = comp(&[1, 0], -2, 2);
    let cb = ComponentSpec::new(
        RationalPoint::from_integers(&[5, 0]),
        vec![(rat(2, 1), rat(6, 1)), (rat(-2, 1), rat(2, 1))],
        16,
    )
    .unwrap();
    let enc = separation_oracle(&a, &b, &ca, &cb, &tw()).unwrap();
    assert!(enc.contains(&rat(2, 1)), "{enc}");
    assert!(enc.width() <= tw());
}

#[test]
fn sign_split_family_points() {
    let names = default_names(2);
    let eqs = example_polynomials(2, 2, 4).unwrap();
    let g = IntPolynomial::var(2, 0);
    let up = SemialgSystem::new(2, eqs.clone(), vec![parse_polynomial("x2", &names).unwrap()], g.clone(), None).unwrap();
    let down = SemialgSystem::new(2, eqs, vec![parse_polynomial("-x2", &names).unwrap()], g, None).unwrap();
    let (p, q) = example_points(2, 2, 4).unwrap();
    let bx = vec![(rat(-1, 1), rat(1, 1)); 2];
    let ca = ComponentSpec::new(p, bx.clone(), 8).unwrap();
    let cb = ComponentSpec::new(q, bx, 8).unwrap();
    let enc = separation_oracle(&up, &down, &ca, &cb, &tw()).unwrap();
    assert!(enc.contains(&rat(1, 2)) && enc.width() <= tw(), "{enc}");
    assert_eq!(enc.hi, rat(1, 2));
}

#[test]
fn identical_sets_have_distance_zero() {
    let a = circle_with("x1", &[]);
    let c = comp(&[1, 0], -2, 2);
    let w = rat(1, 256);
    let enc = separation_oracle(&a, &a, &c, &c, &w).unwrap();
    assert!(enc.contains_zero(), "{enc}");
    assert!(enc.hi <= w);
}

#[test]
fn family_points_and_distance() {
    let (p, q) = example_points(2, 2, 4).unwrap();
    assert_eq!(p.coords, vec![rat(1, 4), rat(1, 4)]);
    assert_eq!(q.coords, vec![rat(1, 4), rat(-1, 4)]);
    let (sys, dist) = example_family(2, 2, 4).unwrap();
    assert_eq!(dist.to_rational(64).unwrap(), rat(1, 2));
    assert!(sys.contains(&p).unwrap() && sys.contains(&q).unwrap());
    let (_, dist) = example_family(3, 2, 2).unwrap();
    assert_eq!(dist.to_rational(64).unwrap(), rat(1, 2));
    let (p, q) = example_points(3, 2, 2).unwrap();
    assert_eq!(&p.coords[2] - &q.coords[2], rat(1, 2));
    assert!(example_family(2, 3, 4).is_err());
    assert!(example_family(1, 2, 4).is_err());
}

#[test]
fn family_has_exactly_two_points() {
    for (n, d, h) in [(2, 2, 4), (3, 2, 2), (3, 4, 2)] {
        let (p, _) = example_points(n, d, h).unwrap();
        // the chain fixes x1..x_{n-1}; x_n^2 = x_{n-1}^d leaves a quadratic
        let c = num_traits::pow(p.coords[n - 2].clone(), d as usize);
        let q = UniPoly::new(vec![-c.numer() * 1, BigInt::zero(), c.denom().clone()]);
        assert_eq!(isolate_real_roots(&q).unwrap().len(), 2);
    }
}

#[test]
fn sqrt_bounds_bracket() {
    assert_eq!(sqrt_bounds(&rat(9, 4), 10), (rat(3, 2), rat(3, 2)));
    let (lo, hi) = sqrt_bounds(&rat(2, 1), 20);
    assert!(&lo * &lo <= rat(2, 1) && &hi * &hi >= rat(2, 1));
    assert_eq!(&hi - &lo, rat(1, 1 << 20));
}
