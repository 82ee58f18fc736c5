//! Acceptance suite: one line per criterion, with its runtime.

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use minbound::bounds::{
    check_coefficient_ceiling, compare_abs_to_bound, compare_power_exprs, degree_bound, magnitude_bound_raw,
    proof_inequalities, separation_bound, BoundParams, CoefficientData, PowerExpr, DEFAULT_EXACT_BITS,
};
use minbound::elimination::{
    candidate_minima, certificate_for, limit_system_solutions, strip_t_power, JCase, ParamResultant,
    ResultantOptions,
};
use minbound::oracle::{example_components, example_family, separation_oracle, ComponentSpec};
use minbound::perturb::{build_matrix_a, SemialgSystem, Sign, SubsetSelector};
use minbound::pipeline::{certify, separate, PipelineOptions, VerdictStatus};
use minbound::polycore::{default_names, parse_polynomial, rat, IntPolynomial, Monomial, RationalPoint};
use minbound::univariate::{isolate_real_roots, refine_root};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn msg<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn system(n: usize, eqs: &[&str], ineqs: &[&str], g: &str) -> SemialgSystem {
    let names = default_names(n);
    let p = |s: &&str| parse_polynomial(s, &names).unwrap();
    SemialgSystem::new(n, eqs.iter().map(p).collect(), ineqs.iter().map(p).collect(), p(&g), None).unwrap()
}

fn width() -> BigRational {
    rat(1, 1 << 20)
}

fn c1() -> Check {
    let mut count = 0;
    for n in 2..=5 {
        for m in 1..=4 {
            let a = build_matrix_a(n, m);
            let cap = BigInt::from(2 * (n + m));
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    let v = a.entry(i, j);
                    ensure(v > &BigInt::zero() && v <= &cap, || format!("n={n} m={m}: entry ({i},{j}) = {v}"))?;
                }
            }
            if let Some((r, c)) = a.find_singular_submatrix() {
                return Err(format!("n={n} m={m}: singular minor rows {r:?} cols {c:?}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} matrices, all square minors nonsingular"))
}

fn c2() -> Check {
    ensure(degree_bound(2, 2) == BigUint::from(8u32), || "degree_bound(2,2)".into())?;
    ensure(degree_bound(3, 2) == BigUint::from(32u32), || "degree_bound(3,2)".into())?;

    let mag = magnitude_bound_raw(2, 2, &BigUint::from(6u32));
    let want = PowerExpr::int_power(192, -32);
    ensure(mag.coprime_form() == want.coprime_form(), || format!("magnitude {mag} != {want}"))?;
    ensure(compare_power_exprs(&mag, &want, DEFAULT_EXACT_BITS).map_err(msg)? == Ordering::Equal, || {
        "magnitude comparison".into()
    })?;

    let sep = separation_bound(2, 2, &BigUint::from(4u32), 2, 2).map_err(msg)?;
    let want = PowerExpr::int_power(1024, -512);
    ensure(sep.coprime_form() == want.coprime_form(), || format!("separation {sep} != {want}"))?;

    let mut identities = 0;
    for n in 2..=6usize {
        for d in [2u32, 4, 6] {
            for h in [1u64, 4, 100, 1 << 20] {
                for (m1, m2) in [(1usize, 1usize), (2, 3), (4, 4)] {
                    let h = BigUint::from(h);
                    let sep = separation_bound(n, d, &h, m1, m2).map_err(msg)?;
                    let htilde = h.clone().max(BigUint::from(2 * (2 * n) + 2 * (m1 + m2)));
                    let mag = magnitude_bound_raw(2 * n, d, &htilde);
                    ensure(sep.square().coprime_form() == mag.coprime_form(), || {
                        format!("n={n} d={d} H={h} m=({m1},{m2}): {} vs {mag}", sep.square())
                    })?;
                    identities += 1;
                }
            }
        }
    }
    Ok(format!("closed forms exact; {identities} separation^2 = magnitude identities"))
}

fn grid() -> Vec<(usize, u32, usize, u32)> {
    let mut out = Vec::new();
    for n in 2..=12usize {
        for d in [2u32, 4, 6, 8] {
            for s in 0..=n {
                for d0 in 1..=d {
                    out.push((n, d, s, d0));
                }
            }
        }
    }
    out
}

fn c3() -> Check {
    let mut checked = 0;
    for (n, d, s, d0) in grid() {
        let p = BoundParams::with_htilde(n, s, d, d0, BigUint::one(), BigUint::from(6u32)).map_err(msg)?;
        for (name, ok) in proof_inequalities(&p).map_err(msg)? {
            ensure(ok, || format!("n={n} d={d} s={s} d0={d0}: {name} fails"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} inequalities over {} parameter sets", grid().len()))
}

fn c4() -> Check {
    let (mut exact, mut log) = (0, 0);
    for htilde in [6u32, 100] {
        for (n, d, s, d0) in grid() {
            let p = BoundParams::with_htilde(n, s, d, d0, BigUint::one(), BigUint::from(htilde)).map_err(msg)?;
            let c = check_coefficient_ceiling(&p, DEFAULT_EXACT_BITS).map_err(|x| format!("n={n} d={d} s={s}: {x}"))?;
            ensure(c.holds, || format!("H~={htilde} n={n} d={d} s={s} d0={d0}: M exceeds the ceiling"))?;
            match c.decision {
                minbound::bounds::Decision::Exact => exact += 1,
                _ => log += 1,
            }
        }
    }
    Ok(format!("{exact} exact, {log} by certified log2 enclosures"))
}

fn c5() -> Check {
    let sys = system(2, &["x1^2 + x2^2 - 1"], &[], "x1");
    let a = build_matrix_a(2, 1);
    let sel = SubsetSelector::new(vec![1], vec![Sign::Plus]).map_err(msg)?;
    let (_, cert) = certificate_for(&sys, &a, &sel, &ResultantOptions::default()).map_err(msg)?;
    let q = &cert.q;
    ensure(!q.is_zero(), || "Q is zero".into())?;
    ensure(q.degree().unwrap() <= 4, || format!("deg {q} > 4"))?;
    let height = q.height().magnitude().clone();
    ensure(cert.ceilings.height_within(&height) == Some(true), || format!("height {height} above M"))?;
    let sq = q.squarefree_part();
    let roots: Vec<_> = isolate_real_roots(&sq)
        .map_err(msg)?
        .iter()
        .map(|r| refine_root(&sq, r, &width()))
        .collect();
    for target in [rat(-1, 1), rat(1, 1)] {
        ensure(roots.iter().any(|r| r.contains(&target) && r.width() <= width()), || {
            format!("no root interval of width <= 2^-20 at {target}")
        })?;
    }
    Ok(format!("Q = {q}, {} isolated roots", roots.len()))
}

fn c6() -> Check {
    let cases: [(&str, &[&str], &[&str], &str, [i64; 2], BigRational); 4] = [
        ("circle/x1", &["x1^2 + x2^2 - 1"], &[], "x1", [1, 0], rat(-1, 1)),
        ("circle/x1^2+x2^2", &["x1^2 + x2^2 - 1"], &[], "x1^2 + x2^2", [1, 0], rat(1, 1)),
        ("ellipse/x2", &["4*x1^2 + x2^2 - 4"], &[], "x2", [1, 0], rat(-2, 1)),
        ("half circle/x2", &["x1^2 + x2^2 - 1"], &["x1"], "x2", [1, 0], rat(-1, 1)),
    ];
    let opts = PipelineOptions::default();
    let mut out = Vec::new();
    for (name, eqs, ineqs, g, seed, min) in cases {
        let sys = system(2, eqs, ineqs, g);
        let comp = ComponentSpec::new(
            RationalPoint::from_integers(&seed),
            vec![(rat(-3, 1), rat(3, 1)); 2],
            16,
        )
        .map_err(msg)?;
        let r = certify(&sys, &comp, &opts).map_err(|x| format!("{name}: {x}"))?;
        ensure(r.enclosure.width() <= opts.target_width, || format!("{name}: enclosure {} too wide", r.enclosure))?;
        ensure(r.enclosure.contains(&min), || format!("{name}: {} misses {min}", r.enclosure))?;
        for v in &r.verdicts {
            ensure(v.status == VerdictStatus::Pass, || format!("{name}: {} is {}: {}", v.name, v.status, v.detail))?;
        }
        // the magnitude check once more, directly
        ensure(compare_abs_to_bound(&r.enclosure.hi, &r.bounds.magnitude_bound).map_err(msg)? != Ordering::Less, || {
            format!("{name}: |min| below the magnitude bound")
        })?;
        out.push(name);
    }
    Ok(format!("certified {}", out.join(", ")))
}

/// `2 H^{-d^{n-1}/2}`, computed directly.
fn family_distance(n: usize, d: u32, h: u64) -> BigRational {
    let e = d.pow(n as u32 - 1) / 2;
    BigRational::new(BigInt::from(2), BigInt::from(h).pow(e))
}

fn c7() -> Check {
    let mut out = Vec::new();
    for (n, d, h) in [(2usize, 2u32, 2u64), (2, 2, 4), (3, 2, 2)] {
        let want = family_distance(n, d, h);
        let (sys, dist) = example_family(n, d, h).map_err(msg)?;
        ensure(dist.to_rational(1 << 12).map_err(msg)? == want, || format!("({n},{d},{h}): closed form {dist}"))?;
        let (ca, cb) = example_components(n, d, h, 16).map_err(msg)?;
        let enc = separation_oracle(&sys, &sys, &ca, &cb, &width()).map_err(msg)?;
        ensure(enc.contains(&want), || format!("({n},{d},{h}): {enc} misses {want}"))?;
        let bound = separation_bound(n, d, &BigUint::from(h), n, n).map_err(msg)?;
        ensure(compare_abs_to_bound(&enc.lo, &bound).map_err(msg)? != Ordering::Less, || {
            format!("({n},{d},{h}): lo {} below {bound}", enc.lo)
        })?;
        let r = separate(&sys, &sys, &ca, &cb, &PipelineOptions::default()).map_err(msg)?;
        ensure(r.verdicts.iter().all(|v| v.status == VerdictStatus::Pass), || format!("({n},{d},{h}): verdict"))?;
        out.push(format!("({n},{d},{h}) -> {want}"));
    }
    Ok(out.join(", "))
}

fn c8() -> Check {
    let n = 2;
    let mut cases = 0;
    for s in 1..=2usize {
        let a = build_matrix_a(n, s);
        for d in [2u32, 4] {
            for mask in 0..(1usize << s) {
                let signs = (0..s).map(|k| if mask >> k & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect();
                let sel = SubsetSelector::new((1..=s).collect(), signs).map_err(msg)?;
                let rep = limit_system_solutions(&a, &sel, n, d).map_err(msg)?;
                ensure(rep.x0_zero_solutions == 0, || format!("s={s} d={d} {sel}: solution with x0 = 0"))?;
                let expect = BigUint::from(d).pow(s as u32);
                for j in &rep.per_j {
                    match &j.case {
                        JCase::Regular { solutions, .. } => ensure(*solutions == expect, || {
                            format!("s={s} d={d} {sel} J={:?}: {solutions} solutions, expected {expect}", j.zero_coords)
                        })?,
                        JCase::Unexpected(why) => return Err(format!("s={s} d={d} J={:?}: {why}", j.zero_coords)),
                        _ => {}
                    }
                }
                ensure(rep.is_consistent(), || format!("s={s} d={d} {sel}: inconsistent"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (s, d, sigma) cases"))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> IntPolynomial {
    let mut p = IntPolynomial::zero(n);
    for _ in 0..rng.gen_range(1..=5) {
        let mut exps = vec![0u32; n];
        let mut left = rng.gen_range(0..=deg);
        for x in exps.iter_mut() {
            let k = rng.gen_range(0..=left);
            *x = k;
            left -= k;
        }
        p.add_term(Monomial::new(exps), BigInt::from(rng.gen_range(-9i64..=9)));
    }
    p
}

fn euler_holds(h: &IntPolynomial, e: u32) -> Result<bool, String> {
    let nv = h.num_vars();
    let mut sum = IntPolynomial::zero(nv);
    for j in 0..nv {
        let dj = h.partial_derivative(j).map_err(|x| x.to_string())?;
        sum = &sum + &(&IntPolynomial::var(nv, j) * &dj);
    }
    Ok(sum == h.scale(&BigInt::from(e)))
}

fn random_instance(rng: &mut ChaCha8Rng) -> SemialgSystem {
    // an ellipse-like curve through points near the origin, and a random objective
    let a = rng.gen_range(1..=4);
    let b = rng.gen_range(1..=4);
    let c = rng.gen_range(-2..=2);
    let k = rng.gen_range(1..=5);
    let f = format!("{a}*x1^2 + {b}*x2^2 + {c}*x1 - {k}");
    let (p, q) = loop {
        let p: i64 = rng.gen_range(-3..=3);
        let q: i64 = rng.gen_range(-3..=3);
        if p != 0 || q != 0 {
            break (p, q);
        }
    };
    let g = if rng.gen_bool(0.5) {
        format!("{p}*x1 + {q}*x2")
    } else {
        format!("{p}*x1*x2 + {q}*x2")
    };
    system(2, &[&f], &[], &g)
}

fn c9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_017);
    let mut checks = 0;

    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let p = random_poly(&mut rng, n, 4);
        let deg = p.total_degree().unwrap_or(0);
        let e = deg + rng.gen_range(0..=2);
        let h = p.homogenize(e).map_err(msg)?;
        ensure(h.is_zero() || h.is_homogeneous_in(&(0..=n).collect::<Vec<_>>(), e), || format!("{h} not of degree {e}"))?;
        ensure(h.dehomogenize() == p, || format!("round trip of {p}"))?;
        ensure(euler_holds(&h, e)?, || format!("Euler identity fails for {h}"))?;
        checks += 3;
    }

    let opts = ResultantOptions::default();
    for _ in 0..8 {
        let sys = random_instance(&mut rng);
        let a = build_matrix_a(2, sys.m());
        let label = format!("f = {}, g = {}", sys.equalities()[0], sys.objective());
        for sel in SubsetSelector::enumerate(&sys) {
            let (pr, _) = certificate_for(&sys, &a, &sel, &opts).map_err(|x| format!("{label} {sel}: {x}"))?;
            let p = BoundParams::from_system(&sys, sel.len()).map_err(msg)?;
            let cd = CoefficientData::new(&p).map_err(msg)?;
            let t_deg = cd.t_degree(&p);
            ensure(BigUint::from(pr.t_degree) == t_deg, || format!("{label} {sel}: t-degree {}", pr.t_degree))?;
            ensure(pr.r.is_homogeneous_in(&[0, 1], pr.t_degree), || format!("{label} {sel}: R not homogeneous"))?;
            let again = strip_t_power(&pr).map_err(msg)?;
            ensure(again == pr, || format!("{label} {sel}: stripping is not idempotent"))?;
            let stripped = ParamResultant::new(pr.r_tilde.clone(), pr.t_degree - pr.e).map_err(msg)?;
            ensure(stripped.e == 0 && stripped.r_tilde == pr.r_tilde, || format!("{label} {sel}: restrip"))?;
            checks += 4;
        }
        let plus = candidate_minima(&sys, &a, &opts).map_err(msg)?;
        let flipped = sys.with_objective(-sys.objective()).map_err(msg)?;
        let minus = candidate_minima(&flipped, &a, &opts).map_err(msg)?;
        let reflected = plus.squarefree_product.reflect().primitive();
        let other = minus.squarefree_product.primitive();
        ensure(reflected == other || reflected == other.neg(), || {
            format!("{label}: candidate roots {} vs {} under g -> -g", plus.squarefree_product, minus.squarefree_product)
        })?;
        checks += 1;
    }
    Ok(format!("{checks} seeded checks"))
}

fn run(k: usize, name: &str, f: fn() -> Check) -> bool {
    let t = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let dt: Duration = t.elapsed();
    match &res {
        Ok(msg) => println!("criterion {k}: PASS ({:.2}s) {name}: {msg}", dt.as_secs_f64()),
        Err(msg) => println!("criterion {k}: FAIL ({:.2}s) {name}: {msg}", dt.as_secs_f64()),
    }
    res.is_ok()
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("matrix construction", c1),
        ("bound formulas", c2),
        ("proof inequalities", c3),
        ("coefficient ceiling", c4),
        ("circle certificate", c5),
        ("end-to-end certify", c6),
        ("two-point family", c7),
        ("limit system", c8),
        ("structural suite", c9),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut ok = true;
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        ok &= run(k + 1, name, f);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
