//! End-to-end acceptance checks. Each test prints one pass/fail line so
//! the suite doubles as a checklist when run with `--nocapture`.

use bc_leakage::blackwell::{
    bwc_frontier, bwc_saturation_threshold, bwc_sumrate_curve,
};
use bc_leakage::channel::{blackwell, induce, Dmbc};
use bc_leakage::lab::{appendix_a_suite, appendix_b_suite};
use bc_leakage::pmf::JointPmf;
use bc_leakage::regions::{
    region_polytope, saturation_check, leakage_threshold, LeakagePair, RatePolytope, RegionId,
};
use bc_leakage::symbolic::{
    achievability_system, inner_bound_system, IneqSystem, Inequality, AUX_ELIMINATION_ORDER,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

const TOL: f64 = 1e-9;

fn verdict(criterion: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} ({name}): {} — {detail}",
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn dirichlet(rng: &mut ChaCha8Rng, cells: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..cells)
        .map(|_| -f64::ln(rng.gen_range(1e-12..1.0)))
        .collect();
    let s: f64 = t.iter().sum();
    t.iter_mut().for_each(|p| *p /= s);
    t
}

fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_channel(rng: &mut ChaCha8Rng, nx: usize, ny1: usize, ny2: usize) -> Dmbc {
    let mut kernel = Vec::with_capacity(nx * ny1 * ny2);
    for _ in 0..nx {
        kernel.extend(dirichlet(rng, ny1 * ny2));
    }
    Dmbc::new(nx, ny1, ny2, kernel).unwrap()
}

#[test]
fn criterion_1_saturation_thresholds() {
    let start = Instant::now();
    let expect = [(0.0, 0.15897), (0.05, 0.15897), (0.1, 0.20101), (0.4, 0.38317)];
    let mut worst = 0.0f64;
    for (l, want) in expect {
        let got = bwc_saturation_threshold(l, 4e-4);
        worst = worst.max((got - want).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        "saturation thresholds",
        worst <= 2e-3 && secs < 60.0,
        &format!("worst deviation {worst:.2e}, {secs:.1} s"),
    );
}

#[test]
fn criterion_2_sumrate_knee() {
    let grid: Vec<f64> = (0..=2000).map(|k| k as f64 * 1e-4).collect();
    let curve = bwc_sumrate_curve(&grid);
    let knee_ok = (curve.breakpoint - 0.09818).abs() <= 1e-3;
    let plateau_ok = (curve.plateau - 3f64.log2()).abs() <= 1e-4;
    let mut increasing = true;
    let mut constant = true;
    for w in curve.points.windows(2) {
        let ((l0, s0), (l1, s1)) = (w[0], w[1]);
        if l1 <= curve.breakpoint && s1 <= s0 {
            increasing = false;
        }
        if l0 >= curve.breakpoint && (s1 - s0).abs() > 1e-6 {
            constant = false;
        }
    }
    verdict(
        2,
        "sum-rate knee",
        knee_ok && plateau_ok && increasing && constant,
        &format!(
            "knee {:.5}, plateau {:.6}, increasing-below {increasing}, flat-above {constant}",
            curve.breakpoint, curve.plateau
        ),
    );
}

#[test]
fn criterion_3_projection_matches_reference() {
    let start = Instant::now();
    let projected = achievability_system().eliminate_all(&AUX_ELIMINATION_ORDER);
    let equal = projected.canonical_equal(&inner_bound_system());
    let secs = start.elapsed().as_secs_f64();
    verdict(
        3,
        "eight-variable projection",
        equal && secs < 5.0,
        &format!("canonical_equal {equal}, {secs:.2} s"),
    );
}

#[test]
fn criterion_4_saturation_property() {
    let mut violations = 0usize;
    for k in 0..200u64 {
        let mut rng = seeded(0xc4, k);
        let nx = rng.gen_range(2..=3usize);
        let (ny1, ny2) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        let ch = random_channel(&mut rng, nx, ny1, ny2);
        let sizes = [
            rng.gen_range(2..=3usize),
            rng.gen_range(2..=3usize),
            rng.gen_range(2..=3usize),
        ];
        let axes = vec![
            ("U0".to_string(), sizes[0]),
            ("U1".to_string(), sizes[1]),
            ("U2".to_string(), sizes[2]),
            ("X".to_string(), nx),
        ];
        let cells = sizes.iter().product::<usize>() * nx;
        let joint = JointPmf::new(axes, dirichlet(&mut rng, cells)).unwrap();
        let induced = induce(&joint, &ch).unwrap();
        // Budgets at, above, and a mix around the per-chain thresholds.
        let t1 = leakage_threshold(&induced, 1).unwrap();
        let t2 = leakage_threshold(&induced, 2).unwrap();
        let extra: f64 = rng.gen_range(0.0..0.5);
        for leakage in [
            LeakagePair::new(t1, t2),
            LeakagePair::new(t1 + extra, rng.gen_range(0.0..0.2)),
            LeakagePair::new(rng.gen_range(0.0..0.2), t2 + extra),
        ] {
            let report = saturation_check(&induced, leakage).unwrap();
            if !report.supports_match {
                violations += 1;
            }
        }
    }
    verdict(
        4,
        "budget saturation on random chains",
        violations == 0,
        &format!("200 chains x 3 budgets, {violations} violations"),
    );
}

#[test]
fn criterion_5_lift_suites() {
    let mut worst = f64::INFINITY;
    let mut failures = 0usize;
    for suite in [appendix_a_suite(100, 0xa5), appendix_b_suite(100, 0xb5)] {
        for r in suite.unwrap() {
            worst = worst.min(r.margin);
            if !r.member {
                failures += 1;
            }
        }
    }
    verdict(
        5,
        "lift suites",
        failures == 0 && worst >= -TOL,
        &format!("200 lifted points, worst margin {worst:.2e}, {failures} failures"),
    );
}

/// Per-coefficient-pattern minimum right-hand side of a polytope.
fn pattern_mins(poly: &RatePolytope) -> BTreeMap<Vec<i64>, f64> {
    let mut m: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    for f in poly.faces() {
        let key: Vec<i64> = f.coeffs.iter().map(|c| (c * 2.0).round() as i64).collect();
        let e = m.entry(key).or_insert(f64::INFINITY);
        *e = e.min(f.rhs);
    }
    m
}

#[test]
fn criterion_6_substitution_matches_semi_deterministic() {
    let ch = blackwell();
    // First receiver's output as a function of the ternary input.
    let y1_of_x = [0usize, 1, 0];
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let mut rng = seeded(0xc6, k);
        let (nw, nv, nx) = (rng.gen_range(2..=3usize), rng.gen_range(2..=3usize), 3);
        let sd_joint = JointPmf::new(
            vec![("W".into(), nw), ("V".into(), nv), ("X".into(), nx)],
            dirichlet(&mut rng, nw * nv * nx),
        )
        .unwrap();
        let mut tensor = vec![0.0; nw * 2 * nv * nx];
        for iw in 0..nw {
            for iv in 0..nv {
                for ix in 0..nx {
                    let p = sd_joint.tensor()[(iw * nv + iv) * nx + ix];
                    tensor[((iw * 2 + y1_of_x[ix]) * nv + iv) * nx + ix] += p;
                }
            }
        }
        let inner_joint = JointPmf::new(
            vec![
                ("U0".into(), nw),
                ("U1".into(), 2),
                ("U2".into(), nv),
                ("X".into(), nx),
            ],
            tensor,
        )
        .unwrap();
        let leakage = LeakagePair::new(rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
        let inner = region_polytope(RegionId::Inner, &induce(&inner_joint, &ch).unwrap(), leakage)
            .unwrap();
        let sd = region_polytope(RegionId::Sd, &induce(&sd_joint, &ch).unwrap(), leakage).unwrap();
        let (a, b) = (pattern_mins(&inner), pattern_mins(&sd));
        assert_eq!(
            a.keys().collect::<Vec<_>>(),
            b.keys().collect::<Vec<_>>(),
            "face patterns differ"
        );
        for (key, rhs) in &a {
            worst = worst.max((rhs - b[key]).abs());
        }
    }
    verdict(
        6,
        "auxiliary substitution",
        worst <= TOL,
        &format!("100 chains, worst row deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_7_frontier_nesting() {
    let (grid, fan) = (160, 121);
    let at = |l: f64| bwc_frontier(LeakagePair::new(l, l), grid, fan);
    let (f0, f05, f10, f40) = (at(0.0), at(0.05), at(0.1), at(0.4));
    let finf = bwc_frontier(LeakagePair::UNCONSTRAINED, grid, fan);
    let nested = |big: &_, small: &_| {
        let contains: bool = FrontierCurve::dominates(big, small, TOL);
        let strict = !FrontierCurve::dominates(small, big, 1e-3);
        contains && strict
    };
    use bc_leakage::union::FrontierCurve;
    let n1 = nested(&f05, &f0);
    let n2 = nested(&f10, &f05);
    let saturated = f40.dominates(&finf, 1e-3) && finf.dominates(&f40, 1e-3);
    verdict(
        7,
        "frontier nesting",
        n1 && n2 && saturated,
        &format!("0<0.05: {n1}, 0.05<0.1: {n2}, 0.4 = unconstrained: {saturated}"),
    );
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact witness search: is there a value of `var` completing `point`
/// into a solution of `sys`?
fn has_witness(sys: &IneqSystem, vars: &[String], var: &str, point: &[BigRational]) -> bool {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for row in &sys.rows {
        let mut rest = -row.rhs_const.clone();
        for (v, p) in vars.iter().zip(point) {
            if let Some(c) = row.lhs.get(v) {
                rest += c * p;
            }
        }
        // rest + c * z <= 0
        match row.lhs.get(var) {
            None => {
                if rest > BigRational::zero() {
                    return false;
                }
            }
            Some(c) if c > &BigRational::zero() => {
                let bound = -rest / c;
                hi = Some(match hi {
                    Some(h) if h < bound => h,
                    _ => bound,
                });
            }
            Some(c) => {
                let bound = -rest / c;
                lo = Some(match lo {
                    Some(l) if l > bound => l,
                    _ => bound,
                });
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

fn satisfies(sys: &IneqSystem, vars: &[String], point: &[BigRational]) -> bool {
    sys.rows.iter().all(|row| {
        let mut acc = -row.rhs_const.clone();
        for (v, p) in vars.iter().zip(point) {
            if let Some(c) = row.lhs.get(v) {
                acc += c * p;
            }
        }
        acc <= BigRational::zero()
    })
}

#[test]
fn criterion_8_projection_soundness() {
    let mut disagreements = 0usize;
    for k in 0..200u64 {
        let mut rng = seeded(0xc8, k);
        let nvars = rng.gen_range(3..=5usize);
        let nrows = rng.gen_range(4..=8usize);
        let vars: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();
        let mut rows = Vec::with_capacity(nrows);
        for _ in 0..nrows {
            let mut lhs = BTreeMap::new();
            for v in &vars {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    lhs.insert(v.clone(), rat(c));
                }
            }
            rows.push(Inequality::new(
                lhs,
                BTreeMap::new(),
                rat(rng.gen_range(-4i64..=8)),
                false,
            ));
        }
        let sys = IneqSystem::new(rows, BTreeSet::new());
        let dropped = &vars[nvars - 1];
        let kept: Vec<String> = vars[..nvars - 1].to_vec();
        let projected = sys.eliminate(dropped);
        for _ in 0..500 {
            let point: Vec<BigRational> = kept
                .iter()
                .map(|_| rat(rng.gen_range(-10i64..=10)) / rat(2))
                .collect();
            let direct = has_witness(&sys, &kept, dropped, &point);
            let via_projection = satisfies(&projected, &kept, &point);
            if direct != via_projection {
                disagreements += 1;
            }
        }
    }
    verdict(
        8,
        "projection soundness",
        disagreements == 0,
        &format!("200 systems x 500 points, {disagreements} disagreements"),
    );
}
