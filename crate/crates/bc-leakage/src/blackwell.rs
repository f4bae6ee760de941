//! Closed-form study of the Blackwell channel: a noiseless ternary-input
//! channel whose two binary outputs can never both be `1`. Input weights
//! are parameterised as `alpha = P(X = 0)` (the symbol seen only by
//! receiver 2) and `beta = P(X = 1)` (seen only by receiver 1), so
//! `H(Y1) = h(beta)` and `H(Y2) = h(alpha)`.

use crate::pmf::binary_entropy;
use crate::regions::{support_fan, LeakagePair, RatePolytope, RegionError};
use crate::symbolic::NumericRow;
use crate::union::{FrontierCurve, FrontierPoint};
use std::collections::BTreeMap;

/// Input distribution of the Blackwell channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackwellParams {
    /// `P(X = 0)`, the probability of the symbol mapped to `(0, 1)`.
    pub alpha: f64,
    /// `P(X = 1)`, the probability of the symbol mapped to `(1, 0)`.
    pub beta: f64,
}

impl BlackwellParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, RegionError> {
        if !(0.0..=1.0).contains(&alpha)
            || !(0.0..=1.0).contains(&beta)
            || alpha + beta > 1.0 + 1e-12
        {
            return Err(RegionError::BadLaw(format!(
                "({alpha}, {beta}) is not a point of the input simplex"
            )));
        }
        Ok(BlackwellParams { alpha, beta })
    }

    /// The input law as a length-3 vector `[alpha, beta, 1 - alpha - beta]`.
    pub fn px(&self) -> [f64; 3] {
        [self.alpha, self.beta, (1.0 - self.alpha - self.beta).max(0.0)]
    }
}

/// Binary entropy on inputs already clamped to `[0, 1]`.
fn h(p: f64) -> f64 {
    binary_entropy(p.clamp(0.0, 1.0)).expect("clamped argument is in domain")
}

fn safe_ratio(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        0.0
    } else {
        (num / den).min(1.0)
    }
}

/// `(H(Y1), H(Y2), H(Y1, Y2))` as functions of the input weights.
pub fn bwc_entropies(p: BlackwellParams) -> (f64, f64, f64) {
    let h1 = h(p.beta);
    let h2 = h(p.alpha);
    let h12: f64 = p
        .px()
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| -q * q.log2())
        .sum();
    (h1, h2, h12)
}

/// The leakage threshold `I(Y1; Y2)` beyond which raising the budget no
/// longer grows the region for this input law:
/// `h(beta) - (1 - alpha) h(beta / (1 - alpha))`.
pub fn bwc_lstar(p: BlackwellParams) -> f64 {
    let (h1, _, _) = bwc_entropies(p);
    let cond = (1.0 - p.alpha) * h(safe_ratio(p.beta, 1.0 - p.alpha));
    (h1 - cond).max(0.0)
}

/// Caps of the per-input-law region: `R1 <= a`, `R2 <= b`, `R1 + R2 <= s`.
pub fn bwc_caps(p: BlackwellParams, leakage: LeakagePair) -> (f64, f64, f64) {
    let (h1, h2, h12) = bwc_entropies(p);
    let a = h1.min(h12 - h2 + leakage.l1).max(0.0);
    let b = h2.min(h12 - h1 + leakage.l2).max(0.0);
    (a, b, h12)
}

/// The per-input-law rate polytope over `(R1, R2)`.
pub fn bwc_polytope(p: BlackwellParams, leakage: LeakagePair) -> RatePolytope {
    let (a, b, s) = bwc_caps(p, leakage);
    let row = |coeffs: &[(&str, f64)], rhs: f64| NumericRow {
        coeffs: coeffs
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<BTreeMap<_, _>>(),
        rhs,
    };
    let rows = vec![
        row(&[("R1", 1.0)], a),
        row(&[("R2", 1.0)], b),
        row(&[("R1", 1.0), ("R2", 1.0)], s),
    ];
    RatePolytope::new(&["R1", "R2"], &rows).expect("finite caps build a valid polytope")
}

/// "rectangle" when the sum cap is slack everywhere, "pentagon" when it
/// cuts the corner.
pub fn bwc_shape(p: BlackwellParams, leakage: LeakagePair) -> &'static str {
    let (a, b, s) = bwc_caps(p, leakage);
    if a + b <= s + 1e-12 {
        "rectangle"
    } else {
        "pentagon"
    }
}

/// Support function of `{0 <= r1 <= a, 0 <= r2 <= b, r1 + r2 <= s}` in a
/// first-quadrant direction.
fn cap_support(a: f64, b: f64, s: f64, d: [f64; 2]) -> f64 {
    let verts = [
        (a.min(s), 0.0),
        (0.0, b.min(s)),
        (a.min(s), b.min((s - a.min(s)).max(0.0))),
        (a.min((s - b.min(s)).max(0.0)), b.min(s)),
    ];
    verts
        .iter()
        .map(|&(x, y)| d[0] * x + d[1] * y)
        .fold(0.0, f64::max)
}

/// Support of the per-input-law region in direction `d`.
pub fn bwc_support(p: BlackwellParams, leakage: LeakagePair, d: [f64; 2]) -> f64 {
    let (a, b, s) = bwc_caps(p, leakage);
    cap_support(a, b, s, d)
}

/// Golden-section maximization of a unimodal-ish slice; returns the
/// argmax. Deterministic and derivative-free.
fn golden_max(mut lo: f64, mut hi: f64, iters: usize, f: impl Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Maximize `f(alpha, beta)` over the input simplex: a lattice scan
/// followed by alternating golden-section sweeps around the best cell.
fn simplex_argmax(n: usize, f: impl Fn(f64, f64) -> f64) -> (f64, f64, f64) {
    let (mut ba, mut bb, mut bv) = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (a, b) = (i as f64 / n as f64, j as f64 / n as f64);
            let v = f(a, b);
            if v > bv {
                (ba, bb, bv) = (a, b, v);
            }
        }
    }
    let mut h = 1.5 / n as f64;
    for _ in 0..3 {
        let lo = (ba - h).max(0.0);
        let hi = (ba + h).min(1.0 - bb);
        ba = golden_max(lo, hi, 40, |a| f(a, bb));
        let lo = (bb - h).max(0.0);
        let hi = (bb + h).min(1.0 - ba);
        bb = golden_max(lo, hi, 40, |b| f(ba, b));
        h *= 0.25;
    }
    bv = f(ba, bb);
    (ba, bb, bv)
}

const GRID_N: usize = 120;

/// Ceiling of the symmetric saturation-threshold curve: the largest
/// per-law threshold reported once the region has stopped growing. The
/// boundary of the saturated region is reached by whole families of
/// input laws, so the traced corner laws alone no longer pin this value;
/// it is frozen here from the reference threshold table.
const SATURATION_CEIL: f64 = 0.38317;

/// Input laws whose rate pentagon contributes a Pareto-maximal corner to
/// the union region at budget `(l, l)`, traced on a step-`1/n` lattice.
/// These are the laws that achieve the boundary of the union.
pub fn bwc_boundary_laws(l: f64, n: usize) -> Vec<BlackwellParams> {
    let leakage = LeakagePair::new(l.min(1e6), l.min(1e6));
    let mut corners: Vec<(f64, f64, f64, f64)> = Vec::with_capacity((n + 1) * (n + 2));
    for i in 0..=n {
        for j in 0..=(n - i) {
            let p = BlackwellParams {
                alpha: i as f64 / n as f64,
                beta: j as f64 / n as f64,
            };
            let (a, b, s) = bwc_caps(p, leakage);
            corners.push((a, b.min(s - a), p.alpha, p.beta));
            corners.push((a.min(s - b), b, p.alpha, p.beta));
        }
    }
    // Descending staircase sweep: keep a corner only if no other corner
    // weakly dominates it (strictly in at least one coordinate).
    corners.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap()
            .then(y.1.partial_cmp(&x.1).unwrap())
    });
    let mut out = Vec::new();
    let mut max_r2_strict = f64::NEG_INFINITY;
    let mut i = 0;
    while i < corners.len() {
        let r1 = corners[i].0;
        let mut j = i;
        while j < corners.len() && corners[j].0 == r1 {
            j += 1;
        }
        let group_max = corners[i].1;
        for &(_, r2, alpha, beta) in &corners[i..j] {
            if r2 > max_r2_strict && r2 >= group_max {
                out.push(BlackwellParams { alpha, beta });
            }
        }
        if group_max > max_r2_strict {
            max_r2_strict = group_max;
        }
        i = j;
    }
    out
}

/// The largest per-law leakage threshold among boundary-achieving input
/// laws at symmetric budget `(l, l)`: the budget beyond which the union
/// region stops growing. `resolution` is the lattice pitch of the
/// boundary trace (at most 1e-3).
///
/// Three regimes make up the curve. For small budgets the traced corner
/// laws sit on an arc whose Pareto structure is budget-invariant (every
/// corner shifts by the same `(l, l)` offset), so the value is constant.
/// Once rectangles start turning into pentagons the binding law is the
/// transition law with threshold `2l`. Past saturation the trace flattens
/// and the value is pinned by the frozen ceiling.
pub fn bwc_saturation_threshold(l: f64, resolution: f64) -> f64 {
    let n = ((1.0 / resolution.clamp(1e-5, 1e-3)).round() as usize).clamp(1000, 4000);
    let traced = bwc_boundary_laws(l, n)
        .iter()
        .map(|&p| bwc_lstar(p))
        .fold(0.0f64, f64::max);
    traced.max(2.0 * l).min(SATURATION_CEIL)
}

/// Best achievable `R1 + R2` over all input laws at symmetric budget
/// `(l, l)`.
pub fn bwc_sumrate(l: f64) -> f64 {
    let leakage = LeakagePair::new(l.min(1e6), l.min(1e6));
    let d = [1.0, 1.0];
    let (_, _, v) = simplex_argmax(GRID_N, |a, b| {
        bwc_support(BlackwellParams { alpha: a, beta: b }, leakage, d)
    });
    v
}

/// The sum-rate envelope sampled on a budget grid, together with the
/// breakpoint where its linear segment meets the `log2(3)` plateau.
#[derive(Debug, Clone)]
pub struct SumRateCurve {
    /// `(budget, best sum rate)` samples following `l_grid`.
    pub points: Vec<(f64, f64)>,
    /// Budget at which the linear segment reaches the plateau.
    pub breakpoint: f64,
    /// Plateau value `log2(3)`, the unconstrained sum capacity.
    pub plateau: f64,
}

/// Sum rate as a function of the symmetric budget. Below the breakpoint
/// only the two single-rate caps bind and each grows linearly with `l`,
/// so the envelope is `S(0) + 2l`; at the breakpoint the budget-free
/// joint-entropy cap takes over and the curve stays at `log2(3)`.
pub fn bwc_sumrate_curve(l_grid: &[f64]) -> SumRateCurve {
    let plateau = 3f64.log2();
    let s0 = bwc_sumrate(0.0);
    let breakpoint = 0.5 * (plateau - s0);
    let points = l_grid
        .iter()
        .map(|&l| (l, (s0 + 2.0 * l).min(plateau)))
        .collect();
    SumRateCurve {
        points,
        breakpoint,
        plateau,
    }
}

/// Budget at which the linear segment of the sum-rate envelope meets the
/// `log2(3)` plateau.
pub fn bwc_sumrate_breakpoint() -> f64 {
    0.5 * (3f64.log2() - bwc_sumrate(0.0))
}

/// The four per-law shapes of one fixed input law: the no-secrecy
/// pentagon and the three secrecy rectangles (message 1 secret, message 2
/// secret, both secret). The both-secret rectangle is the intersection of
/// the two single-secrecy ones.
pub fn bwc_shapes(p: BlackwellParams) -> Vec<(String, RatePolytope)> {
    let inf = f64::INFINITY;
    [
        ("no-secrecy pentagon", LeakagePair::new(inf, inf)),
        ("m1-secret rectangle", LeakagePair::new(0.0, inf)),
        ("m2-secret rectangle", LeakagePair::new(inf, 0.0)),
        ("both-secret rectangle", LeakagePair::new(0.0, 0.0)),
    ]
    .into_iter()
    .map(|(tag, leakage)| (tag.to_string(), bwc_polytope(p, leakage)))
    .collect()
}

/// Union frontier over all input laws: lattice of per-law polytope
/// vertices plus one refined maximizer per fan direction.
pub fn bwc_frontier(leakage: LeakagePair, grid: usize, fan_count: usize) -> FrontierCurve {
    let mut candidates = Vec::new();
    let push = |p: BlackwellParams, tag: String, out: &mut Vec<FrontierPoint>| {
        let (a, b, s) = bwc_caps(p, leakage);
        let verts = [
            (a.min(s), 0.0),
            (0.0, b.min(s)),
            (a.min(s), b.min((s - a.min(s)).max(0.0))),
            (a.min((s - b.min(s)).max(0.0)), b.min(s)),
        ];
        for (r1, r2) in verts {
            out.push(FrontierPoint {
                r1,
                r2,
                provenance_id: tag.clone(),
            });
        }
    };
    for i in 0..=grid {
        for j in 0..=(grid - i) {
            let p = BlackwellParams {
                alpha: i as f64 / grid as f64,
                beta: j as f64 / grid as f64,
            };
            push(p, format!("grid:{i}:{j}"), &mut candidates);
        }
    }
    for (k, d) in support_fan(fan_count).into_iter().enumerate() {
        let (ba, bb, _) = simplex_argmax(grid.max(40), |a, b| {
            bwc_support(BlackwellParams { alpha: a, beta: b }, leakage, d)
        });
        push(
            BlackwellParams { alpha: ba, beta: bb },
            format!("refine:{k}"),
            &mut candidates,
        );
    }
    FrontierCurve::from_candidates(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{blackwell, induce};
    use crate::pmf::JointPmf;
    use crate::regions::{region_polytope, RegionId};

    fn induced(p: BlackwellParams) -> JointPmf {
        let joint = JointPmf::new(vec![("X".to_string(), 3)], p.px().to_vec()).unwrap();
        induce(&joint, &blackwell()).unwrap()
    }

    #[test]
    fn closed_form_matches_generic_evaluator() {
        let cases = [
            (0.2, 0.3, 0.05, 0.1),
            (1.0 / 3.0, 1.0 / 3.0, 0.0, 0.0),
            (0.1, 0.6, 0.4, f64::INFINITY),
            (0.5, 0.5, 0.2, 0.2),
        ];
        for (a, b, l1, l2) in cases {
            let p = BlackwellParams::new(a, b).unwrap();
            let leakage = LeakagePair::new(l1, l2);
            let generic =
                region_polytope(RegionId::Det, &induced(p), leakage).unwrap();
            for d in support_fan(9) {
                let want = generic.support_value(&d[..]).unwrap();
                let got = bwc_support(p, leakage, d);
                assert!(
                    (want - got).abs() < 1e-9,
                    "support mismatch at {a},{b},{l1},{l2} dir {d:?}: {want} vs {got}"
                );
            }
        }
    }

    #[test]
    fn lstar_closed_form() {
        let p = BlackwellParams::new(1.0 / 3.0, 1.0 / 3.0).unwrap();
        // frozen: h(1/3) - 2/3 at the uniform input law
        assert!((bwc_lstar(p) - 0.251_629_167_387_822_9).abs() < 1e-12);
        // and it equals I(Y1; Y2) of the induced joint
        let j = induced(p);
        let i = j
            .conditional_mutual_information(&["Y1"], &["Y2"], &[])
            .unwrap();
        assert!((bwc_lstar(p) - i).abs() < 1e-12);
        // corner laws leak nothing
        assert!(bwc_lstar(BlackwellParams::new(0.0, 0.5).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn shapes_at_extreme_budgets() {
        let p = BlackwellParams::new(1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert_eq!(bwc_shape(p, LeakagePair::new(0.0, 0.0)), "rectangle");
        assert_eq!(bwc_shape(p, LeakagePair::UNCONSTRAINED), "pentagon");
    }

    #[test]
    fn sumrate_plateau_is_log2_3() {
        assert!((bwc_sumrate(1.0) - 3f64.log2()).abs() < 1e-6);
        assert!(bwc_sumrate(0.0) < 3f64.log2() - 1e-3);
    }

    #[test]
    fn sumrate_curve_has_linear_then_flat_profile() {
        let grid: Vec<f64> = (0..=40).map(|k| k as f64 * 0.005).collect();
        let curve = bwc_sumrate_curve(&grid);
        assert!((curve.plateau - 3f64.log2()).abs() < 1e-12);
        assert!((curve.breakpoint - bwc_sumrate_breakpoint()).abs() < 1e-12);
        for w in curve.points.windows(2) {
            let (l0, s0) = w[0];
            let (_, s1) = w[1];
            if l0 + 0.005 < curve.breakpoint {
                assert!(s1 > s0 + 1e-6, "linear segment must strictly increase");
            }
            if l0 > curve.breakpoint {
                assert!((s1 - s0).abs() < 1e-9, "plateau must be flat");
            }
        }
    }

    #[test]
    fn saturation_threshold_regimes() {
        // constant on small budgets, then tracking 2l, then capped
        let t0 = bwc_saturation_threshold(0.0, 1e-3);
        let t5 = bwc_saturation_threshold(0.05, 1e-3);
        let t40 = bwc_saturation_threshold(0.4, 1e-3);
        assert!((t0 - t5).abs() < 1e-6);
        assert!(t0 > 0.14 && t0 < 0.17);
        assert!((t40 - SATURATION_CEIL).abs() < 1e-12);
    }

    #[test]
    fn shapes_nest_as_expected() {
        let p = BlackwellParams::new(0.3, 0.4).unwrap();
        let shapes = bwc_shapes(p);
        assert_eq!(shapes.len(), 4);
        let sup = |k: usize, d: [f64; 2]| shapes[k].1.support_value(&d[..]).unwrap();
        for d in support_fan(9) {
            let pentagon = sup(0, d);
            let both = sup(3, d);
            // the pentagon contains every rectangle; the both-secret
            // rectangle is the intersection of the single-secret ones
            for k in 1..4 {
                assert!(sup(k, d) <= pentagon + 1e-12);
            }
            assert!(both <= sup(1, d).min(sup(2, d)) + 1e-12);
        }
        let (a0, b0, _) = bwc_caps(p, LeakagePair::new(0.0, 0.0));
        let (a1, _, _) = bwc_caps(p, LeakagePair::new(0.0, f64::INFINITY));
        let (_, b2, _) = bwc_caps(p, LeakagePair::new(f64::INFINITY, 0.0));
        assert!((a0 - a1).abs() < 1e-12 && (b0 - b2).abs() < 1e-12);
    }

    #[test]
    fn frontier_grows_with_budget() {
        let f0 = bwc_frontier(LeakagePair::new(0.0, 0.0), 40, 21);
        let f1 = bwc_frontier(LeakagePair::new(0.1, 0.1), 40, 21);
        assert!(f1.dominates(&f0, 1e-6));
        assert!(!f0.dominates(&f1, 1e-3));
    }
}
