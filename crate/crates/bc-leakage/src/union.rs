//! Union-over-distributions frontier search: deterministic sampling of
//! auxiliary chains, nondominated (R1, R2) staircases, and a
//! derivative-free refinement pass.

use crate::channel::{induce, ChannelError, Dmbc};
use crate::pmf::JointPmf;
use crate::regions::{
    region_polytope, support_fan, LeakagePair, RatePolytope, RegionError, RegionId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UnionError {
    #[error("region {0} has no (R1, R2) plane to project onto")]
    NoPrivatePlane(RegionId),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Deduplication tolerance for frontier points.
const TIE_TOL: f64 = 1e-12;

/// How much sampling and refinement effort to spend.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    /// Resolution of the simplex lattice scan (points with coordinates
    /// k/grid). Skipped when the lattice would be unreasonably large.
    pub grid: usize,
    /// Number of flat-Dirichlet samples.
    pub samples: usize,
    /// Hill-climbing iterations per refinement run.
    pub refine_steps: usize,
    /// Independent refinement restarts per search direction.
    pub restarts: usize,
    /// Base seed; every sample and restart derives its own stream from
    /// it, so results are reproducible and independent of ordering.
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            grid: 6,
            samples: 120,
            refine_steps: 40,
            restarts: 3,
            seed: 0,
        }
    }
}

/// A nondominated point with the identifier of the sample or refinement
/// run that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct FrontierPoint {
    pub r1: f64,
    pub r2: f64,
    pub provenance_id: String,
}

/// A staircase of nondominated (R1, R2) points, sorted by increasing R1
/// and strictly decreasing R2.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FrontierCurve {
    points: Vec<FrontierPoint>,
}

impl FrontierCurve {
    /// Keep only the nondominated candidates. Points equal within
    /// `1e-12` in R1 collapse to the one with the larger R2.
    pub fn from_candidates(mut candidates: Vec<FrontierPoint>) -> Self {
        candidates.sort_by(|a, b| {
            b.r1.partial_cmp(&a.r1)
                .unwrap()
                .then(b.r2.partial_cmp(&a.r2).unwrap())
        });
        let mut points: Vec<FrontierPoint> = Vec::new();
        for c in candidates {
            match points.last() {
                Some(last) if c.r2 <= last.r2 + TIE_TOL => {}
                Some(last) if (c.r1 - last.r1).abs() < TIE_TOL => {
                    // same R1 within tolerance: the larger R2 wins
                    let last = points.last_mut().unwrap();
                    last.r2 = c.r2;
                    last.provenance_id = c.provenance_id;
                }
                _ => points.push(c),
            }
        }
        points.reverse();
        FrontierCurve { points }
    }

    pub fn points(&self) -> &[FrontierPoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest achievable R2 at first coordinate `r1` (staircase query);
    /// zero demand is always achievable at the origin.
    pub fn max_r2_at(&self, r1: f64) -> f64 {
        self.points
            .iter()
            .filter(|p| p.r1 >= r1 - TIE_TOL)
            .map(|p| p.r2)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every point of `other` lies under this staircase after
    /// inflating it by `margin` in both coordinates.
    pub fn dominates(&self, other: &FrontierCurve, margin: f64) -> bool {
        other.points.iter().all(|q| {
            self.points
                .iter()
                .any(|p| p.r1 + margin >= q.r1 && p.r2 + margin >= q.r2)
        })
    }

    /// CSV rendering, one nondominated point per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r1_bits,r2_bits,provenance_id\n");
        for p in &self.points {
            out.push_str(&format!("{:.12},{:.12},{}\n", p.r1, p.r2, p.provenance_id));
        }
        out
    }
}

/// All lattice points with coordinates `k/grid` on the probability
/// simplex over `cells` outcomes, or `None` when the lattice exceeds
/// `cap` points.
fn simplex_lattice(cells: usize, grid: usize, cap: usize) -> Option<Vec<Vec<f64>>> {
    let mut count: usize = 1; // C(grid + cells - 1, cells - 1)
    for i in 1..cells {
        count = count.checked_mul(grid + i)?.checked_div(i)?;
        if count > cap * 64 {
            return None;
        }
    }
    if count > cap {
        return None;
    }
    let mut out = Vec::with_capacity(count);
    let mut comp = vec![0usize; cells];
    fn rec(comp: &mut Vec<usize>, idx: usize, left: usize, grid: usize, out: &mut Vec<Vec<f64>>) {
        if idx == comp.len() - 1 {
            comp[idx] = left;
            out.push(comp.iter().map(|&k| k as f64 / grid as f64).collect());
            return;
        }
        for k in 0..=left {
            comp[idx] = k;
            rec(comp, idx + 1, left - k, grid, out);
        }
    }
    rec(&mut comp, 0, grid, grid, &mut out);
    Some(out)
}

fn dirichlet_flat(rng: &mut ChaCha8Rng, cells: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..cells)
        .map(|_| -f64::ln(rng.gen_range(1e-12..1.0)))
        .collect();
    let s: f64 = t.iter().sum();
    t.iter_mut().for_each(|p| *p /= s);
    t
}

/// Deterministic stream of candidate auxiliary joints over the given
/// axes: a simplex lattice scan followed by flat-Dirichlet draws, each
/// draw on its own RNG stream derived from `(seed, index)`.
pub fn sample_aux_joints(
    axes: &[(String, usize)],
    budget: &SearchBudget,
) -> Vec<(String, JointPmf)> {
    let cells: usize = axes.iter().map(|(_, s)| s).product();
    let mut out = Vec::new();
    if budget.grid > 0 {
        if let Some(lattice) = simplex_lattice(cells, budget.grid, 4000) {
            for (i, t) in lattice.into_iter().enumerate() {
                if let Ok(j) = JointPmf::new(axes.to_vec(), t) {
                    out.push((format!("grid:{i}"), j));
                }
            }
        }
    }
    for k in 0..budget.samples {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        rng.set_stream(k as u64);
        let t = dirichlet_flat(&mut rng, cells);
        if let Ok(j) = JointPmf::new(axes.to_vec(), t) {
            out.push((format!("dirichlet:{k}"), j));
        }
    }
    out
}

/// The (R1, R2) cross-section of a region polytope, with any common-rate
/// axis fixed to zero.
fn private_plane(
    id: RegionId,
    joint: &JointPmf,
    leakage: LeakagePair,
) -> Result<RatePolytope, UnionError> {
    let p = region_polytope(id, joint, leakage)?;
    let axes: Vec<&str> = p.axes().iter().map(|s| s.as_str()).collect();
    if axes == ["R1", "R2"] {
        return Ok(p);
    }
    if axes == ["R0", "R1", "R2"] {
        return Ok(p.slice_at_zero("R0")?);
    }
    Err(UnionError::NoPrivatePlane(id))
}

fn support_of(
    id: RegionId,
    channel: &Dmbc,
    tensor: &[f64],
    axes: &[(String, usize)],
    leakage: LeakagePair,
    dir: &[f64; 2],
) -> Option<f64> {
    let joint = JointPmf::new(axes.to_vec(), tensor.to_vec()).ok()?;
    let induced = induce(&joint, channel).ok()?;
    let plane = private_plane(id, &induced, leakage).ok()?;
    plane.support_value(&dir[..]).ok()
}

/// Approximate the union-over-distributions frontier of a region's
/// (R1, R2) trace at `R0 = 0`.
///
/// Vertices of every sampled polytope are merged into a nondominated
/// staircase; a derivative-free hill climb (uniform perturbations,
/// halving step on failure, `restarts` independent streams) then pushes
/// the support out along a fan of directions. The whole procedure is a
/// pure function of the budget, so equal budgets give equal frontiers.
pub fn union_frontier(
    id: RegionId,
    channel: &Dmbc,
    leakage: LeakagePair,
    aux_card: usize,
    budget: &SearchBudget,
) -> Result<FrontierCurve, UnionError> {
    let axes: Vec<(String, usize)> = id
        .aux_axes()
        .iter()
        .map(|&a| {
            let size = if a == "X" { channel.x_size } else { aux_card };
            (a.to_string(), size)
        })
        .collect();
    let samples = sample_aux_joints(&axes, budget);
    let mut candidates: Vec<FrontierPoint> = Vec::new();
    let mut polytopes: Vec<(usize, RatePolytope)> = Vec::new();
    for (i, (tag, joint)) in samples.iter().enumerate() {
        let induced = induce(joint, channel)?;
        let plane = private_plane(id, &induced, leakage)?;
        for v in plane.vertices() {
            candidates.push(FrontierPoint {
                r1: v[0],
                r2: v[1],
                provenance_id: tag.clone(),
            });
        }
        polytopes.push((i, plane));
    }

    if budget.restarts > 0 && !samples.is_empty() {
        let fan = support_fan(33);
        for (d, dir) in fan.iter().enumerate() {
            // best sampled start for this direction
            let start = polytopes
                .iter()
                .filter_map(|(i, p)| p.support_value(&dir[..]).ok().map(|s| (*i, s)))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            let Some((start_idx, mut best_support)) = start else {
                continue;
            };
            let mut best = samples[start_idx].1.tensor().to_vec();
            for restart in 0..budget.restarts {
                let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
                rng.set_stream(1_000_000 + (d * budget.restarts + restart) as u64);
                let mut cur = best.clone();
                let mut cur_support = best_support;
                let mut step = 0.25f64;
                for _ in 0..budget.refine_steps {
                    let mut prop: Vec<f64> = cur
                        .iter()
                        .map(|&p| (p + step * rng.gen_range(-1.0..1.0)).max(0.0))
                        .collect();
                    let s: f64 = prop.iter().sum();
                    if s <= 0.0 {
                        continue;
                    }
                    prop.iter_mut().for_each(|p| *p /= s);
                    match support_of(id, channel, &prop, &axes, leakage, dir) {
                        Some(v) if v > cur_support + 1e-12 => {
                            cur = prop;
                            cur_support = v;
                        }
                        _ => step = (step * 0.5).max(1e-4),
                    }
                }
                if cur_support > best_support {
                    best_support = cur_support;
                    best = cur;
                }
            }
            if let Ok(joint) = JointPmf::new(axes.clone(), best) {
                if let Ok(induced) = induce(&joint, channel) {
                    if let Ok(plane) = private_plane(id, &induced, leakage) {
                        for v in plane.vertices() {
                            candidates.push(FrontierPoint {
                                r1: v[0],
                                r2: v[1],
                                provenance_id: format!("refine:{d}"),
                            });
                        }
                    }
                }
            }
        }
    }

    Ok(FrontierCurve::from_candidates(candidates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::blackwell;

    fn fp(r1: f64, r2: f64) -> FrontierPoint {
        FrontierPoint {
            r1,
            r2,
            provenance_id: "t".into(),
        }
    }

    #[test]
    fn staircase_filters_dominated_points() {
        let curve = FrontierCurve::from_candidates(vec![
            fp(0.2, 0.5),
            fp(0.4, 0.4),
            fp(0.3, 0.3), // dominated by (0.4, 0.4)
            fp(0.4, 0.2), // dominated
            fp(0.1, 0.6),
        ]);
        let got: Vec<(f64, f64)> = curve.points().iter().map(|p| (p.r1, p.r2)).collect();
        assert_eq!(got, vec![(0.1, 0.6), (0.2, 0.5), (0.4, 0.4)]);
        assert!((curve.max_r2_at(0.15) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn staircase_tie_break_keeps_larger_r2() {
        let curve =
            FrontierCurve::from_candidates(vec![fp(0.2, 0.3), fp(0.2 + 1e-13, 0.5)]);
        assert_eq!(curve.points().len(), 1);
        assert!((curve.points()[0].r2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dominance_and_margin() {
        let big = FrontierCurve::from_candidates(vec![fp(0.5, 0.5), fp(1.0, 0.0)]);
        let small = FrontierCurve::from_candidates(vec![fp(0.4, 0.4)]);
        assert!(big.dominates(&small, 0.0));
        assert!(!small.dominates(&big, 0.0));
        assert!(!small.dominates(&big, 0.2));
        assert!(small.dominates(&big, 0.61));
    }

    #[test]
    fn csv_shape() {
        let curve = FrontierCurve::from_candidates(vec![fp(0.25, 0.75)]);
        let csv = curve.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "r1_bits,r2_bits,provenance_id");
        assert!(lines.next().unwrap().starts_with("0.25"));
    }

    #[test]
    fn simplex_lattice_counts() {
        let l = simplex_lattice(3, 4, 1000).unwrap();
        assert_eq!(l.len(), 15); // C(6, 2)
        for t in &l {
            assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(simplex_lattice(24, 12, 4000).is_none());
    }

    #[test]
    fn sampling_is_deterministic() {
        let axes = vec![("X".to_string(), 3)];
        let budget = SearchBudget {
            samples: 10,
            ..SearchBudget::default()
        };
        let a = sample_aux_joints(&axes, &budget);
        let b = sample_aux_joints(&axes, &budget);
        assert_eq!(a.len(), b.len());
        for ((ta, ja), (tb, jb)) in a.iter().zip(&b) {
            assert_eq!(ta, tb);
            assert_eq!(ja.tensor(), jb.tensor());
        }
    }

    #[test]
    fn union_frontier_deterministic_and_monotone_in_samples() {
        let c = blackwell();
        let leakage = LeakagePair::new(0.05, 0.05);
        let small = SearchBudget {
            grid: 8,
            samples: 20,
            restarts: 0,
            ..SearchBudget::default()
        };
        let large = SearchBudget {
            samples: 60,
            ..small
        };
        let f1 = union_frontier(RegionId::Det, &c, leakage, 1, &small).unwrap();
        let f2 = union_frontier(RegionId::Det, &c, leakage, 1, &small).unwrap();
        assert_eq!(f1.to_csv(), f2.to_csv());
        // with refinement off, a larger budget sees a superset of samples
        let f3 = union_frontier(RegionId::Det, &c, leakage, 1, &large).unwrap();
        assert!(f3.dominates(&f1, 1e-9));
    }

    #[test]
    fn blackwell_det_frontier_reaches_known_corners() {
        // without leakage constraints the sum rate log2(3) is achievable
        let c = blackwell();
        let budget = SearchBudget {
            grid: 24,
            samples: 40,
            restarts: 2,
            refine_steps: 30,
            seed: 7,
        };
        let f = union_frontier(
            RegionId::Det,
            &c,
            LeakagePair::UNCONSTRAINED,
            1,
            &budget,
        )
        .unwrap();
        let best_sum = f
            .points()
            .iter()
            .map(|p| p.r1 + p.r2)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            (best_sum - 3f64.log2()).abs() < 5e-3,
            "best sum {best_sum} vs {}",
            3f64.log2()
        );
    }
}
