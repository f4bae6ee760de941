//! The catalogue of rate regions: per-distribution polytopes for the
//! inner and outer bounds and the special-case capacity regions, plus
//! leakage-saturation thresholds.
//!
//! Every region is stored as a symbolic inequality system over its rate
//! axes; evaluating the entropy terms on a concrete auxiliary-chain joint
//! yields a halfspace description from which vertices, support values,
//! and containment queries are computed.

use crate::pmf::{JointPmf, PmfError};
use crate::symbolic::{self, IneqSystem, InfoSymbol, NumericRow, SymbolicError};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("unknown region id `{0}`")]
    UnknownId(String),
    #[error("joint law is missing axis {0} required by this region")]
    MissingAxis(String),
    #[error("rate variable {0} is not an axis of this polytope")]
    UnknownRate(String),
    #[error("direction length {got} does not match dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("polytope has no vertices")]
    Empty,
    #[error("invalid input law: {0}")]
    BadLaw(String),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Pmf(#[from] PmfError),
}

/// Leakage budgets (either may be `f64::INFINITY`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakagePair {
    pub l1: f64,
    pub l2: f64,
}

impl LeakagePair {
    pub const UNCONSTRAINED: LeakagePair = LeakagePair {
        l1: f64::INFINITY,
        l2: f64::INFINITY,
    };

    pub fn new(l1: f64, l2: f64) -> Self {
        assert!(l1 >= 0.0 && l2 >= 0.0, "leakage budgets are nonnegative");
        LeakagePair { l1, l2 }
    }
}

/// A private-rate pair on the (R1, R2) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

const FEAS_TOL: f64 = 1e-9;
const DET_TOL: f64 = 1e-12;

/// One face `coeffs . r <= rhs` of a rate polytope.
#[derive(Debug, Clone, Serialize)]
pub struct HalfSpace {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// A bounded polytope of rate vectors in 2 or 3 dimensions. Bounds are
/// clamped below at zero (an empty symbolic bound means the rate is
/// forced to zero, never that the region is empty), and nonnegativity
/// faces are always present, so the origin is always contained.
#[derive(Debug, Clone, Serialize)]
pub struct RatePolytope {
    axes: Vec<String>,
    rows: Vec<HalfSpace>,
}

impl RatePolytope {
    pub fn new(axes: &[&str], numeric_rows: &[NumericRow]) -> Result<Self, RegionError> {
        let axes: Vec<String> = axes.iter().map(|s| s.to_string()).collect();
        let dim = axes.len();
        assert!((2..=3).contains(&dim), "rate polytopes are 2- or 3-dimensional");
        let mut rows = Vec::new();
        for r in numeric_rows {
            let mut coeffs = vec![0.0; dim];
            for (v, c) in &r.coeffs {
                let k = axes
                    .iter()
                    .position(|a| a == v)
                    .ok_or_else(|| RegionError::UnknownRate(v.clone()))?;
                coeffs[k] = *c;
            }
            if coeffs.iter().all(|c| *c == 0.0) {
                continue;
            }
            rows.push(HalfSpace {
                coeffs,
                rhs: r.rhs.max(0.0),
            });
        }
        for k in 0..dim {
            let mut coeffs = vec![0.0; dim];
            coeffs[k] = -1.0;
            rows.push(HalfSpace { coeffs, rhs: 0.0 });
        }
        Ok(RatePolytope { axes, rows })
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn faces(&self) -> &[HalfSpace] {
        &self.rows
    }

    pub fn contains(&self, point: &[f64]) -> Result<bool, RegionError> {
        if point.len() != self.dim() {
            return Err(RegionError::DimensionMismatch {
                got: point.len(),
                want: self.dim(),
            });
        }
        Ok(self.rows.iter().all(|r| {
            r.coeffs.iter().zip(point).map(|(c, x)| c * x).sum::<f64>() <= r.rhs + FEAS_TOL
        }))
    }

    /// All intersection points of `dim` faces that satisfy every other
    /// face within tolerance. Near-singular face combinations are
    /// skipped.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let n = self.rows.len();
        let mut out: Vec<Vec<f64>> = Vec::new();
        let mut push = |v: Vec<f64>| {
            if !out
                .iter()
                .any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() < FEAS_TOL))
            {
                out.push(v);
            }
        };
        let combos: Vec<Vec<usize>> = if d == 2 {
            (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| vec![i, j]))
                .collect()
        } else {
            (0..n)
                .flat_map(|i| {
                    ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |k| vec![i, j, k]))
                })
                .collect()
        };
        for combo in combos {
            let a: Vec<&[f64]> = combo.iter().map(|&i| self.rows[i].coeffs.as_slice()).collect();
            let b: Vec<f64> = combo.iter().map(|&i| self.rows[i].rhs).collect();
            let Some(v) = solve_square(&a, &b) else {
                continue;
            };
            if self.contains(&v).unwrap_or(false) {
                push(v);
            }
        }
        out
    }

    /// Maximum of `direction . r` over the polytope.
    pub fn support_value(&self, direction: &[f64]) -> Result<f64, RegionError> {
        if direction.len() != self.dim() {
            return Err(RegionError::DimensionMismatch {
                got: direction.len(),
                want: self.dim(),
            });
        }
        let verts = self.vertices();
        verts
            .iter()
            .map(|v| v.iter().zip(direction).map(|(x, d)| x * d).sum::<f64>())
            .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.max(s))))
            .ok_or(RegionError::Empty)
    }

    /// The cross-section at `axis = 0`, one dimension lower.
    pub fn slice_at_zero(&self, axis: &str) -> Result<RatePolytope, RegionError> {
        let k = self
            .axes
            .iter()
            .position(|a| a == axis)
            .ok_or_else(|| RegionError::UnknownRate(axis.to_string()))?;
        let axes: Vec<String> = self
            .axes
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, a)| a.clone())
            .collect();
        let rows = self
            .rows
            .iter()
            .filter_map(|r| {
                let coeffs: Vec<f64> = r
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != k)
                    .map(|(_, c)| *c)
                    .collect();
                (coeffs.iter().any(|c| *c != 0.0)).then_some(HalfSpace {
                    coeffs,
                    rhs: r.rhs,
                })
            })
            .collect();
        Ok(RatePolytope { axes, rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Solve the square system given by face normals and offsets; `None` when
/// near-singular.
fn solve_square(a: &[&[f64]], b: &[f64]) -> Option<Vec<f64>> {
    match a.len() {
        2 => {
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det.abs() < DET_TOL {
                return None;
            }
            Some(vec![
                (b[0] * a[1][1] - a[0][1] * b[1]) / det,
                (a[0][0] * b[1] - b[0] * a[1][0]) / det,
            ])
        }
        3 => {
            let m = a;
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            if det.abs() < DET_TOL {
                return None;
            }
            let col = |k: usize| -> f64 {
                let mut c = [[0.0; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        c[i][j] = if j == k { b[i] } else { m[i][j] };
                    }
                }
                c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1])
                    - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
                    + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0])
            };
            Some(vec![col(0) / det, col(1) / det, col(2) / det])
        }
        _ => unreachable!("rate polytopes are 2- or 3-dimensional"),
    }
}

// ---------------------------------------------------------------------
// Region catalogue
// ---------------------------------------------------------------------

/// Identifier of a rate region in the catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionId {
    /// General inner bound over (R0, R1, R2), chain (U0, U1, U2, X).
    Inner,
    /// General outer bound over (R0, R1, R2), chain (W, U, V, X).
    Outer,
    /// Semi-deterministic leakage capacity over (R0, R1, R2), chain (W, V, X).
    Sd,
    /// Degraded-message-set leakage capacity over (R0, R1), chain (W, U, X).
    Dm,
    /// Physically-degraded leakage capacity over (R1, R2), chain (W, U, X).
    Pd,
    /// Semi-deterministic, no common message, over (R1, R2), chain (W, V, X).
    Sd0,
    /// Two-secret-message inner bound over (R1, R2), chain (U0, U1, U2, X).
    Liu,
    /// Semi-deterministic capacity without secrecy over (R1, R2), chain (V, X).
    GpNoSecrecy,
    /// Semi-deterministic, message 1 secret, over (R1, R2), chain (V, X).
    M1Secret,
    /// Semi-deterministic, message 2 secret, over (R1, R2), chain (W, V, X).
    M2Secret,
    /// Alternative form of `M2Secret`, chain (W, V, X).
    M2SecretAlt,
    /// Semi-deterministic, both messages secret, over (R1, R2), chain (W, V, X).
    BothSecret,
    /// Confidential-message capacity over (R0, R1), chain (W, U, X).
    Ck,
    /// Zero-leakage degraded-message-set capacity over (R0, R1), chain (W, U, X).
    Dm0,
    /// Degraded message set without secrecy over (R0, R1), chain (W, X).
    DegMsg,
    /// Deterministic-channel leakage capacity over (R1, R2), input law only.
    Det,
}

const INNER_REGION: &str = "\
R1 <= I(U1;Y1|U0) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1
R0 + R1 <= I(U0,U1;Y1) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1
R0 + R1 <= I(U0,U1;Y1)
R2 <= I(U2;Y2|U0) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2
R0 + R2 <= I(U0,U2;Y2) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2
R0 + R2 <= I(U0,U2;Y2)
R0 + R1 + R2 <= I(U0,U1;Y1) + I(U2;Y2|U0) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1
R0 + R1 + R2 <= I(U1;Y1|U0) + I(U0,U2;Y2) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2
R0 + R1 + R2 <= I(U1;Y1|U0) + I(U2;Y2|U0) - I(U1;U2|U0) + I(U0;Y1)
R0 + R1 + R2 <= I(U1;Y1|U0) + I(U2;Y2|U0) - I(U1;U2|U0) + I(U0;Y2)
2*R0 + R1 + R2 <= I(U0,U1;Y1) + I(U0,U2;Y2) - I(U1;U2|U0)
";

const OUTER_REGION: &str = "\
R0 <= I(W;Y1)
R0 <= I(W;Y2)
R1 <= I(U;Y1|V,W) - I(U;Y2|V,W) + L1
R1 <= I(U;Y1|W) - I(U;Y2|W) + L1
R0 + R1 <= I(U;Y1|W) + I(W;Y1)
R0 + R1 <= I(U;Y1|W) + I(W;Y2)
R2 <= I(V;Y2|U,W) - I(V;Y1|U,W) + L2
R2 <= I(V;Y2|W) - I(V;Y1|W) + L2
R0 + R2 <= I(V;Y2|W) + I(W;Y1)
R0 + R2 <= I(V;Y2|W) + I(W;Y2)
R0 + R1 + R2 <= I(U;Y1|V,W) + I(V;Y2|W) + I(W;Y1)
R0 + R1 + R2 <= I(U;Y1|V,W) + I(V;Y2|W) + I(W;Y2)
R0 + R1 + R2 <= I(U;Y1|W) + I(V;Y2|U,W) + I(W;Y1)
R0 + R1 + R2 <= I(U;Y1|W) + I(V;Y2|U,W) + I(W;Y2)
";

const SD_REGION: &str = "\
R1 <= H(Y1|V,W,Y2) + L1
R0 + R1 <= H(Y1|V,W,Y2) + I(W;Y1) + L1
R0 + R1 <= H(Y1)
R2 <= I(V;Y2|W) - I(V;Y1|W) + L2
R0 + R2 <= I(V,W;Y2) - I(V;Y1|W) + L2
R0 + R2 <= I(V,W;Y2)
R0 + R1 + R2 <= H(Y1|V,W,Y2) + I(V;Y2|W) + I(W;Y1) + L1
R0 + R1 + R2 <= H(Y1|V,W) + I(V;Y2|W) + I(W;Y1)
R0 + R1 + R2 <= H(Y1|V,W) + I(V;Y2|W) + I(W;Y2)
2*R0 + R1 + R2 <= H(Y1|V,W) + I(V,W;Y2) + I(W;Y1)
";

const DM_REGION: &str = "\
R0 <= I(W;Y2)
R1 <= I(U;Y1|W) - I(U;Y2|W) + L1
R0 + R1 <= I(U,W;Y1) - I(U;Y2|W) + L1
R0 + R1 <= I(U;Y1|W) + I(W;Y1)
R0 + R1 <= I(U;Y1|W) + I(W;Y2)
";

const PD_REGION: &str = "\
R2 <= I(W;Y2)
R1 <= I(U;Y1|W) - I(U;Y2|W) + L1
R1 + R2 <= I(U;Y1|W) + I(W;Y2)
";

const SD0_REGION: &str = "\
R1 <= H(Y1|V,W,Y2) + L1
R1 <= H(Y1)
R2 <= I(V;Y2|W) - I(V;Y1|W) + L2
R2 <= I(V,W;Y2)
R1 + R2 <= H(Y1|V,W,Y2) + I(V;Y2|W) + I(W;Y1) + L1
R1 + R2 <= H(Y1|V,W) + I(V;Y2|W) + I(W;Y1)
R1 + R2 <= H(Y1|V,W) + I(V;Y2|W) + I(W;Y2)
";

const LIU_REGION: &str = "\
R1 <= I(U1;Y1|U0) - I(U1;U2|U0) - I(U1;Y2|U0,U2)
R2 <= I(U2;Y2|U0) - I(U1;U2|U0) - I(U2;Y1|U0,U1)
";

const GP_NOSECRECY_REGION: &str = "\
R1 <= H(Y1)
R2 <= I(V;Y2)
R1 + R2 <= H(Y1|V) + I(V;Y2)
";

const M1SECRET_REGION: &str = "\
R1 <= H(Y1|V,Y2)
R2 <= I(V;Y2)
";

const M2SECRET_REGION: &str = "\
R1 <= H(Y1)
R1 <= H(Y1|W) + I(W;Y2)
R2 <= I(V;Y2|W) - I(V;Y1|W)
";

const M2SECRET_ALT_REGION: &str = "\
R1 <= H(Y1)
R2 <= I(V;Y2|W) - I(V;Y1|W)
R1 + R2 <= H(Y1|V,W) + I(V,W;Y2)
";

const BOTHSECRET_REGION: &str = "\
R1 <= H(Y1|V,W,Y2)
R2 <= I(V;Y2|W) - I(V;Y1|W)
";

const CK_REGION: &str = "\
R0 <= I(W;Y1)
R0 <= I(W;Y2)
R1 <= I(U;Y1|W) - I(U;Y2|W)
";

const DM0_REGION: &str = "\
R0 <= I(W;Y2)
R1 <= I(U;Y1|W) - I(U;Y2|W)
R0 + R1 <= I(U,W;Y1) - I(U;Y2|W)
";

const DEGMSG_REGION: &str = "\
R0 <= I(W;Y2)
R0 + R1 <= I(X;Y1|W) + I(W;Y2)
R0 + R1 <= I(X;Y1)
";

const DET_REGION: &str = "\
R1 <= H(Y1)
R1 <= H(Y1|Y2) + L1
R2 <= H(Y2)
R2 <= H(Y2|Y1) + L2
R1 + R2 <= H(Y1,Y2)
";

impl RegionId {
    pub const ALL: [RegionId; 16] = [
        RegionId::Inner,
        RegionId::Outer,
        RegionId::Sd,
        RegionId::Dm,
        RegionId::Pd,
        RegionId::Sd0,
        RegionId::Liu,
        RegionId::GpNoSecrecy,
        RegionId::M1Secret,
        RegionId::M2Secret,
        RegionId::M2SecretAlt,
        RegionId::BothSecret,
        RegionId::Ck,
        RegionId::Dm0,
        RegionId::DegMsg,
        RegionId::Det,
    ];

    pub fn id_str(&self) -> &'static str {
        match self {
            RegionId::Inner => "inner",
            RegionId::Outer => "outer",
            RegionId::Sd => "sd",
            RegionId::Dm => "dm",
            RegionId::Pd => "pd",
            RegionId::Sd0 => "sd0",
            RegionId::Liu => "liu",
            RegionId::GpNoSecrecy => "gp_nosecrecy",
            RegionId::M1Secret => "m1secret",
            RegionId::M2Secret => "m2secret",
            RegionId::M2SecretAlt => "m2secret_alt",
            RegionId::BothSecret => "bothsecret",
            RegionId::Ck => "ck",
            RegionId::Dm0 => "dm0",
            RegionId::DegMsg => "degmsg",
            RegionId::Det => "det",
        }
    }

    /// Auxiliary axes the input joint must carry (X always last, outputs
    /// Y1/Y2 appended by channel induction).
    pub fn aux_axes(&self) -> &'static [&'static str] {
        match self {
            RegionId::Inner | RegionId::Liu => &["U0", "U1", "U2", "X"],
            RegionId::Outer => &["W", "U", "V", "X"],
            RegionId::Sd
            | RegionId::Sd0
            | RegionId::M2Secret
            | RegionId::M2SecretAlt
            | RegionId::BothSecret => &["W", "V", "X"],
            RegionId::Dm | RegionId::Pd | RegionId::Ck | RegionId::Dm0 => &["W", "U", "X"],
            RegionId::GpNoSecrecy | RegionId::M1Secret => &["V", "X"],
            RegionId::DegMsg => &["W", "X"],
            RegionId::Det => &["X"],
        }
    }

    pub fn rate_axes(&self) -> &'static [&'static str] {
        match self {
            RegionId::Inner | RegionId::Outer | RegionId::Sd => &["R0", "R1", "R2"],
            RegionId::Dm | RegionId::Ck | RegionId::Dm0 | RegionId::DegMsg => &["R0", "R1"],
            _ => &["R1", "R2"],
        }
    }

    /// The defining inequalities, minima already expanded into rows.
    pub fn system(&self) -> IneqSystem {
        let text = match self {
            RegionId::Inner => INNER_REGION,
            RegionId::Outer => OUTER_REGION,
            RegionId::Sd => SD_REGION,
            RegionId::Dm => DM_REGION,
            RegionId::Pd => PD_REGION,
            RegionId::Sd0 => SD0_REGION,
            RegionId::Liu => LIU_REGION,
            RegionId::GpNoSecrecy => GP_NOSECRECY_REGION,
            RegionId::M1Secret => M1SECRET_REGION,
            RegionId::M2Secret => M2SECRET_REGION,
            RegionId::M2SecretAlt => M2SECRET_ALT_REGION,
            RegionId::BothSecret => BOTHSECRET_REGION,
            RegionId::Ck => CK_REGION,
            RegionId::Dm0 => DM0_REGION,
            RegionId::DegMsg => DEGMSG_REGION,
            RegionId::Det => DET_REGION,
        };
        symbolic::parse_system(text).expect("static region rows parse")
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id_str())
    }
}

impl FromStr for RegionId {
    type Err = RegionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RegionId::ALL
            .into_iter()
            .find(|r| r.id_str() == s)
            .ok_or_else(|| RegionError::UnknownId(s.to_string()))
    }
}

/// Evaluate a region's inequalities on a joint law over its auxiliary
/// axes plus the channel outputs, producing the rate polytope.
pub fn region_polytope(
    id: RegionId,
    joint: &JointPmf,
    leakage: LeakagePair,
) -> Result<RatePolytope, RegionError> {
    for ax in id.aux_axes().iter().chain(["Y1", "Y2"].iter()) {
        if joint.axis_size(ax).is_none() {
            return Err(RegionError::MissingAxis(ax.to_string()));
        }
    }
    let rows = id.system().evaluate_on(joint, leakage.l1, leakage.l2)?;
    RatePolytope::new(id.rate_axes(), &rows)
}

// ---------------------------------------------------------------------
// Leakage saturation
// ---------------------------------------------------------------------

/// The per-distribution leakage level above which budget `j` stops
/// mattering for the no-common-message inner bound.
pub fn leakage_threshold(joint: &JointPmf, j: u8) -> Result<f64, RegionError> {
    assert!(j == 1 || j == 2, "receiver index must be 1 or 2");
    let (yj, uj, ubar, ybar): (&str, &str, &str, &str) = if j == 1 {
        ("Y1", "U1", "U2", "Y2")
    } else {
        ("Y2", "U2", "U1", "Y1")
    };
    let a = joint.conditional_mutual_information(&["U0"], &[yj], &[])?;
    let b = joint.conditional_mutual_information(&[uj], &[ubar, ybar], &["U0"])?;
    Ok(a + b)
}

/// Verdict of the saturation check for one auxiliary chain.
#[derive(Debug, Clone, Serialize)]
pub struct SaturationReport {
    pub l1_star: f64,
    pub l2_star: f64,
    pub l1_saturated: bool,
    pub l2_saturated: bool,
    /// Supports of the zero-common-rate slice agree with the slice where
    /// every saturated budget is replaced by infinity.
    pub supports_match: bool,
}

/// Fan of directions used to compare two-dimensional slices by support.
pub fn support_fan(count: usize) -> Vec<[f64; 2]> {
    (0..count)
        .map(|k| {
            let t = (k as f64) / ((count - 1) as f64) * std::f64::consts::FRAC_PI_2;
            [t.cos(), t.sin()]
        })
        .collect()
}

/// Check the saturation thresholds on one chain: whenever `l_j` meets its
/// threshold, the (R1, R2) slice of the inner bound at `R0 = 0` must be
/// unchanged by sending that budget to infinity. Supports are compared
/// over a 26-direction fan.
pub fn saturation_check(
    joint: &JointPmf,
    leakage: LeakagePair,
) -> Result<SaturationReport, RegionError> {
    let l1_star = leakage_threshold(joint, 1)?;
    let l2_star = leakage_threshold(joint, 2)?;
    let l1_saturated = leakage.l1 >= l1_star - FEAS_TOL;
    let l2_saturated = leakage.l2 >= l2_star - FEAS_TOL;
    let relaxed = LeakagePair {
        l1: if l1_saturated { f64::INFINITY } else { leakage.l1 },
        l2: if l2_saturated { f64::INFINITY } else { leakage.l2 },
    };
    let slice = |l: LeakagePair| -> Result<RatePolytope, RegionError> {
        region_polytope(RegionId::Inner, joint, l)?.slice_at_zero("R0")
    };
    let a = slice(leakage)?;
    let b = slice(relaxed)?;
    let mut supports_match = true;
    for d in support_fan(26) {
        let sa = a.support_value(&d)?;
        let sb = b.support_value(&d)?;
        if (sa - sb).abs() > FEAS_TOL {
            supports_match = false;
            break;
        }
    }
    Ok(SaturationReport {
        l1_star,
        l2_star,
        l1_saturated,
        l2_saturated,
        supports_match,
    })
}

/// Values of every symbol of a system on a joint law, exposed for
/// reporting.
pub fn symbol_values(
    sys: &IneqSystem,
    joint: &JointPmf,
    leakage: LeakagePair,
) -> Result<Vec<(InfoSymbol, f64)>, RegionError> {
    let mut out = Vec::new();
    for s in sys.symbols() {
        let v = s.evaluate(joint, leakage.l1, leakage.l2)?;
        out.push((s, v));
    }
    Ok(out)
}
