//! Finite-alphabet probability mass functions and the information
//! measures (base-2 entropy, conditional mutual information) that every
//! region formula is built from.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so they can be evaluated from many threads at once.

use thiserror::Error;

/// Normalization tolerance accepted at construction time.
pub const NORM_TOL: f64 = 1e-9;

/// Probabilities below this are treated as exact zeros in log terms.
const LOG_ZERO_TOL: f64 = 1e-15;

#[derive(Debug, Error)]
pub enum PmfError {
    #[error("negative probability {value} at index {index}")]
    Negative { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1 within {NORM_TOL}")]
    NotNormalized { sum: f64 },
    #[error("tensor length {got} does not match product of axis sizes {want}")]
    ShapeMismatch { got: usize, want: usize },
    #[error("duplicate axis name `{0}`")]
    DuplicateAxis(String),
    #[error("unknown axis name `{0}`")]
    UnknownAxis(String),
    #[error("axis groups overlap on `{0}`")]
    OverlappingAxes(String),
    #[error("probability {0} outside [0,1]")]
    Domain(f64),
    #[error("empty axis group")]
    EmptyAxisGroup,
}

/// Binary entropy in bits, with `0 log 0 := 0`.
pub fn binary_entropy(p: f64) -> Result<f64, PmfError> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(PmfError::Domain(p));
    }
    let p = p.clamp(0.0, 1.0);
    Ok(xlog2x(p) + xlog2x(1.0 - p))
}

/// `-x log2 x`, zero at zero.
fn xlog2x(x: f64) -> f64 {
    if x < LOG_ZERO_TOL {
        0.0
    } else {
        -x * x.log2()
    }
}

/// A distribution over a single unnamed finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self, PmfError> {
        validate_probs(&probs)?;
        let mut probs = probs;
        renormalize(&mut probs);
        Ok(Self { probs })
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn entropy(&self) -> f64 {
        self.probs.iter().map(|&p| xlog2x(p)).sum()
    }
}

fn validate_probs(probs: &[f64]) -> Result<(), PmfError> {
    for (i, &p) in probs.iter().enumerate() {
        if p < -1e-12 {
            return Err(PmfError::Negative { index: i, value: p });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > NORM_TOL {
        return Err(PmfError::NotNormalized { sum });
    }
    Ok(())
}

fn renormalize(probs: &mut [f64]) {
    let sum: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p = (*p / sum).max(0.0);
    }
}

/// Dense joint distribution over named finite axes, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axes: Vec<(String, usize)>,
    tensor: Vec<f64>,
}

impl JointPmf {
    pub fn new(axes: Vec<(String, usize)>, tensor: Vec<f64>) -> Result<Self, PmfError> {
        let want: usize = axes.iter().map(|(_, s)| s).product();
        if tensor.len() != want {
            return Err(PmfError::ShapeMismatch {
                got: tensor.len(),
                want,
            });
        }
        for i in 0..axes.len() {
            for j in i + 1..axes.len() {
                if axes[i].0 == axes[j].0 {
                    return Err(PmfError::DuplicateAxis(axes[i].0.clone()));
                }
            }
        }
        validate_probs(&tensor)?;
        let mut tensor = tensor;
        renormalize(&mut tensor);
        Ok(Self { axes, tensor })
    }

    pub fn axes(&self) -> &[(String, usize)] {
        &self.axes
    }

    pub fn tensor(&self) -> &[f64] {
        &self.tensor
    }

    pub fn axis_size(&self, name: &str) -> Option<usize> {
        self.axes.iter().find(|(n, _)| n == name).map(|(_, s)| *s)
    }

    fn axis_index(&self, name: &str) -> Result<usize, PmfError> {
        self.axes
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| PmfError::UnknownAxis(name.to_string()))
    }

    /// Iterate (multi-index, probability) over the tensor.
    fn iter_cells(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        let sizes: Vec<usize> = self.axes.iter().map(|(_, s)| *s).collect();
        self.tensor.iter().enumerate().map(move |(flat, &p)| {
            let mut idx = vec![0; sizes.len()];
            let mut rem = flat;
            for k in (0..sizes.len()).rev() {
                idx[k] = rem % sizes[k];
                rem /= sizes[k];
            }
            (idx, p)
        })
    }

    /// Marginal distribution over the named axes, in the order given.
    pub fn marginal(&self, names: &[&str]) -> Result<JointPmf, PmfError> {
        if names.is_empty() {
            return Err(PmfError::EmptyAxisGroup);
        }
        let positions: Vec<usize> = names
            .iter()
            .map(|n| self.axis_index(n))
            .collect::<Result<_, _>>()?;
        let out_axes: Vec<(String, usize)> = positions
            .iter()
            .map(|&p| self.axes[p].clone())
            .collect();
        let out_sizes: Vec<usize> = out_axes.iter().map(|(_, s)| *s).collect();
        let mut out = vec![0.0; out_sizes.iter().product()];
        for (idx, p) in self.iter_cells() {
            let mut flat = 0;
            for (k, &pos) in positions.iter().enumerate() {
                flat = flat * out_sizes[k] + idx[pos];
            }
            out[flat] += p;
        }
        Ok(JointPmf {
            axes: out_axes,
            tensor: out,
        })
    }

    /// Entropy in bits of the marginal over `names`; `names` empty means
    /// H of nothing, which is zero.
    pub fn entropy(&self, names: &[&str]) -> Result<f64, PmfError> {
        if names.is_empty() {
            return Ok(0.0);
        }
        let m = self.marginal(names)?;
        Ok(m.tensor.iter().map(|&p| xlog2x(p)).sum())
    }

    /// Conditional entropy H(A | C) = H(A,C) - H(C).
    pub fn conditional_entropy(&self, a: &[&str], c: &[&str]) -> Result<f64, PmfError> {
        check_disjoint(&[a, c])?;
        if a.is_empty() {
            return Err(PmfError::EmptyAxisGroup);
        }
        let joint: Vec<&str> = a.iter().chain(c.iter()).copied().collect();
        Ok(self.entropy(&joint)? - self.entropy(c)?)
    }

    /// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C). `c` may be empty.
    pub fn conditional_mutual_information(
        &self,
        a: &[&str],
        b: &[&str],
        c: &[&str],
    ) -> Result<f64, PmfError> {
        if a.is_empty() || b.is_empty() {
            return Err(PmfError::EmptyAxisGroup);
        }
        check_disjoint(&[a, b, c])?;
        let ac: Vec<&str> = a.iter().chain(c.iter()).copied().collect();
        let bc: Vec<&str> = b.iter().chain(c.iter()).copied().collect();
        let abc: Vec<&str> = a.iter().chain(b.iter()).chain(c.iter()).copied().collect();
        Ok(self.entropy(&ac)? + self.entropy(&bc)? - self.entropy(&abc)? - self.entropy(c)?)
    }
}

fn check_disjoint(groups: &[&[&str]]) -> Result<(), PmfError> {
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            for n in groups[i] {
                if groups[j].contains(n) {
                    return Err(PmfError::OverlappingAxes(n.to_string()));
                }
            }
        }
    }
    Ok(())
}
