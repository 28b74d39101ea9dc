//! Probability distributions over a flat index and their joint views.
//!
//! A [`Distribution`] is a plain probability vector `p(1..N)`. Pairing it with
//! a [`Shape`] of the same total gives a [`JointView`]: the same numbers read
//! as `p(x1, …, xn) = p(flatten(x))`. Marginals and conditionals are computed
//! over groups of axes, each group acting as one virtual subsystem indexed by
//! its own mixed-radix order.

use serde::Serialize;

use crate::{Error, MultiIndex, Result, Shape};

/// Allowed deviation of a float probability vector's sum from 1.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// A finite, nonempty sequence of real numbers `s_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSequence(Vec<f64>);

impl RealSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parse("sequence is empty".into()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("value {} at position {} is not finite", values[pos], pos + 1)));
        }
        Ok(RealSequence(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates that entries are finite, nonnegative and sum to 1 within
    /// [`SUM_TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no entries".into()));
        }
        if let Some(pos) = probs.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "entry {} is {}",
                pos + 1,
                probs[pos]
            )));
        }
        let total = compensated_sum(probs.iter().copied());
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Distribution { probs })
    }

    /// Entries produced by a summation of a valid distribution.
    pub(crate) fn from_trusted(probs: Vec<f64>) -> Self {
        debug_assert!((compensated_sum(probs.iter().copied()) - 1.0).abs() <= 1e-9);
        Distribution { probs }
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("no entries".into()));
        }
        Ok(Distribution { probs: vec![1.0 / n as f64; n] })
    }

    /// All mass at the 1-based position `y`.
    pub fn point_mass(n: usize, y: usize) -> Result<Self> {
        if y == 0 || y > n {
            return Err(Error::FlatOutOfRange { y, total: n });
        }
        let mut probs = vec![0.0; n];
        probs[y - 1] = 1.0;
        Ok(Distribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Entry at the 1-based position `y`.
    pub fn at(&self, y: usize) -> Option<f64> {
        y.checked_sub(1).and_then(|i| self.probs.get(i).copied())
    }

    pub fn as_joint(&self, shape: &Shape) -> Result<JointView<'_>> {
        as_joint(self, shape)
    }
}

/// `p(y) = |s_y| / Σ|s_y'|`.
pub fn normalize(seq: &RealSequence) -> Result<Distribution> {
    let magnitudes: Vec<f64> = seq.values().iter().map(|v| v.abs()).collect();
    let total = compensated_sum(magnitudes.iter().copied());
    if total == 0.0 {
        return Err(Error::DegenerateSequence);
    }
    if !total.is_finite() {
        return Err(Error::Parse("sum of magnitudes overflows".into()));
    }
    Ok(Distribution { probs: magnitudes.into_iter().map(|m| m / total).collect() })
}

pub fn as_joint<'a>(dist: &'a Distribution, shape: &Shape) -> Result<JointView<'a>> {
    if shape.total() != dist.len() {
        return Err(Error::ShapeMismatch(format!(
            "shape {shape} has {} cells but the distribution has {} entries",
            shape.total(),
            dist.len()
        )));
    }
    Ok(JointView { dist, shape: shape.clone() })
}

/// A distribution read through a shape. Adds indexing, no data.
#[derive(Debug, Clone)]
pub struct JointView<'a> {
    dist: &'a Distribution,
    shape: Shape,
}

impl<'a> JointView<'a> {
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dist(&self) -> &'a Distribution {
        self.dist
    }

    pub fn rank(&self) -> usize {
        self.shape.rank()
    }

    /// `p(x1, …, xn)`.
    pub fn get(&self, multi: &MultiIndex) -> Result<f64> {
        let y = self.shape.flatten(multi)?;
        Ok(self.dist.probs[y.get() - 1])
    }

    /// Sums over every axis not listed. Kept axes are taken in ascending
    /// order and the result is indexed by their sub-shape's own flatten.
    pub fn marginal(&self, kept_axes: &[usize]) -> Result<Distribution> {
        let mut kept = kept_axes.to_vec();
        kept.sort_unstable();
        let (_, dist) = self.project(&[kept])?;
        Ok(dist)
    }

    /// Collapses each group of axes into one virtual axis and sums out any
    /// axis that belongs to no group. Axes within a group keep the order
    /// given. Returns the shape of the group totals and the projected
    /// distribution.
    pub fn project(&self, groups: &[Vec<usize>]) -> Result<(Shape, Distribution)> {
        validate_groups(self.rank(), groups, false)?;
        let sub_shapes: Vec<Shape> = groups.iter().map(|g| self.shape.select(g)).collect();
        let out_shape = Shape::new(sub_shapes.iter().map(Shape::total).collect())?;

        let mut sums = vec![0.0f64; out_shape.total()];
        let mut carries = vec![0.0f64; out_shape.total()];
        let mut digits = vec![0; self.rank()];
        let mut group_digits: Vec<Vec<usize>> = groups.iter().map(|g| vec![0; g.len()]).collect();
        let mut outer = vec![0; groups.len()];

        for (offset, &p) in self.dist.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            self.shape.digits_of(offset, &mut digits);
            for (k, group) in groups.iter().enumerate() {
                for (slot, &axis) in group_digits[k].iter_mut().zip(group) {
                    *slot = digits[axis - 1];
                }
                outer[k] = sub_shapes[k].offset_of(&group_digits[k]);
            }
            let cell = out_shape.offset_of(&outer);
            let (sum, carry) = (&mut sums[cell], &mut carries[cell]);
            let t = *sum + p;
            if sum.abs() >= p {
                *carry += (*sum - t) + p;
            } else {
                *carry += (p - t) + *sum;
            }
            *sum = t;
        }
        let probs = sums.into_iter().zip(carries).map(|(s, c)| s + c).collect();
        Ok((out_shape, Distribution::from_trusted(probs)))
    }

    /// `Q(a|b)` for a single target and a single conditioning axis. When the
    /// shape has more than two axes, every axis other than `given_axis` is
    /// merged into the target (ascending axis order).
    pub fn conditional(&self, target_axis: usize, given_axis: usize) -> Result<ConditionalTable> {
        if target_axis == given_axis {
            return Err(Error::InvalidAxes(format!(
                "target and conditioning axis are both {target_axis}"
            )));
        }
        validate_groups(self.rank(), &[vec![target_axis], vec![given_axis]], false)?;
        let target: Vec<usize> = (1..=self.rank()).filter(|&a| a != given_axis).collect();
        self.conditional_groups(&target, &[given_axis])
    }

    /// `Q(a|b) = p(a,b) / Π(b)` for disjoint axis groups `a` and `b`; axes in
    /// neither group are summed out first.
    pub fn conditional_groups(&self, target: &[usize], given: &[usize]) -> Result<ConditionalTable> {
        let (shape, pair) = self.project(&[target.to_vec(), given.to_vec()])?;
        let (target_size, given_size) = (shape.factors()[0], shape.factors()[1]);
        let probs = pair.probs();

        let given_marginal: Vec<f64> = (0..given_size)
            .map(|b| compensated_sum((0..target_size).map(|a| probs[b * target_size + a])))
            .collect();
        let mut entries = vec![0.0; probs.len()];
        for (b, &pi) in given_marginal.iter().enumerate() {
            if pi > 0.0 {
                for a in 0..target_size {
                    entries[b * target_size + a] = probs[b * target_size + a] / pi;
                }
            }
        }
        Ok(ConditionalTable {
            target_size,
            given_size,
            joint: probs.to_vec(),
            entries,
            given_marginal,
        })
    }
}

/// Checks 1-based axis groups: nonempty, in range, pairwise disjoint.
/// With `cover`, the groups must also use every axis.
pub(crate) fn validate_groups(rank: usize, groups: &[Vec<usize>], cover: bool) -> Result<()> {
    if groups.is_empty() {
        return Err(Error::InvalidAxes("no axis groups given".into()));
    }
    let mut seen = vec![false; rank];
    for group in groups {
        if group.is_empty() {
            return Err(Error::InvalidAxes("empty axis group".into()));
        }
        for &axis in group {
            if axis == 0 || axis > rank {
                return Err(Error::InvalidAxes(format!("axis {axis} outside 1..={rank}")));
            }
            if std::mem::replace(&mut seen[axis - 1], true) {
                return Err(Error::InvalidAxes(format!("axis {axis} used more than once")));
            }
        }
    }
    if cover {
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidAxes(format!("axis {} is not assigned", missing + 1)));
        }
    }
    Ok(())
}

impl Shape {
    /// The shape formed by the listed 1-based axes, in the order given.
    pub fn select(&self, axes: &[usize]) -> Shape {
        self.sub_shape(axes)
    }
}

/// Conditional distribution `Q(a|b)` over a (target, given) pair of virtual
/// axes. Rows `b` with `Π(b) = 0` are unsupported and hold no values.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    target_size: usize,
    given_size: usize,
    /// `p(a,b)` at `b * target_size + a`, 0-based.
    joint: Vec<f64>,
    entries: Vec<f64>,
    given_marginal: Vec<f64>,
}

impl ConditionalTable {
    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn given_size(&self) -> usize {
        self.given_size
    }

    /// `Q(a|b)` for 1-based `a`, `b`; `None` when row `b` is unsupported or
    /// either index is out of range.
    pub fn q(&self, a: usize, b: usize) -> Option<f64> {
        if a == 0 || a > self.target_size || !self.is_supported(b) {
            return None;
        }
        Some(self.entries[(b - 1) * self.target_size + a - 1])
    }

    /// `p(a,b)` for 1-based `a`, `b`.
    pub fn joint(&self, a: usize, b: usize) -> Option<f64> {
        if a == 0 || a > self.target_size || b == 0 || b > self.given_size {
            return None;
        }
        Some(self.joint[(b - 1) * self.target_size + a - 1])
    }

    pub fn is_supported(&self, b: usize) -> bool {
        b >= 1 && b <= self.given_size && self.given_marginal[b - 1] > 0.0
    }

    /// `Π(b)` over the conditioning axis.
    pub fn given_marginal(&self) -> &[f64] {
        &self.given_marginal
    }

    /// 1-based indices of rows with `Π(b) = 0`.
    pub fn unsupported_rows(&self) -> Vec<usize> {
        (1..=self.given_size).filter(|&b| !self.is_supported(b)).collect()
    }

    /// `−Σ p(a,b) log Q(a|b)` in natural units, skipping zero cells.
    pub(crate) fn entropy_nats(&self) -> f64 {
        let terms = self.joint.iter().zip(&self.entries).filter(|(p, _)| **p > 0.0);
        compensated_sum(terms.map(|(p, q)| -p * q.ln())).max(0.0)
    }
}
