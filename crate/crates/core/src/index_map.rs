//! Mixed-radix bijections between a flat index `y ∈ [1, N]` and multi-indices
//! `(x1, …, xn)` with `xk ∈ [1, Xk]`, for an ordered factorization
//! `N = X1·…·Xn`.
//!
//! The first axis varies fastest:
//!
//! ```text
//! y = x1 + Σ_{k≥2} (xk − 1) · X1·…·X(k−1)
//! ```
//!
//! All public indices are 1-based. Digit extraction runs on `y − 1`, so the
//! residue for a digit equal to its radix is `Xk` rather than `0`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default bound on `N` for anything that materializes one row per index.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// An ordered factor list `(X1, …, Xn)` defining a partition of `N = ΠXk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Shape {
    factors: Vec<usize>,
    total: usize,
}

/// Digits `(x1, …, xn)`, each 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<usize>);

/// A 1-based position `y` in a flat sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlatIndex(pub usize);

impl MultiIndex {
    pub fn digits(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(digits: Vec<usize>) -> Self {
        MultiIndex(digits)
    }
}

impl FlatIndex {
    pub fn get(self) -> usize {
        self.0
    }
}

impl Shape {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidShape("a shape needs at least one factor".into()));
        }
        if let Some(pos) = factors.iter().position(|&f| f == 0) {
            return Err(Error::InvalidShape(format!("factor {} is zero", pos + 1)));
        }
        let total = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f))
            .filter(|&t| i64::try_from(t).is_ok())
            .ok_or_else(|| Error::InvalidShape(format!("product of {factors:?} overflows")))?;
        Ok(Shape { factors, total })
    }

    /// The single-axis shape `(N)`.
    pub fn trivial(total: usize) -> Result<Self> {
        Shape::new(vec![total])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// `N`, the product of all factors.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Number of axes `n`.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Place values `1, X1, X1·X2, …, X1·…·X(n−1)`.
    pub fn strides(&self) -> Vec<usize> {
        let mut acc = 1;
        self.factors
            .iter()
            .map(|&f| {
                let stride = acc;
                acc *= f;
                stride
            })
            .collect()
    }

    /// True when no axis has more than one value, other than possibly one.
    pub fn is_trivial(&self) -> bool {
        self.factors.iter().filter(|&&f| f > 1).count() <= 1
    }

    pub fn flatten(&self, multi: &MultiIndex) -> Result<FlatIndex> {
        let digits = multi.digits();
        if digits.len() != self.rank() {
            return Err(Error::IndexArity { expected: self.rank(), got: digits.len() });
        }
        let mut y = 0;
        let mut stride = 1;
        for (axis, (&x, &bound)) in digits.iter().zip(&self.factors).enumerate() {
            if x == 0 || x > bound {
                return Err(Error::InvalidIndex { axis: axis + 1, value: x, bound });
            }
            y += (x - 1) * stride;
            stride *= bound;
        }
        Ok(FlatIndex(y + 1))
    }

    pub fn unflatten(&self, flat: FlatIndex) -> Result<MultiIndex> {
        let y = flat.get();
        if y == 0 || y > self.total {
            return Err(Error::FlatOutOfRange { y, total: self.total });
        }
        let mut digits = vec![0; self.rank()];
        self.digits_of(y - 1, &mut digits);
        digits.iter_mut().for_each(|d| *d += 1);
        Ok(MultiIndex(digits))
    }

    /// [`Shape::unflatten`] into an existing multi-index, reusing its storage.
    pub fn unflatten_into(&self, flat: FlatIndex, out: &mut MultiIndex) -> Result<()> {
        let y = flat.get();
        if y == 0 || y > self.total {
            return Err(Error::FlatOutOfRange { y, total: self.total });
        }
        out.0.resize(self.rank(), 0);
        self.digits_of(y - 1, &mut out.0);
        out.0.iter_mut().for_each(|d| *d += 1);
        Ok(())
    }

    /// 0-based offset of 0-based digits. Digits must be in range.
    pub(crate) fn offset_of(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.rank());
        let mut offset = 0;
        for (&d, &f) in digits.iter().zip(&self.factors).rev() {
            debug_assert!(d < f);
            offset = offset * f + d;
        }
        offset
    }

    /// 0-based digits of a 0-based offset, written into `out`.
    pub(crate) fn digits_of(&self, mut offset: usize, out: &mut [usize]) {
        debug_assert!(offset < self.total);
        for (slot, &f) in out.iter_mut().zip(&self.factors) {
            *slot = offset % f;
            offset /= f;
        }
    }

    /// The shape formed by the listed 1-based axes, in the order given.
    pub(crate) fn sub_shape(&self, axes: &[usize]) -> Shape {
        let factors = axes.iter().map(|&a| self.factors[a - 1]).collect();
        Shape::new(factors).expect("sub-shape of a valid shape")
    }

    /// Every multi-index in ascending order of `y`.
    pub fn multi_indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (1..=self.total).map(move |y| self.unflatten(FlatIndex(y)).expect("y in range"))
    }

    pub fn plane_spec(&self) -> PlaneSpec {
        plane_spec(self)
    }
}

impl TryFrom<Vec<usize>> for Shape {
    type Error = Error;

    fn try_from(factors: Vec<usize>) -> Result<Self> {
        Shape::new(factors)
    }
}

impl From<Shape> for Vec<usize> {
    fn from(shape: Shape) -> Self {
        shape.factors
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Parses `"4x2"`, `"2x2x2"` or `"8"`. Commas are accepted as separators too.
impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .split(|c| c == 'x' || c == 'X' || c == ',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad shape factor {part:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Shape::new(factors)
    }
}

pub fn flatten(shape: &Shape, multi: &MultiIndex) -> Result<FlatIndex> {
    shape.flatten(multi)
}

pub fn unflatten(shape: &Shape, flat: FlatIndex) -> Result<MultiIndex> {
    shape.unflatten(flat)
}

/// Re-expresses a multi-index of `from` as the multi-index of `to` that shares
/// its flat position.
pub fn rebase(from: &Shape, to: &Shape, multi: &MultiIndex) -> Result<MultiIndex> {
    if from.total() != to.total() {
        return Err(Error::ShapeMismatch(format!(
            "cannot rebase {from} (N={}) onto {to} (N={})",
            from.total(),
            to.total()
        )));
    }
    to.unflatten(from.flatten(multi)?)
}

/// The hyperplane in `(x1, …, xn, y)` space on which every lattice row lies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneSpec {
    /// `{1, X1, X1X2, …, X1·…·X(n−1), −1}`
    pub normal: Vec<i64>,
    /// The all-ones point, i.e. multi-index `(1, …, 1)` at `y = 1`.
    pub base_point: Vec<i64>,
}

impl PlaneSpec {
    /// `(normal, point − base_point)`; zero exactly on the plane.
    pub fn evaluate(&self, point: &[i64]) -> i64 {
        self.normal
            .iter()
            .zip(point.iter().zip(&self.base_point))
            .map(|(n, (p, b))| n * (p - b))
            .sum()
    }
}

pub fn plane_spec(shape: &Shape) -> PlaneSpec {
    let mut normal: Vec<i64> = shape.strides().into_iter().map(|s| s as i64).collect();
    normal.push(-1);
    PlaneSpec { normal, base_point: vec![1; shape.rank() + 1] }
}

/// Direction of the line where two planes in 3-space meet: `n1 × n2`.
pub fn intersection_direction(n1: [i64; 3], n2: [i64; 3]) -> Result<[i64; 3]> {
    let a = [
        n1[1] * n2[2] - n1[2] * n2[1],
        n1[2] * n2[0] - n1[0] * n2[2],
        n1[0] * n2[1] - n1[1] * n2[0],
    ];
    if a == [0, 0, 0] {
        return Err(Error::DegenerateIntersection);
    }
    Ok(a)
}

/// One point of the integer lattice on the index plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeRow {
    pub digits: Vec<usize>,
    pub y: usize,
}

/// One row per `y`, ascending: `(x1, …, xn, y)`.
pub fn lattice_points(shape: &Shape, cap: usize) -> Result<Vec<LatticeRow>> {
    if shape.total() > cap {
        return Err(Error::TooLarge { total: shape.total(), cap });
    }
    Ok(shape
        .multi_indices()
        .enumerate()
        .map(|(i, multi)| LatticeRow { digits: multi.0, y: i + 1 })
        .collect())
}

/// Writes lattice rows as CSV with header `x1,…,xn,y`.
pub fn write_lattice_csv<W: Write>(shape: &Shape, rows: &[LatticeRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=shape.rank()).map(|k| format!("x{k}")).collect();
    header.push("y".into());
    writer.write_record(&header).map_err(csv_error)?;
    for row in rows {
        let record = row.digits.iter().chain(std::iter::once(&row.y)).map(|v| v.to_string());
        writer.write_record(record).map_err(csv_error)?;
    }
    writer.flush().map_err(|e| Error::Parse(e.to_string()))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// The plane `y = y'` cut with the index plane of a two-axis shape, projected
/// onto the `(x1, x2)` plane and clipped to the domain `[1,X1]×[1,X2]`.
///
/// The projected line is `x1 + X1·x2 = y' + X1`, with direction `(X1, −1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectedSegment {
    pub y: usize,
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub direction: [i64; 2],
}

pub fn projected_intersections(shape: &Shape, cap: usize) -> Result<Vec<ProjectedSegment>> {
    let &[x1_max, x2_max] = shape.factors() else {
        return Err(Error::InvalidShape(format!(
            "projections need a two-axis shape, got {shape} with {} axes",
            shape.rank()
        )));
    };
    if shape.total() > cap {
        return Err(Error::TooLarge { total: shape.total(), cap });
    }
    let radix = x1_max as f64;
    let segments = (1..=shape.total())
        .map(|y| {
            let level = (y + x1_max) as f64;
            // x1 ∈ [1, X1] bounds x2 to [y/X1, (y+X1−1)/X1]
            let lo = (y as f64 / radix).max(1.0);
            let hi = ((y + x1_max - 1) as f64 / radix).min(x2_max as f64);
            ProjectedSegment {
                y,
                start: [level - radix * lo, lo],
                end: [level - radix * hi, hi],
                direction: [x1_max as i64, -1],
            }
        })
        .collect();
    Ok(segments)
}

pub fn write_projections_csv<W: Write>(segments: &[ProjectedSegment], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record(["y", "x1_start", "x2_start", "x1_end", "x2_end", "dir_x1", "dir_x2"])
        .map_err(csv_error)?;
    for s in segments {
        writer
            .write_record([
                s.y.to_string(),
                s.start[0].to_string(),
                s.start[1].to_string(),
                s.end[0].to_string(),
                s.end[1].to_string(),
                s.direction[0].to_string(),
                s.direction[1].to_string(),
            ])
            .map_err(csv_error)?;
    }
    writer.flush().map_err(|e| Error::Parse(e.to_string()))
}

/// All ordered factorizations of `n` into at most `max_parts` factors, each
/// factor at least 2, plus the trivial shape `(n)`.
///
/// Ordered by number of factors, then by the sorted factor multiset, then
/// lexicographically among the permutations of one multiset. For `n = 12`,
/// `max_parts = 2` this is `(12), (2,6), (6,2), (3,4), (4,3)`.
pub fn factorizations(n: usize, max_parts: usize) -> Vec<Shape> {
    if n <= 1 || max_parts == 0 {
        return vec![Shape::trivial(n.max(1)).expect("nonzero")];
    }
    let mut found = Vec::new();
    let mut prefix = Vec::new();
    collect_factorizations(n, max_parts, &mut prefix, &mut found);
    found.sort_by_cached_key(|factors| {
        let mut multiset = factors.clone();
        multiset.sort_unstable();
        (factors.len(), multiset, factors.clone())
    });
    found.into_iter().map(|f| Shape::new(f).expect("factors of n")).collect()
}

fn collect_factorizations(
    remaining: usize,
    parts_left: usize,
    prefix: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if remaining == 1 {
        if !prefix.is_empty() {
            found.push(prefix.clone());
        }
        return;
    }
    if parts_left == 0 {
        return;
    }
    for d in 2..=remaining {
        if remaining % d == 0 {
            prefix.push(d);
            collect_factorizations(remaining / d, parts_left - 1, prefix, found);
            prefix.pop();
        }
    }
}
