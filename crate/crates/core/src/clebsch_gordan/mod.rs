//! Exact SU(2) Clebsch–Gordan coefficients and the probability
//! distributions formed by their squares.
//!
//! For fixed `(j1, j2, j, m)` the squares `|⟨j1 m1 j2 m2 | j m⟩|²` sum to one
//! over `(m1, m2)`. Laying `(m1, m2)` out on the shape `(2j1+1, 2j2+1)` with
//! `xi = mi + ji + 1` gives a distribution `f(y)` over a single index, to
//! which the subadditivity and strong subadditivity reports of
//! [`crate::entropy`] apply. Phases follow Condon–Shortley.

mod exact;
mod oracle;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use exact::ExactReal;
use exact::{factorial, JsonInt};
pub use oracle::{cg_oracle, OracleTable};

use crate::entropy::{self, InequalityReport, Options};
use crate::index_map::{factorizations, rebase};
use crate::prob::Distribution;
use crate::{Error, FlatIndex, MultiIndex, Result, Shape};

/// A spin or projection stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Each `(j, m)` pair: `j ≥ 0`, `|m| ≤ j`, `j − m` integral.
pub(crate) fn validate_projections(pairs: &[(HalfInt, HalfInt)]) -> Result<()> {
    for &(j, m) in pairs {
        if j.twice < 0 {
            return Err(Error::InvalidProjection(format!("spin {j} is negative")));
        }
        if m.twice.abs() > j.twice {
            return Err(Error::InvalidProjection(format!("|{m}| exceeds spin {j}")));
        }
        if (j.twice - m.twice) % 2 != 0 {
            return Err(Error::InvalidProjection(format!("{j} − {m} is not an integer")));
        }
    }
    Ok(())
}

/// `|j1 − j2| ≤ j ≤ j1 + j2` with `j1 + j2 + j` integral.
fn triangle(j1: HalfInt, j2: HalfInt, j: HalfInt) -> bool {
    let (a, b, c) = (j1.twice, j2.twice, j.twice);
    (a - b).abs() <= c && c <= a + b && (a + b + c) % 2 == 0
}

/// Clebsch–Gordan coefficient `⟨j1 m1 j2 m2 | j m⟩`, exact, from Racah's
/// single-sum formula. Zero when `m ≠ m1 + m2` or the triangle rule fails.
pub fn cg(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<ExactReal> {
    validate_projections(&[(j1, m1), (j2, m2), (j, m)])?;
    if m1.twice + m2.twice != m.twice || !triangle(j1, j2, j) {
        return Ok(ExactReal::zero());
    }
    // every combination below is a nonnegative integer once the checks pass
    let half = |t: i64| -> i64 { t / 2 };
    let (tj1, tm1, tj2, tm2, tj, tm) = (j1.twice, m1.twice, j2.twice, m2.twice, j.twice, m.twice);
    let fact = |t2: i64| factorial(half(t2) as u64);

    let prefactor = BigRational::new(
        BigInt::from(tj + 1) * fact(tj + tj1 - tj2) * fact(tj - tj1 + tj2) * fact(tj1 + tj2 - tj),
        fact(tj1 + tj2 + tj + 2),
    ) * BigRational::from_integer(
        fact(tj + tm) * fact(tj - tm) * fact(tj1 - tm1) * fact(tj1 + tm1) * fact(tj2 - tm2) * fact(tj2 + tm2),
    );

    let (a, b, c) = (half(tj1 + tj2 - tj), half(tj1 - tm1), half(tj2 + tm2));
    let (d, e) = (half(tj - tj2 + tm1), half(tj - tj1 - tm2));
    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let denom = factorial(k as u64)
            * factorial((a - k) as u64)
            * factorial((b - k) as u64)
            * factorial((c - k) as u64)
            * factorial((d + k) as u64)
            * factorial((e + k) as u64);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(ExactReal::scaled_root(&sum, &prefactor))
}

/// The labels `(j1, j2, j, m)` of one coupled state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinCouple {
    j1: HalfInt,
    j2: HalfInt,
    j: HalfInt,
    m: HalfInt,
}

impl SpinCouple {
    pub fn new(j1: HalfInt, j2: HalfInt, j: HalfInt, m: HalfInt) -> Result<Self> {
        for s in [j1, j2, j] {
            if s.twice < 0 {
                return Err(Error::InvalidCouple(format!("spin {s} is negative")));
            }
        }
        if !triangle(j1, j2, j) {
            return Err(Error::InvalidCouple(format!(
                "j = {j} cannot be formed from j1 = {j1} and j2 = {j2}"
            )));
        }
        if m.twice.abs() > j.twice || (j.twice - m.twice) % 2 != 0 {
            return Err(Error::InvalidCouple(format!("m = {m} is not a projection of j = {j}")));
        }
        Ok(SpinCouple { j1, j2, j, m })
    }

    /// From twice-values, e.g. `(1, 1, 0, 0)` for the spin-½ singlet.
    pub fn from_twice(tj1: i64, tj2: i64, tj: i64, tm: i64) -> Result<Self> {
        SpinCouple::new(
            HalfInt::from_twice(tj1),
            HalfInt::from_twice(tj2),
            HalfInt::from_twice(tj),
            HalfInt::from_twice(tm),
        )
    }

    pub fn j1(&self) -> HalfInt {
        self.j1
    }

    pub fn j2(&self) -> HalfInt {
        self.j2
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    /// `(2j1+1, 2j2+1)`.
    pub fn shape(&self) -> Shape {
        Shape::new(vec![(self.j1.twice + 1) as usize, (self.j2.twice + 1) as usize])
            .expect("nonnegative spins")
    }

    /// `N = (2j1+1)(2j2+1)`.
    pub fn total(&self) -> usize {
        ((self.j1.twice + 1) * (self.j2.twice + 1)) as usize
    }

    /// Every valid couple with `2j1 ≤ max_twice` and `2j2 ≤ max_twice`, in
    /// ascending order of `(2j1, 2j2, 2j, 2m)`.
    pub fn enumerate(max_twice: i64) -> Vec<SpinCouple> {
        let mut out = Vec::new();
        for tj1 in 0..=max_twice {
            for tj2 in 0..=max_twice {
                let mut tj = (tj1 - tj2).abs();
                while tj <= tj1 + tj2 {
                    let mut tm = -tj;
                    while tm <= tj {
                        out.push(SpinCouple::from_twice(tj1, tj2, tj, tm).expect("enumerated in range"));
                        tm += 2;
                    }
                    tj += 2;
                }
            }
        }
        out
    }

    /// `(m1, m2)` at a position of [`SpinCouple::shape`], via `mi = xi − ji − 1`.
    fn projections_at(&self, multi: &MultiIndex) -> (HalfInt, HalfInt) {
        let x = multi.digits();
        (
            HalfInt::from_twice(2 * x[0] as i64 - self.j1.twice - 2),
            HalfInt::from_twice(2 * x[1] as i64 - self.j2.twice - 2),
        )
    }
}

impl fmt::Display for SpinCouple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(j1={}, j2={}, j={}, m={})", self.j1, self.j2, self.j, self.m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgEntry {
    pub m1: HalfInt,
    pub m2: HalfInt,
    pub value: ExactReal,
}

/// All coefficients `⟨j1 m1 j2 m2 | j m⟩` of one coupled state, listed in
/// ascending order of `y` over `(2j1+1, 2j2+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CGTable {
    couple: SpinCouple,
    shape: Shape,
    entries: Vec<CgEntry>,
}

impl CGTable {
    pub fn new(couple: SpinCouple) -> Self {
        let shape = couple.shape();
        let entries = shape
            .multi_indices()
            .map(|multi| {
                let (m1, m2) = couple.projections_at(&multi);
                let value = cg(couple.j1, m1, couple.j2, m2, couple.j, couple.m)
                    .expect("projections of a valid couple");
                CgEntry { m1, m2, value }
            })
            .collect();
        CGTable { couple, shape, entries }
    }

    pub fn couple(&self) -> &SpinCouple {
        &self.couple
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Entries in ascending `y`.
    pub fn entries(&self) -> &[CgEntry] {
        &self.entries
    }

    pub fn get(&self, m1: HalfInt, m2: HalfInt) -> Option<&ExactReal> {
        let x1 = usize::try_from((m1.twice + self.couple.j1.twice) / 2 + 1).ok()?;
        let x2 = usize::try_from((m2.twice + self.couple.j2.twice) / 2 + 1).ok()?;
        if (m1.twice + self.couple.j1.twice) % 2 != 0 || (m2.twice + self.couple.j2.twice) % 2 != 0 {
            return None;
        }
        let y = self.shape.flatten(&MultiIndex(vec![x1, x2])).ok()?;
        Some(&self.entries[y.get() - 1].value)
    }

    /// `f(y) = |⟨m1(y) m2(y) | j m⟩|²`, exact.
    pub fn exact_probabilities(&self) -> Vec<BigRational> {
        self.entries.iter().map(|e| e.value.square()).collect()
    }

    pub fn distribution(&self) -> Distribution {
        let probs = self.entries.iter().map(|e| e.value.square_f64()).collect();
        Distribution::new(probs).expect("squared coefficients of a coupled state sum to one")
    }
}

impl Serialize for CgEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CgEntry", 5)?;
        s.serialize_field("m1", &self.m1)?;
        s.serialize_field("m2", &self.m2)?;
        s.serialize_field("sign", &self.value.sign())?;
        s.serialize_field("radicand_num", &JsonInt(self.value.radicand().numer()))?;
        s.serialize_field("radicand_den", &JsonInt(self.value.radicand().denom()))?;
        s.end()
    }
}

/// `{j1, j2, j, m, shape, entries}` with all spins as twice-values.
impl Serialize for CGTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CGTable", 6)?;
        s.serialize_field("j1", &self.couple.j1)?;
        s.serialize_field("j2", &self.couple.j2)?;
        s.serialize_field("j", &self.couple.j)?;
        s.serialize_field("m", &self.couple.m)?;
        s.serialize_field("shape", &self.shape)?;
        s.serialize_field("entries", &self.entries)?;
        s.end()
    }
}

/// The coefficient table of a couple and its squared distribution `f(y)`.
pub fn cg_squared_table(couple: SpinCouple) -> (CGTable, Distribution) {
    let table = CGTable::new(couple);
    let dist = table.distribution();
    (table, dist)
}

/// Subadditivity of `f` over the `(2j1+1) × (2j2+1)` partition.
pub fn cg_subadditivity(couple: SpinCouple, opts: &Options) -> Result<InequalityReport> {
    let (table, dist) = cg_squared_table(couple);
    let joint = dist.as_joint(table.shape())?;
    entropy::subadditivity_report(&joint, &[1], opts)
}

/// `g(t1, t2, t3)`: the squared coefficients re-indexed by a three-factor
/// shape. Each `t` is mapped to `(x1, x2)` through the shared flat index and
/// then to `(m1, m2)`.
pub fn rebased_distribution(table: &CGTable, triple: &Shape) -> Result<Distribution> {
    if triple.rank() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "strong subadditivity needs a three-factor shape, got {triple}"
        )));
    }
    let pair = table.shape();
    let mut probs = vec![0.0; triple.total()];
    for (offset, t) in triple.multi_indices().enumerate() {
        let x = rebase(triple, pair, &t)?;
        let (m1, m2) = table.couple.projections_at(&x);
        probs[offset] = table.get(m1, m2).expect("rebased index in range").square_f64();
    }
    Distribution::new(probs)
}

/// Strong subadditivity of `g` over `triple`, with groups `A = (t1)`,
/// `B = (t2)`, `C = (t3)`.
pub fn cg_ssa(couple: SpinCouple, triple: &Shape, opts: &Options) -> Result<InequalityReport> {
    if triple.total() != couple.total() {
        return Err(Error::ShapeMismatch(format!(
            "shape {triple} has {} cells but {couple} has N = {}",
            triple.total(),
            couple.total()
        )));
    }
    let table = CGTable::new(couple);
    let g = rebased_distribution(&table, triple)?;
    let joint = g.as_joint(triple)?;
    entropy::ssa_report(&joint, [&[1], &[2], &[3]], opts)
}

/// Every ordered three-factor shape of `n`, unit factors allowed,
/// lexicographic.
pub fn three_factor_shapes(n: usize) -> Vec<Shape> {
    let mut out = Vec::new();
    for a in (1..=n).filter(|a| n % a == 0) {
        for b in (1..=n / a).filter(|b| (n / a) % b == 0) {
            out.push(Shape::new(vec![a, b, n / a / b]).expect("divisors of n"));
        }
    }
    out
}

/// The first three-factor shape from [`factorizations`] with every factor at
/// least 2, if `n` has one.
pub fn default_triple_shape(n: usize) -> Option<Shape> {
    factorizations(n, 3).into_iter().find(|s| s.rank() == 3)
}

/// The flat index of `(m1, m2)` in a couple's table.
pub fn flat_index_of(couple: &SpinCouple, m1: HalfInt, m2: HalfInt) -> Result<FlatIndex> {
    let x1 = (m1.twice + couple.j1.twice) / 2 + 1;
    let x2 = (m2.twice + couple.j2.twice) / 2 + 1;
    if x1 < 1 || x2 < 1 {
        return Err(Error::InvalidProjection(format!("({m1}, {m2}) outside {couple}")));
    }
    couple.shape().flatten(&MultiIndex(vec![x1 as usize, x2 as usize]))
}
