//! Shannon entropy and the entropic relations of composite systems, applied
//! to joint views of a single distribution.
//!
//! Every relation is reported as an [`InequalityReport`] whose residual is
//! arranged so that the relation holds iff `residual ≥ −tolerance`
//! (inequalities) or `|residual| ≤ tolerance` (the chain-rule identity).
//! `0·log 0` is taken as `0` everywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::index_map::factorizations;
use crate::prob::{compensated_sum, validate_groups, Distribution, JointView};
use crate::{Error, Result, Shape};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Base of the logarithm in all entropies. Natural log unless chosen otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBase(f64);

impl LogBase {
    pub const E: LogBase = LogBase(std::f64::consts::E);
    pub const TWO: LogBase = LogBase(2.0);
    pub const TEN: LogBase = LogBase(10.0);

    pub fn new(base: f64) -> Result<Self> {
        if base.is_finite() && base > 1.0 {
            Ok(LogBase(base))
        } else {
            Err(Error::InvalidBase(base.to_string()))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Converts an entropy in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        if self == LogBase::E {
            nats
        } else {
            nats / self.0.ln()
        }
    }
}

impl Default for LogBase {
    fn default() -> Self {
        LogBase::E
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "e" | "E" => Ok(LogBase::E),
            "2" => Ok(LogBase::TWO),
            "10" => Ok(LogBase::TEN),
            other => {
                let value = other.parse::<f64>().map_err(|_| Error::InvalidBase(other.to_string()))?;
                LogBase::new(value)
            }
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == LogBase::E {
            f.write_str("e")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for LogBase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub base: LogBase,
    pub tolerance: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { base: LogBase::E, tolerance: DEFAULT_TOLERANCE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    Subadditivity,
    ChainRule,
    StrongSubadditivity,
}

impl InequalityKind {
    pub fn is_equality(self) -> bool {
        matches!(self, InequalityKind::ChainRule)
    }

    fn verdict(self, residual: f64, tolerance: f64) -> bool {
        if self.is_equality() {
            residual.abs() <= tolerance
        } else {
            residual >= -tolerance
        }
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InequalityKind::Subadditivity => "subadditivity",
            InequalityKind::ChainRule => "chain_rule",
            InequalityKind::StrongSubadditivity => "strong_subadditivity",
        })
    }
}

/// One evaluated instance of an entropic relation.
///
/// Entropy keys: `H_A`, `H_B`, `H_AB` for subadditivity; `H_AB`, `H_BC`,
/// `H_B`, `H_ABC` for strong subadditivity; for the chain rule the joint
/// entropy is `H_joint` and the terms are `H_A{k}` and `H_A{k}|A{i}A{j}…`
/// named by original axis numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub shape: Shape,
    /// 1-based axis groups: `[A, B]`, `[A, B, C]`, or the chain-rule ordering
    /// as singletons.
    pub grouping: Vec<Vec<usize>>,
    pub base: LogBase,
    pub entropies: BTreeMap<String, f64>,
    pub residual: f64,
    pub holds: bool,
    #[serde(skip)]
    pub tolerance: f64,
}

impl InequalityReport {
    fn new(
        kind: InequalityKind,
        shape: &Shape,
        grouping: Vec<Vec<usize>>,
        entropies: BTreeMap<String, f64>,
        opts: &Options,
    ) -> Self {
        let mut report = InequalityReport {
            kind,
            shape: shape.clone(),
            grouping,
            base: opts.base,
            entropies,
            residual: 0.0,
            holds: false,
            tolerance: opts.tolerance,
        };
        report.residual = report.recompute_residual();
        report.holds = kind.verdict(report.residual, opts.tolerance);
        report
    }

    /// The residual rebuilt from the component entropies alone.
    pub fn recompute_residual(&self) -> f64 {
        let h = |key: &str| self.entropies[key];
        match self.kind {
            InequalityKind::Subadditivity => h("H_A") + h("H_B") - h("H_AB"),
            InequalityKind::StrongSubadditivity => h("H_AB") + h("H_BC") - h("H_ABC") - h("H_B"),
            InequalityKind::ChainRule => {
                let terms = self.entropies.iter().filter(|(k, _)| k.as_str() != "H_joint");
                h("H_joint") - compensated_sum(terms.map(|(_, v)| *v))
            }
        }
    }

    /// Whether `holds` agrees with the residual and tolerance.
    pub fn is_consistent(&self) -> bool {
        self.holds == self.kind.verdict(self.residual, self.tolerance)
    }
}

/// `−Σ p log p` in nats.
pub(crate) fn shannon_nats(probs: &[f64]) -> f64 {
    let terms = probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln());
    compensated_sum(terms).max(0.0)
}

/// `H(p) = −Σ p log p`, with `0·log 0 = 0`.
pub fn shannon(dist: &Distribution, base: LogBase) -> f64 {
    base.from_nats(shannon_nats(dist.probs()))
}

fn complement(rank: usize, side: &[usize]) -> Vec<usize> {
    (1..=rank).filter(|a| !side.contains(a)).collect()
}

fn sorted(axes: &[usize]) -> Vec<usize> {
    let mut v = axes.to_vec();
    v.sort_unstable();
    v
}

/// Subadditivity `H(A) + H(B) ≥ H(AB)` for the bipartition `(side_a, rest)`.
pub fn subadditivity_report(
    joint: &JointView<'_>,
    side_a: &[usize],
    opts: &Options,
) -> Result<InequalityReport> {
    let rank = joint.rank();
    if rank < 2 {
        return Err(Error::InvalidAxes(format!(
            "subadditivity needs at least two axes, shape {} has {rank}",
            joint.shape()
        )));
    }
    let a = sorted(side_a);
    let b = complement(rank, &a);
    validate_groups(rank, &[a.clone(), b.clone()], true)?;

    let h = |axes: &[usize]| -> Result<f64> {
        Ok(opts.base.from_nats(shannon_nats(joint.marginal(axes)?.probs())))
    };
    let entropies = BTreeMap::from([
        ("H_A".to_string(), h(&a)?),
        ("H_B".to_string(), h(&b)?),
        ("H_AB".to_string(), shannon(joint.dist(), opts.base)),
    ]);
    Ok(InequalityReport::new(
        InequalityKind::Subadditivity,
        joint.shape(),
        vec![a, b],
        entropies,
        opts,
    ))
}

/// `I = H(A) + H(B) − H(AB)`.
pub fn mutual_information(joint: &JointView<'_>, side_a: &[usize], opts: &Options) -> Result<f64> {
    Ok(subadditivity_report(joint, side_a, opts)?.residual)
}

/// `H(A|B) = −Σ p(a,b) log Q(a|b)` for single axes; other axes merge into
/// the target as in [`JointView::conditional`].
pub fn conditional_entropy(
    joint: &JointView<'_>,
    target_axis: usize,
    given_axis: usize,
    base: LogBase,
) -> Result<f64> {
    Ok(base.from_nats(joint.conditional(target_axis, given_axis)?.entropy_nats()))
}

/// `H(A|B)` for axis groups; axes in neither group are summed out.
pub fn conditional_entropy_groups(
    joint: &JointView<'_>,
    target: &[usize],
    given: &[usize],
    base: LogBase,
) -> Result<f64> {
    Ok(base.from_nats(joint.conditional_groups(target, given)?.entropy_nats()))
}

/// The identity `H(A1…An) = H(A1) + H(A2|A1) + … + H(An|A1…A(n−1))` with the
/// axes taken in `ordering`. Each conditional term is evaluated directly from
/// `Q`, not as a difference of joint entropies.
pub fn chain_rule_report(
    joint: &JointView<'_>,
    ordering: &[usize],
    opts: &Options,
) -> Result<InequalityReport> {
    let rank = joint.rank();
    let singletons: Vec<Vec<usize>> = ordering.iter().map(|&a| vec![a]).collect();
    if ordering.len() != rank {
        return Err(Error::InvalidAxes(format!(
            "ordering {ordering:?} is not a permutation of 1..={rank}"
        )));
    }
    validate_groups(rank, &singletons, true)?;

    let name = |axes: &[usize]| axes.iter().map(|a| format!("A{a}")).collect::<String>();
    let mut entropies = BTreeMap::new();
    entropies.insert("H_joint".to_string(), shannon(joint.dist(), opts.base));
    let first = ordering[0];
    entropies.insert(
        format!("H_A{first}"),
        opts.base.from_nats(shannon_nats(joint.marginal(&[first])?.probs())),
    );
    for k in 1..rank {
        let given = &ordering[..k];
        let term = conditional_entropy_groups(joint, &[ordering[k]], given, opts.base)?;
        entropies.insert(format!("H_A{}|{}", ordering[k], name(given)), term);
    }
    Ok(InequalityReport::new(
        InequalityKind::ChainRule,
        joint.shape(),
        singletons,
        entropies,
        opts,
    ))
}

pub fn chain_rule_residual(joint: &JointView<'_>, ordering: &[usize], opts: &Options) -> Result<f64> {
    Ok(chain_rule_report(joint, ordering, opts)?.residual)
}

/// Strong subadditivity `H(AB) + H(BC) ≥ H(ABC) + H(B)` for three disjoint
/// axis groups covering every axis.
pub fn ssa_report(
    joint: &JointView<'_>,
    groups: [&[usize]; 3],
    opts: &Options,
) -> Result<InequalityReport> {
    let [a, b, c] = groups.map(sorted);
    validate_groups(joint.rank(), &[a.clone(), b.clone(), c.clone()], true)?;
    let union = |x: &[usize], y: &[usize]| sorted(&[x, y].concat());
    let h = |axes: &[usize]| -> Result<f64> {
        Ok(opts.base.from_nats(shannon_nats(joint.marginal(axes)?.probs())))
    };
    let entropies = BTreeMap::from([
        ("H_AB".to_string(), h(&union(&a, &b))?),
        ("H_BC".to_string(), h(&union(&b, &c))?),
        ("H_B".to_string(), h(&b)?),
        ("H_ABC".to_string(), shannon(joint.dist(), opts.base)),
    ]);
    Ok(InequalityReport::new(
        InequalityKind::StrongSubadditivity,
        joint.shape(),
        vec![a, b, c],
        entropies,
        opts,
    ))
}

/// Sides `A` of every bipartition `(A, complement)` of `1..=rank`, each
/// bipartition listed once (axis 1 always in `A`).
pub fn bipartitions(rank: usize) -> Vec<Vec<usize>> {
    if rank < 2 {
        return Vec::new();
    }
    // masks over axes 2..=rank; axis 1 is always in A, B must be nonempty
    (0..(1usize << (rank - 1)) - 1)
        .map(|mask| {
            std::iter::once(1)
                .chain((2..=rank).filter(|a| mask & (1 << (a - 2)) != 0))
                .collect()
        })
        .collect()
}

/// Every assignment of `1..=rank` to three nonempty groups `(A, B, C)`, with
/// the `A ↔ C` mirror image listed once (the group holding the smallest axis
/// outside `B` is `A`). Sorted lexicographically.
pub fn tripartitions(rank: usize) -> Vec<[Vec<usize>; 3]> {
    if rank < 3 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut labels = vec![0u8; rank];
    loop {
        let mut groups: [Vec<usize>; 3] = Default::default();
        for (axis, &label) in labels.iter().enumerate() {
            groups[label as usize].push(axis + 1);
        }
        if groups.iter().all(|g| !g.is_empty()) && groups[0][0] < groups[2][0] {
            out.push(groups);
        }
        // base-3 counter, first axis fastest
        let mut i = 0;
        loop {
            if i == rank {
                out.sort();
                return out;
            }
            labels[i] += 1;
            if labels[i] < 3 {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOutcome {
    pub reports: Vec<InequalityReport>,
    pub notes: Vec<String>,
}

impl ScanOutcome {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(|r| r.holds)
    }
}

/// All reports for one shape: every bipartition, the chain rule in natural
/// axis order, and every tripartition when the shape has three or more axes.
pub fn shape_reports(joint: &JointView<'_>, opts: &Options) -> Result<Vec<InequalityReport>> {
    let rank = joint.rank();
    let mut reports = Vec::new();
    for side in bipartitions(rank) {
        reports.push(subadditivity_report(joint, &side, opts)?);
    }
    if rank >= 2 {
        let natural: Vec<usize> = (1..=rank).collect();
        reports.push(chain_rule_report(joint, &natural, opts)?);
    }
    for [a, b, c] in tripartitions(rank) {
        reports.push(ssa_report(joint, [&a, &b, &c], opts)?);
    }
    Ok(reports)
}

/// Runs [`shape_reports`] over every nontrivial shape from
/// [`factorizations`]`(N, max_parts)` in that order.
pub fn scan(dist: &Distribution, max_parts: usize, opts: &Options) -> ScanOutcome {
    let n = dist.len();
    let shapes: Vec<Shape> =
        factorizations(n, max_parts).into_iter().filter(|s| s.rank() >= 2).collect();
    let mut notes = Vec::new();
    if shapes.is_empty() {
        let reason = if n < 4 || factorizations(n, 2).len() == 1 {
            format!("N = {n} is prime or 1")
        } else {
            format!("max_parts = {max_parts} admits only the trivial shape")
        };
        notes.push(format!(
            "{reason}: only the trivial shape ({n}) exists, no nontrivial virtual subsystems"
        ));
    }
    let mut reports = Vec::new();
    for shape in &shapes {
        let joint = dist.as_joint(shape).expect("factorization of N");
        reports.extend(shape_reports(&joint, opts).expect("groupings generated for this shape"));
    }
    ScanOutcome { reports, notes }
}
