//! Normalized-Laplacian spectrum of `s^n(G)` built level by level.
//!
//! Every eigenvalue of `L_n` other than the exceptional value `1` is the image
//! of an eigenvalue `x != 2` of `L_{n-1}` under one of
//!
//! ```text
//! g1(x) = 1 + sqrt(1 - x/2)      g2(x) = 1 - sqrt(1 - x/2)
//! ```
//!
//! with the multiplicity of `x`. Both are inverse branches of
//! `Q(y) = 4y - 2y^2`. The exceptional eigenvalue `1` enters with multiplicity
//! `r + 1`, except at the first level of a seed with an odd cycle where it is
//! `r - 1`. Values are stored as a base eigenvalue plus the chain of branches
//! applied to it, so floating error comes from the base spectrum only.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{analyze, subdivision_counts, Graph, GraphMeta};
use crate::linalg::{jacobi_eigenvalues, normalized_laplacian, EigenResult, DEFAULT_ORACLE_CAP};
use crate::scalar::Scalar;

/// Default cap on the number of distinct entries [`spectrum_at`] will hold.
pub const DEFAULT_ENTRY_CAP: u64 = 10_000_000;

/// `g1(x) = 1 + sqrt(1 - x/2)`.
pub fn g1<T: Scalar>(x: T) -> T {
    T::one() + (T::one() - x / T::lit(2.0)).sqrt()
}

/// `g2(x) = 1 - sqrt(1 - x/2)`.
pub fn g2<T: Scalar>(x: T) -> T {
    T::one() - (T::one() - x / T::lit(2.0)).sqrt()
}

/// `Q(y) = 4y - 2y^2`, the common left inverse of [`g1`] and [`g2`].
pub fn q_map<T: Scalar>(y: T) -> T {
    T::lit(4.0) * y - T::lit(2.0) * y * y
}

/// `R(x) = 2x^2 - 1`, the same map on the transition-matrix side (`mu = 1 - lambda`).
pub fn r_map<T: Scalar>(x: T) -> T {
    T::lit(2.0) * x * x - T::one()
}

/// Which inverse branch produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    G1,
    G2,
}

/// Eigenvalues carried exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExactValue {
    Zero,
    One,
    Two,
}

impl ExactValue {
    pub fn as_u8(self) -> u8 {
        match self {
            ExactValue::Zero => 0,
            ExactValue::One => 1,
            ExactValue::Two => 2,
        }
    }

    pub fn to_scalar<T: Scalar>(self) -> T {
        T::from_count(self.as_u8() as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Base<T> {
    Exact(ExactValue),
    Numeric(T),
}

impl<T: Scalar> Base<T> {
    pub fn value(&self) -> T {
        match *self {
            Base::Exact(e) => e.to_scalar(),
            Base::Numeric(x) => x,
        }
    }
}

/// Branch labels applied to a base value, oldest first. Holds up to 64 labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TransformPath {
    bits: u64,
    len: u8,
}

impl TransformPath {
    pub const MAX_LEN: usize = 64;

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn push(self, b: Branch) -> Self {
        assert!(self.len() < Self::MAX_LEN, "transform path longer than {} labels", Self::MAX_LEN);
        let bit = matches!(b, Branch::G2) as u64;
        TransformPath { bits: self.bits | (bit << self.len), len: self.len + 1 }
    }

    pub fn iter(&self) -> impl Iterator<Item = Branch> + '_ {
        (0..self.len).map(|i| if self.bits >> i & 1 == 1 { Branch::G2 } else { Branch::G1 })
    }
}

impl fmt::Display for TransformPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(match b {
                Branch::G1 => "1",
                Branch::G2 => "2",
            })?;
        }
        Ok(())
    }
}

/// One eigenvalue of `L_n` as `(base, path)` with cached evaluation.
///
/// `complement` caches `2 - value`. Carrying both lets each branch be
/// evaluated without cancellation near either end of `[0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralValue<T> {
    base: Base<T>,
    path: TransformPath,
    value: T,
    complement: T,
    exact: Option<ExactValue>,
}

impl<T: Scalar> SpectralValue<T> {
    pub fn exact(e: ExactValue) -> Self {
        let v: T = e.to_scalar();
        SpectralValue {
            base: Base::Exact(e),
            path: TransformPath::default(),
            value: v,
            complement: T::lit(2.0) - v,
            exact: Some(e),
        }
    }

    pub fn numeric(x: T) -> Self {
        SpectralValue {
            base: Base::Numeric(x),
            path: TransformPath::default(),
            value: x,
            complement: T::lit(2.0) - x,
            exact: None,
        }
    }

    pub fn value(&self) -> T {
        self.value
    }

    /// `2 - value`, accurate to relative precision near `2`.
    pub fn complement(&self) -> T {
        self.complement
    }

    pub fn base(&self) -> Base<T> {
        self.base
    }

    pub fn path(&self) -> TransformPath {
        self.path
    }

    /// `Some` when the value is exactly `0`, `1` or `2`.
    pub fn exact_value(&self) -> Option<ExactValue> {
        self.exact
    }

    /// Image under `g1` or `g2`.
    ///
    /// With `s = sqrt((2 - x)/2)`: `g1(x) = 1 + s` and
    /// `g2(x) = 1 - s = (x/2)/(1 + s)`, and the two are mirror images about 1.
    pub fn child(&self, branch: Branch) -> Self {
        let two = T::lit(2.0);
        let s = (self.complement / two).sqrt();
        let far = T::one() + s;
        let near = self.value / two / far;
        let (value, complement) = match branch {
            Branch::G1 => (far, near),
            Branch::G2 => (near, far),
        };
        let exact = match (self.exact, branch) {
            (Some(ExactValue::Zero), Branch::G1) => Some(ExactValue::Two),
            (Some(ExactValue::Zero), Branch::G2) => Some(ExactValue::Zero),
            (Some(ExactValue::Two), _) => Some(ExactValue::One),
            _ => None,
        };
        let (value, complement) = match exact {
            Some(e) => (e.to_scalar(), two - e.to_scalar()),
            None => (value, complement),
        };
        SpectralValue { base: self.base, path: self.path.push(branch), value, complement, exact }
    }

    /// Re-evaluates by folding the plain `g1`/`g2` formulas over the path.
    pub fn fold_path(&self) -> T {
        self.path.iter().fold(self.base.value(), |x, b| match b {
            Branch::G1 => g1(x),
            Branch::G2 => g2(x),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry<T> {
    pub value: SpectralValue<T>,
    pub multiplicity: u64,
}

/// The multiset `sigma_n` of eigenvalues of `L_n` with integer multiplicities.
///
/// Entries are kept sorted by value.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    level: u32,
    entries: Vec<SpectrumEntry<T>>,
}

impl<T: Scalar> Spectrum<T> {
    fn from_entries(level: u32, mut entries: Vec<SpectrumEntry<T>>) -> Self {
        entries.retain(|e| e.multiplicity > 0);
        entries.par_sort_by(|a, b| cmp_values(&a.value, &b.value));
        Spectrum { level, entries }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn entries(&self) -> &[SpectrumEntry<T>] {
        &self.entries
    }

    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    /// Total multiplicity; equals the vertex count of the graph.
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn exact_multiplicity(&self, e: ExactValue) -> u64 {
        self.entries.iter().filter(|x| x.value.exact == Some(e)).map(|x| x.multiplicity).sum()
    }

    pub fn zero_mult(&self) -> u64 {
        self.exact_multiplicity(ExactValue::Zero)
    }

    pub fn one_mult(&self) -> u64 {
        self.exact_multiplicity(ExactValue::One)
    }

    pub fn two_mult(&self) -> u64 {
        self.exact_multiplicity(ExactValue::Two)
    }

    /// `sum of multiplicity * value`; the trace of `L_n`.
    pub fn trace(&self) -> T {
        self.entries.iter().map(|e| T::from_count(e.multiplicity) * e.value.value).sum()
    }

    /// All eigenvalues, sorted, each repeated by multiplicity.
    pub fn expanded(&self) -> Vec<T> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value.value, e.multiplicity as usize))
            .collect()
    }

    /// Eigenvalues of the symmetric transition matrix `D^{-1/2} A D^{-1/2}`,
    /// `mu = 1 - lambda`, with multiplicities, sorted ascending in `mu`.
    pub fn transition_values(&self) -> Vec<(T, u64)> {
        self.entries.iter().rev().map(|e| (T::one() - e.value.value, e.multiplicity)).collect()
    }

    /// Records for serialization, sorted by value.
    pub fn records(&self) -> Vec<SpectrumRecord> {
        self.entries
            .iter()
            .map(|e| SpectrumRecord {
                value: e.value.value.to_f64().unwrap_or(f64::NAN),
                exact: e.value.exact.map(ExactValue::as_u8),
                multiplicity: e.multiplicity,
                path: e.value.path.to_string(),
                base: e.value.base.value().to_f64().unwrap_or(f64::NAN),
                base_exact: match e.value.base {
                    Base::Exact(x) => Some(x.as_u8()),
                    Base::Numeric(_) => None,
                },
            })
            .collect()
    }

    /// JSON array of `{value, multiplicity, path, base}` objects; exact
    /// values are written as the integers 0, 1, 2.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.records().iter().map(|r| r.to_json(None)).collect())
    }
}

fn cmp_values<T: Scalar>(a: &SpectralValue<T>, b: &SpectralValue<T>) -> Ordering {
    a.value
        .partial_cmp(&b.value)
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.complement.partial_cmp(&a.complement).unwrap_or(Ordering::Equal))
        .then_with(|| a.path.len().cmp(&b.path.len()))
        .then_with(|| a.path.bits.cmp(&b.path.bits))
}

/// Serializable form of one spectrum entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRecord {
    pub value: f64,
    #[serde(skip)]
    pub exact: Option<u8>,
    pub multiplicity: u64,
    pub path: String,
    pub base: f64,
    #[serde(skip)]
    pub base_exact: Option<u8>,
}

impl SpectrumRecord {
    /// JSON object; floats are rounded to `significant` digits when given.
    pub fn to_json(&self, significant: Option<usize>) -> serde_json::Value {
        let num = |x: f64, exact: Option<u8>| match exact {
            Some(e) => serde_json::Value::from(e),
            None => serde_json::Value::from(significant.map_or(x, |d| round_significant(x, d))),
        };
        serde_json::json!({
            "value": num(self.value, self.exact),
            "multiplicity": self.multiplicity,
            "path": self.path,
            "base": num(self.base, self.base_exact),
        })
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Level-0 spectrum computed with the Jacobi oracle.
///
/// Eigenvalues within `T::CLUSTER_TOL` of each other form one entry with
/// the cluster mean as value. Clusters at 0, 1 and 2 are made exact.
pub fn base_spectrum<T: Scalar>(g: &Graph) -> Result<Spectrum<T>> {
    base_spectrum_capped(g, DEFAULT_ORACLE_CAP)
}

pub fn base_spectrum_capped<T: Scalar>(g: &Graph, oracle_cap: usize) -> Result<Spectrum<T>> {
    if g.vertex_count() > oracle_cap {
        return Err(Error::ResourceLimit {
            what: "dense base spectrum".into(),
            required: g.vertex_count() as u128,
            cap: oracle_cap as u128,
        });
    }
    let eig = jacobi_eigenvalues(&normalized_laplacian::<T>(g))?;
    let tol = T::lit(T::CLUSTER_TOL);
    let entries = cluster(&eig.eigenvalues, tol)
        .into_iter()
        .map(|(mean, count)| {
            let snapped = [ExactValue::Zero, ExactValue::One, ExactValue::Two]
                .into_iter()
                .find(|e| (mean - e.to_scalar::<T>()).abs() <= tol);
            let value = match snapped {
                Some(e) => SpectralValue::exact(e),
                None => SpectralValue::numeric(mean),
            };
            SpectrumEntry { value, multiplicity: count as u64 }
        })
        .collect();
    Ok(Spectrum::from_entries(0, entries))
}

// Splits sorted values into runs whose consecutive gaps are <= tol.
fn cluster<T: Scalar>(sorted: &[T], tol: T) -> Vec<(T, usize)> {
    let mut out: Vec<(T, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > tol {
            let run = &sorted[start..i];
            if !run.is_empty() {
                let mean = run.iter().copied().sum::<T>() / T::from_count(run.len() as u64);
                out.push((mean, run.len()));
            }
            start = i;
        }
    }
    out
}

/// Multiplicity of the exceptional eigenvalue 1 of `L_n` (equivalently of
/// the eigenvalue 0 of the transition matrix) for `n >= 1`.
pub fn exceptional_multiplicity(meta: &GraphMeta, n: u32) -> Result<u64> {
    assert!(n >= 1, "exceptional multiplicity is defined for n >= 1");
    let r = meta.circuit_rank as i64;
    let m = if n == 1 && meta.has_odd_cycle { r - 1 } else { r + 1 };
    u64::try_from(m).map_err(|_| Error::NegativeMultiplicity(m))
}

/// One recursion step: `sigma_n = Q^{-1}(sigma_{n-1} \ {2}) + {1 x m}`.
pub fn step<T: Scalar>(prev: &Spectrum<T>, meta: &GraphMeta) -> Result<Spectrum<T>> {
    let level = prev.level + 1;
    let mut removed_two = false;
    let mut entries: Vec<SpectrumEntry<T>> = Vec::with_capacity(2 * prev.entries.len() + 1);
    for e in &prev.entries {
        let mut multiplicity = e.multiplicity;
        if !removed_two && e.value.exact == Some(ExactValue::Two) {
            multiplicity -= 1;
            removed_two = true;
        }
        if multiplicity == 0 {
            continue;
        }
        for branch in [Branch::G1, Branch::G2] {
            entries.push(SpectrumEntry { value: e.value.child(branch), multiplicity });
        }
    }
    let ones = exceptional_multiplicity(meta, level)?;
    if ones > 0 {
        entries.push(SpectrumEntry { value: SpectralValue::exact(ExactValue::One), multiplicity: ones });
    }
    Ok(Spectrum::from_entries(level, entries))
}

/// `sigma_n` for `s^n(g)`, starting from the Jacobi spectrum of `g`.
pub fn spectrum_at<T: Scalar>(g: &Graph, n: u32) -> Result<Spectrum<T>> {
    spectrum_at_capped(g, n, DEFAULT_ORACLE_CAP, DEFAULT_ENTRY_CAP)
}

pub fn spectrum_at_capped<T: Scalar>(g: &Graph, n: u32, oracle_cap: usize, entry_cap: u64) -> Result<Spectrum<T>> {
    let meta = analyze(g);
    let base = base_spectrum_capped::<T>(g, oracle_cap)?;
    let (vertices, _) = subdivision_counts(g.vertex_count() as u64, g.edge_count() as u64, n).ok_or_else(|| {
        Error::ResourceLimit { what: format!("spectrum at level {n}"), required: u128::MAX, cap: entry_cap as u128 }
    })?;
    // distinct entries at most double per level, plus the exceptional entry
    let bound = (base.distinct_count() as u128 + 1) << n.min(100);
    let required = bound.min(vertices as u128);
    if required > entry_cap as u128 {
        return Err(Error::ResourceLimit { what: format!("spectrum at level {n}"), required, cap: entry_cap as u128 });
    }
    (0..n).try_fold(base, |s, _| step(&s, &meta))
}

/// Per-cluster multiplicity comparison in a [`MatchReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterAgreement<T> {
    pub value: T,
    pub analytic_multiplicity: u64,
    pub numeric_multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport<T> {
    pub max_deviation: T,
    pub tolerance: T,
    pub clusters: Vec<ClusterAgreement<T>>,
    pub success: bool,
}

impl<T: Scalar> MatchReport<T> {
    pub fn multiplicities_agree(&self) -> bool {
        self.clusters.iter().all(|c| c.analytic_multiplicity == c.numeric_multiplicity)
    }
}

/// Pairs the sorted analytic and numeric eigenvalue lists.
///
/// Succeeds iff the largest pairwise deviation is at most `tol`. Cluster
/// multiplicities count, for each analytic entry, the numeric values within
/// `tol` of it.
pub fn compare<T: Scalar>(analytic: &Spectrum<T>, numeric: &EigenResult<T>, tol: T) -> Result<MatchReport<T>> {
    let total = analytic.total_multiplicity();
    if total != numeric.eigenvalues.len() as u64 {
        return Err(Error::CountMismatch { analytic: total, numeric: numeric.eigenvalues.len() });
    }
    let max_deviation = analytic
        .expanded()
        .iter()
        .zip(&numeric.eigenvalues)
        .map(|(a, b)| (*a - *b).abs())
        .fold(T::zero(), T::max);

    let mut clusters: Vec<ClusterAgreement<T>> = Vec::new();
    for e in &analytic.entries {
        let v = e.value.value;
        match clusters.last_mut() {
            Some(c) if (c.value - v).abs() <= tol => c.analytic_multiplicity += e.multiplicity,
            _ => clusters.push(ClusterAgreement { value: v, analytic_multiplicity: e.multiplicity, numeric_multiplicity: 0 }),
        }
    }
    for c in &mut clusters {
        let lo = numeric.eigenvalues.partition_point(|&x| x < c.value - tol);
        let hi = numeric.eigenvalues.partition_point(|&x| x <= c.value + tol);
        c.numeric_multiplicity = (hi - lo) as u64;
    }
    Ok(MatchReport { max_deviation, tolerance: tol, clusters, success: max_deviation <= tol })
}
