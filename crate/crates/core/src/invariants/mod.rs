//! Multiplicative degree-Kirchhoff index, Kemeny's constant and spanning-tree
//! counts of `s^n(G)`, each computed three ways:
//!
//! * spectral sums over `sigma_n`,
//! * closed forms in `n`, the circuit rank `r`, `E_0` and the level-0 value,
//! * dense oracles on the explicit graph (resistance distances, hitting
//!   times, matrix-tree determinant).
//!
//! [`full_report`] runs all three per level and cross-checks them.

pub mod oracle;
pub mod walk;

use num_bigint::BigUint;
use num_traits::{FromPrimitive, Num, ToPrimitive};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{analyze, iterate_subdivide, subdivision_counts, Graph};
use crate::linalg::DEFAULT_ORACLE_CAP;
use crate::scalar::Scalar;
use crate::spectrum::{base_spectrum_capped, round_significant, step, ExactValue, Spectrum, DEFAULT_ENTRY_CAP};

pub use oracle::{kemeny_oracle, kirchhoff_oracle, resistance_matrix, spanning_trees_oracle};
pub use walk::kemeny_montecarlo;

/// Relative tolerance for Kirchhoff and Kemeny agreement across routes.
pub const CROSS_CHECK_TOL: f64 = 1e-8;
/// Relative tolerance for `Kf* = 2 E_n K` within one route.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Largest graph handed to the big-integer determinant in [`full_report`].
pub const DEFAULT_EXACT_ORACLE_CAP: usize = 256;

/// `sum over nonzero eigenvalues of multiplicity / lambda`.
pub fn kemeny_spectral<T: Scalar>(spec: &Spectrum<T>) -> T {
    debug_assert_eq!(spec.zero_mult(), 1, "connected graph has a simple zero eigenvalue");
    spec.entries()
        .iter()
        .filter(|e| e.value.exact_value() != Some(ExactValue::Zero))
        .map(|e| T::from_count(e.multiplicity) / e.value.value())
        .sum()
}

/// `Kf* = 2 E_n * sum over nonzero eigenvalues of 1 / lambda`.
pub fn kirchhoff_spectral<T: Scalar>(spec: &Spectrum<T>, edge_count: u64) -> T {
    T::from_count(2 * edge_count) * kemeny_spectral(spec)
}

/// Natural log of `prod(d_i) * prod_{lambda != 0} lambda / sum(d_i)`.
pub fn spanning_trees_spectral_ln<T: Scalar>(spec: &Spectrum<T>, degrees: &[usize]) -> T {
    let ln_deg: T = degrees.iter().map(|&d| T::from_count(d as u64).ln()).sum();
    let ln_eig: T = spec
        .entries()
        .iter()
        .filter(|e| e.value.exact_value() != Some(ExactValue::Zero))
        .map(|e| T::from_count(e.multiplicity) * e.value.value().ln())
        .sum();
    let total: u64 = degrees.iter().map(|&d| d as u64).sum();
    ln_deg + ln_eig - T::from_count(total).ln()
}

/// Spanning-tree count from the spectrum and degrees, evaluated in log space.
pub fn spanning_trees_spectral<T: Scalar>(spec: &Spectrum<T>, degrees: &[usize]) -> Result<T> {
    let ln = spanning_trees_spectral_ln(spec, degrees);
    if ln > T::max_value().ln() {
        return Err(Error::OverflowPolicy(ln.to_f64().unwrap_or(f64::INFINITY)));
    }
    Ok(ln.exp())
}

/// Nearest integer to `x`, if `x` is within the range where the scalar type
/// represents every integer.
pub fn round_count<T: Scalar>(x: T) -> Option<BigUint> {
    let limit = T::epsilon().recip();
    if !(x >= T::zero() && x <= limit) {
        return None;
    }
    x.round().to_u64().map(BigUint::from)
}

fn pow<T: Num + Clone>(base: T, n: u32) -> T {
    (0..n).fold(T::one(), |acc, _| acc * base.clone())
}

fn lit<T: FromPrimitive>(x: i64) -> T {
    T::from_i64(x).expect("small integer representable")
}

/// `Kf*(s^n) = 8^n Kf*(G) + (8^n - 2^n)/3 * (2r - 1) * E_0`.
///
/// Generic over any numeric field, so it can be evaluated exactly over the
/// rationals as well as in floating point.
pub fn kirchhoff_closed_form<T: Num + Clone + FromPrimitive>(kf0: T, r: u64, e0: u64, n: u32) -> T {
    let p8 = pow(lit::<T>(8), n);
    let p2 = pow(lit::<T>(2), n);
    let coeff = (p8.clone() - p2) / lit(3);
    p8 * kf0 + coeff * lit(2 * r as i64 - 1) * lit(e0 as i64)
}

/// `Kf*(s^n) = 8 Kf*(s^{n-1}) + 2^n (2r - 1) E_0`, for `n >= 1`.
pub fn kirchhoff_step<T: Num + Clone + FromPrimitive>(prev: T, r: u64, e0: u64, n: u32) -> T {
    lit::<T>(8) * prev + pow(lit::<T>(2), n) * lit(2 * r as i64 - 1) * lit(e0 as i64)
}

/// `K(s^n) = 4^n K(G) + (4^n - 1)/3 * (r - 1/2)`.
pub fn kemeny_closed_form<T: Num + Clone + FromPrimitive>(k0: T, r: u64, n: u32) -> T {
    let p4 = pow(lit::<T>(4), n);
    let coeff = (p4.clone() - T::one()) / lit(3);
    p4 * k0 + coeff * lit(2 * r as i64 - 1) / lit(2)
}

/// `K(s^n) = 4 K(s^{n-1}) + r - 1/2`.
pub fn kemeny_step<T: Num + Clone + FromPrimitive>(prev: T, r: u64) -> T {
    lit::<T>(4) * prev + lit::<T>(2 * r as i64 - 1) / lit(2)
}

/// `N_st(s^n) = 2^{rn} N_st(G)`.
pub fn spanning_trees_closed_form(nst0: &BigUint, r: u64, n: u32) -> BigUint {
    nst0 << (r * n as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Route {
    Spectral,
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `Kf*` against the closed form.
    KirchhoffMult,
    /// `K` against the closed form.
    Kemeny,
    /// Spanning-tree count against the closed form.
    SpanningTrees,
    /// `Kf* = 2 E_n K` within the route.
    KirchhoffKemenyIdentity,
}

/// One cross-check: relative deviation (exact mismatch reported as 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub quantity: Quantity,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport<T> {
    pub level: u32,
    pub route: Route,
    pub vertex_count: u64,
    pub edge_count: u64,
    pub kirchhoff_mult: T,
    pub kemeny: T,
    /// Exact count when the route yields one at this level.
    pub spanning_trees: Option<BigUint>,
    /// Floating value of the count (log-space for the spectral route).
    pub spanning_trees_approx: T,
    pub checks: Vec<Check>,
}

impl<T: Scalar> InvariantReport<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// JSON object with floats rounded to `significant` digits when given.
    pub fn to_json(&self, significant: Option<usize>) -> serde_json::Value {
        let f = |x: T| {
            let x = x.to_f64().unwrap_or(f64::NAN);
            significant.map_or(x, |d| round_significant(x, d))
        };
        let trees = match &self.spanning_trees {
            Some(t) => match t.to_u64() {
                Some(small) => json!(small),
                None => json!(t.to_string()),
            },
            None => serde_json::Value::Null,
        };
        json!({
            "level": self.level,
            "route": self.route,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "kirchhoff_mult": f(self.kirchhoff_mult),
            "kemeny": f(self.kemeny),
            "spanning_trees": trees,
            "spanning_trees_approx": f(self.spanning_trees_approx),
            "checks": self.checks,
        })
    }
}

/// All route reports for one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport<T> {
    pub level: u32,
    pub reports: Vec<InvariantReport<T>>,
}

impl<T: Scalar> LevelReport<T> {
    pub fn route(&self, route: Route) -> Option<&InvariantReport<T>> {
        self.reports.iter().find(|r| r.route == route)
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(InvariantReport::passed)
    }
}

/// Caps used by [`full_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportConfig {
    /// Largest explicit graph for the floating-point oracles.
    pub oracle_cap: usize,
    /// Largest explicit graph for the big-integer determinant.
    pub exact_oracle_cap: usize,
    pub entry_cap: u64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            oracle_cap: DEFAULT_ORACLE_CAP,
            exact_oracle_cap: DEFAULT_EXACT_ORACLE_CAP,
            entry_cap: DEFAULT_ENTRY_CAP,
        }
    }
}

fn relative<T: Scalar>(got: T, want: T) -> f64 {
    let (g, w) = (got.to_f64().unwrap_or(f64::NAN), want.to_f64().unwrap_or(f64::NAN));
    if g == w {
        0.0
    } else {
        (g - w).abs() / w.abs().max(f64::MIN_POSITIVE)
    }
}

fn check(quantity: Quantity, deviation: f64, tolerance: f64) -> Check {
    Check { quantity, deviation, tolerance, passed: deviation <= tolerance }
}

fn identity_check<T: Scalar>(kf: T, kemeny: T, edge_count: u64) -> Check {
    check(
        Quantity::KirchhoffKemenyIdentity,
        relative(kf, T::from_count(2 * edge_count) * kemeny),
        IDENTITY_TOL,
    )
}

// Compares a route against the closed form and fills in its checks.
fn cross_check<T: Scalar>(report: &mut InvariantReport<T>, reference: &InvariantReport<T>) {
    report.checks.push(check(
        Quantity::KirchhoffMult,
        relative(report.kirchhoff_mult, reference.kirchhoff_mult),
        CROSS_CHECK_TOL,
    ));
    report.checks.push(check(Quantity::Kemeny, relative(report.kemeny, reference.kemeny), CROSS_CHECK_TOL));
    let trees = match (&report.spanning_trees, &reference.spanning_trees) {
        (Some(a), Some(b)) => check(Quantity::SpanningTrees, if a == b { 0.0 } else { 1.0 }, 0.0),
        _ => check(
            Quantity::SpanningTrees,
            relative(report.spanning_trees_approx, reference.spanning_trees_approx),
            CROSS_CHECK_TOL,
        ),
    };
    report.checks.push(trees);
}

/// Per-level reports for `n = 0..=n_max` without failing on disagreement.
///
/// The closed-form route is seeded from the oracles on `g` itself, so it
/// shares no computation with the spectral route.
pub fn build_report<T: Scalar>(g: &Graph, n_max: u32, config: &ReportConfig) -> Result<Vec<LevelReport<T>>> {
    let meta = analyze(g);
    let r = meta.circuit_rank;
    let e0 = g.edge_count() as u64;

    let resist0 = resistance_matrix::<T>(g)?;
    let kf0 = oracle::kirchhoff_from_resistance(g, &resist0);
    let k0 = oracle::kemeny_from_resistance(g, &resist0, 0);
    let nst0 = spanning_trees_oracle(g)?;
    let nst0_approx = T::from_f64(nst0.to_f64().unwrap_or(f64::INFINITY)).unwrap_or(T::infinity());

    let mut spec = base_spectrum_capped::<T>(g, config.oracle_cap)?;
    let mut explicit = g.clone();
    let mut levels = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        if n > 0 {
            spec = step(&spec, &meta)?;
            if spec.distinct_count() as u64 > config.entry_cap {
                return Err(Error::ResourceLimit {
                    what: format!("spectrum at level {n}"),
                    required: spec.distinct_count() as u128,
                    cap: config.entry_cap as u128,
                });
            }
        }
        let (vertex_count, edge_count) = subdivision_counts(g.vertex_count() as u64, e0, n).ok_or_else(|| {
            Error::ResourceLimit { what: format!("level {n}"), required: u128::MAX, cap: u64::MAX as u128 }
        })?;
        let base = |route| InvariantReport {
            level: n,
            route,
            vertex_count,
            edge_count,
            kirchhoff_mult: T::zero(),
            kemeny: T::zero(),
            spanning_trees: None,
            spanning_trees_approx: T::zero(),
            checks: Vec::new(),
        };

        let trees_exact = spanning_trees_closed_form(&nst0, r, n);
        let mut closed = InvariantReport {
            kirchhoff_mult: kirchhoff_closed_form(kf0, r, e0, n),
            kemeny: kemeny_closed_form(k0, r, n),
            spanning_trees_approx: nst0_approx * T::lit(2.0).powi((r * n as u64) as i32),
            spanning_trees: Some(trees_exact),
            ..base(Route::ClosedForm)
        };
        closed.checks.push(identity_check(closed.kirchhoff_mult, closed.kemeny, edge_count));

        let degrees: Vec<usize> = if n == 0 {
            g.degrees()
        } else {
            // degree multiset of s^n(G): originals keep theirs, the rest have degree 2
            let mut d = g.degrees();
            d.resize(vertex_count as usize, 2);
            d
        };
        let ln_trees = spanning_trees_spectral_ln(&spec, &degrees);
        let trees_approx = ln_trees.exp();
        let kemeny = kemeny_spectral(&spec);
        let mut spectral = InvariantReport {
            kirchhoff_mult: kirchhoff_spectral(&spec, edge_count),
            kemeny,
            spanning_trees: round_count(trees_approx),
            spanning_trees_approx: trees_approx,
            ..base(Route::Spectral)
        };
        spectral.checks.push(identity_check(spectral.kirchhoff_mult, spectral.kemeny, edge_count));
        cross_check(&mut spectral, &closed);

        let mut reports = vec![spectral, closed.clone()];
        if vertex_count <= config.oracle_cap as u64 {
            if n > 0 {
                explicit = iterate_subdivide(&explicit, 1, config.oracle_cap as u64)?;
            }
            let explicit_n = explicit.vertex_count();
            let resist = resistance_matrix::<T>(&explicit)?;
            let trees = if explicit_n <= config.exact_oracle_cap {
                Some(spanning_trees_oracle(&explicit)?)
            } else {
                None
            };
            let approx = trees
                .as_ref()
                .and_then(|t| t.to_f64())
                .and_then(T::from_f64)
                .unwrap_or(closed.spanning_trees_approx);
            let mut orc = InvariantReport {
                kirchhoff_mult: oracle::kirchhoff_from_resistance(&explicit, &resist),
                kemeny: oracle::kemeny_from_resistance(&explicit, &resist, 0),
                spanning_trees: trees,
                spanning_trees_approx: approx,
                ..base(Route::Oracle)
            };
            orc.checks.push(identity_check(orc.kirchhoff_mult, orc.kemeny, edge_count));
            cross_check(&mut orc, &closed);
            reports.push(orc);
        }
        levels.push(LevelReport { level: n, reports });
    }
    Ok(levels)
}

/// Like [`build_report`], but fails with [`Error::CrossCheck`] naming the
/// first disagreeing quantity.
pub fn full_report<T: Scalar>(g: &Graph, n_max: u32, config: &ReportConfig) -> Result<Vec<LevelReport<T>>> {
    let levels = build_report(g, n_max, config)?;
    first_failure(&levels)?;
    Ok(levels)
}

pub fn first_failure<T: Scalar>(levels: &[LevelReport<T>]) -> Result<()> {
    for level in levels {
        for report in &level.reports {
            if let Some(c) = report.checks.iter().find(|c| !c.passed) {
                return Err(Error::CrossCheck {
                    level: level.level,
                    quantity: format!("{:?} ({:?} route)", c.quantity, report.route),
                    detail: format!("deviation {:e} exceeds {:e}", c.deviation, c.tolerance),
                });
            }
        }
    }
    Ok(())
}

/// Flattens levels into the JSON array of per-(level, route) objects.
pub fn report_json<T: Scalar>(levels: &[LevelReport<T>], significant: Option<usize>) -> serde_json::Value {
    serde_json::Value::Array(
        levels.iter().flat_map(|l| l.reports.iter().map(|r| r.to_json(significant))).collect(),
    )
}
