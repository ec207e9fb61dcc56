//! Experiments on the open questions and consistency audits of computed
//! values.

use std::time::Duration;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{f_exact, Limits, SolveStatus, SolverResult, MAX_EXACT_N};
use crate::bounds::{bounds_report, g_ratio};
use crate::cache::{CacheEntry, CacheKey, CacheStatus, ExactValueCache};
use crate::combin::{binomial, pow2};
use crate::error::{Result, WitnessError};

/// Applied to the w = 3 probe when the caller sets no limit at all.
pub const PROBE_DEFAULT_TIME: Duration = Duration::from_secs(10);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImpliedRange {
    pub n: usize,
    #[serde(with = "crate::serde_big::biguint")]
    pub lower: BigUint,
    #[serde(with = "crate::serde_big::biguint")]
    pub upper: BigUint,
    pub pinned: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub w: usize,
    /// C(2w, w), the size of the middle sphere.
    #[serde(with = "crate::serde_big::biguint")]
    pub sphere: BigUint,
    pub result: SolverResult,
    /// Whether f(2w,w) equals C(2w,w). A lower bound above C(2w,w) already
    /// settles it; otherwise it stays unknown until the value is exact.
    pub sphere_optimal: Option<bool>,
    /// What the value implies for f(n,w), n >= 2w.
    pub implied: Vec<ImpliedRange>,
}

/// Computes f(2w,w) and propagates it to longer lengths through the
/// monotone combination bound.
pub fn open_problem_probe(w: usize, max_n: usize, limits: &Limits) -> Result<ProbeReport> {
    if !(1..=MAX_EXACT_N / 2).contains(&w) {
        return Err(WitnessError::InvalidArgument(format!(
            "probe supports 1 <= w <= {}, got {w}",
            MAX_EXACT_N / 2
        )));
    }
    let n0 = 2 * w;
    if max_n < n0 || max_n > 64 {
        return Err(WitnessError::InvalidArgument(format!("max_n must lie in [{n0}, 64], got {max_n}")));
    }
    let mut limits = limits.clone();
    if w == 3 && limits.time_limit.is_none() && limits.node_limit.is_none() {
        limits.time_limit = Some(PROBE_DEFAULT_TIME);
    }
    let result = f_exact(n0, w, &limits)?;
    let sphere = binomial(n0, w);
    let sphere_optimal = if result.is_exact() {
        Some(result.value == sphere)
    } else {
        (result.value > sphere).then_some(false)
    };

    let mut cache = ExactValueCache::new();
    let status = match result.status {
        SolveStatus::Exact => CacheStatus::Exact,
        SolveStatus::LowerBound => CacheStatus::LowerBound,
    };
    cache.insert(
        CacheKey::new(n0, w),
        CacheEntry::new(result.value.clone(), status, "probe"),
    )?;
    let implied = (n0..=max_n)
        .map(|n| {
            let r = bounds_report(n, w, &cache)?;
            Ok(ImpliedRange {
                n,
                pinned: r.is_pinned(),
                lower: r.best_lower,
                upper: r.best_upper,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ProbeReport {
        w,
        sphere,
        result,
        sphere_optimal,
        implied,
    })
}

/// One instance of the question whether f(n,w) <= max(C(n,n/2), 2^w + C(n,w))
/// for w > n/2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvidenceRow {
    pub n: usize,
    pub w: usize,
    #[serde(with = "crate::serde_big::biguint")]
    pub value: BigUint,
    pub status: SolveStatus,
    #[serde(with = "crate::serde_big::biguint")]
    pub bound: BigUint,
    /// `Some(false)` also when a lower bound already exceeds the bound.
    pub holds: Option<bool>,
}

pub fn large_window_evidence(max_n: usize, limits: &Limits) -> Result<Vec<EvidenceRow>> {
    if max_n > MAX_EXACT_N {
        return Err(WitnessError::TooLarge(format!("evidence supports n <= {MAX_EXACT_N}")));
    }
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for w in (n / 2 + 1)..=n {
            let r = f_exact(n, w, limits)?;
            let bound = binomial(n, n / 2).max(pow2(w) + binomial(n, w));
            let holds = match r.status {
                SolveStatus::Exact => Some(r.value <= bound),
                SolveStatus::LowerBound => (r.value > bound).then_some(false),
            };
            rows.push(EvidenceRow {
                n,
                w,
                value: r.value,
                status: r.status,
                bound,
                holds,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub entries: usize,
    pub comparisons: usize,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the exact values in `cache` against the monotonicity theorems:
/// f grows with n and with w, and f(n,w)/C(n,w) does not grow with n.
pub fn monotonicity_audit(cache: &ExactValueCache) -> AuditReport {
    let exact: Vec<(usize, usize, &BigUint)> = cache
        .iter()
        .filter(|(key, _)| key.k.is_none())
        .filter_map(|(key, _)| cache.exact(key).map(|v| (key.n, key.w, v)))
        .collect();
    let mut report = AuditReport {
        entries: exact.len(),
        ..AuditReport::default()
    };
    for &(n1, w1, f1) in &exact {
        for &(n2, w2, f2) in &exact {
            if w1 == w2 && n1 < n2 {
                report.comparisons += 1;
                if f1 > f2 {
                    report
                        .violations
                        .push(format!("f({n1},{w1}) = {f1} > f({n2},{w2}) = {f2}"));
                }
                if w1 <= n1 {
                    report.comparisons += 1;
                    let (g1, g2) = (g_ratio(f1, n1, w1), g_ratio(f2, n2, w2));
                    if g1 < g2 {
                        report
                            .violations
                            .push(format!("g({n1},{w1}) = {g1} < g({n2},{w2}) = {g2}"));
                    }
                }
            }
            if n1 == n2 && w1 < w2 {
                report.comparisons += 1;
                if f1 > f2 {
                    report
                        .violations
                        .push(format!("f({n1},{w1}) = {f1} > f({n2},{w2}) = {f2}"));
                }
            }
        }
    }
    report
}
