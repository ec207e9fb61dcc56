//! Exact values of f(n,w) and f(n,w,k) for small parameters.
//!
//! Tiny candidate spaces are scanned exhaustively. Larger ones go through a
//! branch and bound that relies on the property being closed under taking
//! subcodes: a candidate that cannot join a partial code is dropped from
//! the whole subtree. The first two words of a branch are restricted to
//! minimum images under the isometry group.

mod engine;
mod probe;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_report, cw_exact_corollary};
use crate::cache::ExactValueCache;
use crate::code::{has_w_witness_property, Code, Codeword};
use crate::combin::{binomial_u64, low_mask, KSubsets};
use crate::error::{Result, WitnessError};
use engine::{Branch, Shared, Space, MAX_CANDIDATES, MAX_ENUMERATION_CANDIDATES};

pub use probe::{
    large_window_evidence, monotonicity_audit, open_problem_probe, AuditReport, EvidenceRow, ImpliedRange,
    ProbeReport, PROBE_DEFAULT_TIME,
};

/// Largest length accepted by [`f_exact`].
pub const MAX_EXACT_N: usize = 6;
const AUTO_ENUMERATION_CANDIDATES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Exact,
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Enumeration,
    BranchAndBound,
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub isomorph_rejection: bool,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Stop as soon as the best known upper bound is attained.
    pub use_bounds: bool,
    /// Forced strategy; by default enumeration is used for at most 16
    /// candidate words.
    pub strategy: Option<Strategy>,
    /// Number of infeasible partial codes to keep for inspection.
    pub trace_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            time_limit: None,
            node_limit: None,
            isomorph_rejection: true,
            workers: 1,
            use_bounds: true,
            strategy: None,
            trace_limit: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub n: usize,
    pub w: usize,
    pub k: Option<usize>,
    #[serde(with = "crate::serde_big::biguint")]
    pub value: BigUint,
    pub status: SolveStatus,
    pub certificate: Vec<Codeword>,
    pub nodes: u64,
    #[serde(rename = "elapsed_seconds", with = "crate::serde_big::duration_secs")]
    pub elapsed: Duration,
    pub strategy: Strategy,
    pub deterministic: bool,
    /// Partial codes rejected as infeasible, up to `Limits::trace_limit`.
    #[serde(skip)]
    pub pruned: Vec<Vec<Codeword>>,
}

impl SolverResult {
    pub fn is_exact(&self) -> bool {
        self.status == SolveStatus::Exact
    }

    pub fn certificate_code(&self) -> Result<Code> {
        Code::new(self.n, self.certificate.iter().copied())
    }
}

/// The image of `c` minimising the string order over all coordinate
/// permutations fixing the support of `first`.
pub(crate) fn min_image_fixing(n: usize, first: u64, c: u64) -> u64 {
    let top = |region: u64, count: u32| -> u64 {
        let mut out = 0;
        let mut left = count;
        for i in (0..n).rev() {
            if left == 0 {
                break;
            }
            if region >> i & 1 == 1 {
                out |= 1 << i;
                left -= 1;
            }
        }
        out
    };
    let inside = (c & first).count_ones();
    let outside = (c & !first).count_ones();
    top(first, inside) | top(!first & low_mask(n), outside)
}

fn branches(space: &Space, rejection: bool) -> Vec<Branch> {
    let m = space.m();
    let low = |k: usize| if k >= 128 { u128::MAX } else { (1u128 << k) - 1 };
    let after = |i: usize| low(m) & !low(i + 1);
    if !rejection {
        return (0..m)
            .map(|i| Branch {
                code: 1 << i,
                open: after(i),
            })
            .collect();
    }
    // The first candidate is the minimum image of every word; the second
    // must be minimal under the stabiliser of the first.
    let first = space.cands[0];
    let mut out = vec![Branch { code: 1, open: 0 }];
    for j in 1..m {
        if min_image_fixing(space.n, first, space.cands[j]) == space.cands[j] {
            out.push(Branch {
                code: 1 | 1 << j,
                open: after(j),
            });
        }
    }
    out
}

struct Instance {
    n: usize,
    w: usize,
    k: Option<usize>,
    candidates: Vec<u64>,
    upper: Option<u64>,
}

fn solve(inst: Instance, limits: &Limits) -> Result<SolverResult> {
    let start = Instant::now();
    let space = Space::new(inst.n, inst.w, inst.candidates)?;
    let m = space.m();
    let strategy = limits.strategy.unwrap_or(if m <= AUTO_ENUMERATION_CANDIDATES {
        Strategy::Enumeration
    } else {
        Strategy::BranchAndBound
    });
    if strategy == Strategy::Enumeration && m > MAX_ENUMERATION_CANDIDATES {
        return Err(WitnessError::TooLarge(format!(
            "enumeration over {m} candidates (at most {MAX_ENUMERATION_CANDIDATES})"
        )));
    }
    let stop_at = inst
        .upper
        .filter(|_| limits.use_bounds)
        .map_or(m, |u| (u as usize).min(m));
    let shared = Shared::new(stop_at, limits.time_limit.map(|t| start + t), limits.node_limit);
    let (best, pruned, nodes) = match strategy {
        Strategy::Enumeration => {
            let (best, nodes) = engine::enumerate(&space, &shared);
            (best, Vec::new(), nodes)
        }
        Strategy::BranchAndBound => {
            let list = branches(&space, limits.isomorph_rejection);
            engine::search(&space, &shared, &list, limits.workers, limits.trace_limit)?
        }
    };
    let proven = shared.proven.load(std::sync::atomic::Ordering::Relaxed);
    let expired = shared.expired.load(std::sync::atomic::Ordering::Relaxed);
    let status = if expired && !proven {
        SolveStatus::LowerBound
    } else {
        SolveStatus::Exact
    };
    let to_words = |s: u128| -> Vec<Codeword> {
        let mut v: Vec<Codeword> = space
            .words(s)
            .into_iter()
            .map(|b| Codeword::new(inst.n, b))
            .collect::<Result<_>>()
            .expect("candidates fit the length");
        v.sort();
        v
    };
    let (value, certificate) = match best {
        Some((size, s)) => (size, to_words(s)),
        None => (0, Vec::new()),
    };
    let result = SolverResult {
        n: inst.n,
        w: inst.w,
        k: inst.k,
        value: BigUint::from(value),
        status,
        certificate,
        nodes,
        elapsed: start.elapsed(),
        strategy,
        deterministic: limits.workers == 1 && limits.time_limit.is_none(),
        pruned: pruned.into_iter().map(to_words).collect(),
    };
    if !verify_certificate(&result) {
        return Err(WitnessError::Certificate(format!(
            "f({},{}) certificate of size {value} fails verification",
            inst.n, inst.w
        )));
    }
    Ok(result)
}

fn check_w(n: usize, w: usize) -> Result<()> {
    if w == 0 || w > n {
        return Err(WitnessError::InvalidArgument(format!("need 1 <= w <= n, got n = {n}, w = {w}")));
    }
    Ok(())
}

fn to_u64(x: &BigUint) -> u64 {
    x.to_u64().unwrap_or(u64::MAX)
}

/// f(n,w): the largest code in {0,1}^n in which every word has a witness
/// of size `w`.
pub fn f_exact(n: usize, w: usize, limits: &Limits) -> Result<SolverResult> {
    if n == 0 || n > MAX_EXACT_N {
        return Err(WitnessError::TooLarge(format!("f_exact supports 1 <= n <= {MAX_EXACT_N}, got {n}")));
    }
    check_w(n, w)?;
    let upper = bounds_report(n, w, &ExactValueCache::new())?.best_upper;
    solve(
        Instance {
            n,
            w,
            k: None,
            candidates: (0..1u64 << n).collect(),
            upper: Some(to_u64(&upper)),
        },
        limits,
    )
}

/// f(n,w,k): the same maximum over codes of constant weight `k`.
pub fn f_cw_exact(n: usize, w: usize, k: usize, limits: &Limits) -> Result<SolverResult> {
    if n == 0 || n > 64 {
        return Err(WitnessError::InvalidLength(n));
    }
    check_w(n, w)?;
    if k > n {
        return Err(WitnessError::InvalidArgument(format!("weight {k} exceeds n = {n}")));
    }
    let count = binomial_u64(n, k);
    if count > MAX_CANDIDATES as u64 {
        return Err(WitnessError::TooLarge(format!(
            "C({n},{k}) = {count} candidate words (at most {MAX_CANDIDATES})"
        )));
    }
    let mut upper = count;
    if let Some(v) = cw_exact_corollary(n, w, k) {
        upper = upper.min(to_u64(&v));
    }
    upper = upper.min(to_u64(&bounds_report(n, w, &ExactValueCache::new())?.best_upper));
    solve(
        Instance {
            n,
            w,
            k: Some(k),
            candidates: KSubsets::new(n, k).collect(),
            upper: Some(upper),
        },
        limits,
    )
}

/// Re-checks every invariant a result promises.
pub fn verify_certificate(r: &SolverResult) -> bool {
    let Ok(code) = r.certificate_code() else {
        return false;
    };
    if BigUint::from(code.size()) != r.value {
        return false;
    }
    if let Some(k) = r.k {
        if code.iter().any(|c| c.weight() != k) {
            return false;
        }
    }
    has_w_witness_property(&code, r.w).holds()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn apply(p: &[usize], x: u64) -> u64 {
        p.iter()
            .enumerate()
            .filter(|(i, _)| x >> i & 1 == 1)
            .fold(0, |acc, (_, &j)| acc | 1 << j)
    }

    fn min_by_order(xs: impl Iterator<Item = u64>) -> u64 {
        xs.min_by(engine::candidate_order).unwrap()
    }

    #[test]
    fn min_images_match_group_brute_force() {
        for n in 1..=4 {
            let perms = permutations(n);
            // Singletons under translations and permutations: the zero word.
            for x in 0..1u64 << n {
                let img = min_by_order(
                    (0..1u64 << n).flat_map(|t| perms.iter().map(move |p| apply(p, x ^ t))),
                );
                assert_eq!(img, 0);
            }
            // Pairs: minimum of the second word under the stabiliser of the first.
            for first in 0..1u64 << n {
                let stab: Vec<&Vec<usize>> = perms.iter().filter(|p| apply(p, first) == first).collect();
                for c in 0..1u64 << n {
                    let img = min_by_order(stab.iter().map(|p| apply(p, c)));
                    assert_eq!(min_image_fixing(n, first, c), img, "n={n} first={first:b} c={c:b}");
                }
            }
        }
    }

    #[test]
    fn trivial_values() {
        let r = f_exact(2, 1, &Limits::default()).unwrap();
        assert_eq!(r.value, BigUint::from(2u32));
        assert!(r.is_exact());
        for n in 1..=5 {
            let r = f_exact(n, n, &Limits::default()).unwrap();
            assert_eq!(r.value, BigUint::from(1u64 << n));
            assert_eq!(r.certificate_code().unwrap(), Code::full_cube(n).unwrap());
        }
    }

    #[test]
    fn constant_weight_examples() {
        for (n, w, k, v) in [(4, 2, 1, 4u32), (5, 2, 2, 10), (4, 2, 3, 4), (4, 2, 4, 1)] {
            for strategy in [Strategy::Enumeration, Strategy::BranchAndBound] {
                let limits = Limits {
                    strategy: Some(strategy),
                    use_bounds: false,
                    ..Limits::default()
                };
                let r = f_cw_exact(n, w, k, &limits).unwrap();
                assert_eq!(r.value, BigUint::from(v), "({n},{w},{k}) {strategy:?}");
                assert!(r.certificate.iter().all(|c| c.weight() == k));
            }
        }
    }

    #[test]
    fn strategies_and_rejection_agree_small() {
        for n in 1..=4 {
            for w in 1..=n {
                let enumerated = f_exact(n, w, &Limits::default()).unwrap();
                assert_eq!(enumerated.strategy, Strategy::Enumeration);
                for rejection in [false, true] {
                    let limits = Limits {
                        strategy: Some(Strategy::BranchAndBound),
                        isomorph_rejection: rejection,
                        use_bounds: false,
                        ..Limits::default()
                    };
                    let bb = f_exact(n, w, &limits).unwrap();
                    assert_eq!(bb.value, enumerated.value, "f({n},{w}) rejection={rejection}");
                }
            }
        }
    }

    #[test]
    fn rejection_agrees_on_constant_weight() {
        for n in 3..=7 {
            for w in 1..=n {
                for k in 0..=n {
                    let run = |rejection| {
                        f_cw_exact(
                            n,
                            w,
                            k,
                            &Limits {
                                strategy: Some(Strategy::BranchAndBound),
                                isomorph_rejection: rejection,
                                use_bounds: false,
                                ..Limits::default()
                            },
                        )
                        .unwrap()
                        .value
                    };
                    assert_eq!(run(false), run(true), "f({n},{w},{k})");
                }
            }
        }
    }

    #[test]
    fn pruned_partial_codes_are_infeasible() {
        let limits = Limits {
            strategy: Some(Strategy::BranchAndBound),
            trace_limit: 500,
            use_bounds: false,
            ..Limits::default()
        };
        let r = f_exact(4, 2, &limits).unwrap();
        assert!(!r.pruned.is_empty());
        for words in &r.pruned {
            let code = Code::new(4, words.iter().copied()).unwrap();
            assert!(!has_w_witness_property(&code, 2).holds());
        }
    }

    #[test]
    fn certificate_checks() {
        let r = f_exact(3, 2, &Limits::default()).unwrap();
        assert!(verify_certificate(&r));
        let mut bad = r.clone();
        let first = bad.certificate[0];
        let flipped = bad
            .certificate
            .iter()
            .copied()
            .find(|c| c.distance(&first).unwrap() == 1)
            .expect("a neighbour of the first word");
        bad.certificate[0] = flipped;
        assert!(!verify_certificate(&bad));
        let mut short = r.clone();
        short.value += 1u32;
        assert!(!verify_certificate(&short));
    }

    #[test]
    fn workers_do_not_change_value() {
        let base = Limits {
            strategy: Some(Strategy::BranchAndBound),
            use_bounds: false,
            ..Limits::default()
        };
        let one = f_exact(4, 2, &base).unwrap();
        let again = f_exact(4, 2, &base).unwrap();
        assert_eq!(one.certificate, again.certificate);
        for workers in [0, 2, 4] {
            let r = f_exact(4, 2, &Limits { workers, ..base.clone() }).unwrap();
            assert_eq!(r.value, one.value);
            assert!(!r.deterministic);
        }
    }

    #[test]
    fn node_limit_gives_lower_bound() {
        let limits = Limits {
            node_limit: Some(1 << 12),
            use_bounds: false,
            ..Limits::default()
        };
        let r = f_exact(6, 3, &limits).unwrap();
        assert_eq!(r.status, SolveStatus::LowerBound);
        assert!(verify_certificate(&r));
    }

    #[test]
    fn guards() {
        assert!(f_exact(7, 3, &Limits::default()).is_err());
        assert!(f_exact(3, 0, &Limits::default()).is_err());
        assert!(f_cw_exact(12, 3, 6, &Limits::default()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = f_exact(3, 1, &Limits::default()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: SolverResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back.value, r.value);
        assert_eq!(back.certificate, r.certificate);
        assert!(verify_certificate(&back));
    }
}
