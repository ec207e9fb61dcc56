//! The reference checks behind `witsets reproduce`: each recomputes a
//! quoted value or a theorem-level invariant and reports pass or fail.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{gamma_plus_exhaustive, mean_stats, CodeClass, GAMMA_PLUS_MAX_N};
use crate::bounds::{binary_entropy, bounds_report, normalized_log_sphere, upper_improved, upper_simple};
use crate::cache::{CacheKey, ExactValueCache};
use crate::code::{has_w_witness_property, Code, CoordSet};
use crate::combin::{binomial, pow2};
use crate::constructions::{
    design_check, from_family, sphere, sphere_translate_signature, steiner_3_4_8, steiner_5_6_12, two_part_sphere,
    SetFamily,
};
use crate::error::Result;
use crate::solver::{f_cw_exact, f_exact, monotonicity_audit, Limits, Strategy};

/// Seed for the random codes of the double-count check.
pub const IDENTITY_SEED: u64 = 0x5eed_2008;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(rename = "elapsed_seconds", with = "crate::serde_big::duration_secs")]
    pub elapsed: Duration,
    #[serde(rename = "budget_seconds", with = "crate::serde_big::duration_secs")]
    pub budget: Duration,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<28} {:>8.3}s / {:>4}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub budget: Duration,
    check: Check,
}

impl Criterion {
    /// Runs the check; exceeding the time budget counts as a failure.
    pub fn run(&self) -> CriterionOutcome {
        let start = Instant::now();
        let (ok, mut detail) = match (self.check)() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let elapsed = start.elapsed();
        let in_time = elapsed <= self.budget;
        if !in_time {
            detail.push_str("; over time budget");
        }
        CriterionOutcome {
            id: self.id,
            name: self.name,
            passed: ok && in_time,
            detail,
            elapsed,
            budget: self.budget,
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, check| Criterion {
        id,
        name,
        budget: Duration::from_secs(secs),
        check,
    };
    vec![
        c(1, "steiner-generation", 1, steiner_generation as Check),
        c(2, "family-code-sizes", 60, family_code_sizes),
        c(3, "non-sphere-translate", 10, non_sphere_translate),
        c(4, "two-part-construction", 1, two_part_construction),
        c(5, "double-count-identity", 30, double_count_identity),
        c(6, "solver-cross-validation", 300, solver_cross_validation),
        c(7, "constant-weight-corollary", 60, constant_weight_corollary),
        c(8, "theorem-invariants", 10, theorem_invariants),
        c(9, "gamma-plus", 300, gamma_plus_suite),
        c(10, "entropy-asymptotics", 1, entropy_asymptotics),
    ]
}

pub fn run_all() -> Vec<CriterionOutcome> {
    criteria().iter().map(Criterion::run).collect()
}

fn min_distance(f: &SetFamily) -> usize {
    let b = f.blocks();
    let mut m = usize::MAX;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            m = m.min((b[i].mask() ^ b[j].mask()).count_ones() as usize);
        }
    }
    m
}

fn steiner_generation() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (fam, t, k, v, blocks) in [(steiner_3_4_8(), 3, 4, 8, 14), (steiner_5_6_12(), 5, 6, 12, 132)] {
        let d = design_check(&fam, t);
        let dist = min_distance(&fam);
        let good = fam.blocks().len() == blocks && d.is_steiner && d.k == k && d.v == v && dist == 4;
        ok &= good;
        parts.push(format!("S({t},{k},{v}): {} blocks, min distance {dist}", fam.blocks().len()));
    }
    Ok((ok, parts.join("; ")))
}

fn two_blocks() -> Result<SetFamily> {
    SetFamily::new(
        4,
        vec![CoordSet::from_coords(4, &[1, 2])?, CoordSet::from_coords(4, &[3, 4])?],
    )
}

fn family_code_sizes() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (fam, w, expect) in [(two_blocks()?, 2, 6), (steiner_3_4_8(), 4, 70), (steiner_5_6_12(), 6, 924)] {
        let code = from_family(&fam)?;
        let holds = has_w_witness_property(&code, w).holds();
        ok &= code.size() == expect && holds;
        parts.push(format!("{} words (w = {w}, verified {holds})", code.size()));
    }
    Ok((ok, parts.join("; ")))
}

fn non_sphere_translate() -> Result<(bool, String)> {
    let fam = steiner_3_4_8();
    let sig = sphere_translate_signature(&from_family(&fam)?, 4)?;
    let blocks_five = fam.blocks().iter().all(|b| sig.window_counts.get(b) == Some(&5));
    let mut ok = !sig.is_sphere_translate && blocks_five;

    let s = sphere(8, 4)?;
    let mut translates_ok = true;
    for x in Code::full_cube(8)?.iter() {
        let sig = sphere_translate_signature(&s.translate(x)?, 4)?;
        translates_ok &= sig.is_sphere_translate && sig.histogram.keys().eq([2u64].iter());
    }
    ok &= translates_ok;
    Ok((
        ok,
        format!("S(3,4,8) code: count 5 on all 14 blocks = {blocks_five}; 256 sphere translates all-2 = {translates_ok}"),
    ))
}

fn two_part_construction() -> Result<(bool, String)> {
    let tp = two_part_sphere(9, 7, 1)?;
    let code = &tp.construction.code;
    let size = BigUint::from(code.size());
    let formula = pow2(7) + binomial(7, 6) * (binomial(2, 1) - 1u32);
    let rivals = binomial(9, 7).max(binomial(9, 4)).max(pow2(7));
    let cap = pow2(7) + binomial(9, 7);
    let holds = has_w_witness_property(code, 7).holds();
    let ok = size == BigUint::from(135u32) && size == formula && holds && size > rivals && size <= cap;
    Ok((ok, format!("{size} words, verified {holds}, beats {rivals}, at most {cap}")))
}

fn double_count_identity() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(IDENTITY_SEED);
    let mut failures = 0;
    let mut pairs = 0u64;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let max = 40.min(1usize << n);
        let size = rng.gen_range(0..=max);
        let mut bits = std::collections::BTreeSet::new();
        while bits.len() < size {
            bits.insert(rng.gen_range(0..1u64 << n));
        }
        let w = rng.gen_range(0..=n);
        let code = Code::from_bits(n, bits)?;
        let stats = mean_stats(&code, w)?;
        pairs += stats.pairs_by_word();
        if !stats.identity_holds() {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("1000 codes, {pairs} witness pairs, {failures} mismatches")))
}

fn solver_cross_validation() -> Result<(bool, String)> {
    let mut ok = true;
    let mut f42 = None;
    for n in 1..=4 {
        for w in 1..=n {
            let naive = f_exact(
                n,
                w,
                &Limits {
                    strategy: Some(Strategy::Enumeration),
                    use_bounds: false,
                    ..Limits::default()
                },
            )?;
            for rejection in [false, true] {
                let bb = f_exact(
                    n,
                    w,
                    &Limits {
                        strategy: Some(Strategy::BranchAndBound),
                        isomorph_rejection: rejection,
                        ..Limits::default()
                    },
                )?;
                ok &= bb.value == naive.value && bb.is_exact() && naive.is_exact();
            }
            if (n, w) == (4, 2) {
                f42 = Some(naive.value);
            }
        }
    }
    let f42 = f42.expect("computed");
    ok &= f42 >= BigUint::from(6u32) && f42 <= BigUint::from(16u32);
    Ok((ok, format!("all n <= 4 agree; f(4,2) = {f42}")))
}

fn constant_weight_corollary() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, w, k) in [(4, 2, 1), (5, 2, 2), (4, 2, 3)] {
        let r = f_cw_exact(n, w, k, &Limits::default())?;
        ok &= r.is_exact() && r.value == binomial(n, k);
        parts.push(format!("f({n},{w},{k}) = {}", r.value));
    }
    Ok((ok, parts.join(", ")))
}

/// Exact values of f(2,1), f(3,1), f(4,1) and f(4,2) from the solver.
pub fn small_exact_cache() -> Result<ExactValueCache> {
    let mut cache = ExactValueCache::new();
    for (n, w) in [(2, 1), (3, 1), (4, 1), (4, 2)] {
        let r = f_exact(n, w, &Limits::default())?;
        if r.is_exact() {
            cache.insert_exact(CacheKey::new(n, w), r.value, "solver")?;
        }
    }
    Ok(cache)
}

fn theorem_invariants() -> Result<(bool, String)> {
    let cache = small_exact_cache()?;
    let audit = monotonicity_audit(&cache);
    let mut ok = cache.len() == 4 && audit.passed();
    let mut reports = 0;
    for n in 1..=16 {
        for w in 1..=n {
            let r = bounds_report(n, w, &cache)?;
            ok &= r.best_lower <= r.best_upper;
            if 2 * w <= n {
                ok &= upper_improved(n, w)? <= upper_simple(n, w)?;
            }
            reports += 1;
        }
    }
    Ok((
        ok,
        format!(
            "audit {} comparisons, {} violations; {reports} bound reports consistent",
            audit.comparisons,
            audit.violations.len()
        ),
    ))
}

fn gamma_plus_suite() -> Result<(bool, String)> {
    let mut ok = true;
    let mut g31 = None;
    let mut g41 = None;
    for n in 1..=GAMMA_PLUS_MAX_N {
        for w in 1..=n {
            let all = gamma_plus_exhaustive(n, w, CodeClass::AllCodes)?;
            let wit = gamma_plus_exhaustive(n, w, CodeClass::WitnessCodes)?;
            ok &= all.value == wit.value;
            match (n, w) {
                (3, 1) => g31 = Some(all.value),
                (4, 1) => g41 = Some(all.value),
                _ => {}
            }
        }
    }
    let (g31, g41) = (g31.expect("computed"), g41.expect("computed"));
    ok &= g31 >= g41;
    Ok((ok, format!("all-codes = witness-codes for n <= 4; g+(3,1) = {g31}, g+(4,1) = {g41}")))
}

fn entropy_asymptotics() -> Result<(bool, String)> {
    let h = binary_entropy(0.25)?;
    let gaps: Vec<f64> = [40, 80, 160]
        .iter()
        .map(|&n| normalized_log_sphere(n, 0.25).map(|v| (h - v).abs()))
        .collect::<Result<_>>()?;
    let ok = gaps[2] <= 0.05 && gaps[0] > gaps[1] && gaps[1] > gaps[2];
    Ok((
        ok,
        format!("h(1/4) = {h:.5}; gaps {:.5}, {:.5}, {:.5}", gaps[0], gaps[1], gaps[2]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_one_to_ten() {
        let ids: Vec<usize> = criteria().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn cheap_criteria_pass() {
        for c in criteria() {
            if [1, 4, 7, 10].contains(&c.id) {
                let out = c.run();
                assert!(out.passed, "{}", out.line());
            }
        }
    }
}
