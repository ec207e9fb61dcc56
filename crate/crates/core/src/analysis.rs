//! Minimum witnesses, uniform witnesses, and the mean-value statistics
//! relating "witnesses per codeword" to "codewords per window".

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{has_w_witness_property, Code, Codeword, CoordSet};
use crate::combin::{binomial_u64, low_mask, KSubsets};
use crate::error::{Result, WitnessError};

/// Upper limit on the number of windows enumerated by the window-based
/// statistics.
pub const MAX_WINDOWS: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Exact,
    Greedy,
}

fn require_member(code: &Code, c: &Codeword) -> Result<()> {
    if c.len() != code.len() {
        return Err(WitnessError::LengthMismatch {
            expected: code.len(),
            found: c.len(),
        });
    }
    if !code.contains(c) {
        return Err(WitnessError::NotInCode(c.to_string()));
    }
    Ok(())
}

fn window_count(n: usize, w: usize) -> Result<u64> {
    if w > n {
        return Err(WitnessError::InvalidArgument(format!(
            "window size {w} exceeds length {n}"
        )));
    }
    let count = binomial_u64(n, w);
    if count > MAX_WINDOWS {
        return Err(WitnessError::TooLarge(format!(
            "C({n},{w}) = {count} windows"
        )));
    }
    Ok(count)
}

/// A smallest witness for `c`, found as a minimum hitting set of the
/// difference supports. Exact mode returns the lexicographically smallest
/// minimum witness; greedy mode adds the most-hitting coordinate each step.
pub fn min_witness(code: &Code, c: &Codeword, mode: SearchMode) -> Result<CoordSet> {
    require_member(code, c)?;
    let fam = code.difference_family(c);
    let universe = low_mask(code.len());
    let mask = match mode {
        SearchMode::Exact => fam.lex_minimum(universe),
        SearchMode::Greedy => fam.greedy(universe),
    }
    .expect("[n] always separates distinct words");
    CoordSet::new(code.len(), mask)
}

/// Minimum witness size of every codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessProfile {
    pub sizes: BTreeMap<Codeword, usize>,
    /// Least `w` for which the code is a w-witness code.
    pub parameter: usize,
}

pub fn witness_profile(code: &Code) -> WitnessProfile {
    let universe = low_mask(code.len());
    let sizes: BTreeMap<Codeword, usize> = code
        .iter()
        .map(|c| {
            let size = code
                .difference_family(c)
                .minimum_size(universe)
                .expect("[n] always separates distinct words");
            (*c, size)
        })
        .collect();
    let parameter = sizes.values().copied().max().unwrap_or(0);
    WitnessProfile { sizes, parameter }
}

/// A window on which the projection is injective over the whole code.
pub fn min_uniform_witness(code: &Code, mode: SearchMode) -> CoordSet {
    let fam = code.pairwise_family();
    let universe = low_mask(code.len());
    let mask = match mode {
        SearchMode::Exact => fam.lex_minimum(universe),
        SearchMode::Greedy => fam.greedy(universe),
    }
    .expect("[n] always separates distinct words");
    let size = mask.count_ones() as usize;
    debug_assert!(size >= 64 || code.size() as u128 <= 1u128 << size);
    debug_assert!(
        mode == SearchMode::Greedy
            || code.is_empty()
            || code.size() > code.len()
            || size < code.size(),
        "uniform witness larger than |C| - 1"
    );
    CoordSet::new(code.len(), mask).expect("mask within [n]")
}

/// All size-`w` witnesses of `c`, in lexicographic order.
pub fn witness_sets(code: &Code, c: &Codeword, w: usize) -> Result<Vec<CoordSet>> {
    require_member(code, c)?;
    let n = code.len();
    window_count(n, w)?;
    let diffs: Vec<u64> = code
        .bits()
        .filter(|d| *d != c.bits())
        .map(|d| d ^ c.bits())
        .collect();
    let mut out: Vec<CoordSet> = KSubsets::new(n, w)
        .filter(|m| diffs.iter().all(|d| d & m != 0))
        .map(|m| CoordSet::new(n, m).expect("window within [n]"))
        .collect();
    out.sort();
    Ok(out)
}

/// Indices of words whose projection onto `window` is unique.
fn isolated_indices(bits: &[u64], window: u64, scratch: &mut Vec<(u64, u32)>) -> Vec<usize> {
    scratch.clear();
    scratch.extend(bits.iter().enumerate().map(|(i, b)| (b & window, i as u32)));
    scratch.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < scratch.len() {
        let mut j = i + 1;
        while j < scratch.len() && scratch[j].0 == scratch[i].0 {
            j += 1;
        }
        if j == i + 1 {
            out.push(scratch[i].1 as usize);
        }
        i = j;
    }
    out
}

/// Codewords for which `window` is a witness, sorted.
pub fn witnessed_codewords(code: &Code, window: &CoordSet) -> Result<Vec<Codeword>> {
    if window.len() != code.len() {
        return Err(WitnessError::LengthMismatch {
            expected: code.len(),
            found: window.len(),
        });
    }
    let bits: Vec<u64> = code.bits().collect();
    let mut scratch = Vec::new();
    let mut idx = isolated_indices(&bits, window.mask(), &mut scratch);
    idx.sort_unstable();
    Ok(idx.into_iter().map(|i| code.words()[i]).collect())
}

/// `|C_{C,w}(W)|` for every window of size `w`: the number of words whose
/// projection onto `W` is unique.
pub fn window_counts(code: &Code, w: usize) -> Result<BTreeMap<CoordSet, u64>> {
    let n = code.len();
    window_count(n, w)?;
    let bits: Vec<u64> = code.bits().collect();
    let mut out = BTreeMap::new();
    let mut scratch = Vec::with_capacity(bits.len());
    for m in KSubsets::new(n, w) {
        let idx = isolated_indices(&bits, m, &mut scratch);
        out.insert(CoordSet::new(n, m)?, idx.len() as u64);
    }
    Ok(out)
}

/// Witness counts per codeword and codeword counts per window for
/// windows of size exactly `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "MeanStatsRepr", try_from = "MeanStatsRepr")]
pub struct MeanStats {
    pub n: usize,
    pub w: usize,
    pub code_size: usize,
    pub window_total: u64,
    /// `|W_{C,w}(c)|` for each codeword.
    pub witness_counts: BTreeMap<Codeword, u64>,
    /// `|C_{C,w}(W)|` for each window of size `w`.
    pub window_counts: BTreeMap<CoordSet, u64>,
    /// Mean witness count over codewords (zero for the empty code).
    pub mean_witness_count: BigRational,
    /// Mean codeword count over windows, gamma(C, w).
    pub gamma: BigRational,
}

#[derive(Serialize, Deserialize)]
struct WindowCount {
    window: Vec<usize>,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct MeanStatsRepr {
    n: usize,
    w: usize,
    code_size: usize,
    window_total: u64,
    witness_counts: BTreeMap<Codeword, u64>,
    window_counts: Vec<WindowCount>,
    #[serde(with = "crate::serde_big::rational")]
    mean_witness_count: BigRational,
    #[serde(with = "crate::serde_big::rational")]
    gamma: BigRational,
}

impl From<MeanStats> for MeanStatsRepr {
    fn from(s: MeanStats) -> Self {
        MeanStatsRepr {
            n: s.n,
            w: s.w,
            code_size: s.code_size,
            window_total: s.window_total,
            witness_counts: s.witness_counts,
            window_counts: s
                .window_counts
                .into_iter()
                .map(|(w, count)| WindowCount {
                    window: w.coords(),
                    count,
                })
                .collect(),
            mean_witness_count: s.mean_witness_count,
            gamma: s.gamma,
        }
    }
}

impl TryFrom<MeanStatsRepr> for MeanStats {
    type Error = WitnessError;

    fn try_from(r: MeanStatsRepr) -> Result<Self> {
        let window_counts = r
            .window_counts
            .into_iter()
            .map(|wc| Ok((CoordSet::from_coords(r.n, &wc.window)?, wc.count)))
            .collect::<Result<_>>()?;
        Ok(MeanStats {
            n: r.n,
            w: r.w,
            code_size: r.code_size,
            window_total: r.window_total,
            witness_counts: r.witness_counts,
            window_counts,
            mean_witness_count: r.mean_witness_count,
            gamma: r.gamma,
        })
    }
}

impl MeanStats {
    /// Number of (window, codeword) witness pairs, counted from the codeword side.
    pub fn pairs_by_word(&self) -> u64 {
        self.witness_counts.values().sum()
    }

    pub fn pairs_by_window(&self) -> u64 {
        self.window_counts.values().sum()
    }

    /// `|C| E_c = C(n,w) E_W`, checked exactly.
    pub fn identity_holds(&self) -> bool {
        let lhs = BigRational::from_integer(BigInt::from(self.code_size)) * &self.mean_witness_count;
        let rhs = BigRational::from_integer(BigInt::from(self.window_total)) * &self.gamma;
        self.pairs_by_word() == self.pairs_by_window() && lhs == rhs
    }
}

pub fn mean_stats(code: &Code, w: usize) -> Result<MeanStats> {
    let n = code.len();
    let window_total = window_count(n, w)?;
    let bits: Vec<u64> = code.bits().collect();
    // Word side: windows hitting every difference support of c.
    let per_word: Vec<u64> = bits
        .iter()
        .map(|&c| {
            let diffs: Vec<u64> = bits.iter().filter(|&&d| d != c).map(|&d| d ^ c).collect();
            KSubsets::new(n, w)
                .filter(|m| diffs.iter().all(|d| d & m != 0))
                .count() as u64
        })
        .collect();
    let window_counts = window_counts(code, w)?;
    let total: u64 = per_word.iter().sum();
    let by_window: u64 = window_counts.values().sum();
    let mean_witness_count = if bits.is_empty() {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(total), BigInt::from(bits.len()))
    };
    let gamma = BigRational::new(BigInt::from(by_window), BigInt::from(window_total));
    let witness_counts = code.words().iter().copied().zip(per_word).collect();
    let stats = MeanStats {
        n,
        w,
        code_size: bits.len(),
        window_total,
        witness_counts,
        window_counts,
        mean_witness_count,
        gamma,
    };
    debug_assert!(stats.identity_holds());
    Ok(stats)
}

/// gamma(C, w) = E_W |C_{C,w}(W)|.
pub fn gamma(code: &Code, w: usize) -> Result<BigRational> {
    Ok(mean_stats(code, w)?.gamma)
}

/// The codewords having at least one witness of size `w`.
pub fn witnessed_subcode(code: &Code, w: usize) -> Result<Code> {
    let n = code.len();
    let w = w.min(n);
    let keep: Vec<Codeword> = code
        .iter()
        .filter(|c| code.difference_family(c).minimum(low_mask(n), w).is_some())
        .copied()
        .collect();
    let sub = Code::new(n, keep)?;
    debug_assert!(has_w_witness_property(&sub, w).holds());
    Ok(sub)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeClass {
    AllCodes,
    WitnessCodes,
}

/// Result of the exhaustive maximisation of gamma over all codes of length n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPlus {
    pub n: usize,
    pub w: usize,
    pub class: CodeClass,
    #[serde(with = "crate::serde_big::rational")]
    pub value: BigRational,
    /// `sum_W |C_{C,w}(W)|` for the maximiser.
    pub pair_count: u64,
    pub argmax: Code,
}

pub const GAMMA_PLUS_MAX_N: usize = 4;

/// Maximise gamma(C, w) over every code of length `n <= 4`.
pub fn gamma_plus_exhaustive(n: usize, w: usize, class: CodeClass) -> Result<GammaPlus> {
    gamma_plus_exhaustive_with_workers(n, w, class, None)
}

/// As [`gamma_plus_exhaustive`] with an explicit worker count. The result
/// (value and maximiser) does not depend on the number of workers: ties are
/// broken towards the numerically smallest code index.
pub fn gamma_plus_exhaustive_with_workers(
    n: usize,
    w: usize,
    class: CodeClass,
    workers: Option<usize>,
) -> Result<GammaPlus> {
    if n == 0 || n > GAMMA_PLUS_MAX_N {
        return Err(WitnessError::TooLarge(format!(
            "exhaustive gamma+ supports 1 <= n <= {GAMMA_PLUS_MAX_N}, got {n}"
        )));
    }
    if w > n {
        return Err(WitnessError::InvalidArgument(format!(
            "window size {w} exceeds length {n}"
        )));
    }
    let words = 1usize << n;
    // For each window, the partition of {0,1}^n into projection classes,
    // each class a mask over word indices.
    let mut classes: Vec<u32> = Vec::new();
    for window in KSubsets::new(n, w) {
        let mut by_proj: HashMap<u64, u32> = HashMap::new();
        for x in 0..words as u64 {
            *by_proj.entry(x & window).or_default() |= 1 << x;
        }
        let mut masks: Vec<u32> = by_proj.into_values().collect();
        masks.sort_unstable();
        classes.extend(masks);
    }
    let evaluate = |code: u32| -> Option<u64> {
        let mut count = 0u64;
        let mut witnessed = 0u32;
        for &m in &classes {
            let hit = code & m;
            if hit.count_ones() == 1 {
                count += 1;
                witnessed |= hit;
            }
        }
        match class {
            CodeClass::AllCodes => Some(count),
            CodeClass::WitnessCodes => (witnessed == code).then_some(count),
        }
    };
    let total: u64 = 1u64 << words;
    let search = || {
        (0..total)
            .into_par_iter()
            .filter_map(|code| evaluate(code as u32).map(|v| (v, code)))
            .reduce(
                || (0u64, 0u64),
                |a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                },
            )
    };
    let (best, code_mask) = match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| WitnessError::Io(e.to_string()))?
            .install(search),
        None => search(),
    };
    let argmax = Code::from_bits(n, (0..words as u64).filter(|x| code_mask >> x & 1 == 1))?;
    let windows = binomial_u64(n, w);
    Ok(GammaPlus {
        n,
        w,
        class,
        value: BigRational::new(BigInt::from(best), BigInt::from(windows)),
        pair_count: best,
        argmax,
    })
}
