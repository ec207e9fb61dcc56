//! Generators for large w-witness codes: spheres, cubes on a window, the
//! family code C_F, the two-part construction, plus the design check for
//! the Steiner families that feed C_F.

mod search;
mod steiner;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use search::{cw_code_search, CwSearchResult, DEFAULT_EFFORT};
pub use steiner::{steiner_3_4_8, steiner_5_6_12};

use crate::analysis::window_counts;
use crate::bounds::steiner_family_size;
use crate::code::{Code, Codeword, CoordSet};
use crate::combin::{binomial, binomial_u64, low_mask, pow2, KSubsets};
use crate::error::{Result, WitnessError};

const MAX_GENERATED: u64 = 1 << 24;

fn guard_size(what: &str, count: u64) -> Result<()> {
    if count > MAX_GENERATED {
        return Err(WitnessError::TooLarge(format!("{what}: {count} words")));
    }
    Ok(())
}

/// An ordered collection of distinct coordinate sets over `[n]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    blocks: Vec<CoordSet>,
}

impl SetFamily {
    pub fn new(n: usize, blocks: Vec<CoordSet>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for b in &blocks {
            if b.len() != n {
                return Err(WitnessError::LengthMismatch {
                    expected: n,
                    found: b.len(),
                });
            }
            if !seen.insert(b.mask()) {
                return Err(WitnessError::DuplicateBlock(b.to_string()));
            }
        }
        Ok(SetFamily { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[CoordSet] {
        &self.blocks
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(CoordSet::size).max().unwrap_or(0)
    }
}

/// All weight-`k` words of length `n`.
pub fn sphere(n: usize, k: usize) -> Result<Code> {
    if k > n {
        return Err(WitnessError::InvalidArgument(format!("weight {k} exceeds n = {n}")));
    }
    guard_size("sphere", binomial_u64(n, k))?;
    Code::from_bits(n, KSubsets::new(n, k))
}

fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// `{0,1}^W` extended by zeros outside `W`.
pub fn cube_on_window(n: usize, window: &CoordSet) -> Result<Code> {
    if window.len() != n {
        return Err(WitnessError::LengthMismatch {
            expected: n,
            found: window.len(),
        });
    }
    guard_size("cube", 1u64 << window.size().min(63))?;
    Code::from_bits(n, submasks(window.mask()))
}

/// The words whose support lies in exactly one block, each paired with
/// that block (a witness for it).
pub fn from_family_with_witnesses(family: &SetFamily) -> Result<(Code, BTreeMap<Codeword, CoordSet>)> {
    let n = family.n();
    let total: u64 = family
        .blocks()
        .iter()
        .map(|b| 1u64 << b.size().min(63))
        .fold(0u64, u64::saturating_add);
    guard_size("family code", total)?;
    let mut hits: HashMap<u64, (u32, usize)> = HashMap::new();
    for (i, b) in family.blocks().iter().enumerate() {
        for s in submasks(b.mask()) {
            let e = hits.entry(s).or_insert((0, i));
            e.0 += 1;
        }
    }
    let mut witnesses = BTreeMap::new();
    for (bits, (count, block)) in hits {
        if count == 1 {
            witnesses.insert(Codeword::new(n, bits)?, family.blocks()[block]);
        }
    }
    let code = Code::new(n, witnesses.keys().copied())?;
    Ok((code, witnesses))
}

/// C_F: the words whose support lies in exactly one block of `F`.
pub fn from_family(family: &SetFamily) -> Result<Code> {
    from_family_with_witnesses(family).map(|p| p.0)
}

/// A * B(w, d/2 - 1), the size of C_F for a distance-d constant-weight family.
pub fn steiner_family_code_size(a: u64, w: usize, d: usize) -> Result<BigUint> {
    steiner_family_size(a, w, d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignCheck {
    pub t: usize,
    pub k: usize,
    pub v: usize,
    pub is_steiner: bool,
    pub max_pair_intersection: usize,
}

/// Check whether `family` is an S(t, k, v) with v = n: all blocks of one
/// size k and every t-subset in exactly one block.
pub fn design_check(family: &SetFamily, t: usize) -> DesignCheck {
    let v = family.n();
    let blocks = family.blocks();
    let k = family.max_block_size();
    let mut max_meet = 0;
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            max_meet = max_meet.max((a.mask() & b.mask()).count_ones() as usize);
        }
    }
    let uniform = blocks.iter().all(|b| b.size() == k);
    let mut is_steiner = uniform && t <= k && !blocks.is_empty();
    if is_steiner {
        let mut seen: HashMap<u64, u32> = HashMap::new();
        for b in blocks {
            for s in submasks(b.mask()).filter(|s| s.count_ones() as usize == t) {
                *seen.entry(s).or_default() += 1;
            }
        }
        is_steiner = seen.values().all(|&c| c == 1) && seen.len() as u64 == binomial_u64(v, t);
    }
    DesignCheck {
        t,
        k,
        v,
        is_steiner,
        max_pair_intersection: max_meet,
    }
}

/// The two-part code of length `n` built from `D ⊆ {0,1}^w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPartCode {
    pub n: usize,
    pub w: usize,
    /// Words of `{0,1}^[w]` outside `D`, zero-extended.
    pub part_one: Code,
    /// Weight-w words whose first-w projection lies in `D`.
    pub part_two: Code,
    pub code: Code,
}

impl TwoPartCode {
    /// The witness each word is known to have: `[w]` for the first part,
    /// the support for the second.
    pub fn witness_for(&self, c: &Codeword) -> Option<CoordSet> {
        if self.part_one.contains(c) {
            Some(CoordSet::new(self.n, low_mask(self.w)).expect("w <= n"))
        } else if self.part_two.contains(c) {
            Some(c.support())
        } else {
            None
        }
    }
}

pub fn two_part(n: usize, w: usize, d: &Code) -> Result<TwoPartCode> {
    if w > n || 2 * w <= n {
        return Err(WitnessError::InvalidArgument(format!(
            "two-part construction needs n/2 < w <= n, got n = {n}, w = {w}"
        )));
    }
    if d.len() != w {
        return Err(WitnessError::LengthMismatch {
            expected: w,
            found: d.len(),
        });
    }
    let min_weight = 2 * w - n;
    if let Some(bad) = d.iter().find(|x| x.weight() < min_weight) {
        return Err(WitnessError::InvalidArgument(format!(
            "word {bad} of D has weight below 2w - n = {min_weight}"
        )));
    }
    guard_size("two-part code", 1u64 << w.min(63))?;
    let part_one = Code::from_bits(
        n,
        (0..1u64 << w).filter(|x| !d.contains(&Codeword::from_raw(w, *x))),
    )?;
    let mut second = Vec::new();
    for x in d.iter() {
        for tail in KSubsets::new(n - w, w - x.weight()) {
            second.push(x.bits() | tail << w);
        }
    }
    let part_two = Code::from_bits(n, second)?;
    let code = Code::from_bits(n, part_one.bits().chain(part_two.bits()))?;
    debug_assert_eq!(code.size(), part_one.size() + part_two.size());
    Ok(TwoPartCode {
        n,
        w,
        part_one,
        part_two,
        code,
    })
}

/// Closed-form size of the two-part code with D the weight-(w - t) words.
pub fn two_part_sphere_size(n: usize, w: usize, t: usize) -> BigUint {
    pow2(w) + binomial(w, w - t) * (binomial(n - w, t) - BigUint::from(1u32))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPartSphere {
    pub t: usize,
    pub construction: TwoPartCode,
    /// `t` exceeds floor((n - w)/2) while still meeting the weight condition.
    pub outside_stated_range: bool,
}

/// The two-part code with D = all weight-(w - t) words of `{0,1}^w`.
pub fn two_part_sphere(n: usize, w: usize, t: usize) -> Result<TwoPartSphere> {
    if w > n || 2 * w <= n {
        return Err(WitnessError::InvalidArgument(format!(
            "two-part construction needs n/2 < w <= n, got n = {n}, w = {w}"
        )));
    }
    if t == 0 || t > w || w - t < 2 * w - n {
        return Err(WitnessError::InvalidArgument(format!(
            "t = {t} must satisfy 1 <= t and w - t >= 2w - n"
        )));
    }
    let d = sphere(w, w - t)?;
    let construction = two_part(n, w, &d)?;
    Ok(TwoPartSphere {
        t,
        construction,
        outside_stated_range: t > (n - w) / 2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereSignature {
    pub is_sphere_translate: bool,
    /// A center x with C = S_(n/2)(x), when one exists.
    pub center: Option<Codeword>,
    /// Number of windows by witnessed-codeword count.
    pub histogram: BTreeMap<u64, u64>,
    pub window_counts: BTreeMap<CoordSet, u64>,
}

pub const SIGNATURE_MAX_N: usize = 24;

/// Whether `code` is a translate of the middle sphere S_(n/2)(0), and the
/// distribution of |C_{C,w}(W)| over windows of size `w`.
pub fn sphere_translate_signature(code: &Code, w: usize) -> Result<SphereSignature> {
    let n = code.len();
    if n > SIGNATURE_MAX_N {
        return Err(WitnessError::TooLarge(format!(
            "signature supports n <= {SIGNATURE_MAX_N}"
        )));
    }
    let k = n / 2;
    let mut center = None;
    if code.size() as u64 == binomial_u64(n, k) {
        if let Some(c0) = code.words().first() {
            // Any center lies at distance k from c0.
            center = KSubsets::new(n, k)
                .map(|y| c0.bits() ^ y)
                .find(|x| code.bits().all(|c| (c ^ x).count_ones() as usize == k))
                .map(|x| Codeword::from_raw(n, x));
        }
    }
    let window_counts = window_counts(code, w)?;
    let mut histogram = BTreeMap::new();
    for &v in window_counts.values() {
        *histogram.entry(v).or_default() += 1;
    }
    Ok(SphereSignature {
        is_sphere_translate: center.is_some(),
        center,
        histogram,
        window_counts,
    })
}
