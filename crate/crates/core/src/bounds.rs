//! Closed-form lower and upper bounds on f(n,w), the monotonicity-based
//! combiner over known values, and the entropy exponent.
//!
//! Everything counting codewords is an exact big integer, floored and
//! capped at 2^n. `n/2` always means `floor(n/2)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cache::{CacheKey, ExactValueCache};
use crate::combin::{binomial as binom, pow2};
use crate::error::{Result, WitnessError};

/// Known values of A(n, d, w): (n, d, w, A).
pub const CONSTANT_WEIGHT_SEEDS: [(usize, usize, usize, u64); 3] =
    [(4, 4, 2, 2), (8, 4, 4, 14), (12, 4, 6, 132)];

pub fn seed_constant_weight(n: usize, d: usize, w: usize) -> Option<u64> {
    CONSTANT_WEIGHT_SEEDS
        .iter()
        .find(|e| (e.0, e.1, e.2) == (n, d, w))
        .map(|e| e.3)
}

fn check_nw(n: usize, w: usize) -> Result<()> {
    if w > n {
        return Err(WitnessError::InvalidArgument(format!(
            "need 0 <= w <= n, got n = {n}, w = {w}"
        )));
    }
    Ok(())
}

pub fn binomial(n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(WitnessError::InvalidArgument(format!(
            "binomial({n}, {k}) needs k <= n"
        )));
    }
    Ok(binom(n, k))
}

/// Number of words within distance `r` of a point of `{0,1}^w`, counting
/// the point itself.
pub fn ball_size(w: usize, r: usize) -> Result<BigUint> {
    if r > w {
        return Err(WitnessError::InvalidArgument(format!(
            "ball radius {r} exceeds dimension {w}"
        )));
    }
    Ok((0..=r).map(|i| binom(w, i)).sum())
}

/// The sphere S_w(0): f(n,w) >= C(n,w).
pub fn lower_sphere(n: usize, w: usize) -> Result<BigUint> {
    check_nw(n, w)?;
    Ok(binom(n, w))
}

/// Where a bound comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundSource {
    /// All words of weight w.
    Sphere,
    /// All words of weight floor(n/2), available once w >= floor(n/2).
    MiddleSphere,
    /// All words supported in one w-window.
    Cube,
    /// C_F for F a constant-weight code of distance d and size A.
    ConstantWeightFamily { d: usize, a: u64 },
    /// The two-part construction with D the weight-(w - t) words.
    TwoPart { t: usize },
    /// Max over weights of known constant-weight values.
    BassalygoElias,
    /// |C| <= 2^n.
    WholeSpace,
    /// Pigeonhole: 2^w C(n,w).
    Pigeonhole,
    /// 2 sqrt(w) C(n,w) for w <= n/2.
    SqrtBound,
    /// C(n,w) F(v,w) / C(v,w) minimised over v.
    Monotone { v: usize },
    /// Taken from the value cache.
    Cache { status: String, provenance: String },
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundSource::Sphere => write!(f, "sphere S_w(0)"),
            BoundSource::MiddleSphere => write!(f, "middle sphere S_(n/2)(0)"),
            BoundSource::Cube => write!(f, "cube on a w-window"),
            BoundSource::ConstantWeightFamily { d, a } => {
                write!(f, "constant-weight family, d = {d}, A = {a}")
            }
            BoundSource::TwoPart { t } => write!(f, "two-part construction, t = {t}"),
            BoundSource::BassalygoElias => write!(f, "Bassalygo-Elias"),
            BoundSource::WholeSpace => write!(f, "whole space 2^n"),
            BoundSource::Pigeonhole => write!(f, "pigeonhole 2^w C(n,w)"),
            BoundSource::SqrtBound => write!(f, "2 sqrt(w) C(n,w)"),
            BoundSource::Monotone { v } => write!(f, "g-monotonicity via v = {v}"),
            BoundSource::Cache { status, provenance } => {
                write!(f, "cache ({status}): {provenance}")
            }
        }
    }
}

fn two_part_size(n: usize, w: usize, t: usize) -> BigUint {
    pow2(w) + binom(w, w - t) * (binom(n - w, t) - BigUint::one())
}

/// Valid `t` for the two-part construction: w > n/2 and 1 <= t <= n - w.
pub fn two_part_range(n: usize, w: usize) -> std::ops::RangeInclusive<usize> {
    if 2 * w > n && w <= n {
        1..=(n - w)
    } else {
        #[allow(clippy::reversed_empty_ranges)]
        {
            1..=0
        }
    }
}

/// Every construction-based lower bound applicable at (n, w).
pub fn lower_constructions(n: usize, w: usize) -> Result<Vec<(BigUint, BoundSource)>> {
    check_nw(n, w)?;
    let mut out = vec![(binom(n, w), BoundSource::Sphere)];
    if w >= n / 2 {
        out.push((binom(n, n / 2), BoundSource::MiddleSphere));
    }
    out.push((pow2(w), BoundSource::Cube));
    for &(sn, d, sw, a) in &CONSTANT_WEIGHT_SEEDS {
        if sn == n && sw == w {
            out.push((
                steiner_family_size(a, w, d)?,
                BoundSource::ConstantWeightFamily { d, a },
            ));
        }
    }
    for t in two_part_range(n, w) {
        out.push((two_part_size(n, w, t), BoundSource::TwoPart { t }));
    }
    Ok(out)
}

/// A * B(w, d/2 - 1) with the ball counted from radius 0.
pub fn steiner_family_size(a: u64, w: usize, d: usize) -> Result<BigUint> {
    if d < 2 || d % 2 == 1 {
        return Err(WitnessError::InvalidArgument(format!(
            "distance must be even and >= 2, got {d}"
        )));
    }
    let r = d / 2 - 1;
    if r > w {
        return Err(WitnessError::InvalidArgument(format!(
            "radius {r} exceeds weight {w}"
        )));
    }
    Ok(BigUint::from(a) * ball_size(w, r)?)
}

/// Best construction-based lower bound; earlier sources win ties.
pub fn lower_best_construction(n: usize, w: usize) -> Result<(BigUint, BoundSource)> {
    let mut best: Option<(BigUint, BoundSource)> = None;
    for (v, src) in lower_constructions(n, w)? {
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, src));
        }
    }
    Ok(best.expect("the sphere is always present"))
}

fn cap(n: usize, v: BigUint) -> BigUint {
    v.min(pow2(n))
}

/// 2^w C(n,w), capped at 2^n.
pub fn upper_simple(n: usize, w: usize) -> Result<BigUint> {
    check_nw(n, w)?;
    Ok(cap(n, pow2(w) * binom(n, w)))
}

/// floor(2 sqrt(w) C(n,w)) for 1 <= w <= n/2, without the 2^n cap.
pub fn upper_improved_raw(n: usize, w: usize) -> Result<BigUint> {
    if w == 0 || 2 * w > n {
        return Err(WitnessError::InvalidArgument(format!(
            "the square-root bound needs 1 <= w <= n/2, got n = {n}, w = {w}"
        )));
    }
    // floor(2 sqrt(w) C) = floor(sqrt(4 w C^2))
    let c = binom(n, w);
    Ok((BigUint::from(4 * w) * &c * &c).sqrt())
}

/// floor(2 sqrt(w) C(n,w)) for 1 <= w <= n/2, capped at 2^n.
pub fn upper_improved(n: usize, w: usize) -> Result<BigUint> {
    Ok(cap(n, upper_improved_raw(n, w)?))
}

/// The value of f(v,w) the combiner uses when nothing better is known.
fn default_upper(v: usize, w: usize) -> BigUint {
    (pow2(w) * binom(v, w)).min(pow2(v))
}

/// min over v in [w, n] of floor(C(n,w) F(v,w) / C(v,w)), together with the
/// minimising v (smallest on ties).
pub fn upper_monotone_detail(
    n: usize,
    w: usize,
    cache: &ExactValueCache,
) -> Result<(BigUint, usize)> {
    check_nw(n, w)?;
    let cnw = binom(n, w);
    let mut best: Option<(BigUint, usize)> = None;
    for v in w..=n {
        let mut f = default_upper(v, w);
        if let Some(known) = cache.upper(&CacheKey::new(v, w)) {
            f = f.min(known.clone());
        }
        let value = &cnw * f / binom(v, w);
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, v));
        }
    }
    let (value, v) = best.expect("v = n is always in range");
    Ok((cap(n, value), v))
}

pub fn upper_monotone(n: usize, w: usize, cache: &ExactValueCache) -> Result<BigUint> {
    upper_monotone_detail(n, w, cache).map(|p| p.0)
}

/// Translate-averaging sandwich from constant-weight values.
///
/// `cw` maps a weight `k` to a (lower, upper) pair for f(n,w,k). Returns
/// (max_k lower_k, min_k floor(upper_k 2^n / C(n,k))).
pub fn bassalygo_elias(
    n: usize,
    w: usize,
    cw: &BTreeMap<usize, (BigUint, BigUint)>,
) -> Result<(BigUint, BigUint)> {
    check_nw(n, w)?;
    if cw.is_empty() {
        return Err(WitnessError::InvalidArgument(
            "need at least one constant-weight entry".into(),
        ));
    }
    let mut lower = BigUint::zero();
    let mut upper: Option<BigUint> = None;
    for (&k, (lo, hi)) in cw {
        if k > n {
            return Err(WitnessError::InvalidArgument(format!("weight {k} exceeds n = {n}")));
        }
        lower = lower.max(lo.clone());
        let u = hi * pow2(n) / binom(n, k);
        upper = Some(match upper {
            Some(b) => b.min(u),
            None => u,
        });
    }
    Ok((lower, upper.expect("nonempty")))
}

/// Exact f(n,w,k) when the sphere (or its complement) is provably optimal.
pub fn cw_exact_corollary(n: usize, w: usize, k: usize) -> Option<BigUint> {
    if k > n || 2 * w > n {
        return None;
    }
    if k <= w || n - k <= w {
        Some(binom(n, k))
    } else {
        None
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(WitnessError::InvalidArgument(format!("{x} not in [0, 1]")))
    }
}

/// Binary entropy in bits, with h(0) = h(1) = 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_unit(x)?;
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Limit of (1/n) log2 f(n, omega n): h(omega) below one half, 1 above.
pub fn asymptotic_exponent(omega: f64) -> Result<f64> {
    check_unit(omega)?;
    if omega <= 0.5 {
        binary_entropy(omega)
    } else {
        Ok(1.0)
    }
}

/// log2 of a positive big integer.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap_or(f64::INFINITY).log2()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64-bit value");
        top.log2() + shift as f64
    }
}

/// (1/n) log2 C(n, floor(omega n)).
pub fn normalized_log_sphere(n: usize, omega: f64) -> Result<f64> {
    check_unit(omega)?;
    if n == 0 {
        return Err(WitnessError::InvalidArgument("n must be positive".into()));
    }
    let k = (omega * n as f64).floor() as usize;
    Ok(log2_big(&binom(n, k)) / n as f64)
}

/// g(n,w) = value / C(n,w) as an exact rational.
pub fn g_ratio(value: &BigUint, n: usize, w: usize) -> BigRational {
    use num_bigint::BigInt;
    BigRational::new(BigInt::from(value.clone()), BigInt::from(binom(n, w)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    #[serde(with = "crate::serde_big::biguint")]
    pub value: BigUint,
    pub source: BoundSource,
}

/// Every applicable bound on f(n,w).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub w: usize,
    pub lower: Vec<BoundEntry>,
    pub upper: Vec<BoundEntry>,
    #[serde(with = "crate::serde_big::biguint")]
    pub best_lower: BigUint,
    #[serde(with = "crate::serde_big::biguint")]
    pub best_upper: BigUint,
    #[serde(with = "crate::serde_big::opt_biguint")]
    pub exact: Option<BigUint>,
}

impl BoundReport {
    pub fn is_pinned(&self) -> bool {
        self.best_lower == self.best_upper
    }
}

pub fn bounds_report(n: usize, w: usize, cache: &ExactValueCache) -> Result<BoundReport> {
    check_nw(n, w)?;
    if n == 0 || n > 64 {
        return Err(WitnessError::InvalidLength(n));
    }
    let key = CacheKey::new(n, w);
    let mut lower: Vec<BoundEntry> = lower_constructions(n, w)?
        .into_iter()
        .map(|(value, source)| BoundEntry { value, source })
        .collect();

    // Constant-weight values known exactly, lifted by translate-averaging.
    let cw: BTreeMap<usize, (BigUint, BigUint)> = (0..=n)
        .filter_map(|k| cw_exact_corollary(n, w, k).map(|v| (k, (v.clone(), v))))
        .collect();
    if !cw.is_empty() {
        let (lo, _) = bassalygo_elias(n, w, &cw)?;
        lower.push(BoundEntry {
            value: lo,
            source: BoundSource::BassalygoElias,
        });
    }

    let mut upper = vec![
        BoundEntry {
            value: pow2(n),
            source: BoundSource::WholeSpace,
        },
        BoundEntry {
            value: upper_simple(n, w)?,
            source: BoundSource::Pigeonhole,
        },
    ];
    if w >= 1 && 2 * w <= n {
        upper.push(BoundEntry {
            value: upper_improved(n, w)?,
            source: BoundSource::SqrtBound,
        });
    }
    let (mono, v) = upper_monotone_detail(n, w, cache)?;
    upper.push(BoundEntry {
        value: mono,
        source: BoundSource::Monotone { v },
    });

    if let Some(e) = cache.get(&key) {
        let source = BoundSource::Cache {
            status: format!("{:?}", e.status),
            provenance: e.provenance.clone(),
        };
        if cache.lower(&key).is_some() {
            lower.push(BoundEntry {
                value: e.value.clone(),
                source: source.clone(),
            });
        }
        if cache.upper(&key).is_some() {
            upper.push(BoundEntry {
                value: e.value.clone(),
                source,
            });
        }
    }

    let best_lower = lower.iter().map(|e| &e.value).max().cloned().unwrap_or_default();
    let best_upper = upper.iter().map(|e| &e.value).min().cloned().unwrap_or_default();
    let exact = cache.exact(&key).cloned();
    let inconsistent = best_lower > best_upper
        || exact
            .as_ref()
            .is_some_and(|x| *x < best_lower || *x > best_upper);
    if inconsistent {
        return Err(WitnessError::InconsistentBounds {
            n,
            w,
            lower: best_lower.to_string(),
            upper: best_upper.to_string(),
        });
    }
    Ok(BoundReport {
        n,
        w,
        lower,
        upper,
        best_lower,
        best_upper,
        exact,
    })
}
