//! Codewords, coordinate sets and codes, together with the witness
//! predicate and the symmetries that preserve it.
//!
//! Coordinates are 1-based in every public signature and in text form.
//! Internally coordinate `i` lives in bit `i - 1` of a `u64`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combin::low_mask;
use crate::error::{Result, WitnessError};
use crate::hitting::HittingFamily;

pub const MAX_LEN: usize = 64;

fn check_len(len: usize) -> Result<()> {
    if (1..=MAX_LEN).contains(&len) {
        Ok(())
    } else {
        Err(WitnessError::InvalidLength(len))
    }
}

fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(WitnessError::LengthMismatch { expected, found })
    }
}

/// A binary vector of length `n <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Codeword {
    len: u8,
    bits: u64,
}

impl Codeword {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        check_len(len)?;
        if bits & !low_mask(len) != 0 {
            return Err(WitnessError::BitsOutOfRange { len, bits });
        }
        Ok(Codeword {
            len: len as u8,
            bits,
        })
    }

    pub(crate) fn from_raw(len: usize, bits: u64) -> Self {
        debug_assert!(bits & !low_mask(len) == 0);
        Codeword {
            len: len as u8,
            bits,
        }
    }

    pub fn zero(len: usize) -> Result<Self> {
        Codeword::new(len, 0)
    }

    pub fn ones(len: usize) -> Result<Self> {
        Codeword::new(len, low_mask(len))
    }

    /// Word whose support is the given 1-based coordinates.
    pub fn from_coords(len: usize, coords: &[usize]) -> Result<Self> {
        Ok(CoordSet::from_coords(len, coords)?.indicator())
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Raw bit pattern; coordinate `i` is bit `i - 1`.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn bit(&self, coord: usize) -> bool {
        coord >= 1 && coord <= self.len() && self.bits >> (coord - 1) & 1 == 1
    }

    pub fn support(&self) -> CoordSet {
        CoordSet::from_raw(self.len(), self.bits)
    }

    /// Positions where the two words differ.
    pub fn difference_support(&self, other: &Codeword) -> Result<CoordSet> {
        check_same(self.len(), other.len())?;
        Ok(CoordSet::from_raw(self.len(), self.bits ^ other.bits))
    }

    pub fn xor(&self, other: &Codeword) -> Result<Codeword> {
        check_same(self.len(), other.len())?;
        Ok(Codeword::from_raw(self.len(), self.bits ^ other.bits))
    }

    pub fn complement(&self) -> Codeword {
        Codeword::from_raw(self.len(), !self.bits & low_mask(self.len()))
    }

    pub fn distance(&self, other: &Codeword) -> Result<usize> {
        check_same(self.len(), other.len())?;
        Ok((self.bits ^ other.bits).count_ones() as usize)
    }

    /// Zero-extend or truncate to a new length. Truncation must not drop ones.
    pub fn resize(&self, len: usize) -> Result<Codeword> {
        Codeword::new(len, self.bits)
    }
}

impl Ord for Codeword {
    // String order: coordinate 1 is the most significant character.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.bits.reverse_bits().cmp(&other.bits.reverse_bits()))
    }
}

impl Serialize for Codeword {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Codeword {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for Codeword {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Codeword {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        check_len(s.len())?;
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1u64 << i,
                other => {
                    return Err(WitnessError::InvalidArgument(format!(
                        "unexpected character {other:?} in codeword"
                    )))
                }
            }
        }
        Codeword::new(s.len(), bits)
    }
}

/// A subset of the coordinate positions `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CoordSet {
    len: u8,
    mask: u64,
}

impl CoordSet {
    pub fn new(len: usize, mask: u64) -> Result<Self> {
        check_len(len)?;
        if mask & !low_mask(len) != 0 {
            return Err(WitnessError::BitsOutOfRange { len, bits: mask });
        }
        Ok(CoordSet {
            len: len as u8,
            mask,
        })
    }

    pub(crate) fn from_raw(len: usize, mask: u64) -> Self {
        debug_assert!(mask & !low_mask(len) == 0);
        CoordSet {
            len: len as u8,
            mask,
        }
    }

    pub fn empty(len: usize) -> Result<Self> {
        CoordSet::new(len, 0)
    }

    pub fn full(len: usize) -> Result<Self> {
        CoordSet::new(len, low_mask(len))
    }

    pub fn from_coords(len: usize, coords: &[usize]) -> Result<Self> {
        check_len(len)?;
        let mut mask = 0u64;
        for &c in coords {
            if c == 0 || c > len {
                return Err(WitnessError::CoordinateOutOfRange { len, coord: c });
            }
            mask |= 1u64 << (c - 1);
        }
        Ok(CoordSet::from_raw(len, mask))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, coord: usize) -> bool {
        coord >= 1 && coord <= self.len() && self.mask >> (coord - 1) & 1 == 1
    }

    pub fn is_subset(&self, other: &CoordSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn intersects(&self, other: &CoordSet) -> bool {
        self.mask & other.mask != 0
    }

    pub fn union(&self, other: &CoordSet) -> Result<CoordSet> {
        check_same(self.len(), other.len())?;
        Ok(CoordSet::from_raw(self.len(), self.mask | other.mask))
    }

    pub fn intersection(&self, other: &CoordSet) -> Result<CoordSet> {
        check_same(self.len(), other.len())?;
        Ok(CoordSet::from_raw(self.len(), self.mask & other.mask))
    }

    /// Sorted 1-based members.
    pub fn coords(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size());
        let mut m = self.mask;
        while m != 0 {
            out.push(m.trailing_zeros() as usize + 1);
            m &= m - 1;
        }
        out
    }

    /// The word whose support is this set.
    pub fn indicator(&self) -> Codeword {
        Codeword::from_raw(self.len(), self.mask)
    }

    /// Add the smallest coordinates not yet present until the set has
    /// `target` members (or is all of `[n]`).
    pub fn pad_to(&self, target: usize) -> CoordSet {
        let mut mask = self.mask;
        let mut free = !mask & low_mask(self.len());
        while (mask.count_ones() as usize) < target && free != 0 {
            let bit = free & free.wrapping_neg();
            mask |= bit;
            free &= free - 1;
        }
        CoordSet::from_raw(self.len(), mask)
    }
}

impl Ord for CoordSet {
    // Lexicographic on the sorted coordinate lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            let (mut a, mut b) = (self.mask, other.mask);
            loop {
                match (a == 0, b == 0) {
                    (true, true) => return Ordering::Equal,
                    (true, false) => return Ordering::Less,
                    (false, true) => return Ordering::Greater,
                    _ => {}
                }
                let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
                if x != y {
                    return x.cmp(&y);
                }
                a &= a - 1;
                b &= b - 1;
            }
        })
    }
}

impl PartialOrd for CoordSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.coords().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// A permutation of `[n]`, stored 0-based: coordinate `i + 1` maps to
/// coordinate `image[i] + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(Permutation {
            image: (0..len as u8).collect(),
        })
    }

    /// Build from 1-based images: `images[i - 1] = sigma(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let len = images.len();
        check_len(len)?;
        let mut seen = 0u64;
        let mut image = Vec::with_capacity(len);
        for &t in images {
            if t == 0 || t > len {
                return Err(WitnessError::CoordinateOutOfRange { len, coord: t });
            }
            if seen >> (t - 1) & 1 == 1 {
                return Err(WitnessError::InvalidArgument(format!(
                    "{t} appears twice in permutation"
                )));
            }
            seen |= 1u64 << (t - 1);
            image.push((t - 1) as u8);
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn apply_bits(&self, bits: u64) -> u64 {
        let mut out = 0u64;
        let mut m = bits;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            out |= 1u64 << self.image[i];
        }
        out
    }

    pub fn apply_word(&self, c: &Codeword) -> Result<Codeword> {
        check_same(self.len(), c.len())?;
        Ok(Codeword::from_raw(c.len(), self.apply_bits(c.bits)))
    }

    pub fn apply_set(&self, w: &CoordSet) -> Result<CoordSet> {
        check_same(self.len(), w.len())?;
        Ok(CoordSet::from_raw(w.len(), self.apply_bits(w.mask)))
    }
}

/// A set of distinct codewords of common length, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "CodeRepr", try_from = "CodeRepr")]
pub struct Code {
    len: u8,
    words: Vec<Codeword>,
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    n: usize,
    words: Vec<Codeword>,
}

impl From<Code> for CodeRepr {
    fn from(c: Code) -> Self {
        CodeRepr {
            n: c.len(),
            words: c.words,
        }
    }
}

impl TryFrom<CodeRepr> for Code {
    type Error = WitnessError;

    fn try_from(r: CodeRepr) -> Result<Self> {
        Code::new(r.n, r.words)
    }
}

impl Code {
    /// Build a code; rejects mismatched lengths and duplicate words.
    pub fn new<I: IntoIterator<Item = Codeword>>(len: usize, words: I) -> Result<Self> {
        check_len(len)?;
        let mut words: Vec<Codeword> = words.into_iter().collect();
        for c in &words {
            check_same(len, c.len())?;
        }
        words.sort_unstable();
        if let Some(p) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(WitnessError::DuplicateWord(p[0].to_string()));
        }
        Ok(Code {
            len: len as u8,
            words,
        })
    }

    /// Build from raw bit patterns, silently merging duplicates.
    pub fn from_bits<I: IntoIterator<Item = u64>>(len: usize, bits: I) -> Result<Self> {
        check_len(len)?;
        let mask = low_mask(len);
        let mut words = Vec::new();
        for b in bits {
            if b & !mask != 0 {
                return Err(WitnessError::BitsOutOfRange { len, bits: b });
            }
            words.push(Codeword::from_raw(len, b));
        }
        words.sort_unstable();
        words.dedup();
        Ok(Code {
            len: len as u8,
            words,
        })
    }

    pub fn empty(len: usize) -> Result<Self> {
        Code::new(len, std::iter::empty())
    }

    /// The whole space `{0,1}^n`; only sensible for small `n`.
    pub fn full_cube(len: usize) -> Result<Self> {
        check_len(len)?;
        if len > 24 {
            return Err(WitnessError::TooLarge(format!("full cube of length {len}")));
        }
        Code::from_bits(len, 0..(1u64 << len))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = &Codeword> {
        self.words.iter()
    }

    pub fn contains(&self, c: &Codeword) -> bool {
        self.words.binary_search(c).is_ok()
    }

    pub fn bits(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().map(|c| c.bits)
    }

    fn require_member(&self, c: &Codeword) -> Result<()> {
        check_same(self.len(), c.len())?;
        if self.contains(c) {
            Ok(())
        } else {
            Err(WitnessError::NotInCode(c.to_string()))
        }
    }

    /// Difference supports of `c` against every other word.
    pub(crate) fn difference_family(&self, c: &Codeword) -> HittingFamily {
        HittingFamily::new(
            self.words
                .iter()
                .filter(|d| *d != c)
                .map(|d| d.bits ^ c.bits),
        )
    }

    /// Every pairwise difference support.
    pub(crate) fn pairwise_family(&self) -> HittingFamily {
        let bits: Vec<u64> = self.bits().collect();
        let mut diffs = Vec::with_capacity(bits.len() * bits.len().saturating_sub(1) / 2);
        for (i, a) in bits.iter().enumerate() {
            for b in &bits[i + 1..] {
                diffs.push(a ^ b);
            }
        }
        HittingFamily::new(diffs)
    }

    pub fn translate(&self, x: &Codeword) -> Result<Code> {
        check_same(self.len(), x.len())?;
        Code::from_bits(self.len(), self.bits().map(|b| b ^ x.bits))
    }

    pub fn permute(&self, sigma: &Permutation) -> Result<Code> {
        check_same(self.len(), sigma.len())?;
        Code::from_bits(self.len(), self.bits().map(|b| sigma.apply_bits(b)))
    }

    /// Wordwise complementation, i.e. translation by the all-ones word.
    pub fn complement(&self) -> Code {
        let ones = low_mask(self.len());
        Code::from_bits(self.len(), self.bits().map(|b| b ^ ones)).expect("same length")
    }

    pub fn is_subcode_of(&self, other: &Code) -> bool {
        self.len == other.len && self.words.iter().all(|c| other.contains(c))
    }
}

/// `W` is a witness for `c` in `C` when `c` differs from every other
/// codeword somewhere on `W`.
pub fn is_witness(code: &Code, c: &Codeword, w: &CoordSet) -> Result<bool> {
    code.require_member(c)?;
    check_same(code.len(), w.len())?;
    Ok(code
        .bits()
        .all(|d| d == c.bits() || (d ^ c.bits()) & w.mask() != 0))
}

/// Outcome of checking the w-witness property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessVerdict {
    pub w: usize,
    /// One witness of size exactly `min(w, n)` per codeword that has one.
    pub choice: BTreeMap<Codeword, CoordSet>,
    /// Codewords without a witness of size `<= w`, in code order.
    pub failures: Vec<Codeword>,
}

impl WitnessVerdict {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Codeword> {
        self.failures.first()
    }
}

/// Check whether every codeword has a witness of size at most `w`.
///
/// Each chosen witness is the lexicographically smallest minimum witness,
/// padded with the smallest unused coordinates to exactly `min(w, n)`.
pub fn has_w_witness_property(code: &Code, w: usize) -> WitnessVerdict {
    let n = code.len();
    let target = w.min(n);
    let universe = low_mask(n);
    let mut choice = BTreeMap::new();
    let mut failures = Vec::new();
    for c in code.iter() {
        let fam = code.difference_family(c);
        if fam.minimum(universe, target).is_none() {
            failures.push(*c);
            continue;
        }
        let min = fam.lex_minimum(universe).expect("a bounded witness exists");
        choice.insert(*c, CoordSet::from_raw(n, min).pad_to(target));
    }
    WitnessVerdict {
        w,
        choice,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(s: &str) -> Codeword {
        s.parse().unwrap()
    }

    fn code(words: &[&str]) -> Code {
        let n = words[0].len();
        Code::new(n, words.iter().map(|s| cw(s))).unwrap()
    }

    fn set(n: usize, coords: &[usize]) -> CoordSet {
        CoordSet::from_coords(n, coords).unwrap()
    }

    #[test]
    fn support_examples() {
        assert_eq!(cw("1100").support(), set(4, &[1, 2]));
        assert_eq!(cw("0000").support(), set(4, &[]));
        assert_eq!(cw("0101").support(), set(4, &[2, 4]));
    }

    #[test]
    fn difference_support_examples() {
        assert_eq!(
            cw("1100").difference_support(&cw("1010")).unwrap(),
            set(4, &[2, 3])
        );
        let c = cw("1011");
        assert!(c.difference_support(&c).unwrap().is_empty());
        assert_eq!(
            cw("0000").difference_support(&cw("1111")).unwrap(),
            set(4, &[1, 2, 3, 4])
        );
        assert!(matches!(
            cw("000").difference_support(&cw("0000")),
            Err(WitnessError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn codeword_parsing_and_ranges() {
        assert_eq!(cw("0101").to_string(), "0101");
        assert!("01x1".parse::<Codeword>().is_err());
        assert!("".parse::<Codeword>().is_err());
        assert!(Codeword::new(3, 0b1000).is_err());
        assert!(Codeword::new(65, 0).is_err());
        assert!(Codeword::new(64, u64::MAX).is_ok());
        assert!(CoordSet::from_coords(4, &[0]).is_err());
        assert!(CoordSet::from_coords(4, &[5]).is_err());
    }

    #[test]
    fn codeword_order_is_string_order() {
        let mut v = [cw("1100"), cw("0011"), cw("0101"), cw("1010")];
        v.sort();
        let s: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        assert_eq!(s, ["0011", "0101", "1010", "1100"]);
    }

    #[test]
    fn coordset_order_is_lexicographic() {
        let mut v = vec![set(4, &[2, 3]), set(4, &[1, 3]), set(4, &[1, 2]), set(4, &[1])];
        v.sort();
        assert_eq!(v, [set(4, &[1]), set(4, &[1, 2]), set(4, &[1, 3]), set(4, &[2, 3])]);
    }

    #[test]
    fn duplicate_words_rejected() {
        assert!(matches!(
            Code::new(3, [cw("101"), cw("101")]),
            Err(WitnessError::DuplicateWord(_))
        ));
        assert!(Code::new(3, [cw("1010")]).is_err());
    }

    #[test]
    fn is_witness_examples() {
        let c = code(&["100", "010", "001"]);
        assert!(is_witness(&c, &cw("100"), &set(3, &[1])).unwrap());

        let z = code(&["100", "010", "001", "000"]);
        for mask in 0u64..8 {
            let w = CoordSet::new(3, mask).unwrap();
            let ok = is_witness(&z, &cw("000"), &w).unwrap();
            assert_eq!(ok, mask == 0b111, "W = {w}");
        }

        let single = code(&["0110"]);
        assert!(is_witness(&single, &cw("0110"), &set(4, &[])).unwrap());

        assert!(matches!(
            is_witness(&c, &cw("111"), &set(3, &[1])),
            Err(WitnessError::NotInCode(_))
        ));
    }

    #[test]
    fn property_examples() {
        let weight_one_plus_zero = code(&["100", "010", "001", "000"]);
        let v = has_w_witness_property(&weight_one_plus_zero, 2);
        assert!(!v.holds());
        assert_eq!(v.first_failure(), Some(&cw("000")));
        assert!(has_w_witness_property(&weight_one_plus_zero, 3).holds());

        let cube = Code::full_cube(3).unwrap();
        let v = has_w_witness_property(&cube, 3);
        assert!(v.holds());
        assert!(v.choice.values().all(|w| w.size() == 3));

        let single = code(&["1010"]);
        let v = has_w_witness_property(&single, 0);
        assert!(v.holds());
        assert_eq!(v.choice[&cw("1010")], set(4, &[]));

        let empty = Code::empty(5).unwrap();
        assert!(has_w_witness_property(&empty, 0).holds());
    }

    #[test]
    fn choice_is_padded_lexicographically() {
        let single = code(&["1010"]);
        let v = has_w_witness_property(&single, 2);
        assert_eq!(v.choice[&cw("1010")], set(4, &[1, 2]));
        let v = has_w_witness_property(&single, 9);
        assert_eq!(v.choice[&cw("1010")], set(4, &[1, 2, 3, 4]));
    }

    #[test]
    fn symmetry_examples() {
        let c = code(&["100", "010"]);
        assert_eq!(c.translate(&cw("000")).unwrap(), c);
        assert_eq!(c.translate(&cw("111")).unwrap(), code(&["011", "101"]));
        let sigma = Permutation::from_images(&[2, 3, 1]).unwrap();
        assert_eq!(c.permute(&sigma).unwrap(), code(&["010", "001"]));
        assert!(Permutation::from_images(&[1, 1, 2]).is_err());
        assert!(c.translate(&cw("0000")).is_err());
    }
}
