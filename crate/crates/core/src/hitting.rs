//! Minimum hitting sets over families of coordinate masks.
//!
//! A witness for `c` in `C` is exactly a hitting set of the difference
//! supports `{c ^ c' : c' in C, c' != c}`; a uniform witness hits every
//! pairwise difference. Both reduce to the engine here.

/// A family of nonempty sets over at most 64 points, reduced to its
/// inclusion-minimal members (any set hitting those hits the rest).
#[derive(Debug, Clone)]
pub struct HittingFamily {
    sets: Vec<u64>,
    has_empty: bool,
}

impl HittingFamily {
    pub fn new<I: IntoIterator<Item = u64>>(sets: I) -> Self {
        let mut all: Vec<u64> = sets.into_iter().collect();
        all.sort_unstable_by_key(|s| (s.count_ones(), *s));
        all.dedup();
        let has_empty = all.first() == Some(&0);
        let mut minimal: Vec<u64> = Vec::new();
        for s in all {
            if !minimal.iter().any(|m| m & s == *m) {
                minimal.push(s);
            }
        }
        HittingFamily {
            sets: minimal,
            has_empty,
        }
    }

    #[cfg(test)]
    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn is_hit_by(&self, h: u64) -> bool {
        !self.has_empty && self.sets.iter().all(|s| s & h != 0)
    }

    /// A minimum-cardinality hitting set using only points of `allowed`,
    /// provided one of size at most `limit` exists.
    pub fn minimum(&self, allowed: u64, limit: usize) -> Option<u64> {
        if self.has_empty {
            return None;
        }
        let mut search = Search {
            best_size: limit + 1,
            best: None,
        };
        search.run(&self.sets, 0, 0, allowed);
        search.best
    }

    /// Size of a minimum hitting set within `universe`, if any exists.
    pub fn minimum_size(&self, universe: u64) -> Option<usize> {
        self.minimum(universe, 64).map(|h| h.count_ones() as usize)
    }

    /// The lexicographically smallest (as a sorted list of points) among
    /// all minimum-cardinality hitting sets within `universe`.
    pub fn lex_minimum(&self, universe: u64) -> Option<u64> {
        let target = self.minimum_size(universe)?;
        let mut chosen = 0u64;
        let mut floor = 0u32;
        for slot in 0..target {
            let remaining_budget = target - slot - 1;
            let mut picked = None;
            let mut cand = universe & !low_bits(floor);
            while cand != 0 {
                let j = cand.trailing_zeros();
                cand &= cand - 1;
                let with = chosen | (1u64 << j);
                let unhit: Vec<u64> = self
                    .sets
                    .iter()
                    .copied()
                    .filter(|s| s & with == 0)
                    .collect();
                let allowed = universe & !low_bits(j + 1);
                let ok = if unhit.is_empty() {
                    true
                } else if remaining_budget == 0 {
                    false
                } else {
                    let mut s = Search {
                        best_size: remaining_budget + 1,
                        best: None,
                    };
                    s.run(&unhit, 0, 0, allowed);
                    s.best.is_some()
                };
                if ok {
                    picked = Some(j);
                    break;
                }
            }
            let j = picked.expect("a minimum hitting set exists, so some extension is feasible");
            chosen |= 1u64 << j;
            floor = j + 1;
            if self.is_hit_by(chosen) {
                break;
            }
        }
        debug_assert!(self.is_hit_by(chosen));
        debug_assert_eq!(chosen.count_ones() as usize, target);
        Some(chosen)
    }

    /// Greedy cover: repeatedly add the point hitting the most unhit sets,
    /// ties to the smallest point.
    pub fn greedy(&self, universe: u64) -> Option<u64> {
        if self.has_empty {
            return None;
        }
        let mut chosen = 0u64;
        let mut unhit: Vec<u64> = self.sets.clone();
        while !unhit.is_empty() {
            let mut best_point = None;
            let mut best_count = 0usize;
            let mut pts = universe & !chosen;
            while pts != 0 {
                let j = pts.trailing_zeros();
                pts &= pts - 1;
                let bit = 1u64 << j;
                let count = unhit.iter().filter(|s| *s & bit != 0).count();
                if count > best_count {
                    best_count = count;
                    best_point = Some(bit);
                }
            }
            let bit = best_point?;
            chosen |= bit;
            unhit.retain(|s| s & bit == 0);
        }
        Some(chosen)
    }
}

#[inline]
fn low_bits(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

struct Search {
    best_size: usize,
    best: Option<u64>,
}

impl Search {
    fn run(&mut self, sets: &[u64], chosen: u64, count: usize, allowed: u64) {
        let unhit: Vec<u64> = sets.iter().copied().filter(|s| s & chosen == 0).collect();
        if unhit.is_empty() {
            if count < self.best_size {
                self.best_size = count;
                self.best = Some(chosen);
            }
            return;
        }
        if count + 1 >= self.best_size {
            return;
        }
        // Pairwise-disjoint unhit sets each need their own point.
        let mut used = 0u64;
        let mut packing = 0usize;
        let mut branch_set = 0u64;
        let mut branch_size = u32::MAX;
        for s in &unhit {
            let avail = s & allowed;
            if avail == 0 {
                return;
            }
            let size = avail.count_ones();
            if size < branch_size {
                branch_size = size;
                branch_set = avail;
            }
            if avail & used == 0 {
                used |= avail;
                packing += 1;
            }
        }
        if count + packing >= self.best_size {
            return;
        }
        let mut allowed_here = allowed;
        let mut elems = branch_set;
        while elems != 0 {
            let bit = elems & elems.wrapping_neg();
            elems &= elems - 1;
            self.run(&unhit, chosen | bit, count + 1, allowed_here & !bit);
            allowed_here &= !bit;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::KSubsets;

    fn brute_min(family: &[u64], universe_size: usize) -> Option<u64> {
        for k in 0..=universe_size {
            for h in KSubsets::new(universe_size, k) {
                if family.iter().all(|s| s & h != 0) {
                    return Some(h);
                }
            }
        }
        None
    }

    #[test]
    fn triangle_needs_two() {
        let fam = HittingFamily::new([0b110, 0b101, 0b011]);
        assert_eq!(fam.minimum_size(0b111), Some(2));
        assert_eq!(fam.lex_minimum(0b111), Some(0b011));
    }

    #[test]
    fn empty_family_is_hit_by_nothing() {
        let fam = HittingFamily::new(std::iter::empty());
        assert_eq!(fam.lex_minimum(0b1111), Some(0));
        assert_eq!(fam.greedy(0b1111), Some(0));
    }

    #[test]
    fn empty_member_is_unhittable() {
        let fam = HittingFamily::new([0, 1]);
        assert_eq!(fam.minimum(u64::MAX, 64), None);
        assert_eq!(fam.greedy(u64::MAX), None);
    }

    #[test]
    fn supersets_are_dropped() {
        let fam = HittingFamily::new([0b1, 0b11, 0b111, 0b1000, 0b1000]);
        assert_eq!(fam.sets(), &[0b1, 0b1000]);
    }

    #[test]
    fn limit_is_respected() {
        let fam = HittingFamily::new([0b1, 0b10, 0b100]);
        assert_eq!(fam.minimum(0b111, 2), None);
        assert_eq!(fam.minimum(0b111, 3), Some(0b111));
    }

    #[test]
    fn agrees_with_brute_force_on_small_families() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=9);
            let m = rng.gen_range(0..12);
            let fam: Vec<u64> = (0..m)
                .map(|_| rng.gen_range(1..(1u64 << n)))
                .collect();
            let engine = HittingFamily::new(fam.iter().copied());
            let universe = (1u64 << n) - 1;
            let brute = brute_min(&fam, n);
            let exact = engine.minimum(universe, 64);
            assert_eq!(
                exact.map(|h| h.count_ones()),
                brute.map(|h| h.count_ones())
            );
            let lex = engine.lex_minimum(universe).unwrap();
            // brute enumerates equal-size sets in numeric order; find the lex-min among them
            let k = lex.count_ones() as usize;
            let best_lex = KSubsets::new(n, k)
                .filter(|h| fam.iter().all(|s| s & h != 0))
                .min_by_key(|h| lex_key(*h))
                .unwrap();
            assert_eq!(lex, best_lex);
            let g = engine.greedy(universe).unwrap();
            assert!(engine.is_hit_by(g));
            assert!(g.count_ones() >= lex.count_ones());
        }
    }

    fn lex_key(h: u64) -> Vec<u32> {
        let mut v = Vec::new();
        let mut x = h;
        while x != 0 {
            v.push(x.trailing_zeros());
            x &= x - 1;
        }
        v
    }
}
