//! Randomised search for constant-weight codes with a prescribed minimum
//! distance, giving lower bounds on A(n, d, w).

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SetFamily;
use crate::bounds::seed_constant_weight;
use crate::code::CoordSet;
use crate::combin::{binomial_u64, KSubsets};
use crate::error::{Result, WitnessError};

pub const DEFAULT_EFFORT: usize = 64;
const MAX_CANDIDATES: u64 = 200_000;
const PLATEAU_STEPS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwSearchResult {
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub seed: u64,
    pub effort: usize,
    /// Restarts actually run (stops early on reaching a known optimum).
    pub restarts: usize,
    #[serde(skip)]
    pub family: SetFamily,
    /// Size of the family: a lower bound on A(n, d, w).
    pub size: usize,
}

struct Instance {
    words: Vec<u64>,
    /// Conflicting candidates (intersection too large) for each candidate.
    conflicts: Vec<Vec<u32>>,
}

impl Instance {
    fn new(words: Vec<u64>, max_meet: i64) -> Self {
        let mut conflicts = vec![Vec::new(); words.len()];
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                if (words[i] & words[j]).count_ones() as i64 > max_meet {
                    conflicts[i].push(j as u32);
                    conflicts[j].push(i as u32);
                }
            }
        }
        Instance { words, conflicts }
    }
}

/// A packing under construction: chosen candidates plus, for every
/// candidate, how many chosen blocks it conflicts with.
struct Packing<'a> {
    inst: &'a Instance,
    chosen: Vec<u32>,
    member: Vec<bool>,
    blocked_by: Vec<u32>,
}

impl<'a> Packing<'a> {
    fn new(inst: &'a Instance) -> Self {
        let m = inst.words.len();
        Packing {
            inst,
            chosen: Vec::new(),
            member: vec![false; m],
            blocked_by: vec![0; m],
        }
    }

    fn add(&mut self, i: u32) {
        debug_assert!(!self.member[i as usize] && self.blocked_by[i as usize] == 0);
        self.member[i as usize] = true;
        self.chosen.push(i);
        for &j in &self.inst.conflicts[i as usize] {
            self.blocked_by[j as usize] += 1;
        }
    }

    fn remove_at(&mut self, pos: usize) -> u32 {
        let i = self.chosen.swap_remove(pos);
        self.member[i as usize] = false;
        for &j in &self.inst.conflicts[i as usize] {
            self.blocked_by[j as usize] -= 1;
        }
        i
    }

    fn fill(&mut self, order: &[usize]) {
        for &i in order {
            if !self.member[i] && self.blocked_by[i] == 0 {
                self.add(i as u32);
            }
        }
    }

    /// Candidates blocked only by the chosen block `b`.
    fn freed_by(&self, b: u32) -> Vec<u32> {
        self.inst.conflicts[b as usize]
            .iter()
            .copied()
            .filter(|&x| !self.member[x as usize] && self.blocked_by[x as usize] == 1)
            .collect()
    }

    fn compatible(&self, a: u32, b: u32) -> bool {
        !self.inst.conflicts[a as usize].contains(&b)
    }

    /// Replace one block by two whenever possible.
    fn improve(&mut self) {
        'restart: loop {
            for pos in 0..self.chosen.len() {
                let b = self.chosen[pos];
                let free = self.freed_by(b);
                for (i, &x) in free.iter().enumerate() {
                    for &y in &free[i + 1..] {
                        if self.compatible(x, y) {
                            self.remove_at(pos);
                            self.add(x);
                            self.add(y);
                            continue 'restart;
                        }
                    }
                }
            }
            return;
        }
    }

    /// Swap a random block for a random candidate it was blocking, then
    /// refill greedily and improve again.
    fn plateau_move(&mut self, order: &mut [usize], rng: &mut ChaCha8Rng) {
        let pos = rng.gen_range(0..self.chosen.len());
        let b = self.chosen[pos];
        let options = self.freed_by(b);
        if let Some(&x) = options.choose(rng) {
            self.remove_at(pos);
            self.add(x);
        }
        order.shuffle(rng);
        self.fill(order);
        self.improve();
    }

    fn masks(&self) -> Vec<u64> {
        self.chosen.iter().map(|&i| self.inst.words[i as usize]).collect()
    }
}

/// Seeded randomised greedy with one-for-two local improvement. The result
/// has pairwise block intersections at most `w - d/2`.
pub fn cw_code_search(n: usize, d: usize, w: usize, effort: usize, seed: u64) -> Result<CwSearchResult> {
    if d % 2 == 1 {
        return Err(WitnessError::InvalidArgument(format!(
            "distance between equal-weight words is even, got d = {d}"
        )));
    }
    if w > n {
        return Err(WitnessError::InvalidArgument(format!("weight {w} exceeds n = {n}")));
    }
    let count = binomial_u64(n, w);
    if count > MAX_CANDIDATES {
        return Err(WitnessError::TooLarge(format!("C({n},{w}) = {count} candidate blocks")));
    }
    let inst = Instance::new(KSubsets::new(n, w).collect(), w as i64 - (d / 2) as i64);
    let target = seed_constant_weight(n, d, w).map(|a| a as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..inst.words.len()).collect();
    let mut best: Vec<u64> = Vec::new();
    let mut restarts = 0;
    let done = |best: &Vec<u64>| target.is_some_and(|t| best.len() >= t) || best.len() as u64 == count;
    for _ in 0..effort.max(1) {
        restarts += 1;
        order.shuffle(&mut rng);
        let mut packing = Packing::new(&inst);
        packing.fill(&order);
        packing.improve();
        if packing.chosen.len() > best.len() {
            best = packing.masks();
        }
        for _ in 0..PLATEAU_STEPS {
            if done(&best) || packing.chosen.is_empty() {
                break;
            }
            packing.plateau_move(&mut order, &mut rng);
            if packing.chosen.len() > best.len() {
                best = packing.masks();
            }
        }
        if done(&best) {
            break;
        }
    }
    let mut blocks: Vec<CoordSet> = best
        .iter()
        .map(|&m| CoordSet::new(n, m))
        .collect::<Result<_>>()?;
    blocks.sort();
    let size = blocks.len();
    Ok(CwSearchResult {
        n,
        d,
        w,
        seed,
        effort,
        restarts,
        family: SetFamily::new(n, blocks)?,
        size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_meet(f: &SetFamily) -> usize {
        let b = f.blocks();
        let mut m = 0;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                m = m.max((b[i].mask() & b[j].mask()).count_ones() as usize);
            }
        }
        m
    }

    #[test]
    fn known_optima_reached() {
        let r = cw_code_search(4, 4, 2, DEFAULT_EFFORT, 1).unwrap();
        assert!(r.size >= 2);
        let r = cw_code_search(8, 4, 4, DEFAULT_EFFORT, 1).unwrap();
        assert_eq!(r.size, 14);
        assert!(max_meet(&r.family) <= 2);
    }

    #[test]
    fn distance_two_takes_everything() {
        let r = cw_code_search(7, 2, 3, 1, 9).unwrap();
        assert_eq!(r.size, 35);
    }

    #[test]
    fn never_exceeds_known_values_and_respects_constraint() {
        for seed in 0..5 {
            for &(n, d, w, a) in &crate::bounds::CONSTANT_WEIGHT_SEEDS {
                let r = cw_code_search(n, d, w, 4, seed).unwrap();
                assert!(r.size as u64 <= a);
                assert!(max_meet(&r.family) <= w - d / 2);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = cw_code_search(9, 4, 3, 8, 42).unwrap();
        let b = cw_code_search(9, 4, 3, 8, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.family, b.family);
    }

    #[test]
    fn odd_distance_rejected() {
        assert!(cw_code_search(8, 3, 4, 1, 0).is_err());
    }
}
