//! Branch and bound over candidate words held as bits of a `u128`.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::combin::KSubsets;
use crate::error::{Result, WitnessError};

pub(crate) const MAX_CANDIDATES: usize = 128;
pub(crate) const MAX_ENUMERATION_CANDIDATES: usize = 24;
const MAX_WINDOWS: usize = 1 << 16;
const CHECK_EVERY: u64 = 1 << 12;

/// Candidate words in (weight, string) order together with, for every
/// window `W` and candidate `c`, the candidates agreeing with `c` on `W`.
pub(crate) struct Space {
    pub n: usize,
    pub cands: Vec<u64>,
    windows: usize,
    cls: Vec<u128>,
}

pub(crate) fn candidate_order(a: &u64, b: &u64) -> std::cmp::Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| a.reverse_bits().cmp(&b.reverse_bits()))
}

impl Space {
    pub fn new(n: usize, w: usize, mut cands: Vec<u64>) -> Result<Self> {
        if cands.len() > MAX_CANDIDATES {
            return Err(WitnessError::TooLarge(format!(
                "{} candidate words (at most {MAX_CANDIDATES})",
                cands.len()
            )));
        }
        cands.sort_by(candidate_order);
        let size = w.min(n);
        let windows: Vec<u64> = KSubsets::new(n, size).take(MAX_WINDOWS + 1).collect();
        if windows.len() > MAX_WINDOWS {
            return Err(WitnessError::TooLarge(format!("C({n},{size}) windows")));
        }
        let m = cands.len();
        let mut cls = vec![0u128; windows.len() * m];
        for (wi, &win) in windows.iter().enumerate() {
            for (i, &a) in cands.iter().enumerate() {
                let row = &mut cls[wi * m + i];
                for (j, &b) in cands.iter().enumerate() {
                    if (a ^ b) & win == 0 {
                        *row |= 1 << j;
                    }
                }
            }
        }
        Ok(Space {
            n,
            cands,
            windows: windows.len(),
            cls,
        })
    }

    pub fn m(&self) -> usize {
        self.cands.len()
    }

    fn class(&self, wi: usize, c: usize) -> u128 {
        self.cls[wi * self.m() + c]
    }

    /// A window isolating `c` inside `s` (which contains `c`).
    fn window_for(&self, c: usize, s: u128) -> Option<u16> {
        (0..self.windows)
            .find(|&wi| self.class(wi, c) & s == 1 << c)
            .map(|wi| wi as u16)
    }

    /// Adding `x` to `s` keeps the property; the stored witnesses of words
    /// that `x` does not agree with stay valid.
    fn try_add(&self, s: u128, wit: &[u16], x: usize, out: Option<&mut [u16]>) -> bool {
        let s2 = s | 1 << x;
        let Some(wx) = self.window_for(x, s2) else {
            return false;
        };
        let mut out = out;
        if let Some(o) = out.as_deref_mut() {
            o.copy_from_slice(wit);
            o[x] = wx;
        }
        let mut rest = s;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.class(wit[c] as usize, c) >> x & 1 == 1 {
                match self.window_for(c, s2) {
                    Some(wc) => {
                        if let Some(o) = out.as_deref_mut() {
                            o[c] = wc;
                        }
                    }
                    None => return false,
                }
            }
        }
        true
    }

    /// Full check from scratch.
    pub fn feasible(&self, s: u128) -> bool {
        let mut rest = s;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.window_for(c, s).is_none() {
                return false;
            }
        }
        true
    }

    pub fn words(&self, s: u128) -> Vec<u64> {
        (0..self.m())
            .filter(|&i| s >> i & 1 == 1)
            .map(|i| self.cands[i])
            .collect()
    }
}

/// Search state shared by all workers.
pub(crate) struct Shared {
    pub best: AtomicUsize,
    pub nodes: AtomicU64,
    pub proven: AtomicBool,
    pub expired: AtomicBool,
    pub stop_at: usize,
    pub deadline: Option<Instant>,
    pub node_limit: Option<u64>,
}

impl Shared {
    pub fn new(stop_at: usize, deadline: Option<Instant>, node_limit: Option<u64>) -> Self {
        Shared {
            best: AtomicUsize::new(0),
            nodes: AtomicU64::new(0),
            proven: AtomicBool::new(false),
            expired: AtomicBool::new(false),
            stop_at,
            deadline,
            node_limit,
        }
    }

    fn halted(&self) -> bool {
        self.proven.load(Ordering::Relaxed) || self.expired.load(Ordering::Relaxed)
    }

    /// Returns true when `size` beat the incumbent.
    fn offer(&self, size: usize) -> bool {
        let prev = self.best.fetch_max(size, Ordering::Relaxed);
        if size >= self.stop_at {
            self.proven.store(true, Ordering::Relaxed);
        }
        size > prev
    }
}

/// A subtree root: a feasible partial code and the candidates still open.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Branch {
    pub code: u128,
    pub open: u128,
}

#[derive(Default)]
pub(crate) struct BranchOutcome {
    pub best: Option<(usize, u128)>,
    pub pruned: Vec<u128>,
}

struct Worker<'a> {
    space: &'a Space,
    shared: &'a Shared,
    nodes: u64,
    best: Option<(usize, u128)>,
    pruned: Vec<u128>,
    trace_limit: usize,
    buffers: Vec<Vec<u16>>,
}

impl<'a> Worker<'a> {
    fn tick(&mut self) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(CHECK_EVERY) {
            let total = self.shared.nodes.fetch_add(CHECK_EVERY, Ordering::Relaxed) + CHECK_EVERY;
            let over_nodes = self.shared.node_limit.is_some_and(|l| total >= l);
            let over_time = self.shared.deadline.is_some_and(|d| Instant::now() >= d);
            if over_nodes || over_time {
                self.shared.expired.store(true, Ordering::Relaxed);
            }
        }
    }

    fn record(&mut self, code: u128) {
        let size = code.count_ones() as usize;
        if self.shared.offer(size) && self.best.is_none_or(|(b, _)| size > b) {
            self.best = Some((size, code));
        }
    }

    fn log_prune(&mut self, code: u128) {
        if self.pruned.len() < self.trace_limit {
            self.pruned.push(code);
        }
    }

    /// Open candidates that can join `code` without breaking the property.
    fn filter(&mut self, code: u128, wit: &[u16], open: u128) -> u128 {
        let mut kept = 0u128;
        let mut rest = open;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.space.try_add(code, wit, j, None) {
                kept |= 1 << j;
            } else {
                self.log_prune(code | 1 << j);
            }
        }
        kept
    }

    fn dfs(&mut self, code: u128, depth: usize, open: u128) {
        self.tick();
        if self.shared.halted() {
            return;
        }
        self.record(code);
        let size = code.count_ones();
        let mut open = open;
        while open != 0 {
            if (size + open.count_ones()) as usize <= self.shared.best.load(Ordering::Relaxed)
                || self.shared.halted()
            {
                return;
            }
            let x = open.trailing_zeros() as usize;
            open &= open - 1;
            let mut child = std::mem::take(&mut self.buffers[depth + 1]);
            let added = self.space.try_add(code, &self.buffers[depth], x, Some(&mut child));
            debug_assert!(added, "open candidates are pre-filtered");
            let child_code = code | 1 << x;
            let child_open = self.filter(child_code, &child, open);
            self.buffers[depth + 1] = child;
            self.dfs(child_code, depth + 1, child_open);
        }
    }
}

/// Witness windows for every word of a feasible `code`.
fn initial_witnesses(space: &Space, code: u128) -> Option<Vec<u16>> {
    let mut wit = vec![0u16; space.m()];
    let mut rest = code;
    while rest != 0 {
        let c = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        wit[c] = space.window_for(c, code)?;
    }
    Some(wit)
}

fn run_branch(space: &Space, shared: &Shared, branch: Branch, trace_limit: usize) -> (BranchOutcome, u64) {
    let m = space.m();
    let mut worker = Worker {
        space,
        shared,
        nodes: 0,
        best: None,
        pruned: Vec::new(),
        trace_limit,
        buffers: vec![vec![0u16; m]; m + 2],
    };
    match initial_witnesses(space, branch.code) {
        Some(wit) => {
            let open = worker.filter(branch.code, &wit, branch.open);
            worker.buffers[0] = wit;
            worker.dfs(branch.code, 0, open);
        }
        None => worker.log_prune(branch.code),
    }
    let nodes = worker.nodes;
    (
        BranchOutcome {
            best: worker.best,
            pruned: worker.pruned,
        },
        nodes,
    )
}

/// Explore the branches in order; ties on size go to the earliest branch.
pub(crate) fn search(
    space: &Space,
    shared: &Shared,
    branches: &[Branch],
    workers: usize,
    trace_limit: usize,
) -> Result<(Option<(usize, u128)>, Vec<u128>, u64)> {
    let outcomes: Vec<(BranchOutcome, u64)> = if workers == 1 {
        branches
            .iter()
            .map(|&b| run_branch(space, shared, b, trace_limit))
            .collect()
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if workers > 1 {
            builder = builder.num_threads(workers);
        }
        let pool = builder
            .build()
            .map_err(|e| WitnessError::InvalidArgument(format!("worker pool: {e}")))?;
        pool.install(|| {
            branches
                .par_iter()
                .map(|&b| run_branch(space, shared, b, trace_limit))
                .collect()
        })
    };
    let mut best: Option<(usize, u128)> = None;
    let mut pruned = Vec::new();
    let mut nodes = 0;
    for (outcome, n) in outcomes {
        nodes += n;
        if let Some((size, code)) = outcome.best {
            if best.is_none_or(|(b, _)| size > b) {
                best = Some((size, code));
            }
        }
        pruned.extend(outcome.pruned.into_iter().take(trace_limit.saturating_sub(pruned.len())));
    }
    Ok((best, pruned, nodes))
}

/// Scan every subset of the candidates; the first maximum in numeric
/// order wins.
pub(crate) fn enumerate(space: &Space, shared: &Shared) -> (Option<(usize, u128)>, u64) {
    let m = space.m();
    debug_assert!(m <= MAX_ENUMERATION_CANDIDATES);
    let mut best: Option<(usize, u128)> = None;
    let mut nodes = 0u64;
    for s in 0u128..1 << m {
        nodes += 1;
        if nodes.is_multiple_of(CHECK_EVERY) {
            let over_nodes = shared.node_limit.is_some_and(|l| nodes >= l);
            let over_time = shared.deadline.is_some_and(|d| Instant::now() >= d);
            if over_nodes || over_time {
                shared.expired.store(true, Ordering::Relaxed);
                break;
            }
        }
        let size = s.count_ones() as usize;
        if best.is_none_or(|(b, _)| size > b) && space.feasible(s) {
            best = Some((size, s));
        }
    }
    shared.nodes.store(nodes, Ordering::Relaxed);
    if let Some((size, _)) = best {
        shared.offer(size);
    }
    (best, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_feasible(n: usize, w: usize, words: &[u64]) -> bool {
        words.iter().all(|&c| {
            KSubsets::new(n, w.min(n)).any(|win| {
                words
                    .iter()
                    .filter(|&&d| d != c)
                    .all(|&d| (d ^ c) & win != 0)
            })
        })
    }

    #[test]
    fn candidate_order_is_weight_then_string() {
        let space = Space::new(3, 1, (0..8).collect()).unwrap();
        let strs: Vec<String> = space
            .cands
            .iter()
            .map(|&b| (0..3).map(|i| if b >> i & 1 == 1 { '1' } else { '0' }).collect())
            .collect();
        assert_eq!(strs, ["000", "001", "010", "100", "011", "101", "110", "111"]);
    }

    #[test]
    fn incremental_matches_full_check() {
        for (n, w) in [(3, 1), (3, 2), (4, 2), (4, 1)] {
            let space = Space::new(n, w, (0..1 << n).collect()).unwrap();
            let m = space.m();
            for s in 0u128..1 << m {
                if !space.feasible(s) {
                    continue;
                }
                let wit = initial_witnesses(&space, s).unwrap();
                for x in 0..m {
                    if s >> x & 1 == 1 {
                        continue;
                    }
                    let fast = space.try_add(s, &wit, x, None);
                    assert_eq!(fast, space.feasible(s | 1 << x));
                }
            }
            for s in (0u128..1 << m).step_by(97) {
                assert_eq!(space.feasible(s), brute_feasible(n, w, &space.words(s)));
            }
        }
    }
}
