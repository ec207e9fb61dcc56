//! Small combinatorial helpers shared by the rest of the crate.

use num_bigint::BigUint;
use num_traits::One;

/// Mask with the low `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over all `k`-subsets of `{0..n}` as bit masks, in increasing
/// numeric order (Gosper's hack).
#[derive(Debug, Clone)]
pub struct KSubsets {
    n: usize,
    next: Option<u64>,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let next = if k > n { None } else { Some(low_mask(k)) };
        KSubsets { n, next }
    }
}

impl Iterator for KSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let (r, overflow) = cur.overflowing_add(c);
            if overflow || r == 0 {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                if self.n < 64 && nxt >> self.n != 0 {
                    None
                } else {
                    Some(nxt)
                }
            }
        };
        Some(cur)
    }
}

/// Exact binomial coefficient as a big integer; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient in `u64`, saturating on overflow.
pub fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

pub fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ksubsets_counts() {
        for n in 0..=10 {
            for k in 0..=n + 1 {
                let all: Vec<u64> = KSubsets::new(n, k).collect();
                assert_eq!(all.len() as u64, binomial_u64(n, k), "n={n} k={k}");
                assert!(all.iter().all(|m| m.count_ones() as usize == k));
                assert!(all.windows(2).all(|p| p[0] < p[1]));
            }
        }
    }

    #[test]
    fn ksubsets_full_width() {
        assert_eq!(KSubsets::new(64, 64).collect::<Vec<_>>(), vec![u64::MAX]);
        assert_eq!(KSubsets::new(64, 63).count(), 64);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 6), BigUint::from(924u32));
        assert_eq!(binomial(8, 4), BigUint::from(70u32));
        assert_eq!(binomial(3, 5), BigUint::from(0u32));
        assert_eq!(binomial(64, 32).to_string(), "1832624140942590534");
        assert_eq!(binomial_u64(64, 32), 1832624140942590534);
    }
}
