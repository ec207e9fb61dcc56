//! The Steiner systems S(3,4,8) and S(5,6,12), read off the minimum-weight
//! supports of the extended binary Hamming code and the extended ternary
//! Golay code.

use std::collections::BTreeSet;

use super::SetFamily;
use crate::code::CoordSet;

/// Generator rows of the extended [8,4,4] Hamming code (first-order
/// Reed-Muller code of length 8), coordinate 1 leftmost.
const HAMMING_8_4: [&str; 4] = ["11111111", "00001111", "00110011", "01010101"];

/// Generator matrix [I | A] of the extended ternary Golay [12,6,6] code,
/// entries in GF(3).
const GOLAY_12_6: [[u8; 12]; 6] = [
    [1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1],
    [0, 1, 0, 0, 0, 0, 1, 0, 1, 2, 2, 1],
    [0, 0, 1, 0, 0, 0, 1, 1, 0, 1, 2, 2],
    [0, 0, 0, 1, 0, 0, 1, 2, 1, 0, 1, 2],
    [0, 0, 0, 0, 1, 0, 1, 2, 2, 1, 0, 1],
    [0, 0, 0, 0, 0, 1, 1, 1, 2, 2, 1, 0],
];

fn row_mask(row: &str) -> u64 {
    row.bytes()
        .enumerate()
        .filter(|(_, b)| *b == b'1')
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn family(n: usize, masks: BTreeSet<u64>) -> SetFamily {
    let mut blocks: Vec<CoordSet> = masks
        .into_iter()
        .map(|m| CoordSet::new(n, m).expect("block within [n]"))
        .collect();
    blocks.sort();
    SetFamily::new(n, blocks).expect("supports are distinct")
}

/// The 14 weight-4 supports of the extended Hamming code.
pub fn steiner_3_4_8() -> SetFamily {
    let rows: Vec<u64> = HAMMING_8_4.iter().map(|r| row_mask(r)).collect();
    let mut supports = BTreeSet::new();
    for coeffs in 0u32..16 {
        let word = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| coeffs >> i & 1 == 1)
            .fold(0u64, |acc, (_, r)| acc ^ r);
        if word.count_ones() == 4 {
            supports.insert(word);
        }
    }
    family(8, supports)
}

/// The 132 distinct supports of the 264 weight-6 ternary Golay codewords.
pub fn steiner_5_6_12() -> SetFamily {
    let mut supports = BTreeSet::new();
    for index in 0u32..729 {
        let mut coeffs = [0u8; 6];
        let mut x = index;
        for c in coeffs.iter_mut() {
            *c = (x % 3) as u8;
            x /= 3;
        }
        let mut support = 0u64;
        for j in 0..12 {
            let entry: u32 = (0..6)
                .map(|i| coeffs[i] as u32 * GOLAY_12_6[i][j] as u32)
                .sum();
            if !entry.is_multiple_of(3) {
                support |= 1 << j;
            }
        }
        if support.count_ones() == 6 {
            supports.insert(support);
        }
    }
    family(12, supports)
}
