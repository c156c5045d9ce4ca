//! K-sensitivity domains: the words at one sensitivity level, viewed as an
//! induced subgraph of the hypercube, and the two invariants we compare on
//! them (edge count and average pairwise Hamming distance).

use crate::error::{Error, Result};
use crate::sensitivity::{Polarity, SensitivityMap};
use crate::truth_table::{TruthTable, Word, LO_MASKS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDomain {
    pub k: usize,
    pub polarity: Polarity,
    /// Qualifying words in increasing order.
    pub members: Vec<Word>,
    /// Member pairs at Hamming distance exactly 1.
    pub edge_count: u64,
    /// Sum of `h(x, y)` over unordered member pairs.
    pub hamming_sum: u64,
    pub pair_count: u64,
}

/// Why two domains differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KInvariant {
    MemberCount,
    EdgeCount,
    AverageHamming,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KComparison {
    Indistinguished,
    Distinguished(KInvariant),
}

#[inline]
pub fn hamming(x: Word, y: Word) -> u32 {
    (x.0 ^ y.0).count_ones()
}

pub fn k_domain(tt: &TruthTable, k: usize, polarity: Polarity) -> Result<KDomain> {
    k_domain_from_map(&SensitivityMap::new(tt), k, polarity)
}

/// The invariants of a domain without its member list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KSummary {
    pub k: usize,
    pub polarity: Polarity,
    pub size: u64,
    pub edge_count: u64,
    pub hamming_sum: u64,
    pub pair_count: u64,
}

/// Invariants of the word set given as a packed mask over `n` inputs.
fn mask_invariants(mask: &[u64], n: usize) -> (u64, u64, u64) {
    let size: u64 = mask.iter().map(|m| u64::from(m.count_ones())).sum();
    let mut edge_count = 0u64;
    let mut hamming_sum = 0u64;
    // each edge is counted once, from its endpoint with x_i = 0;
    // sum over pairs of h(x,y) = sum over bits of (#set) * (#clear)
    for (var, &lo) in LO_MASKS.iter().enumerate().take(n) {
        let s = 1u32 << var;
        let (edges, set) = mask.iter().fold((0u64, 0u64), |(e, t), &m| {
            (
                e + u64::from((m & lo & (m >> s)).count_ones()),
                t + u64::from((m & !lo).count_ones()),
            )
        });
        edge_count += edges;
        hamming_sum += set * (size - set);
    }
    for var in 6..n.max(6) {
        let stride = 1usize << (var - 6);
        let (edges, set) =
            (0..mask.len())
                .filter(|c| c & stride == 0)
                .fold((0u64, 0u64), |(e, t), c| {
                    (
                        e + u64::from((mask[c] & mask[c | stride]).count_ones()),
                        t + u64::from(mask[c | stride].count_ones()),
                    )
                });
        edge_count += edges;
        hamming_sum += set * (size - set);
    }
    (size, edge_count, hamming_sum)
}

/// Builds a domain from precomputed per-word sensitivities.
pub fn k_domain_from_map(map: &SensitivityMap, k: usize, polarity: Polarity) -> Result<KDomain> {
    let mask = map.level_mask(k, polarity)?;
    let mut members = Vec::new();
    for (idx, &w) in mask.iter().enumerate() {
        let mut v = w;
        while v != 0 {
            members.push(Word(((idx << 6) + v.trailing_zeros() as usize) as u32));
            v &= v - 1;
        }
    }
    let (size, edge_count, hamming_sum) = mask_invariants(&mask, map.table().arity());
    Ok(KDomain {
        k,
        polarity,
        members,
        edge_count,
        hamming_sum,
        pair_count: size * size.saturating_sub(1) / 2,
    })
}

/// Like [`k_domain_from_map`] but skips listing the members. `scratch`
/// holds the level mask.
pub fn k_summary_from_map(
    map: &SensitivityMap,
    k: usize,
    polarity: Polarity,
    scratch: &mut Vec<u64>,
) -> Result<KSummary> {
    map.level_mask_into(k, polarity, scratch)?;
    let (size, edge_count, hamming_sum) = mask_invariants(scratch, map.table().arity());
    Ok(KSummary {
        k,
        polarity,
        size,
        edge_count,
        hamming_sum,
        pair_count: size * size.saturating_sub(1) / 2,
    })
}

impl KDomain {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The same word set described from the complemented function's side.
    pub fn as_output_negated(mut self) -> KDomain {
        self.polarity = self.polarity.negated();
        self
    }

    pub fn summary(&self) -> KSummary {
        KSummary {
            k: self.k,
            polarity: self.polarity,
            size: self.members.len() as u64,
            edge_count: self.edge_count,
            hamming_sum: self.hamming_sum,
            pair_count: self.pair_count,
        }
    }
}

impl KSummary {
    pub fn as_output_negated(mut self) -> KSummary {
        self.polarity = self.polarity.negated();
        self
    }
}

/// Compares the isomorphism invariants of two domains at the same level and
/// polarity. Average Hamming distances are compared as exact rationals.
pub fn compare_k_invariants(a: &KDomain, b: &KDomain) -> Result<KComparison> {
    compare_summaries(&a.summary(), &b.summary())
}

pub fn compare_summaries(a: &KSummary, b: &KSummary) -> Result<KComparison> {
    if a.k != b.k || a.polarity != b.polarity {
        return Err(Error::DomainMismatch);
    }
    if a.size != b.size {
        return Ok(KComparison::Distinguished(KInvariant::MemberCount));
    }
    if a.edge_count != b.edge_count {
        return Ok(KComparison::Distinguished(KInvariant::EdgeCount));
    }
    let lhs = u128::from(a.hamming_sum) * u128::from(b.pair_count);
    let rhs = u128::from(b.hamming_sum) * u128::from(a.pair_count);
    if lhs != rhs {
        return Ok(KComparison::Distinguished(KInvariant::AverageHamming));
    }
    Ok(KComparison::Indistinguished)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensitivity::local_sensitivity;
    use crate::truth_table::TextFormat;

    fn tt(s: &str) -> TruthTable {
        TruthTable::parse(s, TextFormat::Binary).unwrap()
    }

    fn quadratic_edges(members: &[Word]) -> u64 {
        let mut e = 0;
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if hamming(x, y) == 1 {
                    e += 1;
                }
            }
        }
        e
    }

    #[test]
    fn hamming_basics() {
        assert_eq!(hamming(Word(0b000), Word(0b111)), 3);
        assert_eq!(hamming(Word(0b101), Word(0b101)), 0);
        assert_eq!(hamming(Word(0b101), Word(0b100)), 1);
    }

    #[test]
    fn and3_top_onset_domain() {
        let d = k_domain(&tt("00000001"), 3, Polarity::Onset).unwrap();
        assert_eq!(d.members, vec![Word(7)]);
        assert_eq!((d.edge_count, d.hamming_sum, d.pair_count), (0, 0, 0));
    }

    #[test]
    fn parity_onset_is_independent() {
        let d = k_domain(&tt("01101001"), 3, Polarity::Onset).unwrap();
        assert_eq!(d.members, vec![Word(1), Word(2), Word(4), Word(7)]);
        assert_eq!(d.edge_count, 0);
        assert_eq!((d.hamming_sum, d.pair_count), (12, 6));
    }

    #[test]
    fn two_minterm_classes_split_by_average_distance() {
        // minterms at distance 2 vs distance 3
        let near = k_domain(&tt("01000001"), 3, Polarity::Onset).unwrap();
        let far = k_domain(&tt("10000001"), 3, Polarity::Onset).unwrap();
        assert_eq!((near.edge_count, far.edge_count), (0, 0));
        assert_eq!((near.hamming_sum, near.pair_count), (2, 1));
        assert_eq!((far.hamming_sum, far.pair_count), (3, 1));
        assert_eq!(
            compare_k_invariants(&near, &far).unwrap(),
            KComparison::Distinguished(KInvariant::AverageHamming)
        );
        assert_eq!(
            compare_k_invariants(&near, &near).unwrap(),
            KComparison::Indistinguished
        );
    }

    #[test]
    fn compare_rejects_mismatched_levels() {
        let f = tt("01101001");
        let a = k_domain(&f, 3, Polarity::Onset).unwrap();
        let b = k_domain(&f, 3, Polarity::Offset).unwrap();
        let c = k_domain(&f, 2, Polarity::Onset).unwrap();
        assert!(compare_k_invariants(&a, &b).is_err());
        assert!(compare_k_invariants(&a, &c).is_err());
        assert!(k_domain(&f, 4, Polarity::All).is_err());
    }

    #[test]
    fn packed_edges_match_pair_scan_and_membership() {
        for n in [3usize, 6, 7, 9] {
            let f =
                TruthTable::from_fn(n, |x| (x.wrapping_mul(0x2545_F491) >> 11) & 1 == 1).unwrap();
            let mut onset_total = 0;
            for k in 0..=n {
                for pol in [Polarity::All, Polarity::Onset, Polarity::Offset] {
                    let d = k_domain(&f, k, pol).unwrap();
                    assert_eq!(d.edge_count, quadratic_edges(&d.members), "n={n} k={k}");
                    let brute: u64 = d
                        .members
                        .iter()
                        .enumerate()
                        .flat_map(|(i, &x)| {
                            d.members[i + 1..]
                                .iter()
                                .map(move |&y| u64::from(hamming(x, y)))
                        })
                        .sum();
                    assert_eq!(d.hamming_sum, brute);
                    assert_eq!(
                        d.summary(),
                        k_summary_from_map(&SensitivityMap::new(&f), k, pol, &mut Vec::new())
                            .unwrap()
                    );
                    for w in &d.members {
                        assert_eq!(local_sensitivity(&f, *w).unwrap() as usize, k);
                    }
                    if pol == Polarity::Onset {
                        onset_total += d.len();
                    }
                }
            }
            assert_eq!(onset_total as u64, f.minterm_count());
        }
    }
}
