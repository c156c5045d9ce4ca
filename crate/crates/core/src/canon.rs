//! Exact NPN matching through a canonical form.
//!
//! The canonical form of `f` is the lexicographically smallest table (text
//! order, leftmost character most significant) in the set of class members
//! that satisfy three normalisation rules:
//!
//! 1. the onset is the minority polarity (`|h| <= 2^(n-1)`; both output
//!    polarities are candidates when balanced),
//! 2. every variable has no more onset minterms in its negative cofactor
//!    than in its positive one,
//! 3. variables appear in non-increasing order of the key
//!    (negative-cofactor onset count, influence).
//!
//! The set depends only on the NPN class, so its minimum is a class
//! invariant. Rules 2 and 3 fix everything except the polarity of variables
//! whose cofactors are balanced and the order of variables with equal keys;
//! those choices are searched exhaustively, one variable position at a time
//! starting from `x1`. Once positions `0..=k` are placed the first
//! `2^(k+1)` bits of the result are final, so only candidates with the
//! smallest such prefix are kept, and candidates with identical tables are
//! merged.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::truth_table::{NpnTransform, TruthTable, Word, LO_MASKS};

/// Largest arity accepted by [`canonical_form`].
pub const MAX_CANON_ARITY: usize = 16;

/// Largest arity accepted by [`brute_force_equivalent`].
pub const BRUTE_FORCE_MAX_ARITY: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub canon: TruthTable,
    /// Maps the original function onto `canon`.
    pub witness: NpnTransform,
}

/// Onset count of the positive cofactor of each variable.
fn positive_cofactor_counts(h: &TruthTable) -> Vec<u64> {
    let words = h.words();
    (0..h.arity())
        .map(|var| {
            if var < 6 {
                words
                    .iter()
                    .map(|w| u64::from((w & !LO_MASKS[var]).count_ones()))
                    .sum()
            } else {
                let stride = 1usize << (var - 6);
                (0..words.len())
                    .filter(|c| c & stride != 0)
                    .map(|c| u64::from(words[c].count_ones()))
                    .sum()
            }
        })
        .collect()
}

/// Number of words at which flipping each variable changes the output.
fn influences(h: &TruthTable) -> Vec<u64> {
    (0..h.arity())
        .map(|var| {
            let mut flipped = h.clone();
            flipped.flip_var(var);
            h.words()
                .iter()
                .zip(flipped.words())
                .map(|(a, b)| u64::from((a ^ b).count_ones()))
                .sum()
        })
        .collect()
}

fn swap_transform(n: usize, a: usize, b: usize) -> NpnTransform {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(a, b);
    NpnTransform::new(perm, 0, false).expect("transposition is a permutation")
}

fn flip_transform(n: usize, var: usize) -> NpnTransform {
    NpnTransform::new((0..n).collect(), 1 << var, false).expect("identity is a permutation")
}

/// Candidate tables keyed by content; the value maps `f` onto the key.
type Frontier = BTreeMap<TruthTable, NpnTransform>;

/// Keeps only the candidates whose first `bits` bits are minimal.
fn keep_min_prefix(frontier: Frontier, bits: usize) -> Frontier {
    let best = match frontier.keys().min_by(|a, b| a.lex_cmp_prefix(b, bits)) {
        Some(b) => b.clone(),
        None => return frontier,
    };
    frontier
        .into_iter()
        .filter(|(t, _)| t.lex_cmp_prefix(&best, bits).is_eq())
        .collect()
}

/// Canonicalises within one output polarity.
fn canonical_branch(f: &TruthTable, output_neg: bool) -> CanonicalForm {
    let n = f.arity();
    let mut witness = if output_neg {
        NpnTransform::output_negation(n)
    } else {
        NpnTransform::identity(n)
    };
    let mut h = f.apply(&witness).expect("same arity");

    // rule 2: negative cofactor gets the smaller onset count
    let total = h.minterm_count();
    let pos = positive_cofactor_counts(&h);
    let mut tied = vec![false; n];
    for var in 0..n {
        let neg = total - pos[var];
        if neg > pos[var] {
            let t = flip_transform(n, var);
            h = h.apply(&t).expect("same arity");
            witness = witness.then(&t).expect("same arity");
        }
        tied[var] = neg == pos[var];
    }

    // rule 3: order variables by descending key
    let pos = positive_cofactor_counts(&h);
    let infl = influences(&h);
    let key = |v: usize| (total - pos[v], infl[v]);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key(b).cmp(&key(a)).then(a.cmp(&b)));
    // source variable order[p] moves to position p
    let mut perm = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        perm[v] = p;
    }
    let t = NpnTransform::new(perm, 0, false).expect("sorted order is a permutation");
    h = h.apply(&t).expect("same arity");
    witness = witness.then(&t).expect("same arity");
    let keys: Vec<(u64, u64)> = order.iter().map(|&v| key(v)).collect();
    let tied: Vec<bool> = order.iter().map(|&v| tied[v]).collect();

    // free polarities of balanced variables
    let mut frontier: Frontier = BTreeMap::from([(h, witness)]);
    for var in (0..n).filter(|&v| tied[v]) {
        let flip = flip_transform(n, var);
        let mut next = frontier.clone();
        for (t, w) in &frontier {
            let mut g = t.clone();
            g.flip_var(var);
            next.entry(g)
                .or_insert_with(|| w.then(&flip).expect("same arity"));
        }
        frontier = next;
    }

    // free orders within equal-key blocks, placed from position 0 upwards
    for k in 0..n {
        let block_end = (k..n).find(|&j| keys[j] != keys[k]).unwrap_or(n);
        if block_end - k > 1 {
            let mut next = Frontier::new();
            for (t, w) in &frontier {
                for j in k..block_end {
                    let mut g = t.clone();
                    g.swap_vars(k, j);
                    next.entry(g).or_insert_with(|| {
                        if j == k {
                            w.clone()
                        } else {
                            w.then(&swap_transform(n, k, j)).expect("same arity")
                        }
                    });
                }
            }
            frontier = next;
        }
        frontier = keep_min_prefix(frontier, 1 << (k + 1));
    }

    let (canon, witness) = frontier.into_iter().next().expect("frontier never empties");
    CanonicalForm { canon, witness }
}

pub fn canonical_form(tt: &TruthTable) -> Result<CanonicalForm> {
    let n = tt.arity();
    if n > MAX_CANON_ARITY {
        return Err(Error::ArityOutOfRange {
            n,
            max: MAX_CANON_ARITY,
        });
    }
    let ones = tt.minterm_count();
    let half = (tt.num_bits() / 2) as u64;
    let branches: &[bool] = match ones.cmp(&half) {
        std::cmp::Ordering::Less => &[false],
        std::cmp::Ordering::Greater => &[true],
        std::cmp::Ordering::Equal => &[false, true],
    };
    Ok(branches
        .iter()
        .map(|&neg| canonical_branch(tt, neg))
        .min_by(|a, b| a.canon.lex_cmp(&b.canon))
        .expect("at least one branch"))
}

/// Decides NPN equivalence through canonical forms. The returned transform
/// maps `f` onto `g`.
pub fn exact_equivalent(f: &TruthTable, g: &TruthTable) -> Result<Option<NpnTransform>> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: g.arity(),
        });
    }
    let (cf, cg) = (canonical_form(f)?, canonical_form(g)?);
    witness_between(&cf, &cg)
}

/// The transform taking the first form's original to the second's, if the
/// canons agree.
pub fn witness_between(cf: &CanonicalForm, cg: &CanonicalForm) -> Result<Option<NpnTransform>> {
    if cf.canon != cg.canon {
        return Ok(None);
    }
    Ok(Some(cf.witness.then(&cg.witness.inverse())?))
}

/// All `n!` permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Tries every one of the `2^(n+1) n!` transforms, checking each pointwise.
pub fn brute_force_equivalent(f: &TruthTable, g: &TruthTable) -> Result<Option<NpnTransform>> {
    let n = f.arity();
    if n != g.arity() {
        return Err(Error::ArityMismatch {
            left: n,
            right: g.arity(),
        });
    }
    if n > BRUTE_FORCE_MAX_ARITY {
        return Err(Error::ArityOutOfRange {
            n,
            max: BRUTE_FORCE_MAX_ARITY,
        });
    }
    if f.minterm_count() != g.minterm_count()
        && f.minterm_count() + g.minterm_count() != f.num_bits() as u64
    {
        return Ok(None);
    }
    for perm in permutations(n) {
        for neg in 0..(1u32 << n) {
            for out in [false, true] {
                let t = NpnTransform::new(perm.clone(), neg, out)?;
                let hit = (0..1u32 << n).all(|x| {
                    let src = t.source_word(Word(x));
                    g.bit(x as usize) == (out ^ f.bit(src.0 as usize))
                });
                if hit {
                    return Ok(Some(t));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth_table::TextFormat;
    use std::collections::HashSet;

    fn tt(s: &str) -> TruthTable {
        TruthTable::parse(s, TextFormat::Binary).unwrap()
    }

    #[test]
    fn and_nand_or_share_a_canon() {
        let and3 = canonical_form(&tt("00000001")).unwrap();
        let nand3 = canonical_form(&tt("11111110")).unwrap();
        let or3 = canonical_form(&tt("01111111")).unwrap();
        assert_eq!(and3.canon, nand3.canon);
        assert_eq!(and3.canon, or3.canon);
        assert_eq!(and3.canon.to_binary(), "00000001");
    }

    #[test]
    fn three_input_class_count() {
        let canons: HashSet<_> = (0..256u64)
            .map(|b| {
                canonical_form(&TruthTable::from_u64(3, b).unwrap())
                    .unwrap()
                    .canon
            })
            .collect();
        assert_eq!(canons.len(), 14);
    }

    #[test]
    fn witnesses_map_onto_canon() {
        for b in 0..256u64 {
            let f = TruthTable::from_u64(3, b).unwrap();
            let c = canonical_form(&f).unwrap();
            assert_eq!(f.apply(&c.witness).unwrap(), c.canon);
            assert_eq!(canonical_form(&c.canon).unwrap().canon, c.canon);
        }
    }

    #[test]
    fn mixed_polarity_pair_has_witness() {
        let f = TruthTable::from_fn(3, |x| (x & 3 == 3) || x & 4 == 4).unwrap();
        let g = TruthTable::from_fn(3, |x| x & 1 == 0 || (x & 2 == 2 && x & 4 == 0)).unwrap();
        let w = exact_equivalent(&f, &g).unwrap().expect("equivalent");
        assert_eq!(f.apply(&w).unwrap(), g);
        let b = brute_force_equivalent(&f, &g).unwrap().expect("equivalent");
        assert_eq!(f.apply(&b).unwrap(), g);
    }

    #[test]
    fn self_match_and_non_match() {
        let f = tt("00010110");
        let w = exact_equivalent(&f, &f).unwrap().unwrap();
        assert_eq!(f.apply(&w).unwrap(), f);
        let and3 = tt("00000001");
        let parity = tt("01101001");
        assert_eq!(exact_equivalent(&and3, &parity).unwrap(), None);
        assert_eq!(brute_force_equivalent(&and3, &parity).unwrap(), None);
        assert!(exact_equivalent(&and3, &tt("0110")).is_err());
        assert!(brute_force_equivalent(
            &TruthTable::zero(6).unwrap(),
            &TruthTable::zero(6).unwrap()
        )
        .is_err());
        assert!(canonical_form(&TruthTable::zero(17).unwrap()).is_err());
    }

    #[test]
    fn symmetric_functions_stay_cheap_at_sixteen_inputs() {
        let parity = TruthTable::from_fn(16, |x| x.count_ones() % 2 == 1).unwrap();
        let c = canonical_form(&parity).unwrap();
        assert_eq!(parity.apply(&c.witness).unwrap(), c.canon);
        let majority = TruthTable::from_fn(15, |x| x.count_ones() >= 8).unwrap();
        let c = canonical_form(&majority).unwrap();
        assert_eq!(majority.apply(&c.witness).unwrap(), c.canon);
    }

    #[test]
    fn permutation_enumeration() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(5).len(), 120);
        assert_eq!(permutations(1), vec![vec![0]]);
    }
}
