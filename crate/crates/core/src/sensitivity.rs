//! Local sensitivity and the per-function sensitivity profile.
//!
//! The packed scan works on whole machine words at once. For every variable
//! `i` it forms the mask `D_i = T ^ T(x ^ e_i)` (bit `x` set iff `f` is
//! sensitive to `x_i` at `x`) and adds the masks into a bit-sliced counter,
//! so each lane of the counter ends up holding `s(f, x)` for its word. The
//! histograms then fall out of one equality mask per level and a popcount.

use std::ops::{BitAnd, BitOr, BitXor, Not, Shl, Shr};

use crate::error::{Error, Result};
use crate::truth_table::{TruthTable, Word, WordWidth, LO_MASKS};

/// Which words a signature is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Every word of the domain.
    All,
    /// Words with `f(x) = 1`.
    Onset,
    /// Words with `f(x) = 0`.
    Offset,
}

impl Polarity {
    /// The polarity that selects the same words after negating the output.
    pub fn negated(self) -> Polarity {
        match self {
            Polarity::All => Polarity::All,
            Polarity::Onset => Polarity::Offset,
            Polarity::Offset => Polarity::Onset,
        }
    }
}

/// Sensitivity signatures of one function.
///
/// Histograms are indexed by sensitivity value `0..=n`, zeros included. Two
/// functions have the same ordered sensitivity vector iff their histograms
/// are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SensitivityProfile {
    n: usize,
    /// `s(f)`, the maximum local sensitivity.
    pub s: u32,
    /// Maximum over offset words, 0 when the offset is empty.
    pub s0: u32,
    /// Maximum over onset words, 0 when the onset is empty.
    pub s1: u32,
    /// `sum_x s(f, x)`; the average sensitivity is `sens_sum / 2^n`.
    pub sens_sum: u64,
    pub osv: Vec<u64>,
    pub osv0: Vec<u64>,
    pub osv1: Vec<u64>,
}

impl SensitivityProfile {
    fn from_histograms(n: usize, osv0: Vec<u64>, osv1: Vec<u64>) -> Self {
        let osv: Vec<u64> = osv0.iter().zip(&osv1).map(|(a, b)| a + b).collect();
        let top = |h: &[u64]| h.iter().rposition(|&c| c > 0).unwrap_or(0) as u32;
        SensitivityProfile {
            n,
            s: top(&osv),
            s0: top(&osv0),
            s1: top(&osv1),
            sens_sum: weighted_sum(&osv),
            osv,
            osv0,
            osv1,
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn s_of(&self, polarity: Polarity) -> u32 {
        match polarity {
            Polarity::All => self.s,
            Polarity::Onset => self.s1,
            Polarity::Offset => self.s0,
        }
    }

    pub fn histogram(&self, polarity: Polarity) -> &[u64] {
        match polarity {
            Polarity::All => &self.osv,
            Polarity::Onset => &self.osv1,
            Polarity::Offset => &self.osv0,
        }
    }

    /// Sum of local sensitivities over the words selected by `polarity`.
    pub fn sum_of(&self, polarity: Polarity) -> u64 {
        match polarity {
            Polarity::All => self.sens_sum,
            p => weighted_sum(self.histogram(p)),
        }
    }

    /// Average sensitivity as a float, for display only.
    pub fn average(&self) -> f64 {
        self.sens_sum as f64 / (1u64 << self.n) as f64
    }

    /// The ordered sensitivity vector in descending order with zeros kept.
    pub fn ordered_vector(&self, polarity: Polarity) -> Vec<u32> {
        let h = self.histogram(polarity);
        (0..h.len())
            .rev()
            .flat_map(|k| std::iter::repeat_n(k as u32, h[k] as usize))
            .collect()
    }
}

fn weighted_sum(h: &[u64]) -> u64 {
    h.iter().enumerate().map(|(k, &c)| k as u64 * c).sum()
}

/// Per-polarity signatures from a single-polarity scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarityProfile {
    pub polarity: Polarity,
    pub s: u32,
    pub sum: u64,
    pub histogram: Vec<u64>,
}

pub fn local_sensitivity(tt: &TruthTable, w: Word) -> Result<u32> {
    let here = tt.evaluate(w)?;
    Ok((0..tt.arity())
        .filter(|&i| tt.bit(w.flip(i).0 as usize) != here)
        .count() as u32)
}

/// Full profile with the default 64-bit packing.
pub fn compute_profile(tt: &TruthTable) -> SensitivityProfile {
    compute_profile_with(tt, WordWidth::W64)
}

pub fn compute_profile_with(tt: &TruthTable, width: WordWidth) -> SensitivityProfile {
    let n = tt.arity();
    let (osv0, osv1) = match width {
        WordWidth::W64 => scan(n, tt.words(), tt.valid_mask()),
        WordWidth::W32 => {
            let chunks = split_u32(tt);
            let valid = if n >= 5 {
                u32::MAX
            } else {
                tt.valid_mask() as u32
            };
            scan(n, &chunks, valid)
        }
    };
    SensitivityProfile::from_histograms(n, osv0, osv1)
}

/// The table viewed as 32-bit chunks, `max(2^n / 32, 1)` of them.
fn split_u32(tt: &TruthTable) -> Vec<u32> {
    let len = (tt.num_bits() / 32).max(1);
    (0..len)
        .map(|c| (tt.words()[c / 2] >> (32 * (c % 2))) as u32)
        .collect()
}

trait Lane:
    Copy
    + Eq
    + BitAnd<Output = Self>
    + BitOr<Output = Self>
    + BitXor<Output = Self>
    + Not<Output = Self>
    + Shl<u32, Output = Self>
    + Shr<u32, Output = Self>
{
    const LOG_BITS: usize;
    const ZERO: Self;
    fn lo_mask(var: usize) -> Self;
    fn ones(self) -> u64;
}

impl Lane for u64 {
    const LOG_BITS: usize = 6;
    const ZERO: Self = 0;
    fn lo_mask(var: usize) -> Self {
        LO_MASKS[var]
    }
    fn ones(self) -> u64 {
        u64::from(self.count_ones())
    }
}

impl Lane for u32 {
    const LOG_BITS: usize = 5;
    const ZERO: Self = 0;
    fn lo_mask(var: usize) -> Self {
        LO_MASKS[var] as u32
    }
    fn ones(self) -> u64 {
        u64::from(self.count_ones())
    }
}

/// Bits needed to count up to `n`.
fn counter_bits(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// `D_i` for chunk `c`: lanes where flipping variable `var` changes the output.
#[inline]
fn sensitive_lanes<L: Lane>(chunks: &[L], c: usize, var: usize) -> L {
    let t = chunks[c];
    if var < L::LOG_BITS {
        let s = 1u32 << var;
        let lo = L::lo_mask(var);
        t ^ (((t & lo) << s) | ((t >> s) & lo))
    } else {
        t ^ chunks[c ^ (1 << (var - L::LOG_BITS))]
    }
}

/// Adds the `n` sensitivity masks of chunk `c` into bit-sliced counters.
#[inline]
fn count_chunk<L: Lane>(chunks: &[L], c: usize, n: usize, counter: &mut [L]) {
    counter.iter_mut().for_each(|b| *b = L::ZERO);
    for var in 0..n {
        let mut carry = sensitive_lanes(chunks, c, var);
        for slice in counter.iter_mut() {
            let next = *slice & carry;
            *slice = *slice ^ carry;
            carry = next;
            if carry == L::ZERO {
                break;
            }
        }
    }
}

/// Lanes whose counter equals `k`.
#[inline]
fn level_lanes<L: Lane>(counter: &[L], k: usize, valid: L) -> L {
    counter.iter().enumerate().fold(valid, |acc, (b, &slice)| {
        if (k >> b) & 1 == 1 {
            acc & slice
        } else {
            acc & !slice
        }
    })
}

fn scan<L: Lane>(n: usize, chunks: &[L], valid: L) -> (Vec<u64>, Vec<u64>) {
    let mut osv0 = vec![0u64; n + 1];
    let mut osv1 = vec![0u64; n + 1];
    let mut counter = vec![L::ZERO; counter_bits(n)];
    for c in 0..chunks.len() {
        count_chunk(chunks, c, n, &mut counter);
        let on = chunks[c];
        for k in 0..=n {
            let eq = level_lanes(&counter, k, valid);
            let ones = (eq & on).ones();
            osv1[k] += ones;
            osv0[k] += eq.ones() - ones;
        }
    }
    (osv0, osv1)
}

/// Single-polarity scan in the style of a lowest-one walk: packed words with
/// no selected bits are skipped wholesale, and each selected word has its
/// `n` neighbours tested.
pub fn polarity_profile(tt: &TruthTable, polarity: Polarity) -> PolarityProfile {
    let n = tt.arity();
    let valid = tt.valid_mask();
    let words = tt.words();
    let mut histogram = vec![0u64; n + 1];
    let bit = |x: usize| (words[x >> 6] >> (x & 63)) & 1;
    for (idx, &w) in words.iter().enumerate() {
        let mut v = match polarity {
            Polarity::All => valid,
            Polarity::Onset => w,
            Polarity::Offset => !w & valid,
        };
        let base = idx << 6;
        while v != 0 {
            let x = base + v.trailing_zeros() as usize;
            v &= v - 1;
            let here = bit(x);
            let ss = (0..n).filter(|&i| bit(x ^ (1 << i)) != here).count();
            histogram[ss] += 1;
        }
    }
    PolarityProfile {
        polarity,
        s: histogram.iter().rposition(|&c| c > 0).unwrap_or(0) as u32,
        sum: weighted_sum(&histogram),
        histogram,
    }
}

/// Largest arity accepted by [`naive_profile`].
pub const NAIVE_MAX_ARITY: usize = 16;

/// Reference profile evaluated bit by bit from the definition.
pub fn naive_profile(tt: &TruthTable) -> Result<SensitivityProfile> {
    let n = tt.arity();
    if n > NAIVE_MAX_ARITY {
        return Err(Error::ArityOutOfRange {
            n,
            max: NAIVE_MAX_ARITY,
        });
    }
    let values: Vec<bool> = (0..tt.num_bits()).map(|x| tt.bit(x)).collect();
    let mut osv0 = vec![0u64; n + 1];
    let mut osv1 = vec![0u64; n + 1];
    for (x, &fx) in values.iter().enumerate() {
        let mut s = 0;
        for i in 0..n {
            if values[x ^ (1 << i)] != fx {
                s += 1;
            }
        }
        if fx {
            osv1[s] += 1;
        } else {
            osv0[s] += 1;
        }
    }
    Ok(SensitivityProfile::from_histograms(n, osv0, osv1))
}

/// Per-word sensitivities of one function, kept in bit-sliced form so that
/// the set of words at a given level can be extracted as a packed mask.
#[derive(Debug, Clone)]
pub struct SensitivityMap {
    n: usize,
    table: TruthTable,
    bits: usize,
    /// `slices[w * bits + b]` is bit `b` of the counters of packed word `w`.
    slices: Vec<u64>,
}

impl SensitivityMap {
    pub fn new(tt: &TruthTable) -> Self {
        let n = tt.arity();
        let words = tt.words();
        let bits = counter_bits(n);
        let mut slices = vec![0u64; words.len() * bits];
        for (c, counter) in slices.chunks_exact_mut(bits).enumerate() {
            count_chunk(words, c, n, counter);
        }
        SensitivityMap {
            n,
            table: tt.clone(),
            bits,
            slices,
        }
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn local(&self, w: Word) -> u32 {
        let x = w.0 as usize;
        self.slices[(x >> 6) * self.bits..][..self.bits]
            .iter()
            .enumerate()
            .map(|(b, s)| (((s >> (x & 63)) & 1) as u32) << b)
            .sum()
    }

    /// Packed mask of the words with sensitivity exactly `k` and the given polarity.
    pub fn level_mask(&self, k: usize, polarity: Polarity) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        self.level_mask_into(k, polarity, &mut out)?;
        Ok(out)
    }

    /// [`SensitivityMap::level_mask`] into a caller-owned buffer.
    pub fn level_mask_into(&self, k: usize, polarity: Polarity, out: &mut Vec<u64>) -> Result<()> {
        if k > self.n {
            return Err(Error::LevelOutOfRange { k, n: self.n });
        }
        let valid = self.table.valid_mask();
        out.clear();
        out.extend(
            self.table
                .words()
                .iter()
                .zip(self.slices.chunks_exact(self.bits))
                .map(|(&on, counter)| {
                    let eq = counter.iter().enumerate().fold(valid, |acc, (b, &s)| {
                        if (k >> b) & 1 == 1 {
                            acc & s
                        } else {
                            acc & !s
                        }
                    });
                    match polarity {
                        Polarity::All => eq,
                        Polarity::Onset => eq & on,
                        Polarity::Offset => eq & !on,
                    }
                }),
        );
        Ok(())
    }

    /// The profile of the mapped function, read off the stored counters.
    pub fn profile(&self) -> SensitivityProfile {
        let mut osv0 = vec![0u64; self.n + 1];
        let mut osv1 = vec![0u64; self.n + 1];
        let valid = self.table.valid_mask();
        for (&on, counter) in self
            .table
            .words()
            .iter()
            .zip(self.slices.chunks_exact(self.bits))
        {
            for k in 0..=self.n {
                let eq = counter.iter().enumerate().fold(valid, |acc, (b, &s)| {
                    if (k >> b) & 1 == 1 {
                        acc & s
                    } else {
                        acc & !s
                    }
                });
                osv0[k] += u64::from((eq & !on).count_ones());
                osv1[k] += u64::from((eq & on).count_ones());
            }
        }
        SensitivityProfile::from_histograms(self.n, osv0, osv1)
    }
}
