//! Packed truth tables, input words and NPN transforms.
//!
//! Bit `i` of a table holds `f((i)_2)` where variable `x1` is the least
//! significant bit of the index. Bits are packed little-endian into `u64`
//! words: the low bit of word 0 is `f(0..0)`. The text formats read the
//! leftmost character as input index 0, so text position `p` is index `p`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported arity (2^20 bits, 16 Ki words).
pub const MAX_ARITY: usize = 20;

/// Positions whose bit `i` is zero, for the six in-word variables.
pub(crate) const LO_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// An input assignment `(x1, .., xn)`; `x1` is bit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub u32);

impl Word {
    /// The word with variable `var` (0-based) flipped.
    #[inline]
    pub fn flip(self, var: usize) -> Word {
        Word(self.0 ^ (1 << var))
    }

    #[inline]
    pub fn var(self, var: usize) -> bool {
        (self.0 >> var) & 1 == 1
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Text encoding of a truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TextFormat {
    /// One `0`/`1` character per input index.
    Binary,
    /// One hex digit per four input indices; the digit's most significant
    /// bit is the lowest of the four indices.
    Hex,
}

impl FromStr for TextFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "binary" | "bin" => Ok(TextFormat::Binary),
            "hex" => Ok(TextFormat::Hex),
            other => Err(Error::BadHeader(format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for TextFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TextFormat::Binary => "binary",
            TextFormat::Hex => "hex",
        })
    }
}

/// Packing width used by the sensitivity scans (the compression factor).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WordWidth {
    W32,
    #[default]
    W64,
}

impl WordWidth {
    pub fn bits(self) -> usize {
        match self {
            WordWidth::W32 => 32,
            WordWidth::W64 => 64,
        }
    }
}

impl FromStr for WordWidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "32" => Ok(WordWidth::W32),
            "64" => Ok(WordWidth::W64),
            other => Err(Error::Config(format!(
                "compression factor must be 32 or 64, got {other}"
            ))),
        }
    }
}

/// A completely specified single-output Boolean function of `n` inputs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Mask of the valid bits of the (single) word of an `n`-input table.
#[inline]
fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

fn check_arity(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ARITY {
        return Err(Error::ArityOutOfRange { n, max: MAX_ARITY });
    }
    Ok(())
}

impl TruthTable {
    /// The constant-0 function.
    pub fn zero(n: usize) -> Result<Self> {
        check_arity(n)?;
        Ok(TruthTable {
            n,
            words: vec![0; word_count(n)],
        })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        let t = Self::zero(n)?;
        Ok(if value { t.complement() } else { t })
    }

    /// Builds a table from a predicate over input indices.
    pub fn from_fn(n: usize, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        let mut t = Self::zero(n)?;
        for i in 0..(1u32 << n) {
            if f(i) {
                t.words[(i >> 6) as usize] |= 1 << (i & 63);
            }
        }
        Ok(t)
    }

    /// Builds a table from packed words; bits past `2^n` are cleared.
    pub fn from_words(n: usize, mut words: Vec<u64>) -> Result<Self> {
        check_arity(n)?;
        if words.len() != word_count(n) {
            return Err(Error::InvalidLength {
                len: words.len() * 64,
            });
        }
        words[0] &= if n < 6 { tail_mask(n) } else { u64::MAX };
        Ok(TruthTable { n, words })
    }

    /// Builds an arity-`n` table (n <= 6) from the low `2^n` bits of `bits`.
    pub fn from_u64(n: usize, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::ArityOutOfRange { n, max: 6 });
        }
        Self::from_words(n, vec![bits])
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Number of meaningful bits, `2^n`.
    #[inline]
    pub fn num_bits(&self) -> usize {
        1 << self.n
    }

    /// Mask of valid bits within each packed word (all ones for n >= 6).
    #[inline]
    pub fn valid_mask(&self) -> u64 {
        tail_mask(self.n)
    }

    /// Bit at input index `i`. Panics if `i >= 2^n`.
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        assert!(
            i < self.num_bits(),
            "index {i} out of range for arity {}",
            self.n
        );
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_bit(&mut self, i: usize, value: bool) {
        let m = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    pub fn evaluate(&self, w: Word) -> Result<bool> {
        if (w.0 as usize) >= self.num_bits() {
            return Err(Error::WordOutOfRange {
                word: w.0,
                n: self.n,
            });
        }
        Ok(self.bit(w.0 as usize))
    }

    /// `|f|`, the number of onset minterms.
    pub fn minterm_count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn complement(&self) -> TruthTable {
        let mask = self.valid_mask();
        TruthTable {
            n: self.n,
            words: self.words.iter().map(|w| !w & mask).collect(),
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.minterm_count() * 2 == self.num_bits() as u64
    }

    /// Replaces `x_var` by its complement.
    pub fn flip_var(&mut self, var: usize) {
        assert!(var < self.n);
        if var < 6 {
            let s = 1u32 << var;
            let lo = LO_MASKS[var];
            for w in &mut self.words {
                *w = ((*w & lo) << s) | ((*w >> s) & lo);
            }
        } else {
            let stride = 1usize << (var - 6);
            for k in 0..self.words.len() {
                if k & stride == 0 {
                    self.words.swap(k, k | stride);
                }
            }
        }
    }

    /// Exchanges the roles of variables `a` and `b`.
    pub fn swap_vars(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n);
        if a == b {
            return;
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if j < 6 {
            let shift = (1u32 << j) - (1u32 << i);
            let m = !LO_MASKS[i] & LO_MASKS[j];
            for w in &mut self.words {
                let t = ((*w >> shift) ^ *w) & m;
                *w ^= t ^ (t << shift);
            }
        } else if i < 6 {
            let s = 1u32 << i;
            let lo = LO_MASKS[i];
            let stride = 1usize << (j - 6);
            for k in 0..self.words.len() {
                if k & stride == 0 {
                    let (a, b) = (self.words[k], self.words[k | stride]);
                    self.words[k] = (a & lo) | ((b & lo) << s);
                    self.words[k | stride] = (b & !lo) | ((a & !lo) >> s);
                }
            }
        } else {
            let si = 1usize << (i - 6);
            let sj = 1usize << (j - 6);
            for k in 0..self.words.len() {
                if k & si != 0 && k & sj == 0 {
                    self.words.swap(k, k - si + sj);
                }
            }
        }
    }

    #[inline]
    pub fn swap_adjacent(&mut self, var: usize) {
        self.swap_vars(var, var + 1);
    }

    /// Applies an NPN transform: `g(x) = out ^ f(perm(x ^ neg))`.
    pub fn apply(&self, t: &NpnTransform) -> Result<TruthTable> {
        if t.arity() != self.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: t.arity(),
            });
        }
        let mut h = self.clone();
        // at[p] is the source variable currently sitting at position p; bubble
        // each source variable i towards its target position perm[i].
        let mut at: Vec<usize> = (0..self.n).collect();
        let n = self.n;
        for pass in 0..n {
            let mut swapped = false;
            for p in 0..n - 1 - pass.min(n - 1) {
                if t.perm[at[p]] > t.perm[at[p + 1]] {
                    h.swap_adjacent(p);
                    at.swap(p, p + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        for var in 0..n {
            if (t.input_neg >> var) & 1 == 1 {
                h.flip_var(var);
            }
        }
        if t.output_neg {
            h = h.complement();
        }
        Ok(h)
    }

    /// Lexicographic comparison of the text renderings (leftmost character
    /// most significant). Tables of different arity compare by arity.
    pub fn lex_cmp(&self, other: &TruthTable) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| lex_cmp_words(&self.words, &other.words))
    }

    /// Lexicographic comparison restricted to the first `bits` input indices.
    pub(crate) fn lex_cmp_prefix(&self, other: &TruthTable, bits: usize) -> Ordering {
        let full = bits / 64;
        let ord = lex_cmp_words(&self.words[..full], &other.words[..full]);
        if ord != Ordering::Equal || bits.is_multiple_of(64) {
            return ord;
        }
        let m = (1u64 << (bits % 64)) - 1;
        lex_cmp_words(&[self.words[full] & m], &[other.words[full] & m])
    }

    pub fn parse(text: &str, format: TextFormat) -> Result<Self> {
        let text = text.trim();
        let len = text.len();
        let bits_per_char = match format {
            TextFormat::Binary => 1,
            TextFormat::Hex => 4,
        };
        let total = len * bits_per_char;
        if len == 0
            || !total.is_power_of_two()
            || total < 2
            || (format == TextFormat::Hex && total < 4)
        {
            return Err(Error::InvalidLength { len });
        }
        let n = total.trailing_zeros() as usize;
        if n > MAX_ARITY {
            return Err(Error::ArityOutOfRange { n, max: MAX_ARITY });
        }
        let mut t = Self::zero(n)?;
        for (pos, ch) in text.chars().enumerate() {
            match format {
                TextFormat::Binary => match ch {
                    '0' => {}
                    '1' => t.set_bit(pos, true),
                    _ => return Err(Error::InvalidChar { ch, pos }),
                },
                TextFormat::Hex => {
                    let d = ch.to_digit(16).ok_or(Error::InvalidChar { ch, pos })?;
                    for k in 0..4 {
                        if (d >> (3 - k)) & 1 == 1 {
                            t.set_bit(4 * pos + k, true);
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn render(&self, format: TextFormat) -> String {
        match format {
            TextFormat::Binary => (0..self.num_bits())
                .map(|i| if self.bit(i) { '1' } else { '0' })
                .collect(),
            TextFormat::Hex => {
                if self.n < 2 {
                    // a single-variable table has no hex rendering; fall back
                    return self.render(TextFormat::Binary);
                }
                (0..self.num_bits() / 4)
                    .map(|p| {
                        let d =
                            (0..4).fold(0u32, |acc, k| acc << 1 | u32::from(self.bit(4 * p + k)));
                        char::from_digit(d, 16).unwrap()
                    })
                    .collect()
            }
        }
    }

    pub fn to_binary(&self) -> String {
        self.render(TextFormat::Binary)
    }

    pub fn to_hex(&self) -> String {
        self.render(TextFormat::Hex)
    }

    /// The binary text rendering packed eight characters per byte, leftmost
    /// character as the byte's most significant bit.
    pub fn text_bytes(&self) -> Vec<u8> {
        let bits = self.num_bits();
        (0..bits.div_ceil(8))
            .map(|b| {
                (0..8).fold(0u8, |acc, k| {
                    let i = 8 * b + k;
                    acc << 1 | u8::from(i < bits && self.bit(i))
                })
            })
            .collect()
    }
}

fn lex_cmp_words(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let d = x ^ y;
        if d != 0 {
            // lowest differing index decides; a 0 there is smaller
            return if (x >> d.trailing_zeros()) & 1 == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
    }
    Ordering::Equal
}

impl PartialOrd for TruthTable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TruthTable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, {})", self.n, self)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n < 8 {
            f.write_str(&self.to_binary())
        } else {
            f.write_str(&self.to_hex())
        }
    }
}

/// An element of the NPN group acting on `n`-input functions.
///
/// Applying it to `f` yields `g(x) = output_neg ^ f(u)` where
/// `u_i = (x ^ input_neg)_{perm[i]}`: source variable `i` is driven by
/// target variable `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NpnTransform {
    perm: Vec<u8>,
    input_neg: u32,
    output_neg: bool,
}

impl NpnTransform {
    pub fn identity(n: usize) -> Self {
        NpnTransform {
            perm: (0..n as u8).collect(),
            input_neg: 0,
            output_neg: false,
        }
    }

    pub fn new(perm: Vec<usize>, input_neg: u32, output_neg: bool) -> Result<Self> {
        let n = perm.len();
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange { n, max: MAX_ARITY });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation(perm.clone()));
            }
            seen[p] = true;
        }
        if n < 32 && input_neg >> n != 0 {
            return Err(Error::InvalidPermutation(perm.clone()));
        }
        Ok(NpnTransform {
            perm: perm.into_iter().map(|p| p as u8).collect(),
            input_neg,
            output_neg,
        })
    }

    /// Output negation only.
    pub fn output_negation(n: usize) -> Self {
        NpnTransform {
            output_neg: true,
            ..Self::identity(n)
        }
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> Vec<usize> {
        self.perm.iter().map(|&p| p as usize).collect()
    }

    #[inline]
    pub fn input_neg(&self) -> u32 {
        self.input_neg
    }

    #[inline]
    pub fn output_neg(&self) -> bool {
        self.output_neg
    }

    pub fn is_identity(&self) -> bool {
        self.input_neg == 0
            && !self.output_neg
            && self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    /// Maps a target-side word `x` to the source word fed to `f`.
    pub fn source_word(&self, x: Word) -> Word {
        let y = x.0 ^ self.input_neg;
        let u = self
            .perm
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &p)| acc | ((y >> p) & 1) << i);
        Word(u)
    }

    /// The transform equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &NpnTransform) -> Result<NpnTransform> {
        if self.arity() != next.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: next.arity(),
            });
        }
        let perm = self.perm.iter().map(|&p| next.perm[p as usize]).collect();
        // next.perm^{-1} applied to our mask: bit next.perm[i] of z is bit i of m
        let pulled = (0..self.arity()).fold(0u32, |acc, i| {
            acc | ((self.input_neg >> i) & 1) << next.perm[i]
        });
        Ok(NpnTransform {
            perm,
            input_neg: next.input_neg ^ pulled,
            output_neg: self.output_neg ^ next.output_neg,
        })
    }

    pub fn inverse(&self) -> NpnTransform {
        let n = self.arity();
        let mut perm = vec![0u8; n];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = i as u8;
        }
        let input_neg = (0..n).fold(0u32, |acc, i| {
            acc | ((self.input_neg >> self.perm[i]) & 1) << i
        });
        NpnTransform {
            perm,
            input_neg,
            output_neg: self.output_neg,
        }
    }
}

impl fmt::Display for NpnTransform {
    /// `perm=2,1,0 neg=5 out=0`, parseable by `FromStr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self.perm.iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "perm={} neg={} out={}",
            perm.join(","),
            self.input_neg,
            u8::from(self.output_neg)
        )
    }
}

impl FromStr for NpnTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadTransform(s.to_string());
        let (mut perm, mut neg, mut out) = (None, None, None);
        for field in s.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(bad)?;
            match key {
                "perm" => {
                    perm = Some(
                        value
                            .split(',')
                            .map(|p| p.parse::<usize>().map_err(|_| bad()))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "neg" => neg = Some(value.parse::<u32>().map_err(|_| bad())?),
                "out" => {
                    out = Some(match value {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad()),
                    })
                }
                _ => return Err(bad()),
            }
        }
        NpnTransform::new(
            perm.ok_or_else(bad)?,
            neg.unwrap_or(0),
            out.unwrap_or(false),
        )
    }
}

/// Parses a truth-table file: one function per line, optionally preceded by
/// a header line `n=<arity> format=<binary|hex>`. Without a header the
/// format is binary when every line consists of `0`/`1` only, else hex.
pub fn parse_table_file(text: &str) -> Result<Vec<TruthTable>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let mut header: Option<(Option<usize>, TextFormat)> = None;
    if let Some(&(lineno, first)) = lines.peek() {
        if first.starts_with("n=") || first.starts_with("format=") {
            header = Some(parse_header(first).map_err(|e| e.at_line(lineno))?);
            lines.next();
        }
    }
    let body: Vec<(usize, &str)> = lines.collect();
    let (arity, format) = match header {
        Some(h) => h,
        None => {
            let binary = body
                .iter()
                .all(|(_, l)| l.chars().all(|c| c == '0' || c == '1'));
            (
                None,
                if binary {
                    TextFormat::Binary
                } else {
                    TextFormat::Hex
                },
            )
        }
    };
    body.into_iter()
        .map(|(lineno, l)| {
            let t = TruthTable::parse(l, format).map_err(|e| e.at_line(lineno))?;
            match arity {
                Some(n) if n != t.arity() => Err(Error::ArityMismatch {
                    left: n,
                    right: t.arity(),
                }
                .at_line(lineno)),
                _ => Ok(t),
            }
        })
        .collect()
}

fn parse_header(line: &str) -> Result<(Option<usize>, TextFormat)> {
    let mut n = None;
    let mut format = None;
    for field in line.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => n = Some(v.parse().map_err(|_| Error::BadHeader(line.to_string()))?),
            Some(("format", v)) => format = Some(v.parse()?),
            _ => return Err(Error::BadHeader(line.to_string())),
        }
    }
    Ok((n, format.unwrap_or(TextFormat::Binary)))
}

/// Renders tables in the file format read by [`parse_table_file`], header included.
pub fn render_table_file(tables: &[TruthTable], format: TextFormat) -> String {
    let mut out = String::new();
    if let Some(first) = tables.first() {
        out.push_str(&format!("n={} format={}\n", first.arity(), format));
    }
    for t in tables {
        out.push_str(&t.render(format));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and3() -> TruthTable {
        TruthTable::parse("00000001", TextFormat::Binary).unwrap()
    }

    #[test]
    fn parse_packs_text_positions_as_indices() {
        let t = and3();
        assert_eq!(t.arity(), 3);
        for i in 0..8 {
            assert_eq!(t.evaluate(Word(i)).unwrap(), i == 7);
        }
        let zero = TruthTable::parse("0000", TextFormat::Binary).unwrap();
        assert_eq!(zero.arity(), 2);
        assert_eq!(zero.minterm_count(), 0);
    }

    #[test]
    fn worked_five_input_example_bytes() {
        let t = TruthTable::parse("11000100000101100011101100010110", TextFormat::Binary).unwrap();
        assert_eq!(t.arity(), 5);
        assert_eq!(t.text_bytes(), vec![196, 22, 59, 22]);
        assert_eq!(t.minterm_count(), 14);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            TruthTable::parse("010", TextFormat::Binary),
            Err(Error::InvalidLength { len: 3 })
        ));
        assert!(matches!(
            TruthTable::parse("0", TextFormat::Binary),
            Err(Error::InvalidLength { .. })
        ));
        assert!(matches!(
            TruthTable::parse("0120", TextFormat::Binary),
            Err(Error::InvalidChar { ch: '2', pos: 2 })
        ));
        assert!(matches!(
            TruthTable::parse("0g", TextFormat::Hex),
            Err(Error::InvalidChar { ch: 'g', .. })
        ));
        assert!(matches!(
            TruthTable::parse("000", TextFormat::Hex),
            Err(Error::InvalidLength { .. })
        ));
        let too_big = "0".repeat(1 << 19);
        assert!(matches!(
            TruthTable::parse(&too_big, TextFormat::Hex),
            Err(Error::ArityOutOfRange { n: 21, .. })
        ));
    }

    #[test]
    fn hex_matches_binary_transliteration() {
        let b = TruthTable::parse("0001100011111110", TextFormat::Binary).unwrap();
        let h = TruthTable::parse("18fe", TextFormat::Hex).unwrap();
        assert_eq!(b, h);
        assert_eq!(h.to_hex(), "18fe");
    }

    #[test]
    fn evaluate_out_of_range() {
        assert!(matches!(
            and3().evaluate(Word(8)),
            Err(Error::WordOutOfRange { word: 8, n: 3 })
        ));
    }

    #[test]
    fn swap_and_negation_transform() {
        // f = x1 x2 + x3, g = !x1 + x2 !x3, f(!x3, x2, !x1) = g(x1, x2, x3)
        let f = TruthTable::from_fn(3, |x| (x & 1 == 1 && x & 2 == 2) || x & 4 == 4).unwrap();
        let g = TruthTable::from_fn(3, |x| x & 1 == 0 || (x & 2 == 2 && x & 4 == 0)).unwrap();
        let t = NpnTransform::new(vec![2, 1, 0], 0b101, false).unwrap();
        assert_eq!(f.apply(&t).unwrap(), g);
    }

    #[test]
    fn output_negation_complements() {
        let t = and3().apply(&NpnTransform::output_negation(3)).unwrap();
        assert_eq!(t.to_binary(), "11111110");
        assert_eq!(t.minterm_count(), 7);
        assert_eq!(and3().apply(&NpnTransform::identity(3)).unwrap(), and3());
    }

    #[test]
    fn apply_rejects_arity_mismatch() {
        assert!(matches!(
            and3().apply(&NpnTransform::identity(4)),
            Err(Error::ArityMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn bad_permutations_rejected() {
        assert!(NpnTransform::new(vec![0, 0, 1], 0, false).is_err());
        assert!(NpnTransform::new(vec![0, 3, 1], 0, false).is_err());
        assert!(NpnTransform::new(vec![0, 1], 0b100, false).is_err());
    }

    #[test]
    fn transform_text_round_trip() {
        let t = NpnTransform::new(vec![3, 0, 2, 1], 0b1010, true).unwrap();
        let s = t.to_string();
        assert_eq!(s, "perm=3,0,2,1 neg=10 out=1");
        assert_eq!(s.parse::<NpnTransform>().unwrap(), t);
    }

    #[test]
    fn swaps_and_flips_match_pointwise_definition() {
        // n = 8 exercises in-word, mixed and whole-word paths
        let n = 8;
        let f = TruthTable::from_fn(n, |x| (x.wrapping_mul(2654435761) >> 13) & 1 == 1).unwrap();
        for a in 0..n {
            let mut g = f.clone();
            g.flip_var(a);
            for x in 0..(1u32 << n) {
                assert_eq!(g.bit(x as usize), f.bit((x ^ (1 << a)) as usize));
            }
            for b in 0..n {
                let mut g = f.clone();
                g.swap_vars(a, b);
                for x in 0..(1u32 << n) {
                    let xa = (x >> a) & 1;
                    let xb = (x >> b) & 1;
                    let y = (x & !(1 << a) & !(1 << b)) | (xa << b) | (xb << a);
                    assert_eq!(g.bit(x as usize), f.bit(y as usize), "swap {a} {b} at {x}");
                }
            }
        }
    }

    #[test]
    fn lex_order_reads_leftmost_first() {
        let a = TruthTable::parse("0111", TextFormat::Binary).unwrap();
        let b = TruthTable::parse("1000", TextFormat::Binary).unwrap();
        assert!(a < b);
        assert_eq!(a.lex_cmp_prefix(&b, 1), Ordering::Less);
        let c = TruthTable::parse("0110", TextFormat::Binary).unwrap();
        assert_eq!(a.lex_cmp_prefix(&c, 3), Ordering::Equal);
        assert!(c < a);
    }

    #[test]
    fn file_round_trip_with_and_without_header() {
        let tables: Vec<_> = (0..16u64)
            .map(|b| TruthTable::from_u64(2, b).unwrap())
            .collect();
        let text = render_table_file(&tables, TextFormat::Binary);
        assert!(text.starts_with("n=2 format=binary\n"));
        assert_eq!(parse_table_file(&text).unwrap(), tables);
        let bare: String = tables.iter().map(|t| t.to_binary() + "\n").collect();
        assert_eq!(parse_table_file(&bare).unwrap(), tables);
        let hex = render_table_file(&tables, TextFormat::Hex);
        assert_eq!(parse_table_file(&hex).unwrap(), tables);
    }

    #[test]
    fn file_errors_carry_line_numbers() {
        let err = parse_table_file("n=3 format=binary\n00000001\n0001\n").unwrap_err();
        assert!(matches!(err, Error::Line { line: 3, .. }), "{err:?}");
        assert!(parse_table_file("n=3 format=octal\n").is_err());
    }
}
