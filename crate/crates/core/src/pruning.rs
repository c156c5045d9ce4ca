//! Signature-based rejection of non-equivalent pairs.
//!
//! Sensitivity signatures are invariant under input negation and
//! permutation only. Output negation is handled by pairing polarities: the
//! hypothesis "g is f with its output negated" compares f's onset signatures
//! with g's offset signatures and vice versa. A pair is rejected only when
//! every hypothesis left open by the minterm counts is rejected.

use crate::domain::{compare_summaries, k_summary_from_map, KComparison, KInvariant};
use crate::error::{Error, Result};
use crate::sensitivity::{Polarity, SensitivityMap, SensitivityProfile};
use crate::truth_table::{TruthTable, WordWidth};

/// The signature comparison that rejected a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signature {
    Minterm,
    Sensitivity,
    Average,
    Osv,
    EdgeCount,
    Hamming,
}

impl Signature {
    pub fn name(self) -> &'static str {
        match self {
            Signature::Minterm => "minterm",
            Signature::Sensitivity => "s",
            Signature::Average => "average",
            Signature::Osv => "osv",
            Signature::EdgeCount => "edge_count",
            Signature::Hamming => "hamming",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PruneVerdict {
    /// The functions are certainly not equivalent.
    Mismatch(Signature),
    /// No signature told them apart.
    Unknown,
}

impl PruneVerdict {
    pub fn is_mismatch(self) -> bool {
        matches!(self, PruneVerdict::Mismatch(_))
    }

    pub fn signature(self) -> Option<Signature> {
        match self {
            PruneVerdict::Mismatch(s) => Some(s),
            PruneVerdict::Unknown => None,
        }
    }
}

/// How phases 2 and 3 pick the polarities they compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PolarityRule {
    /// Minority-polarity signatures first, then the unrestricted ones.
    #[default]
    SelectedThenAll,
    /// Minority-polarity signatures only.
    SelectedOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneConfig {
    /// Sensitivity levels examined by advanced pruning.
    pub max_iter: usize,
    pub use_minterm: bool,
    pub use_basic: bool,
    pub use_advanced: bool,
    pub polarity_rule: PolarityRule,
    pub width: WordWidth,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            max_iter: 3,
            use_minterm: true,
            use_basic: true,
            use_advanced: true,
            polarity_rule: PolarityRule::default(),
            width: WordWidth::W64,
        }
    }
}

impl PruneConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }

    /// Only the exact check; every pruning phase disabled.
    pub fn exact_only() -> Self {
        PruneConfig {
            use_minterm: false,
            use_basic: false,
            use_advanced: false,
            ..Default::default()
        }
    }
}

/// Which polarity of each function a comparison reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pairing {
    pub f: Polarity,
    pub g: Polarity,
}

impl Pairing {
    /// Whether this pairing assumes the output is negated.
    pub fn negates_output(self) -> bool {
        self.f != self.g
    }
}

/// The output-polarity hypotheses consistent with the minterm counts, each
/// expressed as the pair of polarities to compare. Empty means no
/// hypothesis survives (the counts are incompatible).
pub fn pairings(n: usize, minterms_f: u64, minterms_g: u64) -> Vec<Pairing> {
    let total = 1u64 << n;
    let half = total / 2;
    let sel_f = if minterms_f <= half {
        Polarity::Onset
    } else {
        Polarity::Offset
    };
    let mut out = Vec::with_capacity(2);
    if minterms_g == minterms_f {
        out.push(Pairing { f: sel_f, g: sel_f });
    }
    if minterms_g == total - minterms_f {
        let p = Pairing {
            f: sel_f,
            g: sel_f.negated(),
        };
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Basic signatures with the same polarity on both sides.
pub fn basic_prune(
    pf: &SensitivityProfile,
    pg: &SensitivityProfile,
    polarity: Polarity,
) -> Result<PruneVerdict> {
    basic_prune_paired(
        pf,
        pg,
        Pairing {
            f: polarity,
            g: polarity,
        },
    )
}

/// Compares `s`, the exact sensitivity sum, then the histogram.
pub fn basic_prune_paired(
    pf: &SensitivityProfile,
    pg: &SensitivityProfile,
    pairing: Pairing,
) -> Result<PruneVerdict> {
    if pf.arity() != pg.arity() {
        return Err(Error::ArityMismatch {
            left: pf.arity(),
            right: pg.arity(),
        });
    }
    Ok(if pf.s_of(pairing.f) != pg.s_of(pairing.g) {
        PruneVerdict::Mismatch(Signature::Sensitivity)
    } else if pf.sum_of(pairing.f) != pg.sum_of(pairing.g) {
        PruneVerdict::Mismatch(Signature::Average)
    } else if pf.histogram(pairing.f) != pg.histogram(pairing.g) {
        PruneVerdict::Mismatch(Signature::Osv)
    } else {
        PruneVerdict::Unknown
    })
}

/// Result of advanced pruning plus the number of domains built per side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdvancedTrace {
    pub verdict: PruneVerdict,
    pub domains_per_side: usize,
}

/// Advanced signatures with the same polarity on both sides.
pub fn advanced_prune(
    f: &TruthTable,
    g: &TruthTable,
    pf: &SensitivityProfile,
    pg: &SensitivityProfile,
    cfg: &PruneConfig,
    polarity: Polarity,
) -> Result<PruneVerdict> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: g.arity(),
        });
    }
    let (fm, gm) = (SensitivityMap::new(f), SensitivityMap::new(g));
    Ok(advanced_prune_paired(
        &fm,
        &gm,
        pf,
        pg,
        cfg,
        Pairing {
            f: polarity,
            g: polarity,
        },
    )?
    .verdict)
}

/// Walks the distinct sensitivity levels present in the selected histogram
/// from the top down, at most `cfg.max_iter` of them, and compares the
/// graph invariants of the level's domains. Domains are built lazily.
pub fn advanced_prune_paired(
    fm: &SensitivityMap,
    gm: &SensitivityMap,
    pf: &SensitivityProfile,
    pg: &SensitivityProfile,
    cfg: &PruneConfig,
    pairing: Pairing,
) -> Result<AdvancedTrace> {
    cfg.validate()?;
    let n = fm.table().arity();
    if n != gm.table().arity() || pf.arity() != n || pg.arity() != n {
        return Err(Error::ArityMismatch {
            left: n,
            right: gm.table().arity(),
        });
    }
    let hist = pf.histogram(pairing.f);
    if hist != pg.histogram(pairing.g) {
        return Ok(AdvancedTrace {
            verdict: PruneVerdict::Mismatch(Signature::Osv),
            domains_per_side: 0,
        });
    }
    let levels = (0..hist.len())
        .rev()
        .filter(|&k| hist[k] > 0)
        .take(cfg.max_iter);
    let mut built = 0;
    let mut scratch = Vec::with_capacity(fm.table().words().len());
    for k in levels {
        let a = k_summary_from_map(fm, k, pairing.f, &mut scratch)?;
        let mut b = k_summary_from_map(gm, k, pairing.g, &mut scratch)?;
        if pairing.negates_output() {
            b = b.as_output_negated();
        }
        built += 1;
        let verdict = match compare_summaries(&a, &b)? {
            KComparison::Indistinguished => continue,
            KComparison::Distinguished(KInvariant::MemberCount) => {
                PruneVerdict::Mismatch(Signature::Osv)
            }
            KComparison::Distinguished(KInvariant::EdgeCount) => {
                PruneVerdict::Mismatch(Signature::EdgeCount)
            }
            KComparison::Distinguished(KInvariant::AverageHamming) => {
                PruneVerdict::Mismatch(Signature::Hamming)
            }
        };
        return Ok(AdvancedTrace {
            verdict,
            domains_per_side: built,
        });
    }
    Ok(AdvancedTrace {
        verdict: PruneVerdict::Unknown,
        domains_per_side: built,
    })
}

/// Phase 2 over a set of open hypotheses. Returns the verdict and the
/// hypotheses still open afterwards.
pub fn basic_phase(
    pf: &SensitivityProfile,
    pg: &SensitivityProfile,
    open: &[Pairing],
    rule: PolarityRule,
) -> Result<(PruneVerdict, Vec<Pairing>)> {
    let mut survivors = Vec::with_capacity(open.len());
    let mut first_reason = None;
    for &p in open {
        match basic_prune_paired(pf, pg, p)? {
            PruneVerdict::Unknown => survivors.push(p),
            PruneVerdict::Mismatch(s) => {
                first_reason.get_or_insert(s);
            }
        }
    }
    if survivors.is_empty() {
        return Ok((
            PruneVerdict::Mismatch(first_reason.unwrap_or(Signature::Minterm)),
            survivors,
        ));
    }
    if rule == PolarityRule::SelectedThenAll {
        let all = basic_prune(pf, pg, Polarity::All)?;
        if all.is_mismatch() {
            return Ok((all, Vec::new()));
        }
    }
    Ok((PruneVerdict::Unknown, survivors))
}

/// Phase 3 over the hypotheses left open by phase 2.
pub fn advanced_phase(
    fm: &SensitivityMap,
    gm: &SensitivityMap,
    pf: &SensitivityProfile,
    pg: &SensitivityProfile,
    open: &[Pairing],
    cfg: &PruneConfig,
) -> Result<(PruneVerdict, Vec<Pairing>)> {
    let mut survivors = Vec::with_capacity(open.len());
    let mut first_reason = None;
    for &p in open {
        match advanced_prune_paired(fm, gm, pf, pg, cfg, p)?.verdict {
            PruneVerdict::Unknown => survivors.push(p),
            PruneVerdict::Mismatch(s) => {
                first_reason.get_or_insert(s);
            }
        }
    }
    if survivors.is_empty() {
        return Ok((
            PruneVerdict::Mismatch(first_reason.unwrap_or(Signature::Minterm)),
            survivors,
        ));
    }
    if cfg.polarity_rule == PolarityRule::SelectedThenAll {
        let all = Pairing {
            f: Polarity::All,
            g: Polarity::All,
        };
        let v = advanced_prune_paired(fm, gm, pf, pg, cfg, all)?.verdict;
        if v.is_mismatch() {
            return Ok((v, Vec::new()));
        }
    }
    Ok((PruneVerdict::Unknown, survivors))
}
