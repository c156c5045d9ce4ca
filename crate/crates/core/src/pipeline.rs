//! The four-phase matcher and batch classification.
//!
//! Phase 1 compares minterm counts, phase 2 the basic sensitivity
//! signatures, phase 3 (optional) the K-sensitivity domain invariants, and
//! phase 4 decides exactly through canonical forms. Each function's
//! signatures are computed on first use and cached.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use crate::canon::{canonical_form, witness_between, CanonicalForm, MAX_CANON_ARITY};
use crate::error::{Error, Result};
use crate::pruning::{advanced_phase, basic_phase, pairings, PruneConfig, PruneVerdict, Signature};
use crate::sensitivity::{compute_profile_with, SensitivityMap, SensitivityProfile};
use crate::truth_table::{NpnTransform, TruthTable, WordWidth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    P1,
    P2,
    P3,
    P4,
}

impl Phase {
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    pub equivalent: bool,
    /// Maps `f` onto `g` when equivalent.
    pub witness: Option<NpnTransform>,
    pub resolved_phase: Phase,
    pub rejecting_signature: Option<Signature>,
    /// Wall time spent in each phase, indexed by [`Phase::index`].
    pub phase_times: [Duration; 4],
    /// Neither phase 1 nor phase 2 rejected the pair.
    pub survived_p2: bool,
    /// Additionally not rejected by phase 3 (equal to `survived_p2` when
    /// phase 3 is disabled).
    pub survived_p3: bool,
}

/// Lazily computed signatures of one function. Safe to share across threads.
#[derive(Debug)]
pub struct FunctionSignatures {
    table: TruthTable,
    minterms: u64,
    profile: OnceLock<SensitivityProfile>,
    map: OnceLock<SensitivityMap>,
    canon: OnceLock<CanonicalForm>,
}

impl FunctionSignatures {
    pub fn new(table: TruthTable) -> Self {
        FunctionSignatures {
            minterms: table.minterm_count(),
            table,
            profile: OnceLock::new(),
            map: OnceLock::new(),
            canon: OnceLock::new(),
        }
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn minterms(&self) -> u64 {
        self.minterms
    }

    /// The packing width only affects speed, so one cached profile serves
    /// all widths. If the map is already built the profile is read off it.
    pub fn profile(&self, width: WordWidth) -> &SensitivityProfile {
        self.profile.get_or_init(|| match self.map.get() {
            Some(map) => map.profile(),
            None => compute_profile_with(&self.table, width),
        })
    }

    pub fn map(&self) -> &SensitivityMap {
        self.map.get_or_init(|| SensitivityMap::new(&self.table))
    }

    pub fn canonical(&self) -> Result<&CanonicalForm> {
        let n = self.table.arity();
        if n > MAX_CANON_ARITY {
            return Err(Error::ArityOutOfRange {
                n,
                max: MAX_CANON_ARITY,
            });
        }
        Ok(self
            .canon
            .get_or_init(|| canonical_form(&self.table).expect("arity checked above")))
    }
}

pub fn match_pair(f: &TruthTable, g: &TruthTable, cfg: &PruneConfig) -> Result<MatchOutcome> {
    match_signatures(
        &FunctionSignatures::new(f.clone()),
        &FunctionSignatures::new(g.clone()),
        cfg,
    )
}

pub fn match_signatures(
    a: &FunctionSignatures,
    b: &FunctionSignatures,
    cfg: &PruneConfig,
) -> Result<MatchOutcome> {
    cfg.validate()?;
    let n = a.table.arity();
    if n != b.table.arity() {
        return Err(Error::ArityMismatch {
            left: n,
            right: b.table.arity(),
        });
    }
    let mut times = [Duration::ZERO; 4];
    let reject = |phase: Phase, sig: Signature, times: [Duration; 4]| MatchOutcome {
        equivalent: false,
        witness: None,
        resolved_phase: phase,
        rejecting_signature: Some(sig),
        phase_times: times,
        survived_p2: false,
        survived_p3: false,
    };

    let start = Instant::now();
    let open = pairings(n, a.minterms, b.minterms);
    times[0] = start.elapsed();
    if cfg.use_minterm && open.is_empty() {
        return Ok(reject(Phase::P1, Signature::Minterm, times));
    }

    let mut open = open;
    if cfg.use_basic {
        let start = Instant::now();
        if cfg.use_advanced {
            // phase 3 needs the per-word counters; one scan serves both phases
            a.map();
            b.map();
        }
        let (pa, pb) = (a.profile(cfg.width), b.profile(cfg.width));
        let (verdict, left) = basic_phase(pa, pb, &open, cfg.polarity_rule)?;
        times[1] = start.elapsed();
        if let PruneVerdict::Mismatch(sig) = verdict {
            return Ok(reject(Phase::P2, sig, times));
        }
        open = left;
    }

    if cfg.use_advanced {
        let start = Instant::now();
        let (pa, pb) = (a.profile(cfg.width), b.profile(cfg.width));
        let (verdict, _) = advanced_phase(a.map(), b.map(), pa, pb, &open, cfg)?;
        times[2] = start.elapsed();
        if let PruneVerdict::Mismatch(sig) = verdict {
            let mut out = reject(Phase::P3, sig, times);
            out.survived_p2 = true;
            return Ok(out);
        }
    }

    let start = Instant::now();
    let witness = witness_between(a.canonical()?, b.canonical()?)?;
    times[3] = start.elapsed();
    debug_assert!(witness
        .as_ref()
        .is_none_or(|w| a.table.apply(w).ok().as_ref() == Some(&b.table)));
    Ok(MatchOutcome {
        equivalent: witness.is_some(),
        witness,
        resolved_phase: Phase::P4,
        rejecting_signature: None,
        phase_times: times,
        survived_p2: true,
        survived_p3: true,
    })
}

/// A batch of functions with per-function signature caches.
#[derive(Debug)]
pub struct SignatureCache {
    entries: Vec<FunctionSignatures>,
}

impl SignatureCache {
    pub fn new(functions: &[TruthTable]) -> Self {
        SignatureCache {
            entries: functions
                .iter()
                .cloned()
                .map(FunctionSignatures::new)
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &FunctionSignatures {
        &self.entries[i]
    }

    pub fn match_indices(&self, i: usize, j: usize, cfg: &PruneConfig) -> Result<MatchOutcome> {
        match_signatures(&self.entries[i], &self.entries[j], cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpnClass {
    pub canon: TruthTable,
    /// Input indices, ascending.
    pub members: Vec<usize>,
    /// `witnesses[m]` maps `functions[members[m]]` onto `canon`.
    pub witnesses: Vec<NpnTransform>,
}

/// How the pruning phases fare on pairs of representatives of distinct classes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseStats {
    pub probe_pairs: u64,
    pub rejected_p1: u64,
    pub rejected_p2: u64,
    pub rejected_p3: u64,
    /// Probe pairs only the exact check could separate.
    pub reached_p4: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    /// Classes in order of first appearance.
    pub classes: Vec<NpnClass>,
    /// Class index of every input function.
    pub class_of: Vec<usize>,
    pub stats: PhaseStats,
}

/// Upper bound on representative pairs probed for [`PhaseStats`].
pub const MAX_PROBE_PAIRS: usize = 20_000;

pub fn classify(functions: &[TruthTable], cfg: &PruneConfig) -> Result<ClassPartition> {
    cfg.validate()?;
    if let Some(first) = functions.first() {
        if let Some(bad) = functions.iter().find(|t| t.arity() != first.arity()) {
            return Err(Error::ArityMismatch {
                left: first.arity(),
                right: bad.arity(),
            });
        }
    }
    let cache = SignatureCache::new(functions);
    let mut index: HashMap<TruthTable, usize> = HashMap::new();
    let mut classes: Vec<NpnClass> = Vec::new();
    let mut class_of = Vec::with_capacity(functions.len());
    for i in 0..cache.len() {
        let cf = cache.get(i).canonical()?;
        let c = *index.entry(cf.canon.clone()).or_insert_with(|| {
            classes.push(NpnClass {
                canon: cf.canon.clone(),
                members: Vec::new(),
                witnesses: Vec::new(),
            });
            classes.len() - 1
        });
        classes[c].members.push(i);
        classes[c].witnesses.push(cf.witness.clone());
        class_of.push(c);
    }

    let mut stats = PhaseStats::default();
    let reps: Vec<usize> = classes.iter().map(|c| c.members[0]).collect();
    'probe: for (x, &i) in reps.iter().enumerate() {
        for &j in &reps[x + 1..] {
            if stats.probe_pairs as usize >= MAX_PROBE_PAIRS {
                break 'probe;
            }
            let out = cache.match_indices(i, j, cfg)?;
            stats.probe_pairs += 1;
            match out.resolved_phase {
                Phase::P1 => stats.rejected_p1 += 1,
                Phase::P2 => stats.rejected_p2 += 1,
                Phase::P3 => stats.rejected_p3 += 1,
                Phase::P4 => stats.reached_p4 += 1,
            }
        }
    }

    Ok(ClassPartition {
        classes,
        class_of,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pruning::PolarityRule;
    use crate::truth_table::TextFormat;

    fn tt(s: &str) -> TruthTable {
        TruthTable::parse(s, TextFormat::Binary).unwrap()
    }

    #[test]
    fn and_vs_parity_resolves_at_minterms() {
        let out = match_pair(&tt("00000001"), &tt("01101001"), &PruneConfig::default()).unwrap();
        assert!(!out.equivalent);
        assert_eq!(out.resolved_phase, Phase::P1);
        assert_eq!(out.rejecting_signature, Some(Signature::Minterm));
        assert!(!out.survived_p2);
    }

    #[test]
    fn two_minterm_classes_resolve_at_phase_three_with_selected_polarity_only() {
        let cfg = PruneConfig {
            polarity_rule: PolarityRule::SelectedOnly,
            ..Default::default()
        };
        let out = match_pair(&tt("01000001"), &tt("10000001"), &cfg).unwrap();
        assert_eq!(out.resolved_phase, Phase::P3);
        assert_eq!(out.rejecting_signature, Some(Signature::Hamming));
        assert!(out.survived_p2 && !out.survived_p3);
        // the unrestricted histogram already separates them
        let out = match_pair(&tt("01000001"), &tt("10000001"), &PruneConfig::default()).unwrap();
        assert_eq!(out.resolved_phase, Phase::P2);
    }

    #[test]
    fn equivalent_pair_reaches_phase_four_with_witness() {
        let f = tt("0001011101111111");
        let t = NpnTransform::new(vec![2, 0, 3, 1], 0b0110, true).unwrap();
        let g = f.apply(&t).unwrap();
        let out = match_pair(&f, &g, &PruneConfig::default()).unwrap();
        assert!(out.equivalent);
        assert_eq!(out.resolved_phase, Phase::P4);
        assert_eq!(f.apply(out.witness.as_ref().unwrap()).unwrap(), g);
        assert!(out.survived_p2 && out.survived_p3);
    }

    #[test]
    fn classify_three_inputs() {
        let all: Vec<_> = (0..256u64)
            .map(|b| TruthTable::from_u64(3, b).unwrap())
            .collect();
        let part = classify(&all, &PruneConfig::default()).unwrap();
        assert_eq!(part.classes.len(), 14);
        for class in &part.classes {
            for (m, w) in class.members.iter().zip(&class.witnesses) {
                assert_eq!(all[*m].apply(w).unwrap(), class.canon);
            }
        }
        assert_eq!(part.stats.probe_pairs, 14 * 13 / 2);
        assert_eq!(part.stats.reached_p4, 0);
    }

    #[test]
    fn classify_rejects_mixed_arity() {
        let mixed = vec![tt("0110"), tt("01101001")];
        assert!(matches!(
            classify(&mixed, &PruneConfig::default()),
            Err(Error::ArityMismatch { left: 2, right: 3 })
        ));
        assert!(classify(&[], &PruneConfig::default())
            .unwrap()
            .classes
            .is_empty());
    }
}
