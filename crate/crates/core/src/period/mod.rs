//! Rank-1 period certification.
//!
//! A cyclically reduced word of length at least two is certified when it is
//! neither a product of two involutions nor contains a 9-power of a shorter
//! word (read cyclically at syllable level). Certification is a sufficient
//! condition only: an uncertified word is not shown to be non-periodic.

pub mod repeat;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::{CyclicWord, FactorFamily, Syllable, TwoInvolutionWitness, Word};

pub use repeat::{nine_power_runs, nine_power_scan, NinePower};

/// Default cap on search nodes visited by [`enumerate_certified`].
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Outcome of the rank-1 criterion. Each exclusion carries its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodClass {
    /// The cyclic core has at most one syllable.
    TooShort,
    /// Only produced by [`classify_exact`]; [`classify_rank1`] reduces first.
    NotCyclicallyReduced,
    ProductOfTwoInvolutions(TwoInvolutionWitness),
    ContainsNinePower(NinePower),
    CertifiedRank1,
}

impl PeriodClass {
    pub fn tag(&self) -> &'static str {
        match self {
            PeriodClass::TooShort => "TooShort",
            PeriodClass::NotCyclicallyReduced => "NotCyclicallyReduced",
            PeriodClass::ProductOfTwoInvolutions(_) => "ProductOfTwoInvolutions",
            PeriodClass::ContainsNinePower(_) => "ContainsNinePower",
            PeriodClass::CertifiedRank1 => "CertifiedRank1",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, PeriodClass::CertifiedRank1)
    }
}

impl fmt::Display for PeriodClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    /// The cyclic core that was classified.
    pub core: Word,
    pub class: PeriodClass,
}

/// Cyclic 9-power search over the syllables of `word`, dispatching to the
/// per-period scan or, with the `runs` feature, to the segment finder.
pub fn find_nine_power(word: &CyclicWord) -> Option<NinePower> {
    find_nine_power_in(word.word().syllables())
}

pub fn find_nine_power_in(syllables: &[Syllable]) -> Option<NinePower> {
    if cfg!(feature = "runs") {
        nine_power_runs(syllables)
    } else {
        nine_power_scan(syllables)
    }
}

/// Classifies the cyclic core of `word`.
pub fn classify_rank1(word: &Word) -> Classification {
    let core = CyclicWord::from_core(word);
    let class = classify_cyclic(&core);
    Classification {
        core: core.word().clone(),
        class,
    }
}

/// Classifies `word` as given, without conjugating it first.
pub fn classify_exact(word: &Word) -> PeriodClass {
    if word.len() <= 1 {
        return PeriodClass::TooShort;
    }
    match CyclicWord::new(word.clone()) {
        Ok(cw) => classify_cyclic(&cw),
        Err(_) => PeriodClass::NotCyclicallyReduced,
    }
}

pub fn classify_cyclic(word: &CyclicWord) -> PeriodClass {
    if word.len() <= 1 {
        return PeriodClass::TooShort;
    }
    if let Some(w) = word.two_involution_witness() {
        return PeriodClass::ProductOfTwoInvolutions(w);
    }
    debug_assert!(
        word.word().syllables().windows(2).all(|p| p[0] != p[1]),
        "alternating words have no period-1 runs"
    );
    if let Some(hit) = find_nine_power(word) {
        return PeriodClass::ContainsNinePower(hit);
    }
    PeriodClass::CertifiedRank1
}

/// A defining relation `Aⁿ = 1` for a certified period `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub period: CyclicWord,
    pub exponent: u64,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^{} = 1", self.period.word(), self.exponent)
    }
}

pub fn relation_for(period: &CyclicWord) -> Result<Relation> {
    match classify_cyclic(period) {
        PeriodClass::CertifiedRank1 => Ok(Relation {
            period: period.clone(),
            exponent: period.word().family().n(),
        }),
        other => Err(Error::NotCertified(format!(
            "{} is {}",
            period.word().to_literal(),
            other.tag()
        ))),
    }
}

/// Canonical representatives of certified rank-1 periods with at most
/// `max_syllables` syllables, one per rotation class, in length-then-lex
/// order. Yields `Err(BoundExceeded)` once, then stops, if the search visits
/// more than `node_budget` nodes.
pub fn enumerate_certified(
    family: &Arc<FactorFamily>,
    max_syllables: usize,
    node_budget: u64,
) -> Result<CertifiedPeriods> {
    if max_syllables < 2 {
        return Err(Error::BadReference(format!(
            "max syllables must be at least 2, got {max_syllables}"
        )));
    }
    Ok(CertifiedPeriods {
        family: Arc::clone(family),
        alphabet: family.alphabet(),
        max_syllables,
        length: 2,
        stack: Vec::new(),
        started: false,
        nodes: 0,
        node_budget,
        done: false,
    })
}

/// Depth-first necklace search; see [`enumerate_certified`].
pub struct CertifiedPeriods {
    family: Arc<FactorFamily>,
    alphabet: Vec<Syllable>,
    max_syllables: usize,
    length: usize,
    /// Alphabet indices of the current prefix.
    stack: Vec<usize>,
    started: bool,
    nodes: u64,
    node_budget: u64,
    done: bool,
}

impl CertifiedPeriods {
    pub fn nodes_visited(&self) -> u64 {
        self.nodes
    }

    fn syllable(&self, depth: usize) -> Syllable {
        self.alphabet[self.stack[depth]]
    }

    /// No proper rotation of the prefix can start lower than the prefix
    /// itself.
    fn prefix_can_be_canonical(&self) -> bool {
        let n = self.stack.len();
        (1..n).all(|i| {
            let tail = &self.stack[i..];
            tail >= &self.stack[..tail.len()]
        })
    }

    fn admissible(&self) -> bool {
        let n = self.stack.len();
        if n >= 2 && self.syllable(n - 1).factor == self.syllable(n - 2).factor {
            return false;
        }
        if n == self.length && self.syllable(0).factor == self.syllable(n - 1).factor {
            return false;
        }
        self.prefix_can_be_canonical()
    }

    /// Advances to the next admissible node in depth-first order. Returns
    /// false when the current length is exhausted.
    fn step(&mut self) -> bool {
        if !self.started {
            self.started = true;
            self.stack.push(0);
        } else if self.stack.len() < self.length && self.admissible() {
            self.stack.push(0);
        } else {
            loop {
                match self.stack.last_mut() {
                    None => return false,
                    Some(top) if *top + 1 < self.alphabet.len() => {
                        *top += 1;
                        break;
                    }
                    Some(_) => {
                        self.stack.pop();
                    }
                }
            }
        }
        true
    }
}

impl Iterator for CertifiedPeriods {
    type Item = Result<CyclicWord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            if !self.step() {
                self.length += 1;
                self.started = false;
                if self.length > self.max_syllables {
                    self.done = true;
                    return None;
                }
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_budget {
                self.done = true;
                return Some(Err(Error::BoundExceeded(format!(
                    "period enumeration exceeded the node budget of {}",
                    self.node_budget
                ))));
            }
            if self.stack.len() != self.length || !self.admissible() {
                continue;
            }
            let syllables = self.stack.iter().map(|&i| self.alphabet[i]).collect();
            let word =
                Word::from_syllables(&self.family, syllables).expect("enumerated words alternate");
            let cw = CyclicWord::new(word).expect("enumerated words are cyclically reduced");
            if !cw.is_canonical() {
                continue;
            }
            if classify_cyclic(&cw).is_certified() {
                return Some(Ok(cw));
            }
        }
    }
}
