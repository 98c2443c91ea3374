//! Two-involution scans: build products `c·d` of conjugated factor
//! involutions and check that every product with a cyclic core of length at
//! least two carries a verified witness.

use std::sync::Arc;

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::group::FiniteGroup;
use crate::word::{CyclicWord, FactorFamily, Mode, Syllable, Word};

/// `Z₂ * S₃` and `Z₂ * Z₆`.
pub fn default_families() -> Result<Vec<Arc<FactorFamily>>> {
    let make = |g2: FiniteGroup| {
        FactorFamily::new(
            vec![("g1".into(), FiniteGroup::cyclic(2)?), ("g2".into(), g2)],
            665,
            Mode::Strict,
        )
    };
    Ok(vec![
        make(FiniteGroup::symmetric(3)?)?,
        make(FiniteGroup::cyclic(6)?)?,
    ])
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanReport {
    /// Involution pairs `(c, d)` examined.
    pub pairs: u64,
    /// Products whose cyclic core has length at least two.
    pub reduced: u64,
    /// Products with a verified witness.
    pub witnessed: u64,
    pub mismatches: u64,
    /// Literal of the first product without a verified witness.
    pub first_mismatch: Option<String>,
}

impl ScanReport {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }

    fn merge(&mut self, other: ScanReport) {
        self.pairs += other.pairs;
        self.reduced += other.reduced;
        self.witnessed += other.witnessed;
        self.mismatches += other.mismatches;
        if self.first_mismatch.is_none() {
            self.first_mismatch = other.first_mismatch;
        }
    }

    fn record(&mut self, c: &Word, d: &Word) {
        self.pairs += 1;
        let w = c * d;
        let reduction = w.cyclic_reduce();
        if reduction.core.len() < 2 {
            return;
        }
        self.reduced += 1;
        let core = CyclicWord::new(reduction.core).expect("cyclic core");
        let verified = core.two_involution_witness().is_some_and(|wit| {
            let (c0, d0) = wit.involutions();
            let k = &reduction.conjugator;
            let k_inv = k.inverse();
            let c1 = &(k * &c0) * &k_inv;
            let d1 = &(k * &d0) * &k_inv;
            wit.verify(core.word()) && c1.is_involution() && d1.is_involution() && &c1 * &d1 == w
        });
        if verified {
            self.witnessed += 1;
        } else {
            self.mismatches += 1;
            if self.first_mismatch.is_none() {
                self.first_mismatch = Some(w.to_literal());
            }
        }
    }
}

/// Every reduced word of length at most `max_len`, shortest first.
pub fn reduced_words(family: &Arc<FactorFamily>, max_len: usize) -> Vec<Word> {
    let alphabet = family.alphabet();
    let mut layers: Vec<Vec<Vec<Syllable>>> = vec![vec![Vec::new()]];
    for _ in 0..max_len {
        let next = layers
            .last()
            .expect("nonempty")
            .iter()
            .flat_map(|prefix| {
                alphabet
                    .iter()
                    .filter(|s| prefix.last().is_none_or(|l| l.factor != s.factor))
                    .map(move |&s| {
                        let mut w = prefix.clone();
                        w.push(s);
                        w
                    })
            })
            .collect();
        layers.push(next);
    }
    layers
        .into_iter()
        .flatten()
        .map(|s| Word::from_syllables(family, s).expect("alternating"))
        .collect()
}

fn involution_conjugates(family: &Arc<FactorFamily>, max_conj: usize) -> Vec<Word> {
    let conjugators = reduced_words(family, max_conj);
    let mut out = Vec::new();
    for u in &conjugators {
        let u_inv = u.inverse();
        for &s in &family.involution_syllables() {
            let c = Word::from_syllables(family, vec![s]).expect("single syllable");
            out.push(&(u * &c) * &u_inv);
        }
    }
    out
}

/// All pairs `(u c₁ u⁻¹, v c₂ v⁻¹)` with `|u|, |v| ≤ max_conj`.
pub fn exhaustive_scan(family: &Arc<FactorFamily>, max_conj: usize) -> ScanReport {
    let involutions = involution_conjugates(family, max_conj);
    let mut report = ScanReport::default();
    for c in &involutions {
        for d in &involutions {
            report.record(c, d);
        }
    }
    report
}

pub fn exhaustive_scan_all(families: &[Arc<FactorFamily>], max_conj: usize) -> ScanReport {
    let mut report = ScanReport::default();
    for f in families {
        report.merge(exhaustive_scan(f, max_conj));
    }
    report
}

/// Uniform index below `n` from one 64-bit draw (multiply-shift).
fn below(rng: &mut SplitMix64, n: usize) -> usize {
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

fn random_word(
    rng: &mut SplitMix64,
    family: &Arc<FactorFamily>,
    alphabet: &[Syllable],
    max_len: usize,
) -> Word {
    let len = below(rng, max_len + 1);
    let mut syllables: Vec<Syllable> = Vec::with_capacity(len);
    while syllables.len() < len {
        let s = alphabet[below(rng, alphabet.len())];
        if syllables.last().is_none_or(|l| l.factor != s.factor) {
            syllables.push(s);
        }
    }
    Word::from_syllables(family, syllables).expect("alternating")
}

/// `samples` random pairs from a SplitMix64 stream seeded with `seed`;
/// sample `k` is drawn from `families[k % families.len()]`.
pub fn sampled_scan(
    families: &[Arc<FactorFamily>],
    max_conj: usize,
    samples: u64,
    seed: u64,
) -> ScanReport {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let tables: Vec<(Vec<Syllable>, Vec<Syllable>)> = families
        .iter()
        .map(|f| (f.alphabet(), f.involution_syllables()))
        .collect();
    let mut report = ScanReport::default();
    if families.is_empty() {
        return report;
    }
    for k in 0..samples {
        let idx = (k % families.len() as u64) as usize;
        let family = &families[idx];
        let (alphabet, involutions) = &tables[idx];
        if involutions.is_empty() {
            continue;
        }
        let mut conjugated = || {
            let u = random_word(&mut rng, family, alphabet, max_conj);
            let s = involutions[below(&mut rng, involutions.len())];
            let c = Word::from_syllables(family, vec![s]).expect("single syllable");
            &(&u * &c) * &u.inverse()
        };
        let c = conjugated();
        let d = conjugated();
        report.record(&c, &d);
    }
    report
}
