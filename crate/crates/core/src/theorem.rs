//! Theorem-backed verdicts about periodic products of finite groups.
//!
//! Every verdict is computed from finite data about the factors (power
//! subgroups, involutions, normal-subgroup lattices) and carries the result
//! it rests on. In strict mode a verdict whose hypotheses fail is reported
//! as inapplicable; in lenient mode the bare criterion is evaluated and the
//! verdict is flagged as outside the hypotheses.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupSet};
use crate::hom::FactorQuotient;
use crate::period::{classify_rank1, PeriodClass};
use crate::word::{exponent_in_range, FactorFamily, Mode, Word, MIN_STRICT_EXPONENT};

pub const OUTSIDE_HYPOTHESES: &str = "outside theorem hypotheses";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Question {
    InheritablyNormal,
    InheritablyFactorizable,
    Simple,
    Hopfian,
    Corollary3Bundle,
}

impl Question {
    pub fn as_str(self) -> &'static str {
        match self {
            Question::InheritablyNormal => "inheritably-normal",
            Question::InheritablyFactorizable => "inheritably-factorizable",
            Question::Simple => "simple",
            Question::Hopfian => "hopfian",
            Question::Corollary3Bundle => "corollary3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Inapplicable,
    Undetermined,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Inapplicable => "inapplicable",
            Answer::Undetermined => "undetermined",
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Citation {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Corollary1,
    Corollary2,
    Corollary3,
}

impl Citation {
    pub fn as_str(self) -> &'static str {
        match self {
            Citation::Theorem1 => "Theorem1",
            Citation::Theorem2 => "Theorem2",
            Citation::Theorem3 => "Theorem3",
            Citation::Theorem4 => "Theorem4",
            Citation::Corollary1 => "Corollary1",
            Citation::Corollary2 => "Corollary2",
            Citation::Corollary3 => "Corollary3",
        }
    }

    pub const ALL: [Citation; 7] = [
        Citation::Theorem1,
        Citation::Theorem2,
        Citation::Theorem3,
        Citation::Theorem4,
        Citation::Corollary1,
        Citation::Corollary2,
        Citation::Corollary3,
    ];
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Machine-readable reason attached to non-yes/no answers and to lenient
/// verdicts outside the hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReasonCode {
    TrivialSubgroup,
    SmallN,
    InvolutionsPresent,
    IdentityHoldsInAllFactors,
    BoundExceeded,
    PremiseFailed,
}

impl ReasonCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::TrivialSubgroup => "trivial_subgroup",
            ReasonCode::SmallN => "small_n",
            ReasonCode::InvolutionsPresent => "involutions_present",
            ReasonCode::IdentityHoldsInAllFactors => "identity_holds_in_all_factors",
            ReasonCode::BoundExceeded => "bound_exceeded",
            ReasonCode::PremiseFailed => "premise_failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub question: Question,
    pub answer: Answer,
    pub citation: Citation,
    /// Results consumed as certificates along the way.
    pub uses: Vec<Citation>,
    pub code: Option<ReasonCode>,
    pub reason: String,
    /// Set in lenient mode when some hypothesis of the cited result fails.
    pub outside_hypotheses: bool,
}

/// A hypothesis that did not hold, with its reason code.
type Failure = (ReasonCode, String);

fn exponent_failure(family: &FactorFamily) -> Option<Failure> {
    let n = family.n();
    (!exponent_in_range(n)).then(|| {
        (
            ReasonCode::SmallN,
            format!("n = {n} is not an odd number ≥ {MIN_STRICT_EXPONENT}"),
        )
    })
}

fn involution_failure(family: &FactorFamily) -> Option<Failure> {
    let names: Vec<&str> = family
        .factors()
        .iter()
        .filter(|f| !f.group.involutions().is_empty())
        .map(|f| f.name.as_str())
        .collect();
    (!names.is_empty()).then(|| {
        (
            ReasonCode::InvolutionsPresent,
            format!("factors with involutions: {}", names.join(", ")),
        )
    })
}

/// Applies the mode to the failed hypotheses: strict mode turns the first
/// failure into an inapplicable verdict, lenient mode records it.
struct Gate {
    failures: Vec<Failure>,
    mode: Mode,
}

impl Gate {
    fn new(mode: Mode, failures: impl IntoIterator<Item = Option<Failure>>) -> Self {
        Gate {
            failures: failures.into_iter().flatten().collect(),
            mode,
        }
    }

    fn blocked(&self, question: Question, citation: Citation) -> Option<Verdict> {
        match (self.mode, self.failures.first()) {
            (Mode::Strict, Some((code, why))) => Some(Verdict {
                question,
                answer: Answer::Inapplicable,
                citation,
                uses: Vec::new(),
                code: Some(*code),
                reason: why.clone(),
                outside_hypotheses: false,
            }),
            _ => None,
        }
    }

    fn finish(&self, mut verdict: Verdict) -> Verdict {
        if !self.failures.is_empty() {
            verdict.outside_hypotheses = true;
            if verdict.code.is_none() {
                verdict.code = Some(self.failures[0].0);
            }
            let notes: Vec<&str> = self.failures.iter().map(|(_, w)| w.as_str()).collect();
            verdict.reason = format!(
                "{}; {OUTSIDE_HYPOTHESES}: {}",
                verdict.reason,
                notes.join("; ")
            );
        }
        verdict
    }
}

fn describe(group: &FiniteGroup, subgroup: &SubgroupSet) -> String {
    let gens: Vec<&str> = group
        .generators_of(subgroup)
        .into_iter()
        .map(|x| group.element_name(x))
        .collect();
    if gens.is_empty() {
        "{e}".to_string()
    } else {
        format!("<{}> (order {})", gens.join(","), subgroup.order())
    }
}

fn factor_checked(family: &FactorFamily, i: usize) -> Result<&FiniteGroup> {
    if i >= family.len() {
        return Err(Error::BadReference(format!(
            "factor index {i} out of range"
        )));
    }
    Ok(family.factor(i))
}

fn require_normal(group: &FiniteGroup, normal: &SubgroupSet) -> Result<()> {
    group.check_subgroup(normal)?;
    if !normal.is_normal() {
        return Err(Error::NotNormal(format!(
            "subgroup {} of {}",
            describe(group, normal),
            group.name()
        )));
    }
    Ok(())
}

/// Whether `normal ⊴ Gᵢ` is the trace on `Gᵢ` of a normal subgroup of the
/// whole product: yes exactly when it contains `Gᵢⁿ`.
pub fn inheritably_normal_verdict(
    family: &Arc<FactorFamily>,
    i: usize,
    normal: &SubgroupSet,
) -> Result<Verdict> {
    let group = factor_checked(family, i)?;
    require_normal(group, normal)?;
    let q = Question::InheritablyNormal;
    let c = Citation::Theorem2;
    let trivial = normal.is_trivial().then(|| {
        (
            ReasonCode::TrivialSubgroup,
            "the criterion concerns nontrivial normal subgroups".to_string(),
        )
    });
    let gate = Gate::new(family.mode(), [trivial, exponent_failure(family)]);
    if let Some(v) = gate.blocked(q, c) {
        return Ok(v);
    }
    let power = group.power_subgroup(family.n());
    let holds = power.is_subset_of(normal);
    let reason = format!(
        "{}^{} = {} {} N = {}",
        family.factor_name(i),
        family.n(),
        describe(group, &power),
        if holds { "⊆" } else { "⊄" },
        describe(group, normal)
    );
    Ok(gate.finish(Verdict {
        question: q,
        answer: Answer::from_bool(holds),
        citation: c,
        uses: Vec::new(),
        code: None,
        reason,
        outside_hypotheses: false,
    }))
}

/// Whether every normal subgroup of `Gᵢ` is inheritably normal: every
/// nontrivial one must contain `Gᵢⁿ`.
pub fn inheritably_factorizable_verdict(
    family: &Arc<FactorFamily>,
    i: usize,
    bound: usize,
) -> Result<Verdict> {
    let group = factor_checked(family, i)?;
    let q = Question::InheritablyFactorizable;
    let c = Citation::Corollary2;
    let gate = Gate::new(family.mode(), [exponent_failure(family)]);
    if let Some(v) = gate.blocked(q, c) {
        return Ok(v);
    }
    let power = group.power_subgroup(family.n());
    let normals = group.normal_subgroups(bound)?;
    let failing = normals
        .iter()
        .filter(|n| !n.is_trivial())
        .find(|n| !power.is_subset_of(n));
    let reason = match failing {
        None => format!(
            "every nontrivial normal subgroup of {} contains {}^{} = {}",
            family.factor_name(i),
            family.factor_name(i),
            family.n(),
            describe(group, &power)
        ),
        Some(n) => format!(
            "normal subgroup {} does not contain {}^{} = {}",
            describe(group, n),
            family.factor_name(i),
            family.n(),
            describe(group, &power)
        ),
    };
    Ok(gate.finish(Verdict {
        question: q,
        answer: Answer::from_bool(failing.is_none()),
        citation: c,
        uses: vec![Citation::Theorem2],
        code: None,
        reason,
        outside_hypotheses: false,
    }))
}

/// Simplicity of the product for involution-free factors: simple exactly
/// when `Gᵢⁿ = Gᵢ` for every factor.
pub fn simplicity_verdict(family: &Arc<FactorFamily>) -> Verdict {
    let q = Question::Simple;
    let c = Citation::Theorem1;
    let gate = Gate::new(
        family.mode(),
        [exponent_failure(family), involution_failure(family)],
    );
    if let Some(v) = gate.blocked(q, c) {
        return v;
    }
    let n = family.n();
    let failing = family
        .factors()
        .iter()
        .find(|f| !f.group.power_subgroup(n).is_whole());
    let reason = match failing {
        None => format!("G^{n} = G for every factor"),
        Some(f) => format!(
            "{}^{n} has order {} < {}",
            f.name,
            f.group.power_subgroup(n).order(),
            f.group.order()
        ),
    };
    gate.finish(Verdict {
        question: q,
        answer: Answer::from_bool(failing.is_none()),
        citation: c,
        uses: Vec::new(),
        code: None,
        reason,
        outside_hypotheses: false,
    })
}

/// Hopfian when some factor violates `xⁿ = 1`. When every factor satisfies
/// the identity the question is left open.
pub fn hopfian_verdict(family: &Arc<FactorFamily>) -> Verdict {
    let q = Question::Hopfian;
    let c = Citation::Theorem4;
    let gate = Gate::new(
        family.mode(),
        [exponent_failure(family), involution_failure(family)],
    );
    if let Some(v) = gate.blocked(q, c) {
        return v;
    }
    let n = family.n();
    let witness = family
        .factors()
        .iter()
        .find(|f| !f.group.exponent_divides(n));
    let verdict = match witness {
        Some(f) => Verdict {
            question: q,
            answer: Answer::Yes,
            citation: c,
            uses: vec![Citation::Theorem3],
            code: None,
            reason: format!("factor {} does not satisfy x^{n} = 1", f.name),
            outside_hypotheses: false,
        },
        None => Verdict {
            question: q,
            answer: Answer::Undetermined,
            citation: c,
            uses: vec![Citation::Theorem3],
            code: Some(ReasonCode::IdentityHoldsInAllFactors),
            reason: format!("every factor satisfies x^{n} = 1; the Hopfian property is open here"),
            outside_hypotheses: false,
        },
    };
    gate.finish(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corollary3Parts {
    pub hopfian: Answer,
    pub residually_finite: Answer,
    pub simple: Answer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corollary3Verdict {
    pub verdict: Verdict,
    pub parts: Option<Corollary3Parts>,
    /// Set when the cyclic factors have even order and hence involutions.
    pub note: Option<String>,
}

/// The product of `m` cyclic groups of order `r` with `n` an odd proper
/// divisor of `r`, `n ≥ 665`: Hopfian, not residually finite, not simple.
pub fn corollary3_verdict(m: usize, r: u64, n: u64) -> Corollary3Verdict {
    let premise = if m < 2 {
        Some(format!("m = {m} < 2 factors"))
    } else if n.is_multiple_of(2) {
        Some(format!("n = {n} is even"))
    } else if n < MIN_STRICT_EXPONENT {
        Some(format!("n = {n} < {MIN_STRICT_EXPONENT}"))
    } else if r == 0 || !r.is_multiple_of(n) {
        Some(format!("n = {n} does not divide r = {r}"))
    } else if r == n {
        Some(format!("n = {n} is not a proper divisor of r = {r}"))
    } else {
        None
    };
    let base = Verdict {
        question: Question::Corollary3Bundle,
        answer: Answer::Inapplicable,
        citation: Citation::Corollary3,
        uses: Vec::new(),
        code: Some(ReasonCode::PremiseFailed),
        reason: String::new(),
        outside_hypotheses: false,
    };
    match premise {
        Some(why) => Corollary3Verdict {
            verdict: Verdict {
                reason: why,
                ..base
            },
            parts: None,
            note: None,
        },
        None => Corollary3Verdict {
            verdict: Verdict {
                answer: Answer::Yes,
                code: None,
                uses: vec![Citation::Theorem3, Citation::Theorem4],
                reason: format!("{m} cyclic factors of order {r}, n = {n} a proper odd divisor"),
                ..base
            },
            parts: Some(Corollary3Parts {
                hopfian: Answer::Yes,
                residually_finite: Answer::No,
                simple: Answer::No,
            }),
            note: r
                .is_multiple_of(2)
                .then(|| format!("r = {r} is even, so every factor contains an involution")),
        },
    }
}

/// Consistency scan for the involution statement about inheritably
/// factorizable factors of a product with `Z₂`. The implication is not
/// asserted; premise-true, conclusion-false groups are flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corollary1Report {
    pub group: String,
    /// Every nontrivial normal subgroup contains `Gⁿ`.
    pub factorizable: bool,
    pub involutions: usize,
    pub central_involutions: usize,
    pub premise: bool,
    pub conclusion: bool,
    pub tension: bool,
}

pub fn corollary1_scan(group: &FiniteGroup, n: u64, bound: usize) -> Result<Corollary1Report> {
    let power = group.power_subgroup(n);
    let factorizable = group
        .normal_subgroups(bound)?
        .iter()
        .filter(|s| !s.is_trivial())
        .all(|s| power.is_subset_of(s));
    let involutions = group.involutions();
    let central = involutions.iter().filter(|&&x| group.is_central(x)).count();
    let premise = factorizable && !involutions.is_empty();
    let conclusion = involutions.len() == 1 && central == 1;
    Ok(Corollary1Report {
        group: group.name().to_string(),
        factorizable,
        involutions: involutions.len(),
        central_involutions: central,
        premise,
        conclusion,
        tension: premise && !conclusion,
    })
}

/// Membership test for `N·N₂`, where `N₂` is the normal closure of all the
/// other factors: retract onto factor `i` and test membership in `N`.
#[derive(Debug, Clone)]
pub struct GlobalNormalWitness {
    family: Arc<FactorFamily>,
    factor: usize,
    subgroup: SubgroupSet,
    others: Vec<usize>,
}

impl GlobalNormalWitness {
    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn subgroup(&self) -> &SubgroupSet {
        &self.subgroup
    }

    pub fn contains(&self, word: &Word) -> Result<bool> {
        if !word.family().same_family(&self.family) {
            return Err(Error::FamilyMismatch);
        }
        let retracted = word.deletion_retraction(&self.others);
        match retracted.syllables() {
            [] => Ok(true),
            [s] if s.factor == self.factor => Ok(self.subgroup.contains(s.element)),
            _ => Err(Error::Invariant(
                "retraction onto one factor left a longer word".into(),
            )),
        }
    }

    /// `Gᵢ ∩ N·N₂ = N`, checked over every element of the factor.
    pub fn intersection_holds(&self) -> Result<bool> {
        let group = self.family.factor(self.factor);
        for g in group.elements() {
            let w = Word::letter(&self.family, self.factor, g)?;
            if self.contains(&w)? != self.subgroup.contains(g) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn global_normal_witness(
    family: &Arc<FactorFamily>,
    i: usize,
    normal: &SubgroupSet,
) -> Result<GlobalNormalWitness> {
    let verdict = inheritably_normal_verdict(family, i, normal)?;
    if verdict.answer != Answer::Yes {
        return Err(Error::CriterionFails(format!(
            "{} answer {}: {}",
            verdict.question.as_str(),
            verdict.answer,
            verdict.reason
        )));
    }
    let witness = GlobalNormalWitness {
        family: Arc::clone(family),
        factor: i,
        subgroup: normal.clone(),
        others: (0..family.len()).filter(|&j| j != i).collect(),
    };
    if !witness.intersection_holds()? {
        return Err(Error::Invariant(
            "retraction witness fails the intersection test".into(),
        ));
    }
    Ok(witness)
}

/// Whether `w` and `v` agree modulo `N ⊴ Gᵢ`, i.e. have equal images in the
/// product with `Gᵢ` replaced by `Gᵢ/N`.
pub fn congruence_check(w: &Word, v: &Word, i: usize, normal: &SubgroupSet) -> Result<bool> {
    if !w.family().same_family(v.family()) {
        return Err(Error::FamilyMismatch);
    }
    let phi = FactorQuotient::new(w.family(), i, normal)?;
    Ok(phi.apply(w)? == phi.apply(v)?)
}

/// The four witness words from the necessity argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProofWord {
    /// `b₁⁻¹ a b₁ b₂⁻¹ a b₂ g`, second factor of order at least 3.
    CaseOne,
    /// `b a₁ b a₁ b a₂ b g`, second factor of order 2.
    CaseTwo,
    /// `b a b g` with `a` an involution and `g² ≠ 1`.
    InvolutionPair,
    /// `b a b a g b g b g` with `a, g` involutions.
    InvolutionPalindrome,
}

impl ProofWord {
    pub const ALL: [ProofWord; 4] = [
        ProofWord::CaseOne,
        ProofWord::CaseTwo,
        ProofWord::InvolutionPair,
        ProofWord::InvolutionPalindrome,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProofWord::CaseOne => "case1",
            ProofWord::CaseTwo => "case2",
            ProofWord::InvolutionPair => "babg",
            ProofWord::InvolutionPalindrome => "babagbgbg",
        }
    }
}

/// Element choices for the proof words. `a, a₁, a₂, g` live in factor 0,
/// `b, b₁, b₂` in factor 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofBindings {
    pub a: Option<usize>,
    pub a1: Option<usize>,
    pub a2: Option<usize>,
    pub g: Option<usize>,
    pub b: Option<usize>,
    pub b1: Option<usize>,
    pub b2: Option<usize>,
}

impl ProofBindings {
    /// Picks elements for every word the family admits.
    pub fn auto(family: &FactorFamily) -> Self {
        let g1 = family.factor(0);
        let g2 = family.factor(1);
        let nontrivial1: Vec<usize> = g1.elements().filter(|&x| x != g1.identity()).collect();
        let nontrivial2: Vec<usize> = g2.elements().filter(|&x| x != g2.identity()).collect();
        let outside = |n: &SubgroupSet| nontrivial1.iter().copied().find(|&x| !n.contains(x));
        // prefer an element whose normal closure is proper and, for the
        // two-letter case, has room for a second nontrivial member
        let proper = |min_order: usize| {
            nontrivial1.iter().find_map(|&a| {
                let n = g1.normal_closure(&[a]);
                (n.order() >= min_order && !n.is_whole()).then_some((a, n))
            })
        };
        let mut out = ProofBindings::default();
        if nontrivial2.len() >= 2 {
            out.b1 = Some(nontrivial2[0]);
            out.b2 = Some(nontrivial2[1]);
            match proper(2) {
                Some((a, n)) => {
                    out.a = Some(a);
                    out.g = outside(&n);
                }
                None => out.a = nontrivial1.first().copied(),
            }
            return out;
        }
        out.b = nontrivial2.first().copied();
        if let Some((a1, n)) = proper(3) {
            out.a1 = Some(a1);
            out.a2 = n
                .members()
                .iter()
                .copied()
                .find(|&x| x != a1 && x != g1.identity());
            out.g = outside(&n);
        }
        out.a = g1.involutions().first().copied();
        out
    }

    fn with_g(&self, g: Option<usize>) -> Self {
        ProofBindings { g, ..self.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct ProofWordResult {
    pub kind: ProofWord,
    pub word: Word,
    pub class: PeriodClass,
    /// Generators of the normal subgroup `N` of factor 0 used for the
    /// congruences.
    pub normal_order: usize,
    /// Image of the word modulo `N`.
    pub image: Word,
    /// `W ≡ V (mod N)` for the word's reduction target `V`.
    pub congruence: bool,
    /// `Wⁿ ≡ Vₙ (mod N)`.
    pub power_congruence: bool,
}

impl ProofWordResult {
    pub fn passed(&self) -> bool {
        self.class.is_certified() && self.congruence && self.power_congruence
    }
}

#[derive(Debug, Clone)]
pub struct ProofSuiteReport {
    pub results: Vec<ProofWordResult>,
}

impl ProofSuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(ProofWordResult::passed)
    }
}

/// Builds every proof word whose bindings are complete, checks its side
/// conditions, certifies it and replays the congruence reductions.
pub fn proof_word_suite(
    family: &Arc<FactorFamily>,
    bindings: &ProofBindings,
) -> Result<ProofSuiteReport> {
    let mut results = Vec::new();
    for kind in ProofWord::ALL {
        if let Some(r) = run_proof_word(family, bindings, kind)? {
            results.push(r);
        }
    }
    if results.is_empty() {
        return Err(Error::SideConditionViolated(
            "no proof word has a complete set of bindings".into(),
        ));
    }
    Ok(ProofSuiteReport { results })
}

/// Runs one proof word; `Ok(None)` when its bindings are incomplete.
pub fn run_proof_word(
    family: &Arc<FactorFamily>,
    bindings: &ProofBindings,
    kind: ProofWord,
) -> Result<Option<ProofWordResult>> {
    let g1 = family.factor(0);
    let g2 = family.factor(1);
    for (label, x, group) in [
        ("a", bindings.a, g1),
        ("a1", bindings.a1, g1),
        ("a2", bindings.a2, g1),
        ("g", bindings.g, g1),
        ("b", bindings.b, g2),
        ("b1", bindings.b1, g2),
        ("b2", bindings.b2, g2),
    ] {
        if let Some(x) = x {
            if x >= group.order() {
                return Err(Error::BadReference(format!(
                    "binding {label} = {x} out of range"
                )));
            }
        }
    }
    let violated = |what: &str| {
        Err(Error::SideConditionViolated(format!(
            "{}: {what}",
            kind.as_str()
        )))
    };
    let e1 = g1.identity();
    let e2 = g2.identity();
    let n = family.n();
    let lit = |f: usize, x: usize| (f, x);

    let (letters, normal, target, target_power) = match kind {
        ProofWord::CaseOne => {
            let (Some(a), Some(g), Some(b1), Some(b2)) =
                (bindings.a, bindings.g, bindings.b1, bindings.b2)
            else {
                return Ok(None);
            };
            if g2.order() < 3 {
                return violated("second factor must have order ≥ 3");
            }
            if a == e1 || g == e1 {
                return violated("a and g must be nontrivial");
            }
            if b1 == e2 || b2 == e2 || b1 == b2 {
                return violated("b1, b2 must be distinct and nontrivial");
            }
            let letters = vec![
                lit(1, g2.inv(b1)),
                lit(0, a),
                lit(1, b1),
                lit(1, g2.inv(b2)),
                lit(0, a),
                lit(1, b2),
                lit(0, g),
            ];
            (
                letters,
                g1.normal_closure(&[a]),
                vec![lit(0, g)],
                vec![lit(0, g1.pow(g, n))],
            )
        }
        ProofWord::CaseTwo => {
            let (Some(a1), Some(a2), Some(g), Some(b)) =
                (bindings.a1, bindings.a2, bindings.g, bindings.b)
            else {
                return Ok(None);
            };
            if g2.order() != 2 {
                return violated("second factor must have order 2");
            }
            if a1 == e1 || a2 == e1 || a1 == a2 {
                return violated("a1, a2 must be distinct and nontrivial");
            }
            if g == e1 || b == e2 {
                return violated("g and b must be nontrivial");
            }
            let letters = vec![
                lit(1, b),
                lit(0, a1),
                lit(1, b),
                lit(0, a1),
                lit(1, b),
                lit(0, a2),
                lit(1, b),
                lit(0, g),
            ];
            (
                letters,
                g1.normal_closure(&[a1, a2]),
                vec![lit(0, g)],
                vec![lit(0, g1.pow(g, n))],
            )
        }
        ProofWord::InvolutionPair => {
            let (Some(a), Some(g), Some(b)) = (bindings.a, bindings.g, bindings.b) else {
                return Ok(None);
            };
            if g2.order() != 2 || b == e2 {
                return violated("b must generate a second factor of order 2");
            }
            if !g1.is_involution(a) {
                return violated("a must be an involution");
            }
            if g == e1 || g1.mul(g, g) == e1 {
                return violated("g must satisfy g² ≠ 1");
            }
            let letters = vec![lit(1, b), lit(0, a), lit(1, b), lit(0, g)];
            (
                letters,
                g1.normal_closure(&[a]),
                vec![lit(0, g)],
                vec![lit(0, g1.pow(g, n))],
            )
        }
        ProofWord::InvolutionPalindrome => {
            let (Some(a), Some(g), Some(b)) = (bindings.a, bindings.g, bindings.b) else {
                return Ok(None);
            };
            if g2.order() != 2 || b == e2 {
                return violated("b must generate a second factor of order 2");
            }
            if !g1.is_involution(a) || !g1.is_involution(g) {
                return violated("a and g must be involutions");
            }
            if a == g {
                return violated("a and g must be distinct");
            }
            let letters = vec![
                lit(1, b),
                lit(0, a),
                lit(1, b),
                lit(0, a),
                lit(0, g),
                lit(1, b),
                lit(0, g),
                lit(1, b),
                lit(0, g),
            ];
            let target = vec![lit(0, g), lit(1, b), lit(0, g), lit(1, b), lit(0, g)];
            let power = vec![
                lit(0, g),
                lit(1, b),
                lit(0, g1.pow(g, n)),
                lit(1, b),
                lit(0, g),
            ];
            (letters, g1.normal_closure(&[a]), target, power)
        }
    };

    let word = Word::reduce(family, letters)?;
    let class = classify_rank1(&word).class;
    let target = Word::reduce(family, target)?;
    let target_power = Word::reduce(family, target_power)?;
    let phi = FactorQuotient::new(family, 0, &normal)?;
    let image = phi.apply(&word)?;
    let congruence = image == phi.apply(&target)?;
    let power = word.pow(n as i64);
    let power_congruence = phi.apply(&power)? == phi.apply(&target_power)?;
    Ok(Some(ProofWordResult {
        kind,
        word,
        class,
        normal_order: normal.order(),
        image,
        congruence,
        power_congruence,
    }))
}

/// Auto bindings, one variant per applicable proof word, so words with
/// conflicting needs (e.g. `g² ≠ 1` versus `g² = 1`) can each be run.
pub fn auto_suite(family: &Arc<FactorFamily>) -> Result<ProofSuiteReport> {
    let base = ProofBindings::auto(family);
    let g1 = family.factor(0);
    let mut results = Vec::new();
    for kind in ProofWord::ALL {
        let bindings = match kind {
            ProofWord::InvolutionPair => {
                base.with_g(g1.elements().find(|&x| g1.mul(x, x) != g1.identity()))
            }
            ProofWord::InvolutionPalindrome => base.with_g(base.a.and_then(|a| {
                let n = g1.normal_closure(&[a]);
                g1.involutions()
                    .into_iter()
                    .filter(|&x| x != a)
                    .min_by_key(|&x| n.contains(x))
            })),
            _ => base.clone(),
        };
        if let Some(r) = run_proof_word(family, &bindings, kind)? {
            results.push(r);
        }
    }
    if results.is_empty() {
        return Err(Error::SideConditionViolated(
            "the family admits none of the proof words".into(),
        ));
    }
    Ok(ProofSuiteReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(groups: Vec<FiniteGroup>, n: u64, mode: Mode) -> Arc<FactorFamily> {
        FactorFamily::new(
            groups
                .into_iter()
                .enumerate()
                .map(|(i, g)| (format!("g{}", i + 1), g))
                .collect(),
            n,
            mode,
        )
        .unwrap()
    }

    fn cyc(r: usize) -> FiniteGroup {
        FiniteGroup::cyclic(r).unwrap()
    }

    #[test]
    fn inheritably_normal_in_z1995() {
        let f = fam(vec![cyc(1995), cyc(3)], 665, Mode::Strict);
        let g = f.factor(0);
        let order3 = g.subgroup_generated(&[665]);
        let order5 = g.subgroup_generated(&[399]);
        assert_eq!(
            inheritably_normal_verdict(&f, 0, &order3).unwrap().answer,
            Answer::Yes
        );
        assert_eq!(
            inheritably_normal_verdict(&f, 0, &order5).unwrap().answer,
            Answer::No
        );
        let v = inheritably_normal_verdict(&f, 0, &g.subgroup_generated(&[])).unwrap();
        assert_eq!(v.answer, Answer::Inapplicable);
        assert_eq!(v.code, Some(ReasonCode::TrivialSubgroup));
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let f = fam(
            vec![FiniteGroup::symmetric(3).unwrap(), cyc(3)],
            665,
            Mode::Strict,
        );
        let s3 = f.factor(0);
        let h = s3.subgroup_generated(&[s3.involutions()[0]]);
        assert!(matches!(
            inheritably_normal_verdict(&f, 0, &h),
            Err(Error::NotNormal(_))
        ));
    }

    #[test]
    fn factorizable_examples() {
        let f = fam(vec![cyc(3), cyc(1995), cyc(5)], 665, Mode::Strict);
        let bound = crate::group::DEFAULT_ENUMERATION_BOUND;
        assert_eq!(
            inheritably_factorizable_verdict(&f, 0, bound)
                .unwrap()
                .answer,
            Answer::Yes
        );
        let v = inheritably_factorizable_verdict(&f, 1, bound).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(v.reason.contains("order 5"), "{}", v.reason);
        assert_eq!(
            inheritably_factorizable_verdict(&f, 2, bound)
                .unwrap()
                .answer,
            Answer::Yes
        );
        assert!(matches!(
            inheritably_factorizable_verdict(&f, 1, 100),
            Err(Error::BoundExceeded(_))
        ));
    }

    #[test]
    fn simplicity_examples() {
        let v = simplicity_verdict(&fam(vec![cyc(3), cyc(3)], 665, Mode::Strict));
        assert_eq!(v.answer, Answer::Yes);
        let v = simplicity_verdict(&fam(vec![cyc(5), cyc(5)], 665, Mode::Strict));
        assert_eq!(v.answer, Answer::No);
        let v = simplicity_verdict(&fam(
            vec![FiniteGroup::symmetric(3).unwrap(), cyc(3)],
            665,
            Mode::Strict,
        ));
        assert_eq!(v.answer, Answer::Inapplicable);
        assert_eq!(v.code, Some(ReasonCode::InvolutionsPresent));
    }

    #[test]
    fn hopfian_examples() {
        let v = hopfian_verdict(&fam(vec![cyc(1995), cyc(1995)], 665, Mode::Strict));
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.uses.contains(&Citation::Theorem3));
        let v = hopfian_verdict(&fam(vec![cyc(5), cyc(7)], 665, Mode::Strict));
        assert_eq!(v.answer, Answer::Undetermined);
        let v = hopfian_verdict(&fam(
            vec![FiniteGroup::symmetric(3).unwrap(), cyc(1995)],
            665,
            Mode::Strict,
        ));
        assert_eq!(v.answer, Answer::Inapplicable);
        assert_eq!(v.code, Some(ReasonCode::InvolutionsPresent));
    }

    #[test]
    fn lenient_mode_labels_verdicts() {
        let f = fam(
            vec![FiniteGroup::symmetric(3).unwrap(), cyc(1995)],
            665,
            Mode::Lenient,
        );
        let v = hopfian_verdict(&f);
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.outside_hypotheses);
        assert!(v.reason.contains(OUTSIDE_HYPOTHESES));

        let f = fam(vec![cyc(3), cyc(3)], 663, Mode::Lenient);
        let v = simplicity_verdict(&f);
        assert!(v.outside_hypotheses);
        assert_eq!(v.code, Some(ReasonCode::SmallN));
    }

    #[test]
    fn corollary3_examples() {
        let c = corollary3_verdict(2, 1995, 665);
        assert_eq!(c.verdict.answer, Answer::Yes);
        assert_eq!(
            c.parts,
            Some(Corollary3Parts {
                hopfian: Answer::Yes,
                residually_finite: Answer::No,
                simple: Answer::No
            })
        );
        assert!(c.note.is_none());
        let c = corollary3_verdict(2, 665, 665);
        assert_eq!(c.verdict.answer, Answer::Inapplicable);
        assert!(c.verdict.reason.contains("proper divisor"));
        let c = corollary3_verdict(2, 1330, 665);
        assert_eq!(c.verdict.answer, Answer::Yes);
        assert!(c.note.unwrap().contains("even"));
        assert_eq!(
            corollary3_verdict(1, 1995, 665).verdict.answer,
            Answer::Inapplicable
        );
        assert_eq!(corollary3_verdict(2, 1994, 997).verdict.answer, Answer::Yes);
        assert_eq!(
            corollary3_verdict(2, 3990, 1330).verdict.answer,
            Answer::Inapplicable
        );
    }

    #[test]
    fn corollary1_examples() {
        let bound = crate::group::DEFAULT_ENUMERATION_BOUND;
        let r = corollary1_scan(&cyc(2), 665, bound).unwrap();
        assert!(r.premise && r.conclusion && !r.tension);
        let r = corollary1_scan(&cyc(4), 665, bound).unwrap();
        assert!(!r.premise);
        let r = corollary1_scan(&FiniteGroup::quaternion().unwrap(), 665, bound).unwrap();
        assert!(!r.premise);
        assert!(r.conclusion);
        let r = corollary1_scan(&FiniteGroup::symmetric(5).unwrap(), 665, bound).unwrap();
        assert!(!r.premise);
    }

    #[test]
    fn global_witness_in_z1995() {
        let f = fam(vec![cyc(1995), cyc(3)], 665, Mode::Strict);
        let g = f.factor(0);
        let order3 = g.subgroup_generated(&[665]);
        let w = global_normal_witness(&f, 0, &order3).unwrap();
        assert!(w.intersection_holds().unwrap());
        let conj = Word::reduce(&f, [(1, 2), (0, 665), (1, 1)]).unwrap();
        assert!(w.contains(&conj).unwrap());
        assert!(!w.contains(&Word::letter(&f, 0, 1).unwrap()).unwrap());

        let order5 = g.subgroup_generated(&[399]);
        assert!(matches!(
            global_normal_witness(&f, 0, &order5),
            Err(Error::CriterionFails(_))
        ));
    }

    #[test]
    fn congruence_examples() {
        let z9 = FiniteGroup::cyclic_named(9, "x").unwrap();
        let f = fam(
            vec![z9, FiniteGroup::cyclic_named(3, "b").unwrap()],
            665,
            Mode::Strict,
        );
        let n = f.factor(0).subgroup_generated(&[3]);
        let w = Word::parse(&f, "g2:b^-1 g1:x^3 g2:b g2:b^-2 g1:x^3 g2:b^2 g1:x").unwrap();
        let x = Word::parse(&f, "g1:x").unwrap();
        assert!(congruence_check(&w, &x, 0, &n).unwrap());
        let w = Word::parse(&f, "g2:b^-1 g1:x g2:b").unwrap();
        assert!(!congruence_check(&w, &Word::identity(&f), 0, &n).unwrap());
    }

    #[test]
    fn side_conditions_are_enforced() {
        let f = fam(
            vec![FiniteGroup::cyclic_named(9, "x").unwrap(), cyc(3)],
            665,
            Mode::Strict,
        );
        let bad = ProofBindings {
            a: Some(3),
            g: Some(1),
            b1: Some(1),
            b2: Some(1),
            ..Default::default()
        };
        assert!(matches!(
            proof_word_suite(&f, &bad),
            Err(Error::SideConditionViolated(_))
        ));
        assert!(matches!(
            proof_word_suite(&f, &ProofBindings::default()),
            Err(Error::SideConditionViolated(_))
        ));
        let wrong_case = ProofBindings {
            a1: Some(3),
            a2: Some(6),
            g: Some(1),
            b: Some(1),
            ..Default::default()
        };
        assert!(matches!(
            proof_word_suite(&f, &wrong_case),
            Err(Error::SideConditionViolated(_))
        ));
    }

    #[test]
    fn auto_suite_passes_on_small_families() {
        for groups in [
            vec![cyc(9), cyc(3)],
            vec![cyc(9), cyc(2)],
            vec![cyc(6), cyc(2)],
            vec![FiniteGroup::dihedral(2).unwrap(), cyc(2)],
        ] {
            let f = fam(groups, 665, Mode::Strict);
            let report = auto_suite(&f).unwrap();
            for r in &report.results {
                assert!(r.passed(), "{} {:?}", r.kind.as_str(), r);
            }
        }
    }
}
