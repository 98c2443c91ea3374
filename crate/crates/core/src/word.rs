//! Words in the free product of a family of finite groups.
//!
//! A [`Word`] is the alternating syllable normal form of an element of
//! `G₁ * G₂ * …`; every constructor reduces, so two words are equal as group
//! elements exactly when their syllable sequences are equal.

use std::fmt;
use std::ops::Mul;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Least admissible exponent in strict mode.
pub const MIN_STRICT_EXPONENT: u64 = 665;

static NEXT_FAMILY_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Every theorem hypothesis is enforced; verdicts outside them are
    /// reported as inapplicable.
    Strict,
    /// Criteria are evaluated regardless, and labelled when a hypothesis
    /// fails.
    Lenient,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Lenient => "lenient",
        }
    }
}

/// True when `n` is an admissible period: odd and at least 665.
pub fn exponent_in_range(n: u64) -> bool {
    n % 2 == 1 && n >= MIN_STRICT_EXPONENT
}

#[derive(Debug, Clone)]
pub struct Factor {
    pub name: String,
    pub group: FiniteGroup,
}

/// The ordered factors of a free product together with the period `n`.
#[derive(Debug)]
pub struct FactorFamily {
    id: u64,
    factors: Vec<Factor>,
    n: u64,
    mode: Mode,
}

impl FactorFamily {
    /// Builds a family of at least two factors of order at least two. In
    /// strict mode `n` must be odd and at least 665.
    pub fn new(factors: Vec<(String, FiniteGroup)>, n: u64, mode: Mode) -> Result<Arc<Self>> {
        if factors.len() < 2 {
            return Err(Error::InvalidFamily(format!(
                "need at least 2 factors, got {}",
                factors.len()
            )));
        }
        if let Some((name, g)) = factors.iter().find(|(_, g)| g.order() < 2) {
            return Err(Error::InvalidFamily(format!(
                "factor `{name}` has order {}; factors must be nontrivial",
                g.order()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidFamily("n must be positive".into()));
        }
        if mode == Mode::Strict && !exponent_in_range(n) {
            return Err(Error::StrictViolation(format!(
                "n = {n}; strict mode requires odd n ≥ {MIN_STRICT_EXPONENT}"
            )));
        }
        Self::build(factors, n, mode)
    }

    /// Target families of factor quotients may contain trivial factors.
    pub(crate) fn derived(
        factors: Vec<(String, FiniteGroup)>,
        n: u64,
        mode: Mode,
    ) -> Result<Arc<Self>> {
        Self::build(factors, n, mode)
    }

    fn build(factors: Vec<(String, FiniteGroup)>, n: u64, mode: Mode) -> Result<Arc<Self>> {
        for (i, (name, _)) in factors.iter().enumerate() {
            if factors[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::InvalidFamily(format!(
                    "duplicate factor name `{name}`"
                )));
            }
        }
        Ok(Arc::new(FactorFamily {
            id: NEXT_FAMILY_ID.fetch_add(1, Ordering::Relaxed),
            factors: factors
                .into_iter()
                .map(|(name, group)| Factor { name, group })
                .collect(),
            n,
            mode,
        }))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &FiniteGroup {
        &self.factors[i].group
    }

    pub fn factor_name(&self, i: usize) -> &str {
        &self.factors[i].name
    }

    pub fn factor_index(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn same_family(&self, other: &FactorFamily) -> bool {
        self.id == other.id
    }

    /// Nontrivial syllables in `(factor, element)` order.
    pub fn alphabet(&self) -> Vec<Syllable> {
        self.factors
            .iter()
            .enumerate()
            .flat_map(|(f, factor)| {
                let e = factor.group.identity();
                factor
                    .group
                    .elements()
                    .filter(move |&x| x != e)
                    .map(move |x| Syllable::new(f, x))
            })
            .collect()
    }

    /// Syllables whose element is an involution of its factor.
    pub fn involution_syllables(&self) -> Vec<Syllable> {
        self.factors
            .iter()
            .enumerate()
            .flat_map(|(f, factor)| {
                factor
                    .group
                    .involutions()
                    .into_iter()
                    .map(move |x| Syllable::new(f, x))
            })
            .collect()
    }

    fn check_letter(&self, factor: usize, element: usize) -> Result<()> {
        match self.factors.get(factor) {
            None => Err(Error::BadReference(format!(
                "factor index {factor} out of range"
            ))),
            Some(f) if element >= f.group.order() => Err(Error::BadReference(format!(
                "element index {element} out of range for factor `{}`",
                f.name
            ))),
            Some(_) => Ok(()),
        }
    }
}

/// One letter of a normal form: a non-identity element of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub factor: usize,
    pub element: usize,
}

impl Syllable {
    pub fn new(factor: usize, element: usize) -> Self {
        Syllable { factor, element }
    }
}

/// Appends a letter to an alternating stack, merging with the top syllable
/// when the factors agree.
fn push_letter(family: &FactorFamily, stack: &mut Vec<Syllable>, factor: usize, element: usize) {
    let g = family.factor(factor);
    if element == g.identity() {
        return;
    }
    match stack.last_mut() {
        Some(top) if top.factor == factor => {
            let merged = g.mul(top.element, element);
            if merged == g.identity() {
                stack.pop();
            } else {
                top.element = merged;
            }
        }
        _ => stack.push(Syllable::new(factor, element)),
    }
}

/// An element of the free product in alternating normal form.
#[derive(Clone)]
pub struct Word {
    family: Arc<FactorFamily>,
    syllables: Vec<Syllable>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.family.same_family(&other.family) && self.syllables == other.syllables
    }
}

impl Eq for Word {}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.family.id.hash(state);
        self.syllables.hash(state);
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{}]", self.to_literal())
    }
}

/// Concatenated element names, e.g. `aba^2`; the identity prints as `1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for s in &self.syllables {
            f.write_str(self.family.factor(s.factor).element_name(s.element))?;
        }
        Ok(())
    }
}

impl Word {
    pub fn identity(family: &Arc<FactorFamily>) -> Self {
        Word {
            family: Arc::clone(family),
            syllables: Vec::new(),
        }
    }

    /// Reduces an arbitrary letter sequence (identities allowed) to normal
    /// form.
    pub fn reduce<I>(family: &Arc<FactorFamily>, letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut stack = Vec::new();
        for (factor, element) in letters {
            family.check_letter(factor, element)?;
            push_letter(family, &mut stack, factor, element);
        }
        Ok(Word {
            family: Arc::clone(family),
            syllables: stack,
        })
    }

    pub fn letter(family: &Arc<FactorFamily>, factor: usize, element: usize) -> Result<Self> {
        Self::reduce(family, [(factor, element)])
    }

    /// Wraps syllables that are already alternating and nontrivial.
    pub fn from_syllables(family: &Arc<FactorFamily>, syllables: Vec<Syllable>) -> Result<Self> {
        for s in &syllables {
            family.check_letter(s.factor, s.element)?;
            if s.element == family.factor(s.factor).identity() {
                return Err(Error::BadReference(
                    "identity syllable in normal form".into(),
                ));
            }
        }
        if syllables.windows(2).any(|w| w[0].factor == w[1].factor) {
            return Err(Error::BadReference("syllables do not alternate".into()));
        }
        Ok(Word {
            family: Arc::clone(family),
            syllables,
        })
    }

    fn from_reduced(family: &Arc<FactorFamily>, syllables: Vec<Syllable>) -> Self {
        debug_assert!(syllables.windows(2).all(|w| w[0].factor != w[1].factor));
        Word {
            family: Arc::clone(family),
            syllables,
        }
    }

    /// Parses whitespace-separated `factor:element[^k]` tokens. An element
    /// is a display name or a decimal index; `k` may be negative.
    pub fn parse(family: &Arc<FactorFamily>, literal: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in literal.split_whitespace() {
            let (factor_name, rest) = token.split_once(':').ok_or_else(|| {
                Error::BadReference(format!("token `{token}` is not of the form factor:element"))
            })?;
            let f = family
                .factor_index(factor_name)
                .ok_or_else(|| Error::BadReference(format!("unknown factor `{factor_name}`")))?;
            let g = family.factor(f);
            let (x, power) = match g.element_by_name(rest) {
                Some(x) => (x, 1i64),
                None => {
                    let (base, exp) = rest.rsplit_once('^').ok_or_else(|| {
                        Error::BadReference(format!(
                            "unknown element `{rest}` in factor `{factor_name}`"
                        ))
                    })?;
                    let x = g.element_by_name(base).ok_or_else(|| {
                        Error::BadReference(format!(
                            "unknown element `{base}` in factor `{factor_name}`"
                        ))
                    })?;
                    let k: i64 = exp
                        .parse()
                        .map_err(|_| Error::BadReference(format!("bad exponent in `{token}`")))?;
                    (x, k)
                }
            };
            letters.push((f, g.pow_signed(x, power)));
        }
        Self::reduce(family, letters)
    }

    pub fn family(&self) -> &Arc<FactorFamily> {
        &self.family
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Whitespace-separated `factor:element` tokens; parses back with
    /// [`Word::parse`]. The identity renders as the empty string.
    pub fn to_literal(&self) -> String {
        self.syllables
            .iter()
            .map(|s| self.syllable_literal(*s))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn syllable_literal(&self, s: Syllable) -> String {
        format!(
            "{}:{}",
            self.family.factor_name(s.factor),
            self.family.factor(s.factor).element_name(s.element)
        )
    }

    fn check_family(&self, other: &Word) -> Result<()> {
        if self.family.same_family(&other.family) {
            Ok(())
        } else {
            Err(Error::FamilyMismatch)
        }
    }

    pub fn try_mul(&self, other: &Word) -> Result<Word> {
        self.check_family(other)?;
        let mut stack = self.syllables.clone();
        for s in &other.syllables {
            push_letter(&self.family, &mut stack, s.factor, s.element);
        }
        Ok(Word::from_reduced(&self.family, stack))
    }

    pub fn inverse(&self) -> Word {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable::new(s.factor, self.family.factor(s.factor).inv(s.element)))
            .collect();
        Word::from_reduced(&self.family, syllables)
    }

    /// `self^m`; negative exponents invert, `m = 0` gives the identity.
    pub fn pow(&self, m: i64) -> Word {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut m = m.unsigned_abs();
        let mut result = Word::identity(&self.family);
        let mut square = base;
        while m > 0 {
            if m & 1 == 1 {
                result = &result * &square;
            }
            m >>= 1;
            if m > 0 {
                square = &square * &square;
            }
        }
        result
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core` cyclically
    /// reduced, peeling equal-factor ends from the outside in.
    pub fn cyclic_reduce(&self) -> CyclicReduction {
        let mut core = self.syllables.clone();
        let mut conjugator = Vec::new();
        let mut lo = 0;
        let mut hi = core.len();
        while hi - lo >= 2 && core[lo].factor == core[hi - 1].factor {
            let first = core[lo];
            let last = core[hi - 1];
            let g = self.family.factor(first.factor);
            conjugator.push(first);
            let merged = g.mul(last.element, first.element);
            if merged == g.identity() {
                lo += 1;
                hi -= 1;
            } else {
                // x·m·y = x·(m·(y·x))·x⁻¹
                core[hi - 1].element = merged;
                lo += 1;
            }
        }
        CyclicReduction {
            core: Word::from_reduced(&self.family, core[lo..hi].to_vec()),
            conjugator: Word::from_reduced(&self.family, conjugator),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.syllables.len() < 2
            || self.syllables[0].factor != self.syllables[self.syllables.len() - 1].factor
    }

    /// Conjugacy in the free product: cyclically reduced cores of length at
    /// least two must be rotations of one another; shorter cores must lie in
    /// the same factor and be conjugate there.
    pub fn is_conjugate(&self, other: &Word) -> bool {
        assert!(
            self.family.same_family(&other.family),
            "conjugacy test across factor families"
        );
        let a = self.cyclic_reduce().core;
        let b = other.cyclic_reduce().core;
        match (a.len(), b.len()) {
            (0, 0) => true,
            (1, 1) => {
                let (x, y) = (a.syllables[0], b.syllables[0]);
                if x.factor != y.factor {
                    return false;
                }
                let g = self.family.factor(x.factor);
                g.elements().any(|h| g.conjugate(x.element, h) == y.element)
            }
            (la, lb) if la >= 2 && la == lb => is_rotation(&a.syllables, &b.syllables),
            _ => false,
        }
    }

    /// The factor element this word is conjugate to, if it has finite order.
    /// `None` means infinite order in the free product.
    pub fn torsion_core(&self) -> Option<TorsionCore> {
        let CyclicReduction { core, conjugator } = self.cyclic_reduce();
        match core.syllables.as_slice() {
            [] => Some(TorsionCore {
                syllable: None,
                conjugator,
            }),
            [s] => Some(TorsionCore {
                syllable: Some(*s),
                conjugator,
            }),
            _ => None,
        }
    }

    pub fn is_involution(&self) -> bool {
        match self.torsion_core() {
            Some(TorsionCore {
                syllable: Some(s), ..
            }) => self.family.factor(s.factor).is_involution(s.element),
            _ => false,
        }
    }

    /// Deletes every syllable from the factors in `kill` and re-reduces.
    pub fn deletion_retraction(&self, kill: &[usize]) -> Word {
        let mut stack = Vec::new();
        for s in self.syllables.iter().filter(|s| !kill.contains(&s.factor)) {
            push_letter(&self.family, &mut stack, s.factor, s.element);
        }
        Word::from_reduced(&self.family, stack)
    }

    /// Rotation starting at syllable `shift`.
    pub fn rotate(&self, shift: usize) -> Word {
        let len = self.syllables.len();
        if len == 0 {
            return self.clone();
        }
        let shift = shift % len;
        let mut syllables = self.syllables[shift..].to_vec();
        syllables.extend_from_slice(&self.syllables[..shift]);
        Word::from_reduced(&self.family, syllables)
    }

    fn prefix(&self, len: usize) -> Word {
        Word::from_reduced(&self.family, self.syllables[..len].to_vec())
    }
}

impl Mul for &Word {
    type Output = Word;

    /// Panics when the words come from different families; use
    /// [`Word::try_mul`] to get an error instead.
    fn mul(self, rhs: &Word) -> Word {
        self.try_mul(rhs)
            .expect("multiplication across factor families")
    }
}

fn is_rotation(a: &[Syllable], b: &[Syllable]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let doubled: Vec<Syllable> = a.iter().chain(a).copied().collect();
    crate::strings::find_substring(&doubled, b).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub core: Word,
    pub conjugator: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionCore {
    /// `None` when the word is the identity.
    pub syllable: Option<Syllable>,
    pub conjugator: Word,
}

/// A cyclically reduced word together with the index of its
/// lexicographically least rotation under `(factor, element)` order.
#[derive(Debug, Clone)]
pub struct CyclicWord {
    word: Word,
    rotation: usize,
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.word.family.same_family(&other.word.family)
            && self.canonical_syllables() == other.canonical_syllables()
    }
}

impl Eq for CyclicWord {}

impl CyclicWord {
    pub fn new(word: Word) -> Result<Self> {
        if !word.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced);
        }
        let rotation = crate::strings::least_rotation(&word.syllables);
        Ok(CyclicWord { word, rotation })
    }

    /// Cyclic core of an arbitrary word.
    pub fn from_core(word: &Word) -> Self {
        Self::new(word.cyclic_reduce().core).expect("cyclic core is cyclically reduced")
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn rotation(&self) -> usize {
        self.rotation
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn canonical(&self) -> Word {
        self.word.rotate(self.rotation)
    }

    pub fn is_canonical(&self) -> bool {
        self.rotation == 0
    }

    fn canonical_syllables(&self) -> Vec<Syllable> {
        let s = &self.word.syllables;
        s[self.rotation..]
            .iter()
            .chain(&s[..self.rotation])
            .copied()
            .collect()
    }

    /// Looks for a rotation of the form `c₁ z c₂ z⁻¹` with `c₁, c₂` factor
    /// involutions, scanning rotations in order and returning the first hit.
    /// Odd lengths never match.
    pub fn two_involution_witness(&self) -> Option<TwoInvolutionWitness> {
        let syl = &self.word.syllables;
        let len = syl.len();
        if len < 2 || len % 2 == 1 {
            return None;
        }
        let family = &self.word.family;
        let half = len / 2;
        let at = |shift: usize, i: usize| syl[(shift + i) % len];
        let is_inverse_pair = |x: Syllable, y: Syllable| {
            x.factor == y.factor && family.factor(x.factor).inv(x.element) == y.element
        };
        let involution = |s: Syllable| family.factor(s.factor).is_involution(s.element);
        for shift in 0..len {
            if !involution(at(shift, 0)) || !involution(at(shift, half)) {
                continue;
            }
            if (1..half).all(|i| is_inverse_pair(at(shift, i), at(shift, len - i))) {
                let witness = TwoInvolutionWitness {
                    shift,
                    half,
                    first: at(shift, 0),
                    second: at(shift, half),
                    conjugator: Word::from_reduced(
                        family,
                        (1..half).map(|i| at(shift, i)).collect(),
                    ),
                    prefix: self.word.prefix(shift),
                };
                debug_assert!(witness.verify(&self.word));
                return Some(witness);
            }
        }
        None
    }
}

/// Rotation `shift` of a cyclic word reads `c₁ z c₂ z⁻¹`, so the word is
/// `c·d` with `c = p c₁ p⁻¹` and `d = p z c₂ z⁻¹ p⁻¹`, `p` the first `shift`
/// syllables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoInvolutionWitness {
    pub shift: usize,
    /// Half the word length; `c₂` sits at offset `half` from `c₁`.
    pub half: usize,
    pub first: Syllable,
    pub second: Syllable,
    /// `z`
    pub conjugator: Word,
    /// `p`
    pub prefix: Word,
}

impl TwoInvolutionWitness {
    /// The involutions `(c, d)` with `c·d` equal to the original word.
    pub fn involutions(&self) -> (Word, Word) {
        let family = self.prefix.family();
        let p = &self.prefix;
        let p_inv = p.inverse();
        let c1 = Word::from_reduced(family, vec![self.first]);
        let c2 = Word::from_reduced(family, vec![self.second]);
        let c = &(p * &c1) * &p_inv;
        let z = &self.conjugator;
        let d = &(&(&(p * z) * &c2) * &z.inverse()) * &p_inv;
        (c, d)
    }

    /// `c² = d² = 1`, both nontrivial involutions, and `c·d = word`.
    pub fn verify(&self, word: &Word) -> bool {
        let (c, d) = self.involutions();
        c.is_involution()
            && d.is_involution()
            && (&c * &c).is_identity()
            && (&d * &d).is_identity()
            && &c * &d == *word
    }
}
