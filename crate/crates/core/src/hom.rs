//! Homomorphisms of free products induced by a quotient of one factor.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::SubgroupSet;
use crate::word::{FactorFamily, Syllable, Word};

/// The map `G₁ * … * Gᵢ * … → G₁ * … * (Gᵢ/N) * …` that projects syllables of
/// factor `i` and fixes every other factor.
#[derive(Debug, Clone)]
pub struct FactorQuotient {
    source: Arc<FactorFamily>,
    target: Arc<FactorFamily>,
    factor: usize,
    projection: Vec<usize>,
}

impl FactorQuotient {
    pub fn new(family: &Arc<FactorFamily>, factor: usize, normal: &SubgroupSet) -> Result<Self> {
        if factor >= family.len() {
            return Err(Error::BadReference(format!(
                "factor index {factor} out of range"
            )));
        }
        let (quotient, projection) = family.factor(factor).quotient(normal)?;
        let factors = family
            .factors()
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let group = if j == factor {
                    quotient.clone()
                } else {
                    f.group.clone()
                };
                (f.name.clone(), group)
            })
            .collect();
        let target = FactorFamily::derived(factors, family.n(), family.mode())?;
        Ok(FactorQuotient {
            source: Arc::clone(family),
            target,
            factor,
            projection,
        })
    }

    pub fn source(&self) -> &Arc<FactorFamily> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FactorFamily> {
        &self.target
    }

    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn project(&self, element: usize) -> usize {
        self.projection[element]
    }

    pub fn apply(&self, word: &Word) -> Result<Word> {
        if !word.family().same_family(&self.source) {
            return Err(Error::FamilyMismatch);
        }
        let letters = word
            .syllables()
            .iter()
            .map(|&Syllable { factor, element }| {
                if factor == self.factor {
                    (factor, self.projection[element])
                } else {
                    (factor, element)
                }
            });
        Word::reduce(&self.target, letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::word::Mode;

    fn z9_z3() -> Arc<FactorFamily> {
        FactorFamily::new(
            vec![
                ("g1".into(), FiniteGroup::cyclic_named(9, "x").unwrap()),
                ("g2".into(), FiniteGroup::cyclic_named(3, "b").unwrap()),
            ],
            665,
            Mode::Strict,
        )
        .unwrap()
    }

    #[test]
    fn killed_syllables_collapse() {
        let f = z9_z3();
        let n = f.factor(0).subgroup_generated(&[3]);
        let phi = FactorQuotient::new(&f, 0, &n).unwrap();
        let w = Word::parse(&f, "g2:b^-1 g1:x^3 g2:b g2:b^-2 g1:x^3 g2:b^2 g1:x").unwrap();
        let image = phi.apply(&w).unwrap();
        assert_eq!(image.syllables(), &[Syllable::new(0, 1)]);

        let w = Word::parse(&f, "g2:b^-1 g1:x g2:b").unwrap();
        let image = phi.apply(&w).unwrap();
        assert_eq!(image.len(), 3);
        assert_eq!(image.to_literal(), "g2:b^2 g1:x g2:b");
    }

    #[test]
    fn whole_factor_matches_deletion() {
        let f = z9_z3();
        let whole = f.factor(0).normal_closure(&[1]);
        let phi = FactorQuotient::new(&f, 0, &whole).unwrap();
        let w = Word::parse(&f, "g1:x g2:b g1:x^5 g2:b g1:x^2 g2:b^2").unwrap();
        let image = phi.apply(&w).unwrap();
        assert_eq!(image.syllables(), w.deletion_retraction(&[0]).syllables());
        assert_eq!(image.to_literal(), "g2:b");
    }

    #[test]
    fn rejects_non_normal_and_foreign_words() {
        let f = FactorFamily::new(
            vec![
                ("g1".into(), FiniteGroup::symmetric(3).unwrap()),
                ("g2".into(), FiniteGroup::cyclic(2).unwrap()),
            ],
            665,
            Mode::Strict,
        )
        .unwrap();
        let s3 = f.factor(0);
        let h = s3.subgroup_generated(&[s3.involutions()[0]]);
        assert!(matches!(
            FactorQuotient::new(&f, 0, &h),
            Err(Error::NotNormal(_))
        ));

        let other = z9_z3();
        let n = other.factor(0).subgroup_generated(&[3]);
        let phi = FactorQuotient::new(&other, 0, &n).unwrap();
        assert!(matches!(
            phi.apply(&Word::letter(&f, 0, 1).unwrap()),
            Err(Error::FamilyMismatch)
        ));
    }
}
