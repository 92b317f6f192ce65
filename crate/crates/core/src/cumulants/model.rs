use num_traits::{One, Zero};

use super::transform::{CumulantTable, Inverter, MomentTable};
use super::{Alphabet, CumulantSource, LetterId, MomentSource};
use crate::error::{Error, Result};
use crate::Rational;

/// Distribution of one free family.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyLaw {
    /// One self-adjoint letter, `kappa_2 = 1`, all else zero.
    Semicircular,
    /// A letter and its adjoint, `kappa_2(c, c*) = kappa_2(c*, c) = 1`, all else zero.
    Circular,
    /// One self-adjoint letter with every first-order cumulant equal to the rate.
    FreePoisson(Rational),
    /// A letter and its adjoint with Haar unitary moments and fluctuations.
    HaarUnitary,
    /// Explicit cumulants.
    Cumulants(CumulantTable),
    /// Explicit moments, inverted on demand.
    Moments(MomentTable),
}

impl FamilyLaw {
    pub fn rule_name(&self) -> Option<&'static str> {
        match self {
            FamilyLaw::Semicircular => Some("semicircular"),
            FamilyLaw::Circular => Some("circular"),
            FamilyLaw::FreePoisson(_) => Some("free_poisson"),
            FamilyLaw::HaarUnitary => Some("haar_unitary"),
            _ => None,
        }
    }
}

/// Moment data of a single family.
pub(crate) enum FamilyMoments {
    Haar { plus: LetterId },
    Table(MomentTable),
}

impl FamilyMoments {
    fn charge(plus: LetterId, word: &[LetterId]) -> i64 {
        word.iter().map(|&l| if l == plus { 1 } else { -1 }).sum()
    }
}

impl MomentSource for FamilyMoments {
    fn phi(&self, word: &[LetterId]) -> Result<Rational> {
        match self {
            FamilyMoments::Haar { plus } => Ok(if Self::charge(*plus, word) == 0 { Rational::one() } else { Rational::zero() }),
            FamilyMoments::Table(t) => t.phi(word),
        }
    }

    fn phi2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        match self {
            FamilyMoments::Haar { plus } => {
                let (k, l) = (Self::charge(*plus, left), Self::charge(*plus, right));
                Ok(if k == -l { Rational::from_integer(k.abs().into()) } else { Rational::zero() })
            }
            FamilyMoments::Table(t) => t.phi2(left, right),
        }
    }

    // Haar moments are invariant under u -> lambda u with |lambda| = 1, and a
    // cumulant of a word of net charge c picks up lambda^c, so it vanishes
    // unless c = 0.
    fn kappa_vanishes(&self, word: &[LetterId]) -> bool {
        matches!(self, FamilyMoments::Haar { plus } if Self::charge(*plus, word) != 0)
    }

    fn kappa2_vanishes(&self, left: &[LetterId], right: &[LetterId]) -> bool {
        matches!(self, FamilyMoments::Haar { plus } if Self::charge(*plus, left) + Self::charge(*plus, right) != 0)
    }
}

struct Family {
    law: FamilyLaw,
    inverter: Option<Inverter<FamilyMoments>>,
}

/// Several mutually free families over one alphabet.
pub struct CumulantModel {
    alphabet: Alphabet,
    families: Vec<Family>,
    truncation: usize,
}

/// Truncation used by built-in models unless stated otherwise.
pub const DEFAULT_TRUNCATION: usize = 32;

/// Models are equal when they have the same alphabet, laws and truncation.
impl PartialEq for CumulantModel {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.truncation == other.truncation
            && self.families.len() == other.families.len()
            && self.families.iter().zip(&other.families).all(|(a, b)| a.law == b.law)
    }
}

impl std::fmt::Debug for CumulantModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CumulantModel")
            .field("alphabet", &self.alphabet)
            .field("laws", &self.families.iter().map(|x| &x.law).collect::<Vec<_>>())
            .field("truncation", &self.truncation)
            .finish()
    }
}

impl CumulantModel {
    pub fn new(truncation: usize) -> Self {
        CumulantModel { alphabet: Alphabet::new(), families: Vec::new(), truncation }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn law(&self, family: usize) -> &FamilyLaw {
        &self.families[family].law
    }

    pub fn letter(&self, name: &str) -> Result<LetterId> {
        self.alphabet.id(name).ok_or_else(|| Error::Invalid(format!("unknown letter '{name}'")))
    }

    /// Adds a family. `letters` lists `(name, star)` pairs; `star == name`
    /// marks a self-adjoint letter, otherwise both letters are created.
    pub fn add_family(&mut self, family: &str, letters: &[(&str, &str)], law: FamilyLaw) -> Result<Vec<LetterId>> {
        if self.alphabet.family_index(family).is_some() {
            return Err(Error::Invalid(format!("family '{family}' defined twice")));
        }
        if letters.is_empty() {
            return Err(Error::Invalid(format!("family '{family}' has no letters")));
        }
        let mut alphabet = self.alphabet.clone();
        let mut ids = Vec::new();
        for &(name, star) in letters {
            if name == star {
                ids.push(alphabet.add_self_adjoint(name, family)?);
            } else {
                let (a, b) = alphabet.add_pair(name, star, family)?;
                ids.push(a);
                ids.push(b);
            }
        }
        let pair = ids.len() == 2 && alphabet.star(ids[0]) == ids[1];
        let single = ids.len() == 1 && alphabet.is_self_adjoint(ids[0]);
        let inverter = match &law {
            FamilyLaw::Semicircular | FamilyLaw::FreePoisson(_) if !single => {
                return Err(Error::Invalid(format!("family '{family}' needs exactly one self-adjoint letter")));
            }
            FamilyLaw::Circular | FamilyLaw::HaarUnitary if !pair => {
                return Err(Error::Invalid(format!("family '{family}' needs a letter and its adjoint")));
            }
            FamilyLaw::HaarUnitary => Some(Inverter::new(FamilyMoments::Haar { plus: ids[0] })),
            FamilyLaw::Moments(t) => Some(Inverter::new(FamilyMoments::Table(t.clone()))),
            _ => None,
        };
        self.alphabet = alphabet;
        self.families.push(Family { law, inverter });
        Ok(ids)
    }

    pub fn add_semicircular(&mut self, name: &str) -> Result<LetterId> {
        Ok(self.add_family(name, &[(name, name)], FamilyLaw::Semicircular)?[0])
    }

    pub fn add_circular(&mut self, name: &str, star: &str) -> Result<(LetterId, LetterId)> {
        let ids = self.add_family(name, &[(name, star)], FamilyLaw::Circular)?;
        Ok((ids[0], ids[1]))
    }

    pub fn add_free_poisson(&mut self, name: &str, rate: Rational) -> Result<LetterId> {
        Ok(self.add_family(name, &[(name, name)], FamilyLaw::FreePoisson(rate))?[0])
    }

    pub fn add_haar_unitary(&mut self, name: &str, star: &str) -> Result<(LetterId, LetterId)> {
        let ids = self.add_family(name, &[(name, star)], FamilyLaw::HaarUnitary)?;
        Ok((ids[0], ids[1]))
    }

    fn single_family(&self, word: &[LetterId]) -> Option<usize> {
        let f = self.alphabet.family(*word.first()?);
        word.iter().all(|&l| self.alphabet.family(l) == f).then_some(f)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len > self.truncation {
            Err(Error::Missing(format!("words of total length {len} exceed truncation {}", self.truncation)))
        } else {
            Ok(())
        }
    }
}

impl CumulantSource for CumulantModel {
    fn family_of(&self, letter: LetterId) -> usize {
        self.alphabet.family(letter)
    }

    fn kappa(&self, word: &[LetterId]) -> Result<Rational> {
        if word.is_empty() {
            return Err(Error::Invalid("cumulant of the empty word".into()));
        }
        self.check_len(word.len())?;
        let Some(f) = self.single_family(word) else {
            return Ok(Rational::zero());
        };
        let fam = &self.families[f];
        let n = word.len();
        Ok(match &fam.law {
            FamilyLaw::Semicircular => Rational::from_integer((n == 2).into()),
            FamilyLaw::Circular => {
                let hit = n == 2 && word[0] != word[1];
                Rational::from_integer(hit.into())
            }
            FamilyLaw::FreePoisson(rate) => rate.clone(),
            FamilyLaw::Cumulants(t) => t.kappa(word)?,
            FamilyLaw::HaarUnitary | FamilyLaw::Moments(_) => fam.inverter.as_ref().expect("built").kappa(word)?,
        })
    }

    fn kappa2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::Invalid("second-order cumulant with an empty side".into()));
        }
        self.check_len(left.len() + right.len())?;
        let mut word = left.to_vec();
        word.extend_from_slice(right);
        let Some(f) = self.single_family(&word) else {
            return Ok(Rational::zero());
        };
        let fam = &self.families[f];
        Ok(match &fam.law {
            FamilyLaw::Semicircular | FamilyLaw::Circular | FamilyLaw::FreePoisson(_) => Rational::zero(),
            FamilyLaw::Cumulants(t) => t.kappa2(left, right)?,
            FamilyLaw::HaarUnitary | FamilyLaw::Moments(_) => {
                fam.inverter.as_ref().expect("built").kappa2(left, right)?
            }
        })
    }

    fn phi_direct(&self, word: &[LetterId]) -> Option<Result<Rational>> {
        let f = self.single_family(word)?;
        let inv = self.families[f].inverter.as_ref()?;
        Some(self.check_len(word.len()).and_then(|_| inv.moments().phi(word)))
    }

    fn phi2_direct(&self, left: &[LetterId], right: &[LetterId]) -> Option<Result<Rational>> {
        let f = self.single_family(left)?;
        if self.single_family(right)? != f {
            return None;
        }
        let inv = self.families[f].inverter.as_ref()?;
        Some(self.check_len(left.len() + right.len()).and_then(|_| inv.moments().phi2(left, right)))
    }

    fn max_block(&self, family: usize) -> usize {
        match self.families[family].law {
            FamilyLaw::Semicircular | FamilyLaw::Circular => 2,
            _ => usize::MAX,
        }
    }

    fn second_order_vanishes(&self, family: usize) -> bool {
        match &self.families[family].law {
            FamilyLaw::Semicircular | FamilyLaw::Circular | FamilyLaw::FreePoisson(_) => true,
            FamilyLaw::Cumulants(t) => t.second.values().all(|v| v.is_zero()),
            _ => false,
        }
    }
}
