//! Moment and cumulant calculus for words over mutually free families.
//!
//! A [`CumulantSource`] supplies first- and second-order cumulants of words;
//! moments are assembled from it by summing over non-crossing disc and
//! annular structures. An [`Inverter`] runs the other direction, turning a
//! [`MomentSource`] into cumulants by peeling off the top term.
//!
//! Inside a two-cycle block the cycle with the smaller least point supplies
//! the first argument group, and every cycle is read from its least point.

mod engine;
mod model;
mod products;
mod transform;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::PartitionedPermutation;
use crate::Rational;

pub use engine::{annular_sum, nc_sum};
pub use model::{CumulantModel, FamilyLaw, DEFAULT_TRUNCATION};
pub use products::{
    element_cumulants, first_order_terms, products_as_arguments_first, products_as_arguments_second,
    second_order_terms, ElementCumulants, ElementMoments, SelectionForm,
};
pub use transform::{
    kappa_from_phi, phi2_by_enumeration, phi_from_kappa_table, phi_by_enumeration, word_phi, word_phi2, words_up_to, pairs_up_to, CumulantTable,
    Inverter, MomentTable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LetterId(pub u16);

impl LetterId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Word = Vec<LetterId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub family: usize,
    pub star: LetterId,
}

impl Letter {
    pub fn is_self_adjoint(&self, id: LetterId) -> bool {
        self.star == id
    }
}

/// Letters grouped into free families, closed under `*`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Alphabet {
    letters: Vec<Letter>,
    families: Vec<String>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn family_index(&self, family: &str) -> Option<usize> {
        self.families.iter().position(|f| f == family)
    }

    fn family_or_insert(&mut self, family: &str) -> usize {
        match self.family_index(family) {
            Some(i) => i,
            None => {
                self.families.push(family.to_string());
                self.families.len() - 1
            }
        }
    }

    fn push(&mut self, name: &str, family: usize, star: LetterId) -> Result<LetterId> {
        if name.is_empty() || name.contains(['.', '|', ' ']) {
            return Err(Error::Invalid(format!("bad letter name '{name}'")));
        }
        if self.id(name).is_some() {
            return Err(Error::Invalid(format!("letter '{name}' defined twice")));
        }
        self.letters.push(Letter { name: name.to_string(), family, star });
        Ok(LetterId(self.letters.len() as u16 - 1))
    }

    pub fn add_self_adjoint(&mut self, name: &str, family: &str) -> Result<LetterId> {
        let f = self.family_or_insert(family);
        let id = LetterId(self.letters.len() as u16);
        self.push(name, f, id)
    }

    /// Adds `name` and its adjoint `star_name`, returning both ids.
    pub fn add_pair(&mut self, name: &str, star_name: &str, family: &str) -> Result<(LetterId, LetterId)> {
        let f = self.family_or_insert(family);
        let a = LetterId(self.letters.len() as u16);
        let b = LetterId(a.0 + 1);
        self.push(name, f, b)?;
        self.push(star_name, f, a)?;
        Ok((a, b))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = LetterId> {
        (0..self.letters.len() as u16).map(LetterId)
    }

    pub fn letter(&self, id: LetterId) -> &Letter {
        &self.letters[id.index()]
    }

    pub fn id(&self, name: &str) -> Option<LetterId> {
        self.letters.iter().position(|l| l.name == name).map(|i| LetterId(i as u16))
    }

    pub fn name(&self, id: LetterId) -> &str {
        &self.letters[id.index()].name
    }

    pub fn family(&self, id: LetterId) -> usize {
        self.letters[id.index()].family
    }

    pub fn family_name(&self, family: usize) -> &str {
        &self.families[family]
    }

    pub fn families(&self) -> &[String] {
        &self.families
    }

    pub fn family_letters(&self, family: usize) -> Vec<LetterId> {
        self.ids().filter(|&l| self.family(l) == family).collect()
    }

    pub fn star(&self, id: LetterId) -> LetterId {
        self.letters[id.index()].star
    }

    pub fn is_self_adjoint(&self, id: LetterId) -> bool {
        self.star(id) == id
    }

    /// Adjoint of a word: reversed, each letter starred.
    pub fn adjoint(&self, word: &[LetterId]) -> Word {
        word.iter().rev().map(|&l| self.star(l)).collect()
    }

    /// Parses letters joined by `.`.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Vec::new());
        }
        let mut col = 1;
        s.split('.')
            .map(|part| {
                let here = col;
                col += part.chars().count() + 1;
                self.id(part.trim()).ok_or_else(|| Error::Parse {
                    column: here,
                    message: format!("unknown letter '{}'", part.trim()),
                })
            })
            .collect()
    }

    pub fn format_word(&self, word: &[LetterId]) -> String {
        word.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(".")
    }

    pub fn display<'a>(&'a self, word: &'a [LetterId]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Alphabet, &'a [LetterId]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format_word(self.1))
            }
        }
        D(self, word)
    }
}

/// Supplies cumulants of words.
///
/// Letters reported in different families are treated as free: the summation
/// engine never asks for a cumulant of a block mixing families.
pub trait CumulantSource: Send + Sync {
    fn family_of(&self, letter: LetterId) -> usize;
    fn kappa(&self, word: &[LetterId]) -> Result<Rational>;
    fn kappa2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational>;

    /// A closed form for the moment, when the source has one.
    fn phi_direct(&self, _word: &[LetterId]) -> Option<Result<Rational>> {
        None
    }

    fn phi2_direct(&self, _left: &[LetterId], _right: &[LetterId]) -> Option<Result<Rational>> {
        None
    }

    /// Largest block size with a possibly nonzero cumulant.
    fn max_block(&self, _family: usize) -> usize {
        usize::MAX
    }

    /// All second-order cumulants of the family are zero.
    fn second_order_vanishes(&self, _family: usize) -> bool {
        false
    }
}

/// Supplies moments and fluctuation moments of words.
pub trait MomentSource: Send + Sync {
    fn phi(&self, word: &[LetterId]) -> Result<Rational>;
    fn phi2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational>;

    /// The cumulant of `word` is known to vanish without computing it.
    fn kappa_vanishes(&self, _word: &[LetterId]) -> bool {
        false
    }

    fn kappa2_vanishes(&self, _left: &[LetterId], _right: &[LetterId]) -> bool {
        false
    }
}

impl<T: CumulantSource + ?Sized> CumulantSource for &T {
    fn family_of(&self, letter: LetterId) -> usize {
        (**self).family_of(letter)
    }
    fn kappa(&self, word: &[LetterId]) -> Result<Rational> {
        (**self).kappa(word)
    }
    fn kappa2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        (**self).kappa2(left, right)
    }
    fn phi_direct(&self, word: &[LetterId]) -> Option<Result<Rational>> {
        (**self).phi_direct(word)
    }
    fn phi2_direct(&self, left: &[LetterId], right: &[LetterId]) -> Option<Result<Rational>> {
        (**self).phi2_direct(left, right)
    }
    fn max_block(&self, family: usize) -> usize {
        (**self).max_block(family)
    }
    fn second_order_vanishes(&self, family: usize) -> bool {
        (**self).second_order_vanishes(family)
    }
}

/// `kappa_(U, pi)` evaluated on `word`.
///
/// Each block of `U` holds one or two cycles of `pi`; more is an error.
pub fn kappa_multiplicative(
    x: &PartitionedPermutation,
    word: &[LetterId],
    source: &dyn CumulantSource,
) -> Result<Rational> {
    if x.size() != word.len() {
        return Err(Error::SizeMismatch(format!("{x} against a word of length {}", word.len())));
    }
    let letters = |c: &Vec<usize>| -> Word { c.iter().map(|&i| word[i]).collect() };
    let mut acc = Rational::from_integer(1.into());
    for group in x.grouped_cycles() {
        let v = match group.as_slice() {
            [c] => source.kappa(&letters(c))?,
            [c1, c2] => source.kappa2(&letters(c1), &letters(c2))?,
            _ => {
                return Err(Error::Invalid(format!("{x} has a block joining {} cycles", group.len())));
            }
        };
        if v.is_zero() {
            return Ok(v);
        }
        acc *= v;
    }
    Ok(acc)
}

/// Same as [`kappa_multiplicative`]; blocks mixing free families contribute zero.
pub fn free_families_kappa(
    x: &PartitionedPermutation,
    word: &[LetterId],
    source: &dyn CumulantSource,
) -> Result<Rational> {
    for group in x.grouped_cycles() {
        let mut fams = group.iter().flatten().map(|&i| source.family_of(word[i]));
        let first = fams.next();
        if fams.any(|f| Some(f) != first) {
            return Ok(Rational::zero());
        }
    }
    kappa_multiplicative(x, word, source)
}
