use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use parking_lot::RwLock;

use super::engine::{annular_sum, nc_sum};
use super::{kappa_multiplicative, CumulantSource, LetterId, MomentSource, Word};
use crate::annular::{enumerate_nc, enumerate_ps_nc};
use crate::error::{Error, Result};
use crate::perm::{AnnulusShape, PartitionedPermutation};
use crate::Rational;

/// `phi(word)`; the empty word has moment 1.
pub fn word_phi(source: &dyn CumulantSource, word: &[LetterId]) -> Result<Rational> {
    if word.is_empty() {
        return Ok(Rational::one());
    }
    if let Some(v) = source.phi_direct(word) {
        return v;
    }
    nc_sum(word, source, false)
}

/// `phi_2(left, right)`; zero when either side is a scalar.
pub fn word_phi2(source: &dyn CumulantSource, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
    if left.is_empty() || right.is_empty() {
        return Ok(Rational::zero());
    }
    if let Some(v) = source.phi2_direct(left, right) {
        return v;
    }
    annular_sum(left, right, source, false)
}

/// `phi(word)` by listing `NC(n)`; a slow reference for [`word_phi`].
pub fn phi_by_enumeration(source: &dyn CumulantSource, word: &[LetterId]) -> Result<Rational> {
    let mut total = Rational::zero();
    for p in enumerate_nc(word.len())?.iter() {
        total += kappa_multiplicative(&PartitionedPermutation::from_permutation(p.clone()), word, source)?;
    }
    Ok(total)
}

/// `phi_2(left, right)` by listing the annular partitioned permutations.
pub fn phi2_by_enumeration(source: &dyn CumulantSource, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
    let shape = AnnulusShape::new(left.len(), right.len());
    let mut word = left.to_vec();
    word.extend_from_slice(right);
    let mut total = Rational::zero();
    for x in enumerate_ps_nc(shape)? {
        total += kappa_multiplicative(&x, &word, source)?;
    }
    Ok(total)
}

/// Cumulants recovered from moments by subtracting every lower term from the
/// top one, memoised per word.
pub struct Inverter<M> {
    moments: M,
    first: RwLock<HashMap<Word, Rational>>,
    second: RwLock<HashMap<(Word, Word), Rational>>,
}

impl<M: MomentSource> Inverter<M> {
    pub fn new(moments: M) -> Self {
        Inverter { moments, first: RwLock::new(HashMap::new()), second: RwLock::new(HashMap::new()) }
    }

    pub fn moments(&self) -> &M {
        &self.moments
    }
}

impl<M: MomentSource> CumulantSource for Inverter<M> {
    fn family_of(&self, _letter: LetterId) -> usize {
        0
    }

    fn kappa(&self, word: &[LetterId]) -> Result<Rational> {
        if word.is_empty() {
            return Err(Error::Invalid("cumulant of the empty word".into()));
        }
        if let Some(v) = self.first.read().get(word) {
            return Ok(v.clone());
        }
        let v = if self.moments.kappa_vanishes(word) {
            Rational::zero()
        } else {
            self.moments.phi(word)? - nc_sum(word, self, true)?
        };
        self.first.write().insert(word.to_vec(), v.clone());
        Ok(v)
    }

    fn kappa2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::Invalid("second-order cumulant with an empty side".into()));
        }
        let key = (left.to_vec(), right.to_vec());
        if let Some(v) = self.second.read().get(&key) {
            return Ok(v.clone());
        }
        let v = if self.moments.kappa2_vanishes(left, right) {
            Rational::zero()
        } else {
            self.moments.phi2(left, right)? - annular_sum(left, right, self, true)?
        };
        self.second.write().insert(key, v.clone());
        Ok(v)
    }

    fn phi_direct(&self, word: &[LetterId]) -> Option<Result<Rational>> {
        Some(self.moments.phi(word))
    }

    fn phi2_direct(&self, left: &[LetterId], right: &[LetterId]) -> Option<Result<Rational>> {
        Some(self.moments.phi2(left, right))
    }
}

/// Explicit cumulant values. Words up to `truncation` that are absent count
/// as zero; longer words are an error.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CumulantTable {
    pub first: BTreeMap<Word, Rational>,
    pub second: BTreeMap<(Word, Word), Rational>,
    pub truncation: usize,
}

fn lookup<K: Ord>(map: &BTreeMap<K, Rational>, key: &K, len: usize, truncation: usize, what: &str) -> Result<Rational> {
    if len > truncation {
        return Err(Error::Missing(format!("{what} of total length {len} beyond truncation {truncation}")));
    }
    Ok(map.get(key).cloned().unwrap_or_else(Rational::zero))
}

impl CumulantSource for CumulantTable {
    fn family_of(&self, _letter: LetterId) -> usize {
        0
    }

    fn kappa(&self, word: &[LetterId]) -> Result<Rational> {
        lookup(&self.first, &word.to_vec(), word.len(), self.truncation, "cumulant")
    }

    fn kappa2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        let key = (left.to_vec(), right.to_vec());
        lookup(&self.second, &key, left.len() + right.len(), self.truncation, "second-order cumulant")
    }
}

/// Explicit moment values, with the same absent-means-zero rule as [`CumulantTable`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MomentTable {
    pub first: BTreeMap<Word, Rational>,
    pub second: BTreeMap<(Word, Word), Rational>,
    pub truncation: usize,
}

impl MomentSource for MomentTable {
    fn phi(&self, word: &[LetterId]) -> Result<Rational> {
        if word.is_empty() {
            return Ok(Rational::one());
        }
        lookup(&self.first, &word.to_vec(), word.len(), self.truncation, "moment")
    }

    fn phi2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        if left.is_empty() || right.is_empty() {
            return Ok(Rational::zero());
        }
        let key = (left.to_vec(), right.to_vec());
        lookup(&self.second, &key, left.len() + right.len(), self.truncation, "fluctuation moment")
    }
}

/// All nonempty words over `letters` of length at most `max_len`, shortest first.
pub fn words_up_to(letters: &[LetterId], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &l in letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Ordered pairs of nonempty words over `letters` with total length at most `order`.
pub fn pairs_up_to(letters: &[LetterId], order: usize) -> Vec<(Word, Word)> {
    let words = words_up_to(letters, order.saturating_sub(1));
    let mut out = Vec::new();
    for a in &words {
        for b in &words {
            if a.len() + b.len() <= order {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Moments of every word (and pair of words) over `letters` up to total length `order`.
pub fn phi_from_kappa_table(source: &dyn CumulantSource, letters: &[LetterId], order: usize) -> Result<MomentTable> {
    let mut t = MomentTable { truncation: order, ..Default::default() };
    for w in words_up_to(letters, order) {
        let v = word_phi(source, &w)?;
        t.first.insert(w, v);
    }
    for (a, b) in pairs_up_to(letters, order) {
        let v = word_phi2(source, &a, &b)?;
        t.second.insert((a, b), v);
    }
    Ok(t)
}

/// Cumulants of every word (and pair) over `letters` up to total length `order`.
pub fn kappa_from_phi<M: MomentSource>(moments: M, letters: &[LetterId], order: usize) -> Result<CumulantTable> {
    let inv = Inverter::new(moments);
    let mut t = CumulantTable { truncation: order, ..Default::default() };
    for w in words_up_to(letters, order) {
        let v = inv.kappa(&w)?;
        t.first.insert(w, v);
    }
    for (a, b) in pairs_up_to(letters, order) {
        let v = inv.kappa2(&a, &b)?;
        t.second.insert((a, b), v);
    }
    Ok(t)
}

impl<T: MomentSource + ?Sized> MomentSource for &T {
    fn phi(&self, word: &[LetterId]) -> Result<Rational> {
        (**self).phi(word)
    }
    fn phi2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        (**self).phi2(left, right)
    }
    fn kappa_vanishes(&self, word: &[LetterId]) -> bool {
        (**self).kappa_vanishes(word)
    }
    fn kappa2_vanishes(&self, left: &[LetterId], right: &[LetterId]) -> bool {
        (**self).kappa2_vanishes(left, right)
    }
}
