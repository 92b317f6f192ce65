use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use parking_lot::RwLock;

use super::transform::{word_phi, word_phi2, Inverter};
use super::{kappa_multiplicative, CumulantSource, LetterId, MomentSource, Word};
use crate::annular::{enumerate_nc, enumerate_ps_nc};
use crate::error::{Error, Result};
use crate::perm::{AnnulusShape, PartitionedPermutation, Permutation, SetPartition};
use crate::Rational;

/// Moments of words in a fixed list of elements, each element a word of
/// letters of an underlying cumulant source.
pub struct ElementMoments<'a> {
    base: &'a dyn CumulantSource,
    elements: Vec<Word>,
    first: RwLock<HashMap<Word, Rational>>,
    second: RwLock<HashMap<(Word, Word), Rational>>,
}

impl<'a> ElementMoments<'a> {
    pub fn new(base: &'a dyn CumulantSource, elements: Vec<Word>) -> Self {
        ElementMoments { base, elements, first: RwLock::new(HashMap::new()), second: RwLock::new(HashMap::new()) }
    }

    /// Element word to letter word.
    pub fn expand(&self, word: &[LetterId]) -> Word {
        word.iter().flat_map(|e| self.elements[e.index()].iter().copied()).collect()
    }
}

impl MomentSource for ElementMoments<'_> {
    fn phi(&self, word: &[LetterId]) -> Result<Rational> {
        let w = self.expand(word);
        if let Some(v) = self.first.read().get(&w) {
            return Ok(v.clone());
        }
        let v = word_phi(self.base, &w)?;
        self.first.write().insert(w, v.clone());
        Ok(v)
    }

    fn phi2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        let key = (self.expand(left), self.expand(right));
        if let Some(v) = self.second.read().get(&key) {
            return Ok(v.clone());
        }
        let v = word_phi2(self.base, &key.0, &key.1)?;
        self.second.write().insert(key, v.clone());
        Ok(v)
    }
}

/// Cumulants whose arguments are the given elements, computed from moments.
pub type ElementCumulants<'a> = Inverter<ElementMoments<'a>>;

/// Element `i` of `elements` becomes the symbol `LetterId(i)`.
pub fn element_cumulants<'a>(base: &'a dyn CumulantSource, elements: Vec<Word>) -> ElementCumulants<'a> {
    Inverter::new(ElementMoments::new(base, elements))
}

/// Equivalent ways of stating which permutations contribute when arguments
/// are grouped products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionForm {
    /// `pi` joined with the grouping partition is the one-block partition.
    Join,
    /// `pi^{-1} gamma` separates the last point of every group.
    SeparatesLast,
    /// `gamma pi^{-1}` separates the first point of every group.
    SeparatesFirst,
}

fn group_ends(lens: &[usize], offset: usize) -> Vec<usize> {
    lens.iter()
        .scan(offset, |acc, &l| {
            *acc += l;
            Some(*acc - 1)
        })
        .collect()
}

fn check_lens(lens: &[usize]) -> Result<()> {
    if lens.is_empty() || lens.contains(&0) {
        Err(Error::Invalid("groups must be nonempty".into()))
    } else {
        Ok(())
    }
}

/// Members of `NC(n)` contributing to a first-order cumulant of products with
/// the given group lengths.
pub fn first_order_terms(lens: &[usize], form: SelectionForm) -> Result<Vec<Permutation>> {
    check_lens(lens)?;
    let n: usize = lens.iter().sum();
    let gamma = Permutation::full_cycle(n);
    let ends = group_ends(lens, 0);
    let starts: Vec<usize> = ends.iter().map(|&e| gamma.apply(e)).collect();
    let grouping = SetPartition::from_labels(
        &lens.iter().enumerate().flat_map(|(g, &l)| std::iter::repeat_n(g, l)).collect::<Vec<_>>(),
    );
    let mut out = Vec::new();
    for p in enumerate_nc(n)?.iter() {
        let keep = match form {
            SelectionForm::Join => p.orbits().join(&grouping)?.block_count() == 1,
            SelectionForm::SeparatesLast => p.inverse().compose(&gamma)?.separates(&ends),
            SelectionForm::SeparatesFirst => gamma.compose(&p.inverse())?.separates(&starts),
        };
        if keep {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// `kappa_r(A_1, .., A_r)` where `A_i` is the product of the letters of group `i`,
/// expanded as a sum of cumulants of the letters.
pub fn products_as_arguments_first(groups: &[Word], source: &dyn CumulantSource) -> Result<Rational> {
    let lens: Vec<usize> = groups.iter().map(Vec::len).collect();
    let word: Word = groups.concat();
    let mut total = Rational::zero();
    for p in first_order_terms(&lens, SelectionForm::SeparatesLast)? {
        total += kappa_multiplicative(&PartitionedPermutation::from_permutation(p), &word, source)?;
    }
    Ok(total)
}

type TermCache = RwLock<HashMap<(Vec<usize>, Vec<usize>), Arc<Vec<PartitionedPermutation>>>>;

/// Members of the annular partitioned permutations contributing to a
/// second-order cumulant of products.
pub fn second_order_terms(left: &[usize], right: &[usize]) -> Result<Arc<Vec<PartitionedPermutation>>> {
    check_lens(left)?;
    check_lens(right)?;
    static CACHE: OnceLock<TermCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (left.to_vec(), right.to_vec());
    if let Some(v) = cache.read().get(&key) {
        return Ok(v.clone());
    }
    let terms = Arc::new(collect_second_order_terms(left, right)?);
    cache.write().insert(key, terms.clone());
    Ok(terms)
}

fn collect_second_order_terms(left: &[usize], right: &[usize]) -> Result<Vec<PartitionedPermutation>> {
    let shape = AnnulusShape::new(left.iter().sum(), right.iter().sum());
    let gamma = shape.gamma();
    let mut ends = group_ends(left, 0);
    ends.extend(group_ends(right, shape.outer));
    let mut out = Vec::new();
    for x in enumerate_ps_nc(shape)? {
        if x.permutation().inverse().compose(&gamma)?.separates(&ends) {
            out.push(x);
        }
    }
    Ok(out)
}

/// `kappa_{r,s}` of grouped products expanded over letter cumulants.
/// `visit` sees every term with a nonzero value.
pub fn products_as_arguments_second(
    left: &[Word],
    right: &[Word],
    source: &dyn CumulantSource,
    mut visit: Option<&mut dyn FnMut(&PartitionedPermutation, &Rational)>,
) -> Result<Rational> {
    let ll: Vec<usize> = left.iter().map(Vec::len).collect();
    let rl: Vec<usize> = right.iter().map(Vec::len).collect();
    let mut word: Word = left.concat();
    word.extend(right.concat());
    let mut total = Rational::zero();
    for x in second_order_terms(&ll, &rl)?.iter() {
        let v = kappa_multiplicative(x, &word, source)?;
        if !v.is_zero() {
            if let Some(f) = visit.as_mut() {
                f(x, &v);
            }
            total += v;
        }
    }
    Ok(total)
}
