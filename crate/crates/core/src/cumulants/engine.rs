//! Weighted sums over non-crossing structures without listing them.
//!
//! A disc sum is an interval recursion: the block holding the first point of
//! an interval splits it into gaps, each summed independently and memoised.
//! Annular sums run the same recursion once per canonical cut (see the
//! `annular` module), plus a sum over marked disc blocks for the terms where
//! a block of each circle is joined.

use num_traits::{One, Zero};

use super::{CumulantSource, LetterId, Word};
use crate::error::Result;
use crate::Rational;

struct Cut {
    k: usize,
    inner_start: usize,
}

/// Sum over non-crossing partitions of a sequence of positions, each
/// position carrying a label into `word`.
struct SeqSum<'a> {
    word: &'a [LetterId],
    labels: Vec<usize>,
    source: &'a dyn CumulantSource,
    cut: Option<Cut>,
    skip_full: bool,
    memo: Vec<Option<Rational>>,
}

impl<'a> SeqSum<'a> {
    fn new(word: &'a [LetterId], labels: Vec<usize>, source: &'a dyn CumulantSource, cut: Option<Cut>) -> Self {
        let len = labels.len();
        SeqSum { word, labels, source, cut, skip_full: false, memo: vec![None; (len + 1) * (len + 1)] }
    }

    fn family(&self, pos: usize) -> usize {
        self.source.family_of(self.word[self.labels[pos]])
    }

    fn step_ok(&self, last: usize, c: usize) -> bool {
        match &self.cut {
            Some(cut) => {
                (last != cut.k || c == cut.k + 1)
                    && (c != cut.k + 1 || last == cut.k)
                    && !(last < cut.k && self.labels[c] >= cut.inner_start)
            }
            None => true,
        }
    }

    fn block_kappa(&self, block: &[usize]) -> Result<Rational> {
        let mut labels: Vec<usize> = block.iter().map(|&p| self.labels[p]).collect();
        let start = labels.iter().enumerate().min_by_key(|(_, &l)| l).map(|(i, _)| i).unwrap_or(0);
        labels.rotate_left(start);
        let letters: Word = labels.iter().map(|&l| self.word[l]).collect();
        self.source.kappa(&letters)
    }

    fn interval(&mut self, a: usize, b: usize) -> Result<Rational> {
        if a >= b {
            return Ok(Rational::one());
        }
        let len = self.labels.len();
        let top = a == 0 && b == len && self.skip_full;
        if !top {
            if let Some(v) = &self.memo[a * (len + 1) + b] {
                return Ok(v.clone());
            }
        }
        let mut total = Rational::zero();
        let blocked_start = matches!(&self.cut, Some(cut) if a == cut.k + 1);
        if !blocked_start {
            let fam = self.family(a);
            let max = self.source.max_block(fam);
            let mut block = vec![a];
            self.grow(b, fam, max, &mut block, Rational::one(), &mut total)?;
        }
        if !top {
            self.memo[a * (len + 1) + b] = Some(total.clone());
        }
        Ok(total)
    }

    fn grow(
        &mut self,
        end: usize,
        fam: usize,
        max: usize,
        block: &mut Vec<usize>,
        acc: Rational,
        total: &mut Rational,
    ) -> Result<()> {
        let last = *block.last().unwrap();
        let closing_blocked = matches!(&self.cut, Some(cut) if last == cut.k);
        let full = self.skip_full && block.len() == self.labels.len();
        if !closing_blocked && !full {
            let tail = self.interval(last + 1, end)?;
            if !tail.is_zero() {
                let k = self.block_kappa(block)?;
                if !k.is_zero() {
                    *total += acc.clone() * tail * k;
                }
            }
        }
        if block.len() < max {
            for c in last + 1..end {
                if !self.step_ok(last, c) || self.family(c) != fam {
                    continue;
                }
                let gap = self.interval(last + 1, c)?;
                if gap.is_zero() {
                    continue;
                }
                block.push(c);
                self.grow(end, fam, max, block, acc.clone() * gap, total)?;
                block.pop();
            }
        }
        Ok(())
    }
}

/// `sum over pi in NC(n) of kappa_pi(word)`; with `skip_full` the one-block
/// term is left out.
pub fn nc_sum(word: &[LetterId], source: &dyn CumulantSource, skip_full: bool) -> Result<Rational> {
    let mut s = SeqSum::new(word, (0..word.len()).collect(), source, None);
    s.skip_full = skip_full;
    s.interval(0, word.len())
}

/// Marked blocks of a disc, each with the weight of the non-crossing
/// completions of its cyclic gaps. Points are `offset..offset + len` of `word`.
fn marked_blocks(
    word: &[LetterId],
    offset: usize,
    len: usize,
    source: &dyn CumulantSource,
) -> Result<Vec<(Word, usize, Rational)>> {
    let labels: Vec<usize> = (0..2 * len).map(|i| offset + i % len).collect();
    let mut s = SeqSum::new(word, labels, source, None);
    let mut out = Vec::new();
    for first in 0..len {
        let fam = s.family(first);
        let max = source.max_block(fam);
        if source.second_order_vanishes(fam) {
            continue;
        }
        let mut block = vec![first];
        collect_marked(&mut s, first, len, fam, max, &mut block, Rational::one(), &mut out)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn collect_marked(
    s: &mut SeqSum<'_>,
    first: usize,
    len: usize,
    fam: usize,
    max: usize,
    block: &mut Vec<usize>,
    acc: Rational,
    out: &mut Vec<(Word, usize, Rational)>,
) -> Result<()> {
    let last = *block.last().unwrap();
    let wrap = s.interval(last + 1, first + len)?;
    if !wrap.is_zero() {
        let letters: Word = block.iter().map(|&p| s.word[s.labels[p]]).collect();
        out.push((letters, block.len(), acc.clone() * wrap));
    }
    if block.len() < max {
        for c in last + 1..len {
            if s.family(c) != fam {
                continue;
            }
            let gap = s.interval(last + 1, c)?;
            if gap.is_zero() {
                continue;
            }
            block.push(c);
            collect_marked(s, first, len, fam, max, block, acc.clone() * gap, out)?;
            block.pop();
        }
    }
    Ok(())
}

/// Second-order sum: `kappa_pi` over annular non-crossing `pi` plus
/// `kappa_(U, pi)` over pairs of disc partitions with one block of each
/// circle joined. With `skip_full` the `(1, gamma)` term is left out.
pub fn annular_sum(
    left: &[LetterId],
    right: &[LetterId],
    source: &dyn CumulantSource,
    skip_full: bool,
) -> Result<Rational> {
    let (m, n) = (left.len(), right.len());
    let mut word: Word = left.to_vec();
    word.extend_from_slice(right);
    let mut total = Rational::zero();
    for k in 0..m {
        for j in m..m + n {
            if source.family_of(word[k]) != source.family_of(word[j]) {
                continue;
            }
            let mut order: Vec<usize> = (0..=k).collect();
            order.extend(j..m + n);
            order.extend(m..j);
            order.extend(k + 1..m);
            let mut s = SeqSum::new(&word, order, source, Some(Cut { k, inner_start: m }));
            total += s.interval(0, m + n)?;
        }
    }
    let outer = marked_blocks(&word, 0, m, source)?;
    if outer.is_empty() {
        return Ok(total);
    }
    let inner = marked_blocks(&word, m, n, source)?;
    for (w1, len1, a) in &outer {
        let fam = source.family_of(w1[0]);
        for (w2, len2, b) in &inner {
            if source.family_of(w2[0]) != fam || (skip_full && *len1 == m && *len2 == n) {
                continue;
            }
            let k = source.kappa2(w1, w2)?;
            if !k.is_zero() {
                total += k * a * b;
            }
        }
    }
    Ok(total)
}
