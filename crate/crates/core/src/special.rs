//! Even and R-diagonal elements: verification, determining sequences, the
//! square transforms, hermitization and products of free variables.
//!
//! An element is a word in the letters of a [`CumulantModel`]. Its
//! `*`-cumulants are indexed by star patterns, `false` for the element and
//! `true` for its adjoint.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::annular::{enumerate_snc_k_alt, enumerate_snc_k_alt_eq, kreweras_annulus, snc_plus_all};
use crate::cumulants::{
    element_cumulants, kappa_multiplicative, second_order_terms, word_phi, word_phi2, CumulantModel,
    CumulantSource, ElementCumulants, FamilyLaw, Inverter, LetterId, MomentSource, MomentTable, Word,
};
use crate::error::{Error, Result};
use crate::perm::{AnnulusShape, PartitionedPermutation, Permutation};
use crate::Rational;

/// Vanishing patterns are verified up to this total degree before a
/// determining sequence is read off.
pub const VERIFY_DEGREE: usize = 6;

/// A first-order sequence `n -> v_n` and a second-order table `(p, q) -> v_{p,q}`.
///
/// Used both for determining sequences and for the cumulants of `a a*` or `x^2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequenceTable {
    pub first: BTreeMap<usize, Rational>,
    pub second: BTreeMap<(usize, usize), Rational>,
    pub truncation: usize,
}

pub type DeterminingSequence = SequenceTable;
pub type SquareCumulants = SequenceTable;

impl SequenceTable {
    pub fn new(truncation: usize) -> Self {
        SequenceTable { truncation, ..Default::default() }
    }

    pub fn first_at(&self, n: usize) -> Result<Rational> {
        if n > self.truncation {
            return Err(Error::Missing(format!("entry {n} beyond truncation {}", self.truncation)));
        }
        Ok(self.first.get(&n).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn second_at(&self, p: usize, q: usize) -> Result<Rational> {
        if p + q > self.truncation {
            return Err(Error::Missing(format!("entry ({p},{q}) beyond truncation {}", self.truncation)));
        }
        Ok(self.second.get(&(p, q)).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn is_symmetric(&self) -> bool {
        self.second.iter().all(|(&(p, q), v)| self.second.get(&(q, p)).map_or(v.is_zero(), |w| w == v))
    }
}

/// A sequence table seen as cumulants (or moments) of a single letter: the
/// value of a word depends only on its length.
impl CumulantSource for SequenceTable {
    fn family_of(&self, _letter: LetterId) -> usize {
        0
    }
    fn kappa(&self, word: &[LetterId]) -> Result<Rational> {
        self.first_at(word.len())
    }
    fn kappa2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        self.second_at(left.len(), right.len())
    }
    fn second_order_vanishes(&self, _family: usize) -> bool {
        self.second.values().all(Zero::is_zero)
    }
}

impl MomentSource for SequenceTable {
    fn phi(&self, word: &[LetterId]) -> Result<Rational> {
        if word.is_empty() {
            return Ok(Rational::one());
        }
        self.first_at(word.len())
    }
    fn phi2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        self.second_at(left.len(), right.len())
    }
}

fn unit_word(n: usize) -> Word {
    vec![LetterId(0); n]
}

/// `*`-cumulants and moments of one element of a model.
pub struct StarElement<'a> {
    model: &'a CumulantModel,
    word: Word,
    grouped: Option<ElementCumulants<'a>>,
}

impl<'a> StarElement<'a> {
    pub fn new(model: &'a CumulantModel, word: &[LetterId]) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Invalid("empty element".into()));
        }
        let grouped = (word.len() > 1)
            .then(|| element_cumulants(model, vec![word.to_vec(), model.alphabet().adjoint(word)]));
        Ok(StarElement { model, word: word.to_vec(), grouped })
    }

    pub fn word(&self) -> &[LetterId] {
        &self.word
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.model.alphabet().adjoint(&self.word) == self.word
    }

    fn symbols(&self, pattern: &[bool]) -> Word {
        match &self.grouped {
            Some(_) => pattern.iter().map(|&s| LetterId(s as u16)).collect(),
            None => {
                let a = self.word[0];
                let b = self.model.alphabet().star(a);
                pattern.iter().map(|&s| if s { b } else { a }).collect()
            }
        }
    }

    fn source(&self) -> &dyn CumulantSource {
        match &self.grouped {
            Some(g) => g,
            None => self.model,
        }
    }

    pub fn kappa(&self, pattern: &[bool]) -> Result<Rational> {
        self.source().kappa(&self.symbols(pattern))
    }

    pub fn kappa2(&self, left: &[bool], right: &[bool]) -> Result<Rational> {
        self.source().kappa2(&self.symbols(left), &self.symbols(right))
    }

    fn expand(&self, pattern: &[bool]) -> Word {
        let adj = self.model.alphabet().adjoint(&self.word);
        pattern.iter().flat_map(|&s| if s { adj.clone() } else { self.word.clone() }).collect()
    }

    pub fn phi(&self, pattern: &[bool]) -> Result<Rational> {
        word_phi(self.model, &self.expand(pattern))
    }

    pub fn phi2(&self, left: &[bool], right: &[bool]) -> Result<Rational> {
        word_phi2(self.model, &self.expand(left), &self.expand(right))
    }
}

fn alternating(pattern: &[bool]) -> bool {
    pattern.len() % 2 == 0 && pattern.windows(2).all(|w| w[0] != w[1])
}

fn patterns(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

fn show_pattern(p: &[bool]) -> String {
    p.iter().map(|&s| if s { "a*" } else { "a" }).collect::<Vec<_>>().join(",")
}

fn power(n: usize) -> Vec<bool> {
    vec![false; n]
}

/// `(a, a*)` repeated `n` times.
pub fn alternating_pattern(n: usize) -> Vec<bool> {
    (0..2 * n).map(|i| i % 2 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub what: String,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub checked: usize,
    pub violation: Option<Violation>,
}

impl Verdict {
    fn scan(mut checks: impl FnMut(&mut dyn FnMut(String, Rational) -> bool) -> Result<()>) -> Result<Verdict> {
        let mut checked = 0;
        let mut violation = None;
        checks(&mut |what, value| {
            checked += 1;
            if !value.is_zero() {
                violation = Some(Violation { what, value });
                return false;
            }
            true
        })?;
        Ok(Verdict { holds: violation.is_none(), checked, violation })
    }
}

/// Odd cumulants vanish and `kappa_{p,q}(x, .., x) = 0` whenever `p + q` is odd.
///
/// `kappa_{p,q}` with both `p` and `q` odd is allowed: it is invisible in the
/// cumulants of `x^2`, and it is what keeps `phi_2(x^p, x^q)` at zero for a
/// hermitization, where the through pairings contribute `kappa_2`.
pub fn verify_even(model: &CumulantModel, x: &[LetterId], order: usize) -> Result<Verdict> {
    let el = StarElement::new(model, x)?;
    if !el.is_self_adjoint() {
        return Err(Error::Invalid(format!("{} is not self-adjoint", model.alphabet().format_word(x))));
    }
    Verdict::scan(|check| {
        for d in 1..=order {
            if d % 2 == 1 && !check(format!("kappa_{d}(x, ..)"), el.kappa(&power(d))?) {
                return Ok(());
            }
            for p in 1..d {
                let q = d - p;
                if (p + q) % 2 == 1 && !check(format!("kappa_{p},{q}(x, ..)"), el.kappa2(&power(p), &power(q))?) {
                    return Ok(());
                }
            }
        }
        Ok(())
    })
}

/// Only alternating `*`-cumulants survive, at both orders.
pub fn verify_r_diagonal(model: &CumulantModel, a: &[LetterId], order: usize) -> Result<Verdict> {
    let el = StarElement::new(model, a)?;
    r_diagonal_scan(&el, order)
}

fn r_diagonal_scan(el: &StarElement<'_>, order: usize) -> Result<Verdict> {
    Verdict::scan(|check| {
        for d in 1..=order {
            for pat in patterns(d) {
                if !alternating(&pat) && !check(format!("kappa({})", show_pattern(&pat)), el.kappa(&pat)?) {
                    return Ok(());
                }
            }
            for p in 1..d {
                for left in patterns(p) {
                    for right in patterns(d - p) {
                        if alternating(&left) && alternating(&right) {
                            continue;
                        }
                        let what = format!("kappa2({} | {})", show_pattern(&left), show_pattern(&right));
                        if !check(what, el.kappa2(&left, &right)?) {
                            return Ok(());
                        }
                    }
                }
            }
        }
        Ok(())
    })
}

fn require(v: Verdict, what: &str) -> Result<()> {
    match v.violation {
        None => Ok(()),
        Some(x) => Err(Error::Invalid(format!("not {what}: {} = {}", x.what, x.value))),
    }
}

/// `beta_n = kappa_{2n}(a, a*, ..)`, `beta_{p,q} = kappa_{2p,2q}(a, a*, .. | a, a*, ..)`.
pub fn determining_of_r_diagonal(model: &CumulantModel, a: &[LetterId], order: usize) -> Result<DeterminingSequence> {
    let el = StarElement::new(model, a)?;
    require(r_diagonal_scan(&el, (2 * order).min(VERIFY_DEGREE))?, "R-diagonal")?;
    let mut beta = SequenceTable::new(order);
    for n in 1..=order {
        beta.first.insert(n, el.kappa(&alternating_pattern(n))?);
    }
    for p in 1..order {
        for q in 1..=order - p {
            beta.second.insert((p, q), el.kappa2(&alternating_pattern(p), &alternating_pattern(q))?);
        }
    }
    Ok(beta)
}

/// `kappa_pi(x, .., x)` over the cycles of `pi` (first-order factors only).
fn univariate_kappa_pi(pi: &Permutation, el: &StarElement<'_>) -> Result<Rational> {
    let mut acc = Rational::one();
    for c in pi.cycles() {
        acc *= el.kappa(&power(c.len()))?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// Sum of `kappa_pi` over all-through, parity preserving `pi` on `(2p, 2q)`.
pub fn even_correction(model: &CumulantModel, x: &[LetterId], p: usize, q: usize) -> Result<Rational> {
    let el = StarElement::new(model, x)?;
    correction(&el, p, q)
}

fn correction(el: &StarElement<'_>, p: usize, q: usize) -> Result<Rational> {
    let mut total = Rational::zero();
    for pi in snc_plus_all(AnnulusShape::new(2 * p, 2 * q))?.iter() {
        total += univariate_kappa_pi(pi, el)?;
    }
    Ok(total)
}

/// `beta_n = kappa_{2n}`, `beta_{p,q} = kappa_{2p,2q} + sum over all-through parity preserving pi`.
pub fn determining_of_even(model: &CumulantModel, x: &[LetterId], order: usize) -> Result<DeterminingSequence> {
    require(verify_even(model, x, (2 * order).min(VERIFY_DEGREE))?, "even")?;
    let el = StarElement::new(model, x)?;
    let mut beta = SequenceTable::new(order);
    for n in 1..=order {
        beta.first.insert(n, el.kappa(&power(2 * n))?);
    }
    for p in 1..order {
        for q in 1..=order - p {
            let v = el.kappa2(&power(2 * p), &power(2 * q))? + correction(&el, p, q)?;
            beta.second.insert((p, q), v);
        }
    }
    Ok(beta)
}

/// Cumulants of `a a*` (or `x^2`) from a determining sequence:
/// `kappa_n = sum over NC(n) of beta_pi`, `kappa_{p,q} = sum over PS_NC(p, q) of beta_(V, pi)`.
pub fn square_cumulants(beta: &DeterminingSequence, order: usize) -> Result<SquareCumulants> {
    if order > beta.truncation {
        return Err(Error::Missing(format!("order {order} beyond truncation {}", beta.truncation)));
    }
    let mut out = SequenceTable::new(order);
    for n in 1..=order {
        out.first.insert(n, word_phi(beta, &unit_word(n))?);
    }
    for p in 1..order {
        for q in 1..=order - p {
            out.second.insert((p, q), word_phi2(beta, &unit_word(p), &unit_word(q))?);
        }
    }
    Ok(out)
}

/// Inverse of [`square_cumulants`].
pub fn determining_from_square(square: &SquareCumulants, order: usize) -> Result<DeterminingSequence> {
    if order > square.truncation {
        return Err(Error::Missing(format!("order {order} beyond truncation {}", square.truncation)));
    }
    let inv = Inverter::new(square.clone());
    let mut out = SequenceTable::new(order);
    for n in 1..=order {
        out.first.insert(n, inv.kappa(&unit_word(n))?);
    }
    for p in 1..order {
        for q in 1..=order - p {
            out.second.insert((p, q), inv.kappa2(&unit_word(p), &unit_word(q))?);
        }
    }
    Ok(out)
}

/// Cumulants of `a a*` read directly from the model through grouped products.
pub fn square_cumulants_direct(model: &CumulantModel, a: &[LetterId], order: usize) -> Result<SquareCumulants> {
    let mut aa = a.to_vec();
    aa.extend(model.alphabet().adjoint(a));
    let src = element_cumulants(model, vec![aa]);
    let mut out = SequenceTable::new(order);
    for n in 1..=order {
        out.first.insert(n, src.kappa(&unit_word(n))?);
    }
    for p in 1..order {
        for q in 1..=order - p {
            out.second.insert((p, q), src.kappa2(&unit_word(p), &unit_word(q))?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// products with an R-diagonal factor

/// Factor-level source over the symbols `r, r*, b, b*` (ids 0..4), with `r`
/// and `b` free.
struct FactorSource<'a> {
    r: &'a StarElement<'a>,
    b: &'a StarElement<'a>,
}

impl FactorSource<'_> {
    fn split(word: &[LetterId]) -> (usize, Vec<bool>) {
        (word[0].index() / 2, word.iter().map(|l| l.0 % 2 == 1).collect())
    }

    fn element(&self, family: usize) -> &StarElement<'_> {
        if family == 0 {
            self.r
        } else {
            self.b
        }
    }
}

impl CumulantSource for FactorSource<'_> {
    fn family_of(&self, letter: LetterId) -> usize {
        letter.index() / 2
    }

    fn kappa(&self, word: &[LetterId]) -> Result<Rational> {
        let (f, pat) = Self::split(word);
        if word.iter().any(|l| l.index() / 2 != f) {
            return Ok(Rational::zero());
        }
        self.element(f).kappa(&pat)
    }

    fn kappa2(&self, left: &[LetterId], right: &[LetterId]) -> Result<Rational> {
        let (f, lp) = Self::split(left);
        let (g, rp) = Self::split(right);
        if f != g || left.iter().chain(right).any(|l| l.index() / 2 != f) {
            return Ok(Rational::zero());
        }
        self.element(f).kappa2(&lp, &rp)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Mt1Report {
    pub order: usize,
    pub expansion_order: usize,
    pub cumulants_checked: usize,
    pub violations: Vec<String>,
    pub expansion_terms: usize,
    pub lemma_violations: Vec<String>,
    pub expansion_mismatches: Vec<String>,
}

impl Mt1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.lemma_violations.is_empty() && self.expansion_mismatches.is_empty()
    }
}

/// Checks that `r b` is R-diagonal when `r` is R-diagonal and free from `b`.
///
/// Every `*`-cumulant of `r b` up to `order` is computed from moments and
/// tested against the vanishing pattern. Second-order cumulants with
/// `p + q <= expansion_order` are also expanded as sums over partitioned
/// permutations of the factors `r, b, b*, r*`; each nonvanishing term must
/// send the second slot of every `(r b)*` to its successor on the circle,
/// and the expansion must agree with the moment route.
pub fn check_mt1(
    model: &CumulantModel,
    r: &[LetterId],
    b: &[LetterId],
    order: usize,
    expansion_order: usize,
) -> Result<Mt1Report> {
    let alpha = model.alphabet();
    let rf: Vec<usize> = r.iter().map(|&l| alpha.family(l)).collect();
    if b.iter().any(|&l| rf.contains(&alpha.family(l))) {
        return Err(Error::Invalid("the two factors share a family and are not free".into()));
    }
    require(verify_r_diagonal(model, r, order)?, "R-diagonal")?;
    let mut rb = r.to_vec();
    rb.extend_from_slice(b);
    let product = StarElement::new(model, &rb)?;
    let mut report = Mt1Report { order, expansion_order, ..Default::default() };

    for d in 1..=order {
        for pat in patterns(d) {
            report.cumulants_checked += 1;
            if !alternating(&pat) {
                let v = product.kappa(&pat)?;
                if !v.is_zero() {
                    report.violations.push(format!("kappa({}) = {v}", show_pattern(&pat)));
                }
            }
        }
        for p in 1..d {
            for left in patterns(p) {
                for right in patterns(d - p) {
                    report.cumulants_checked += 1;
                    if !(alternating(&left) && alternating(&right)) {
                        let v = product.kappa2(&left, &right)?;
                        if !v.is_zero() {
                            let w = format!("kappa2({} | {})", show_pattern(&left), show_pattern(&right));
                            report.violations.push(format!("{w} = {v}"));
                        }
                    }
                }
            }
        }
    }

    let re = StarElement::new(model, r)?;
    let be = StarElement::new(model, b)?;
    let factors = FactorSource { r: &re, b: &be };
    let (rr, rs, bb, bs) = (LetterId(0), LetterId(1), LetterId(2), LetterId(3));
    for d in 2..=expansion_order.min(order) {
        for p in 1..d {
            let q = d - p;
            let gamma = AnnulusShape::new(2 * p, 2 * q).gamma();
            let terms = second_order_terms(&vec![2; p], &vec![2; q])?;
            // a block mixing r and b vanishes; test that on bitmasks first
            let masks: Vec<Vec<u32>> = terms
                .iter()
                .map(|x| x.partition().blocks().iter().map(|bl| bl.iter().fold(0u32, |m, &i| m | 1 << i)).collect())
                .collect();
            for eps in patterns(d) {
                let r_mask = eps
                    .iter()
                    .enumerate()
                    .fold(0u32, |m, (e, &s)| m | 1 << (2 * e + usize::from(s)));
                let word: Word = eps.iter().flat_map(|&s| if s { [bs, rs] } else { [rr, bb] }).collect();
                let mut total = Rational::zero();
                for (x, bm) in terms.iter().zip(&masks) {
                    if bm.iter().any(|&m| m & r_mask != 0 && m & !r_mask != 0) {
                        continue;
                    }
                    let v = kappa_multiplicative(x, &word, &factors)?;
                    if v.is_zero() {
                        continue;
                    }
                    report.expansion_terms += 1;
                    let pi = x.permutation();
                    let broken = eps.iter().enumerate().any(|(e, &starred)| {
                        let slot = 2 * e + 1;
                        let next = gamma.apply(slot);
                        starred && (pi.apply(slot) != next || eps[next / 2])
                    });
                    if broken {
                        report.lemma_violations.push(format!("{x} with pattern {}", show_pattern(&eps)));
                    }
                    total += v;
                }
                let w = product.kappa2(&eps[..p], &eps[p..])?;
                if total != w {
                    report.expansion_mismatches.push(format!(
                        "kappa2({} | {}): expansion {total}, moments {w}",
                        show_pattern(&eps[..p]),
                        show_pattern(&eps[p..])
                    ));
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// hermitization

/// The self-adjoint `A` with `A^2` distributed as `a a*`: odd moments zero,
/// `phi(A^{2n}) = phi((a a*)^n)`, `phi_2(A^{2m}, A^{2n}) = phi_2((a a*)^m, (a a*)^n)`.
pub fn hermitization(model: &CumulantModel, a: &[LetterId], order: usize) -> Result<CumulantModel> {
    let el = StarElement::new(model, a)?;
    require(r_diagonal_scan(&el, (2 * order).min(VERIFY_DEGREE))?, "R-diagonal")?;
    let mut table = MomentTable { truncation: 2 * order, ..Default::default() };
    let x = LetterId(0);
    for n in 1..=order {
        table.first.insert(vec![x; 2 * n], el.phi(&alternating_pattern(n))?);
    }
    for m in 1..order {
        for n in 1..=order - m {
            let v = el.phi2(&alternating_pattern(m), &alternating_pattern(n))?;
            table.second.insert((vec![x; 2 * m], vec![x; 2 * n]), v);
        }
    }
    let mut out = CumulantModel::new(2 * order);
    out.add_family("A", &[("A", "A")], FamilyLaw::Moments(table))?;
    Ok(out)
}

/// Both sides of the second-order hermitization identity
/// `kappa_{2p,2q}(a, a*, ..) = kappa_{2p,2q}(A) + sum over all-through parity preserving pi of kappa_pi(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitizationTerms {
    pub p: usize,
    pub q: usize,
    pub alternating: Rational,
    pub even_cumulant: Rational,
    pub correction: Rational,
}

impl HermitizationTerms {
    pub fn holds(&self) -> bool {
        self.alternating == self.even_cumulant.clone() + self.correction.clone()
    }
}

pub fn hermitization_terms(
    model: &CumulantModel,
    a: &[LetterId],
    herm: &CumulantModel,
    p: usize,
    q: usize,
) -> Result<HermitizationTerms> {
    let el = StarElement::new(model, a)?;
    let big = StarElement::new(herm, &[herm.letter("A")?])?;
    Ok(HermitizationTerms {
        p,
        q,
        alternating: el.kappa2(&alternating_pattern(p), &alternating_pattern(q))?,
        even_cumulant: big.kappa2(&power(2 * p), &power(2 * q))?,
        correction: correction(&big, p, q)?,
    })
}

// ---------------------------------------------------------------------------
// products of free variables

fn check_factors(model: &CumulantModel, factors: &[LetterId]) -> Result<()> {
    if factors.is_empty() {
        return Err(Error::Invalid("no factors".into()));
    }
    let mut fams = Vec::new();
    for &f in factors {
        let fam = model.alphabet().family(f);
        if fams.contains(&fam) {
            return Err(Error::Invalid("factors must come from distinct free families".into()));
        }
        if !model.second_order_vanishes(fam) {
            return Err(Error::Invalid(format!(
                "factor '{}' has nonvanishing second-order cumulants",
                model.alphabet().name(f)
            )));
        }
        fams.push(fam);
    }
    Ok(())
}

fn kreweras_sum(model: &CumulantModel, factors: &[LetterId], p: usize, q: usize, perms: &[Permutation]) -> Result<Rational> {
    let k = factors.len();
    let shape = AnnulusShape::new(k * p, k * q);
    let word: Word = (0..shape.total()).map(|i| factors[i % k]).collect();
    let mut total = Rational::zero();
    for pi in perms {
        let kr = PartitionedPermutation::from_permutation(kreweras_annulus(pi, shape)?);
        total += kappa_multiplicative(&kr, &word, model)?;
    }
    Ok(total)
}

/// `phi_2(a^p, a^q)` for `a = a_1 .. a_k` with free factors whose second-order
/// cumulants vanish: the sum of `kappa_{Kr(pi)}` over `k`-alternating `pi`.
pub fn product_free_moments(model: &CumulantModel, factors: &[LetterId], p: usize, q: usize) -> Result<Rational> {
    check_factors(model, factors)?;
    let perms = enumerate_snc_k_alt(p, q, factors.len())?;
    kreweras_sum(model, factors, p, q, &perms)
}

/// `kappa_{p,q}(a, .., a)` for the same product: the sum over `k`-alternating,
/// `k`-equal `pi`.
pub fn product_free_cumulants(model: &CumulantModel, factors: &[LetterId], p: usize, q: usize) -> Result<Rational> {
    check_factors(model, factors)?;
    let perms = enumerate_snc_k_alt_eq(p, q, factors.len())?;
    kreweras_sum(model, factors, p, q, &perms)
}

// ---------------------------------------------------------------------------
// conjugation and Haar powers

#[derive(Clone, Debug, Default)]
pub struct ConjugationReport {
    pub first: BTreeMap<usize, (Rational, Rational)>,
    pub second: BTreeMap<(usize, usize), (Rational, Rational)>,
}

impl ConjugationReport {
    /// Entries where the cumulant of `c a c*` differs from the moment of `a`.
    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (n, (k, m)) in &self.first {
            if k != m {
                out.push(format!("kappa_{n}: {k} vs phi: {m}"));
            }
        }
        for ((p, q), (k, m)) in &self.second {
            if k != m {
                out.push(format!("kappa_{p},{q}: {k} vs phi2: {m}"));
            }
        }
        out
    }
}

/// Cumulants of `c a c*` against moments of `a`, for `c` circular and free from `a`.
pub fn conjugation_by_circular(
    model: &CumulantModel,
    c: LetterId,
    a: &[LetterId],
    order: usize,
) -> Result<ConjugationReport> {
    let alpha = model.alphabet();
    if !matches!(model.law(alpha.family(c)), FamilyLaw::Circular) {
        return Err(Error::Invalid(format!("'{}' is not circular", alpha.name(c))));
    }
    if a.iter().any(|&l| alpha.family(l) == alpha.family(c)) {
        return Err(Error::Invalid("the conjugated element is not free from the circular".into()));
    }
    let mut cac = vec![c];
    cac.extend_from_slice(a);
    cac.push(alpha.star(c));
    let conj = element_cumulants(model, vec![cac]);
    let el = StarElement::new(model, a)?;
    let mut report = ConjugationReport::default();
    for n in 1..=order {
        report.first.insert(n, (conj.kappa(&unit_word(n))?, el.phi(&power(n))?));
    }
    for p in 1..order {
        for q in 1..=order - p {
            let k = conj.kappa2(&unit_word(p), &unit_word(q))?;
            report.second.insert((p, q), (k, el.phi2(&power(p), &power(q))?));
        }
    }
    Ok(report)
}

/// `kappa_{m,n}` of `u^{±p}` entries, signs `false` for `u^p` and `true` for `u^{-p}`.
pub fn haar_power_cumulants(
    model: &CumulantModel,
    u: LetterId,
    p: usize,
    left: &[bool],
    right: &[bool],
) -> Result<Rational> {
    if !matches!(model.law(model.alphabet().family(u)), FamilyLaw::HaarUnitary) {
        return Err(Error::Invalid(format!("'{}' is not a Haar unitary", model.alphabet().name(u))));
    }
    if p == 0 {
        return Err(Error::Invalid("power must be positive".into()));
    }
    let us = model.alphabet().star(u);
    let src = element_cumulants(model, vec![vec![u; p], vec![us; p]]);
    let sym = |s: &[bool]| -> Word { s.iter().map(|&x| LetterId(x as u16)).collect() };
    src.kappa2(&sym(left), &sym(right))
}
