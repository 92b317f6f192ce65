//! Non-crossing permutations of discs and annuli, parity classes, doubling
//! maps and the `k`-structure predicates used for products of free variables.
//!
//! Annular enumeration cuts the annulus along a through step `i -> j`
//! (outer `i`, inner `j`) and lists the partitions that are non-crossing for
//! the resulting single cycle. Only the least such `i` is allowed to step into
//! the inner circle, so every permutation is produced by exactly one cut and no
//! deduplication pass is needed.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{AnnulusShape, PartitionedPermutation, Permutation, SetPartition};

/// Upper bounds on the number of points accepted by the enumerators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub disc: usize,
    pub annulus: usize,
    pub partitioned: usize,
    /// Enumerations restricted by a per-cycle rule (pairings, all-through, `k`-alternating).
    pub filtered: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { disc: 14, annulus: 14, partitioned: 12, filtered: 24 }
    }
}

static LIMITS: RwLock<Limits> = RwLock::new(Limits { disc: 14, annulus: 14, partitioned: 12, filtered: 24 });

pub fn limits() -> Limits {
    *LIMITS.read()
}

pub fn set_limits(l: Limits) {
    *LIMITS.write() = l;
}

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// predicates

/// `|gamma_n| = |p| + |p^{-1} gamma_n|`.
pub fn is_noncrossing_disc(p: &Permutation) -> bool {
    let n = p.size();
    n == 0 || p.length() + crate::perm::kreweras_complement(p).length() == n - 1
}

/// `p^{-1} gamma` for the annulus.
pub fn kreweras_annulus(p: &Permutation, shape: AnnulusShape) -> Result<Permutation> {
    p.inverse().compose(&shape.gamma())
}

fn has_through_cycle(p: &Permutation, shape: AnnulusShape) -> bool {
    (0..shape.outer).any(|i| {
        let mut j = p.apply(i);
        while j != i {
            if j >= shape.outer {
                return true;
            }
            j = p.apply(j);
        }
        false
    })
}

pub fn through_cycles(p: &Permutation, shape: AnnulusShape) -> Vec<Vec<usize>> {
    p.cycles()
        .into_iter()
        .filter(|c| c.iter().any(|&i| i < shape.outer) && c.iter().any(|&i| i >= shape.outer))
        .collect()
}

pub fn is_annular_nc(p: &Permutation, shape: AnnulusShape) -> bool {
    if p.size() != shape.total() || !has_through_cycle(p, shape) {
        return false;
    }
    let k = kreweras_annulus(p, shape).expect("sizes checked");
    p.length() + k.length() == shape.total()
}

/// `p` preserves both circles and is non-crossing on each.
pub fn is_disc_product(p: &Permutation, shape: AnnulusShape) -> bool {
    if p.size() != shape.total() || has_through_cycle(p, shape) {
        return false;
    }
    let k = kreweras_annulus(p, shape).expect("sizes checked");
    p.length() + k.length() + 2 == shape.total()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnularTag {
    DiscNc,
    AnnularNc,
    NotNoncrossing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnularClass {
    pub tag: AnnularTag,
    pub through_cycles: Vec<Vec<usize>>,
}

pub fn classify_annular(p: &Permutation, shape: AnnulusShape) -> AnnularClass {
    let tag = if is_annular_nc(p, shape) {
        AnnularTag::AnnularNc
    } else if is_disc_product(p, shape) {
        AnnularTag::DiscNc
    } else {
        AnnularTag::NotNoncrossing
    };
    AnnularClass { tag, through_cycles: through_cycles(p, shape) }
}

pub fn is_even_cycles(p: &Permutation) -> bool {
    p.size() > 0 && p.cycles().iter().all(|c| c.len() % 2 == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityClass {
    Reversing,
    Preserving,
    NotEven,
    NotAnnular,
}

/// Parity class of a non-crossing permutation of an annulus with even sides.
pub fn classify_parity(p: &Permutation, shape: AnnulusShape) -> ParityClass {
    if shape.outer % 2 == 1 || shape.inner % 2 == 1 {
        return ParityClass::NotAnnular;
    }
    if !is_annular_nc(p, shape) && !is_disc_product(p, shape) {
        return ParityClass::NotAnnular;
    }
    if !is_even_cycles(p) {
        return ParityClass::NotEven;
    }
    if (0..p.size()).all(|k| (k + p.apply(k)) % 2 == 1) {
        ParityClass::Reversing
    } else {
        ParityClass::Preserving
    }
}

/// The single cycle `gamma (k, gamma^{-1} p(k))` obtained by cutting along the
/// through step `k -> p(k)`.
pub fn unfold(p: &Permutation, shape: AnnulusShape, k: usize) -> Result<Permutation> {
    if p.size() != shape.total() || k >= p.size() {
        return Err(Error::SizeMismatch(format!("point {} on shape {shape}", k + 1)));
    }
    let pk = p.apply(k);
    if shape.is_outer(k) == shape.is_outer(pk) {
        return Err(Error::Invalid(format!("{} -> {} does not cross between the circles", k + 1, pk + 1)));
    }
    let gamma = shape.gamma();
    let other = gamma.inverse().apply(pk);
    let mut cycles = vec![vec![k, other]];
    cycles.retain(|c| c[0] != c[1]);
    let t = Permutation::from_cycles(p.size(), &cycles)?;
    gamma.compose(&t)
}

// ---------------------------------------------------------------------------
// generator

/// Per-cycle restrictions applied while generating non-crossing permutations.
pub(crate) trait CycleRule {
    /// May `from` be followed by `to` inside a cycle (including the closing step)?
    fn step(&self, _from: usize, _to: usize) -> bool {
        true
    }
    fn max_len(&self) -> usize {
        usize::MAX
    }
    fn accept(&self, _cycle: &[usize]) -> bool {
        true
    }
}

struct AnyCycle;
impl CycleRule for AnyCycle {}

struct Pairs;
impl CycleRule for Pairs {
    fn max_len(&self) -> usize {
        2
    }
    fn accept(&self, c: &[usize]) -> bool {
        c.len() == 2
    }
}

struct EvenCycles;
impl CycleRule for EvenCycles {
    fn accept(&self, c: &[usize]) -> bool {
        c.len() % 2 == 0
    }
}

struct AllThrough {
    outer: usize,
    even_preserving: bool,
}
impl CycleRule for AllThrough {
    fn step(&self, from: usize, to: usize) -> bool {
        !self.even_preserving || (from < self.outer) == (to < self.outer) || (from + to) % 2 == 0
    }
    fn accept(&self, c: &[usize]) -> bool {
        c.iter().any(|&i| i < self.outer)
            && c.iter().any(|&i| i >= self.outer)
            && (!self.even_preserving || c.len() % 2 == 0)
    }
}

struct Alternating {
    k: usize,
    equal: bool,
}
impl CycleRule for Alternating {
    fn step(&self, from: usize, to: usize) -> bool {
        to % self.k == (from + 1) % self.k
    }
    fn max_len(&self) -> usize {
        if self.equal {
            self.k
        } else {
            usize::MAX
        }
    }
    fn accept(&self, c: &[usize]) -> bool {
        !self.equal || c.len() == self.k
    }
}

/// Cut data: positions `k` and `k + 1` of the order must share a block, and no
/// position before `k` may step to an inner label.
struct Cut {
    k: usize,
    inner_start: usize,
}

struct Generator<'a, R: CycleRule> {
    order: &'a [usize],
    rule: &'a R,
    cut: Option<Cut>,
    pending: Vec<(usize, usize)>,
    blocks: Vec<Vec<usize>>,
}

impl<'a, R: CycleRule> Generator<'a, R> {
    fn step_ok(&self, prev: usize, next: usize) -> bool {
        if let Some(cut) = &self.cut {
            if prev == cut.k && next != cut.k + 1 {
                return false;
            }
            if prev < cut.k && self.order[next] >= cut.inner_start {
                return false;
            }
        }
        self.rule.step(self.order[prev], self.order[next])
    }

    fn close_ok(&self, block: &[usize]) -> bool {
        if let Some(cut) = &self.cut {
            if block.contains(&cut.k) != block.contains(&(cut.k + 1)) {
                return false;
            }
        }
        let labels: Vec<usize> = block.iter().map(|&p| self.order[p]).collect();
        self.rule.step(labels[labels.len() - 1], labels[0]) && self.rule.accept(&labels)
    }

    fn run(&mut self, emit: &mut dyn FnMut(&[Vec<usize>])) {
        match self.pending.pop() {
            None => {
                let cycles: Vec<Vec<usize>> =
                    self.blocks.iter().map(|b| b.iter().map(|&p| self.order[p]).collect()).collect();
                emit(&cycles);
            }
            Some((a, b)) => {
                let mut block = vec![a];
                self.grow(b, &mut block, emit);
                self.pending.push((a, b));
            }
        }
    }

    fn grow(&mut self, end: usize, block: &mut Vec<usize>, emit: &mut dyn FnMut(&[Vec<usize>])) {
        let last = *block.last().unwrap();
        if self.close_ok(block) {
            let before = self.pending.len();
            for w in block.windows(2) {
                if w[1] > w[0] + 1 {
                    self.pending.push((w[0] + 1, w[1]));
                }
            }
            if last + 1 < end {
                self.pending.push((last + 1, end));
            }
            self.blocks.push(block.clone());
            self.run(emit);
            self.blocks.pop();
            self.pending.truncate(before);
        }
        if block.len() < self.rule.max_len() {
            for c in last + 1..end {
                if self.step_ok(last, c) {
                    block.push(c);
                    self.grow(end, block, emit);
                    block.pop();
                }
            }
        }
    }
}

fn generate<R: CycleRule>(order: &[usize], rule: &R, cut: Option<Cut>, emit: &mut dyn FnMut(&[Vec<usize>])) {
    let mut g = Generator { order, rule, cut, pending: Vec::new(), blocks: Vec::new() };
    if !order.is_empty() {
        g.pending.push((0, order.len()));
    }
    g.run(emit);
}

fn collect_disc<R: CycleRule>(n: usize, rule: &R) -> Vec<Permutation> {
    let order: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    generate(&order, rule, None, &mut |cycles| {
        out.push(Permutation::from_cycles(n, cycles).expect("generated cycles are disjoint"));
    });
    out.sort_unstable();
    out
}

fn collect_annulus<R: CycleRule>(shape: AnnulusShape, rule: &R) -> Vec<Permutation> {
    let (m, n) = (shape.outer, shape.inner);
    let mut out = Vec::new();
    for k in 0..m {
        for j in m..m + n {
            let mut order: Vec<usize> = (0..=k).collect();
            order.extend(j..m + n);
            order.extend(m..j);
            order.extend(k + 1..m);
            generate(&order, rule, Some(Cut { k, inner_start: m }), &mut |cycles| {
                let p = Permutation::from_cycles(m + n, cycles).expect("generated cycles are disjoint");
                debug_assert!(is_annular_nc(&p, shape));
                out.push(p);
            });
        }
    }
    out.sort_unstable();
    out
}

type Cache<K> = OnceLock<RwLock<HashMap<K, Arc<Vec<Permutation>>>>>;

fn cached<K: std::hash::Hash + Eq + Copy>(
    cache: &'static Cache<K>,
    key: K,
    build: impl FnOnce() -> Vec<Permutation>,
) -> Arc<Vec<Permutation>> {
    let map = cache.get_or_init(Default::default);
    if let Some(v) = map.read().get(&key) {
        return v.clone();
    }
    let v = Arc::new(build());
    map.write().entry(key).or_insert(v).clone()
}

// ---------------------------------------------------------------------------
// enumerations

/// All non-crossing permutations of `n` points, lexicographic by image.
pub fn enumerate_nc(n: usize) -> Result<Arc<Vec<Permutation>>> {
    check_cap("disc enumeration", n, limits().disc)?;
    static CACHE: Cache<usize> = OnceLock::new();
    Ok(cached(&CACHE, n, || collect_disc(n, &AnyCycle)))
}

/// All non-crossing annular permutations of the shape, lexicographic by image.
pub fn enumerate_snc(shape: AnnulusShape) -> Result<Arc<Vec<Permutation>>> {
    check_cap("annular enumeration", shape.total(), limits().annulus)?;
    static CACHE: Cache<AnnulusShape> = OnceLock::new();
    Ok(cached(&CACHE, shape, || collect_annulus(shape, &AnyCycle)))
}

/// Non-crossing annular permutations whose cycles all have even length.
pub fn enumerate_snc_even(shape: AnnulusShape) -> Result<Arc<Vec<Permutation>>> {
    check_cap("annular enumeration", shape.total(), limits().annulus)?;
    static CACHE: Cache<AnnulusShape> = OnceLock::new();
    Ok(cached(&CACHE, shape, || collect_annulus(shape, &EvenCycles)))
}

pub fn enumerate_annular_pairings(shape: AnnulusShape) -> Result<Vec<Permutation>> {
    if shape.outer % 2 == 1 || shape.inner % 2 == 1 {
        return Err(Error::Invalid(format!("pairings need even circles, got {shape}")));
    }
    check_cap("pairing enumeration", shape.total(), limits().filtered)?;
    Ok(collect_annulus(shape, &Pairs))
}

/// Non-crossing pairings of `n` points.
pub fn enumerate_nc_pairings(n: usize) -> Result<Vec<Permutation>> {
    check_cap("pairing enumeration", n, limits().filtered)?;
    Ok(if n % 2 == 1 { Vec::new() } else { collect_disc(n, &Pairs) })
}

/// Elements of `S_NC` in which every cycle meets both circles.
pub fn snc_all(shape: AnnulusShape) -> Result<Arc<Vec<Permutation>>> {
    check_cap("all-through enumeration", shape.total(), limits().filtered)?;
    static CACHE: Cache<AnnulusShape> = OnceLock::new();
    Ok(cached(&CACHE, shape, || {
        collect_annulus(shape, &AllThrough { outer: shape.outer, even_preserving: false })
    }))
}

/// All-through, even, and parity preserving across the circles.
pub fn snc_plus_all(shape: AnnulusShape) -> Result<Arc<Vec<Permutation>>> {
    if shape.outer % 2 == 1 || shape.inner % 2 == 1 {
        return Err(Error::Invalid(format!("parity classes need even circles, got {shape}")));
    }
    check_cap("all-through enumeration", shape.total(), limits().filtered)?;
    static CACHE: Cache<AnnulusShape> = OnceLock::new();
    Ok(cached(&CACHE, shape, || {
        collect_annulus(shape, &AllThrough { outer: shape.outer, even_preserving: true })
    }))
}

/// Elements of `S_NC(kp, kq)` with `pi(i) = i + 1 (mod k)`.
pub fn enumerate_snc_k_alt(p: usize, q: usize, k: usize) -> Result<Vec<Permutation>> {
    k_alt(p, q, k, false)
}

/// As [`enumerate_snc_k_alt`], with every cycle of length exactly `k`.
pub fn enumerate_snc_k_alt_eq(p: usize, q: usize, k: usize) -> Result<Vec<Permutation>> {
    k_alt(p, q, k, true)
}

fn k_alt(p: usize, q: usize, k: usize, equal: bool) -> Result<Vec<Permutation>> {
    if k == 0 || p == 0 || q == 0 {
        return Err(Error::Invalid("k, p and q must be positive".into()));
    }
    let shape = AnnulusShape::new(k * p, k * q);
    check_cap("alternating enumeration", shape.total(), limits().annulus)?;
    Ok(collect_annulus(shape, &Alternating { k, equal }))
}

fn disc_factor_pairs(shape: AnnulusShape) -> Result<Vec<(Permutation, Permutation)>> {
    let (m, n) = (shape.outer, shape.inner);
    let left = enumerate_nc(m)?;
    let right = enumerate_nc(n)?;
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in left.iter() {
        for b in right.iter() {
            out.push((a.clone(), b.clone()));
        }
    }
    Ok(out)
}

fn disc_product(shape: AnnulusShape, a: &Permutation, b: &Permutation) -> Permutation {
    let m = shape.outer;
    let mut image: Vec<usize> = a.images();
    image.extend(b.images().into_iter().map(|j| j + m));
    Permutation::from_images(&image).expect("product of bijections")
}

/// Pairs `(U, pi1 x pi2)` with `U` joining one cycle of each circle.
pub fn enumerate_ps_nc_prime(shape: AnnulusShape) -> Result<Vec<PartitionedPermutation>> {
    check_cap("partitioned enumeration", shape.total(), limits().partitioned)?;
    let mut out = Vec::new();
    for (a, b) in disc_factor_pairs(shape)? {
        let pi = disc_product(shape, &a, &b);
        let orbits = pi.orbits();
        let blocks = orbits.blocks();
        for (x, bx) in blocks.iter().enumerate() {
            if bx[0] >= shape.outer {
                continue;
            }
            for (y, by) in blocks.iter().enumerate() {
                if by[0] < shape.outer {
                    continue;
                }
                let labels: Vec<usize> =
                    (0..shape.total()).map(|i| if orbits.block_of(i) == y { x } else { orbits.block_of(i) }).collect();
                out.push(PartitionedPermutation::new(SetPartition::from_labels(&labels), pi.clone())?);
            }
        }
    }
    out.sort_unstable_by(|u, v| {
        u.permutation().cmp(v.permutation()).then_with(|| u.partition().cmp(v.partition()))
    });
    Ok(out)
}

/// `S_NC` as `(0_pi, pi)` followed by the primed part.
pub fn enumerate_ps_nc(shape: AnnulusShape) -> Result<Vec<PartitionedPermutation>> {
    check_cap("partitioned enumeration", shape.total(), limits().partitioned)?;
    let mut out: Vec<PartitionedPermutation> =
        enumerate_snc(shape)?.iter().cloned().map(PartitionedPermutation::from_permutation).collect();
    out.extend(enumerate_ps_nc_prime(shape)?);
    Ok(out)
}

// ---------------------------------------------------------------------------
// doubling

/// Builds `pi` with `pi(2k) = gamma(2k)` and `pi(gamma(2k)) = 2 sigma(k)` (1-based).
fn double_with(sigma: &Permutation, gamma2: &Permutation) -> Permutation {
    let n = sigma.size();
    let mut image = vec![0usize; 2 * n];
    for k in 0..n {
        let even = 2 * k + 1;
        let next = gamma2.apply(even);
        image[even] = next;
        image[next] = 2 * sigma.apply(k) + 1;
    }
    Permutation::from_images(&image).expect("doubling yields a bijection")
}

/// The double of a non-crossing permutation of a disc.
pub fn hat_double(p: &Permutation) -> Result<Permutation> {
    if !is_noncrossing_disc(p) {
        return Err(Error::Invalid(format!("{p} is not non-crossing")));
    }
    Ok(double_with(p, &Permutation::full_cycle(2 * p.size())))
}

/// `sigma` with `2 sigma(k) = p^2(2k)`; inverse of [`hat_double`].
pub fn undouble(p: &Permutation) -> Result<Permutation> {
    if p.size() % 2 == 1 {
        return Err(Error::Invalid("odd number of points".into()));
    }
    halve(p)
}

fn halve(p: &Permutation) -> Result<Permutation> {
    let n = p.size() / 2;
    let mut image = Vec::with_capacity(n);
    for k in 0..n {
        let y = p.apply(p.apply(2 * k + 1));
        if y % 2 == 0 {
            return Err(Error::Invalid(format!("{p} squares an even point to an odd one")));
        }
        image.push((y - 1) / 2);
    }
    Permutation::from_images(&image)
}

fn halve_shape(shape: AnnulusShape) -> Result<AnnulusShape> {
    if shape.outer % 2 == 1 || shape.inner % 2 == 1 {
        return Err(Error::Invalid(format!("shape {shape} has an odd circle")));
    }
    Ok(AnnulusShape::new(shape.outer / 2, shape.inner / 2))
}

/// The odd points `{1, 3, 5, ..}` in 1-based labels.
pub fn odd_points(n: usize) -> Vec<usize> {
    (0..n).step_by(2).collect()
}

/// The even points `{2, 4, ..}` in 1-based labels.
pub fn even_points(n: usize) -> Vec<usize> {
    (1..n).step_by(2).collect()
}

/// `gamma p^{-1}` separates the odd points.
pub fn separates_odd(p: &Permutation, shape: AnnulusShape) -> bool {
    let g = shape.gamma().compose(&p.inverse()).expect("same size");
    g.separates(&odd_points(shape.total()))
}

/// Collapses a parity reversing `p` on `(2p, 2q)` to `sigma` on `(p, q)`.
pub fn check_map(p: &Permutation, shape: AnnulusShape) -> Result<Permutation> {
    let half = halve_shape(shape)?;
    if p.size() != shape.total() {
        return Err(Error::SizeMismatch(format!("{p} on shape {shape}")));
    }
    match classify_parity(p, shape) {
        ParityClass::Reversing => {}
        ParityClass::NotAnnular => return Err(Error::Invalid(format!("{p} is not annular non-crossing"))),
        ParityClass::NotEven => return Err(Error::Invalid(format!("{p} has an odd cycle"))),
        ParityClass::Preserving => return Err(Error::Invalid(format!("{p} is not parity reversing"))),
    }
    if !is_annular_nc(p, shape) {
        return Err(Error::Invalid(format!("{p} has no through cycle")));
    }
    if !separates_odd(p, shape) {
        return Err(Error::Invalid(format!("gamma {p}^-1 does not separate the odd points")));
    }
    let gamma = shape.gamma();
    if let Some(k) = even_points(shape.total()).into_iter().find(|&k| p.apply(k) != gamma.apply(k)) {
        return Err(Error::Invalid(format!("{p} moves even point {} off gamma", k + 1)));
    }
    let sigma = halve(p)?;
    debug_assert!(is_annular_nc(&sigma, half));
    Ok(sigma)
}

/// Inverse of [`check_map`]: `pi(2k) = gamma(2k)`, `pi(gamma(2k)) = 2 sigma(k)`.
pub fn uncheck(sigma: &Permutation, shape: AnnulusShape) -> Result<Permutation> {
    if sigma.size() != shape.total() {
        return Err(Error::SizeMismatch(format!("{sigma} on shape {shape}")));
    }
    Ok(double_with(sigma, &shape.scaled(2).gamma()))
}

/// Doubles a block: `{2k, gamma(2k) : k in block}` on the doubled annulus.
pub fn double_block(block: &[usize], shape: AnnulusShape) -> Vec<usize> {
    let g = shape.scaled(2).gamma();
    let mut out: Vec<usize> = block.iter().flat_map(|&k| [2 * k + 1, g.apply(2 * k + 1)]).collect();
    out.sort_unstable();
    out
}

/// `(U, sigma) -> (U-hat, sigma-hat)` on the doubled annulus.
pub fn hat_partitioned(x: &PartitionedPermutation, shape: AnnulusShape) -> Result<PartitionedPermutation> {
    if x.size() != shape.total() {
        return Err(Error::SizeMismatch(format!("{x} on shape {shape}")));
    }
    let doubled = shape.scaled(2);
    let sigma_hat = uncheck(x.permutation(), shape)?;
    let blocks: Vec<Vec<usize>> = x.partition().blocks().iter().map(|b| double_block(b, shape)).collect();
    PartitionedPermutation::new(SetPartition::from_blocks(doubled.total(), &blocks)?, sigma_hat)
}

/// Inverse of [`hat_partitioned`].
pub fn unhat_partitioned(y: &PartitionedPermutation, doubled: AnnulusShape) -> Result<PartitionedPermutation> {
    let shape = halve_shape(doubled)?;
    let sigma = halve(y.permutation())?;
    let labels: Vec<usize> = (0..shape.total()).map(|k| y.partition().block_of(2 * k + 1)).collect();
    let x = PartitionedPermutation::new(SetPartition::from_labels(&labels), sigma)?;
    if hat_partitioned(&x, shape)? != *y {
        return Err(Error::Invalid(format!("{y} is not a double")));
    }
    Ok(x)
}

/// Parity preserving `pi` on the doubled annulus whose non-through cycles are
/// doubles of cycles of `sigma` and whose through cycles cover the double of
/// the joined block of `U`.
pub fn snc_grouped(x: &PartitionedPermutation, shape: AnnulusShape) -> Result<Vec<Permutation>> {
    let doubled = shape.scaled(2);
    let hat = hat_partitioned(x, shape)?;
    let groups = x.grouped_cycles();
    let joined = groups
        .iter()
        .position(|g| g.len() == 2)
        .ok_or_else(|| Error::Invalid(format!("{x} joins no pair of cycles")))?;
    let mut joined_hat: Vec<usize> = groups[joined].iter().flat_map(|c| double_block(c, shape)).collect();
    joined_hat.sort_unstable();
    let sigma_hat = hat.permutation();
    let mut out = Vec::new();
    for p in enumerate_snc_even(doubled)?.iter() {
        if classify_parity(p, doubled) != ParityClass::Preserving {
            continue;
        }
        let mut through: Vec<usize> = Vec::new();
        let mut ok = true;
        for c in p.cycles() {
            if c.iter().any(|&i| i < doubled.outer) && c.iter().any(|&i| i >= doubled.outer) {
                through.extend(&c);
            } else if sigma_hat.cycle_of(c[0]) != c {
                ok = false;
                break;
            }
        }
        through.sort_unstable();
        if ok && through == joined_hat {
            out.push(p.clone());
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// k-structures

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct KStructure {
    pub divisible: bool,
    pub equal: bool,
    pub alternating: bool,
    pub preserving: bool,
    pub completing: bool,
}

pub fn k_structure(p: &Permutation, shape: AnnulusShape, k: usize) -> Result<KStructure> {
    if k == 0 || shape.outer % k != 0 || shape.inner % k != 0 || p.size() != shape.total() {
        return Err(Error::SizeMismatch(format!("{p} on shape {shape} is not {k}-scaled")));
    }
    let n = p.size();
    let cycles = p.cycles();
    let preserving = (0..n).all(|i| p.apply(i) % k == i % k);
    let marks: Vec<usize> = (0..n).filter(|i| i % k == k - 1).collect();
    Ok(KStructure {
        divisible: cycles.iter().all(|c| c.len() % k == 0),
        equal: cycles.iter().all(|c| c.len() == k),
        alternating: (0..n).all(|i| p.apply(i) % k == (i + 1) % k),
        preserving,
        completing: preserving && kreweras_annulus(p, shape)?.separates(&marks),
    })
}
