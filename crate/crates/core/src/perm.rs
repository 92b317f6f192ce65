//! Permutations, set partitions and partitioned permutations.
//!
//! Points are 0-based everywhere in the API. The text notation is 1-based:
//! `(1,2)(3,4)` for permutations, `{1,2|3,4}` for partitions and
//! `[{1,2|3,4} ; (1,2)(3)(4)]` for partitioned permutations.
//!
//! Composition follows the functional convention `(p * q)(i) = p(q(i))`.

use std::fmt;
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};

/// Largest supported number of points.
pub const MAX_POINTS: usize = u16::MAX as usize;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Box<[u16]>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_POINTS);
        Permutation { image: (0..n as u16).collect() }
    }

    /// The full cycle `i -> i + 1 (mod n)`.
    pub fn full_cycle(n: usize) -> Self {
        assert!(n <= MAX_POINTS);
        Permutation { image: (0..n).map(|i| ((i + 1) % n) as u16).collect() }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_POINTS {
            return Err(Error::Invalid(format!("{n} points is too many")));
        }
        let mut seen = vec![false; n];
        for &j in images {
            if j >= n || seen[j] {
                return Err(Error::Invalid(format!("{images:?} is not a bijection")));
            }
            seen[j] = true;
        }
        Ok(Permutation { image: images.iter().map(|&j| j as u16).collect() })
    }

    /// Builds a permutation on `n` points from disjoint cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::Invalid(format!("{n} points is too many")));
        }
        let mut image: Vec<u16> = (0..n as u16).collect();
        let mut seen = vec![false; n];
        for c in cycles {
            for (t, &i) in c.iter().enumerate() {
                if i >= n {
                    return Err(Error::SizeMismatch(format!("point {} outside 1..={n}", i + 1)));
                }
                if seen[i] {
                    return Err(Error::Invalid(format!("point {} appears twice", i + 1)));
                }
                seen[i] = true;
                image[i] = c[(t + 1) % c.len()] as u16;
            }
        }
        Ok(Permutation { image: image.into() })
    }

    pub(crate) fn from_raw(image: Vec<u16>) -> Self {
        Permutation { image: image.into() }
    }

    /// Number of points acted on.
    pub fn size(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&j| j as usize).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.size()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Permutation { image: inv.into() }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(format!(
                "cannot compose permutations of sizes {} and {}",
                self.size(),
                other.size()
            )));
        }
        Ok(Permutation { image: other.image.iter().map(|&j| self.image[j as usize]).collect() })
    }

    /// Cycles, each starting at its least point, ordered by least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                c.push(i);
                i = self.apply(i);
            }
            out.push(c);
        }
        out
    }

    /// The cycle through `i`, read from its least point.
    pub fn cycle_of(&self, i: usize) -> Vec<usize> {
        let mut c = vec![i];
        let mut j = self.apply(i);
        while j != i {
            c.push(j);
            j = self.apply(j);
        }
        let k = c.iter().enumerate().min_by_key(|(_, &x)| x).map(|(k, _)| k).unwrap_or(0);
        c.rotate_left(k);
        c
    }

    pub fn cycle_count(&self) -> usize {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
            }
        }
        count
    }

    /// Minimal number of transpositions needed to write the permutation.
    pub fn length(&self) -> usize {
        self.size() - self.cycle_count()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// True when no cycle contains two of `points`.
    pub fn separates(&self, points: &[usize]) -> bool {
        self.orbits().separates(points)
    }

    /// The first-return map of `self` on `points`, as images indexed like `points`.
    ///
    /// Entry `t` is the index in `points` of `self^r(points[t])` for the least `r >= 1`
    /// landing back in `points`.
    pub fn induced(&self, points: &[usize]) -> Result<Permutation> {
        let n = self.size();
        let mut index = vec![usize::MAX; n];
        for (t, &p) in points.iter().enumerate() {
            if p >= n || index[p] != usize::MAX {
                return Err(Error::Invalid(format!("bad point set {points:?}")));
            }
            index[p] = t;
        }
        let image: Vec<u16> = points
            .iter()
            .map(|&p| {
                let mut j = self.apply(p);
                while index[j] == usize::MAX {
                    j = self.apply(j);
                }
                index[j] as u16
            })
            .collect();
        Ok(Permutation::from_raw(image))
    }

    /// The orbit partition, as an explicit coercion.
    pub fn as_partition(&self) -> SetPartition {
        self.orbits()
    }

    /// Partition into orbits.
    pub fn orbits(&self) -> SetPartition {
        let mut labels = vec![u16::MAX; self.size()];
        let mut next = 0u16;
        for start in 0..self.size() {
            if labels[start] != u16::MAX {
                continue;
            }
            let mut i = start;
            while labels[i] == u16::MAX {
                labels[i] = next;
                i = self.apply(i);
            }
            next += 1;
        }
        SetPartition { labels: labels.into() }
    }

    /// Parses cycle notation on exactly `n` points.
    pub fn parse_sized(s: &str, n: usize) -> Result<Self> {
        let (cycles, max) = parse_cycles(s)?;
        if max > n {
            return Err(Error::SizeMismatch(format!("point {max} outside 1..={n}")));
        }
        Permutation::from_cycles(n, &cycles)
    }
}

/// `pi^{-1} * gamma_n`.
pub fn kreweras_complement(pi: &Permutation) -> Permutation {
    let gamma = Permutation::full_cycle(pi.size());
    pi.inverse().compose(&gamma).expect("same size")
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() == 0 {
            return f.write_str("()");
        }
        for c in self.cycles() {
            f.write_str("(")?;
            for (t, i) in c.iter().enumerate() {
                if t > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// The size is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let (cycles, max) = parse_cycles(s)?;
        Permutation::from_cycles(max, &cycles)
    }
}

struct Scanner<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str) -> Self {
        Scanner { chars: s.chars().enumerate().map(|(i, c)| (i + 1, c)).collect(), pos: 0, _src: s }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map(|&(c, _)| c).unwrap_or(self.chars.len() + 1)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(parse_err(self.column(), format!("expected '{want}', found '{c}'"))),
            None => Err(parse_err(self.column(), format!("expected '{want}', found end of input"))),
        }
    }

    /// A 1-based point, returned 0-based.
    fn point(&mut self) -> Result<usize> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(col, "expected a point label"));
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let v: usize = text.parse().map_err(|_| parse_err(col, "point label too large"))?;
        if v == 0 {
            return Err(parse_err(col, "points are numbered from 1"));
        }
        if v > MAX_POINTS {
            return Err(parse_err(col, "point label too large"));
        }
        Ok(v - 1)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn scan_cycles(sc: &mut Scanner<'_>) -> Result<(Vec<Vec<usize>>, usize)> {
    let mut cycles = Vec::new();
    let mut max = 0;
    let mut any = false;
    while sc.peek() == Some('(') {
        any = true;
        sc.pos += 1;
        let mut c = Vec::new();
        if sc.peek() == Some(')') {
            sc.pos += 1;
            continue;
        }
        loop {
            let p = sc.point()?;
            max = max.max(p + 1);
            c.push(p);
            match sc.peek() {
                Some(',') => sc.pos += 1,
                Some(')') => {
                    sc.pos += 1;
                    break;
                }
                Some(ch) if ch.is_ascii_digit() => {}
                Some(ch) => return Err(parse_err(sc.column(), format!("unexpected '{ch}' in cycle"))),
                None => return Err(parse_err(sc.column(), "unterminated cycle")),
            }
        }
        cycles.push(c);
    }
    if !any {
        return Err(parse_err(sc.column(), "expected '('"));
    }
    Ok((cycles, max))
}

fn parse_cycles(s: &str) -> Result<(Vec<Vec<usize>>, usize)> {
    let mut sc = Scanner::new(s);
    let out = scan_cycles(&mut sc)?;
    if !sc.at_end() {
        return Err(parse_err(sc.column(), "trailing input"));
    }
    check_disjoint(&out.0)?;
    Ok(out)
}

fn check_disjoint(groups: &[Vec<usize>]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for g in groups {
        for &p in g {
            if !seen.insert(p) {
                return Err(Error::Invalid(format!("point {} appears twice", p + 1)));
            }
        }
    }
    Ok(())
}

/// A partition of `{0, .., n-1}` stored as canonical block labels
/// (blocks numbered in order of their least element).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Box<[u16]>,
}

impl SetPartition {
    pub fn singletons(n: usize) -> Self {
        SetPartition { labels: (0..n as u16).collect() }
    }

    pub fn one_block(n: usize) -> Self {
        SetPartition { labels: vec![0u16; n].into() }
    }

    /// Unlisted points become singletons.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &i in block {
                if i >= n {
                    return Err(Error::SizeMismatch(format!("point {} outside 1..={n}", i + 1)));
                }
                if raw[i] != usize::MAX {
                    return Err(Error::Invalid(format!("point {} appears twice", i + 1)));
                }
                raw[i] = b;
            }
        }
        let mut next = blocks.len();
        for r in raw.iter_mut() {
            if *r == usize::MAX {
                *r = next;
                next += 1;
            }
        }
        Ok(Self::from_labels(&raw))
    }

    /// Canonicalises arbitrary block labels.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels: Vec<u16> = raw
            .iter()
            .map(|r| {
                let k = map.len() as u16;
                *map.entry(*r).or_insert(k)
            })
            .collect();
        SetPartition { labels: labels.into() }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// `n - #blocks`.
    pub fn rank(&self) -> usize {
        self.size() - self.block_count()
    }

    #[inline]
    pub fn block_of(&self, i: usize) -> usize {
        self.labels[i] as usize
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// Blocks as sorted point lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i);
        }
        out
    }

    /// Least upper bound in the refinement order.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch("partitions of different sizes".into()));
        }
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for part in [self, other] {
            let mut first = vec![usize::MAX; part.block_count()];
            for i in 0..n {
                let b = part.block_of(i);
                if first[b] == usize::MAX {
                    first[b] = i;
                } else {
                    let (a, c) = (find(&mut parent, first[b]), find(&mut parent, i));
                    parent[a] = c;
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        Ok(SetPartition::from_labels(&roots))
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let mut target = vec![u16::MAX; self.block_count()];
        for i in 0..self.size() {
            let b = self.labels[i] as usize;
            if target[b] == u16::MAX {
                target[b] = other.labels[i];
            } else if target[b] != other.labels[i] {
                return false;
            }
        }
        true
    }

    /// True when no block contains two of `points`.
    pub fn separates(&self, points: &[usize]) -> bool {
        let mut hit = vec![false; self.block_count()];
        for &p in points {
            let b = self.block_of(p);
            if hit[b] {
                return false;
            }
            hit[b] = true;
        }
        true
    }

    /// Each block becomes the increasing cycle through its points.
    pub fn as_permutation(&self) -> Permutation {
        let mut image = vec![0u16; self.size()];
        for b in self.blocks() {
            for (t, &i) in b.iter().enumerate() {
                image[i] = b[(t + 1) % b.len()] as u16;
            }
        }
        Permutation::from_raw(image)
    }

    pub fn parse_sized(s: &str, n: usize) -> Result<Self> {
        let (blocks, max) = parse_blocks(s)?;
        if max > n {
            return Err(Error::SizeMismatch(format!("point {max} outside 1..={n}")));
        }
        SetPartition::from_blocks(n, &blocks)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                f.write_str("|")?;
            }
            for (t, i) in block.iter().enumerate() {
                if t > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", i + 1)?;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (blocks, max) = parse_blocks(s)?;
        SetPartition::from_blocks(max, &blocks)
    }
}

fn scan_blocks(sc: &mut Scanner<'_>) -> Result<(Vec<Vec<usize>>, usize)> {
    sc.expect('{')?;
    let mut blocks = vec![Vec::new()];
    let mut max = 0;
    if sc.peek() == Some('}') {
        sc.pos += 1;
        return Ok((Vec::new(), 0));
    }
    loop {
        let p = sc.point()?;
        max = max.max(p + 1);
        blocks.last_mut().unwrap().push(p);
        match sc.peek() {
            Some(',') => sc.pos += 1,
            Some('|') => {
                sc.pos += 1;
                blocks.push(Vec::new());
            }
            Some('}') => {
                sc.pos += 1;
                break;
            }
            Some(ch) => return Err(parse_err(sc.column(), format!("unexpected '{ch}' in partition"))),
            None => return Err(parse_err(sc.column(), "unterminated partition")),
        }
    }
    Ok((blocks, max))
}

fn parse_blocks(s: &str) -> Result<(Vec<Vec<usize>>, usize)> {
    let mut sc = Scanner::new(s);
    let out = scan_blocks(&mut sc)?;
    if !sc.at_end() {
        return Err(parse_err(sc.column(), "trailing input"));
    }
    check_disjoint(&out.0)?;
    Ok(out)
}

/// A pair `(U, pi)` where every cycle of `pi` lies in a block of `U`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionedPermutation {
    partition: SetPartition,
    perm: Permutation,
}

impl PartitionedPermutation {
    pub fn new(partition: SetPartition, perm: Permutation) -> Result<Self> {
        if partition.size() != perm.size() {
            return Err(Error::SizeMismatch(format!(
                "partition on {} points, permutation on {}",
                partition.size(),
                perm.size()
            )));
        }
        if !perm.orbits().refines(&partition) {
            return Err(Error::Invalid(format!("{perm} is not finer than {partition}")));
        }
        Ok(PartitionedPermutation { partition, perm })
    }

    /// `(0_pi, pi)`: the partition is the orbit partition.
    pub fn from_permutation(perm: Permutation) -> Self {
        PartitionedPermutation { partition: perm.orbits(), perm }
    }

    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn size(&self) -> usize {
        self.perm.size()
    }

    /// `2|U| - |pi|`.
    pub fn length(&self) -> usize {
        2 * self.partition.rank() - self.perm.length()
    }

    /// `(U v V, pi sigma)`.
    pub fn product(&self, other: &PartitionedPermutation) -> Result<PartitionedPermutation> {
        let partition = self.partition.join(&other.partition)?;
        let perm = self.perm.compose(&other.perm)?;
        Ok(PartitionedPermutation { partition, perm })
    }

    /// Blocks of `U` split into the cycles of `pi` they contain, each list ordered
    /// by least element.
    pub fn grouped_cycles(&self) -> Vec<Vec<Vec<usize>>> {
        let mut groups = vec![Vec::new(); self.partition.block_count()];
        for c in self.perm.cycles() {
            groups[self.partition.block_of(c[0])].push(c);
        }
        groups
    }

    pub fn parse_sized(s: &str, n: usize) -> Result<Self> {
        let (blocks, cycles, max) = parse_pp(s)?;
        if max > n {
            return Err(Error::SizeMismatch(format!("point {max} outside 1..={n}")));
        }
        PartitionedPermutation::new(SetPartition::from_blocks(n, &blocks)?, Permutation::from_cycles(n, &cycles)?)
    }
}

/// True when `x * y == target` and the lengths add up.
pub fn is_exact_factorization(
    x: &PartitionedPermutation,
    y: &PartitionedPermutation,
    target: &PartitionedPermutation,
) -> Result<bool> {
    let prod = x.product(y)?;
    Ok(&prod == target && target.length() == x.length() + y.length())
}

fn parse_pp(s: &str) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>, usize)> {
    let mut sc = Scanner::new(s);
    sc.expect('[')?;
    let (blocks, m1) = scan_blocks(&mut sc)?;
    sc.expect(';')?;
    let (cycles, m2) = scan_cycles(&mut sc)?;
    sc.expect(']')?;
    if !sc.at_end() {
        return Err(parse_err(sc.column(), "trailing input"));
    }
    check_disjoint(&blocks)?;
    check_disjoint(&cycles)?;
    Ok((blocks, cycles, m1.max(m2)))
}

impl fmt::Display for PartitionedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ; {}]", self.partition, self.perm)
    }
}

impl fmt::Debug for PartitionedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PartitionedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (blocks, cycles, max) = parse_pp(s)?;
        PartitionedPermutation::new(SetPartition::from_blocks(max, &blocks)?, Permutation::from_cycles(max, &cycles)?)
    }
}

/// Two circles: points `0..outer` and `outer..outer + inner`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnulusShape {
    pub outer: usize,
    pub inner: usize,
}

impl AnnulusShape {
    pub fn new(outer: usize, inner: usize) -> Self {
        AnnulusShape { outer, inner }
    }

    pub fn total(&self) -> usize {
        self.outer + self.inner
    }

    pub fn is_outer(&self, i: usize) -> bool {
        i < self.outer
    }

    /// `(1,..,m)(m+1,..,m+n)`.
    pub fn gamma(&self) -> Permutation {
        let (m, n) = (self.outer, self.inner);
        let image: Vec<u16> = (0..m + n)
            .map(|i| if i < m { (i + 1) % m } else { m + (i - m + 1) % n })
            .map(|j| j as u16)
            .collect();
        Permutation::from_raw(image)
    }

    /// Shape with both circles scaled by `k`.
    pub fn scaled(&self, k: usize) -> Self {
        AnnulusShape { outer: self.outer * k, inner: self.inner * k }
    }
}

impl fmt::Display for AnnulusShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.outer, self.inner)
    }
}

impl FromStr for AnnulusShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| parse_err(1, "expected 'm,n'"))?;
        let outer = a.trim().parse().map_err(|_| parse_err(1, format!("bad outer size '{a}'")))?;
        let inner = b
            .trim()
            .parse()
            .map_err(|_| parse_err(a.chars().count() + 2, format!("bad inner size '{b}'")))?;
        if outer == 0 || inner == 0 {
            return Err(Error::Invalid("both circles need at least one point".into()));
        }
        Ok(AnnulusShape { outer, inner })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_convention() {
        let pi: Permutation = "(1,2)(3,4)".parse().unwrap();
        let k = kreweras_complement(&pi);
        assert_eq!(k.to_string(), "(1)(2,4)(3)");
        let p: Permutation = "(1,2,3)".parse().unwrap();
        let q = Permutation::parse_sized("(1,2)", 3).unwrap();
        // p(q(1)) = p(2) = 3
        assert_eq!(p.compose(&q).unwrap().apply(0), 2);
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::full_cycle(5).length(), 4);
        assert_eq!(Permutation::identity(5).length(), 0);
        assert_eq!(AnnulusShape::new(3, 2).gamma().length(), 3);
    }

    #[test]
    fn parse_errors_report_columns() {
        match "(1,2(3)".parse::<Permutation>() {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!("(1,2)(2,3)".parse::<Permutation>(), Err(Error::Invalid(_))));
        assert!(matches!(Permutation::parse_sized("(1,5)", 4), Err(Error::SizeMismatch(_))));
        assert!(matches!("{1,0}".parse::<SetPartition>(), Err(Error::Parse { column: 4, .. })));
    }

    #[test]
    fn partition_round_trip() {
        let p: SetPartition = "{1,3|2|4,5}".parse().unwrap();
        assert_eq!(p.to_string(), "{1,3|2|4,5}");
        assert_eq!(p.block_count(), 3);
        let q: SetPartition = "{1|2,4|3|5}".parse().unwrap();
        assert_eq!(p.join(&q).unwrap().to_string(), "{1,3|2,4,5}");
        assert!(p.refines(&p.join(&q).unwrap()));
    }

    #[test]
    fn partitioned_permutation_product() {
        let a = PartitionedPermutation::parse_sized("[{1,2|3,4} ; (1,2)(3)(4)]", 4).unwrap();
        assert_eq!(a.length(), 3);
        let t12 = PartitionedPermutation::from_permutation(Permutation::parse_sized("(1,2)", 3).unwrap());
        let t23 = PartitionedPermutation::from_permutation(Permutation::parse_sized("(2,3)", 3).unwrap());
        let p = t12.product(&t23).unwrap();
        assert_eq!(p.to_string(), "[{1,2,3} ; (1,2,3)]");
        assert!(is_exact_factorization(&t12, &t23, &p).unwrap());
        let sq = t12.product(&t12).unwrap();
        assert_eq!(sq.to_string(), "[{1,2|3} ; (1)(2)(3)]");
        assert!(is_exact_factorization(&t12, &t12, &sq).unwrap());
        let big = PartitionedPermutation::parse_sized("[{1,2,3} ; (1,2,3)]", 3).unwrap();
        assert!(!is_exact_factorization(&big, &big, &big.product(&big).unwrap()).unwrap());
        assert!(PartitionedPermutation::parse_sized("[{1|2} ; (1,2)]", 2).is_err());
    }

    #[test]
    fn induced_and_separation() {
        let g = Permutation::full_cycle(4);
        assert_eq!(g.induced(&[0, 2]).unwrap().to_string(), "(1,2)");
        let k: Permutation = "(1)(2,4)(3)".parse().unwrap();
        assert!(!k.separates(&[1, 3]));
        assert!(AnnulusShape::new(2, 2).gamma().separates(&[0, 2]));
        let part: SetPartition = "{1,3|2}".parse().unwrap();
        assert_eq!(part.as_permutation().to_string(), "(1,3)(2)");
        assert_eq!(part.as_permutation().as_partition(), part);
    }

    #[test]
    fn shape_parse() {
        let s: AnnulusShape = "3, 2".parse().unwrap();
        assert_eq!(s, AnnulusShape::new(3, 2));
        assert!("3".parse::<AnnulusShape>().is_err());
        assert!("0,2".parse::<AnnulusShape>().is_err());
    }
}
