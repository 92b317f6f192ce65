//! Brute-force references written without the library's permutation code.
#![allow(dead_code)]

use sofree::perm::Permutation;

pub type Perm = Vec<usize>;

pub fn all_perms(n: usize) -> Vec<Perm> {
    fn go(prefix: &mut Perm, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `(a b)(i) = a(b(i))`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

pub fn cycles(a: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; a.len()];
    let mut out = Vec::new();
    for s in 0..a.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = a[i];
        }
        out.push(c);
    }
    out
}

pub fn gamma(m: usize, n: usize) -> Perm {
    let mut g: Perm = (0..m + n).map(|i| i + 1).collect();
    if m > 0 {
        g[m - 1] = 0;
    }
    if n > 0 {
        g[m + n - 1] = m;
    }
    g
}

/// Non-crossing on a disc: `#pi + #(pi^{-1} gamma) = n + 1`.
pub fn is_nc(a: &[usize]) -> bool {
    let n = a.len();
    cycles(a).len() + cycles(&compose(&inverse(a), &gamma(n, 0))).len() == n + 1
}

/// Annular non-crossing: a through cycle and `#pi + #(pi^{-1} gamma) = m + n`.
pub fn is_snc(a: &[usize], m: usize, n: usize) -> bool {
    let through = cycles(a).iter().any(|c| c.iter().any(|&i| i < m) && c.iter().any(|&i| i >= m));
    through && cycles(a).len() + cycles(&compose(&inverse(a), &gamma(m, n))).len() == m + n
}

pub fn images(p: &Permutation) -> Perm {
    p.images()
}

pub fn perm(a: &[usize]) -> Permutation {
    Permutation::from_images(a).unwrap()
}

pub fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

pub fn binom(n: u64, k: u64) -> u64 {
    (1..=k).fold(1u64, |acc, i| acc * (n + 1 - i) / i)
}

/// All set partitions of `0..n` as label vectors (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let fresh = prefix.iter().max().map_or(0, |m| m + 1);
        for l in 0..=fresh {
            prefix.push(l);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}
