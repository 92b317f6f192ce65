//! Truncated power series with exact rational coefficients, and the
//! generating-function identities tying cumulants of a square to a
//! determining sequence.
//!
//! Series in `z` around infinity are written in `u = 1/z`:
//! `C(z) = 1/z + sum kappa_n z^{-n-1}` becomes `u K(u)` with
//! `K = 1 + sum kappa_n u^n`, and `B(z) = sum beta_n z^{n-1}` stays a power
//! series in its own variable. Bivariate series are truncated by total degree.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::special::SequenceTable;
use crate::Rational;

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `sum_{k <= cutoff} a_k t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series1 {
    coeffs: Vec<Rational>,
}

impl Series1 {
    pub fn zero(cutoff: usize) -> Self {
        Series1 { coeffs: vec![Rational::zero(); cutoff + 1] }
    }

    pub fn one(cutoff: usize) -> Self {
        Self::constant(Rational::one(), cutoff)
    }

    pub fn constant(c: Rational, cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        s.coeffs[0] = c;
        s
    }

    /// The variable `t` itself.
    pub fn variable(cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        if cutoff >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Coefficients beyond `cutoff` are dropped, missing ones are zero.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = Rational>, cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        for (k, c) in coeffs.into_iter().enumerate().take(cutoff + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set(&mut self, k: usize, c: Rational) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.cutoff() != other.cutoff() {
            return Err(Error::SizeMismatch(format!("cutoffs {} and {}", self.cutoff(), other.cutoff())));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Series1 { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Series1 { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Series1 { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len();
        let mut out = Self::zero(n - 1);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        Self::from_coeffs(std::iter::repeat_n(Rational::zero(), k).chain(self.coeffs[..n.saturating_sub(k)].iter().cloned()), n - 1)
    }

    /// `1 / self`; the constant term must be 1.
    pub fn reciprocal(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Invalid(format!("reciprocal needs constant term 1, found {}", self.coeffs[0])));
        }
        let n = self.coeffs.len();
        let mut out = Self::zero(n - 1);
        out.coeffs[0] = Rational::one();
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc -= &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = acc;
        }
        Ok(out)
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Invalid("inner series of a composition must vanish at 0".into()));
        }
        let n = self.coeffs.len();
        let mut out = Self::constant(self.coeffs[n - 1].clone(), n - 1);
        for k in (0..n - 1).rev() {
            out = out.mul(inner)?;
            out.coeffs[0] += &self.coeffs[k];
        }
        Ok(out)
    }

    /// The derivative, known one degree less far.
    pub fn derive(&self) -> Self {
        let n = self.coeffs.len();
        Self::from_coeffs((1..n).map(|k| &self.coeffs[k] * int(k as i64)), n.saturating_sub(2))
    }

    /// The same series with a smaller cutoff.
    pub fn truncated(&self, cutoff: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().cloned(), cutoff.min(self.cutoff()))
    }

    /// `log(1 + self)`; the constant term must be 0.
    pub fn log1p(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Invalid("log1p needs a zero constant term".into()));
        }
        let n = self.coeffs.len();
        let mut out = Self::zero(n - 1);
        let mut power = self.clone();
        for k in 1..n {
            let c = Rational::new(int(if k % 2 == 1 { 1 } else { -1 }).to_integer(), (k as i64).into());
            out = out.add(&power.scale(&c))?;
            power = power.mul(self)?;
        }
        Ok(out)
    }

    /// Compositional inverse of `t + O(t^2)`.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.cutoff() >= 1 && !self.coeffs[1].is_one() {
            return Err(Error::Invalid("reversion needs a series t + O(t^2)".into()));
        }
        let t = Self::variable(self.cutoff());
        let mut g = t.clone();
        for _ in 0..self.cutoff() {
            g = t.sub(&self.compose(&g)?.sub(&g)?)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k.to_string(), Value::String(c.to_string())))
            .collect();
        Value::Object(map)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, first: &mut bool, c: &Rational, mono: &str) -> fmt::Result {
    let neg = c < &Rational::zero();
    let abs = if neg { -c } else { c.clone() };
    match (*first, neg) {
        (true, true) => f.write_str("-")?,
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
        (true, false) => {}
    }
    *first = false;
    if mono.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        f.write_str(mono)
    } else {
        write!(f, "{abs}*{mono}")
    }
}

fn monomial(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

impl fmt::Display for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            write_term(f, &mut first, c, &monomial("t", k))?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.cutoff() + 1)
    }
}

/// `sum_{i + j <= cutoff} a_{ij} s^i t^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series2 {
    cutoff: usize,
    coeffs: Vec<Vec<Rational>>,
}

impl Series2 {
    pub fn zero(cutoff: usize) -> Self {
        Series2 { cutoff, coeffs: (0..=cutoff).map(|i| vec![Rational::zero(); cutoff + 1 - i]).collect() }
    }

    pub fn one(cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        s.coeffs[0][0] = Rational::one();
        s
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.coeffs.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Entries with `i + j > cutoff` are ignored.
    pub fn set(&mut self, i: usize, j: usize, c: Rational) {
        if i + j <= self.cutoff {
            self.coeffs[i][j] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(Zero::is_zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.coeffs.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, c)| (i, j, c)))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::SizeMismatch(format!("cutoffs {} and {}", self.cutoff, other.cutoff)));
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(Series2 { cutoff: self.cutoff, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Series2 { cutoff: self.cutoff, coeffs: self.coeffs.iter().map(|r| r.iter().map(|a| a * c).collect()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.cutoff;
        let mut out = Self::zero(n);
        for (i, j, a) in self.terms().filter(|(_, _, a)| !a.is_zero()) {
            for k in 0..=n - i - j {
                for l in 0..=n - i - j - k {
                    let b = &other.coeffs[k][l];
                    if !b.is_zero() {
                        out.coeffs[i + k][j + l] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `f(s)` as a bivariate series.
    pub fn in_first(f: &Series1, cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        for k in 0..=cutoff.min(f.cutoff()) {
            s.coeffs[k][0] = f.coeff(k).clone();
        }
        s
    }

    /// `f(t)` as a bivariate series.
    pub fn in_second(f: &Series1, cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        for k in 0..=cutoff.min(f.cutoff()) {
            s.coeffs[0][k] = f.coeff(k).clone();
        }
        s
    }

    /// Derivative in the first variable, known one total degree less far.
    pub fn derive_first(&self) -> Self {
        let mut out = Self::zero(self.cutoff.saturating_sub(1));
        for (i, j, a) in self.terms().filter(|(i, _, _)| *i > 0) {
            out.set(i - 1, j, a * int(i as i64));
        }
        out
    }

    pub fn derive_second(&self) -> Self {
        let mut out = Self::zero(self.cutoff.saturating_sub(1));
        for (i, j, a) in self.terms().filter(|(_, j, _)| *j > 0) {
            out.set(i, j - 1, a * int(j as i64));
        }
        out
    }

    /// Multiplies by `s^a t^b`.
    pub fn shift(&self, a: usize, b: usize) -> Self {
        let mut out = Self::zero(self.cutoff);
        for (i, j, c) in self.terms() {
            out.set(i + a, j + b, c.clone());
        }
        out
    }

    /// Drops every term free of `s` or free of `t`.
    pub fn mixed_part(&self) -> Self {
        let mut out = self.clone();
        for (i, row) in out.coeffs.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                if i == 0 || j == 0 {
                    *c = Rational::zero();
                }
            }
        }
        out
    }

    pub fn log1p(&self) -> Result<Self> {
        if !self.coeffs[0][0].is_zero() {
            return Err(Error::Invalid("log1p needs a zero constant term".into()));
        }
        let mut out = Self::zero(self.cutoff);
        let mut power = self.clone();
        for k in 1..=self.cutoff {
            let c = Rational::new(int(if k % 2 == 1 { 1 } else { -1 }).to_integer(), (k as i64).into());
            out = out.add(&power.scale(&c))?;
            power = power.mul(self)?;
        }
        Ok(out)
    }

    /// `sum a_{ij} f(s)^i g(t)^j`; `f` and `g` must vanish at 0.
    pub fn compose(&self, f: &Series1, g: &Series1) -> Result<Self> {
        if !f.coeff(0).is_zero() || !g.coeff(0).is_zero() {
            return Err(Error::Invalid("inner series of a composition must vanish at 0".into()));
        }
        let n = self.cutoff;
        let fs = Self::in_first(f, n);
        let gt = Self::in_second(g, n);
        let mut fpow = vec![Self::one(n)];
        let mut gpow = vec![Self::one(n)];
        for k in 1..=n {
            fpow.push(fpow[k - 1].mul(&fs)?);
            gpow.push(gpow[k - 1].mul(&gt)?);
        }
        let mut out = Self::zero(n);
        for (i, j, a) in self.terms().filter(|(_, _, a)| !a.is_zero()) {
            out = out.add(&fpow[i].mul(&gpow[j])?.scale(a))?;
        }
        Ok(out)
    }

    pub fn swap(&self) -> Self {
        let mut out = Self::zero(self.cutoff);
        for (i, j, c) in self.terms() {
            out.coeffs[j][i] = c.clone();
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self
            .terms()
            .filter(|(_, _, c)| !c.is_zero())
            .map(|(i, j, c)| (format!("{i},{j}"), Value::String(c.to_string())))
            .collect();
        Value::Object(map)
    }
}

impl fmt::Display for Series2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms().filter(|(_, _, c)| !c.is_zero()) {
            let mono = [monomial("s", i), monomial("t", j)].into_iter().filter(|m| !m.is_empty()).collect::<Vec<_>>();
            write_term(f, &mut first, c, &mono.join("*"))?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(deg {})", self.cutoff + 1)
    }
}

/// `(P(s) - P(t)) / (s - t)` by synthetic division, checking that it is exact.
pub fn divided_difference(p: &Series1, cutoff: usize) -> Result<Series2> {
    // numerator as a polynomial in s over polynomials in t: N_k = p_k for k >= 1, N_0 = p_0 - P(t)
    let deg = p.cutoff();
    let mut rows: Vec<Vec<Rational>> = (0..=deg)
        .map(|k| {
            let mut r = vec![Rational::zero(); deg + 1];
            r[0] = p.coeff(k).clone();
            r
        })
        .collect();
    for (j, c) in p.coeffs().iter().enumerate() {
        rows[0][j] -= c;
    }
    // divide by (s - t): Q_{k-1} = N_k + t Q_k
    let mut q: Vec<Vec<Rational>> = vec![vec![Rational::zero(); deg + 1]; deg.max(1)];
    let mut carry = vec![Rational::zero(); deg + 1];
    for k in (1..=deg).rev() {
        let mut next = rows[k].clone();
        for j in 1..=deg {
            next[j] += &carry[j - 1];
        }
        if !carry[deg].is_zero() {
            return Err(Error::Invalid("divided difference overflowed its degree".into()));
        }
        q[k - 1] = next.clone();
        carry = next;
    }
    let mut rem = rows[0].clone();
    for j in 1..=deg {
        rem[j] += &carry[j - 1];
    }
    if !carry[deg].is_zero() || rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::Invalid("numerator is not divisible by s - t".into()));
    }
    let mut out = Series2::zero(cutoff);
    for (i, row) in q.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            out.set(i, j, c.clone());
        }
    }
    Ok(out)
}

/// `K(u) = 1 + sum_n kappa_n u^n`, so that `C = u K(u)`.
fn k_series(kappa: &SequenceTable, cutoff: usize) -> Result<Series1> {
    let mut k = Series1::one(cutoff);
    for n in 1..=cutoff {
        k.set(n, kappa.first_at(n)?);
    }
    Ok(k)
}

/// `B(x) = sum_n beta_n x^{n-1}`.
fn b_series(beta: &SequenceTable, cutoff: usize) -> Result<Series1> {
    let mut b = Series1::zero(cutoff);
    for n in 1..=cutoff + 1 {
        b.set(n - 1, beta.first_at(n)?);
    }
    Ok(b)
}

/// Residual of `1/C(z) + B(C(z)) = z` multiplied by `u = 1/z`:
/// `1/K(u) + u B(u K(u)) - 1`, to degree `cutoff`.
///
/// The same identity links moments (in place of `kappa`) to cumulants (in
/// place of `beta`).
pub fn check_first_order_relation(kappa: &SequenceTable, beta: &SequenceTable, cutoff: usize) -> Result<Series1> {
    let k = k_series(kappa, cutoff)?;
    let c = k.shift(1);
    let b = b_series(beta, cutoff - 1)?;
    let b = Series1::from_coeffs(b.coeffs().iter().cloned(), cutoff);
    let bc = b.compose(&c)?.shift(1);
    k.reciprocal()?.add(&bc)?.sub(&Series1::one(cutoff))
}

/// `C(z, w) = sum kappa_{p,q} u^{p+1} v^{q+1}`.
fn c2_series(kappa: &SequenceTable, cutoff: usize) -> Result<Series2> {
    let mut c = Series2::zero(cutoff);
    for p in 1..=cutoff - 3 {
        for q in 1..=cutoff - 2 - p {
            c.set(p + 1, q + 1, kappa.second_at(p, q)?);
        }
    }
    Ok(c)
}

/// `B(x, y) = sum beta_{p,q} x^{p-1} y^{q-1}`.
fn b2_series(beta: &SequenceTable, cutoff: usize) -> Result<Series2> {
    let mut b = Series2::zero(cutoff);
    for p in 1..=cutoff + 1 {
        for q in 1..=cutoff + 2 - p {
            b.set(p - 1, q - 1, beta.second_at(p, q)?);
        }
    }
    Ok(b)
}

fn lift(s: &Series2, cutoff: usize) -> Series2 {
    let mut out = Series2::zero(cutoff);
    for (i, j, c) in s.terms() {
        out.set(i, j, c.clone());
    }
    out
}

/// Residual of
/// `C(z,w) = C'(z) C'(w) B(C(z), C(w)) + d^2/dz dw log((C(z) - C(w)) / (z - w))`
/// in `u = 1/z`, `v = 1/w`, to total degree `cutoff`.
///
/// With `d/dz = -u^2 d/du` both right-hand terms carry a factor `u^2 v^2`.
/// The log argument equals `-u v Q(u, v)` with `Q = (uK(u) - vK(v)) / (u - v)`;
/// the constant and the `log u`, `log v` pieces die under the mixed
/// derivative, as do the pure-`u` and pure-`v` parts of `log Q`, which are
/// dropped before differentiating.
pub fn check_second_order_relation(kappa: &SequenceTable, beta: &SequenceTable, cutoff: usize) -> Result<Series2> {
    if cutoff < 4 {
        return Err(Error::Invalid("second-order relation needs cutoff at least 4".into()));
    }
    let inner = cutoff - 4;
    let k = k_series(kappa, cutoff - 2)?;
    let uk = Series1::from_coeffs(std::iter::once(Rational::zero()).chain(k.coeffs().iter().cloned()), cutoff - 1);

    let c = Series1::from_coeffs(uk.coeffs().iter().cloned(), inner);
    let dc = uk.derive();
    let dc = Series1::from_coeffs(dc.coeffs().iter().cloned(), inner);
    let derivs = Series2::in_first(&dc, inner).mul(&Series2::in_second(&dc, inner))?;
    let first = b2_series(beta, inner)?.compose(&c, &c)?.mul(&derivs)?;
    let first = lift(&first, cutoff).shift(2, 2);

    let q = divided_difference(&uk, cutoff - 2)?;
    let log = q.sub(&Series2::one(cutoff - 2))?.log1p()?.mixed_part();
    let second = lift(&log.derive_first().derive_second(), cutoff).shift(2, 2);

    c2_series(kappa, cutoff)?.sub(&first)?.sub(&second)
}
