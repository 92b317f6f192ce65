//! Worked values for the standard distributions, each reported with the
//! expected and the computed value.

use std::fmt::Display;

use num_traits::Zero;
use serde::Serialize;

use crate::annular::{
    check_map, enumerate_annular_pairings, enumerate_nc, enumerate_nc_pairings, enumerate_snc,
};
use crate::cumulants::{
    element_cumulants, products_as_arguments_second, word_phi, word_phi2, CumulantModel, CumulantSource, FamilyLaw,
    LetterId, MomentTable,
};
use crate::error::Result;
use crate::perm::{AnnulusShape, Permutation};
use crate::series::{check_first_order_relation, check_second_order_relation};
use crate::special::{
    alternating_pattern, check_mt1, conjugation_by_circular, determining_of_even, determining_of_r_diagonal,
    haar_power_cumulants, hermitization, hermitization_terms, square_cumulants, square_cumulants_direct,
    SequenceTable, StarElement,
};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleCheck {
    pub group: &'static str,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Default)]
struct Recorder {
    checks: Vec<ExampleCheck>,
}

impl Recorder {
    fn value<T: PartialEq + Display>(&mut self, group: &'static str, name: impl Into<String>, expected: T, actual: T) {
        self.checks.push(ExampleCheck {
            group,
            name: name.into(),
            passed: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(n.into())
}

fn catalan(n: usize) -> usize {
    (0..n).fold(1usize, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

fn binom(n: usize, k: usize) -> usize {
    (1..=k).fold(1usize, |acc, i| acc * (n + 1 - i) / i)
}

/// Runs every worked example. `mt1_order` bounds the product checks, which
/// dominate the running time.
pub fn run_examples(mt1_order: usize) -> Result<Vec<ExampleCheck>> {
    let mut rec = Recorder::default();
    counts(&mut rec)?;
    circulars(&mut rec)?;
    squares(&mut rec)?;
    products(&mut rec, mt1_order)?;
    haar(&mut rec)?;
    conjugation(&mut rec)?;
    series(&mut rec)?;
    hermitizations(&mut rec)?;
    Ok(rec.checks)
}

fn counts(rec: &mut Recorder) -> Result<()> {
    for n in 1..=12 {
        rec.value("counting", format!("|NC({n})|"), catalan(n), enumerate_nc(n)?.len());
    }
    for ((m, n), want) in [((1, 1), 1), ((1, 2), 4), ((2, 2), 18), ((1, 3), 15)] {
        rec.value("counting", format!("|S_NC({m},{n})|"), want, enumerate_snc(AnnulusShape::new(m, n))?.len());
    }
    for t in 2..=5 {
        for p in 1..t {
            let q = t - p;
            let pairings = enumerate_annular_pairings(AnnulusShape::new(2 * p, 2 * q))?.len();
            rec.value("counting", format!("2 |S_NC({p},{q})|"), pairings, 2 * enumerate_snc(AnnulusShape::new(p, q))?.len());
        }
    }
    let rev = Permutation::parse_sized("(1,14,15,12)(2,3)(4,5,18,13)(6,7)(8,9,10,11,16,17)", 18)?;
    let sigma = check_map(&rev, AnnulusShape::new(12, 6))?;
    rec.value("counting", "collapse of the reversing example", "(1)(2,9)(3)(4,5,8)(6,7)".to_string(), sigma.to_string());
    Ok(())
}

fn circulars(rec: &mut Recorder) -> Result<()> {
    let mut m = CumulantModel::new(32);
    let (c1, c1s) = m.add_circular("c1", "c1*")?;
    let (c2, c2s) = m.add_circular("c2", "c2*")?;
    let (c3, _) = m.add_circular("c3", "c3*")?;
    let hh = [c1, c2, c2s, c1s];
    for (p, q, want) in [(1, 1, 3), (1, 2, 20), (2, 2, 150)] {
        rec.value("hh*", format!("phi2((hh*)^{p}, (hh*)^{q})"), int(want), word_phi2(&m, &hh.repeat(p), &hh.repeat(q))?);
    }
    let sq = square_cumulants_direct(&m, &[c1, c2], 4)?;
    for n in 1..=4 {
        rec.value("hh*", format!("kappa_{n}(hh*)"), int(catalan(n)), sq.first_at(n)?);
    }
    for (p, q, want) in [(1, 1, 1), (1, 2, 4), (2, 2, 18), (1, 3, 15)] {
        rec.value("hh*", format!("kappa_{p},{q}(hh*)"), int(want), sq.second_at(p, q)?);
    }
    let h3 = StarElement::new(&m, &[c1, c2, c3])?;
    for n in 1..=4 {
        let want = enumerate_nc_pairings(2 * n)?.len();
        rec.value("h3", format!("kappa_{}(h3, h3*, ..)", 2 * n), int(want), h3.kappa(&alternating_pattern(n))?);
    }
    for t in 2..=4 {
        for p in 1..t {
            let q = t - p;
            let half = enumerate_annular_pairings(AnnulusShape::new(2 * p, 2 * q))?.len() / 2;
            let v = h3.kappa2(&alternating_pattern(p), &alternating_pattern(q))?;
            rec.value("h3", format!("kappa_{},{}(h3, h3*, ..)", 2 * p, 2 * q), int(half), v);
        }
    }
    Ok(())
}

fn squares(rec: &mut Recorder) -> Result<()> {
    let mut m = CumulantModel::new(32);
    let (c, _) = m.add_circular("c", "c*")?;
    let s = m.add_semicircular("s")?;
    let circ = square_cumulants(&determining_of_r_diagonal(&m, &[c], 8)?, 8)?;
    let semi = square_cumulants(&determining_of_even(&m, &[s], 8)?, 8)?;
    for p in 1..=4 {
        for q in 1..=4 {
            rec.value("squares", format!("kappa_{p},{q}(cc*)"), Rational::zero(), circ.second_at(p, q)?);
            let want = int(p * binom(p + q - 1, p));
            rec.value("squares", format!("kappa_{p},{q}(s^2)"), want, semi.second_at(p, q)?);
        }
    }
    Ok(())
}

fn products(rec: &mut Recorder, order: usize) -> Result<()> {
    let mut m = CumulantModel::new(32);
    let (c, _) = m.add_circular("c", "c*")?;
    let (u, _) = m.add_haar_unitary("u", "u*")?;
    let (c1, _) = m.add_circular("c1", "c1*")?;
    let (c2, _) = m.add_circular("c2", "c2*")?;
    let p = m.add_free_poisson("p", int(1))?;
    let s = m.add_semicircular("s")?;
    for (r, b, name) in [(vec![c], vec![p], "c p"), (vec![u], vec![s], "u s"), (vec![c1, c2], vec![p], "c1 c2 p")] {
        let rep = check_mt1(&m, &r, &b, order, order)?;
        let verdict = if rep.passed() { "R-diagonal" } else { "violated" };
        rec.value("products", format!("{name} at order {order}"), "R-diagonal", verdict);
    }
    Ok(())
}

fn haar(rec: &mut Recorder) -> Result<()> {
    let mut m = CumulantModel::new(32);
    let (u, _) = m.add_haar_unitary("u", "u*")?;
    rec.value("haar", "phi(u u*)", int(1), word_phi(&m, &[u, m.alphabet().star(u)])?);
    for k in 1..=4 {
        let us = m.alphabet().star(u);
        rec.value("haar", format!("phi2(u^{k}, u^-{k})"), int(k), word_phi2(&m, &vec![u; k], &vec![us; k])?);
    }
    // magnitudes are reported, only the signs are compared
    let el = StarElement::new(&m, &[u])?;
    for t in 2..=5 {
        for a in 1..t {
            let b = t - a;
            let v = el.kappa2(&alternating_pattern(a), &alternating_pattern(b))?;
            let sign = |x: &Rational| if x.is_zero() { "0" } else if *x > Rational::zero() { "+" } else { "-" };
            let want = if t % 2 == 0 { "+" } else { "-" };
            rec.value("haar", format!("sign of kappa_{},{}(u, u*, ..) = {v}", 2 * a, 2 * b), want, sign(&v));
        }
    }
    for p in 1..=3 {
        for a in 1..=3 {
            for b in 1..=3 {
                let want = if a == b { int((p - 1) * b) } else { Rational::zero() };
                let v = haar_power_cumulants(&m, u, p, &vec![false; a], &vec![true; b])?;
                rec.value("haar", format!("kappa_{a},{b} of u^{p} | u^-{p}"), want, v);
            }
        }
    }
    Ok(())
}

fn conjugation(rec: &mut Recorder) -> Result<()> {
    let mut m = CumulantModel::new(32);
    let (c, _) = m.add_circular("c", "c*")?;
    let s = m.add_semicircular("s")?;
    let rep = conjugation_by_circular(&m, c, &[s], 5)?;
    for ((p, q), (k, phi)) in &rep.second {
        rec.value("conjugation", format!("kappa_{p},{q}(csc*)"), phi.clone(), k.clone());
    }

    let mut src = CumulantModel::new(32);
    let (c1, c1s) = src.add_circular("c1", "c1*")?;
    let (c2, c2s) = src.add_circular("c2", "c2*")?;
    let hh = [c1, c2, c2s, c1s];
    let mut m2 = CumulantModel::new(32);
    let (c, _) = m2.add_circular("c", "c*")?;
    let x = LetterId(m2.alphabet().len() as u16);
    let mut table = MomentTable { truncation: 5, ..Default::default() };
    for n in 1..=5 {
        table.first.insert(vec![x; n], word_phi(&src, &hh.repeat(n))?);
    }
    for p in 1..5 {
        for q in 1..=5 - p {
            table.second.insert((vec![x; p], vec![x; q]), word_phi2(&src, &hh.repeat(p), &hh.repeat(q))?);
        }
    }
    m2.add_family("h", &[("x", "x")], FamilyLaw::Moments(table))?;
    let rep = conjugation_by_circular(&m2, c, &[x], 5)?;
    for ((p, q), (k, phi)) in &rep.second {
        rec.value("conjugation", format!("kappa_{p},{q}(c x c*), x ~ hh*"), phi.clone(), k.clone());
    }

    let mut m3 = CumulantModel::new(32);
    let (u, us) = m3.add_haar_unitary("u", "u*")?;
    let s = m3.add_semicircular("s")?;
    let grouped = products_as_arguments_second(&[vec![u, s, us]], &[vec![s]], &m3, None)?;
    let from_moments = element_cumulants(&m3, vec![vec![u, s, us], vec![s]]).kappa2(&[LetterId(0)], &[LetterId(1)])?;
    rec.value("conjugation", "kappa_1,1(u s u*, s), grouped", int(1), grouped);
    rec.value("conjugation", "kappa_1,1(u s u*, s), from moments", int(1), from_moments);
    Ok(())
}

fn series(rec: &mut Recorder) -> Result<()> {
    let cutoff = 8;
    let mut beta = SequenceTable::new(cutoff);
    beta.first.insert(1, int(1));
    let mut kappa = SequenceTable::new(cutoff);
    for n in 1..=cutoff {
        kappa.first.insert(n, int(1));
        beta.second.insert((n, n), int(n));
        for p in 1..n {
            kappa.second.insert((p, n - p), int(p * binom(n - 1, p)));
        }
    }
    let zero = |ok: bool| if ok { "0" } else { "nonzero" };
    let first = check_first_order_relation(&kappa, &beta, cutoff)?.is_zero();
    let second = check_second_order_relation(&kappa, &beta, cutoff)?.is_zero();
    rec.value("series", "semicircle, first-order residual", "0", zero(first));
    rec.value("series", "semicircle, second-order residual", "0", zero(second));

    let mut m = CumulantModel::new(32);
    let (u, _) = m.add_haar_unitary("u", "u*")?;
    let (c, _) = m.add_circular("c", "c*")?;
    for (a, name) in [(u, "haar"), (c, "circular")] {
        let beta = determining_of_r_diagonal(&m, &[a], cutoff)?;
        let sq = square_cumulants(&beta, cutoff)?;
        let first = check_first_order_relation(&sq, &beta, cutoff)?.is_zero();
        let second = check_second_order_relation(&sq, &beta, cutoff)?.is_zero();
        rec.value("series", format!("{name}, first-order residual"), "0", zero(first));
        rec.value("series", format!("{name}, second-order residual"), "0", zero(second));
    }
    Ok(())
}

fn hermitizations(rec: &mut Recorder) -> Result<()> {
    let mut m = CumulantModel::new(32);
    let (c, _) = m.add_circular("c", "c*")?;
    let (u, _) = m.add_haar_unitary("u", "u*")?;
    for (a, name) in [(c, "circular"), (u, "haar")] {
        let herm = hermitization(&m, &[a], 6)?;
        let big = herm.letter("A")?;
        let left = determining_of_r_diagonal(&m, &[a], 6)?;
        let right = determining_of_even(&herm, &[big], 6)?;
        for n in 1..=6 {
            rec.value("hermitization", format!("{name}: beta_{n}"), left.first_at(n)?, right.first_at(n)?);
        }
        for (&(p, q), v) in &left.second {
            rec.value("hermitization", format!("{name}: beta_{p},{q}"), v.clone(), right.second_at(p, q)?);
        }
        for p in 1..=3 {
            for q in 1..=3 {
                let t = hermitization_terms(&m, &[a], &herm, p, q)?;
                let sum = t.even_cumulant.clone() + t.correction.clone();
                rec.value("hermitization", format!("{name}: kappa_{},{} split", 2 * p, 2 * q), t.alternating, sum);
            }
        }
    }
    Ok(())
}
