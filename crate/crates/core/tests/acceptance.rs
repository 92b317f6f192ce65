//! The full acceptance suite, one line per criterion.
//!
//! Runs without the test harness so the report is always printed.

mod common;

use std::collections::BTreeSet;
use std::error::Error;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sofree::annular::*;
use sofree::cumulants::*;
use sofree::perm::{AnnulusShape, Permutation};
use sofree::series::{check_first_order_relation, check_second_order_relation};
use sofree::special::*;
use sofree::Rational;

type Outcome = Result<(), Box<dyn Error>>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what().into())
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn random_value(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into())
}

fn shapes(max_total: usize) -> Vec<(usize, usize)> {
    (2..=max_total).flat_map(|t| (1..t).map(move |p| (p, t - p))).collect()
}

fn counting() -> Outcome {
    for n in 1..=12 {
        let got = enumerate_nc(n)?.len() as u64;
        ensure(got == catalan(n as u64), || format!("|NC({n})| = {got}"))?;
    }
    ensure(enumerate_nc(4)?.len() == 14, || "|NC(4)| != 14".into())?;
    for ((m, n), want) in [((1, 1), 1), ((1, 2), 4), ((2, 2), 18), ((1, 3), 15)] {
        let got = enumerate_snc(AnnulusShape::new(m, n))?.len();
        ensure(got == want, || format!("|S_NC({m},{n})| = {got}, expected {want}"))?;
    }
    for (p, r) in shapes(5) {
        let snc = enumerate_snc(AnnulusShape::new(p, r))?.len();
        let pairings = enumerate_annular_pairings(AnnulusShape::new(2 * p, 2 * r))?.len();
        ensure(2 * snc == pairings, || format!("({p},{r}): {snc} vs {pairings} pairings"))?;
    }
    Ok(())
}

fn split(word: &[LetterId], lens: &[usize]) -> Vec<Word> {
    let mut at = 0;
    lens.iter()
        .map(|&l| {
            at += l;
            word[at - l..at].to_vec()
        })
        .collect()
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    (0..1u32 << (n - 1))
        .map(|mask| {
            let mut lens = vec![1usize];
            for b in 0..n - 1 {
                if mask >> b & 1 == 1 {
                    lens.push(1);
                } else {
                    *lens.last_mut().unwrap() += 1;
                }
            }
            lens
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    for (m, n) in shapes(8) {
        let want: BTreeSet<Perm> = all_perms(m + n).into_iter().filter(|p| is_snc(p, m, n)).collect();
        let got: BTreeSet<Perm> = enumerate_snc(AnnulusShape::new(m, n))?.iter().map(images).collect();
        ensure(got == want, || format!("S_NC({m},{n}) differs from brute force"))?;
    }

    let mut rng = StdRng::seed_from_u64(11);
    for (letters, order) in [(vec![LetterId(0)], 8), (vec![LetterId(0), LetterId(1)], 6)] {
        let mut kappa = CumulantTable { truncation: order, ..Default::default() };
        for w in words_up_to(&letters, order) {
            kappa.first.insert(w, random_value(&mut rng));
        }
        for (a, b) in pairs_up_to(&letters, order) {
            kappa.second.insert((a, b), random_value(&mut rng));
        }
        let moments = phi_from_kappa_table(&kappa, &letters, order)?;
        let back = kappa_from_phi(&moments, &letters, order)?;
        ensure(back == kappa, || format!("cumulant round trip fails at order {order}"))?;
        let again = phi_from_kappa_table(&back, &letters, order)?;
        ensure(again == moments, || format!("moment round trip fails at order {order}"))?;
    }

    let mut m = CumulantModel::new(32);
    m.add_haar_unitary("u", "u*")?;
    m.add_circular("c", "c*")?;
    m.add_semicircular("s")?;
    m.add_free_poisson("p", q(2))?;
    for text in ["u.s.u*.p.c.c*.s", "c.p.c*.s.s.p.p"] {
        let word = m.alphabet().parse_word(text)?;
        for n in 1..=word.len() {
            let w = &word[..n];
            for lens in compositions(n) {
                let groups = split(w, &lens);
                let ids: Vec<LetterId> = (0..groups.len() as u16).map(LetterId).collect();
                let oracle = element_cumulants(&m, groups.clone()).kappa(&ids)?;
                ensure(products_as_arguments_first(&groups, &m)? == oracle, || format!("{text} {lens:?}"))?;
            }
            for cut in 1..n {
                for ll in compositions(cut) {
                    for rl in compositions(n - cut) {
                        let left = split(&w[..cut], &ll);
                        let right = split(&w[cut..], &rl);
                        let elements: Vec<Word> = left.iter().chain(&right).cloned().collect();
                        let ids: Vec<LetterId> = (0..elements.len() as u16).map(LetterId).collect();
                        let (l_ids, r_ids) = ids.split_at(ll.len());
                        let oracle = element_cumulants(&m, elements).kappa2(l_ids, r_ids)?;
                        let direct = products_as_arguments_second(&left, &right, &m, None)?;
                        ensure(direct == oracle, || format!("{text} {ll:?} | {rl:?}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn bijections() -> Outcome {
    for n in 1..=6 {
        for sigma in enumerate_nc(n)?.iter() {
            ensure(undouble(&hat_double(sigma)?)? == *sigma, || format!("double of {sigma}"))?;
        }
    }
    let rev = Permutation::parse_sized("(1,14,15,12)(2,3)(4,5,18,13)(6,7)(8,9,10,11,16,17)", 18)?;
    let sigma = check_map(&rev, AnnulusShape::new(12, 6))?;
    ensure(sigma.to_string() == "(1)(2,9)(3)(4,5,8)(6,7)", || format!("worked instance gives {sigma}"))?;

    for (p, r) in shapes(6) {
        let shape = AnnulusShape::new(p, r);
        let doubled = shape.scaled(2);
        let targets = enumerate_snc(shape)?;
        let mut hit = BTreeSet::new();
        let mut separating_preserving = BTreeSet::new();
        for pi in enumerate_snc_even(doubled)?.iter() {
            let class = classify_parity(pi, doubled);
            if !separates_odd(pi, doubled) {
                continue;
            }
            match class {
                ParityClass::Reversing => {
                    let s = check_map(pi, doubled)?;
                    ensure(uncheck(&s, shape)? == *pi, || format!("uncheck(check({pi}))"))?;
                    hit.insert(s);
                }
                ParityClass::Preserving => {
                    separating_preserving.insert(pi.clone());
                }
                _ => {}
            }
        }
        ensure(hit.len() == targets.len(), || format!("check map on ({p},{r}) is not onto"))?;

        let mut union = BTreeSet::new();
        for x in enumerate_ps_nc_prime(shape)? {
            let y = hat_partitioned(&x, shape)?;
            ensure(unhat_partitioned(&y, doubled)? == x, || format!("partitioned double of {x}"))?;
            for pi in snc_grouped(&x, shape)? {
                ensure(union.insert(pi.clone()), || format!("{pi} lies in two grouped sets"))?;
            }
        }
        ensure(union == separating_preserving, || format!("grouped sets on ({p},{r}) do not cover"))?;
    }
    Ok(())
}

fn grouped_square(model: &CumulantModel, sq: &[LetterId], order: usize) -> Result<SquareCumulants, Box<dyn Error>> {
    let groups = |n: usize| -> Vec<Word> { vec![sq.to_vec(); n] };
    let mut out = SequenceTable::new(order);
    for n in 1..=order {
        out.first.insert(n, products_as_arguments_first(&groups(n), model)?);
    }
    for p in 1..order {
        for r in 1..=order - p {
            out.second.insert((p, r), products_as_arguments_second(&groups(p), &groups(r), model, None)?);
        }
    }
    Ok(out)
}

fn squares() -> Outcome {
    let mut m = CumulantModel::new(32);
    let (c, cs) = m.add_circular("c", "c*")?;
    let s = m.add_semicircular("s")?;
    let circ = square_cumulants(&determining_of_r_diagonal(&m, &[c], 8)?, 8)?;
    let semi = square_cumulants(&determining_of_even(&m, &[s], 8)?, 8)?;
    for p in 1..=4 {
        for r in 1..=4 {
            let v = circ.second_at(p, r)?;
            ensure(v.is_zero(), || format!("kappa_{p},{r}(cc*) = {v}"))?;
            let want = q((p * binom((p + r - 1) as u64, p as u64) as usize) as i64);
            let v = semi.second_at(p, r)?;
            ensure(v == want, || format!("kappa_{p},{r}(s^2) = {v}, expected {want}"))?;
        }
    }
    let restrict = |t: &SquareCumulants| {
        let mut out = SequenceTable::new(5);
        out.first = t.first.iter().filter(|(n, _)| **n <= 5).map(|(k, v)| (*k, v.clone())).collect();
        out.second = t.second.iter().filter(|((a, b), _)| a + b <= 5).map(|(k, v)| (*k, v.clone())).collect();
        out
    };
    ensure(restrict(&circ) == grouped_square(&m, &[c, cs], 5)?, || "cc* disagrees with grouped products".into())?;
    ensure(restrict(&semi) == grouped_square(&m, &[s, s], 5)?, || "s^2 disagrees with grouped products".into())?;
    Ok(())
}

fn hh_star() -> Outcome {
    let mut m = CumulantModel::new(32);
    let (c1, c1s) = m.add_circular("c1", "c1*")?;
    let (c2, c2s) = m.add_circular("c2", "c2*")?;
    let hh = [c1, c2, c2s, c1s];
    for (p, r, want) in [(1, 1, 3), (1, 2, 20), (2, 2, 150)] {
        let v = word_phi2(&m, &hh.repeat(p), &hh.repeat(r))?;
        ensure(v == q(want), || format!("phi2 at ({p},{r}) = {v}, expected {want}"))?;
    }
    let direct = square_cumulants_direct(&m, &[c1, c2], 4)?;
    let via_beta = square_cumulants(&determining_of_r_diagonal(&m, &[c1, c2], 4)?, 4)?;
    for n in 1..=4 {
        let want = q(catalan(n as u64) as i64);
        ensure(direct.first_at(n)? == want, || format!("kappa_{n}(hh*) = {}", direct.first_at(n).unwrap()))?;
        ensure(via_beta.first_at(n)? == want, || format!("kappa_{n}(hh*) from beta differs"))?;
    }
    Ok(())
}

fn mt1() -> Outcome {
    let mut m = CumulantModel::new(32);
    let (c, _) = m.add_circular("c", "c*")?;
    let (u, _) = m.add_haar_unitary("u", "u*")?;
    let (c1, _) = m.add_circular("c1", "c1*")?;
    let (c2, _) = m.add_circular("c2", "c2*")?;
    let p = m.add_free_poisson("p", q(1))?;
    let s = m.add_semicircular("s")?;
    for (r, b, name) in [(vec![c], vec![p], "circular, free Poisson"), (vec![u], vec![s], "Haar, semicircular"), (vec![c1, c2], vec![p], "c1 c2, free Poisson")] {
        let rep = check_mt1(&m, &r, &b, 6, 6)?;
        ensure(rep.passed() && rep.expansion_terms > 0, || format!("{name}: {rep:?}"))?;
    }
    Ok(())
}

fn haar_powers() -> Outcome {
    let mut m = CumulantModel::new(32);
    let (u, _) = m.add_haar_unitary("u", "u*")?;
    for p in 1..=3 {
        for a in 1..=3usize {
            for b in 1..=3usize {
                let v = haar_power_cumulants(&m, u, p, &vec![false; a], &vec![true; b])?;
                let want = q(if a == b { ((p - 1) * b) as i64 } else { 0 });
                ensure(v == want, || format!("p={p} ({a},{b}): {v}, expected {want}"))?;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..3 {
        let a = rng.gen_range(1..=3usize);
        let b = rng.gen_range(1..=4 - a);
        let left: Vec<bool> = (0..a).map(|_| rng.gen()).collect();
        let right: Vec<bool> = (0..b).map(|_| rng.gen()).collect();
        let k = |p| haar_power_cumulants(&m, u, p, &left, &right);
        let (k1, k2) = (k(1)?, k(2)?);
        for p in 3..=4 {
            let want = q(p as i64) * (&k2 - &k1) + (q(2) * &k1 - &k2);
            let v = k(p)?;
            ensure(v == want, || format!("{left:?} | {right:?} at p={p}: {v} vs {want}"))?;
        }
    }
    Ok(())
}

fn conjugation() -> Outcome {
    let mut m = CumulantModel::new(32);
    let (c, _) = m.add_circular("c", "c*")?;
    let s = m.add_semicircular("s")?;
    let rep = conjugation_by_circular(&m, c, &[s], 5)?;
    ensure(rep.mismatches().is_empty(), || format!("semicircular: {:?}", rep.mismatches()))?;

    let mut src = CumulantModel::new(32);
    let (c1, c1s) = src.add_circular("c1", "c1*")?;
    let (c2, c2s) = src.add_circular("c2", "c2*")?;
    let hh = [c1, c2, c2s, c1s];
    let x = LetterId(2);
    let mut table = MomentTable { truncation: 5, ..Default::default() };
    for n in 1..=5 {
        table.first.insert(vec![x; n], word_phi(&src, &hh.repeat(n))?);
    }
    for p in 1..5 {
        for r in 1..=5 - p {
            table.second.insert((vec![x; p], vec![x; r]), word_phi2(&src, &hh.repeat(p), &hh.repeat(r))?);
        }
    }
    let mut m2 = CumulantModel::new(32);
    let (c, _) = m2.add_circular("c", "c*")?;
    let ids = m2.add_family("h", &[("x", "x")], FamilyLaw::Moments(table))?;
    ensure(ids == [x], || "unexpected letter id".into())?;
    let rep = conjugation_by_circular(&m2, c, &[x], 5)?;
    ensure(rep.mismatches().is_empty(), || format!("hh* table: {:?}", rep.mismatches()))?;

    let mut m3 = CumulantModel::new(32);
    let (u, us) = m3.add_haar_unitary("u", "u*")?;
    let s = m3.add_semicircular("s")?;
    let v = products_as_arguments_second(&[vec![u, s, us]], &[vec![s]], &m3, None)?;
    let oracle = element_cumulants(&m3, vec![vec![u, s, us], vec![s]]).kappa2(&[LetterId(0)], &[LetterId(1)])?;
    ensure(v == q(1) && oracle == q(1), || format!("kappa_1,1(usu*, s) = {v}, oracle {oracle}"))?;
    Ok(())
}

fn h3() -> Outcome {
    let mut m = CumulantModel::new(32);
    let (c1, _) = m.add_circular("c1", "c1*")?;
    let (c2, _) = m.add_circular("c2", "c2*")?;
    let (c3, _) = m.add_circular("c3", "c3*")?;
    let el = StarElement::new(&m, &[c1, c2, c3])?;
    for n in 1..=4 {
        let v = el.kappa(&alternating_pattern(n))?;
        let pairings = enumerate_nc_pairings(2 * n)?.len() as i64;
        ensure(v == q(pairings) && pairings == catalan(n as u64) as i64, || format!("kappa_{}(h3, h3*, ..) = {v}", 2 * n))?;
    }
    for (p, r) in shapes(4) {
        let v = el.kappa2(&alternating_pattern(p), &alternating_pattern(r))?;
        let pairings = enumerate_annular_pairings(AnnulusShape::new(2 * p, 2 * r))?.len() as i64;
        ensure(q(2) * &v == q(pairings), || format!("kappa_{},{}(h3, ..) = {v}, pairings {pairings}", 2 * p, 2 * r))?;
    }
    Ok(())
}

fn series() -> Outcome {
    let cutoff = 8;
    let mut beta = SequenceTable::new(cutoff);
    beta.first.insert(1, q(1));
    let mut kappa = SequenceTable::new(cutoff);
    for n in 1..=cutoff {
        kappa.first.insert(n, q(1));
        beta.second.insert((n, n), q(n as i64));
        for p in 1..n {
            kappa.second.insert((p, n - p), q((p * binom((n - 1) as u64, p as u64) as usize) as i64));
        }
    }
    ensure(check_first_order_relation(&kappa, &beta, cutoff)?.is_zero(), || "semicircle, first order".into())?;
    let res = check_second_order_relation(&kappa, &beta, cutoff)?;
    ensure(res.is_zero(), || format!("semicircle residual {res}"))?;

    let mut m = CumulantModel::new(32);
    let (u, _) = m.add_haar_unitary("u", "u*")?;
    let (c, _) = m.add_circular("c", "c*")?;
    for a in [u, c] {
        let beta = determining_of_r_diagonal(&m, &[a], cutoff)?;
        let sq = square_cumulants(&beta, cutoff)?;
        ensure(check_first_order_relation(&sq, &beta, cutoff)?.is_zero(), || "first order residual".into())?;
        let res = check_second_order_relation(&sq, &beta, cutoff)?;
        ensure(res.is_zero(), || format!("{} residual {res}", m.alphabet().name(a)))?;
    }

    let (c1, c1s) = m.add_circular("c1", "c1*")?;
    let (c2, c2s) = m.add_circular("c2", "c2*")?;
    let hh = [c1, c2, c2s, c1s];
    let cutoff = 5;
    let mut moments = SequenceTable::new(cutoff);
    for n in 1..=cutoff {
        moments.first.insert(n, word_phi(&m, &hh.repeat(n))?);
    }
    for p in 1..cutoff {
        for r in 1..=cutoff - p {
            moments.second.insert((p, r), word_phi2(&m, &hh.repeat(p), &hh.repeat(r))?);
        }
    }
    let cumulants = square_cumulants_direct(&m, &[c1, c2], cutoff)?;
    ensure(check_first_order_relation(&moments, &cumulants, cutoff)?.is_zero(), || "hh* first order".into())?;
    let res = check_second_order_relation(&moments, &cumulants, cutoff)?;
    ensure(res.is_zero(), || format!("hh* residual {res}"))?;
    Ok(())
}

fn hermitization_identity() -> Outcome {
    let mut m = CumulantModel::new(32);
    let (c, _) = m.add_circular("c", "c*")?;
    let (u, _) = m.add_haar_unitary("u", "u*")?;
    for a in [c, u] {
        let name = m.alphabet().name(a).to_string();
        let herm = hermitization(&m, &[a], 6)?;
        let big = herm.letter("A")?;
        let left = determining_of_r_diagonal(&m, &[a], 6)?;
        let right = determining_of_even(&herm, &[big], 6)?;
        ensure(left == right, || format!("{name}: {left:?} vs {right:?}"))?;
        for p in 1..=3 {
            for r in 1..=3 {
                let t = hermitization_terms(&m, &[a], &herm, p, r)?;
                ensure(t.holds(), || format!("{name} ({p},{r}): {t:?}"))?;
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("counting", counting),
        ("oracle equivalence", oracle_equivalence),
        ("bijections", bijections),
        ("squares of R-diagonal and even elements", squares),
        ("moments of hh*", hh_star),
        ("products with an R-diagonal factor", mt1),
        ("powers of a Haar unitary", haar_powers),
        ("conjugation", conjugation),
        ("product of three circulars", h3),
        ("generating series", series),
        ("hermitization", hermitization_identity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(())) => println!("criterion {:>2} {name:<42} PASS ({elapsed:.2}s)", i + 1),
            Ok(Err(e)) => {
                failed += 1;
                println!("criterion {:>2} {name:<42} FAIL ({elapsed:.2}s): {e}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {:>2} {name:<42} FAIL ({elapsed:.2}s): panicked", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
