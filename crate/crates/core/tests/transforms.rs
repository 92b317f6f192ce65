mod common;

use std::collections::BTreeSet;

use common::*;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sofree::cumulants::*;
use sofree::Rational;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn random_value(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into())
}

fn random_table(letters: &[LetterId], order: usize, seed: u64) -> CumulantTable {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut t = CumulantTable { truncation: order, ..Default::default() };
    for w in words_up_to(letters, order) {
        t.first.insert(w, random_value(&mut rng));
    }
    for (a, b) in pairs_up_to(letters, order) {
        t.second.insert((a, b), random_value(&mut rng));
    }
    t
}

fn ids(n: u16) -> Vec<LetterId> {
    (0..n).map(LetterId).collect()
}

#[test]
fn round_trip_one_letter_order_eight() {
    let letters = ids(1);
    let kappa = random_table(&letters, 8, 1);
    let moments = phi_from_kappa_table(&kappa, &letters, 8).unwrap();
    assert_eq!(kappa_from_phi(&moments, &letters, 8).unwrap(), kappa);
}

#[test]
fn round_trip_two_letters_order_six() {
    let letters = ids(2);
    let kappa = random_table(&letters, 6, 2);
    let moments = phi_from_kappa_table(&kappa, &letters, 6).unwrap();
    assert_eq!(kappa_from_phi(&moments, &letters, 6).unwrap(), kappa);
}

#[test]
fn round_trip_from_moments() {
    // moments of free Poisson with rate 1 are Catalan numbers, cumulants all 1
    let a = ids(1);
    let mut moments = MomentTable { truncation: 8, ..Default::default() };
    for n in 1..=8 {
        moments.first.insert(vec![a[0]; n], q(catalan(n as u64) as i64));
    }
    let t = kappa_from_phi(&moments, &a, 8).unwrap();
    assert!((1..=8).all(|n| t.first[&vec![a[0]; n]] == q(1)));
    // even Catalan moments give the semicircle
    let mut moments = MomentTable { truncation: 8, ..Default::default() };
    for n in (2..=8).step_by(2) {
        moments.first.insert(vec![a[0]; n], q(catalan(n as u64 / 2) as i64));
    }
    let mut semi = CumulantModel::new(8);
    semi.add_semicircular("s").unwrap();
    for (l, r) in pairs_up_to(&a, 8) {
        let v = word_phi2(&semi, &l, &r).unwrap();
        moments.second.insert((l, r), v);
    }
    let t = kappa_from_phi(&moments, &a, 8).unwrap();
    assert!((1..=8).all(|n| t.first[&vec![a[0]; n]] == q((n == 2) as i64)));
    assert!(t.second.values().all(Zero::is_zero));
}

#[test]
fn two_product_expansion_from_generic_table() {
    let [a1, a2, a3] = [LetterId(0), LetterId(1), LetterId(2)];
    let t = random_table(&ids(3), 3, 3);
    let k = |w: &[LetterId]| t.kappa(w).unwrap();
    let k2 = |l: &[LetterId], r: &[LetterId]| t.kappa2(l, r).unwrap();
    let want = k(&[a1, a3, a2]) + k2(&[a1, a2], &[a3]) + k2(&[a1], &[a3]) * k(&[a2]) + k(&[a1]) * k2(&[a2], &[a3]);
    assert_eq!(products_as_arguments_second(&[vec![a1, a2]], &[vec![a3]], &t, None).unwrap(), want);
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

fn split(word: &[LetterId], lens: &[usize]) -> Vec<Word> {
    let mut out = Vec::new();
    let mut at = 0;
    for &l in lens {
        out.push(word[at..at + l].to_vec());
        at += l;
    }
    out
}

fn mixed_model() -> CumulantModel {
    let mut m = CumulantModel::new(32);
    m.add_haar_unitary("u", "u*").unwrap();
    m.add_circular("c", "c*").unwrap();
    m.add_semicircular("s").unwrap();
    m.add_free_poisson("p", q(2)).unwrap();
    m
}

#[test]
fn products_as_arguments_match_element_cumulants() {
    let m = mixed_model();
    let words = ["u.s.u*.p.c.c*.s", "c.p.c*.s.s.p.p", "u.u.c.u*.u*.s.c*"];
    for text in words {
        let word = m.alphabet().parse_word(text).unwrap();
        for n in 1..=word.len() {
            let w = &word[..n];
            for lens in compositions(n) {
                let groups = split(w, &lens);
                let ek = element_cumulants(&m, groups.clone());
                let r = groups.len() as u16;
                assert_eq!(
                    products_as_arguments_first(&groups, &m).unwrap(),
                    ek.kappa(&ids(r)).unwrap(),
                    "{text} {lens:?}"
                );
            }
            for cut in 1..n {
                for ll in compositions(cut) {
                    for rl in compositions(n - cut) {
                        let left = split(&w[..cut], &ll);
                        let right = split(&w[cut..], &rl);
                        let mut elements = left.clone();
                        elements.extend(right.iter().cloned());
                        let ek = element_cumulants(&m, elements);
                        let all = ids((ll.len() + rl.len()) as u16);
                        let (l_ids, r_ids) = all.split_at(ll.len());
                        assert_eq!(
                            products_as_arguments_second(&left, &right, &m, None).unwrap(),
                            ek.kappa2(l_ids, r_ids).unwrap(),
                            "{text} {ll:?} | {rl:?}"
                        );
                    }
                }
            }
        }
    }
}

// pi joined with the grouping is one block, checked with plain union-find
fn joins_to_one(pi: &[usize], lens: &[usize]) -> bool {
    let n = pi.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    let union = |a: usize, b: usize, p: &mut Vec<usize>| {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    };
    for i in 0..n {
        union(i, pi[i], &mut parent);
    }
    let mut at = 0;
    for &l in lens {
        for i in at + 1..at + l {
            union(at, i, &mut parent);
        }
        at += l;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|i| find(&mut parent, i) == root)
}

#[test]
fn selection_forms_agree() {
    for n in 1..=8 {
        let nc: Vec<Perm> = all_perms(n).into_iter().filter(|p| is_nc(p)).collect();
        for lens in compositions(n) {
            let want: BTreeSet<Perm> = nc.iter().filter(|p| joins_to_one(p, &lens)).cloned().collect();
            for form in [SelectionForm::Join, SelectionForm::SeparatesLast, SelectionForm::SeparatesFirst] {
                let got: BTreeSet<Perm> = first_order_terms(&lens, form).unwrap().iter().map(images).collect();
                assert_eq!(got, want, "{lens:?} {form:?}");
            }
        }
    }
}

#[test]
fn moments_are_invariant_under_rotation() {
    let m = mixed_model();
    let a = m.alphabet();
    let letters: Vec<LetterId> = ["c", "c*", "p"].iter().map(|s| a.id(s).unwrap()).collect();
    let tracial = phi_from_kappa_table(&m, &[a.id("u").unwrap(), a.id("u*").unwrap()], 7).unwrap();
    let inverted = Inverter::new(tracial);
    let unitary = [a.id("u").unwrap(), a.id("u*").unwrap()];
    let check = |source: &dyn CumulantSource, w: &[LetterId]| {
        let v = word_phi(source, w).unwrap();
        for r in 1..w.len() {
            let mut rot = w.to_vec();
            rot.rotate_left(r);
            assert_eq!(word_phi(source, &rot).unwrap(), v, "{w:?} rotated by {r}");
        }
    };
    for w in words_up_to(&letters, 7) {
        check(&m, &w);
    }
    for w in words_up_to(&unitary, 7) {
        check(&inverted, &w);
    }
}

#[test]
fn worked_values() {
    let m = mixed_model();
    let a = m.alphabet();
    let (u, us, c, cs, s) = (a.id("u").unwrap(), a.id("u*").unwrap(), a.id("c").unwrap(), a.id("c*").unwrap(), a.id("s").unwrap());
    for n in 1..=5 {
        let w: Word = [c, cs].repeat(n);
        assert_eq!(word_phi(&m, &w).unwrap(), q(catalan(n as u64) as i64));
    }
    for k in 1..=4 {
        assert_eq!(word_phi2(&m, &vec![u; k], &vec![us; k]).unwrap(), q(k as i64));
        assert!(word_phi2(&m, &vec![u; k], &vec![us; k + 1]).unwrap().is_zero());
    }
    assert_eq!(word_phi2(&m, &[s], &[s]).unwrap(), q(1));
    assert!(word_phi(&m, &[u, s]).unwrap().is_zero());
    assert!(m.kappa2(&[s, s], &[s, s]).unwrap().is_zero());
    // conjugating by a Haar unitary: kappa_{1,1}(u b u*, a) = kappa_2(u, u*) phi_2(b, a)
    let mut m2 = CumulantModel::new(6);
    let (u, us) = m2.add_haar_unitary("u", "u*").unwrap();
    let ab = [LetterId(2), LetterId(3)];
    let law = FamilyLaw::Cumulants(random_table(&ab, 6, 4));
    let ids = m2.add_family("ab", &[("a", "a"), ("b", "b")], law).unwrap();
    assert_eq!(ids, ab);
    let (a_, b_) = (ab[0], ab[1]);
    let lhs = products_as_arguments_second(&[vec![u, b_, us]], &[vec![a_]], &m2, None).unwrap();
    assert_eq!(lhs, m2.kappa(&[u, us]).unwrap() * word_phi2(&m2, &[b_], &[a_]).unwrap());
    // ubu*a with pi = (1,3)(2)(4) and U joining (2) and (4)
    let x = sofree::perm::PartitionedPermutation::parse_sized("[{1,3|2,4} ; (1,3)(2)(4)]", 4).unwrap();
    let w = [u, b_, us, a_];
    assert_eq!(free_families_kappa(&x, &w, &m2).unwrap(), m2.kappa(&[u, us]).unwrap() * m2.kappa2(&[b_], &[a_]).unwrap());
    let mixed = sofree::perm::PartitionedPermutation::parse_sized("[{1,2|3|4} ; (1,2)(3)(4)]", 4).unwrap();
    assert!(free_families_kappa(&mixed, &w, &m2).unwrap().is_zero());
}
