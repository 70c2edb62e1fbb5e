//! Property tests for the group engine, growth series and complexes. Word
//! equality is checked against the integer Tits representation, which is
//! faithful, and reducedness against the cancellation criterion for
//! right-angled groups.

use std::collections::BTreeSet;

use coxl2::complexes::{barycentric_subdivision, join, subdivided_boundary, Complex};
use coxl2::invariants::weighted_euler_uniform;
use coxl2::racg::{growth_series, Ball, CoxeterSystem, Element, WeightAssignment};
use coxl2::rational::q_frac;
use coxl2::spectral::select_plateau;
use proptest::prelude::*;

type Matrix = Vec<Vec<i128>>;

fn tits(sys: &CoxeterSystem, word: &[usize]) -> Matrix {
    let n = sys.rank();
    let b = |s: usize, t: usize| -> i128 {
        if s == t {
            1
        } else if sys.commutes(s as u8, t as u8) {
            0
        } else {
            -1
        }
    };
    let mut m: Matrix = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect();
    for &s in word {
        // m ← m·σ_s, σ_s(e_t) = e_t − 2 B(s,t) e_s
        let mut next = m.clone();
        for row in next.iter_mut().zip(&m) {
            let (out, old) = row;
            for t in 0..n {
                out[t] = old[t] - 2 * b(s, t) * old[s];
            }
        }
        m = next;
    }
    m
}

/// A word is reduced iff no letter reappears with only commuting letters in
/// between.
fn is_reduced(sys: &CoxeterSystem, w: &[u8]) -> bool {
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[j] == w[i] {
                if w[i + 1..j].iter().all(|&x| sys.commutes(x, w[i])) {
                    return false;
                }
                break;
            }
        }
    }
    true
}

fn systems() -> Vec<CoxeterSystem> {
    let pentagon = coxl2::complexes::cycle(5).unwrap();
    [
        pentagon,
        subdivided_boundary(2).unwrap(),
        subdivided_boundary(3).unwrap(),
        join(
            &coxl2::complexes::boundary_simplex(1).unwrap(),
            &coxl2::complexes::cycle(4).unwrap(),
        ),
    ]
    .iter()
    .map(|l| CoxeterSystem::from_complex(l).unwrap())
    .collect()
}

fn word_strategy() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..4usize, prop::collection::vec(0..14usize, 0..14))
}

fn clip(sys: &CoxeterSystem, w: &[usize]) -> Vec<usize> {
    w.iter().map(|&s| s % sys.rank()).collect()
}

fn seq(x: &Element) -> Vec<usize> {
    x.word().iter().map(|&s| s as usize).collect()
}

fn random_complex(vertices: usize, facets: &[Vec<usize>]) -> Complex {
    let facets: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| {
            let s: BTreeSet<usize> = f.iter().map(|&v| v % vertices).collect();
            s.into_iter().collect()
        })
        .collect();
    let used: BTreeSet<usize> = facets.iter().flatten().copied().collect();
    let relabel = |v: usize| used.iter().filter(|&&u| u < v).count();
    let facets = facets
        .iter()
        .map(|f| f.iter().map(|&v| relabel(v)).collect())
        .collect();
    let names = (0..used.len()).map(|i| format!("v{i}")).collect();
    Complex::new(names, facets, None).unwrap()
}

fn complex_strategy() -> impl Strategy<Value = Complex> {
    (
        2..6usize,
        prop::collection::vec(prop::collection::vec(0..6usize, 1..4), 1..7),
    )
        .prop_map(|(n, f)| random_complex(n, &f))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, rng_algorithm: prop::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_reduced_and_represents_the_word((k, w) in word_strategy()) {
        let sys = &systems()[k];
        let w = clip(sys, &w);
        let x = sys.normal_form(&w).unwrap();
        prop_assert!(is_reduced(sys, x.word()));
        prop_assert_eq!(tits(sys, &seq(&x)), tits(sys, &w));
        prop_assert_eq!(sys.normal_form(&seq(&x)).unwrap(), x);
    }

    #[test]
    fn equal_elements_have_equal_normal_forms((k, a) in word_strategy(), b in prop::collection::vec(0..14usize, 0..14)) {
        let sys = &systems()[k];
        let (a, b) = (clip(sys, &a), clip(sys, &b));
        let same = tits(sys, &a) == tits(sys, &b);
        prop_assert_eq!(same, sys.normal_form(&a).unwrap() == sys.normal_form(&b).unwrap());
    }

    #[test]
    fn commuting_rewrites_do_not_change_the_element((k, w) in word_strategy(), which in 0..20usize) {
        let sys = &systems()[k];
        let x = sys.normal_form(&clip(sys, &w)).unwrap();
        if let Some(r) = sys.commuting_rewrite(&x, which) {
            let r: Vec<usize> = r.into_iter().map(usize::from).collect();
            prop_assert_eq!(sys.normal_form(&r).unwrap(), x);
        }
    }

    #[test]
    fn length_changes_by_one((k, w) in word_strategy(), s in 0..14usize) {
        let sys = &systems()[k];
        let x = sys.normal_form(&clip(sys, &w)).unwrap();
        let s = (s % sys.rank()) as u8;
        let y = sys.mul_gen(&x, s);
        prop_assert_eq!(sys.length(&x).abs_diff(sys.length(&y)), 1);
        prop_assert_eq!(sys.mul_gen(&y, s), x);
    }

    #[test]
    fn weight_is_multiplicative_on_reduced_products((k, a) in word_strategy(), b in prop::collection::vec(0..14usize, 0..10)) {
        let sys = &systems()[k];
        let x = sys.normal_form(&clip(sys, &a)).unwrap();
        let y = sys.normal_form(&clip(sys, &b)).unwrap();
        let q = WeightAssignment::new((0..sys.rank()).map(|i| q_frac(i as i64 + 1, 3)).collect()).unwrap();
        let xy = sys.multiply(&x, &y);
        if sys.length(&xy) == sys.length(&x) + sys.length(&y) {
            prop_assert_eq!(q.weight(&xy), q.weight(&x) * q.weight(&y));
        }
    }

    #[test]
    fn coset_representative_is_constant_on_cosets((k, w) in word_strategy(), pick in 0..64usize, tail in prop::collection::vec(0..64usize, 0..5)) {
        let sys = &systems()[k];
        let x = sys.normal_form(&clip(sys, &w)).unwrap();
        let sets = sys.spherical_sets();
        let t = sets[pick % sets.len()];
        let members: Vec<u8> = coxl2::racg::members(t).collect();
        let mut y = x.clone();
        if !members.is_empty() {
            for i in tail {
                y = sys.mul_gen(&y, members[i % members.len()]);
            }
        }
        let rx = sys.shortest_coset_rep(&x, t).unwrap();
        prop_assert_eq!(sys.shortest_coset_rep(&y, t).unwrap(), rx.clone());
        prop_assert!(sys.length(&rx) <= sys.length(&x));
        prop_assert_eq!(sys.length(&x), sys.length(&rx) + (sys.descents(&x, coxl2::racg::Side::Right) & t).count_ones() as usize);
    }

    #[test]
    fn subdivisions_are_flag(l in complex_strategy()) {
        prop_assert!(barycentric_subdivision(&l).is_flag());
    }

    #[test]
    fn growth_series_matches_shells(l in complex_strategy()) {
        let l = if l.is_flag() { l } else { barycentric_subdivision(&l) };
        let sys = CoxeterSystem::from_complex(&l).unwrap();
        let w = growth_series(&sys);
        prop_assert!(weighted_euler_uniform(&l).mul(&w).unwrap().is_one());
        let shells = Ball::new(&sys, 4).unwrap().shell_sizes();
        let taylor: Vec<usize> = w.taylor(4).unwrap().iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        prop_assert_eq!(shells, taylor);
    }

    #[test]
    fn euler_characteristic_is_multiplicative_under_join(a in complex_strategy(), b in complex_strategy()) {
        let lhs = weighted_euler_uniform(&join(&a, &b));
        prop_assert_eq!(lhs, weighted_euler_uniform(&a).mul(&weighted_euler_uniform(&b)).unwrap());
    }

    #[test]
    fn plateau_has_minimal_spread(values in prop::collection::vec(0.0..1.0f64, 3..14)) {
        let mut v = values;
        v.sort_by(f64::total_cmp);
        let eps: Vec<f64> = (0..v.len()).map(|j| j as f64).collect();
        let p = select_plateau(&eps, &v);
        for j in 1..v.len() - 1 {
            prop_assert!(p.flatness <= v[j + 1] - v[j - 1] + 1e-12);
        }
        prop_assert!(p.index >= 1 && p.index < v.len() - 1);
    }
}
