mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use ramop_core::atom::{sort_sign, standard_labels};
use ramop_core::bidegree::koszul;
use ramop_core::cooperad::theta;
use ramop_core::graph::{
    arnold_series, differential, enumerate_graph_monomials, AlgebraElement, GraphDifferential, GraphMonomial,
    GraphPresentation, GraphWorkspace, Letter, Mode, A, ARNOLD, B,
};
use ramop_core::linear::rat;
use ramop_core::{Atom, BiDegree, Limits};

/// Sign of a word: orientation flips of antisymmetric letters times the sign of the
/// permutation sorting the odd letters by vertex pair.
fn word_oracle(word: &[Letter]) -> Option<i64> {
    let mut sign = 1;
    let mut pairs = Vec::new();
    let mut odd = Vec::new();
    for l in word {
        if l.i == l.j {
            return None;
        }
        if l.i > l.j {
            sign *= l.color.symmetry.sign();
        }
        let p = (l.i.min(l.j), l.i.max(l.j));
        pairs.push(p);
        if l.color.is_odd() {
            odd.push(p);
        }
    }
    sort_sign(&pairs)?;
    Some(sign * sort_sign(&odd)?)
}

fn element(vs: &BTreeSet<Atom>, m: &GraphMonomial) -> AlgebraElement {
    AlgebraElement::from_monomial(vs.clone(), m.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn word_sign_matches_oracle(seed in any::<u64>(), n in 2usize..=5, len in 0usize..=6) {
        let mut r = rng(seed);
        let word = random_word(&mut r, &standard_labels(n), &[A, B, ARNOLD], len);
        prop_assert_eq!(GraphMonomial::from_word(&word).map(|(s, _)| s), word_oracle(&word));
    }

    #[test]
    fn product_is_associative(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let labels = standard_labels(n);
        let vs: BTreeSet<Atom> = labels.iter().copied().collect();
        let mut ms = Vec::new();
        for _ in 0..3 {
            let len = below(&mut r, 3);
            match random_monomial(&mut r, &labels, &[A, B], len) {
                Some(m) => ms.push(element(&vs, &m)),
                None => return Ok(()),
            }
        }
        let left = ms[0].mul(&ms[1]).unwrap().mul(&ms[2]).unwrap();
        let right = ms[0].mul(&ms[1].mul(&ms[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_is_graded_commutative(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let labels = standard_labels(n);
        let vs: BTreeSet<Atom> = labels.iter().copied().collect();
        let (l1, l2) = (below(&mut r, 4), below(&mut r, 4));
        let (Some(x), Some(y)) = (random_monomial(&mut r, &labels, &[A, B], l1), random_monomial(&mut r, &labels, &[A, B], l2)) else {
            return Ok(());
        };
        let xy = element(&vs, &x).mul(&element(&vs, &y)).unwrap();
        let mut yx = element(&vs, &y).mul(&element(&vs, &x)).unwrap();
        for c in yx.terms.values_mut() {
            *c *= rat(koszul(x.bidegree(), y.bidegree()));
        }
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn differentials_are_graded_derivations(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let labels = standard_labels(n);
        let vs: BTreeSet<Atom> = labels.iter().copied().collect();
        let (l1, l2) = (below(&mut r, 3), below(&mut r, 3));
        let (Some(x), Some(y)) = (random_monomial(&mut r, &labels, &[A, B], l1), random_monomial(&mut r, &labels, &[A, B], l2)) else {
            return Ok(());
        };
        let (x, y) = (element(&vs, &x), element(&vs, &y));
        let hx = x.terms.keys().next().unwrap().bidegree();
        for d in [GraphDifferential::D, GraphDifferential::DPrime] {
            let lhs = differential(&x.mul(&y).unwrap(), d);
            let mut rhs = differential(&x, d).mul(&y).unwrap();
            rhs.add_scaled(&rat(koszul(hx, BiDegree::new(1, 0))), &x.mul(&differential(&y, d)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn theta_is_equivariant_under_relabeling_of_the_right_block(seed in any::<u64>()) {
        let mut r = rng(seed);
        let labels = standard_labels(5);
        let vs: BTreeSet<Atom> = labels.iter().copied().collect();
        let len = below(&mut r, 5);
        let Some(m) = random_monomial(&mut r, &labels, &[A, B], len) else { return Ok(()) };
        let left: BTreeSet<Atom> = [Atom(1), Atom(2)].into();
        let right: BTreeSet<Atom> = [Atom(3), Atom(4), Atom(5)].into();
        let mut perm = vec![Atom(3), Atom(4), Atom(5)];
        shuffle(&mut r, &mut perm);
        let sigma = |a: Atom| if a.0 >= 3 { perm[a.0 as usize - 3] } else { a };
        let Some((s, sm)) = m.map_atoms(sigma) else { return Ok(()) };
        let mut lhs = theta(&left, &right, &element(&vs, &sm)).unwrap();
        for c in lhs.values_mut() {
            *c *= rat(s);
        }
        let mut rhs = ramop_core::cooperad::Tensor2::new();
        for ((u, v), c) in theta(&left, &right, &element(&vs, &m)).unwrap() {
            let (t, v2) = v.map_atoms(sigma).unwrap();
            *rhs.entry((u, v2)).or_default() += c * rat(t);
        }
        rhs.retain(|_, c| *c != rat(0));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn repeated_pairs_vanish() {
    let w = [ramop_core::graph::letter(A, Atom(1), Atom(2)), ramop_core::graph::letter(B, Atom(2), Atom(1))];
    assert!(GraphMonomial::from_word(&w).is_none());
}

#[test]
fn forest_and_full_dims_agree_up_to_four() {
    let mut forest = GraphWorkspace::r(Mode::Forest, Limits::default());
    let mut full = GraphWorkspace::r(Mode::Full, Limits::default());
    for n in 1..=4 {
        assert_eq!(forest.dims(n).unwrap(), full.dims(n).unwrap(), "n={n}");
    }
}

#[test]
fn arnold_hilbert_series_up_to_five() {
    let mut ws = GraphWorkspace::new(GraphPresentation::arnold(), Mode::Forest, Limits::default());
    for n in 1..=5 {
        let d = ws.dims(n).unwrap();
        let series: Vec<u64> = (0..n as u32).map(|k| d.get(BiDegree::new(k, k)) as u64).collect();
        assert_eq!(series, arnold_series(n), "n={n}");
        let factorial: u64 = (1..=n as u64).product();
        assert_eq!(d.total() as u64, factorial);
    }
}

#[test]
fn forest_monomials_on_four_vertices() {
    // forests on 4 labelled vertices: 1 + 6 + 15 + 16 edge sets, two colors per edge
    let ms = enumerate_graph_monomials(&[A, B], &standard_labels(4), Mode::Forest, None);
    assert_eq!(ms.len(), 1 + 6 * 2 + 15 * 4 + 16 * 8);
    assert!(ms.iter().all(|m| !m.has_cycle()));
}
