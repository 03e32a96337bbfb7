mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use proptest::prelude::*;
use ramop_core::atom::{sort_sign, standard_labels};
use ramop_core::bidegree::koszul;
use ramop_core::linear::{Eliminator, SparseVec};
use ramop_core::operad::{enumerate_tree_monomials, Generator, OperadElement, Tree};
use ramop_core::ram::{self, coproduct, Which};
use ramop_core::{Atom, DimTable, Limits, Rational};

/// Canonical form and sign computed globally: symmetry signs of the swapped vertices
/// times the sign of the permutation the odd generators undergo in preorder.
fn canonical_oracle(t: &Tree) -> (i64, Tree) {
    enum Ix {
        Leaf(Atom),
        Node(usize, Generator, Box<Ix>, Box<Ix>),
    }
    fn label(t: &Tree, next: &mut usize) -> Ix {
        match t {
            Tree::Leaf(a) => Ix::Leaf(*a),
            Tree::Node(n) => {
                let id = *next;
                *next += 1;
                let l = label(&n.left, next);
                let r = label(&n.right, next);
                Ix::Node(id, n.gen, Box::new(l), Box::new(r))
            }
        }
    }
    fn min(t: &Ix) -> Atom {
        match t {
            Ix::Leaf(a) => *a,
            Ix::Node(_, _, l, r) => min(l).min(min(r)),
        }
    }
    fn canon(t: Ix, sym: &mut i64) -> Ix {
        match t {
            Ix::Leaf(a) => Ix::Leaf(a),
            Ix::Node(id, g, l, r) => {
                let (l, r) = (canon(*l, sym), canon(*r, sym));
                if min(&l) < min(&r) {
                    Ix::Node(id, g, Box::new(l), Box::new(r))
                } else {
                    *sym *= g.symmetry.sign();
                    Ix::Node(id, g, Box::new(r), Box::new(l))
                }
            }
        }
    }
    fn odd_ids(t: &Ix, out: &mut Vec<usize>) {
        if let Ix::Node(id, g, l, r) = t {
            if g.bidegree.is_odd() {
                out.push(*id);
            }
            odd_ids(l, out);
            odd_ids(r, out);
        }
    }
    fn tree(t: &Ix) -> Tree {
        match t {
            Ix::Leaf(a) => Tree::Leaf(*a),
            Ix::Node(_, g, l, r) => Tree::node(*g, tree(l), tree(r)),
        }
    }
    let mut sym = 1;
    let c = canon(label(t, &mut 0), &mut sym);
    let mut ids = Vec::new();
    odd_ids(&c, &mut ids);
    (sym * sort_sign(&ids).unwrap(), tree(&c))
}

fn relabel_tree(t: &Tree, sigma: &BTreeMap<Atom, Atom>) -> (i64, Tree) {
    t.map_atoms(|a| *sigma.get(&a).unwrap_or(&a)).canonicalize().unwrap()
}

fn random_bijection(rng: &mut rand_chacha::ChaCha8Rng, from: &[Atom], pool: &[Atom]) -> BTreeMap<Atom, Atom> {
    let mut img = pool.to_vec();
    shuffle(rng, &mut img);
    from.iter().copied().zip(img).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonical_sign_matches_global_oracle(seed in any::<u64>(), n in 1usize..=7) {
        let mut r = rng(seed);
        let t = random_tree(&mut r, &standard_labels(n), &RAM_GENERATORS);
        let (s, c) = t.canonicalize().unwrap();
        prop_assert!(c.is_canonical());
        prop_assert_eq!((s, c), canonical_oracle(&t));
    }

    #[test]
    fn composition_is_equivariant(seed in any::<u64>(), a in 1usize..=3, b in 1usize..=3) {
        let mut r = rng(seed);
        let slot = Atom(100);
        let mut outer_labels: Vec<Atom> = (1..=a as u32).map(Atom).collect();
        outer_labels.push(slot);
        let inner_labels: Vec<Atom> = (10..10 + b as u32).map(Atom).collect();
        let (_, x) = random_tree(&mut r, &outer_labels, &RAM_GENERATORS).canonicalize().unwrap();
        let (_, y) = random_tree(&mut r, &inner_labels, &RAM_GENERATORS).canonicalize().unwrap();
        let (e, xy) = x.compose(slot, &y).unwrap();

        let all: Vec<Atom> = outer_labels.iter().chain(inner_labels.iter()).copied().collect();
        let pool: Vec<Atom> = (50..50 + all.len() as u32).map(Atom).collect();
        let sigma = random_bijection(&mut r, &all, &pool);
        let (c, lhs) = relabel_tree(&xy, &sigma);
        let (cx, x2) = relabel_tree(&x, &sigma);
        let (cy, y2) = relabel_tree(&y, &sigma);
        let (e2, rhs) = x2.compose(sigma[&slot], &y2).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(e * c, cx * cy * e2);
    }

    #[test]
    fn sequential_composition_is_associative(seed in any::<u64>(), a in 0usize..=2, b in 0usize..=2, c in 1usize..=2) {
        let mut r = rng(seed);
        let (s, t) = (Atom(100), Atom(101));
        let xl: Vec<Atom> = (1..=a as u32).map(Atom).chain([s]).collect();
        let yl: Vec<Atom> = (10..10 + b as u32).map(Atom).chain([t]).collect();
        let zl: Vec<Atom> = (20..20 + c as u32).map(Atom).collect();
        let (_, x) = random_tree(&mut r, &xl, &RAM_GENERATORS).canonicalize().unwrap();
        let (_, y) = random_tree(&mut r, &yl, &RAM_GENERATORS).canonicalize().unwrap();
        let (_, z) = random_tree(&mut r, &zl, &RAM_GENERATORS).canonicalize().unwrap();
        let (e1, xy) = x.compose(s, &y).unwrap();
        let (e2, left) = xy.compose(t, &z).unwrap();
        let (f1, yz) = y.compose(t, &z).unwrap();
        let (f2, right) = x.compose(s, &yz).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(e1 * e2, f1 * f2);
    }

    #[test]
    fn parallel_composition_commutes_with_koszul_sign(seed in any::<u64>(), a in 0usize..=2, b in 1usize..=2, c in 1usize..=2) {
        let mut r = rng(seed);
        let (s, t) = (Atom(100), Atom(101));
        let xl: Vec<Atom> = (1..=a as u32).map(Atom).chain([s, t]).collect();
        let yl: Vec<Atom> = (10..10 + b as u32).map(Atom).collect();
        let zl: Vec<Atom> = (20..20 + c as u32).map(Atom).collect();
        let (_, x) = random_tree(&mut r, &xl, &RAM_GENERATORS).canonicalize().unwrap();
        let (_, y) = random_tree(&mut r, &yl, &RAM_GENERATORS).canonicalize().unwrap();
        let (_, z) = random_tree(&mut r, &zl, &RAM_GENERATORS).canonicalize().unwrap();
        let (e1, xy) = x.compose(s, &y).unwrap();
        let (e2, left) = xy.compose(t, &z).unwrap();
        let (f1, xz) = x.compose(t, &z).unwrap();
        let (f2, right) = xz.compose(s, &y).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(e1 * e2, f1 * f2 * koszul(y.bidegree(), z.bidegree()));
    }

    #[test]
    fn coproduct_is_equivariant(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let labels = standard_labels(n);
        let t = random_tree(&mut r, &labels, &RAM_GENERATORS);
        let x = OperadElement::from_tree(&t).unwrap();
        let pool: Vec<Atom> = (30..30 + n as u32).map(Atom).collect();
        let sigma = random_bijection(&mut r, &labels, &pool);
        let lhs = coproduct(&x.relabel(&sigma).unwrap()).unwrap();
        let mut rhs: BTreeMap<(Tree, Tree), Rational> = BTreeMap::new();
        for ((a, b), c) in coproduct(&x).unwrap() {
            let (sa, a2) = relabel_tree(&a, &sigma);
            let (sb, b2) = relabel_tree(&b, &sigma);
            *rhs.entry((a2, b2)).or_default() += c * Rational::from_integer((sa * sb).into());
        }
        rhs.retain(|_, c| *c != Rational::from_integer(0.into()));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn canonicalize_rejects_repeated_labels() {
    let t = Tree::node(ram::presentation(Which::Ram).generators[0], Tree::leaf(1), Tree::leaf(1));
    assert!(t.canonicalize().is_err());
}

fn rank_of(rows: &[SparseVec], ncols: usize) -> usize {
    let mut e = Eliminator::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[test]
fn recursive_ideal_span_equals_direct_span() {
    for which in [Which::Ram, Which::Poisson, Which::LieGriess] {
        let p = ram::presentation(which);
        let mut ws = ram::workspace(which, Limits::default());
        for n in 3..=4 {
            let labels = standard_labels(n);
            let comp = ws.component(n).unwrap();
            let rec: Vec<SparseVec> =
                ws.ideal_span(&labels).unwrap().iter().map(|x| comp.ambient_vector(x).unwrap()).collect();
            let dir: Vec<SparseVec> = ramop_core::component::ideal_span_direct(&p, &labels)
                .unwrap()
                .iter()
                .map(|x| comp.ambient_vector(x).unwrap())
                .collect();
            let m = comp.monomials.len();
            let both: Vec<SparseVec> = rec.iter().chain(dir.iter()).cloned().collect();
            let (a, b, c) = (rank_of(&rec, m), rank_of(&dir, m), rank_of(&both, m));
            assert_eq!((a, b), (c, c), "{which} n={n}");
            assert_eq!(a, comp.ideal_rank(), "{which} n={n}");
        }
    }
}

#[test]
fn ideal_span_on_other_labels_is_transported() {
    let mut ws = ram::workspace(Which::Ram, Limits::default());
    let odd = atoms(&[2, 5, 9]);
    let back: BTreeMap<Atom, Atom> = odd.iter().copied().zip(standard_labels(3)).collect();
    let comp = ws.component(3).unwrap();
    for x in ws.ideal_span(&odd).unwrap() {
        assert_eq!(x.labels, odd.iter().copied().collect::<BTreeSet<_>>());
        assert!(comp.normal_form(&x.relabel(&back).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn ram_three_relations_have_rank_ten() {
    let mut ws = ram::workspace(Which::Ram, Limits::default());
    let comp = ws.component(3).unwrap();
    assert_eq!(comp.monomials.len(), 27);
    assert_eq!(comp.ideal_rank(), 10);
    assert_eq!(
        comp.dims,
        DimTable::from_pairs([((0, 0), 1), ((0, 1), 3), ((0, 2), 2), ((1, 1), 3), ((1, 2), 5), ((2, 2), 3)])
    );
    assert_eq!(comp.dims.total(), 27 - 10);
}

#[test]
fn ideal_is_stable_under_relabeling() {
    let mut ws = ram::workspace(Which::Ram, Limits::default());
    let comp = ws.component(4).unwrap();
    let labels = standard_labels(4);
    let mut r = rng(7);
    let rows = ws.ideal_span(&labels).unwrap();
    for x in rows.iter().step_by(7) {
        let sigma = random_bijection(&mut r, &labels, &labels);
        assert!(comp.normal_form(&x.relabel(&sigma).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn monomial_counts_are_double_factorials_times_powers() {
    // (2n-3)!! shapes-with-labels times 3^(n-1) generator choices
    for (n, count) in [(1, 1), (2, 3), (3, 27), (4, 405)] {
        assert_eq!(enumerate_tree_monomials(&RAM_GENERATORS, &standard_labels(n), None).len(), count);
    }
}
