//! Free operads on binary generators over finite label sets.
//!
//! A tree monomial is stored in canonical form: at every internal vertex the minimal
//! leaf of the left subtree is smaller than the minimal leaf of the right subtree.
//! Its sign is tracked by the coefficient, relative to the depth-first (preorder) word
//! of its generators. Reordering that word permutes odd generators, which is where the
//! Koszul signs come from.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::atom::Atom;
use crate::bidegree::{koszul, BiDegree};
use crate::error::{Error, Result};
use crate::linear::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    pub fn sign(self) -> i64 {
        match self {
            Symmetry::Symmetric => 1,
            Symmetry::Antisymmetric => -1,
        }
    }
}

/// A binary generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub symbol: char,
    pub bidegree: BiDegree,
    pub symmetry: Symmetry,
}

impl Generator {
    pub const fn new(symbol: char, h: u32, w: u32, symmetry: Symmetry) -> Self {
        Generator {
            symbol,
            bidegree: BiDegree::new(h, w),
            symmetry,
        }
    }
}

/// Commutative product.
pub const E: Generator = Generator::new('E', 0, 0, Symmetry::Symmetric);
/// Lie bracket.
pub const L: Generator = Generator::new('L', 0, 1, Symmetry::Antisymmetric);
/// Suspended Griess product.
pub const OMEGA: Generator = Generator::new('Ω', 1, 1, Symmetry::Antisymmetric);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(Atom),
    Node(Box<Node>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub gen: Generator,
    pub left: Tree,
    pub right: Tree,
}

impl Tree {
    pub fn leaf(a: u32) -> Tree {
        Tree::Leaf(Atom(a))
    }

    /// Raw constructor; the result need not be canonical.
    pub fn node(gen: Generator, left: Tree, right: Tree) -> Tree {
        Tree::Node(Box::new(Node { gen, left, right }))
    }

    /// Single generator on two labels, e.g. `L_{i,j}`.
    pub fn gen2(gen: Generator, i: Atom, j: Atom) -> Tree {
        Tree::node(gen, Tree::Leaf(i), Tree::Leaf(j))
    }

    pub fn min_leaf(&self) -> Atom {
        match self {
            Tree::Leaf(a) => *a,
            Tree::Node(n) => n.left.min_leaf().min(n.right.min_leaf()),
        }
    }

    pub fn leaves(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Atom>) {
        match self {
            Tree::Leaf(a) => out.push(*a),
            Tree::Node(n) => {
                n.left.collect_leaves(out);
                n.right.collect_leaves(out);
            }
        }
    }

    pub fn label_set(&self) -> BTreeSet<Atom> {
        self.leaves().into_iter().collect()
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(n) => n.left.arity() + n.right.arity(),
        }
    }

    pub fn bidegree(&self) -> BiDegree {
        match self {
            Tree::Leaf(_) => BiDegree::ZERO,
            Tree::Node(n) => n.gen.bidegree + n.left.bidegree() + n.right.bidegree(),
        }
    }

    /// Generators in depth-first order (vertex, then left subtree, then right subtree).
    pub fn preorder(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        self.collect_preorder(&mut out);
        out
    }

    fn collect_preorder(&self, out: &mut Vec<Generator>) {
        if let Tree::Node(n) = self {
            out.push(n.gen);
            n.left.collect_preorder(out);
            n.right.collect_preorder(out);
        }
    }

    /// Same shape and leaves, generators replaced in preorder.
    pub fn with_generators(&self, gens: &[Generator]) -> Tree {
        let mut it = gens.iter();
        let t = self.rebuild(&mut it);
        debug_assert!(it.next().is_none());
        t
    }

    fn rebuild<'a, I: Iterator<Item = &'a Generator>>(&self, it: &mut I) -> Tree {
        match self {
            Tree::Leaf(a) => Tree::Leaf(*a),
            Tree::Node(n) => {
                let g = *it.next().expect("generator list too short");
                let l = n.left.rebuild(it);
                let r = n.right.rebuild(it);
                Tree::node(g, l, r)
            }
        }
    }

    pub fn map_atoms<F: Fn(Atom) -> Atom + Copy>(&self, f: F) -> Tree {
        match self {
            Tree::Leaf(a) => Tree::Leaf(f(*a)),
            Tree::Node(n) => Tree::node(n.gen, n.left.map_atoms(f), n.right.map_atoms(f)),
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Node(n) => {
                n.left.min_leaf() < n.right.min_leaf() && n.left.is_canonical() && n.right.is_canonical()
            }
        }
    }

    /// Puts children in canonical order. Swapping the subtrees `t1, t2` of a vertex
    /// labelled `g` contributes `symmetry(g) * (-1)^(h(t1) h(t2))`.
    pub fn canonicalize(&self) -> Result<(i64, Tree)> {
        check_distinct(&self.leaves())?;
        Ok(self.canonicalize_unchecked())
    }

    fn canonicalize_unchecked(&self) -> (i64, Tree) {
        match self {
            Tree::Leaf(a) => (1, Tree::Leaf(*a)),
            Tree::Node(n) => {
                let (sl, l) = n.left.canonicalize_unchecked();
                let (sr, r) = n.right.canonicalize_unchecked();
                let mut sign = sl * sr;
                if l.min_leaf() < r.min_leaf() {
                    (sign, Tree::node(n.gen, l, r))
                } else {
                    sign *= n.gen.symmetry.sign() * koszul(l.bidegree(), r.bidegree());
                    (sign, Tree::node(n.gen, r, l))
                }
            }
        }
    }

    /// Grafts `inner` onto the leaf `slot`. With the tensor word of `outer ∘ inner`
    /// taken as the preorder word of `outer` followed by that of `inner`, the sign is
    /// the cost of moving the inner word to the slot position, then canonicalizing.
    pub fn compose(&self, slot: Atom, inner: &Tree) -> Result<(i64, Tree)> {
        let outer_leaves = self.leaves();
        if !outer_leaves.contains(&slot) {
            return Err(Error::MissingSlot(slot));
        }
        for a in inner.leaves() {
            if a != slot && outer_leaves.contains(&a) {
                return Err(Error::LabelCollision(a));
            }
            if a == slot {
                return Err(Error::LabelCollision(a));
            }
        }
        let mut after = BiDegree::ZERO;
        let mut seen = false;
        self.degree_after(slot, &mut seen, &mut after);
        let move_sign = koszul(inner.bidegree(), after);
        let grafted = self.graft(slot, inner);
        let (s, t) = grafted.canonicalize()?;
        Ok((move_sign * s, t))
    }

    fn degree_after(&self, slot: Atom, seen: &mut bool, acc: &mut BiDegree) {
        match self {
            Tree::Leaf(a) => {
                if *a == slot {
                    *seen = true;
                }
            }
            Tree::Node(n) => {
                if *seen {
                    *acc = *acc + n.gen.bidegree;
                }
                n.left.degree_after(slot, seen, acc);
                n.right.degree_after(slot, seen, acc);
            }
        }
    }

    fn graft(&self, slot: Atom, inner: &Tree) -> Tree {
        match self {
            Tree::Leaf(a) if *a == slot => inner.clone(),
            Tree::Leaf(a) => Tree::Leaf(*a),
            Tree::Node(n) => Tree::node(n.gen, n.left.graft(slot, inner), n.right.graft(slot, inner)),
        }
    }
}

fn check_distinct(leaves: &[Atom]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for a in leaves {
        if !seen.insert(*a) {
            return Err(Error::DuplicateLabel(*a));
        }
    }
    Ok(())
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(a) => write!(f, "{a}"),
            Tree::Node(n) => write!(f, "{}({},{})", n.gen.symbol, n.left, n.right),
        }
    }
}

/// Sparse rational combination of canonical tree monomials on one label set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadElement {
    pub labels: BTreeSet<Atom>,
    pub terms: BTreeMap<Tree, Rational>,
}

impl OperadElement {
    pub fn zero(labels: BTreeSet<Atom>) -> Self {
        OperadElement {
            labels,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_tree(t: &Tree) -> Result<Self> {
        let mut x = OperadElement::zero(t.label_set());
        x.add_tree(&Rational::one(), t)?;
        Ok(x)
    }

    /// Single generator `g_{i,j}`.
    pub fn generator(g: Generator, i: Atom, j: Atom) -> Result<Self> {
        OperadElement::from_tree(&Tree::gen2(g, i, j))
    }

    /// Adds `c * t`, canonicalizing `t` first.
    pub fn add_tree(&mut self, c: &Rational, t: &Tree) -> Result<()> {
        let (s, t) = t.canonicalize()?;
        if t.label_set() != self.labels {
            return Err(Error::LabelMismatch(t.to_string()));
        }
        self.add_canonical(&(c * rat(s)), t);
        Ok(())
    }

    /// Adds `c * t` for an already canonical `t`.
    pub fn add_canonical(&mut self, c: &Rational, t: Tree) {
        if c.is_zero() {
            return;
        }
        add_to(&mut self.terms, t, c);
    }

    pub fn add(&mut self, other: &OperadElement) -> Result<()> {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &OperadElement) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(format_labels(&other.labels)));
        }
        for (t, x) in other.terms.iter() {
            self.add_canonical(&(c * x), t.clone());
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Rational) -> OperadElement {
        let mut out = OperadElement::zero(self.labels.clone());
        for (t, x) in self.terms.iter() {
            out.add_canonical(&(c * x), t.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bidegrees(&self) -> BTreeSet<BiDegree> {
        self.terms.keys().map(|t| t.bidegree()).collect()
    }

    /// `self ∘_slot inner`, bilinear.
    pub fn compose(&self, slot: Atom, inner: &OperadElement) -> Result<OperadElement> {
        if !self.labels.contains(&slot) {
            return Err(Error::MissingSlot(slot));
        }
        if let Some(a) = inner.labels.iter().find(|a| **a == slot || self.labels.contains(a)) {
            return Err(Error::LabelCollision(*a));
        }
        let mut labels = self.labels.clone();
        labels.remove(&slot);
        labels.extend(inner.labels.iter().copied());
        let mut out = OperadElement::zero(labels);
        for (t, x) in self.terms.iter() {
            for (u, y) in inner.terms.iter() {
                let (s, v) = t.compose(slot, u)?;
                out.add_canonical(&(x * y * rat(s)), v);
            }
        }
        Ok(out)
    }

    /// Applies a bijection of label sets, then canonicalizes.
    pub fn relabel(&self, phi: &BTreeMap<Atom, Atom>) -> Result<OperadElement> {
        let image: BTreeSet<Atom> = self
            .labels
            .iter()
            .map(|a| phi.get(a).copied().ok_or(Error::NotBijective))
            .collect::<Result<_>>()?;
        if image.len() != self.labels.len() {
            return Err(Error::NotBijective);
        }
        let mut out = OperadElement::zero(image);
        for (t, x) in self.terms.iter() {
            out.add_tree(x, &t.map_atoms(|a| phi[&a]))?;
        }
        Ok(out)
    }
}

/// `map[key] += c`, dropping the entry when it cancels.
pub(crate) fn add_to<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: &Rational) {
    use alloc::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn format_labels(labels: &BTreeSet<Atom>) -> String {
    let mut s = String::from("{");
    for (i, a) in labels.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&a.to_string());
    }
    s.push('}');
    s
}

impl fmt::Display for OperadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "({c}) {t}")?;
            }
        }
        Ok(())
    }
}

/// Generators plus quadratic relations written on the abstract labels `1, 2, 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: &'static str,
    pub generators: Vec<Generator>,
    pub relations: Vec<(&'static str, OperadElement)>,
}

impl Presentation {
    /// Canonical text form, stable across runs; hashed into cache keys.
    pub fn fingerprint(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "{}|", self.name);
        for g in self.generators.iter() {
            let _ = write!(s, "{}:{}:{:?};", g.symbol, g.bidegree, g.symmetry);
        }
        for (name, r) in self.relations.iter() {
            let _ = write!(s, "|{name}={r}");
        }
        s
    }
}

/// All canonical tree monomials on `labels`, sorted by the structural order
/// (root generator, left subtree, right subtree).
pub fn enumerate_tree_monomials(generators: &[Generator], labels: &[Atom], filter: Option<BiDegree>) -> Vec<Tree> {
    let mut sorted = labels.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = trees_on(generators, &sorted);
    if let Some(d) = filter {
        out.retain(|t| t.bidegree() == d);
    }
    out.sort();
    out
}

fn trees_on(generators: &[Generator], labels: &[Atom]) -> Vec<Tree> {
    if labels.len() == 1 {
        return alloc::vec![Tree::Leaf(labels[0])];
    }
    let mut out = Vec::new();
    let rest = &labels[1..];
    let m = rest.len();
    // left block always holds the minimal label; enumerate the other members by bitmask
    for mask in 0..(1u64 << m) {
        if mask == (1u64 << m) - 1 {
            continue;
        }
        let mut left = alloc::vec![labels[0]];
        let mut right = Vec::new();
        for (k, a) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                left.push(*a);
            } else {
                right.push(*a);
            }
        }
        let lt = trees_on(generators, &left);
        let rt = trees_on(generators, &right);
        for g in generators {
            for l in lt.iter() {
                for r in rt.iter() {
                    out.push(Tree::node(*g, l.clone(), r.clone()));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn t(g: Generator, l: Tree, r: Tree) -> Tree {
        Tree::node(g, l, r)
    }
    fn lf(a: u32) -> Tree {
        Tree::leaf(a)
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(t(L, lf(2), lf(1)).canonicalize().unwrap(), (-1, t(L, lf(1), lf(2))));
        assert_eq!(t(E, lf(2), lf(1)).canonicalize().unwrap(), (1, t(E, lf(1), lf(2))));
        // the inner Ω has h = 1 but the leaf has h = 0, so only the antisymmetry counts
        assert_eq!(
            t(OMEGA, t(OMEGA, lf(2), lf(3)), lf(1)).canonicalize().unwrap(),
            (-1, t(OMEGA, lf(1), t(OMEGA, lf(2), lf(3))))
        );
        // two odd subtrees swapped: antisymmetry times a Koszul sign
        assert_eq!(
            t(E, t(OMEGA, lf(3), lf(4)), t(OMEGA, lf(1), lf(2))).canonicalize().unwrap(),
            (-1, t(E, t(OMEGA, lf(1), lf(2)), t(OMEGA, lf(3), lf(4))))
        );
    }

    #[test]
    fn duplicate_leaves_rejected() {
        assert_eq!(t(L, lf(1), lf(1)).canonicalize(), Err(Error::DuplicateLabel(Atom(1))));
    }

    #[test]
    fn compose_examples() {
        let e1s = Tree::gen2(E, Atom(1), Atom::STAR);
        let e23 = Tree::gen2(E, Atom(2), Atom(3));
        assert_eq!(e1s.compose(Atom::STAR, &e23).unwrap(), (1, t(E, lf(1), t(E, lf(2), lf(3)))));
        let l1s = Tree::gen2(L, Atom(1), Atom::STAR);
        let l23 = Tree::gen2(L, Atom(2), Atom(3));
        assert_eq!(l1s.compose(Atom::STAR, &l23).unwrap(), (1, t(L, lf(1), t(L, lf(2), lf(3)))));
        assert_eq!(l1s.compose(Atom(9), &l23), Err(Error::MissingSlot(Atom(9))));
        assert_eq!(
            l1s.compose(Atom::STAR, &Tree::gen2(L, Atom(1), Atom(3))),
            Err(Error::LabelCollision(Atom(1)))
        );
    }

    #[test]
    fn compose_moves_odd_words() {
        // Ω(★,Ω(4,5)) ∘_★ Ω(1,2): the inner Ω moves past the outer right Ω
        let outer = t(OMEGA, Tree::Leaf(Atom::STAR), t(OMEGA, lf(4), lf(5)));
        let (s, tree) = outer.compose(Atom::STAR, &Tree::gen2(OMEGA, Atom(1), Atom(2))).unwrap();
        assert_eq!(tree, t(OMEGA, t(OMEGA, lf(1), lf(2)), t(OMEGA, lf(4), lf(5))));
        assert_eq!(s, -1);
    }

    #[test]
    fn relabel_examples() {
        let x = OperadElement::generator(L, Atom(1), Atom(2)).unwrap();
        let id: BTreeMap<Atom, Atom> = [(Atom(1), Atom(1)), (Atom(2), Atom(2))].into();
        assert_eq!(x.relabel(&id).unwrap(), x);
        let swap: BTreeMap<Atom, Atom> = [(Atom(1), Atom(2)), (Atom(2), Atom(1))].into();
        assert_eq!(x.relabel(&swap).unwrap(), x.scaled(&rat(-1)));
        let y = OperadElement::from_tree(&t(E, lf(1), t(E, lf(2), lf(3)))).unwrap();
        let s23: BTreeMap<Atom, Atom> = [(Atom(1), Atom(1)), (Atom(2), Atom(3)), (Atom(3), Atom(2))].into();
        assert_eq!(y.relabel(&s23).unwrap(), y);
        let bad: BTreeMap<Atom, Atom> = [(Atom(1), Atom(1)), (Atom(2), Atom(1))].into();
        assert_eq!(x.relabel(&bad), Err(Error::NotBijective));
    }

    #[test]
    fn enumeration_counts() {
        let ram = [E, L, OMEGA];
        let l2 = [Atom(1), Atom(2)];
        assert_eq!(enumerate_tree_monomials(&ram, &l2, None).len(), 3);
        let l3 = [Atom(1), Atom(2), Atom(3)];
        let all = enumerate_tree_monomials(&ram, &l3, None);
        assert_eq!(all.len(), 27);
        assert!(all.iter().all(|t| t.is_canonical()));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_tree_monomials(&ram, &l3, Some(BiDegree::new(1, 2))).len(), 6);
        // (2n-3)!! shapes times 3^(n-1) labelings
        let l4: Vec<Atom> = (1..=4).map(Atom).collect();
        assert_eq!(enumerate_tree_monomials(&ram, &l4, None).len(), 15 * 27);
        assert_eq!(enumerate_tree_monomials(&ram, &[Atom(7)], None), vec![lf(7)]);
    }

    #[test]
    fn display() {
        let x = t(OMEGA, lf(1), t(L, lf(2), Tree::Leaf(Atom::STAR)));
        assert_eq!(x.to_string(), "Ω(1,L(2,*))");
    }
}
