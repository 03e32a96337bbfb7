//! Graded-commutative algebras generated by edge variables `x_{i,j}` on a finite vertex
//! set: the algebras `R(I)` with colors `a`, `b`, and the Arnold algebra.
//!
//! A monomial is stored with its edges sorted by vertex pair, each pair oriented
//! `(min, max)`. The coefficient carries the sign relative to that order; only the
//! relative order of odd edges matters.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::atom::{standard_labels, Atom, Transport};
use crate::bidegree::{BiDegree, DimTable};
use crate::error::{Error, Limits, Result};
use crate::linear::{rat, Eliminator, Echelon, QuotientBasis, Rational, SparseVec};
use crate::operad::{add_to, format_labels, Symmetry};
use crate::report::{Check, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color {
    pub symbol: char,
    pub bidegree: BiDegree,
    pub symmetry: Symmetry,
}

impl Color {
    pub const fn new(symbol: char, h: u32, w: u32, symmetry: Symmetry) -> Self {
        Color {
            symbol,
            bidegree: BiDegree::new(h, w),
            symmetry,
        }
    }

    pub fn is_odd(self) -> bool {
        self.bidegree.is_odd()
    }
}

pub const A: Color = Color::new('a', 0, 1, Symmetry::Antisymmetric);
pub const B: Color = Color::new('b', 1, 1, Symmetry::Antisymmetric);
/// Arnold generator; `ω_{i,j} = ω_{j,i}`.
pub const ARNOLD: Color = Color::new('ω', 1, 1, Symmetry::Symmetric);

/// One letter `x_{i,j}` of a formal word, orientation as written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Letter {
    pub color: Color,
    pub i: Atom,
    pub j: Atom,
}

pub fn letter(color: Color, i: Atom, j: Atom) -> Letter {
    Letter { color, i, j }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub lo: Atom,
    pub hi: Atom,
    pub color: Color,
}

impl Edge {
    fn pair(&self) -> (Atom, Atom) {
        (self.lo, self.hi)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphMonomial {
    edges: Vec<Edge>,
}

impl GraphMonomial {
    pub fn unit() -> Self {
        GraphMonomial { edges: Vec::new() }
    }

    /// Canonical form of a product of letters, or `None` when it vanishes because a
    /// vertex pair repeats or a letter is a loop.
    pub fn from_word(word: &[Letter]) -> Option<(i64, GraphMonomial)> {
        let mut sign = 1;
        let mut edges = Vec::with_capacity(word.len());
        for l in word {
            let (lo, hi) = match l.i.cmp(&l.j) {
                core::cmp::Ordering::Less => (l.i, l.j),
                core::cmp::Ordering::Greater => {
                    sign *= l.color.symmetry.sign();
                    (l.j, l.i)
                }
                core::cmp::Ordering::Equal => return None,
            };
            edges.push(Edge { lo, hi, color: l.color });
        }
        let s = sort_edges(&mut edges)?;
        Some((sign * s, GraphMonomial { edges }))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn bidegree(&self) -> BiDegree {
        self.edges.iter().fold(BiDegree::ZERO, |d, e| d + e.color.bidegree)
    }

    /// Letters of the monomial in canonical order.
    pub fn word(&self) -> Vec<Letter> {
        self.edges.iter().map(|e| letter(e.color, e.lo, e.hi)).collect()
    }

    pub fn has_cycle(&self) -> bool {
        let mut uf = UnionFind::default();
        self.edges.iter().any(|e| !uf.union(e.lo, e.hi))
    }

    pub fn multiply(&self, other: &GraphMonomial) -> Option<(i64, GraphMonomial)> {
        let mut edges = Vec::with_capacity(self.len() + other.len());
        edges.extend_from_slice(&self.edges);
        edges.extend_from_slice(&other.edges);
        let s = sort_edges(&mut edges)?;
        Some((s, GraphMonomial { edges }))
    }

    /// Relabels the vertices and re-canonicalizes.
    pub fn map_atoms<F: Fn(Atom) -> Atom>(&self, f: F) -> Option<(i64, GraphMonomial)> {
        let word: Vec<Letter> = self.edges.iter().map(|e| letter(e.color, f(e.lo), f(e.hi))).collect();
        GraphMonomial::from_word(&word)
    }

    /// Relabelling through an order-preserving map; no sign, no reordering.
    fn map_monotone<F: Fn(Atom) -> Atom>(&self, f: F) -> GraphMonomial {
        GraphMonomial {
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    lo: f(e.lo),
                    hi: f(e.hi),
                    color: e.color,
                })
                .collect(),
        }
    }
}

/// Sorts edges by vertex pair; returns the sign of the induced permutation of odd
/// edges, or `None` if a pair repeats.
fn sort_edges(edges: &mut [Edge]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            match edges[i].pair().cmp(&edges[j].pair()) {
                core::cmp::Ordering::Equal => return None,
                core::cmp::Ordering::Greater => {
                    if edges[i].color.is_odd() && edges[j].color.is_odd() {
                        sign = -sign;
                    }
                }
                core::cmp::Ordering::Less => {}
            }
        }
    }
    edges.sort_by_key(|e| e.pair());
    Some(sign)
}

#[derive(Default)]
struct UnionFind {
    parent: BTreeMap<Atom, Atom>,
}

impl UnionFind {
    fn find(&mut self, a: Atom) -> Atom {
        let p = *self.parent.get(&a).unwrap_or(&a);
        if p == a {
            return a;
        }
        let r = self.find(p);
        self.parent.insert(a, r);
        r
    }

    /// False if already connected.
    fn union(&mut self, a: Atom, b: Atom) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent.insert(ra, rb);
        true
    }
}

impl fmt::Display for GraphMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return f.write_str("1");
        }
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}({},{})", e.color.symbol, e.lo, e.hi)?;
        }
        Ok(())
    }
}

/// Sparse rational combination of monomials on one vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub vertices: BTreeSet<Atom>,
    pub terms: BTreeMap<GraphMonomial, Rational>,
}

impl AlgebraElement {
    pub fn zero(vertices: BTreeSet<Atom>) -> Self {
        AlgebraElement {
            vertices,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vertices: BTreeSet<Atom>) -> Self {
        let mut x = Self::zero(vertices);
        x.terms.insert(GraphMonomial::unit(), Rational::one());
        x
    }

    pub fn from_monomial(vertices: BTreeSet<Atom>, m: GraphMonomial) -> Self {
        let mut x = Self::zero(vertices);
        x.terms.insert(m, Rational::one());
        x
    }

    /// Adds `c` times the product of the letters.
    pub fn add_word(&mut self, c: &Rational, word: &[Letter]) -> Result<()> {
        for l in word {
            for v in [l.i, l.j] {
                if !self.vertices.contains(&v) {
                    return Err(Error::LabelMismatch(format!("{v} not in {}", format_labels(&self.vertices))));
                }
            }
        }
        if let Some((s, m)) = GraphMonomial::from_word(word) {
            add_to(&mut self.terms, m, &(c * rat(s)));
        }
        Ok(())
    }

    pub fn add_monomial(&mut self, c: &Rational, m: GraphMonomial) {
        add_to(&mut self.terms, m, c);
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &AlgebraElement) -> Result<()> {
        if self.vertices != other.vertices {
            return Err(Error::LabelMismatch(format_labels(&other.vertices)));
        }
        for (m, d) in other.terms.iter() {
            add_to(&mut self.terms, m.clone(), &(c * d));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bidegrees(&self) -> BTreeSet<BiDegree> {
        self.terms.keys().map(GraphMonomial::bidegree).collect()
    }

    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if self.vertices != other.vertices {
            return Err(Error::LabelMismatch(format!(
                "{} vs {}",
                format_labels(&self.vertices),
                format_labels(&other.vertices)
            )));
        }
        let mut out = AlgebraElement::zero(self.vertices.clone());
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in other.terms.iter() {
                if let Some((s, m)) = m1.multiply(m2) {
                    add_to(&mut out.terms, m, &(c1 * c2 * rat(s)));
                }
            }
        }
        Ok(out)
    }

    /// Drops every monomial whose graph has a cycle.
    pub fn without_cycles(mut self) -> Self {
        self.terms.retain(|m, _| !m.has_cycle());
        self
    }

    /// Same element with coefficients scaled so the first one is `1`.
    fn normalized(&self) -> BTreeMap<GraphMonomial, Rational> {
        match self.terms.values().next() {
            None => BTreeMap::new(),
            Some(c) => {
                let inv = c.recip();
                self.terms.iter().map(|(m, d)| (m.clone(), d * &inv)).collect()
            }
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Ambient monomials are forests; monomials with a cycle are zero.
    Forest,
    /// Every simple graph.
    Full,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Forest => "forest",
            Mode::Full => "full",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forest" => Ok(Mode::Forest),
            "full" => Ok(Mode::Full),
            _ => Err(Error::UnknownSelector(s.to_string())),
        }
    }
}

/// All monomials on `labels` in the given colors, sorted by bidegree then edges.
pub fn enumerate_graph_monomials(
    colors: &[Color],
    labels: &[Atom],
    mode: Mode,
    filter: Option<BiDegree>,
) -> Vec<GraphMonomial> {
    let mut labels = labels.to_vec();
    labels.sort();
    let mut pairs = Vec::new();
    for (k, &i) in labels.iter().enumerate() {
        for &j in &labels[k + 1..] {
            pairs.push((i, j));
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        pairs: &[(Atom, Atom)],
        colors: &[Color],
        mode: Mode,
        cur: &mut Vec<Edge>,
        out: &mut Vec<GraphMonomial>,
    ) {
        let Some((&(lo, hi), rest)) = pairs.split_first() else {
            out.push(GraphMonomial { edges: cur.clone() });
            return;
        };
        go(rest, colors, mode, cur, out);
        if mode == Mode::Forest {
            let mut uf = UnionFind::default();
            for e in cur.iter() {
                uf.union(e.lo, e.hi);
            }
            if uf.find(lo) == uf.find(hi) {
                return;
            }
        }
        for &color in colors {
            cur.push(Edge { lo, hi, color });
            go(rest, colors, mode, cur, out);
            cur.pop();
        }
    }
    go(&pairs, colors, mode, &mut cur, &mut out);
    if let Some(d) = filter {
        out.retain(|m| m.bidegree() == d);
    }
    out.sort_by(|x, y| (x.bidegree(), x).cmp(&(y.bidegree(), y)));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationFamily {
    Rela2,
    Relaa,
    Relab,
    Relabbn,
    Relbbbn,
    Relbab,
    Relbbb,
    Arnold,
}

impl RelationFamily {
    pub const R: [RelationFamily; 7] = [
        RelationFamily::Rela2,
        RelationFamily::Relaa,
        RelationFamily::Relab,
        RelationFamily::Relabbn,
        RelationFamily::Relbbbn,
        RelationFamily::Relbab,
        RelationFamily::Relbbb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationFamily::Rela2 => "rela2",
            RelationFamily::Relaa => "relaa",
            RelationFamily::Relab => "relab",
            RelationFamily::Relabbn => "relabbn",
            RelationFamily::Relbbbn => "relbbbn",
            RelationFamily::Relbab => "relbab",
            RelationFamily::Relbbb => "relbbb",
            RelationFamily::Arnold => "arnold",
        }
    }

    /// Instances over all injections of the index letters into `labels`.
    pub fn instances(self, labels: &[Atom]) -> Vec<RelationInstance> {
        let mut out = Vec::new();
        let mut push = |terms: Vec<(i64, Vec<Letter>)>| out.push(RelationInstance { family: self, terms });
        match self {
            RelationFamily::Rela2 => {
                for t in injections(labels, 2) {
                    if t[0] < t[1] {
                        push(vec![(1, vec![letter(A, t[0], t[1]), letter(A, t[0], t[1])])]);
                    }
                }
            }
            RelationFamily::Relaa | RelationFamily::Arnold => {
                let c = if self == RelationFamily::Relaa { A } else { ARNOLD };
                for t in injections(labels, 3) {
                    push(
                        cyclic3(&t)
                            .into_iter()
                            .map(|[i, j, k]| (1, vec![letter(c, i, j), letter(c, j, k)]))
                            .collect(),
                    );
                }
            }
            RelationFamily::Relab => {
                for t in injections(labels, 3) {
                    let mut terms = Vec::new();
                    for [i, j, k] in cyclic3(&t) {
                        terms.push((1, vec![letter(B, i, j), letter(A, j, k)]));
                    }
                    for [i, j, k] in cyclic3(&t) {
                        terms.push((1, vec![letter(A, i, j), letter(B, j, k)]));
                    }
                    push(terms);
                }
            }
            RelationFamily::Relabbn | RelationFamily::Relbbbn => {
                let first = if self == RelationFamily::Relabbn { A } else { B };
                for len in 2..=labels.len() {
                    for t in injections(labels, len) {
                        let word: Vec<Letter> = (0..len)
                            .map(|p| letter(if p == 0 { first } else { B }, t[p], t[(p + 1) % len]))
                            .collect();
                        push(vec![(1, word)]);
                    }
                }
            }
            RelationFamily::Relbab | RelationFamily::Relbbb => {
                let middle = if self == RelationFamily::Relbab { A } else { B };
                for t in injections(labels, 4) {
                    let terms = TWELVE
                        .iter()
                        .map(|p| {
                            let [i, j, k, l] = p.map(|q| t[q]);
                            (1, vec![letter(B, i, j), letter(middle, j, k), letter(B, k, l)])
                        })
                        .collect();
                    push(terms);
                }
            }
        }
        out
    }
}

/// Index orders of the twelve-term relations, as permutations of `(i, j, k, l)`.
const TWELVE: [[usize; 4]; 12] = [
    [0, 1, 2, 3],
    [0, 2, 1, 3],
    [0, 1, 3, 2],
    [0, 3, 1, 2],
    [0, 2, 3, 1],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 2, 0, 3],
    [1, 0, 3, 2],
    [1, 3, 0, 2],
    [2, 0, 1, 3],
    [2, 1, 0, 3],
];

fn cyclic3(t: &[Atom]) -> [[Atom; 3]; 3] {
    let (i, j, k) = (t[0], t[1], t[2]);
    [[i, j, k], [j, k, i], [k, i, j]]
}

/// Sequences of `k` distinct elements of `labels`, in lexicographic order of positions.
pub fn injections(labels: &[Atom], k: usize) -> Vec<Vec<Atom>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(labels: &[Atom], k: usize, cur: &mut Vec<Atom>, out: &mut Vec<Vec<Atom>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for &a in labels {
            if !cur.contains(&a) {
                cur.push(a);
                go(labels, k, cur, out);
                cur.pop();
            }
        }
    }
    go(labels, k, &mut cur, &mut out);
    out
}

/// A relation instance as a formal signed sum of words, before any simplification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub family: RelationFamily,
    pub terms: Vec<(i64, Vec<Letter>)>,
}

impl RelationInstance {
    pub fn element(&self, vertices: &BTreeSet<Atom>) -> Result<AlgebraElement> {
        let mut x = AlgebraElement::zero(vertices.clone());
        for (c, w) in self.terms.iter() {
            x.add_word(&rat(*c), w)?;
        }
        Ok(x)
    }

    pub fn vertices(&self) -> BTreeSet<Atom> {
        self.terms.iter().flat_map(|(_, w)| w.iter().flat_map(|l| [l.i, l.j])).collect()
    }
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.family.name())?;
        for (k, (c, w)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
            write!(f, " {sign}")?;
            for l in w {
                write!(f, "{}({},{})", l.color.symbol, l.i, l.j)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPresentation {
    pub name: &'static str,
    pub colors: Vec<Color>,
    pub families: Vec<RelationFamily>,
}

impl GraphPresentation {
    pub fn r() -> Self {
        GraphPresentation {
            name: "R",
            colors: vec![A, B],
            families: RelationFamily::R.to_vec(),
        }
    }

    /// `R` without the two twelve-term families.
    pub fn r_without_twelve_term() -> Self {
        GraphPresentation {
            name: "R-no-12",
            colors: vec![A, B],
            families: RelationFamily::R[..5].to_vec(),
        }
    }

    pub fn arnold() -> Self {
        GraphPresentation {
            name: "arnold",
            colors: vec![ARNOLD],
            families: vec![RelationFamily::Arnold],
        }
    }

    pub fn fingerprint(&self) -> String {
        let mut s = String::from(self.name);
        for c in self.colors.iter() {
            s.push_str(&format!(";{}{}{:?}", c.symbol, c.bidegree, c.symmetry));
        }
        for fam in self.families.iter() {
            s.push(';');
            s.push_str(fam.name());
            if let Some(r) = fam.instances(&standard_labels(4)).first() {
                s.push_str(&format!("[{r}]"));
            }
        }
        s
    }

    pub fn instances(&self, labels: &[Atom]) -> Vec<RelationInstance> {
        self.families.iter().flat_map(|f| f.instances(labels)).collect()
    }
}

/// Quotient of the ambient span on `1..=n` by the ideal.
#[derive(Clone, Debug)]
pub struct AlgebraComponent {
    pub n: usize,
    pub mode: Mode,
    pub monomials: Vec<GraphMonomial>,
    index: BTreeMap<GraphMonomial, usize>,
    pub quotient: QuotientBasis,
    pub dims: DimTable,
}

impl AlgebraComponent {
    fn with_monomials(n: usize, mode: Mode, monomials: Vec<GraphMonomial>, reducer: Echelon) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let quotient = QuotientBasis::from_echelon(reducer);
        let mut dims = DimTable::new();
        for &c in quotient.basis.iter() {
            dims.add(monomials[c].bidegree(), 1);
        }
        AlgebraComponent {
            n,
            mode,
            monomials,
            index,
            quotient,
            dims,
        }
    }

    /// Rebuilds a component from a stored reducer (cache files).
    pub fn from_reducer(p: &GraphPresentation, n: usize, mode: Mode, reducer: Echelon) -> Result<Self> {
        let monomials = enumerate_graph_monomials(&p.colors, &standard_labels(n), mode, None);
        if reducer.ncols != monomials.len() {
            return Err(Error::InvalidArgument(format!(
                "stored reducer has {} columns, expected {}",
                reducer.ncols,
                monomials.len()
            )));
        }
        Ok(Self::with_monomials(n, mode, monomials, reducer))
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn ideal_rank(&self) -> usize {
        self.quotient.reducer.rank()
    }

    pub fn reducer(&self) -> &Echelon {
        &self.quotient.reducer
    }

    pub fn basis_monomial(&self, i: usize) -> &GraphMonomial {
        &self.monomials[self.quotient.basis[i]]
    }

    pub fn basis_bidegree(&self, i: usize) -> BiDegree {
        self.basis_monomial(i).bidegree()
    }

    pub fn basis_index_of(&self, m: &GraphMonomial) -> Option<usize> {
        self.quotient.basis_index(*self.index.get(m)?)
    }

    /// Basis element `i` on the given vertex set.
    pub fn basis_element(&self, i: usize, labels: &Transport) -> AlgebraElement {
        let m = self.basis_monomial(i).map_monotone(|a| labels.from_standard(a));
        AlgebraElement::from_monomial(labels.labels().iter().copied().collect(), m)
    }

    /// Ambient coordinates of a single monomial given on the standard labels.
    fn column(&self, m: &GraphMonomial) -> Result<Option<usize>> {
        match self.index.get(m) {
            Some(c) => Ok(Some(*c)),
            None if self.mode == Mode::Forest && m.has_cycle() => Ok(None),
            None => Err(Error::InvalidArgument(format!("{m} is not an ambient monomial"))),
        }
    }

    /// Normal form of one monomial given on an arbitrary vertex set of size `n`.
    pub fn monomial_normal_form(&self, m: &GraphMonomial, labels: &Transport) -> Result<SparseVec> {
        let s = m.map_monotone(|a| labels.to_standard(a).expect("vertex in set"));
        Ok(match self.column(&s)? {
            Some(c) => self.quotient.coordinates(&SparseVec::unit(c)),
            None => SparseVec::new(),
        })
    }

    pub fn ambient_vector(&self, x: &AlgebraElement) -> Result<SparseVec> {
        if x.vertices.len() != self.n {
            return Err(Error::LabelMismatch(format_labels(&x.vertices)));
        }
        let tr = Transport::new(x.vertices.iter().copied());
        let mut entries = Vec::with_capacity(x.terms.len());
        for (m, c) in x.terms.iter() {
            let s = m.map_monotone(|a| tr.to_standard(a).expect("vertex in set"));
            if let Some(col) = self.column(&s)? {
                entries.push((col, c.clone()));
            }
        }
        Ok(SparseVec::from_entries(entries))
    }

    /// Coordinates on the quotient basis; linear, and zero exactly on the ideal.
    pub fn normal_form(&self, x: &AlgebraElement) -> Result<SparseVec> {
        Ok(self.quotient.coordinates(&self.ambient_vector(x)?))
    }

    pub fn from_coordinates(&self, v: &SparseVec, labels: &Transport) -> AlgebraElement {
        let mut x = AlgebraElement::zero(labels.labels().iter().copied().collect());
        for (i, c) in v.iter() {
            x.add_monomial(c, self.basis_monomial(*i).map_monotone(|a| labels.from_standard(a)));
        }
        x
    }

    pub fn ideal_rows<'a>(&'a self, labels: &'a Transport) -> impl Iterator<Item = AlgebraElement> + 'a {
        self.quotient.reducer.rows().iter().map(move |row| {
            let mut x = AlgebraElement::zero(labels.labels().iter().copied().collect());
            for (c, coef) in row.iter() {
                x.add_monomial(coef, self.monomials[*c].map_monotone(|a| labels.from_standard(a)));
            }
            x
        })
    }
}

/// Lazily computed components of one graph presentation in one ambient mode.
#[derive(Clone, Debug)]
pub struct GraphWorkspace {
    pub presentation: GraphPresentation,
    pub mode: Mode,
    pub limits: Limits,
    components: BTreeMap<usize, Arc<AlgebraComponent>>,
}

impl GraphWorkspace {
    pub fn new(presentation: GraphPresentation, mode: Mode, limits: Limits) -> Self {
        GraphWorkspace {
            presentation,
            mode,
            limits,
            components: BTreeMap::new(),
        }
    }

    pub fn r(mode: Mode, limits: Limits) -> Self {
        Self::new(GraphPresentation::r(), mode, limits)
    }

    pub fn insert(&mut self, c: AlgebraComponent) {
        self.components.insert(c.n, Arc::new(c));
    }

    pub fn cached(&self) -> impl Iterator<Item = &Arc<AlgebraComponent>> {
        self.components.values()
    }

    pub fn component(&mut self, n: usize) -> Result<Arc<AlgebraComponent>> {
        if let Some(c) = self.components.get(&n) {
            return Ok(c.clone());
        }
        self.limits.check_arity(n, format!("vertex sets computed {:?}", self.components.keys().collect::<Vec<_>>()))?;
        let labels = standard_labels(n);
        let vertices: BTreeSet<Atom> = labels.iter().copied().collect();
        let monomials = enumerate_graph_monomials(&self.presentation.colors, &labels, self.mode, None);
        let index: BTreeMap<GraphMonomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut relations = BTreeSet::new();
        for r in self.presentation.instances(&labels) {
            let mut x = r.element(&vertices)?;
            if self.mode == Mode::Forest {
                x = x.without_cycles();
            }
            if !x.is_zero() {
                relations.insert(x.normalized().into_iter().collect::<Vec<_>>());
            }
        }
        let mut el = Eliminator::new(monomials.len());
        let mut rows = 0usize;
        for r in relations.iter() {
            for m in monomials.iter() {
                let mut entries: BTreeMap<usize, Rational> = BTreeMap::new();
                for (t, c) in r.iter() {
                    if let Some((s, p)) = t.multiply(m) {
                        if let Some(col) = index.get(&p) {
                            add_to(&mut entries, *col, &(c * rat(s)));
                        }
                    }
                }
                if entries.is_empty() {
                    continue;
                }
                rows += 1;
                if rows > self.limits.max_rows {
                    return Err(Error::ResourceBound {
                        what: "spanning rows",
                        requested: rows,
                        limit: self.limits.max_rows,
                        progress: format!("vertex set of size {n}, rank so far {}", el.rank()),
                    });
                }
                el.insert(&SparseVec::from_map(entries));
            }
        }
        let c = Arc::new(AlgebraComponent::with_monomials(n, self.mode, monomials, el.finish()));
        self.components.insert(n, c.clone());
        Ok(c)
    }

    pub fn dims(&mut self, n: usize) -> Result<DimTable> {
        Ok(self.component(n)?.dims.clone())
    }

    pub fn normal_form(&mut self, x: &AlgebraElement) -> Result<SparseVec> {
        self.component(x.vertices.len())?.normal_form(x)
    }

    /// Whether `x` lies in the ideal.
    pub fn vanishes(&mut self, x: &AlgebraElement) -> Result<bool> {
        Ok(self.normal_form(x)?.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphDifferential {
    /// `a ↦ b`, bidegree `(+1, 0)`.
    D,
    /// `b ↦ a`, bidegree `(-1, 0)`.
    DPrime,
}

impl GraphDifferential {
    fn source_target(self) -> (Color, Color) {
        match self {
            GraphDifferential::D => (A, B),
            GraphDifferential::DPrime => (B, A),
        }
    }
}

impl fmt::Display for GraphDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphDifferential::D => "d",
            GraphDifferential::DPrime => "d'",
        })
    }
}

/// Derivation applied letter by letter, sign `(-1)^(odd letters to the left)`.
pub fn differential_monomial(m: &GraphMonomial, which: GraphDifferential) -> Vec<(i64, GraphMonomial)> {
    let (src, tgt) = which.source_target();
    let mut out = Vec::new();
    let mut odd_before = 0;
    for (p, e) in m.edges.iter().enumerate() {
        if e.color == src {
            let mut edges = m.edges.clone();
            edges[p].color = tgt;
            out.push((if odd_before % 2 == 0 { 1 } else { -1 }, GraphMonomial { edges }));
        }
        if e.color.is_odd() {
            odd_before += 1;
        }
    }
    out
}

pub fn differential(x: &AlgebraElement, which: GraphDifferential) -> AlgebraElement {
    let mut out = AlgebraElement::zero(x.vertices.clone());
    for (m, c) in x.terms.iter() {
        for (s, t) in differential_monomial(m, which) {
            add_to(&mut out.terms, t, &(c * rat(s)));
        }
    }
    out
}

/// Relation instances on `1..=n` (as elements), followed by the reduced ideal rows.
fn ideal_elements(ws: &mut GraphWorkspace, n: usize) -> Result<Vec<(String, AlgebraElement)>> {
    let labels = standard_labels(n);
    let vertices: BTreeSet<Atom> = labels.iter().copied().collect();
    let mut out = Vec::new();
    for r in ws.presentation.instances(&labels) {
        out.push((r.to_string(), r.element(&vertices)?));
    }
    let comp = ws.component(n)?;
    let tr = Transport::new(labels);
    for (k, r) in comp.ideal_rows(&tr).enumerate() {
        out.push((format!("ideal row {k}"), r));
    }
    Ok(out)
}

/// `d² = d'² = 0`, the Laplacian `dd' + d'd` equals the weight, and both differentials
/// preserve the ideal, on `R({1..n})`.
pub fn differential_checks(ws: &mut GraphWorkspace, n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("algebra differentials", n);
    let comp = ws.component(n)?;
    let tr = Transport::new(standard_labels(n));
    let mut sq = [Check::new("d^2 = 0"), Check::new("d'^2 = 0")];
    let mut lap = Check::new("dd' + d'd = weight");
    for i in 0..comp.dim() {
        let x = comp.basis_element(i, &tr);
        for (k, which) in [GraphDifferential::D, GraphDifferential::DPrime].into_iter().enumerate() {
            let y = differential(&differential(&x, which), which);
            let ok = comp.normal_form(&y)?.is_zero();
            sq[k].case(ok, || format!("{which}^2({x}) = {y}"));
        }
        let mut l = differential(&differential(&x, GraphDifferential::DPrime), GraphDifferential::D);
        l.add_scaled(&Rational::one(), &differential(&differential(&x, GraphDifferential::D), GraphDifferential::DPrime))?;
        l.add_scaled(&-rat(comp.basis_bidegree(i).w as i64), &x)?;
        let ok = comp.normal_form(&l)?.is_zero();
        lap.case(ok, || format!("on {x}"));
    }
    let [s0, s1] = sq;
    report.push(s0);
    report.push(s1);
    report.push(lap);
    let ideal = ideal_elements(ws, n)?;
    for which in [GraphDifferential::D, GraphDifferential::DPrime] {
        let mut c = Check::new(format!("{which} preserves ideal"));
        for (name, r) in ideal.iter() {
            let y = differential(r, which);
            let ok = comp.normal_form(&y)?.is_zero();
            c.case(ok, || format!("{which}({name}) = {y} is not in the ideal"));
        }
        report.push(c);
    }
    Ok(report)
}

/// `Σ_σ a_{σi,σj} a_{σj,σk} b_{σk,σl}` over all permutations of the four labels.
pub fn sum_aab(labels: [Atom; 4]) -> AlgebraElement {
    sum_over_permutations(labels, [A, A, B])
}

/// `Σ_σ a_{σi,σj} b_{σj,σk} b_{σk,σl}` over all permutations of the four labels.
pub fn sum_abb(labels: [Atom; 4]) -> AlgebraElement {
    sum_over_permutations(labels, [A, B, B])
}

fn sum_over_permutations(labels: [Atom; 4], colors: [Color; 3]) -> AlgebraElement {
    let mut x = AlgebraElement::zero(labels.iter().copied().collect());
    for p in injections(&labels, 4) {
        let word: Vec<Letter> = (0..3).map(|k| letter(colors[k], p[k], p[k + 1])).collect();
        x.add_word(&Rational::one(), &word).expect("labels in set");
    }
    x
}

/// `Σ T_i^j` with `T_i^j = b_{i,j} a_{i,k} a_{i,l}` over ordered pairs of distinct labels.
pub fn sum_t(labels: [Atom; 4]) -> AlgebraElement {
    let mut x = AlgebraElement::zero(labels.iter().copied().collect());
    for p in injections(&labels, 2) {
        let rest: Vec<Atom> = labels.iter().copied().filter(|a| !p.contains(a)).collect();
        let word = [letter(B, p[0], p[1]), letter(A, p[0], rest[0]), letter(A, p[0], rest[1])];
        x.add_word(&Rational::one(), &word).expect("labels in set");
    }
    x
}

/// `∏_{k<n} (1 + k t)` as the list of coefficients of `t^0 .. t^(n-1)`.
pub fn arnold_series(n: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for k in 1..n as u64 {
        let mut next = vec![0u64; c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] += k * x;
        }
        c = next;
    }
    c
}

/// Structural checks on the algebras for vertex sets of size `1..=n`.
pub fn lemma_checks(limits: Limits, n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lemmas", n);
    let mut forest = GraphWorkspace::r(Mode::Forest, limits);
    let mut full = GraphWorkspace::r(Mode::Full, limits);
    if n >= 4 {
        let l = [Atom(1), Atom(2), Atom(3), Atom(4)];
        let comp = forest.component(4)?;
        for (name, x) in [
            ("sum of (aab) over permutations vanishes", sum_aab(l)),
            ("sum of (abb) over permutations vanishes", sum_abb(l)),
            ("sum of T vanishes", sum_t(l)),
        ] {
            let mut c = Check::new(name);
            let nf = comp.normal_form(&x)?;
            c.case(nf.is_zero(), || format!("normal form has {} nonzero coordinates", nf.nnz()));
            report.push(c.note(format!("{} free terms", x.terms.len())));
        }
    }
    let mut agree = Check::new("forest and full ambient give equal dims");
    let mut bound = Check::new("second degree at most |I|-1");
    for k in 1..=n {
        let (df, dl) = (forest.dims(k)?, full.dims(k)?);
        agree.case(df == dl, || format!("|I|={k}: forest {df}, full {dl}"));
        let max_w = dl.iter().map(|(d, _)| d.w as usize).max().unwrap_or(0);
        bound.case(max_w < k, || format!("|I|={k}: second degree {max_w}"));
        report.table(format!("R({k})"), df);
    }
    report.push(agree);
    report.push(bound);
    let mut arnold = Check::new("Arnold algebra Hilbert series");
    let mut af = GraphWorkspace::new(GraphPresentation::arnold(), Mode::Full, limits);
    let mut ar = GraphWorkspace::new(GraphPresentation::arnold(), Mode::Forest, limits);
    for k in 1..=n {
        let (dl, df) = (af.dims(k)?, ar.dims(k)?);
        let series: Vec<u64> = (0..k as u32).map(|d| dl.get(BiDegree::new(d, d)) as u64).collect();
        let want = arnold_series(k);
        arnold.case(series == want && dl.total() as u64 == want.iter().sum::<u64>() && dl == df, || {
            format!("|I|={k}: full {dl}, forest {df}, expected {want:?}")
        });
    }
    report.push(arnold);
    if n >= 4 {
        let mut without = GraphWorkspace::new(GraphPresentation::r_without_twelve_term(), Mode::Forest, limits);
        let (with_rank, without_rank) = (forest.component(4)?.ideal_rank(), without.component(4)?.ideal_rank());
        report.push(Check::new("twelve-term relations at |I|=4 (informational)").note(format!(
            "ideal rank {with_rank} with, {without_rank} without"
        )));
    }
    Ok(report)
}
