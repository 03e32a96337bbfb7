//! The Ramanujan operad and its sub-operads, with the Hopf coproduct and the two
//! differentials.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::atom::{standard_labels, Atom, Transport};
use crate::bidegree::{koszul, BiDegree, DimTable};
use crate::component::{Component, OperadWorkspace};
use crate::error::{Error, Limits, Result};
use crate::linear::{rat, Rational, SparseVec};
use crate::operad::{add_to, Generator, OperadElement, Presentation, Tree, E, L, OMEGA};
use crate::report::{Check, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Which {
    Com,
    Lie,
    SGriess,
    LieGriess,
    Poisson,
    Bessel,
    Ram,
}

impl Which {
    pub const ALL: [Which; 7] = [
        Which::Com,
        Which::Lie,
        Which::SGriess,
        Which::LieGriess,
        Which::Poisson,
        Which::Bessel,
        Which::Ram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Which::Com => "com",
            Which::Lie => "lie",
            Which::SGriess => "sgriess",
            Which::LieGriess => "liegriess",
            Which::Poisson => "poisson",
            Which::Bessel => "bessel",
            Which::Ram => "ram",
        }
    }
}

impl FromStr for Which {
    type Err = Error;
    fn from_str(s: &str) -> Result<Which> {
        Which::ALL
            .iter()
            .copied()
            .find(|w| w.name() == s)
            .ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const I: Atom = Atom(1);
const J: Atom = Atom(2);
const K: Atom = Atom(3);

/// `outer_{a,★} ∘_★ inner_{b,c}`.
fn comp(outer: Generator, a: Atom, inner: Generator, b: Atom, c: Atom) -> OperadElement {
    let o = OperadElement::generator(outer, a, Atom::STAR).expect("distinct labels");
    let i = OperadElement::generator(inner, b, c).expect("distinct labels");
    o.compose(Atom::STAR, &i).expect("disjoint labels")
}

fn sum(parts: &[(i64, OperadElement)]) -> OperadElement {
    let mut out = OperadElement::zero(parts[0].1.labels.clone());
    for (c, x) in parts {
        out.add_scaled(&rat(*c), x).expect("same labels");
    }
    out
}

fn cyclic(f: impl Fn(Atom, Atom, Atom) -> OperadElement) -> OperadElement {
    sum(&[(1, f(I, J, K)), (1, f(J, K, I)), (1, f(K, I, J))])
}

pub fn jacobi() -> OperadElement {
    cyclic(|i, j, k| comp(L, i, L, j, k))
}

pub fn mixte() -> OperadElement {
    cyclic(|i, j, k| sum(&[(1, comp(OMEGA, i, L, j, k)), (1, comp(L, i, OMEGA, j, k))]))
}

pub fn associatif() -> OperadElement {
    sum(&[(1, comp(E, I, E, J, K)), (-1, comp(E, J, E, K, I))])
}

pub fn leibniz() -> OperadElement {
    distributive(L)
}

pub fn bessel() -> OperadElement {
    distributive(OMEGA)
}

fn distributive(g: Generator) -> OperadElement {
    sum(&[(1, comp(g, I, E, J, K)), (-1, comp(E, J, g, I, K)), (-1, comp(E, K, g, I, J))])
}

pub fn presentation(which: Which) -> Presentation {
    let (generators, relations): (Vec<Generator>, Vec<(&'static str, OperadElement)>) = match which {
        Which::Com => (vec![E], vec![("associatif", associatif())]),
        Which::Lie => (vec![L], vec![("jacobi", jacobi())]),
        Which::SGriess => (vec![OMEGA], vec![]),
        Which::LieGriess => (vec![L, OMEGA], vec![("jacobi", jacobi()), ("mixte", mixte())]),
        Which::Poisson => (
            vec![E, L],
            vec![("associatif", associatif()), ("jacobi", jacobi()), ("leibniz", leibniz())],
        ),
        Which::Bessel => (vec![E, OMEGA], vec![("associatif", associatif()), ("bessel", bessel())]),
        Which::Ram => (
            vec![E, L, OMEGA],
            vec![
                ("associatif", associatif()),
                ("jacobi", jacobi()),
                ("mixte", mixte()),
                ("leibniz", leibniz()),
                ("bessel", bessel()),
            ],
        ),
    };
    Presentation {
        name: which.name(),
        generators,
        relations,
    }
}

pub fn workspace(which: Which, limits: Limits) -> OperadWorkspace {
    OperadWorkspace::new(presentation(which), limits)
}

/// Bigraded dimensions of `Ram({1..n})`.
pub fn ram_dims(n: usize, limits: Limits) -> Result<DimTable> {
    workspace(Which::Ram, limits).dims(n)
}

/// Every relation instance on the given three labels.
pub fn relation_instances(p: &Presentation, labels: [Atom; 3]) -> Result<Vec<(&'static str, OperadElement)>> {
    let mut out = Vec::new();
    for perm in PERMS3 {
        let phi: BTreeMap<Atom, Atom> = (0..3).map(|k| (Atom(k as u32 + 1), labels[perm[k]])).collect();
        for (name, r) in p.relations.iter() {
            out.push((*name, r.relabel(&phi)?));
        }
    }
    Ok(out)
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn generator_coproduct(g: Generator) -> Result<&'static [(Generator, Generator)]> {
    match g.symbol {
        'E' => Ok(&[(E, E)]),
        'L' => Ok(&[(E, L), (L, E)]),
        'Ω' => Ok(&[(E, OMEGA), (OMEGA, E)]),
        _ => Err(Error::InvalidArgument(format!("no coproduct for generator {}", g.symbol))),
    }
}

/// Coproduct of a tree monomial: at each vertex choose a term of the generator
/// coproduct; collecting the left factors in front of the right ones costs
/// `(-1)^(h(right_k) h(left_l))` for every pair of vertices `k < l` in preorder.
pub fn coproduct_tree(t: &Tree) -> Result<Vec<(i64, Tree, Tree)>> {
    let gens = t.preorder();
    let opts: Vec<&[(Generator, Generator)]> =
        gens.iter().map(|g| generator_coproduct(*g)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let left: Vec<Generator> = choice.iter().zip(opts.iter()).map(|(c, o)| o[*c].0).collect();
        let right: Vec<Generator> = choice.iter().zip(opts.iter()).map(|(c, o)| o[*c].1).collect();
        let mut sign = 1;
        for (k, r) in right.iter().enumerate() {
            for l in left[k + 1..].iter() {
                sign *= koszul(r.bidegree, l.bidegree);
            }
        }
        out.push((sign, t.with_generators(&left), t.with_generators(&right)));
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(out);
            }
            choice[pos] += 1;
            if choice[pos] < opts[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Element of `P(I) ⊗ P(I)` on tree monomials.
pub type Tensor2 = BTreeMap<(Tree, Tree), Rational>;

pub fn coproduct(x: &OperadElement) -> Result<Tensor2> {
    let mut out = Tensor2::new();
    for (t, c) in x.terms.iter() {
        for (s, l, r) in coproduct_tree(t)? {
            add_to(&mut out, (l, r), &(c * rat(s)));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Differential {
    /// Ω ↦ L, bidegree (−1, 0).
    D,
    /// L ↦ Ω, bidegree (+1, 0).
    DPrime,
}

impl Differential {
    fn on_generator(self, g: Generator) -> Option<Generator> {
        match (self, g.symbol) {
            (Differential::D, 'Ω') => Some(L),
            (Differential::DPrime, 'L') => Some(OMEGA),
            _ => None,
        }
    }
}

/// Derivation through the tree: acting at a vertex costs `(-1)^h` of the generators
/// preceding it in preorder.
pub fn differential_tree(t: &Tree, which: Differential) -> Vec<(i64, Tree)> {
    let gens = t.preorder();
    let mut out = Vec::new();
    let mut before = BiDegree::ZERO;
    for (p, g) in gens.iter().enumerate() {
        if let Some(g2) = which.on_generator(*g) {
            let mut gs = gens.clone();
            gs[p] = g2;
            let sign = if before.is_odd() { -1 } else { 1 };
            out.push((sign, t.with_generators(&gs)));
        }
        before = before + g.bidegree;
    }
    out
}

pub fn differential(x: &OperadElement, which: Differential) -> OperadElement {
    let mut out = OperadElement::zero(x.labels.clone());
    for (t, c) in x.terms.iter() {
        for (s, u) in differential_tree(t, which) {
            out.add_canonical(&(c * rat(s)), u);
        }
    }
    out
}

/// Normal forms of single monomials in one component on standard labels, memoized.
struct TreeNf<'a> {
    comp: &'a Component,
    memo: BTreeMap<Tree, SparseVec>,
}

impl<'a> TreeNf<'a> {
    fn new(comp: &'a Component) -> Self {
        TreeNf {
            comp,
            memo: BTreeMap::new(),
        }
    }

    fn of(&mut self, t: &Tree) -> SparseVec {
        if let Some(v) = self.memo.get(t) {
            return v.clone();
        }
        let col = self.comp.column(t).expect("monomial on standard labels");
        let v = self.comp.quotient.coordinates(&SparseVec::unit(col));
        self.memo.insert(t.clone(), v.clone());
        v
    }

    fn element(&mut self, x: &OperadElement) -> SparseVec {
        let mut out = SparseVec::new();
        for (t, c) in x.terms.iter() {
            out.axpy(c, &self.of(t));
        }
        out
    }

    fn tensor2(&mut self, x: &Tensor2) -> BTreeMap<(usize, usize), Rational> {
        let mut out = BTreeMap::new();
        for ((l, r), c) in x.iter() {
            let (a, b) = (self.of(l), self.of(r));
            for (i, x) in a.iter() {
                for (j, y) in b.iter() {
                    add_to(&mut out, (*i, *j), &(c * x * y));
                }
            }
        }
        out
    }

    fn tensor3(&mut self, x: &BTreeMap<(Tree, Tree, Tree), Rational>) -> BTreeMap<(usize, usize, usize), Rational> {
        let mut out = BTreeMap::new();
        for ((l, m, r), c) in x.iter() {
            let (a, b, d) = (self.of(l), self.of(m), self.of(r));
            for (i, x) in a.iter() {
                for (j, y) in b.iter() {
                    for (k, z) in d.iter() {
                        add_to(&mut out, (*i, *j, *k), &(c * x * y * z));
                    }
                }
            }
        }
        out
    }
}

/// Relation instances on `{1,2,3}` followed by the reduced ideal rows on `{1..n}`.
fn ideal_elements(ws: &mut OperadWorkspace, n: usize) -> Result<Vec<(String, OperadElement)>> {
    let mut out: Vec<(String, OperadElement)> = Vec::new();
    if n < 3 {
        return Ok(out);
    }
    let labels = standard_labels(n);
    if n == 3 {
        for (name, r) in relation_instances(&ws.presentation, [labels[0], labels[1], labels[2]])? {
            out.push((name.to_string(), r));
        }
    }
    let comp = ws.component(n)?;
    let tr = Transport::new(labels.iter().copied());
    for (k, r) in comp.ideal_rows(&tr).enumerate() {
        out.push((format!("ideal row {k}"), r));
    }
    Ok(out)
}

/// Hopf structure checks on `Ram({1..n})`: the coproduct kills the ideal, is
/// coassociative on the basis, and both differentials are coderivations.
pub fn hopf_check(ws: &mut OperadWorkspace, n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("hopf", n);
    let comp = ws.component(n)?;
    let ideal = ideal_elements(ws, n)?;
    let mut nf = TreeNf::new(&comp);

    let mut kill = Check::new("coproduct kills relations");
    for (name, r) in ideal.iter() {
        let v = nf.tensor2(&coproduct(r)?);
        kill.case(v.is_empty(), || format!("Δ({name}) = Δ({r}) ≠ 0"));
    }
    report.push(kill);

    let basis: Vec<Tree> = comp.basis_trees().cloned().collect();
    let mut coassoc = Check::new("coproduct coassociative");
    for t in basis.iter() {
        let mut lhs = BTreeMap::new();
        let mut rhs = BTreeMap::new();
        for (s, a, b) in coproduct_tree(t)? {
            for (s2, a1, a2) in coproduct_tree(&a)? {
                add_to(&mut lhs, (a1, a2, b.clone()), &rat(s * s2));
            }
            for (s2, b1, b2) in coproduct_tree(&b)? {
                add_to(&mut rhs, (a.clone(), b1, b2), &rat(s * s2));
            }
        }
        let ok = nf.tensor3(&lhs) == nf.tensor3(&rhs);
        coassoc.case(ok, || format!("(Δ⊗id)Δ ≠ (id⊗Δ)Δ on {t}"));
    }
    report.push(coassoc);

    for (which, name) in [(Differential::D, "D coderivation"), (Differential::DPrime, "D' coderivation")] {
        let mut chk = Check::new(name);
        for t in basis.iter() {
            let x = single(t);
            let lhs = nf.tensor2(&coproduct(&differential(&x, which))?);
            let mut rhs_raw = Tensor2::new();
            for (s, a, b) in coproduct_tree(t)? {
                for (s2, da) in differential_tree(&a, which) {
                    add_to(&mut rhs_raw, (da, b.clone()), &rat(s * s2));
                }
                let ka = if a.bidegree().is_odd() { -1 } else { 1 };
                for (s2, db) in differential_tree(&b, which) {
                    add_to(&mut rhs_raw, (a.clone(), db), &rat(s * s2 * ka));
                }
            }
            let rhs = nf.tensor2(&rhs_raw);
            chk.case(lhs == rhs, || format!("Δ∘{which:?} ≠ ({which:?}⊗id + id⊗{which:?})∘Δ on {t}"));
        }
        report.push(chk);
    }
    Ok(report)
}

fn single(t: &Tree) -> OperadElement {
    let mut x = OperadElement::zero(t.label_set());
    x.add_canonical(&rat(1), t.clone());
    x
}

/// Differential identities on `Ram({1..n})`: squares vanish, the anticommutator acts
/// by the weight, and both differentials preserve the ideal.
pub fn differential_checks(ws: &mut OperadWorkspace, n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("differentials.operad", n);
    let comp = ws.component(n)?;
    let ideal = ideal_elements(ws, n)?;
    let mut nf = TreeNf::new(&comp);
    let basis: Vec<Tree> = comp.basis_trees().cloned().collect();

    for (which, name) in [(Differential::D, "D^2 = 0"), (Differential::DPrime, "D'^2 = 0")] {
        let mut chk = Check::new(name);
        for t in basis.iter() {
            let dd = differential(&differential(&single(t), which), which);
            chk.case(nf.element(&dd).is_zero(), || format!("{name} fails on {t}"));
        }
        report.push(chk);
    }

    let mut lap = Check::new("DD' + D'D = weight");
    for (i, t) in basis.iter().enumerate() {
        let x = single(t);
        let mut y = differential(&differential(&x, Differential::DPrime), Differential::D);
        y.add(&differential(&differential(&x, Differential::D), Differential::DPrime))?;
        let mut expect = SparseVec::unit(i);
        expect.scale(&rat(t.bidegree().w as i64));
        lap.case(nf.element(&y) == expect, || format!("Laplacian on {t} is not {}", t.bidegree().w));
    }
    report.push(lap);

    for (which, name) in [(Differential::D, "D preserves ideal"), (Differential::DPrime, "D' preserves ideal")] {
        let mut chk = Check::new(name);
        for (label, r) in ideal.iter() {
            let v = nf.element(&differential(r, which));
            chk.case(v.is_zero(), || format!("{which:?}({label}) ∉ ideal: {r}"));
        }
        report.push(chk);
    }
    Ok(report)
}

/// Set partitions of `{0..n}` as block lists, by restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// `dim Ram(n)` against the sum over set partitions of products of `LieGriess` blocks.
pub fn distributive_check(limits: Limits, n: usize) -> Result<(Check, DimTable, DimTable)> {
    let direct = workspace(Which::Ram, limits).dims(n)?;
    let mut lg = workspace(Which::LieGriess, limits);
    let mut via = DimTable::new();
    for p in set_partitions(n) {
        let mut prod = DimTable::from_pairs([((0, 0), 1)]);
        for b in p.iter() {
            prod = prod.convolve(&lg.dims(b.len())?);
        }
        for (d, k) in prod.iter() {
            via.add(d, k);
        }
    }
    let mut chk = Check::new("distributive law factorization");
    chk.case(direct == via, || format!("direct {direct} vs partitions {via}"));
    Ok((chk, direct, via))
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Differential::D => f.write_str("D"),
            Differential::DPrime => f.write_str("D'"),
        }
    }
}
