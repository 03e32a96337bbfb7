//! Quotient components of an operad given by a binary quadratic presentation.
//!
//! Components are computed once on the standard labels `1..=n` and transported to
//! other label sets through the order-preserving bijection.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::One;

use crate::atom::{standard_labels, Atom, Transport};
use crate::bidegree::{BiDegree, DimTable};
use crate::error::{Error, Limits, Result};
use crate::linear::{Echelon, Eliminator, QuotientBasis, Rational, SparseVec};
use crate::operad::{enumerate_tree_monomials, format_labels, OperadElement, Presentation, Tree};

#[derive(Clone, Debug)]
pub struct Component {
    pub n: usize,
    /// Free monomials on `1..=n`, in column order.
    pub monomials: Vec<Tree>,
    index: BTreeMap<Tree, usize>,
    pub quotient: QuotientBasis,
    pub dims: DimTable,
}

impl Component {
    fn new(presentation: &Presentation, n: usize, reducer: Echelon) -> Self {
        let monomials = enumerate_tree_monomials(&presentation.generators, &standard_labels(n), None);
        Self::with_monomials(n, monomials, reducer)
    }

    fn with_monomials(n: usize, monomials: Vec<Tree>, reducer: Echelon) -> Self {
        let index = monomials.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let quotient = QuotientBasis::from_echelon(reducer);
        let mut dims = DimTable::new();
        for &c in quotient.basis.iter() {
            dims.add(monomials[c].bidegree(), 1);
        }
        Component {
            n,
            monomials,
            index,
            quotient,
            dims,
        }
    }

    /// Rebuilds a component from a stored reducer (cache files).
    pub fn from_reducer(presentation: &Presentation, n: usize, reducer: Echelon) -> Result<Self> {
        let c = Component::new(presentation, n, reducer);
        if c.quotient.reducer.ncols != c.monomials.len() {
            return Err(Error::InvalidArgument(format!(
                "stored reducer has {} columns, expected {}",
                c.quotient.reducer.ncols,
                c.monomials.len()
            )));
        }
        Ok(c)
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

    pub fn basis_tree(&self, i: usize) -> &Tree {
        &self.monomials[self.quotient.basis[i]]
    }

    pub fn basis_trees(&self) -> impl Iterator<Item = &Tree> + '_ {
        self.quotient.basis.iter().map(move |c| &self.monomials[*c])
    }

    pub fn basis_bidegree(&self, i: usize) -> BiDegree {
        self.basis_tree(i).bidegree()
    }

    /// Basis element `i` on the given label set.
    pub fn basis_element(&self, i: usize, labels: &Transport) -> OperadElement {
        let t = self.basis_tree(i).map_atoms(|a| labels.from_standard(a));
        let mut x = OperadElement::zero(labels.labels().iter().copied().collect());
        x.add_canonical(&Rational::one(), t);
        x
    }

    pub fn column(&self, t: &Tree) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Coordinates in the free component, after moving to standard labels.
    pub fn ambient_vector(&self, x: &OperadElement) -> Result<SparseVec> {
        if x.labels.len() != self.n {
            return Err(Error::LabelMismatch(format_labels(&x.labels)));
        }
        let tr = Transport::new(x.labels.iter().copied());
        let mut entries = Vec::with_capacity(x.terms.len());
        for (t, c) in x.terms.iter() {
            let s = t.map_atoms(|a| tr.to_standard(a).expect("label in set"));
            let col = self
                .index
                .get(&s)
                .ok_or_else(|| Error::InvalidArgument(format!("{t} is not a monomial of this presentation")))?;
            entries.push((*col, c.clone()));
        }
        Ok(SparseVec::from_entries(entries))
    }

    /// Coordinates of `x` on the quotient basis. Linear, and zero exactly on the ideal.
    pub fn normal_form(&self, x: &OperadElement) -> Result<SparseVec> {
        Ok(self.quotient.coordinates(&self.ambient_vector(x)?))
    }

    /// Reduced spanning rows of the ideal, on the given label set.
    pub fn ideal_rows<'a>(&'a self, labels: &'a Transport) -> impl Iterator<Item = OperadElement> + 'a {
        self.quotient.reducer.rows().iter().map(move |row| self.element_of(row, labels))
    }

    pub fn element_of(&self, v: &SparseVec, labels: &Transport) -> OperadElement {
        let mut x = OperadElement::zero(labels.labels().iter().copied().collect());
        for (c, coef) in v.iter() {
            x.add_canonical(coef, self.monomials[*c].map_atoms(|a| labels.from_standard(a)));
        }
        x
    }

    /// Element with the given coordinates on the quotient basis.
    pub fn from_coordinates(&self, v: &SparseVec, labels: &Transport) -> OperadElement {
        let ambient = SparseVec::from_entries(v.iter().map(|(i, c)| (self.quotient.basis[*i], c.clone())));
        self.element_of(&ambient, labels)
    }
}

/// Lazily computed components of one presentation, keyed by arity.
#[derive(Clone, Debug)]
pub struct OperadWorkspace {
    pub presentation: Presentation,
    pub limits: Limits,
    components: BTreeMap<usize, Arc<Component>>,
}

impl OperadWorkspace {
    pub fn new(presentation: Presentation, limits: Limits) -> Self {
        OperadWorkspace {
            presentation,
            limits,
            components: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, c: Component) {
        self.components.insert(c.n, Arc::new(c));
    }

    pub fn cached(&self) -> impl Iterator<Item = &Arc<Component>> {
        self.components.values()
    }

    pub fn component(&mut self, n: usize) -> Result<Arc<Component>> {
        if n == 0 {
            return Err(Error::InvalidArgument("empty label set".into()));
        }
        if let Some(c) = self.components.get(&n) {
            return Ok(c.clone());
        }
        self.limits.check_arity(
            n,
            format!("computed arities {:?}", self.components.keys().collect::<Vec<_>>()),
        )?;
        for k in 1..n {
            self.component(k)?;
        }
        let monomials = enumerate_tree_monomials(&self.presentation.generators, &standard_labels(n), None);
        let index: BTreeMap<Tree, usize> = monomials.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut el = Eliminator::new(monomials.len());
        let mut rows = 0usize;
        let lower = self.components.clone();
        let mut feed = |x: OperadElement| -> Result<()> {
            rows += 1;
            if rows > self.limits.max_rows {
                return Err(Error::ResourceBound {
                    what: "spanning rows",
                    requested: rows,
                    limit: self.limits.max_rows,
                    progress: format!("arity {n}, rank so far {}", el.rank()),
                });
            }
            let v = SparseVec::from_entries(x.terms.iter().map(|(t, c)| (index[t], c.clone())));
            el.insert(&v);
            Ok(())
        };
        ideal_span_with(&self.presentation, &lower, n, &mut feed)?;
        let c = Component::with_monomials(n, monomials, el.finish());
        let c = Arc::new(c);
        self.components.insert(n, c.clone());
        Ok(c)
    }

    /// Bigraded dimensions of the quotient on `n` labels.
    pub fn dims(&mut self, n: usize) -> Result<DimTable> {
        Ok(self.component(n)?.dims.clone())
    }

    /// Normal form of `x`, on the component of its arity.
    pub fn normal_form(&mut self, x: &OperadElement) -> Result<SparseVec> {
        self.component(x.labels.len())?.normal_form(x)
    }

    /// Spanning set of the ideal on `labels`, built recursively from lower arities.
    pub fn ideal_span(&mut self, labels: &[Atom]) -> Result<Vec<OperadElement>> {
        let tr = Transport::new(labels.iter().copied());
        let n = tr.len();
        for k in 1..n {
            self.component(k)?;
        }
        let mut out = Vec::new();
        ideal_span_with(&self.presentation, &self.components, n, &mut |x| {
            out.push(x);
            Ok(())
        })?;
        out.iter()
            .map(|x| x.relabel(&(1..=n as u32).map(|k| (Atom(k), tr.from_standard(Atom(k)))).collect()))
            .collect()
    }
}

/// Spanning set of the ideal component on `1..=n`:
/// (i) `g(r, m)` with `r` a reduced ideal row on the block holding label 1 and `m` any
/// free monomial on the other block, and `g(b, r)` with `b` a quotient-basis monomial;
/// (ii) every relation with quotient-basis monomials grafted into its three inputs.
/// Both restrictions to quotient-basis monomials lose nothing: the difference lies in
/// the span of (i).
fn ideal_span_with(
    p: &Presentation,
    lower: &BTreeMap<usize, Arc<Component>>,
    n: usize,
    feed: &mut dyn FnMut(OperadElement) -> Result<()>,
) -> Result<()> {
    if n < 3 {
        return Ok(());
    }
    let labels = standard_labels(n);
    let all: BTreeSet<Atom> = labels.iter().copied().collect();
    let comp = |k: usize| lower.get(&k).expect("lower arities computed first");

    // (i) relation below the root
    let rest = &labels[1..];
    for mask in 0..(1u64 << rest.len()) - 1 {
        let mut left = alloc::vec![labels[0]];
        let mut right = Vec::new();
        for (k, a) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                left.push(*a);
            } else {
                right.push(*a);
            }
        }
        let lt = Transport::new(left.iter().copied());
        let rt = Transport::new(right.iter().copied());
        let (cl, cr) = (comp(left.len()), comp(right.len()));
        for g in p.generators.iter() {
            if left.len() >= 3 {
                for row in cl.ideal_rows(&lt) {
                    for m in cr.monomials.iter() {
                        let m = m.map_atoms(|a| rt.from_standard(a));
                        let mut x = OperadElement::zero(all.clone());
                        for (t, c) in row.terms.iter() {
                            x.add_canonical(c, Tree::node(*g, t.clone(), m.clone()));
                        }
                        feed(x)?;
                    }
                }
            }
            if right.len() >= 3 {
                for b in cl.basis_trees() {
                    let b = b.map_atoms(|a| lt.from_standard(a));
                    for row in cr.ideal_rows(&rt) {
                        let mut x = OperadElement::zero(all.clone());
                        for (t, c) in row.terms.iter() {
                            x.add_canonical(c, Tree::node(*g, b.clone(), t.clone()));
                        }
                        feed(x)?;
                    }
                }
            }
        }
    }

    // (ii) relation at the root
    let slots: BTreeMap<Atom, Atom> = (0..3).map(|k| (Atom(k + 1), Atom::slot(k))).collect();
    let relations: Vec<OperadElement> =
        p.relations.iter().map(|(_, r)| r.relabel(&slots)).collect::<Result<_>>()?;
    for blocks in ordered_partitions(&labels, 3) {
        let bases: Vec<Vec<OperadElement>> = blocks
            .iter()
            .map(|b| {
                let tr = Transport::new(b.iter().copied());
                let c = comp(b.len());
                (0..c.dim()).map(|i| c.basis_element(i, &tr)).collect()
            })
            .collect();
        for r in relations.iter() {
            for m0 in bases[0].iter() {
                let x0 = r.compose(Atom::slot(0), m0)?;
                for m1 in bases[1].iter() {
                    let x1 = x0.compose(Atom::slot(1), m1)?;
                    for m2 in bases[2].iter() {
                        feed(x1.compose(Atom::slot(2), m2)?)?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Ordered partitions of `labels` into `k` nonempty blocks.
pub fn ordered_partitions(labels: &[Atom], k: usize) -> Vec<Vec<Vec<Atom>>> {
    let n = labels.len();
    let mut out = Vec::new();
    let total = k.pow(n as u32);
    for code in 0..total {
        let mut blocks = alloc::vec![Vec::new(); k];
        let mut c = code;
        for a in labels {
            blocks[c % k].push(*a);
            c /= k;
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(blocks);
        }
    }
    out
}

/// Direct spanning set `c ∘_★ r(m1, m2, m3)` over all contexts `c` and all free
/// monomials. Independent of the recursion above; used to cross-check it.
pub fn ideal_span_direct(p: &Presentation, labels: &[Atom]) -> Result<Vec<OperadElement>> {
    let slots: BTreeMap<Atom, Atom> = (0..3).map(|k| (Atom(k + 1), Atom::slot(k))).collect();
    let relations: Vec<OperadElement> =
        p.relations.iter().map(|(_, r)| r.relabel(&slots)).collect::<Result<_>>()?;
    let n = labels.len();
    let mut out = Vec::new();
    for mask in 0u64..(1 << n) {
        let inside: Vec<Atom> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| labels[k]).collect();
        if inside.len() < 3 {
            continue;
        }
        let mut outside: Vec<Atom> = (0..n).filter(|k| mask >> k & 1 == 0).map(|k| labels[k]).collect();
        let contexts = if outside.is_empty() {
            Vec::new()
        } else {
            outside.push(Atom::STAR);
            enumerate_tree_monomials(&p.generators, &outside, None)
        };
        for blocks in ordered_partitions(&inside, 3) {
            let mons: Vec<Vec<Tree>> =
                blocks.iter().map(|b| enumerate_tree_monomials(&p.generators, b, None)).collect();
            for r in relations.iter() {
                for m0 in mons[0].iter() {
                    let x0 = r.compose(Atom::slot(0), &OperadElement::from_tree(m0)?)?;
                    for m1 in mons[1].iter() {
                        let x1 = x0.compose(Atom::slot(1), &OperadElement::from_tree(m1)?)?;
                        for m2 in mons[2].iter() {
                            let x2 = x1.compose(Atom::slot(2), &OperadElement::from_tree(m2)?)?;
                            if contexts.is_empty() {
                                out.push(x2);
                            } else {
                                for c in contexts.iter() {
                                    out.push(OperadElement::from_tree(c)?.compose(Atom::STAR, &x2)?);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
