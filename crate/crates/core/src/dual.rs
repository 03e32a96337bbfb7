//! The dual operad `R*`, whose composition is the transpose of `Θ`, and the morphism
//! `ρ : Ram → R*` sending `E ↦ 1*`, `L ↦ a*`, `Ω ↦ b*`.
//!
//! Forms are stored by their values on the chosen monomial basis of `R(I)`. The
//! pairing of a tensor of forms with a tensor of elements is
//! `⟨f ⊗ g, u ⊗ v⟩ = (-1)^{h(g) h(u)} f(u) g(v)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::atom::{standard_labels, Atom, Transport};
use crate::bidegree::{BiDegree, DimTable};
use crate::component::OperadWorkspace;
use crate::cooperad::{Cocomposition, Coords2, TensorReducer};
use crate::error::{Error, Limits, Result};
use crate::graph::{differential as graph_differential, letter, GraphDifferential, GraphMonomial, GraphWorkspace, Mode, A, B};
use crate::linear::{rat, Eliminator, Rational, SparseVec};
use crate::operad::{format_labels, Generator, OperadElement, Tree};
use crate::ram::{self, coproduct, differential, Differential, Which};
use crate::ramanujan::predicted_dims;
use crate::report::{Check, SuiteReport};

/// Element of `R*(I)`: values on the basis of `R(I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub labels: BTreeSet<Atom>,
    pub coords: SparseVec,
}

impl LinearForm {
    pub fn zero(labels: BTreeSet<Atom>) -> Self {
        LinearForm {
            labels,
            coords: SparseVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &LinearForm) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(format_labels(&other.labels)));
        }
        self.coords.axpy(c, &other.coords);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualGenerator {
    One,
    AStar(Atom, Atom),
    BStar(Atom, Atom),
}

/// Components of `R`, `Ram`, cached images of `Θ`, and cached values of `ρ`.
pub struct DualWorkspace {
    pub r: GraphWorkspace,
    pub ram: OperadWorkspace,
    thetas: BTreeMap<Cocomposition, Arc<Vec<Coords2>>>,
    rho_trees: BTreeMap<Tree, LinearForm>,
}

impl DualWorkspace {
    pub fn new(limits: Limits) -> Self {
        DualWorkspace {
            r: GraphWorkspace::r(Mode::Forest, limits),
            ram: ram::workspace(Which::Ram, limits),
            thetas: BTreeMap::new(),
            rho_trees: BTreeMap::new(),
        }
    }

    /// Values of `f` on an element of `R(I)`.
    pub fn evaluate(&mut self, f: &LinearForm, x: &crate::graph::AlgebraElement) -> Result<Rational> {
        if f.labels != x.vertices {
            return Err(Error::LabelMismatch(format_labels(&x.vertices)));
        }
        Ok(self.r.normal_form(x)?.dot(&f.coords))
    }

    pub fn dual_basis_element(&mut self, labels: &BTreeSet<Atom>, which: DualGenerator) -> Result<LinearForm> {
        let comp = self.r.component(labels.len())?;
        let tr = Transport::new(labels.iter().copied());
        let word = match which {
            DualGenerator::One => Vec::new(),
            DualGenerator::AStar(i, j) => alloc::vec![letter(A, i, j)],
            DualGenerator::BStar(i, j) => alloc::vec![letter(B, i, j)],
        };
        for l in word.iter() {
            for a in [l.i, l.j] {
                if !labels.contains(&a) {
                    return Err(Error::LabelMismatch(format!("{a} not in {}", format_labels(labels))));
                }
            }
        }
        let (s, m) = GraphMonomial::from_word(&word).ok_or(Error::InvalidArgument(format!("{which:?}")))?;
        let nf = comp.monomial_normal_form(&m, &tr)?;
        // a generator monomial is itself a basis element; its dual is read off directly
        let (i, c) = match nf.iter().next() {
            Some((i, c)) if nf.nnz() == 1 && c.is_one() => (*i, c.clone()),
            _ => return Err(Error::InvalidArgument(format!("{m} is not a basis monomial"))),
        };
        Ok(LinearForm {
            labels: labels.clone(),
            coords: SparseVec::from_entries([(i, c * rat(s))]),
        })
    }

    fn theta_images(&mut self, co: &Cocomposition) -> Result<Arc<Vec<Coords2>>> {
        if let Some(t) = self.thetas.get(co) {
            return Ok(t.clone());
        }
        let source = co.source();
        let comp = self.r.component(source.len())?;
        let tr = Transport::new(source.iter().copied());
        let (l, r) = (co.target_left(), co.right.clone());
        let mut images = Vec::with_capacity(comp.dim());
        for b in 0..comp.dim() {
            let t = co.apply(&comp.basis_element(b, &tr))?;
            images.push(TensorReducer::new(&mut self.r).reduce2(&t, &l, &r)?);
        }
        let images = Arc::new(images);
        self.thetas.insert(co.clone(), images.clone());
        Ok(images)
    }

    /// `f ∘_slot g`, with `⟨f ∘ g, x⟩ = Σ (-1)^{h(g) h(u)} f(u) g(v)` over `Θ(x) = Σ u ⊗ v`.
    pub fn dual_compose(&mut self, f: &LinearForm, slot: Atom, g: &LinearForm) -> Result<LinearForm> {
        if !f.labels.contains(&slot) {
            return Err(Error::MissingSlot(slot));
        }
        let left: BTreeSet<Atom> = f.labels.iter().copied().filter(|a| *a != slot).collect();
        let co = Cocomposition::new(left, g.labels.clone(), slot)?;
        let images = self.theta_images(&co)?;
        let lc = self.r.component(f.labels.len())?;
        let rc = self.r.component(g.labels.len())?;
        let mut entries = Vec::new();
        for (b, img) in images.iter().enumerate() {
            let mut val = Rational::zero();
            for ((p, q), c) in img.iter() {
                let (fp, gq) = (f.coords.get(*p), g.coords.get(*q));
                if fp.is_zero() || gq.is_zero() {
                    continue;
                }
                let s = if lc.basis_bidegree(*p).is_odd() && rc.basis_bidegree(*q).is_odd() { -1 } else { 1 };
                val += c * fp * gq * rat(s);
            }
            entries.push((b, val));
        }
        Ok(LinearForm {
            labels: co.source(),
            coords: SparseVec::from_entries(entries),
        })
    }

    fn generator_form(&mut self, g: Generator, i: Atom, j: Atom) -> Result<LinearForm> {
        let which = match g.symbol {
            'E' => DualGenerator::One,
            'L' => DualGenerator::AStar(i, j),
            'Ω' => DualGenerator::BStar(i, j),
            _ => return Err(Error::InvalidArgument(format!("no image for generator {}", g.symbol))),
        };
        self.dual_basis_element(&[i, j].into_iter().collect(), which)
    }

    /// `ρ` of a tree monomial, read as `g(★, #) ∘_★ A ∘_# B` at every vertex.
    pub fn rho_tree(&mut self, t: &Tree) -> Result<LinearForm> {
        if let Some(f) = self.rho_trees.get(t) {
            return Ok(f.clone());
        }
        let f = match t {
            Tree::Leaf(a) => self.dual_basis_element(&[*a].into_iter().collect(), DualGenerator::One)?,
            Tree::Node(node) => {
                let g = self.generator_form(node.gen, Atom::STAR, Atom::HASH)?;
                let fa = self.rho_tree(&node.left)?;
                let fb = self.rho_tree(&node.right)?;
                let h = self.dual_compose(&g, Atom::STAR, &fa)?;
                self.dual_compose(&h, Atom::HASH, &fb)?
            }
        };
        self.rho_trees.insert(t.clone(), f.clone());
        Ok(f)
    }

    pub fn rho(&mut self, x: &OperadElement) -> Result<LinearForm> {
        let mut out = LinearForm::zero(x.labels.clone());
        if x.labels.is_empty() {
            return Ok(out);
        }
        self.r.component(x.labels.len())?;
        for (t, c) in x.terms.iter() {
            let f = self.rho_tree(t)?;
            out.add_scaled(c, &f)?;
        }
        Ok(out)
    }

    /// Bidegree of the basis monomial `i` of `R(n)`.
    fn r_bidegree(&mut self, n: usize, i: usize) -> Result<BiDegree> {
        Ok(self.r.component(n)?.basis_bidegree(i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BidegreeVerdict {
    pub bidegree: BiDegree,
    pub ram_dim: usize,
    pub r_dim: usize,
    pub rank: usize,
}

impl BidegreeVerdict {
    pub fn bijective(&self) -> bool {
        self.ram_dim == self.r_dim && self.rank == self.ram_dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConjectureReport {
    pub n: usize,
    pub ram_dims: DimTable,
    pub r_dims: DimTable,
    pub predicted_dims: DimTable,
    /// `ρ` vanishes on relation instances and on the ideal.
    pub well_defined: Check,
    pub blocks: Vec<BidegreeVerdict>,
    pub dims_equal: bool,
    pub full_rank: bool,
    pub isomorphism: bool,
}

/// Matrix of `ρ` on the basis of `Ram({1..n})` against the dual basis of `R({1..n})`,
/// per-bidegree ranks, and the verdict.
pub fn conjecture_verdict(dw: &mut DualWorkspace, n: usize) -> Result<ConjectureReport> {
    let labels = standard_labels(n);
    let tr = Transport::new(labels.iter().copied());
    let ram = dw.ram.component(n)?;
    let rc = dw.r.component(n)?;
    let mut well_defined = Check::new("rho kills the relations of Ram");
    if n >= 3 {
        let three: Vec<Atom> = standard_labels(3);
        for (name, r) in ram::relation_instances(&dw.ram.presentation, [three[0], three[1], three[2]])? {
            let f = dw.rho(&r)?;
            well_defined.case(f.is_zero(), || format!("{name}: {r}"));
        }
        for (k, r) in ram.ideal_rows(&tr).enumerate() {
            let f = dw.rho(&r)?;
            well_defined.case(f.is_zero(), || format!("ideal row {k}: {r}"));
        }
    }
    let mut rows: BTreeMap<BiDegree, Vec<SparseVec>> = BTreeMap::new();
    for i in 0..ram.dim() {
        let f = dw.rho(&ram.basis_element(i, &tr))?;
        let d = ram.basis_bidegree(i);
        for (c, _) in f.coords.iter() {
            let e = rc.basis_bidegree(*c);
            if e != d {
                return Err(Error::InvalidArgument(format!("rho moved bidegree {d} to {e}")));
            }
        }
        rows.entry(d).or_default().push(f.coords);
    }
    let degrees: BTreeSet<BiDegree> = ram.dims.iter().chain(rc.dims.iter()).map(|(d, _)| d).collect();
    let mut blocks = Vec::new();
    for d in degrees {
        let mut el = Eliminator::new(rc.dim());
        for v in rows.get(&d).into_iter().flatten() {
            el.insert(v);
        }
        blocks.push(BidegreeVerdict {
            bidegree: d,
            ram_dim: ram.dims.get(d),
            r_dim: rc.dims.get(d),
            rank: el.rank(),
        });
    }
    let dims_equal = ram.dims == rc.dims;
    let full_rank = blocks.iter().all(|b| b.rank == b.ram_dim.min(b.r_dim));
    let isomorphism = well_defined.passed && blocks.iter().all(BidegreeVerdict::bijective);
    Ok(ConjectureReport {
        n,
        ram_dims: ram.dims.clone(),
        r_dims: rc.dims.clone(),
        predicted_dims: predicted_dims(n),
        well_defined,
        blocks,
        dims_equal,
        full_rank,
        isomorphism,
    })
}

/// Compatibility of `ρ` with the differentials and with the coproducts on `{1..n}`.
///
/// Intertwining is checked as `⟨ρ(Dx), m⟩ = s (-1)^{h(x)} ⟨ρ(x), d m⟩` and likewise for
/// `D'`, `d'`: the transpose of an odd map carries the Koszul sign of the form it acts
/// on, and one global sign `s` per equation is left free (reported in the witness).
/// The coalgebra check compares `Σ ±⟨ρ(t₁), m₁⟩⟨ρ(t₂), m₂⟩` over `Δx = Σ t₁ ⊗ t₂` with
/// `⟨ρ(x), m₁ m₂⟩`.
pub fn compat_checks(dw: &mut DualWorkspace, n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("rho compatibility", n);
    let labels = standard_labels(n);
    let tr = Transport::new(labels.iter().copied());
    let ram = dw.ram.component(n)?;
    let rc = dw.r.component(n)?;
    let basis_r: Vec<crate::graph::AlgebraElement> = (0..rc.dim()).map(|m| rc.basis_element(m, &tr)).collect();
    let basis_ram: Vec<OperadElement> = (0..ram.dim()).map(|i| ram.basis_element(i, &tr)).collect();
    let rho_basis: Vec<LinearForm> = basis_ram.iter().map(|x| dw.rho(x)).collect::<Result<_>>()?;

    for (big, small) in [(Differential::D, GraphDifferential::D), (Differential::DPrime, GraphDifferential::DPrime)] {
        let name = format!("rho intertwines {big} with {small}");
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        let dm: Vec<SparseVec> =
            basis_r.iter().map(|m| rc.normal_form(&graph_differential(m, small))).collect::<Result<_>>()?;
        for (i, (x, fx)) in basis_ram.iter().zip(rho_basis.iter()).enumerate() {
            let fdx = dw.rho(&differential(x, big))?;
            let k = rat(if ram.basis_bidegree(i).is_odd() { -1 } else { 1 });
            for (m, dmv) in dm.iter().enumerate() {
                lhs.push(fdx.coords.get(m));
                rhs.push(dmv.dot(&fx.coords) * &k);
            }
        }
        let plus = lhs == rhs;
        let minus = lhs.iter().zip(rhs.iter()).all(|(a, b)| *a == -b.clone());
        let mut c = Check::new(name);
        c.case(plus || minus, || "neither sign matches".into());
        c.cases = lhs.len();
        let sign = if plus { "+1" } else { "-1" };
        report.push(c.note(format!("global sign {sign}")));
    }

    let mut coalg = Check::new("rho is a morphism of coalgebras");
    let rb: Vec<BiDegree> = (0..rc.dim()).map(|m| rc.basis_bidegree(m)).collect();
    for (x, fx) in basis_ram.iter().zip(rho_basis.iter()) {
        let delta = coproduct(x)?;
        let mut pieces: Vec<(Rational, LinearForm, LinearForm, BiDegree)> = Vec::new();
        for ((t1, t2), c) in delta.iter() {
            let (f1, f2) = (dw.rho_tree(t1)?, dw.rho_tree(t2)?);
            if !f1.is_zero() && !f2.is_zero() {
                pieces.push((c.clone(), f1, f2, t2.bidegree()));
            }
        }
        for m1 in 0..rc.dim() {
            for m2 in 0..rc.dim() {
                let mut lhs = Rational::zero();
                for (c, f1, f2, h2) in pieces.iter() {
                    let s = if h2.is_odd() && rb[m1].is_odd() { -1 } else { 1 };
                    lhs += c * f1.coords.get(m1) * f2.coords.get(m2) * rat(s);
                }
                let prod = basis_r[m1].mul(&basis_r[m2])?;
                let rhs = if prod.is_zero() { Rational::zero() } else { rc.normal_form(&prod)?.dot(&fx.coords) };
                coalg.case(lhs == rhs, || format!("{x} on ({}) ⊗ ({})", basis_r[m1], basis_r[m2]));
            }
        }
    }
    report.push(coalg);
    Ok(report)
}

/// `(f ∘_★ g) ∘_# h = f ∘_★ (g ∘_# h)` on all triples of dual basis elements, over
/// every split `I|J|K` of `{1..n}`.
pub fn dual_associativity(dw: &mut DualWorkspace, n: usize) -> Result<Check> {
    let mut check = Check::new("dual composition is associative");
    let labels = standard_labels(n);
    for split in crate::cooperad::ordered_splits(&labels, 3) {
        let (i, j, k) = (&split[0], &split[1], &split[2]);
        let is: BTreeSet<Atom> = i.iter().copied().chain([Atom::STAR]).collect();
        let jh: BTreeSet<Atom> = j.iter().copied().chain([Atom::HASH]).collect();
        let fs = forms_on(dw, &is)?;
        let gs = forms_on(dw, &jh)?;
        let hs = forms_on(dw, k)?;
        for f in fs.iter() {
            for g in gs.iter() {
                let gh: Vec<LinearForm> = hs.iter().map(|h| dw.dual_compose(g, Atom::HASH, h)).collect::<Result<_>>()?;
                let fg = dw.dual_compose(f, Atom::STAR, g)?;
                for (h, gh) in hs.iter().zip(gh.iter()) {
                    let lhs = dw.dual_compose(&fg, Atom::HASH, h)?;
                    let rhs = dw.dual_compose(f, Atom::STAR, gh)?;
                    check.case(lhs == rhs, || format!("split {}", split_label(&split)));
                }
            }
        }
    }
    Ok(check)
}

fn forms_on(dw: &mut DualWorkspace, labels: &BTreeSet<Atom>) -> Result<Vec<LinearForm>> {
    let dim = dw.r.component(labels.len())?.dim();
    Ok((0..dim)
        .map(|b| LinearForm {
            labels: labels.clone(),
            coords: SparseVec::unit(b),
        })
        .collect())
}

fn split_label(split: &[BTreeSet<Atom>]) -> String {
    split.iter().map(format_labels).collect::<Vec<_>>().join("|")
}

/// Bidegrees carried by a form.
pub fn form_bidegrees(dw: &mut DualWorkspace, f: &LinearForm) -> Result<BTreeSet<BiDegree>> {
    let n = f.labels.len();
    f.coords.iter().map(|(i, _)| dw.r_bidegree(n, *i)).collect()
}
