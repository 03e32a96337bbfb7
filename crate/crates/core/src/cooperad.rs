//! The cocomposition maps `Θ^★_{I,J} : R(I ⊔ J) → R(I ∪ {★}) ⊗ R(J)` and checks of the
//! cooperad axioms.
//!
//! A generator with both ends in `I` goes to the left factor, both ends in `J` to the
//! right factor, and a straddling generator to the left factor with its `J` end
//! replaced by `★`. Images are multiplied left to right with
//! `(u ⊗ v)(u' ⊗ v') = (-1)^{h(v) h(u')} uu' ⊗ vv'`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::One;

use crate::atom::{standard_labels, Atom, Transport};
use crate::error::{Error, Result};
use crate::graph::{
    differential, letter, AlgebraElement, GraphDifferential, GraphMonomial, GraphWorkspace, Letter,
};
use crate::linear::{rat, Rational};
use crate::operad::{add_to, format_labels};
use crate::report::{Check, SuiteReport};

pub type Tensor2 = BTreeMap<(GraphMonomial, GraphMonomial), Rational>;
pub type Tensor3 = BTreeMap<(GraphMonomial, GraphMonomial, GraphMonomial), Rational>;

/// Split of a vertex set for one cocomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cocomposition {
    pub left: BTreeSet<Atom>,
    pub right: BTreeSet<Atom>,
    pub slot: Atom,
}

impl Cocomposition {
    pub fn new(left: BTreeSet<Atom>, right: BTreeSet<Atom>, slot: Atom) -> Result<Self> {
        if let Some(a) = left.iter().find(|a| right.contains(a)) {
            return Err(Error::LabelCollision(*a));
        }
        if left.contains(&slot) || right.contains(&slot) {
            return Err(Error::LabelCollision(slot));
        }
        Ok(Cocomposition { left, right, slot })
    }

    pub fn source(&self) -> BTreeSet<Atom> {
        self.left.union(&self.right).copied().collect()
    }

    /// `I ∪ {★}`.
    pub fn target_left(&self) -> BTreeSet<Atom> {
        let mut s = self.left.clone();
        s.insert(self.slot);
        s
    }

    /// Image of one monomial, before reduction; `None` when the left or right product
    /// already vanishes in the free algebra.
    pub fn monomial(&self, m: &GraphMonomial) -> Result<Option<(i64, GraphMonomial, GraphMonomial)>> {
        let mut u: Vec<Letter> = Vec::new();
        let mut v: Vec<Letter> = Vec::new();
        let mut sign = 1;
        let mut v_odd = 0u32;
        for e in m.word() {
            let side = |a: Atom| -> Result<bool> {
                if self.left.contains(&a) {
                    Ok(true)
                } else if self.right.contains(&a) {
                    Ok(false)
                } else {
                    Err(Error::LabelMismatch(format!("{a} not in {}", format_labels(&self.source()))))
                }
            };
            let x = match (side(e.i)?, side(e.j)?) {
                (true, true) => e,
                (false, false) => {
                    if e.color.is_odd() {
                        v_odd += 1;
                    }
                    v.push(e);
                    continue;
                }
                (true, false) => letter(e.color, e.i, self.slot),
                (false, true) => letter(e.color, self.slot, e.j),
            };
            if x.color.is_odd() && v_odd % 2 == 1 {
                sign = -sign;
            }
            u.push(x);
        }
        let Some((su, mu)) = GraphMonomial::from_word(&u) else {
            return Ok(None);
        };
        let Some((sv, mv)) = GraphMonomial::from_word(&v) else {
            return Ok(None);
        };
        Ok(Some((sign * su * sv, mu, mv)))
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<Tensor2> {
        if x.vertices != self.source() {
            return Err(Error::LabelMismatch(format_labels(&x.vertices)));
        }
        let mut out = Tensor2::new();
        for (m, c) in x.terms.iter() {
            if let Some((s, u, v)) = self.monomial(m)? {
                add_to(&mut out, (u, v), &(c * rat(s)));
            }
        }
        Ok(out)
    }
}

pub fn theta(left: &BTreeSet<Atom>, right: &BTreeSet<Atom>, x: &AlgebraElement) -> Result<Tensor2> {
    Cocomposition::new(left.clone(), right.clone(), Atom::STAR)?.apply(x)
}

/// Product in `R(I ∪ {★}) ⊗ R(J)` at the level of free monomials.
pub fn tensor_mul(x: &Tensor2, y: &Tensor2) -> Tensor2 {
    let mut out = Tensor2::new();
    for ((u, v), c) in x.iter() {
        for ((u2, v2), d) in y.iter() {
            let (Some((s1, uu)), Some((s2, vv))) = (u.multiply(u2), v.multiply(v2)) else {
                continue;
            };
            let k = if v.bidegree().is_odd() && u2.bidegree().is_odd() { -1 } else { 1 };
            add_to(&mut out, (uu, vv), &(c * d * rat(s1 * s2 * k)));
        }
    }
    out
}

/// Reduces both factors of a tensor to quotient coordinates.
pub struct TensorReducer<'a> {
    ws: &'a mut GraphWorkspace,
}

pub type Coords2 = BTreeMap<(usize, usize), Rational>;
pub type Coords3 = BTreeMap<(usize, usize, usize), Rational>;

impl<'a> TensorReducer<'a> {
    pub fn new(ws: &'a mut GraphWorkspace) -> Self {
        TensorReducer { ws }
    }

    fn nf(&mut self, m: &GraphMonomial, labels: &BTreeSet<Atom>) -> Result<Vec<(usize, Rational)>> {
        let comp = self.ws.component(labels.len())?;
        let tr = Transport::new(labels.iter().copied());
        Ok(comp.monomial_normal_form(m, &tr)?.into_entries())
    }

    pub fn reduce2(&mut self, x: &Tensor2, l: &BTreeSet<Atom>, r: &BTreeSet<Atom>) -> Result<Coords2> {
        let mut out = Coords2::new();
        for ((u, v), c) in x.iter() {
            let (a, b) = (self.nf(u, l)?, self.nf(v, r)?);
            for (i, x) in a.iter() {
                for (j, y) in b.iter() {
                    add_to(&mut out, (*i, *j), &(c * x * y));
                }
            }
        }
        Ok(out)
    }

    pub fn reduce3(&mut self, x: &Tensor3, sets: [&BTreeSet<Atom>; 3]) -> Result<Coords3> {
        let mut out = Coords3::new();
        for ((u, v, w), c) in x.iter() {
            let (a, b, d) = (self.nf(u, sets[0])?, self.nf(v, sets[1])?, self.nf(w, sets[2])?);
            for (i, x) in a.iter() {
                for (j, y) in b.iter() {
                    for (k, z) in d.iter() {
                        add_to(&mut out, (*i, *j, *k), &(c * x * y * z));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Ordered splits of `labels` into `k` nonempty blocks.
pub fn ordered_splits(labels: &[Atom], k: usize) -> Vec<Vec<BTreeSet<Atom>>> {
    let mut out = Vec::new();
    let total = k.pow(labels.len() as u32);
    for code in 0..total {
        let mut blocks = alloc::vec![BTreeSet::new(); k];
        let mut c = code;
        for a in labels {
            blocks[c % k].insert(*a);
            c /= k;
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(blocks);
        }
    }
    out
}

fn split_name(blocks: &[BTreeSet<Atom>]) -> String {
    blocks.iter().map(format_labels).collect::<Vec<_>>().join("|")
}

/// `Θ` kills every defining relation instance on `{1..n}`, for every split `I|J`.
pub fn theta_relation_kill(ws: &mut GraphWorkspace, n: usize) -> Result<Check> {
    let labels = standard_labels(n);
    let vertices: BTreeSet<Atom> = labels.iter().copied().collect();
    let instances = ws.presentation.instances(&labels);
    let mut check = Check::new("theta kills relations");
    for split in ordered_splits(&labels, 2) {
        let co = Cocomposition::new(split[0].clone(), split[1].clone(), Atom::STAR)?;
        let (l, r) = (co.target_left(), co.right.clone());
        for inst in instances.iter() {
            let x = inst.element(&vertices)?;
            let t = co.apply(&x)?;
            let nf = TensorReducer::new(ws).reduce2(&t, &l, &r)?;
            check.case(nf.is_empty(), || format!("{} on {inst}", split_name(&split)));
        }
    }
    Ok(check)
}

/// Both coassociativity equations on every basis element of `R({1..n})`, over all
/// ordered splits `I|J|K` into nonempty blocks.
pub fn cooperad_axiom_check(ws: &mut GraphWorkspace, n: usize) -> Result<SuiteReport> {
    let labels = standard_labels(n);
    let comp = ws.component(n)?;
    let tr = Transport::new(labels.iter().copied());
    let (star, hash) = (Atom::STAR, Atom::HASH);
    let mut first = Check::new("coassociativity (nested)");
    let mut second = Check::new("coassociativity (parallel, with symmetry)");
    let with = |s: &BTreeSet<Atom>, a: &[Atom]| -> BTreeSet<Atom> { s.iter().chain(a).copied().collect() };
    for split in ordered_splits(&labels, 3) {
        let (i, j, k) = (&split[0], &split[1], &split[2]);
        let ij: BTreeSet<Atom> = i.union(j).copied().collect();
        let jk: BTreeSet<Atom> = j.union(k).copied().collect();
        let ik: BTreeSet<Atom> = i.union(k).copied().collect();
        let outer_ij_k = Cocomposition::new(ij.clone(), k.clone(), hash)?;
        let inner_i_jh = Cocomposition::new(i.clone(), with(j, &[hash]), star)?;
        let outer_i_jk = Cocomposition::new(i.clone(), jk, star)?;
        let inner_j_k = Cocomposition::new(j.clone(), k.clone(), hash)?;
        let inner_ih_j = Cocomposition::new(with(i, &[hash]), j.clone(), star)?;
        let outer_ik_j = Cocomposition::new(ik, j.clone(), star)?;
        let inner_is_k = Cocomposition::new(with(i, &[star]), k.clone(), hash)?;
        let sets1 = [with(i, &[star]), with(j, &[hash]), k.clone()];
        let sets2 = [with(i, &[star, hash]), j.clone(), k.clone()];
        for b in 0..comp.dim() {
            let x = comp.basis_element(b, &tr);
            let t = outer_ij_k.apply(&x)?;
            let mut lhs1 = Tensor3::new();
            let mut lhs2 = Tensor3::new();
            for ((u, w), c) in t.iter() {
                let ux = AlgebraElement::from_monomial(ij.iter().copied().chain([hash]).collect(), u.clone());
                for ((u1, u2), d) in inner_i_jh.apply(&ux)? {
                    add_to(&mut lhs1, (u1, u2, w.clone()), &(c * d));
                }
                for ((u1, u2), d) in inner_ih_j.apply(&ux)? {
                    add_to(&mut lhs2, (u1, u2, w.clone()), &(c * d));
                }
            }
            let mut rhs1 = Tensor3::new();
            for ((u, v), c) in outer_i_jk.apply(&x)?.iter() {
                let vx = AlgebraElement::from_monomial(inner_j_k.source(), v.clone());
                for ((v1, v2), d) in inner_j_k.apply(&vx)? {
                    add_to(&mut rhs1, (u.clone(), v1, v2), &(c * d));
                }
            }
            let mut rhs2 = Tensor3::new();
            for ((u, v), c) in outer_ik_j.apply(&x)?.iter() {
                let ux = AlgebraElement::from_monomial(inner_is_k.source(), u.clone());
                for ((u1, u2), d) in inner_is_k.apply(&ux)? {
                    // τ swaps R(K) ⊗ R(J) into R(J) ⊗ R(K)
                    let s = if u2.bidegree().is_odd() && v.bidegree().is_odd() { -1 } else { 1 };
                    add_to(&mut rhs2, (u1, v.clone(), u2), &(c * d * rat(s)));
                }
            }
            let mut red = TensorReducer::new(ws);
            let ok1 = red.reduce3(&lhs1, [&sets1[0], &sets1[1], &sets1[2]])?
                == red.reduce3(&rhs1, [&sets1[0], &sets1[1], &sets1[2]])?;
            let ok2 = red.reduce3(&lhs2, [&sets2[0], &sets2[1], &sets2[2]])?
                == red.reduce3(&rhs2, [&sets2[0], &sets2[1], &sets2[2]])?;
            first.case(ok1, || format!("{} on {x}", split_name(&split)));
            second.case(ok2, || format!("{} on {x}", split_name(&split)));
        }
    }
    let mut report = SuiteReport::new("cooperad axioms", n);
    report.push(first);
    report.push(second);
    Ok(report)
}

/// `Θ(xy) = Θ(x)Θ(y)` on pairs of basis elements of `R({1..n})` whose weights add
/// up to at most `n - 1`, over all splits.
pub fn theta_multiplicative(ws: &mut GraphWorkspace, n: usize) -> Result<Check> {
    let labels = standard_labels(n);
    let comp = ws.component(n)?;
    let tr = Transport::new(labels.iter().copied());
    let basis: Vec<AlgebraElement> = (0..comp.dim()).map(|b| comp.basis_element(b, &tr)).collect();
    let mut check = Check::new("theta is multiplicative");
    for split in ordered_splits(&labels, 2) {
        let co = Cocomposition::new(split[0].clone(), split[1].clone(), Atom::STAR)?;
        let (l, r) = (co.target_left(), co.right.clone());
        let images: Vec<Tensor2> = basis.iter().map(|x| co.apply(x)).collect::<Result<_>>()?;
        for (p, x) in basis.iter().enumerate() {
            for (q, y) in basis.iter().enumerate() {
                if comp.basis_bidegree(p).w + comp.basis_bidegree(q).w >= n as u32 {
                    continue;
                }
                let lhs = co.apply(&x.mul(y)?)?;
                let rhs = tensor_mul(&images[p], &images[q]);
                let mut red = TensorReducer::new(ws);
                let ok = red.reduce2(&lhs, &l, &r)? == red.reduce2(&rhs, &l, &r)?;
                check.case(ok, || format!("{} on ({x})({y})", split_name(&split)));
            }
        }
    }
    Ok(check)
}

/// `Θ ∘ δ = (δ ⊗ 1 + 1 ⊗ δ) ∘ Θ` for `δ = d, d'`, with `(1 ⊗ δ)(u ⊗ v) = (-1)^{h(u)} u ⊗ δv`.
pub fn theta_intertwines(ws: &mut GraphWorkspace, n: usize) -> Result<Vec<Check>> {
    let labels = standard_labels(n);
    let comp = ws.component(n)?;
    let tr = Transport::new(labels.iter().copied());
    let mut out = Vec::new();
    for which in [GraphDifferential::D, GraphDifferential::DPrime] {
        let mut check = Check::new(format!("theta intertwines {which}"));
        for split in ordered_splits(&labels, 2) {
            let co = Cocomposition::new(split[0].clone(), split[1].clone(), Atom::STAR)?;
            let (l, r) = (co.target_left(), co.right.clone());
            for b in 0..comp.dim() {
                let x = comp.basis_element(b, &tr);
                let lhs = co.apply(&differential(&x, which))?;
                let mut rhs = Tensor2::new();
                for ((u, v), c) in co.apply(&x)?.iter() {
                    let du = differential(&AlgebraElement::from_monomial(l.clone(), u.clone()), which);
                    for (m, d) in du.terms {
                        add_to(&mut rhs, (m, v.clone()), &(c * d));
                    }
                    let s = rat(if u.bidegree().is_odd() { -1 } else { 1 });
                    let dv = differential(&AlgebraElement::from_monomial(r.clone(), v.clone()), which);
                    for (m, d) in dv.terms {
                        add_to(&mut rhs, (u.clone(), m), &(c * d * &s));
                    }
                }
                let mut red = TensorReducer::new(ws);
                let ok = red.reduce2(&lhs, &l, &r)? == red.reduce2(&rhs, &l, &r)?;
                check.case(ok, || format!("{} on {x}", split_name(&split)));
            }
        }
        out.push(check);
    }
    Ok(out)
}

/// Every cooperad check on `R({1..n})`.
pub fn cooperad_checks(ws: &mut GraphWorkspace, n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("cooperad", n);
    report.push(theta_relation_kill(ws, n)?);
    for c in cooperad_axiom_check(ws, n)?.checks {
        report.push(c);
    }
    report.push(theta_multiplicative(ws, n)?);
    for c in theta_intertwines(ws, n)? {
        report.push(c);
    }
    Ok(report)
}

/// Renders a reduced tensor for witnesses and tests.
pub fn show2(t: &Tensor2) -> String {
    if t.is_empty() {
        return "0".to_string();
    }
    t.iter()
        .map(|((u, v), c)| {
            if c.is_one() {
                format!("{u} ⊗ {v}")
            } else {
                format!("({c}) {u} ⊗ {v}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Limits;
    use crate::graph::{Mode, A, B};

    fn set(xs: &[u32]) -> BTreeSet<Atom> {
        xs.iter().map(|k| Atom(*k)).collect()
    }

    fn word_elem(v: &BTreeSet<Atom>, w: &[Letter]) -> AlgebraElement {
        let mut x = AlgebraElement::zero(v.clone());
        x.add_word(&Rational::one(), w).unwrap();
        x
    }

    #[test]
    fn theta_examples() {
        let (i, j, k) = (Atom(1), Atom(2), Atom(3));
        let (l, r) = (set(&[1]), set(&[2, 3]));
        let v = set(&[1, 2, 3]);
        let t = theta(&l, &r, &word_elem(&v, &[letter(A, i, j), letter(B, j, k)])).unwrap();
        assert_eq!(show2(&t), "a(1,*) ⊗ b(2,3)");
        let t = theta(&l, &r, &word_elem(&v, &[letter(A, k, i), letter(B, i, j)])).unwrap();
        assert!(t.is_empty());
        let t = theta(&l, &r, &word_elem(&v, &[letter(A, j, k), letter(B, k, i)])).unwrap();
        // b_{★,i} ⊗ a_{j,k}
        assert_eq!(show2(&t), "(-1) b(1,*) ⊗ a(2,3)");
        let t = theta(&l, &r, &word_elem(&v, &[letter(B, j, k), letter(A, k, i)])).unwrap();
        assert_eq!(show2(&t), "(-1) a(1,*) ⊗ b(2,3)");
        let t = theta(&l, &r, &AlgebraElement::one(v)).unwrap();
        assert_eq!(show2(&t), "1 ⊗ 1");
    }

    #[test]
    fn generator_case_of_first_axiom() {
        // a_{i,k} with i ∈ I, k ∈ K goes to a_{i,★} ⊗ 1 ⊗ 1 both ways
        let v = set(&[1, 2, 3]);
        let x = word_elem(&v, &[letter(A, Atom(1), Atom(3))]);
        let outer = Cocomposition::new(set(&[1, 2]), set(&[3]), Atom::HASH).unwrap();
        let t = outer.apply(&x).unwrap();
        assert_eq!(show2(&t), "a(1,#) ⊗ 1");
        let inner = Cocomposition::new(set(&[1]), [Atom(2), Atom::HASH].into(), Atom::STAR).unwrap();
        let ((u, _), _) = t.iter().next().unwrap();
        let t2 = inner.apply(&AlgebraElement::from_monomial(inner.source(), u.clone())).unwrap();
        assert_eq!(show2(&t2), "a(1,*) ⊗ 1");
    }

    #[test]
    fn checks_at_three() {
        let mut ws = GraphWorkspace::r(Mode::Forest, Limits::default());
        let r = cooperad_checks(&mut ws, 3).unwrap();
        for c in r.checks.iter() {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
    }
}
