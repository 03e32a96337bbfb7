//! Differential forms `a_{i,j} = 1/(x_i - x_j)` and `b_{i,j} = d(1/(x_i - x_j))`
//! evaluated at exact rational points, as elements of the exterior algebra on the
//! `dx_i`. A relation that fails at one point fails in the forms model; holding at
//! every sampled point is evidence only.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::atom::{standard_labels, Atom};
use crate::error::{Error, Result};
use crate::graph::{enumerate_graph_monomials, AlgebraElement, Color, GraphMonomial, Letter, Mode, RelationFamily, A, B};
use crate::linear::{rat, ratio, Rational};
use crate::operad::add_to;
use crate::report::{Check, SuiteReport};

/// Default seed of the survey.
pub const DEFAULT_SEED: u64 = 20_240_229;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    coords: BTreeMap<Atom, Rational>,
}

impl SamplePoint {
    pub fn new(coords: BTreeMap<Atom, Rational>) -> Result<Self> {
        let v: Vec<(&Atom, &Rational)> = coords.iter().collect();
        for (k, (a, x)) in v.iter().enumerate() {
            if a.0 >= 64 {
                return Err(Error::InvalidArgument(format!("coordinate label {a} too large")));
            }
            for (b, y) in &v[k + 1..] {
                if x == y {
                    return Err(Error::CoincidentPoint(**a, **b));
                }
            }
        }
        Ok(SamplePoint { coords })
    }

    /// Pairwise distinct coordinates `p/q` with `|p| ≤ 30`, `1 ≤ q ≤ 9`.
    pub fn random(labels: &[Atom], rng: &mut ChaCha8Rng) -> Result<Self> {
        loop {
            let coords: BTreeMap<Atom, Rational> = labels
                .iter()
                .map(|a| {
                    let p = (rng.next_u32() % 61) as i64 - 30;
                    let q = (rng.next_u32() % 9) as i64 + 1;
                    (*a, ratio(p, q))
                })
                .collect();
            match SamplePoint::new(coords) {
                Err(Error::CoincidentPoint(..)) => continue,
                other => return other,
            }
        }
    }

    pub fn get(&self, a: Atom) -> Result<&Rational> {
        self.coords
            .get(&a)
            .ok_or_else(|| Error::InvalidArgument(format!("no coordinate for {a}")))
    }
}

impl fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, (a, x)) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{a}={x}")?;
        }
        f.write_str(")")
    }
}

/// Element of the exterior algebra on `dx_i`, keyed by the bitmask of the `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvaluatedForm(pub BTreeMap<u64, Rational>);

impl EvaluatedForm {
    pub fn scalar(c: Rational) -> Self {
        let mut m = BTreeMap::new();
        add_to(&mut m, 0u64, &c);
        EvaluatedForm(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient of `dx_a`.
    pub fn linear_coefficient(&self, a: Atom) -> Rational {
        self.0.get(&(1u64 << a.0)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &EvaluatedForm) {
        for (k, v) in other.0.iter() {
            add_to(&mut self.0, *k, &(c * v));
        }
    }

    pub fn wedge(&self, other: &EvaluatedForm) -> EvaluatedForm {
        let mut out = BTreeMap::new();
        for (s, x) in self.0.iter() {
            for (t, y) in other.0.iter() {
                if s & t != 0 {
                    continue;
                }
                // moving each dx_t left past the larger dx_s
                let mut swaps = 0;
                let mut rest = *t;
                while rest != 0 {
                    let b = rest.trailing_zeros();
                    swaps += (s >> (b + 1)).count_ones();
                    rest &= rest - 1;
                }
                let sign = if swaps % 2 == 0 { rat(1) } else { rat(-1) };
                add_to(&mut out, s | t, &(x * y * sign));
            }
        }
        EvaluatedForm(out)
    }
}

impl fmt::Display for EvaluatedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, (mask, c)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for b in 0..64 {
                if mask >> b & 1 == 1 {
                    write!(f, " dx{b}")?;
                }
            }
        }
        Ok(())
    }
}

pub fn eval_generator(color: Color, i: Atom, j: Atom, p: &SamplePoint) -> Result<EvaluatedForm> {
    if i == j {
        return Err(Error::InvalidArgument(format!("generator on the pair ({i},{j})")));
    }
    let diff = p.get(i)? - p.get(j)?;
    if diff.is_zero() {
        return Err(Error::CoincidentPoint(i, j));
    }
    if color == A {
        Ok(EvaluatedForm::scalar(diff.recip()))
    } else if color == B {
        let c = -(&diff * &diff).recip();
        let mut m = BTreeMap::new();
        add_to(&mut m, 1u64 << i.0, &c);
        add_to(&mut m, 1u64 << j.0, &-c);
        Ok(EvaluatedForm(m))
    } else {
        Err(Error::InvalidArgument(format!("color {} has no form", color.symbol)))
    }
}

/// Product of the letters in the order written.
pub fn eval_word(word: &[Letter], p: &SamplePoint) -> Result<EvaluatedForm> {
    let mut acc = EvaluatedForm::scalar(Rational::one());
    for l in word {
        acc = acc.wedge(&eval_generator(l.color, l.i, l.j, p)?);
    }
    Ok(acc)
}

/// Each monomial evaluated in its canonical order.
pub fn eval_element(x: &AlgebraElement, p: &SamplePoint) -> Result<EvaluatedForm> {
    let mut out = EvaluatedForm::default();
    for (m, c) in x.terms.iter() {
        out.add_scaled(c, &eval_word(&m.word(), p)?);
    }
    Ok(out)
}

/// `1/(x_i - x_j)` with `x_k` carrying an infinitesimal; the `ε` part is `∂_k`.
fn partial_of_a(i: Atom, j: Atom, k: Atom, p: &SamplePoint) -> Result<Rational> {
    let re = p.get(i)? - p.get(j)?;
    let eps = rat(i64::from(i == k) - i64::from(j == k));
    // (re + eps ε)^{-1} = 1/re - eps/re² ε
    Ok(-eps / (&re * &re))
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyVerdict {
    pub family: String,
    /// Listed among the relations of the forms model.
    pub claimed: bool,
    pub instances: usize,
    pub holds: bool,
    pub witness: Option<String>,
}

/// Families the forms model is stated to satisfy.
pub fn claimed_in_forms(f: RelationFamily) -> bool {
    matches!(f, RelationFamily::Relaa | RelationFamily::Relab | RelationFamily::Relbbbn)
}

/// Evaluates every instance of every family of `R` on `n` points at `trials` seeded
/// random points.
pub fn relation_survey(n: usize, trials: usize, seed: u64) -> Result<Vec<FamilyVerdict>> {
    if !(1..=6).contains(&n) || trials == 0 {
        return Err(Error::InvalidArgument(format!("survey needs 1 ≤ n ≤ 6 and trials ≥ 1, got n={n}, trials={trials}")));
    }
    let labels = standard_labels(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<SamplePoint> = (0..trials).map(|_| SamplePoint::random(&labels, &mut rng)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for fam in RelationFamily::R {
        let instances = fam.instances(&labels);
        let mut v = FamilyVerdict {
            family: fam.name().to_string(),
            claimed: claimed_in_forms(fam),
            instances: instances.len(),
            holds: true,
            witness: None,
        };
        'outer: for p in points.iter() {
            for inst in instances.iter() {
                let mut acc = EvaluatedForm::default();
                for (c, w) in inst.terms.iter() {
                    acc.add_scaled(&rat(*c), &eval_word(w, p)?);
                }
                if !acc.is_zero() {
                    v.holds = false;
                    v.witness = Some(format!("{inst} at {p} gives {acc}"));
                    break 'outer;
                }
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Forms-model checks on `n` points: claimed relations, evaluation multiplicative,
/// `b = d a` on generators, and a survey of the remaining families.
pub fn forms_checks(n: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("forms", n);
    for v in relation_survey(n, trials, seed)? {
        let name = format!("{} in forms", v.family);
        if v.claimed {
            let mut c = Check::new(name);
            c.case(v.holds, || v.witness.clone().unwrap_or_default());
            c.cases = v.instances * trials;
            report.push(c);
        } else {
            let note = match &v.witness {
                None if v.instances == 0 => format!("no instances on {n} points"),
                None => format!("holds at {trials} points ({} instances)", v.instances),
                Some(w) => format!("fails: {w}"),
            };
            report.push(Check::new(format!("{name} (informational)")).note(note));
        }
    }
    let labels = standard_labels(n);
    let vertices: BTreeSet<Atom> = labels.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let monomials = enumerate_graph_monomials(&[A, B], &labels, Mode::Full, None);
    let mut mult = Check::new("evaluation is multiplicative");
    let mut derham = Check::new("b is the differential of a");
    for _ in 0..trials {
        let p = SamplePoint::random(&labels, &mut rng)?;
        for _ in 0..8 {
            // split a random monomial into two factors so the product is nonzero
            let z = &monomials[rng.next_u32() as usize % monomials.len()];
            let (mut xw, mut yw) = (Vec::new(), Vec::new());
            for l in z.word() {
                if rng.next_u32() % 2 == 0 {
                    xw.push(l);
                } else {
                    yw.push(l);
                }
            }
            let (Some((_, x)), Some((_, y))) = (GraphMonomial::from_word(&xw), GraphMonomial::from_word(&yw)) else {
                continue;
            };
            let Some((s, xy)) = x.multiply(&y) else { continue };
            let lhs = eval_element(&AlgebraElement::from_monomial(vertices.clone(), xy), &p)?;
            let mut rhs = EvaluatedForm::default();
            rhs.add_scaled(&rat(s), &eval_word(&x.word(), &p)?.wedge(&eval_word(&y.word(), &p)?));
            mult.case(lhs == rhs, || format!("({x})({y}) at {p}"));
        }
        for (k, &i) in labels.iter().enumerate() {
            for &j in &labels[k + 1..] {
                let b = eval_generator(B, i, j, &p)?;
                let mut ok = true;
                for &l in labels.iter() {
                    ok &= b.linear_coefficient(l) == partial_of_a(i, j, l, &p)?;
                }
                ok &= b.0.keys().all(|m| m.count_ones() == 1);
                derham.case(ok, || format!("b({i},{j}) at {p}"));
            }
        }
    }
    report.push(mult);
    report.push(derham);
    Ok(report)
}
