//! Ramanujan polynomials `ψ_n(x, y)` and the bigraded dimensions they predict.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bidegree::{BiDegree, DimTable};

/// `Σ c_{i,k} x^i y^k` with integer coefficients, zero coefficients never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2(pub BTreeMap<(u32, u32), BigInt>);

impl Poly2 {
    pub fn one() -> Self {
        Poly2([((0, 0), BigInt::one())].into())
    }

    pub fn coeff(&self, i: u32, k: u32) -> BigInt {
        self.0.get(&(i, k)).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, i: u32, k: u32, c: BigInt) {
        let e = self.0.entry((i, k)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&(i, k));
        }
    }

    /// Evaluates at integer points.
    pub fn eval(&self, x: i64, y: i64) -> BigInt {
        self.0
            .iter()
            .map(|((i, k), c)| c * BigInt::from(x).pow(*i) * BigInt::from(y).pow(*k))
            .sum()
    }
}

/// `ψ_1 = 1`, `ψ_{n+1} = ψ_n + (x + y)(n ψ_n + x ∂_x ψ_n)`.
pub fn psi(n: usize) -> Poly2 {
    assert!(n >= 1, "ψ_n is defined for n ≥ 1");
    let mut p = Poly2::one();
    for m in 1..n {
        // n ψ + x ∂_x ψ multiplies the coefficient of x^i y^k by (m + i)
        let inner: BTreeMap<(u32, u32), BigInt> =
            p.0.iter().map(|((i, k), c)| ((*i, *k), c * BigInt::from(m as u64 + *i as u64))).collect();
        let mut next = p.clone();
        for ((i, k), c) in inner {
            next.add_term(i + 1, k, c.clone());
            next.add_term(i, k + 1, c);
        }
        p = next;
    }
    p
}

/// Degree `(i, j)` gets the coefficient of `x^i y^(j-i)` in `ψ_n`.
pub fn predicted_dims(n: usize) -> DimTable {
    let mut t = DimTable::new();
    for ((i, k), c) in psi(n).0.iter() {
        t.add(BiDegree::new(*i, i + k), c.to_usize().expect("small nonnegative coefficient"));
    }
    t
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        // total degree first, then descending powers of x
        let mut keys: alloc::vec::Vec<_> = self.0.keys().copied().collect();
        keys.sort_by_key(|(i, k)| (i + k, core::cmp::Reverse(*i)));
        let mut first = true;
        for (i, k) in keys {
            let c = &self.0[&(i, k)];
            let mut mono = String::new();
            for (v, e) in [('x', i), ('y', k)] {
                match e {
                    0 => {}
                    1 => mono.push(v),
                    _ => mono.push_str(&alloc::format!("{v}^{e}")),
                }
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{a}{mono}")?;
            }
        }
        Ok(())
    }
}
