//! Exact rational linear algebra: sparse vectors, row reduction and quotient bases.
//!
//! Every verdict in this crate comes out of the elimination below, so nothing here
//! touches floating point. Rows are sparse and sorted by column index; the column
//! order is whatever monomial order the caller chose.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse vector with strictly increasing column indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vector from unsorted entries, summing repeated indices.
    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(entries: I) -> Self {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in entries {
            *acc.entry(i).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(acc)
    }

    pub fn from_map(map: BTreeMap<usize, Rational>) -> Self {
        SparseVec {
            entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: alloc::vec![(i, Rational::one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Rational)> {
        self.entries.iter()
    }

    pub fn leading(&self) -> Option<&(usize, Rational)> {
        self.entries.first()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scale(&mut self, c: &Rational) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in self.entries.iter_mut() {
            *v *= c;
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Rational, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = core::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, v) = b.next().unwrap();
                    out.push((*j, v * c));
                }
                (Some(_), Some(_)) => {
                    let (i, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let s = x + y * c;
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, v) = b.next().unwrap();
                    out.push((*j, v * c));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let mut acc = Rational::zero();
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() && q < other.entries.len() {
            let (i, x) = &self.entries[p];
            let (j, y) = &other.entries[q];
            match i.cmp(j) {
                core::cmp::Ordering::Less => p += 1,
                core::cmp::Ordering::Greater => q += 1,
                core::cmp::Ordering::Equal => {
                    acc += x * y;
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }

    /// Rescales so the leading coefficient is positive and the entries are coprime integers.
    /// Used to de-duplicate spanning rows.
    pub fn normalized(&self) -> SparseVec {
        let Some((_, lead)) = self.leading() else {
            return self.clone();
        };
        let mut out = self.clone();
        let inv = lead.recip();
        out.scale(&inv);
        // clear denominators
        let mut lcm = BigInt::one();
        for (_, c) in out.entries.iter() {
            let d = c.denom();
            lcm = num_integer_lcm(&lcm, d);
        }
        let lcm_r = Rational::from_integer(lcm);
        out.scale(&lcm_r);
        if out.entries[0].1.is_negative() {
            out.scale(&rat(-1));
        }
        out
    }

    pub fn into_entries(self) -> Vec<(usize, Rational)> {
        self.entries
    }
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let g = gcd(a, b);
    (a / &g) * b
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.abs(), b.abs());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// Row-major sparse matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: Vec<SparseVec>,
    pub ncols: usize,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            rows: Vec::new(),
            ncols,
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|m| m < ncols)));
        SparseMatrix { rows, ncols }
    }

    pub fn from_dense(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| SparseVec::from_entries(r.iter().enumerate().map(|(j, &v)| (j, rat(v)))))
            .collect();
        SparseMatrix { rows, ncols }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: (0..n).map(SparseVec::unit).collect(),
            ncols: n,
        }
    }

    pub fn push(&mut self, row: SparseVec) {
        debug_assert!(row.max_index().is_none_or(|m| m < self.ncols));
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(usize, Rational)>> = alloc::vec![Vec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter() {
                cols[*j].push((i, c.clone()));
            }
        }
        SparseMatrix {
            rows: cols.into_iter().map(|entries| SparseVec { entries }).collect(),
            ncols: self.rows.len(),
        }
    }
}

/// Reduced row-echelon form: pivot entries are 1 and pivot columns are cleared in every
/// other row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon {
    pub ncols: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn empty(ncols: usize) -> Self {
        Echelon {
            ncols,
            ..Default::default()
        }
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Rebuilds an echelon from stored rows, as read back from a cache file.
    /// Returns `None` unless the rows really are in reduced echelon form.
    pub fn from_reduced_rows(ncols: usize, rows: Vec<SparseVec>) -> Option<Self> {
        let mut pivots = Vec::with_capacity(rows.len());
        for r in rows.iter() {
            let (c, v) = r.leading()?;
            if !v.is_one() || *c >= ncols || pivots.last().is_some_and(|p| p >= c) {
                return None;
            }
            pivots.push(*c);
        }
        let pivot_row: BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        for (i, r) in rows.iter().enumerate() {
            if r.iter().any(|(c, _)| pivot_row.get(c).is_some_and(|&k| k != i)) {
                return None;
            }
        }
        Some(Echelon {
            ncols,
            rows,
            pivots,
            pivot_row,
        })
    }
}

/// Incremental eliminator. Rows may be fed one at a time; `finish` produces the unique
/// reduced row-echelon form of their span.
#[derive(Clone, Debug)]
pub struct Eliminator {
    ncols: usize,
    // pivot column -> row with leading 1 at that column (not yet back-substituted)
    pivots: BTreeMap<usize, SparseVec>,
}

impl Eliminator {
    pub fn new(ncols: usize) -> Self {
        Eliminator {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns true when it increased the rank.
    pub fn insert(&mut self, row: &SparseVec) -> bool {
        let r = sweep(row, |c| self.pivots.get(&c));
        match r.leading() {
            None => false,
            Some((c, lead)) => {
                let c = *c;
                let inv = lead.recip();
                let mut r = r;
                r.scale(&inv);
                self.pivots.insert(c, r);
                true
            }
        }
    }

    pub fn finish(self) -> Echelon {
        let ncols = self.ncols;
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        // back-substitute from the rightmost pivot
        for (c, row) in self.pivots.into_iter().rev() {
            let reduced = {
                let mut out = SparseVec::new();
                out.entries.push((c, Rational::one()));
                let tail = SparseVec {
                    entries: row.entries[1..].to_vec(),
                };
                let rest = sweep(&tail, |k| done.get(&k));
                out.entries.extend(rest.entries);
                out
            };
            done.insert(c, reduced);
        }
        let pivots: Vec<usize> = done.keys().copied().collect();
        let pivot_row = pivots.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Echelon {
            ncols,
            rows: done.into_values().collect(),
            pivots,
            pivot_row,
        }
    }
}

/// Forward sweep: eliminates every pivot column, in increasing order, using rows whose
/// leading entry is 1 and whose other entries lie to the right of the pivot.
fn sweep<'a, F>(v: &SparseVec, pivot: F) -> SparseVec
where
    F: Fn(usize) -> Option<&'a SparseVec>,
{
    let mut work: BTreeMap<usize, Rational> = v.entries.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some((c, x)) = work.pop_first() {
        if x.is_zero() {
            continue;
        }
        match pivot(c) {
            Some(prow) => {
                for (j, y) in prow.entries[1..].iter() {
                    let e = work.entry(*j).or_insert_with(Rational::zero);
                    *e -= &x * y;
                }
            }
            None => out.push((c, x)),
        }
    }
    SparseVec { entries: out }
}

pub fn rref(m: &SparseMatrix) -> Echelon {
    let mut el = Eliminator::new(m.ncols);
    for r in m.rows.iter() {
        el.insert(r);
    }
    el.finish()
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut el = Eliminator::new(m.ncols);
    for r in m.rows.iter() {
        el.insert(r);
    }
    el.rank()
}

/// Removes all support on pivot columns. `v - reduce(v)` lies in the row space.
pub fn reduce(v: &SparseVec, e: &Echelon) -> SparseVec {
    // rows are fully reduced, so one subtraction per pivot hit suffices
    let mut out = v.clone();
    for (c, x) in v.iter() {
        if let Some(&i) = e.pivot_row.get(c) {
            let neg = -x.clone();
            out.axpy(&neg, &e.rows[i]);
        }
    }
    out
}

/// Complement of the row space spanned by `span`, as the list of non-pivot columns,
/// together with the reducer that rewrites vectors onto them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBasis {
    pub basis: Vec<usize>,
    pub reducer: Echelon,
    position: BTreeMap<usize, usize>,
}

impl QuotientBasis {
    pub fn from_echelon(reducer: Echelon) -> Self {
        let basis: Vec<usize> = (0..reducer.ncols).filter(|c| !reducer.is_pivot(*c)).collect();
        let position = basis.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        QuotientBasis {
            basis,
            reducer,
            position,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Index of an ambient column within the basis, if it is a basis column.
    pub fn basis_index(&self, col: usize) -> Option<usize> {
        self.position.get(&col).copied()
    }

    /// Coordinates of an ambient vector on the quotient basis.
    pub fn coordinates(&self, v: &SparseVec) -> SparseVec {
        let r = reduce(v, &self.reducer);
        SparseVec {
            entries: r
                .into_entries()
                .into_iter()
                .map(|(c, x)| (self.position[&c], x))
                .collect(),
        }
    }
}

pub fn quotient_basis(span: &SparseMatrix) -> QuotientBasis {
    QuotientBasis::from_echelon(rref(span))
}
