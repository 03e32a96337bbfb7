use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::Add;

/// First (sign-carrying) and second (weight) degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BiDegree {
    pub h: u32,
    pub w: u32,
}

impl BiDegree {
    pub const ZERO: BiDegree = BiDegree { h: 0, w: 0 };

    pub const fn new(h: u32, w: u32) -> Self {
        BiDegree { h, w }
    }

    /// Koszul parity.
    pub fn is_odd(self) -> bool {
        self.h % 2 == 1
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.h + o.h, self.w + o.w)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.h, self.w)
    }
}

/// `(-1)^(p*q)` for the first degrees of two factors.
pub fn koszul(p: BiDegree, q: BiDegree) -> i64 {
    if p.is_odd() && q.is_odd() {
        -1
    } else {
        1
    }
}

/// Bigraded dimension table. Zero entries are never stored.
/// Serialized as a list of `{h, w, dim}` records.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimTable(pub BTreeMap<BiDegree, usize>);

impl DimTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = ((u32, u32), usize)>>(pairs: I) -> Self {
        let mut t = DimTable::new();
        for ((h, w), d) in pairs {
            t.add(BiDegree::new(h, w), d);
        }
        t
    }

    pub fn add(&mut self, d: BiDegree, n: usize) {
        if n == 0 {
            return;
        }
        *self.0.entry(d).or_insert(0) += n;
    }

    pub fn get(&self, d: BiDegree) -> usize {
        self.0.get(&d).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (BiDegree, usize)> + '_ {
        self.0.iter().map(|(d, n)| (*d, *n))
    }

    /// Bigraded product of Hilbert series.
    pub fn convolve(&self, other: &DimTable) -> DimTable {
        let mut out = DimTable::new();
        for (a, x) in self.iter() {
            for (b, y) in other.iter() {
                out.add(a + b, x * y);
            }
        }
        out
    }

    /// Restriction to degrees satisfying `keep`.
    pub fn filter<F: Fn(BiDegree) -> bool>(&self, keep: F) -> DimTable {
        DimTable(self.0.iter().filter(|(d, _)| keep(**d)).map(|(d, n)| (*d, *n)).collect())
    }
}

impl fmt::Display for DimTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (d, n)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{}):{}", d.h, d.w, n)?;
        }
        write!(f, "}}")
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::{BiDegree, DimTable};
    use alloc::vec::Vec;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        h: u32,
        w: u32,
        dim: usize,
    }

    impl Serialize for DimTable {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(self.0.iter().map(|(d, n)| Entry { h: d.h, w: d.w, dim: *n }))
        }
    }

    impl<'de> Deserialize<'de> for DimTable {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let v = Vec::<Entry>::deserialize(d)?;
            Ok(DimTable(v.into_iter().filter(|e| e.dim > 0).map(|e| (BiDegree::new(e.h, e.w), e.dim)).collect()))
        }
    }
}
