use core::fmt;

/// A leaf or vertex label. Ordinary labels are small integers; the two composition
/// place-holders sort after every ordinary label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom(pub u32);

impl Atom {
    pub const HASH: Atom = Atom(u32::MAX - 1);
    pub const STAR: Atom = Atom(u32::MAX);

    pub fn is_placeholder(self) -> bool {
        self == Atom::STAR || self == Atom::HASH
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::STAR => f.write_str("*"),
            Atom::HASH => f.write_str("#"),
            Atom(n) => write!(f, "{n}"),
        }
    }
}

/// Labels `1..=n`, the standard label set of cardinality `n`.
pub fn standard_labels(n: usize) -> alloc::vec::Vec<Atom> {
    (1..=n as u32).map(Atom).collect()
}

/// Sign of the permutation sorting `xs`, or `None` on a repeated element.
pub fn sort_sign<T: Ord>(xs: &[T]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            match xs[i].cmp(&xs[j]) {
                core::cmp::Ordering::Greater => sign = -sign,
                core::cmp::Ordering::Equal => return None,
                core::cmp::Ordering::Less => {}
            }
        }
    }
    Some(sign)
}

impl Atom {
    /// Extra place-holders used when grafting into the inputs of a relation.
    pub fn slot(k: u32) -> Atom {
        Atom(u32::MAX - 2 - k)
    }
}

/// Order-preserving bijection from a sorted label list onto `1..=n`.
/// Canonical forms and monomial orders survive it unchanged, which is how a component
/// computed on `1..=n` is transported to any label set of the same size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    labels: alloc::vec::Vec<Atom>,
}

impl Transport {
    pub fn new<I: IntoIterator<Item = Atom>>(labels: I) -> Self {
        let mut labels: alloc::vec::Vec<Atom> = labels.into_iter().collect();
        labels.sort();
        labels.dedup();
        Transport { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Atom] {
        &self.labels
    }

    pub fn to_standard(&self, a: Atom) -> Option<Atom> {
        self.labels.binary_search(&a).ok().map(|k| Atom(k as u32 + 1))
    }

    pub fn from_standard(&self, a: Atom) -> Atom {
        self.labels[a.0 as usize - 1]
    }
}
