#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use ramop_core::graph::{letter, Color, GraphMonomial, Letter};
use ramop_core::operad::{Generator, Tree, E, L, OMEGA};
use ramop_core::Atom;

pub const RAM_GENERATORS: [Generator; 3] = [E, L, OMEGA];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atoms(xs: &[u32]) -> Vec<Atom> {
    xs.iter().map(|&k| Atom(k)).collect()
}

pub fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

pub fn shuffle<T>(rng: &mut ChaCha8Rng, xs: &mut [T]) {
    for i in (1..xs.len()).rev() {
        let j = below(rng, i + 1);
        xs.swap(i, j);
    }
}

/// Random binary tree on `labels` (any order, any shape), not canonicalized.
pub fn random_tree(rng: &mut ChaCha8Rng, labels: &[Atom], gens: &[Generator]) -> Tree {
    let mut ls = labels.to_vec();
    shuffle(rng, &mut ls);
    build(rng, &ls, gens)
}

fn build(rng: &mut ChaCha8Rng, ls: &[Atom], gens: &[Generator]) -> Tree {
    if ls.len() == 1 {
        return Tree::Leaf(ls[0]);
    }
    let k = 1 + below(rng, ls.len() - 1);
    let g = gens[below(rng, gens.len())];
    Tree::node(g, build(rng, &ls[..k], gens), build(rng, &ls[k..], gens))
}

/// Random word of edges with distinct pairs on `labels`; `None` if a pair repeats.
pub fn random_word(rng: &mut ChaCha8Rng, labels: &[Atom], colors: &[Color], len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| {
            let i = below(rng, labels.len());
            let mut j = below(rng, labels.len() - 1);
            if j >= i {
                j += 1;
            }
            letter(colors[below(rng, colors.len())], labels[i], labels[j])
        })
        .collect()
}

pub fn random_monomial(rng: &mut ChaCha8Rng, labels: &[Atom], colors: &[Color], len: usize) -> Option<GraphMonomial> {
    GraphMonomial::from_word(&random_word(rng, labels, colors, len)).map(|(_, m)| m)
}
