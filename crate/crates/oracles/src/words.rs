//! Words as `Vec<i32>` and a breadth-first search for simplicity over short
//! products of Whitehead automorphisms.

use std::collections::{BTreeSet, VecDeque};

pub fn reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Vec<i32> {
    let mut v = reduce(w);
    while v.len() >= 2 && v[0] == -v[v.len() - 1] {
        v.remove(0);
        v.pop();
    }
    v
}

/// Least rotation of the cyclic reduction.
pub fn canonical(w: &[i32]) -> Vec<i32> {
    let c = cyclic_reduce(w);
    (0..c.len().max(1))
        .map(|k| c[k.min(c.len())..].iter().chain(&c[..k.min(c.len())]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn alphabet(rank: u8) -> Vec<i32> {
    (1..=rank as i32).flat_map(|i| [i, -i]).collect()
}

/// Every cyclically reduced word of length `1..=max_len`.
pub fn cyclically_reduced_words(rank: u8, max_len: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in alphabet(rank) {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().filter(|w| w[0] != -w[w.len() - 1]).cloned());
        layer = next;
    }
    out
}

/// A Whitehead automorphism: multiplier `a`, set `A` (with `a ∈ A`,
/// `a⁻¹ ∉ A`).
#[derive(Clone, Debug)]
pub struct Whitehead {
    pub a: i32,
    pub set: BTreeSet<i32>,
}

pub fn whitehead_automorphisms(rank: u8) -> Vec<Whitehead> {
    let letters = alphabet(rank);
    let mut out = Vec::new();
    for &a in &letters {
        let others: Vec<i32> = letters.iter().copied().filter(|l| l.abs() != a.abs()).collect();
        for mask in 0u32..(1 << others.len()) {
            let mut set: BTreeSet<i32> = [a].into();
            set.extend(others.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, l)| *l));
            if set.len() > 1 {
                out.push(Whitehead { a, set });
            }
        }
    }
    out
}

fn image(phi: &Whitehead, x: i32) -> Vec<i32> {
    let a = phi.a;
    if x.abs() == a.abs() {
        return vec![x];
    }
    // image of the letter x (possibly inverse): x -> [a^-1 if x^-1 in A] x [a if x in A]
    let mut v = Vec::new();
    if phi.set.contains(&-x) {
        v.push(-a);
    }
    v.push(x);
    if phi.set.contains(&x) {
        v.push(a);
    }
    v
}

pub fn apply(phi: &Whitehead, w: &[i32]) -> Vec<i32> {
    reduce(&w.iter().flat_map(|&l| image(phi, l)).collect::<Vec<_>>())
}

pub fn omits_generator(rank: u8, w: &[i32]) -> bool {
    let c = cyclic_reduce(w);
    (1..=rank as i32).any(|i| !c.iter().any(|l| l.abs() == i))
}

/// Search over images of `w` under products of at most `depth` Whitehead
/// automorphisms for one whose cyclic reduction omits a generator. Only
/// images no longer than `w` are kept; peak reduction says a shortest path
/// to a minimal representative never climbs above the starting length.
pub fn simple_by_search(rank: u8, w: &[i32], depth: usize) -> bool {
    let start = canonical(w);
    let cap = start.len();
    let moves = whitehead_automorphisms(rank);
    let mut seen: BTreeSet<Vec<i32>> = [start.clone()].into();
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((u, d)) = queue.pop_front() {
        if omits_generator(rank, &u) {
            return true;
        }
        if d == depth {
            continue;
        }
        for phi in &moves {
            let v = canonical(&apply(phi, &u));
            if v.len() <= cap && seen.insert(v.clone()) {
                queue.push_back((v, d + 1));
            }
        }
    }
    false
}
