//! Partitions of the directions `(i, plus)` of an `N`-rose as `BTreeSet`s.

use std::collections::BTreeSet;

pub type Dir = (u8, bool);
pub type Side = BTreeSet<Dir>;

pub fn directions(rank: u8) -> Vec<Dir> {
    (1..=rank).flat_map(|i| [(i, true), (i, false)]).collect()
}

pub fn complement(rank: u8, s: &Side) -> Side {
    directions(rank).into_iter().filter(|d| !s.contains(d)).collect()
}

/// Every unordered split of the directions into two nonempty sides, each
/// listed once as the side avoiding `(1, true)`.
pub fn bipartitions(rank: u8) -> Vec<Side> {
    let dirs = directions(rank);
    let mut out = Vec::new();
    for mask in 1u64..(1 << dirs.len()) {
        let side: Side = dirs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, d)| *d).collect();
        if !side.contains(&(1, true)) {
            out.push(side);
        }
    }
    out
}

pub fn separates_some_pair(side: &Side) -> bool {
    side.iter().any(|&(i, s)| !side.contains(&(i, !s)))
}

pub fn is_ideal(rank: u8, side: &Side) -> bool {
    !side.is_empty() && side.len() < 2 * rank as usize && separates_some_pair(side)
}

pub fn is_thick(rank: u8, side: &Side) -> bool {
    side.len() >= 2 && 2 * rank as usize - side.len() >= 2
}

pub fn ideal_count(rank: u8) -> usize {
    bipartitions(rank).iter().filter(|s| is_ideal(rank, s)).count()
}

pub fn thick_ideal_count(rank: u8) -> usize {
    bipartitions(rank).iter().filter(|s| is_ideal(rank, s) && is_thick(rank, s)).count()
}

/// Ideal partitions with `{x_i^+}` and `{x_i^-}` counted once.
pub fn class_count(rank: u8) -> usize {
    let petals: BTreeSet<u8> = bipartitions(rank)
        .iter()
        .filter(|s| is_ideal(rank, s) && !is_thick(rank, s))
        .map(|s| {
            let single = if s.len() == 1 { s.clone() } else { complement(rank, s) };
            single.iter().next().unwrap().0
        })
        .collect();
    thick_ideal_count(rank) + petals.len()
}

pub fn crosses(rank: u8, p: &Side, q: &Side) -> bool {
    let (p2, q2) = (complement(rank, p), complement(rank, q));
    [p, &p2].iter().all(|a| [q, &q2].iter().all(|b| a.intersection(b).next().is_some()))
}

/// Rose compatibility by building the joint blow-up: a path `p - v - q`
/// carrying the two partition edges, directions placed at `p` (side `P1`),
/// `q` (side `Q1`) or `v`, each petal joining its two directions' vertices.
/// Collapsing every petal, the pair is rose compatible exactly when both
/// path edges become loops. `None` when the partitions cross or coincide.
pub fn rose_compatible(rank: u8, p: &Side, q: &Side) -> Option<bool> {
    if crosses(rank, p, q) || p == q || *p == complement(rank, q) {
        return None;
    }
    let (p2, q2) = (complement(rank, p), complement(rank, q));
    let (p1, q1) = [(p, q), (p, &q2), (&p2, q), (&p2, &q2)]
        .into_iter()
        .find(|(a, b)| a.is_disjoint(b))
        .expect("compatible partitions have disjoint sides");
    // vertices: 0 = p, 1 = v, 2 = q
    let place = |d: &Dir| if p1.contains(d) { 0 } else if q1.contains(d) { 2 } else { 1 };
    let mut parent = [0usize, 1, 2];
    fn find(parent: &mut [usize; 3], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        r
    }
    for i in 1..=rank {
        let (a, b) = (place(&(i, true)), place(&(i, false)));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let root = |x| find(&mut parent.clone(), x);
    Some(root(0) == root(1) && root(1) == root(2))
}
