use std::collections::BTreeMap;

use serde::Serialize;

use super::automorphism::WhiteheadMove;
use super::word::{letter_code, letter_from_code, Word};
use crate::error::{Error, Result};

/// Multigraph on the `2N` letters: each cyclically adjacent pair `(u, v)`
/// of the cyclic reduction contributes the edge `{u, v⁻¹}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WhiteheadGraph {
    rank: u8,
    /// Keyed by letter-code pairs `(lo, hi)`.
    edges: BTreeMap<(u32, u32), usize>,
}

impl WhiteheadGraph {
    pub fn of(w: &Word) -> Result<WhiteheadGraph> {
        let c = w.cyclic_reduce();
        if c.is_empty() {
            return Err(Error::TrivialWord);
        }
        let l = c.letters();
        let n = l.len();
        let mut edges = BTreeMap::new();
        for k in 0..n {
            let (u, v) = (letter_code(l[k]), letter_code(-l[(k + 1) % n]));
            *edges.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
        Ok(WhiteheadGraph { rank: w.rank(), edges })
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.rank as usize
    }

    pub fn multiplicity(&self, a: i8, b: i8) -> usize {
        let (u, v) = (letter_code(a), letter_code(b));
        self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.edges.values().sum()
    }

    pub fn degree(&self, a: i8) -> usize {
        let c = letter_code(a);
        self.edges.iter().filter(|((u, v), _)| *u == c || *v == c).map(|(_, m)| m).sum()
    }

    /// Letters joined to `a` by at least one edge.
    pub fn neighbours(&self, a: i8) -> Vec<i8> {
        let c = letter_code(a);
        self.edges
            .keys()
            .filter_map(|&(u, v)| if u == c { Some(v) } else if v == c { Some(u) } else { None })
            .map(letter_from_code)
            .collect()
    }

    fn connected_avoiding(&self, removed: Option<u32>) -> bool {
        let n = self.vertex_count() as u32;
        let Some(start) = (0..n).find(|&v| Some(v) != removed) else {
            return true;
        };
        let mut seen = vec![false; n as usize];
        let mut stack = vec![start];
        seen[start as usize] = true;
        while let Some(x) = stack.pop() {
            for &(u, v) in self.edges.keys() {
                let other = if u == x { v } else if v == x { u } else { continue };
                if Some(other) != removed && !seen[other as usize] {
                    seen[other as usize] = true;
                    stack.push(other);
                }
            }
        }
        (0..n).all(|v| seen[v as usize] || Some(v) == removed)
    }

    /// Connectivity over all `2N` letters, so unused letters disconnect.
    pub fn is_connected(&self) -> bool {
        self.connected_avoiding(None)
    }

    pub fn cut_vertices(&self) -> Vec<i8> {
        if !self.is_connected() {
            return Vec::new();
        }
        (0..self.vertex_count() as u32)
            .filter(|&v| !self.connected_avoiding(Some(v)))
            .map(letter_from_code)
            .collect()
    }

    /// Change in cyclic length caused by the Whitehead move: the number of
    /// edges leaving `A` minus the degree of the multiplier.
    pub fn length_change(&self, m: &WhiteheadMove) -> i64 {
        let inside = |c: u32| m.set() & (1 << c) != 0;
        let cut: usize = self.edges.iter().filter(|((u, v), _)| inside(*u) != inside(*v)).map(|(_, k)| k).sum();
        cut as i64 - self.degree(m.multiplier()) as i64
    }
}

pub fn whitehead_graph(w: &Word) -> Result<WhiteheadGraph> {
    WhiteheadGraph::of(w)
}

pub fn connected_no_cutvertex(g: &WhiteheadGraph) -> bool {
    g.is_connected() && g.cut_vertices().is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minimization {
    pub start: Word,
    pub minimum: Word,
    pub moves: Vec<WhiteheadMove>,
}

/// Greedy Whitehead minimisation of the cyclic reduction. Each step takes
/// the move with the largest length drop, the first in [`WhiteheadMove::all`]
/// order on ties, and stops when nothing shortens the word.
pub fn whitehead_minimize(w: &Word) -> Result<Minimization> {
    let mut cur = w.cyclic_reduce();
    if cur.is_empty() {
        return Err(Error::TrivialWord);
    }
    let all = WhiteheadMove::all(w.rank());
    let mut moves = Vec::new();
    loop {
        let g = WhiteheadGraph::of(&cur)?;
        let best = all
            .iter()
            .map(|m| (g.length_change(m), m))
            .filter(|(d, _)| *d < 0)
            .min_by_key(|(d, _)| *d);
        let Some((drop, m)) = best else { break };
        let next = m.apply(&cur).cyclic_reduce();
        debug_assert_eq!(next.len() as i64, cur.len() as i64 + drop);
        moves.push(*m);
        cur = next;
    }
    Ok(Minimization { start: w.clone(), minimum: cur, moves })
}

/// Whether `w` lies in a proper free factor.
pub fn is_simple(w: &Word) -> Result<bool> {
    let min = whitehead_minimize(w)?;
    Ok(!connected_no_cutvertex(&WhiteheadGraph::of(&min.minimum)?))
}
