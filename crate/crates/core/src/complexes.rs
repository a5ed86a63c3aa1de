//! Finite pieces of the splitting complexes: the star graph of the base rose,
//! clique enumeration, the clique test for cagey pairs, and the local graph
//! of roses.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::blowup::{blow_up, classify_shape};
use crate::error::{Error, Result};
use crate::partition::{enumerate_classes, Partition, RoseMove, SplittingClass};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphMode {
    /// Rose-compatible pairs only.
    Ens,
    /// Every compatible pair.
    Ns,
}

/// Induced subgraph of the splitting graph on the universe of the base rose.
#[derive(Clone, Debug)]
pub struct SplittingGraph {
    rank: u8,
    mode: GraphMode,
    vertices: Vec<SplittingClass>,
    adjacency: Vec<FixedBitSet>,
    index: HashMap<Partition, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingGraphExport {
    pub rank: u8,
    pub mode: GraphMode,
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
}

impl SplittingGraph {
    pub fn build(rank: u8, mode: GraphMode) -> Result<SplittingGraph> {
        Ok(SplittingGraph::from_classes(rank, mode, enumerate_classes(rank)?))
    }

    /// Vertices keep the given order.
    pub fn from_classes(rank: u8, mode: GraphMode, vertices: Vec<SplittingClass>) -> SplittingGraph {
        let n = vertices.len();
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in i + 1..n {
                let (s, t) = (&vertices[i], &vertices[j]);
                let edge = match mode {
                    GraphMode::Ens => s.rose_compatible(t),
                    GraphMode::Ns => !s.crosses(t),
                };
                if edge {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        let index = vertices.iter().enumerate().map(|(i, c)| (*c.representative(), i)).collect();
        SplittingGraph { rank, mode, vertices, adjacency, index }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[SplittingClass] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &SplittingClass {
        &self.vertices[i]
    }

    pub fn index_of(&self, c: &SplittingClass) -> Option<usize> {
        self.index.get(c.representative()).copied()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn neighbours(&self, i: usize) -> &FixedBitSet {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count_ones(..)
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        (0..self.len()).flat_map(|i| self.adjacency[i].ones().filter(move |&j| j > i).map(move |j| [i, j])).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_clique(&self, members: &[usize]) -> bool {
        members.iter().enumerate().all(|(k, &i)| members[k + 1..].iter().all(|&j| self.adjacent(i, j)))
    }

    fn all_vertices(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        s.insert_range(..);
        s
    }

    /// Every clique of exactly `size` vertices, each listed in increasing
    /// index order, in lexicographic order.
    pub fn cliques_of_size(&self, size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.grow_cliques(&mut Vec::new(), self.all_vertices(), size, &mut |c| {
            out.push(c.to_vec());
            true
        });
        out
    }

    /// First clique (lexicographically) of `size` vertices drawn from `pool`.
    pub fn find_clique_within(&self, pool: &FixedBitSet, size: usize) -> Option<Vec<usize>> {
        let mut found = None;
        self.grow_cliques(&mut Vec::new(), pool.clone(), size, &mut |c| {
            found = Some(c.to_vec());
            false
        });
        found
    }

    /// Returns false once `visit` asks to stop.
    fn grow_cliques(
        &self,
        current: &mut Vec<usize>,
        candidates: FixedBitSet,
        size: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if current.len() == size {
            return visit(current);
        }
        if current.len() + candidates.count_ones(..) < size {
            return true;
        }
        for v in candidates.ones() {
            let mut next = candidates.clone();
            next.intersect_with(&self.adjacency[v]);
            next.set_range(..v + 1, false);
            current.push(v);
            let go_on = self.grow_cliques(current, next, size, visit);
            current.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Maximal cliques by Bron–Kerbosch with pivoting. The pivot is the
    /// candidate of highest degree into `P`, lowest index on ties. Output is
    /// sorted.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let x = FixedBitSet::with_capacity(self.len());
        self.bron_kerbosch(&mut Vec::new(), self.all_vertices(), x, &mut out);
        out.sort();
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, mut p: FixedBitSet, mut x: FixedBitSet, out: &mut Vec<Vec<usize>>) {
        if p.is_clear() && x.is_clear() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| (self.adjacency[u].intersection(&p).count(), std::cmp::Reverse(u)))
            .expect("P or X nonempty");
        let mut branch = p.clone();
        branch.difference_with(&self.adjacency[pivot]);
        for v in branch.ones().collect::<Vec<_>>() {
            let mut np = p.clone();
            np.intersect_with(&self.adjacency[v]);
            let mut nx = x.clone();
            nx.intersect_with(&self.adjacency[v]);
            r.push(v);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
    }

    pub fn max_clique_size(&self) -> usize {
        self.maximal_cliques().iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn export(&self) -> SplittingGraphExport {
        SplittingGraphExport {
            rank: self.rank,
            mode: self.mode,
            vertices: self.vertices.iter().map(SplittingClass::encode).collect(),
            edges: self.edges(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (i, c) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", c.encode());
        }
        for [i, j] in self.edges() {
            let _ = writeln!(out, "  v{i} -- v{j};");
        }
        out.push_str("}\n");
        out
    }
}

/// Where a clique witness for a cagey pair was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CageyWitness {
    /// `None` for the base rose; otherwise the move to the neighbouring rose
    /// in whose coordinates `sigma` is written.
    pub rose_move: Option<RoseMove>,
    pub sigma: Vec<SplittingClass>,
}

/// Searches for a clique `Σ` of `3N-4` pairwise rose-compatible splittings
/// such that `Σ ∪ {s}` and `Σ ∪ {t}` are both cliques.
///
/// The base universe alone misses witnesses for some cagey pairs, so the
/// search also runs in the universe of every rose one move away (blow up a
/// thick edge, collapse a petal it separates). Those universes are copies of
/// the base one, so the same graph is reused after translating `s` and `t`.
pub struct CageyOracle {
    graph: SplittingGraph,
    moves: Vec<RoseMove>,
}

impl CageyOracle {
    pub fn new(rank: u8) -> Result<CageyOracle> {
        Ok(CageyOracle { graph: SplittingGraph::build(rank, GraphMode::Ens)?, moves: RoseMove::all(rank)? })
    }

    pub fn graph(&self) -> &SplittingGraph {
        &self.graph
    }

    pub fn clique_target(&self) -> usize {
        3 * self.graph.rank as usize - 3
    }

    fn check(&self, s: &SplittingClass, t: &SplittingClass) -> Result<()> {
        for c in [s, t] {
            if c.rank() != self.graph.rank {
                return Err(Error::RankMismatch(c.rank(), self.graph.rank));
            }
        }
        if s == t {
            return Err(Error::SameSplitting);
        }
        Ok(())
    }

    fn search(&self, s: &SplittingClass, t: &SplittingClass) -> Option<Vec<SplittingClass>> {
        let (i, j) = (self.graph.index_of(s)?, self.graph.index_of(t)?);
        let mut pool = self.graph.neighbours(i).clone();
        pool.intersect_with(self.graph.neighbours(j));
        let sigma = self.graph.find_clique_within(&pool, self.clique_target() - 1)?;
        Some(sigma.into_iter().map(|k| self.graph.vertices[k]).collect())
    }

    /// Witness inside the base universe only.
    pub fn witness_in_universe(&self, s: &SplittingClass, t: &SplittingClass) -> Result<Option<Vec<SplittingClass>>> {
        self.check(s, t)?;
        Ok(self.search(s, t))
    }

    pub fn witness(&self, s: &SplittingClass, t: &SplittingClass) -> Result<Option<CageyWitness>> {
        self.check(s, t)?;
        if let Some(sigma) = self.search(s, t) {
            return Ok(Some(CageyWitness { rose_move: None, sigma }));
        }
        for m in &self.moves {
            let (Some(s2), Some(t2)) = (m.apply_class(s), m.apply_class(t)) else { continue };
            if let Some(sigma) = self.search(&s2, &t2) {
                return Ok(Some(CageyWitness { rose_move: Some(*m), sigma }));
            }
        }
        Ok(None)
    }

    pub fn cagey_by_cliques(&self, s: &SplittingClass, t: &SplittingClass) -> Result<bool> {
        Ok(self.witness(s, t)?.is_some())
    }
}

pub fn cagey_by_cliques(s: &SplittingClass, t: &SplittingClass) -> Result<bool> {
    CageyOracle::new(s.rank())?.cagey_by_cliques(s, t)
}

/// `N` pairwise compatible classes whose blow-up is an `N`-petal rose with
/// trivial vertex group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RoseVertex {
    pub classes: Vec<SplittingClass>,
}

impl RoseVertex {
    pub fn new(rank: u8, mut classes: Vec<SplittingClass>) -> Result<Option<RoseVertex>> {
        classes.sort();
        if classes.len() != rank as usize {
            return Ok(None);
        }
        let shape = classify_shape(&blow_up(&classes, rank)?);
        Ok((shape.is_rose(rank as usize) && shape.trivial_vertex_groups).then_some(RoseVertex { classes }))
    }

    pub fn base(rank: u8) -> Result<RoseVertex> {
        let petals = (1..=rank).map(|i| SplittingClass::petal(rank, i)).collect::<Result<Vec<_>>>()?;
        Ok(RoseVertex { classes: petals })
    }
}

/// Largest rank for which roses are enumerated exhaustively.
pub const K_GRAPH_MAX_RANK: u8 = 4;

fn k_rank_guard(rank: u8) -> Result<()> {
    if !(3..=K_GRAPH_MAX_RANK).contains(&rank) {
        return Err(Error::RankOutOfRange { rank, min: 3, max: K_GRAPH_MAX_RANK });
    }
    Ok(())
}

/// Every rose vertex whose classes lie in the universe, sorted.
pub fn rose_vertices(rank: u8) -> Result<Vec<RoseVertex>> {
    k_rank_guard(rank)?;
    let g = SplittingGraph::build(rank, GraphMode::Ens)?;
    let mut out = Vec::new();
    for c in g.cliques_of_size(rank as usize) {
        let classes = c.iter().map(|&i| g.vertices[i]).collect();
        if let Some(r) = RoseVertex::new(rank, classes)? {
            out.push(r);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct KGraph {
    pub rank: u8,
    pub vertices: Vec<RoseVertex>,
    /// Pairs of roses sharing `N-1` classes whose two remaining classes are
    /// rose compatible.
    pub edges: Vec<[usize; 2]>,
}

impl KGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }
}

pub fn k_graph_local(rank: u8) -> Result<KGraph> {
    let vertices = rose_vertices(rank)?;
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let (a, b) = (&vertices[i].classes, &vertices[j].classes);
            let only_a: Vec<_> = a.iter().filter(|c| !b.contains(c)).collect();
            let only_b: Vec<_> = b.iter().filter(|c| !a.contains(c)).collect();
            if only_a.len() == 1 && only_b.len() == 1 && only_a[0].rose_compatible(only_b[0]) {
                edges.push([i, j]);
            }
        }
    }
    Ok(KGraph { rank, vertices, edges })
}
