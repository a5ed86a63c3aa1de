//! Graphs of groups obtained by blowing up the rose along a compatible family
//! of partitions and collapsing the petals that are not in the family, plus
//! shape classification of the resulting quotient graphs.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{
    corner_sets, crosses, Direction, DirectionSet, Partition, SplittingClass,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum EdgeLabel {
    Petal(u8),
    Partition(Partition),
    None,
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Petal(i) => write!(f, "x{i}"),
            EdgeLabel::Partition(p) => write!(f, "{}", p.encode()),
            EdgeLabel::None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphVertex {
    pub id: usize,
    pub free_rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub id: usize,
    pub ends: [usize; 2],
    pub label: EdgeLabel,
}

impl GraphEdge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

/// A finite connected graph with a free rank on every vertex.
///
/// Invariant: `(#edges - #vertices + 1) + Σ free ranks = rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphOfGroups {
    pub rank: u8,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false when already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

impl GraphOfGroups {
    /// Build from vertex ranks and edges, deriving the ambient rank.
    pub fn from_parts(free_ranks: Vec<u32>, edges: Vec<(usize, usize, EdgeLabel)>) -> Result<GraphOfGroups> {
        let betti = edges.len() as i64 - free_ranks.len() as i64 + 1;
        let total = betti + free_ranks.iter().map(|&r| r as i64).sum::<i64>();
        let g = GraphOfGroups {
            rank: u8::try_from(total).map_err(|_| Error::Precondition(format!("total rank {total}")))?,
            vertices: free_ranks.into_iter().enumerate().map(|(id, free_rank)| GraphVertex { id, free_rank }).collect(),
            edges: edges.into_iter().enumerate().map(|(id, (a, b, label))| GraphEdge { id, ends: [a, b], label }).collect(),
        };
        g.validate()?;
        Ok(g)
    }

    /// Checks connectivity, endpoint ranges and rank conservation.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::Precondition("graph of groups without vertices".into()));
        }
        if let Some(e) = self.edges.iter().find(|e| e.ends.iter().any(|&v| v >= n)) {
            return Err(Error::Precondition(format!("edge {} has an endpoint out of range", e.id)));
        }
        if !self.connected_without(&[]) {
            return Err(Error::Precondition("graph of groups is disconnected".into()));
        }
        if self.betti_number() + self.total_vertex_rank() != self.rank as i64 {
            return Err(Error::Precondition(format!(
                "rank conservation fails: b1 {} + vertex ranks {} != {}",
                self.betti_number(),
                self.total_vertex_rank(),
                self.rank
            )));
        }
        Ok(())
    }

    pub fn betti_number(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn total_vertex_rank(&self) -> i64 {
        self.vertices.iter().map(|v| v.free_rank as i64).sum()
    }

    /// Valence of each vertex; a loop counts twice.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertices.len()];
        for e in &self.edges {
            val[e.ends[0]] += 1;
            val[e.ends[1]] += 1;
        }
        val
    }

    fn connected_without(&self, removed: &[usize]) -> bool {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            if !removed.contains(&e.id) {
                uf.union(e.ends[0], e.ends[1]);
            }
        }
        (0..self.vertices.len()).all(|v| uf.find(v) == uf.find(0))
    }

    pub fn is_separating_edge(&self, edge: usize) -> bool {
        !self.edges[edge].is_loop() && !self.connected_without(&[edge])
    }

    /// After collapsing every other edge, do `e` and `f` both become loops
    /// at a single vertex (a two-petal rose)?
    pub fn edges_rose_compatible(&self, e: usize, f: usize) -> bool {
        let mut uf = UnionFind::new(self.vertices.len());
        for g in &self.edges {
            if g.id != e && g.id != f {
                uf.union(g.ends[0], g.ends[1]);
            }
        }
        [e, f].iter().all(|&x| {
            let [a, b] = self.edges[x].ends;
            uf.find(a) == uf.find(b)
        })
    }

    pub fn all_edges_pairwise_rose_compatible(&self) -> bool {
        let m = self.edges.len();
        (0..m).all(|e| (e + 1..m).all(|f| self.edges_rose_compatible(e, f)))
    }

    /// Graphviz rendering; vertex labels are free ranks, edge labels the
    /// partition or petal each edge comes from.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  v{} [label=\"{}\"];", v.id, v.free_rank);
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.ends[0], e.ends[1], e.label);
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub loop_count: usize,
    /// Vertex valences in decreasing order.
    pub valence_profile: Vec<usize>,
    pub vertex_ranks: Vec<u32>,
    pub has_separating_edge: bool,
    /// Two edges, neither separating on its own, whose removal disconnects.
    pub has_separating_edge_pair: bool,
    /// `Some(k)` for a single vertex carrying `k` loops.
    pub rose_petals: Option<usize>,
    /// `Some(k)` for two vertices joined by `k` edges and no loops.
    pub cage_edges: Option<usize>,
    pub is_theta_with_loop: bool,
    pub trivial_vertex_groups: bool,
    /// Canonical form of the underlying graph (ranks ignored); omitted for
    /// graphs too symmetric for the brute-force labeller.
    pub signature: Option<String>,
}

impl ShapeReport {
    pub fn is_rose(&self, k: usize) -> bool {
        self.rose_petals == Some(k)
    }

    pub fn is_cage(&self, k: usize) -> bool {
        self.cage_edges == Some(k)
    }
}

pub fn classify_shape(g: &GraphOfGroups) -> ShapeReport {
    let valences = g.valences();
    let mut profile = valences.clone();
    profile.sort_unstable_by(|a, b| b.cmp(a));
    let loops = g.edges.iter().filter(|e| e.is_loop()).count();
    let m = g.edges.len();
    let separating: Vec<bool> = (0..m).map(|e| g.is_separating_edge(e)).collect();
    let has_pair = (0..m).any(|e| {
        (e + 1..m).any(|f| !separating[e] && !separating[f] && !g.connected_without(&[e, f]))
    });
    let n = g.vertices.len();
    let rose_petals = (n == 1).then_some(m);
    let cage_edges = (n == 2 && loops == 0).then_some(m);
    let is_theta_with_loop = n == 2 && m == 4 && loops == 1;
    ShapeReport {
        vertex_count: n,
        edge_count: m,
        loop_count: loops,
        valence_profile: profile,
        vertex_ranks: g.vertices.iter().map(|v| v.free_rank).collect(),
        has_separating_edge: separating.iter().any(|&s| s),
        has_separating_edge_pair: has_pair,
        rose_petals,
        cage_edges,
        is_theta_with_loop,
        trivial_vertex_groups: g.vertices.iter().all(|v| v.free_rank == 0),
        signature: canonical_signature(g, false),
    }
}

/// Upper bound on the labellings tried by [`canonical_signature`].
pub const MAX_LABELLINGS: u64 = 40_320;

/// Canonical string for the isomorphism class of the underlying multigraph
/// (with vertex ranks when `with_ranks`). Vertices are first sorted by
/// (rank, loops, valence); the lexicographically least edge list over all
/// relabellings inside those cells is kept. Returns `None` when the cells
/// allow more than [`MAX_LABELLINGS`] relabellings.
pub fn canonical_signature(g: &GraphOfGroups, with_ranks: bool) -> Option<String> {
    let n = g.vertices.len();
    let valences = g.valences();
    let mut loops = vec![0usize; n];
    for e in g.edges.iter().filter(|e| e.is_loop()) {
        loops[e.ends[0]] += 1;
    }
    let color = |v: usize| {
        let rank = if with_ranks { g.vertices[v].free_rank } else { 0 };
        (rank, loops[v], valences[v])
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(color(v)));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match cells.last_mut() {
            Some(cell) if color(cell[0]) == color(v) => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let labellings: u64 = cells.iter().map(|c| (1..=c.len() as u64).product::<u64>()).product();
    if labellings > MAX_LABELLINGS {
        return None;
    }

    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut label = vec![0usize; n];
    fn permute_cells(
        cells: &[Vec<usize>],
        offset: usize,
        label: &mut Vec<usize>,
        g: &GraphOfGroups,
        best: &mut Option<Vec<(usize, usize)>>,
    ) {
        let Some((cell, rest)) = cells.split_first() else {
            let mut edges: Vec<(usize, usize)> = g
                .edges
                .iter()
                .map(|e| {
                    let (a, b) = (label[e.ends[0]], label[e.ends[1]]);
                    (a.min(b), a.max(b))
                })
                .collect();
            edges.sort_unstable();
            if best.as_ref().is_none_or(|b| edges < *b) {
                *best = Some(edges);
            }
            return;
        };
        let mut perm = cell.clone();
        permutations(&mut perm, 0, &mut |p| {
            for (k, &v) in p.iter().enumerate() {
                label[v] = offset + k;
            }
            permute_cells(rest, offset + cell.len(), label, g, best);
        });
    }
    permute_cells(&cells, 0, &mut label, g, &mut best);

    let colors: Vec<String> = order
        .iter()
        .map(|&v| {
            let (r, l, d) = color(v);
            if with_ranks {
                format!("{d}/{l}/{r}")
            } else {
                format!("{d}/{l}")
            }
        })
        .collect();
    let edges: Vec<String> = best.unwrap_or_default().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    Some(format!("[{}]({})", colors.join(","), edges.join(",")))
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Blow up the rose along a family of splitting classes.
///
/// The thick members form a tree on the directions; petals are attached by
/// side membership, and every petal not in the family is collapsed (a loop
/// adds one to its vertex's free rank, a non-loop merges its endpoints).
pub fn blow_up(family: &[SplittingClass], rank: u8) -> Result<GraphOfGroups> {
    if let Some(c) = family.iter().find(|c| c.rank() != rank) {
        return Err(Error::RankMismatch(c.rank(), rank));
    }
    let parts: Vec<Partition> = family.iter().map(|c| *c.representative()).collect();
    blow_up_partitions(rank, &parts)
}

/// [`blow_up`] for arbitrary partitions, including separating ones.
/// Partitions naming the same splitting are merged first.
pub fn blow_up_partitions(rank: u8, family: &[Partition]) -> Result<GraphOfGroups> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if let Some(p) = family.iter().find(|p| p.rank() != rank) {
        return Err(Error::RankMismatch(p.rank(), rank));
    }
    let members: BTreeSet<Partition> = family.iter().map(Partition::class_representative).collect();
    let members: Vec<Partition> = members.into_iter().collect();
    for (i, p) in members.iter().enumerate() {
        for q in &members[i + 1..] {
            if crosses(p, q) {
                return Err(Error::Incompatible(*p, *q));
            }
        }
    }

    let mut tree = SplitTree::new(rank);
    let mut kept_petals = Vec::new();
    for p in &members {
        match p.petal_index() {
            Some(i) => kept_petals.push(i),
            None => tree.insert(p)?,
        }
    }

    let vertex_of = |d: Direction| tree.labels.iter().position(|l| l.contains(d)).expect("every direction is placed");
    let mut uf = UnionFind::new(tree.labels.len());
    let mut extra_rank = vec![0u32; tree.labels.len()];
    let mut petal_ends = Vec::new();
    for i in 1..=rank {
        let ends = [vertex_of(Direction::plus(i)), vertex_of(Direction::minus(i))];
        if kept_petals.contains(&i) {
            petal_ends.push((i, ends));
        } else if !uf.union(ends[0], ends[1]) {
            let root = uf.find(ends[0]);
            extra_rank[root] += 1;
        }
    }

    // renumber components in order of their smallest tree vertex
    let mut comp_id = vec![usize::MAX; tree.labels.len()];
    let mut free_ranks = Vec::new();
    for v in 0..tree.labels.len() {
        let r = uf.find(v);
        if comp_id[r] == usize::MAX {
            comp_id[r] = free_ranks.len();
            free_ranks.push(0u32);
        }
    }
    for v in 0..tree.labels.len() {
        free_ranks[comp_id[uf.find(v)]] += extra_rank[v];
    }
    let mut edges = Vec::new();
    for (a, b, p) in &tree.edges {
        edges.push((comp_id[uf.find(*a)], comp_id[uf.find(*b)], EdgeLabel::Partition(*p)));
    }
    for (i, [a, b]) in petal_ends {
        edges.push((comp_id[uf.find(a)], comp_id[uf.find(b)], EdgeLabel::Petal(i)));
    }
    let g = GraphOfGroups::from_parts(free_ranks, edges)?;
    debug_assert_eq!(g.rank, rank);
    Ok(g)
}

/// Tree of pairwise compatible thick splits, with directions placed at vertices.
struct SplitTree {
    rank: u8,
    labels: Vec<DirectionSet>,
    edges: Vec<(usize, usize, Partition)>,
}

impl SplitTree {
    fn new(rank: u8) -> SplitTree {
        SplitTree { rank, labels: vec![DirectionSet::full(rank)], edges: Vec::new() }
    }

    /// Directions beyond `edge` as seen from `from`.
    fn branch(&self, from: usize, edge: usize) -> DirectionSet {
        let (a, b, _) = self.edges[edge];
        let start = if a == from { b } else { a };
        let mut seen = vec![false; self.labels.len()];
        seen[from] = true;
        let mut stack = vec![start];
        let mut acc = DirectionSet::EMPTY;
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            acc = acc.union(self.labels[v]);
            for &(x, y, _) in &self.edges {
                if x == v && !seen[y] {
                    stack.push(y);
                } else if y == v && !seen[x] {
                    stack.push(x);
                }
            }
        }
        acc
    }

    fn insert(&mut self, p: &Partition) -> Result<()> {
        let [side_a, side_b] = p.sides();
        for v in 0..self.labels.len() {
            let incident: Vec<usize> =
                (0..self.edges.len()).filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v).collect();
            let branches: Vec<(usize, DirectionSet)> = incident.iter().map(|&e| (e, self.branch(v, e))).collect();
            if !branches.iter().all(|(_, s)| s.is_subset(side_a) || s.is_subset(side_b)) {
                continue;
            }
            let w = self.labels.len();
            self.labels.push(self.labels[v].intersection(side_b));
            self.labels[v] = self.labels[v].intersection(side_a);
            for (e, s) in branches {
                if s.is_subset(side_b) {
                    let edge = &mut self.edges[e];
                    if edge.0 == v {
                        edge.0 = w;
                    } else {
                        edge.1 = w;
                    }
                }
            }
            self.edges.push((v, w, *p));
            return Ok(());
        }
        let blocker = self.edges.iter().map(|e| e.2).find(|q| crosses(p, q)).unwrap_or(*p);
        debug_assert!(self.rank == p.rank());
        Err(Error::Incompatible(*p, blocker))
    }
}

/// The six quotient-graph shapes of a boundary splitting. In every shape
/// vertex 0 is the trivial vertex where the two crossing splittings blow up.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryType {
    /// Two edges to one vertex and a separating edge to each of two more vertices.
    SeparatingBridge,
    /// A loop at the trivial vertex and a separating edge to each of two vertices.
    LoopPlusBridge,
    /// The cage: four edges joining the trivial vertex to a single vertex.
    #[serde(rename = "cage-3")]
    Cage3,
    /// A loop at the trivial vertex and two edges to a second vertex.
    #[serde(rename = "cage-2-plus-loop")]
    Cage2PlusLoop,
    /// Two bigons at the trivial vertex, each leading to its own vertex.
    TwoLoopsBridge,
    /// A theta (three edges to one vertex) plus a separating edge.
    ThetaVariant,
}

impl BoundaryType {
    pub const ALL: [BoundaryType; 6] = [
        BoundaryType::SeparatingBridge,
        BoundaryType::LoopPlusBridge,
        BoundaryType::Cage3,
        BoundaryType::Cage2PlusLoop,
        BoundaryType::TwoLoopsBridge,
        BoundaryType::ThetaVariant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryType::SeparatingBridge => "separating-bridge",
            BoundaryType::LoopPlusBridge => "loop-plus-bridge",
            BoundaryType::Cage3 => "cage-3",
            BoundaryType::Cage2PlusLoop => "cage-2-plus-loop",
            BoundaryType::TwoLoopsBridge => "two-loops-bridge",
            BoundaryType::ThetaVariant => "theta-variant",
        }
    }

    /// Representative graph (all vertex ranks zero).
    pub fn template(self) -> GraphOfGroups {
        let (n, ends): (usize, &[(usize, usize)]) = match self {
            BoundaryType::SeparatingBridge => (4, &[(0, 1), (0, 1), (0, 2), (0, 3)]),
            BoundaryType::LoopPlusBridge => (3, &[(0, 0), (0, 1), (0, 2)]),
            BoundaryType::Cage3 => (2, &[(0, 1), (0, 1), (0, 1), (0, 1)]),
            BoundaryType::Cage2PlusLoop => (2, &[(0, 0), (0, 1), (0, 1)]),
            BoundaryType::TwoLoopsBridge => (3, &[(0, 1), (0, 1), (0, 2), (0, 2)]),
            BoundaryType::ThetaVariant => (3, &[(0, 1), (0, 1), (0, 1), (0, 2)]),
        };
        GraphOfGroups::from_parts(vec![0; n], ends.iter().map(|&(a, b)| (a, b, EdgeLabel::None)).collect())
            .expect("templates are connected")
    }

    pub fn from_graph(g: &GraphOfGroups) -> Option<BoundaryType> {
        let sig = canonical_signature(g, false)?;
        BoundaryType::ALL.into_iter().find(|t| canonical_signature(&t.template(), false).as_deref() == Some(&sig))
    }
}

impl fmt::Display for BoundaryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundarySplitting {
    pub kind: BoundaryType,
    /// The corner partitions kept after merging those naming the same splitting.
    pub edges: Vec<Partition>,
    pub graph: GraphOfGroups,
    pub shape: ShapeReport,
}

impl BoundarySplitting {
    pub fn distinct_edges(&self) -> usize {
        self.edges.len()
    }
}

/// The splitting cut out by the four corner sets of a crossing pair of
/// ideal edges, together with its boundary type.
pub fn boundary_splitting(p: &Partition, q: &Partition) -> Result<BoundarySplitting> {
    for x in [p, q] {
        if !x.is_ideal() {
            return Err(Error::NotIdeal(*x));
        }
    }
    if p.rank() != q.rank() {
        return Err(Error::RankMismatch(p.rank(), q.rank()));
    }
    if !crosses(p, q) {
        return Err(Error::NotCrossing(*p, *q));
    }
    let rank = p.rank();
    let corners = corner_sets(p, q);
    let edges: BTreeSet<Partition> = corners
        .as_array()
        .iter()
        .map(|&k| Partition::new(rank, k).map(|c| c.class_representative()))
        .collect::<Result<_>>()?;
    let edges: Vec<Partition> = edges.into_iter().collect();
    let graph = blow_up_partitions(rank, &edges)?;
    let shape = classify_shape(&graph);
    let kind = BoundaryType::from_graph(&graph)
        .ok_or_else(|| Error::UnrecognizedBoundary(shape.signature.clone().unwrap_or_default()))?;
    Ok(BoundarySplitting { kind, edges, graph, shape })
}
