//! Directions at the rose vertex, two-sided partitions of them, and the
//! pairwise predicates of the ideal-edge calculus.
//!
//! A partition of the `2N` directions `x_i^+`, `x_i^-` describes a one-edge
//! free splitting that is disjoint from the base rose. Partitions are stored
//! as a bitmask of their first side, always in canonical orientation: the
//! first side never contains `x_1^+`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest rank the calculus is defined for.
pub const MIN_RANK: u8 = 3;
/// Default ceiling for exhaustive enumeration.
pub const DEFAULT_RANK_CEILING: u8 = 7;
/// Largest rank a partition can represent (`2N` directions fit in a `u32`).
pub const MAX_REPRESENTABLE_RANK: u8 = 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A half-edge germ `x_i^+` or `x_i^-` at the rose vertex.
///
/// Ordered by `(index, sign)` with `+ < -`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    index: u8,
    sign: Sign,
}

impl Direction {
    pub fn new(index: u8, sign: Sign) -> Direction {
        assert!(index >= 1 && index <= MAX_REPRESENTABLE_RANK, "direction index {index}");
        Direction { index, sign }
    }

    pub fn plus(index: u8) -> Direction {
        Direction::new(index, Sign::Plus)
    }

    pub fn minus(index: u8) -> Direction {
        Direction::new(index, Sign::Minus)
    }

    pub fn index(self) -> u8 {
        self.index
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn opposite(self) -> Direction {
        Direction { index: self.index, sign: self.sign.flip() }
    }

    /// Bit position: `x_i^+ -> 2(i-1)`, `x_i^- -> 2(i-1)+1`.
    pub fn bit(self) -> u32 {
        2 * (self.index as u32 - 1) + matches!(self.sign, Sign::Minus) as u32
    }

    pub fn from_bit(bit: u32) -> Direction {
        let sign = if bit % 2 == 0 { Sign::Plus } else { Sign::Minus };
        Direction::new((bit / 2 + 1) as u8, sign)
    }

    /// All `2N` directions in canonical order.
    pub fn all(rank: u8) -> impl Iterator<Item = Direction> {
        (0..2 * rank as u32).map(Direction::from_bit)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "x{}{}", self.index, s)
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Direction> {
        let err = || Error::ParseDirection(s.to_string());
        let t = s.trim();
        let body = t.strip_prefix('x').ok_or_else(err)?;
        let (digits, sign) = match body.chars().last() {
            Some('+') => (&body[..body.len() - 1], Sign::Plus),
            Some('-') => (&body[..body.len() - 1], Sign::Minus),
            _ => return Err(err()),
        };
        let index: u8 = digits.parse().map_err(|_| err())?;
        if index == 0 || index > MAX_REPRESENTABLE_RANK {
            return Err(err());
        }
        Ok(Direction::new(index, sign))
    }
}

/// A set of directions, stored as a bitmask.
///
/// Sets are ordered lexicographically by their sorted direction lists, so
/// `{x1-} < {x1-, x2+} < {x2+}`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DirectionSet(u32);

impl DirectionSet {
    pub const EMPTY: DirectionSet = DirectionSet(0);

    pub fn from_bits(bits: u32) -> DirectionSet {
        DirectionSet(bits)
    }

    pub fn full(rank: u8) -> DirectionSet {
        DirectionSet(((1u64 << (2 * rank as u32)) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, d: Direction) -> bool {
        self.0 & (1 << d.bit()) != 0
    }

    pub fn insert(&mut self, d: Direction) {
        self.0 |= 1 << d.bit();
    }

    pub fn union(self, other: DirectionSet) -> DirectionSet {
        DirectionSet(self.0 | other.0)
    }

    pub fn intersection(self, other: DirectionSet) -> DirectionSet {
        DirectionSet(self.0 & other.0)
    }

    pub fn difference(self, other: DirectionSet) -> DirectionSet {
        DirectionSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: DirectionSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: DirectionSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn complement(self, rank: u8) -> DirectionSet {
        DirectionSet(DirectionSet::full(rank).0 & !self.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Direction> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Direction::from_bit(b))
        })
    }

    /// Does the set contain exactly one of `x_i^+`, `x_i^-` for some `i`?
    pub fn separates_some_pair(self) -> bool {
        let plus = self.0 & 0x5555_5555;
        let minus = (self.0 >> 1) & 0x5555_5555;
        plus != minus
    }

    /// Pair indices `i` with exactly one of `x_i^+`, `x_i^-` in the set.
    pub fn separated_pairs(self) -> impl Iterator<Item = u8> {
        let diff = (self.0 & 0x5555_5555) ^ ((self.0 >> 1) & 0x5555_5555);
        (0..16u32).filter(move |i| diff & (1 << (2 * i)) != 0).map(|i| i as u8 + 1)
    }

    /// A proper nonempty subset whose two-sided split separates some pair.
    pub fn determines_ideal_edge(self, rank: u8) -> bool {
        let full = DirectionSet::full(rank);
        !self.is_empty() && self.is_subset(full) && self != full && self.separates_some_pair()
    }

    pub fn to_strings(self) -> Vec<String> {
        self.iter().map(|d| d.to_string()).collect()
    }

    /// Comma separated encoding, e.g. `x1-,x2+`.
    pub fn encode(self) -> String {
        self.to_strings().join(",")
    }

    pub fn parse(s: &str) -> Result<DirectionSet> {
        let mut set = DirectionSet::EMPTY;
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let d: Direction = tok.parse()?;
            set.insert(d);
        }
        Ok(set)
    }
}

impl Ord for DirectionSet {
    fn cmp(&self, other: &DirectionSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for DirectionSet {
    fn partial_cmp(&self, other: &DirectionSet) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Direction> for DirectionSet {
    fn from_iter<I: IntoIterator<Item = Direction>>(iter: I) -> DirectionSet {
        let mut set = DirectionSet::EMPTY;
        for d in iter {
            set.insert(d);
        }
        set
    }
}

impl fmt::Display for DirectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.encode())
    }
}

fn check_rank(rank: u8) -> Result<()> {
    if !(MIN_RANK..=MAX_REPRESENTABLE_RANK).contains(&rank) {
        return Err(Error::RankOutOfRange { rank, min: MIN_RANK, max: MAX_REPRESENTABLE_RANK });
    }
    Ok(())
}

/// A two-block split of the `2N` directions, in canonical orientation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    rank: u8,
    side1: DirectionSet,
}

impl Partition {
    /// Build a partition from one of its sides; the sides are swapped if
    /// needed so that `side1` does not contain `x_1^+`.
    pub fn new(rank: u8, side: DirectionSet) -> Result<Partition> {
        check_rank(rank)?;
        let full = DirectionSet::full(rank);
        if !side.is_subset(full) {
            return Err(Error::InvalidPartition(format!("{side} uses directions beyond rank {rank}")));
        }
        if side.is_empty() || side == full {
            return Err(Error::InvalidPartition(format!("side {side} leaves an empty side")));
        }
        let side1 = if side.contains(Direction::plus(1)) { side.complement(rank) } else { side };
        Ok(Partition { rank, side1 })
    }

    pub fn from_directions<I: IntoIterator<Item = Direction>>(rank: u8, dirs: I) -> Result<Partition> {
        Partition::new(rank, dirs.into_iter().collect())
    }

    /// Parse a comma separated side, e.g. `"x1-,x2+"`; the other side is inferred.
    pub fn parse(rank: u8, side: &str) -> Result<Partition> {
        Partition::new(rank, DirectionSet::parse(side)?)
    }

    /// The petal partition `{x_i^+} | rest`.
    pub fn petal(rank: u8, index: u8) -> Result<Partition> {
        if index == 0 || index > rank {
            return Err(Error::GeneratorOutOfRange { index: index as i32, rank });
        }
        Partition::from_directions(rank, [Direction::plus(index)])
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn side1(&self) -> DirectionSet {
        self.side1
    }

    pub fn side2(&self) -> DirectionSet {
        self.side1.complement(self.rank)
    }

    pub fn sides(&self) -> [DirectionSet; 2] {
        [self.side1(), self.side2()]
    }

    /// Both sides have at least two directions.
    pub fn is_thick(&self) -> bool {
        self.side1.len() >= 2 && self.side2().len() >= 2
    }

    /// Separates some pair `{x_i^+, x_i^-}`; these are the nonseparating splittings.
    pub fn is_ideal(&self) -> bool {
        self.side1.separates_some_pair()
    }

    /// `Some(i)` when one side is a single direction `x_i^±`.
    pub fn petal_index(&self) -> Option<u8> {
        self.sides().into_iter().find(|s| s.len() == 1).map(|s| s.iter().next().unwrap().index())
    }

    /// The partition used to represent this splitting: petals are
    /// normalized to `{x_i^+} | rest`.
    pub fn class_representative(&self) -> Partition {
        match self.petal_index() {
            Some(i) => Partition::petal(self.rank, i).unwrap(),
            None => *self,
        }
    }

    pub fn encode(&self) -> String {
        self.side1.encode()
    }

    pub fn crosses(&self, other: &Partition) -> bool {
        crosses(self, other)
    }

    pub fn is_compatible(&self, other: &Partition) -> bool {
        !crosses(self, other)
    }

    /// Image under a signed permutation of the petals.
    pub fn permuted(&self, g: &SignedPermutation) -> Partition {
        Partition::new(self.rank, g.apply_set(self.side1)).expect("signed permutations preserve partitions")
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Partition) -> Ordering {
        self.rank.cmp(&other.rank).then_with(|| self.side1.cmp(&other.side1))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Partition) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.side1, self.side2())
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    rank: u8,
    side1: Vec<String>,
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson { rank: self.rank, side1: self.side1.to_strings() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Partition, D::Error> {
        let raw = PartitionJson::deserialize(deserializer)?;
        let mut side = DirectionSet::EMPTY;
        for s in &raw.side1 {
            side.insert(s.parse().map_err(serde::de::Error::custom)?);
        }
        Partition::new(raw.rank, side).map_err(serde::de::Error::custom)
    }
}

fn assert_same_rank(p: &Partition, q: &Partition) {
    assert_eq!(p.rank, q.rank, "partitions of different rank compared");
}

/// All four corners `P_i ∩ Q_j` are nonempty.
pub fn crosses(p: &Partition, q: &Partition) -> bool {
    assert_same_rank(p, q);
    p.sides().iter().all(|a| q.sides().iter().all(|b| !a.is_disjoint(*b)))
}

pub fn compatible(p: &Partition, q: &Partition) -> bool {
    !crosses(p, q)
}

/// Every choice of sides `(P_a, Q_b)` with `P_a ∩ Q_b = ∅`.
pub fn all_alignments(p: &Partition, q: &Partition) -> Vec<(DirectionSet, DirectionSet)> {
    assert_same_rank(p, q);
    let mut out = Vec::new();
    for a in p.sides() {
        for b in q.sides() {
            if a.is_disjoint(b) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Disjoint sides `(P_1, Q_1)` of a compatible pair; the lexicographically
/// least choice when there are several. `None` when the pair crosses.
pub fn aligned_sides(p: &Partition, q: &Partition) -> Option<(DirectionSet, DirectionSet)> {
    all_alignments(p, q).into_iter().min()
}

fn require_ideal(p: &Partition) -> Result<()> {
    if p.is_ideal() {
        Ok(())
    } else {
        Err(Error::NotIdeal(*p))
    }
}

/// Compatible, and the union of the disjoint aligned sides separates some pair.
pub fn rose_compatible(p: &Partition, q: &Partition) -> Result<bool> {
    require_ideal(p)?;
    require_ideal(q)?;
    Ok(match aligned_sides(p, q) {
        Some((a, b)) => a.union(b).separates_some_pair(),
        None => false,
    })
}

/// Compatible ideal edges of distinct splittings whose common refinement is
/// a two-edge loop.
pub fn circle_compatible(p: &Partition, q: &Partition) -> Result<bool> {
    require_ideal(p)?;
    require_ideal(q)?;
    if p.class_representative() == q.class_representative() || crosses(p, q) {
        return Ok(false);
    }
    Ok(!rose_compatible(p, q)?)
}

/// The four intersections `K_ij = P_i ∩ Q_j`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CornerSets {
    pub k11: DirectionSet,
    pub k12: DirectionSet,
    pub k21: DirectionSet,
    pub k22: DirectionSet,
}

impl CornerSets {
    pub fn as_array(&self) -> [DirectionSet; 4] {
        [self.k11, self.k12, self.k21, self.k22]
    }

    pub fn all_nonempty(&self) -> bool {
        self.as_array().iter().all(|k| !k.is_empty())
    }
}

impl Serialize for DirectionSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

pub fn corner_sets(p: &Partition, q: &Partition) -> CornerSets {
    assert_same_rank(p, q);
    let [p1, p2] = p.sides();
    let [q1, q2] = q.sides();
    CornerSets {
        k11: p1.intersection(q1),
        k12: p1.intersection(q2),
        k21: p2.intersection(q1),
        k22: p2.intersection(q2),
    }
}

/// A crossing pair whose corners all determine ideal edges, any two of
/// which have a union separating some pair.
pub fn is_cagey(p: &Partition, q: &Partition) -> Result<bool> {
    require_ideal(p)?;
    require_ideal(q)?;
    if !crosses(p, q) {
        return Ok(false);
    }
    let ks = corner_sets(p, q).as_array();
    if !ks.iter().all(|k| k.determines_ideal_edge(p.rank)) {
        return Ok(false);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if !ks[i].union(ks[j]).separates_some_pair() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "petal", rename_all = "lowercase")]
pub enum ClassKind {
    Petal(u8),
    Thick,
}

/// A one-edge nonseparating splitting in the universe of the base rose.
///
/// The two singleton partitions `{x_i^+}` and `{x_i^-}` name the same petal
/// and map to the same class.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingClass {
    representative: Partition,
    kind: ClassKind,
}

impl SplittingClass {
    pub fn from_partition(p: Partition) -> Result<SplittingClass> {
        require_ideal(&p)?;
        Ok(match p.petal_index() {
            Some(i) => SplittingClass { representative: p.class_representative(), kind: ClassKind::Petal(i) },
            None => SplittingClass { representative: p, kind: ClassKind::Thick },
        })
    }

    pub fn petal(rank: u8, index: u8) -> Result<SplittingClass> {
        SplittingClass::from_partition(Partition::petal(rank, index)?)
    }

    pub fn representative(&self) -> &Partition {
        &self.representative
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn rank(&self) -> u8 {
        self.representative.rank
    }

    pub fn is_petal(&self) -> bool {
        matches!(self.kind, ClassKind::Petal(_))
    }

    pub fn crosses(&self, other: &SplittingClass) -> bool {
        crosses(&self.representative, &other.representative)
    }

    pub fn rose_compatible(&self, other: &SplittingClass) -> bool {
        self != other && rose_compatible(&self.representative, &other.representative).expect("classes are ideal")
    }

    pub fn circle_compatible(&self, other: &SplittingClass) -> bool {
        circle_compatible(&self.representative, &other.representative).expect("classes are ideal")
    }

    pub fn is_cagey(&self, other: &SplittingClass) -> bool {
        is_cagey(&self.representative, &other.representative).expect("classes are ideal")
    }

    pub fn encode(&self) -> String {
        match self.kind {
            ClassKind::Petal(i) => format!("x{i}"),
            ClassKind::Thick => self.representative.encode(),
        }
    }

    /// Parse `x<i>` as a petal, otherwise a comma separated side.
    pub fn parse(rank: u8, s: &str) -> Result<SplittingClass> {
        let t = s.trim();
        if let Some(digits) = t.strip_prefix('x') {
            if let Ok(i) = digits.parse::<u8>() {
                return SplittingClass::petal(rank, i);
            }
        }
        SplittingClass::from_partition(Partition::parse(rank, t)?)
    }
}

impl fmt::Display for SplittingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ClassKind::Petal(i) => write!(f, "petal(x{i})"),
            ClassKind::Thick => write!(f, "{}", self.representative),
        }
    }
}

impl Serialize for SplittingClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.representative.serialize(serializer)
    }
}

fn check_guard(rank: u8, ceiling: u8) -> Result<()> {
    let max = ceiling.min(MAX_REPRESENTABLE_RANK);
    if rank < MIN_RANK || rank > max {
        return Err(Error::RankOutOfRange { rank, min: MIN_RANK, max });
    }
    Ok(())
}

/// Every ideal partition of rank `rank`, canonical orientation, sorted.
pub fn enumerate_ideal_edges(rank: u8) -> Result<Vec<Partition>> {
    enumerate_ideal_edges_with_ceiling(rank, DEFAULT_RANK_CEILING)
}

pub fn enumerate_ideal_edges_with_ceiling(rank: u8, ceiling: u8) -> Result<Vec<Partition>> {
    check_guard(rank, ceiling)?;
    let full = DirectionSet::full(rank).bits();
    // canonical first sides never contain x_1^+ (bit 0)
    let mut out: Vec<Partition> = (1..=full)
        .filter(|m| m & 1 == 0)
        .map(|m| Partition { rank, side1: DirectionSet(m) })
        .filter(Partition::is_ideal)
        .collect();
    out.sort();
    Ok(out)
}

pub fn enumerate_thick_ideal_edges(rank: u8) -> Result<Vec<Partition>> {
    Ok(enumerate_ideal_edges(rank)?.into_iter().filter(Partition::is_thick).collect())
}

/// The splitting classes of the universe: `N` petals followed by the thick
/// ideal edges, all sorted by representative.
pub fn enumerate_classes(rank: u8) -> Result<Vec<SplittingClass>> {
    enumerate_classes_with_ceiling(rank, DEFAULT_RANK_CEILING)
}

pub fn enumerate_classes_with_ceiling(rank: u8, ceiling: u8) -> Result<Vec<SplittingClass>> {
    let mut classes: Vec<SplittingClass> = enumerate_ideal_edges_with_ceiling(rank, ceiling)?
        .into_iter()
        .map(|p| SplittingClass::from_partition(p).unwrap())
        .collect();
    classes.sort();
    classes.dedup();
    Ok(classes)
}

pub fn count_classes(rank: u8) -> Result<usize> {
    Ok(enumerate_classes(rank)?.len())
}

/// A permutation of the petals combined with orientation flips, acting on
/// directions by `x_i^s -> x_{π(i)}^{±s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    images: Vec<(u8, bool)>,
}

impl SignedPermutation {
    /// `images[i-1] = (π(i), flipped)`.
    pub fn new(images: Vec<(u8, bool)>) -> Result<SignedPermutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &(j, _) in &images {
            if j == 0 || j as usize > n || seen[j as usize - 1] {
                return Err(Error::Precondition(format!("{images:?} is not a permutation")));
            }
            seen[j as usize - 1] = true;
        }
        Ok(SignedPermutation { images })
    }

    pub fn identity(rank: u8) -> SignedPermutation {
        SignedPermutation { images: (1..=rank).map(|i| (i, false)).collect() }
    }

    pub fn apply(&self, d: Direction) -> Direction {
        let (j, flip) = self.images[d.index() as usize - 1];
        let sign = if flip { d.sign().flip() } else { d.sign() };
        Direction::new(j, sign)
    }

    pub fn apply_set(&self, s: DirectionSet) -> DirectionSet {
        s.iter().map(|d| self.apply(d)).collect()
    }

    /// All `2^N · N!` signed permutations, in a fixed order.
    pub fn all(rank: u8) -> Vec<SignedPermutation> {
        let mut perms: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..rank {
            let mut next = Vec::new();
            for p in &perms {
                for j in 1..=rank {
                    if !p.contains(&j) {
                        let mut q = p.clone();
                        q.push(j);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let mut out = Vec::with_capacity(perms.len() << rank);
        for p in perms {
            for flips in 0u32..(1 << rank) {
                let images = p.iter().enumerate().map(|(k, &j)| (j, flips & (1 << k) != 0)).collect();
                out.push(SignedPermutation { images });
            }
        }
        out
    }
}

/// Coordinates relative to a neighbouring rose.
///
/// Blowing the base rose up along the thick ideal edge `pivot` and then
/// collapsing petal `x_a` (a pair separated by `pivot`) gives a new rose whose
/// petals are the old `x_i`, `i ≠ a`, together with `pivot` as petal `y_a`.
/// Directions `x_i^±` with `i ≠ a` keep their names; `y_a^-` is the end of
/// the pivot edge on the side holding `x_a^+`.
///
/// Any splitting compatible with `pivot` lives in both universes, and
/// [`RoseMove::apply`] rewrites its partition into the new coordinates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RoseMove {
    pivot: Partition,
    petal: u8,
}

impl RoseMove {
    pub fn new(pivot: Partition, petal: u8) -> Result<RoseMove> {
        if !pivot.is_thick() {
            return Err(Error::Precondition(format!("pivot {pivot} is not thick")));
        }
        if !pivot.side1.separated_pairs().any(|i| i == petal) {
            return Err(Error::Precondition(format!("pivot {pivot} does not separate pair {petal}")));
        }
        Ok(RoseMove { pivot, petal })
    }

    pub fn pivot(&self) -> &Partition {
        &self.pivot
    }

    pub fn petal(&self) -> u8 {
        self.petal
    }

    /// Every move from the base rose of rank `rank`.
    pub fn all(rank: u8) -> Result<Vec<RoseMove>> {
        let mut out = Vec::new();
        for p in enumerate_thick_ideal_edges(rank)? {
            for a in p.side1.separated_pairs() {
                out.push(RoseMove { pivot: p, petal: a });
            }
        }
        Ok(out)
    }

    /// The partition of `q` in the new rose's directions, or `None` when
    /// `q` crosses the pivot.
    pub fn apply(&self, q: &Partition) -> Option<Partition> {
        let rank = self.pivot.rank;
        let a = self.petal;
        if q.class_representative() == self.pivot {
            return Some(Partition::petal(rank, a).unwrap());
        }
        if crosses(&self.pivot, q) {
            return None;
        }
        let xa_plus = Direction::plus(a);
        let p1 = if self.pivot.side1.contains(xa_plus) { self.pivot.side1() } else { self.pivot.side2() };
        let p2 = p1.complement(rank);
        let sides = [(p1, xa_plus, Direction::minus(a)), (p2, Direction::minus(a), xa_plus)];
        for (pk, xa, ya) in sides {
            for qs in q.sides() {
                if qs.is_subset(pk) && qs != pk {
                    let side = if qs.contains(xa) {
                        let mut s = pk.difference(qs);
                        s.insert(ya);
                        s
                    } else {
                        qs
                    };
                    return Some(Partition::new(rank, side).expect("translated side is proper"));
                }
            }
        }
        unreachable!("compatible distinct partitions have a side nested in a pivot side")
    }

    pub fn apply_class(&self, c: &SplittingClass) -> Option<SplittingClass> {
        self.apply(c.representative()).map(|p| SplittingClass::from_partition(p).expect("moves preserve ideal edges"))
    }
}

/// A random family of pairwise compatible splitting classes: the universe is
/// shuffled and classes are taken greedily until a random target size.
pub fn random_compatible_family<R: Rng + ?Sized>(rank: u8, rng: &mut R) -> Result<Vec<SplittingClass>> {
    let mut pool = enumerate_classes(rank)?;
    pool.shuffle(rng);
    let target = rng.gen_range(1..=3 * rank as usize - 3);
    let mut family: Vec<SplittingClass> = Vec::new();
    for c in pool {
        if family.len() == target {
            break;
        }
        if family.iter().all(|f| !f.crosses(&c)) {
            family.push(c);
        }
    }
    family.sort();
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(rank: u8, s: &str) -> Partition {
        Partition::parse(rank, s).unwrap()
    }

    fn p_k(rank: u8, k: u8) -> Partition {
        let next = k % rank + 1;
        Partition::from_directions(rank, [Direction::minus(k), Direction::plus(next)]).unwrap()
    }

    fn q_k(rank: u8, k: u8) -> Partition {
        let mut s = DirectionSet::EMPTY;
        s.insert(Direction::minus(1));
        for i in 2..=k {
            s.insert(Direction::plus(i));
            s.insert(Direction::minus(i));
        }
        s.insert(Direction::plus(k + 1));
        Partition::new(rank, s).unwrap()
    }

    fn tau(rank: u8) -> Partition {
        Partition::from_directions(rank, (1..=rank).map(Direction::minus)).unwrap()
    }

    #[test]
    fn direction_round_trip_and_order() {
        let d: Direction = "x12-".parse().unwrap();
        assert_eq!(d, Direction::minus(12));
        assert_eq!(d.to_string(), "x12-");
        assert_eq!(Direction::from_bit(d.bit()), d);
        assert!(Direction::plus(1) < Direction::minus(1));
        assert!(Direction::minus(1) < Direction::plus(2));
        assert!("x0+".parse::<Direction>().is_err());
        assert!("y1+".parse::<Direction>().is_err());
        assert!("x1".parse::<Direction>().is_err());
    }

    #[test]
    fn canonical_orientation_swaps_sides() {
        let p = part(3, "x1+,x2-");
        assert!(!p.side1().contains(Direction::plus(1)));
        assert_eq!(p.encode(), "x1-,x2+,x3+,x3-");
        assert_eq!(p, part(3, "x1-,x2+,x3+,x3-"));
    }

    #[test]
    fn constructor_rejects_empty_sides() {
        let full = DirectionSet::full(3);
        assert!(Partition::new(3, full).is_err());
        assert!(Partition::new(3, DirectionSet::EMPTY).is_err());
        assert!(Partition::parse(3, "x4+").is_err());
        assert!(Partition::new(2, DirectionSet::parse("x1-").unwrap()).is_err());
    }

    #[test]
    fn thick_examples() {
        assert!(part(6, "x1-,x2+").is_thick());
        assert!(!part(6, "x1+").is_thick());
        assert!(!part(6, "x3-").is_thick());
    }

    #[test]
    fn ideal_examples() {
        assert!(part(6, "x1-,x2+").is_ideal());
        assert!(!part(3, "x1+,x1-").is_ideal());
        assert!(part(3, "x1+").is_ideal());
    }

    #[test]
    fn crossing_examples() {
        for k in 2..=4 {
            assert!(crosses(&tau(6), &q_k(6, k)));
        }
        let p = part(3, "x1-,x2+");
        assert!(!crosses(&p, &p));
        assert!(!crosses(&p_k(3, 1), &p_k(3, 2)));
    }

    #[test]
    fn aligned_sides_examples() {
        let (a, b) = aligned_sides(&p_k(3, 1), &p_k(3, 2)).unwrap();
        assert_eq!(a.encode(), "x1-,x2+");
        assert_eq!(b.encode(), "x2-,x3+");
        assert!(a.is_disjoint(b));
        assert_eq!(aligned_sides(&tau(6), &q_k(6, 2)), None);
        let p = part(3, "x1-,x2+");
        let (a, b) = aligned_sides(&p, &p).unwrap();
        assert_eq!(b, a.complement(3));
        assert_eq!(all_alignments(&p, &p).len(), 2);
    }

    #[test]
    fn rose_compatibility_examples() {
        assert!(rose_compatible(&p_k(3, 1), &p_k(3, 2)).unwrap());
        let tau1 = part(3, "x2+,x3-");
        let sigma2 = p_k(3, 2);
        assert!(!crosses(&tau1, &sigma2));
        assert!(!rose_compatible(&tau1, &sigma2).unwrap());
        assert!(circle_compatible(&tau1, &sigma2).unwrap());
        assert!(!rose_compatible(&tau(6), &q_k(6, 3)).unwrap());
        assert!(matches!(rose_compatible(&part(3, "x1+,x1-"), &p_k(3, 1)), Err(Error::NotIdeal(_))));
    }

    #[test]
    fn corner_sets_match_hand_computation() {
        let n = 6;
        for k in 2..=n - 2 {
            let c = corner_sets(&tau(n), &q_k(n, k));
            let minus = |r: std::ops::RangeInclusive<u8>| r.map(Direction::minus).collect::<DirectionSet>();
            let plus = |r: std::ops::RangeInclusive<u8>| r.map(Direction::plus).collect::<DirectionSet>();
            assert_eq!(c.k11, minus(1..=k));
            assert_eq!(c.k12, minus(k + 1..=n));
            assert_eq!(c.k21, plus(2..=k + 1));
            assert_eq!(c.k22, plus(1..=1).union(plus(k + 2..=n)));
        }
        let p = part(4, "x1-,x3+");
        let c = corner_sets(&p, &p);
        assert_eq!(c.as_array().iter().filter(|k| k.is_empty()).count(), 2);
        let c = corner_sets(&p_k(4, 1), &p_k(4, 2));
        assert_eq!(c.as_array().iter().filter(|k| k.is_empty()).count(), 1);
    }

    #[test]
    fn cagey_examples() {
        for k in 2..=4 {
            assert!(is_cagey(&tau(6), &q_k(6, k)).unwrap());
        }
        for k in 1..=6 {
            assert!(is_cagey(&tau(6), &p_k(6, k)).unwrap());
        }
        assert!(!is_cagey(&tau(6), &Partition::petal(6, 1).unwrap()).unwrap());
        // sigma_1 = P^1 and tau_1 at rank 3
        assert!(is_cagey(&p_k(3, 1), &part(3, "x2+,x3-")).unwrap());
        assert!(is_cagey(&p_k(3, 2), &part(3, "x1+,x2-")).unwrap());
        assert!(is_cagey(&part(3, "x1+,x1-"), &tau(3)).is_err());
    }

    #[test]
    fn enumeration_counts_rank_3() {
        let all = enumerate_ideal_edges(3).unwrap();
        assert_eq!(all.len(), 28);
        assert!(all.iter().all(Partition::is_ideal));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_thick_ideal_edges(3).unwrap().len(), 22);
        assert_eq!(count_classes(3).unwrap(), 25);
        assert!(enumerate_ideal_edges(2).is_err());
        assert!(enumerate_ideal_edges(8).is_err());
        assert!(enumerate_ideal_edges_with_ceiling(5, 4).is_err());
    }

    #[test]
    fn petal_representatives_are_identified() {
        for i in 1..=4 {
            let plus = SplittingClass::from_partition(Partition::from_directions(4, [Direction::plus(i)]).unwrap());
            let minus = SplittingClass::from_partition(Partition::from_directions(4, [Direction::minus(i)]).unwrap());
            assert_eq!(plus.unwrap(), minus.unwrap());
        }
        assert_eq!(SplittingClass::parse(4, "x2").unwrap().kind(), ClassKind::Petal(2));
        assert_eq!(SplittingClass::parse(4, "x2-").unwrap().kind(), ClassKind::Petal(2));
    }

    #[test]
    fn signed_permutation_count() {
        assert_eq!(SignedPermutation::all(3).len(), 48);
        assert_eq!(SignedPermutation::all(4).len(), 384);
        assert!(SignedPermutation::new(vec![(1, false), (1, true)]).is_err());
    }

    #[test]
    fn rose_move_sends_pivot_to_petal() {
        let pivot = part(3, "x1+,x3+");
        let mv = RoseMove::new(pivot, 1).unwrap();
        assert_eq!(mv.apply(&pivot), Some(Partition::petal(3, 1).unwrap()));
        // the collapsed petal becomes the blow-up separating the two pivot ends
        let old_petal = mv.apply(&Partition::petal(3, 1).unwrap()).unwrap();
        assert!(old_petal.is_thick());
        assert!(RoseMove::new(pivot, 2).is_err());
        assert!(mv.apply(&part(3, "x1+,x2+")).is_none());
    }

    #[test]
    fn partition_json_shape() {
        let p = part(3, "x2+,x1-");
        let v = serde_json::to_value(p).unwrap();
        assert_eq!(v, serde_json::json!({"rank": 3, "side1": ["x1-", "x2+"]}));
        let back: Partition = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
        let bad = serde_json::json!({"rank": 3, "side1": ["x1-", "x9+"]});
        assert!(serde_json::from_value::<Partition>(bad).is_err());
    }
}
