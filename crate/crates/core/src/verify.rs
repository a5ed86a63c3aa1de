//! Exhaustive checks of the combinatorial statements, one verifier per
//! statement. Every verifier has a `_with` form taking the data or the
//! predicate under test so that mutated inputs can be shown to fail.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::blowup::{blow_up, boundary_splitting, classify_shape, BoundarySplitting, BoundaryType};
use crate::complexes::{CageyOracle, GraphMode, SplittingGraph};
use crate::error::{Error, Result};
use crate::freegroup::{conjugate_into_factor, conjugated_power, enumerate_factor_product, is_simple, Word};
use crate::partition::{
    crosses, enumerate_classes, is_cagey, Direction, DirectionSet, Partition, SplittingClass,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lemma: String,
    pub rank: u8,
    pub cases_checked: usize,
    pub passed: bool,
    pub failures: Vec<String>,
    pub observations: BTreeMap<String, Value>,
    /// Wall-clock time; only filled in on request so reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    fn new(lemma: &str, rank: u8) -> VerificationReport {
        VerificationReport {
            lemma: lemma.to_string(),
            rank,
            cases_checked: 0,
            passed: true,
            failures: Vec::new(),
            observations: BTreeMap::new(),
            elapsed_ms: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases_checked += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    fn observe(&mut self, key: &str, value: impl Serialize) {
        self.observations.insert(key.to_string(), serde_json::to_value(value).expect("serialisable"));
    }

    fn finish(mut self) -> VerificationReport {
        self.passed = self.failures.is_empty();
        self
    }
}

/// Runs `f` and records its wall-clock time in the report.
pub fn timed(f: impl FnOnce() -> Result<VerificationReport>) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = f()?;
    r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}

pub const LEMMA_IDS: [&str; 6] =
    ["rigid-blowup", "three-rose", "clique-rank-3", "boundary-types", "cagey-equivalence", "whitehead-factor"];

fn rank_range(rank: u8, min: u8, max: u8) -> Result<()> {
    if !(min..=max).contains(&rank) {
        return Err(Error::RankOutOfRange { rank, min, max });
    }
    Ok(())
}

fn cls(p: Partition) -> SplittingClass {
    SplittingClass::from_partition(p).expect("constructed partitions are ideal")
}

/// `P^k` with first side `{x_k^-, x_{k+1}^+}`, indices taken cyclically.
pub fn p_partition(rank: u8, k: u8) -> Partition {
    let next = k % rank + 1;
    Partition::from_directions(rank, [Direction::minus(k), Direction::plus(next)]).expect("proper side")
}

/// `Q^k` with first side `{x_1^-, x_2^±, ..., x_k^±, x_{k+1}^+}`.
pub fn q_partition(rank: u8, k: u8) -> Partition {
    let mut s = DirectionSet::EMPTY;
    s.insert(Direction::minus(1));
    for i in 2..=k {
        s.insert(Direction::plus(i));
        s.insert(Direction::minus(i));
    }
    s.insert(Direction::plus(k + 1));
    Partition::new(rank, s).expect("proper side")
}

/// All negative directions against all positive ones.
pub fn tau_partition(rank: u8) -> Partition {
    Partition::from_directions(rank, (1..=rank).map(Direction::minus)).expect("proper side")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidFamily {
    pub rank: u8,
    pub petals: Vec<SplittingClass>,
    pub sigma: Vec<SplittingClass>,
    pub tau: SplittingClass,
}

impl RigidFamily {
    pub fn standard(rank: u8) -> RigidFamily {
        let petals = (1..=rank).map(|i| SplittingClass::petal(rank, i).expect("in range")).collect();
        let sigma = (1..=rank)
            .map(|k| cls(p_partition(rank, k)))
            .chain((2..=rank.saturating_sub(2)).map(|k| cls(q_partition(rank, k))))
            .collect();
        RigidFamily { rank, petals, sigma, tau: cls(tau_partition(rank)) }
    }

    pub fn members(&self) -> Vec<SplittingClass> {
        self.petals.iter().chain(&self.sigma).copied().collect()
    }
}

pub fn verify_rigid_blowup(rank: u8) -> Result<VerificationReport> {
    rank_range(rank, 4, 6)?;
    verify_rigid_blowup_with(&RigidFamily::standard(rank))
}

pub fn verify_rigid_blowup_with(family: &RigidFamily) -> Result<VerificationReport> {
    let rank = family.rank;
    let mut r = VerificationReport::new("rigid-blowup", rank);
    let members = family.members();
    let target = 3 * rank as usize - 3;

    let mut distinct = members.clone();
    distinct.sort();
    distinct.dedup();
    r.check(distinct.len() == target, || format!("family has {} distinct classes, expected {target}", distinct.len()));

    for (i, s) in members.iter().enumerate() {
        for t in &members[i + 1..] {
            r.check(s.rose_compatible(t), || format!("not rose compatible: {s} / {t}"));
        }
    }

    let universe = enumerate_classes(rank)?;
    let extensions: Vec<String> = universe
        .par_iter()
        .filter(|c| !members.contains(c) && members.iter().all(|m| m.rose_compatible(c)))
        .map(SplittingClass::encode)
        .collect();
    r.cases_checked += universe.len();
    r.failures.extend(extensions.into_iter().map(|c| format!("clique extends by {c}")));

    for p in &family.petals {
        r.check(family.tau.rose_compatible(p), || format!("tau not rose compatible with petal {p}"));
    }
    for s in &family.sigma {
        r.check(family.tau.is_cagey(s), || format!("tau and {s} are not cagey"));
    }

    if let Ok(g) = blow_up(&members, rank) {
        let shape = classify_shape(&g);
        r.observe("blowup_valences", &shape.valence_profile);
        r.observe("blowup_vertex_ranks", &shape.vertex_ranks);
    }
    r.observe("clique_size", distinct.len());
    r.observe("sigma", family.sigma.iter().map(SplittingClass::encode).collect::<Vec<_>>());
    r.observe("tau", family.tau.encode());
    Ok(r.finish())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeRoseSetup {
    pub rank: u8,
    pub sigma: [SplittingClass; 3],
    pub tau: [SplittingClass; 2],
}

impl ThreeRoseSetup {
    pub fn standard(rank: u8) -> Result<ThreeRoseSetup> {
        rank_range(rank, 3, 4)?;
        let parse = |s: &str| SplittingClass::parse(rank, s);
        let (t1, t2) = if rank == 3 { ("x2+,x3-", "x1+,x2-") } else { ("x2+,x4-", "x3+,x4+") };
        Ok(ThreeRoseSetup {
            rank,
            sigma: [cls(p_partition(rank, 1)), cls(p_partition(rank, 2)), SplittingClass::petal(rank, 3)?],
            tau: [parse(t1)?, parse(t2)?],
        })
    }
}

pub fn verify_three_rose(rank: u8) -> Result<VerificationReport> {
    verify_three_rose_with(&ThreeRoseSetup::standard(rank)?)
}

pub fn verify_three_rose_with(setup: &ThreeRoseSetup) -> Result<VerificationReport> {
    let rank = setup.rank;
    let mut r = VerificationReport::new("three-rose", rank);
    let [s1, s2, _] = setup.sigma;
    let [t1, t2] = setup.tau;

    let shape = classify_shape(&blow_up(&setup.sigma, rank)?);
    r.check(shape.is_rose(3), || format!("sigma blow-up is not a 3-petal rose: {:?}", shape.signature));
    r.check(t1.rose_compatible(&t2), || format!("P1: {t1} / {t2} not rose compatible"));
    for (s, t) in [(s1, t1), (s2, t2)] {
        r.check(s.is_cagey(&t), || format!("P2: {s} / {t} not cagey"));
    }
    let mut circle = Vec::new();
    for (i, t) in [t1, t2].iter().enumerate() {
        for (j, s) in setup.sigma.iter().enumerate() {
            if i == j {
                continue;
            }
            r.check(!t.crosses(s), || format!("P3: {t} crosses {s}"));
            if rank >= 4 {
                r.check(t.rose_compatible(s), || format!("tau_{} and sigma_{} not rose compatible", i + 1, j + 1));
            }
            if t.circle_compatible(s) {
                circle.push(format!("tau_{}/sigma_{}", i + 1, j + 1));
            }
        }
    }
    if rank == 3 {
        let expected = vec!["tau_1/sigma_2".to_string(), "tau_2/sigma_1".to_string()];
        r.check(circle == expected, || format!("circle pairs {circle:?}, expected {expected:?}"));
    }
    r.observe("circle_pairs", &circle);
    r.observe("sigma", setup.sigma.iter().map(SplittingClass::encode).collect::<Vec<_>>());
    r.observe("tau", setup.tau.iter().map(SplittingClass::encode).collect::<Vec<_>>());
    Ok(r.finish())
}

pub fn verify_clique_rank3() -> Result<VerificationReport> {
    let g = SplittingGraph::build(3, GraphMode::Ens)?;
    let cliques: Vec<Vec<SplittingClass>> =
        g.cliques_of_size(4).into_iter().map(|c| c.into_iter().map(|i| *g.vertex(i)).collect()).collect();
    verify_clique_rank3_with(&cliques)
}

/// Each 4-set must be pairwise rose compatible and blow up to the 4-edge
/// cage or the theta graph with a loop, with trivial vertex groups.
pub fn verify_clique_rank3_with(cliques: &[Vec<SplittingClass>]) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("clique-rank-3", 3);
    let results: Vec<(Option<&'static str>, Option<String>)> = cliques
        .par_iter()
        .map(|c| {
            let name = || c.iter().map(SplittingClass::encode).collect::<Vec<_>>().join(" ; ");
            let pairwise = c.iter().enumerate().all(|(i, s)| c[i + 1..].iter().all(|t| s.rose_compatible(t)));
            if c.len() != 4 || !pairwise {
                return (None, Some(format!("not a 4-clique: {}", name())));
            }
            let shape = match blow_up(c, 3) {
                Ok(g) => classify_shape(&g),
                Err(e) => return (None, Some(format!("{}: {e}", name()))),
            };
            let kind = if shape.is_cage(4) {
                Some("cage-4")
            } else if shape.is_theta_with_loop {
                Some("theta-with-loop")
            } else {
                None
            };
            let fail = match kind {
                Some(_) if shape.trivial_vertex_groups => None,
                Some(k) => Some(format!("{k} with vertex ranks {:?}: {}", shape.vertex_ranks, name())),
                None => Some(format!("unexpected shape {:?}: {}", shape.signature, name())),
            };
            (kind, fail)
        })
        .collect();
    let mut census: BTreeMap<&str, usize> = BTreeMap::new();
    for (kind, fail) in results {
        r.cases_checked += 1;
        if let Some(k) = kind {
            *census.entry(k).or_default() += 1;
        }
        r.failures.extend(fail);
    }
    r.observe("four_cliques", cliques.len());
    r.observe("shape_census", &census);
    Ok(r.finish())
}

pub fn verify_boundary_types(rank: u8) -> Result<VerificationReport> {
    verify_boundary_types_with(rank, &boundary_splitting)
}

type BoundaryFn<'a> = dyn Fn(&Partition, &Partition) -> Result<BoundarySplitting> + Sync + 'a;

pub fn verify_boundary_types_with(rank: u8, boundary: &BoundaryFn<'_>) -> Result<VerificationReport> {
    rank_range(rank, 3, 4)?;
    let mut r = VerificationReport::new("boundary-types", rank);
    let classes = enumerate_classes(rank)?;
    let pairs: Vec<(Partition, Partition)> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, s)| classes[i + 1..].iter().map(move |t| (*s.representative(), *t.representative())))
        .filter(|(p, q)| crosses(p, q))
        .collect();

    struct Outcome {
        kind: Option<BoundaryType>,
        edges: usize,
        cagey: bool,
        failure: Option<String>,
    }
    let outcomes: Vec<Outcome> = pairs
        .par_iter()
        .map(|(p, q)| {
            let cagey = is_cagey(p, q).unwrap_or(false);
            let b = match boundary(p, q) {
                Ok(b) => b,
                Err(e) => return Outcome { kind: None, edges: 0, cagey, failure: Some(format!("{p} x {q}: {e}")) },
            };
            let mut problems = Vec::new();
            if !(3..=4).contains(&b.distinct_edges()) {
                problems.push(format!("{} distinct edges", b.distinct_edges()));
            }
            if b.graph.validate().is_err() || b.graph.rank != rank {
                problems.push("rank conservation".to_string());
            }
            if BoundaryType::from_graph(&b.graph) != Some(b.kind) {
                problems.push(format!("graph does not match {}", b.kind));
            }
            let graph_cagey = b.kind == BoundaryType::Cage3 && b.graph.all_edges_pairwise_rose_compatible();
            if graph_cagey != cagey {
                problems.push(format!("cagey {cagey} but boundary {} / pairwise {}", b.kind, graph_cagey));
            }
            let failure = (!problems.is_empty()).then(|| format!("{p} x {q}: {}", problems.join(", ")));
            Outcome { kind: Some(b.kind), edges: b.distinct_edges(), cagey, failure }
        })
        .collect();

    let mut census: BTreeMap<String, usize> = BTreeMap::new();
    let mut edge_counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cagey_pairs = 0;
    for o in outcomes {
        r.cases_checked += 1;
        if let Some(k) = o.kind {
            *census.entry(k.name().to_string()).or_default() += 1;
            *edge_counts.entry(o.edges).or_default() += 1;
        }
        cagey_pairs += usize::from(o.cagey);
        r.failures.extend(o.failure);
    }
    r.check(census.len() <= 6, || format!("{} boundary classes observed", census.len()));
    r.observe("crossing_pairs", pairs.len());
    r.observe("cagey_pairs", cagey_pairs);
    r.observe("type_census", &census);
    r.observe("distinct_edge_counts", &edge_counts);
    Ok(r.finish())
}

pub fn verify_cagey_equivalence(rank: u8) -> Result<VerificationReport> {
    rank_range(rank, 3, 3)?;
    let oracle = CageyOracle::new(rank)?;
    let mut r = verify_cagey_equivalence_with(rank, &|s, t| oracle.cagey_by_cliques(s, t))?;
    let classes = enumerate_classes(rank)?;
    let universe_only_misses = classes
        .iter()
        .enumerate()
        .flat_map(|(i, s)| classes[i + 1..].iter().map(move |t| (s, t)))
        .filter(|(s, t)| s.is_cagey(t) && oracle.witness_in_universe(s, t).ok().flatten().is_none())
        .count();
    r.observe("cagey_pairs_without_base_universe_witness", universe_only_misses);
    Ok(r)
}

type PairTest<'a> = dyn Fn(&SplittingClass, &SplittingClass) -> Result<bool> + Sync + 'a;

pub fn verify_cagey_equivalence_with(rank: u8, clique_test: &PairTest<'_>) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("cagey-equivalence", rank);
    let classes = enumerate_classes(rank)?;
    let pairs: Vec<(SplittingClass, SplittingClass)> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, s)| classes[i + 1..].iter().map(move |t| (*s, *t)))
        .collect();
    let verdicts: Vec<Result<(bool, bool)>> =
        pairs.par_iter().map(|(s, t)| Ok((s.is_cagey(t), clique_test(s, t)?))).collect();
    let mut table: BTreeMap<String, usize> = BTreeMap::new();
    for ((s, t), v) in pairs.iter().zip(verdicts) {
        let (direct, cliques) = v?;
        *table.entry(format!("corners={direct},cliques={cliques}")).or_default() += 1;
        r.check(direct == cliques, || format!("{s} / {t}: corners {direct}, cliques {cliques}"));
        if !s.crosses(t) {
            r.check(!cliques, || format!("compatible pair {s} / {t} has a clique witness"));
        }
    }
    r.observe("agreement_table", &table);
    Ok(r.finish())
}

pub const WHITEHEAD_DEFAULT_MAX_LEN: usize = 8;

pub fn verify_whitehead_factor(a_rank: u8, w: &Word, max_len: usize) -> Result<VerificationReport> {
    verify_whitehead_factor_with(a_rank, w, max_len, &is_simple)
}

type WordTest<'a> = dyn Fn(&Word) -> Result<bool> + Sync + 'a;

pub fn verify_whitehead_factor_with(
    a_rank: u8,
    w: &Word,
    max_len: usize,
    simple: &WordTest<'_>,
) -> Result<VerificationReport> {
    if w.rank() != a_rank {
        return Err(Error::RankMismatch(w.rank(), a_rank));
    }
    if w.is_empty() || simple(w)? {
        return Err(Error::Precondition(format!("{w} is simple in the factor")));
    }
    let rank = a_rank + 1;
    let twt = conjugated_power(a_rank, w, 1)?;
    let words = enumerate_factor_product(a_rank, w, max_len)?;
    let verdicts: Vec<Result<Option<(bool, bool)>>> = words
        .par_iter()
        .map(|g| {
            if !simple(g)? {
                return Ok(None);
            }
            Ok(Some((conjugate_into_factor(g, a_rank)?, g.is_conjugate(&twt))))
        })
        .collect();

    let mut r = VerificationReport::new("whitehead-factor", rank);
    let (mut simple_count, mut into_a, mut to_twt) = (0, 0, 0);
    for (g, v) in words.iter().zip(verdicts) {
        r.cases_checked += 1;
        let Some((a, c)) = v? else { continue };
        simple_count += 1;
        into_a += usize::from(a);
        to_twt += usize::from(c);
        if !a && !c {
            r.failures.push(g.to_string());
        }
    }
    let a = Word::generator(rank, 1)?;
    let probe = a.mul(&twt).mul(&a.inverse());
    r.observe("w", w.to_string());
    r.observe("max_len", max_len);
    r.observe("words", words.len());
    r.observe("simple", simple_count);
    r.observe("simple_conjugate_into_factor", into_a);
    r.observe("simple_conjugate_to_twt", to_twt);
    r.observe(
        "case_a_twt_a_inv",
        json!({
            "g": probe.to_string(),
            "simple": simple(&probe)?,
            "conjugate_into_factor": conjugate_into_factor(&probe, a_rank)?,
            "conjugate_to_twt": probe.is_conjugate(&twt),
        }),
    );
    Ok(r.finish())
}

/// Runs a verifier by its id; `rank` defaults per verifier.
pub fn run(lemma: &str, rank: Option<u8>) -> Result<VerificationReport> {
    match lemma {
        "rigid-blowup" => verify_rigid_blowup(rank.unwrap_or(6)),
        "three-rose" => verify_three_rose(rank.unwrap_or(3)),
        "clique-rank-3" => {
            rank_range(rank.unwrap_or(3), 3, 3)?;
            verify_clique_rank3()
        }
        "boundary-types" => verify_boundary_types(rank.unwrap_or(3)),
        "cagey-equivalence" => verify_cagey_equivalence(rank.unwrap_or(3)),
        "whitehead-factor" => {
            let a_rank = match rank {
                None => 2,
                Some(n) => n.checked_sub(1).filter(|&a| a >= 2).ok_or(Error::RankOutOfRange { rank: n, min: 3, max: 3 })?,
            };
            if a_rank != 2 {
                return Err(Error::RankOutOfRange { rank: a_rank + 1, min: 3, max: 3 });
            }
            let w = Word::parse(2, "x1x2X1X2")?;
            verify_whitehead_factor(a_rank, &w, WHITEHEAD_DEFAULT_MAX_LEN)
        }
        other => Err(Error::Precondition(format!("unknown verifier `{other}`; expected one of {}", LEMMA_IDS.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::rose_compatible;

    #[test]
    fn rigid_family_sizes() {
        for n in 4..=6 {
            let f = RigidFamily::standard(n);
            assert_eq!(f.members().len(), 3 * n as usize - 3);
        }
        assert_eq!(p_partition(6, 6), Partition::parse(6, "x1+,x6-").unwrap());
    }

    #[test]
    fn rigid_rank_guard() {
        assert!(verify_rigid_blowup(3).is_err());
        assert!(verify_rigid_blowup(7).is_err());
    }

    #[test]
    fn three_rose_passes() {
        for n in [3, 4] {
            let r = verify_three_rose(n).unwrap();
            assert!(r.passed, "{:?}", r.failures);
        }
        assert!(verify_three_rose(5).is_err());
    }

    #[test]
    fn three_rose_negative_control() {
        let mut setup = ThreeRoseSetup::standard(4).unwrap();
        setup.tau.swap(0, 1);
        assert!(!verify_three_rose_with(&setup).unwrap().passed);
    }

    #[test]
    fn rose_compatible_used_by_rigid_check() {
        let f = RigidFamily::standard(4);
        let p = f.sigma[0].representative();
        assert!(rose_compatible(p, f.sigma[1].representative()).unwrap());
    }

    #[test]
    fn unknown_verifier() {
        assert!(run("nope", None).is_err());
    }
}
