use fsplit::blowup::{blow_up, classify_shape};
use fsplit::complexes::{GraphMode, SplittingGraph};
use fsplit::freegroup::{
    connected_no_cutvertex, cyclically_reduced_words, is_simple, whitehead_graph, FreeAutomorphism, Side,
    WhiteheadMove, Word,
};
use fsplit::partition::{
    circle_compatible, corner_sets, crosses, enumerate_classes, enumerate_ideal_edges, is_cagey, random_compatible_family,
    rose_compatible, DirectionSet, Partition, RoseMove, SignedPermutation,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ideal_pairs(rank: u8) -> Vec<(Partition, Partition)> {
    let parts = enumerate_ideal_edges(rank).unwrap();
    let mut out = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        for q in &parts[i + 1..] {
            out.push((*p, *q));
        }
    }
    out
}

#[derive(Debug, PartialEq)]
struct Verdicts {
    crosses: bool,
    rose: bool,
    circle: bool,
    cagey: bool,
}

fn verdicts(p: &Partition, q: &Partition) -> Verdicts {
    Verdicts {
        crosses: crosses(p, q),
        rose: rose_compatible(p, q).unwrap(),
        circle: circle_compatible(p, q).unwrap(),
        cagey: is_cagey(p, q).unwrap(),
    }
}

#[test]
fn predicates_are_symmetric() {
    for (p, q) in ideal_pairs(3) {
        assert_eq!(verdicts(&p, &q), verdicts(&q, &p), "{p} {q}");
    }
}

#[test]
fn predicates_are_equivariant_under_signed_permutations() {
    let perms = SignedPermutation::all(3);
    assert_eq!(perms.len(), 8 * 6);
    let pairs = ideal_pairs(3);
    for g in &perms {
        for (p, q) in &pairs {
            assert_eq!(verdicts(p, q), verdicts(&p.permuted(g), &q.permuted(g)), "{p} {q}");
        }
    }
}

#[test]
fn compatibility_dichotomy_and_implications() {
    for n in [3, 4] {
        for (p, q) in ideal_pairs(n) {
            let v = verdicts(&p, &q);
            let same_splitting = p.class_representative() == q.class_representative();
            if !v.crosses && !same_splitting {
                assert!(v.rose ^ v.circle, "{p} {q}");
            }
            if v.crosses {
                assert!(!v.rose && !v.circle);
            }
            if v.cagey {
                assert!(v.crosses);
            }
        }
    }
}

#[test]
fn corners_partition_the_directions() {
    for (p, q) in ideal_pairs(3).into_iter().filter(|(p, q)| crosses(p, q)) {
        let k = corner_sets(&p, &q).as_array();
        let mut union = DirectionSet::EMPTY;
        for (i, a) in k.iter().enumerate() {
            assert!(!a.is_empty());
            for b in &k[i + 1..] {
                assert!(a.is_disjoint(*b));
            }
            union = union.union(*a);
        }
        assert_eq!(union, DirectionSet::full(3));
    }
}

#[test]
fn rose_moves_preserve_predicates() {
    let classes = enumerate_classes(3).unwrap();
    let mut checked = 0;
    for m in RoseMove::all(3).unwrap() {
        for (i, s) in classes.iter().enumerate() {
            for t in &classes[i + 1..] {
                let (Some(s2), Some(t2)) = (m.apply_class(s), m.apply_class(t)) else { continue };
                assert_ne!(s2, t2);
                assert_eq!(s.crosses(t), s2.crosses(&t2));
                assert_eq!(s.rose_compatible(t), s2.rose_compatible(&t2));
                assert_eq!(s.is_cagey(t), s2.is_cagey(&t2));
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn rank_conservation_on_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..1000 {
        let rank = 3 + (k % 4) as u8;
        let family = random_compatible_family(rank, &mut rng).unwrap();
        let g = blow_up(&family, rank).unwrap();
        g.validate().unwrap();
        assert_eq!(g.betti_number() + g.total_vertex_rank(), rank as i64);
        assert_eq!(g.edges.len(), family.len());
        let shape = classify_shape(&g);
        assert_eq!(shape.edge_count, family.len());
    }
}

#[test]
fn no_ens_clique_exceeds_bound() {
    let g = SplittingGraph::build(3, GraphMode::Ens).unwrap();
    assert_eq!(g.max_clique_size(), 6);
    assert!(g.cliques_of_size(7).is_empty());
    assert_eq!(g.cliques_of_size(6).len(), 32);
}

fn simplicity_test_words() -> Vec<Word> {
    let mut out = cyclically_reduced_words(2, 5);
    out.extend(cyclically_reduced_words(3, 4));
    out
}

#[test]
fn simplicity_is_invariant() {
    for w in simplicity_test_words() {
        let rank = w.rank();
        let s = is_simple(&w).unwrap();
        assert_eq!(is_simple(&w.inverse()).unwrap(), s, "{w}");
        for i in 1..=rank {
            let x = Word::generator(rank, i).unwrap();
            assert_eq!(is_simple(&x.mul(&w).mul(&x.inverse())).unwrap(), s, "{w}");
        }
        for m in WhiteheadMove::all(rank) {
            assert_eq!(is_simple(&m.apply(&w)).unwrap(), s, "{w} under {m}");
        }
        for i in 1..=rank {
            for j in (1..=rank).filter(|&j| j != i) {
                for side in [Side::Left, Side::Right] {
                    let phi = FreeAutomorphism::nielsen(rank, i, j, side).unwrap();
                    assert_eq!(is_simple(&phi.apply(&w)).unwrap(), s, "{w}");
                }
            }
        }
        if connected_no_cutvertex(&whitehead_graph(&w).unwrap()) {
            assert!(!s, "{w}");
        }
    }
}

#[test]
fn left_and_right_twists_commute() {
    let z1 = Word::parse(2, "x1x2X1X2").unwrap();
    let z2 = Word::parse(2, "x1x1x2").unwrap();
    let left = FreeAutomorphism::twist(3, 3, &z1, Side::Left).unwrap();
    let right = FreeAutomorphism::twist(3, 3, &z2, Side::Right).unwrap();
    for n in 1..=4 {
        for w in fsplit::freegroup::words_of_length(3, n) {
            assert_eq!(left.apply(&right.apply(&w)), right.apply(&left.apply(&w)), "{w}");
        }
    }
}

fn automorphism_strategy(rank: u8) -> impl Strategy<Value = FreeAutomorphism> {
    let moves = WhiteheadMove::all(rank);
    proptest::collection::vec((0..moves.len(), 1..=rank, 1..=rank, any::<bool>()), 1..6).prop_map(move |steps| {
        steps.into_iter().fold(FreeAutomorphism::identity(rank), |acc, (m, i, j, left)| {
            let side = if left { Side::Left } else { Side::Right };
            let step = if i == j {
                FreeAutomorphism::whitehead(&moves[m])
            } else {
                FreeAutomorphism::nielsen(rank, i, j, side).unwrap()
            };
            step.compose(&acc)
        })
    })
}

fn word_strategy(rank: u8) -> impl Strategy<Value = Word> {
    let r = rank as i8;
    proptest::collection::vec((1..=r, any::<bool>()), 0..12)
        .prop_map(move |v| Word::new(rank, v.into_iter().map(|(i, s)| if s { i } else { -i }).collect()).unwrap())
}

proptest! {
    #[test]
    fn automorphism_round_trip(phi in automorphism_strategy(3), w in word_strategy(3)) {
        prop_assert_eq!(phi.apply_inverse(&phi.apply(&w)), w.clone());
        prop_assert_eq!(phi.inverse().apply(&phi.apply(&w)), w);
        prop_assert_eq!(phi.inverse().compose(&phi), FreeAutomorphism::identity(3));
    }

    #[test]
    fn conjugacy_is_rotation_invariant(w in word_strategy(3), k in 0usize..12) {
        let c = w.cyclic_reduce();
        if !c.is_empty() {
            let n = c.len();
            let rotated: Vec<i8> = (0..n).map(|j| c.letters()[(j + k) % n]).collect();
            prop_assert!(w.is_conjugate(&Word::new(3, rotated).unwrap()));
        }
    }
}
