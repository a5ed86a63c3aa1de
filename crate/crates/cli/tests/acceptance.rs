//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use fsplit::blowup::blow_up;
use fsplit::complexes::{GraphMode, SplittingGraph};
use fsplit::freegroup::{is_simple, Word};
use fsplit::partition::{
    circle_compatible, crosses, enumerate_classes, enumerate_ideal_edges, enumerate_thick_ideal_edges, is_cagey,
    random_compatible_family, rose_compatible, Partition, SignedPermutation,
};
use fsplit_oracles::words as ow;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Outcome {
    ok: bool,
    detail: String,
}

fn fsplit(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_fsplit"))
        .args(args)
        .env_remove("FSPLIT_WORKERS")
        .env_remove("FSPLIT_RANK_CEILING")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

/// Runs one `verify` invocation and checks exit status, the `passed` flag and the time limit.
fn verify(lemma: &str, rank: Option<u8>, limit: Duration) -> (Outcome, Value) {
    let rank_arg = rank.map(|r| r.to_string());
    let mut args = vec!["verify", lemma];
    if let Some(r) = &rank_arg {
        args.extend(["--rank", r]);
    }
    let start = Instant::now();
    let (code, stdout) = fsplit(&args);
    let took = start.elapsed();
    let report: Value = serde_json::from_slice(&stdout).unwrap_or(Value::Null);
    let passed = code == Some(0) && report["passed"] == true;
    let ok = passed && took < limit;
    let detail = format!(
        "{lemma}{} passed={passed} cases={} in {took:.2?} (limit {limit:?})",
        rank.map(|r| format!(" rank {r}")).unwrap_or_default(),
        report["cases_checked"],
    );
    (Outcome { ok, detail }, report)
}

fn combine(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        ok: parts.iter().all(|o| o.ok),
        detail: parts.into_iter().map(|o| o.detail).collect::<Vec<_>>().join("; "),
    }
}

fn rigid_blowup() -> Outcome {
    combine(
        (4..=6)
            .map(|n| {
                let (mut o, r) = verify("rigid-blowup", Some(n), Duration::from_secs(60));
                let size = r["observations"]["clique_size"].as_u64();
                o.ok &= size == Some(3 * n as u64 - 3);
                o.detail += &format!(" clique {size:?}");
                o
            })
            .collect(),
    )
}

fn three_rose() -> Outcome {
    let start = Instant::now();
    let mut o = combine((3..=4).map(|n| verify("three-rose", Some(n), Duration::from_secs(5)).0).collect());
    o.ok &= start.elapsed() < Duration::from_secs(5);
    o
}

fn boundary_types() -> Outcome {
    let limits = [(3, Duration::from_secs(30)), (4, Duration::from_secs(600))];
    combine(
        limits
            .into_iter()
            .map(|(n, limit)| {
                let (mut o, r) = verify("boundary-types", Some(n), limit);
                let census = r["observations"]["type_census"].as_object().map_or(usize::MAX, |m| m.len());
                let edges: Vec<String> = r["observations"]["distinct_edge_counts"]
                    .as_object()
                    .map(|m| m.keys().cloned().collect())
                    .unwrap_or_default();
                o.ok &= census <= 6 && !edges.is_empty() && edges.iter().all(|k| k == "3" || k == "4");
                o.detail += &format!(" classes {census} distinct-edge counts {edges:?}");
                o
            })
            .collect(),
    )
}

fn whitehead_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut disagreements = Vec::new();
    for (rank, len) in [(2u8, 5usize), (3, 4)] {
        for w in ow::cyclically_reduced_words(rank, len) {
            let word = Word::new(rank, w.iter().map(|&l| l as i8).collect()).expect("valid word");
            if is_simple(&word).expect("nonempty") != ow::simple_by_search(rank, &w, 6) {
                disagreements.push(word.to_string());
            }
            checked += 1;
        }
    }
    let anchors = (1..=3).all(|i| is_simple(&Word::generator(3, i).unwrap()).unwrap())
        && (1..=2).all(|i| is_simple(&Word::generator(2, i).unwrap()).unwrap())
        && !is_simple(&Word::parse(2, "x1x2X1X2").unwrap()).unwrap();
    let took = start.elapsed();
    Outcome {
        ok: disagreements.is_empty() && anchors && took < Duration::from_secs(300),
        detail: format!("{checked} words, {} disagreements, anchors {anchors}, in {took:.2?}", disagreements.len()),
    }
}

fn whitehead_factor() -> Outcome {
    let (mut o, r) = verify("whitehead-factor", None, Duration::from_secs(300));
    let word = r["observations"]["w"].as_str().unwrap_or("?").to_string();
    let max_len = r["observations"]["max_len"].as_u64();
    o.ok &= word == "x1x2X1X2" && max_len == Some(8) && r["failures"].as_array().is_some_and(|f| f.is_empty());
    o.detail += &format!(" w={word} max_len={max_len:?}");
    o
}

fn ideal_pairs(rank: u8) -> Vec<(Partition, Partition)> {
    let parts = enumerate_ideal_edges(rank).unwrap();
    parts.iter().enumerate().flat_map(|(i, p)| parts[i + 1..].iter().map(move |q| (*p, *q))).collect()
}

fn verdicts(p: &Partition, q: &Partition) -> [bool; 4] {
    [crosses(p, q), rose_compatible(p, q).unwrap(), circle_compatible(p, q).unwrap(), is_cagey(p, q).unwrap()]
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let pairs = ideal_pairs(3);
    let perms = SignedPermutation::all(3);
    let symmetric = pairs.iter().all(|(p, q)| verdicts(p, q) == verdicts(q, p));
    let equivariant = perms
        .iter()
        .all(|g| pairs.iter().all(|(p, q)| verdicts(p, q) == verdicts(&p.permuted(g), &q.permuted(g))));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let conserved = (0..1000).all(|k| {
        let rank = 3 + (k % 4) as u8;
        let family = random_compatible_family(rank, &mut rng).unwrap();
        let g = blow_up(&family, rank).unwrap();
        g.validate().is_ok() && g.betti_number() + g.total_vertex_rank() == rank as i64
    });

    let counts = (
        enumerate_ideal_edges(3).unwrap().len(),
        enumerate_classes(3).unwrap().len(),
        enumerate_thick_ideal_edges(3).unwrap().len(),
    );
    let max_clique = SplittingGraph::build(3, GraphMode::Ens).unwrap().max_clique_size();
    let took = start.elapsed();
    Outcome {
        ok: symmetric
            && equivariant
            && conserved
            && counts == (28, 25, 22)
            && max_clique <= 6
            && took < Duration::from_secs(120),
        detail: format!(
            "symmetric {symmetric}, equivariant over {} signed permutations {equivariant}, \
             rank conservation on 1000 families {conserved}, counts {counts:?}, max ens clique {max_clique}, in {took:.2?}",
            perms.len()
        ),
    }
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let (a_code, a) = fsplit(&["verify", "all"]);
    let (b_code, b) = fsplit(&["verify", "all"]);
    let identical = a == b && !a.is_empty();
    Outcome {
        ok: identical && a_code == Some(0) && b_code == Some(0),
        detail: format!("two runs of the full battery, {} bytes, identical {identical}, in {:.2?}", a.len(), start.elapsed()),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("rigid blow-up at ranks 4..6", rigid_blowup),
        ("three-rose at ranks 3 and 4", three_rose),
        ("clique census at rank 3", || verify("clique-rank-3", None, Duration::from_secs(30)).0),
        ("boundary types at ranks 3 and 4", boundary_types),
        ("cagey equivalence at rank 3", || verify("cagey-equivalence", Some(3), Duration::from_secs(120)).0),
        ("Whitehead simplicity vs brute-force search", whitehead_oracle),
        ("Whitehead factor claim for [a,b]", whitehead_factor),
        ("property suites", property_suites),
        ("determinism of the verification battery", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.ok);
        println!("criterion {}: {} {name}: {}", i + 1, if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
