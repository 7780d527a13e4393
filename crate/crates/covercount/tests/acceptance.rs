//! Acceptance gate: ten criteria, one verdict line each. Each test prints
//! `criterion N (...): PASS` or a FAIL line with details before panicking.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use covercount::atoms::c6_with_apex;
use covercount::verify::{run_suite, VerifyConfig};
use covercount::{
    count_covers, count_covers_bruteforce, enumerate_atoms, isomorphic, proof_guided_atoms,
    realize_witness, run_closure, AtomSet, CoverCount, CoverCounter, Graph, Pool,
};

fn conclude(label: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("{label}: PASS");
    } else {
        println!("{label}: FAIL");
        for f in &failures {
            println!("  {f}");
        }
        panic!("{label} failed with {} problem(s), first: {}", failures.len(), failures[0]);
    }
}

fn check(failures: &mut Vec<String>, ok: bool, detail: impl FnOnce() -> String) {
    if !ok {
        failures.push(detail());
    }
}

#[test]
fn criterion_01_cycle_counts() {
    let mut failures = Vec::new();
    for (n, want) in [(4usize, 7u64), (6, 18), (8, 47), (10, 123)] {
        let got = count_covers(&Graph::cycle(n));
        check(&mut failures, got.to_u64() == Some(want), || {
            format!("C{n}: expected {want}, got {got}")
        });
    }
    conclude("criterion 1 (cycle counts 7/18/47/123)", failures);
}

#[test]
fn criterion_02_named_graph_counts() {
    let mut failures = Vec::new();
    let k23 = count_covers(&Graph::complete_bipartite(2, 3));
    check(&mut failures, k23.to_u64() == Some(25), || {
        format!("K_{{2,3}}: expected 25, got {k23}")
    });
    let apex = count_covers(&c6_with_apex());
    check(&mut failures, apex.to_u64() == Some(66), || {
        format!("C6 plus degree-2 apex: expected 66, got {apex}")
    });
    conclude("criterion 2 (named graphs 25/66)", failures);
}

#[test]
fn criterion_03_oracle_equivalence() {
    let cfg = VerifyConfig {
        samples: 10_000,
        exhaustive_edges: 9,
        ..VerifyConfig::default()
    };
    let r = run_suite("oracle", &cfg).unwrap();
    let mut failures = r.examples.clone();
    check(&mut failures, r.failures == 0, || {
        format!("{} of {} oracle checks failed", r.failures, r.checks)
    });
    check(&mut failures, r.checks >= 11_000, || {
        format!("only {} checks ran", r.checks)
    });
    conclude(
        "criterion 3 (oracle equivalence, exhaustive <=9 edges plus 10^4 random)",
        failures,
    );
}

#[test]
fn criterion_04_precover_identity() {
    let cfg = VerifyConfig {
        samples: 10_000,
        exhaustive_edges: 9,
        ..VerifyConfig::default()
    };
    let r = run_suite("precover", &cfg).unwrap();
    let mut failures = r.examples.clone();
    check(&mut failures, r.failures == 0, || {
        format!("{} of {} precover checks failed", r.failures, r.checks)
    });
    check(&mut failures, r.checks >= 11_000, || {
        format!("only {} checks ran", r.checks)
    });
    conclude("criterion 4 (precover identity s = alpha + beta)", failures);
}

#[test]
fn criterion_05_growth_lemma_bounds() {
    let cfg = VerifyConfig {
        samples: 10_000,
        ..VerifyConfig::default()
    };
    let r = run_suite("lemmas", &cfg).unwrap();
    let mut failures = r.examples.clone();
    check(&mut failures, r.failures == 0, || {
        format!("{} of {} lemma checks failed", r.failures, r.checks)
    });
    check(&mut failures, r.checks == 30_000, || {
        format!("expected 3 x 10^4 checks, ran {}", r.checks)
    });
    conclude("criterion 5 (growth lemma factors 2/3/5 on 10^4 augmentations each)", failures);
}

#[test]
fn criterion_06_atom_classification() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let enumerated = enumerate_atoms(67, 8).unwrap();
    let guided = proof_guided_atoms(67);
    check(&mut failures, enumerated.len() == 7, || {
        format!("exhaustive generator found {} atoms, expected 7", enumerated.len())
    });
    check(&mut failures, guided.len() == 7, || {
        format!("structural generator found {} atoms, expected 7", guided.len())
    });
    if enumerated.len() == 7 && guided.len() == 7 {
        for ((ge, ae), (gg, ag)) in enumerated.atoms().iter().zip(guided.iter()) {
            check(
                &mut failures,
                isomorphic(ge, gg).unwrap() && ae == ag,
                || format!("generators disagree: {:?} vs {:?}", ge.edges(), gg.edges()),
            );
        }
        // Alpha multiset: the six pinned values plus the chord atom's
        // brute-forced value, which only has to land in 36..=67.
        let mut alphas: Vec<u64> = enumerated
            .atoms()
            .iter()
            .map(|(_, a)| a.to_u64().unwrap())
            .collect();
        alphas.sort_unstable();
        let pinned: BTreeSet<u64> = [1, 7, 18, 25, 47, 66].into();
        let extra: Vec<u64> = alphas.iter().copied().filter(|a| !pinned.contains(a)).collect();
        check(&mut failures, extra.len() == 1 && (36..=67).contains(&extra[0]), || {
            format!("alpha multiset {alphas:?} is not {{1,7,18,25,47,66}} plus one value in 36..=67")
        });
        for (g, _) in enumerated.atoms() {
            check(
                &mut failures,
                g.is_connected() && g.is_bipartite() && g.is_atomic().unwrap(),
                || format!("catalog entry {:?} fails the atom predicates", g.edges()),
            );
        }
        for i in 0..7 {
            for j in i + 1..7 {
                check(
                    &mut failures,
                    !isomorphic(&enumerated.atoms()[i].0, &enumerated.atoms()[j].0).unwrap(),
                    || format!("catalog entries {i} and {j} are isomorphic"),
                );
            }
        }
    }
    let elapsed = started.elapsed();
    check(&mut failures, elapsed.as_secs() < 600, || {
        format!("took {elapsed:?}, budget is 10 minutes")
    });
    conclude(
        &format!("criterion 6 (exactly seven atoms below 67, generators agree, {elapsed:.2?})"),
        failures,
    );
}

#[test]
fn criterion_07_headline_search() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let atoms = AtomSet::default_seven();

    let pool67 = run_closure(&atoms, 67).unwrap();
    let impossible67 = pool67.certified_impossible(67, false).unwrap();
    let proven: BTreeSet<u64> = [19, 37, 41, 59, 67].into();
    check(&mut failures, impossible67 == proven, || {
        format!("L=67 certified impossible {impossible67:?}, expected {proven:?}")
    });
    let want67: BTreeSet<u64> = (1..=67).filter(|v| !proven.contains(v)).collect();
    check(&mut failures, pool67.achievable_alphas() == want67, || {
        "L=67 achievable set is not exactly the 62 non-excepted values".into()
    });

    let pool1000 = run_closure(&atoms, 1000).unwrap();
    let achievable = pool1000.achievable_alphas();
    let missing: BTreeSet<u64> = (1..=1000).filter(|v| !achievable.contains(v)).collect();
    // The previously reported exception list below 1000; its last eight
    // entries were explicitly left undecided back then.
    let reported: BTreeSet<u64> =
        [19, 37, 41, 59, 67, 82, 97, 149, 197, 223, 257, 291, 379].into();
    let undecided: BTreeSet<u64> = [82, 97, 149, 197, 223, 257, 291, 379].into();
    for v in &proven {
        check(&mut failures, missing.contains(v), || {
            format!("{v} is proven impossible but the pool claims it")
        });
    }
    check(&mut failures, missing.is_subset(&reported), || {
        format!(
            "values missing beyond the reported exceptions: {:?}",
            missing.difference(&reported).collect::<Vec<_>>()
        )
    });
    // Any departure from the reported list must sit among its undecided
    // entries and must come with a witness that survives independent
    // re-verification against the definition-level brute force.
    let deviations: BTreeSet<u64> = reported.difference(&missing).copied().collect();
    check(&mut failures, deviations.is_subset(&undecided), || {
        format!(
            "deviations {:?} touch values that were proven impossible",
            deviations.difference(&undecided).collect::<Vec<_>>()
        )
    });
    for &v in &deviations {
        let (_, entry) = pool1000.entry_for_alpha(v).unwrap();
        match realize_witness(&entry.witness, atoms.graphs()) {
            Ok(rg) => {
                let g = rg.graph();
                check(&mut failures, g.is_connected() && g.is_bipartite(), || {
                    format!("witness for {v} is not a connected bipartite graph")
                });
                match count_covers_bruteforce(g) {
                    Ok(b) => check(&mut failures, b.to_u64() == Some(v), || {
                        format!("witness for {v} brute-forces to {b}")
                    }),
                    Err(e) => failures.push(format!("brute force on the witness for {v}: {e}")),
                }
            }
            Err(e) => failures.push(format!("witness for {v} failed to realize: {e}")),
        }
    }
    // This build settles 291 as achievable; the other twelve stay missing.
    check(&mut failures, deviations == [291].into(), || {
        format!("expected exactly {{291}} to deviate from the reported list, got {deviations:?}")
    });
    let unresolved = pool1000.unresolved(67);
    let want_unresolved: BTreeSet<u64> = [82, 97, 149, 197, 223, 257, 379].into();
    check(&mut failures, unresolved == want_unresolved, || {
        format!("unresolved set {unresolved:?}, expected {want_unresolved:?}")
    });
    // Impossibility claims above the certification bound must be refused.
    check(
        &mut failures,
        pool1000.certified_impossible(1000, false).is_err(),
        || "the pool claimed impossibility above its certification bound".into(),
    );
    let elapsed = started.elapsed();
    check(&mut failures, elapsed.as_secs() < 1800, || {
        format!("took {elapsed:?}, budget is 30 minutes")
    });
    conclude(
        &format!(
            "criterion 7 (headline search; 291 settled achievable with a re-verified witness, {elapsed:.2?})"
        ),
        failures,
    );
}

#[test]
fn criterion_08_tree_mode() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let pool = run_closure(&AtomSet::trees(), 256).unwrap();
    let impossible = pool.certified_impossible(256, false).unwrap();
    let want: BTreeSet<u64> = [
        19, 37, 41, 57, 59, 67, 79, 82, 97, 111, 131, 149, 177, 179, 197, 201, 205, 223, 237, 251,
    ]
    .into();
    check(&mut failures, impossible == want, || {
        format!(
            "tree-unreachable set has {} values {:?}, expected the 20 known ones",
            impossible.len(),
            impossible
        )
    });
    let elapsed = started.elapsed();
    check(&mut failures, elapsed.as_secs() <= 60, || {
        format!("took {elapsed:?}, budget is 1 minute")
    });
    conclude(
        &format!("criterion 8 (tree mode: the 20 unreachable values below 256, {elapsed:.2?})"),
        failures,
    );
}

fn witness_failures(pool: &Pool, require_trees: bool, counter: &mut CoverCounter) -> (u64, Vec<String>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for value in pool.achievable_alphas() {
        let (_, entry) = pool.entry_for_alpha(value).unwrap();
        checked += 1;
        let rg = match realize_witness(&entry.witness, pool.atom_set().graphs()) {
            Ok(rg) => rg,
            Err(e) => {
                failures.push(format!("witness for {value} failed to realize: {e}"));
                continue;
            }
        };
        let g = rg.graph();
        if !g.is_connected() {
            failures.push(format!("witness for {value} is disconnected"));
        }
        if !g.is_bipartite() {
            failures.push(format!("witness for {value} is not bipartite"));
        }
        if require_trees && g.edge_count() != g.vertex_count() - 1 {
            failures.push(format!("witness for {value} is not a tree"));
        }
        if counter.count(g) != CoverCount::from(value) {
            failures.push(format!("witness for {value} does not reproduce its count"));
        }
    }
    (checked, failures)
}

#[test]
fn criterion_09_witness_soundness() {
    let mut counter = CoverCounter::new();
    let mut failures = Vec::new();
    let mut total = 0;
    for pool in [
        run_closure(&AtomSet::default_seven(), 67).unwrap(),
        run_closure(&AtomSet::default_seven(), 1000).unwrap(),
    ] {
        let (checked, fs) = witness_failures(&pool, false, &mut counter);
        total += checked;
        failures.extend(fs);
    }
    let trees = run_closure(&AtomSet::trees(), 256).unwrap();
    let (checked, fs) = witness_failures(&trees, true, &mut counter);
    total += checked;
    failures.extend(fs);
    // Every achievable value is verified, which covers both the exhaustive
    // (<= 14 edges) and the sampled (1000 above) halves of the criterion.
    check(&mut failures, total >= 1200, || {
        format!("only {total} witnesses verified")
    });
    failures.truncate(10);
    conclude(
        &format!("criterion 9 (witness soundness, all {total} achievable values re-realized)"),
        failures,
    );
}

#[test]
fn criterion_10_pruning_soundness() {
    let mut failures = Vec::new();
    let atoms = AtomSet::default_seven();
    let pool67 = run_closure(&atoms, 67).unwrap();
    let pool200 = run_closure(&atoms, 200).unwrap();

    type Flat = BTreeMap<(u64, u64), (u32, String)>;
    let flatten = |pool: &Pool, cap: u64| -> Flat {
        pool.entries()
            .filter(|(&(a, _), _)| a <= cap)
            .map(|(&k, e)| {
                (
                    k,
                    (e.edges, covercount::search::serialize_witness(&e.witness)),
                )
            })
            .collect()
    };
    let restricted = flatten(&pool200, 67);
    let small = flatten(&pool67, u64::MAX);
    check(&mut failures, restricted == small, || {
        let only_200: Vec<_> = restricted.keys().filter(|k| !small.contains_key(k)).collect();
        let only_67: Vec<_> = small.keys().filter(|k| !restricted.contains_key(k)).collect();
        format!(
            "restricted pools differ: {} extra at L=200 {only_200:?}, {} extra at L=67 {only_67:?}",
            only_200.len(),
            only_67.len()
        )
    });
    check(&mut failures, pool67.verify_closed().unwrap(), || {
        "an extra round over the L=67 pool added pairs".into()
    });
    check(&mut failures, pool200.verify_closed().unwrap(), || {
        "an extra round over the L=200 pool added pairs".into()
    });
    conclude("criterion 10 (pruning soundness and fixpoint stability)", failures);
}
