use std::collections::HashSet;

use sensmatch::generator::{
    class_pairs, gen_classes, gen_random, gen_random_distinct, random_pairs,
};
use sensmatch::pipeline::{classify, match_pair};
use sensmatch::{exact_equivalent, PruneConfig};

#[test]
fn distinct_three_input_tables_cover_the_classes() {
    let tables = gen_random_distinct(3, 256, 12).unwrap();
    let part = classify(&tables, &PruneConfig::default()).unwrap();
    assert_eq!(part.classes.len(), 14);
    let few = gen_random_distinct(3, 40, 12).unwrap();
    let part = classify(&few, &PruneConfig::default()).unwrap();
    assert!(part.classes.len() > 1 && part.classes.len() <= 14);
}

#[test]
fn random_minterm_counts_are_binomial() {
    let tables = gen_random(8, 10_000, 5).unwrap();
    let mean = tables.iter().map(|t| t.minterm_count() as f64).sum::<f64>() / tables.len() as f64;
    // sd of a single count is sqrt(256/4) = 8, so the mean's sd is 0.08
    assert!((mean - 128.0).abs() < 3.0 * 0.08, "mean {mean}");
}

#[test]
fn class_batches_recover_their_planted_classes() {
    for (n, count, classes) in [(4usize, 200usize, 30usize), (6, 300, 25), (9, 120, 12)] {
        let labelled = gen_classes(n, count, classes, n as u64).unwrap();
        let tables: Vec<_> = labelled.iter().map(|(t, _)| t.clone()).collect();
        let part = classify(&tables, &PruneConfig::default()).unwrap();
        assert_eq!(part.classes.len(), classes, "n={n}");
        for (i, (_, c)) in labelled.iter().enumerate() {
            for (j, (_, d)) in labelled.iter().enumerate().take(i) {
                assert_eq!(part.class_of[i] == part.class_of[j], c == d);
            }
        }
        // each member matches the first member of its class
        for (t, c) in &labelled {
            let rep = &labelled.iter().find(|(_, d)| d == c).unwrap().0;
            let out = match_pair(rep, t, &PruneConfig::default()).unwrap();
            assert!(out.equivalent);
            assert_eq!(rep.apply(out.witness.as_ref().unwrap()).unwrap(), *t);
        }
    }
}

#[test]
fn single_class_batches_are_all_equivalent() {
    let labelled = gen_classes(7, 30, 1, 3).unwrap();
    assert!(labelled.iter().all(|(_, c)| *c == 0));
    let part = classify(
        &labelled.into_iter().map(|(t, _)| t).collect::<Vec<_>>(),
        &PruneConfig::default(),
    )
    .unwrap();
    assert_eq!(part.classes.len(), 1);
}

#[test]
fn planted_pair_fraction_is_respected() {
    let w = class_pairs(5, 100_000, 100, 0.15, 21).unwrap();
    let planted = w.planted.iter().filter(|p| **p == Some(true)).count() as f64 / w.len() as f64;
    assert!((planted - 0.15).abs() <= 0.02, "rate {planted}");
    for (i, (f, g)) in w.pairs.iter().enumerate().step_by(97) {
        let eq = exact_equivalent(f, g).unwrap().is_some();
        assert_eq!(Some(eq), w.planted[i]);
    }
}

#[test]
fn pair_workloads_are_seeded() {
    assert_eq!(
        random_pairs(6, 50, 1).unwrap(),
        random_pairs(6, 50, 1).unwrap()
    );
    assert_ne!(
        random_pairs(6, 50, 1).unwrap(),
        random_pairs(6, 50, 2).unwrap()
    );
    let a = class_pairs(6, 50, 10, 0.5, 4).unwrap();
    assert_eq!(a, class_pairs(6, 50, 10, 0.5, 4).unwrap());
    let all: HashSet<_> = a.planted.iter().collect();
    assert_eq!(all.len(), 2);
}
