mod common;

use std::collections::BTreeSet;

use common::{classified, fixtures, trade};
use trades::analysis::{dual_space, witt_design};
use trades::golden::{LENGTH10_IDS, LENGTH8_IDS};
use trades::search::{
    classify, double_count_validate, find_third_mate, read_checkpoint, write_classification, SearchConfig,
};
use trades::trade::{complement_symmetry, is_primary};
use trades::{are_equivalent, ComplementSymmetry, Word};

#[test]
fn length8_classes() {
    let r = classified(8);
    assert_eq!(r.volumes(), [8, 12, 14, 16, 16]);
    assert_eq!(r.raw_solution_count, 57);
    let mut duals: Vec<usize> =
        r.classes[3..].iter().map(|c| dual_space(&c.trade.words()).unwrap().members.len()).collect();
    duals.sort_unstable();
    assert_eq!(duals, [2, 4]);
    for f in fixtures(&LENGTH8_IDS) {
        let t = f.trade().unwrap();
        assert_eq!(r.classes.iter().filter(|c| are_equivalent(&c.trade, t).unwrap()).count(), 1, "{}", f.id);
    }
    assert!(double_count_validate(r, &SearchConfig::new(8, false)).unwrap().ok);
}

#[test]
fn length10_classes_match_the_published_trades() {
    let r = classified(10);
    assert_eq!(r.volumes(), [16, 24, 28, 32, 32, 32, 36, 40]);
    assert_eq!(r.raw_solution_count, 1817);
    assert_eq!(r.weighted_solution_count, 1817);
    for id in LENGTH10_IDS {
        let t = trade(id);
        assert_eq!(r.classes.iter().filter(|c| are_equivalent(&c.trade, &t).unwrap()).count(), 1, "{id}");
    }
    let dc = double_count_validate(r, &SearchConfig::new(10, false)).unwrap();
    assert!(dc.ok, "{dc:?}");
}

#[test]
fn solutions_are_primary_codes_of_distance_4_closed_under_complement() {
    for n in [8, 10] {
        for c in &classified(n).classes {
            let t = &c.trade;
            assert!(is_primary(t).unwrap());
            for part in [t.t0(), t.t1()] {
                for (i, a) in part.iter().enumerate() {
                    for b in &part[i + 1..] {
                        assert!(a.hamming_distance(*b).unwrap() >= 4);
                    }
                }
            }
            let want = if n % 4 == 2 { ComplementSymmetry::SwapsParts } else { ComplementSymmetry::FixesParts };
            assert_eq!(complement_symmetry(t), want);
        }
    }
}

#[test]
fn merging_at_a_checkpoint_keeps_classes_and_weighted_count() {
    let cfg = SearchConfig::new(10, false).with_checkpoints(vec![2]);
    let merged = classify(&cfg).unwrap();
    let plain = classified(10);
    let keys = |r: &trades::search::ClassificationResult| r.classes.iter().map(|c| c.key.clone()).collect::<Vec<_>>();
    assert_eq!(keys(&merged), keys(plain));
    assert_eq!(merged.weighted_solution_count, 1817);
    assert!(merged.raw_solution_count < 1817);
    assert!(merged.checkpoints[0].after < merged.checkpoints[0].before);
    assert!(double_count_validate(&merged, &cfg).unwrap().ok);
}

#[test]
fn worker_count_does_not_change_the_result() {
    let one = classify(&SearchConfig::new(8, false).with_checkpoints(vec![1, 2])).unwrap();
    let three = classify(&SearchConfig::new(8, false).with_checkpoints(vec![1, 2]).with_workers(3)).unwrap();
    assert_eq!(one, three);
    assert_eq!(write_classification(&one), write_classification(&three));
    let keys: Vec<_> = one.classes.iter().map(|c| &c.key).collect();
    assert_eq!(keys, classified(8).classes.iter().map(|c| &c.key).collect::<Vec<_>>());
}

#[test]
fn resuming_from_a_checkpoint_file_reproduces_the_run() {
    let dir = std::env::temp_dir().join(format!("trades-resume-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("cp.txt");
    let mut cfg = SearchConfig::new(8, false).with_checkpoints(vec![1, 3]);
    cfg.checkpoint_file = Some(file.clone());
    let full = classify(&cfg).unwrap();
    let cp = read_checkpoint(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(cp.stage, 2);
    cfg.checkpoint_file = None;
    cfg.resume_from = Some(file.clone());
    assert_eq!(classify(&cfg).unwrap(), full);
    // a different configuration must not resume from it
    let other = SearchConfig { resume_from: Some(file), ..SearchConfig::new(8, false).with_checkpoints(vec![2]) };
    assert!(classify(&other).is_err());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn restriction_without_a_seedable_word_finds_nothing() {
    let w = vec![Word::parse("111111000000").unwrap()];
    let r = classify(&SearchConfig::restricted(12, w)).unwrap();
    assert!(r.classes.is_empty());
    assert_eq!(r.raw_solution_count, 0);
}

#[test]
fn witt_restricted_search_finds_a_unique_volume_132_class() {
    let r = classify(&SearchConfig::restricted(12, witt_design())).unwrap();
    let vols: Vec<usize> = r.volumes();
    assert_eq!(vols, [72, 96, 108, 108, 120, 120, 132]);
    let design: BTreeSet<Word> = witt_design().into_iter().collect();
    for c in &r.classes {
        assert!(c.trade.t0().iter().all(|w| design.contains(w)));
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(classify(&SearchConfig::new(9, false)).is_err());
    assert!(classify(&SearchConfig::new(10, true)).is_err());
    assert!(classify(&SearchConfig::new(8, false).with_checkpoints(vec![3, 2])).is_err());
    assert!(classify(&SearchConfig::new(8, false).with_checkpoints(vec![0])).is_err());
}

#[test]
fn length10_trades_have_no_third_mate() {
    // complements would have to lie in both other parts
    for id in LENGTH10_IDS {
        assert!(find_third_mate(&trade(id)).unwrap().is_empty(), "{id}");
    }
}
