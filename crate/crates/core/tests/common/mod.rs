#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use trades::golden::{load_fixture, Fixture, LENGTH10_IDS, LENGTH12_IDS, LENGTH8_IDS};
use trades::search::{classify, ClassificationResult, SearchConfig};
use trades::{Trade, Word};

pub fn fixture(id: &str) -> Fixture {
    load_fixture(id).unwrap_or_else(|e| panic!("fixture {id}: {e}"))
}

pub fn trade(id: &str) -> Trade {
    fixture(id).trade().expect("trade fixture").clone()
}

pub fn fixtures(ids: &[&str]) -> Vec<Fixture> {
    ids.iter().map(|id| fixture(id)).collect()
}

/// Every extended 1-perfect trade among the fixtures.
pub fn extended_ids() -> Vec<&'static str> {
    let mut v = vec!["L6"];
    v.extend(LENGTH8_IDS);
    v.extend(LENGTH10_IDS);
    v.extend(LENGTH12_IDS);
    v
}

pub fn set(ws: &[Word]) -> BTreeSet<Word> {
    ws.iter().copied().collect()
}

pub fn classified(n: usize) -> &'static ClassificationResult {
    static C8: OnceLock<ClassificationResult> = OnceLock::new();
    static C10: OnceLock<ClassificationResult> = OnceLock::new();
    let cell = match n {
        8 => &C8,
        10 => &C10,
        _ => panic!("no cached classification for length {n}"),
    };
    cell.get_or_init(|| classify(&SearchConfig::new(n, false)).unwrap())
}

/// Sorted sizes of a partition.
pub fn sizes(parts: &[Vec<usize>]) -> Vec<usize> {
    let mut v: Vec<usize> = parts.iter().map(Vec::len).collect();
    v.sort_unstable();
    v
}

/// Trade condition by direct clique counting: for n >= 6 the maximum
/// cliques of the halved cube are the n neighbours of an opposite-parity
/// word, and each must meet both parts equally, at most once.
pub fn brute_extended(n: usize, t0: &[u32], t1: &[u32]) -> bool {
    let all: Vec<u32> = t0.iter().chain(t1).copied().collect();
    let Some(&first) = all.first() else { return false };
    if t0.is_empty() || t1.is_empty() {
        return false;
    }
    let parity = first.count_ones() % 2;
    if all.iter().any(|w| w.count_ones() % 2 != parity) {
        return false;
    }
    let (s0, s1): (HashSet<u32>, HashSet<u32>) = (t0.iter().copied().collect(), t1.iter().copied().collect());
    if !s0.is_disjoint(&s1) {
        return false;
    }
    (0u32..1 << n).filter(|x| x.count_ones() % 2 != parity).all(|x| {
        let c0 = (0..n).filter(|&i| s0.contains(&(x ^ 1 << i))).count();
        let c1 = (0..n).filter(|&i| s1.contains(&(x ^ 1 << i))).count();
        c0 == c1 && c0 <= 1
    })
}
