//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL` line (bypassing output capture) before failing
//! on any unmet clause.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write as _;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use common::{brute_extended, extended_ids, fixture, fixtures, trade};
use trades::analysis::{
    affine_rank, derived_catalog, dual_space, is_steiner_system, is_sts_uniform, rank_split, witt_design,
};
use trades::canonical::canonical_form_kway;
use trades::constructions::{block_indicators, code_difference, concatenate, double, parity_latin_trade};
use trades::golden::{Fixture, Payload, CODE_IDS, LENGTH10_IDS, LENGTH12_IDS, STS_IDS};
use trades::search::{classify, find_third_mate, write_classification, ClassificationResult, SearchConfig};
use trades::trade::{
    complement_symmetry, eigenfunction_check, girth, is_primary, verify_extended_sets, verify_steiner_sets,
};
use trades::{are_equivalent, automorphisms, canonical_form, ComplementSymmetry, KWayTrade, Trade, TradeKind, Word};

struct Criterion {
    id: u8,
    started: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u8) -> Self {
        Criterion { id, started: Instant::now(), failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, clause: impl Into<String>) {
        if !ok {
            self.failures.push(clause.into());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: &str) {
        if got != want {
            self.failures.push(format!("{what}: got {got:?}, want {want:?}"));
        }
    }

    fn within(&mut self, limit: Duration, what: &str) {
        let took = self.started.elapsed();
        self.check(took <= limit, format!("{what} took {took:.1?}, limit {limit:?}"));
    }

    fn finish(self) {
        let secs = self.started.elapsed().as_secs_f64();
        let line = if self.failures.is_empty() {
            format!("criterion {}: PASS ({secs:.1}s)\n", self.id)
        } else {
            format!("criterion {}: FAIL ({secs:.1}s): {}\n", self.id, self.failures.join("; "))
        };
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        assert!(self.failures.is_empty(), "{}", line.trim_end());
    }
}

/// The fixture equivalent to `t` among `pool`, if exactly one is.
fn matching<'a>(t: &Trade, pool: &'a [Fixture]) -> Option<&'a Fixture> {
    let hits: Vec<&Fixture> = pool.iter().filter(|f| are_equivalent(t, f.trade().unwrap()).unwrap()).collect();
    (hits.len() == 1).then(|| hits[0])
}

fn single_threaded(n: usize) -> ClassificationResult {
    classify(&SearchConfig::new(n, false)).unwrap()
}

#[test]
fn criterion_1_length8() {
    let mut c = Criterion::new(1);
    let r = single_threaded(8);
    c.within(Duration::from_secs(10), "classification");
    c.eq(r.volumes(), vec![8, 12, 14, 16, 16], "volumes");
    let mut duals: Vec<usize> = r
        .classes
        .iter()
        .filter(|k| k.volume == 16)
        .map(|k| dual_space(&k.trade.words()).unwrap().members.len())
        .collect();
    duals.sort_unstable();
    c.eq(duals, vec![2, 4], "dual sizes of the volume-16 classes");
    c.finish();
}

#[test]
fn criterion_2_length10() {
    let mut c = Criterion::new(2);
    let r = single_threaded(10);
    c.within(Duration::from_secs(300), "classification");
    c.eq(r.volumes(), vec![16, 24, 28, 32, 32, 32, 36, 40], "volumes");
    c.eq(r.raw_solution_count, 1817, "raw solutions");
    let pool = fixtures(&LENGTH10_IDS);
    let mut orbit_total = 0;
    let mut matched = BTreeSet::new();
    for k in &r.classes {
        let Some(f) = matching(&k.trade, &pool) else {
            c.check(false, format!("volume-{} class matches no single published trade", k.volume));
            continue;
        };
        matched.insert(f.id.clone());
        let aut = automorphisms(&k.trade);
        c.eq(Some(aut.order), f.expected.aut_order(), &format!("{} |Aut|", f.id));
        c.eq(Some(rank_split(&k.trade)), f.expected.rank, &format!("{} rank", f.id));
        orbit_total += aut.coordinate_orbits.len();
    }
    c.eq(matched.len(), 8, "published trades matched");
    c.eq(orbit_total, 15, "sum of coordinate-orbit counts");
    c.finish();
}

#[test]
#[ignore = "long-running: about a minute optimised, far longer unoptimised"]
fn criterion_3_length12_constant_weight() {
    let mut c = Criterion::new(3);
    let cfg = SearchConfig::new(12, true);
    c.eq(cfg.checkpoint_depths.clone(), vec![3, 6], "checkpoints");
    let r = classify(&cfg).unwrap();
    c.within(Duration::from_secs(8 * 3600), "classification");
    let pool = fixtures(&LENGTH12_IDS);
    let mut want: Vec<usize> = pool.iter().map(|f| f.trade().unwrap().volume()).collect();
    want.sort_unstable();
    c.eq(r.volumes(), want, "volumes");
    c.eq(r.weighted_solution_count, 32076, "weighted solutions");
    let mut matched = BTreeSet::new();
    for k in &r.classes {
        match matching(&k.trade, &pool) {
            Some(f) => {
                matched.insert(f.id.clone());
                c.eq(Some(automorphisms(&k.trade).order), f.expected.aut_order(), &format!("{} |Aut|", f.id));
            }
            None => c.check(false, format!("volume-{} class matches no single published trade", k.volume)),
        }
    }
    c.eq(matched.len(), 25, "published trades matched");
    c.finish();
}

#[test]
fn criterion_4_witt() {
    let mut c = Criterion::new(4);
    let design = witt_design();
    c.eq(design.len(), 132, "blocks");
    c.check(is_steiner_system(&design, 12, 6), "every 5-subset in exactly one block");
    let r = classify(&SearchConfig::restricted(12, design)).unwrap();
    let pool = fixtures(&LENGTH12_IDS);
    let mut found: Vec<String> = r
        .classes
        .iter()
        .map(|k| matching(&k.trade, &pool).map_or_else(|| "?".to_string(), |f| f.id.clone()))
        .collect();
    found.sort();
    c.eq(found, ["108a", "108b", "120a", "120b", "132", "72b", "96a"].map(String::from).to_vec(), "classes");
    c.eq(r.volumes().iter().filter(|&&v| v == 132).count(), 1, "volume-132 classes");
    c.finish();
}

#[test]
fn criterion_5_three_way() {
    let mut c = Criterion::new(5);
    let mut keys = BTreeMap::new();
    for id in LENGTH12_IDS {
        let t = trade(id);
        let mates = find_third_mate(&t).unwrap();
        let want = usize::from(["72a", "108a", "110a", "110b"].contains(&id));
        c.eq(mates.len(), want, &format!("{id} third mates"));
        if let Some(m) = mates.first() {
            let k = KWayTrade::new(t.kind(), vec![t.t0().to_vec(), t.t1().to_vec(), m.clone()]).unwrap();
            c.check(k.is_valid(), format!("{id} 3-way trade invalid"));
            keys.insert(id, canonical_form_kway(&k));
        }
    }
    if keys.len() == 4 {
        c.check(keys["110a"] == keys["110b"], "110a and 110b give different 3-way trades");
        c.check(keys["72a"] != keys["108a"] && keys["72a"] != keys["110a"] && keys["108a"] != keys["110a"], "3-way classes coincide");
    }
    c.finish();
}

#[test]
fn criterion_6_derived_catalogs() {
    let mut c = Criterion::new(6);
    let sts = fixtures(&STS_IDS);
    let sts_keys: Vec<_> = sts.iter().map(|f| canonical_form(f.trade().unwrap())).collect();
    for id in LENGTH10_IDS {
        let cat = derived_catalog(&trade(id), 3);
        c.eq(cat.failures, 0, &format!("{id} failed centres"));
        for (f, key) in sts.iter().zip(&sts_keys) {
            let want = f.expected.derived_counts.get(id).copied().unwrap_or(0);
            c.eq(cat.count_of(key), want, &format!("{id} / {}", f.id));
        }
        c.check(cat.entries.iter().all(|e| sts_keys.contains(&e.key)), format!("{id} derives an untabulated class"));
    }
    c.eq(fixture("STS1").expected.derived_counts.get("T16").copied(), Some(320), "STS1 in T16");
    c.eq(fixture("STS15").expected.derived_counts.get("T28").copied(), Some(84), "STS15 in T28");
    let mut union = BTreeSet::new();
    let mut uniform = Vec::new();
    for id in LENGTH12_IDS {
        let t = trade(id);
        union.extend(derived_catalog(&t, 3).entries.into_iter().map(|e| e.key));
        if is_sts_uniform(&t) {
            uniform.push(id);
        }
    }
    c.eq(union.len(), 87, "derived classes over length 12");
    c.eq(uniform, vec!["32", "132"], "uniform trades");
    c.finish();
}

#[test]
fn criterion_7_structural_invariants() {
    let mut c = Criterion::new(7);
    let mut rng = StdRng::seed_from_u64(2016);
    for id in LENGTH12_IDS {
        let t = trade(id);
        let (a, b) = (t.t0_bits(), t.t1_bits());
        c.eq(verify_steiner_sets(12, 6, &a, &b).valid, verify_extended_sets(12, &a, &b).valid, &format!("{id} Steiner vs extended"));
    }
    for _ in 0..300 {
        let n = *[6usize, 8, 10].choose(&mut rng).unwrap();
        let (mut a, mut b) = (BTreeSet::new(), BTreeSet::new());
        for _ in 0..rng.gen_range(1..20) {
            let w = rng.gen_range(0..1u32 << n);
            let w = if w.count_ones() % 2 == 1 { w ^ 1 } else { w };
            if !a.contains(&w) && !b.contains(&w) {
                if rng.gen() { a.insert(w) } else { b.insert(w) };
            }
        }
        let (a, b): (Vec<u32>, Vec<u32>) = (a.into_iter().collect(), b.into_iter().collect());
        c.eq(verify_extended_sets(n, &a, &b).valid, brute_extended(n, &a, &b), &format!("degree test vs cliques {a:?}/{b:?}"));
    }
    for id in extended_ids() {
        let t = trade(id);
        let want = if t.n() % 4 == 2 { ComplementSymmetry::SwapsParts } else { ComplementSymmetry::FixesParts };
        c.eq(complement_symmetry(&t), want, &format!("{id} complement"));
        let d = dual_space(&t.words()).unwrap();
        c.check(!is_primary(&t).unwrap() || d.is_product_closed(), format!("{id} dual not product closed"));
        c.eq(affine_rank(&t.words()).unwrap() + d.dimension(), t.n(), &format!("{id} rank + dual dimension"));
    }
    for id in extended_ids().into_iter().chain(STS_IDS) {
        c.check(eigenfunction_check(&trade(id)), format!("{id} not an eigenfunction"));
    }
    c.eq(girth(&trade("110b")), Some(6), "girth of 110b");
    c.within(Duration::from_secs(60), "property suite");
    c.finish();
}

fn trivial() -> Trade {
    Trade::new(TradeKind::Extended1Perfect, vec![Word::parse("00").unwrap()], vec![Word::parse("11").unwrap()])
        .unwrap()
}

#[test]
fn criterion_8_constructions() {
    let mut c = Criterion::new(8);
    let codes: Vec<Vec<Word>> = CODE_IDS
        .iter()
        .map(|id| match fixture(id).payload {
            Payload::Code { words, .. } => words,
            Payload::Trade(_) => unreachable!(),
        })
        .collect();
    let diffs: Vec<Trade> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| code_difference(&codes[i], &codes[j], TradeKind::Extended1Perfect).unwrap())
        .collect();
    let mut vols: Vec<usize> = diffs.iter().map(Trade::volume).collect();
    vols.sort_unstable();
    c.eq(vols, vec![8, 12, 14], "difference volumes");
    for i in 0..3 {
        for j in i + 1..3 {
            c.check(!are_equivalent(&diffs[i], &diffs[j]).unwrap(), "difference trades coincide");
        }
    }
    let r8 = single_threaded(8);
    for d in &diffs {
        let hits = r8.classes.iter().filter(|k| are_equivalent(&k.trade, d).unwrap()).count();
        c.eq(hits, 1, &format!("classes matching the volume-{} difference", d.volume()));
    }
    let mut t = trivial();
    while t.n() < 16 {
        t = double(&t).unwrap();
        c.check(t.verify().valid, format!("doubled trade of length {} invalid", t.n()));
    }
    let latin = parity_latin_trade(3, 2).unwrap();
    let l6 = concatenate(&latin, &vec![KWayTrade::from_trade(&trivial()); 3]).unwrap();
    c.check(are_equivalent(&l6, &trade("L6")).unwrap(), "parity concatenation is not the length-6 trade");
    let pool: Vec<Trade> = [trivial()].into_iter().chain(["L6", "L8-16a", "L8-16b", "T16", "T40"].map(trade)).collect();
    let mut rng = StdRng::seed_from_u64(3);
    let mut done = 0;
    while done < 50 {
        let m = rng.gen_range(2..=3);
        let comps: Vec<Trade> = (0..m).map(|_| pool.choose(&mut rng).unwrap().clone()).collect();
        let lengths: Vec<usize> = comps.iter().map(Trade::n).collect();
        if lengths.iter().sum::<usize>() > 16 {
            continue;
        }
        done += 1;
        let kway: Vec<KWayTrade> = comps.iter().map(KWayTrade::from_trade).collect();
        let t = concatenate(&parity_latin_trade(m, 2).unwrap(), &kway).unwrap();
        c.check(is_primary(&t).unwrap(), format!("{lengths:?} concatenation not primary"));
        let dual = dual_space(&t.words()).unwrap();
        c.check(
            block_indicators(&lengths).unwrap().iter().all(|b| dual.contains(*b)),
            format!("{lengths:?} block indicators missing from the dual"),
        );
    }
    c.finish();
}

#[test]
fn criterion_9_determinism() {
    let mut c = Criterion::new(9);
    for n in [8, 10] {
        let outputs: Vec<String> = [1, 4, 8]
            .iter()
            .map(|&w| write_classification(&classify(&SearchConfig::new(n, false).with_workers(w)).unwrap()))
            .collect();
        c.check(outputs.windows(2).all(|p| p[0] == p[1]), format!("length {n} records differ across worker counts"));
    }
    c.finish();
}
