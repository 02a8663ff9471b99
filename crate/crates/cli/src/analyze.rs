use std::fmt::Write as _;

use trades::analysis::{derived_catalog, dual_space, is_sub_witt, rank_split};
use trades::format::{write_kway, Record};
use trades::search::third_mate_kway;
use trades::trade::{girth, kernel_decomposition};
use trades::{automorphisms, Trade};

use crate::error::Result;
use crate::report::{block, table, words};
use crate::{io, AnalyzeArgs};

pub fn run(a: &AnalyzeArgs, out: &mut dyn std::io::Write) -> Result<()> {
    for (i, rec) in io::records(&a.input)?.into_iter().enumerate() {
        let t = match rec {
            Record::Pair(t) => t,
            Record::KWay(k) => k.pair(0, 1)?,
        };
        io::emit(out, &analyze(i + 1, &t, a)?)?;
    }
    Ok(())
}

fn analyze(idx: usize, t: &Trade, a: &AnalyzeArgs) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "record {idx}: n={} kind={} volume={}", t.n(), t.kind(), t.volume());
    if a.dual {
        let d = dual_space(&t.words())?;
        let _ = writeln!(s, "  dual: size {}, basis {}", d.members.len(), words(&d.standard_basis));
    }
    if a.rank {
        let (r0, r1) = rank_split(t);
        let _ = writeln!(s, "  rank: {r0}+{r1}");
    }
    if a.kernel {
        let _ = writeln!(s, "  kernel: T0 = {}", kernel_decomposition(t.t0())?.display());
        let _ = writeln!(s, "          T1 = {}", kernel_decomposition(t.t1())?.display());
    }
    if a.girth {
        match girth(t) {
            Some(g) => {
                let _ = writeln!(s, "  girth: {g}");
            }
            None => {
                let _ = writeln!(s, "  girth: infinite");
            }
        }
    }
    if a.orbits {
        let aut = automorphisms(t);
        let _ = writeln!(
            s,
            "  |Aut|: {}*{}={}{}",
            aut.translation_count,
            aut.perm_stabilizer_order,
            aut.order,
            if aut.part_swapping { " (swaps parts)" } else { "" }
        );
        let _ = writeln!(s, "  coordinate orbits: {}", aut.orbits_display());
        let sizes: Vec<String> = aut.word_orbit_sizes.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "  word orbits: {}", sizes.join(","));
    }
    if a.witt {
        if t.n() == 12 && t.t0().iter().all(|w| w.weight() == 6) {
            let yes = is_sub_witt(t.t0())?;
            let _ = writeln!(s, "  T0 ⊆ S(5,6,12): {}", if yes { "yes" } else { "no" });
        } else {
            let _ = writeln!(s, "  T0 ⊆ S(5,6,12): not applicable");
        }
    }
    if a.third_mate {
        let mates = third_mate_kway(t)?;
        let _ = writeln!(s, "  third mates: {}", mates.len());
        for m in &mates {
            s.push_str(&write_kway(m));
        }
    }
    if let Some(k) = a.derived {
        let cat = derived_catalog(t, k);
        let _ = writeln!(s, "  derived k={k}: {} classes, {} centres, {} failures", cat.entries.len(), cat.total(), cat.failures);
        let rows: Vec<Vec<String>> = cat
            .entries
            .iter()
            .map(|e| {
                let part = |p: &[trades::Word]| {
                    let mut b: Vec<String> = p.iter().map(|w| block(*w)).collect();
                    b.sort();
                    b.join(" ")
                };
                vec![
                    e.representative.volume().to_string(),
                    e.count.to_string(),
                    part(e.representative.t0()),
                    part(e.representative.t1()),
                ]
            })
            .collect();
        for line in table(&["volume", "count", "T0", "T1"], &rows).lines() {
            let _ = writeln!(s, "    {line}");
        }
    }
    Ok(s)
}
