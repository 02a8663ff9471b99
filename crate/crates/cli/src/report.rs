use trades::analysis::{dual_space, rank_split};
use trades::{automorphisms, Trade, Word};

use crate::error::Result;

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&width).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(c);
                s.push_str(&" ".repeat(w - c.chars().count() + 2));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn words(ws: &[Word]) -> String {
    ws.iter().map(Word::to_string).collect::<Vec<_>>().join(",")
}

/// Volume, `|Aut|` as translations times stabiliser, rank, dual basis and
/// coordinate orbits of one trade.
pub fn summary_row(idx: usize, t: &Trade) -> Result<Vec<String>> {
    let aut = automorphisms(t);
    let (r0, r1) = rank_split(t);
    let dual = dual_space(&t.words())?;
    Ok(vec![
        idx.to_string(),
        t.volume().to_string(),
        format!("{}*{}={}", aut.translation_count, aut.perm_stabilizer_order, aut.order),
        format!("{r0}+{r1}"),
        words(&dual.standard_basis),
        aut.orbits_display(),
    ])
}

pub const SUMMARY_HEADER: [&str; 6] = ["#", "volume", "|Aut|", "rank", "dual basis", "coordinate orbits"];

/// Coordinates of a word as `0..9ab…` digits, e.g. `012` for 1110000000.
pub fn block(w: Word) -> String {
    w.support().iter().map(|c| std::char::from_digit(*c as u32, 16).unwrap_or('?')).collect()
}
