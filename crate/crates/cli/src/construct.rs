use trades::analysis::witt_design;
use trades::constructions::{code_difference, concatenate_kway, double, parity_latin_trade, GeneratorMatrix};
use trades::format::{write_kway, write_trade, write_word_set, Record};
use trades::{KWayTrade, TradeKind};

use crate::error::{CliError, Result};
use crate::{io, ConstructCommand};

fn generator(path: &std::path::Path) -> Result<GeneratorMatrix> {
    Ok(GeneratorMatrix::parse(&io::read(path)?)?)
}

fn component(path: &std::path::Path) -> Result<KWayTrade> {
    let mut recs = io::records(path)?;
    if recs.len() != 1 {
        return Err(CliError::Usage(format!("{}: expected one record, found {}", path.display(), recs.len())));
    }
    Ok(match recs.pop().unwrap() {
        Record::Pair(t) => KWayTrade::from_trade(&t),
        Record::KWay(k) => k,
    })
}

pub fn run(cmd: &ConstructCommand, out: &mut dyn std::io::Write) -> Result<()> {
    let text = match cmd {
        ConstructCommand::Double { input } => {
            let mut s = String::new();
            for rec in io::records(input)? {
                s.push_str(&write_trade(&double(&rec.into_trade()?)?));
            }
            s
        }
        ConstructCommand::Concat { latin, components } => {
            let &[m, q] = latin.as_slice() else {
                return Err(CliError::Usage("--latin takes m,q".into()));
            };
            let mut comps = components.iter().map(|p| component(p)).collect::<Result<Vec<_>>>()?;
            // a single component file is used for every coordinate
            if comps.len() == 1 {
                comps = vec![comps[0].clone(); m];
            }
            let k = concatenate_kway(&parity_latin_trade(m, q)?, &comps)?;
            if k.k() == 2 {
                write_trade(&k.pair(0, 1)?)
            } else {
                write_kway(&k)
            }
        }
        ConstructCommand::Span { input } => {
            let g = generator(input)?;
            write_word_set(g.n, &g.span())
        }
        ConstructCommand::Diff { a, b, kind } => {
            let kind: TradeKind = kind.parse().map_err(|e| CliError::Usage(format!("--kind: {e}")))?;
            let (c, d) = (generator(a)?, generator(b)?);
            write_trade(&code_difference(&c.span(), &d.span(), kind)?)
        }
        ConstructCommand::Witt => write_word_set(12, &witt_design()),
    };
    io::emit(out, &text)
}
