use std::fmt::Write as _;

use trades::format::{parse_raw_records, RawRecord};
use trades::trade::{eigenfunction_check, is_primary, verify_1perfect_sets, verify_extended_sets, verify_steiner_sets};
use trades::{Trade, TradeKind, Word};

use crate::error::{CliError, Result};
use crate::{io, VerifyArgs};

fn bits(p: &[Word]) -> Vec<u32> {
    p.iter().map(|w| w.bits()).collect()
}

/// Failure lines for the pair `(a, b)`; empty when it passes.
fn check(n: usize, kind: TradeKind, a: &[Word], b: &[Word], args: &VerifyArgs) -> Vec<String> {
    let (x, y) = (bits(a), bits(b));
    let report = match kind {
        TradeKind::Extended1Perfect => verify_extended_sets(n, &x, &y),
        TradeKind::OnePerfect => verify_1perfect_sets(n, &x, &y),
        TradeKind::Steiner(k) => verify_steiner_sets(n, k, &x, &y),
    };
    let mut out: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    if !out.is_empty() {
        return out;
    }
    let t = match Trade::new(kind, a.to_vec(), b.to_vec()) {
        Ok(t) => t,
        Err(e) => return vec![e.to_string()],
    };
    if args.primary {
        match is_primary(&t) {
            Ok(true) => {}
            Ok(false) => out.push("not primary".into()),
            Err(e) => out.push(e.to_string()),
        }
    }
    if args.eigen && !eigenfunction_check(&t) {
        out.push("indicator difference is not an eigenfunction".into());
    }
    out
}

fn problems(r: &RawRecord, kind: TradeKind, args: &VerifyArgs) -> Vec<String> {
    let k = r.parts.len();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let label = if k == 2 { String::new() } else { format!("T{i},T{j}: ") };
            out.extend(check(r.n, kind, &r.parts[i], &r.parts[j], args).into_iter().map(|p| format!("{label}{p}")));
        }
    }
    out
}

pub fn run(a: &VerifyArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let kind: Option<TradeKind> =
        a.kind.as_deref().map(str::parse).transpose().map_err(|e| CliError::Usage(format!("--kind: {e}")))?;
    let records = parse_raw_records(&io::read(&a.input)?)?;
    let mut failed = 0;
    let mut text = String::new();
    for (i, r) in records.iter().enumerate() {
        let found = problems(r, kind.unwrap_or(r.kind), a);
        if found.is_empty() {
            let _ = writeln!(text, "record {}: ok", i + 1);
        } else {
            failed += 1;
            let _ = writeln!(text, "record {}: FAILED", i + 1);
            for p in found {
                let _ = writeln!(text, "  {p}");
            }
        }
    }
    io::emit(out, &text)?;
    if failed > 0 {
        return Err(CliError::Verification { failed, total: records.len() });
    }
    Ok(())
}
