use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use sha2::{Digest, Sha256};
use trades::search::{classify, double_count_validate, write_classification, ClassificationResult, SearchConfig};

use crate::error::{CliError, Result};
use crate::report::{summary_row, table, SUMMARY_HEADER};
use crate::{io, ClassifyArgs};

pub fn config(a: &ClassifyArgs) -> Result<SearchConfig> {
    if a.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let mut cfg = match &a.restrict_t0 {
        Some(path) => {
            if !a.constant_weight {
                return Err(CliError::Usage("--restrict-t0 requires --constant-weight".into()));
            }
            SearchConfig::restricted(a.length, io::word_set(path)?)
        }
        None => SearchConfig::new(a.length, a.constant_weight),
    };
    if let Some(d) = &a.checkpoints {
        cfg = cfg.with_checkpoints(d.clone());
    }
    cfg.workers = a.workers;
    cfg.checkpoint_file = a.checkpoint_file.clone();
    cfg.resume_from = a.resume.clone();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn manifest(a: &ClassifyArgs, cfg: &SearchConfig, r: &ClassificationResult, secs: f64, digest: &str) -> String {
    let cmd: Vec<String> = std::env::args().collect();
    let mut out = String::new();
    let _ = writeln!(out, "command = {}", cmd.join(" "));
    let _ = writeln!(out, "length = {}", cfg.n);
    let _ = writeln!(out, "constant_weight = {}", cfg.constant_weight);
    let _ = writeln!(out, "restrict_t0 = {}", a.restrict_t0.as_ref().map_or("-".into(), |p| p.display().to_string()));
    let _ = writeln!(out, "checkpoints = {:?}", cfg.checkpoint_depths);
    let _ = writeln!(out, "workers = {}", cfg.workers);
    let _ = writeln!(out, "wall_time_s = {secs:.3}");
    let _ = writeln!(out, "classes = {}", r.classes.len());
    let _ = writeln!(out, "raw = {}", r.raw_solution_count);
    let _ = writeln!(out, "weighted = {}", r.weighted_solution_count);
    let _ = writeln!(out, "nodes = {}", r.nodes);
    let _ = writeln!(out, "records_sha256 = {digest}");
    out
}

pub fn manifest_path(out: &std::path::Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

pub fn run(a: &ClassifyArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let cfg = config(a)?;
    let start = Instant::now();
    let r = classify(&cfg)?;
    let secs = start.elapsed().as_secs_f64();
    let dc = double_count_validate(&r, &cfg)?;

    let rows = r.classes.iter().enumerate().map(|(i, c)| summary_row(i + 1, &c.trade)).collect::<Result<Vec<_>>>()?;
    let mut text = table(&SUMMARY_HEADER, &rows);
    let _ = writeln!(
        text,
        "classes={} raw={} weighted={} double-count={}/{} {}",
        r.classes.len(),
        r.raw_solution_count,
        r.weighted_solution_count,
        dc.observed,
        dc.expected,
        if dc.ok { "ok" } else { "MISMATCH" }
    );
    io::emit(out, &text)?;

    if let Some(path) = &a.out {
        let rec = write_classification(&r);
        let digest = hex::encode(Sha256::digest(rec.as_bytes()));
        io::write(path, &rec)?;
        io::write(&manifest_path(path), &manifest(a, &cfg, &r, secs, &digest))?;
    }
    Ok(())
}
