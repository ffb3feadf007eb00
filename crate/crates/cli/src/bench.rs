//! Batch timing over a directory of instance files, as CSV.

use std::io::Write;
use std::path::Path;

use crate::instance::InstanceFile;
use crate::solve::{solve, SolveOptions};
use crate::CliError;

pub const CSV_HEADER: &str = "kind,file,n,t,eps,seed,size,elapsed_ms,trials";

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// One `run` row per (file, repeat) with seeds `seed, seed+1, ...`, then a
/// `median` row per file. Unreadable or unsolvable files are reported on
/// `err` and skipped. Fails with `NoBenchInput` when no file succeeded.
pub fn bench(
    dir: &Path,
    opts: &SolveOptions,
    repeats: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let io = |e| CliError::Io(dir.display().to_string(), e);
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();

    writeln!(out, "{CSV_HEADER}").map_err(io)?;
    let mut succeeded = 0;
    for path in files {
        let name = path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
        let inst = match InstanceFile::read(&path) {
            Ok(i) => i,
            Err(e) => {
                writeln!(err, "skipping {name}: {e}").map_err(io)?;
                continue;
            }
        };
        let mut times = Vec::new();
        let mut rows = Vec::new();
        for r in 0..repeats.max(1) {
            let run_opts = SolveOptions { seed: opts.seed.wrapping_add(r), ..opts.clone() };
            match solve(&inst, &run_opts) {
                Ok(rec) => {
                    times.push(rec.elapsed_ms);
                    rows.push(format!(
                        "run,{name},{},{},{},{},{},{:.3},{}",
                        rec.n,
                        rec.t,
                        rec.epsilon,
                        rec.seed,
                        rec.clique_size(),
                        rec.elapsed_ms,
                        rec.trials_executed
                    ));
                }
                Err(e) => {
                    writeln!(err, "skipping {name}: {e}").map_err(io)?;
                    rows.clear();
                    break;
                }
            }
        }
        if rows.is_empty() {
            continue;
        }
        for row in rows {
            writeln!(out, "{row}").map_err(io)?;
        }
        writeln!(out, "median,{name},{},{},{},,,{:.3},", inst.len(), inst.radius_count(), opts.epsilon, median(times))
            .map_err(io)?;
        succeeded += 1;
    }
    if succeeded == 0 {
        return Err(CliError::NoBenchInput(dir.display().to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::median;

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
