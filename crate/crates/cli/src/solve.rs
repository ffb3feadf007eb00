//! Mode dispatch and result records.

use std::fmt;
use std::time::Instant;

use clap::ValueEnum;
use diskclique::cobip::{self, CobipInstance};
use diskclique::multi::{self, MultiConfig, MultiInstance};
use diskclique::oracle;
use diskclique::unit::{self, UnitConfig, UnitInstance};
use diskclique::{Clique, Point};

use crate::instance::InstanceFile;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Unit,
    Multi,
    Cobip,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Unit => "unit",
            Mode::Multi => "multi",
            Mode::Cobip => "cobip",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub mode: Mode,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    /// Number of leading disks forming the left side in cobip mode.
    pub split: Option<usize>,
    pub verify: bool,
    pub trials_per_cell: Option<u64>,
    pub m1: Option<u64>,
    pub m2: Option<u64>,
    pub rounds: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Unit,
            epsilon: 0.2,
            delta: 0.05,
            seed: 0,
            split: None,
            verify: false,
            trials_per_cell: None,
            m1: None,
            m2: None,
            rounds: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub mode: String,
    pub n: usize,
    pub t: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub clique_ids: Vec<usize>,
    pub elapsed_ms: f64,
    pub trials_executed: u64,
    pub verified: bool,
}

impl ResultRecord {
    pub fn clique_size(&self) -> usize {
        self.clique_ids.len()
    }

    /// The record text without its timing line.
    pub fn stable_text(&self) -> String {
        self.to_string().lines().filter(|l| !l.starts_with("elapsed_ms=")).map(|l| format!("{l}\n")).collect()
    }
}

impl fmt::Display for ResultRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.clique_ids.iter().map(usize::to_string).collect();
        writeln!(f, "mode={}", self.mode)?;
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "t={}", self.t)?;
        writeln!(f, "epsilon={}", self.epsilon)?;
        writeln!(f, "delta={}", self.delta)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "clique_size={}", self.clique_ids.len())?;
        writeln!(f, "clique_ids={}", ids.join(","))?;
        writeln!(f, "elapsed_ms={:.3}", self.elapsed_ms)?;
        writeln!(f, "trials_executed={}", self.trials_executed)?;
        writeln!(f, "verified={}", self.verified)
    }
}

struct Outcome {
    clique: Clique,
    trials: u64,
}

fn solve_unit_mode(inst: &InstanceFile, opts: &SolveOptions) -> Result<Outcome, CliError> {
    let r = inst.disks.first().map_or(1.0, |d| d.radius);
    if inst.disks.iter().any(|d| d.radius != r) {
        return Err(CliError::ModeMismatch("unit mode needs all radii equal".into()));
    }
    let points = inst.disks.iter().map(|d| Point::new(d.center.x / r, d.center.y / r)).collect();
    let cfg = UnitConfig {
        eps: opts.epsilon,
        delta: opts.delta,
        master_seed: opts.seed,
        trials_per_cell_override: opts.trials_per_cell,
        verify_output: opts.verify,
    };
    let sol = unit::solve_unit(&UnitInstance::new(points)?, &cfg)?;
    Ok(Outcome { clique: sol.clique, trials: sol.trials_executed })
}

fn solve_multi_mode(inst: &InstanceFile, opts: &SolveOptions) -> Result<Outcome, CliError> {
    let cfg = MultiConfig {
        eps: opts.epsilon,
        master_seed: opts.seed,
        m1_override: opts.m1,
        m2_override: opts.m2,
        rounds: opts.rounds,
        verify_output: opts.verify,
    };
    let sol = multi::solve_multi(&MultiInstance::new(inst.disks.clone())?, &cfg)?;
    Ok(Outcome { clique: sol.clique, trials: sol.trials_executed })
}

fn solve_cobip_mode(inst: &InstanceFile, opts: &SolveOptions) -> Result<Outcome, CliError> {
    let k = opts.split.ok_or_else(|| CliError::BadParams("cobip mode needs --split <k>".into()))?;
    if k > inst.len() {
        return Err(CliError::BadParams(format!("split {k} exceeds {} disks", inst.len())));
    }
    let split = CobipInstance::new(inst.disks[..k].to_vec(), inst.disks[k..].to_vec());
    if opts.verify && !split.sides_are_cliques() {
        return Err(CliError::ModeMismatch("cobip sides are not both cliques".into()));
    }
    let report = cobip::approx_cover_report(&split, opts.epsilon, &Default::default())?;
    Ok(Outcome { clique: report.clique, trials: report.phases as u64 })
}

/// Runs one solver and verifies the answer against the original disks when
/// `opts.verify` is set.
pub fn solve(inst: &InstanceFile, opts: &SolveOptions) -> Result<ResultRecord, CliError> {
    let start = Instant::now();
    let out = match opts.mode {
        Mode::Unit => solve_unit_mode(inst, opts)?,
        Mode::Multi => solve_multi_mode(inst, opts)?,
        Mode::Cobip => solve_cobip_mode(inst, opts)?,
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let verified = opts.verify && oracle::verify_clique(&inst.disks, out.clique.ids())?;
    if opts.verify && !verified {
        return Err(CliError::Solver(diskclique::Error::VerificationFailed));
    }
    Ok(ResultRecord {
        mode: opts.mode.to_string(),
        n: inst.len(),
        t: inst.radius_count(),
        epsilon: opts.epsilon,
        delta: opts.delta,
        seed: opts.seed,
        clique_ids: out.clique.into_ids(),
        elapsed_ms,
        trials_executed: out.trials,
        verified,
    })
}

/// Exact optimum through the small-instance oracle.
pub fn exact(inst: &InstanceFile) -> Result<ResultRecord, CliError> {
    let start = Instant::now();
    let clique = oracle::exact_max_clique(&inst.disks).map_err(|e| match e {
        diskclique::Error::TooLarge { n, max } => CliError::TooLarge { n, max },
        other => CliError::Solver(other),
    })?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let verified = oracle::verify_clique(&inst.disks, clique.ids())?;
    Ok(ResultRecord {
        mode: "exact".into(),
        n: inst.len(),
        t: inst.radius_count(),
        epsilon: 0.0,
        delta: 0.0,
        seed: 0,
        clique_ids: clique.into_ids(),
        elapsed_ms,
        trials_executed: 0,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse;

    #[test]
    fn record_layout() {
        let rec = ResultRecord {
            mode: "unit".into(),
            n: 3,
            t: 1,
            epsilon: 0.2,
            delta: 0.05,
            seed: 7,
            clique_ids: vec![0, 2],
            elapsed_ms: 1.5,
            trials_executed: 10,
            verified: true,
        };
        let text = rec.to_string();
        let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
        assert_eq!(
            keys,
            [
                "mode",
                "n",
                "t",
                "epsilon",
                "delta",
                "seed",
                "clique_size",
                "clique_ids",
                "elapsed_ms",
                "trials_executed",
                "verified"
            ]
        );
        assert!(rec.to_string().contains("clique_ids=0,2\n"));
        assert!(!rec.stable_text().contains("elapsed"));
    }

    #[test]
    fn unit_mode_rejects_mixed_radii() {
        let inst = parse("0 0 1\n1 0 2\n").unwrap();
        assert!(matches!(solve(&inst, &SolveOptions::default()), Err(CliError::ModeMismatch(_))));
    }

    #[test]
    fn unit_mode_scales_radius() {
        let inst = parse("0 0 3\n6 0 3\n12.5 0 3\n").unwrap();
        let rec = solve(&inst, &SolveOptions { verify: true, ..Default::default() }).unwrap();
        assert_eq!(rec.clique_ids, vec![0, 1]);
        assert!(rec.verified);
    }

    #[test]
    fn cobip_mode_needs_split() {
        let inst = parse("0 0 1\n3 0 1\n").unwrap();
        let opts = SolveOptions { mode: Mode::Cobip, ..Default::default() };
        assert!(matches!(solve(&inst, &opts), Err(CliError::BadParams(_))));
        let rec = solve(&inst, &SolveOptions { split: Some(1), verify: true, ..opts }).unwrap();
        assert_eq!(rec.clique_size(), 1);
    }

    #[test]
    fn exact_examples() {
        let tangent = parse("0 0 1\n2 0 1\n1 1.7320508075688772 1\n").unwrap();
        assert_eq!(exact(&tangent).unwrap().clique_size(), 3);
        assert_eq!(exact(&parse("0 0 1\n5 0 1\n").unwrap()).unwrap().clique_size(), 1);
    }
}
