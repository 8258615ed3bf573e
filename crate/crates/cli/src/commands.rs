use std::fs::{self, File};
use std::io::{self, BufWriter, Write};

use qot_core::cost::{cost_from_classical, projector_cost, ClassicalCost};
use qot_core::harness::{self, CampaignSpec, ChannelFamily, RecordCsvWriter};
use qot_core::io::{read_json, read_state, SolutionJson};
use qot_core::quantum::{BlochState, RngStream};
use qot_core::qubit::{self, TangentVector};
use qot_core::sdp::{solve, Objective, SolverOptions, TransportProblem};
use qot_core::{Error, Result};

use crate::{CampaignArgs, Command, TransportArgs};

pub const OK: i32 = 0;
pub const USAGE: i32 = 1;
pub const NUMERICAL: i32 = 2;
pub const VIOLATION: i32 = 3;

/// Unitaries per mixed-unitary channel when `--terms` is absent.
const DEFAULT_TERMS: usize = 3;

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Solver(_) | Error::EigenNotConverged { .. } => NUMERICAL,
        _ => USAGE,
    }
}

pub fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Transport(a) => transport(a),
        Command::Qubit { s, r, theta } => qubit_compare(s, r, theta),
        Command::MetricG { r, v1, v2 } => {
            println!("{}", qubit::metric_derivative_g(r, TangentVector::new(v1, v2))?);
            Ok(OK)
        }
        Command::Riemann { r, grid } => {
            let rows = qubit::riemann_witness(r, &parse_grid(&grid)?)?;
            qubit::write_witness_csv(&rows, io::stdout().lock())?;
            Ok(OK)
        }
        Command::Counterexample => counterexample(),
        Command::LemmaF { samples, seed } => lemma_f(samples, seed),
        Command::Campaign(a) => campaign(a),
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("cannot parse grid {text:?}; use lo:hi:count or a,b,c"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        return match count {
            0 => Err(bad()),
            1 => Ok(vec![lo]),
            _ => Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()),
        };
    }
    text.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn transport(a: TransportArgs) -> Result<i32> {
    let rho_a = read_state(&a.state_a)?;
    let rho_b = read_state(&a.state_b)?;
    let n = rho_a.dim();
    let cost = match &a.cost {
        Some(path) => cost_from_classical(&read_json::<ClassicalCost>(path)?, 1)?,
        None => projector_cost(n),
    };
    let objective = if a.squared { Objective::Squared } else { Objective::Linear };
    let sol = solve(&TransportProblem::new(rho_a, rho_b, cost, objective)?, &SolverOptions::default())?;
    println!("value = {}", sol.value);
    if a.squared {
        println!("wasserstein = {}", sol.value.sqrt());
    }
    println!("gap = {:e}", sol.gap);
    println!("marginal_residual = {:e}", sol.marginal_residual);
    println!("iterations = {}", sol.iterations);
    println!("status = {}", sol.status);
    if let Some(path) = &a.coupling_out {
        let file = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(file, &SolutionJson::from(&sol))?;
    }
    Ok(if sol.is_optimal() { OK } else { NUMERICAL })
}

fn qubit_compare(s: f64, r: f64, theta: f64) -> Result<i32> {
    let a = BlochState::new(s, 0.0)?.to_density();
    let b = BlochState::new(r, theta)?.to_density();
    let analytic = qubit::tq_semianalytic(s, r, theta);
    let sol = solve(&TransportProblem::new(a, b, projector_cost(2), Objective::Linear)?, &SolverOptions::default())?;
    println!("semianalytic = {analytic}");
    println!("sdp = {}", sol.value);
    println!("difference = {:e}", sol.value - analytic);
    println!("status = {}", sol.status);
    Ok(if sol.is_optimal() { OK } else { NUMERICAL })
}

fn counterexample() -> Result<i32> {
    let rep = harness::counterexample_fixture()?;
    println!("line-geometry cost, before the unitary: exact 0.05");
    println!("  direct coupling = {}", rep.direct_before);
    println!("  sdp             = {} (gap {:e})", rep.sdp_before, rep.gap_before);
    println!("line-geometry cost, after the unitary: exact 0.1");
    println!("  direct coupling = {}", rep.direct_after);
    println!("  sdp             = {} (gap {:e})", rep.sdp_after, rep.gap_after);
    println!("projector cost: before {} after {}", rep.projector_before, rep.projector_after);
    let holds = rep.holds(1e-9);
    println!("increase under the unitary: {}", if holds { "confirmed" } else { "NOT reproduced" });
    Ok(if holds { OK } else { NUMERICAL })
}

fn lemma_f(samples: usize, seed: u64) -> Result<i32> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let rep = qubit::lemma_f_scan(samples, &mut RngStream::new(seed, 0))?;
    serde_json::to_writer_pretty(io::stdout().lock(), &rep)?;
    println!();
    Ok(if rep.violations == 0 { OK } else { VIOLATION })
}

fn campaign(a: CampaignArgs) -> Result<i32> {
    let family: ChannelFamily = a.family.parse()?;
    let spec = CampaignSpec {
        n: a.n,
        family,
        rank_k: a.rank_k,
        terms: a.terms.or((family == ChannelFamily::MixedUnitary).then_some(DEFAULT_TERMS)),
        samples: a.samples,
        state_rank: a.state_rank.unwrap_or(a.n),
        seed: a.seed,
        workers: a.workers,
    };
    spec.validate()?;
    fs::create_dir_all(&a.out)?;
    let mut csv = RecordCsvWriter::new(BufWriter::new(File::create(a.out.join("records.csv"))?))?;
    let dump_dir = a.out.join("violations");
    let summary = harness::run_campaign_streaming(&spec, |record, dump| {
        csv.write(record)?;
        if let Some(d) = dump {
            fs::create_dir_all(&dump_dir)?;
            let path = dump_dir.join(format!("sample_{}.json", record.sample_id));
            serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), d)?;
        }
        Ok(())
    })?;
    csv.into_inner()?.flush()?;
    harness::write_summary(&summary, BufWriter::new(File::create(a.out.join("summary.json"))?))?;
    harness::write_summary(&summary, io::stdout().lock())?;
    Ok(if summary.violations > 0 {
        VIOLATION
    } else if summary.excluded > 0 {
        NUMERICAL
    } else {
        OK
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_grid("0.5, 2").unwrap(), vec![0.5, 2.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }
}
