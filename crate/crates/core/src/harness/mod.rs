//! Monte Carlo monotonicity campaigns: `T^Q` before and after a random channel.
//!
//! Sample `i` draws everything from its own stream `(seed, i)`, so records do
//! not depend on how samples are split across workers. Samples are processed
//! in blocks; within a block they run in parallel and are emitted in order.

mod fixtures;
mod output;

pub use fixtures::{counterexample_fixture, CounterexampleReport};
pub use output::{write_summary, RecordCsvWriter, CSV_HEADER};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::projector_cost;
use crate::error::{Error, Result};
use crate::io::{ChannelJson, StateJson};
use crate::quantum::{
    random_channel_choi, random_mixed_unitary, random_state, sample_extremal_params, DensityMatrix, QuantumChannel,
    RngStream,
};
use crate::sdp::{solve, Objective, SolveStatus, SolverOptions, TransportProblem, TransportSolution};

/// A sample is a violation when `delta < -VIOLATION_TOLERANCE`.
pub const VIOLATION_TOLERANCE: f64 = 1e-7;
const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelFamily {
    ChoiRankK,
    Extremal,
    MixedUnitary,
}

impl ChannelFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ChoiRankK => "choi-rank-k",
            Self::Extremal => "extremal",
            Self::MixedUnitary => "mixed-unitary",
        }
    }
}

impl std::fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ChannelFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "choi-rank-k" | "choi" => Ok(Self::ChoiRankK),
            "extremal" => Ok(Self::Extremal),
            "mixed-unitary" => Ok(Self::MixedUnitary),
            _ => Err(Error::InvalidArgument(format!(
                "unknown channel family {s:?} (expected choi-rank-k, extremal or mixed-unitary)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub n: usize,
    pub family: ChannelFamily,
    /// Choi rank; required for `choi-rank-k` only.
    pub rank_k: Option<usize>,
    /// Number of unitaries; required for `mixed-unitary` only.
    pub terms: Option<usize>,
    pub samples: usize,
    pub state_rank: usize,
    pub seed: u64,
    pub workers: usize,
}

impl CampaignSpec {
    /// Full-rank states, one worker.
    pub fn new(n: usize, family: ChannelFamily, samples: usize, seed: u64) -> Self {
        Self { n, family, rank_k: None, terms: None, samples, state_rank: n, seed, workers: 1 }
    }

    pub fn choi(n: usize, k: usize, samples: usize, seed: u64) -> Self {
        Self { rank_k: Some(k), ..Self::new(n, ChannelFamily::ChoiRankK, samples, seed) }
    }

    pub fn extremal(n: usize, samples: usize, seed: u64) -> Self {
        Self::new(n, ChannelFamily::Extremal, samples, seed)
    }

    pub fn mixed_unitary(n: usize, terms: usize, samples: usize, seed: u64) -> Self {
        Self { terms: Some(terms), ..Self::new(n, ChannelFamily::MixedUnitary, samples, seed) }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Self { workers, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(2..=4).contains(&self.n) {
            return bad(format!("campaign dimension must be 2, 3 or 4, got {}", self.n));
        }
        if self.samples == 0 || self.workers == 0 {
            return bad("samples and workers must be positive".into());
        }
        if !(1..=self.n).contains(&self.state_rank) {
            return bad(format!("state rank {} outside 1..={}", self.state_rank, self.n));
        }
        match (self.family, self.rank_k) {
            (ChannelFamily::ChoiRankK, Some(k)) if (1..=self.n * self.n).contains(&k) => {}
            (ChannelFamily::ChoiRankK, Some(k)) => {
                return bad(format!("Choi rank {k} outside 1..={}", self.n * self.n))
            }
            (ChannelFamily::ChoiRankK, None) => return bad("choi-rank-k needs a rank".into()),
            (_, Some(_)) => return bad(format!("rank applies to choi-rank-k only, not {}", self.family)),
            _ => {}
        }
        match (self.family, self.terms) {
            (ChannelFamily::MixedUnitary, Some(t)) if t >= 1 => {}
            (ChannelFamily::MixedUnitary, _) => return bad("mixed-unitary needs at least one term".into()),
            (_, Some(_)) => return bad(format!("terms apply to mixed-unitary only, not {}", self.family)),
            _ => {}
        }
        Ok(())
    }

    /// Draws the channel for one sample together with a short description.
    pub fn draw_channel(&self, rng: &mut RngStream) -> Result<(QuantumChannel, String)> {
        match self.family {
            ChannelFamily::ChoiRankK => {
                let k = self.rank_k.expect("validated");
                Ok((random_channel_choi(self.n, k, rng)?, format!("{{\"family\":\"choi-rank-k\",\"k\":{k}}}")))
            }
            ChannelFamily::Extremal => {
                let p = sample_extremal_params(self.n, rng)?;
                Ok((p.channel()?, serde_json::to_string(&p)?))
            }
            ChannelFamily::MixedUnitary => {
                let t = self.terms.expect("validated");
                Ok((random_mixed_unitary(self.n, t, rng)?, format!("{{\"family\":\"mixed-unitary\",\"terms\":{t}}}")))
            }
        }
    }

    /// Human-readable statement of the sampling measures.
    pub fn sampling_description(&self) -> String {
        let states =
            format!("states: Ginibre n x {} normalized (Hilbert-Schmidt measure for full rank)", self.state_rank);
        let channel = match (self.family, self.n) {
            (ChannelFamily::ChoiRankK, _) => {
                "channels: Choi matrix from a Ginibre n^2 x k draw, normalized to trace preservation".to_string()
            }
            (ChannelFamily::Extremal, 2) => {
                "channels: extremal qubit family, (u, v) uniform on [0, 2pi) x [0, pi)".into()
            }
            (ChannelFamily::Extremal, _) => {
                "channels: extremal family, squared diagonal Kraus entries uniform on the simplex at each position"
                    .into()
            }
            (ChannelFamily::MixedUnitary, _) => "channels: Haar unitaries with Dirichlet(1, ..., 1) weights".into(),
        };
        format!("{states}; {channel}; stream (seed, sample_id) per sample")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordStatus {
    Ok,
    /// At least one of the two solves was not certified optimal.
    Excluded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub sample_id: u64,
    pub n: usize,
    pub family: ChannelFamily,
    pub rank_k: Option<usize>,
    pub t_before: f64,
    pub t_after: f64,
    /// `t_before - t_after`.
    pub delta: f64,
    pub gap_before: f64,
    pub gap_after: f64,
    pub status: RecordStatus,
    pub channel_descriptor: String,
}

impl ExperimentRecord {
    pub fn is_violation(&self) -> bool {
        self.status == RecordStatus::Ok && self.delta < -VIOLATION_TOLERANCE
    }
}

/// Everything needed to reproduce one sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationDump {
    pub spec: CampaignSpec,
    pub record: ExperimentRecord,
    pub rho_a: StateJson,
    pub rho_b: StateJson,
    pub channel: ChannelJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub n: usize,
    pub family: ChannelFamily,
    pub rank_k: Option<usize>,
    pub terms: Option<usize>,
    pub seed: u64,
    /// Samples drawn, including excluded ones.
    pub samples: usize,
    pub excluded: usize,
    pub violations: usize,
    pub tol: f64,
    pub min_delta: f64,
    pub max_delta: f64,
    pub mean_delta: f64,
    /// Largest `|gap|` over included solves.
    pub max_gap: f64,
    pub sampling: String,
}

impl CampaignSummary {
    pub fn from_records(spec: &CampaignSpec, records: &[ExperimentRecord]) -> Self {
        let mut s = Self {
            n: spec.n,
            family: spec.family,
            rank_k: spec.rank_k,
            terms: spec.terms,
            seed: spec.seed,
            samples: records.len(),
            excluded: 0,
            violations: 0,
            tol: VIOLATION_TOLERANCE,
            min_delta: f64::INFINITY,
            max_delta: f64::NEG_INFINITY,
            mean_delta: 0.0,
            max_gap: 0.0,
            sampling: spec.sampling_description(),
        };
        let mut included = 0usize;
        for r in records {
            if r.status != RecordStatus::Ok {
                s.excluded += 1;
                continue;
            }
            included += 1;
            s.min_delta = s.min_delta.min(r.delta);
            s.max_delta = s.max_delta.max(r.delta);
            s.mean_delta += r.delta;
            s.max_gap = s.max_gap.max(r.gap_before.abs()).max(r.gap_after.abs());
            if r.is_violation() {
                s.violations += 1;
            }
        }
        if included > 0 {
            s.mean_delta /= included as f64;
        } else {
            s.min_delta = f64::NAN;
            s.max_delta = f64::NAN;
            s.mean_delta = f64::NAN;
        }
        s
    }
}

fn transport(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<TransportSolution> {
    let p = TransportProblem::new(rho_a.clone(), rho_b.clone(), projector_cost(rho_a.dim()), Objective::Linear)?;
    solve(&p, &SolverOptions::default())
}

/// Runs one sample; the dump is returned only for violations.
pub fn run_sample(spec: &CampaignSpec, sample_id: u64) -> Result<(ExperimentRecord, Option<ViolationDump>)> {
    let mut rng = RngStream::new(spec.seed, sample_id);
    let rho_a = random_state(spec.n, spec.state_rank, &mut rng)?;
    let rho_b = random_state(spec.n, spec.state_rank, &mut rng)?;
    let (channel, channel_descriptor) = spec.draw_channel(&mut rng)?;
    let before = transport(&rho_a, &rho_b)?;
    let phi_a = channel.apply(&rho_a)?;
    let phi_b = channel.apply(&rho_b)?;
    let after = transport(&phi_a, &phi_b)?;
    let ok = before.status == SolveStatus::Optimal && after.status == SolveStatus::Optimal;
    let record = ExperimentRecord {
        sample_id,
        n: spec.n,
        family: spec.family,
        rank_k: spec.rank_k,
        t_before: before.value,
        t_after: after.value,
        delta: before.value - after.value,
        gap_before: before.gap,
        gap_after: after.gap,
        status: if ok { RecordStatus::Ok } else { RecordStatus::Excluded },
        channel_descriptor,
    };
    let dump = record.is_violation().then(|| ViolationDump {
        spec: *spec,
        record: record.clone(),
        rho_a: StateJson::from(&rho_a),
        rho_b: StateJson::from(&rho_b),
        channel: ChannelJson::from(&channel),
    });
    Ok((record, dump))
}

/// Runs the campaign, handing each record (and dump, for violations) to
/// `sink` in sample order as soon as its block completes.
pub fn run_campaign_streaming(
    spec: &CampaignSpec,
    mut sink: impl FnMut(&ExperimentRecord, Option<&ViolationDump>) -> Result<()>,
) -> Result<CampaignSummary> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let mut records = Vec::with_capacity(spec.samples);
    let total = spec.samples as u64;
    let mut start = 0u64;
    while start < total {
        let end = (start + BLOCK as u64).min(total);
        let block: Vec<_> =
            pool.install(|| (start..end).into_par_iter().map(|i| run_sample(spec, i)).collect::<Result<Vec<_>>>())?;
        for (record, dump) in block {
            sink(&record, dump.as_ref())?;
            records.push(record);
        }
        start = end;
    }
    Ok(CampaignSummary::from_records(spec, &records))
}

/// Collects all records in memory.
pub fn run_campaign(spec: &CampaignSpec) -> Result<(Vec<ExperimentRecord>, CampaignSummary)> {
    let mut records = Vec::with_capacity(spec.samples);
    let summary = run_campaign_streaming(spec, |r, _| {
        records.push(r.clone());
        Ok(())
    })?;
    Ok((records, summary))
}

/// Mixed-unitary campaign with `terms` Haar unitaries per channel.
pub fn mixed_unitary_campaign(n: usize, terms: usize, samples: usize, seed: u64) -> Result<CampaignSummary> {
    Ok(run_campaign(&CampaignSpec::mixed_unitary(n, terms, samples, seed))?.1)
}
