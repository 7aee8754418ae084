//! Monte Carlo runs: replicates, their summaries and the comparison with the
//! exact limits.

use heavymp_core::moments::mp_moment;
use heavymp_core::simulation::{
    summarize, summarize_moments, Distribution, Histogram, SimulationConfig, SpectralSample,
};
use heavymp_core::{Limits, Result};
use rayon::prelude::*;

use crate::parallel;
use crate::records::{
    CompareReport, CompareRow, HistogramRecord, MomentSummary, RunRecord, SimulationSummary,
    StatRecord,
};

/// Limit the replicate means are compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    /// Moments of the α-heavy Marčenko–Pastur law.
    Mu,
    /// Marčenko–Pastur moments.
    Beta,
}

impl Target {
    /// `Mu` for heavy-tailed data, `Beta` for the Gaussian control.
    pub fn default_for(dist: Distribution) -> Self {
        match dist {
            Distribution::Gaussian => Self::Beta,
            _ => Self::Mu,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Mu => "mu",
            Self::Beta => "beta",
        }
    }
}

/// Equal-width bins on `[lo, hi]`, parsed from `BINS:LO:HI`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistSpec {
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl std::str::FromStr for HistSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [b, lo, hi] = parts.as_slice() else {
            return Err(format!("expected BINS:LO:HI, got `{s}`"));
        };
        let bins: usize = b.parse().map_err(|_| format!("bad bin count `{b}`"))?;
        let lo: f64 = lo.parse().map_err(|_| format!("bad lower edge `{lo}`"))?;
        let hi: f64 = hi.parse().map_err(|_| format!("bad upper edge `{hi}`"))?;
        if bins == 0 || !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("need BINS > 0 and finite LO < HI, got `{s}`"));
        }
        Ok(Self { bins, lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub config: SimulationConfig,
    pub replicates: usize,
    pub hist: Option<HistSpec>,
    pub target: Target,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub samples: Vec<SpectralSample>,
    pub histogram: Option<Histogram>,
    pub summary: SimulationSummary,
}

impl Experiment {
    pub fn record(&self) -> RunRecord {
        let c = &self.config;
        RunRecord {
            p: c.p,
            n: c.n,
            dist: c.dist.name().to_string(),
            alpha: c.dist.alpha(),
            k: c.k_max,
            replicates: self.replicates,
            seed: c.seed,
            gamma: c.gamma(),
        }
    }

    /// Limits for `k = 1..=K`; `None` past what `limits` allows for `mu`.
    pub fn exact(&self, limits: &Limits) -> Result<Vec<Option<f64>>> {
        let c = &self.config;
        let gamma = c.gamma();
        match (self.target, c.dist.alpha()) {
            (Target::Mu, Some(alpha)) => {
                let reach = c.k_max.min(limits.k_max);
                let table = parallel::moment_table(alpha, gamma, reach, limits)?;
                Ok((0..c.k_max).map(|j| table.mu.get(j).copied()).collect())
            }
            // The Gaussian limit is the Marčenko–Pastur law.
            _ => (1..=c.k_max)
                .map(|k| mp_moment(gamma, k).map(Some))
                .collect(),
        }
    }

    pub fn run(&self, limits: &Limits) -> Result<ExperimentReport> {
        if self.replicates == 0 {
            return Err(heavymp_core::Error::argument(
                "replicates",
                "must be positive",
            ));
        }
        let exact = self.exact(limits)?;
        let samples = parallel::replicates(&self.config, self.replicates)?;
        let histogram = match self.hist {
            Some(h) => {
                let parts: Vec<Histogram> = samples
                    .par_iter()
                    .map(|s| {
                        heavymp_core::simulation::esd_histogram(&s.eigenvalues, h.bins, h.lo, h.hi)
                    })
                    .collect::<Result<_>>()?;
                let mut total = Histogram::new(h.bins, h.lo, h.hi)?;
                for part in &parts {
                    total.merge(part)?;
                }
                Some(total)
            }
            None => None,
        };
        let moments = summarize_moments(&samples, self.config.k_max)
            .into_iter()
            .zip(exact)
            .enumerate()
            .map(|(j, (s, exact))| MomentSummary {
                k: j + 1,
                mean: s.mean,
                stddev: s.stddev,
                stderr: s.stderr,
                exact,
            })
            .collect();
        let stat = |f: fn(&SpectralSample) -> f64| {
            let v: Vec<f64> = samples.iter().map(f).collect();
            let s = summarize(&v);
            StatRecord {
                mean: s.mean,
                stddev: s.stddev,
                stderr: s.stderr,
            }
        };
        let summary = SimulationSummary {
            config: self.record(),
            target: self.target.name().to_string(),
            moments,
            lambda_min: stat(SpectralSample::lambda_min),
            lambda_max: stat(SpectralSample::lambda_max),
            histogram: histogram.as_ref().map(|h| HistogramRecord {
                bins: h.bins(),
                lo: h.lo,
                hi: h.hi,
                in_range: h.in_range(),
                below: h.below,
                above: h.above,
            }),
        };
        Ok(ExperimentReport {
            samples,
            histogram,
            summary,
        })
    }
}

/// z-score of a replicate mean against its limit. Differences at rounding
/// level count as zero, so orders with no sampling spread (such as `m_1`)
/// do not produce a huge score.
pub fn z_score(mean: f64, exact: f64, stderr: f64) -> f64 {
    let diff = mean - exact;
    if diff.abs() <= 1e-10 * exact.abs().max(1.0) {
        0.0
    } else {
        diff / stderr
    }
}

/// Compares each replicate mean with its limit. Orders without a computable
/// limit are left out.
pub fn compare(summary: &SimulationSummary, threshold: f64) -> CompareReport {
    let rows: Vec<CompareRow> = summary
        .moments
        .iter()
        .filter_map(|m| {
            m.exact.map(|exact| CompareRow {
                k: m.k,
                exact,
                mean: m.mean,
                stderr: m.stderr,
                z: z_score(m.mean, exact, m.stderr),
            })
        })
        .collect();
    let pass = rows.iter().all(|r| r.z.abs() < threshold);
    CompareReport {
        config: summary.config.clone(),
        target: summary.target.clone(),
        threshold,
        rows,
        pass,
    }
}
