//! Spectra of simulated correlation matrices and their summaries.

use alloc::vec;
use alloc::vec::Vec;

use super::eigen::eigenvalues_sym;
use super::matrix::{correlation_matrix, normalize_row};
use super::sampling::{replicate_rng, sample_matrix_with, Distribution};
use crate::{Error, Result};

/// `m_k = p⁻¹ Σ λ_i^k` for `k = 1..=k_max`.
pub fn empirical_moments(eigenvalues: &[f64], k_max: usize) -> Vec<f64> {
    let mut sums = vec![0.0; k_max];
    for &lambda in eigenvalues {
        let mut power = 1.0;
        for s in sums.iter_mut() {
            power *= lambda;
            *s += power;
        }
    }
    let p = eigenvalues.len() as f64;
    sums.into_iter().map(|s| s / p).collect()
}

/// Equal-width histogram on `[lo, hi]`; values outside are tallied
/// separately and excluded from the normalisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    pub fn new(bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if bins == 0 {
            return Err(Error::argument("bins", "must be positive"));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::argument(
                "range",
                alloc::format!("need finite lo < hi, got [{lo}, {hi}]"),
            ));
        }
        Ok(Self {
            lo,
            hi,
            counts: vec![0; bins],
            below: 0,
            above: 0,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    /// Bins are half-open except the last, which also takes `hi`.
    pub fn add(&mut self, x: f64) {
        if x < self.lo || x.is_nan() {
            self.below += 1;
        } else if x > self.hi {
            self.above += 1;
        } else {
            let b = ((x - self.lo) / self.width()) as usize;
            let b = b.min(self.bins() - 1);
            self.counts[b] += 1;
        }
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if self.lo != other.lo || self.hi != other.hi || self.bins() != other.bins() {
            return Err(Error::argument(
                "histogram",
                "cannot merge histograms with different bins",
            ));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.below += other.below;
        self.above += other.above;
        Ok(())
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin heights integrating to one over `[lo, hi]` (all zero when no value
    /// fell in range).
    pub fn density(&self) -> Vec<f64> {
        let total = self.in_range();
        if total == 0 {
            return vec![0.0; self.bins()];
        }
        let scale = 1.0 / (total as f64 * self.width());
        self.counts.iter().map(|&c| c as f64 * scale).collect()
    }

    /// Left edge of bin `b`.
    pub fn edge(&self, b: usize) -> f64 {
        self.lo + b as f64 * self.width()
    }
}

pub fn esd_histogram(eigenvalues: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    let mut h = Histogram::new(bins, lo, hi)?;
    for &x in eigenvalues {
        h.add(x);
    }
    Ok(h)
}

/// Parameters shared by all replicates of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub p: usize,
    pub n: usize,
    pub dist: Distribution,
    /// Highest moment order recorded.
    pub k_max: usize,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::argument("p", "must be positive"));
        }
        if self.n == 0 {
            return Err(Error::argument("n", "must be positive"));
        }
        if self.k_max == 0 {
            return Err(Error::argument("k", "must be positive"));
        }
        if let Some(a) = self.dist.alpha() {
            crate::moments::check_alpha(a)?;
        }
        Ok(())
    }

    /// `γ = p / n`.
    pub fn gamma(&self) -> f64 {
        self.p as f64 / self.n as f64
    }
}

/// One simulated replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSample {
    pub p: usize,
    pub n: usize,
    pub dist: Distribution,
    pub seed: u64,
    /// Random stream of the run seed used for this replicate.
    pub stream: u64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `m_1..m_K`.
    pub moments: Vec<f64>,
}

impl SpectralSample {
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }
}

/// Replicate `stream`: sample the data from that stream, form `R`, and
/// diagonalise it.
pub fn simulate_replicate(config: &SimulationConfig, stream: u64) -> Result<SpectralSample> {
    config.validate()?;
    let mut rng = replicate_rng(config.seed, stream);
    let x = sample_matrix_with(config.p, config.n, config.dist, &mut rng)?;
    let r = correlation_matrix(&x)?;
    drop(x);
    let eigenvalues = eigenvalues_sym(&r)?;
    let moments = empirical_moments(&eigenvalues, config.k_max);
    Ok(SpectralSample {
        p: config.p,
        n: config.n,
        dist: config.dist,
        seed: config.seed,
        stream,
        eigenvalues,
        moments,
    })
}

/// Mean, spread and standard error of one statistic over replicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (divisor `L − 1`; zero for one replicate).
    pub stddev: f64,
    /// `stddev / √L`.
    pub stderr: f64,
}

/// Summary of values taken in the given order.
pub fn summarize(values: &[f64]) -> Summary {
    let l = values.len();
    if l == 0 {
        return Summary {
            mean: f64::NAN,
            stddev: f64::NAN,
            stderr: f64::NAN,
        };
    }
    let mean = values.iter().sum::<f64>() / l as f64;
    let stddev = if l > 1 {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        libm::sqrt(ss / (l - 1) as f64)
    } else {
        0.0
    };
    Summary {
        mean,
        stddev,
        stderr: stddev / libm::sqrt(l as f64),
    }
}

/// Per-order summaries of the empirical moments of a replicate set, taken in
/// slice order.
pub fn summarize_moments(samples: &[SpectralSample], k_max: usize) -> Vec<Summary> {
    (0..k_max)
        .map(|k| {
            let values: Vec<f64> = samples
                .iter()
                .filter_map(|s| s.moments.get(k).copied())
                .collect();
            summarize(&values)
        })
        .collect()
}

/// `n · Ê[Y_{11}⁴]` over `rows` independent self-normalised rows of length
/// `n`, computed as the mean over rows of `Σ_t Y_t⁴`.
pub fn scaled_fourth_moment(dist: Distribution, n: usize, rows: usize, seed: u64) -> Result<f64> {
    if rows == 0 || n == 0 {
        return Err(Error::argument("rows, n", "must be positive"));
    }
    // generate in blocks so memory stays bounded
    const BLOCK: usize = 256;
    let mut rng = replicate_rng(seed, 0);
    let mut buf = vec![0.0; BLOCK.min(rows) * n];
    let mut total = 0.0;
    let mut done = 0;
    while done < rows {
        let b = BLOCK.min(rows - done);
        let block = &mut buf[..b * n];
        dist.fill(&mut rng, block)?;
        for (i, row) in block.chunks_exact_mut(n).enumerate() {
            normalize_row(row, done + i)?;
            total += row.iter().map(|v| (v * v) * (v * v)).sum::<f64>();
        }
        done += b;
    }
    Ok(total / rows as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_known_spectrum() {
        let m = empirical_moments(&[0.0, 1.0, 2.0, 1.0], 3);
        assert_eq!(m, vec![1.0, 1.5, 2.5]);
    }

    #[test]
    fn histogram_normalisation() {
        let h = esd_histogram(&[-1.0, 0.0, 0.1, 0.5, 0.99, 1.0, 3.0], 2, 0.0, 1.0).unwrap();
        assert_eq!(h.counts, vec![2, 3]);
        assert_eq!((h.below, h.above), (1, 1));
        let area: f64 = h.density().iter().map(|d| d * h.width()).sum();
        assert!((area - 1.0).abs() < 1e-15);
        assert!(Histogram::new(0, 0.0, 1.0).is_err());
        assert!(Histogram::new(3, 1.0, 1.0).is_err());
        let mut a = h.clone();
        a.merge(&h).unwrap();
        assert_eq!(a.counts, vec![4, 6]);
        assert!(a.merge(&Histogram::new(3, 0.0, 1.0).unwrap()).is_err());
        assert_eq!(
            Histogram::new(2, 0.0, 1.0).unwrap().density(),
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn replicate_invariants() {
        for dist in [
            Distribution::student_t(1.0).unwrap(),
            Distribution::pareto(0.5).unwrap(),
            Distribution::Gaussian,
        ] {
            let cfg = SimulationConfig {
                p: 60,
                n: 90,
                dist,
                k_max: 5,
                seed: 17,
            };
            let s = simulate_replicate(&cfg, 2).unwrap();
            assert_eq!(s.eigenvalues.len(), 60);
            assert!((s.moments[0] - 1.0).abs() < 1e-8);
            assert!((s.trace() - 60.0).abs() < 1e-6 * 60.0);
            assert!(s.lambda_min() >= -1e-8 * s.lambda_max() * 60.0);
            assert_eq!(simulate_replicate(&cfg, 2).unwrap(), s);
            assert_ne!(
                simulate_replicate(&cfg, 3).unwrap().eigenvalues,
                s.eigenvalues
            );
        }
    }

    #[test]
    fn more_variables_than_observations() {
        let cfg = SimulationConfig {
            p: 40,
            n: 10,
            dist: Distribution::Gaussian,
            k_max: 2,
            seed: 1,
        };
        let s = simulate_replicate(&cfg, 0).unwrap();
        let zeros = s.eigenvalues.iter().filter(|x| x.abs() < 1e-10).count();
        assert_eq!(zeros, 30);
    }

    #[test]
    fn summaries() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.stddev - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.stderr - s.stddev / 2.0).abs() < 1e-15);
        assert_eq!(summarize(&[7.0]).stddev, 0.0);
        assert!(summarize(&[]).mean.is_nan());
    }

    #[test]
    fn bad_config() {
        let cfg = SimulationConfig {
            p: 0,
            n: 10,
            dist: Distribution::Gaussian,
            k_max: 2,
            seed: 1,
        };
        assert!(simulate_replicate(&cfg, 0).is_err());
        let cfg = SimulationConfig {
            p: 3,
            n: 10,
            dist: Distribution::StudentT { alpha: 3.0 },
            k_max: 2,
            seed: 1,
        };
        assert!(simulate_replicate(&cfg, 0).is_err());
    }

    #[test]
    fn gaussian_fourth_moment_vanishes() {
        // n E[Y⁴] = 3 / (n + 2) for Gaussian rows
        for n in [10, 100] {
            let v = scaled_fourth_moment(Distribution::Gaussian, n, 4000, 3).unwrap();
            let exact = 3.0 / (n as f64 + 2.0);
            assert!(((v - exact) / exact).abs() < 0.05, "n={n}: {v} vs {exact}");
        }
    }
}
