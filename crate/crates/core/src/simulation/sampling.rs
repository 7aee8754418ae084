//! Random data matrices with heavy-tailed or Gaussian entries.

use core::fmt;

use rand::distr::Distribution as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{StandardNormal, StudentT};

use super::matrix::Matrix;
use crate::moments::check_alpha;
use crate::{Error, Result};

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

/// Entry distribution. Both heavy-tailed choices are symmetric and lie in the
/// domain of attraction of an `α`-stable law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Student t with `α` degrees of freedom.
    StudentT { alpha: f64 },
    /// `±U^{−1/α}` with `U` uniform on `(0, 1)` and a fair random sign.
    Pareto { alpha: f64 },
    /// Standard normal, the light-tailed control.
    Gaussian,
}

impl Distribution {
    pub fn student_t(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::StudentT { alpha })
    }

    pub fn pareto(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::Pareto { alpha })
    }

    /// Builds a distribution from its short name (`t`, `pareto`, `gaussian`).
    /// `alpha` is required for the heavy-tailed names and ignored otherwise.
    pub fn from_name(name: &str, alpha: Option<f64>) -> Result<Self> {
        let need_alpha = || {
            alpha.ok_or_else(|| Error::argument("alpha", alloc::format!("required for `{name}`")))
        };
        match name {
            "t" => Self::student_t(need_alpha()?),
            "pareto" => Self::pareto(need_alpha()?),
            "gaussian" => Ok(Self::Gaussian),
            other => Err(Error::argument(
                "dist",
                alloc::format!("unknown distribution `{other}` (expected t, pareto or gaussian)"),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::StudentT { .. } => "t",
            Self::Pareto { .. } => "pareto",
            Self::Gaussian => "gaussian",
        }
    }

    /// Tail index, `None` for the Gaussian.
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            Self::StudentT { alpha } | Self::Pareto { alpha } => Some(alpha),
            Self::Gaussian => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::StudentT { alpha } | Self::Pareto { alpha } => check_alpha(alpha),
            Self::Gaussian => Ok(()),
        }
    }

    /// Fills `out` with independent draws, in order.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) -> Result<()> {
        self.validate()?;
        match *self {
            Self::StudentT { alpha } => {
                let t = StudentT::new(alpha)
                    .map_err(|e| Error::argument("alpha", alloc::format!("{e}")))?;
                for x in out {
                    *x = t.sample(rng);
                }
            }
            Self::Pareto { alpha } => {
                let exponent = -1.0 / alpha;
                for x in out {
                    // one word: 53 bits for U in (0, 1), the low bit for the sign
                    let bits = rng.next_u64();
                    let u = ((bits >> 11) as f64 + 0.5) * TWO_POW_M53;
                    let magnitude = if exponent == -1.0 {
                        1.0 / u
                    } else if exponent == -2.0 {
                        1.0 / (u * u)
                    } else {
                        libm::exp2(exponent * libm::log2(u))
                    };
                    *x = if bits & 1 == 1 { magnitude } else { -magnitude };
                }
            }
            Self::Gaussian => {
                for x in out {
                    *x = StandardNormal.sample(rng);
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha() {
            Some(a) => write!(f, "{}({a})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Generator for replicate `stream` of a run seeded with `seed`.
///
/// Every stream of a ChaCha key is an independent sequence, so replicates can
/// be generated in any order or in parallel.
pub fn replicate_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `p × n` matrix of independent draws, generated row by row from stream 0
/// of `seed`.
pub fn sample_matrix(p: usize, n: usize, dist: Distribution, seed: u64) -> Result<Matrix> {
    sample_matrix_with(p, n, dist, &mut replicate_rng(seed, 0))
}

pub fn sample_matrix_with<R: Rng + ?Sized>(
    p: usize,
    n: usize,
    dist: Distribution,
    rng: &mut R,
) -> Result<Matrix> {
    if p == 0 || n == 0 {
        return Err(Error::argument(
            "p, n",
            "matrix dimensions must be positive",
        ));
    }
    let mut m = Matrix::zeros(p, n);
    dist.fill(rng, m.as_mut_slice())?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn same_seed_same_matrix() {
        let a = sample_matrix(2, 3, Distribution::Gaussian, 42).unwrap();
        let b = sample_matrix(2, 3, Distribution::Gaussian, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_matrix(2, 3, Distribution::Gaussian, 43).unwrap();
        assert_ne!(a, c);
        let d =
            sample_matrix_with(2, 3, Distribution::Gaussian, &mut replicate_rng(42, 1)).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn cauchy_tail() {
        let mut rng = replicate_rng(7, 0);
        let mut xs = vec![0.0; 1_000_000];
        Distribution::student_t(1.0)
            .unwrap()
            .fill(&mut rng, &mut xs)
            .unwrap();
        let tail = xs.iter().filter(|x| x.abs() > 10.0).count() as f64 / xs.len() as f64;
        // P(|C| > 10) = 1 − (2/π) atan(10)
        let exact = 1.0 - 2.0 / core::f64::consts::PI * libm::atan(10.0);
        assert!(((tail - exact) / exact).abs() < 0.05, "{tail} vs {exact}");
    }

    #[test]
    fn pareto_is_symmetric_with_right_tail() {
        let mut rng = replicate_rng(11, 3);
        let mut xs = vec![0.0; 200_000];
        Distribution::pareto(0.5)
            .unwrap()
            .fill(&mut rng, &mut xs)
            .unwrap();
        let positive = xs.iter().filter(|&&x| x > 0.0).count() as f64 / xs.len() as f64;
        // binomial standard error 0.0011
        assert!((positive - 0.5).abs() < 0.006);
        let mut sorted: Vec<f64> = xs.clone();
        sorted.sort_by(f64::total_cmp);
        // quartiles of ±U^{−2} are ∓4
        let (q1, q3) = (sorted[sorted.len() / 4], sorted[3 * sorted.len() / 4]);
        assert!(
            (q1 + 4.0).abs() < 0.2 && (q3 - 4.0).abs() < 0.2,
            "{q1} {q3}"
        );
        assert!((q1 + q3).abs() < 0.2);
        assert!(xs.iter().all(|x| x.abs() >= 1.0));
        // P(|X| > 100) = 100^{−1/2}
        let tail = xs.iter().filter(|x| x.abs() > 100.0).count() as f64 / xs.len() as f64;
        assert!((tail - 0.1).abs() < 0.005);

        // non-integer exponent: P(|X| > 10) = 10^{−1.5}
        Distribution::pareto(1.5)
            .unwrap()
            .fill(&mut rng, &mut xs)
            .unwrap();
        assert!(xs.iter().all(|x| x.abs() >= 1.0));
        let tail = xs.iter().filter(|x| x.abs() > 10.0).count() as f64 / xs.len() as f64;
        let exact = 10f64.powf(-1.5);
        assert!(((tail - exact) / exact).abs() < 0.05, "{tail} vs {exact}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Distribution::student_t(0.0).is_err());
        assert!(Distribution::pareto(2.5).is_err());
        assert!(Distribution::from_name("cauchy", Some(1.0)).is_err());
        assert!(Distribution::from_name("t", None).is_err());
        assert_eq!(
            Distribution::from_name("gaussian", None).unwrap(),
            Distribution::Gaussian
        );
        assert!(sample_matrix(0, 3, Distribution::Gaussian, 1).is_err());
        let bad = Distribution::StudentT { alpha: -1.0 };
        assert!(bad.fill(&mut replicate_rng(1, 0), &mut [0.0]).is_err());
    }
}
