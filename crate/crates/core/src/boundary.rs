//! Limit laws at the edges of the tail-index range: the modified Poisson law
//! as `α → 0⁺` and the Marčenko–Pastur law as `α → 2⁻`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::stirling2_unchecked;
use crate::moments::check_gamma;
use crate::special::ln_gamma;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// `q(0) = 1 − 1/γ + e^{−γ}/γ`, `q(k) = e^{−γ} γ^{k−1} / k!` for `k ≥ 1`.
    ModifiedPoisson,
    /// Absolutely continuous part on `[(1−√γ)², (1+√γ)²]` plus an atom
    /// `1 − 1/γ` at zero when `γ > 1`.
    MarchenkoPastur,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLaw {
    pub gamma: f64,
    pub kind: BoundaryKind,
}

pub fn boundary_modified_poisson(gamma: f64) -> Result<BoundaryLaw> {
    check_gamma(gamma)?;
    Ok(BoundaryLaw {
        gamma,
        kind: BoundaryKind::ModifiedPoisson,
    })
}

pub fn boundary_marchenko_pastur(gamma: f64) -> Result<BoundaryLaw> {
    check_gamma(gamma)?;
    Ok(BoundaryLaw {
        gamma,
        kind: BoundaryKind::MarchenkoPastur,
    })
}

impl BoundaryLaw {
    /// Mass at the integer `k`; only defined for the modified Poisson law.
    pub fn pmf(&self, k: usize) -> Option<f64> {
        if self.kind != BoundaryKind::ModifiedPoisson {
            return None;
        }
        let g = self.gamma;
        Some(if k == 0 {
            // 1 − (1 − e^{−γ})/γ, with expm1 to keep small γ accurate
            (1.0 + libm::expm1(-g) / g).max(0.0)
        } else {
            libm::exp(-g + (k as f64 - 1.0) * libm::log(g) - ln_gamma(k as f64 + 1.0))
        })
    }

    /// Mass of the atom at zero.
    pub fn atom_at_zero(&self) -> f64 {
        match self.kind {
            BoundaryKind::ModifiedPoisson => self.pmf(0).unwrap_or(0.0),
            BoundaryKind::MarchenkoPastur => {
                if self.gamma > 1.0 {
                    1.0 - 1.0 / self.gamma
                } else {
                    0.0
                }
            }
        }
    }

    /// Edges of the continuous part; only defined for the Marčenko–Pastur law.
    pub fn support(&self) -> Option<(f64, f64)> {
        if self.kind != BoundaryKind::MarchenkoPastur {
            return None;
        }
        let s = libm::sqrt(self.gamma);
        Some(((1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)))
    }

    /// Density of the continuous part; only defined for the Marčenko–Pastur
    /// law.
    pub fn density(&self, x: f64) -> Option<f64> {
        let (a, b) = self.support()?;
        if x <= a || x >= b || x <= 0.0 {
            return Some(0.0);
        }
        Some(libm::sqrt((b - x) * (x - a)) / (2.0 * core::f64::consts::PI * self.gamma * x))
    }
}

/// `lim_{α→0⁺} μ_k(α, γ) = (1/γ) Σ_r γ^r S(k, r)`, the `k`-th moment of the
/// modified Poisson law. Evaluated exactly at the binary value of `gamma`.
pub fn boundary_moment_alpha0(gamma: f64, k: usize) -> Result<f64> {
    check_gamma(gamma)?;
    if k == 0 {
        return Err(Error::argument("k", "must be at least 1"));
    }
    let g =
        BigRational::from_float(gamma).ok_or_else(|| Error::argument("gamma", "must be finite"))?;
    let mut total = BigRational::zero();
    let mut power = BigRational::from_integer(BigInt::from(1));
    for r in 1..=k {
        total += &power * BigRational::from_integer(BigInt::from(stirling2_unchecked(k, r)));
        power *= &g;
    }
    Ok(total.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::mp_moment;
    use core::f64::consts::PI;

    #[test]
    fn poisson_at_one() {
        let law = boundary_modified_poisson(1.0).unwrap();
        let e = (-1.0f64).exp();
        assert!((law.pmf(0).unwrap() - e).abs() < 1e-12);
        assert!((law.pmf(1).unwrap() - e).abs() < 1e-12);
        assert!((law.pmf(2).unwrap() - e / 2.0).abs() < 1e-12);
    }

    #[test]
    fn poisson_normalisation_and_moments() {
        for &g in &[0.2, 1.0, 2.0, 7.5] {
            let law = boundary_modified_poisson(g).unwrap();
            let mass: f64 = (0..200).map(|k| law.pmf(k).unwrap()).sum();
            assert!((mass - 1.0).abs() < 1e-13, "γ={g}");
            assert!(law.pmf(0).unwrap() >= 0.0);
            for j in 1..=6 {
                let direct: f64 = (1..200)
                    .map(|k| (k as f64).powi(j as i32) * law.pmf(k).unwrap())
                    .sum();
                let m = boundary_moment_alpha0(g, j).unwrap();
                assert!(((direct - m) / m).abs() < 1e-12, "γ={g} j={j}");
            }
        }
        assert!(boundary_modified_poisson(1e-8).unwrap().pmf(0).unwrap() >= 0.0);
        assert!(boundary_modified_poisson(0.0).is_err());
    }

    #[test]
    fn alpha0_moment_example() {
        let expected = (0.2 + 0.04 * 7.0 + 0.008 * 6.0 + 0.0016) / 0.2;
        assert!((boundary_moment_alpha0(0.2, 4).unwrap() - expected).abs() < 1e-14);
        assert_eq!(boundary_moment_alpha0(0.3, 1).unwrap(), 1.0);
    }

    /// ∫ x^k f(x) dx over the support by Gauss–Chebyshev-like substitution
    /// `x = a + (b − a)(1 − cos θ)/2`, which removes the square-root edges.
    fn mp_moment_quadrature(g: f64, k: i32) -> f64 {
        let law = boundary_marchenko_pastur(g).unwrap();
        let (a, b) = law.support().unwrap();
        let n = 20_000;
        let h = PI / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            let th = (i as f64 + 0.5) * h;
            let x = a + (b - a) * (1.0 - th.cos()) / 2.0;
            let dx = (b - a) * th.sin() / 2.0;
            sum += x.powi(k) * law.density(x).unwrap() * dx * h;
        }
        sum
    }

    #[test]
    fn marchenko_pastur_moments() {
        for &g in &[0.2, 0.5, 1.0, 2.0] {
            let law = boundary_marchenko_pastur(g).unwrap();
            let mass = mp_moment_quadrature(g, 0) + law.atom_at_zero();
            assert!((mass - 1.0).abs() < 1e-8, "γ={g}");
            for k in 1..=5 {
                let q = mp_moment_quadrature(g, k);
                let b = mp_moment(g, k as usize).unwrap();
                assert!(((q - b) / b).abs() < 1e-8, "γ={g} k={k}: {q} vs {b}");
            }
        }
        let law = boundary_marchenko_pastur(0.5).unwrap();
        assert_eq!(law.pmf(0), None);
        assert_eq!(law.density(-1.0), Some(0.0));
        assert_eq!(boundary_modified_poisson(0.5).unwrap().density(1.0), None);
    }
}
