//! Second moments of zero-mean Gaussian states and Wick factorization of
//! fourth-order correlators.
//!
//! This path never touches a Fock basis, so it carries no truncation error and
//! serves as an independent reference for the Fock-space simulation of
//! squeezed inputs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{sagnac_scattering, ScatteringMatrix};

/// `normal[i][j] = <b_i† b_j>`, `anomalous[i][j] = <b_i b_j>`; dense, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMoments {
    modes: usize,
    normal: Vec<Complex64>,
    anomalous: Vec<Complex64>,
}

impl GaussianMoments {
    pub fn vacuum(modes: usize) -> Self {
        Self {
            modes,
            normal: vec![Complex64::default(); modes * modes],
            anomalous: vec![Complex64::default(); modes * modes],
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn normal(&self, i: usize, j: usize) -> Complex64 {
        self.normal[i * self.modes + j]
    }

    pub fn anomalous(&self, i: usize, j: usize) -> Complex64 {
        self.anomalous[i * self.modes + j]
    }

    /// `<n_i>`.
    pub fn number(&self, i: usize) -> f64 {
        self.normal(i, i).re
    }

    pub fn total_photon_number(&self) -> f64 {
        (0..self.modes).map(|i| self.number(i)).sum()
    }

    /// Largest violation of `N = N†` and `A = Aᵀ`.
    pub fn symmetry_deviation(&self) -> f64 {
        let n = self.modes;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst
                    .max((self.normal(i, j) - self.normal(j, i).conj()).norm())
                    .max((self.anomalous(i, j) - self.anomalous(j, i)).norm());
            }
        }
        worst
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i >= self.modes {
            return Err(Error::ModeIndex {
                index: i,
                modes: self.modes,
            });
        }
        Ok(())
    }
}

/// Moments of the two-mode squeezed vacuum on modes 0 and 1, other modes in
/// vacuum: `<a_k† a_k> = sinh² r`, `<a_0 a_1> = -e^{iθ} sinh r cosh r`.
pub fn squeezed_input_moments(r: f64, theta: f64, modes: usize) -> Result<GaussianMoments> {
    if modes < 2 {
        return Err(Error::Basis(format!(
            "squeezed moments need at least two modes, got {modes}"
        )));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!(
            "squeezing magnitude must be finite and non-negative, got {r}"
        )));
    }
    let mut m = GaussianMoments::vacuum(modes);
    let sh = r.sinh();
    let n = Complex64::new(sh * sh, 0.0);
    m.normal[0] = n;
    m.normal[modes + 1] = n;
    let pair = -Complex64::from_polar(sh * r.cosh(), theta);
    m.anomalous[1] = pair;
    m.anomalous[modes] = pair;
    Ok(m)
}

/// Moments of `b = S a`:
/// `<b_i† b_j> = Σ S*_ik S_jl <a_k† a_l>`, `<b_i b_j> = Σ S_ik S_jl <a_k a_l>`.
pub fn transform_moments(s: &ScatteringMatrix, m: &GaussianMoments) -> Result<GaussianMoments> {
    let n = m.modes;
    if s.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s.dim(),
        });
    }
    let mut out = GaussianMoments::vacuum(n);
    for i in 0..n {
        for j in 0..n {
            let mut normal = Complex64::default();
            let mut anomalous = Complex64::default();
            for k in 0..n {
                for l in 0..n {
                    normal += s.get(i, k).conj() * s.get(j, l) * m.normal(k, l);
                    anomalous += s.get(i, k) * s.get(j, l) * m.anomalous(k, l);
                }
            }
            out.normal[i * n + j] = normal;
            out.anomalous[i * n + j] = anomalous;
        }
    }
    Ok(out)
}

/// `<b_i† b_j† b_j b_i> = <n_i><n_j> + |<b_i† b_j>|² + |<b_i b_j>|²`.
pub fn wick_pair_correlator(m: &GaussianMoments, i: usize, j: usize) -> Result<f64> {
    m.check_mode(i)?;
    m.check_mode(j)?;
    if i == j {
        return Err(Error::Unsupported(
            "Wick pair correlator needs two distinct modes".into(),
        ));
    }
    Ok(m.number(i) * m.number(j) + m.normal(i, j).norm_sqr() + m.anomalous(i, j).norm_sqr())
}

/// Normalized cross-correlation `<n_1 n_2>/(<n_1><n_2>) - 1` of the Sagnac
/// outputs for a squeezed input, computed from moments alone.
pub fn oracle_g2(r: f64, theta: f64, phi: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "normalized correlation needs r > 0, got {r}"
        )));
    }
    let out = transform_moments(&sagnac_scattering(phi), &squeezed_input_moments(r, theta, 2)?)?;
    let singles = out.number(0) * out.number(1);
    Ok(wick_pair_correlator(&out, 0, 1)? / singles - 1.0)
}
