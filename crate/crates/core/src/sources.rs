//! Input states: number states and the two-mode squeezed vacuum of
//! non-degenerate parametric down-conversion.
//!
//! The squeezed vacuum has pair amplitudes `c_n = (-e^{iθ} tanh r)^n / cosh r`
//! on `|n, n>`. Truncating at `n_cut` pairs discards probability
//! `tanh^{2(n_cut+1)} r`; the state is kept sub-normalized.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockBasis, OccupationVector, PureState};

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Hard ceiling on automatically chosen pair cutoffs.
pub const MAX_AUTO_PAIR_CUTOFF: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedSourceParams {
    pub r: f64,
    pub theta: f64,
    pub pair_cutoff: usize,
    pub tail_tolerance: f64,
}

impl SqueezedSourceParams {
    pub fn new(r: f64, theta: f64, pair_cutoff: usize, tail_tolerance: f64) -> Result<Self> {
        let p = Self {
            r,
            theta,
            pair_cutoff,
            tail_tolerance,
        };
        p.validate()?;
        Ok(p)
    }

    /// Picks the smallest pair cutoff whose discarded second moment
    /// `Σ_{n > n_cut} n² p_n` is at most `tail_tolerance`. This bounds the
    /// discarded probability and the discarded contribution to `<n>` and
    /// `<n_1 n_2>` by the same tolerance.
    pub fn auto(r: f64, theta: f64, tail_tolerance: f64) -> Result<Self> {
        let probe = Self {
            r,
            theta,
            pair_cutoff: 0,
            tail_tolerance,
        };
        probe.validate()?;
        let pair_cutoff = auto_pair_cutoff(r, tail_tolerance)?;
        Ok(Self {
            pair_cutoff,
            ..probe
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(Error::Domain(format!(
                "squeezing magnitude must be finite and non-negative, got {}",
                self.r
            )));
        }
        if !self.theta.is_finite() {
            return Err(Error::Domain("squeezing phase must be finite".into()));
        }
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance < 1.0) {
            return Err(Error::Domain(format!(
                "tail tolerance must lie in (0, 1), got {}",
                self.tail_tolerance
            )));
        }
        Ok(())
    }

    pub fn tail(&self) -> f64 {
        truncation_tail(self.r, self.pair_cutoff)
    }

    /// Pair amplitude `c_n`.
    pub fn pair_amplitude(&self, n: usize) -> Complex64 {
        let base = -Complex64::from_polar(self.r.tanh(), self.theta);
        base.powu(n as u32) / self.r.cosh()
    }
}

/// Probability of `n` pairs, `tanh^{2n} r / cosh² r`.
pub fn pair_probability(r: f64, n: usize) -> f64 {
    let x = r.tanh().powi(2);
    x.powi(n as i32) * (1.0 - x)
}

/// Probability mass beyond `n_cut` pairs: `tanh^{2(n_cut+1)} r`.
pub fn truncation_tail(r: f64, n_cut: usize) -> f64 {
    let t = r.tanh();
    if t == 0.0 {
        return 0.0;
    }
    ((2 * (n_cut + 1)) as f64 * t.ln()).exp()
}

/// `Σ_{n > n_cut} n p_n`, the pair number mean carried by the discarded tail.
pub fn discarded_first_moment(r: f64, n_cut: usize) -> f64 {
    let m = (n_cut + 1) as f64;
    truncation_tail(r, n_cut) * (m + r.sinh().powi(2))
}

/// `Σ_{n > n_cut} n² p_n`.
pub fn discarded_second_moment(r: f64, n_cut: usize) -> f64 {
    let m = (n_cut + 1) as f64;
    let s = r.sinh().powi(2);
    truncation_tail(r, n_cut) * (m * m + 2.0 * m * s + s * (1.0 + 2.0 * s))
}

/// Smallest pair cutoff whose discarded second moment is `<= tolerance`.
pub fn auto_pair_cutoff(r: f64, tolerance: f64) -> Result<usize> {
    if r == 0.0 {
        return Ok(0);
    }
    (0..=MAX_AUTO_PAIR_CUTOFF)
        .find(|&k| discarded_second_moment(r, k) <= tolerance)
        .ok_or(Error::Truncation {
            tail: truncation_tail(r, MAX_AUTO_PAIR_CUTOFF),
            tolerance,
            pair_cutoff: MAX_AUTO_PAIR_CUTOFF,
        })
}

/// Truncated two-mode squeezed vacuum on modes 0 and 1 of `basis`; any further
/// modes stay in vacuum.
pub fn two_mode_squeezed_vacuum(params: &SqueezedSourceParams, basis: FockBasis) -> Result<PureState> {
    params.validate()?;
    if basis.modes() < 2 {
        return Err(Error::Basis(format!(
            "squeezed vacuum needs at least two modes, basis has {}",
            basis.modes()
        )));
    }
    if 2 * params.pair_cutoff > basis.cutoff() {
        return Err(Error::Basis(format!(
            "pair cutoff {} needs a total-photon cutoff of at least {}, basis has {}",
            params.pair_cutoff,
            2 * params.pair_cutoff,
            basis.cutoff()
        )));
    }
    let tail = params.tail();
    if tail > params.tail_tolerance {
        return Err(Error::Truncation {
            tail,
            tolerance: params.tail_tolerance,
            pair_cutoff: params.pair_cutoff,
        });
    }
    let modes = basis.modes();
    let entries = (0..=params.pair_cutoff).filter_map(|n| {
        let amp = params.pair_amplitude(n);
        if amp.norm() == 0.0 {
            return None;
        }
        let mut occ = OccupationVector::vacuum(modes);
        occ.counts_mut()[0] = n as u32;
        occ.counts_mut()[1] = n as u32;
        Some((occ, amp))
    });
    PureState::from_amplitudes(basis, entries)
}

/// Squeezed vacuum in the smallest basis that holds it: `modes` modes with a
/// total cutoff of `2 n_cut`.
pub fn squeezed_state(params: &SqueezedSourceParams, modes: usize) -> Result<PureState> {
    let basis = FockBasis::new(modes, 2 * params.pair_cutoff)?;
    two_mode_squeezed_vacuum(params, basis)
}

/// Squeezed vacuum restricted to at most `pairs` pairs, without a tail check.
///
/// Exact for any observable that projects onto states of at most `2 pairs`
/// photons: a passive network conserves photon number, so the discarded
/// blocks never reach such a projector.
pub fn pair_subspace_state(r: f64, theta: f64, pairs: usize, modes: usize) -> Result<PureState> {
    let params = SqueezedSourceParams {
        r,
        theta,
        pair_cutoff: pairs,
        tail_tolerance: 0.5,
    };
    params.validate()?;
    let basis = FockBasis::new(modes, 2 * pairs)?;
    if basis.modes() < 2 {
        return Err(Error::Basis(format!(
            "squeezed vacuum needs at least two modes, basis has {modes}"
        )));
    }
    let entries = (0..=pairs).map(|n| {
        let mut occ = OccupationVector::vacuum(modes);
        occ.counts_mut()[0] = n as u32;
        occ.counts_mut()[1] = n as u32;
        (occ, params.pair_amplitude(n))
    });
    PureState::from_amplitudes(basis, entries.filter(|(_, a)| a.norm() != 0.0))
}

/// Entropy of entanglement between the two arms, in bits:
/// `cosh²r log₂ cosh²r - sinh²r log₂ sinh²r`.
pub fn entanglement_entropy(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!(
            "squeezing magnitude must be finite and non-negative, got {r}"
        )));
    }
    let c2 = r.cosh().powi(2);
    let s2 = r.sinh().powi(2);
    let xlogx = |v: f64| if v == 0.0 { 0.0 } else { v * v.log2() };
    Ok(xlogx(c2) - xlogx(s2))
}
