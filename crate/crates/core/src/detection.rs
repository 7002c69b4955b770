//! Detection schemes at the Sagnac outputs: single counts, two-photon
//! coincidences, the normalized cross-correlation, and projective two- and
//! four-photon coincidences behind ancilla beam splitters.
//!
//! Mode layout: 0 and 1 are the interferometer ports (`b_1`, `b_2` after the
//! loop); 2 and 3 are the vacuum ancillas entering the detector splitters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockBasis, OccupationVector, PureState};
use crate::network::{evolve_network, sagnac_elements, BeamSplitter, NetworkElement};
use crate::sources::{discarded_first_moment, discarded_second_moment};

/// Modes on which the ancilla vacua enter.
pub const ANCILLA_MODES: [usize; 2] = [2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    SingleCounts,
    Coincidence12,
    G2Normalized,
    P2Projective,
    P4TwoByTwo,
    P4ThreeByOne,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::SingleCounts,
        SchemeKind::Coincidence12,
        SchemeKind::G2Normalized,
        SchemeKind::P2Projective,
        SchemeKind::P4TwoByTwo,
        SchemeKind::P4ThreeByOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::SingleCounts => "single_counts",
            SchemeKind::Coincidence12 => "coincidence_12",
            SchemeKind::G2Normalized => "g2_normalized",
            SchemeKind::P2Projective => "p2_projective",
            SchemeKind::P4TwoByTwo => "p4_2x2",
            SchemeKind::P4ThreeByOne => "p4_3x1",
        }
    }

    pub fn is_four_photon(self) -> bool {
        matches!(self, SchemeKind::P4TwoByTwo | SchemeKind::P4ThreeByOne)
    }

    pub fn is_projective(self) -> bool {
        matches!(
            self,
            SchemeKind::P2Projective | SchemeKind::P4TwoByTwo | SchemeKind::P4ThreeByOne
        )
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown detection scheme `{s}`")))
    }
}

/// A detection scheme with its ancilla splitters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionScheme {
    pub kind: SchemeKind,
    pub detector_splitters: Vec<BeamSplitter>,
    pub ancilla_modes: Vec<usize>,
}

impl DetectionScheme {
    /// Scheme without ancilla splitters. Four-photon kinds get balanced ones.
    pub fn new(kind: SchemeKind) -> Self {
        if kind.is_four_photon() {
            return Self::four_photon(kind, [0.5, 0.5]).expect("balanced splitters are valid");
        }
        Self {
            kind,
            detector_splitters: Vec::new(),
            ancilla_modes: Vec::new(),
        }
    }

    /// Four-photon scheme whose two detector splitters have power
    /// transmittances `|t_1|²`, `|t_2|²`.
    ///
    /// 2×2: BS₁ mixes output 1 with ancilla 2, BS₂ mixes output 2 with
    /// ancilla 3. 3×1: BS₁ mixes output 1 with ancilla 2 and its transmitted
    /// port continues into BS₂ with ancilla 3, so output 1 spreads as
    /// `r₁ d₁ + t₁ (r₂ d₂ + t₂ d₃)`; output 2 goes straight to its detector.
    pub fn four_photon(kind: SchemeKind, transmittances: [f64; 2]) -> Result<Self> {
        let [a, b] = ANCILLA_MODES;
        let pairs = match kind {
            SchemeKind::P4TwoByTwo => [(0, a), (1, b)],
            SchemeKind::P4ThreeByOne => [(0, a), (0, b)],
            other => {
                return Err(Error::InvalidConfig(format!(
                    "{other} has no detector splitters"
                )))
            }
        };
        let detector_splitters = vec![
            BeamSplitter::with_transmittance(transmittances[0], pairs[0])?,
            BeamSplitter::with_transmittance(transmittances[1], pairs[1])?,
        ];
        Ok(Self {
            kind,
            detector_splitters,
            ancilla_modes: ANCILLA_MODES.to_vec(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        for bs in &self.detector_splitters {
            let deviation = bs.unitarity_deviation();
            if !(deviation < crate::network::UNITARITY_TOLERANCE) {
                return Err(Error::NotUnitary { deviation });
            }
        }
        if self.kind.is_four_photon() {
            if self.detector_splitters.len() != 2 || self.ancilla_modes.len() != 2 {
                return Err(Error::InvalidConfig(format!(
                    "{} needs exactly two detector splitters and two ancilla modes",
                    self.kind
                )));
            }
            let modes_ok = self
                .detector_splitters
                .iter()
                .all(|bs| bs.modes.0 < 4 && bs.modes.1 < 4);
            if !modes_ok {
                return Err(Error::InvalidConfig(
                    "detector splitters must act on modes 0..4".into(),
                ));
            }
        } else if !self.detector_splitters.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "{} takes no detector splitters",
                self.kind
            )));
        }
        Ok(())
    }

    /// Scalar observable of this scheme at rotation phase `phi`. Single counts
    /// report the port-1 intensity.
    pub fn evaluate(&self, input: &PureState, phi: f64) -> Result<f64> {
        self.validate()?;
        match self.kind {
            SchemeKind::SingleCounts => single_counts(input, phi).map(|(i1, _)| i1),
            SchemeKind::Coincidence12 => coincidence_12(input, phi),
            SchemeKind::G2Normalized => g2_normalized(input, phi),
            SchemeKind::P2Projective => p2_projective(input, phi),
            SchemeKind::P4TwoByTwo => {
                p4_2x2(input, phi, self.splitter_pair())
            }
            SchemeKind::P4ThreeByOne => {
                p4_3x1(input, phi, self.splitter_pair())
            }
        }
    }

    fn splitter_pair(&self) -> [BeamSplitter; 2] {
        [self.detector_splitters[0], self.detector_splitters[1]]
    }
}

/// One sample of a fringe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringePoint {
    pub phi: f64,
    pub value: f64,
    pub closed_form: f64,
    pub abs_error: f64,
}

impl FringePoint {
    pub fn new(phi: f64, value: f64, closed_form: f64) -> Self {
        Self {
            phi,
            value,
            closed_form,
            abs_error: (value - closed_form).abs(),
        }
    }
}

fn through_sagnac(input: &PureState, phi: f64) -> Result<PureState> {
    if input.modes() < 2 {
        return Err(Error::Basis(format!(
            "Sagnac network needs at least two modes, state has {}",
            input.modes()
        )));
    }
    evolve_network(input, &sagnac_elements(phi))
}

/// `(<b_1† b_1>, <b_2† b_2>)` at the interferometer outputs.
pub fn single_counts(input: &PureState, phi: f64) -> Result<(f64, f64)> {
    let out = through_sagnac(input, phi)?;
    Ok((out.number_expectation(0)?, out.number_expectation(1)?))
}

/// `<b_1† b_2† b_2 b_1>` at the interferometer outputs.
pub fn coincidence_12(input: &PureState, phi: f64) -> Result<f64> {
    through_sagnac(input, phi)?.pair_correlator(0, 1)
}

/// `<b_1† b_2† b_2 b_1> / (<b_1† b_1><b_2† b_2>) - 1`.
pub fn g2_normalized(input: &PureState, phi: f64) -> Result<f64> {
    let out = through_sagnac(input, phi)?;
    let singles = out.number_expectation(0)? * out.number_expectation(1)?;
    if !(singles > 0.0) {
        return Err(Error::Domain(
            "normalized correlation is undefined without photons at both outputs".into(),
        ));
    }
    Ok(out.pair_correlator(0, 1)? / singles - 1.0)
}

fn target(modes: usize, ones: &[usize]) -> OccupationVector {
    let mut occ = OccupationVector::vacuum(modes);
    for &m in ones {
        occ.counts_mut()[m] = 1;
    }
    occ
}

/// Checks that a passive network left the photon-number distribution alone.
fn check_number_conservation(before: &PureState, after: &PureState) -> Result<()> {
    let a = before.photon_number_distribution();
    let b = after.photon_number_distribution();
    for (n, p) in &a {
        let q = b.get(n).copied().unwrap_or(0.0);
        if (p - q).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "photon-number block {n} changed weight from {p} to {q}"
            )));
        }
    }
    Ok(())
}

/// Probability of exactly one photon at each interferometer output.
pub fn p2_projective(input: &PureState, phi: f64) -> Result<f64> {
    let out = through_sagnac(input, phi)?;
    check_number_conservation(input, &out)?;
    out.projection_probability(&target(out.modes(), &[0, 1]))
}

fn four_mode_input(input: &PureState) -> Result<PureState> {
    let basis = input.basis();
    if basis.cutoff() < 4 {
        return Err(Error::Basis(format!(
            "four-photon detection needs a total-photon cutoff of at least 4, basis has {}",
            basis.cutoff()
        )));
    }
    match input.modes() {
        4 => Ok(input.clone()),
        2 | 3 => input.extend_modes(FockBasis::new(4, basis.cutoff())?),
        m => Err(Error::Basis(format!(
            "four-photon detection works on 4 modes, state has {m}"
        ))),
    }
}

fn four_photon(input: &PureState, phi: f64, splitters: [BeamSplitter; 2]) -> Result<f64> {
    let state = four_mode_input(input)?;
    let mut elements = sagnac_elements(phi);
    elements.extend(splitters.iter().copied().map(NetworkElement::from));
    let out = evolve_network(&state, &elements)?;
    check_number_conservation(&state, &out)?;
    out.projection_probability(&target(4, &[0, 1, 2, 3]))
}

/// Four-fold coincidence with BS₁ on (output 1, ancilla) and BS₂ on
/// (output 2, ancilla).
pub fn p4_2x2(input: &PureState, phi: f64, splitters: [BeamSplitter; 2]) -> Result<f64> {
    four_photon(input, phi, splitters)
}

/// Four-fold coincidence with three detectors behind output 1 and one on
/// output 2. The splitters must cascade output 1 into three detector modes;
/// see [`DetectionScheme::four_photon`].
pub fn p4_3x1(input: &PureState, phi: f64, splitters: [BeamSplitter; 2]) -> Result<f64> {
    four_photon(input, phi, splitters)
}

/// `(max - min) / (max + min)` over the sampled values.
pub fn visibility(points: &[FringePoint]) -> Result<f64> {
    visibility_of(points.iter().map(|p| p.value))
}

pub fn visibility_of(values: impl IntoIterator<Item = f64>) -> Result<f64> {
    let mut count = 0usize;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
        count += 1;
    }
    if count < 2 {
        return Err(Error::Domain("visibility needs at least two samples".into()));
    }
    let sum = hi + lo;
    if sum == 0.0 {
        return Err(Error::Domain("visibility undefined: max + min = 0".into()));
    }
    Ok((hi - lo) / sum)
}

/// Upper bound on `|<n_i>_truncated - <n_i>|` for the squeezed vacuum after
/// any passive two-mode network. Per pair block the outputs hold `n` photons
/// on average, so the error is exactly the discarded first moment.
pub fn single_counts_truncation_bound(r: f64, pair_cutoff: usize) -> f64 {
    discarded_first_moment(r, pair_cutoff)
}

/// Upper bound on `|<n_1 n_2>_truncated - <n_1 n_2>|`; a block with `n` pairs
/// has `n_1 n_2 <= n²`.
pub fn coincidence_truncation_bound(r: f64, pair_cutoff: usize) -> f64 {
    discarded_second_moment(r, pair_cutoff)
}

/// Upper bound on the truncation error of the normalized correlation `g²`.
pub fn g2_truncation_bound(r: f64, pair_cutoff: usize) -> f64 {
    let full = r.sinh().powi(2);
    let d1 = discarded_first_moment(r, pair_cutoff);
    let d2 = discarded_second_moment(r, pair_cutoff);
    let truncated = full - d1;
    if !(truncated > 0.0) {
        return f64::INFINITY;
    }
    let max_coincidence = full * full + full * r.cosh().powi(2);
    d2 / (full * full)
        + max_coincidence * (full * full - truncated * truncated) / (full * full * truncated * truncated)
}
