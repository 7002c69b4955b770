//! Pure bosonic states over a fixed set of modes in a Fock basis truncated by
//! total photon number.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Amplitudes smaller than this in magnitude are dropped after each network
/// element.
pub const PRUNE_THRESHOLD: f64 = 1e-300;

/// Slack allowed on the norm of a stored state.
pub const NORM_SLACK: f64 = 1e-12;

/// Photon counts per mode; the label of a Fock basis vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector(SmallVec<[u32; 4]>);

impl OccupationVector {
    pub fn new(counts: &[u32]) -> Self {
        Self(SmallVec::from_slice(counts))
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(SmallVec::from_elem(0, modes))
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn counts_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode]
    }
}

impl From<&[u32]> for OccupationVector {
    fn from(counts: &[u32]) -> Self {
        Self::new(counts)
    }
}

impl<const N: usize> From<[u32; N]> for OccupationVector {
    fn from(counts: [u32; N]) -> Self {
        Self::new(&counts)
    }
}

impl fmt::Debug for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(">")
    }
}

/// A finite Fock basis: `modes` modes with at most `cutoff` photons in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    modes: usize,
    cutoff: usize,
}

impl FockBasis {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::Basis("a Fock basis needs at least one mode".into()));
        }
        Ok(Self { modes, cutoff })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of basis vectors, `C(cutoff + modes, modes)`.
    pub fn dimension(&self) -> u128 {
        let (n, k) = ((self.cutoff + self.modes) as u128, self.modes as u128);
        (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
    }

    pub fn contains(&self, occupation: &OccupationVector) -> bool {
        occupation.modes() == self.modes && occupation.total() <= self.cutoff
    }

    pub fn check(&self, occupation: &OccupationVector) -> Result<()> {
        if occupation.modes() != self.modes {
            return Err(Error::Basis(format!(
                "occupation {occupation} has {} modes, basis has {}",
                occupation.modes(),
                self.modes
            )));
        }
        if occupation.total() > self.cutoff {
            return Err(Error::Basis(format!(
                "occupation {occupation} holds {} photons, cutoff is {}",
                occupation.total(),
                self.cutoff
            )));
        }
        Ok(())
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            return Err(Error::ModeIndex {
                index: mode,
                modes: self.modes,
            });
        }
        Ok(())
    }

    /// All basis vectors, ordered by total photon number and then
    /// reverse-lexicographically within each photon-number block, so two
    /// modes enumerate as `|0,0>, |1,0>, |0,1>, |2,0>, |1,1>, |0,2>, ...`.
    pub fn iter(&self) -> impl Iterator<Item = OccupationVector> + '_ {
        (0..=self.cutoff).flat_map(move |n| Compositions::new(n, self.modes))
    }
}

/// Weak compositions of `total` into `parts` ordered non-negative integers,
/// reverse-lexicographic.
struct Compositions {
    current: Option<SmallVec<[u32; 4]>>,
}

impl Compositions {
    fn new(total: usize, parts: usize) -> Self {
        let mut first = SmallVec::from_elem(0, parts);
        first[0] = total as u32;
        Self {
            current: Some(first),
        }
    }
}

impl Iterator for Compositions {
    type Item = OccupationVector;

    fn next(&mut self) -> Option<OccupationVector> {
        let out = self.current.take()?;
        let parts = out.len();
        // Move one photon from the right-most non-empty mode (excluding the
        // last) one step to the right, gathering everything behind it.
        let mut next = out.clone();
        if let Some(k) = (0..parts.saturating_sub(1)).rev().find(|&k| next[k] > 0) {
            next[k] -= 1;
            let tail: u32 = next[k + 1..].iter().sum();
            for v in next[k + 1..].iter_mut() {
                *v = 0;
            }
            next[k + 1] = tail + 1;
            self.current = Some(next);
        }
        Some(OccupationVector(out))
    }
}

/// A pure state as a sparse map from occupation vectors to amplitudes.
///
/// States may be sub-normalized; a truncated squeezed vacuum is stored as is.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    basis: FockBasis,
    amplitudes: BTreeMap<OccupationVector, Complex64>,
}

impl PureState {
    pub fn vacuum(basis: FockBasis) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(OccupationVector::vacuum(basis.modes()), Complex64::new(1.0, 0.0));
        Self { basis, amplitudes }
    }

    /// Unit-norm number state on the given occupation.
    pub fn fock(basis: FockBasis, occupation: impl Into<OccupationVector>) -> Result<Self> {
        let occupation = occupation.into();
        basis.check(&occupation)?;
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(occupation, Complex64::new(1.0, 0.0));
        Ok(Self { basis, amplitudes })
    }

    /// Builds a state from explicit amplitudes. Repeated occupations add.
    pub fn from_amplitudes<I>(basis: FockBasis, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationVector, Complex64)>,
    {
        let mut amplitudes: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
        for (occ, amp) in entries {
            basis.check(&occ)?;
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::Domain(format!("non-finite amplitude on {occ}")));
            }
            *amplitudes.entry(occ).or_default() += amp;
        }
        let state = Self { basis, amplitudes };
        let n2 = state.norm_sqr();
        if n2 > 1.0 + NORM_SLACK {
            return Err(Error::Domain(format!("state norm² {n2} exceeds 1")));
        }
        Ok(state)
    }

    /// Internal constructor for amplitudes produced by norm-preserving maps.
    pub(crate) fn from_map_unchecked(
        basis: FockBasis,
        amplitudes: BTreeMap<OccupationVector, Complex64>,
    ) -> Self {
        Self { basis, amplitudes }
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn modes(&self) -> usize {
        self.basis.modes()
    }

    /// Number of stored (non-pruned) amplitudes.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OccupationVector, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn amplitude(&self, occupation: &OccupationVector) -> Complex64 {
        self.amplitudes
            .get(occupation)
            .copied()
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<n_mode>` on the stored amplitudes.
    pub fn number_expectation(&self, mode: usize) -> Result<f64> {
        self.basis.check_mode(mode)?;
        Ok(self
            .amplitudes
            .iter()
            .map(|(occ, a)| occ.get(mode) as f64 * a.norm_sqr())
            .sum())
    }

    /// `<n_i n_j>` for `i != j`, equal to the normally ordered
    /// `<b_i† b_j† b_j b_i>`.
    pub fn pair_correlator(&self, i: usize, j: usize) -> Result<f64> {
        self.basis.check_mode(i)?;
        self.basis.check_mode(j)?;
        if i == j {
            return Err(Error::Unsupported(
                "pair correlator needs two distinct modes".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .map(|(occ, a)| (occ.get(i) as f64) * (occ.get(j) as f64) * a.norm_sqr())
            .sum())
    }

    /// `|<occupation|psi>|²`.
    pub fn projection_probability(&self, occupation: &OccupationVector) -> Result<f64> {
        self.basis.check(occupation)?;
        Ok(self.amplitude(occupation).norm_sqr())
    }

    /// Probability mass per total photon number.
    pub fn photon_number_distribution(&self) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        for (occ, a) in &self.amplitudes {
            *out.entry(occ.total()).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    /// Largest total photon number carrying a stored amplitude.
    pub fn max_photons(&self) -> usize {
        self.amplitudes.keys().map(|o| o.total()).max().unwrap_or(0)
    }

    /// The same state multiplied by `e^{i angle}`.
    pub fn with_global_phase(&self, angle: f64) -> Self {
        let phase = Complex64::from_polar(1.0, angle);
        Self {
            basis: self.basis,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(o, a)| (o.clone(), a * phase))
                .collect(),
        }
    }

    /// Embeds the state into a basis with more modes (appended in vacuum) or a
    /// larger cutoff.
    pub fn extend_modes(&self, basis: FockBasis) -> Result<Self> {
        if basis.modes() < self.modes() || basis.cutoff() < self.max_photons() {
            return Err(Error::Basis(format!(
                "cannot embed a {}-mode state with up to {} photons into {basis:?}",
                self.modes(),
                self.max_photons()
            )));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|(occ, a)| {
                let mut counts: SmallVec<[u32; 4]> = SmallVec::from_slice(occ.counts());
                counts.resize(basis.modes(), 0);
                (OccupationVector(counts), *a)
            })
            .collect();
        Ok(Self { basis, amplitudes })
    }

    pub(crate) fn prune(&mut self, threshold: f64) {
        self.amplitudes.retain(|_, a| a.norm() >= threshold);
    }
}

pub fn make_fock_state(basis: FockBasis, occupation: &[u32]) -> Result<PureState> {
    PureState::fock(basis, OccupationVector::new(occupation))
}
