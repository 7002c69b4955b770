//! Passive linear-optical elements, their scattering matrices and their exact
//! action on Fock-space states.
//!
//! Convention: an element with scattering matrix `S` maps creation operators
//! as `a_i† -> Σ_j S_ji a_j†` in the Schrödinger picture, which is the same as
//! `b_i = Σ_j S_ij a_j` for the Heisenberg-picture output operators. A beam
//! splitter on modes `(i, j)` has the 2×2 block `[[t, r'], [r, t']]`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{OccupationVector, PureState, PRUNE_THRESHOLD};

/// Tolerance for unitarity checks on element and network matrices.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitter {
    pub t: Complex64,
    pub r: Complex64,
    pub t_prime: Complex64,
    pub r_prime: Complex64,
    pub modes: (usize, usize),
}

impl BeamSplitter {
    pub fn new(
        t: Complex64,
        r: Complex64,
        t_prime: Complex64,
        r_prime: Complex64,
        modes: (usize, usize),
    ) -> Result<Self> {
        if modes.0 == modes.1 {
            return Err(Error::Domain(format!(
                "beam splitter needs two distinct modes, got ({}, {})",
                modes.0, modes.1
            )));
        }
        let bs = Self {
            t,
            r,
            t_prime,
            r_prime,
            modes,
        };
        let deviation = bs.unitarity_deviation();
        if !(deviation < UNITARITY_TOLERANCE) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(bs)
    }

    /// The symmetric 50:50 splitter `t = t' = 1/√2`, `r = r' = i/√2`.
    pub fn balanced(modes: (usize, usize)) -> Self {
        let t = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let r = Complex64::new(0.0, FRAC_1_SQRT_2);
        Self {
            t,
            r,
            t_prime: t,
            r_prime: r,
            modes,
        }
    }

    /// Symmetric splitter with power transmittance `|t|² = transmittance`,
    /// real `t` and `r = i|r|`.
    pub fn with_transmittance(transmittance: f64, modes: (usize, usize)) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmittance) {
            return Err(Error::Domain(format!(
                "transmittance must lie in [0, 1], got {transmittance}"
            )));
        }
        let t = Complex64::new(transmittance.sqrt(), 0.0);
        let r = Complex64::new(0.0, (1.0 - transmittance).sqrt());
        Self::new(t, r, t, r, modes)
    }

    /// `[[t, r'], [r, t']]`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.t, self.r_prime], [self.r, self.t_prime]]
    }

    /// Largest entry of `|M†M - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let m = self.matrix();
        let mut worst = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                let dot: Complex64 = (0..2).map(|k| m[k][a].conj() * m[k][b]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShifter {
    pub mode: usize,
    pub phase: f64,
}

impl PhaseShifter {
    pub fn new(mode: usize, phase: f64) -> Self {
        Self { mode, phase }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NetworkElement {
    BeamSplitter(BeamSplitter),
    PhaseShifter(PhaseShifter),
}

impl NetworkElement {
    fn max_mode(&self) -> usize {
        match self {
            NetworkElement::BeamSplitter(bs) => bs.modes.0.max(bs.modes.1),
            NetworkElement::PhaseShifter(ps) => ps.mode,
        }
    }
}

impl From<BeamSplitter> for NetworkElement {
    fn from(bs: BeamSplitter) -> Self {
        NetworkElement::BeamSplitter(bs)
    }
}

impl From<PhaseShifter> for NetworkElement {
    fn from(ps: PhaseShifter) -> Self {
        NetworkElement::PhaseShifter(ps)
    }
}

/// Dense N×N scattering matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ScatteringMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ScatteringMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::default(); dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &ScatteringMatrix) -> Result<ScatteringMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = ScatteringMatrix {
            dim: n,
            entries: vec![Complex64::default(); n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let v = (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> ScatteringMatrix {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> ScatteringMatrix {
        ScatteringMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    /// `max |S†S - I|` over entries.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self
            .adjoint()
            .matmul(self)
            .expect("square matrix times its adjoint");
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod.get(i, j) - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_deviation() < UNITARITY_TOLERANCE
    }

    /// Largest entry-wise distance to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &ScatteringMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Scattering matrix of a single element embedded in `dim` modes.
    pub fn of_element(element: &NetworkElement, dim: usize) -> Result<ScatteringMatrix> {
        if element.max_mode() >= dim {
            return Err(Error::ModeIndex {
                index: element.max_mode(),
                modes: dim,
            });
        }
        let mut s = ScatteringMatrix::identity(dim);
        match element {
            NetworkElement::BeamSplitter(bs) => {
                let (i, j) = bs.modes;
                s.set(i, i, bs.t);
                s.set(i, j, bs.r_prime);
                s.set(j, i, bs.r);
                s.set(j, j, bs.t_prime);
            }
            NetworkElement::PhaseShifter(ps) => {
                s.set(ps.mode, ps.mode, Complex64::from_polar(1.0, ps.phase));
            }
        }
        Ok(s)
    }
}

impl fmt::Debug for ScatteringMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = (0..self.dim)
            .map(|i| &self.entries[i * self.dim..(i + 1) * self.dim])
            .collect();
        f.debug_struct("ScatteringMatrix")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

/// Product of the element matrices in application order (the last element is
/// the left-most factor).
pub fn compose_scattering(elements: &[NetworkElement], dim: usize) -> Result<ScatteringMatrix> {
    elements
        .iter()
        .try_fold(ScatteringMatrix::identity(dim), |acc, el| {
            ScatteringMatrix::of_element(el, dim)?.matmul(&acc)
        })
}

/// Elements of the folded Sagnac loop acting on modes `(0, 1)`: input
/// splitter, rotation phase on mode 1, output splitter (the same physical
/// splitter traversed twice).
pub fn sagnac_elements(phi: f64) -> Vec<NetworkElement> {
    sagnac_elements_on((0, 1), phi)
}

pub fn sagnac_elements_on(modes: (usize, usize), phi: f64) -> Vec<NetworkElement> {
    vec![
        BeamSplitter::balanced(modes).into(),
        PhaseShifter::new(modes.1, phi).into(),
        BeamSplitter::balanced(modes).into(),
    ]
}

/// Full 2×2 Sagnac scattering matrix, including its global phase.
pub fn sagnac_scattering(phi: f64) -> ScatteringMatrix {
    compose_scattering(&sagnac_elements(phi), 2).expect("two-mode Sagnac network")
}

/// The global phase `i e^{iφ/2}` factored out of [`sagnac_scattering`].
pub fn sagnac_global_phase(phi: f64) -> Complex64 {
    I * Complex64::from_polar(1.0, 0.5 * phi)
}

/// Real phase-stripped Sagnac matrix
/// `[[-sin(φ/2), cos(φ/2)], [cos(φ/2), sin(φ/2)]]`.
pub fn sagnac_scattering_stripped(phi: f64) -> ScatteringMatrix {
    let (s, c) = (0.5 * phi).sin_cos();
    let re = |v: f64| Complex64::new(v, 0.0);
    ScatteringMatrix {
        dim: 2,
        entries: vec![re(-s), re(c), re(c), re(s)],
    }
}

/// Eigenvectors of the real generator `a_j† a_i - a_i† a_j` on the block of
/// `N` photons, after the gauge `|p, N-p> -> i^p |p, N-p>` that makes it the
/// real symmetric tridiagonal matrix with off-diagonal `sqrt((p+1)(N-p))`.
///
/// Its spectrum is exactly `{-N, -N+2, ..., N}`, so eigenvalues are snapped to
/// integers. The basis does not depend on the splitter, only on `N`.
struct BlockEigenbasis {
    /// Column-major `(N+1)²`; column `k` is the eigenvector for `eigenvalues[k]`.
    vectors: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl BlockEigenbasis {
    fn compute(total: usize) -> Self {
        let len = total + 1;
        let generator = DMatrix::<f64>::from_fn(len, len, |a, b| {
            if a + 1 == b {
                ((b * (total - a)) as f64).sqrt()
            } else if b + 1 == a {
                ((a * (total - b)) as f64).sqrt()
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(generator);
        Self {
            vectors: eig.eigenvectors.as_slice().to_vec(),
            eigenvalues: eig.eigenvalues.iter().map(|l| l.round()).collect(),
        }
    }
}

fn block_eigenbasis(total: usize) -> Arc<BlockEigenbasis> {
    static CACHE: OnceLock<Mutex<Vec<Option<Arc<BlockEigenbasis>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if guard.len() <= total {
        guard.resize(total + 1, None);
    }
    guard[total]
        .get_or_insert_with(|| Arc::new(BlockEigenbasis::compute(total)))
        .clone()
}

/// A beam splitter acting on one fixed-photon-number block of its mode pair.
///
/// The 2×2 matrix is factored as `diag(e^{iα_i}, e^{iα_j}) · R(ϑ) · diag(e^{iβ_i}, e^{iβ_j})`
/// with `R` a real rotation. The rotation's block is applied through the
/// eigenbasis of its generator, which keeps every step orthogonal: expanding
/// `(t a_i† + r a_j†)^m (r' a_i† + t' a_j†)^n` directly, or building it one
/// creation operator at a time, loses all precision at a hundred-odd photons.
#[derive(Debug, Clone, Copy)]
pub struct PairEvolution {
    out_phases: (f64, f64),
    in_phases: (f64, f64),
    angle: f64,
}

impl PairEvolution {
    pub fn new(bs: &BeamSplitter) -> Self {
        let angle = bs.r.norm().atan2(bs.t.norm());
        let alpha_i = bs.t.arg();
        let alpha_j = bs.r.arg();
        let beta_j = if bs.t_prime.norm() >= bs.r_prime.norm() {
            bs.t_prime.arg() - alpha_j
        } else {
            (-bs.r_prime).arg() - alpha_i
        };
        Self {
            out_phases: (alpha_i, alpha_j),
            in_phases: (0.0, beta_j),
            angle,
        }
    }

    /// Maps `input[m]`, the amplitude of `|m, N-m>` with `N = input.len() - 1`,
    /// to the amplitudes of `|p, N-p>`.
    pub fn apply_block(&self, input: &[Complex64]) -> Vec<Complex64> {
        let len = input.len();
        if len == 0 {
            return Vec::new();
        }
        let total = len - 1;
        let phase = |(a, b): (f64, f64), p: usize| a * p as f64 + b * (total - p) as f64;
        let gauge = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];

        let mut v: Vec<Complex64> = input
            .iter()
            .enumerate()
            .map(|(m, a)| a * Complex64::from_polar(1.0, phase(self.in_phases, m)))
            .collect();
        if self.angle != 0.0 && total > 0 {
            let basis = block_eigenbasis(total);
            for (m, x) in v.iter_mut().enumerate() {
                *x *= gauge[(4 - m % 4) % 4];
            }
            let mut rotated = vec![Complex64::default(); len];
            for (column, lambda) in basis.vectors.chunks_exact(len).zip(&basis.eigenvalues) {
                let overlap: Complex64 = column.iter().zip(&v).map(|(w, x)| x * *w).sum();
                let c = overlap * Complex64::from_polar(1.0, self.angle * lambda);
                for (y, w) in rotated.iter_mut().zip(column) {
                    *y += c * *w;
                }
            }
            v = rotated;
            for (p, x) in v.iter_mut().enumerate() {
                *x *= gauge[p % 4];
            }
        }
        for (p, x) in v.iter_mut().enumerate() {
            *x *= Complex64::from_polar(1.0, phase(self.out_phases, p));
        }
        v
    }

    /// Amplitudes `<p, m+n-p| U |m, n>` for `p = 0..=m+n`.
    pub fn column(&self, m: usize, n: usize) -> Vec<Complex64> {
        let mut unit = vec![Complex64::default(); m + n + 1];
        unit[m] = Complex64::new(1.0, 0.0);
        self.apply_block(&unit)
    }
}

/// `<p, m+n-p| U |m, n>` by direct expansion of
/// `(t a_i† + r a_j†)^m (r' a_i† + t' a_j†)^n / sqrt(m! n!)`.
///
/// Exact in exact arithmetic but numerically unstable for large photon
/// numbers; kept as an independent route for small blocks.
pub fn binomial_pair_amplitudes(bs: &BeamSplitter, m: usize, n: usize) -> Vec<Complex64> {
    let total = m + n;
    let ln_factorial: Vec<f64> = std::iter::once(0.0)
        .chain((1..=total).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let binomial = |n: usize, k: usize| {
        (ln_factorial[n] - ln_factorial[k] - ln_factorial[n - k])
            .exp()
            .round()
    };
    let first: Vec<Complex64> = (0..=m)
        .map(|k| bs.t.powu(k as u32) * bs.r.powu((m - k) as u32) * binomial(m, k))
        .collect();
    let second: Vec<Complex64> = (0..=n)
        .map(|l| bs.r_prime.powu(l as u32) * bs.t_prime.powu((n - l) as u32) * binomial(n, l))
        .collect();
    let mut out = vec![Complex64::default(); total + 1];
    for (k, a) in first.iter().enumerate() {
        for (l, b) in second.iter().enumerate() {
            out[k + l] += a * b;
        }
    }
    for (p, v) in out.iter_mut().enumerate() {
        let q = total - p;
        *v *= (0.5 * (ln_factorial[p] + ln_factorial[q] - ln_factorial[m] - ln_factorial[n])).exp();
    }
    out
}

fn check_modes(state: &PureState, element: &NetworkElement) -> Result<()> {
    let modes = state.modes();
    match element {
        NetworkElement::BeamSplitter(bs) => {
            state.basis().check_mode(bs.modes.0)?;
            state.basis().check_mode(bs.modes.1)?;
            if bs.modes.0 == bs.modes.1 {
                return Err(Error::Domain("beam splitter needs two distinct modes".into()));
            }
        }
        NetworkElement::PhaseShifter(ps) => {
            if ps.mode >= modes {
                return Err(Error::ModeIndex {
                    index: ps.mode,
                    modes,
                });
            }
        }
    }
    Ok(())
}

/// Applies one element to a state (Schrödinger picture).
///
/// A beam splitter maps the pair occupation `(m, n)` to
/// `(t a_i† + r a_j†)^m (r' a_i† + t' a_j†)^n / sqrt(m! n!)` acting on the
/// pair vacuum, tensored with the untouched modes; see [`PairEvolution`].
pub fn apply_element(state: &PureState, element: &NetworkElement) -> Result<PureState> {
    check_modes(state, element)?;
    let mut out = match element {
        NetworkElement::PhaseShifter(ps) => apply_phase(state, ps),
        NetworkElement::BeamSplitter(bs) => apply_beam_splitter(state, bs),
    };
    out.prune(PRUNE_THRESHOLD);
    Ok(out)
}

fn apply_phase(state: &PureState, ps: &PhaseShifter) -> PureState {
    let amplitudes = state
        .iter()
        .map(|(occ, a)| {
            let n = occ.get(ps.mode) as f64;
            (occ.clone(), a * Complex64::from_polar(1.0, ps.phase * n))
        })
        .collect();
    PureState::from_map_unchecked(state.basis(), amplitudes)
}

fn apply_beam_splitter(state: &PureState, bs: &BeamSplitter) -> PureState {
    let (i, j) = bs.modes;
    let evolution = PairEvolution::new(bs);

    // Group amplitudes by spectator occupation and pair photon number.
    let mut blocks: BTreeMap<(OccupationVector, usize), Vec<Complex64>> = BTreeMap::new();
    for (occ, amp) in state.iter() {
        let m = occ.get(i) as usize;
        let total = m + occ.get(j) as usize;
        let mut key = occ.clone();
        key.counts_mut()[i] = 0;
        key.counts_mut()[j] = 0;
        blocks
            .entry((key, total))
            .or_insert_with(|| vec![Complex64::default(); total + 1])[m] = *amp;
    }

    let mut out: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
    for ((mut target, total), input) in blocks {
        for (p, c) in evolution.apply_block(&input).into_iter().enumerate() {
            let counts = target.counts_mut();
            counts[i] = p as u32;
            counts[j] = (total - p) as u32;
            out.insert(target.clone(), c);
        }
    }
    PureState::from_map_unchecked(state.basis(), out)
}

/// Left fold of [`apply_element`] over the network.
pub fn evolve_network(state: &PureState, elements: &[NetworkElement]) -> Result<PureState> {
    let mut current = state.clone();
    for el in elements {
        current = apply_element(&current, el)?;
    }
    Ok(current)
}
