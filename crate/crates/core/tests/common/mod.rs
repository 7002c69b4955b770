//! Invariant battery shared by the per-property tests and the timed
//! acceptance run. Every property uses a deterministic proptest runner.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use sagnac_core::detection::{self, DetectionScheme, SchemeKind};
use sagnac_core::moments::{oracle_g2, squeezed_input_moments, transform_moments};
use sagnac_core::network::{
    apply_element, compose_scattering, evolve_network, sagnac_elements, sagnac_global_phase,
    BeamSplitter, NetworkElement, PhaseShifter,
};
use sagnac_core::sagnac::{classical_fringe, round_trip_delay, rotation_phase, ClassicalField, RotationParameters};
use sagnac_core::sources::{
    entanglement_entropy, pair_subspace_state, squeezed_state, truncation_tail, SqueezedSourceParams,
};
use sagnac_core::{FockBasis, OccupationVector, PureState};

pub const MODES: usize = 3;
pub const CUTOFF: usize = 4;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    if let Err(e) = runner(cases).run(&strategy, test) {
        panic!("{e}");
    }
}

/// Arbitrary U(2) splitter `[[t, r'], [r, t']]` with `t' = e^{iδ} t*`, `r' = -e^{iδ} r*`.
pub fn splitter(modes: (usize, usize)) -> impl Strategy<Value = BeamSplitter> {
    (0.0..=1.0f64, -PI..PI, -PI..PI, -PI..PI).prop_map(move |(tau, a, b, d)| {
        let t = Complex64::from_polar(tau.sqrt(), a);
        let r = Complex64::from_polar((1.0 - tau).sqrt(), b);
        let e = Complex64::from_polar(1.0, d);
        BeamSplitter::new(t, r, e * t.conj(), -e * r.conj(), modes).expect("unitary by construction")
    })
}

pub fn element(modes: usize) -> impl Strategy<Value = NetworkElement> {
    let pair = (0..modes, 1..modes).prop_map(move |(i, k)| (i, (i + k) % modes));
    prop_oneof![
        pair.prop_flat_map(splitter).prop_map(NetworkElement::from),
        (0..modes, -TAU..TAU).prop_map(|(m, p)| PhaseShifter::new(m, p).into()),
    ]
}

pub fn network(modes: usize) -> impl Strategy<Value = Vec<NetworkElement>> {
    prop::collection::vec(element(modes), 0..6)
}

/// Normalized superposition of random occupations in `(MODES, CUTOFF)`.
pub fn state() -> impl Strategy<Value = PureState> {
    let basis = FockBasis::new(MODES, CUTOFF).unwrap();
    let occupations: Vec<OccupationVector> = basis.iter().collect();
    let n = occupations.len();
    prop::collection::vec((0..n, -1.0..1.0f64, -1.0..1.0f64), 1..8).prop_map(move |terms| {
        let mut amps = vec![Complex64::default(); n];
        for (k, re, im) in terms {
            amps[k] += Complex64::new(re, im);
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = if norm > 1e-6 {
            amps.iter().map(|a| a / norm).collect()
        } else {
            let mut v = vec![Complex64::default(); n];
            v[0] = Complex64::new(1.0, 0.0);
            v
        };
        PureState::from_amplitudes(basis, occupations.iter().cloned().zip(amps)).unwrap()
    })
}

fn close(a: f64, b: f64, tol: f64) -> Result<(), TestCaseError> {
    prop_assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol:e})");
    Ok(())
}

pub fn scattering_unitarity() {
    check(200, network(4), |net| {
        let s = compose_scattering(&net, 4).unwrap();
        prop_assert!(s.unitarity_deviation() < 1e-12, "{}", s.unitarity_deviation());
        Ok(())
    });
}

/// Images of all basis states stay orthonormal.
pub fn fock_unitarity() {
    let basis = FockBasis::new(MODES, CUTOFF).unwrap();
    let inputs: Vec<PureState> = basis.iter().map(|o| PureState::fock(basis, o).unwrap()).collect();
    check(24, network(MODES), |net| {
        let outs: Vec<PureState> = inputs.iter().map(|s| evolve_network(s, &net).unwrap()).collect();
        for (a, sa) in outs.iter().enumerate() {
            for sb in &outs[a..] {
                let dot: Complex64 = sb.iter().map(|(o, v)| sa.amplitude(o).conj() * v).sum();
                let target = if std::ptr::eq(sa, sb) { 1.0 } else { 0.0 };
                prop_assert!((dot - target).norm() < 1e-12, "{dot}");
            }
        }
        Ok(())
    });
}

pub fn norm_and_number_conservation() {
    check(150, (state(), network(MODES)), |(mut s, net)| {
        for el in &net {
            let out = apply_element(&s, el).unwrap();
            close(out.norm(), s.norm(), 1e-12)?;
            let (a, b) = (s.photon_number_distribution(), out.photon_number_distribution());
            for n in 0..=CUTOFF {
                close(*a.get(&n).unwrap_or(&0.0), *b.get(&n).unwrap_or(&0.0), 1e-12)?;
            }
            prop_assert!(out.iter().all(|(o, _)| o.total() <= CUTOFF));
            s = out;
        }
        Ok(())
    });
}

/// Single-photon amplitudes equal the columns of the composed scattering matrix.
pub fn heisenberg_schroedinger_agreement() {
    check(100, (network(MODES), 0..MODES), |(net, k)| {
        let s = compose_scattering(&net, MODES).unwrap();
        let mut occ = vec![0u32; MODES];
        occ[k] = 1;
        let basis = FockBasis::new(MODES, 1).unwrap();
        let out = evolve_network(&PureState::fock(basis, OccupationVector::new(&occ)).unwrap(), &net).unwrap();
        for j in 0..MODES {
            let mut target = vec![0u32; MODES];
            target[j] = 1;
            let amp = out.amplitude(&OccupationVector::new(&target));
            prop_assert!((amp - s.get(j, k)).norm() < 1e-12);
        }
        Ok(())
    });
}

fn observables(s: &PureState) -> Vec<f64> {
    let mut v: Vec<f64> = (0..s.modes()).map(|m| s.number_expectation(m).unwrap()).collect();
    for i in 0..s.modes() {
        for j in i + 1..s.modes() {
            v.push(s.pair_correlator(i, j).unwrap());
        }
    }
    v.extend(s.basis().iter().map(|o| s.projection_probability(&o).unwrap()));
    v
}

/// A global phase on the input, or the Sagnac loop's common phase on every
/// mode, changes no observable.
pub fn global_phase_unobservable() {
    check(100, (state(), -PI..PI, -TAU..TAU), |(s, alpha, phi)| {
        let base = observables(&s);
        for (a, b) in base.iter().zip(observables(&s.with_global_phase(alpha))) {
            close(*a, b, 1e-12)?;
        }
        let full = evolve_network(&s, &sagnac_elements(phi)).unwrap();
        let strip = -sagnac_global_phase(phi).arg();
        let mut stripped_net = sagnac_elements(phi);
        stripped_net.extend((0..MODES.min(2)).map(|m| NetworkElement::from(PhaseShifter::new(m, strip))));
        let stripped = evolve_network(&s, &stripped_net).unwrap();
        for (a, b) in observables(&full).iter().zip(observables(&stripped)) {
            close(*a, b, 1e-12)?;
        }
        Ok(())
    });
}

pub fn fock_state_bookkeeping() {
    let basis = FockBasis::new(MODES, CUTOFF).unwrap();
    let first: Vec<OccupationVector> = basis.iter().collect();
    let second: Vec<OccupationVector> = basis.iter().collect();
    assert_eq!(first, second);
    check(100, state(), |s| {
        let total: f64 = basis.iter().map(|o| s.projection_probability(&o).unwrap()).sum();
        close(total, 1.0, 1e-12)?;
        for i in 0..MODES {
            for j in 0..MODES {
                if i != j {
                    close(s.pair_correlator(i, j).unwrap(), s.pair_correlator(j, i).unwrap(), 1e-14)?;
                    prop_assert!(s.pair_correlator(i, j).unwrap() >= 0.0);
                }
            }
        }
        Ok(())
    });
}

pub fn classical_kinematics() {
    check(200, (0.0..10.0f64, -TAU..TAU), |(amp, phi)| {
        let field = ClassicalField::new(Complex64::new(amp, 0.0), 1.0);
        let (i1, i2) = classical_fringe(&field, phi);
        close(i1 + i2, amp * amp, 1e-14 * (1.0 + amp * amp))?;
        let (j1, _) = classical_fringe(&field, phi + TAU);
        close(i1, j1, 1e-12 * (1.0 + amp * amp))?;
        Ok(())
    });
    check(200, (0.01..10.0f64, 1e-6..10.0f64, 1e-7..2e-6f64, 0.0..1e4f64), |(radius, omega, lambda, length)| {
        let p = RotationParameters::new(radius, omega, lambda).with_fiber_length(length);
        let phi = rotation_phase(&p).unwrap();
        let neg = rotation_phase(&RotationParameters { angular_velocity: -omega, ..p }).unwrap();
        close(neg, -phi, 1e-15 * phi.abs())?;
        let doubled = rotation_phase(&RotationParameters { angular_velocity: 2.0 * omega, ..p }).unwrap();
        close(doubled, 2.0 * phi, 1e-14 * phi.abs())?;
        if length > 0.0 {
            let longer = rotation_phase(&p.with_fiber_length(3.0 * length)).unwrap();
            close(longer, 3.0 * phi, 1e-14 * phi.abs())?;
        }
        Ok(())
    });
    // β = RΩ/c up to 0.01
    check(200, (0.1..10.0f64, 0.0..0.01f64), |(radius, beta)| {
        let c = sagnac_core::sagnac::SPEED_OF_LIGHT;
        let p = RotationParameters::new(radius, beta * c / radius, 1e-6);
        let exact = round_trip_delay(&p, true).unwrap();
        let approx = round_trip_delay(&p, false).unwrap();
        if exact != 0.0 {
            prop_assert!(((exact - approx) / exact).abs() <= 2.0 * beta * beta + 1e-15);
        }
        Ok(())
    });
}

pub fn squeezed_source_structure() {
    check(100, (0.0..1.5f64, -PI..PI, 0usize..60), |(r, theta, n_cut)| {
        let p = SqueezedSourceParams::new(r, theta, n_cut, 0.999_999).unwrap();
        if p.tail() > p.tail_tolerance {
            return Ok(());
        }
        let s = squeezed_state(&p, 2).unwrap();
        close(s.norm_sqr() + truncation_tail(r, n_cut), 1.0, 1e-14)?;
        close(s.number_expectation(0).unwrap(), s.number_expectation(1).unwrap(), 1e-15)?;
        prop_assert!(s.iter().all(|(o, _)| o.get(0) == o.get(1)));
        let e = entanglement_entropy(r).unwrap();
        prop_assert!(e >= 0.0);
        prop_assert!(entanglement_entropy(r + 0.01).unwrap() > e);
        Ok(())
    });
}

/// Scalar outputs of every scheme for a squeezed input.
fn squeezed_observables(r: f64, theta: f64, phi: f64, tail_eps: f64) -> Vec<f64> {
    let s = squeezed_state(&SqueezedSourceParams::auto(r, theta, tail_eps).unwrap(), 2).unwrap();
    let (n1, n2) = detection::single_counts(&s, phi).unwrap();
    let mut v = vec![n1, n2, detection::coincidence_12(&s, phi).unwrap(), detection::g2_normalized(&s, phi).unwrap()];
    let small = pair_subspace_state(r, theta, 2, 2).unwrap();
    for kind in [SchemeKind::P2Projective, SchemeKind::P4TwoByTwo, SchemeKind::P4ThreeByOne] {
        v.push(DetectionScheme::new(kind).evaluate(&small, phi).unwrap());
    }
    v
}

pub fn theta_independence() {
    check(12, (0.1..1.0f64, -TAU..TAU), |(r, phi)| {
        let base = squeezed_observables(r, 0.0, phi, 1e-8);
        for theta in [PI / 3.0, PI] {
            for (a, b) in base.iter().zip(squeezed_observables(r, theta, phi, 1e-8)) {
                close(*a, b, 1e-12 * (1.0 + a.abs()))?;
            }
        }
        for theta in [0.0, PI / 3.0, PI] {
            close(oracle_g2(r, theta, phi).unwrap(), oracle_g2(r, 0.0, phi).unwrap(), 1e-12)?;
        }
        // every probability in [0, 1], every correlator non-negative
        prop_assert!(base.iter().all(|v| *v >= -1e-15));
        prop_assert!(base[4..].iter().all(|v| *v <= 1.0));
        Ok(())
    });
}

/// `max |f(φ) - f(φ + T)|` on a grid, for each scheme's fringe period.
pub fn period_hierarchy() {
    let fock10 = PureState::fock(FockBasis::new(2, 1).unwrap(), [1u32, 0]).unwrap();
    let fock11 = PureState::fock(FockBasis::new(2, 2).unwrap(), [1u32, 1]).unwrap();
    let squeezed = squeezed_state(&SqueezedSourceParams::auto(0.8, 0.0, 1e-8).unwrap(), 2).unwrap();
    let small = pair_subspace_state(0.8, 0.0, 2, 2).unwrap();
    type Fringe<'a> = (&'a str, Box<dyn Fn(f64) -> f64 + 'a>, f64);
    let fringes: Vec<Fringe> = vec![
        ("single photon", Box::new(|p| detection::single_counts(&fock10, p).unwrap().0), TAU),
        ("coincidence", Box::new(|p| detection::coincidence_12(&fock11, p).unwrap()), PI),
        ("g2", Box::new(|p| detection::g2_normalized(&squeezed, p).unwrap()), PI),
        ("p2", Box::new(|p| detection::p2_projective(&small, p).unwrap()), PI),
        (
            "p4 3x1",
            Box::new(|p| DetectionScheme::new(SchemeKind::P4ThreeByOne).evaluate(&small, p).unwrap()),
            FRAC_PI_2,
        ),
    ];
    for (name, f, period) in &fringes {
        for k in 0..48 {
            let phi = k as f64 * TAU / 48.0;
            let d = (f(phi) - f(phi + period)).abs();
            assert!(d < 1e-10, "{name}: period {period} broken at {phi}: {d:e}");
        }
    }
}

pub fn moment_transforms() {
    check(100, (network(4), 0.0..1.5f64, -PI..PI), |(net, r, theta)| {
        let m = squeezed_input_moments(r, theta, 4).unwrap();
        let out = transform_moments(&compose_scattering(&net, 4).unwrap(), &m).unwrap();
        prop_assert!(out.symmetry_deviation() < 1e-12);
        close(out.total_photon_number(), m.total_photon_number(), 1e-12 * (1.0 + m.total_photon_number()))?;
        Ok(())
    });
}

/// Fock simulation against the truncation-free moment oracle, within ten
/// times the analytic truncation bound of `g²`.
pub fn oracle_agreement() {
    for r in [0.3, 1.0, 1.39] {
        let p = SqueezedSourceParams::auto(r, 0.0, 1e-8).unwrap();
        let s = squeezed_state(&p, 2).unwrap();
        let bound = detection::g2_truncation_bound(r, p.pair_cutoff);
        for k in 0..25 {
            let phi = k as f64 * TAU / 24.0;
            let sim = detection::g2_normalized(&s, phi).unwrap();
            let oracle = oracle_g2(r, 0.0, phi).unwrap();
            assert!((sim - oracle).abs() <= 10.0 * bound, "r={r} phi={phi}: {:e} > {:e}", (sim - oracle).abs(), 10.0 * bound);
        }
    }
}

pub fn all() {
    scattering_unitarity();
    fock_unitarity();
    norm_and_number_conservation();
    heisenberg_schroedinger_agreement();
    global_phase_unobservable();
    fock_state_bookkeeping();
    classical_kinematics();
    squeezed_source_structure();
    theta_independence();
    period_hierarchy();
    moment_transforms();
    oracle_agreement();
}
