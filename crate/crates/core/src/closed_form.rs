//! Closed-form fringe expressions for each detection scheme.

/// Classical port-1 intensity for unit input intensity, `sin²(φ/2)`.
pub fn classical_port1(phi: f64) -> f64 {
    (0.5 * phi).sin().powi(2)
}

/// Classical port-2 intensity for unit input intensity, `cos²(φ/2)`.
pub fn classical_port2(phi: f64) -> f64 {
    (0.5 * phi).cos().powi(2)
}

/// `<b_1† b_1>` for a single photon in input port 1.
pub fn single_photon_port1(phi: f64) -> f64 {
    classical_port1(phi)
}

pub fn single_photon_port2(phi: f64) -> f64 {
    classical_port2(phi)
}

/// `<b_1† b_2† b_2 b_1>` for the input `|1,1>`: `cos² φ`.
pub fn two_photon_coincidence(phi: f64) -> f64 {
    phi.cos().powi(2)
}

/// Single counts at either output for the squeezed vacuum: `sinh² r`.
pub fn squeezed_single_counts(r: f64) -> f64 {
    r.sinh().powi(2)
}

/// Unnormalized coincidence `<b_1† b_2† b_2 b_1>` for the squeezed vacuum:
/// `sinh⁴ r + cos² φ sinh² r cosh² r`.
pub fn squeezed_coincidence(r: f64, phi: f64) -> f64 {
    let s2 = r.sinh().powi(2);
    let c2 = r.cosh().powi(2);
    s2 * s2 + phi.cos().powi(2) * s2 * c2
}

/// `g²_12 = cos² φ coth² r`.
pub fn g2(r: f64, phi: f64) -> f64 {
    phi.cos().powi(2) / r.tanh().powi(2)
}

/// Probability of one photon at each output: `tanh² r / cosh² r · cos² φ`.
pub fn p2(r: f64, phi: f64) -> f64 {
    r.tanh().powi(2) / r.cosh().powi(2) * phi.cos().powi(2)
}

/// Four-fold coincidence with one ancilla splitter per output:
/// `tanh⁴ r / cosh² r · |t₁ t₂ r₁ r₂|² · ¼ [1 + 3 cos 2φ]²`.
///
/// `t1_sq`, `t2_sq` are the power transmittances `|t_i|²`.
pub fn p4_2x2(r: f64, phi: f64, t1_sq: f64, t2_sq: f64) -> f64 {
    let coeff = t1_sq * (1.0 - t1_sq) * t2_sq * (1.0 - t2_sq);
    let bracket = 1.0 + 3.0 * (2.0 * phi).cos();
    r.tanh().powi(4) / r.cosh().powi(2) * coeff * 0.25 * bracket * bracket
}

/// Four-fold coincidence with three detectors cascaded on output 1:
/// `tanh⁴ r / cosh² r · |t₁² t₂ r₁ r₂|² · (9/4) sin² 2φ`.
pub fn p4_3x1(r: f64, phi: f64, t1_sq: f64, t2_sq: f64) -> f64 {
    let coeff = t1_sq * t1_sq * (1.0 - t1_sq) * t2_sq * (1.0 - t2_sq);
    r.tanh().powi(4) / r.cosh().powi(2) * coeff * 2.25 * (2.0 * phi).sin().powi(2)
}
