//! Barycentric entanglement, the worked state families and rigid rotations.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::state::{binomial, symmetrize, QubitState, SymmetricState};
use crate::stellar::{state_to_stars, Constellation, Star};

/// Mean of the star unit vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barycenter {
    pub vector: [f64; 3],
    /// Length of `vector`.
    pub radius: f64,
}

pub fn barycenter(c: &Constellation) -> Barycenter {
    let n = c.n() as f64;
    let mut v = [0.0; 3];
    for s in c.stars() {
        for (acc, x) in v.iter_mut().zip(s.vector()) {
            *acc += x;
        }
    }
    let vector = v.map(|x| x / n);
    let radius = (vector[0] * vector[0] + vector[1] * vector[1] + vector[2] * vector[2]).sqrt().min(1.0);
    Barycenter { vector, radius }
}

/// `E_B = 1 - d^2` of a constellation.
pub fn e_b_constellation(c: &Constellation) -> f64 {
    let d = barycenter(c).radius;
    (1.0 - d * d).clamp(0.0, 1.0)
}

/// `E_B` of a state, through its stars.
pub fn e_b(state: &SymmetricState) -> Result<f64> {
    Ok(e_b_constellation(&state_to_stars(state)?))
}

/// GHZ state `(|0...0> + |1...1>)/sqrt(2)`.
pub fn ghz_state(n: usize) -> Result<SymmetricState> {
    let mut d = vec![Complex64::new(0.0, 0.0); n + 1];
    d[0] = Complex64::new(1.0, 0.0);
    d[n] += Complex64::new(1.0, 0.0);
    SymmetricState::from_dicke(d)
}

/// `|0> ⊙ (cos θ/2 |0> + sin θ/2 |1>)`.
pub fn two_qubit_family(theta: f64) -> Result<SymmetricState> {
    symmetrize(&[QubitState::zero(), QubitState::new(theta, 0.0)])
}

/// `|0> ⊙ (cos θ/2 |0> - sin θ/2 |1>) ⊙ (cos θ/2 |0> + sin θ/2 |1>)`.
pub fn three_qubit_family(theta: f64) -> Result<SymmetricState> {
    symmetrize(&[QubitState::zero(), QubitState::new(theta, PI), QubitState::new(theta, 0.0)])
}

/// The four stars at the corners of a rectangle through the sphere's center:
/// `(θ, Φ)`, `(θ, Φ + π)`, `(π - θ, 0)`, `(π - θ, π)`.
pub fn rec_family_qubits(theta: f64, phi: f64) -> [QubitState; 4] {
    [
        QubitState::new(theta, phi),
        QubitState::new(theta, phi + PI),
        QubitState::new(PI - theta, 0.0),
        QubitState::new(PI - theta, PI),
    ]
}

/// Four-qubit state with `E_B = 1` for every `θ ∈ [0, π/2]`, `Φ ∈ [0, π]`.
pub fn rec_family_state(theta: f64, phi: f64) -> Result<SymmetricState> {
    symmetrize(&rec_family_qubits(theta, phi))
}

/// Regular tetrahedron constellation, the member `θ = acos(1/sqrt(3))`,
/// `Φ = π/2` of the rectangle family.
pub fn tetrahedron_state() -> Result<SymmetricState> {
    rec_family_state((1.0 / 3f64.sqrt()).acos(), PI / 2.0)
}

/// The SU(2) matrix `cos(α/2) I - i sin(α/2) k·σ`, rows `[[u00, u01], [u10, u11]]`.
pub fn rotation_matrix(axis: &Star, angle: f64) -> [[Complex64; 2]; 2] {
    let [kx, ky, kz] = axis.vector();
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [Complex64::new(c, -s * kz), Complex64::new(-s * ky, -s * kx)],
        [Complex64::new(s * ky, -s * kx), Complex64::new(c, s * kz)],
    ]
}

/// Applies the same single-qubit rotation to every tensor factor, which
/// rotates every star by `angle` about `axis`.
///
/// Works on the amplitude polynomial `Σ sqrt(C(n,k)) d_k x^{n-k} y^k`, where
/// the rotation acts by the linear substitution `x -> u00 x + u10 y`,
/// `y -> u01 x + u11 y`.
pub fn rotate_state(state: &SymmetricState, axis: &Star, angle: f64) -> Result<SymmetricState> {
    let n = state.n();
    let u = rotation_matrix(axis, angle);
    // powers[j] = coefficients of (u00 x + u10 y)^j, ascending in y
    let powers = |a: Complex64, b: Complex64| {
        let mut out = vec![vec![Complex64::new(1.0, 0.0)]];
        for j in 0..n {
            let prev = &out[j];
            let mut next = vec![Complex64::new(0.0, 0.0); prev.len() + 1];
            for (i, c) in prev.iter().enumerate() {
                next[i] += c * a;
                next[i + 1] += c * b;
            }
            out.push(next);
        }
        out
    };
    let xs = powers(u[0][0], u[1][0]);
    let ys = powers(u[0][1], u[1][1]);
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, d) in state.dicke().iter().enumerate() {
        if *d == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = d * binomial(n, k).sqrt();
        let (px, py) = (&xs[n - k], &ys[k]);
        for (i, a) in px.iter().enumerate() {
            for (j, b) in py.iter().enumerate() {
                out[i + j] += w * a * b;
            }
        }
    }
    for (k, c) in out.iter_mut().enumerate() {
        *c /= binomial(n, k).sqrt();
    }
    SymmetricState::from_dicke(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::dicke_state;

    #[test]
    fn dicke_barycenter_radius() {
        let c = state_to_stars(&dicke_state(10, 3).unwrap()).unwrap();
        assert!((barycenter(&c).radius - 0.4).abs() < 1e-15);
    }

    #[test]
    fn families_at_named_points() {
        assert!((e_b(&two_qubit_family(2.0 * PI / 3.0).unwrap()).unwrap() - 0.75).abs() < 1e-14);
        assert!((e_b(&three_qubit_family(2.0 * PI / 3.0).unwrap()).unwrap() - 1.0).abs() < 1e-14);
        let w4 = rec_family_state(0.0, 0.0).unwrap();
        assert!(w4.fidelity(&dicke_state(4, 2).unwrap()) > 1.0 - 1e-14);
        // the square on the equator is GHZ_4 turned by π/4 about z, i.e.
        // (|0000> - |1111>)/sqrt(2)
        let square = rec_family_state(PI / 2.0, PI / 2.0).unwrap();
        let ghz = rotate_state(&ghz_state(4).unwrap(), &Star::NORTH, PI / 4.0).unwrap();
        assert!(square.fidelity(&ghz) > 1.0 - 1e-14);
        let d = square.dicke();
        assert!((d[0] + d[4]).norm() < 1e-15 && d[1..4].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn rotation_about_z_is_a_phase_per_dicke_component() {
        let s = SymmetricState::from_dicke(vec![
            Complex64::new(0.5, 0.1),
            Complex64::new(-0.2, 0.4),
            Complex64::new(0.3, -0.6),
        ])
        .unwrap();
        let r = rotate_state(&s, &Star::NORTH, 0.9).unwrap();
        // exp(-i α Z/2) on each factor multiplies d_k by exp(-i α (n - 2k)/2)
        let expected: Vec<Complex64> = s
            .dicke()
            .iter()
            .enumerate()
            .map(|(k, d)| d * Complex64::from_polar(1.0, -0.9 * (2.0 - 2.0 * k as f64) / 2.0))
            .collect();
        assert!(r.fidelity(&SymmetricState::from_dicke(expected).unwrap()) > 1.0 - 1e-14);
    }

    #[test]
    fn rotation_moves_stars() {
        let s = dicke_state(3, 1).unwrap();
        let axis = Star::from_angles(PI / 2.0, PI / 2.0);
        let r = rotate_state(&s, &axis, PI / 2.0).unwrap();
        let stars = state_to_stars(&r).unwrap();
        // north -> +x and south -> -x under a quarter turn about +y
        let on_x = stars.stars().iter().filter(|s| (s.vector()[0] - 1.0).abs() < 1e-12).count();
        let on_minus_x = stars.stars().iter().filter(|s| (s.vector()[0] + 1.0).abs() < 1e-12).count();
        assert_eq!((on_x, on_minus_x), (2, 1));
    }
}
