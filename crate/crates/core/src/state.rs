//! State algebra in the Dicke basis.
//!
//! A permutation-symmetric `n`-qubit pure state is stored as its `n + 1`
//! coefficients `d_k` on the Dicke states `|S_{n,k}>`, where `k` counts the
//! qubits in `|1>`. The same vector is read as a state of an `(n+1)`-level
//! system in the `|j, m>` basis with `j = n/2`, `k = n/2 - m`.
//!
//! Every constructor returns a normalized vector whose first non-negligible
//! coefficient is real and positive, so equal states compare equal up to
//! rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Result, StellarError};
use crate::permanent::{permanent, MAX_PERMANENT_ORDER};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients below this magnitude are skipped when fixing the global phase.
const PHASE_THRESHOLD: f64 = 1e-10;

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c.round()
}

/// Natural log of the binomial coefficient, usable for large `n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `(a, b)` pairs of the linear factors `a X + b Y`, multiplied out.
///
/// Returns `c_k`, the coefficient of `X^{m-k} Y^k` in the product of the `m`
/// factors.
pub(crate) fn homogeneous_product(factors: &[(Complex64, Complex64)]) -> Vec<Complex64> {
    // double-double accumulation: the expansion cancels heavily when the
    // factors are spread over the sphere
    type Dd = (TwoFloat, TwoFloat);
    fn mul_add(acc: &mut Dd, c: &Dd, f: Complex64) {
        acc.0 += c.0 * f.re - c.1 * f.im;
        acc.1 += c.0 * f.im + c.1 * f.re;
    }
    let zero = (TwoFloat::from(0.0), TwoFloat::from(0.0));
    let mut coeffs: Vec<Dd> = vec![(TwoFloat::from(1.0), TwoFloat::from(0.0))];
    for &(a, b) in factors {
        let mut next = vec![zero; coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            mul_add(&mut next[k], c, a);
            mul_add(&mut next[k + 1], c, b);
        }
        coeffs = next;
    }
    coeffs.iter().map(|(re, im)| Complex64::new(f64::from(*re), f64::from(*im))).collect()
}

/// Pure single-qubit state `cos(θ/2)|0> + e^{iΦ} sin(θ/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    theta: f64,
    phi: f64,
}

impl QubitState {
    /// Builds the state for arbitrary real angles, folding them onto
    /// `θ ∈ [0, π]`, `Φ ∈ [0, 2π)`. At the poles `Φ` is set to 0.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(2.0 * PI);
        let mut phi = phi;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        // rem_euclid rounds tiny negative inputs up to exactly 2π
        if phi >= 2.0 * PI || theta == 0.0 || theta == PI {
            phi = 0.0;
        }
        QubitState { theta, phi }
    }

    pub fn zero() -> Self {
        QubitState::new(0.0, 0.0)
    }

    pub fn one() -> Self {
        QubitState::new(PI, 0.0)
    }

    /// Recovers the angles from (not necessarily normalized) amplitudes.
    pub fn from_amplitudes(a: Complex64, b: Complex64) -> Result<Self> {
        let (na, nb) = (a.norm(), b.norm());
        if !(na.is_finite() && nb.is_finite()) || na + nb == 0.0 {
            return Err(StellarError::domain("QubitState::from_amplitudes", "zero or non-finite amplitudes"));
        }
        let theta = 2.0 * nb.atan2(na);
        let phi = if na == 0.0 || nb == 0.0 { 0.0 } else { b.arg() - a.arg() };
        Ok(QubitState::new(theta, phi))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(cos(θ/2), e^{iΦ} sin(θ/2))`.
    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        (Complex64::new(c, 0.0), Complex64::from_polar(s, self.phi))
    }

    /// Bloch vector `(sinθ cosΦ, sinθ sinΦ, cosθ)`.
    pub fn bloch(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// The orthogonal state, whose Bloch vector is the antipode.
    pub fn antipode(&self) -> Self {
        QubitState::new(PI - self.theta, self.phi + PI)
    }
}

/// Permutation-symmetric pure state in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    d: Vec<Complex64>,
}

impl SymmetricState {
    /// Normalizes `coeffs` (length `n + 1`, `n ≥ 1`) and fixes the phase.
    pub fn from_dicke(coeffs: Vec<Complex64>) -> Result<Self> {
        const OP: &str = "SymmetricState::from_dicke";
        if coeffs.len() < 2 {
            return Err(StellarError::domain(OP, "need at least two Dicke coefficients (n >= 1)"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(StellarError::domain(OP, "non-finite coefficient"));
        }
        let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
        if scale == 0.0 {
            return Err(StellarError::domain(OP, "zero state"));
        }
        // rescale first so the norm cannot overflow
        let mut d: Vec<Complex64> = coeffs.into_iter().map(|c| c / scale).collect();
        let norm = d.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let first = d.iter().find(|c| c.norm() / norm > PHASE_THRESHOLD).copied().unwrap_or(ONE);
        let phase = first.conj() / first.norm();
        for c in d.iter_mut() {
            *c = *c * phase / norm;
        }
        Ok(SymmetricState { d })
    }

    /// Number of qubits.
    pub fn n(&self) -> usize {
        self.d.len() - 1
    }

    pub fn dicke(&self) -> &[Complex64] {
        &self.d
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SymmetricState) -> Complex64 {
        self.d.iter().zip(&other.d).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|^2`, zero for states of different size.
    pub fn fidelity(&self, other: &SymmetricState) -> f64 {
        if self.n() != other.n() {
            return 0.0;
        }
        self.inner(other).norm_sqr()
    }

    /// Same state with every coefficient multiplied by `e^{iα}`, without
    /// re-applying the phase convention.
    pub fn with_global_phase(&self, alpha: f64) -> SymmetricState {
        let p = Complex64::from_polar(1.0, alpha);
        SymmetricState { d: self.d.iter().map(|c| c * p).collect() }
    }
}

/// The Dicke state `|S_{n,k}>`.
pub fn dicke_state(n: usize, k: usize) -> Result<SymmetricState> {
    if n == 0 || k > n {
        return Err(StellarError::domain("dicke_state", format!("need 1 <= n and 0 <= k <= n, got n={n}, k={k}")));
    }
    let mut d = vec![ZERO; n + 1];
    d[k] = ONE;
    SymmetricState::from_dicke(d)
}

/// Normalized symmetrization `K^{-1/2} Σ_π |φ_π(1)>…|φ_π(n)>` of single-qubit
/// states, computed in the Dicke basis without touching the `2^n` space.
///
/// The weight-`k` amplitude of the unnormalized sum is
/// `k!(n-k)! Σ_{|T|=k} Π_{i∈T} b_i Π_{i∉T} a_i`, so `d_k ∝ E_k / sqrt(C(n,k))`
/// with `E_k` the coefficient of `X^{n-k} Y^k` in `Π (a_i X + b_i Y)`.
pub fn symmetrize(parts: &[QubitState]) -> Result<SymmetricState> {
    if parts.is_empty() {
        return Err(StellarError::domain("symmetrize", "empty list of qubit states"));
    }
    let n = parts.len();
    let factors: Vec<_> = parts.iter().map(|q| q.amplitudes()).collect();
    let e = homogeneous_product(&factors);
    let d: Vec<Complex64> = e.iter().enumerate().map(|(k, c)| c / binomial(n, k).sqrt()).collect();
    SymmetricState::from_dicke(d).map_err(|_| StellarError::domain("symmetrize", "symmetrized vector has zero norm"))
}

/// Squared norm `K = n! perm(G)` of the unnormalized symmetrized vector,
/// `G_ij = <φ_i|φ_j>`.
///
/// The permanent of a Gram matrix is real and non-negative; the imaginary
/// rounding residue is dropped.
pub fn symmetrization_constant(parts: &[QubitState]) -> Result<f64> {
    let n = parts.len();
    if n == 0 {
        return Err(StellarError::domain("symmetrization_constant", "empty list of qubit states"));
    }
    if n > MAX_PERMANENT_ORDER {
        return Err(StellarError::resource(
            "symmetrization_constant",
            format!("n = {n} exceeds the permanent limit {MAX_PERMANENT_ORDER}"),
        ));
    }
    let amps: Vec<_> = parts.iter().map(|q| q.amplitudes()).collect();
    let mut gram = Vec::with_capacity(n * n);
    for &(ai, bi) in &amps {
        for &(aj, bj) in &amps {
            gram.push(ai.conj() * aj + bi.conj() * bj);
        }
    }
    let perm = permanent(n, &gram)?;
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    Ok(factorial * perm.re)
}

/// Spin coherent state: `n` copies of `center`, `d_k = sqrt(C(n,k)) a^{n-k} b^k`.
pub fn coherent_state(n: usize, center: &QubitState) -> Result<SymmetricState> {
    if n == 0 {
        return Err(StellarError::domain("coherent_state", "n must be at least 1"));
    }
    SymmetricState::from_dicke(coherent_coefficients(n, center))
}

fn coherent_coefficients(n: usize, center: &QubitState) -> Vec<Complex64> {
    let (a, b) = center.amplitudes();
    (0..=n).map(|k| a.powi((n - k) as i32) * b.powi(k as i32) * binomial(n, k).sqrt()).collect()
}

/// Husimi function `|<state|coherent(n, point)>|^2`.
pub fn husimi(state: &SymmetricState, point: &QubitState) -> f64 {
    let coh = coherent_coefficients(state.n(), point);
    let amp: Complex64 = state.dicke().iter().zip(&coh).map(|(d, c)| d.conj() * c).sum();
    amp.norm_sqr().min(1.0)
}

/// Dense `2^n` amplitude vector; qubit 0 is the most significant index bit.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    n: usize,
    amps: Vec<Complex64>,
}

impl FullState {
    /// Largest register accepted for dense amplitude vectors.
    pub const MAX_QUBITS: usize = 24;

    /// Normalizes the given amplitudes.
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        const OP: &str = "FullState::new";
        if n == 0 || n > Self::MAX_QUBITS {
            return Err(StellarError::domain(OP, format!("qubit count {n} outside 1..={}", Self::MAX_QUBITS)));
        }
        if amps.len() != 1 << n {
            return Err(StellarError::domain(OP, format!("expected {} amplitudes, got {}", 1usize << n, amps.len())));
        }
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(StellarError::domain(OP, "zero or non-finite state"));
        }
        Ok(FullState { n, amps: amps.into_iter().map(|c| c / norm).collect() })
    }

    /// Computational basis state for a bit string such as `"0110"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        if n == 0 || n > Self::MAX_QUBITS {
            return Err(StellarError::domain("FullState::basis", "bit string length outside 1..=24"));
        }
        let mut index = 0usize;
        for ch in bits.chars() {
            index = index << 1
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(StellarError::domain("FullState::basis", format!("invalid bit {ch:?}"))),
                };
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        FullState::new(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

/// Swaps bits `i` and `j` (qubit labels, MSB = qubit 0) of a basis index.
pub(crate) fn swap_qubits(index: usize, n: usize, i: usize, j: usize) -> usize {
    let (bi, bj) = (n - 1 - i, n - 1 - j);
    let (vi, vj) = ((index >> bi) & 1, (index >> bj) & 1);
    if vi == vj {
        index
    } else {
        index ^ (1 << bi) ^ (1 << bj)
    }
}

/// Spreads `d_k` uniformly over the weight-`k` bit strings.
pub fn embed_full(state: &SymmetricState) -> FullState {
    let n = state.n();
    let weights: Vec<Complex64> = state.dicke().iter().enumerate().map(|(k, d)| d / binomial(n, k).sqrt()).collect();
    let amps = (0..1usize << n).map(|x| weights[x.count_ones() as usize]).collect();
    FullState { n, amps }
}

/// Projection onto the symmetric subspace; fails when the state carries
/// more than `1e-8` of its weight outside it.
pub fn project_sym(full: &FullState) -> Result<SymmetricState> {
    const TOL: f64 = 1e-8;
    let n = full.n;
    let mut sums = vec![ZERO; n + 1];
    for (x, a) in full.amps.iter().enumerate() {
        sums[x.count_ones() as usize] += a;
    }
    let d: Vec<Complex64> = sums.iter().enumerate().map(|(k, s)| s / binomial(n, k).sqrt()).collect();
    let captured: f64 = d.iter().map(|c| c.norm_sqr()).sum();
    let deficit = (1.0 - captured).max(0.0);
    if deficit > TOL {
        return Err(StellarError::SymmetryViolation { op: "project_sym", deficit, tol: TOL });
    }
    SymmetricState::from_dicke(d)
}

/// Outcome of [`is_permutation_symmetric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    pub symmetric: bool,
    /// Largest amplitude change under any transposition of two qubits.
    pub deficit: f64,
}

/// Checks invariance of the amplitudes under all `n(n-1)/2` transpositions.
pub fn is_permutation_symmetric(full: &FullState, tol: f64) -> SymmetryReport {
    let n = full.n;
    let mut deficit = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            for (x, a) in full.amps.iter().enumerate() {
                let y = swap_qubits(x, n, i, j);
                if y > x {
                    deficit = deficit.max((a - full.amps[y]).norm());
                }
            }
        }
    }
    SymmetryReport { symmetric: deficit <= tol, deficit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(50, 25), 126410606437752.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert!((ln_binomial(50, 25) - 126410606437752.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn qubit_angles_are_canonical() {
        let q = QubitState::new(0.0, 1.3);
        assert_eq!(q.phi(), 0.0);
        let q = QubitState::new(-PI / 2.0, 0.0);
        assert!((q.theta() - PI / 2.0).abs() < 1e-15);
        assert!((q.phi() - PI).abs() < 1e-15);
        let q = QubitState::new(PI / 3.0, -0.5);
        assert!((q.phi() - (2.0 * PI - 0.5)).abs() < 1e-15);
        let (a, b) = QubitState::new(1.1, 2.2).amplitudes();
        let back =
            QubitState::from_amplitudes(a * Complex64::from_polar(3.0, 0.4), b * Complex64::from_polar(3.0, 0.4))
                .unwrap();
        assert!((back.theta() - 1.1).abs() < 1e-14 && (back.phi() - 2.2).abs() < 1e-14);
    }

    #[test]
    fn dicke_embeds_to_bell_and_product() {
        let bell = embed_full(&dicke_state(2, 1).unwrap());
        let expect = [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0];
        for (a, e) in bell.amplitudes().iter().zip(expect) {
            assert!(close(*a, Complex64::new(e, 0.0), 1e-15));
        }
        let ket000 = embed_full(&dicke_state(3, 0).unwrap());
        assert_eq!(ket000.amplitudes()[0], ONE);
        assert!(ket000.amplitudes()[1..].iter().all(|a| *a == ZERO));
        assert!(dicke_state(3, 4).is_err());
        assert!(dicke_state(0, 0).is_err());
    }

    #[test]
    fn symmetrize_examples() {
        let s = symmetrize(&[QubitState::zero(), QubitState::one()]).unwrap();
        assert!(close(s.dicke()[1], ONE, 1e-15) && s.dicke()[0].norm() < 1e-15);
        assert!((symmetrization_constant(&[QubitState::zero(), QubitState::one()]).unwrap() - 2.0).abs() < 1e-14);

        let s = symmetrize(&[QubitState::zero(), QubitState::zero()]).unwrap();
        assert_eq!(s, dicke_state(2, 0).unwrap());
        assert!((symmetrization_constant(&[QubitState::zero(), QubitState::zero()]).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn coherent_matches_symmetrized_copies() {
        for n in 1..8 {
            let c = QubitState::new(0.3 * n as f64, 1.7 * n as f64);
            let a = coherent_state(n, &c).unwrap();
            let b = symmetrize(&vec![c; n]).unwrap();
            assert!(a.fidelity(&b) > 1.0 - 1e-12);
            let norm: f64 = a.dicke().iter().map(|x| x.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!((husimi(&a, &c) - 1.0).abs() < 1e-12);
        }
        // n = 1 is the qubit itself
        let c = QubitState::new(0.9, 0.4);
        let s = coherent_state(1, &c).unwrap();
        let (a, b) = c.amplitudes();
        assert!(close(s.dicke()[0], a, 1e-15) && close(s.dicke()[1], b, 1e-15));
        assert_eq!(coherent_state(5, &QubitState::zero()).unwrap(), dicke_state(5, 0).unwrap());
    }

    #[test]
    fn husimi_of_dicke_matches_closed_form() {
        for (n, k) in [(2, 1), (4, 2), (7, 3), (10, 0)] {
            let s = dicke_state(n, k).unwrap();
            for (theta, phi) in [(0.3, 0.1), (1.2, 2.0), (2.9, 5.0)] {
                let (st, ct) = ((theta / 2.0_f64).sin(), (theta / 2.0_f64).cos());
                let expect = binomial(n, k) * ct.powi(2 * (n - k) as i32) * st.powi(2 * k as i32);
                assert!((husimi(&s, &QubitState::new(theta, phi)) - expect).abs() < 1e-14);
            }
        }
        let q = husimi(&dicke_state(2, 1).unwrap(), &QubitState::new(PI / 2.0, 0.7));
        assert!((q - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projection_round_trip_and_violation() {
        let s = SymmetricState::from_dicke(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.0, -0.4),
            Complex64::new(0.7, 0.2),
        ])
        .unwrap();
        let full = embed_full(&s);
        assert!(is_permutation_symmetric(&full, 1e-14).symmetric);
        let back = project_sym(&full).unwrap();
        for (a, b) in back.dicke().iter().zip(s.dicke()) {
            assert!(close(*a, *b, 1e-12));
        }

        let singlet = FullState::new(2, vec![ZERO, ONE, -ONE, ZERO]).unwrap();
        let report = is_permutation_symmetric(&singlet, 1e-12);
        assert!(!report.symmetric && report.deficit > 1.0);
        match project_sym(&singlet) {
            Err(StellarError::SymmetryViolation { deficit, .. }) => assert!((deficit - 1.0).abs() < 1e-12),
            other => panic!("expected symmetry violation, got {other:?}"),
        }
    }

    #[test]
    fn phase_convention_and_husimi_phase_invariance() {
        let s = SymmetricState::from_dicke(vec![ZERO, Complex64::new(0.0, 2.0), Complex64::new(1.0, 1.0)]).unwrap();
        assert!(s.dicke()[1].im.abs() < 1e-16 && s.dicke()[1].re > 0.0);
        let p = QubitState::new(1.0, 2.0);
        assert!((husimi(&s, &p) - husimi(&s.with_global_phase(1.234), &p)).abs() < 1e-15);
        assert!(SymmetricState::from_dicke(vec![ZERO, ZERO]).is_err());
        assert!(SymmetricState::from_dicke(vec![ONE]).is_err());
    }
}
