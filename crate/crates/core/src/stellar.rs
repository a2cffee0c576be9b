//! The Majorana map between symmetric states and constellations of stars.
//!
//! Convention: the state `|φ>^{⊗n}` has all `n` stars at the Bloch vector of
//! `|φ>`. A state's stars are the roots `(X:Y) = (e^{iΦ} sin θ/2 : cos θ/2)`
//! of the homogeneous Majorana polynomial
//!
//! ```text
//! H(X, Y) = Σ_k (-1)^k sqrt(C(n,k)) d_k X^{n-k} Y^k
//! ```
//!
//! so `|S_{n,k}>` has `n-k` stars at the north pole and `k` at the south
//! pole. The zeros of the Husimi function sit at the antipodes of the stars.
//!
//! Roots are found in whichever affine chart (`t = X/Y` near the north pole,
//! `s = Y/X` near the south pole) keeps the polynomial well scaled, and each
//! root is polished in the chart where it has modulus at most one.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StellarError};
use crate::roots::{horner, polynomial_roots, taylor_coefficient};
use crate::state::{binomial, homogeneous_product, QubitState, SymmetricState, ONE, ZERO};

/// Relative Taylor-coefficient threshold below which a group of nearby
/// roots is treated as one multiple root. The Taylor coefficients are
/// evaluated in double-double, so this only has to cover the few roundings
/// carried by the Dicke coefficients.
const MULTIPLICITY_TOL: f64 = 16.0 * f64::EPSILON;

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Star {
    v: [f64; 3],
}

impl Star {
    pub const NORTH: Star = Star { v: [0.0, 0.0, 1.0] };
    pub const SOUTH: Star = Star { v: [0.0, 0.0, -1.0] };

    pub fn from_angles(theta: f64, phi: f64) -> Star {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Star { v: [st * cp, st * sp, ct] }
    }

    /// Normalizes a nonzero vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Star> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(StellarError::domain("Star::from_vector", "zero or non-finite vector"));
        }
        Ok(Star { v: [v[0] / norm, v[1] / norm, v[2] / norm] })
    }

    /// Bloch vector of the qubit `a|0> + b|1>`; `(a, b)` need not be normalized.
    pub fn from_amplitudes(a: Complex64, b: Complex64) -> Star {
        let s = a.norm().max(b.norm());
        let (a, b) = (a / s, b / s);
        let n2 = a.norm_sqr() + b.norm_sqr();
        let ab = a.conj() * b;
        Star { v: [2.0 * ab.re / n2, 2.0 * ab.im / n2, (a.norm_sqr() - b.norm_sqr()) / n2] }
    }

    pub fn from_qubit(q: &QubitState) -> Star {
        Star::from_angles(q.theta(), q.phi())
    }

    pub fn vector(&self) -> [f64; 3] {
        self.v
    }

    /// Polar angle in `[0, π]`.
    pub fn theta(&self) -> f64 {
        self.v[0].hypot(self.v[1]).atan2(self.v[2])
    }

    /// Azimuth in `[0, 2π)`, zero at the poles.
    pub fn phi(&self) -> f64 {
        if self.v[0] == 0.0 && self.v[1] == 0.0 {
            return 0.0;
        }
        let p = self.v[1].atan2(self.v[0]).rem_euclid(2.0 * PI);
        if p >= 2.0 * PI {
            0.0
        } else {
            p
        }
    }

    pub fn qubit(&self) -> QubitState {
        QubitState::new(self.theta(), self.phi())
    }

    pub fn antipode(&self) -> Star {
        Star { v: [-self.v[0], -self.v[1], -self.v[2]] }
    }

    /// Great-circle distance in radians.
    pub fn geodesic(&self, other: &Star) -> f64 {
        let [a1, a2, a3] = self.v;
        let [b1, b2, b3] = other.v;
        let cross = [a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1];
        let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        cn.atan2(a1 * b1 + a2 * b2 + a3 * b3)
    }

    /// Rotation by `angle` about the unit `axis` (right-hand rule).
    pub fn rotated(&self, axis: &Star, angle: f64) -> Star {
        let k = axis.v;
        let v = self.v;
        let (s, c) = angle.sin_cos();
        let dot = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
        let cross = [k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]];
        let r: [f64; 3] = std::array::from_fn(|i| v[i] * c + cross[i] * s + k[i] * dot * (1.0 - c));
        Star::from_vector(r).unwrap_or(*self)
    }
}

/// Multiset of `n` stars; the stored order carries no meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    stars: Vec<Star>,
}

impl Constellation {
    pub fn new(stars: Vec<Star>) -> Result<Self> {
        if stars.is_empty() {
            return Err(StellarError::domain("Constellation::new", "a constellation needs at least one star"));
        }
        Ok(Constellation { stars })
    }

    pub fn n(&self) -> usize {
        self.stars.len()
    }

    pub fn stars(&self) -> &[Star] {
        &self.stars
    }

    pub fn into_stars(self) -> Vec<Star> {
        self.stars
    }

    /// Union of two multisets.
    pub fn union(&self, other: &Constellation) -> Constellation {
        let mut stars = self.stars.clone();
        stars.extend_from_slice(&other.stars);
        Constellation { stars }
    }

    pub fn antipodal(&self) -> Constellation {
        Constellation { stars: self.stars.iter().map(Star::antipode).collect() }
    }

    pub fn rotated(&self, axis: &Star, angle: f64) -> Constellation {
        Constellation { stars: self.stars.iter().map(|s| s.rotated(axis, angle)).collect() }
    }
}

/// Image of a star in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanePoint {
    Finite(Complex64),
    /// The south pole.
    Infinity,
}

/// Inverse stereographic projection: `θ = 2 atan|w|`, `Φ = arg w`.
pub fn plane_to_sphere(w: Complex64) -> Star {
    if w.norm() > 1.0 {
        Star::from_amplitudes(w.inv(), ONE)
    } else {
        Star::from_amplitudes(ONE, w)
    }
}

/// Stereographic projection from the south pole, `w = e^{iΦ} tan(θ/2)`.
pub fn sphere_to_plane(s: &Star) -> PlanePoint {
    let [x, y, z] = s.v;
    let rho2 = x * x + y * y;
    if rho2 == 0.0 && z < 0.0 {
        return PlanePoint::Infinity;
    }
    let xy = Complex64::new(x, y);
    if z >= 0.0 {
        PlanePoint::Finite(xy / (1.0 + z))
    } else {
        PlanePoint::Finite(xy * ((1.0 - z) / rho2))
    }
}

/// Coefficients `h_k = (-1)^k sqrt(C(n,k)) d_k` of `X^{n-k} Y^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaPolynomial {
    coeffs: Vec<Complex64>,
}

impl MajoranaPolynomial {
    pub fn from_state(state: &SymmetricState) -> Self {
        let n = state.n();
        let coeffs = state
            .dicke()
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let c = d * binomial(n, k).sqrt();
                if k % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        MajoranaPolynomial { coeffs }
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Stars at the north pole: the power of `X` dividing `H`.
    pub fn north_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| **c == ZERO).count()
    }

    /// Stars at the south pole, i.e. roots at infinity of `H(t, 1)`.
    pub fn roots_at_infinity(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    /// `H(X, Y)`.
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        let n = self.degree_bound() as i32;
        self.coeffs.iter().enumerate().map(|(k, h)| h * x.powi(n - k as i32) * y.powi(k as i32)).sum()
    }
}

/// Affine chart of the projective line used for root finding.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    /// `t = X / Y = e^{iΦ} tan(θ/2)`.
    North,
    /// `s = Y / X`.
    South,
}

/// The polynomial with its pole roots removed, in both charts.
struct ChartPolys {
    /// Ascending coefficients in `t`.
    north: Vec<Complex64>,
    /// Ascending coefficients in `s`.
    south: Vec<Complex64>,
}

impl ChartPolys {
    fn new(h: &[Complex64], south: usize, north: usize) -> Self {
        let inner = &h[south..h.len() - north];
        ChartPolys { north: inner.iter().rev().copied().collect(), south: inner.to_vec() }
    }

    fn coeffs(&self, chart: Chart) -> &[Complex64] {
        match chart {
            Chart::North => &self.north,
            Chart::South => &self.south,
        }
    }
}

/// Homogeneous root `(b, a)` as qubit amplitudes `(a, b)` of its star.
fn chart_root_to_amplitudes(chart: Chart, z: Complex64) -> (Complex64, Complex64) {
    match chart {
        Chart::North => (ONE, z),
        Chart::South => (z, ONE),
    }
}

/// Newton polishing that only accepts steps lowering the relative residual.
fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let residual = |z: Complex64| {
        let (p, _, bound) = horner(coeffs, z);
        if bound > 0.0 {
            p.norm() / bound
        } else {
            0.0
        }
    };
    let mut best = residual(z);
    for _ in 0..4 {
        if best == 0.0 {
            break;
        }
        let (p, dp, _) = horner(coeffs, z);
        if dp == ZERO {
            break;
        }
        let next = z - p / dp;
        let r = residual(next);
        if r < best {
            z = next;
            best = r;
        } else {
            break;
        }
    }
    z
}

/// Chart in which `star` has coordinate of modulus at most one.
fn local_chart(star: &Star) -> (Chart, Complex64) {
    match sphere_to_plane(star) {
        PlanePoint::Finite(w) if w.norm() <= 1.0 => (Chart::North, w),
        PlanePoint::Finite(w) => (Chart::South, w.inv()),
        PlanePoint::Infinity => (Chart::South, ZERO),
    }
}

fn chart_coordinate(star: &Star, chart: Chart) -> Complex64 {
    let (a, b) = star.qubit().amplitudes();
    match chart {
        Chart::North => b / a,
        Chart::South => a / b,
    }
}

/// Coefficients of the `order`-th derivative.
fn derivative(coeffs: &[Complex64], order: usize) -> Vec<Complex64> {
    (order..coeffs.len()).map(|j| coeffs[j] * ((j + 1 - order)..=j).map(|f| f as f64).product::<f64>()).collect()
}

/// Tests whether `members` split off a single root of multiplicity
/// `members.len()` and returns that root.
///
/// The cluster centroid, taken in the local chart, is refined as the simple
/// root of the `(m-1)`-th derivative before the Taylor coefficients of
/// orders `0..m-1` are checked for vanishing.
fn multiple_root(polys: &ChartPolys, members: &[Star], sphere_mean: &Star) -> Option<Star> {
    let m = members.len();
    let (chart, _) = local_chart(sphere_mean);
    let coeffs = polys.coeffs(chart);
    if coeffs.len() <= m {
        return None;
    }
    let mean = members.iter().map(|s| chart_coordinate(s, chart)).sum::<Complex64>() / m as f64;
    if !mean.is_finite() {
        return None;
    }
    let z = polish(&derivative(coeffs, m - 1), mean);
    let vanishing = (0..m - 1).all(|j| {
        let (v, bound) = taylor_coefficient(coeffs, z, j);
        v.norm() <= MULTIPLICITY_TOL * bound
    });
    if !vanishing {
        return None;
    }
    // a relative perturbation of size tol splits a q-fold root into a ring of
    // radius about (tol N / |T_q|)^{1/q}; the true multiplicity q >= m gives
    // the smallest such radius, and members outside it belong to other roots
    let n0 = MULTIPLICITY_TOL * taylor_coefficient(coeffs, z, 0).1;
    let radius = 2.0
        * (m..coeffs.len())
            .map(|q| (n0 / taylor_coefficient(coeffs, z, q).0.norm()).powf(1.0 / q as f64))
            .fold(f64::INFINITY, f64::min);
    let inside = members.iter().all(|s| (chart_coordinate(s, chart) - z).norm() <= radius);
    inside.then(|| {
        let (a, b) = chart_root_to_amplitudes(chart, z);
        Star::from_amplitudes(a, b)
    })
}

/// Replaces groups of roots that split off a multiple root by that root.
///
/// Rounding splits an `m`-fold root into a ring of radius `~ε^{1/m}` whose
/// centroid stays accurate to rounding level. Returns which stars were
/// consolidated.
fn consolidate_clusters(polys: &ChartPolys, stars: &mut [Star]) -> Vec<bool> {
    let m = stars.len();
    let mut assigned = vec![false; m];
    for i in 0..m {
        if assigned[i] {
            continue;
        }
        let mut order: Vec<usize> = (0..m).filter(|&j| !assigned[j]).collect();
        order.sort_by(|&a, &b| stars[i].geodesic(&stars[a]).total_cmp(&stars[i].geodesic(&stars[b])));
        let mut best: Option<(usize, Star)> = None;
        let mut sum = [0.0; 3];
        for (size, &j) in order.iter().enumerate().map(|(s, j)| (s + 1, j)) {
            let v = stars[j].vector();
            for c in 0..3 {
                sum[c] += v[c];
            }
            if size < 2 {
                continue;
            }
            let Ok(mean) = Star::from_vector(sum) else { continue };
            let members: Vec<Star> = order[..size].iter().map(|&j| stars[j]).collect();
            let Some(center) = multiple_root(polys, &members, &mean) else { continue };
            // a split root leaves an isolated ring around the true position
            let reach = members.iter().map(|s| s.geodesic(&center)).fold(0.0, f64::max);
            let isolated = order[size..].iter().all(|&j| stars[j].geodesic(&center) > 2.0 * reach)
                && (0..m).filter(|&j| assigned[j]).all(|j| stars[j].geodesic(&center) > 2.0 * reach);
            if isolated {
                best = Some((size, center));
            }
        }
        if let Some((size, center)) = best {
            for &j in &order[..size] {
                stars[j] = center;
                assigned[j] = true;
            }
        }
    }
    assigned
}

/// Linear form `x X + y Y` vanishing at chart coordinate `z`.
fn linear_factor(chart: Chart, z: Complex64) -> (Complex64, Complex64) {
    match chart {
        Chart::North => (ONE, -z),
        Chart::South => (-z, ONE),
    }
}

/// Least-squares fit of the pole-free coefficients `inner` by
/// `a ∏ f_j^{m_j}` with the multiplicities found by consolidation held fixed.
///
/// Unstructured roots next to a multiple root inherit its conditioning; once
/// the multiplicity is imposed the neighbours are as well determined as
/// isolated roots. Gauss-Newton, each root moving in its own local chart;
/// the fit is kept only if it lowers the residual.
fn refine_with_multiplicities(inner: &[Complex64], stars: &mut [Star], merged: &[bool]) {
    struct Root {
        chart: Chart,
        z: Complex64,
        members: Vec<usize>,
    }
    let mut roots: Vec<Root> = Vec::new();
    for i in 0..stars.len() {
        if merged[i] {
            if let Some(r) = roots.iter_mut().find(|r| merged[r.members[0]] && stars[r.members[0]] == stars[i]) {
                r.members.push(i);
                continue;
            }
        }
        let (chart, z) = local_chart(&stars[i]);
        roots.push(Root { chart, z, members: vec![i] });
    }
    if roots.iter().all(|r| r.members.len() == 1) {
        return;
    }
    let product = |zs: &[Complex64], drop: Option<usize>| {
        let mut factors = Vec::with_capacity(inner.len());
        for (j, r) in roots.iter().enumerate() {
            let m = r.members.len() - usize::from(drop == Some(j));
            factors.extend(std::iter::repeat_n(linear_factor(r.chart, zs[j]), m));
            if drop == Some(j) {
                factors.push(match r.chart {
                    Chart::North => (ZERO, -ONE),
                    Chart::South => (-ONE, ZERO),
                });
            }
        }
        homogeneous_product(&factors)
    };
    // coefficient errors are relative, so each row is scaled by its target
    let floor = f64::EPSILON * inner.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let weights = DVector::from_iterator(inner.len(), inner.iter().map(|c| 1.0 / c.norm().max(floor)));
    let weighted = |v: Vec<Complex64>| DVector::from_vec(v).zip_map(&weights, |c, w| c * w);
    let target = weighted(inner.to_vec());
    let fit = |zs: &[Complex64]| {
        let g = weighted(product(zs, None));
        let a = g.dotc(&target) / g.dotc(&g);
        let r = &g * a - &target;
        (a, g, r.norm())
    };

    let mut zs: Vec<Complex64> = roots.iter().map(|r| r.z).collect();
    let (mut a, mut g, mut loss) = fit(&zs);
    let start = loss;
    for _ in 0..20 {
        let k = roots.len();
        let mut jac = DMatrix::<Complex64>::zeros(inner.len(), k + 1);
        jac.set_column(0, &g);
        for (j, r) in roots.iter().enumerate() {
            let col = weighted(product(&zs, Some(j))) * (a * r.members.len() as f64);
            jac.set_column(j + 1, &col);
        }
        let rhs = &target - &g * a;
        let Ok(step) = jac.svd(true, true).solve(&rhs, f64::EPSILON) else { break };
        let mut t = 1.0;
        let mut improved = false;
        while t >= 1.0 / 16.0 {
            let trial: Vec<Complex64> = zs.iter().enumerate().map(|(j, z)| z + step[j + 1] * t).collect();
            let (ta, tg, tl) = fit(&trial);
            if tl < loss {
                improved = loss - tl > 1e-3 * loss;
                (zs, a, g, loss) = (trial, ta, tg, tl);
                break;
            }
            t /= 2.0;
        }
        if !improved {
            break;
        }
    }
    if loss < start {
        for (r, z) in roots.iter().zip(&zs) {
            let (x, y) = chart_root_to_amplitudes(r.chart, *z);
            let star = Star::from_amplitudes(x, y);
            for &i in &r.members {
                stars[i] = star;
            }
        }
    }
}

/// Stars of a symmetric state.
pub fn state_to_stars(state: &SymmetricState) -> Result<Constellation> {
    polynomial_to_stars(&MajoranaPolynomial::from_state(state))
}

/// Stars from Majorana polynomial coefficients.
pub fn polynomial_to_stars(poly: &MajoranaPolynomial) -> Result<Constellation> {
    const OP: &str = "state_to_stars";
    let h = poly.coefficients();
    let n = poly.degree_bound();
    if n == 0 {
        return Err(StellarError::domain(OP, "degree-zero polynomial has no stars"));
    }
    if h.iter().all(|c| *c == ZERO) {
        return Err(StellarError::domain(OP, "zero state has no constellation"));
    }
    let south = poly.roots_at_infinity();
    let north = poly.north_multiplicity();
    let inner = &h[south..=n - north];
    let polys = ChartPolys::new(h, south, north);

    let mut finite = Vec::new();
    if inner.len() > 1 {
        // product of roots in the north chart is h_{n-north} / h_south
        let chart = if inner[inner.len() - 1].norm() > inner[0].norm() { Chart::South } else { Chart::North };
        let roots = polynomial_roots(polys.coeffs(chart))?;
        finite = roots
            .iter()
            .map(|&z| {
                let (a, b) = chart_root_to_amplitudes(chart, z);
                Star::from_amplitudes(a, b)
            })
            .collect();
        // polishing would break the symmetric splitting of a multiple root,
        // so only simple roots are polished, each in the chart where it is
        // inside the unit disc
        let merged = consolidate_clusters(&polys, &mut finite);
        for (star, &merged) in finite.iter_mut().zip(&merged) {
            if merged {
                continue;
            }
            let (chart, z) = local_chart(star);
            let (a, b) = chart_root_to_amplitudes(chart, polish(polys.coeffs(chart), z));
            *star = Star::from_amplitudes(a, b);
        }
        refine_with_multiplicities(inner, &mut finite, &merged);
    }

    let mut stars = finite;
    stars.extend(std::iter::repeat_n(Star::NORTH, north));
    stars.extend(std::iter::repeat_n(Star::SOUTH, south));
    if stars.len() != n {
        return Err(StellarError::numeric(OP, format!("found {} stars for degree {n}", stars.len())));
    }
    Constellation::new(stars)
}

/// The symmetric state whose stars are `c`, rebuilt from the linear factors
/// `cos(θ_i/2) X - e^{iΦ_i} sin(θ_i/2) Y`.
pub fn stars_to_state(c: &Constellation) -> Result<SymmetricState> {
    let n = c.n();
    let factors: Vec<(Complex64, Complex64)> = c
        .stars()
        .iter()
        .map(|s| {
            let (a, b) = s.qubit().amplitudes();
            (a, -b)
        })
        .collect();
    let h = homogeneous_product(&factors);
    let d = h
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let c = c / binomial(n, k).sqrt();
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    SymmetricState::from_dicke(d)
}

/// Plain-data form of a star for serialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarAngles {
    pub theta: f64,
    pub phi: f64,
}

impl From<&Star> for StarAngles {
    fn from(s: &Star) -> Self {
        StarAngles { theta: s.theta(), phi: s.phi() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{coherent_state, dicke_state, symmetrize};

    #[test]
    fn dicke_stars_sit_at_the_poles() {
        for n in 1..=12 {
            for k in 0..=n {
                let c = state_to_stars(&dicke_state(n, k).unwrap()).unwrap();
                let south = c.stars().iter().filter(|s| **s == Star::SOUTH).count();
                let north = c.stars().iter().filter(|s| **s == Star::NORTH).count();
                assert_eq!((north, south), (n - k, k));
            }
        }
    }

    #[test]
    fn ghz3_stars_form_an_equatorial_triangle() {
        let s = SymmetricState::from_dicke(vec![ONE, ZERO, ZERO, ONE]).unwrap();
        let c = state_to_stars(&s).unwrap();
        let mut phis: Vec<f64> = c.stars().iter().map(|s| s.phi()).collect();
        phis.sort_by(f64::total_cmp);
        for (s, _) in c.stars().iter().zip(&phis) {
            assert!((s.theta() - PI / 2.0).abs() < 1e-14);
        }
        for w in phis.windows(2) {
            assert!((w[1] - w[0] - 2.0 * PI / 3.0).abs() < 1e-13);
        }
        // the symmetrization of those three qubits gives the state back
        let qubits: Vec<QubitState> = c.stars().iter().map(Star::qubit).collect();
        assert!(symmetrize(&qubits).unwrap().fidelity(&s) > 1.0 - 1e-14);
    }

    #[test]
    fn coherent_state_has_coincident_stars() {
        for n in 1..=8 {
            let center = QubitState::new(0.4 + 0.2 * n as f64, 0.9 * n as f64);
            let c = state_to_stars(&coherent_state(n, &center).unwrap()).unwrap();
            let target = Star::from_qubit(&center);
            for s in c.stars() {
                assert!(s.geodesic(&target) < 1e-8, "n={n}: {}", s.geodesic(&target));
            }
        }
    }

    #[test]
    fn pole_constellations_rebuild_dicke_states() {
        let c = Constellation::new(vec![Star::NORTH; 4]).unwrap();
        assert_eq!(stars_to_state(&c).unwrap(), dicke_state(4, 0).unwrap());
        let bell = stars_to_state(&Constellation::new(vec![Star::NORTH, Star::SOUTH]).unwrap()).unwrap();
        assert!(bell.fidelity(&dicke_state(2, 1).unwrap()) > 1.0 - 1e-15);
    }

    #[test]
    fn stereographic_projection() {
        assert_eq!(plane_to_sphere(ZERO), Star::NORTH);
        let e = plane_to_sphere(Complex64::from_polar(1.0, 0.7));
        assert!(e.vector()[2].abs() < 1e-15 && (e.phi() - 0.7).abs() < 1e-15);
        assert_eq!(sphere_to_plane(&Star::SOUTH), PlanePoint::Infinity);
        let far = plane_to_sphere(Complex64::new(1e8, -1e8));
        assert!(far.vector().iter().all(|x| x.is_finite()));
        match sphere_to_plane(&far) {
            PlanePoint::Finite(w) => assert!((w - Complex64::new(1e8, -1e8)).norm() < 1e-6 * 1e8),
            PlanePoint::Infinity => panic!("finite point mapped to infinity"),
        }
    }

    #[test]
    fn polynomial_multiplicities() {
        let p = MajoranaPolynomial::from_state(&dicke_state(5, 2).unwrap());
        assert_eq!((p.north_multiplicity(), p.roots_at_infinity()), (3, 2));
        // H vanishes at every star's homogeneous root (b : a)
        let s = SymmetricState::from_dicke(vec![Complex64::new(0.3, 0.2), ONE, Complex64::new(-0.5, 0.1)]).unwrap();
        let p = MajoranaPolynomial::from_state(&s);
        for star in state_to_stars(&s).unwrap().stars() {
            let (a, b) = star.qubit().amplitudes();
            assert!(p.eval(b, a).norm() < 1e-14);
        }
    }
}
