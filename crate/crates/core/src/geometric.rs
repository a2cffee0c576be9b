//! Geometric entanglement `E_G = -log2 max_λ |<λ^{⊗n}|ψ>|^2`, the maximum of
//! the Husimi function over the sphere.
//!
//! In the chart `z = e^{iΦ} tan(θ/2)` the Husimi function reads
//! `Q = |G(z)|^2 / (1 + |z|^2)^n` with `G(z) = Σ sqrt(C(n,k)) conj(d_k) z^k`;
//! in the chart `u = 1/z` the coefficients are reversed. The optimizer runs
//! damped Newton ascent on `log Q` in whichever chart keeps `|z| <= 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, StellarError};
use crate::state::{binomial, ln_binomial, QubitState, SymmetricState};
use crate::stellar::{state_to_stars, Star};

/// Settings of the multistart optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct EgOptions {
    /// Polar grid cells.
    pub grid_theta: usize,
    /// Azimuthal grid cells.
    pub grid_phi: usize,
    /// Grid local maxima used as starts, best first.
    pub grid_starts: usize,
    /// Also start from every star.
    pub star_starts: bool,
    /// Newton iterations per start.
    pub max_iter: usize,
    /// Target norm of the Husimi gradient on the sphere.
    pub grad_tol: f64,
}

impl Default for EgOptions {
    fn default() -> Self {
        EgOptions { grid_theta: 64, grid_phi: 128, grid_starts: 16, star_starts: true, max_iter: 200, grad_tol: 1e-12 }
    }
}

/// Result of the `E_G` maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricResult {
    /// `E_G` in bits.
    pub value: f64,
    /// Maximizing single-qubit direction.
    pub witness: QubitState,
    /// `max |<λ^{⊗n}|ψ>|^2`.
    pub overlap: f64,
    /// Husimi gradient norm at the witness (0 for closed forms).
    pub gradient: f64,
}

impl GeometricResult {
    fn from_overlap(overlap: f64, witness: QubitState, gradient: f64) -> Self {
        let overlap = overlap.min(1.0);
        GeometricResult { value: (-overlap.log2()).max(0.0), witness, overlap, gradient }
    }
}

/// `E_G` of the Dicke state `|S_{n,k}>` in closed form with witness
/// `θ = 2 asin(sqrt(k/n))`, `Φ = 0`.
pub fn e_g_dicke(n: usize, k: usize) -> Result<GeometricResult> {
    if n == 0 || k > n {
        return Err(StellarError::domain("e_g_dicke", format!("need 0 <= k <= n and n >= 1, got n={n}, k={k}")));
    }
    let theta = 2.0 * ((k as f64) / (n as f64)).sqrt().asin();
    let witness = QubitState::new(theta, 0.0);
    if k == 0 || k == n {
        return Ok(GeometricResult { value: 0.0, witness, overlap: 1.0, gradient: 0.0 });
    }
    let (nf, kf) = (n as f64, k as f64);
    // ln of C(n,k) (k/n)^k ((n-k)/n)^{n-k}
    let ln_overlap = ln_binomial(n, k) + kf * (kf / nf).ln() + (nf - kf) * ((nf - kf) / nf).ln();
    let value = -ln_overlap / std::f64::consts::LN_2;
    Ok(GeometricResult { value, witness, overlap: ln_overlap.exp(), gradient: 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    North,
    South,
}

/// A sphere point in the chart where its coordinate has modulus <= 1.
#[derive(Debug, Clone, Copy)]
struct ChartPoint {
    chart: Chart,
    w: Complex64,
}

impl ChartPoint {
    fn from_angles(theta: f64, phi: f64) -> Self {
        if theta <= PI / 2.0 {
            ChartPoint { chart: Chart::North, w: Complex64::from_polar((theta / 2.0).tan(), phi) }
        } else {
            ChartPoint { chart: Chart::South, w: Complex64::from_polar(1.0 / (theta / 2.0).tan(), -phi) }
        }
    }

    fn rechart(self) -> Self {
        if self.w.norm() <= 1.0 {
            return self;
        }
        let chart = match self.chart {
            Chart::North => Chart::South,
            Chart::South => Chart::North,
        };
        ChartPoint { chart, w: self.w.inv() }
    }

    fn angles(&self) -> (f64, f64) {
        let r = self.w.norm();
        let arg = self.w.arg();
        match self.chart {
            Chart::North => (2.0 * r.atan(), arg),
            Chart::South => (PI - 2.0 * r.atan(), -arg),
        }
    }

    fn qubit(&self) -> QubitState {
        let (t, p) = self.angles();
        QubitState::new(t, p)
    }

    /// `(dw/dθ, dw/dΦ)` at azimuth `phi`, which `w` loses at the poles.
    fn tangents(&self, phi: f64) -> (Complex64, Complex64) {
        let w = self.w;
        let half = (1.0 + w.norm_sqr()) / 2.0;
        match self.chart {
            Chart::North => (Complex64::from_polar(half, phi), Complex64::i() * w),
            Chart::South => (-Complex64::from_polar(half, -phi), -Complex64::i() * w),
        }
    }
}

/// The Husimi function of one state in both charts.
struct Husimi {
    n: usize,
    /// `G` coefficients ascending in `z`.
    north: Vec<Complex64>,
    /// Ascending in `u = 1/z`.
    south: Vec<Complex64>,
}

/// `G`, `G'`, `G''` at `w`.
fn eval_derivatives(coeffs: &[Complex64], w: Complex64) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut dp, mut ddp) = (zero, zero, zero);
    for c in coeffs.iter().rev() {
        ddp = ddp * w + dp * 2.0;
        dp = dp * w + p;
        p = p * w + c;
    }
    [p, dp, ddp]
}

/// Value, gradient and Hessian of `log Q` in the chart's real coordinates.
struct LocalModel {
    q: f64,
    log_q: f64,
    grad: [f64; 2],
    hess: [[f64; 2]; 2],
    /// Norm of the Husimi gradient with respect to arc length on the sphere.
    sphere_grad: f64,
    /// Rounding-error bound on `sphere_grad`.
    grad_floor: f64,
}

impl Husimi {
    fn new(state: &SymmetricState) -> Self {
        let n = state.n();
        let north: Vec<Complex64> =
            state.dicke().iter().enumerate().map(|(k, d)| d.conj() * binomial(n, k).sqrt()).collect();
        let south = north.iter().rev().copied().collect();
        Husimi { n, north, south }
    }

    fn coeffs(&self, chart: Chart) -> &[Complex64] {
        match chart {
            Chart::North => &self.north,
            Chart::South => &self.south,
        }
    }

    fn value(&self, p: &ChartPoint) -> f64 {
        let g = eval_derivatives(self.coeffs(p.chart), p.w)[0];
        g.norm_sqr() / (1.0 + p.w.norm_sqr()).powi(self.n as i32)
    }

    fn log_value(&self, p: &ChartPoint) -> f64 {
        let g = eval_derivatives(self.coeffs(p.chart), p.w)[0];
        g.norm_sqr().ln() - self.n as f64 * p.w.norm_sqr().ln_1p()
    }

    /// `(dQ/dθ, dQ/dΦ)`, well defined at zeros of `Q`.
    fn gradient(&self, p: &ChartPoint, phi: f64) -> [f64; 2] {
        let [g, dg, _] = eval_derivatives(self.coeffs(p.chart), p.w);
        let w = p.w;
        let s = 1.0 + w.norm_sqr();
        let q = g.norm_sqr() / s.powi(self.n as i32);
        let nf = self.n as f64;
        let (wt, wp) = p.tangents(phi);
        let d = |dw: Complex64| {
            2.0 * (g.conj() * dg * dw).re / s.powi(self.n as i32) - nf * q * 2.0 * (w.conj() * dw).re / s
        };
        [d(wt), d(wp)]
    }

    fn model(&self, p: &ChartPoint) -> Option<LocalModel> {
        let [g, dg, ddg] = eval_derivatives(self.coeffs(p.chart), p.w);
        if g.norm() == 0.0 {
            return None;
        }
        let nf = self.n as f64;
        let w = p.w;
        let s = 1.0 + w.norm_sqr();
        let h1 = dg / g;
        let h2 = ddg / g - h1 * h1;
        // Wirtinger derivatives of log Q
        let lz = h1 - w.conj() * (nf / s);
        let lzz = h2 + w.conj() * w.conj() * (nf / (s * s));
        let lzzbar = -nf / (s * s);
        let grad = [2.0 * lz.re, -2.0 * lz.im];
        let hess = [[2.0 * lzz.re + 2.0 * lzzbar, -2.0 * lzz.im], [-2.0 * lzz.im, -2.0 * lzz.re + 2.0 * lzzbar]];
        let log_q = g.norm_sqr().ln() - nf * s.ln();
        let q = log_q.exp();
        let sphere_grad = q * grad[0].hypot(grad[1]) * s / 2.0;
        // Horner error bounds on G and G' propagate into G'/G
        let r = w.norm();
        let coeffs = self.coeffs(p.chart);
        let b0: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
        let b1: f64 = coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, c)| acc * r + k as f64 * c.norm());
        let err_h1 = 4.0 * (nf + 1.0) * f64::EPSILON * (b1 + h1.norm() * b0) / g.norm();
        let grad_floor = q * 2.0 * err_h1 * s / 2.0;
        Some(LocalModel { q, log_q, grad, hess, sphere_grad, grad_floor })
    }
}

/// Angle-space gradient `(dQ/dθ, dQ/dΦ)` of the Husimi function.
pub fn husimi_gradient(state: &SymmetricState, theta: f64, phi: f64) -> [f64; 2] {
    Husimi::new(state).gradient(&ChartPoint::from_angles(theta, phi), phi)
}

struct Ascent {
    point: ChartPoint,
    q: f64,
    sphere_grad: f64,
    converged: bool,
}

/// Step of damped Newton for maximizing `log Q`.
fn newton_step(m: &LocalModel) -> [f64; 2] {
    let [[a, b], [_, c]] = m.hess;
    // largest eigenvalue of the symmetric 2x2 Hessian
    let mid = (a + c) / 2.0;
    let rad = ((a - c) / 2.0).hypot(b);
    let lmax = mid + rad;
    let gnorm = m.grad[0].hypot(m.grad[1]);
    let shift = if lmax < 0.0 { 0.0 } else { lmax + gnorm.max(1e-8) };
    let (a, c) = (a - shift, c - shift);
    let det = a * c - b * b;
    // solve (H - shift) s = -g
    [(-c * m.grad[0] + b * m.grad[1]) / det, (b * m.grad[0] - a * m.grad[1]) / det]
}

fn ascend(h: &Husimi, start: ChartPoint, opts: &EgOptions) -> Ascent {
    let mut p = start.rechart();
    let mut last = None;
    for _ in 0..opts.max_iter {
        let Some(m) = h.model(&p) else {
            return Ascent { point: p, q: 0.0, sphere_grad: f64::INFINITY, converged: false };
        };
        if m.sphere_grad <= opts.grad_tol.max(m.grad_floor) {
            return Ascent { point: p, q: m.q, sphere_grad: m.sphere_grad, converged: true };
        }
        let mut step = newton_step(&m);
        let len = step[0].hypot(step[1]);
        if len > 0.5 {
            step = [step[0] * 0.5 / len, step[1] * 0.5 / len];
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = ChartPoint { chart: p.chart, w: p.w + Complex64::new(step[0], step[1]) * t };
            // near the maximum the gain drops below the rounding of log Q
            let lq = h.log_value(&trial);
            if lq >= m.log_q - 8.0 * f64::EPSILON * m.log_q.abs().max(1.0) {
                accepted = Some(trial);
                break;
            }
            t /= 2.0;
        }
        match accepted {
            Some(next) if next.w != p.w => p = next.rechart(),
            _ => return Ascent { point: p, q: m.q, sphere_grad: m.sphere_grad, converged: false },
        }
        last = Some(m);
    }
    let m = h.model(&p).or(last);
    let (q, g, floor) = m.map_or((0.0, f64::INFINITY, 0.0), |m| (m.q, m.sphere_grad, m.grad_floor));
    Ascent { point: p, q, sphere_grad: g, converged: g <= opts.grad_tol.max(floor) }
}

/// `E_G` by maximizing the Husimi function: coarse grid, then Newton ascent
/// from the best grid local maxima, every star and both poles.
pub fn e_g(state: &SymmetricState, opts: &EgOptions) -> Result<GeometricResult> {
    const OP: &str = "e_g";
    if opts.grid_theta < 2 || opts.grid_phi < 3 {
        return Err(StellarError::domain(OP, "grid needs at least 2 x 3 cells"));
    }
    let h = Husimi::new(state);
    let (nt, np) = (opts.grid_theta, opts.grid_phi);
    let theta_at = |i: usize| (i as f64 + 0.5) * PI / nt as f64;
    let phi_at = |j: usize| j as f64 * 2.0 * PI / np as f64;
    let grid: Vec<f64> =
        (0..nt * np).map(|idx| h.value(&ChartPoint::from_angles(theta_at(idx / np), phi_at(idx % np)))).collect();
    let mut peaks: Vec<(f64, usize)> = (0..nt * np)
        .filter(|&idx| {
            let (i, j) = (idx / np, idx % np);
            let v = grid[idx];
            (i.saturating_sub(1)..=(i + 1).min(nt - 1)).all(|ii| {
                [np - 1, 0, 1].iter().all(|dj| {
                    let jj = (j + dj) % np;
                    (ii, jj) == (i, j) || grid[ii * np + jj] <= v
                })
            })
        })
        .map(|idx| (grid[idx], idx))
        .collect();
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut starts: Vec<ChartPoint> = peaks
        .iter()
        .take(opts.grid_starts)
        .map(|&(_, idx)| ChartPoint::from_angles(theta_at(idx / np), phi_at(idx % np)))
        .collect();
    if opts.star_starts {
        for s in state_to_stars(state)?.stars() {
            starts.push(ChartPoint::from_angles(s.theta(), s.phi()));
        }
    }
    starts.push(ChartPoint::from_angles(0.0, 0.0));
    starts.push(ChartPoint::from_angles(PI, 0.0));

    let mut best: Option<Ascent> = None;
    let mut best_unconverged: Option<Ascent> = None;
    for start in starts {
        if h.value(&start) < 1e-280 {
            continue;
        }
        let a = ascend(&h, start, opts);
        let slot = if a.converged { &mut best } else { &mut best_unconverged };
        if slot.as_ref().is_none_or(|b| better(&a, b)) {
            *slot = Some(a);
        }
    }
    match (best, best_unconverged) {
        (Some(b), u) if u.as_ref().is_none_or(|u| u.q <= b.q + 1e-12) => {
            Ok(GeometricResult::from_overlap(b.q, b.point.qubit(), b.sphere_grad))
        }
        (b, u) => {
            let u = u.expect("an unconverged start exists when no converged one wins");
            let best_q = b.map_or(u.q, |b| b.q.max(u.q));
            Err(StellarError::NotConverged {
                op: OP,
                iterations: opts.max_iter,
                best_value: -best_q.min(1.0).log2(),
                gradient: u.sphere_grad,
                tol: opts.grad_tol,
            })
        }
    }
}

/// Larger overlap wins; near-ties go to the smaller `θ`, then smaller `Φ`.
fn better(a: &Ascent, b: &Ascent) -> bool {
    if (a.q - b.q).abs() > 1e-12 {
        return a.q > b.q;
    }
    let (qa, qb) = (a.point.qubit(), b.point.qubit());
    if (qa.theta() - qb.theta()).abs() > 1e-9 {
        return qa.theta() < qb.theta();
    }
    qa.phi() < qb.phi()
}

/// Star at the maximizing direction.
pub fn witness_star(r: &GeometricResult) -> Star {
    Star::from_qubit(&r.witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{coherent_state, dicke_state, husimi};

    #[test]
    fn dicke_closed_form_named_value() {
        let r = e_g_dicke(4, 2).unwrap();
        assert!((r.value - (8.0f64 / 3.0).log2()).abs() < 1e-14);
        assert_eq!(e_g_dicke(7, 0).unwrap().value, 0.0);
        assert_eq!(e_g_dicke(7, 7).unwrap().value, 0.0);
        assert!(e_g_dicke(3, 4).is_err());
    }

    #[test]
    fn optimizer_matches_dicke_closed_form() {
        for n in [4, 7, 10] {
            for k in 0..=n {
                let r = e_g(&dicke_state(n, k).unwrap(), &EgOptions::default()).unwrap();
                let c = e_g_dicke(n, k).unwrap();
                assert!((r.value - c.value).abs() < 1e-10, "n={n} k={k}: {} vs {}", r.value, c.value);
            }
        }
    }

    #[test]
    fn coherent_state_has_zero_e_g() {
        let c = QubitState::new(2.2, 4.0);
        let r = e_g(&coherent_state(6, &c).unwrap(), &EgOptions::default()).unwrap();
        assert!(r.value.abs() < 1e-12);
        assert!(witness_star(&r).geodesic(&Star::from_qubit(&c)) < 1e-7);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let s = SymmetricState::from_dicke(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.5, 0.2),
            Complex64::new(0.1, -0.7),
            Complex64::new(0.4, 0.0),
        ])
        .unwrap();
        for &(t, p) in &[(0.3, 1.0), (1.4, 5.0), (2.5, 2.0), (3.0, 0.2)] {
            let g = husimi_gradient(&s, t, p);
            let f = |t: f64, p: f64| husimi(&s, &QubitState::new(t, p));
            let e = 1e-6;
            let gt = (f(t + e, p) - f(t - e, p)) / (2.0 * e);
            let gp = (f(t, p + e) - f(t, p - e)) / (2.0 * e);
            assert!((g[0] - gt).abs() < 1e-8 && (g[1] - gp).abs() < 1e-8, "{g:?} vs {gt} {gp}");
        }
    }
}
