//! Permutation-symmetric unitary dynamics `U = exp(-iβH)`: the Dicke-adapted
//! transition basis, the block reduction `T^† U T = V ⊕ W`, star trajectories
//! with persistent identities, and velocity profiles.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Result, StellarError};
use crate::hamspec::HermitianOperator;
use crate::measures::e_b_constellation;
use crate::state::{binomial, embed_full, FullState, SymmetricState};
use crate::stellar::{state_to_stars, Constellation, Star};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest register for which a transition basis is built.
pub const MAX_TRANSITION_QUBITS: usize = 14;

/// `max |A^† A - I|`.
pub fn unitarity_deficit(a: &DMatrix<Complex64>) -> f64 {
    let g = a.adjoint() * a;
    let mut worst = 0.0f64;
    for r in 0..g.nrows() {
        for c in 0..g.ncols() {
            let e = if r == c { ONE } else { ZERO };
            worst = worst.max((g[(r, c)] - e).norm());
        }
    }
    worst
}

/// Unitary `T` whose first `n + 1` columns are the Dicke vectors
/// `|S_{n,0}>, ..., |S_{n,n}>` and whose remaining columns span the
/// complement.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionBasis {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl TransitionBasis {
    /// Dicke columns first, then modified Gram-Schmidt over the standard
    /// basis vectors in index order (two passes).
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_TRANSITION_QUBITS {
            return Err(StellarError::domain(
                "build_transition",
                format!("qubit count {n} outside 1..={MAX_TRANSITION_QUBITS}"),
            ));
        }
        let dim = 1usize << n;
        // A basis vector of weight k overlaps only with columns supported on
        // weight-k strings, so Gram-Schmidt runs per weight sector.
        let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for x in 0..dim {
            sectors[x.count_ones() as usize].push(x);
        }
        let mut complement: Vec<(usize, Vec<f64>)> = Vec::with_capacity(dim - n - 1);
        for (k, idx) in sectors.iter().enumerate() {
            let m = idx.len();
            let dicke = vec![1.0 / binomial(n, k).sqrt(); m];
            let mut basis: Vec<Vec<f64>> = vec![dicke];
            for j in 0..m {
                let mut v = vec![0.0; m];
                v[j] = 1.0;
                for _ in 0..2 {
                    for b in &basis {
                        let dot: f64 = b.iter().zip(&v).map(|(p, q)| p * q).sum();
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi -= dot * bi;
                        }
                    }
                }
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-8 {
                    v.iter_mut().for_each(|x| *x /= norm);
                    complement.push((idx[j], v.clone()));
                    basis.push(v);
                }
            }
        }
        // column order follows the index of the generating basis vector
        complement.sort_by_key(|(first, _)| *first);
        let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
        for x in 0..dim {
            let k = x.count_ones() as usize;
            matrix[(x, k)] = Complex64::new(1.0 / binomial(n, k).sqrt(), 0.0);
        }
        for (col, (first, v)) in complement.iter().enumerate() {
            let idx = &sectors[first.count_ones() as usize];
            for (x, value) in idx.iter().zip(v) {
                matrix[(*x, n + 1 + col)] = Complex64::new(*value, 0.0);
            }
        }
        Ok(TransitionBasis { n, matrix })
    }

    /// Wraps a caller-supplied `T`, which must be unitary and carry the Dicke
    /// vectors in its first `n + 1` columns (both to `1e-12`).
    pub fn from_matrix(n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        const OP: &str = "TransitionBasis::from_matrix";
        const TOL: f64 = 1e-12;
        if n == 0 || n > MAX_TRANSITION_QUBITS {
            return Err(StellarError::domain(OP, format!("qubit count {n} outside 1..={MAX_TRANSITION_QUBITS}")));
        }
        let dim = 1usize << n;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(StellarError::domain(OP, format!("matrix must be {dim}x{dim}")));
        }
        let deficit = unitarity_deficit(&matrix);
        if deficit > TOL {
            return Err(StellarError::numeric(OP, format!("not unitary, deficit {deficit:.3e}")));
        }
        for k in 0..=n {
            let w = 1.0 / binomial(n, k).sqrt();
            for x in 0..dim {
                let e = if x.count_ones() as usize == k { w } else { 0.0 };
                if (matrix[(x, k)] - e).norm() > TOL {
                    return Err(StellarError::domain(OP, format!("column {k} is not the Dicke vector S({n},{k})")));
                }
            }
        }
        Ok(TransitionBasis { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Eigendecomposition of a Hermitian matrix, reused across many `β`.
#[derive(Debug, Clone)]
struct Spectral {
    vectors: DMatrix<Complex64>,
    values: DVector<f64>,
}

impl Spectral {
    fn new(op: &'static str, m: DMatrix<Complex64>) -> Result<Self> {
        let eig = SymmetricEigen::try_new(m, 1e-15, 0)
            .ok_or_else(|| StellarError::numeric(op, "Hermitian eigensolver did not converge"))?;
        Ok(Spectral { vectors: eig.eigenvectors, values: eig.eigenvalues })
    }

    fn propagator(&self, beta: f64) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (mut col, lambda) in scaled.column_iter_mut().zip(self.values.iter()) {
            col *= Complex64::from_polar(1.0, -beta * lambda);
        }
        scaled * self.vectors.adjoint()
    }
}

/// `exp(-iβH)` through the Hermitian eigendecomposition of `H`.
pub fn exponentiate(h: &HermitianOperator, beta: f64) -> Result<DMatrix<Complex64>> {
    const OP: &str = "exponentiate";
    if !beta.is_finite() {
        return Err(StellarError::domain(OP, "beta must be finite"));
    }
    let u = Spectral::new(OP, h.matrix().clone())?.propagator(beta);
    let deficit = unitarity_deficit(&u);
    if deficit > 1e-10 {
        return Err(StellarError::numeric(OP, format!("unitarity deficit {deficit:.3e} exceeds 1e-10")));
    }
    Ok(u)
}

/// `T^† U T` split into the symmetric block `V`, the complement block `W`
/// and the Frobenius norm of the two off-diagonal blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub n: usize,
    pub v: DMatrix<Complex64>,
    pub w: DMatrix<Complex64>,
    pub offblock_norm: f64,
}

/// Reduces `u` in the transition basis built by [`TransitionBasis::build`].
pub fn reduce(u: &DMatrix<Complex64>, tol: f64) -> Result<BlockDecomposition> {
    let dim = u.nrows();
    if dim < 2 || !dim.is_power_of_two() || u.ncols() != dim {
        return Err(StellarError::domain("reduce", format!("expected a square 2^n matrix, got {}x{}", dim, u.ncols())));
    }
    reduce_in(&TransitionBasis::build(dim.trailing_zeros() as usize)?, u, tol)
}

/// Reduces `u` in a given transition basis; fails with a symmetry violation
/// when the off-block norm exceeds `tol`.
pub fn reduce_in(basis: &TransitionBasis, u: &DMatrix<Complex64>, tol: f64) -> Result<BlockDecomposition> {
    const OP: &str = "reduce";
    let (n, dim) = (basis.n, basis.matrix.nrows());
    if u.nrows() != dim || u.ncols() != dim {
        return Err(StellarError::domain(OP, format!("expected a {dim}x{dim} matrix")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(StellarError::domain(OP, "tolerance must be positive"));
    }
    let deficit = unitarity_deficit(u);
    if deficit > 1e-8 {
        return Err(StellarError::domain(OP, format!("input not unitary, deficit {deficit:.3e}")));
    }
    let t = &basis.matrix;
    let rotated = t.adjoint() * u * t;
    let s = n + 1;
    let off = dim - s;
    let mut norm2 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            if (r < s) != (c < s) {
                norm2 += rotated[(r, c)].norm_sqr();
            }
        }
    }
    let offblock_norm = norm2.sqrt();
    if offblock_norm > tol {
        return Err(StellarError::SymmetryViolation { op: OP, deficit: offblock_norm, tol });
    }
    Ok(BlockDecomposition {
        n,
        v: rotated.view((0, 0), (s, s)).into_owned(),
        w: rotated.view((s, s), (off, off)).into_owned(),
        offblock_norm,
    })
}

/// Settings for [`evolve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Largest accepted geodesic move of a matched star between consecutive
    /// points, in radians.
    pub step_bound: f64,
    /// Maximum number of interval bisections below a requested grid step.
    pub max_depth: u32,
    /// Tolerance of the permutation-symmetry check on `H`.
    pub symmetry_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { step_bound: 0.2, max_depth: 12, symmetry_tol: 1e-10 }
    }
}

/// Star paths along a `β` grid. Star `i` of every constellation is the same
/// star followed continuously.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Requested grid plus inserted midpoints, monotone.
    pub betas: Vec<f64>,
    pub states: Vec<SymmetricState>,
    pub constellations: Vec<Constellation>,
    pub e_b: Vec<f64>,
    /// `true` where the step into this point still exceeded the bound at the
    /// maximum refinement depth (star identity not resolved).
    pub discontinuities: Vec<bool>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    pub fn n(&self) -> usize {
        self.states.first().map_or(0, SymmetricState::n)
    }
}

/// `H` restricted to the symmetric subspace, `D^† H D` with `D` the Dicke
/// columns. Errors unless `H` commutes with qubit permutations.
pub fn symmetric_block(h: &HermitianOperator, symmetry_tol: f64) -> Result<DMatrix<Complex64>> {
    let deficit = h.permutation_deficit();
    if deficit > symmetry_tol {
        return Err(StellarError::SymmetryViolation { op: "evolve", deficit, tol: symmetry_tol });
    }
    let n = h.n();
    let dim = 1usize << n;
    let mut d = DMatrix::<Complex64>::zeros(dim, n + 1);
    for x in 0..dim {
        let k = x.count_ones() as usize;
        d[(x, k)] = Complex64::new(1.0 / binomial(n, k).sqrt(), 0.0);
    }
    let block = d.adjoint() * h.matrix() * &d;
    // Hermitian up to rounding; symmetrize so the eigensolver sees an exact one
    Ok((&block + block.adjoint()) * Complex64::new(0.5, 0.0))
}

/// [`evolve_with`] under the default options.
pub fn evolve(h: &HermitianOperator, psi0: &SymmetricState, betas: &[f64]) -> Result<Trajectory> {
    evolve_with(h, psi0, betas, &EvolveOptions::default())
}

/// Evolves `psi0` under `exp(-iβH)` in the `(n + 1)`-dimensional symmetric
/// block and follows the stars, bisecting grid steps whose largest matched
/// move exceeds `opts.step_bound`.
pub fn evolve_with(
    h: &HermitianOperator,
    psi0: &SymmetricState,
    betas: &[f64],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    const OP: &str = "evolve";
    if h.n() != psi0.n() {
        return Err(StellarError::domain(OP, format!("H acts on {} qubits, state has {}", h.n(), psi0.n())));
    }
    check_grid(OP, betas)?;
    if opts.step_bound.is_nan() || opts.step_bound <= 0.0 || opts.symmetry_tol.is_nan() || opts.symmetry_tol <= 0.0 {
        return Err(StellarError::domain(OP, "step bound and symmetry tolerance must be positive"));
    }
    let spectral = Spectral::new(OP, symmetric_block(h, opts.symmetry_tol)?)?;
    let c0 = DVector::from_column_slice(psi0.dicke());
    let at = |beta: f64| -> Result<(SymmetricState, Constellation)> {
        let c = spectral.propagator(beta) * &c0;
        let state = SymmetricState::from_dicke(c.iter().copied().collect())?;
        let stars = state_to_stars(&state)?;
        Ok((state, stars))
    };

    let (s0, c0_stars) = at(betas[0])?;
    let mut traj = Trajectory {
        betas: vec![betas[0]],
        e_b: vec![e_b_constellation(&c0_stars)],
        states: vec![s0],
        constellations: vec![c0_stars],
        discontinuities: vec![false],
    };
    for &target in &betas[1..] {
        // pending stack of (β, depth); the top is the next point to try
        let mut pending = vec![(target, 0u32)];
        while let Some(&(beta, depth)) = pending.last() {
            let prev_beta = *traj.betas.last().expect("trajectory is non-empty");
            let prev = traj.constellations.last().expect("trajectory is non-empty");
            let (state, stars) = at(beta)?;
            let (matched, worst) = match_stars(prev, &stars);
            if worst > opts.step_bound && depth < opts.max_depth {
                pending.push((0.5 * (prev_beta + beta), depth + 1));
                continue;
            }
            pending.pop();
            let matched = Constellation::new(matched)?;
            traj.betas.push(beta);
            traj.e_b.push(e_b_constellation(&matched));
            traj.states.push(state);
            traj.constellations.push(matched);
            traj.discontinuities.push(worst > opts.step_bound);
        }
    }
    Ok(traj)
}

/// Evolution in the full `2^n` space, kept as an independent check of the
/// reduced path.
pub fn evolve_full(h: &HermitianOperator, psi0: &SymmetricState, beta: f64) -> Result<FullState> {
    if h.n() != psi0.n() {
        return Err(StellarError::domain("evolve_full", "qubit counts differ"));
    }
    let u = exponentiate(h, beta)?;
    let v = DVector::from_column_slice(embed_full(psi0).amplitudes());
    FullState::new(h.n(), (u * v).iter().copied().collect())
}

fn check_grid(op: &'static str, betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(StellarError::domain(op, "empty beta grid"));
    }
    if betas.iter().any(|b| !b.is_finite()) {
        return Err(StellarError::domain(op, "beta grid contains a non-finite value"));
    }
    let increasing = betas.windows(2).all(|w| w[1] > w[0]);
    let decreasing = betas.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(StellarError::domain(op, "beta grid must be strictly monotone"));
    }
    Ok(())
}

/// Reorders `next` so that star `i` continues star `i` of `prev`, minimizing
/// the total geodesic distance. Returns the reordered stars and the largest
/// single move.
pub fn match_stars(prev: &Constellation, next: &Constellation) -> (Vec<Star>, f64) {
    let (a, b) = (prev.stars(), next.stars());
    let n = a.len();
    let cost: Vec<Vec<f64>> = a.iter().map(|p| b.iter().map(|q| p.geodesic(q)).collect()).collect();
    let assignment = if n <= 6 { exhaustive_assignment(&cost) } else { hungarian(&cost) };
    let worst = assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max);
    (assignment.iter().map(|&j| b[j]).collect(), worst)
}

/// Minimum-cost permutation by enumeration; ties resolve to the first
/// permutation in lexicographic order.
fn exhaustive_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut best = (f64::INFINITY, (0..n).collect::<Vec<_>>());
    for perm in (0..n).permutations(n) {
        let total: f64 = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        if total < best.0 {
            best = (total, perm);
        }
    }
    best.1
}

/// Hungarian method with potentials, `O(n^3)`: row `i` is assigned column
/// `result[i]`.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based arrays; column 0 is a sentinel
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let i0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = col0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut result = vec![0usize; n];
    for j in 1..=n {
        result[owner[j] - 1] = j - 1;
    }
    result
}

/// Per-star polar-angle velocities `dθ_i/dβ` along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityProfile {
    pub betas: Vec<f64>,
    /// `dtheta[t][i]` for grid point `t` and star `i`.
    pub dtheta: Vec<Vec<f64>>,
    /// Marks points inside a divergence window.
    pub flags: Vec<Vec<bool>>,
}

/// Jump in `θ` over one step that marks a divergence window.
pub const THETA_JUMP: f64 = 1.0;
/// Relative disagreement of the backward and forward slopes that marks a
/// velocity the grid does not resolve.
pub const SLOPE_MISMATCH: f64 = 0.1;

/// Three-point finite differences of the matched polar angles on the
/// (possibly non-uniform) grid, one-sided at the ends.
///
/// A point is flagged when a neighbouring step changes `θ` by more than
/// [`THETA_JUMP`], when the trajectory marks it as a discontinuity, or when
/// its backward and forward slopes differ by more than [`SLOPE_MISMATCH`]
/// relative to `max(|dθ/dβ|, 1)`, which is where `θ` has a square-root type
/// singularity at a pole or a star collision. End points inherit the flag of
/// their neighbour.
pub fn velocity(traj: &Trajectory) -> Result<VelocityProfile> {
    let len = traj.len();
    if len < 3 {
        return Err(StellarError::domain("velocity", format!("need at least 3 grid points, got {len}")));
    }
    let n = traj.n();
    let x = &traj.betas;
    let theta: Vec<Vec<f64>> =
        traj.constellations.iter().map(|c| c.stars().iter().map(Star::theta).collect()).collect();
    let mut dtheta = vec![vec![0.0; n]; len];
    let mut flags = vec![vec![false; n]; len];
    for t in 0..len {
        // stencil points and weights for f'(x_t)
        let (idx, w) = if t == 0 {
            let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
            ([0, 1, 2], [-(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))])
        } else if t == len - 1 {
            let (h1, h2) = (x[t - 1] - x[t - 2], x[t] - x[t - 1]);
            ([t - 2, t - 1, t], [h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (2.0 * h2 + h1) / (h2 * (h1 + h2))])
        } else {
            let (h1, h2) = (x[t] - x[t - 1], x[t + 1] - x[t]);
            ([t - 1, t, t + 1], [-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))])
        };
        for i in 0..n {
            let d: f64 = (0..3).map(|s| w[s] * theta[idx[s]][i]).sum();
            dtheta[t][i] = d;
            let jump = (theta[idx[1]][i] - theta[idx[0]][i]).abs().max((theta[idx[2]][i] - theta[idx[1]][i]).abs());
            let mut flag = jump > THETA_JUMP || traj.discontinuities[t];
            if t > 0 && t < len - 1 {
                let back = (theta[t][i] - theta[t - 1][i]) / (x[t] - x[t - 1]);
                let fwd = (theta[t + 1][i] - theta[t][i]) / (x[t + 1] - x[t]);
                flag |= (back - fwd).abs() > SLOPE_MISMATCH * d.abs().max(1.0);
            }
            flags[t][i] = flag;
        }
    }
    // the one-sided end stencils have no slope pair of their own
    let (first, last) = (flags[1].clone(), flags[len - 2].clone());
    for (f, g) in flags[0].iter_mut().zip(first) {
        *f |= g;
    }
    for (f, g) in flags[len - 1].iter_mut().zip(last) {
        *f |= g;
    }
    Ok(VelocityProfile { betas: x.clone(), dtheta, flags })
}

/// `(β, E_B)` along a trajectory.
pub fn e_b_profile(traj: &Trajectory) -> Vec<(f64, f64)> {
    traj.betas.iter().copied().zip(traj.e_b.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamspec::hamiltonian;
    use crate::state::dicke_state;

    #[test]
    fn two_qubit_basis_has_singlet_complement() {
        let t = TransitionBasis::build(2).unwrap();
        let m = t.matrix();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // MGS from |00>, |01>: |01> minus its symmetric part is the singlet
        let expected = [0.0, s, -s, 0.0];
        for (r, e) in expected.iter().enumerate() {
            assert!((m[(r, 3)] - Complex64::new(*e, 0.0)).norm() < 1e-15);
        }
        for n in 1..=6 {
            assert!(unitarity_deficit(TransitionBasis::build(n).unwrap().matrix()) < 1e-12);
        }
    }

    #[test]
    fn identity_reduces_to_identities() {
        let d = reduce(&DMatrix::identity(8, 8), 1e-10).unwrap();
        assert_eq!(d.offblock_norm, 0.0);
        assert!(unitarity_deficit(&d.v) < 1e-14 && (d.v.clone() - DMatrix::identity(4, 4)).norm() < 1e-14);
        assert!((d.w.clone() - DMatrix::identity(4, 4)).norm() < 1e-14);
    }

    #[test]
    fn non_symmetric_unitary_is_rejected() {
        let h = hamiltonian("X x I").unwrap();
        let u = exponentiate(&h, 0.4).unwrap();
        let err = reduce(&u, 1e-10).unwrap_err();
        assert!(matches!(err, StellarError::SymmetryViolation { deficit, .. } if deficit > 0.1));
    }

    #[test]
    fn exponential_at_zero_and_group_law() {
        let h = hamiltonian("sym(X Z P0)").unwrap();
        assert!((exponentiate(&h, 0.0).unwrap() - DMatrix::identity(8, 8)).norm() < 1e-13);
        let ab = exponentiate(&h, 0.3).unwrap() * exponentiate(&h, 0.5).unwrap();
        assert!((ab - exponentiate(&h, 0.8).unwrap()).camax() < 1e-12);
    }

    #[test]
    fn hungarian_agrees_with_enumeration() {
        let cost = vec![
            vec![4.0, 1.0, 3.0, 2.5],
            vec![2.0, 0.0, 5.0, 1.0],
            vec![3.0, 2.0, 2.0, 0.5],
            vec![1.5, 3.0, 0.2, 4.0],
        ];
        let a = hungarian(&cost);
        let b = exhaustive_assignment(&cost);
        let total = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>();
        assert!((total(&a) - total(&b)).abs() < 1e-15);
    }

    #[test]
    fn eigenstate_has_static_stars() {
        // Dicke states are eigenstates of the collective Z field
        let h = hamiltonian("Z x I x I + I x Z x I + I x I x Z").unwrap();
        let betas: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let traj = evolve(&h, &dicke_state(3, 1).unwrap(), &betas).unwrap();
        let v = velocity(&traj).unwrap();
        assert!(v.dtheta.iter().flatten().all(|d| d.abs() < 1e-12));
    }

    #[test]
    fn grid_must_be_monotone() {
        let h = hamiltonian("H(0,3)").unwrap();
        let err = evolve(&h, &dicke_state(2, 0).unwrap(), &[0.0, 0.2, 0.1]).unwrap_err();
        assert!(matches!(err, StellarError::Domain { .. }));
    }
}
