//! All roots of a complex polynomial.
//!
//! Initial approximations come from the eigenvalues of the balanced
//! companion matrix; they are then refined simultaneously with the
//! Aberth-Ehrlich iteration. Roots of modulus above one are refined on the
//! reversed polynomial, which keeps Horner evaluation well scaled.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Result, StellarError};
use crate::state::ZERO;

const MAX_ABERTH_ITERATIONS: usize = 1000;

/// Horner evaluation of `p(z) = Σ c_k z^k` and `p'(z)`, plus the running
/// magnitude `Σ |c_k| |z|^k` used to judge the residual.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    let mut bound = 0.0;
    let az = z.norm();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * az + c.norm();
    }
    (p, dp, bound)
}

/// `j`-th Taylor coefficient `p^{(j)}(c) / j!` together with its magnitude
/// bound `Σ_k C(k,j) |c_k| |c|^{k-j}`.
///
/// The value is accumulated in double-double, so its error is far below the
/// perturbation carried by the coefficients themselves.
pub fn taylor_coefficient(coeffs: &[Complex64], center: Complex64, j: usize) -> (Complex64, f64) {
    let zero = TwoFloat::from(0.0);
    let (mut re, mut im) = (zero, zero);
    let mut bound = 0.0;
    let ac = center.norm();
    for (k, c) in coeffs.iter().enumerate().skip(j).rev() {
        let w = crate::state::binomial(k, j);
        let next_re = re * center.re - im * center.im + TwoFloat::new_mul(c.re, w);
        im = re * center.im + im * center.re + TwoFloat::new_mul(c.im, w);
        re = next_re;
        bound = bound * ac + c.norm() * w;
    }
    (Complex64::new(f64::from(re), f64::from(im)), bound)
}

/// Newton correction `p(z)/p'(z)` evaluated stably for any `|z|`, together
/// with the relative residual `|p(z)| / Σ|c_k||z|^k`.
fn newton_correction(coeffs: &[Complex64], z: Complex64) -> (Option<Complex64>, f64) {
    let degree = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp, bound) = horner(coeffs, z);
        let rel = if bound > 0.0 { p.norm() / bound } else { 0.0 };
        let corr = if dp == ZERO { None } else { Some(p / dp) };
        (corr, rel)
    } else {
        // p(z) = z^D r(u) with u = 1/z and r the reversed polynomial:
        // p'/p = u (D - u r'(u)/r(u))
        let u = z.inv();
        let rev: Vec<Complex64> = coeffs.iter().rev().copied().collect();
        let (r, dr, bound) = horner(&rev, u);
        let rel = if bound > 0.0 { r.norm() / bound } else { 0.0 };
        if r == ZERO {
            return (Some(ZERO), 0.0);
        }
        let denom = u * (Complex64::new(degree as f64, 0.0) - u * dr / r);
        let corr = if denom == ZERO { None } else { Some(denom.inv()) };
        (corr, rel)
    }
}

/// Parlett-Reinsch balancing by powers of two; eigenvalues are unchanged.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let norm1 = |z: &Complex64| z.re.abs() + z.im.abs();
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += norm1(&m[(j, i)]);
                    r += norm1(&m[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            while cc < r / 2.0 {
                f *= 2.0;
                cc *= 4.0;
            }
            while cc >= r * 2.0 {
                f /= 2.0;
                cc /= 4.0;
            }
            if (c * f + r / f) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Eigenvalues of the balanced companion matrix of a polynomial with
/// non-vanishing leading coefficient.
pub fn companion_eigenvalues(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let mut m = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        m[(i, degree - 1)] = -coeffs[i] / lead;
    }
    balance(&mut m);
    let schur = Schur::try_new(m, f64::EPSILON, 100 * degree.max(10))?;
    let eig = schur.eigenvalues()?;
    Some(eig.iter().copied().collect())
}

/// Starting points on a circle, used when the eigenvalue route fails.
fn circle_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    let radius = (coeffs[0].norm() / coeffs[degree].norm()).powf(1.0 / degree as f64);
    (0..degree)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / degree as f64 + 0.4))
        .collect()
}

/// Simultaneous Aberth-Ehrlich refinement of all roots in place.
///
/// A root is frozen once its relative residual is at rounding level or its
/// correction no longer changes it.
pub fn aberth_refine(coeffs: &[Complex64], roots: &mut [Complex64]) -> usize {
    let degree = roots.len();
    let tol = 4.0 * (degree as f64 + 1.0) * f64::EPSILON;
    let mut done = vec![false; degree];
    for iteration in 0..MAX_ABERTH_ITERATIONS {
        if done.iter().all(|&d| d) {
            return iteration;
        }
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let z = roots[i];
            let (corr, rel) = newton_correction(coeffs, z);
            if rel <= tol {
                done[i] = true;
                continue;
            }
            let Some(newton) = corr else {
                // stationary point of p: nudge and retry next sweep
                roots[i] = z + Complex64::new(1e-8, 1e-8) * (1.0 + z.norm());
                continue;
            };
            let mut repulsion = ZERO;
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    let diff = z - zj;
                    if diff != ZERO {
                        repulsion += diff.inv();
                    }
                }
            }
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            let next = z - step;
            if !(next.re.is_finite() && next.im.is_finite()) {
                done[i] = true;
                continue;
            }
            roots[i] = next;
            if step.norm() <= f64::EPSILON * next.norm() {
                done[i] = true;
            }
        }
    }
    MAX_ABERTH_ITERATIONS
}

/// All roots of `Σ coeffs[k] z^k`, with multiplicity.
///
/// Exact zero high-order coefficients lower the degree; exact zero
/// low-order coefficients become roots at the origin.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    const OP: &str = "polynomial_roots";
    if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(StellarError::domain(OP, "non-finite coefficient"));
    }
    let Some(top) = coeffs.iter().rposition(|c| *c != ZERO) else {
        return Err(StellarError::domain(OP, "zero polynomial"));
    };
    let zeros_at_origin = coeffs.iter().position(|c| *c != ZERO).unwrap_or(0);
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    let reduced: Vec<Complex64> = coeffs[zeros_at_origin..=top].iter().map(|c| c / scale).collect();

    let mut roots = vec![ZERO; zeros_at_origin];
    let degree = reduced.len() - 1;
    match degree {
        0 => {}
        1 => roots.push(-reduced[0] / reduced[1]),
        _ => {
            let mut found = companion_eigenvalues(&reduced)
                .filter(|r| r.len() == degree && r.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
                .unwrap_or_else(|| circle_guesses(&reduced));
            aberth_refine(&reduced, &mut found);
            roots.extend(found);
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![ZERO; p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            p = next;
        }
        p
    }

    fn matched_error(found: &[Complex64], expect: &[Complex64]) -> f64 {
        let mut used = vec![false; expect.len()];
        let mut worst = 0.0_f64;
        for f in found {
            let (j, d) = expect
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, e)| (j, (f - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            used[j] = true;
            worst = worst.max(d);
        }
        worst
    }

    #[test]
    fn recovers_known_roots() {
        let expect = [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0), c(0.25, -0.25), c(-0.7, -1.1)];
        let found = polynomial_roots(&from_roots(&expect)).unwrap();
        assert_eq!(found.len(), 5);
        assert!(matched_error(&found, &expect) < 1e-12);
    }

    #[test]
    fn handles_zero_coefficients() {
        // z^2 (z - 2) with trailing zero high coefficients
        let found = polynomial_roots(&[ZERO, ZERO, c(-2.0, 0.0), c(1.0, 0.0), ZERO]).unwrap();
        assert!(matched_error(&found, &[ZERO, ZERO, c(2.0, 0.0)]) < 1e-15);
        assert!(polynomial_roots(&[c(3.0, 0.0)]).unwrap().is_empty());
        assert!(polynomial_roots(&[ZERO, ZERO]).is_err());
    }

    #[test]
    fn cube_roots_of_unity() {
        let found = polynomial_roots(&[c(-1.0, 0.0), ZERO, ZERO, c(1.0, 0.0)]).unwrap();
        let expect: Vec<_> =
            (0..3).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0)).collect();
        assert!(matched_error(&found, &expect) < 1e-15);
    }

    #[test]
    fn residual_below_target() {
        let expect: Vec<_> = (0..30).map(|k| Complex64::from_polar(0.2 + 0.05 * k as f64, 2.4 * k as f64)).collect();
        let p = from_roots(&expect);
        let scale = p.iter().fold(0.0_f64, |m, a| m.max(a.norm()));
        let rev: Vec<Complex64> = p.iter().rev().copied().collect();
        for z in polynomial_roots(&p).unwrap() {
            // residual of the homogeneous form, evaluated in the chart with |z| <= 1
            let (v, _, _) = if z.norm() <= 1.0 { horner(&p, z) } else { horner(&rev, z.inv()) };
            assert!(v.norm() <= 1e-12 * scale, "residual {}", v.norm() / scale);
        }
    }

    #[test]
    fn taylor_coefficients_of_cubic() {
        // (z - 1)^3 = z^3 - 3z^2 + 3z - 1 has vanishing Taylor terms j < 3 at 1
        let p = [c(-1.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)];
        for j in 0..3 {
            assert!(taylor_coefficient(&p, c(1.0, 0.0), j).0.norm() < 1e-15);
        }
        assert!((taylor_coefficient(&p, c(1.0, 0.0), 3).0 - c(1.0, 0.0)).norm() < 1e-15);
        let (v, _) = taylor_coefficient(&p, c(2.0, 0.0), 1);
        assert!((v - c(3.0, 0.0)).norm() < 1e-14);
    }
}
