//! Dense complex factorizations used by the subspace layer.
//!
//! Everything rank-sensitive goes through a one-sided Jacobi
//! orthogonalization: columns are rotated pairwise until mutually
//! orthogonal, which keeps full relative accuracy on clustered and
//! deficient spectra where implicit-QR singular value solvers can fail
//! (a projector residual `I - P` is the canonical bad case).

use crate::{CMatrix, CVector, C64};

/// Singular value decomposition `A = U diag(sigma) V^H` with `U` of the
/// same shape as `A` (columns beyond the rank are zero) and optional `V`.
pub struct JacobiSvd {
    /// Orthogonalized, unnormalized columns: `U * diag(sigma)`.
    pub scaled_u: CMatrix,
    /// Column norms of `scaled_u`, sorted descending.
    pub sigma: Vec<f64>,
    /// Right factor, accumulated only on request.
    pub v: Option<CMatrix>,
}

const MAX_SWEEPS: usize = 64;
const PAIR_TOL: f64 = 1e-15;

/// One-sided Jacobi: rotate column pairs of a working copy of `a` until
/// every pair is orthogonal, accumulating the rotations into `V` when
/// `want_v` is set. Deterministic, and convergent in a handful of sweeps
/// at the sizes this crate works with.
pub fn jacobi_svd(a: &CMatrix, want_v: bool) -> JacobiSvd {
    let k = a.ncols();
    let mut w = a.clone();
    let mut v = if want_v {
        Some(CMatrix::identity(k, k))
    } else {
        None
    };

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let wp = w.column(p).into_owned();
                let wq = w.column(q).into_owned();
                let app = wp.norm_squared();
                let aqq = wq.norm_squared();
                // Flush drained columns to exact zero so denormals cannot
                // poison later rotations.
                if app < f64::MIN_POSITIVE {
                    w.set_column(p, &CVector::zeros(w.nrows()));
                    continue;
                }
                if aqq < f64::MIN_POSITIVE {
                    w.set_column(q, &CVector::zeros(w.nrows()));
                    continue;
                }
                let apq: C64 = wp.dotc(&wq); // = w_p^H w_q
                let mag = apq.norm();
                if mag <= PAIR_TOL * app.sqrt() * aqq.sqrt() {
                    continue;
                }
                rotated = true;
                // Scalar division; full complex division would square `mag`
                // internally and can underflow.
                let phase = apq / mag;
                let zeta = (aqq - app) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let cs_c = C64::new(cs, 0.0);
                let sn_phase = phase * C64::new(sn, 0.0);
                // [w_p', w_q'] = [w_p, w_q] * [[cs, sn*phase], [-sn*conj(phase), cs]]
                let new_p = &wp * cs_c - &wq * sn_phase.conj();
                let new_q = &wp * sn_phase + &wq * cs_c;
                w.set_column(p, &new_p);
                w.set_column(q, &new_q);
                if let Some(vm) = v.as_mut() {
                    let vp = vm.column(p).into_owned();
                    let vq = vm.column(q).into_owned();
                    let new_vp = &vp * cs_c - &vq * sn_phase.conj();
                    let new_vq = &vp * sn_phase + &vq * cs_c;
                    vm.set_column(p, &new_vp);
                    vm.set_column(q, &new_vq);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Sort columns by norm, descending, carrying V along.
    let mut order: Vec<usize> = (0..k).collect();
    let norms: Vec<f64> = (0..k).map(|j| w.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let mut sorted_w = CMatrix::zeros(a.nrows(), k);
    let mut sorted_v = v.as_ref().map(|_| CMatrix::zeros(k, k));
    let mut sigma = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        sorted_w.set_column(dst, &w.column(src));
        sigma.push(norms[src]);
        if let (Some(sv), Some(vm)) = (sorted_v.as_mut(), v.as_ref()) {
            sv.set_column(dst, &vm.column(src));
        }
    }
    JacobiSvd {
        scaled_u: sorted_w,
        sigma,
        v: sorted_v,
    }
}

impl JacobiSvd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Orthonormal columns whose singular value exceeds `cutoff`.
    pub fn basis_above(&self, cutoff: f64) -> CMatrix {
        let kept: Vec<usize> = self
            .sigma
            .iter()
            .enumerate()
            .filter(|(_, s)| **s > cutoff)
            .map(|(i, _)| i)
            .collect();
        let mut basis = CMatrix::zeros(self.scaled_u.nrows(), kept.len());
        for (j, &i) in kept.iter().enumerate() {
            let col = self.scaled_u.column(i) / C64::new(self.sigma[i], 0.0);
            basis.set_column(j, &col);
        }
        basis
    }

    /// Minimum-norm least-squares solve of `A x = b` (for each column of
    /// `b`) using the factorization of `A`, dropping directions with
    /// singular value at or below `cutoff`.
    pub fn solve(&self, b: &CMatrix, cutoff: f64) -> CMatrix {
        let v = self
            .v
            .as_ref()
            .expect("least-squares solve needs the right factor");
        let k = v.nrows();
        let mut x = CMatrix::zeros(k, b.ncols());
        for (i, &s) in self.sigma.iter().enumerate() {
            if s <= cutoff || s == 0.0 {
                continue;
            }
            // u_i^H b = (scaled_u_i / s)^H b
            let ui = self.scaled_u.column(i);
            let vi = v.column(i);
            for col in 0..b.ncols() {
                let coeff: C64 = ui.dotc(&b.column(col).into_owned()) / C64::new(s * s, 0.0);
                for row in 0..k {
                    x[(row, col)] += vi[row] * coeff;
                }
            }
        }
        x
    }
}

/// Largest singular value via the Jacobi factorization.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    jacobi_svd(a, false).sigma_max()
}

/// All singular values, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    jacobi_svd(a, false).sigma
}

/// Convenience: minimum-norm least squares for a single right-hand side.
pub fn solve_min_norm(a: &CMatrix, b: &CVector, rel_cutoff: f64) -> CVector {
    let svd = jacobi_svd(a, true);
    let cutoff = svd.sigma_max() * rel_cutoff;
    let rhs = CMatrix::from_column_slice(b.len(), 1, b.as_slice());
    CVector::from(svd.solve(&rhs, cutoff).column(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{random_matrix, rng};

    #[test]
    fn factorization_reconstructs() {
        let mut rg = rng(1);
        for (rows, cols) in [(5, 3), (3, 5), (6, 6), (1, 1)] {
            let a = random_matrix(rows, cols, &mut rg);
            let svd = jacobi_svd(&a, true);
            let v = svd.v.as_ref().unwrap();
            let recon = &svd.scaled_u * v.adjoint();
            assert!((recon - &a).norm() < 1e-12, "{rows}x{cols}");
            // V unitary.
            let eye = CMatrix::identity(cols, cols);
            assert!((v.adjoint() * v - eye).norm() < 1e-12);
        }
    }

    #[test]
    fn projector_residual_case() {
        // The case where implicit-QR SVD breaks down: I - P for a rank-4
        // projector in dimension 5 has singular values {1, 0, 0, 0, 0}.
        let mut rg = rng(460);
        let a = random_matrix(5, 4, &mut rg);
        let svd = jacobi_svd(&a, false);
        let basis = svd.basis_above(svd.sigma_max() * 1e-10);
        let p = &basis * basis.adjoint();
        let resid = CMatrix::identity(5, 5) - &p;
        let rsvd = jacobi_svd(&resid, false);
        assert!((rsvd.sigma_max() - 1.0).abs() < 1e-12);
        assert_eq!(rsvd.sigma.iter().filter(|s| **s > 0.5).count(), 1);
    }

    #[test]
    fn singular_values_match_known_diagonal() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = C64::new(0.0, 3.0);
        m[(1, 1)] = C64::new(-2.0, 0.0);
        m[(2, 2)] = C64::new(0.6, 0.8);
        let s = singular_values(&m);
        assert!((s[0] - 3.0).abs() < 1e-14);
        assert!((s[1] - 2.0).abs() < 1e-14);
        assert!((s[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn least_squares_hits_exact_solution() {
        let mut rg = rng(7);
        let a = random_matrix(6, 3, &mut rg);
        let x_true = crate::test_util::random_vector(3, &mut rg);
        let b = &a * &x_true;
        let x = solve_min_norm(&a, &b, 1e-12);
        assert!((x - x_true).norm() < 1e-10);
    }

    #[test]
    fn least_squares_minimum_norm_on_deficient_system() {
        // A has rank 1; the minimum-norm solution lies along the row space.
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = C64::new(1.0, 0.0);
        a[(0, 1)] = C64::new(1.0, 0.0);
        let b = CVector::from_vec(vec![C64::new(2.0, 0.0), C64::new(0.0, 0.0)]);
        let x = solve_min_norm(&a, &b, 1e-12);
        assert!((x[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((x[1] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

