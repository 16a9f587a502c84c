//! Thin wrappers over nalgebra decompositions with convergence guards.

use nalgebra::SymmetricEigen;

use crate::{CMatrix, CVector, Error, Result, C64};

const MAX_ITER: usize = 200_000;

/// Column-stacking vectorization.
pub(crate) fn vectorize(m: &CMatrix) -> CVector {
    // nalgebra stores column-major, so the raw slice is already column-stacked.
    CVector::from_column_slice(m.as_slice())
}

pub(crate) fn unvectorize(v: &[C64], n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v)
}

fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numerical("matrix has non-finite entries".into()))
    }
}

pub(crate) struct Svd {
    pub u: CMatrix,
    pub singular: Vec<f64>,
    pub v_t: CMatrix,
}

/// Thin SVD with singular values sorted in descending order.
///
/// Householder QR followed by one-sided Jacobi on the triangular factor. The
/// implicit-shift bidiagonal iteration in nalgebra can stop early on
/// rank-deficient complex input and return factors that do not reproduce `m`;
/// Jacobi does not have that failure mode and keeps small singular values
/// accurate, which the rank decisions depend on.
pub(crate) fn svd(m: &CMatrix) -> Result<Svd> {
    ensure_finite(m)?;
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(Svd {
            u: CMatrix::zeros(rows, 0),
            singular: Vec::new(),
            v_t: CMatrix::zeros(0, cols),
        });
    }
    if rows < cols {
        let t = svd(&m.adjoint())?;
        return Ok(Svd { u: t.v_t.adjoint(), singular: t.singular, v_t: t.u.adjoint() });
    }
    let qr = m.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let (u_r, singular, v) = jacobi_svd(r)?;
    Ok(Svd { u: q * u_r, singular, v_t: v.adjoint() })
}

/// One-sided Jacobi SVD of a square matrix: returns `(U, sigma, V)` with
/// `a = U diag(sigma) V^dagger`, sigma descending.
fn jacobi_svd(mut a: CMatrix) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    let k = a.ncols();
    let mut v = CMatrix::identity(k, k);
    let tol = f64::EPSILON * (k as f64).max(1.0);
    // Columns at round-off level relative to the whole matrix carry no information.
    let negligible = (f64::EPSILON * frobenius(&a)).powi(2);
    let mut converged = false;
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= negligible || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Phase-align column q so the off-diagonal Gram entry is real.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase;
                        mat[(i, p)] = xp * c - xq * s;
                        mat[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical("Jacobi SVD did not converge".into()));
    }
    let norms: Vec<f64> = (0..k).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let smax = norms[order[0]];
    let floor = smax * f64::EPSILON * k as f64;
    let mut u = CMatrix::zeros(k, k);
    let mut vs = CMatrix::zeros(k, k);
    let mut singular = Vec::with_capacity(k);
    let mut filled = 0;
    for (j, &src) in order.iter().enumerate() {
        vs.set_column(j, &v.column(src));
        singular.push(norms[src]);
        if norms[src] > floor && norms[src] > 0.0 {
            let col = a.column(src) / C64::new(norms[src], 0.0);
            u.set_column(j, &col);
            filled = j + 1;
        }
    }
    complete_orthonormal(&mut u, filled);
    Ok((u, singular, vs))
}

/// Replaces columns `from..` with an orthonormal completion of the first `from`.
fn complete_orthonormal(u: &mut CMatrix, from: usize) {
    let n = u.nrows();
    let mut next = from;
    for e in 0..n {
        if next >= u.ncols() {
            break;
        }
        let mut cand = CVector::zeros(n);
        cand[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for j in 0..next {
                let proj = u.column(j).dotc(&cand);
                cand -= u.column(j) * proj;
            }
        }
        let norm = cand.norm();
        if norm > 0.5 {
            u.set_column(next, &(cand / C64::new(norm, 0.0)));
            next += 1;
        }
    }
}

pub(crate) fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(svd(m)?.singular)
}

/// Orthonormal basis (as columns) of the range of `m`, keeping singular values
/// strictly above `rel_cut * sigma_max`.
pub(crate) fn range_basis(m: &CMatrix, rel_cut: f64) -> Result<CMatrix> {
    let s = svd(m)?;
    let smax = s.singular.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(CMatrix::zeros(m.nrows(), 0));
    }
    let keep = s.singular.iter().filter(|&&x| x > rel_cut * smax).count();
    Ok(s.u.columns(0, keep).into_owned())
}

/// Orthonormal basis (as columns) of the right nullspace of `m`: right singular
/// vectors with singular value at most `abs_cut`.
pub(crate) fn null_basis(m: &CMatrix, abs_cut: f64) -> Result<CMatrix> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    if rows == 0 {
        return Ok(CMatrix::identity(cols, cols));
    }
    // Pad with zero rows so the thin SVD yields the full right singular basis.
    let padded = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.rows_mut(0, rows).copy_from(m);
        p
    } else {
        m.clone()
    };
    let s = svd(&padded)?;
    let null: Vec<usize> = (0..cols).filter(|&k| s.singular[k] <= abs_cut).collect();
    let mut out = CMatrix::zeros(cols, null.len());
    for (j, &k) in null.iter().enumerate() {
        for i in 0..cols {
            out[(i, j)] = s.v_t[(k, i)].conj();
        }
    }
    Ok(out)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub(crate) fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    ensure_finite(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let scale = frobenius(&h).max(f64::MIN_POSITIVE);
    let accept = 1e3 * f64::EPSILON * (n as f64).sqrt();
    let eig = [4.0 * f64::EPSILON, f64::EPSILON, 16.0 * f64::EPSILON, 64.0 * f64::EPSILON]
        .into_iter()
        .filter_map(|eps| SymmetricEigen::try_new(h.clone(), eps, MAX_ITER))
        .find(|e| {
            let vecs = &e.eigenvectors;
            let lam = CMatrix::from_diagonal(&e.eigenvalues.map(|x| C64::new(x, 0.0)));
            frobenius(&(&h * vecs - vecs * lam)) / scale <= accept
                && frobenius(&(vecs.adjoint() * vecs - CMatrix::identity(n, n))) <= accept
        })
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (j, &k) in order.iter().enumerate() {
        vectors.set_column(j, &eig.eigenvectors.column(k));
    }
    Ok((values, vectors))
}

pub(crate) fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral (largest singular value) norm.
pub(crate) fn spectral_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}
