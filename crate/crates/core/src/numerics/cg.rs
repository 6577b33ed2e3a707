//! Jacobi-preconditioned conjugate gradients and a dense Cholesky fallback.

use super::sparse::SparseSymmetric;
use crate::error::{Error, Result};

/// Outcome of a converged solve.
#[derive(Debug, Clone)]
pub struct CgReport {
    pub iterations: usize,
    /// Relative residual ‖b - Ax‖/‖b‖ after each iteration (entry 0 is the start).
    pub history: Vec<f64>,
}

/// Solves `A x = b` for symmetric positive definite `A` with
/// ‖Ax − b‖ ≤ tol·‖b‖.
pub fn solve_spd(a: &SparseSymmetric, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    solve_spd_monitored(a, b, tol, max_iter, |_, _| {}).map(|(x, _)| x)
}

/// Same as [`solve_spd`]; `monitor` sees every iterate `(k, x_k)`.
pub fn solve_spd_monitored<F>(
    a: &SparseSymmetric,
    b: &[f64],
    tol: f64,
    max_iter: usize,
    mut monitor: F,
) -> Result<(Vec<f64>, CgReport)>
where
    F: FnMut(usize, &[f64]),
{
    let n = a.dim();
    assert_eq!(b.len(), n);
    let a = a.csr();
    let mut x = vec![0.0; n];
    let b_norm = norm(b);
    let mut history = vec![if b_norm == 0.0 { 0.0 } else { 1.0 }];
    monitor(0, &x);
    if b_norm == 0.0 {
        return Ok((x, CgReport { iterations: 0, history }));
    }

    let inv_diag: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);

    for k in 1..=max_iter {
        a.mul_vec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "matrix is not positive definite (pᵀAp = {pap:e})"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        monitor(k, &x);
        let rel = norm(&r) / b_norm;
        history.push(rel);
        if rel <= tol {
            return Ok((
                x,
                CgReport {
                    iterations: k,
                    history,
                },
            ));
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual: *history.last().unwrap(),
        tolerance: tol,
        history,
    })
}

/// Dense Cholesky solve; intended for small systems.
pub fn solve_spd_dense(a: &SparseSymmetric, b: &[f64]) -> Result<Vec<f64>> {
    let dense = a.csr().to_dense();
    let chol = nalgebra::Cholesky::new(dense).ok_or_else(|| {
        Error::InvalidParameter("matrix is not positive definite (Cholesky failed)".into())
    })?;
    let x = chol.solve(&nalgebra::DVector::from_column_slice(b));
    Ok(x.as_slice().to_vec())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sparse::Triplets;

    fn laplacian_1d(n: usize) -> SparseSymmetric {
        let mut t = Triplets::new(n);
        for i in 0..n {
            t.add(i, i, 2.0);
            if i + 1 < n {
                t.add(i, i + 1, -1.0);
                t.add(i + 1, i, -1.0);
            }
        }
        SparseSymmetric::from_triplets(&t).unwrap()
    }

    #[test]
    fn identity_returns_rhs() {
        let mut t = Triplets::new(4);
        for i in 0..4 {
            t.add(i, i, 1.0);
        }
        let a = SparseSymmetric::from_triplets(&t).unwrap();
        let b = [1.0, -2.0, 3.0, 0.5];
        let x = solve_spd(&a, &b, 1e-14, 10).unwrap();
        assert_eq!(x, b.to_vec());
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let a = laplacian_1d(5);
        let x = solve_spd(&a, &[0.0; 5], 1e-12, 100).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn iteration_cap_reports_history() {
        let a = laplacian_1d(50);
        let b = vec![1.0; 50];
        match solve_spd(&a, &b, 1e-14, 3) {
            Err(Error::NotConverged { history, .. }) => assert_eq!(history.len(), 4),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
