//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};

use crate::{Result, ScatterError, C64};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type CMatrix4 = Matrix4<C64>;
pub type CVector4 = Vector4<C64>;

const POWER_MIN_ITER: usize = 20;
const POWER_MAX_ITER: usize = 20_000;

/// Deterministic, generic start vector for power iterations.
pub fn seed_vector(n: usize) -> CVector {
    // xorshift64* stream; any fixed sequence with no special structure works here
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = || {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        (state.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    CVector::from_fn(n, |_, _| C64::new(1.0 + next(), next()))
}

/// Largest singular value of a matrix-free operator on `C^n` by power iteration on `A*A`.
///
/// Iterates until the estimate changes by less than `tol / 100` relative, which in
/// practice leaves the estimate within `tol` of the top singular value.
pub fn op_norm_matrix_free(
    n: usize,
    apply: impl Fn(&CVector) -> CVector,
    apply_adjoint: impl Fn(&CVector) -> CVector,
    tol: f64,
) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut v = seed_vector(n);
    v /= C64::new(v.norm(), 0.0);
    let mut sigma = 0.0;
    for it in 0..POWER_MAX_ITER {
        let u = apply(&v);
        let s = u.norm();
        if s == 0.0 {
            return 0.0;
        }
        let y = apply_adjoint(&u);
        let yn = y.norm();
        if yn == 0.0 {
            return s;
        }
        v = y / C64::new(yn, 0.0);
        let converged = it >= POWER_MIN_ITER && (s - sigma).abs() <= 0.01 * tol * s;
        sigma = s;
        if converged {
            break;
        }
    }
    sigma
}

/// Largest singular value of a dense square matrix (power iteration on `M*M`).
pub fn op_norm_estimate(m: &CMatrix, tol: f64) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(ScatterError::Config(format!(
            "operator norm needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(op_norm_matrix_free(m.nrows(), |v| m * v, |v| m.ad_mul(v), tol))
}

/// Dense inverse by LU with partial pivoting.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(ScatterError::Config("inverse needs a square matrix".into()));
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| ScatterError::Singular(format!("{}x{} LU factorization", m.nrows(), m.ncols())))
}

/// Inverse of a 4x4 interface matrix.
pub fn inverse4(m: &CMatrix4) -> Result<CMatrix4> {
    m.lu().try_inverse().ok_or_else(|| ScatterError::Singular("4x4 interface matrix".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_norm_is_one() {
        let m = CMatrix::identity(10, 10);
        assert!((op_norm_estimate(&m, 1e-10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_norm_is_largest_entry() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(3.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.5, 0.0),
        ]));
        assert!((op_norm_estimate(&m, 1e-10).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn non_square_rejected() {
        let m = CMatrix::zeros(3, 4);
        assert!(op_norm_estimate(&m, 1e-8).is_err());
    }

    #[test]
    fn zero_matrix_has_zero_norm() {
        assert_eq!(op_norm_estimate(&CMatrix::zeros(5, 5), 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn inverse_of_singular_fails() {
        assert!(inverse(&CMatrix::zeros(3, 3)).is_err());
    }
}
