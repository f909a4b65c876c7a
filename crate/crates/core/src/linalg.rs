//! Small dense linear algebra used by the field and Lyapunov code.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `A₀`: ones on the superdiagonal.
pub fn shift_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if j == i + 1 { 1.0 } else { 0.0 })
}

/// `A₀ + K C` with `C = [1 0 … 0]`, i.e. `column` placed in the first column.
pub fn output_injection(column: &[f64]) -> DMatrix<f64> {
    let mut a = shift_matrix(column.len());
    for (i, k) in column.iter().enumerate() {
        a[(i, 0)] += k;
    }
    a
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &DMatrix<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::invalid("solve_dense: dimension mismatch"));
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.amax().max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .unwrap();
        if m[(pivot, col)].abs() <= 1e-14 * scale {
            return Err(Error::Singular("solve_dense"));
        }
        if pivot != col {
            m.swap_rows(pivot, col);
            x.swap(pivot, col);
        }
        for row in col + 1..n {
            let f = m[(row, col)] / m[(col, col)];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[(row, k)] -= f * m[(col, k)];
            }
            x[row] -= f * x[col];
        }
    }
    for row in (0..n).rev() {
        let mut acc = x[row];
        for k in row + 1..n {
            acc -= m[(row, k)] * x[k];
        }
        x[row] = acc / m[(row, row)];
    }
    Ok(x)
}

/// Inverse by column-wise [`solve_dense`].
pub fn invert(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut inv = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve_dense(a, &e)?;
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Largest real part among the eigenvalues of `a`.
pub fn spectral_abscissa(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues()
        .iter()
        .map(|c| c.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Fails unless every eigenvalue of `a` has real part below `-1e-9`.
pub fn ensure_hurwitz(a: &DMatrix<f64>, context: &'static str) -> Result<()> {
    let max_real_part = spectral_abscissa(a);
    if max_real_part < -1e-9 {
        Ok(())
    } else {
        Err(Error::NotHurwitz {
            context,
            max_real_part,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_needs_pivoting() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0]);
        let x = solve_dense(&a, &[5.0, 3.0, 6.0]).unwrap();
        let r = &a * DMatrix::from_column_slice(3, 1, &x);
        for (i, b) in [5.0, 3.0, 6.0].iter().enumerate() {
            assert!((r[(i, 0)] - b).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_detected() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(solve_dense(&a, &[1.0, 1.0]), Err(Error::Singular(_))));
    }

    #[test]
    fn hurwitz_gate() {
        assert!(ensure_hurwitz(&output_injection(&[-2.0, -1.0]), "t").is_ok());
        assert!(ensure_hurwitz(&output_injection(&[2.0, -1.0]), "t").is_err());
        assert!(ensure_hurwitz(&shift_matrix(2), "t").is_err());
    }
}
