use crate::binmat::RealMatrix;
use crate::error::{Error, Result};
use crate::netcompile::EdgeData;
use crate::scalar::Scalar;

/// Eigenvalues `λ₊ > λ₋` of an edge and the matrix `F = (f₊, f₋)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeEigen<T: Scalar> {
    pub lambda_plus: T,
    pub lambda_minus: T,
    pub f: RealMatrix<T>,
}

impl<T: Scalar> EdgeEigen<T> {
    /// Number of positive eigenvalues.
    pub fn alpha(&self) -> u8 {
        u8::from(self.lambda_plus.is_positive()) + u8::from(self.lambda_minus.is_positive())
    }

    /// `|λ₊|` for the first invariant, `|λ₋|` for the second.
    pub fn speed(&self, c: usize) -> T {
        if c == 0 {
            self.lambda_plus.abs()
        } else {
            self.lambda_minus.abs()
        }
    }
}

fn sqrt_of<T: Scalar>(x: &T) -> T {
    x.try_sqrt().unwrap_or_else(|| T::from_f64_lossy(x.to_f64_lossy().sqrt()))
}

/// Unit length, first nonzero coordinate positive.
fn normalize<T: Scalar>(v: (T, T)) -> (T, T) {
    let norm = sqrt_of(&(v.0.clone() * v.0.clone() + v.1.clone() * v.1.clone()));
    let (a, b) = (v.0 / norm.clone(), v.1 / norm);
    let flip = if a.is_zero() { b.is_negative() } else { a.is_negative() };
    if flip {
        (-a, -b)
    } else {
        (a, b)
    }
}

fn eigenvector<T: Scalar>(m: &RealMatrix<T>, lambda: &T) -> (T, T) {
    let (a, b) = (m.get(0, 0).clone(), m.get(0, 1).clone());
    let (c, d) = (m.get(1, 0).clone(), m.get(1, 1).clone());
    // Both candidates lie in the kernel of M - λI; keep the larger one.
    let first = (b, lambda.clone() - a);
    let second = (lambda.clone() - d, c);
    let size = |v: &(T, T)| {
        let (x, y) = (v.0.abs(), v.1.abs());
        if x > y {
            x
        } else {
            y
        }
    };
    if size(&second) > size(&first) {
        normalize(second)
    } else {
        normalize(first)
    }
}

/// Eigen-decomposition of a strictly hyperbolic 2x2 matrix.
///
/// Real distinct eigenvalues are required: the discriminant must exceed
/// `tol · max(1, max|m_ij|²)`.
pub fn diagonalize_edge<T: Scalar>(m: &RealMatrix<T>, tol: &T) -> Result<EdgeEigen<T>> {
    if m.shape() != (2, 2) {
        return Err(Error::Dimension(format!("expected a 2x2 matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    m.check_finite()?;
    let two = T::one() + T::one();
    let four = two.clone() + two.clone();
    let (a, b) = (m.get(0, 0).clone(), m.get(0, 1).clone());
    let (c, d) = (m.get(1, 0).clone(), m.get(1, 1).clone());
    let tr = a.clone() + d.clone();
    let det = a * d - b * c;
    let disc = tr.clone() * tr.clone() - four * det;
    let scale = m.max_abs().max(1.0);
    let threshold = tol.clone() * T::from_f64_lossy(scale * scale);
    if disc <= threshold {
        return Err(Error::NotStrictlyHyperbolic(format!("discriminant {disc} is not positive")));
    }
    let root = sqrt_of(&disc);
    let lambda_plus = (tr.clone() + root.clone()) / two.clone();
    let lambda_minus = (tr - root) / two;
    let fp = eigenvector(m, &lambda_plus);
    let fm = eigenvector(m, &lambda_minus);
    let f = RealMatrix::from_rows(vec![vec![fp.0, fm.0], vec![fp.1, fm.1]])?;
    Ok(EdgeEigen { lambda_plus, lambda_minus, f })
}

/// Eigen-data of an edge, validating user-supplied decompositions.
pub fn eigen_of<T: Scalar>(data: &EdgeData<T>, tol: &T) -> Result<EdgeEigen<T>> {
    let eig = match data {
        EdgeData::Matrix(m) => diagonalize_edge(m, tol)?,
        EdgeData::Eigen { lambda_plus, lambda_minus, f } => {
            if lambda_plus <= lambda_minus {
                return Err(Error::NotStrictlyHyperbolic(format!(
                    "eigenvalues {lambda_plus} and {lambda_minus} are not strictly ordered"
                )));
            }
            if !f.determinant()?.exceeds(tol) {
                return Err(Error::InvalidProblem("eigenvector matrix is singular".into()));
            }
            EdgeEigen { lambda_plus: lambda_plus.clone(), lambda_minus: lambda_minus.clone(), f: f.clone() }
        }
    };
    if eig.lambda_plus.is_zero() || eig.lambda_minus.is_zero() {
        return Err(Error::InvalidProblem("zero eigenvalue: the flow direction is undefined".into()));
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn residual(m: &RealMatrix<f64>, e: &EdgeEigen<f64>) -> f64 {
        let d = RealMatrix::from_rows(vec![vec![e.lambda_plus, 0.0], vec![0.0, e.lambda_minus]]).unwrap();
        m.mul(&e.f).unwrap().sub(&e.f.mul(&d).unwrap()).unwrap().max_abs()
    }

    #[test]
    fn saint_venant_edge() {
        let (v, h, g) = (3.0, 2.0, 9.81);
        let m = RealMatrix::from_f64_rows(&[&[v, h], &[g, v]]).unwrap();
        let e = diagonalize_edge(&m, &1e-12).unwrap();
        let c = (g * h).sqrt();
        assert!((e.lambda_plus - (v + c)).abs() < 1e-12);
        assert!((e.lambda_minus - (v - c)).abs() < 1e-12);
        // Columns are proportional to (H, ±√(gH)).
        let ratio_plus = e.f.get(1, 0) / e.f.get(0, 0);
        let ratio_minus = e.f.get(1, 1) / e.f.get(0, 1);
        assert!((ratio_plus - c / h).abs() < 1e-12);
        assert!((ratio_minus + c / h).abs() < 1e-12);
        assert!(residual(&m, &e) < 1e-12);
    }

    #[test]
    fn coupled_edge() {
        let m = RealMatrix::from_f64_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = diagonalize_edge(&m, &1e-12).unwrap();
        assert_eq!((e.lambda_plus, e.lambda_minus), (1.0, -1.0));
        let s = 0.5f64.sqrt();
        assert!((e.f.get(0, 0) - s).abs() < 1e-15 && (e.f.get(1, 0) - s).abs() < 1e-15);
        assert!((e.f.get(0, 1) - s).abs() < 1e-15 && (e.f.get(1, 1) + s).abs() < 1e-15);
    }

    #[test]
    fn diagonal_edge_keeps_column_order() {
        let m = RealMatrix::<BigRational>::from_i64_rows(&[&[2, 0], &[0, -3]]).unwrap();
        let e = diagonalize_edge(&m, &BigRational::from_integer(0.into())).unwrap();
        assert_eq!(e.f, RealMatrix::identity(2));
        assert_eq!(e.alpha(), 1);
    }

    #[test]
    fn rejects_repeated_and_complex_eigenvalues() {
        let repeated = RealMatrix::from_f64_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(diagonalize_edge(&repeated, &1e-12), Err(Error::NotStrictlyHyperbolic(_))));
        let rotation = RealMatrix::from_f64_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        assert!(matches!(diagonalize_edge(&rotation, &1e-12), Err(Error::NotStrictlyHyperbolic(_))));
        let zero = RealMatrix::from_f64_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(eigen_of(&EdgeData::Matrix(zero), &1e-12), Err(Error::InvalidProblem(_))));
    }
}
