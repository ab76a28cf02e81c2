//! Thomas elimination for tridiagonal systems.

/// A tridiagonal system `A x = rhs` with `lower` holding the subdiagonal
/// (length n-1), `diag` the diagonal (length n) and `upper` the superdiagonal
/// (length n-1).
#[derive(Debug, Clone)]
pub struct TriSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TriSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Solve by forward elimination and back substitution.
    ///
    /// The caller guarantees a well-conditioned (here: strictly diagonally
    /// dominant) matrix; the bands are consumed unchanged.
    pub fn solve(&self) -> Vec<f64> {
        let n = self.diag.len();
        assert!(n >= 2, "tridiagonal system needs at least two rows");
        assert_eq!(self.lower.len(), n - 1, "subdiagonal length");
        assert_eq!(self.upper.len(), n - 1, "superdiagonal length");
        assert_eq!(self.rhs.len(), n, "right-hand side length");

        let mut c = vec![0.0; n - 1]; // modified superdiagonal
        let mut d = vec![0.0; n]; // modified rhs

        c[0] = self.upper[0] / self.diag[0];
        d[0] = self.rhs[0] / self.diag[0];
        for i in 1..n {
            let m = self.diag[i] - self.lower[i - 1] * c[i - 1];
            if i < n - 1 {
                c[i] = self.upper[i] / m;
            }
            d[i] = (self.rhs[i] - self.lower[i - 1] * d[i - 1]) / m;
        }

        let mut x = d;
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    }
}
