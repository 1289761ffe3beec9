use std::ops::{Index, IndexMut};

use num_complex::Complex64;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(CMatrix::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = CMatrix::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn add_assign_scaled(&mut self, o: &CMatrix, c: Complex64) {
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            *a += b * c;
        }
    }

    /// Scaled by the largest entry so squares cannot overflow.
    pub fn frobenius_norm(&self) -> f64 {
        let scale = self.data.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        self.data.iter().map(|a| (a / scale).norm_sqr()).sum::<f64>().sqrt() * scale
    }

    /// Largest absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n).map(|i| (0..self.n).map(|j| self[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let piv = (col..n).max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm())).unwrap_or(col);
            if a[piv * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}
