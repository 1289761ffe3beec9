use std::ops::{Index, IndexMut};

use super::{ExactError, Field, GaussianRational, Poly, Ring};

/// Dense row-major matrix over a commutative ring.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    /// Builds from row vectors; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn trace(&self) -> R {
        (0..self.rows.min(self.cols)).fold(R::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn mul(&self, o: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(R::zero(), |acc, k| {
                let a = &self[(i, k)];
                let b = &o[(k, j)];
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc + a.clone() * b.clone()
                }
            })
        })
    }

    pub fn add(&self, o: &Matrix<R>) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + o[(i, j)].clone())
    }

    pub fn sub(&self, o: &Matrix<R>) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - o[(i, j)].clone())
    }

    pub fn scale(&self, c: &R) -> Matrix<R> {
        self.map(|a| a.clone() * c.clone())
    }

    /// Row vector times matrix.
    pub fn left_mul_row(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                v.iter().enumerate().fold(R::zero(), |acc, (k, vk)| {
                    let m = &self[(k, j)];
                    if vk.is_zero() || m.is_zero() {
                        acc
                    } else {
                        acc + vk.clone() * m.clone()
                    }
                })
            })
            .collect()
    }

    /// Division-free determinant by dynamic programming over column subsets
    /// (Laplace expansion with memoised minors), `O(2^n · n)` ring products.
    pub fn det(&self) -> Result<R, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        Ok(self.minor_det(&rows, &cols))
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> R {
        let n = rows.len();
        if n == 0 {
            return R::one();
        }
        // table[mask] = det of the submatrix on rows[0..popcount(mask)] and the columns in mask
        let mut table: Vec<Option<R>> = vec![None; 1 << n];
        table[0] = Some(R::one());
        for mask in 1usize..(1 << n) {
            let k = mask.count_ones() as usize - 1;
            let mut acc = R::zero();
            let mut any = false;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let entry = &self[(rows[k], cols[j])];
                if entry.is_zero() {
                    continue;
                }
                let Some(sub) = table[mask & !(1 << j)].as_ref() else {
                    continue;
                };
                if sub.is_zero() {
                    continue;
                }
                let higher = (mask >> (j + 1)).count_ones();
                let term = entry.clone() * sub.clone();
                acc = if higher % 2 == 1 { acc - term } else { acc + term };
                any = true;
            }
            if any {
                table[mask] = Some(acc);
            } else {
                table[mask] = Some(R::zero());
            }
        }
        table[(1 << n) - 1].take().unwrap_or_else(R::zero)
    }

    /// Classical adjugate, so that `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Result<Matrix<R>, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Matrix::identity(1));
        }
        let mut adj = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let d = self.minor_det(&rows, &cols);
                adj[(i, j)] = if (i + j) % 2 == 1 { -d } else { d };
            }
        }
        Ok(adj)
    }
}

impl<R> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Matrix<F> {
    /// Inverse over a field via the adjugate; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        let d = self.det().ok()?;
        if d.is_zero() {
            return None;
        }
        let inv = F::one() / d;
        Some(self.adjugate().ok()?.scale(&inv))
    }
}

/// `det(x·I − M)` by the Faddeev–LeVerrier recursion: monic, degree r, exact.
pub fn charpoly(m: &Matrix<GaussianRational>) -> Result<Poly, ExactError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Err(ExactError::Empty);
    }
    let mut coeffs = vec![GaussianRational::from_int(0); n + 1];
    coeffs[n] = GaussianRational::from_int(1);
    let ident = Matrix::<GaussianRational>::identity(n);
    let mut aux = Matrix::<GaussianRational>::zeros(n, n);
    for k in 1..=n {
        aux = m.mul(&aux).add(&ident.scale(&coeffs[n - k + 1]));
        let t = m.mul(&aux).trace();
        coeffs[n - k] = -(t / GaussianRational::from_int(k as i64));
    }
    Ok(Poly::new(coeffs))
}
