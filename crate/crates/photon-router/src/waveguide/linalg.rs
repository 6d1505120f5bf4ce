//! Minimal dense complex linear algebra for the junction update matrices.

use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> CMatrix {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = CMatrix::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| {
                    a.get(i, col)
                        .norm_sqr()
                        .partial_cmp(&a.get(j, col).norm_sqr())
                        .unwrap()
                })
                .unwrap();
            if a.get(pivot_row, col).norm_sqr() == 0.0 {
                panic!("singular junction matrix");
            }
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                    inv.data.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot = a.get(col, col);
            for j in 0..n {
                a.data[col * n + j] /= pivot;
                inv.data[col * n + j] /= pivot;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a.get(i, col);
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let av = a.get(col, j);
                    let iv = inv.get(col, j);
                    a.data[i * n + j] -= factor * av;
                    inv.data[i * n + j] -= factor * iv;
                }
            }
        }
        inv
    }

    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &self.data[i * n..(i + 1) * n];
            for (j, &m) in row.iter().enumerate() {
                acc += m * x[j];
            }
            out[i] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let n = 5;
        let mut m = CMatrix::zeros(n);
        let mut seed = 42u64;
        let mut rand = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, Complex64::new(rand(), rand()));
            }
            m.add_at(i, i, Complex64::new(3.0, 0.0));
        }
        let prod = m.inverse().matmul(&m);
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - expected).norm() < 1e-12);
            }
        }
    }
}
