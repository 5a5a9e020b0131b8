//! Dense Hermitian matrices and a cyclic Jacobi eigenvalue solver.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::EIGEN;

const MAX_SWEEPS: usize = 100;

/// Dense row-major `n × n` complex matrix, Hermitian up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Accepts `data` if it is Hermitian to within `tol · max|a_ij|`.
    pub fn from_row_major(n: usize, data: Vec<Complex64>, tol: f64) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::NotSquare {
                rows: n,
                cols: data.len().checked_div(n).unwrap_or(0),
            });
        }
        let m = HermitianMatrix { n, data };
        let scale = m.max_abs().max(1.0);
        let skew = m.hermitian_defect();
        if skew > tol * scale {
            return Err(Error::Precondition(format!(
                "matrix is not Hermitian (defect {skew:e})"
            )));
        }
        Ok(m)
    }

    /// `Σ_k v_k v_kᴴ` over the given vectors.
    pub fn gram_sum<'a, I>(n: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a [Complex64]>,
    {
        let mut m = Self::zeros(n);
        for v in vectors {
            m.add_outer(v);
        }
        m
    }

    /// Adds `v vᴴ`, skipping zero entries of `v`.
    pub fn add_outer(&mut self, v: &[Complex64]) {
        assert_eq!(v.len(), self.n, "vector length must match matrix order");
        let support: Vec<usize> = (0..self.n)
            .filter(|&i| v[i] != Complex64::new(0.0, 0.0))
            .collect();
        for &i in &support {
            for &j in &support {
                self.data[i * self.n + j] += v[i] * v[j].conj();
            }
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.n + j] = value;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `max |S - c·I|` entrywise.
    pub fn distance_to_scalar(&self, c: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { c } else { 0.0 };
                worst = worst.max((self.get(i, j) - target).norm());
            }
        }
        worst
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        assert_eq!(self.n, other.n, "matrix orders must match");
        HermitianMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `vᴴ S v`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.n {
            let row: Complex64 = (0..self.n).map(|j| self.get(i, j) * v[j]).sum();
            acc += v[i].conj() * row;
        }
        acc.re
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        jacobi_eigenvalues(self.clone(), EIGEN)
    }
}

/// Cyclic Jacobi: sweeps over all pivots `(p, q)` with `p < q` until the off-diagonal
/// Frobenius norm is at most `tol · ‖A‖_F`.
pub fn jacobi_eigenvalues(mut a: HermitianMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = a.n;
    let threshold = tol * a.frobenius().max(f64::MIN_POSITIVE);
    let mut sweeps = 0;
    while a.off_diagonal_norm() > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Precondition(format!(
                "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
    }
    let mut values: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Applies `A ← Gᴴ A G` with `G = D·R`, where `D` removes the phase of `a_pq` and `R` is
/// the real rotation annihilating the resulting real pivot.
fn rotate(a: &mut HermitianMatrix, p: usize, q: usize) {
    let n = a.n;
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * g_pp + akq * g_qp);
        a.set(k, q, akp * g_pq + akq * g_qq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, g_pp.conj() * apk + g_qp.conj() * aqk);
        a.set(q, k, g_pq.conj() * apk + g_qq.conj() * aqk);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
}
