//! Characters, the discrete Fourier transform on F_q^d, and the translation, dilation and
//! Paley–Wiener operators.
//!
//! `χ_m(x) = exp(2πi·(m·x mod q)/q)`. The forward transform is
//! `f̂(ξ) = c·Σ_m f(m)·conj(χ_m(ξ))`, where `c` depends on the [`TransformConvention`].
//! Inner products are the plain counting sums `⟨f, g⟩ = Σ_x f(x)·conj(g(x))`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::geometry::Automorphism;
use crate::points::{Point, PointSet, Space};

/// `exp(2πik/q)` for `k = 0..q`, computed once per modulus.
pub fn roots_of_unity(q: PrimeModulus) -> Arc<[Complex64]> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<[Complex64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(table) = cache.read().expect("roots cache poisoned").get(&q.get()) {
        return table.clone();
    }
    let n = q.get();
    let table: Arc<[Complex64]> = (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect();
    cache
        .write()
        .expect("roots cache poisoned")
        .entry(n)
        .or_insert(table)
        .clone()
}

/// `χ_m(x)`.
pub fn character(m: &Point, x: &Point) -> Result<Complex64> {
    let phase = m.dot(x)?;
    Ok(roots_of_unity(m.modulus())[phase.value() as usize])
}

/// Normalization of the forward/inverse transform pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformConvention {
    /// `q^(-d/2)` both ways; the transform is unitary for the counting inner product.
    #[default]
    Unitary,
    /// `q^(-d)` forward and `1` inverse.
    Paper,
}

impl TransformConvention {
    pub fn forward_scale(self, space: Space) -> f64 {
        let n = space.size() as f64;
        match self {
            TransformConvention::Unitary => n.sqrt().recip(),
            TransformConvention::Paper => n.recip(),
        }
    }

    pub fn inverse_scale(self, space: Space) -> f64 {
        match self {
            TransformConvention::Unitary => (space.size() as f64).sqrt().recip(),
            TransformConvention::Paper => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TransformConvention::Unitary => "unitary",
            TransformConvention::Paper => "paper",
        }
    }
}

impl std::str::FromStr for TransformConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "unitary" => Ok(TransformConvention::Unitary),
            "paper" => Ok(TransformConvention::Paper),
            other => Err(format!(
                "unknown convention '{other}' (expected unitary|paper)"
            )),
        }
    }
}

/// A complex-valued function on F_q^d, dense in canonical index order.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    space: Space,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(space: Space) -> Self {
        GridFunction {
            space,
            values: vec![Complex64::new(0.0, 0.0); space.size()],
        }
    }

    pub fn from_values(space: Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::Cardinality {
                expected: space.size(),
                found: values.len(),
            });
        }
        Ok(GridFunction { space, values })
    }

    pub fn from_fn(space: Space, mut f: impl FnMut(&Point) -> Complex64) -> Self {
        GridFunction {
            space,
            values: space.points().map(|p| f(&p)).collect(),
        }
    }

    /// `1_E`.
    pub fn indicator(set: &PointSet) -> Self {
        let mut g = Self::zeros(set.space());
        for i in set.indices() {
            g.values[i] = Complex64::new(1.0, 0.0);
        }
        g
    }

    /// `χ_m` as a function of x.
    pub fn character(m: &Point) -> Result<Self> {
        let space = Space::new(m.modulus(), m.dim())?;
        let roots = roots_of_unity(m.modulus());
        Ok(Self::from_fn(space, |x| {
            roots[m.dot(x).expect("same space").value() as usize]
        }))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    pub fn at(&self, p: &Point) -> Complex64 {
        self.values[p.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩ = Σ self(x)·conj(other(x))`.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.space.check_same(&other.space)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        GridFunction {
            space: self.space,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `alpha·self + beta·other`.
    pub fn combine(
        &self,
        alpha: Complex64,
        other: &GridFunction,
        beta: Complex64,
    ) -> Result<GridFunction> {
        self.space.check_same(&other.space)?;
        Ok(GridFunction {
            space: self.space,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.space.check_same(&other.space)?;
        Ok(GridFunction {
            space: self.space,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `max_x |self(x) - other(x)|`.
    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        assert_eq!(self.space, other.space);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn to_file(&self) -> GridFunctionFile {
        GridFunctionFile {
            q: self.space.q() as u64,
            d: self.space.dim(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn from_file(file: &GridFunctionFile) -> Result<Self> {
        let space = Space::new(PrimeModulus::new(file.q)?, file.d)?;
        Self::from_values(
            space,
            file.values
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        )
    }
}

/// Wire form: `{"q":3,"d":2,"values":[[re,im],...]}` in canonical index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunctionFile {
    pub q: u64,
    pub d: usize,
    pub values: Vec<[f64; 2]>,
}

fn transform_axes(f: &GridFunction, sign: i64, scale: f64) -> GridFunction {
    let space = f.space;
    let q = space.q() as usize;
    let roots = roots_of_unity(space.modulus());
    let mut values = f.values.clone();
    let mut line = vec![Complex64::new(0.0, 0.0); q];
    let mut out = vec![Complex64::new(0.0, 0.0); q];
    for axis in 0..space.dim() {
        let stride = q.pow((space.dim() - 1 - axis) as u32);
        for base in 0..space.size() {
            if !(base / stride).is_multiple_of(q) {
                continue;
            }
            for (k, slot) in line.iter_mut().enumerate() {
                *slot = values[base + k * stride];
            }
            for (xi, o) in out.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (m, v) in line.iter().enumerate() {
                    let phase = (m * xi) % q;
                    let phase = if sign < 0 { (q - phase) % q } else { phase };
                    acc += v * roots[phase];
                }
                *o = acc;
            }
            for (k, o) in out.iter().enumerate() {
                values[base + k * stride] = *o;
            }
        }
    }
    for v in values.iter_mut() {
        *v *= scale;
    }
    GridFunction { space, values }
}

/// Forward transform, factored into `d` length-q transforms along the axes.
pub fn dft(f: &GridFunction, conv: TransformConvention) -> GridFunction {
    transform_axes(f, -1, conv.forward_scale(f.space))
}

/// Inverse of [`dft`] under the same convention.
pub fn idft(g: &GridFunction, conv: TransformConvention) -> GridFunction {
    transform_axes(g, 1, conv.inverse_scale(g.space))
}

/// Forward transform evaluated directly from the definition, `O(q^(2d))`.
pub fn dft_naive(f: &GridFunction, conv: TransformConvention) -> GridFunction {
    let space = f.space;
    let q = space.q() as usize;
    let roots = roots_of_unity(space.modulus());
    let points: Vec<Point> = space.points().collect();
    let scale = conv.forward_scale(space);
    let values = points
        .iter()
        .map(|xi| {
            let acc: Complex64 = points
                .iter()
                .zip(&f.values)
                .map(|(m, v)| {
                    let phase = m.dot(xi).expect("same space").value() as usize;
                    v * roots[(q - phase) % q]
                })
                .sum();
            acc * scale
        })
        .collect();
    GridFunction { space, values }
}

/// `(τ_t f)(x) = f(x - t)`.
pub fn translate(f: &GridFunction, t: &Point) -> Result<GridFunction> {
    f.space.check(t)?;
    let space = f.space;
    let values = space.points().map(|x| f.values[(&x - t).index()]).collect();
    Ok(GridFunction { space, values })
}

/// `(δ_a f)(x) = f(a·x)`.
pub fn dilate(f: &GridFunction, a: &Automorphism) -> Result<GridFunction> {
    f.space.check_same(&a.space())?;
    let values = (0..f.space.size())
        .map(|x| f.values[a.apply_index(x)])
        .collect();
    Ok(GridFunction {
        space: f.space,
        values,
    })
}

/// Projection onto `PW_F = {f : f̂ vanishes off F}`.
pub fn paley_wiener_project(f: &GridFunction, support: &PointSet) -> Result<GridFunction> {
    f.space.check_same(&support.space())?;
    let conv = TransformConvention::Unitary;
    let mut spectrum = dft(f, conv);
    for (i, v) in spectrum.values.iter_mut().enumerate() {
        if !support.contains_index(i) {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    Ok(idft(&spectrum, conv))
}
