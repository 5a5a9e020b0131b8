//! Wavelet systems `{δ_a τ_l ψ}`, frame bounds on Paley–Wiener subspaces, and numerical
//! certificates for the frame theorems.
//!
//! Frame quantities are computed in the Fourier domain under the unitary transform, where
//! `ŵ(m) = conj(χ_{a⁻¹l}(m)) · ψ̂(a*m)` with `a* = (a⁻¹)ᵗ` and support `aᵗ(E*)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::fourier::{
    character, dft, dilate, idft, paley_wiener_project, translate, GridFunction,
    TransformConvention,
};
use crate::geometry::{rotation_group, Automorphism};
use crate::linalg::HermitianMatrix;
use crate::points::{Point, PointSet, Space};
use crate::tiling::{
    canonical_spectrum, construct_wavelet_frame_set, spectrum_search, verify_multiplicative_tiling,
    verify_spectral_pair,
};
use crate::tolerance::{CERTIFICATE, FALSIFICATION};

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 42;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `(#E)^(-1/2) · idft(1_{E*})` under the unitary convention.
pub fn mother_wavelet(set: &PointSet) -> Result<GridFunction> {
    mother_wavelet_with(set, TransformConvention::Unitary)
}

pub fn mother_wavelet_with(set: &PointSet, conv: TransformConvention) -> Result<GridFunction> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let weight = (set.len() as f64).sqrt().recip();
    Ok(idft(&GridFunction::indicator(&set.star()), conv).scale(Complex64::new(weight, 0.0)))
}

/// The vectors `δ_a τ_l ψ`, row-major over `A × L`.
#[derive(Clone, Debug)]
pub struct WaveletSystem {
    mother: GridFunction,
    dilations: Vec<Automorphism>,
    translations: Vec<Point>,
    /// `(dilation index, translation index)` of each vector.
    labels: Vec<(usize, usize)>,
    vectors: Vec<GridFunction>,
    spectra: Vec<GridFunction>,
    convention: TransformConvention,
}

pub fn build_system(
    mother: &GridFunction,
    dilations: &[Automorphism],
    translations: &PointSet,
) -> Result<WaveletSystem> {
    build_system_with(
        mother,
        dilations,
        translations,
        TransformConvention::Unitary,
    )
}

/// As [`build_system`], recording the convention the mother wavelet was built with.
pub fn build_system_with(
    mother: &GridFunction,
    dilations: &[Automorphism],
    translations: &PointSet,
    convention: TransformConvention,
) -> Result<WaveletSystem> {
    let space = mother.space();
    space.check_same(&translations.space())?;
    let ls = translations.points();
    let mut labels = Vec::with_capacity(dilations.len() * ls.len());
    let mut vectors = Vec::with_capacity(labels.capacity());
    for (ai, a) in dilations.iter().enumerate() {
        space.check_same(&a.space())?;
        for (li, l) in ls.iter().enumerate() {
            vectors.push(dilate(&translate(mother, l)?, a)?);
            labels.push((ai, li));
        }
    }
    let spectra = vectors
        .iter()
        .map(|v| dft(v, TransformConvention::Unitary))
        .collect();
    Ok(WaveletSystem {
        mother: mother.clone(),
        dilations: dilations.to_vec(),
        translations: ls,
        labels,
        vectors,
        spectra,
        convention,
    })
}

impl WaveletSystem {
    pub fn space(&self) -> Space {
        self.mother.space()
    }

    pub fn mother(&self) -> &GridFunction {
        &self.mother
    }

    pub fn dilations(&self) -> &[Automorphism] {
        &self.dilations
    }

    pub fn translations(&self) -> &[Point] {
        &self.translations
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn vectors(&self) -> &[GridFunction] {
        &self.vectors
    }

    /// Unitary transforms of [`Self::vectors`].
    pub fn spectra(&self) -> &[GridFunction] {
        &self.spectra
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn convention(&self) -> TransformConvention {
        self.convention
    }

    /// Multiset union, `W ∪ W'`. Both systems must share the mother wavelet.
    pub fn union(&self, other: &WaveletSystem) -> Result<WaveletSystem> {
        self.space().check_same(&other.space())?;
        if self.mother.max_abs_diff(&other.mother) > 0.0 {
            return Err(Error::Precondition(
                "systems have different mother wavelets".into(),
            ));
        }
        let (da, dl) = (self.dilations.len(), self.translations.len());
        let mut out = self.clone();
        out.dilations.extend(other.dilations.iter().cloned());
        out.translations.extend(other.translations.iter().cloned());
        out.labels
            .extend(other.labels.iter().map(|&(a, l)| (a + da, l + dl)));
        out.vectors.extend(other.vectors.iter().cloned());
        out.spectra.extend(other.spectra.iter().cloned());
        Ok(out)
    }

    /// The same system with every vector multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> WaveletSystem {
        let mut out = self.clone();
        out.mother = self.mother.scale(c);
        for v in out.vectors.iter_mut().chain(out.spectra.iter_mut()) {
            *v = v.scale(c);
        }
        out
    }

    /// `Σ_k |⟨f, w_k⟩|²`, evaluated with spatial inner products.
    pub fn analysis_energy(&self, f: &GridFunction) -> Result<f64> {
        let mut acc = 0.0;
        for w in &self.vectors {
            acc += f.inner(w)?.norm_sqr();
        }
        Ok(acc)
    }
}

/// `S[u,v] = Σ_k ŵ_k(u)·conj(ŵ_k(v))` for `u, v ∈ F`, in index order of `F`.
pub fn frame_operator(system: &WaveletSystem, support: &PointSet) -> Result<HermitianMatrix> {
    system.space().check_same(&support.space())?;
    let idx: Vec<usize> = support.indices().collect();
    let mut s = HermitianMatrix::zeros(idx.len());
    let mut row = vec![zero(); idx.len()];
    for w in &system.spectra {
        for (r, &i) in row.iter_mut().zip(&idx) {
            *r = w.get(i);
        }
        s.add_outer(&row);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameOptions {
    pub tol: f64,
    pub seed: u64,
}

impl Default for FrameOptions {
    fn default() -> Self {
        FrameOptions {
            tol: CERTIFICATE,
            seed: DEFAULT_SEED,
        }
    }
}

/// Frame bounds of a system on `PW_F`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub lower: f64,
    pub upper: f64,
    /// `max |S - (tr S / dim)·I|`.
    pub tightness_residual: f64,
    pub parseval: bool,
    pub orthogonal: bool,
    pub dim: usize,
    pub vectors: usize,
    pub convention: TransformConvention,
    pub seed: u64,
}

impl FrameReport {
    /// `#vectors / dim` in lowest terms.
    pub fn redundancy(&self) -> (usize, usize) {
        let g = gcd(self.vectors, self.dim).max(1);
        (self.vectors / g, self.dim / g)
    }

    pub fn redundancy_value(&self) -> f64 {
        self.vectors as f64 / self.dim as f64
    }

    pub fn is_tight(&self, tol: f64) -> bool {
        (self.upper - self.lower).abs() <= tol * self.upper.abs().max(1.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn frame_bounds(system: &WaveletSystem, support: &PointSet) -> Result<FrameReport> {
    frame_bounds_with(system, support, &FrameOptions::default())
}

/// Extreme eigenvalues of the frame operator on `PW_F` by cyclic Jacobi.
pub fn frame_bounds_with(
    system: &WaveletSystem,
    support: &PointSet,
    options: &FrameOptions,
) -> Result<FrameReport> {
    let s = frame_operator(system, support)?;
    let dim = s.order();
    let ev = s.eigenvalues()?;
    let (lower, upper) = match (ev.first(), ev.last()) {
        (Some(&lo), Some(&hi)) => (lo.max(0.0), hi.max(0.0)),
        _ => (0.0, 0.0),
    };
    let scalar = if dim == 0 {
        0.0
    } else {
        s.trace() / dim as f64
    };
    Ok(FrameReport {
        lower,
        upper,
        tightness_residual: s.distance_to_scalar(scalar),
        parseval: (lower - 1.0).abs() <= options.tol && (upper - 1.0).abs() <= options.tol,
        orthogonal: is_orthogonal(system, options.tol),
        dim,
        vectors: system.len(),
        convention: system.convention,
        seed: options.seed,
    })
}

/// Nonzero and pairwise orthogonal.
fn is_orthogonal(system: &WaveletSystem, tol: f64) -> bool {
    let norms: Vec<f64> = system.spectra.iter().map(|w| w.norm_sqr()).collect();
    let scale = norms.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 || norms.iter().any(|&n| n <= tol * scale) {
        return false;
    }
    let supports: Vec<Vec<usize>> = system
        .spectra
        .iter()
        .map(|w| {
            (0..w.values().len())
                .filter(|&i| w.get(i) != zero())
                .collect()
        })
        .collect();
    for (i, (a, support)) in system.spectra.iter().zip(&supports).enumerate() {
        for b in &system.spectra[i + 1..] {
            let g: Complex64 = support.iter().map(|&m| a.get(m) * b.get(m).conj()).sum();
            if g.norm() > tol * scale {
                return false;
            }
        }
    }
    true
}

/// Random `f ∈ PW_F` with independent uniform real and imaginary parts.
pub fn random_in_paley_wiener(support: &PointSet, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let space = support.space();
    let f = GridFunction::from_fn(space, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    paley_wiener_project(&f, support)
}

/// Frame inequality sampled directly on random functions, independent of the operator path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub samples: usize,
    pub seed: u64,
    /// Smallest and largest `Σ|⟨f,w_k⟩|² / ‖f‖²`.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `max |Σ|⟨f,w_k⟩|² - ‖f‖²| / ‖f‖²`.
    pub max_parseval_defect: f64,
}

impl SampleReport {
    pub fn within(&self, report: &FrameReport, slack: f64) -> bool {
        self.min_ratio >= report.lower - slack && self.max_ratio <= report.upper + slack
    }
}

pub fn sample_frame_inequality(
    system: &WaveletSystem,
    support: &PointSet,
    samples: usize,
    seed: u64,
) -> Result<SampleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut defect: f64 = 0.0;
    for _ in 0..samples {
        let f = random_in_paley_wiener(support, &mut rng)?;
        let n2 = f.norm_sqr();
        if n2 == 0.0 {
            continue;
        }
        let energy = system.analysis_energy(&f)?;
        let r = energy / n2;
        min_ratio = min_ratio.min(r);
        max_ratio = max_ratio.max(r);
        defect = defect.max((r - 1.0).abs());
    }
    Ok(SampleReport {
        samples,
        seed,
        min_ratio,
        max_ratio,
        max_parseval_defect: defect,
    })
}

/// Spectral summary of a finite family of vectors in `C^dim`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub dim: usize,
    pub vectors: usize,
    pub lower: f64,
    pub upper: f64,
    pub residual: f64,
    pub tight: bool,
}

fn analyze_family(
    dim: usize,
    vectors: &[Vec<Complex64>],
    bound: f64,
    tol: f64,
) -> Result<FamilyReport> {
    let s = HermitianMatrix::gram_sum(dim, vectors.iter().map(|v| v.as_slice()));
    let ev = s.eigenvalues()?;
    let lower = ev.first().copied().unwrap_or(0.0);
    let upper = ev.last().copied().unwrap_or(0.0);
    let slack = tol * bound.abs().max(1.0);
    Ok(FamilyReport {
        dim,
        vectors: vectors.len(),
        lower,
        upper,
        residual: s.distance_to_scalar(bound),
        tight: dim > 0 && (lower - bound).abs() <= slack && (upper - bound).abs() <= slack,
    })
}

/// `{χ_m restricted to S}` as coordinate vectors over `S` (index order).
fn restricted_characters(ms: &[Point], support: &[Point]) -> Result<Vec<Vec<Complex64>>> {
    ms.iter()
        .map(|m| support.iter().map(|x| character(m, x)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum OrthonormalPart {
    Certified {
        gram_residual: f64,
        orthonormal: bool,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PfReport {
    pub bound: f64,
    /// `{χ_l·1_{E*}}` on `E*`.
    pub part1: FamilyReport,
    /// `{χ_{(a⁻¹)ᵗl}·1_{a(E*)}}` on `a(E*)`, one entry per `a`.
    pub part2: Vec<FamilyReport>,
    pub part2_bounds_agree: bool,
    /// Union of the part-two families on `Y`.
    pub part3: FamilyReport,
    pub part4: OrthonormalPart,
}

impl PfReport {
    pub fn certified(&self) -> bool {
        let p4 = match &self.part4 {
            OrthonormalPart::Certified { orthonormal, .. } => *orthonormal,
            OrthonormalPart::Skipped { .. } => true,
        };
        self.part1.tight
            && self.part2.iter().all(|p| p.tight)
            && self.part2_bounds_agree
            && self.part3.tight
            && p4
    }
}

/// Numerically certifies the four-part tight-frame statement for a spectral pair `(E, L)`
/// whose `E*` tiles `Y` under `A`.
pub fn certify_pf_theorem(
    set: &PointSet,
    spectrum: &PointSet,
    automorphisms: &[Automorphism],
) -> Result<PfReport> {
    let pair = verify_spectral_pair(set, spectrum)?;
    if !pair.valid {
        return Err(Error::Precondition(format!(
            "(E, L) is not a spectral pair (Gram residual {:e})",
            pair.gram_residual
        )));
    }
    let star = set.star();
    if !verify_multiplicative_tiling(&star, automorphisms)?.is_valid() {
        return Err(Error::Precondition(
            "E* does not tile Y under the given automorphisms".into(),
        ));
    }
    let tol = CERTIFICATE;
    let bound = set.len() as f64;
    let ls = spectrum.points();
    let star_pts = star.points();
    let part1 = analyze_family(
        star_pts.len(),
        &restricted_characters(&ls, &star_pts)?,
        bound,
        tol,
    )?;

    let space = set.space();
    let y: Vec<usize> = PointSet::nonzero(space).indices().collect();
    let mut y_pos = vec![usize::MAX; space.size()];
    for (k, &i) in y.iter().enumerate() {
        y_pos[i] = k;
    }
    let mut part2 = Vec::with_capacity(automorphisms.len());
    let mut union = Vec::new();
    for a in automorphisms {
        let image = a.image(&star)?.points();
        let dual = a.inverse_transpose();
        let freqs = ls
            .iter()
            .map(|l| dual.apply(l))
            .collect::<Result<Vec<_>>>()?;
        let family = restricted_characters(&freqs, &image)?;
        part2.push(analyze_family(image.len(), &family, bound, tol)?);
        for v in family {
            let mut padded = vec![zero(); y.len()];
            for (p, z) in image.iter().zip(v) {
                padded[y_pos[p.index()]] = z;
            }
            union.push(padded);
        }
    }
    let part2_bounds_agree = part2.iter().all(|p| {
        (p.lower - part1.lower).abs() <= tol * bound && (p.upper - part1.upper).abs() <= tol * bound
    });
    let part3 = analyze_family(y.len(), &union, bound, tol)?;
    let part4 = if set.contains_origin() {
        OrthonormalPart::Skipped {
            reason: "0 ∈ E, so the family has more vectors than dim L²(Y)".into(),
        }
    } else {
        let w = bound.sqrt().recip();
        let normalized: Vec<Vec<Complex64>> = union
            .iter()
            .map(|v| v.iter().map(|z| z * w).collect())
            .collect();
        let mut residual: f64 = 0.0;
        for (i, u) in normalized.iter().enumerate() {
            for (j, v) in normalized.iter().enumerate() {
                let g: Complex64 = u.iter().zip(v).map(|(a, b)| a * b.conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((g - target).norm());
            }
        }
        OrthonormalPart::Certified {
            gram_residual: residual,
            orthonormal: normalized.len() == y.len() && residual <= tol,
        }
    };
    Ok(PfReport {
        bound,
        part1,
        part2,
        part2_bounds_agree,
        part3,
        part4,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConverseReport {
    pub covered: bool,
    pub disjoint: bool,
    /// multiplicity → number of points of `Y` covered that many times by the `aᵗ(E*)`.
    pub multiplicity_histogram: BTreeMap<usize, usize>,
    /// Tight-frame check of `{χ_l}` on `E*`, run only when the supports are disjoint.
    pub tight_frame_spectral: Option<FamilyReport>,
}

/// For a Parseval system on `PW_Y`, checks `Y = ⋃ aᵗ(E*)` over the dilations of `W`, and the
/// tight-frame spectral property of `(E*, L)` when the union is disjoint.
pub fn certify_converse(system: &WaveletSystem, set: &PointSet) -> Result<ConverseReport> {
    let space = system.space();
    space.check_same(&set.space())?;
    let y = PointSet::nonzero(space);
    let report = frame_bounds(system, &y)?;
    if !report.parseval {
        return Err(Error::Precondition(format!(
            "system is not Parseval on PW_Y (bounds {}, {})",
            report.lower, report.upper
        )));
    }
    let star = set.star();
    let mut counts = vec![0usize; space.size()];
    for a in &system.dilations {
        for i in a.transpose().image(&star)?.indices() {
            counts[i] += 1;
        }
    }
    let mut histogram = BTreeMap::new();
    for i in y.indices() {
        *histogram.entry(counts[i]).or_insert(0) += 1;
    }
    let covered = y.indices().all(|i| counts[i] >= 1);
    let disjoint = y.indices().all(|i| counts[i] <= 1);
    let tight_frame_spectral = if disjoint {
        let mut ls = system.translations.clone();
        ls.sort();
        ls.dedup();
        let pts = star.points();
        let family = restricted_characters(&ls, &pts)?;
        let s = HermitianMatrix::gram_sum(pts.len(), family.iter().map(|v| v.as_slice()));
        let bound = if pts.is_empty() {
            0.0
        } else {
            s.trace() / pts.len() as f64
        };
        Some(analyze_family(pts.len(), &family, bound, CERTIFICATE)?)
    } else {
        None
    };
    Ok(ConverseReport {
        covered,
        disjoint,
        multiplicity_histogram: histogram,
        tight_frame_spectral,
    })
}

/// The constructed Parseval system on `F_q²`: `(E, L, A, W)`.
pub fn constructed_system(
    q: PrimeModulus,
    d: usize,
) -> Result<(PointSet, PointSet, Vec<Automorphism>, WaveletSystem)> {
    let set = construct_wavelet_frame_set(q, d)?;
    let spectrum = canonical_spectrum(&set)?;
    let group = if d == 2 {
        rotation_group(q)?
    } else {
        crate::geometry::lifted_rotation_group(q, d)?
    };
    let system = build_system(&mother_wavelet(&set)?, &group, &spectrum)?;
    Ok((set, spectrum, group, system))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DuplicationReport {
    pub q: u32,
    pub original: FrameReport,
    pub duplicate: FrameReport,
    /// `2·A` from additivity of the frame operator.
    pub expected_bound: f64,
    /// The `A/2` bound asserted for `W ∪ W`.
    pub stated_bound: f64,
    pub stated_bound_reproduced: bool,
    /// Converse check on `W' ∪ W'` with `W'` built from `ψ/√2`, which is Parseval.
    pub normalized_converse: ConverseReport,
}

/// Measures the bounds of `W ∪ W` for the constructed Parseval system `W`.
pub fn duplication_experiment(q: PrimeModulus) -> Result<DuplicationReport> {
    let (set, spectrum, group, system) = constructed_system(q, 2)?;
    let y = PointSet::nonzero(system.space());
    let original = frame_bounds(&system, &y)?;
    let double = system.union(&system)?;
    let duplicate = frame_bounds(&double, &y)?;
    let stated_bound = original.upper / 2.0;
    let tol = CERTIFICATE;
    let reproduced = (duplicate.lower - stated_bound).abs() <= tol * stated_bound.max(1.0)
        && (duplicate.upper - stated_bound).abs() <= tol * stated_bound.max(1.0);
    let half = build_system(
        &mother_wavelet(&set)?.scale(Complex64::new(0.5f64.sqrt(), 0.0)),
        &group,
        &spectrum,
    )?;
    let normalized_converse = certify_converse(&half.union(&half)?, &set)?;
    Ok(DuplicationReport {
        q: q.get(),
        expected_bound: 2.0 * original.upper,
        stated_bound,
        stated_bound_reproduced: reproduced,
        original,
        duplicate,
        normalized_converse,
    })
}

/// Candidate dilations for random configurations: `{±1}` for d = 1; the rotation group
/// together with `diag(±1, ±1)` for d = 2; the identity and `-I` otherwise.
pub fn dilation_pool(q: PrimeModulus, d: usize) -> Result<Vec<Automorphism>> {
    let minus = q.get() as u64 - 1;
    let mut pool = match d {
        1 => vec![
            Automorphism::diagonal(q, &[1])?,
            Automorphism::diagonal(q, &[minus])?,
        ],
        2 => {
            let mut p = if q.is_three_mod_four() {
                rotation_group(q)?
            } else {
                Vec::new()
            };
            for s in [[1, 1], [1, minus], [minus, 1], [minus, minus]] {
                p.push(Automorphism::diagonal(q, &s)?);
            }
            p
        }
        _ => {
            let space = Space::new(q, d)?;
            vec![
                Automorphism::identity(space),
                Automorphism::diagonal(q, &vec![minus; d])?,
            ]
        }
    };
    let mut seen = std::collections::HashSet::new();
    pool.retain(|a| seen.insert(a.clone()));
    Ok(pool)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FalsificationReport {
    pub q: u32,
    pub d: usize,
    pub seed: u64,
    pub trials: usize,
    pub exhaustive_configurations: usize,
    pub random_configurations: usize,
    /// Smallest `max |S - (tr S / q^d)·I|` over every configuration.
    pub min_residual: f64,
    pub min_witness: Configuration,
    /// A configuration with residual at most the falsification margin.
    pub parseval_found: bool,
    /// `E = F_q^d`, `A = {I}`, `Λ = F_q^d` with `(#E)^(-1/2)·idft(1_E)` is orthonormal.
    pub full_set_orthonormal: bool,
    /// Every configuration with `0 ∉ E` annihilates the `δ̂_0` direction.
    pub origin_direction_vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Configuration {
    pub set: Vec<Point>,
    pub dilations: Vec<Automorphism>,
    pub translations: Vec<Point>,
}

struct Falsifier {
    space: Space,
    min_residual: f64,
    witness: Option<Configuration>,
    origin_vanishes: bool,
    count: usize,
}

impl Falsifier {
    fn run(
        &mut self,
        set: &PointSet,
        dilations: &[Automorphism],
        translations: &PointSet,
    ) -> Result<()> {
        let psi = idft(&GridFunction::indicator(set), TransformConvention::Unitary);
        let system = build_system(&psi, dilations, translations)?;
        let s = frame_operator(&system, &PointSet::full(self.space))?;
        let residual = s.distance_to_scalar(s.trace() / s.order() as f64);
        if !set.contains_origin() && s.get(0, 0).norm() > FALSIFICATION {
            self.origin_vanishes = false;
        }
        if residual < self.min_residual || self.witness.is_none() {
            self.min_residual = residual;
            self.witness = Some(Configuration {
                set: set.points(),
                dilations: dilations.to_vec(),
                translations: translations.points(),
            });
        }
        self.count += 1;
        Ok(())
    }
}

fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (1u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, x)| x.clone())
            .collect()
    })
}

/// Searches for `(E, A, Λ)` making `{δ_a τ_λ idft(1_E)}` tight on all of `L²(F_q^d)`.
///
/// All proper nonempty `E` are enumerated when `q^d ≤ 9`: with every nonempty `A ⊆ pool` and
/// `Λ ⊆ F_q^d` when that is at most 4096 pairs, otherwise with the full pool and `Λ = F_q^d`.
/// `trials` further configurations are drawn from a seeded generator.
pub fn demo_no_full_space_parseval(
    q: PrimeModulus,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<FalsificationReport> {
    let space = Space::new(q, d)?;
    let n = space.size();
    let pool = dilation_pool(q, d)?;
    let full = PointSet::full(space);
    let mut f = Falsifier {
        space,
        min_residual: f64::INFINITY,
        witness: None,
        origin_vanishes: true,
        count: 0,
    };
    if n <= 9 {
        let all_pairs = pool.len() + n <= 12;
        for mask in 1u64..(1 << n) - 1 {
            let set = PointSet::from_indices(space, (0..n).filter(|i| mask >> i & 1 == 1));
            if all_pairs {
                for a in subsets(&pool) {
                    for lmask in 1u64..1 << n {
                        let l =
                            PointSet::from_indices(space, (0..n).filter(|i| lmask >> i & 1 == 1));
                        f.run(&set, &a, &l)?;
                    }
                }
            } else {
                f.run(&set, &pool, &full)?;
            }
        }
    }
    let exhaustive = f.count;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let set = loop {
            let s = PointSet::from_indices(space, (0..n).filter(|_| rng.gen_bool(0.5)));
            if !s.is_empty() && s.len() < n {
                break s;
            }
        };
        let mut a: Vec<Automorphism> = pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if a.is_empty() {
            a.push(pool.choose(&mut rng).expect("pool is nonempty").clone());
        }
        let mut l = PointSet::from_indices(space, (0..n).filter(|_| rng.gen_bool(0.5)));
        if l.is_empty() {
            l.insert_index(rng.gen_range(0..n));
        }
        f.run(&set, &a, &l)?;
    }
    let onb = {
        let weight = Complex64::new((n as f64).sqrt().recip(), 0.0);
        let psi = idft(
            &GridFunction::indicator(&full),
            TransformConvention::Unitary,
        )
        .scale(weight);
        let system = build_system(&psi, &[Automorphism::identity(space)], &full)?;
        let report = frame_bounds(&system, &full)?;
        report.parseval && report.orthogonal && system.len() == n
    };
    Ok(FalsificationReport {
        q: q.get(),
        d,
        seed,
        trials,
        exhaustive_configurations: exhaustive,
        random_configurations: f.count - exhaustive,
        min_residual: f.min_residual,
        min_witness: f.witness.expect("at least one configuration"),
        parseval_found: f.min_residual <= FALSIFICATION,
        full_set_orthonormal: onb,
        origin_direction_vanishes: f.origin_vanishes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthogonalScan {
    pub q: u32,
    pub d: usize,
    pub systems_checked: usize,
    pub orthogonal_systems: usize,
    /// Orthogonal systems whose `E` contains the origin.
    pub orthogonal_with_origin: usize,
    pub examples: Vec<Configuration>,
}

/// Exhaustive scan over `E` (with `E*` nonempty), the spectrum found by clique search, and
/// nonempty dilation sets (`{±1}` for d = 1, subsets of the rotation group for d = 2), for
/// orthogonal systems generated by `(#E)^(-1/2)·idft(1_{E*})`.
pub fn scan_orthogonal_systems(q: PrimeModulus, d: usize) -> Result<OrthogonalScan> {
    let space = Space::new(q, d)?;
    let n = space.size();
    if n > 9 {
        return Err(Error::SearchBudget { size: n, limit: 9 });
    }
    let pool = match d {
        1 => dilation_pool(q, 1)?,
        2 => rotation_group(q)?,
        _ => return Err(Error::InvalidDimension(d)),
    };
    let mut checked = 0;
    let mut found = 0;
    let mut with_origin = 0;
    let mut examples = Vec::new();
    for mask in 1u64..1 << n {
        let set = PointSet::from_indices(space, (0..n).filter(|i| mask >> i & 1 == 1));
        if set.star().is_empty() {
            continue;
        }
        let Some(spectrum) = spectrum_search(&set, n)? else {
            continue;
        };
        let psi = mother_wavelet(&set)?;
        for a in subsets(&pool) {
            let system = build_system(&psi, &a, &spectrum)?;
            checked += 1;
            if is_orthogonal(&system, CERTIFICATE) {
                found += 1;
                if set.contains_origin() {
                    with_origin += 1;
                    if examples.len() < 5 {
                        examples.push(Configuration {
                            set: set.points(),
                            dilations: a.clone(),
                            translations: spectrum.points(),
                        });
                    }
                }
            }
        }
    }
    Ok(OrthogonalScan {
        q: q.get(),
        d,
        systems_checked: checked,
        orthogonal_systems: found,
        orthogonal_with_origin: with_origin,
        examples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::IDENTITY;

    fn m(q: u64) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    #[test]
    fn mother_wavelet_examples() {
        let q = m(3);
        let s = Space::plane(q).unwrap();
        let zero_set = PointSet::from_indices(s, [0]);
        assert_eq!(mother_wavelet(&zero_set).unwrap().norm_sqr(), 0.0);
        let e = construct_wavelet_frame_set(q, 2).unwrap();
        let psi = mother_wavelet(&e).unwrap();
        assert!((psi.norm_sqr() - 2.0 / 3.0).abs() < IDENTITY);
        let hat = dft(&psi, TransformConvention::Unitary);
        let w = 3f64.sqrt().recip();
        for p in s.points() {
            let expect = if e.star().contains(&p) { w } else { 0.0 };
            assert!((hat.at(&p) - expect).norm() < IDENTITY);
        }
        assert_eq!(mother_wavelet(&PointSet::empty(s)), Err(Error::EmptySet));
    }

    #[test]
    fn system_sizes_and_norms() {
        for (q, count, dim, red) in [(3u64, 12, 8, (3, 2)), (7, 56, 48, (7, 6))] {
            let (_, _, _, w) = constructed_system(m(q), 2).unwrap();
            assert_eq!(w.len(), count);
            let norm = w.mother().norm();
            for v in w.vectors() {
                assert!((v.norm() - norm).abs() < IDENTITY);
            }
            let r = frame_bounds(&w, &PointSet::nonzero(w.space())).unwrap();
            assert_eq!((r.vectors, r.dim), (count, dim));
            assert_eq!(r.redundancy(), red);
        }
        let q = m(3);
        let s = Space::plane(q).unwrap();
        let psi = mother_wavelet(&construct_wavelet_frame_set(q, 2).unwrap()).unwrap();
        let single = build_system(
            &psi,
            &[Automorphism::identity(s)],
            &PointSet::from_indices(s, [0]),
        )
        .unwrap();
        assert_eq!(single.len(), 1);
        assert!(single.vectors()[0].max_abs_diff(&psi) == 0.0);
    }

    #[test]
    fn spectra_match_closed_form() {
        let q = m(7);
        let (_, _, _, w) = constructed_system(q, 2).unwrap();
        let hat = dft(w.mother(), TransformConvention::Unitary);
        for (k, &(ai, li)) in w.labels().iter().enumerate() {
            let a = &w.dilations()[ai];
            let l = &w.translations()[li];
            let shift = a.inverse().apply(l).unwrap();
            let dual = a.inverse_transpose();
            for mm in w.space().points() {
                let expect =
                    character(&shift, &mm).unwrap().conj() * hat.at(&dual.apply(&mm).unwrap());
                assert!((w.spectra()[k].at(&mm) - expect).norm() < IDENTITY);
            }
        }
    }

    #[test]
    fn constructed_systems_are_parseval() {
        for q in [3u64, 7] {
            let (_, _, _, w) = constructed_system(m(q), 2).unwrap();
            let y = PointSet::nonzero(w.space());
            let r = frame_bounds(&w, &y).unwrap();
            assert!(r.parseval, "{r:?}");
            assert!(r.tightness_residual < 1e-9);
            assert!(!r.orthogonal);
            let s = frame_operator(&w, &y).unwrap();
            assert!(s.distance_to_scalar(1.0) < 1e-9);
            let sample = sample_frame_inequality(&w, &y, 100, 1).unwrap();
            assert!(sample.max_parseval_defect < 1e-8);
            assert!(sample.within(&r, 1e-8));
        }
    }

    #[test]
    fn report_json_keys() {
        let (_, _, _, w) = constructed_system(m(3), 2).unwrap();
        let r = frame_bounds(&w, &PointSet::nonzero(w.space())).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            [
                "convention",
                "dim",
                "lower",
                "orthogonal",
                "parseval",
                "seed",
                "tightness_residual",
                "upper",
                "vectors"
            ]
        );
        assert_eq!(v["convention"], "unitary");
        assert_eq!(v["seed"], 42);
    }

    #[test]
    fn missing_rotation_leaves_gap() {
        let q = m(3);
        let (set, l, group, _) = constructed_system(q, 2).unwrap();
        // Drop the generator R itself.
        let partial: Vec<Automorphism> = group
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 1)
            .map(|(_, a)| a.clone())
            .collect();
        let w = build_system(&mother_wavelet(&set).unwrap(), &partial, &l).unwrap();
        let r = frame_bounds(&w, &PointSet::nonzero(w.space())).unwrap();
        assert!(r.lower.abs() < 1e-9);
        assert!((r.upper - 1.0).abs() < 1e-9);
        assert!(!r.parseval);
    }

    #[test]
    fn doubling_and_scaling() {
        let (_, _, _, w) = constructed_system(m(3), 2).unwrap();
        let y = PointSet::nonzero(w.space());
        let s1 = frame_operator(&w, &y).unwrap();
        let s2 = frame_operator(&w.union(&w).unwrap(), &y).unwrap();
        assert!((s2.trace() - 2.0 * s1.trace()).abs() < 1e-12);
        assert!(s2.distance_to_scalar(2.0) < 1e-9);
        let c = Complex64::new(0.6, -1.2);
        let r = frame_bounds(&w.scaled(c), &y).unwrap();
        assert!((r.lower - c.norm_sqr()).abs() < 1e-9 && (r.upper - c.norm_sqr()).abs() < 1e-9);
    }

    #[test]
    fn pf_theorem_instances() {
        for q in [3u64, 7] {
            let q = m(q);
            let (set, l, group, _) = constructed_system(q, 2).unwrap();
            let r = certify_pf_theorem(&set, &l, &group).unwrap();
            assert!(r.certified(), "{r:?}");
            assert_eq!(r.bound, q.get() as f64);
            assert!(matches!(r.part4, OrthonormalPart::Skipped { .. }));
        }
        // E = {1} in F_3 with A = {±1}, L = {0}: orthonormal basis of L²(Y).
        let q = m(3);
        let line = Space::line(q);
        let e = PointSet::from_indices(line, [1]);
        let l = PointSet::from_indices(line, [0]);
        let pm = dilation_pool(q, 1).unwrap();
        let r = certify_pf_theorem(&e, &l, &pm).unwrap();
        assert!(r.certified());
        assert!(matches!(
            r.part4,
            OrthonormalPart::Certified {
                orthonormal: true,
                ..
            }
        ));
        // Precondition failures.
        let idle = [Automorphism::identity(line)];
        assert!(matches!(
            certify_pf_theorem(&e, &l, &idle),
            Err(Error::Precondition(_))
        ));
        let bad_l = PointSet::from_indices(line, [0, 1]);
        assert!(matches!(
            certify_pf_theorem(&e, &bad_l, &pm),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn converse_instances() {
        let q = m(3);
        let (set, l, group, w) = constructed_system(q, 2).unwrap();
        let r = certify_converse(&w, &set).unwrap();
        assert!(r.covered && r.disjoint);
        assert!(r.tight_frame_spectral.as_ref().unwrap().tight);
        assert!(matches!(
            certify_converse(&w.union(&w).unwrap(), &set),
            Err(Error::Precondition(_))
        ));
        // Orthonormal basis with 0 ∈ L: supports are disjoint.
        let line = Space::line(q);
        let e = PointSet::from_indices(line, [1]);
        let zero_l = PointSet::from_indices(line, [0]);
        let ob = build_system(
            &mother_wavelet(&e).unwrap(),
            &dilation_pool(q, 1).unwrap(),
            &zero_l,
        )
        .unwrap();
        let rep = frame_bounds(&ob, &PointSet::nonzero(line)).unwrap();
        assert!(rep.parseval && rep.orthogonal);
        let c = certify_converse(&ob, &e).unwrap();
        assert!(c.covered && c.disjoint);
        let _ = (l, group);
    }

    #[test]
    fn duplication_report() {
        let r = duplication_experiment(m(3)).unwrap();
        assert!((r.duplicate.lower - 2.0).abs() < 1e-9 && (r.duplicate.upper - 2.0).abs() < 1e-9);
        assert!(!r.stated_bound_reproduced);
        assert!(r.normalized_converse.covered);
        assert!(!r.normalized_converse.disjoint);
        assert_eq!(
            r.normalized_converse.multiplicity_histogram,
            BTreeMap::from([(2, 8)])
        );
    }

    #[test]
    fn falsification_q3_line() {
        let r = demo_no_full_space_parseval(m(3), 1, 0, DEFAULT_SEED).unwrap();
        assert_eq!(r.exhaustive_configurations, 6 * 3 * 7);
        assert!(!r.parseval_found);
        assert!(r.min_residual > FALSIFICATION);
        assert!(r.full_set_orthonormal);
        assert!(r.origin_direction_vanishes);
        let again = demo_no_full_space_parseval(m(3), 1, 20, 9).unwrap();
        assert_eq!(again, demo_no_full_space_parseval(m(3), 1, 20, 9).unwrap());
    }

    #[test]
    fn orthogonal_scan_line() {
        let r = scan_orthogonal_systems(m(3), 1).unwrap();
        assert!(r.orthogonal_systems > 0);
        assert_eq!(r.orthogonal_with_origin, 0);
        assert!(scan_orthogonal_systems(m(5), 2).is_err());
    }
}
