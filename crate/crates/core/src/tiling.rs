//! Multiplicative and translational tilings, spectral pairs, and the rotational-tiling
//! constructions over F_q² (q ≡ 3 mod 4).

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

pub use crate::points::PointSet;

use crate::error::{Error, ModClass, Result};
use crate::field::{find_k, FieldElement, PrimeModulus};
use crate::fourier::roots_of_unity;
use crate::geometry::{circle, circles, orthogonal_maps, radius_of, unit_rotations, Automorphism};
use crate::points::{Point, Space};
use crate::tolerance::CERTIFICATE;

/// Default cap on `#E` for [`spectrum_search`].
pub const DEFAULT_SEARCH_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TilingKind {
    Multiplicative,
    Translational,
}

/// Outcome of a tiling check: the multiplicity of every target point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingCertificate {
    pub kind: TilingKind,
    pub covered: bool,
    pub disjoint: bool,
    /// First target point (lexicographic) whose multiplicity is not 1.
    pub witness: Option<Point>,
    /// multiplicity → number of target points with that multiplicity.
    pub multiplicity_histogram: BTreeMap<usize, usize>,
}

impl TilingCertificate {
    pub fn is_valid(&self) -> bool {
        self.covered && self.disjoint
    }

    fn from_counts(kind: TilingKind, space: Space, counts: &[usize], skip_origin: bool) -> Self {
        let mut histogram = BTreeMap::new();
        let mut witness = None;
        let mut covered = true;
        let mut disjoint = true;
        for (i, &c) in counts.iter().enumerate() {
            if skip_origin && i == 0 {
                continue;
            }
            *histogram.entry(c).or_insert(0) += 1;
            if c != 1 && witness.is_none() {
                witness = Some(space.point(i));
            }
            covered &= c >= 1;
            disjoint &= c <= 1;
        }
        TilingCertificate {
            kind,
            covered,
            disjoint,
            witness,
            multiplicity_histogram: histogram,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates always serialize")
    }
}

impl Serialize for TilingCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            kind: TilingKind,
            valid: bool,
            witness: &'a Option<Point>,
            multiplicity_histogram: BTreeMap<String, usize>,
        }
        Wire {
            kind: self.kind,
            valid: self.is_valid(),
            witness: &self.witness,
            multiplicity_histogram: self
                .multiplicity_histogram
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        }
        .serialize(s)
    }
}

/// Checks `Y = ⊔_{α ∈ A} α(E)` with `Y = F_q^d \ {0}`.
pub fn verify_multiplicative_tiling(
    set: &PointSet,
    automorphisms: &[Automorphism],
) -> Result<TilingCertificate> {
    if set.contains_origin() {
        return Err(Error::OriginInSet);
    }
    let space = set.space();
    let mut counts = vec![0usize; space.size()];
    for a in automorphisms {
        space.check_same(&a.space())?;
        for i in set.indices() {
            counts[a.apply_index(i)] += 1;
        }
    }
    Ok(TilingCertificate::from_counts(
        TilingKind::Multiplicative,
        space,
        &counts,
        true,
    ))
}

/// Checks `F_q^d = ⊔_{λ ∈ Λ} (E + λ)`.
pub fn verify_translational_tiling(
    set: &PointSet,
    translations: &PointSet,
) -> Result<TilingCertificate> {
    let space = set.space();
    space.check_same(&translations.space())?;
    let mut counts = vec![0usize; space.size()];
    let lambdas = translations.points();
    for e in set.iter() {
        for l in &lambdas {
            counts[(&e + l).index()] += 1;
        }
    }
    Ok(TilingCertificate::from_counts(
        TilingKind::Translational,
        space,
        &counts,
        false,
    ))
}

/// One point per nonzero circle, the lexicographically smallest.
pub fn construct_sector_set(q: PrimeModulus) -> Result<PointSet> {
    q.require(ModClass::ThreeModFour)?;
    let space = Space::plane(q)?;
    let mut set = PointSet::empty(space);
    for c in circles(q)?.iter().skip(1) {
        let first = c
            .points
            .indices()
            .next()
            .expect("nonzero circles are nonempty");
        set.insert_index(first);
    }
    Ok(set)
}

/// `E = {0} ∪ {(x,0) : 0 < x ≤ (q-1)/2} ∪ {(x,kx) : (q+1)/2 ≤ x ≤ q-1}` for d = 2, and
/// `E × F_q^(d-2)` beyond.
pub fn construct_wavelet_frame_set(q: PrimeModulus, d: usize) -> Result<PointSet> {
    q.require(ModClass::ThreeModFour)?;
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let base = wavelet_graph(q)?;
    if d == 2 {
        return Ok(base);
    }
    base.product(&PointSet::full(Space::new(q, d - 2)?))
}

fn wavelet_graph(q: PrimeModulus) -> Result<PointSet> {
    let k = find_k(q)?;
    let space = Space::plane(q)?;
    let mut set = PointSet::empty(space);
    for x in q.elements() {
        let y = if x.value() <= q.half() {
            q.zero()
        } else {
            k * x
        };
        set.insert(&Point::from_elements(&[x, y])?)?;
    }
    Ok(set)
}

/// `{t·e₂ : t ∈ F_q}`, the translation partner of the constructed set in any dimension ≥ 2.
pub fn wavelet_tiling_partner(q: PrimeModulus, d: usize) -> Result<PointSet> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let space = Space::new(q, d)?;
    let mut set = PointSet::empty(space);
    for t in 0..q.get() as u64 {
        let mut coords = vec![0u64; d];
        coords[1] = t;
        set.insert(&Point::new(q, &coords))?;
    }
    Ok(set)
}

/// A representation `E = {x·e₁ + f(x)·e₂ : x ∈ F_q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphForm {
    pub e1: Point,
    pub e2: Point,
    /// `table[x] = f(x)`.
    pub table: Vec<FieldElement>,
}

/// Searches basis pairs in lexicographic order for a graph representation of `E ⊂ F_q²`.
pub fn is_graph(set: &PointSet) -> Result<Option<GraphForm>> {
    if set.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: set.dim(),
        });
    }
    let q = set.modulus();
    if set.len() != q.get() as usize {
        return Err(Error::Cardinality {
            expected: q.get() as usize,
            found: set.len(),
        });
    }
    let space = set.space();
    let members = set.points();
    for e1 in space.points().skip(1) {
        for e2 in space.points().skip(1) {
            let Some(form) = graph_over(&members, &e1, &e2)? else {
                continue;
            };
            return Ok(Some(form));
        }
    }
    Ok(None)
}

fn graph_over(members: &[Point], e1: &Point, e2: &Point) -> Result<Option<GraphForm>> {
    let q = e1.modulus();
    let columns = [
        vec![e1.coords()[0] as u64, e2.coords()[0] as u64],
        vec![e1.coords()[1] as u64, e2.coords()[1] as u64],
    ];
    let basis = match Automorphism::from_rows(q, &columns) {
        Ok(b) => b,
        Err(Error::Singular(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let to_coords = basis.inverse();
    let mut table: Vec<Option<FieldElement>> = vec![None; q.get() as usize];
    for p in members {
        let c = to_coords.apply(p)?;
        let slot = &mut table[c.coords()[0] as usize];
        if slot.is_some() {
            return Ok(None);
        }
        *slot = Some(c.coord(1));
    }
    Ok(Some(GraphForm {
        e1: e1.clone(),
        e2: e2.clone(),
        table: table.into_iter().map(|v| v.expect("bijective")).collect(),
    }))
}

/// The first vector `e₁*` of the basis dual to `(e₁, e₂)`.
fn dual_first(form: &GraphForm) -> Result<Point> {
    let q = form.e1.modulus();
    let rows = [
        vec![form.e1.coords()[0] as u64, form.e2.coords()[0] as u64],
        vec![form.e1.coords()[1] as u64, form.e2.coords()[1] as u64],
    ];
    // Rows of B⁻¹ are the dual basis when B has e₁, e₂ as columns.
    let inv = Automorphism::from_rows(q, &rows)?.inverse();
    Ok(Point::new(
        q,
        &[
            inv.entry(0, 0).value() as u64,
            inv.entry(0, 1).value() as u64,
        ],
    ))
}

/// `L = {l·e₁* : l ∈ F_q}` for a graph over `(e₁, e₂)`. Sets of the form `G × F_q^k` with `G`
/// a graph get `L_G × F_q^k`; a singleton gets `{0}`.
pub fn canonical_spectrum(set: &PointSet) -> Result<PointSet> {
    let space = set.space();
    if set.len() == 1 {
        return Ok(PointSet::from_indices(space, [0]));
    }
    if set.dim() == 2 {
        let form = is_graph(set)?.ok_or(Error::NotAGraph)?;
        let dual = dual_first(&form)?;
        let mut l = PointSet::empty(space);
        for c in set.modulus().elements() {
            l.insert(&dual.scale(c))?;
        }
        return Ok(l);
    }
    if set.dim() > 2 {
        let q = set.modulus();
        let tail = PointSet::full(Space::new(q, set.dim() - 2)?);
        let plane = Space::plane(q)?;
        let base = PointSet::from_indices(plane, set.indices().map(|i| i / tail.len()));
        if base.product(&tail)? != *set {
            return Err(Error::NotAGraph);
        }
        return canonical_spectrum(&base)?.product(&tail);
    }
    Err(Error::NotAGraph)
}

/// Result of a spectral-pair check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralPair {
    pub set: PointSet,
    pub spectrum: PointSet,
    /// `max |G - #E·I|` over the Gram matrix of the restricted characters.
    pub gram_residual: f64,
    pub valid: bool,
}

/// Character sums `Σ_{x∈E} χ_v(x)`, memoized by `v`.
struct CharacterSums<'a> {
    set: &'a PointSet,
    members: Vec<Point>,
    roots: std::sync::Arc<[Complex64]>,
    cache: HashMap<usize, Complex64>,
}

impl<'a> CharacterSums<'a> {
    fn new(set: &'a PointSet) -> Self {
        CharacterSums {
            set,
            members: set.points(),
            roots: roots_of_unity(set.modulus()),
            cache: HashMap::new(),
        }
    }

    fn at(&mut self, v: &Point) -> Complex64 {
        let key = v.index();
        if let Some(s) = self.cache.get(&key) {
            return *s;
        }
        let s = self
            .members
            .iter()
            .map(|x| self.roots[v.dot(x).expect("same space").value() as usize])
            .sum();
        self.cache.insert(key, s);
        s
    }

    fn vanishes(&mut self, v: &Point, tol: f64) -> bool {
        self.at(v).norm() <= tol * self.set.len() as f64
    }
}

/// Builds `G[l,l'] = Σ_{x∈E} χ_l(x)·conj(χ_l'(x))` and compares it with `#E·I`.
pub fn verify_spectral_pair(set: &PointSet, spectrum: &PointSet) -> Result<SpectralPair> {
    verify_spectral_pair_with_tol(set, spectrum, CERTIFICATE)
}

pub fn verify_spectral_pair_with_tol(
    set: &PointSet,
    spectrum: &PointSet,
    tol: f64,
) -> Result<SpectralPair> {
    set.space().check_same(&spectrum.space())?;
    let n = set.len() as f64;
    let ls = spectrum.points();
    let mut sums = CharacterSums::new(set);
    let mut residual: f64 = 0.0;
    for l in &ls {
        for lp in &ls {
            // χ_l(x)·conj(χ_l'(x)) = χ_{l-l'}(x)
            let g = sums.at(&(l - lp));
            let target = if l == lp { n } else { 0.0 };
            residual = residual.max((g - Complex64::new(target, 0.0)).norm());
        }
    }
    let valid = set.len() == spectrum.len() && residual <= tol * n.max(1.0);
    Ok(SpectralPair {
        set: set.clone(),
        spectrum: spectrum.clone(),
        gram_residual: residual,
        valid,
    })
}

/// Exhaustive clique search for a spectrum of `E` containing the origin.
///
/// Any spectrum can be translated to contain 0, so `None` means `E` is not spectral.
pub fn spectrum_search(set: &PointSet, limit: usize) -> Result<Option<PointSet>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.len() > limit {
        return Err(Error::SearchBudget {
            size: set.len(),
            limit,
        });
    }
    let space = set.space();
    let mut sums = CharacterSums::new(set);
    let zeros: Vec<bool> = space
        .points()
        .map(|v| !v.is_origin() && sums.vanishes(&v, CERTIFICATE))
        .collect();
    let candidates: Vec<usize> = (1..space.size()).filter(|&i| zeros[i]).collect();
    let mut chosen = vec![0usize];
    let target = set.len();
    let found = extend_clique(space, &zeros, &candidates, &mut chosen, target);
    Ok(found.then(|| PointSet::from_indices(space, chosen.iter().copied())))
}

fn extend_clique(
    space: Space,
    zeros: &[bool],
    candidates: &[usize],
    chosen: &mut Vec<usize>,
    target: usize,
) -> bool {
    if chosen.len() == target {
        return true;
    }
    if chosen.len() + candidates.len() < target {
        return false;
    }
    for (pos, &c) in candidates.iter().enumerate() {
        if chosen.len() + (candidates.len() - pos) < target {
            return false;
        }
        let cp = space.point(c);
        let rest: Vec<usize> = candidates[pos + 1..]
            .iter()
            .copied()
            .filter(|&o| zeros[(&space.point(o) - &cp).index()])
            .collect();
        chosen.push(c);
        if extend_clique(space, zeros, &rest, chosen, target) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Exact-cover search for `Λ` with `F_q^d = ⊔ (E + λ)`, normalized so the first tile covers
/// the origin.
pub fn find_tiling_partner(set: &PointSet) -> Result<Option<PointSet>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let space = set.space();
    if !space.size().is_multiple_of(set.len()) {
        return Ok(None);
    }
    let mut covered = PointSet::empty(space);
    let mut lambdas = Vec::new();
    let members = set.points();
    let found = cover(space, &members, &mut covered, &mut lambdas);
    Ok(found.then(|| PointSet::from_indices(space, lambdas.iter().copied())))
}

fn cover(
    space: Space,
    members: &[Point],
    covered: &mut PointSet,
    lambdas: &mut Vec<usize>,
) -> bool {
    let Some(free) = (0..space.size()).find(|&i| !covered.contains_index(i)) else {
        return true;
    };
    let p = space.point(free);
    for e in members {
        let lambda = &p - e;
        let tile: Vec<usize> = members.iter().map(|m| (m + &lambda).index()).collect();
        if tile.iter().any(|&i| covered.contains_index(i)) {
            continue;
        }
        for &i in &tile {
            covered.insert_index(i);
        }
        lambdas.push(lambda.index());
        if cover(space, members, covered, lambdas) {
            return true;
        }
        lambdas.pop();
        for &i in &tile {
            covered.remove_index(i);
        }
    }
    false
}

/// Outcome of the q ≡ 1 (mod 4) obstruction check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub q: u32,
    pub s0_count: usize,
    pub expected_s0_count: usize,
    /// Uncovered points of `Y` for every (representatives, maps) combination tried.
    pub trials: Vec<ObstructionTrial>,
    /// Common uncovered count, when every trial agrees.
    pub uncovered: Option<usize>,
    /// Every uncovered point lies on `S_0` in every trial.
    pub uncovered_on_s0: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionTrial {
    pub representatives: String,
    pub maps: String,
    pub uncovered: usize,
}

/// For q ≡ 1 (mod 4): shows that one point per nonzero circle, moved by norm-preserving
/// maps, never reaches `S_0 \ {0}` (which has `2q - 2` points).
pub fn verify_q1mod4_obstruction(q: PrimeModulus) -> Result<ObstructionReport> {
    q.require(ModClass::OneModFour)?;
    let space = Space::plane(q)?;
    let all = circles(q)?;
    let s0 = circle(q, q.zero())?;
    let families = [
        ("unit rotations", unit_rotations(q)?),
        ("rotations and reflections", orthogonal_maps(q)?),
    ];
    let mut choices: Vec<(String, PointSet)> = Vec::new();
    let pick = |select: &dyn Fn(&[usize]) -> usize| {
        PointSet::from_indices(
            space,
            all.iter().skip(1).map(|c| {
                let idx: Vec<usize> = c.points.indices().collect();
                select(&idx)
            }),
        )
    };
    choices.push(("lexicographically smallest".into(), pick(&|v| v[0])));
    choices.push((
        "lexicographically largest".into(),
        pick(&|v| v[v.len() - 1]),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(q.get() as u64);
    for trial in 0..4 {
        let set = PointSet::from_indices(
            space,
            all.iter().skip(1).map(|c| {
                let idx: Vec<usize> = c.points.indices().collect();
                *idx.choose(&mut rng).expect("nonempty")
            }),
        );
        choices.push((format!("seeded random #{trial}"), set));
    }
    let mut trials = Vec::new();
    let mut on_s0 = true;
    for (label, set) in &choices {
        for (maps_label, maps) in &families {
            let mut hit = PointSet::empty(space);
            for a in maps {
                for i in set.indices() {
                    hit.insert_index(a.apply_index(i));
                }
            }
            let missed = PointSet::nonzero(space).intersection(&hit.complement());
            on_s0 &= missed.iter().all(|p| radius_of(&p).is_zero());
            trials.push(ObstructionTrial {
                representatives: label.clone(),
                maps: maps_label.to_string(),
                uncovered: missed.len(),
            });
        }
    }
    let first = trials[0].uncovered;
    let uncovered = trials.iter().all(|t| t.uncovered == first).then_some(first);
    Ok(ObstructionReport {
        q: q.get(),
        s0_count: s0.len(),
        expected_s0_count: 2 * q.get() as usize - 1,
        trials,
        uncovered,
        uncovered_on_s0: on_s0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{lifted_rotation_group, rotation_group};

    fn m(q: u64) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    fn pts(q: PrimeModulus, coords: &[[u64; 2]]) -> Vec<Point> {
        coords.iter().map(|c| Point::new(q, c)).collect()
    }

    #[test]
    fn sector_set_examples() {
        let q = m(3);
        let e = construct_sector_set(q).unwrap();
        assert_eq!(e.points(), pts(q, &[[0, 1], [1, 1]]));
        assert_eq!(construct_sector_set(m(7)).unwrap().len(), 6);
        let q = m(11);
        let cert = verify_multiplicative_tiling(
            &construct_sector_set(q).unwrap(),
            &rotation_group(q).unwrap(),
        )
        .unwrap();
        assert!(cert.is_valid());
        assert!(construct_sector_set(m(5)).is_err());
    }

    #[test]
    fn wavelet_set_examples() {
        let q = m(3);
        assert_eq!(
            construct_wavelet_frame_set(q, 2).unwrap().points(),
            pts(q, &[[0, 0], [1, 0], [2, 2]])
        );
        let q = m(7);
        assert_eq!(
            construct_wavelet_frame_set(q, 2).unwrap().points(),
            pts(q, &[[0, 0], [1, 0], [2, 0], [3, 0], [4, 1], [5, 3], [6, 5]])
        );
        let lifted = construct_wavelet_frame_set(m(3), 3).unwrap();
        assert_eq!(lifted.len(), 9);
        assert_eq!(lifted.dim(), 3);
        assert!(matches!(
            construct_wavelet_frame_set(m(5), 2),
            Err(Error::ModulusClass { .. })
        ));
        assert_eq!(
            construct_wavelet_frame_set(m(3), 1),
            Err(Error::InvalidDimension(1))
        );
    }

    #[test]
    fn wavelet_set_meets_each_circle_once() {
        for q in [3u64, 7, 11, 19, 23] {
            let q = m(q);
            let e = construct_wavelet_frame_set(q, 2).unwrap();
            assert!(e.contains_origin());
            for c in circles(q).unwrap().iter().skip(1) {
                assert_eq!(e.intersection(&c.points).len(), 1);
            }
        }
    }

    #[test]
    fn multiplicative_examples() {
        let q = m(3);
        let group = rotation_group(q).unwrap();
        let cert = verify_multiplicative_tiling(&construct_sector_set(q).unwrap(), &group).unwrap();
        assert!(cert.is_valid());
        assert_eq!(cert.multiplicity_histogram, BTreeMap::from([(1, 8)]));
        let s1 = circle(q, q.one()).unwrap().points;
        let cert = verify_multiplicative_tiling(&s1, &group).unwrap();
        assert!(!cert.is_valid());
        assert_eq!(
            cert.multiplicity_histogram,
            BTreeMap::from([(0, 4), (4, 4)])
        );
        let q = m(7);
        let e = construct_wavelet_frame_set(q, 2).unwrap();
        assert!(
            verify_multiplicative_tiling(&e.star(), &rotation_group(q).unwrap())
                .unwrap()
                .is_valid()
        );
        assert_eq!(
            verify_multiplicative_tiling(&e, &rotation_group(q).unwrap()),
            Err(Error::OriginInSet)
        );
    }

    #[test]
    fn lifted_set_cannot_tile_multiplicatively() {
        // (0, 0, t) with t ≠ 0 is fixed by every block-lifted rotation.
        let q = m(3);
        let e = construct_wavelet_frame_set(q, 3).unwrap();
        let cert =
            verify_multiplicative_tiling(&e.star(), &lifted_rotation_group(q, 3).unwrap()).unwrap();
        assert!(!cert.is_valid());
        assert_eq!(
            cert.multiplicity_histogram,
            BTreeMap::from([(1, 24), (4, 2)])
        );
        assert_eq!(cert.witness, Some(Point::new(q, &[0, 0, 1])));
    }

    #[test]
    fn translational_examples() {
        let q = m(3);
        let s = Space::plane(q).unwrap();
        let e = construct_wavelet_frame_set(q, 2).unwrap();
        let partner = PointSet::from_points(s, &pts(q, &[[0, 0], [0, 1], [0, 2]])).unwrap();
        assert_eq!(wavelet_tiling_partner(q, 2).unwrap(), partner);
        assert!(verify_translational_tiling(&e, &partner)
            .unwrap()
            .is_valid());
        let full = PointSet::full(s);
        let origin = PointSet::from_indices(s, [0]);
        assert!(verify_translational_tiling(&full, &origin)
            .unwrap()
            .is_valid());
        let pair = PointSet::from_points(s, &pts(q, &[[0, 0], [1, 0]])).unwrap();
        let cert = verify_translational_tiling(&pair, &full).unwrap();
        assert!(!cert.is_valid());
        assert_eq!(cert.multiplicity_histogram, BTreeMap::from([(2, 9)]));
        let other = PointSet::full(Space::new(q, 3).unwrap());
        assert!(verify_translational_tiling(&pair, &other).is_err());
    }

    #[test]
    fn certificate_json() {
        let q = m(7);
        let e = construct_wavelet_frame_set(q, 2).unwrap().star();
        let cert = verify_multiplicative_tiling(&e, &rotation_group(q).unwrap()).unwrap();
        assert_eq!(
            cert.to_json(),
            r#"{"kind":"multiplicative","valid":true,"witness":null,"multiplicity_histogram":{"1":48}}"#
        );
        let s1 = circle(m(3), m(3).one()).unwrap().points;
        let bad = verify_multiplicative_tiling(&s1, &rotation_group(m(3)).unwrap()).unwrap();
        assert!(bad.to_json().contains(r#""witness":[0,1]"#));
    }

    #[test]
    fn graph_examples() {
        let q = m(7);
        let e = construct_wavelet_frame_set(q, 2).unwrap();
        let form = is_graph(&e).unwrap().unwrap();
        assert_eq!(form.e1, Point::new(q, &[1, 0]));
        assert_eq!(form.e2, Point::new(q, &[0, 1]));
        let f: Vec<u32> = form.table.iter().map(|v| v.value()).collect();
        assert_eq!(f, vec![0, 0, 0, 0, 1, 3, 5]);

        let s = Space::plane(q).unwrap();
        let column = PointSet::from_indices(s, (0..7).map(|y| y as usize));
        let form = is_graph(&column).unwrap().unwrap();
        assert_eq!(
            (form.e1.clone(), form.e2.clone()),
            (Point::new(q, &[0, 1]), Point::new(q, &[1, 0]))
        );

        let q3 = m(3);
        let s1 = circle(q3, q3.one()).unwrap().points;
        assert!(matches!(is_graph(&s1), Err(Error::Cardinality { .. })));
    }

    #[test]
    fn canonical_spectrum_examples() {
        let q = m(3);
        let s = Space::plane(q).unwrap();
        let e = construct_wavelet_frame_set(q, 2).unwrap();
        let l = canonical_spectrum(&e).unwrap();
        assert_eq!(l.points(), pts(q, &[[0, 0], [1, 0], [2, 0]]));
        let pair = verify_spectral_pair(&e, &l).unwrap();
        assert!(pair.valid);
        assert!(pair.gram_residual < 1e-12);

        let q7 = m(7);
        let l7 = canonical_spectrum(&construct_wavelet_frame_set(q7, 2).unwrap()).unwrap();
        let axis = PointSet::from_indices(Space::plane(q7).unwrap(), (0..7).map(|x| x * 7));
        assert_eq!(l7, axis);

        let single = PointSet::from_indices(s, [5]);
        assert_eq!(
            canonical_spectrum(&single).unwrap().points(),
            vec![s.origin()]
        );

        let lifted = construct_wavelet_frame_set(q, 3).unwrap();
        let l3 = canonical_spectrum(&lifted).unwrap();
        assert_eq!(l3.len(), 9);
        assert!(verify_spectral_pair(&lifted, &l3).unwrap().valid);
    }

    #[test]
    fn spectral_pair_examples() {
        let q = m(3);
        let s = Space::plane(q).unwrap();
        let e = construct_wavelet_frame_set(q, 2).unwrap();
        let too_small = PointSet::from_indices(s, [0, 3]);
        assert!(!verify_spectral_pair(&e, &too_small).unwrap().valid);
        let full = PointSet::full(s);
        let pair = verify_spectral_pair(&full, &full).unwrap();
        assert!(pair.valid);
    }

    #[test]
    fn spectrum_search_examples() {
        let q = m(5);
        let line = Space::line(q);
        let e = PointSet::from_indices(line, [1, 2]);
        assert_eq!(spectrum_search(&e, DEFAULT_SEARCH_LIMIT).unwrap(), None);

        let q3 = m(3);
        let s = Space::plane(q3).unwrap();
        let axis = PointSet::from_indices(s, [0, 3, 6]);
        let l = spectrum_search(&axis, DEFAULT_SEARCH_LIMIT)
            .unwrap()
            .unwrap();
        assert_eq!(l.len(), 3);
        assert!(verify_spectral_pair(&axis, &l).unwrap().valid);

        let single = PointSet::from_indices(s, [4]);
        assert_eq!(
            spectrum_search(&single, DEFAULT_SEARCH_LIMIT)
                .unwrap()
                .unwrap()
                .points(),
            vec![s.origin()]
        );
        let big = PointSet::full(Space::plane(m(5)).unwrap());
        assert!(matches!(
            spectrum_search(&big, DEFAULT_SEARCH_LIMIT),
            Err(Error::SearchBudget { .. })
        ));
    }

    #[test]
    fn tiling_partner_search() {
        let q = m(3);
        let e = construct_wavelet_frame_set(q, 2).unwrap();
        let partner = find_tiling_partner(&e).unwrap().unwrap();
        assert!(verify_translational_tiling(&e, &partner)
            .unwrap()
            .is_valid());
        let s = Space::plane(q).unwrap();
        assert_eq!(
            find_tiling_partner(&PointSet::from_indices(s, [0, 1])).unwrap(),
            None
        );
        let l_shape = PointSet::from_indices(s, [0, 1, 3]);
        let partner = find_tiling_partner(&l_shape).unwrap().unwrap();
        assert!(verify_translational_tiling(&l_shape, &partner)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn obstruction_examples() {
        let r = verify_q1mod4_obstruction(m(5)).unwrap();
        assert_eq!(r.s0_count, 9);
        assert_eq!(r.uncovered, Some(8));
        assert!(r.uncovered_on_s0);
        let r = verify_q1mod4_obstruction(m(13)).unwrap();
        assert_eq!(r.s0_count, 25);
        assert_eq!(r.uncovered, Some(24));
        assert!(matches!(
            verify_q1mod4_obstruction(m(3)),
            Err(Error::ModulusClass { .. })
        ));
    }
}
