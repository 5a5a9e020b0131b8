//! Automorphisms of F_q^d, circles `S_r ⊂ F_q²`, and the finite-field rotation group.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, ModClass, Result};
use crate::field::{element_order, FieldElement, GaussianInt, PrimeModulus};
use crate::points::{Point, PointSet, Space};

/// An invertible `d×d` matrix over F_q, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    space: Space,
    entries: Vec<u32>,
}

impl Automorphism {
    /// Builds a matrix from rows, reducing entries mod q and rejecting singular input.
    pub fn from_rows(modulus: PrimeModulus, rows: &[Vec<u64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: dim,
                cols: bad.len(),
            });
        }
        let space = Space::new(modulus, dim)?;
        let q = modulus.get() as u64;
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(move |&v| (v % q) as u32))
            .collect();
        let a = Automorphism { space, entries };
        if a.determinant().is_zero() {
            return Err(Error::Singular(modulus.get()));
        }
        Ok(a)
    }

    pub fn identity(space: Space) -> Self {
        let d = space.dim();
        let mut entries = vec![0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1;
        }
        Automorphism { space, entries }
    }

    /// `diag(values)`; fails if any value is zero.
    pub fn diagonal(modulus: PrimeModulus, values: &[u64]) -> Result<Self> {
        let d = values.len();
        let rows: Vec<Vec<u64>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { values[i] } else { 0 }).collect())
            .collect();
        Self::from_rows(modulus, &rows)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.space.modulus()
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.modulus()
            .element(self.entries[i * self.dim() + j] as u64)
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries
            .chunks(self.dim())
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.space)
    }

    fn check(&self, other: &Automorphism) -> Result<()> {
        self.space.check_same(&other.space)
    }

    /// `self · other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        self.check(other)?;
        let d = self.dim();
        let q = self.modulus().get() as u64;
        let mut entries = vec![0u32; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0u64;
                for k in 0..d {
                    s += self.entries[i * d + k] as u64 * other.entries[k * d + j] as u64;
                    s %= q;
                }
                entries[i * d + j] = s as u32;
            }
        }
        Ok(Automorphism {
            space: self.space,
            entries,
        })
    }

    pub fn pow(&self, mut n: u64) -> Automorphism {
        let mut base = self.clone();
        let mut acc = Self::identity(self.space);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base).expect("same space");
            }
            base = base.compose(&base).expect("same space");
            n >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> Automorphism {
        let d = self.dim();
        let mut entries = vec![0u32; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j];
            }
        }
        Automorphism {
            space: self.space,
            entries,
        }
    }

    pub fn determinant(&self) -> FieldElement {
        let (det, _) = self.gauss_jordan();
        det
    }

    pub fn inverse(&self) -> Automorphism {
        let (_, inv) = self.gauss_jordan();
        inv.expect("automorphisms are invertible by construction")
    }

    /// `a* = (aᵗ)⁻¹ = (a⁻¹)ᵗ`.
    pub fn inverse_transpose(&self) -> Automorphism {
        self.inverse().transpose()
    }

    fn gauss_jordan(&self) -> (FieldElement, Option<Automorphism>) {
        let d = self.dim();
        let m = self.modulus();
        let mut a: Vec<FieldElement> = self.entries.iter().map(|&v| m.element(v as u64)).collect();
        let mut inv: Vec<FieldElement> = Self::identity(self.space)
            .entries
            .iter()
            .map(|&v| m.element(v as u64))
            .collect();
        let mut det = m.one();
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| !a[r * d + col].is_zero()) else {
                return (m.zero(), None);
            };
            if pivot != col {
                for k in 0..d {
                    a.swap(pivot * d + k, col * d + k);
                    inv.swap(pivot * d + k, col * d + k);
                }
                det = -det;
            }
            let p = a[col * d + col];
            det = det * p;
            let p_inv = p.inverse().expect("pivot is nonzero");
            for k in 0..d {
                a[col * d + k] = a[col * d + k] * p_inv;
                inv[col * d + k] = inv[col * d + k] * p_inv;
            }
            for r in 0..d {
                if r == col || a[r * d + col].is_zero() {
                    continue;
                }
                let factor = a[r * d + col];
                for k in 0..d {
                    a[r * d + k] = a[r * d + k] - factor * a[col * d + k];
                    inv[r * d + k] = inv[r * d + k] - factor * inv[col * d + k];
                }
            }
        }
        let inverse = Automorphism {
            space: self.space,
            entries: inv.iter().map(|e| e.value()).collect(),
        };
        (det, Some(inverse))
    }

    /// `a · p`.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        self.space.check(p)?;
        let d = self.dim();
        let q = self.modulus().get() as u64;
        let coords: Vec<u64> = (0..d)
            .map(|i| {
                (0..d).fold(0u64, |acc, j| {
                    (acc + self.entries[i * d + j] as u64 * p.coords()[j] as u64) % q
                })
            })
            .collect();
        Ok(Point::new(self.modulus(), &coords))
    }

    /// `a · p` on canonical indices.
    pub fn apply_index(&self, index: usize) -> usize {
        let d = self.dim();
        let q = self.modulus().get() as u64;
        let mut coords = [0u64; 8];
        let mut heap;
        let src: &mut [u64] = if d <= 8 {
            &mut coords[..d]
        } else {
            heap = vec![0u64; d];
            &mut heap
        };
        let mut rest = index as u64;
        for c in src.iter_mut().rev() {
            *c = rest % q;
            rest /= q;
        }
        let mut out = 0u64;
        for i in 0..d {
            let row = &self.entries[i * d..(i + 1) * d];
            let v = row
                .iter()
                .zip(src.iter())
                .fold(0u64, |acc, (&a, &x)| (acc + a as u64 * x) % q);
            out = out * q + v;
        }
        out as usize
    }

    /// The image `a(E)`.
    pub fn image(&self, set: &PointSet) -> Result<PointSet> {
        self.space.check_same(&set.space())?;
        Ok(PointSet::from_indices(
            set.space(),
            set.indices().map(|i| self.apply_index(i)),
        ))
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Serialize for Automorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// The circle `S_r = {(x,y) : x² + y² = r}` in F_q².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub radius: FieldElement,
    pub points: PointSet,
}

impl Circle {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sorted_points(&self) -> Vec<Point> {
        self.points.points()
    }
}

/// `x² + y²` for a point of F_q².
pub fn radius_of(p: &Point) -> FieldElement {
    p.coord(0).square() + p.coord(1).square()
}

/// Enumerates `S_r` by scanning x and solving `y² = r - x²`.
pub fn circle(q: PrimeModulus, r: FieldElement) -> Result<Circle> {
    if r.modulus() != q {
        return Err(Error::ModulusMismatch(q.get(), r.modulus().get()));
    }
    let space = Space::plane(q)?;
    let mut points = PointSet::empty(space);
    let n = q.get() as usize;
    for x in q.elements() {
        if let Some(y) = (r - x.square()).sqrt() {
            points.insert_index(x.value() as usize * n + y.value() as usize);
            points.insert_index(x.value() as usize * n + (-y).value() as usize);
        }
    }
    Ok(Circle { radius: r, points })
}

/// All circles `S_0, ..., S_{q-1}` in radius order.
pub fn circles(q: PrimeModulus) -> Result<Vec<Circle>> {
    q.elements().map(|r| circle(q, r)).collect()
}

/// First element of `S_1 ⊂ GF(q²)` (lexicographic in `(a, b)`) of full order `q + 1`.
pub fn find_rotation_generator(q: PrimeModulus) -> Result<GaussianInt> {
    q.require(ModClass::ThreeModFour)?;
    let unit = circle(q, q.one())?;
    for p in unit.points.iter() {
        let g = GaussianInt::new(p.coord(0), p.coord(1))?;
        if element_order(g)? == q.get() as u64 + 1 {
            return Ok(g);
        }
    }
    unreachable!("S_1 is cyclic of order q + 1")
}

/// `[[a, -b], [b, a]]` for `a² + b² = 1`.
pub fn rotation_from_unit(a: FieldElement, b: FieldElement) -> Result<Automorphism> {
    let q = a.modulus();
    if b.modulus() != q {
        return Err(Error::ModulusMismatch(q.get(), b.modulus().get()));
    }
    if a.square() + b.square() != q.one() {
        return Err(Error::NotOnUnitCircle(format!("({a}, {b})")));
    }
    Automorphism::from_rows(
        q,
        &[
            vec![a.value() as u64, (-b).value() as u64],
            vec![b.value() as u64, a.value() as u64],
        ],
    )
}

/// The rotation matrix of `g = a + bi`; it acts on F_q² as multiplication by `g`.
pub fn rotation_matrix(g: GaussianInt) -> Result<Automorphism> {
    rotation_from_unit(g.re(), g.im())
}

/// `I, R, ..., R^q` for the rotation `R` of the scanned generator.
pub fn rotation_group(q: PrimeModulus) -> Result<Vec<Automorphism>> {
    let r = rotation_matrix(find_rotation_generator(q)?)?;
    let mut group = Vec::with_capacity(q.get() as usize + 1);
    let mut acc = Automorphism::identity(r.space());
    for _ in 0..=q.get() {
        group.push(acc.clone());
        acc = acc.compose(&r)?;
    }
    Ok(group)
}

/// Every `[[a, -b], [b, a]]` with `a² + b² = 1`, in lexicographic order of `(a, b)`.
///
/// Works for either residue class.
pub fn unit_rotations(q: PrimeModulus) -> Result<Vec<Automorphism>> {
    circle(q, q.one())?
        .points
        .iter()
        .map(|p| rotation_from_unit(p.coord(0), p.coord(1)))
        .collect()
}

/// Unit rotations together with the reflections `[[a, b], [b, -a]]`, `a² + b² = 1`.
pub fn orthogonal_maps(q: PrimeModulus) -> Result<Vec<Automorphism>> {
    let mut maps = unit_rotations(q)?;
    for p in circle(q, q.one())?.points.iter() {
        let (a, b) = (p.coord(0), p.coord(1));
        maps.push(Automorphism::from_rows(
            q,
            &[
                vec![a.value() as u64, b.value() as u64],
                vec![b.value() as u64, (-a).value() as u64],
            ],
        )?);
    }
    Ok(maps)
}

/// `[[a, 0], [0, I_{d-2}]]` for a 2×2 automorphism `a`.
pub fn block_lift(a: &Automorphism, d: usize) -> Result<Automorphism> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    if d <= 2 {
        return Err(Error::InvalidDimension(d));
    }
    let rows: Vec<Vec<u64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| match (i < 2, j < 2) {
                    (true, true) => a.entry(i, j).value() as u64,
                    (false, false) if i == j => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    Automorphism::from_rows(a.modulus(), &rows)
}

/// The rotation group lifted to F_q^d (identity for d = 2).
pub fn lifted_rotation_group(q: PrimeModulus, d: usize) -> Result<Vec<Automorphism>> {
    let group = rotation_group(q)?;
    match d {
        2 => Ok(group),
        _ => group.iter().map(|a| block_lift(a, d)).collect(),
    }
}

/// `{α(p) : α ∈ a_set}`.
pub fn orbit(a_set: &[Automorphism], p: &Point) -> Result<PointSet> {
    let space = Space::new(p.modulus(), p.dim())?;
    let mut set = PointSet::empty(space);
    for a in a_set {
        set.insert(&a.apply(p)?)?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: u64) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    fn pt(q: PrimeModulus, c: &[u64]) -> Point {
        Point::new(q, c)
    }

    #[test]
    fn circle_examples() {
        let q = m(3);
        let s1 = circle(q, q.one()).unwrap();
        let expected = PointSet::from_points(
            Space::plane(q).unwrap(),
            &[
                pt(q, &[1, 0]),
                pt(q, &[2, 0]),
                pt(q, &[0, 1]),
                pt(q, &[0, 2]),
            ],
        )
        .unwrap();
        assert_eq!(s1.points, expected);
        let q = m(7);
        let s0 = circle(q, q.zero()).unwrap();
        assert_eq!(s0.sorted_points(), vec![pt(q, &[0, 0])]);
        let q = m(5);
        assert_eq!(circle(q, q.zero()).unwrap().len(), 9);
    }

    #[test]
    fn circle_matches_exhaustive_scan() {
        for q in [3u64, 5, 7, 11, 13] {
            let q = m(q);
            let space = Space::plane(q).unwrap();
            for r in q.elements() {
                let scan = PointSet::from_indices(
                    space,
                    space
                        .points()
                        .filter(|p| radius_of(p) == r)
                        .map(|p| p.index()),
                );
                assert_eq!(circle(q, r).unwrap().points, scan);
            }
        }
    }

    #[test]
    fn circle_counts() {
        for q in [3u64, 7, 11, 19, 23] {
            let q = m(q);
            let all = circles(q).unwrap();
            assert_eq!(all[0].len(), 1);
            for c in &all[1..] {
                assert_eq!(c.len(), q.get() as usize + 1);
            }
            let total: usize = all.iter().map(|c| c.len()).sum();
            assert_eq!(total, (q.get() * q.get()) as usize);
        }
        for q in [5u64, 13] {
            let q = m(q);
            assert_eq!(circle(q, q.zero()).unwrap().len(), 2 * q.get() as usize - 1);
        }
    }

    #[test]
    fn generator_examples() {
        let q = m(3);
        assert_eq!(
            find_rotation_generator(q).unwrap(),
            GaussianInt::i(q).unwrap()
        );
        for (q, order) in [(7u64, 8u64), (11, 12), (19, 20), (23, 24)] {
            let g = find_rotation_generator(m(q)).unwrap();
            assert_eq!(element_order(g).unwrap(), order);
            assert_eq!(g.norm(), m(q).one());
        }
        assert!(matches!(
            find_rotation_generator(m(5)),
            Err(Error::ModulusClass { .. })
        ));
    }

    #[test]
    fn rotation_matrix_examples() {
        let q = m(3);
        assert!(rotation_matrix(GaussianInt::one(q).unwrap())
            .unwrap()
            .is_identity());
        let r = rotation_matrix(GaussianInt::i(q).unwrap()).unwrap();
        assert_eq!(r.rows(), vec![vec![0, 2], vec![1, 0]]);
        let off = GaussianInt::from_parts(m(7), 1, 1).unwrap();
        assert!(matches!(
            rotation_matrix(off),
            Err(Error::NotOnUnitCircle(_))
        ));
    }

    #[test]
    fn rotation_matches_gaussian_multiplication() {
        for q in [3u64, 7, 11] {
            let q = m(q);
            let unit: Vec<GaussianInt> = circle(q, q.one())
                .unwrap()
                .points
                .iter()
                .map(|p| GaussianInt::new(p.coord(0), p.coord(1)).unwrap())
                .collect();
            for &g in &unit {
                for &h in &unit {
                    let lhs = rotation_matrix(g)
                        .unwrap()
                        .compose(&rotation_matrix(h).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rotation_matrix(g * h).unwrap());
                }
                let rg = rotation_matrix(g).unwrap();
                for e in Space::plane(q).unwrap().points() {
                    let z = GaussianInt::new(e.coord(0), e.coord(1)).unwrap() * g;
                    let image = rg.apply(&e).unwrap();
                    assert_eq!((image.coord(0), image.coord(1)), (z.re(), z.im()));
                    // Rotations preserve the radius.
                    assert_eq!(radius_of(&image), radius_of(&e));
                }
            }
        }
    }

    #[test]
    fn rotation_group_properties() {
        let q = m(3);
        assert_eq!(rotation_group(q).unwrap().len(), 4);
        let q7 = m(7);
        let g7 = rotation_group(q7).unwrap();
        assert!(g7[1].pow(8).is_identity());
        let g11 = rotation_group(m(11)).unwrap();
        for i in 0..g11.len() {
            for j in 0..i {
                assert_ne!(g11[i], g11[j]);
            }
        }
    }

    #[test]
    fn orbits_generate_circles() {
        for q in [3u64, 7, 11] {
            let q = m(q);
            let group = rotation_group(q).unwrap();
            for c in circles(q).unwrap().iter().skip(1) {
                for e in c.points.iter() {
                    assert_eq!(orbit(&group, &e).unwrap(), c.points);
                }
            }
        }
        let q = m(3);
        let group = rotation_group(q).unwrap();
        let origin = Space::plane(q).unwrap().origin();
        assert_eq!(orbit(&group, &origin).unwrap().len(), 1);
        let s2 = orbit(&group, &pt(q, &[2, 2])).unwrap();
        assert_eq!(
            s2.points(),
            vec![
                pt(q, &[1, 1]),
                pt(q, &[1, 2]),
                pt(q, &[2, 1]),
                pt(q, &[2, 2])
            ]
        );
        assert!(orbit(&group, &pt(q, &[1, 1, 1])).is_err());
    }

    #[test]
    fn block_lift_examples() {
        let q = m(3);
        let r = rotation_matrix(GaussianInt::i(q).unwrap()).unwrap();
        let lifted = block_lift(&r, 3).unwrap();
        assert_eq!(
            lifted.rows(),
            vec![vec![0, 2, 0], vec![1, 0, 0], vec![0, 0, 1]]
        );
        assert!(lifted.pow(4).is_identity());
        let id = Automorphism::identity(Space::plane(q).unwrap());
        assert!(block_lift(&id, 5).unwrap().is_identity());
        assert_eq!(block_lift(&r, 2), Err(Error::InvalidDimension(2)));
    }

    #[test]
    fn inverse_transpose_identities() {
        for q in [3u64, 7, 11] {
            let q = m(q);
            for a in rotation_group(q).unwrap() {
                let inv = a.inverse();
                assert!(a.compose(&inv).unwrap().is_identity());
                assert_eq!(a.inverse_transpose().transpose(), inv);
                assert_eq!(a.transpose().inverse(), a.inverse_transpose());
                // a* · aᵗ = I
                assert!(a
                    .inverse_transpose()
                    .compose(&a.transpose())
                    .unwrap()
                    .is_identity());
            }
        }
        let q = m(7);
        let a = Automorphism::from_rows(q, &[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]).unwrap();
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
        assert!(a.inverse().compose(&a).unwrap().is_identity());
    }

    #[test]
    fn singular_and_malformed_matrices() {
        let q = m(7);
        assert_eq!(
            Automorphism::from_rows(q, &[vec![1, 2], vec![2, 4]]),
            Err(Error::Singular(7))
        );
        assert!(matches!(
            Automorphism::from_rows(q, &[vec![1, 2], vec![2]]),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn apply_index_agrees_with_apply() {
        let q = m(7);
        let a = Automorphism::from_rows(q, &[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]).unwrap();
        for p in a.space().points() {
            assert_eq!(a.apply_index(p.index()), a.apply(&p).unwrap().index());
        }
    }

    #[test]
    fn unit_rotations_for_one_mod_four() {
        let q = m(5);
        assert_eq!(unit_rotations(q).unwrap().len(), 4);
        assert_eq!(orthogonal_maps(q).unwrap().len(), 8);
    }
}
