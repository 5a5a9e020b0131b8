//! Vectors of F_q^d and membership-bitset subsets.
//!
//! Every point has a canonical linear index `Σ coords[i]·q^(d-1-i)`. Index order is
//! lexicographic order, so iterating a [`PointSet`] yields its points sorted.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use bitvec::vec::BitVec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

/// Largest supported number of grid points `q^d`.
pub const MAX_GRID: usize = 1 << 24;

/// The ambient space F_q^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    modulus: PrimeModulus,
    dim: usize,
    size: usize,
}

impl Space {
    pub fn new(modulus: PrimeModulus, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        let q = modulus.get() as usize;
        let mut size = 1usize;
        for _ in 0..dim {
            size = size
                .checked_mul(q)
                .filter(|s| *s <= MAX_GRID)
                .ok_or(Error::GridTooLarge {
                    q: modulus.get(),
                    d: dim,
                })?;
        }
        Ok(Space { modulus, dim, size })
    }

    /// F_q itself.
    pub fn line(modulus: PrimeModulus) -> Self {
        Space {
            modulus,
            dim: 1,
            size: modulus.get() as usize,
        }
    }

    /// F_q².
    pub fn plane(modulus: PrimeModulus) -> Result<Self> {
        Space::new(modulus, 2)
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.modulus.get()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `q^d`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn origin(&self) -> Point {
        Point {
            modulus: self.modulus,
            coords: vec![0; self.dim],
        }
    }

    pub fn point(&self, index: usize) -> Point {
        debug_assert!(index < self.size);
        let q = self.q() as usize;
        let mut coords = vec![0u32; self.dim];
        let mut rest = index;
        for c in coords.iter_mut().rev() {
            *c = (rest % q) as u32;
            rest /= q;
        }
        Point {
            modulus: self.modulus,
            coords,
        }
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(move |i| self.point(i))
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.modulus == self.modulus && p.coords.len() == self.dim
    }

    pub(crate) fn check(&self, p: &Point) -> Result<()> {
        if p.modulus != self.modulus {
            return Err(Error::ModulusMismatch(self.q(), p.modulus.get()));
        }
        if p.coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.coords.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &Space) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.q(), other.q()));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

/// A vector of F_q^d.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    modulus: PrimeModulus,
    coords: Vec<u32>,
}

impl Point {
    /// Builds a point, reducing every coordinate mod q.
    pub fn new(modulus: PrimeModulus, coords: &[u64]) -> Point {
        let q = modulus.get() as u64;
        Point {
            modulus,
            coords: coords.iter().map(|&c| (c % q) as u32).collect(),
        }
    }

    /// Builds a point, rejecting coordinates outside `[0, q)`.
    pub fn checked(modulus: PrimeModulus, coords: &[u64]) -> Result<Point> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(&value) = coords.iter().find(|&&c| c >= modulus.get() as u64) {
            return Err(Error::CoordinateOutOfRange {
                value,
                q: modulus.get(),
            });
        }
        Ok(Point::new(modulus, coords))
    }

    pub fn from_elements(elements: &[FieldElement]) -> Result<Point> {
        let modulus = elements
            .first()
            .ok_or(Error::InvalidDimension(0))?
            .modulus();
        if let Some(bad) = elements.iter().find(|e| e.modulus() != modulus) {
            return Err(Error::ModulusMismatch(modulus.get(), bad.modulus().get()));
        }
        Ok(Point {
            modulus,
            coords: elements.iter().map(|e| e.value()).collect(),
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> FieldElement {
        self.modulus.element(self.coords[i] as u64)
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Canonical mixed-radix index.
    pub fn index(&self) -> usize {
        let q = self.modulus.get() as usize;
        self.coords.iter().fold(0, |acc, &c| acc * q + c as usize)
    }

    fn check(&self, other: &Point) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `m·ξ mod q`.
    pub fn dot(&self, other: &Point) -> Result<FieldElement> {
        self.check(other)?;
        let q = self.modulus.get() as u64;
        let s = self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % q);
        Ok(self.modulus.element(s))
    }

    pub fn checked_add(&self, other: &Point) -> Result<Point> {
        self.check(other)?;
        let q = self.modulus.get();
        Ok(Point {
            modulus: self.modulus,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| (a + b) % q)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Point) -> Result<Point> {
        self.checked_add(&-other)
    }

    /// Scalar multiple `c·p`.
    pub fn scale(&self, c: FieldElement) -> Point {
        assert_eq!(c.modulus(), self.modulus);
        let q = self.modulus.get() as u64;
        Point {
            modulus: self.modulus,
            coords: self
                .coords
                .iter()
                .map(|&a| (a as u64 * c.value() as u64 % q) as u32)
                .collect(),
        }
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Point) -> Point {
        assert_eq!(self.modulus, other.modulus);
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Point {
            modulus: self.modulus,
            coords,
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        self.checked_add(rhs).expect("incompatible points")
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        self.checked_sub(rhs).expect("incompatible points")
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        let q = self.modulus.get();
        Point {
            modulus: self.modulus,
            coords: self.coords.iter().map(|&a| (q - a) % q).collect(),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// A subset of F_q^d, stored as a bitset over canonical indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    space: Space,
    bits: BitVec,
    len: usize,
}

impl PointSet {
    pub fn empty(space: Space) -> Self {
        PointSet {
            space,
            bits: BitVec::repeat(false, space.size()),
            len: 0,
        }
    }

    pub fn full(space: Space) -> Self {
        PointSet {
            space,
            bits: BitVec::repeat(true, space.size()),
            len: space.size(),
        }
    }

    /// `F_q^d \ {0}`.
    pub fn nonzero(space: Space) -> Self {
        Self::full(space).star()
    }

    pub fn from_points<'a, I>(space: Space, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Point>,
    {
        let mut set = Self::empty(space);
        for p in points {
            set.insert(p)?;
        }
        Ok(set)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(space: Space, indices: I) -> Self {
        let mut set = Self::empty(space);
        for i in indices {
            set.insert_index(i);
        }
        set
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.space.modulus()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts a point; returns whether it was new.
    pub fn insert(&mut self, p: &Point) -> Result<bool> {
        self.space.check(p)?;
        Ok(self.insert_index(p.index()))
    }

    pub fn insert_index(&mut self, index: usize) -> bool {
        let was = self.bits[index];
        if !was {
            self.bits.set(index, true);
            self.len += 1;
        }
        !was
    }

    pub fn remove_index(&mut self, index: usize) -> bool {
        let was = self.bits[index];
        if was {
            self.bits.set(index, false);
            self.len -= 1;
        }
        was
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.space.contains(p) && self.bits[p.index()]
    }

    #[inline]
    pub fn contains_index(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn contains_origin(&self) -> bool {
        self.bits[0]
    }

    /// Member indices in ascending (lexicographic) order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.indices().map(move |i| self.space.point(i))
    }

    pub fn points(&self) -> Vec<Point> {
        self.iter().collect()
    }

    /// The set with the origin removed.
    pub fn star(&self) -> PointSet {
        let mut s = self.clone();
        s.remove_index(0);
        s
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        assert_eq!(self.space, other.space);
        let bits = self.bits.clone() | other.bits.clone();
        let len = bits.count_ones();
        PointSet {
            space: self.space,
            bits,
            len,
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        assert_eq!(self.space, other.space);
        let bits = self.bits.clone() & other.bits.clone();
        let len = bits.count_ones();
        PointSet {
            space: self.space,
            bits,
            len,
        }
    }

    pub fn complement(&self) -> PointSet {
        let bits = !self.bits.clone();
        PointSet {
            space: self.space,
            len: self.space.size() - self.len,
            bits,
        }
    }

    /// Cartesian product `self × other` in F_q^(d1+d2).
    pub fn product(&self, other: &PointSet) -> Result<PointSet> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(
                self.modulus().get(),
                other.modulus().get(),
            ));
        }
        let space = Space::new(self.modulus(), self.dim() + other.dim())?;
        let mut set = PointSet::empty(space);
        let inner = other.space.size();
        for i in self.indices() {
            for j in other.indices() {
                set.insert_index(i * inner + j);
            }
        }
        Ok(set)
    }

    pub fn to_file(&self) -> PointSetFile {
        PointSetFile {
            q: self.space.q() as u64,
            d: self.space.dim(),
            points: self
                .iter()
                .map(|p| p.coords().iter().map(|&c| c as u64).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("point sets always serialize")
    }

    pub fn from_file(file: &PointSetFile) -> Result<PointSet> {
        let modulus = PrimeModulus::new(file.q)?;
        let space = Space::new(modulus, file.d)?;
        let mut set = PointSet::empty(space);
        for coords in &file.points {
            if coords.len() != file.d {
                return Err(Error::DimensionMismatch {
                    expected: file.d,
                    found: coords.len(),
                });
            }
            set.insert(&Point::checked(modulus, coords)?)?;
        }
        Ok(set)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet(q={}, d={}) ", self.space.q(), self.space.dim())?;
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Wire form: `{"q":7,"d":2,"points":[[0,0],[1,0],...]}`, points sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub q: u64,
    pub d: usize,
    pub points: Vec<Vec<u64>>,
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = PointSetFile::deserialize(d)?;
        PointSet::from_file(&file).map_err(serde::de::Error::custom)
    }
}
