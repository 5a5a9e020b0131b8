//! Exact arithmetic in the prime field F_q and in GF(q²) = F_q[i] for q ≡ 3 (mod 4).
//!
//! Residues are stored as `u32` below `2^20`, so every product fits in a `u64`
//! and is reduced immediately.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, ModClass, Result};
use crate::points::{PointSet, Space};

/// Largest supported modulus.
pub const MAX_MODULUS: u32 = 1 << 20;

/// An odd prime `q ≤ 2^20`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_MODULUS as u64 {
            return Err(Error::ModulusTooLarge(q));
        }
        if q < 3 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeModulus(q as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn residue_class(self) -> ModClass {
        if self.0 % 4 == 1 {
            ModClass::OneModFour
        } else {
            ModClass::ThreeModFour
        }
    }

    pub fn is_three_mod_four(self) -> bool {
        self.residue_class() == ModClass::ThreeModFour
    }

    /// Fails with a modulus-class error unless `q` is in the `required` class.
    pub fn require(self, required: ModClass) -> Result<()> {
        let found = self.residue_class();
        if found == required {
            Ok(())
        } else {
            Err(Error::ModulusClass {
                q: self.0,
                found,
                required,
            })
        }
    }

    /// The residue of `v` mod q.
    #[inline]
    pub fn element(self, v: u64) -> FieldElement {
        FieldElement {
            value: (v % self.0 as u64) as u32,
            modulus: self,
        }
    }

    /// The residue of a signed integer mod q.
    pub fn element_signed(self, v: i64) -> FieldElement {
        let q = self.0 as i64;
        self.element(v.rem_euclid(q) as u64)
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    /// All elements `0, 1, ..., q-1` in order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.0).map(move |v| FieldElement {
            value: v,
            modulus: self,
        })
    }

    /// `(q-1)/2`.
    pub fn half(self) -> u32 {
        (self.0 - 1) / 2
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A residue mod q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    modulus: PrimeModulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> FieldElement {
        let q = self.modulus.0 as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64 % q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            exp >>= 1;
        }
        self.modulus.element(acc)
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inverse(self) -> Option<FieldElement> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus.0 as u64 - 2))
        }
    }

    pub fn square(self) -> FieldElement {
        self * self
    }

    /// A square root, if one exists.
    ///
    /// For q ≡ 3 (mod 4) this is `a^((q+1)/4)`; otherwise Tonelli–Shanks.
    pub fn sqrt(self) -> Option<FieldElement> {
        if self.is_zero() {
            return Some(self);
        }
        if legendre_symbol(self) != 1 {
            return None;
        }
        let q = self.modulus.0 as u64;
        if q % 4 == 3 {
            return Some(self.pow((q + 1) / 4));
        }
        // Tonelli–Shanks: q - 1 = s·2^e with s odd.
        let mut s = q - 1;
        let mut e = 0u32;
        while s.is_multiple_of(2) {
            s /= 2;
            e += 1;
        }
        let non_residue = self
            .modulus
            .elements()
            .skip(2)
            .find(|z| legendre_symbol(*z) == -1)
            .expect("every odd prime field has a non-residue");
        let mut x = self.pow(s.div_ceil(2));
        let mut b = self.pow(s);
        let mut g = non_residue.pow(s);
        let mut r = e;
        loop {
            if b.value == 1 {
                return Some(x);
            }
            let mut m = 0;
            let mut t = b;
            while t.value != 1 {
                t = t * t;
                m += 1;
            }
            let gs = g.pow(1u64 << (r - m - 1));
            g = gs * gs;
            x = x * gs;
            b = b * g;
            r = m;
        }
    }

    fn check(self, other: FieldElement) {
        assert_eq!(
            self.modulus, other.modulus,
            "field elements over different moduli"
        );
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        self.modulus.element(self.value as u64 + rhs.value as u64)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        self.modulus
            .element(self.value as u64 + self.modulus.0 as u64 - rhs.value as u64)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        self.modulus.element(self.value as u64 * rhs.value as u64)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.modulus
            .element(self.modulus.0 as u64 - self.value as u64)
    }
}

/// Legendre symbol by Euler's criterion: 0 for zero, +1 for a nonzero square, -1 otherwise.
pub fn legendre_symbol(a: FieldElement) -> i8 {
    if a.is_zero() {
        return 0;
    }
    let q = a.modulus.0 as u64;
    match a.pow((q - 1) / 2).value as u64 {
        1 => 1,
        v if v == q - 1 => -1,
        v => unreachable!("Euler criterion produced {v} mod {q}"),
    }
}

/// The nonzero squares `{x² : 1 ≤ x ≤ (q-1)/2}` as a subset of F_q.
pub fn quadratic_residues(q: PrimeModulus) -> PointSet {
    let space = Space::line(q);
    let mut set = PointSet::empty(space);
    for x in 1..=q.half() {
        set.insert_index(q.element(x as u64).square().value() as usize);
    }
    set
}

/// Smallest `0 < k ≤ (q-1)/2` with `1 + k²` a non-residue.
///
/// Only asserted to exist for q ≡ 3 (mod 4). For q = 7 this returns 2: `1 + 1² = 2 = 3²` is a
/// residue mod 7, although the value 1 is sometimes quoted for that modulus.
pub fn find_k(q: PrimeModulus) -> Result<FieldElement> {
    q.require(ModClass::ThreeModFour)?;
    (1..=q.half() as u64)
        .map(|k| q.element(k))
        .find(|&k| legendre_symbol(q.one() + k.square()) == -1)
        .ok_or_else(|| Error::Precondition(format!("no admissible k exists for q = {q}")))
}

/// `{(1+k²)x² : (q+1)/2 ≤ x ≤ q-1}`, which is the full set of non-residues.
pub fn qnr_representation(q: PrimeModulus, k: FieldElement) -> Result<PointSet> {
    if k.modulus() != q {
        return Err(Error::ModulusMismatch(q.get(), k.modulus().get()));
    }
    let c = q.one() + k.square();
    if legendre_symbol(c) != -1 {
        return Err(Error::NotANonResidue(c.value()));
    }
    let mut set = PointSet::empty(Space::line(q));
    for x in (q.half() + 1)..q.get() {
        set.insert_index((c * q.element(x as u64).square()).value() as usize);
    }
    Ok(set)
}

/// An element `re + im·i` of GF(q²) = F_q[i], i² = -1, for q ≡ 3 (mod 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    re: FieldElement,
    im: FieldElement,
}

impl GaussianInt {
    pub fn new(re: FieldElement, im: FieldElement) -> Result<Self> {
        if re.modulus() != im.modulus() {
            return Err(Error::ModulusMismatch(
                re.modulus().get(),
                im.modulus().get(),
            ));
        }
        re.modulus().require(ModClass::ThreeModFour)?;
        Ok(GaussianInt { re, im })
    }

    pub fn from_parts(q: PrimeModulus, re: u64, im: u64) -> Result<Self> {
        Self::new(q.element(re), q.element(im))
    }

    pub fn one(q: PrimeModulus) -> Result<Self> {
        Self::from_parts(q, 1, 0)
    }

    pub fn i(q: PrimeModulus) -> Result<Self> {
        Self::from_parts(q, 0, 1)
    }

    pub fn re(self) -> FieldElement {
        self.re
    }

    pub fn im(self) -> FieldElement {
        self.im
    }

    pub fn modulus(self) -> PrimeModulus {
        self.re.modulus()
    }

    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(self) -> bool {
        self.re.value() == 1 && self.im.is_zero()
    }

    /// `re² + im²`, the field norm down to F_q.
    pub fn norm(self) -> FieldElement {
        self.re.square() + self.im.square()
    }

    pub fn pow(self, mut exp: u64) -> GaussianInt {
        let mut base = self;
        let mut acc = GaussianInt {
            re: self.modulus().one(),
            im: self.modulus().zero(),
        };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        let (a, b, c, d) = (self.re, self.im, rhs.re, rhs.im);
        GaussianInt {
            re: a * c - b * d,
            im: a * d + b * c,
        }
    }
}

/// `(a+bi)(c+di) = (ac-bd) + (ad+bc)i`.
pub fn gf2_mul(u: GaussianInt, v: GaussianInt) -> Result<GaussianInt> {
    if u.modulus() != v.modulus() {
        return Err(Error::ModulusMismatch(u.modulus().get(), v.modulus().get()));
    }
    Ok(u * v)
}

fn prime_factors(mut n: u64, out: &mut Vec<u64>) {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            if !out.contains(&p) {
                out.push(p);
            }
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 && !out.contains(&n) {
        out.push(n);
    }
}

/// Multiplicative order of a nonzero element of GF(q²); always divides `q² - 1`.
pub fn element_order(u: GaussianInt) -> Result<u64> {
    if u.is_zero() {
        return Err(Error::ZeroElement);
    }
    let q = u.modulus().get() as u64;
    let group_order = q * q - 1;
    let mut primes = Vec::new();
    prime_factors(q - 1, &mut primes);
    prime_factors(q + 1, &mut primes);
    let mut order = group_order;
    for p in primes {
        while order.is_multiple_of(p) && u.pow(order / p).is_one() {
            order /= p;
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: u64) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    fn values(set: &PointSet) -> Vec<u32> {
        set.iter().map(|p| p.coords()[0]).collect()
    }

    fn small_primes(limit: u64) -> Vec<u64> {
        (3..limit).filter(|&n| is_prime(n)).collect()
    }

    #[test]
    fn modulus_validation() {
        assert_eq!(PrimeModulus::new(2), Err(Error::NotPrime(2)));
        assert_eq!(PrimeModulus::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeModulus::new(1), Err(Error::NotPrime(1)));
        assert!(matches!(
            PrimeModulus::new((1 << 20) + 7),
            Err(Error::ModulusTooLarge(_))
        ));
        assert_eq!(m(7).residue_class(), ModClass::ThreeModFour);
        assert_eq!(m(13).residue_class(), ModClass::OneModFour);
    }

    #[test]
    fn legendre_examples() {
        let q = m(7);
        assert_eq!(legendre_symbol(q.element(1)), 1);
        assert_eq!(legendre_symbol(q.element(0)), 0);
        assert_eq!(legendre_symbol(q.element(5)), -1);
    }

    #[test]
    fn legendre_matches_brute_force_squares() {
        for q in small_primes(50) {
            let q = m(q);
            let squares: Vec<u32> = q.elements().map(|x| x.square().value()).collect();
            for a in q.elements().skip(1) {
                let expected = if squares.contains(&a.value()) { 1 } else { -1 };
                assert_eq!(legendre_symbol(a), expected, "a = {a}, q = {q}");
            }
        }
    }

    #[test]
    fn legendre_is_multiplicative() {
        for q in small_primes(50) {
            let q = m(q);
            for a in q.elements().skip(1) {
                for b in q.elements().skip(1) {
                    assert_eq!(
                        legendre_symbol(a * b),
                        legendre_symbol(a) * legendre_symbol(b)
                    );
                }
            }
        }
    }

    #[test]
    fn minus_one_is_non_residue_for_three_mod_four() {
        for q in small_primes(200) {
            let q = m(q);
            if q.is_three_mod_four() {
                assert_eq!(legendre_symbol(-q.one()), -1);
            } else {
                assert_eq!(legendre_symbol(-q.one()), 1);
            }
        }
    }

    #[test]
    fn quadratic_residue_examples() {
        assert_eq!(values(&quadratic_residues(m(7))), vec![1, 2, 4]);
        assert_eq!(values(&quadratic_residues(m(3))), vec![1]);
        assert_eq!(values(&quadratic_residues(m(11))), vec![1, 3, 4, 5, 9]);
    }

    #[test]
    fn find_k_examples() {
        assert_eq!(find_k(m(19)).unwrap().value(), 1);
        assert_eq!(find_k(m(23)).unwrap().value(), 2);
        assert_eq!(find_k(m(7)).unwrap().value(), 2);
        assert_eq!(find_k(m(3)).unwrap().value(), 1);
        assert!(matches!(find_k(m(13)), Err(Error::ModulusClass { .. })));
    }

    #[test]
    fn qnr_examples() {
        let q = m(3);
        assert_eq!(
            values(&qnr_representation(q, q.element(1)).unwrap()),
            vec![2]
        );
        let q = m(7);
        assert_eq!(
            values(&qnr_representation(q, q.element(2)).unwrap()),
            vec![3, 5, 6]
        );
        let q = m(11);
        assert_eq!(
            values(&qnr_representation(q, q.element(1)).unwrap()),
            vec![2, 6, 7, 8, 10]
        );
        // 1 + 1² = 2 is a residue mod 7.
        let q = m(7);
        assert_eq!(
            qnr_representation(q, q.element(1)),
            Err(Error::NotANonResidue(2))
        );
    }

    #[test]
    fn residues_and_non_residues_partition_the_field() {
        for q in small_primes(50) {
            let q = m(q);
            let qr = quadratic_residues(q);
            assert_eq!(qr.len(), q.half() as usize);
            if !q.is_three_mod_four() {
                continue;
            }
            let qnr = qnr_representation(q, find_k(q).unwrap()).unwrap();
            assert_eq!(qnr.len(), q.half() as usize);
            assert!(qr.intersection(&qnr).is_empty());
            assert!(!qr.contains_index(0) && !qnr.contains_index(0));
            assert_eq!(qr.len() + qnr.len() + 1, q.get() as usize);
        }
    }

    #[test]
    fn sqrt_roundtrip_both_classes() {
        for q in small_primes(120) {
            let q = m(q);
            for a in q.elements() {
                match a.sqrt() {
                    Some(r) => assert_eq!(r.square(), a),
                    None => assert_eq!(legendre_symbol(a), -1),
                }
            }
        }
    }

    #[test]
    fn field_inverse() {
        let q = m(101);
        for a in q.elements().skip(1) {
            assert_eq!(a * a.inverse().unwrap(), q.one());
        }
        assert_eq!(q.zero().inverse(), None);
    }

    #[test]
    fn gf2_mul_examples() {
        let q = m(7);
        let c = GaussianInt::from_parts(q, 3, 4).unwrap();
        assert_eq!(gf2_mul(GaussianInt::one(q).unwrap(), c).unwrap(), c);
        let q3 = m(3);
        let i = GaussianInt::i(q3).unwrap();
        assert_eq!(
            gf2_mul(i, i).unwrap(),
            GaussianInt::from_parts(q3, 2, 0).unwrap()
        );
        let u = GaussianInt::from_parts(q, 2, 3).unwrap();
        let v = GaussianInt::from_parts(q, 1, 1).unwrap();
        assert_eq!(
            gf2_mul(u, v).unwrap(),
            GaussianInt::from_parts(q, 6, 5).unwrap()
        );
        assert!(matches!(
            gf2_mul(u, GaussianInt::one(m(11)).unwrap()),
            Err(Error::ModulusMismatch(7, 11))
        ));
        assert!(GaussianInt::one(m(5)).is_err());
    }

    fn brute_order(u: GaussianInt) -> u64 {
        let mut acc = u;
        let mut n = 1;
        while !acc.is_one() {
            acc = acc * u;
            n += 1;
        }
        n
    }

    #[test]
    fn element_order_examples() {
        let q = m(3);
        assert_eq!(element_order(GaussianInt::one(q).unwrap()).unwrap(), 1);
        assert_eq!(element_order(GaussianInt::i(q).unwrap()).unwrap(), 4);
        assert_eq!(
            element_order(GaussianInt::from_parts(q, 0, 0).unwrap()),
            Err(Error::ZeroElement)
        );
        let q = m(7);
        let generator = q
            .elements()
            .flat_map(|a| q.elements().map(move |b| (a, b)))
            .map(|(a, b)| GaussianInt::new(a, b).unwrap())
            .find(|u| !u.is_zero() && brute_order(*u) == 48)
            .unwrap();
        assert_eq!(element_order(generator).unwrap(), 48);
    }

    #[test]
    fn element_order_matches_brute_force() {
        for q in [3u64, 7, 11] {
            let q = m(q);
            for a in q.elements() {
                for b in q.elements() {
                    let u = GaussianInt::new(a, b).unwrap();
                    if u.is_zero() {
                        continue;
                    }
                    let order = element_order(u).unwrap();
                    assert_eq!(order, brute_order(u));
                    let n = q.get() as u64;
                    assert_eq!((n * n - 1) % order, 0);
                }
            }
        }
    }

    #[test]
    fn gaussian_multiplication_is_commutative_and_associative() {
        let q = m(7);
        let all: Vec<GaussianInt> = q
            .elements()
            .flat_map(|a| q.elements().map(move |b| GaussianInt::new(a, b).unwrap()))
            .collect();
        for &u in &all {
            for &v in &all {
                assert_eq!(u * v, v * u);
            }
        }
        for &u in all.iter().step_by(5) {
            for &v in all.iter().step_by(3) {
                for &w in all.iter().step_by(7) {
                    assert_eq!((u * v) * w, u * (v * w));
                }
            }
        }
    }

    #[test]
    fn find_k_exists_below_bound() {
        for q in small_primes(10_007) {
            let q = m(q);
            if q.is_three_mod_four() {
                let k = find_k(q).unwrap();
                assert!(k.value() >= 1 && k.value() <= q.half());
                assert_eq!(legendre_symbol(q.one() + k.square()), -1);
            }
        }
    }
}
