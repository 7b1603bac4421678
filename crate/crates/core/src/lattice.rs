//! Exact lattice primitives: primitive rays, integer and rational points,
//! unimodular maps, and Stern–Brocot depth.
//!
//! Everything here is arbitrary precision. Ray coordinates grow quickly under
//! iterated blow-ups, so no fixed-width integer is used on any public path.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("ZeroVector: the zero vector has no primitive direction")]
    ZeroVector,
    #[error("NonPrimitiveRay: ({0}, {1}) is not primitive")]
    NonPrimitive(BigInt, BigInt),
    #[error("NotUnimodular: matrix determinant is {0}, expected +1 or -1")]
    NotUnimodular(BigInt),
}

impl LatticeError {
    pub fn name(&self) -> &'static str {
        match self {
            LatticeError::ZeroVector => "ZeroVector",
            LatticeError::NonPrimitive(..) => "NonPrimitiveRay",
            LatticeError::NotUnimodular(_) => "NotUnimodular",
        }
    }
}

/// An integer point of the plane, not necessarily primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec2 {
    pub x: BigInt,
    pub y: BigInt,
}

impl IntVec2 {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        IntVec2 {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, other: &IntVec2) -> IntVec2 {
        IntVec2 {
            x: &self.x + &other.x,
            y: &self.y + &other.y,
        }
    }

    pub fn sub(&self, other: &IntVec2) -> IntVec2 {
        IntVec2 {
            x: &self.x - &other.x,
            y: &self.y - &other.y,
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntVec2 {
        IntVec2 {
            x: &self.x * k,
            y: &self.y * k,
        }
    }

    pub fn det(&self, other: &IntVec2) -> BigInt {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &IntVec2) -> BigInt {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn to_rational(&self) -> Rational2 {
        Rational2::new(
            BigRational::from_integer(self.x.clone()),
            BigRational::from_integer(self.y.clone()),
        )
    }
}

impl fmt::Display for IntVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A primitive integer vector: the generator of a one-dimensional cone.
///
/// Ordering is lexicographic on `(x, y)`, which is the order used to pick the
/// canonical starting ray of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RayVec {
    x: BigInt,
    y: BigInt,
}

impl RayVec {
    /// Builds a ray from coordinates that must already be primitive.
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Self, LatticeError> {
        let (x, y) = (x.into(), y.into());
        if x.is_zero() && y.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        if !x.gcd(&y).is_one() {
            return Err(LatticeError::NonPrimitive(x, y));
        }
        Ok(RayVec { x, y })
    }

    /// Caller guarantees primitivity (e.g. image under a unimodular map, or a
    /// sum of two generators of a smooth cone).
    pub(crate) fn new_unchecked(x: BigInt, y: BigInt) -> Self {
        debug_assert!(x.gcd(&y).is_one(), "({x}, {y}) is not primitive");
        RayVec { x, y }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn e1() -> Self {
        RayVec::new_unchecked(BigInt::one(), BigInt::zero())
    }

    pub fn e2() -> Self {
        RayVec::new_unchecked(BigInt::zero(), BigInt::one())
    }

    pub fn det(&self, other: &RayVec) -> BigInt {
        det2(self, other)
    }

    pub fn neg(&self) -> RayVec {
        RayVec::new_unchecked(-&self.x, -&self.y)
    }

    pub fn to_vec(&self) -> IntVec2 {
        IntVec2 {
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }

    /// `self + other`, as a plain integer vector.
    pub fn sum(&self, other: &RayVec) -> IntVec2 {
        IntVec2 {
            x: &self.x + &other.x,
            y: &self.y + &other.y,
        }
    }

    /// `self + other` for an adjacent pair of a smooth fan, where the sum is
    /// known to be primitive.
    pub(crate) fn unimodular_sum(&self, other: &RayVec) -> RayVec {
        RayVec::new_unchecked(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn is_axis(&self) -> bool {
        self.x.is_zero() || self.y.is_zero()
    }

    /// True when `v` equals this ray.
    pub fn equals_vec(&self, v: &IntVec2) -> bool {
        self.x == v.x && self.y == v.y
    }
}

impl fmt::Display for RayVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl TryFrom<IntVec2> for RayVec {
    type Error = LatticeError;

    fn try_from(v: IntVec2) -> Result<Self, Self::Error> {
        RayVec::new(v.x, v.y)
    }
}

/// Divides `(x, y)` by the gcd of its coordinates.
pub fn primitive(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<RayVec, LatticeError> {
    let (x, y) = (x.into(), y.into());
    if x.is_zero() && y.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let g = x.gcd(&y);
    Ok(RayVec::new_unchecked(&x / &g, &y / &g))
}

pub fn det2(a: &RayVec, b: &RayVec) -> BigInt {
    &a.x * &b.y - &a.y * &b.x
}

/// Stern–Brocot depth of a primitive vector.
///
/// Axis vectors have depth 0. Inside a quadrant the depth is the number of
/// subtractive Euclid steps taking `(|x|, |y|)` to an axis vector, i.e. the sum
/// of the Euclidean partial quotients. The division form gives the same count
/// as repeated subtraction without walking every step.
pub fn sb_depth(v: &RayVec) -> BigUint {
    let mut a = v.x.abs();
    let mut b = v.y.abs();
    let mut depth = BigInt::zero();
    while !a.is_zero() && !b.is_zero() {
        if a >= b {
            let (q, r) = a.div_rem(&b);
            depth += q;
            a = r;
        } else {
            let (q, r) = b.div_rem(&a);
            depth += q;
            b = r;
        }
    }
    depth.to_biguint().expect("sum of quotients is nonnegative")
}

/// The two Stern–Brocot parents of a non-axis primitive vector, returned as a
/// counterclockwise pair `(right, left)` with `right + left = v` and
/// `det(right, left) = 1`. Axis vectors have no parents.
pub fn sb_parents(v: &RayVec) -> Option<(RayVec, RayVec)> {
    if v.is_axis() {
        return None;
    }
    let sx = v.x.signum();
    let sy = v.y.signum();
    let p = v.x.abs();
    let q = v.y.abs();
    // In the first quadrant, the counterclockwise parent is b = (r, s) with
    // p*s - q*r = 1, 1 <= s <= q.
    let s = if q.is_one() {
        BigInt::one()
    } else {
        let inv = p.extended_gcd(&q).x.mod_floor(&q);
        if inv.is_zero() {
            q.clone()
        } else {
            inv
        }
    };
    let r = (&p * &s - BigInt::one()) / &q;
    let left_q = IntVec2 { x: r, y: s };
    let right_q = IntVec2 {
        x: &p - &left_q.x,
        y: &q - &left_q.y,
    };
    let to_quadrant = |w: IntVec2| RayVec::new_unchecked(w.x * &sx, w.y * &sy);
    let a = to_quadrant(right_q);
    let b = to_quadrant(left_q);
    // Reflections reverse orientation.
    if (&sx * &sy).is_positive() {
        Some((a, b))
    } else {
        Some((b, a))
    }
}

/// A pair of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational2 {
    pub x: BigRational,
    pub y: BigRational,
}

impl Rational2 {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Rational2 { x, y }
    }

    pub fn zero() -> Self {
        Rational2 {
            x: BigRational::zero(),
            y: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, other: &Rational2) -> Rational2 {
        Rational2::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Rational2) -> Rational2 {
        Rational2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn scale(&self, c: &BigRational) -> Rational2 {
        Rational2::new(&self.x * c, &self.y * c)
    }
}

impl fmt::Display for Rational2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A lattice automorphism, acting on column vectors:
/// `(x, y) -> (a x + b y, c x + d y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl UnimodularMap {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, LatticeError> {
        let m = UnimodularMap {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        let det = m.det();
        if det.abs().is_one() {
            Ok(m)
        } else {
            Err(LatticeError::NotUnimodular(det))
        }
    }

    pub fn identity() -> Self {
        UnimodularMap {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// The map sending `e1 -> first`, `e2 -> second`. Fails unless
    /// `det(first, second) = ±1`.
    pub fn from_columns(first: &RayVec, second: &RayVec) -> Result<Self, LatticeError> {
        UnimodularMap::new(
            first.x.clone(),
            second.x.clone(),
            first.y.clone(),
            second.y.clone(),
        )
    }

    /// The unique map sending `(src0, src1) -> (dst0, dst1)`, when both pairs
    /// are lattice bases.
    pub fn from_basis_pair(
        src: (&RayVec, &RayVec),
        dst: (&RayVec, &RayVec),
    ) -> Result<Self, LatticeError> {
        let s = UnimodularMap::from_columns(src.0, src.1)?;
        let t = UnimodularMap::from_columns(dst.0, dst.1)?;
        Ok(t.compose(&s.inverse()))
    }

    /// Row-major entries `[a, b, c, d]`.
    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.det().is_positive()
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        // det is ±1, so the inverse is the adjugate times det.
        UnimodularMap {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &UnimodularMap) -> Self {
        UnimodularMap {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn apply_ray(&self, v: &RayVec) -> RayVec {
        RayVec::new_unchecked(
            &self.a * &v.x + &self.b * &v.y,
            &self.c * &v.x + &self.d * &v.y,
        )
    }

    pub fn apply_vec(&self, v: &IntVec2) -> IntVec2 {
        IntVec2 {
            x: &self.a * &v.x + &self.b * &v.y,
            y: &self.c * &v.x + &self.d * &v.y,
        }
    }

    pub fn apply_rational(&self, v: &Rational2) -> Rational2 {
        let a = BigRational::from_integer(self.a.clone());
        let b = BigRational::from_integer(self.b.clone());
        let c = BigRational::from_integer(self.c.clone());
        let d = BigRational::from_integer(self.d.clone());
        Rational2::new(&a * &v.x + &b * &v.y, &c * &v.x + &d * &v.y)
    }

    /// The eight symmetries of the square: `(x,y) -> (±x,±y), (±y,±x)`.
    pub fn square_symmetries() -> Vec<UnimodularMap> {
        let mut out = Vec::with_capacity(8);
        for (sx, sy) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
            out.push(UnimodularMap::new(sx, 0, 0, sy).expect("diagonal sign matrix"));
            out.push(UnimodularMap::new(0, sx, sy, 0).expect("antidiagonal sign matrix"));
        }
        out
    }
}

impl fmt::Display for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ray(x: i64, y: i64) -> RayVec {
        RayVec::new(x, y).unwrap()
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(2, 4).unwrap(), ray(1, 2));
        assert_eq!(primitive(0, -3).unwrap(), ray(0, -1));
        assert_eq!(primitive(-1, -2).unwrap(), ray(-1, -2));
        assert_eq!(primitive(0, 0), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn new_rejects_non_primitive() {
        assert!(matches!(RayVec::new(2, 4), Err(LatticeError::NonPrimitive(..))));
        assert!(matches!(RayVec::new(0, 0), Err(LatticeError::ZeroVector)));
    }

    #[test]
    fn det2_examples() {
        assert_eq!(det2(&ray(1, 0), &ray(0, 1)), BigInt::from(1));
        assert_eq!(det2(&ray(0, 1), &ray(-1, -2)), BigInt::from(1));
        assert_eq!(det2(&ray(1, 1), &ray(1, 1)), BigInt::from(0));
    }

    #[test]
    fn sb_depth_examples() {
        let d = |x, y| sb_depth(&ray(x, y)).to_u64().unwrap();
        assert_eq!(d(0, 1), 0);
        assert_eq!(d(-1, 0), 0);
        assert_eq!(d(1, 1), 1);
        assert_eq!(d(1, 2), 2);
        assert_eq!(d(-2, 1), 2);
        assert_eq!(d(2, 3), 3);
        assert_eq!(d(1, 7), 7);
    }

    #[test]
    fn sb_parents_examples() {
        assert_eq!(sb_parents(&ray(1, 1)), Some((ray(1, 0), ray(0, 1))));
        assert_eq!(sb_parents(&ray(1, 2)), Some((ray(1, 1), ray(0, 1))));
        assert_eq!(sb_parents(&ray(2, 1)), Some((ray(1, 0), ray(1, 1))));
        assert_eq!(sb_parents(&ray(-1, -2)), Some((ray(-1, -1), ray(0, -1))));
        assert_eq!(sb_parents(&ray(1, -2)), Some((ray(0, -1), ray(1, -1))));
        assert_eq!(sb_parents(&ray(0, 1)), None);
    }

    #[test]
    fn unimodular_map_basics() {
        assert!(UnimodularMap::new(2, 0, 0, 1).is_err());
        let m = UnimodularMap::new(1, 1, 0, 1).unwrap();
        assert_eq!(m.compose(&m.inverse()), UnimodularMap::identity());
        assert_eq!(m.apply_ray(&ray(0, 1)), ray(1, 1));
        let sw = UnimodularMap::new(0, 1, 1, 0).unwrap();
        assert!(!sw.is_orientation_preserving());
        assert_eq!(sw.inverse(), sw);
        let basis = UnimodularMap::from_basis_pair((&ray(1, 0), &ray(0, 1)), (&ray(1, 0), &ray(1, 1)))
            .unwrap();
        assert_eq!(basis, m);
        assert_eq!(UnimodularMap::square_symmetries().len(), 8);
    }
}
