//! Exact homogeneous coordinates in the rational projective plane.
//!
//! Points and lines are stored as primitive integer triples whose first
//! nonzero entry is positive. With that normal form, equality of canonical
//! triples is projective equality and the types can be hashed directly.

use std::fmt;

use malachite_base::num::arithmetic::traits::Gcd;
use malachite_nz::natural::Natural;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

pub(crate) type Vec3 = [BigInt; 3];

pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub(crate) fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> BigInt {
    dot(a, &cross(b, c))
}

/// Primitive integer vector with positive leading entry; `None` for zero.
pub(crate) fn canonical3(v: Vec3) -> Option<Vec3> {
    canonicalize(v)
}

/// Operands above this size go through malachite's subquadratic gcd; the
/// binary gcd of num-bigint is quadratic and dominates long runs.
const FAST_GCD_BITS: u64 = 2048;

fn to_natural(x: &BigInt) -> Natural {
    Natural::from_limbs_asc(&x.magnitude().to_u64_digits())
}

fn from_natural(x: &Natural) -> BigInt {
    let digits: Vec<u32> = x
        .to_limbs_asc()
        .into_iter()
        .flat_map(|limb| [limb as u32, (limb >> 32) as u32])
        .collect();
    BigInt::from_biguint(Sign::Plus, BigUint::new(digits))
}

/// Non-negative gcd.
pub(crate) fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (small, large) = if a.bits() <= b.bits() { (a, b) } else { (b, a) };
    if small.bits() < FAST_GCD_BITS {
        if small.is_zero() || large.bits() < FAST_GCD_BITS {
            return small.gcd(large);
        }
        return small.gcd(&(large % small));
    }
    from_natural(&(&to_natural(a)).gcd(&to_natural(b)))
}

pub(crate) fn canonicalize<const N: usize>(mut v: [BigInt; N]) -> Option<[BigInt; N]> {
    let mut g = BigInt::zero();
    for c in &v {
        if g.is_one() {
            break;
        }
        g = if g.is_zero() { c.abs() } else { gcd(&g, c) };
    }
    if g.is_zero() {
        return None;
    }
    let lead_negative = v.iter().find(|c| !c.is_zero()).map_or(false, |c| c.is_negative());
    if lead_negative {
        g = -g;
    }
    if !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    Some(v)
}

/// Clears denominators of a rational vector (the result is not reduced).
pub(crate) fn clear_denominators<const N: usize>(v: &[Rat; N]) -> [BigInt; N] {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    std::array::from_fn(|i| v[i].numer() * (&lcm / v[i].denom()))
}

macro_rules! homogeneous_triple {
    ($name:ident, $what:literal) => {
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Vec3);

        impl $name {
            pub fn new(x: BigInt, y: BigInt, z: BigInt) -> Result<Self> {
                canonical3([x, y, z]).map(Self).ok_or(Error::ZeroVector)
            }

            pub fn from_ints(x: i64, y: i64, z: i64) -> Result<Self> {
                Self::new(x.into(), y.into(), z.into())
            }

            pub fn from_rats(x: &Rat, y: &Rat, z: &Rat) -> Result<Self> {
                let [a, b, c] = clear_denominators(&[x.clone(), y.clone(), z.clone()]);
                Self::new(a, b, c)
            }

            pub(crate) fn from_vec(v: Vec3) -> Result<Self> {
                canonical3(v).map(Self).ok_or(Error::ZeroVector)
            }

            #[doc = concat!("Canonical integer ", $what, ".")]
            pub fn coords(&self) -> &[BigInt; 3] {
                &self.0
            }

            pub fn to_rats(&self) -> [Rat; 3] {
                std::array::from_fn(|i| Rat::from_integer(self.0[i].clone()))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "({}:{}:{})", self.0[0], self.0[1], self.0[2])
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{}", stringify!($name), self)
            }
        }
    };
}

homogeneous_triple!(ProjPoint, "coordinates (x, y, z)");
homogeneous_triple!(ProjLine, "coefficients (u, v, w) of ux + vy + wz = 0");

impl ProjPoint {
    pub fn affine(x: &Rat, y: &Rat) -> Self {
        Self::from_rats(x, y, &Rat::one()).expect("z = 1 is never the zero vector")
    }

    pub fn affine_ints(x: i64, y: i64) -> Self {
        Self::from_ints(x, y, 1).expect("z = 1 is never the zero vector")
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0[2].is_zero()
    }

    /// Affine coordinates `(x/z, y/z)`, or `None` on the line at infinity.
    pub fn to_affine(&self) -> Option<(Rat, Rat)> {
        if self.is_at_infinity() {
            return None;
        }
        let z = &self.0[2];
        Some((
            Rat::new(self.0[0].clone(), z.clone()),
            Rat::new(self.0[1].clone(), z.clone()),
        ))
    }

    pub fn lies_on(&self, line: &ProjLine) -> bool {
        dot(&self.0, &line.0).is_zero()
    }
}

impl ProjLine {
    pub fn passes_through(&self, p: &ProjPoint) -> bool {
        p.lies_on(self)
    }
}

/// The line through two distinct points.
pub fn join(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::IdenticalPoints);
    }
    ProjLine::from_vec(cross(&p.0, &q.0))
}

/// The intersection of two distinct lines; parallel lines meet at infinity.
pub fn meet(l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    if l == m {
        return Err(Error::IdenticalLines);
    }
    ProjPoint::from_vec(cross(&l.0, &m.0))
}

pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> bool {
    det3(&p.0, &q.0, &r.0).is_zero()
}

pub fn concurrent(l: &ProjLine, m: &ProjLine, n: &ProjLine) -> bool {
    det3(&l.0, &m.0, &n.0).is_zero()
}

/// A cross-ratio value: a rational number or the projective point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CrossRatio {
    Finite(Rat),
    Infinite,
}

impl fmt::Display for CrossRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossRatio::Finite(r) => write!(f, "{r}"),
            CrossRatio::Infinite => f.write_str("inf"),
        }
    }
}

/// Homogeneous parameter `(lambda : mu)` of `p = lambda*u + mu*v` on the line
/// spanned by `u` and `v`. Exact: both components carry the same positive
/// factor `|u x v|^2`, which cancels in every bracket ratio.
fn span_params(u: &Vec3, v: &Vec3, p: &Vec3) -> (BigInt, BigInt) {
    let n = cross(u, v);
    (dot(&cross(p, v), &n), dot(&cross(u, p), &n))
}

/// Cross-ratio of four vectors known to lie in a common 2-dimensional span,
/// with the convention (p1-p3)(p2-p4) / ((p1-p4)(p2-p3)).
fn cross_ratio_of_span(vs: [&Vec3; 4]) -> Result<CrossRatio> {
    let u = vs[0];
    let Some(v) = vs[1..].iter().copied().find(|w| !cross(u, w).iter().all(Zero::is_zero)) else {
        return Err(Error::TooDegenerate);
    };
    let params: Vec<(BigInt, BigInt)> = vs.iter().map(|p| span_params(u, v, p)).collect();
    // at least three projectively distinct parameters
    let distinct = {
        let mut reps: Vec<&(BigInt, BigInt)> = Vec::new();
        for p in &params {
            if !reps.iter().any(|q| (&p.0 * &q.1 - &p.1 * &q.0).is_zero()) {
                reps.push(p);
            }
        }
        reps.len()
    };
    if distinct < 3 {
        return Err(Error::TooDegenerate);
    }
    let bracket = |i: usize, j: usize| &params[i].0 * &params[j].1 - &params[j].0 * &params[i].1;
    let num = bracket(0, 2) * bracket(1, 3);
    let den = bracket(0, 3) * bracket(1, 2);
    if den.is_zero() {
        Ok(CrossRatio::Infinite)
    } else {
        Ok(CrossRatio::Finite(Rat::new(num, den)))
    }
}

/// Cross-ratio of four collinear points.
pub fn cross_ratio_points(
    p1: &ProjPoint,
    p2: &ProjPoint,
    p3: &ProjPoint,
    p4: &ProjPoint,
) -> Result<CrossRatio> {
    let pts = [p1, p2, p3, p4];
    let Some(other) = pts[1..].iter().find(|p| **p != p1) else {
        return Err(Error::TooDegenerate);
    };
    let carrier = join(p1, other)?;
    if !pts.iter().all(|p| p.lies_on(&carrier)) {
        return Err(Error::NotCollinear);
    }
    cross_ratio_of_span([&p1.0, &p2.0, &p3.0, &p4.0])
}

/// Cross-ratio of four concurrent lines, computed on the dual line of the
/// pencil. This agrees with the cross-ratio of the four intersections with
/// any transversal missing the carrier.
pub fn cross_ratio_lines(
    a: &ProjLine,
    b: &ProjLine,
    c: &ProjLine,
    d: &ProjLine,
) -> Result<CrossRatio> {
    let lines = [a, b, c, d];
    let Some(other) = lines[1..].iter().find(|l| **l != a) else {
        return Err(Error::TooDegenerate);
    };
    let carrier = meet(a, other)?;
    if !lines.iter().all(|l| carrier.lies_on(l)) {
        return Err(Error::NotConcurrent);
    }
    cross_ratio_of_span([&a.0, &b.0, &c.0, &d.0])
}

/// A 3x3 rational matrix acting on homogeneous coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat3(pub [[Rat; 3]; 3]);

impl Mat3 {
    pub fn identity() -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { Rat::one() } else { Rat::zero() })
        }))
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| Rat::from_integer(m[i][j].into()))
        }))
    }

    pub fn det(&self) -> Rat {
        let m = &self.0;
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    pub fn transpose(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone())))
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
        };
        // adjugate = transpose of the cofactor matrix
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Ok(Self(adj.map(|row| row.map(|c| c / &det))))
    }

    pub fn mul(&self, other: &Mat3) -> Mat3 {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(Rat::zero(), |acc, k| acc + &self.0[i][k] * &other.0[k][j])
            })
        }))
    }

    fn apply_vec(&self, v: &Vec3) -> [Rat; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(Rat::zero(), |acc, k| acc + &self.0[i][k] * &v[k])
        })
    }
}

/// Image of a point under a nonsingular homography.
pub fn apply_homography(m: &Mat3, p: &ProjPoint) -> Result<ProjPoint> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let [x, y, z] = m.apply_vec(&p.0);
    ProjPoint::from_rats(&x, &y, &z)
}

/// Image of a line: lines transform by the inverse transpose.
pub fn apply_homography_line(m: &Mat3, l: &ProjLine) -> Result<ProjLine> {
    let [u, v, w] = m.inverse()?.transpose().apply_vec(&l.0);
    ProjLine::from_rats(&u, &v, &w)
}

/// The homography sending `p1, p2, p3, p4` to `(0,0,1), (0,1,0), (1,0,0), (1,1,1)`.
pub fn frame_map(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint, p4: &ProjPoint) -> Result<Mat3> {
    let pts = [p1, p2, p3, p4];
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        if collinear(pts[i], pts[j], pts[k]) {
            return Err(Error::DegenerateFrame);
        }
    }
    // columns: e1 <- p3, e2 <- p2, e3 <- p1
    let cols = [p3.to_rats(), p2.to_rats(), p1.to_rats()];
    let basis = Mat3(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone())));
    let scales = basis.inverse()?.apply_vec(&p4.0);
    let scaled = Mat3(std::array::from_fn(|i| {
        std::array::from_fn(|j| &basis.0[i][j] * &scales[j])
    }));
    scaled.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z).unwrap()
    }
    fn ln(u: i64, v: i64, w: i64) -> ProjLine {
        ProjLine::from_ints(u, v, w).unwrap()
    }
    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn canonical_form() {
        assert_eq!(pt(-2, 4, -6), pt(1, -2, 3));
        assert_eq!(pt(0, -3, 0), pt(0, 1, 0));
        assert_eq!(ProjPoint::from_ints(0, 0, 0), Err(Error::ZeroVector));
        let p = ProjPoint::from_rats(&rat(1, 2), &rat(-1, 3), &rat(1, 1)).unwrap();
        assert_eq!(p, pt(3, -2, 6));
    }

    #[test]
    fn join_examples() {
        assert_eq!(join(&pt(1, 0, 0), &pt(0, 1, 0)).unwrap(), ln(0, 0, 1));
        assert_eq!(join(&pt(0, 1, 0), &pt(1, 1, 1)).unwrap(), ln(1, 0, -1));
        assert_eq!(join(&pt(1, 2, 1), &pt(1, 2, 1)), Err(Error::IdenticalPoints));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&ln(0, 1, 0), &ln(1, 0, -1)).unwrap(), pt(1, 0, 1));
        assert_eq!(meet(&ln(1, 0, 0), &ln(1, 0, -2)).unwrap(), pt(0, 1, 0));
        assert_eq!(meet(&ln(0, 0, 1), &ln(0, 0, 1)), Err(Error::IdenticalLines));
    }

    #[test]
    fn collinear_examples() {
        assert!(collinear(&pt(0, 0, 1), &pt(1, 0, 1), &pt(2, 0, 1)));
        assert!(!collinear(&pt(0, 0, 1), &pt(1, 0, 1), &pt(1, 1, 1)));
        assert!(collinear(&pt(1, 2, 1), &pt(2, 4, 1), &pt(0, 0, 1)));
    }

    #[test]
    fn cross_ratio_point_examples() {
        // parameters on the x-axis: 0, inf, 1, -1
        let cr = cross_ratio_points(&pt(0, 0, 1), &pt(1, 0, 0), &pt(1, 0, 1), &pt(-1, 0, 1));
        assert_eq!(cr.unwrap(), CrossRatio::Finite(rat(-1, 1)));
        let cr = cross_ratio_points(&pt(0, 0, 1), &pt(1, 0, 1), &pt(1, 0, 0), &pt(-1, 0, 1));
        assert_eq!(cr.unwrap(), CrossRatio::Finite(rat(2, 1)));
        let cr = cross_ratio_points(&pt(0, 0, 1), &pt(1, 0, 1), &pt(3, 0, 1), &pt(3, 0, 1));
        assert_eq!(cr.unwrap(), CrossRatio::Finite(rat(1, 1)));
        let cr = cross_ratio_points(&pt(0, 0, 1), &pt(1, 0, 1), &pt(1, 1, 1), &pt(2, 0, 1));
        assert_eq!(cr, Err(Error::NotCollinear));
        let cr = cross_ratio_points(&pt(0, 0, 1), &pt(0, 0, 1), &pt(1, 0, 1), &pt(1, 0, 1));
        assert_eq!(cr, Err(Error::TooDegenerate));
        // p1 = p4 sends the value to infinity
        let cr = cross_ratio_points(&pt(0, 0, 1), &pt(1, 0, 1), &pt(2, 0, 1), &pt(0, 0, 1));
        assert_eq!(cr.unwrap(), CrossRatio::Infinite);
    }

    #[test]
    fn cross_ratio_line_examples() {
        let slope = |m: i64| ln(m, -1, 0);
        let vertical = ln(1, 0, 0);
        let cr = cross_ratio_lines(&slope(0), &vertical, &slope(1), &slope(-1));
        assert_eq!(cr.unwrap(), CrossRatio::Finite(rat(-1, 1)));
        let cr = cross_ratio_lines(&slope(0), &slope(1), &vertical, &slope(-1));
        assert_eq!(cr.unwrap(), CrossRatio::Finite(rat(2, 1)));
        let cr = cross_ratio_lines(&slope(0), &slope(1), &vertical, &ln(1, 1, -1));
        assert_eq!(cr, Err(Error::NotConcurrent));
    }

    #[test]
    fn homography_examples() {
        let p = pt(3, -7, 2);
        assert_eq!(apply_homography(&Mat3::identity(), &p).unwrap(), p);
        let singular = Mat3::from_ints([[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert_eq!(apply_homography(&singular, &p), Err(Error::SingularMatrix));

        let frame = [pt(0, 0, 1), pt(0, 1, 0), pt(1, 0, 0), pt(1, 1, 1)];
        let m = frame_map(&frame[0], &frame[1], &frame[2], &frame[3]).unwrap();
        for f in &frame {
            assert_eq!(&apply_homography(&m, f).unwrap(), f);
        }
        // the identity, up to a scalar
        let s = m.0[0][0].clone();
        assert!(!s.is_zero());
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.clone() } else { Rat::zero() };
                assert_eq!(m.0[i][j], want);
            }
        }
    }

    #[test]
    fn frame_map_general_position() {
        let src = [pt(1, 0, 1), pt(0, 1, 1), pt(1, 1, 1), pt(0, 0, 1)];
        let m = frame_map(&src[0], &src[1], &src[2], &src[3]).unwrap();
        let dst = [pt(0, 0, 1), pt(0, 1, 0), pt(1, 0, 0), pt(1, 1, 1)];
        for (s, d) in src.iter().zip(&dst) {
            assert_eq!(&apply_homography(&m, s).unwrap(), d);
        }
        let bad = frame_map(&pt(0, 0, 1), &pt(1, 0, 1), &pt(2, 0, 1), &pt(0, 1, 1));
        assert_eq!(bad, Err(Error::DegenerateFrame));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat3::from_ints([[2, 1, 0], [0, 3, -1], [1, 0, 5]]);
        assert_eq!(m.mul(&m.inverse().unwrap()), Mat3::identity());
    }
}
