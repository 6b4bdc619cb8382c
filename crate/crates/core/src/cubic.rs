//! Ternary cubic forms.
//!
//! Coefficients follow the monomial order
//! `x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3`.
//! Line sections are computed by restricting the form to `lambda*P + mu*Q`
//! and dividing out the known roots, so every intersection stays rational.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::projective::{canonicalize, clear_denominators, cross, ProjLine, ProjPoint, Rat, Vec3};

/// Exponents of x, y, z for each coefficient slot.
pub const MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cubic([BigInt; 10]);

impl Cubic {
    pub fn new(coeffs: [BigInt; 10]) -> Result<Self> {
        canonicalize(coeffs).map(Self).ok_or(Error::ZeroVector)
    }

    pub fn from_ints(coeffs: [i64; 10]) -> Result<Self> {
        Self::new(coeffs.map(BigInt::from))
    }

    pub fn from_rats(coeffs: &[Rat; 10]) -> Result<Self> {
        Self::new(clear_denominators(coeffs))
    }

    pub fn coeffs(&self) -> &[BigInt; 10] {
        &self.0
    }

    pub fn eval(&self, p: &ProjPoint) -> BigInt {
        eval_form(&self.0, p.coords())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    fn ensure_on(&self, p: &ProjPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve(p.clone()))
        }
    }

    pub fn gradient(&self, p: &ProjPoint) -> Vec3 {
        let v = p.coords();
        std::array::from_fn(|axis| {
            let mut acc = BigInt::zero();
            for (c, e) in self.0.iter().zip(MONOMIALS) {
                if c.is_zero() || e[axis] == 0 {
                    continue;
                }
                let mut term = c * BigInt::from(e[axis]);
                for k in 0..3 {
                    let pow = if k == axis { e[k] - 1 } else { e[k] };
                    term *= v[k].pow(pow);
                }
                acc += term;
            }
            acc
        })
    }

    /// Coefficients `[c0, c1, c2, c3]` of the binary cubic
    /// `F(lambda*P + mu*Q) = c0 l^3 + c1 l^2 m + c2 l m^2 + c3 m^3`.
    pub fn restrict(&self, p: &ProjPoint, q: &ProjPoint) -> [BigInt; 4] {
        let (pv, qv) = (p.coords(), q.coords());
        let mut out: [BigInt; 4] = Default::default();
        for (c, e) in self.0.iter().zip(MONOMIALS) {
            if c.is_zero() {
                continue;
            }
            // product of linear forms (p_k l + q_k m), indexed by power of m
            let mut poly = vec![c.clone()];
            for k in 0..3 {
                for _ in 0..e[k] {
                    let mut next = vec![BigInt::zero(); poly.len() + 1];
                    for (i, a) in poly.iter().enumerate() {
                        next[i] += a * &pv[k];
                        next[i + 1] += a * &qv[k];
                    }
                    poly = next;
                }
            }
            for (slot, a) in out.iter_mut().zip(poly) {
                *slot += a;
            }
        }
        out
    }

    pub fn tangent_at(&self, p: &ProjPoint) -> Result<ProjLine> {
        self.ensure_on(p)?;
        ProjLine::from_vec(self.gradient(p)).map_err(|_| Error::SingularPoint(p.clone()))
    }

    /// `P # Q`: the third intersection of the chord `PQ` with the curve.
    pub fn third_intersection(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
        if p == q {
            return Err(Error::IdenticalPoints);
        }
        self.ensure_on(p)?;
        self.ensure_on(q)?;
        let [_, c1, c2, _] = self.restrict(p, q);
        // F = l*m*(c1 l + c2 m); the remaining root is (l : m) = (c2 : -c1)
        if c1.is_zero() && c2.is_zero() {
            return Err(Error::LineComponent);
        }
        combine_points(&c2, p, &(-c1), q)
    }

    /// `P # P`: the second intersection of the tangent at `P` with the curve.
    pub fn tangent_third(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let tangent = self.tangent_at(p)?;
        let other = second_point_on(&tangent, p);
        let [_, _, c2, c3] = self.restrict(p, &other);
        // F = m^2 (c2 l + c3 m); an inflection gives c2 = 0 and returns P
        if c2.is_zero() && c3.is_zero() {
            return Err(Error::LineComponent);
        }
        combine_points(&c3, p, &(-c2), &other)
    }

    /// The chord-tangent operation, taking the tangent when `P = Q`.
    pub fn sharp(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
        if p == q {
            self.tangent_third(p)
        } else {
            self.third_intersection(p, q)
        }
    }
}

impl fmt::Debug for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cubic({self})")
    }
}

impl fmt::Display for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, e) in self.0.iter().zip(MONOMIALS) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            if !first {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            let mono: String = ["x", "y", "z"]
                .iter()
                .zip(e)
                .filter(|(_, k)| *k > 0)
                .map(|(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if mag.is_one() {
                write!(f, "{sign}{mono}")?;
            } else {
                write!(f, "{sign}{mag}{mono}")?;
            }
            first = false;
        }
        f.write_str(" = 0")
    }
}

pub(crate) fn eval_form(coeffs: &[BigInt; 10], v: &Vec3) -> BigInt {
    coeffs
        .iter()
        .zip(MONOMIALS)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, e)| c * v[0].pow(e[0]) * v[1].pow(e[1]) * v[2].pow(e[2]))
        .sum()
}

fn combine_points(s: &BigInt, p: &ProjPoint, t: &BigInt, q: &ProjPoint) -> Result<ProjPoint> {
    let (pv, qv) = (p.coords(), q.coords());
    ProjPoint::from_vec(std::array::from_fn(|i| s * &pv[i] + t * &qv[i]))
}

/// A point of `line` different from `p`.
fn second_point_on(line: &ProjLine, p: &ProjPoint) -> ProjPoint {
    let axes: [Vec3; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { BigInt::one() } else { BigInt::zero() })
    });
    axes.iter()
        .filter_map(|e| ProjPoint::from_vec(cross(line.coords(), e)).ok())
        .find(|q| q != p)
        .expect("a line meets the three coordinate lines in at least two points")
}

/// The unique cubic through nine points.
///
/// The coefficient vector spans the kernel of the 9x10 monomial matrix; it
/// is assembled from signed maximal minors, each computed by fraction-free
/// elimination.
pub fn fit_cubic_9(points: &[ProjPoint]) -> Result<Cubic> {
    if points.len() != 9 {
        return Err(Error::WrongPointCount { expected: 9, got: points.len() });
    }
    fit_cubic(points)
}

/// The unique cubic through nine or more distinct points.
pub fn fit_cubic(points: &[ProjPoint]) -> Result<Cubic> {
    if points.len() < 9 {
        return Err(Error::WrongPointCount { expected: 9, got: points.len() });
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = points.iter().map(|p| monomial_row(p.coords())).collect();
    // greedily keep rows that raise the rank
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(9);
    for row in &rows {
        if basis.len() == 10 {
            break;
        }
        basis.push(row.clone());
        if bareiss_rank(basis.clone()) < basis.len() {
            basis.pop();
        }
    }
    match basis.len() {
        10 => return Err(Error::OverconstrainedFit),
        9 => {}
        rank => return Err(Error::AmbiguousFit { dim: 10 - rank }),
    }
    let coeffs: [BigInt; 10] = std::array::from_fn(|skip| {
        let minor: Vec<Vec<BigInt>> = basis
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, v)| v.clone()).collect())
            .collect();
        let d = bareiss_det(minor);
        if skip % 2 == 0 { d } else { -d }
    });
    Cubic::new(coeffs).map_err(|_| Error::OverconstrainedFit)
}

fn monomial_row(v: &Vec3) -> Vec<BigInt> {
    MONOMIALS.iter().map(|e| v[0].pow(e[0]) * v[1].pow(e[1]) * v[2].pow(e[2])).collect()
}

/// Fraction-free (Bareiss) elimination; returns the row-echelon rank and,
/// for square input, the determinant.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    let det = if rows == cols && rank == rows { sign * prev } else { BigInt::zero() };
    (rank, det)
}

fn bareiss_rank(m: Vec<Vec<BigInt>>) -> usize {
    bareiss(m).0
}

fn bareiss_det(m: Vec<Vec<BigInt>>) -> BigInt {
    bareiss(m).1
}

/// The cubic obtained from the construction after normalizing
/// `A, A', B, B'` to `(0,0,1), (0,1,0), (1,0,0), (1,1,1)`, as a function of
/// the remaining affine pair `C, C'`.
pub fn explicit_schroeter_cubic(c: &ProjPoint, c_bar: &ProjPoint) -> Result<Cubic> {
    let (cx, cy) = c.to_affine().ok_or_else(|| Error::NotAffine(c.clone()))?;
    let (dx, dy) = c_bar.to_affine().ok_or_else(|| Error::NotAffine(c_bar.clone()))?;
    let zero = Rat::zero();
    let one = Rat::one();
    let coeffs: [Rat; 10] = [
        zero.clone(),
        -one.clone(),
        &cy * &dy,
        one,
        &cx + &dx - &cy * &dx - &cx * &dy,
        -(&cy * &dy),
        zero.clone(),
        &cx * &dx - &cx - &dx,
        &cy * &dx + &cx * &dy - &cx * &dx,
        zero,
    ];
    Cubic::from_rats(&coeffs)
}
