//! Line involutions on a pencil.
//!
//! An [`Involution`] is fixed by two pairs of conjugate lines through a
//! common carrier. Conjugates are found with the classical ruler
//! construction (two auxiliary transversals through a point of the line,
//! then a diagonal point of the resulting quadrangle). An independent
//! algebraic form of the same involution, acting on the pencil parameter,
//! is kept alongside so the two routes can be compared.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::projective::{
    collinear, cross, cross_ratio_lines, dot, join, meet, ProjLine, ProjPoint, Vec3,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    carrier: ProjPoint,
    pair_a: (ProjLine, ProjLine),
    pair_b: (ProjLine, ProjLine),
    algebraic: PencilInvolution,
}

/// The involution written on the pencil parameter: with `a` and `a'` as the
/// basis, a line `l = s*a + t*a'` is sent to `(-q*t)*a + (p*s)*a'`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct PencilInvolution {
    p: BigInt,
    q: BigInt,
}

/// Coordinates `(s, t)` of `l` in the basis `(u, v)` of a pencil, up to a
/// common positive factor.
fn pencil_coords(u: &Vec3, v: &Vec3, l: &Vec3) -> (BigInt, BigInt) {
    let n = cross(u, v);
    (dot(&cross(l, v), &n), dot(&cross(u, l), &n))
}

impl Involution {
    pub fn new(a: ProjLine, a_bar: ProjLine, b: ProjLine, b_bar: ProjLine) -> Result<Self> {
        let lines = [&a, &a_bar, &b, &b_bar];
        for i in 0..4 {
            for j in i + 1..4 {
                if lines[i] == lines[j] {
                    return Err(Error::InvalidInvolution);
                }
            }
        }
        let carrier = meet(&a, &a_bar)?;
        if !lines.iter().all(|l| carrier.lies_on(l)) {
            return Err(Error::NotInPencil);
        }
        let (sb, tb) = pencil_coords(a.coords(), a_bar.coords(), b.coords());
        let (sb2, tb2) = pencil_coords(a.coords(), a_bar.coords(), b_bar.coords());
        // p*s*s' + q*t*t' = 0 on every conjugate pair; (a, a') forces no cross term
        let algebraic = PencilInvolution { p: &tb * &tb2, q: -(&sb * &sb2) };
        Ok(Self { carrier, pair_a: (a, a_bar), pair_b: (b, b_bar), algebraic })
    }

    pub fn carrier(&self) -> &ProjPoint {
        &self.carrier
    }

    pub fn pair_a(&self) -> &(ProjLine, ProjLine) {
        &self.pair_a
    }

    pub fn pair_b(&self) -> &(ProjLine, ProjLine) {
        &self.pair_b
    }

    fn check_pencil(&self, d: &ProjLine) -> Result<()> {
        if self.carrier.lies_on(d) {
            Ok(())
        } else {
            Err(Error::NotInPencil)
        }
    }

    /// Conjugate of `d` by the ruler construction, with deterministic
    /// choices of the auxiliary point and lines.
    pub fn conjugate_line(&self, d: &ProjLine) -> Result<ProjLine> {
        self.check_pencil(d)?;
        for point in small_points_on(d).filter(|p| *p != self.carrier) {
            let through: Vec<ProjLine> = small_lines_through(&point)
                .filter(|l| !self.carrier.lies_on(l))
                .take(6)
                .collect();
            for (i, first) in through.iter().enumerate() {
                for second in &through[i + 1..] {
                    if let Ok(line) = self.conjugate_line_via(d, &point, first, second) {
                        return Ok(line);
                    }
                }
            }
        }
        Err(Error::DegenerateChoice)
    }

    /// The ruler construction with explicit choices: `point` on `d`, `first`
    /// meets `a` and `b`, `second` meets `a'` and `b'`.
    pub fn conjugate_line_via(
        &self,
        d: &ProjLine,
        point: &ProjPoint,
        first: &ProjLine,
        second: &ProjLine,
    ) -> Result<ProjLine> {
        self.check_pencil(d)?;
        if !point.lies_on(d)
            || *point == self.carrier
            || !point.lies_on(first)
            || !point.lies_on(second)
            || first == second
            || self.carrier.lies_on(first)
            || self.carrier.lies_on(second)
        {
            return Err(Error::DegenerateChoice);
        }
        let (a, a_bar) = &self.pair_a;
        let (b, b_bar) = &self.pair_b;
        let pa = meet(first, a)?;
        let pb = meet(first, b)?;
        let pa_bar = meet(second, a_bar)?;
        let pb_bar = meet(second, b_bar)?;
        let cross_1 = join(&pa, &pb_bar).map_err(|_| Error::DegenerateChoice)?;
        let cross_2 = join(&pa_bar, &pb).map_err(|_| Error::DegenerateChoice)?;
        let image = meet(&cross_1, &cross_2).map_err(|_| Error::DegenerateChoice)?;
        join(&self.carrier, &image).map_err(|_| Error::DegenerateChoice)
    }

    /// Conjugate of `d` computed from the algebraic form of the involution.
    pub fn conjugate_line_algebraic(&self, d: &ProjLine) -> Result<ProjLine> {
        self.check_pencil(d)?;
        let (a, a_bar) = &self.pair_a;
        let (s, t) = pencil_coords(a.coords(), a_bar.coords(), d.coords());
        let s2 = -(&self.algebraic.q * &t);
        let t2 = &self.algebraic.p * &s;
        let v: Vec3 = std::array::from_fn(|i| &s2 * &a.coords()[i] + &t2 * &a_bar.coords()[i]);
        ProjLine::from_vec(v)
    }
}

/// Small-height points on `line`, in a fixed order.
fn small_points_on(line: &ProjLine) -> impl Iterator<Item = ProjPoint> + '_ {
    let mut seen = Vec::new();
    small_triples().filter_map(move |m| {
        let p = ProjPoint::from_vec(cross(line.coords(), &m)).ok()?;
        if seen.contains(&p) {
            return None;
        }
        seen.push(p.clone());
        Some(p)
    })
}

fn small_lines_through(point: &ProjPoint) -> impl Iterator<Item = ProjLine> + '_ {
    let mut seen = Vec::new();
    small_triples().filter_map(move |q| {
        let l = ProjLine::from_vec(cross(point.coords(), &q)).ok()?;
        if seen.contains(&l) {
            return None;
        }
        seen.push(l.clone());
        Some(l)
    })
}

/// Integer triples with entries in [-3, 3], ordered by max-norm.
fn small_triples() -> impl Iterator<Item = Vec3> {
    (1..=3i64).flat_map(|h| {
        let range = move || -h..=h;
        range().flat_map(move |x| {
            range().flat_map(move |y| {
                range().filter_map(move |z| {
                    (x.abs().max(y.abs()).max(z.abs()) == h)
                        .then(|| [BigInt::from(x), BigInt::from(y), BigInt::from(z)])
                })
            })
        })
    })
}

/// The three conjugate pairs through `p` induced by the quadrangle
/// `A, A', B, B'`: `(PA, PA')`, `(PB, PB')` and `(PD, PD')` with
/// `D = AB ^ A'B'`, `D' = AB' ^ A'B`.
pub fn conjugate_pairs_from_quadrangle(
    a: &ProjPoint,
    a_bar: &ProjPoint,
    b: &ProjPoint,
    b_bar: &ProjPoint,
    p: &ProjPoint,
) -> Result<[(ProjLine, ProjLine); 3]> {
    let quad = [a, a_bar, b, b_bar];
    for i in 0..4 {
        for j in i + 1..4 {
            if quad[i] == quad[j] {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    let d = meet(&join(a, b)?, &join(a_bar, b_bar)?)?;
    let d_bar = meet(&join(a, b_bar)?, &join(a_bar, b)?)?;
    if quad.contains(&p) || *p == d || *p == d_bar {
        return Err(Error::ForbiddenCarrier);
    }
    Ok([
        (join(p, a)?, join(p, a_bar)?),
        (join(p, b)?, join(p, b_bar)?),
        (join(p, &d)?, join(p, &d_bar)?),
    ])
}

/// Checks the cross-ratio condition for every choice of four lines drawn
/// from three distinct conjugate pairs. The defining pairs of `inv` are
/// included alongside `pairs`.
pub fn verify_involution(inv: &Involution, pairs: &[(ProjLine, ProjLine)]) -> Result<bool> {
    let mut all: Vec<(ProjLine, ProjLine)> = vec![inv.pair_a.clone(), inv.pair_b.clone()];
    for (l, m) in pairs {
        inv.check_pencil(l)?;
        inv.check_pencil(m)?;
        let dup = all.iter().any(|(x, y)| (x == l && y == m) || (x == m && y == l));
        if !dup {
            all.push((l.clone(), m.clone()));
        }
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            for k in j + 1..all.len() {
                let chosen = [&all[i], &all[j], &all[k]];
                if !cross_ratio_condition(chosen) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Every 4-subset of the six lines of three pairs that touches all three
/// pairs: one pair contributes both members.
fn cross_ratio_condition(pairs: [&(ProjLine, ProjLine); 3]) -> bool {
    let six: Vec<(&ProjLine, &ProjLine)> = pairs
        .iter()
        .flat_map(|(l, m)| [(l, m), (m, l)])
        .collect();
    for skip in 0..6 {
        let chosen: Vec<usize> = (0..6).filter(|&i| i != skip).collect();
        for drop in 0..5 {
            let four: Vec<usize> = chosen.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, &i)| i).collect();
            let touched: std::collections::BTreeSet<usize> = four.iter().map(|i| i / 2).collect();
            if touched.len() != 3 {
                continue;
            }
            let lhs = cross_ratio_lines(six[four[0]].0, six[four[1]].0, six[four[2]].0, six[four[3]].0);
            let rhs = cross_ratio_lines(six[four[0]].1, six[four[1]].1, six[four[2]].1, six[four[3]].1);
            match (lhs, rhs) {
                (Ok(x), Ok(y)) if x == y => {}
                (Err(Error::TooDegenerate), Err(Error::TooDegenerate)) => {}
                _ => return false,
            }
        }
    }
    true
}

/// Whether the three point pairs are the opposite vertex pairs of one
/// complete quadrilateral.
pub fn is_complete_quadrilateral_pairing(
    pair_a: (&ProjPoint, &ProjPoint),
    pair_b: (&ProjPoint, &ProjPoint),
    pair_c: (&ProjPoint, &ProjPoint),
) -> Result<bool> {
    let six = [pair_a.0, pair_a.1, pair_b.0, pair_b.1, pair_c.0, pair_c.1];
    for i in 0..6 {
        for j in i + 1..6 {
            if six[i] == six[j] {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    let (a, a_bar) = pair_a;
    for (b, b_bar) in [(pair_b.0, pair_b.1), (pair_b.1, pair_b.0)] {
        for (c, c_bar) in [(pair_c.0, pair_c.1), (pair_c.1, pair_c.0)] {
            if collinear(a, b, c)
                && collinear(a, b_bar, c_bar)
                && collinear(a_bar, b, c_bar)
                && collinear(a_bar, b_bar, c)
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
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
    /// y = (n/d) x through the origin
    fn slope(n: i64, d: i64) -> ProjLine {
        ln(n, -d, 0)
    }

    fn perpendicular() -> Involution {
        Involution::new(slope(0, 1), ln(1, 0, 0), slope(1, 1), slope(-1, 1)).unwrap()
    }

    #[test]
    fn conjugate_of_defining_line() {
        let inv = perpendicular();
        assert_eq!(inv.conjugate_line(&slope(0, 1)).unwrap(), ln(1, 0, 0));
        assert_eq!(inv.conjugate_line(&slope(1, 1)).unwrap(), slope(-1, 1));
    }

    #[test]
    fn slope_two_maps_to_minus_half() {
        let inv = perpendicular();
        let img = inv.conjugate_line(&slope(2, 1)).unwrap();
        assert_eq!(img, slope(-1, 2));
        assert_eq!(inv.conjugate_line_algebraic(&slope(2, 1)).unwrap(), img);
        assert_eq!(inv.conjugate_line(&img).unwrap(), slope(2, 1));
    }

    #[test]
    fn not_in_pencil() {
        let inv = perpendicular();
        assert_eq!(inv.conjugate_line(&ln(1, 1, -1)), Err(Error::NotInPencil));
    }

    #[test]
    fn quadrangle_pairs() {
        let (a, a_bar, b, b_bar) = (pt(0, 0, 1), pt(0, 1, 0), pt(1, 0, 0), pt(1, 1, 1));
        let p = pt(2, 3, 1);
        let pairs = conjugate_pairs_from_quadrangle(&a, &a_bar, &b, &b_bar, &p).unwrap();
        assert_eq!(pairs[2].0, join(&p, &pt(1, 0, 1)).unwrap());
        assert_eq!(pairs[2].1, join(&p, &pt(1, 1, 0)).unwrap());
        let l = |i: usize, bar: bool| if bar { &pairs[i].1 } else { &pairs[i].0 };
        let lhs = cross_ratio_lines(l(0, false), l(0, true), l(1, false), l(2, false)).unwrap();
        let rhs = cross_ratio_lines(l(0, true), l(0, false), l(1, true), l(2, true)).unwrap();
        assert_eq!(lhs, rhs);

        let inv = Involution::new(pairs[0].0.clone(), pairs[0].1.clone(), pairs[1].0.clone(), pairs[1].1.clone()).unwrap();
        assert!(verify_involution(&inv, &pairs).unwrap());
        assert_eq!(
            conjugate_pairs_from_quadrangle(&a, &a_bar, &b, &b_bar, &pt(1, 0, 1)),
            Err(Error::ForbiddenCarrier)
        );
    }

    #[test]
    fn verify_slope_pairs() {
        let inv = perpendicular();
        let good = [(slope(2, 1), slope(-1, 2))];
        assert!(verify_involution(&inv, &good).unwrap());
        let bad = [(slope(2, 1), slope(3, 1))];
        assert!(!verify_involution(&inv, &bad).unwrap());
        assert_eq!(verify_involution(&inv, &[(ln(1, 1, -1), slope(1, 1))]), Err(Error::NotInPencil));
    }

    #[test]
    fn quadrilateral_predicate() {
        // vertices of y=0, x=0, x+y=1, x=2
        let pairs = [
            (pt(0, 0, 1), pt(2, -1, 1)),
            (pt(1, 0, 1), pt(0, 1, 0)),
            (pt(2, 0, 1), pt(0, 1, 1)),
        ];
        let r = is_complete_quadrilateral_pairing(
            (&pairs[0].0, &pairs[0].1),
            (&pairs[1].0, &pairs[1].1),
            (&pairs[2].0, &pairs[2].1),
        );
        assert!(r.unwrap());
        // swapping within the second pair does not matter
        let r = is_complete_quadrilateral_pairing(
            (&pairs[0].0, &pairs[0].1),
            (&pairs[1].1, &pairs[1].0),
            (&pairs[2].0, &pairs[2].1),
        );
        assert!(r.unwrap());

        let r = is_complete_quadrilateral_pairing(
            (&pt(0, 0, 1), &pt(0, 1, 0)),
            (&pt(1, 0, 0), &pt(1, 1, 1)),
            (&pt(2, 3, 1), &pt(5, 1, 1)),
        );
        assert!(!r.unwrap());
        let r = is_complete_quadrilateral_pairing(
            (&pt(0, 0, 1), &pt(0, 1, 0)),
            (&pt(1, 0, 0), &pt(0, 0, 1)),
            (&pt(2, 3, 1), &pt(5, 1, 1)),
        );
        assert_eq!(r, Err(Error::DuplicatePoints));
    }

    #[test]
    fn invalid_involution_rejected() {
        assert_eq!(
            Involution::new(slope(0, 1), slope(0, 1), slope(1, 1), slope(-1, 1)),
            Err(Error::InvalidInvolution)
        );
        assert_eq!(
            Involution::new(slope(0, 1), ln(1, 0, 0), slope(1, 1), ln(1, 1, -1)),
            Err(Error::NotInPencil)
        );
    }
}
