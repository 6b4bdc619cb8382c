//! Executable instances of the incidence theorems behind the construction.
//!
//! Each check returns `Ok(true)` or `Ok(false)` when its hypotheses hold and
//! an error naming the broken hypothesis otherwise.

use crate::cubic::Cubic;
use crate::engine::{combine_oriented, PointPair};
use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::projective::{collinear, join, meet, ProjLine, ProjPoint};
use crate::weierstrass::WeierstrassCurve;

fn ensure_on(curve: &Cubic, points: &[&ProjPoint]) -> Result<()> {
    match points.iter().find(|p| !curve.contains(p)) {
        Some(p) => Err(Error::NotOnCurve((*p).clone())),
        None => Ok(()),
    }
}

/// The three meets of opposite sides of the hexagon `A B C A' B' C'`:
/// `AB ^ A'B'`, `BC ^ B'C'` and `CA' ^ C'A`.
pub fn hexagon_meets(
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
    a_bar: &ProjPoint,
    b_bar: &ProjPoint,
    c_bar: &ProjPoint,
) -> Result<[ProjPoint; 3]> {
    let side = |p: &ProjPoint, q: &ProjPoint| join(p, q).map_err(|_| Error::DegenerateHexagon);
    let cross = |l: ProjLine, m: ProjLine| meet(&l, &m).map_err(|_| Error::DegenerateHexagon);
    Ok([
        cross(side(a, b)?, side(a_bar, b_bar)?)?,
        cross(side(b, c)?, side(b_bar, c_bar)?)?,
        cross(side(c, a_bar)?, side(c_bar, a)?)?,
    ])
}

/// For a hexagon inscribed in `curve`: if two meets of opposite sides lie on
/// the curve, so does the third. Vacuously true otherwise.
pub fn chasles_check(
    curve: &Cubic,
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
    a_bar: &ProjPoint,
    b_bar: &ProjPoint,
    c_bar: &ProjPoint,
) -> Result<bool> {
    ensure_on(curve, &[a, b, c, a_bar, b_bar, c_bar])?;
    let [m1, m2, m3] = hexagon_meets(a, b, c, a_bar, b_bar, c_bar)?;
    if curve.contains(&m1) && curve.contains(&m2) {
        Ok(curve.contains(&m3))
    } else {
        Ok(true)
    }
}

/// With `S = PQ ^ P'Q'` and `S' = PQ' ^ P'Q` on the curve, the tangent thirds
/// of `P` and `P'` agree, as do those of `Q, Q'` and `S, S'`.
pub fn lemma4a_check(
    curve: &Cubic,
    p: &ProjPoint,
    p_bar: &ProjPoint,
    q: &ProjPoint,
    q_bar: &ProjPoint,
) -> Result<bool> {
    ensure_on(curve, &[p, p_bar, q, q_bar])?;
    let comb = combine_oriented(p, p_bar, q, q_bar)?;
    if !curve.contains(&comb.s) {
        return Err(Error::HypothesisFailed(format!("S = {} is off the curve", comb.s)));
    }
    if !curve.contains(&comb.s_bar) {
        return Err(Error::HypothesisFailed(format!("S' = {} is off the curve", comb.s_bar)));
    }
    let same = |x: &ProjPoint, y: &ProjPoint| -> Result<bool> {
        Ok(curve.tangent_third(x)? == curve.tangent_third(y)?)
    };
    Ok(same(p, p_bar)? && same(q, q_bar)? && same(&comb.s, &comb.s_bar)?)
}

/// The converse direction: from `P # P = P' # P'` and any `Q`, build
/// `S = P # Q`, `Q' = S # P'` and check `P # Q' = P' # Q` and
/// `Q # Q = Q' # Q'`.
pub fn lemma4b_check(curve: &Cubic, p: &ProjPoint, p_bar: &ProjPoint, q: &ProjPoint) -> Result<bool> {
    ensure_on(curve, &[p, p_bar, q])?;
    if curve.tangent_third(p)? != curve.tangent_third(p_bar)? {
        return Err(Error::HypothesisFailed("P # P differs from P' # P'".into()));
    }
    let s = curve.sharp(p, q)?;
    let q_bar = curve.sharp(&s, p_bar)?;
    Ok(curve.sharp(p, &q_bar)? == curve.sharp(p_bar, q)?
        && curve.tangent_third(q)? == curve.tangent_third(&q_bar)?)
}

/// The involution on the pencil at `r` pairing `RP` with `RP'` and `RQ`
/// with `RQ'`. The four lines must be distinct.
pub fn pencil_involution(r: &ProjPoint, p_pair: &PointPair, q_pair: &PointPair) -> Result<Involution> {
    let line = |x: &ProjPoint| join(r, x).map_err(|_| Error::LinesNotDistinct);
    let lines = [
        line(p_pair.first())?,
        line(p_pair.second())?,
        line(q_pair.first())?,
        line(q_pair.second())?,
    ];
    for i in 0..4 {
        for j in i + 1..4 {
            if lines[i] == lines[j] {
                return Err(Error::LinesNotDistinct);
            }
        }
    }
    let [a, a_bar, b, b_bar] = lines;
    Involution::new(a, a_bar, b, b_bar)
}

/// The conjugate of `SS'` in the involution at `S` given by the pairs
/// `{P, P'}` and `{Q, Q'}`. It is the tangent at `S`.
pub fn prop6_tangent_at(
    s: &ProjPoint,
    s_bar: &ProjPoint,
    p_pair: &PointPair,
    q_pair: &PointPair,
) -> Result<ProjLine> {
    let inv = pencil_involution(s, p_pair, q_pair)?;
    let chord = join(s, s_bar).map_err(|_| Error::LinesNotDistinct)?;
    inv.conjugate_line(&chord)
}

/// [`prop6_tangent_at`] for the first point of `s_pair`, after checking the
/// result against the algebraic tangent.
pub fn prop6_tangent_via_involution(
    curve: &Cubic,
    s_pair: &PointPair,
    p_pair: &PointPair,
    q_pair: &PointPair,
) -> Result<ProjLine> {
    let (s, s_bar) = (s_pair.first(), s_pair.second());
    ensure_on(curve, &[s, s_bar, p_pair.first(), p_pair.second(), q_pair.first(), q_pair.second()])?;
    let line = prop6_tangent_at(s, s_bar, p_pair, q_pair)?;
    let tangent = curve.tangent_at(s)?;
    if line != tangent {
        return Err(Error::InvariantViolation(format!(
            "involution gives {line} at {s}, the tangent is {tangent}"
        )));
    }
    Ok(line)
}

/// If `A`, `A'` and `B` are collinear then `A # A = B'`.
pub fn fact7_check(w: &WeierstrassCurve, a: &ProjPoint, b: &ProjPoint) -> Result<bool> {
    ensure_on(w.as_cubic(), &[a, b])?;
    let a_bar = w.conjugate_point(a)?;
    if a == b || &a_bar == b || a == &a_bar || !collinear(a, &a_bar, b) {
        return Err(Error::NotCollinear);
    }
    Ok(w.as_cubic().tangent_third(a)? == w.conjugate_point(b)?)
}

/// `RS` and `RS'` are conjugate in the involution at `R` given by
/// `{P, P'}` and `{Q, Q'}`.
pub fn fact9_check(
    curve: &Cubic,
    r: &ProjPoint,
    p_pair: &PointPair,
    q_pair: &PointPair,
    s_pair: &PointPair,
) -> Result<bool> {
    ensure_on(curve, &[r])?;
    let inv = pencil_involution(r, p_pair, q_pair)?;
    let line = |x: &ProjPoint| join(r, x).map_err(|_| Error::LinesNotDistinct);
    let (rs, rs_bar) = (line(s_pair.first())?, line(s_pair.second())?);
    Ok(inv.conjugate_line(&rs)? == rs_bar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::Rat;

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z).unwrap()
    }
    fn pair(p: ProjPoint, q: ProjPoint) -> PointPair {
        PointPair::new(p, q).unwrap()
    }
    fn w12() -> WeierstrassCurve {
        WeierstrassCurve::from_ints(1, 2).unwrap()
    }
    fn torsion() -> WeierstrassCurve {
        WeierstrassCurve::from_ints(5, 4).unwrap()
    }

    #[test]
    fn chasles_on_torsion_hexagon() {
        let w = torsion();
        let g = w.as_cubic();
        let (a, b, c) = (pt(2, 6, 1), pt(-2, 2, 1), pt(-1, 0, 1));
        let (a2, b2, c2) = (pt(2, -6, 1), pt(-2, -2, 1), pt(-4, 0, 1));
        assert_eq!(chasles_check(g, &a, &b, &c, &a2, &b2, &c2), Ok(true));
        let meets = hexagon_meets(&a, &b, &c, &a2, &b2, &c2).unwrap();
        assert!(meets.iter().all(|m| g.contains(m)));
    }

    #[test]
    fn chasles_vacuous_case() {
        let w = w12();
        let g = w.as_cubic();
        // A + B differs from A' + B', so AB ^ A'B' misses the curve
        let (a, b, c) = (pt(1, 2, 1), pt(2, 4, 1), pt(32, -184, 1));
        let (a2, b2, c2) = (pt(2, -4, 1), pt(1, -2, 1), pt(4, 23, 64));
        let b_off = w.multiple(3, &a).unwrap();
        let meets = hexagon_meets(&a, &b, &c, &a2, &b_off, &c2).unwrap();
        assert!(!g.contains(&meets[0]));
        assert_eq!(chasles_check(g, &a, &b, &c, &a2, &b_off, &c2), Ok(true));
        assert_eq!(chasles_check(g, &a, &b, &c, &a2, &b2, &c2), Ok(true));
        assert_eq!(
            chasles_check(g, &a, &a, &c, &a2, &b2, &c2),
            Err(Error::DegenerateHexagon)
        );
    }

    #[test]
    fn lemma4a_golden() {
        let g = w12().as_cubic().clone();
        let tt = pt(4, 23, 64);
        assert_eq!(g.tangent_third(&pt(1, 2, 1)).unwrap(), tt);
        assert_eq!(g.tangent_third(&pt(2, -4, 1)).unwrap(), tt);
        assert_eq!(lemma4a_check(&g, &pt(1, 2, 1), &pt(2, -4, 1), &pt(2, 4, 1), &pt(1, -2, 1)), Ok(true));
        let bent = lemma4a_check(&g, &pt(1, 2, 1), &pt(1, -2, 1), &pt(2, 4, 1), &pt(32, -184, 1));
        assert!(matches!(bent, Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn lemma4a_torsion() {
        let g = torsion().as_cubic().clone();
        let pairs = [
            (pt(2, 6, 1), pt(2, -6, 1)),
            (pt(-2, 2, 1), pt(-2, -2, 1)),
            (pt(-1, 0, 1), pt(-4, 0, 1)),
        ];
        for (i, (p, p2)) in pairs.iter().enumerate() {
            let (q, q2) = &pairs[(i + 1) % 3];
            assert_eq!(lemma4a_check(&g, p, p2, q, q2), Ok(true));
        }
    }

    #[test]
    fn lemma4b_examples() {
        let g = w12().as_cubic().clone();
        let (p, p2, q) = (pt(1, 2, 1), pt(2, -4, 1), pt(2, 4, 1));
        assert_eq!(g.sharp(&p, &q).unwrap(), pt(0, 0, 1));
        assert_eq!(g.sharp(&pt(0, 0, 1), &p2).unwrap(), pt(1, -2, 1));
        assert_eq!(lemma4b_check(&g, &p, &p2, &q), Ok(true));
        assert_eq!(lemma4b_check(&g, &p, &p2, &p), Ok(true));
        let failed = lemma4b_check(&g, &p, &pt(2, 4, 1), &q);
        assert!(matches!(failed, Err(Error::HypothesisFailed(_))));
        let t = torsion().as_cubic().clone();
        assert_eq!(lemma4b_check(&t, &pt(2, 6, 1), &pt(2, -6, 1), &pt(-2, 2, 1)), Ok(true));
    }

    #[test]
    fn prop6_golden() {
        let g = w12().as_cubic().clone();
        let s_pair = pair(pt(4, 23, 64), pt(32, -184, 1));
        let p_pair = pair(pt(1, 2, 1), pt(2, -4, 1));
        let q_pair = pair(pt(2, 4, 1), pt(1, -2, 1));
        assert_eq!(s_pair.first(), &pt(4, 23, 64));
        let line = prop6_tangent_via_involution(&g, &s_pair, &p_pair, &q_pair).unwrap();
        assert_eq!(line, g.tangent_at(&pt(4, 23, 64)).unwrap());
        assert!(line.passes_through(&pt(4, 23, 64)));
        // (32,-184) lies on the chord through (1,2) and (2,-4)
        let other = prop6_tangent_at(&pt(32, -184, 1), &pt(4, 23, 64), &p_pair, &q_pair);
        assert_eq!(other, Err(Error::LinesNotDistinct));
    }

    #[test]
    fn prop6_torsion_coincidence() {
        let g = torsion().as_cubic().clone();
        let s_pair = pair(pt(2, 6, 1), pt(2, -6, 1));
        let p_pair = pair(pt(-2, 2, 1), pt(-2, -2, 1));
        let q_pair = pair(pt(-1, 0, 1), pt(-4, 0, 1));
        // slopes from (2,6) to (-2,-2) and to (-1,0) are both 2
        let at_s = prop6_tangent_at(&pt(2, 6, 1), &pt(2, -6, 1), &p_pair, &q_pair);
        assert_eq!(at_s, Err(Error::LinesNotDistinct));
        assert_eq!(
            prop6_tangent_via_involution(&g, &s_pair, &p_pair, &q_pair),
            Err(Error::LinesNotDistinct)
        );
    }

    #[test]
    fn fact7_examples() {
        let w = w12();
        let (a, b) = (pt(1, 2, 1), pt(32, -184, 1));
        assert_eq!(w.as_cubic().third_intersection(&a, &pt(2, -4, 1)).unwrap(), b);
        assert_eq!(w.conjugate_point(&b).unwrap(), pt(4, 23, 64));
        assert_eq!(fact7_check(&w, &a, &b), Ok(true));
        assert_eq!(fact7_check(&w, &a, &pt(2, 4, 1)), Err(Error::NotCollinear));

        let t = torsion();
        assert_eq!(t.as_cubic().tangent_third(&pt(-1, 0, 1)).unwrap(), WeierstrassCurve::origin());
        assert_eq!(fact7_check(&t, &pt(-1, 0, 1), &pt(0, 0, 1)), Ok(true));
    }

    #[test]
    fn fact9_examples() {
        let g = w12().as_cubic().clone();
        let r = pt(0, 0, 1);
        let p_pair = pair(pt(1, 2, 1), pt(2, -4, 1));
        let q_pair = pair(pt(4, 23, 64), pt(32, -184, 1));
        let s_pair = pair(pt(2, 4, 1), pt(1, -2, 1));
        assert_eq!(fact9_check(&g, &r, &p_pair, &q_pair, &s_pair), Ok(true));
        // (1,2), (2,4) and T lie on y = 2x
        assert_eq!(fact9_check(&g, &r, &p_pair, &s_pair, &q_pair), Err(Error::LinesNotDistinct));
        assert_eq!(
            fact9_check(&g, &pt(1, 2, 1), &p_pair, &q_pair, &s_pair),
            Err(Error::LinesNotDistinct)
        );
        let off = ProjPoint::affine(&Rat::from_integer(1.into()), &Rat::from_integer(1.into()));
        assert_eq!(fact9_check(&g, &off, &p_pair, &q_pair, &s_pair), Err(Error::NotOnCurve(off.clone())));
    }
}
