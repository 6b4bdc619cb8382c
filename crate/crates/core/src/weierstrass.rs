//! Curves `y^2 = x^3 + a x^2 + b x` and the chart `y^2 x = alpha + beta x + gamma x^2`.
//!
//! On these models the inflection point `O = (0:1:0)` and the 2-torsion
//! point `T = (0:0:1)` are rational, so the chord-tangent group law and the
//! conjugation `P -> P + T` stay exact.

use num_traits::{One, Zero};

use crate::cubic::Cubic;
use crate::engine::{PointPair, SeedConfig};
use crate::error::{Error, Result};
use crate::projective::{apply_homography, Mat3, ProjPoint, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a: Rat,
    b: Rat,
    cubic: Cubic,
}

impl WeierstrassCurve {
    pub fn new(a: Rat, b: Rat) -> Result<Self> {
        if b.is_zero() || &a * &a == Rat::from_integer(4.into()) * &b {
            return Err(Error::SingularCurve);
        }
        // x^3 + a x^2 z + b x z^2 - y^2 z
        let cubic = Cubic::from_rats(&[
            Rat::one(),
            Rat::zero(),
            a.clone(),
            Rat::zero(),
            Rat::zero(),
            b.clone(),
            Rat::zero(),
            -Rat::one(),
            Rat::zero(),
            Rat::zero(),
        ])?;
        Ok(Self { a, b, cubic })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(Rat::from_integer(a.into()), Rat::from_integer(b.into()))
    }

    /// Recovers `a` and `b` when `cubic` has the shape
    /// `k (x^3 + a x^2 z + b x z^2 - y^2 z)`.
    pub fn recognize(cubic: &Cubic) -> Option<Self> {
        let c = cubic.coeffs();
        let k = &c[0];
        let shape = [1, 3, 4, 6, 8, 9].iter().all(|&i| c[i].is_zero());
        if k.is_zero() || !shape || c[7] != -k {
            return None;
        }
        let a = Rat::new(c[2].clone(), k.clone());
        let b = Rat::new(c[5].clone(), k.clone());
        Self::new(a, b).ok()
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// The homogeneous form `Y^2 Z = X^3 + a X^2 Z + b X Z^2` (canonical sign).
    pub fn as_cubic(&self) -> &Cubic {
        &self.cubic
    }

    /// The neutral element `O = (0:1:0)`.
    pub fn origin() -> ProjPoint {
        ProjPoint::from_ints(0, 1, 0).expect("nonzero")
    }

    /// The point of order two `T = (0:0:1)`.
    pub fn two_torsion() -> ProjPoint {
        ProjPoint::from_ints(0, 0, 1).expect("nonzero")
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.cubic.contains(p)
    }

    fn ensure_on(&self, p: &ProjPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve(p.clone()))
        }
    }

    /// `-P = O # P`.
    pub fn neg(&self, p: &ProjPoint) -> Result<ProjPoint> {
        self.ensure_on(p)?;
        self.cubic.sharp(&Self::origin(), p)
    }

    /// `P + Q = -(P # Q)`.
    pub fn add(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
        self.ensure_on(p)?;
        self.ensure_on(q)?;
        let third = self.cubic.sharp(p, q)?;
        self.neg(&third)
    }

    pub fn sub(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
        self.add(p, &self.neg(q)?)
    }

    /// `n * P` by double-and-add; negative `n` multiplies `-P`.
    pub fn multiple(&self, n: i64, p: &ProjPoint) -> Result<ProjPoint> {
        self.ensure_on(p)?;
        let mut base = if n < 0 { self.neg(p)? } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Self::origin();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// The conjugate `P + T`.
    pub fn conjugate_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        self.add(p, &Self::two_torsion())
    }

    /// `P + T` from the closed form `(b/x, -y b/x^2)`, with `O <-> T`.
    pub fn conjugate_closed_form(&self, p: &ProjPoint) -> Result<ProjPoint> {
        self.ensure_on(p)?;
        let Some((x, y)) = p.to_affine() else {
            return Ok(Self::two_torsion());
        };
        if x.is_zero() {
            return Ok(Self::origin());
        }
        let bx = &self.b / &x;
        let y2 = -(&y * &bx) / &x;
        Ok(ProjPoint::affine(&bx, &y2))
    }
}

/// The curve `y^2 x = alpha + beta x + gamma x^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcChart {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
}

impl AbcChart {
    pub fn new(alpha: Rat, beta: Rat, gamma: Rat) -> Self {
        Self { alpha, beta, gamma }
    }

    /// `x y^2 - gamma x^2 z - beta x z^2 - alpha z^3`.
    pub fn as_cubic(&self) -> Result<Cubic> {
        Cubic::from_rats(&[
            Rat::zero(),
            Rat::zero(),
            -self.gamma.clone(),
            Rat::one(),
            Rat::zero(),
            -self.beta.clone(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            -self.alpha.clone(),
        ])
    }

    pub fn contains_affine(&self, x: &Rat, y: &Rat) -> bool {
        y * y * x == &self.alpha + &self.beta * x + &self.gamma * x * x
    }

    fn affine_on_chart(&self, p: &ProjPoint) -> Result<(Rat, Rat)> {
        let (x, y) = p.to_affine().ok_or_else(|| Error::NotAffine(p.clone()))?;
        if !self.contains_affine(&x, &y) {
            return Err(Error::OffChartCurve(p.clone()));
        }
        Ok((x, y))
    }
}

/// Projective map from a Weierstrass curve to its chart and back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartMap {
    forward: Mat3,
    backward: Mat3,
}

impl ChartMap {
    pub fn to_chart(&self, p: &ProjPoint) -> Result<ProjPoint> {
        apply_homography(&self.forward, p)
    }

    pub fn from_chart(&self, p: &ProjPoint) -> Result<ProjPoint> {
        apply_homography(&self.backward, p)
    }
}

/// Moves the affine point `(r0, r1)` of `w` to `(1, 1)`: scale
/// `(X, Y, Z) -> (X/r0, Y/r1, Z)`, swap `X` and `Z`, dehomogenize.
pub fn to_abc_chart(w: &WeierstrassCurve, base: &ProjPoint) -> Result<(AbcChart, ChartMap)> {
    if !w.contains(base) {
        return Err(Error::NotOnCurve(base.clone()));
    }
    let (r0, r1) = base.to_affine().ok_or(Error::BasePointDegenerate)?;
    if r0.is_zero() || r1.is_zero() {
        return Err(Error::BasePointDegenerate);
    }
    let r1_sq = &r1 * &r1;
    let chart = AbcChart {
        alpha: &r0 * &r0 * &r0 / &r1_sq,
        beta: w.a() * &r0 * &r0 / &r1_sq,
        gamma: w.b() * &r0 / &r1_sq,
    };
    let zero = Rat::zero;
    let forward = Mat3([
        [zero(), zero(), r0.clone()],
        [zero(), &r0 / &r1, zero()],
        [Rat::one(), zero(), zero()],
    ]);
    let backward = forward.inverse()?;
    Ok((chart, ChartMap { forward, backward }))
}

/// `P' = (alpha / (gamma x), -y)` on the chart.
pub fn chart_conjugate(chart: &AbcChart, p: &ProjPoint) -> Result<ProjPoint> {
    let (x, y) = chart.affine_on_chart(p)?;
    if x.is_zero() || chart.gamma.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(ProjPoint::affine(&(&chart.alpha / (&chart.gamma * &x)), &(-y)))
}

/// Signed distances along `x = 0` from the center `(0, y0)` to the lines
/// `AP` and `AP'`, and their product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterProduct {
    pub center: ProjPoint,
    pub s_p: Rat,
    pub s_p_bar: Rat,
    pub product: Rat,
}

pub fn lemma8_center_product(chart: &AbcChart, a: &ProjPoint, p: &ProjPoint) -> Result<CenterProduct> {
    let (x0, y0) = chart.affine_on_chart(a)?;
    let (x1, y1) = chart.affine_on_chart(p)?;
    let p_bar = chart_conjugate(chart, p)?;
    let (x2, y2) = p_bar.to_affine().ok_or(Error::ZeroDenominator)?;
    // vertical lines never reach x = 0; horizontal ones run through the center
    if x1 == x0 || x2 == x0 || y1 == y0 || y2 == y0 {
        return Err(Error::DegenerateDirection);
    }
    let s_p = -(&x0 * (&y1 - &y0)) / (&x1 - &x0);
    let s_p_bar = -(&x0 * (&y2 - &y0)) / (&x2 - &x0);
    let product = &s_p * &s_p_bar;
    Ok(CenterProduct { center: ProjPoint::affine(&Rat::zero(), &y0), s_p, s_p_bar, product })
}

/// A seed on `w` with partners `A' = A + T`, `B' = B + T`, `C' = C + T`.
pub fn seed_from_curve(w: &WeierstrassCurve, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<SeedConfig> {
    let mut pairs = Vec::with_capacity(3);
    for p in [a, b, c] {
        if p.is_at_infinity() {
            return Err(Error::NotAffine(p.clone()));
        }
        let partner = w.conjugate_point(p)?;
        if partner.is_at_infinity() {
            return Err(Error::ConjugateAtInfinity(p.clone()));
        }
        pairs.push(PointPair::new(p.clone(), partner)?);
    }
    let [pa, pb, pc]: [PointPair; 3] = pairs.try_into().expect("three pairs");
    SeedConfig::with_curve(pa, pb, pc, w.as_cubic().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z).unwrap()
    }
    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }
    fn aff(x: Rat, y: Rat) -> ProjPoint {
        ProjPoint::affine(&x, &y)
    }

    #[test]
    fn singular_curves_rejected() {
        assert_eq!(WeierstrassCurve::from_ints(1, 0), Err(Error::SingularCurve));
        assert_eq!(WeierstrassCurve::from_ints(4, 4), Err(Error::SingularCurve));
    }

    #[test]
    fn homogeneous_form() {
        let w = WeierstrassCurve::from_ints(1, 2).unwrap();
        assert_eq!(w.as_cubic(), &Cubic::from_ints([1, 0, 1, 0, 0, 2, 0, -1, 0, 0]).unwrap());
        assert!(w.contains(&WeierstrassCurve::origin()));
        assert!(w.contains(&WeierstrassCurve::two_torsion()));
    }

    #[test]
    fn recognizes_weierstrass_shape() {
        let w = WeierstrassCurve::new(rat(1, 3), rat(-5, 2)).unwrap();
        assert_eq!(WeierstrassCurve::recognize(w.as_cubic()), Some(w));
        let other = Cubic::from_ints([1, 0, 0, 0, 0, 0, 0, 0, -1, 0]).unwrap();
        assert_eq!(WeierstrassCurve::recognize(&other), None);
    }

    #[test]
    fn addition_examples() {
        let w = WeierstrassCurve::from_ints(1, 2).unwrap();
        let o = WeierstrassCurve::origin();
        let t = WeierstrassCurve::two_torsion();
        assert_eq!(w.add(&pt(1, 2, 1), &pt(2, 4, 1)).unwrap(), t);
        assert_eq!(w.add(&pt(1, 2, 1), &o).unwrap(), pt(1, 2, 1));
        assert_eq!(w.add(&t, &t).unwrap(), o);
        assert_eq!(w.neg(&pt(1, 2, 1)).unwrap(), pt(1, -2, 1));
        assert_eq!(w.add(&pt(1, 2, 1), &pt(1, 3, 1)), Err(Error::NotOnCurve(pt(1, 3, 1))));
    }

    #[test]
    fn conjugation() {
        let w = WeierstrassCurve::from_ints(1, 2).unwrap();
        assert_eq!(w.conjugate_point(&pt(1, 2, 1)).unwrap(), pt(2, -4, 1));
        assert_eq!(w.conjugate_point(&pt(32, -184, 1)).unwrap(), pt(4, 23, 64));
        assert_eq!(w.conjugate_closed_form(&pt(32, -184, 1)).unwrap(), pt(4, 23, 64));
        assert_eq!(w.conjugate_point(&WeierstrassCurve::origin()).unwrap(), WeierstrassCurve::two_torsion());
        let p = pt(4, 23, 64);
        assert_eq!(w.conjugate_point(&w.conjugate_point(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn chart_values() {
        let w = WeierstrassCurve::from_ints(1, 2).unwrap();
        let (chart, map) = to_abc_chart(&w, &pt(1, 2, 1)).unwrap();
        assert_eq!(chart, AbcChart::new(rat(1, 4), rat(1, 4), rat(1, 2)));
        assert_eq!(&chart.alpha + &chart.beta + &chart.gamma, Rat::one());
        assert_eq!(map.to_chart(&pt(1, 2, 1)).unwrap(), pt(1, 1, 1));
        assert_eq!(map.to_chart(&pt(2, 4, 1)).unwrap(), aff(rat(1, 2), rat(1, 1)));
        let image = map.to_chart(&pt(4, 23, 64)).unwrap();
        assert_eq!(image, aff(rat(16, 1), rat(23, 8)));
        assert!(chart.as_cubic().unwrap().contains(&image));
        assert_eq!(map.from_chart(&image).unwrap(), pt(4, 23, 64));
        assert_eq!(to_abc_chart(&w, &pt(0, 0, 1)).unwrap_err(), Error::BasePointDegenerate);
    }

    #[test]
    fn chart_conjugates() {
        let chart = AbcChart::new(rat(1, 4), rat(1, 4), rat(1, 2));
        let p = aff(rat(16, 1), rat(23, 8));
        let q = chart_conjugate(&chart, &p).unwrap();
        assert_eq!(q, aff(rat(1, 32), rat(-23, 8)));
        assert_eq!(chart_conjugate(&chart, &q).unwrap(), p);
        assert_eq!(chart_conjugate(&chart, &pt(1, 1, 1)).unwrap(), aff(rat(1, 2), rat(-1, 1)));
        assert_eq!(chart_conjugate(&chart, &pt(1, 2, 1)), Err(Error::OffChartCurve(pt(1, 2, 1))));
    }

    #[test]
    fn center_product_golden() {
        let chart = AbcChart::new(rat(1, 4), rat(1, 4), rat(1, 2));
        let r = lemma8_center_product(&chart, &pt(1, 1, 1), &aff(rat(16, 1), rat(23, 8))).unwrap();
        assert_eq!(r.center, pt(0, 1, 1));
        assert_eq!(r.s_p, rat(-1, 8));
        assert_eq!(r.s_p_bar, rat(-4, 1));
        assert_eq!(r.product, rat(1, 2));
        let degenerate = lemma8_center_product(&chart, &pt(1, 1, 1), &aff(rat(1, 2), rat(1, 1)));
        assert_eq!(degenerate, Err(Error::DegenerateDirection));
    }

    #[test]
    fn seeds_from_curves() {
        let w = WeierstrassCurve::from_ints(1, 2).unwrap();
        let seed = seed_from_curve(&w, &pt(1, 2, 1), &pt(2, 4, 1), &pt(4, 23, 64)).unwrap();
        let want = [
            PointPair::new(pt(1, 2, 1), pt(2, -4, 1)).unwrap(),
            PointPair::new(pt(2, 4, 1), pt(1, -2, 1)).unwrap(),
            PointPair::new(pt(4, 23, 64), pt(32, -184, 1)).unwrap(),
        ];
        assert_eq!(seed.pairs(), &want);

        let w = WeierstrassCurve::from_ints(5, 4).unwrap();
        let seed = seed_from_curve(&w, &pt(2, 6, 1), &pt(-2, 2, 1), &pt(-1, 0, 1)).unwrap();
        assert!(seed.pairs().contains(&PointPair::new(pt(-1, 0, 1), pt(-4, 0, 1)).unwrap()));
        assert!(seed.is_quadrilateral());

        let w = WeierstrassCurve::from_ints(1, 2).unwrap();
        let t = seed_from_curve(&w, &pt(0, 0, 1), &pt(2, 4, 1), &pt(4, 23, 64));
        assert_eq!(t, Err(Error::ConjugateAtInfinity(pt(0, 0, 1))));
        let off = seed_from_curve(&w, &pt(1, 3, 1), &pt(2, 4, 1), &pt(4, 23, 64));
        assert_eq!(off, Err(Error::NotOnCurve(pt(1, 3, 1))));
    }
}
