//! The pair-combination worklist.
//!
//! Starting from three seed pairs, every two pairs `{P, P'}` and `{Q, Q'}`
//! produce `S = PQ ^ P'Q'` and `S' = PQ' ^ P'Q`. Rounds are breadth-first:
//! each round combines every newly found pair with every known pair once,
//! collects the children, and admits them in canonical order. Admission
//! order never depends on evaluation order, so capped runs are reproducible.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cubic::{fit_cubic, fit_cubic_9, Cubic};
use crate::error::{Error, Result};
use crate::involution::is_complete_quadrilateral_pairing;
use crate::projective::{collinear, join, meet, ProjLine, ProjPoint};

pub const DEFAULT_MAX_POINTS: usize = 512;
pub const DEFAULT_MAX_GENERATIONS: usize = 16;

/// An unordered pair of distinct points, stored in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointPair {
    first: ProjPoint,
    second: ProjPoint,
}

impl PointPair {
    pub fn new(p: ProjPoint, q: ProjPoint) -> Result<Self> {
        match p.cmp(&q) {
            std::cmp::Ordering::Less => Ok(Self { first: p, second: q }),
            std::cmp::Ordering::Greater => Ok(Self { first: q, second: p }),
            std::cmp::Ordering::Equal => Err(Error::DuplicatePoints),
        }
    }

    pub fn first(&self) -> &ProjPoint {
        &self.first
    }

    pub fn second(&self) -> &ProjPoint {
        &self.second
    }

    pub fn members(&self) -> [&ProjPoint; 2] {
        [&self.first, &self.second]
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.first == *p || self.second == *p
    }

    /// The partner of `p`, if `p` belongs to the pair.
    pub fn partner(&self, p: &ProjPoint) -> Option<&ProjPoint> {
        if self.first == *p {
            Some(&self.second)
        } else if self.second == *p {
            Some(&self.first)
        } else {
            None
        }
    }
}

impl fmt::Debug for PointPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.first, self.second)
    }
}

/// Result of one combination, with the four lines that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub s: ProjPoint,
    pub s_bar: ProjPoint,
    /// `PQ`, `P'Q'` (meeting in `S`) and `PQ'`, `P'Q` (meeting in `S'`).
    pub lines: [ProjLine; 4],
}

/// `S = PQ ^ P'Q'`, `S' = PQ' ^ P'Q` for oriented pairs.
pub fn combine_oriented(
    p: &ProjPoint,
    p_bar: &ProjPoint,
    q: &ProjPoint,
    q_bar: &ProjPoint,
) -> Result<Combination> {
    let four = [p, p_bar, q, q_bar];
    for i in 0..4 {
        for j in i + 1..4 {
            if four[i] == four[j] {
                return Err(Error::SharedPoint);
            }
        }
    }
    let degenerate = |_| Error::DegenerateLines;
    let pq = join(p, q).map_err(degenerate)?;
    let pq_bars = join(p_bar, q_bar).map_err(degenerate)?;
    let pq_bar = join(p, q_bar).map_err(degenerate)?;
    let p_bar_q = join(p_bar, q).map_err(degenerate)?;
    let s = meet(&pq, &pq_bars).map_err(degenerate)?;
    let s_bar = meet(&pq_bar, &p_bar_q).map_err(degenerate)?;
    if s == s_bar {
        return Err(Error::DegenerateLines);
    }
    Ok(Combination { s, s_bar, lines: [pq, pq_bars, pq_bar, p_bar_q] })
}

pub fn combine(p: &PointPair, q: &PointPair) -> Result<PointPair> {
    let c = combine_oriented(&p.first, &p.second, &q.first, &q.second)?;
    PointPair::new(c.s, c.s_bar)
}

/// Three seed pairs that passed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedConfig {
    pairs: [PointPair; 3],
    curve: Option<Cubic>,
    quadrilateral: bool,
}

impl SeedConfig {
    pub fn pairs(&self) -> &[PointPair; 3] {
        &self.pairs
    }

    /// The curve supplied with the seed, if any.
    pub fn curve(&self) -> Option<&Cubic> {
        self.curve.as_ref()
    }

    /// Whether the pairs form a complete quadrilateral (only possible for
    /// seeds carrying their own curve).
    pub fn is_quadrilateral(&self) -> bool {
        self.quadrilateral
    }

    /// Seed on a known cubic. The six points must be distinct, on the
    /// curve, and no four collinear; a complete-quadrilateral pairing is
    /// accepted because the curve does not have to be recovered from the
    /// construction.
    pub fn with_curve(pair_a: PointPair, pair_b: PointPair, pair_c: PointPair, curve: Cubic) -> Result<Self> {
        let pairs = [pair_a, pair_b, pair_c];
        check_distinct_and_collinearity(&pairs)?;
        for p in pairs.iter().flat_map(PointPair::members) {
            if !curve.contains(p) {
                return Err(Error::NotOnCurve(p.clone()));
            }
        }
        let quadrilateral = quadrilateral(&pairs)?;
        Ok(Self { pairs, curve: Some(curve), quadrilateral })
    }

    /// Skips every check. Exists so tests can push degenerate
    /// configurations through the engine.
    #[doc(hidden)]
    pub fn unchecked(pairs: [PointPair; 3], curve: Option<Cubic>) -> Self {
        Self { pairs, curve, quadrilateral: false }
    }
}

fn quadrilateral(pairs: &[PointPair; 3]) -> Result<bool> {
    let [a, b, c] = pairs;
    is_complete_quadrilateral_pairing(
        (&a.first, &a.second),
        (&b.first, &b.second),
        (&c.first, &c.second),
    )
}

fn check_distinct_and_collinearity(pairs: &[PointPair; 3]) -> Result<()> {
    let six: Vec<&ProjPoint> = pairs.iter().flat_map(PointPair::members).collect();
    for i in 0..6 {
        for j in i + 1..6 {
            if six[i] == six[j] {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                if !collinear(six[i], six[j], six[k]) {
                    continue;
                }
                for l in k + 1..6 {
                    if collinear(six[i], six[j], six[l]) {
                        let quad = [six[i], six[j], six[k], six[l]].map(Clone::clone);
                        return Err(Error::FourCollinear(quad));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Checks distinctness, all fifteen quadruples for collinearity, and the
/// complete-quadrilateral condition.
pub fn validate_seed(pair_a: PointPair, pair_b: PointPair, pair_c: PointPair) -> Result<SeedConfig> {
    let pairs = [pair_a, pair_b, pair_c];
    check_distinct_and_collinearity(&pairs)?;
    if quadrilateral(&pairs)? {
        return Err(Error::CompleteQuadrilateral);
    }
    Ok(SeedConfig { pairs, curve: None, quadrilateral: false })
}

/// Where the cubic of a run came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSource {
    /// Fitted through `A, A', B, B', C, C', D, E, F`.
    NinePoints,
    /// The nine points collide; fitted through the distinct points among
    /// all twelve, which still determine a unique cubic.
    TwelvePoints,
    /// Supplied with the seed.
    Seed,
}

/// The bootstrap points `D, E, F` with their partners, and the cubic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedPoints {
    pub d: Combination,
    pub e: Combination,
    pub f: Combination,
    pub curve: Cubic,
    pub source: CurveSource,
}

impl DerivedPoints {
    pub fn pairs(&self) -> Result<[PointPair; 3]> {
        Ok([
            PointPair::new(self.d.s.clone(), self.d.s_bar.clone())?,
            PointPair::new(self.e.s.clone(), self.e.s_bar.clone())?,
            PointPair::new(self.f.s.clone(), self.f.s_bar.clone())?,
        ])
    }

    /// `A, A', B, B', C, C', D, E, F`.
    pub fn nine_points(&self, seed: &SeedConfig) -> Vec<ProjPoint> {
        nine_points(seed, [&self.d.s, &self.e.s, &self.f.s])
    }
}

fn nine_points(seed: &SeedConfig, def: [&ProjPoint; 3]) -> Vec<ProjPoint> {
    let mut pts: Vec<ProjPoint> =
        seed.pairs.iter().flat_map(|p| [p.first.clone(), p.second.clone()]).collect();
    pts.extend(def.map(Clone::clone));
    pts
}

/// `D = AB ^ A'B'`, `E = BC ^ B'C'`, `F = CA ^ C'A'` and their partners
/// `D' = AB' ^ A'B`, `E' = BC' ^ B'C`, `F' = CA' ^ C'A`, plus the cubic
/// through the nine points `A, A', B, B', C, C', D, E, F`.
///
/// Seeds with their own curve skip the fit; all twelve points are then
/// checked against the supplied curve instead.
pub fn derive_def(seed: &SeedConfig) -> Result<DerivedPoints> {
    let [a, b, c] = &seed.pairs;
    let combine_seed = |p: &PointPair, q: &PointPair| {
        combine_oriented(&p.first, &p.second, &q.first, &q.second).map_err(|_| Error::DegenerateNine)
    };
    let d = combine_seed(a, b)?;
    let e = combine_seed(b, c)?;
    let f = combine_seed(c, a)?;
    let (curve, source) = match &seed.curve {
        Some(curve) => {
            for p in [&d.s, &e.s, &f.s] {
                if !curve.contains(p) {
                    return Err(Error::InvariantViolation(format!("derived point {p} is off the seed curve")));
                }
            }
            (curve.clone(), CurveSource::Seed)
        }
        None => {
            let nine = nine_points(seed, [&d.s, &e.s, &f.s]);
            let distinct = (0..9).all(|i| (i + 1..9).all(|j| nine[i] != nine[j]));
            if distinct {
                (fit_cubic_9(&nine)?, CurveSource::NinePoints)
            } else {
                let mut twelve = nine;
                twelve.extend([d.s_bar.clone(), e.s_bar.clone(), f.s_bar.clone()]);
                twelve.sort();
                twelve.dedup();
                if twelve.len() < 9 {
                    return Err(Error::DegenerateNine);
                }
                let curve = fit_cubic(&twelve).map_err(|e| match e {
                    Error::OverconstrainedFit => Error::DegenerateNine,
                    other => other,
                })?;
                (curve, CurveSource::TwelvePoints)
            }
        }
    };
    for p in [&d.s_bar, &e.s_bar, &f.s_bar] {
        if !curve.contains(p) {
            return Err(Error::BarNotOnCurve(p.clone()));
        }
    }
    Ok(DerivedPoints { d, e, f, curve, source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_points: usize,
    pub max_generations: usize,
    /// Shuffles the evaluation order inside each round. The result must
    /// not depend on it.
    pub shuffle: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { max_points: DEFAULT_MAX_POINTS, max_generations: DEFAULT_MAX_GENERATIONS, shuffle: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Seed,
    Derived { parents: (PointPair, PointPair), lines: [ProjLine; 4] },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub generation: usize,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedCombination {
    pub parents: (PointPair, PointPair),
    pub reason: Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionState {
    curve: Cubic,
    pairs: BTreeMap<PointPair, PairRecord>,
    skipped: Vec<SkippedCombination>,
    closed: bool,
    generation: usize,
    duplicate_children: usize,
}

impl ConstructionState {
    /// Rebuilds a state from stored data (for re-verification). The
    /// parents of every derivation must be listed among `pairs`.
    pub fn from_parts(
        curve: Cubic,
        pairs: BTreeMap<PointPair, PairRecord>,
        skipped: Vec<SkippedCombination>,
        closed: bool,
        generation: usize,
    ) -> Self {
        Self { curve, pairs, skipped, closed, generation, duplicate_children: 0 }
    }

    pub fn curve(&self) -> &Cubic {
        &self.curve
    }

    /// Pairs in canonical order.
    pub fn pairs(&self) -> impl Iterator<Item = (&PointPair, &PairRecord)> {
        self.pairs.iter()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn point_count(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn points(&self) -> impl Iterator<Item = &ProjPoint> {
        self.pairs.keys().flat_map(PointPair::members)
    }

    pub fn skipped(&self) -> &[SkippedCombination] {
        &self.skipped
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    /// How many computed children coincided with an already known pair.
    pub fn duplicate_children(&self) -> usize {
        self.duplicate_children
    }

    /// Re-checks the stored state: every point on the curve, no point shared
    /// between pairs, every derivation reproducible from older parents.
    pub fn check_invariants(&self) -> Result<()> {
        let mut owner: HashMap<&ProjPoint, &PointPair> = HashMap::new();
        for (pair, record) in &self.pairs {
            for p in pair.members() {
                if !self.curve.contains(p) {
                    return Err(Error::InvariantViolation(format!("point {p} is off the curve")));
                }
                if let Some(other) = owner.insert(p, pair) {
                    return Err(Error::InvariantViolation(format!(
                        "point {p} belongs to both {other:?} and {pair:?}"
                    )));
                }
            }
            if let Origin::Derived { parents: (x, y), .. } = &record.origin {
                let older = |q: &PointPair| {
                    self.pairs.get(q).map_or(false, |r| r.generation < record.generation)
                };
                if !older(x) || !older(y) {
                    return Err(Error::InvariantViolation(format!(
                        "derivation of {pair:?} does not come from older pairs"
                    )));
                }
                if combine(x, y).as_ref() != Ok(pair) {
                    return Err(Error::InvariantViolation(format!(
                        "derivation of {pair:?} does not reproduce"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Breadth-first construction from a validated seed.
pub fn run(seed: &SeedConfig, options: RunOptions) -> Result<ConstructionState> {
    let derived = derive_def(seed)?;
    let curve = derived.curve.clone();

    let mut pairs: BTreeMap<PointPair, PairRecord> = BTreeMap::new();
    let mut owner: HashMap<ProjPoint, PointPair> = HashMap::new();
    let mut order: Vec<PointPair> = Vec::new();
    let mut duplicate_children = 0;

    let mut admit = |pair: PointPair,
                     record: PairRecord,
                     pairs: &mut BTreeMap<PointPair, PairRecord>,
                     order: &mut Vec<PointPair>|
     -> Result<bool> {
        if pairs.contains_key(&pair) {
            return Ok(false);
        }
        for p in pair.members() {
            if !curve.contains(p) {
                return Err(Error::InvariantViolation(format!("constructed point {p} is off the curve")));
            }
            if let Some(other) = owner.get(p) {
                return Err(Error::InvariantViolation(format!(
                    "new pair {pair:?} shares {p} with {other:?}"
                )));
            }
        }
        for p in pair.members() {
            owner.insert(p.clone(), pair.clone());
        }
        pairs.insert(pair.clone(), record);
        order.push(pair);
        Ok(true)
    };

    for pair in &seed.pairs {
        admit(pair.clone(), PairRecord { generation: 0, origin: Origin::Seed }, &mut pairs, &mut order)?;
    }
    let [a, b, c] = &seed.pairs;
    let bootstrap = [(a, b, &derived.d), (b, c, &derived.e), (c, a, &derived.f)];
    let mut def_children: BTreeMap<PointPair, PairRecord> = BTreeMap::new();
    for (x, y, comb) in bootstrap {
        let child = PointPair::new(comb.s.clone(), comb.s_bar.clone())?;
        let record = PairRecord {
            generation: 1,
            origin: Origin::Derived { parents: ordered(x, y), lines: comb.lines.clone() },
        };
        def_children.entry(child).or_insert(record);
    }
    for (child, record) in def_children {
        if !admit(child, record, &mut pairs, &mut order)? {
            duplicate_children += 1;
        }
    }

    let mut skipped = Vec::new();
    let mut generation = 1;
    // seed-seed combinations were done by the bootstrap
    let mut frontier_start = seed.pairs.len();
    let mut capped = false;
    let mut rng = options.shuffle.map(ChaCha8Rng::seed_from_u64);

    while frontier_start < order.len() {
        if generation >= options.max_generations {
            capped = true;
            break;
        }
        generation += 1;
        let existing = order.len();
        // canonical work order: each new pair against every older one
        let work: Vec<(usize, usize)> =
            (frontier_start..existing).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let attempt = |&(i, j): &(usize, usize)| {
            let parents = ordered(&order[i], &order[j]);
            let comb = combine_oriented(&parents.0.first, &parents.0.second, &parents.1.first, &parents.1.second);
            (parents, comb)
        };
        // Shuffled runs evaluate everything in random order and then replay
        // the results in canonical order; plain runs evaluate lazily so the
        // round can stop as soon as the cap is hit.
        let mut precomputed = rng.as_mut().map(|rng| {
            let mut idx: Vec<usize> = (0..work.len()).collect();
            idx.shuffle(rng);
            let mut results: Vec<Option<_>> = (0..work.len()).map(|_| None).collect();
            for k in idx {
                results[k] = Some(attempt(&work[k]));
            }
            results.into_iter().map(|r| r.expect("every item evaluated"))
        });
        let mut admitted = Vec::new();
        for item in &work {
            let (parents, comb) = match precomputed.as_mut() {
                Some(results) => results.next().expect("one result per item"),
                None => attempt(item),
            };
            let comb = match comb {
                Ok(comb) => comb,
                Err(reason @ (Error::SharedPoint | Error::DegenerateLines)) => {
                    skipped.push(SkippedCombination { parents, reason });
                    continue;
                }
                Err(e) => return Err(e),
            };
            let child = PointPair::new(comb.s, comb.s_bar)?;
            if pairs.contains_key(&child) {
                duplicate_children += 1;
                continue;
            }
            if 2 * (pairs.len() + 1) > options.max_points {
                capped = true;
                break;
            }
            let record = PairRecord { generation, origin: Origin::Derived { parents, lines: comb.lines } };
            admit(child.clone(), record, &mut pairs, &mut admitted)?;
        }
        order.extend(admitted);
        frontier_start = existing;
        if capped {
            break;
        }
    }
    skipped.sort_by(|x, y| x.parents.cmp(&y.parents));

    Ok(ConstructionState {
        curve,
        pairs,
        skipped,
        closed: !capped,
        generation,
        duplicate_children,
    })
}

fn ordered(x: &PointPair, y: &PointPair) -> (PointPair, PointPair) {
    if x <= y {
        (x.clone(), y.clone())
    } else {
        (y.clone(), x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z).unwrap()
    }
    fn pair(p: ProjPoint, q: ProjPoint) -> PointPair {
        PointPair::new(p, q).unwrap()
    }
    fn frame_seed() -> [PointPair; 3] {
        [
            pair(pt(0, 0, 1), pt(0, 1, 0)),
            pair(pt(1, 0, 0), pt(1, 1, 1)),
            pair(pt(2, 3, 1), pt(5, 1, 1)),
        ]
    }

    #[test]
    fn pair_is_unordered() {
        assert_eq!(pair(pt(1, 0, 0), pt(0, 1, 0)), pair(pt(0, 1, 0), pt(1, 0, 0)));
        assert_eq!(PointPair::new(pt(1, 0, 0), pt(2, 0, 0)), Err(Error::DuplicatePoints));
    }

    #[test]
    fn combine_examples() {
        let p = pair(pt(2, 6, 1), pt(2, -6, 1));
        let q = pair(pt(-2, 2, 1), pt(-2, -2, 1));
        assert_eq!(combine(&p, &q).unwrap(), pair(pt(-4, 0, 1), pt(-1, 0, 1)));
        let [a, b, _] = frame_seed();
        assert_eq!(combine(&a, &b).unwrap(), pair(pt(1, 0, 1), pt(1, 1, 0)));
        assert_eq!(combine(&a, &a), Err(Error::SharedPoint));
        // all four points on one line
        let l1 = pair(pt(0, 0, 1), pt(1, 0, 1));
        let l2 = pair(pt(2, 0, 1), pt(3, 0, 1));
        assert_eq!(combine(&l1, &l2), Err(Error::DegenerateLines));
    }

    #[test]
    fn seed_validation() {
        let [a, b, c] = frame_seed();
        assert!(validate_seed(a.clone(), b.clone(), c).is_ok());
        let quad = validate_seed(
            pair(pt(0, 0, 1), pt(2, -1, 1)),
            pair(pt(1, 0, 1), pt(0, 1, 0)),
            pair(pt(2, 0, 1), pt(0, 1, 1)),
        );
        assert_eq!(quad, Err(Error::CompleteQuadrilateral));
        let dup = validate_seed(a.clone(), b.clone(), pair(pt(0, 0, 1), pt(7, 7, 1)));
        assert_eq!(dup, Err(Error::DuplicatePoints));
        let four = validate_seed(
            pair(pt(0, 0, 1), pt(1, 0, 1)),
            pair(pt(2, 0, 1), pt(0, 1, 1)),
            pair(pt(3, 0, 1), pt(1, 5, 1)),
        );
        assert!(matches!(four, Err(Error::FourCollinear(_))));
    }

    #[test]
    fn frame_bootstrap() {
        let [a, b, c] = frame_seed();
        let seed = validate_seed(a, b, c).unwrap();
        let derived = derive_def(&seed).unwrap();
        // B, B', C' are collinear, so E collapses onto B
        assert_eq!(derived.source, CurveSource::TwelvePoints);
        assert_eq!(derived.e.s, pt(1, 0, 0));
        assert_eq!(derived.d.s, pt(1, 0, 1));
        assert_eq!(derived.d.s_bar, pt(1, 1, 0));
        for p in [&derived.d.s_bar, &derived.e.s_bar, &derived.f.s_bar] {
            assert!(derived.curve.contains(p));
        }
    }

    #[test]
    fn capped_frame_run() {
        let [a, b, c] = frame_seed();
        let seed = validate_seed(a, b, c).unwrap();
        let state = run(&seed, RunOptions { max_points: 100, ..RunOptions::default() }).unwrap();
        assert_eq!(state.point_count(), 100);
        assert!(!state.closed());
        assert!(state.points().all(|p| state.curve().contains(p)));
        state.check_invariants().unwrap();
    }

    #[test]
    fn quadrilateral_gives_nothing_new() {
        let pairs = [
            pair(pt(0, 0, 1), pt(2, -1, 1)),
            pair(pt(1, 0, 1), pt(0, 1, 0)),
            pair(pt(2, 0, 1), pt(0, 1, 1)),
        ];
        let seed = SeedConfig::unchecked(pairs.clone(), None);
        let six: Vec<&ProjPoint> = seed.pairs().iter().flat_map(PointPair::members).collect();
        for i in 0..3 {
            for j in i + 1..3 {
                let child = combine(&pairs[i], &pairs[j]).unwrap();
                assert!(child.members().iter().all(|p| six.contains(p)));
            }
        }
    }
}
