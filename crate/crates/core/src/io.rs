//! Text formats: rationals, inline point lists, seed/curve/run JSON and CSV.
//!
//! Every number is written as a decimal string (`"p"` or `"p/q"`). Readers
//! also accept JSON integers.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cubic::Cubic;
use crate::engine::{
    combine_oriented, validate_seed, ConstructionState, Origin, PairRecord, PointPair, SeedConfig,
    SkippedCombination,
};
use crate::error::{Error, Result};
use crate::projective::{ProjPoint, Rat};
use crate::weierstrass::WeierstrassCurve;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses `"p"` or `"p/q"` with optional surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let t = s.trim();
    if t.is_empty() {
        return Err(parse_err("empty number"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let int = |x: &str| BigInt::from_str(x).map_err(|_| parse_err(format!("invalid number {t:?}")));
    let n = int(num)?;
    match den {
        None => Ok(Rat::from_integer(n)),
        Some(d) => {
            let d = int(d)?;
            if d == BigInt::from(0) {
                return Err(parse_err(format!("zero denominator in {t:?}")));
            }
            Ok(Rat::new(n, d))
        }
    }
}

pub fn format_rational(r: &Rat) -> String {
    r.to_string()
}

fn point_from_rats(coords: &[Rat]) -> Result<ProjPoint> {
    match coords {
        [x, y] => Ok(ProjPoint::affine(x, y)),
        [x, y, z] => ProjPoint::from_rats(x, y, z),
        _ => Err(parse_err(format!("a point needs 2 or 3 coordinates, got {}", coords.len()))),
    }
}

/// Parses `"x,y;x,y;..."`; an entry with three numbers is homogeneous.
pub fn parse_points(s: &str) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for (i, entry) in s.split(';').enumerate() {
        if entry.trim().is_empty() {
            if i > 0 && s.trim_end().ends_with(';') {
                continue;
            }
            return Err(parse_err(format!("empty point entry {}", i + 1)));
        }
        let coords = entry.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        out.push(point_from_rats(&coords)?);
    }
    Ok(out)
}

/// A number in a JSON file: a string holding a rational, or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Int(i64),
}

impl Num {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            Num::Text(s) => parse_rational(s),
            Num::Int(i) => Ok(Rat::from_integer((*i).into())),
        }
    }
}

impl From<&Rat> for Num {
    fn from(r: &Rat) -> Self {
        Num::Text(format_rational(r))
    }
}

impl From<&BigInt> for Num {
    fn from(i: &BigInt) -> Self {
        Num::Text(i.to_string())
    }
}

fn point_from_nums(nums: &[Num]) -> Result<ProjPoint> {
    let coords = nums.iter().map(Num::to_rat).collect::<Result<Vec<_>>>()?;
    point_from_rats(&coords)
}

/// Affine points as `[x, y]`, points at infinity as `[x, y, z]`.
fn point_to_nums(p: &ProjPoint) -> Vec<Num> {
    match p.to_affine() {
        Some((x, y)) => vec![(&x).into(), (&y).into()],
        None => p.coords().iter().map(Num::from).collect(),
    }
}

fn homogeneous_nums(p: &ProjPoint) -> Vec<Num> {
    p.coords().iter().map(Num::from).collect()
}

/// Accepts either a JSON array of points or the inline `"x,y;..."` syntax.
pub fn parse_point_list(text: &str) -> Result<Vec<ProjPoint>> {
    if text.trim_start().starts_with('[') {
        let raw: Vec<Vec<Num>> = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        raw.iter().map(|p| point_from_nums(p)).collect()
    } else {
        parse_points(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub a: Num,
    pub b: Num,
}

impl CurveFile {
    pub fn to_curve(&self) -> Result<WeierstrassCurve> {
        WeierstrassCurve::new(self.a.to_rat()?, self.b.to_rat()?)
    }

    pub fn from_curve(w: &WeierstrassCurve) -> Self {
        Self { a: w.a().into(), b: w.b().into() }
    }
}

/// Parses `{"a": "...", "b": "..."}`.
pub fn parse_curve_json(text: &str) -> Result<WeierstrassCurve> {
    let file: CurveFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    file.to_curve()
}

fn cubic_from_nums(nums: &[Num]) -> Result<Cubic> {
    let coeffs = nums.iter().map(Num::to_rat).collect::<Result<Vec<_>>>()?;
    let coeffs: [Rat; 10] = coeffs
        .try_into()
        .map_err(|v: Vec<Rat>| parse_err(format!("a cubic needs 10 coefficients, got {}", v.len())))?;
    Cubic::from_rats(&coeffs)
}

fn cubic_to_nums(c: &Cubic) -> Vec<Num> {
    c.coeffs().iter().map(Num::from).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedFile {
    pub pairs: Vec<[Vec<Num>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weierstrass: Option<CurveFile>,
}

/// A validated seed, with the Weierstrass model when one is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedSeed {
    pub seed: SeedConfig,
    pub weierstrass: Option<WeierstrassCurve>,
}

impl LoadedSeed {
    pub fn new(seed: SeedConfig) -> Self {
        let weierstrass = seed.curve().and_then(WeierstrassCurve::recognize);
        Self { seed, weierstrass }
    }
}

/// Parses and validates a seed file. Seeds that carry a curve may pair
/// their points as opposite vertices of a complete quadrilateral.
pub fn parse_seed(text: &str) -> Result<LoadedSeed> {
    let file: SeedFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    if file.pairs.len() != 3 {
        return Err(parse_err(format!("a seed needs 3 pairs, got {}", file.pairs.len())));
    }
    let mut pairs = Vec::with_capacity(3);
    for [p, q] in &file.pairs {
        pairs.push(PointPair::new(point_from_nums(p)?, point_from_nums(q)?)?);
    }
    let [a, b, c]: [PointPair; 3] = pairs.try_into().expect("three pairs");
    let from_w = file.weierstrass.as_ref().map(CurveFile::to_curve).transpose()?;
    let explicit = file.curve.as_deref().map(cubic_from_nums).transpose()?;
    let curve = match (&from_w, explicit) {
        (Some(w), Some(c)) if w.as_cubic() != &c => {
            return Err(parse_err("\"curve\" and \"weierstrass\" describe different curves"));
        }
        (Some(w), _) => Some(w.as_cubic().clone()),
        (None, c) => c,
    };
    let seed = match curve {
        Some(curve) => SeedConfig::with_curve(a, b, c, curve)?,
        None => validate_seed(a, b, c)?,
    };
    Ok(LoadedSeed::new(seed))
}

pub fn seed_to_file(seed: &LoadedSeed) -> SeedFile {
    let pairs = seed
        .seed
        .pairs()
        .iter()
        .map(|p| [point_to_nums(p.first()), point_to_nums(p.second())])
        .collect();
    SeedFile {
        pairs,
        curve: seed.seed.curve().map(cubic_to_nums),
        weierstrass: seed.weierstrass.as_ref().map(CurveFile::from_curve),
    }
}

pub fn format_seed(seed: &LoadedSeed) -> String {
    let mut s = serde_json::to_string_pretty(&seed_to_file(seed)).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub id: usize,
    pub points: [Vec<Num>; 2],
    pub generation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parents: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkippedEntry {
    pub parents: [usize; 2],
    pub reason: String,
}

/// Output of a construction run. Pairs are listed in canonical order and
/// refer to their parents by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub curve: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weierstrass: Option<CurveFile>,
    pub closed: bool,
    pub generations: usize,
    pub pair_count: usize,
    pub point_count: usize,
    pub pairs: Vec<PairEntry>,
    pub skipped: Vec<SkippedEntry>,
}

fn reason_code(e: &Error) -> &'static str {
    match e {
        Error::SharedPoint => "shared-point",
        Error::DegenerateLines => "degenerate-lines",
        _ => "other",
    }
}

fn reason_from_code(code: &str) -> Result<Error> {
    match code {
        "shared-point" => Ok(Error::SharedPoint),
        "degenerate-lines" => Ok(Error::DegenerateLines),
        _ => Err(parse_err(format!("unknown skip reason {code:?}"))),
    }
}

pub fn run_to_file(state: &ConstructionState, weierstrass: Option<&WeierstrassCurve>) -> RunFile {
    let index: HashMap<&PointPair, usize> = state.pairs().enumerate().map(|(i, (p, _))| (p, i)).collect();
    let ids = |(x, y): &(PointPair, PointPair)| [index[x], index[y]];
    let pairs = state
        .pairs()
        .enumerate()
        .map(|(id, (pair, record))| PairEntry {
            id,
            points: [homogeneous_nums(pair.first()), homogeneous_nums(pair.second())],
            generation: record.generation,
            parents: match &record.origin {
                Origin::Seed => None,
                Origin::Derived { parents, .. } => Some(ids(parents)),
            },
        })
        .collect();
    let skipped = state
        .skipped()
        .iter()
        .map(|s| SkippedEntry { parents: ids(&s.parents), reason: reason_code(&s.reason).into() })
        .collect();
    RunFile {
        curve: cubic_to_nums(state.curve()),
        weierstrass: weierstrass.map(CurveFile::from_curve),
        closed: state.closed(),
        generations: state.generation(),
        pair_count: state.pair_count(),
        point_count: state.point_count(),
        pairs,
        skipped,
    }
}

pub fn format_run(state: &ConstructionState, weierstrass: Option<&WeierstrassCurve>) -> String {
    let mut s = serde_json::to_string_pretty(&run_to_file(state, weierstrass)).expect("serializable");
    s.push('\n');
    s
}

/// A run read back from disk. Its invariants are not checked yet.
#[derive(Debug, Clone)]
pub struct LoadedRun {
    pub state: ConstructionState,
    pub weierstrass: Option<WeierstrassCurve>,
}

/// Reads a run file. Structural problems are parse errors; derivations that
/// cannot be replayed are invariant violations.
pub fn parse_run(text: &str) -> Result<LoadedRun> {
    let file: RunFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let curve = cubic_from_nums(&file.curve)?;
    let weierstrass = match &file.weierstrass {
        Some(w) => {
            let w = w.to_curve()?;
            if w.as_cubic() != &curve {
                return Err(parse_err("\"curve\" and \"weierstrass\" describe different curves"));
            }
            Some(w)
        }
        None => WeierstrassCurve::recognize(&curve),
    };
    if file.pair_count != file.pairs.len() || file.point_count != 2 * file.pairs.len() {
        return Err(Error::InvariantViolation(format!(
            "counts ({} pairs, {} points) disagree with {} listed pairs",
            file.pair_count,
            file.point_count,
            file.pairs.len()
        )));
    }
    let mut listed = Vec::with_capacity(file.pairs.len());
    for (i, entry) in file.pairs.iter().enumerate() {
        if entry.id != i {
            return Err(parse_err(format!("pair at position {i} has id {}", entry.id)));
        }
        let [p, q] = &entry.points;
        listed.push(PointPair::new(point_from_nums(p)?, point_from_nums(q)?)?);
    }
    let lookup = |i: usize| listed.get(i).cloned().ok_or_else(|| parse_err(format!("no pair with id {i}")));
    let mut pairs = BTreeMap::new();
    for (entry, pair) in file.pairs.iter().zip(&listed) {
        let origin = match entry.parents {
            None => Origin::Seed,
            Some([i, j]) => {
                let (x, y) = (lookup(i)?, lookup(j)?);
                let (x, y) = if x <= y { (x, y) } else { (y, x) };
                let comb = combine_oriented(x.first(), x.second(), y.first(), y.second()).map_err(|e| {
                    Error::InvariantViolation(format!("derivation of pair {} fails: {e}", entry.id))
                })?;
                Origin::Derived { parents: (x, y), lines: comb.lines }
            }
        };
        let record = PairRecord { generation: entry.generation, origin };
        if pairs.insert(pair.clone(), record).is_some() {
            return Err(Error::InvariantViolation(format!("pair {} is listed twice", entry.id)));
        }
    }
    let mut skipped = Vec::with_capacity(file.skipped.len());
    for s in &file.skipped {
        let (x, y) = (lookup(s.parents[0])?, lookup(s.parents[1])?);
        skipped.push(SkippedCombination { parents: (x, y), reason: reason_from_code(&s.reason)? });
    }
    let state = ConstructionState::from_parts(curve, pairs, skipped, file.closed, file.generations);
    Ok(LoadedRun { state, weierstrass })
}

/// One row per point: `pair_id,x,y,z` with canonical integer coordinates.
pub fn format_csv(state: &ConstructionState) -> String {
    let mut out = String::from("pair_id,x,y,z\n");
    for (id, (pair, _)) in state.pairs().enumerate() {
        for p in pair.members() {
            let [x, y, z] = p.coords();
            writeln!(out, "{id},{x},{y},{z}").expect("writing to a string");
        }
    }
    out
}
