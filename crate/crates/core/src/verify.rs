//! Runs the theorem checks over a finished construction and collects a
//! report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::engine::{ConstructionState, Origin, PointPair};
use crate::error::{Error, ErrorKind, Result};
use crate::projective::ProjPoint;
use crate::theorems::{
    chasles_check, fact7_check, fact9_check, lemma4a_check, lemma4b_check, pencil_involution, prop6_tangent_at,
};
use crate::weierstrass::{lemma8_center_product, to_abc_chart, WeierstrassCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Invariants,
    Chasles,
    Lemma4,
    Tangents,
    Fact7,
    Fact9,
    Lemma8,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Invariants,
        Suite::Chasles,
        Suite::Lemma4,
        Suite::Tangents,
        Suite::Fact7,
        Suite::Fact9,
        Suite::Lemma8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Invariants => "invariants",
            Suite::Chasles => "chasles",
            Suite::Lemma4 => "lemma4",
            Suite::Tangents => "tangents",
            Suite::Fact7 => "fact7",
            Suite::Fact9 => "fact9",
            Suite::Lemma8 => "lemma8",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Parses `all` or a comma separated list of suite names.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out: Vec<Suite> = Vec::new();
    for name in s.split(',') {
        let suite = name.trim().parse()?;
        if !out.contains(&suite) {
            out.push(suite);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub inputs: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub applicable: bool,
    pub passed: usize,
    pub failed: usize,
    pub hypothesis_failed: usize,
    pub elapsed_ms: f64,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub curve: String,
    pub pair_count: usize,
    pub point_count: usize,
    pub closed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    /// One line per suite.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            if s.applicable {
                out += &format!(
                    "{:<10} {:>5} passed {:>5} failed {:>5} hypothesis-failed\n",
                    s.suite.name(),
                    s.passed,
                    s.failed,
                    s.hypothesis_failed
                );
            } else {
                out += &format!("{:<10} not applicable (needs a Weierstrass curve)\n", s.suite.name());
            }
        }
        out
    }
}

struct Collector {
    checks: Vec<CheckRecord>,
}

impl Collector {
    fn record(&mut self, check: &'static str, inputs: &[&ProjPoint], result: Result<bool>) {
        let (status, detail) = match result {
            Ok(true) => (Status::Pass, None),
            Ok(false) => (Status::Fail, None),
            Err(e) if e.kind() == ErrorKind::Degeneracy => (Status::HypothesisFailed, Some(e.to_string())),
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        self.checks.push(CheckRecord {
            check,
            inputs: inputs.iter().map(|p| p.to_string()).collect(),
            status,
            detail,
        });
    }
}

/// Runs `suites` over `state`. Suites that need the Weierstrass model are
/// reported as not applicable without one.
pub fn verify(state: &ConstructionState, weierstrass: Option<&WeierstrassCurve>, suites: &[Suite]) -> VerifyReport {
    let reports = suites
        .iter()
        .map(|&suite| {
            let start = Instant::now();
            let mut c = Collector { checks: Vec::new() };
            let applicable = match suite {
                Suite::Invariants => {
                    c.record("invariants", &[], state.check_invariants().map(|_| true));
                    true
                }
                Suite::Chasles => {
                    chasles_suite(state, &mut c);
                    true
                }
                Suite::Lemma4 => {
                    lemma4_suite(state, &mut c);
                    true
                }
                Suite::Tangents => {
                    tangents_suite(state, &mut c);
                    true
                }
                Suite::Fact9 => {
                    fact9_suite(state, &mut c);
                    true
                }
                Suite::Fact7 => weierstrass.map(|w| fact7_suite(state, w, &mut c)).is_some(),
                Suite::Lemma8 => weierstrass.map(|w| lemma8_suite(state, w, &mut c)).is_some(),
            };
            let count = |s: Status| c.checks.iter().filter(|r| r.status == s).count();
            SuiteReport {
                suite,
                applicable,
                passed: count(Status::Pass),
                failed: count(Status::Fail),
                hypothesis_failed: count(Status::HypothesisFailed),
                elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
                checks: c.checks,
            }
        })
        .collect();
    VerifyReport {
        curve: state.curve().to_string(),
        pair_count: state.pair_count(),
        point_count: state.point_count(),
        closed: state.closed(),
        suites: reports,
    }
}

fn pair_list(state: &ConstructionState) -> Vec<&PointPair> {
    state.pairs().map(|(p, _)| p).collect()
}

/// Hexagon `P Q R P' Q' R'` for each derivation from `{P,P'}`, `{Q,Q'}` and
/// a third pair `{R,R'}`.
fn chasles_suite(state: &ConstructionState, c: &mut Collector) {
    let pairs = pair_list(state);
    let curve = state.curve();
    for (_, record) in state.pairs() {
        let Origin::Derived { parents: (x, y), .. } = &record.origin else { continue };
        let thirds = pairs.iter().filter(|z| **z != x && **z != y).take(2);
        for z in thirds {
            let six = [x.first(), y.first(), z.first(), x.second(), y.second(), z.second()];
            let result = chasles_check(curve, six[0], six[1], six[2], six[3], six[4], six[5]);
            c.record("chasles", &six, result);
        }
    }
}

fn lemma4_suite(state: &ConstructionState, c: &mut Collector) {
    let pairs = pair_list(state);
    let curve = state.curve();
    for pair in &pairs {
        let (p, p_bar) = (pair.first(), pair.second());
        let same = curve.tangent_third(p).and_then(|t| Ok(t == curve.tangent_third(p_bar)?));
        c.record("tangent-thirds-agree", &[p, p_bar], same);
    }
    for (_, record) in state.pairs() {
        let Origin::Derived { parents: (x, y), .. } = &record.origin else { continue };
        let four = [x.first(), x.second(), y.first(), y.second()];
        c.record("lemma4a", &four, lemma4a_check(curve, four[0], four[1], four[2], four[3]));
    }
    for (i, pair) in pairs.iter().enumerate() {
        let q = pairs[(i + 1) % pairs.len()].first();
        let three = [pair.first(), pair.second(), q];
        c.record("lemma4b", &three, lemma4b_check(curve, three[0], three[1], three[2]));
    }
}

/// Up to this many candidate `(P, Q)` pairs are tried per point before the
/// check is reported as degenerate.
const INVOLUTION_ATTEMPTS: usize = 24;

fn tangent_via_involution(pairs: &[&PointPair], s: &ProjPoint, s_bar: &ProjPoint) -> Result<crate::ProjLine> {
    let others: Vec<&PointPair> = pairs.iter().copied().filter(|p| !p.contains(s)).collect();
    let mut attempts = 0;
    for (i, p) in others.iter().enumerate() {
        for q in &others[i + 1..] {
            if attempts == INVOLUTION_ATTEMPTS {
                return Err(Error::LinesNotDistinct);
            }
            attempts += 1;
            if pencil_involution(s, p, q).is_ok() {
                return prop6_tangent_at(s, s_bar, p, q);
            }
        }
    }
    Err(Error::LinesNotDistinct)
}

fn tangents_suite(state: &ConstructionState, c: &mut Collector) {
    let pairs = pair_list(state);
    let curve = state.curve();
    for pair in &pairs {
        for (s, s_bar) in [(pair.first(), pair.second()), (pair.second(), pair.first())] {
            let result = tangent_via_involution(&pairs, s, s_bar)
                .and_then(|line| Ok(line == curve.tangent_at(s)?));
            c.record("prop6", &[s, s_bar], result);
        }
    }
}

fn fact9_suite(state: &ConstructionState, c: &mut Collector) {
    let pairs = pair_list(state);
    let n = pairs.len();
    if n < 4 {
        return;
    }
    let curve = state.curve();
    for i in 0..n {
        let (s, p, q, r) = (pairs[i], pairs[(i + 1) % n], pairs[(i + 2) % n], pairs[(i + 3) % n]);
        for r in r.members() {
            let inputs = [r, p.first(), p.second(), q.first(), q.second(), s.first(), s.second()];
            c.record("fact9", &inputs, fact9_check(curve, r, p, q, s));
        }
    }
}

fn fact7_suite(state: &ConstructionState, w: &WeierstrassCurve, c: &mut Collector) {
    for a in state.points() {
        let result = w.conjugate_point(a).and_then(|a_bar| {
            let b = w.as_cubic().third_intersection(a, &a_bar)?;
            if &b == a || b == a_bar {
                return Err(Error::HypothesisFailed("the chord through A and A' is tangent".into()));
            }
            fact7_check(w, a, &b)
        });
        c.record("fact7", &[a], result);
    }
}

fn lemma8_suite(state: &ConstructionState, w: &WeierstrassCurve, c: &mut Collector) {
    let base = state.points().find(|p| {
        p.to_affine().map_or(false, |(x, y)| !x.is_zero() && !y.is_zero())
    });
    let Some(base) = base else { return };
    let (chart, map) = match to_abc_chart(w, base) {
        Ok(v) => v,
        Err(e) => return c.record("lemma8", &[base], Err(e)),
    };
    let a = match map.to_chart(base) {
        Ok(a) => a,
        Err(e) => return c.record("lemma8", &[base], Err(e)),
    };
    for p in state.points().filter(|p| *p != base) {
        let result = map.to_chart(p).and_then(|q| {
            if q.is_at_infinity() || q.to_affine().map_or(false, |(x, _)| x.is_zero()) {
                return Err(Error::ZeroDenominator);
            }
            let r = lemma8_center_product(&chart, &a, &q)?;
            let (x0, _) = a.to_affine().ok_or(Error::ZeroDenominator)?;
            Ok(r.product == &chart.gamma * x0)
        });
        c.record("lemma8", &[base, p], result);
    }
}
