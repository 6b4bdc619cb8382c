use std::fmt;

use crate::projective::ProjPoint;

/// Coarse classification used by the command-line front end to pick an
/// exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input or a configuration that fails validation.
    Validation,
    /// A geometric degeneracy or an ambiguous fit.
    Degeneracy,
    /// An internal invariant was broken.
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("all homogeneous coordinates are zero")]
    ZeroVector,
    #[error("the two points are identical")]
    IdenticalPoints,
    #[error("the two lines are identical")]
    IdenticalLines,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("lines are not concurrent")]
    NotConcurrent,
    #[error("fewer than three distinct elements")]
    TooDegenerate,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("three of the four frame points are collinear")]
    DegenerateFrame,

    #[error("line does not pass through the carrier of the involution")]
    NotInPencil,
    #[error("no non-degenerate auxiliary choice found for the ruler construction")]
    DegenerateChoice,
    #[error("the carrier coincides with one of the six quadrangle points")]
    ForbiddenCarrier,
    #[error("involution lines are not pairwise distinct")]
    InvalidInvolution,
    #[error("input contains repeated points")]
    DuplicatePoints,

    #[error("point {0} is not on the curve")]
    NotOnCurve(ProjPoint),
    #[error("point {0} is a singular point of the curve")]
    SingularPoint(ProjPoint),
    #[error("the line is a component of the curve")]
    LineComponent,
    #[error("nine points do not determine a unique cubic (solution space has dimension {dim})")]
    AmbiguousFit { dim: usize },
    #[error("no cubic passes through the points")]
    OverconstrainedFit,
    #[error("expected exactly {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
    #[error("point {0} is not affine (third coordinate is zero)")]
    NotAffine(ProjPoint),

    #[error("four seed points are collinear: {}", fmt_points(.0))]
    FourCollinear([ProjPoint; 4]),
    #[error("the three pairs are opposite vertices of one complete quadrilateral")]
    CompleteQuadrilateral,
    #[error("the nine points A, A', B, B', C, C', D, E, F are not pairwise distinct")]
    DegenerateNine,
    #[error("derived point {0} is not on the fitted cubic")]
    BarNotOnCurve(ProjPoint),
    #[error("the two pairs share a point")]
    SharedPoint,
    #[error("joining lines coincide; the combination is undefined")]
    DegenerateLines,
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("curve is singular (b = 0 or a^2 = 4b)")]
    SingularCurve,
    #[error("chart base point has a zero coordinate")]
    BasePointDegenerate,
    #[error("point {0} is not on the chart curve")]
    OffChartCurve(ProjPoint),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("degenerate direction: one of the lines is vertical or passes through the center")]
    DegenerateDirection,
    #[error("seed point {0} has its conjugate at infinity")]
    ConjugateAtInfinity(ProjPoint),

    #[error("hexagon is degenerate: an opposite-side meet is undefined")]
    DegenerateHexagon,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("the lines of the involution are not pairwise distinct")]
    LinesNotDistinct,
}

fn fmt_points(pts: &[ProjPoint]) -> String {
    pts.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvariantViolation(_) | BarNotOnCurve(_) => ErrorKind::Invariant,
            Parse(_) | ZeroVector | NotOnCurve(_) | WrongPointCount { .. } | NotAffine(_)
            | FourCollinear(_) | CompleteQuadrilateral | DuplicatePoints | SingularCurve
            | OffChartCurve(_) | ConjugateAtInfinity(_) | NotInPencil | ForbiddenCarrier
            | InvalidInvolution | BasePointDegenerate => ErrorKind::Validation,
            _ => ErrorKind::Degeneracy,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Lightweight wrapper so a kind can be printed in diagnostics.
impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Validation => "validation",
            ErrorKind::Degeneracy => "degeneracy",
            ErrorKind::Invariant => "invariant",
        })
    }
}
