use thiserror::Error;

use crate::region::CellCoord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("box dimensions must be positive, got {0}x{1}x{2}")]
    NonPositiveDimension(i64, i64, i64),
    #[error("region has no cells")]
    Empty,
    #[error("wrap period on axis {axis} must be an even integer >= 4, got {period}")]
    BadWrapPeriod { axis: usize, period: i64 },
    #[error("cell {0} is not in canonical form for the wrap periods")]
    NonCanonical(CellCoord),
    #[error("region is disconnected ({components} face-connected components)")]
    Disconnected { components: usize },
    #[error("edge at doubled coordinates {edge2:?} is touched by two diagonal cubes only")]
    NonManifoldEdge { edge2: [i64; 3] },
    #[error("cell {0} is not in the region")]
    CellNotInRegion(CellCoord),
    #[error("unsupported color convention {0:?}")]
    UnknownConvention(String),
    #[error("no builtin region named {0:?}")]
    UnknownBuiltin(String),
    #[error("region file: {0}")]
    Format(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("region has {black} black and {white} white cells")]
    Unbalanced { black: usize, white: usize },
    #[error("region has {cells} cells, above the enumeration cap of {cap}")]
    TooLarge { cells: usize, cap: usize },
    #[error("cells {0} and {1} do not form a domino")]
    NotADomino(CellCoord, CellCoord),
    #[error("cell {0} is covered more than once")]
    Overlap(CellCoord),
    #[error("cell {0} is not covered")]
    Uncovered(CellCoord),
    #[error("move is not applicable to this tiling")]
    MoveNotApplicable,
    #[error("region admits no tiling")]
    NoTiling,
    #[error("tilings belong to different regions")]
    RegionMismatch,
    #[error("tiling file: {0}")]
    Format(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("complex has {cells} cells, above the cap of {cap}")]
    TooLarge { cells: usize, cap: usize },
    #[error("integer overflow during elimination")]
    Overflow,
    #[error("chain is not a combination of dual blocks (offending cell {0:?})")]
    NotDualChain([i64; 3]),
    #[error("section plane is not transversal to the chain (cell {0:?})")]
    NonTransversal([i64; 3]),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipeError {
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("boundary has {white} white and {black} black squares")]
    UnbalancedBoundary { white: usize, black: usize },
    #[error("complement component {component} has {white} white and {black} black boundary squares")]
    UnbalancedComponent {
        component: usize,
        white: usize,
        black: usize,
    },
    #[error("could not route a shell pipe from {from:?}; try a margin larger than {margin}")]
    RoutingFailed { from: [i64; 3], margin: i64 },
    #[error("shell does not match the region: {0}")]
    ShellMismatch(String),
    #[error("dangling pipe endpoint at {0:?}")]
    DanglingEndpoint([i64; 3]),
    #[error("curves intersect near {0:?}")]
    SelfIntersection([i64; 3]),
    #[error("no stored shell: {0}")]
    UnknownFixture(String),
    #[error("curve file: {0}")]
    Format(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error("curves intersect")]
    Intersecting,
    #[error("no generic projection direction found after {0} attempts")]
    NoGenericDirection(usize),
    #[error("framing offset is degenerate at vertex {0}")]
    DegenerateFraming(usize),
    #[error("transported framing returns rotated by a half turn; self-linking is ambiguous")]
    AmbiguousFraming,
    #[error("curve systems use different shells or flux values")]
    ShellMismatch,
    #[error("linking numbers need an embedding in R^3; region is wrapped")]
    Wrapped,
    #[error("closed curve needs at least 3 vertices, got {0}")]
    TooShort(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Pipe(#[from] PipeError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("relative flux of the base tiling is nonzero; only integer twists are supported")]
    NonzeroRelativeFlux,
    #[error(
        "{unreached} tilings of the flux class are not reachable by flips and trits; a refinement would be needed"
    )]
    Disconnected { unreached: usize },
    #[error("signed trit sum around a cycle is {0}, not zero")]
    InconsistentCycle(i64),
    #[error("helicity difference {0} is not an integer multiple of 36 phi^2")]
    NonInteger(String),
    #[error("tilings have different flux")]
    FluxMismatch,
    #[error("twist routes disagree on tiling {index}: trit walk {bfs}, helicity {hel}\n{render}")]
    Disagreement {
        index: usize,
        bfs: i64,
        hel: i64,
        render: String,
    },
}

/// Any error of the library, with a stable numeric code per class.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Pipe(#[from] PipeError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Process exit code: 3 region, 4 tiling, 5 homology, 6 pipes and
    /// shells, 7 linking, 8 twist, 9 input/output, 2 usage.
    pub fn code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Region(_) => 3,
            Error::Tiling(TilingError::Region(_)) => 3,
            Error::Tiling(_) => 4,
            Error::Homology(_) => 5,
            Error::Pipe(_) => 6,
            Error::Link(_) => 7,
            Error::Twist(TwistError::Tiling(_)) => 4,
            Error::Twist(TwistError::Homology(_)) => 5,
            Error::Twist(TwistError::Pipe(_)) => 6,
            Error::Twist(TwistError::Link(_)) => 7,
            Error::Twist(_) => 8,
            Error::Io(_) => 9,
        }
    }
}

/// Exit code of `verify-paper` when a check fails.
pub const VERIFY_FAILED_CODE: i32 = 10;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_distinct_per_class() {
        let errs = [
            Error::Usage("x".into()),
            Error::Region(RegionError::Empty),
            Error::Tiling(TilingError::NoTiling),
            Error::Homology(HomologyError::Overflow),
            Error::Pipe(PipeError::Format("x".into())),
            Error::Link(LinkError::Intersecting),
            Error::Twist(TwistError::FluxMismatch),
            Error::Io("x".into()),
        ];
        let mut codes: Vec<i32> = errs.iter().map(Error::code).collect();
        codes.push(VERIFY_FAILED_CODE);
        let n = codes.len();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), n);
        assert_eq!(Error::Twist(TwistError::Link(LinkError::Wrapped)).code(), 7);
        assert_eq!(Error::Tiling(TilingError::Region(RegionError::Empty)).code(), 3);
    }
}
