//! Cubiculated regions: finite sets of unit cells with optional periodic
//! wrapping and a checkerboard coloring.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cubical::CubicalComplex;
use crate::error::RegionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct CellCoord {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl CellCoord {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        CellCoord { x, y, z }
    }

    pub fn to_array(self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn get(self, axis: Axis) -> i64 {
        self.to_array()[axis.index()]
    }

    pub fn offset(self, axis: Axis, delta: i64) -> Self {
        let mut a = self.to_array();
        a[axis.index()] += delta;
        a.into()
    }
}

impl From<[i64; 3]> for CellCoord {
    fn from(a: [i64; 3]) -> Self {
        CellCoord::new(a[0], a[1], a[2])
    }
}

impl From<CellCoord> for [i64; 3] {
    fn from(c: CellCoord) -> Self {
        c.to_array()
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ColorConvention {
    /// Black iff x + y + z is even.
    #[default]
    EvenBlack,
}

impl ColorConvention {
    pub fn name(self) -> &'static str {
        match self {
            ColorConvention::EvenBlack => "even_black",
        }
    }

    pub fn parse(s: &str) -> Result<Self, RegionError> {
        match s {
            "even_black" => Ok(ColorConvention::EvenBlack),
            other => Err(RegionError::UnknownConvention(other.to_string())),
        }
    }

    pub fn color(self, c: CellCoord) -> Color {
        match self {
            ColorConvention::EvenBlack => {
                if (c.x + c.y + c.z).rem_euclid(2) == 0 {
                    Color::Black
                } else {
                    Color::White
                }
            }
        }
    }
}

/// A face of a region cell that is not shared with another region cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundarySquare {
    pub cell: CellCoord,
    pub axis: Axis,
    /// +1 for the face at the upper end of `axis`, -1 for the lower one.
    pub side: i64,
    pub color: Color,
    /// Face center in doubled coordinates.
    pub center2: [i64; 3],
}

impl BoundarySquare {
    /// Face center in quarter units (coordinates times four).
    pub fn center4(&self) -> [i64; 3] {
        self.center2.map(|c| 2 * c)
    }

    /// Outward unit normal.
    pub fn normal(&self) -> [i64; 3] {
        let mut n = [0; 3];
        n[self.axis.index()] = self.side;
        n
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    cells: BTreeSet<CellCoord>,
    wrap: [Option<i64>; 3],
    convention: ColorConvention,
}

/// The finer complex used for chains: every cell split into eight cubes.
/// Codes are in quarter units.
#[derive(Debug, Clone)]
pub struct SharpComplex {
    pub complex: CubicalComplex,
}

impl SharpComplex {
    pub fn num_cells(&self, dim: usize) -> usize {
        self.complex.cells(dim).len()
    }
}

pub fn make_box(l: i64, m: i64, n: i64) -> Result<Region, RegionError> {
    if l < 1 || m < 1 || n < 1 {
        return Err(RegionError::NonPositiveDimension(l, m, n));
    }
    let cells = (0..l).flat_map(|x| (0..m).flat_map(move |y| (0..n).map(move |z| CellCoord::new(x, y, z))));
    make_region(cells, [None; 3])
}

pub fn make_region<I: IntoIterator<Item = CellCoord>>(cells: I, wrap: [Option<i64>; 3]) -> Result<Region, RegionError> {
    Region::new(cells.into_iter().collect(), wrap, ColorConvention::EvenBlack)
}

impl Region {
    pub fn new(
        cells: BTreeSet<CellCoord>,
        wrap: [Option<i64>; 3],
        convention: ColorConvention,
    ) -> Result<Self, RegionError> {
        for (axis, p) in wrap.iter().enumerate() {
            if let Some(p) = *p {
                if p < 4 || p % 2 != 0 {
                    return Err(RegionError::BadWrapPeriod { axis, period: p });
                }
            }
        }
        if cells.is_empty() {
            return Err(RegionError::Empty);
        }
        for c in &cells {
            let a = c.to_array();
            for i in 0..3 {
                if let Some(p) = wrap[i] {
                    if a[i] < 0 || a[i] >= p {
                        return Err(RegionError::NonCanonical(*c));
                    }
                }
            }
        }
        let region = Region {
            cells,
            wrap,
            convention,
        };
        let comps = region.components();
        if comps > 1 {
            return Err(RegionError::Disconnected { components: comps });
        }
        region.check_edges()?;
        Ok(region)
    }

    pub fn cells(&self) -> impl ExactSizeIterator<Item = &CellCoord> + DoubleEndedIterator {
        self.cells.iter()
    }

    pub fn cell_set(&self) -> &BTreeSet<CellCoord> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn wrap(&self) -> [Option<i64>; 3] {
        self.wrap
    }

    pub fn is_wrapped(&self) -> bool {
        self.wrap.iter().any(Option::is_some)
    }

    pub fn convention(&self) -> ColorConvention {
        self.convention
    }

    pub fn contains(&self, c: CellCoord) -> bool {
        self.cells.contains(&self.canonical(c))
    }

    pub fn canonical(&self, c: CellCoord) -> CellCoord {
        let mut a = c.to_array();
        for i in 0..3 {
            if let Some(p) = self.wrap[i] {
                a[i] = a[i].rem_euclid(p);
            }
        }
        a.into()
    }

    pub fn color(&self, c: CellCoord) -> Result<Color, RegionError> {
        if !self.contains(c) {
            return Err(RegionError::CellNotInRegion(c));
        }
        Ok(self.convention.color(self.canonical(c)))
    }

    /// Color by parity alone, without a membership check.
    pub fn color_of(&self, c: CellCoord) -> Color {
        self.convention.color(self.canonical(c))
    }

    /// (black, white) cell counts.
    pub fn color_counts(&self) -> (usize, usize) {
        let black = self
            .cells
            .iter()
            .filter(|c| self.convention.color(**c) == Color::Black)
            .count();
        (black, self.cells.len() - black)
    }

    pub fn is_balanced(&self) -> bool {
        let (b, w) = self.color_counts();
        b == w
    }

    /// Face neighbours inside the region, as (axis, direction, canonical cell).
    pub fn neighbors(&self, c: CellCoord) -> impl Iterator<Item = (Axis, i64, CellCoord)> + '_ {
        Axis::ALL.into_iter().flat_map(move |a| {
            [-1, 1].into_iter().filter_map(move |d| {
                let n = self.canonical(c.offset(a, d));
                self.cells.contains(&n).then_some((a, d, n))
            })
        })
    }

    /// Min and max cell coordinates per axis.
    pub fn bounds(&self) -> ([i64; 3], [i64; 3]) {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for c in &self.cells {
            let a = c.to_array();
            for i in 0..3 {
                lo[i] = lo[i].min(a[i]);
                hi[i] = hi[i].max(a[i]);
            }
        }
        (lo, hi)
    }

    fn components(&self) -> usize {
        let mut seen: HashSet<CellCoord> = HashSet::with_capacity(self.cells.len());
        let mut count = 0;
        for &start in &self.cells {
            if !seen.insert(start) {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                for (_, _, n) in self.neighbors(c) {
                    if seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
        }
        count
    }

    /// Rejects edges touched by exactly two cubes sitting diagonally across
    /// the edge, where the region would not be a manifold.
    fn check_edges(&self) -> Result<(), RegionError> {
        let mut touched: HashMap<([i64; 3], usize), u8> = HashMap::new();
        for c in &self.cells {
            let a = c.to_array();
            for axis in 0..3 {
                let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
                for (bit, (du, dv)) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
                    let mut e = a;
                    e[u] += du;
                    e[v] += dv;
                    for i in 0..3 {
                        if let Some(p) = self.wrap[i] {
                            e[i] = e[i].rem_euclid(p);
                        }
                    }
                    // Bit records which quadrant around the edge the cube fills.
                    let quadrant = 3 - bit;
                    *touched.entry((e, axis)).or_default() |= 1 << quadrant;
                }
            }
        }
        let mut bad: Vec<[i64; 3]> = touched
            .into_iter()
            .filter(|(_, mask)| *mask == 0b1001 || *mask == 0b0110)
            .map(|((e, axis), _)| {
                let mut e2 = e.map(|v| 2 * v);
                e2[axis] += 1;
                e2
            })
            .collect();
        bad.sort();
        match bad.first() {
            Some(e) => Err(RegionError::NonManifoldEdge { edge2: *e }),
            None => Ok(()),
        }
    }

    pub fn boundary_squares(&self) -> Vec<BoundarySquare> {
        let mut out = Vec::new();
        for &c in &self.cells {
            for axis in Axis::ALL {
                for side in [-1, 1] {
                    if !self.contains(c.offset(axis, side)) {
                        let mut center2 = c.to_array().map(|v| 2 * v + 1);
                        center2[axis.index()] += side;
                        out.push(BoundarySquare {
                            cell: c,
                            axis,
                            side,
                            color: self.convention.color(c),
                            center2,
                        });
                    }
                }
            }
        }
        out
    }

    /// Unit-cube complex, codes in half units.
    pub fn coarse_complex(&self) -> CubicalComplex {
        CubicalComplex::from_cubes(self.cells.iter().map(|c| c.to_array()), self.wrap)
    }

    pub fn sharp_complex(&self) -> SharpComplex {
        let cubes = self.cells.iter().flat_map(|c| {
            let a = c.to_array();
            (0..8).map(move |k| [2 * a[0] + (k & 1), 2 * a[1] + ((k >> 1) & 1), 2 * a[2] + ((k >> 2) & 1)])
        });
        SharpComplex {
            complex: CubicalComplex::from_cubes(cubes, self.wrap.map(|p| p.map(|p| 2 * p))),
        }
    }

    pub fn to_file(&self) -> RegionFile {
        RegionFile {
            version: 1,
            cells: self.cells.iter().copied().collect(),
            wrap: self.wrap,
            color: self.convention.name().to_string(),
        }
    }

    pub fn from_file(f: RegionFile) -> Result<Self, RegionError> {
        if f.version != 1 {
            return Err(RegionError::Format(format!("unsupported version {}", f.version)));
        }
        let convention = ColorConvention::parse(&f.color)?;
        Region::new(f.cells.into_iter().collect(), f.wrap, convention)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("region serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, RegionError> {
        let f: RegionFile = serde_json::from_str(s).map_err(|e| RegionError::Format(e.to_string()))?;
        Region::from_file(f)
    }

    pub fn load(path: &Path) -> Result<Self, RegionError> {
        let s = std::fs::read_to_string(path).map_err(|e| RegionError::Format(format!("{}: {e}", path.display())))?;
        Region::from_json(&s)
    }

    pub fn save(&self, path: &Path) -> Result<(), RegionError> {
        std::fs::write(path, self.to_json()).map_err(|e| RegionError::Format(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub cells: Vec<CellCoord>,
    #[serde(default)]
    pub wrap: [Option<i64>; 3],
    #[serde(default = "default_color")]
    pub color: String,
}

fn default_version() -> u32 {
    1
}

fn default_color() -> String {
    ColorConvention::EvenBlack.name().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hex() -> Region {
        let cells = (0..8)
            .map(|k| CellCoord::new(k & 1, (k >> 1) & 1, (k >> 2) & 1))
            .filter(|c| *c != CellCoord::new(1, 1, 0) && *c != CellCoord::new(0, 0, 1));
        make_region(cells, [None; 3]).unwrap()
    }

    #[test]
    fn box_counts() {
        let r = make_box(2, 2, 1).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.color_counts(), (2, 2));
        assert_eq!(make_box(3, 3, 2).unwrap().len(), 18);
        assert_eq!(make_box(0, 1, 1), Err(RegionError::NonPositiveDimension(0, 1, 1)));
    }

    #[test]
    fn coloring() {
        let r = make_box(2, 2, 1).unwrap();
        assert_eq!(r.color(CellCoord::new(0, 0, 0)), Ok(Color::Black));
        assert_eq!(r.color(CellCoord::new(1, 0, 0)), Ok(Color::White));
        assert_eq!(r.color(CellCoord::new(1, 1, 0)), Ok(Color::Black));
        assert!(r.color(CellCoord::new(5, 0, 0)).is_err());
    }

    #[test]
    fn boundary_square_counts() {
        assert_eq!(make_box(2, 2, 1).unwrap().boundary_squares().len(), 16);
        assert_eq!(make_box(3, 3, 2).unwrap().boundary_squares().len(), 42);
        let torus = make_region(make_box(6, 6, 6).unwrap().cells().copied(), [Some(6); 3]).unwrap();
        assert!(torus.boundary_squares().is_empty());
    }

    #[test]
    fn sharp_counts() {
        let s = make_box(1, 1, 2).unwrap().sharp_complex();
        assert_eq!(s.num_cells(3), 16);
        let s = make_box(2, 2, 1).unwrap().sharp_complex();
        assert_eq!(s.num_cells(3), 32);
        assert_eq!(s.num_cells(0), 75);
    }

    #[test]
    fn sharp_boundary_matches_squares() {
        for r in [make_box(2, 2, 1).unwrap(), hex()] {
            let s = r.sharp_complex();
            assert_eq!(s.complex.boundary_cells(2).count(), 4 * r.boundary_squares().len());
        }
    }

    #[test]
    fn hex_is_valid_and_balanced() {
        let r = hex();
        assert_eq!(r.len(), 6);
        assert!(r.is_balanced());
    }

    #[test]
    fn rejects_bad_regions() {
        let two = [CellCoord::new(0, 0, 0), CellCoord::new(2, 0, 0)];
        assert_eq!(
            make_region(two, [None; 3]),
            Err(RegionError::Disconnected { components: 2 })
        );
        let diag = [[0, 0, 0], [0, 0, 1], [1, 0, 1], [1, 1, 1], [1, 1, 0]].map(CellCoord::from);
        assert_eq!(
            make_region(diag, [None; 3]),
            Err(RegionError::NonManifoldEdge { edge2: [2, 2, 1] })
        );
        assert!(matches!(
            make_region([CellCoord::new(0, 0, 0)], [Some(3), None, None]),
            Err(RegionError::BadWrapPeriod { axis: 0, period: 3 })
        ));
        assert!(matches!(
            make_region([CellCoord::new(7, 0, 0)], [Some(6), None, None]),
            Err(RegionError::NonCanonical(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let r = hex();
        let s = r.to_json();
        assert!(s.starts_with("{\"version\":1,\"cells\":[[0,0,0],"));
        assert_eq!(Region::from_json(&s).unwrap(), r);
        assert!(matches!(
            Region::from_json("{\"cells\":[[0,0,0]],\"color\":\"odd_black\"}"),
            Err(RegionError::UnknownConvention(_))
        ));
    }

    #[test]
    fn wrap_translation_is_identity() {
        let torus = make_region(make_box(6, 6, 6).unwrap().cells().copied(), [Some(6); 3]).unwrap();
        let c = CellCoord::new(2, 3, 4);
        assert_eq!(torus.canonical(c.offset(Axis::Y, 6)), c);
        assert_eq!(torus.neighbors(CellCoord::new(0, 0, 0)).count(), 6);
    }
}
