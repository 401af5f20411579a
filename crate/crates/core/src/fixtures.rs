//! Builtin regions, with the tilings and shells drawn for them.

use std::sync::Arc;

use crate::error::{PipeError, RegionError, TilingError};
use crate::region::{make_box, make_region, CellCoord, Region};
use crate::shell::{layered_auto, Shell, ShellStrategy};
use crate::tiling::{find_tiling, Domino, Tiling};

pub const BUILTIN_NAMES: [&str; 10] = [
    "box-2-2-1",
    "box-2-2-2",
    "box-3-3-2",
    "box-4-4-2",
    "hex",
    "annulus-4-4-2",
    "cube-hole-12-4",
    "cube-hole-13-5",
    "torus-6",
    "slab-torus-8-8-4",
];

/// Margin used when a builtin has no stored shell.
pub const AUTO_MARGIN: i64 = 2;

const BOX221_SHELL: &str = include_str!("fixtures/box221_shell.json");
const HEX_SHELL: &str = include_str!("fixtures/hex_shell.json");
const BOX332_SHELL: &str = include_str!("fixtures/box332_shell.json");

type Pair = [[i64; 3]; 2];

const HEX_T0: [Pair; 3] = [[[0, 0, 0], [1, 0, 0]], [[0, 1, 1], [0, 1, 0]], [[1, 0, 1], [1, 1, 1]]];
const HEX_T1: [Pair; 3] = [[[0, 0, 0], [0, 1, 0]], [[0, 1, 1], [1, 1, 1]], [[1, 0, 1], [1, 0, 0]]];

/// First tiling of the five drawn for the 3x3x2 box: no flips, twist -1.
const BOX332_T0: [Pair; 9] = [
    [[0, 0, 0], [0, 1, 0]],
    [[0, 1, 1], [0, 2, 1]],
    [[0, 2, 0], [1, 2, 0]],
    [[1, 0, 1], [0, 0, 1]],
    [[1, 1, 0], [1, 1, 1]],
    [[1, 2, 1], [2, 2, 1]],
    [[2, 0, 0], [1, 0, 0]],
    [[2, 1, 1], [2, 0, 1]],
    [[2, 2, 0], [2, 1, 0]],
];

const BOX442_FIG1: [Pair; 16] = [
    [[0, 0, 0], [0, 1, 0]],
    [[0, 1, 1], [0, 2, 1]],
    [[0, 2, 0], [1, 2, 0]],
    [[0, 3, 1], [0, 3, 0]],
    [[1, 0, 1], [0, 0, 1]],
    [[1, 1, 0], [1, 1, 1]],
    [[1, 2, 1], [1, 3, 1]],
    [[1, 3, 0], [2, 3, 0]],
    [[2, 0, 0], [1, 0, 0]],
    [[2, 1, 1], [2, 0, 1]],
    [[2, 2, 0], [2, 2, 1]],
    [[2, 3, 1], [3, 3, 1]],
    [[3, 0, 1], [3, 0, 0]],
    [[3, 1, 0], [2, 1, 0]],
    [[3, 2, 1], [3, 1, 1]],
    [[3, 3, 0], [3, 2, 0]],
];

/// Golden floor drawing of [`BOX332_T0`].
pub const BOX332_T0_RENDER: &str = "\
z = 0
+---+   +
        |
+   #   +
|
+   +---+
z = 1
+   +---+
|
+   o   +
        |
+---+   +
";

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub region: Arc<Region>,
    /// Stored shell, when one is drawn for this region.
    pub shell: Option<Shell>,
    pub tilings: Vec<(&'static str, Tiling)>,
    /// Stored tiling of twist zero.
    pub base: Option<&'static str>,
}

impl Fixture {
    pub fn tiling(&self, name: &str) -> Option<&Tiling> {
        self.tilings.iter().find(|(n, _)| *n == name).map(|(_, t)| t)
    }

    pub fn base_tiling(&self) -> Option<&Tiling> {
        self.base.and_then(|b| self.tiling(b))
    }

    /// The stored shell, or an auto-routed one.
    pub fn shell_or_auto(&self) -> Result<Shell, PipeError> {
        match &self.shell {
            Some(s) => Ok(s.clone()),
            None => layered_auto(&self.region, AUTO_MARGIN),
        }
    }
}

fn tiling_from(region: &Arc<Region>, pairs: &[Pair]) -> Result<Tiling, TilingError> {
    let ds = pairs.iter().map(|&[a, b]| {
        let (a, b) = (CellCoord::from(a), CellCoord::from(b));
        if region.color_of(a) == crate::region::Color::Black {
            Domino::new(a, b)
        } else {
            Domino::new(b, a)
        }
    });
    Tiling::new(region.clone(), ds)
}

/// The 2x2x2 cube minus two cells on a main diagonal.
pub fn hex_region() -> Region {
    let cells = (0..8)
        .map(|k| CellCoord::new(k & 1, (k >> 1) & 1, (k >> 2) & 1))
        .filter(|c| *c != CellCoord::new(1, 1, 0) && *c != CellCoord::new(0, 0, 1));
    make_region(cells, [None; 3]).expect("hex region")
}

/// Box of side `n` with a centered cubical hole of side `h`.
pub fn cube_hole(n: i64, h: i64) -> Result<Region, RegionError> {
    let lo = (n - h) / 2;
    let inside = |v: i64| (lo..lo + h).contains(&v);
    let cells = make_box(n, n, n)?
        .cells()
        .copied()
        .filter(|c| !(inside(c.x) && inside(c.y) && inside(c.z)))
        .collect::<Vec<_>>();
    make_region(cells, [None; 3])
}

/// 4x4x2 box with the central 2x2 column removed.
pub fn annulus() -> Region {
    let cells = make_box(4, 4, 2)
        .expect("box")
        .cells()
        .copied()
        .filter(|c| !(1..3).contains(&c.x) || !(1..3).contains(&c.y))
        .collect::<Vec<_>>();
    make_region(cells, [None; 3]).expect("annulus region")
}

fn wrapped(l: i64, m: i64, n: i64, wrap: [Option<i64>; 3]) -> Region {
    let cells = make_box(l, m, n).expect("box").cells().copied().collect::<Vec<_>>();
    make_region(cells, wrap).expect("wrapped region")
}

/// Tiling of the region by dominoes along `axis`, pairing cells whose
/// coordinate on that axis is even with the next one.
pub fn columns(region: &Arc<Region>, axis: usize) -> Result<Tiling, TilingError> {
    let mut pairs = Vec::new();
    for c in region.cells() {
        let a = c.to_array();
        if a[axis].rem_euclid(2) == 0 {
            let mut b = a;
            b[axis] += 1;
            pairs.push([a, region.canonical(CellCoord::from(b)).to_array()]);
        }
    }
    tiling_from(region, &pairs)
}

/// Loads a builtin by name.
pub fn builtin(name: &str) -> Result<Fixture, TilingError> {
    let shell = |json: &str| Shell::from_json(json).expect("stored shell parses");
    let mut shell_data = None;
    let mut tilings = Vec::new();
    let mut base = None;
    let region = match name {
        "box-2-2-1" => {
            shell_data = Some(shell(BOX221_SHELL));
            Arc::new(make_box(2, 2, 1)?)
        }
        "box-2-2-2" => Arc::new(make_box(2, 2, 2)?),
        "box-3-3-2" => {
            shell_data = Some(shell(BOX332_SHELL));
            let r = Arc::new(make_box(3, 3, 2)?);
            tilings.push(("t0", tiling_from(&r, &BOX332_T0)?));
            tilings.push(("vertical", columns(&r, 2)?));
            base = Some("vertical");
            r
        }
        "box-4-4-2" => {
            let r = Arc::new(make_box(4, 4, 2)?);
            tilings.push(("fig1", tiling_from(&r, &BOX442_FIG1)?));
            r
        }
        "hex" => {
            shell_data = Some(shell(HEX_SHELL));
            let r = Arc::new(hex_region());
            tilings.push(("t0", tiling_from(&r, &HEX_T0)?));
            tilings.push(("t1", tiling_from(&r, &HEX_T1)?));
            base = Some("t0");
            r
        }
        "annulus-4-4-2" => Arc::new(annulus()),
        "cube-hole-12-4" => {
            let r = Arc::new(cube_hole(12, 4)?);
            tilings.push(("columns", columns(&r, 2)?));
            r
        }
        "cube-hole-13-5" => {
            let r = Arc::new(cube_hole(13, 5)?);
            tilings.push(("search", find_tiling(&r)?));
            r
        }
        "torus-6" => {
            let r = Arc::new(wrapped(6, 6, 6, [Some(6); 3]));
            tilings.push(("columns", columns(&r, 2)?));
            r
        }
        "slab-torus-8-8-4" => Arc::new(wrapped(8, 8, 4, [Some(8), Some(8), None])),
        _ => return Err(TilingError::Region(RegionError::UnknownBuiltin(name.to_string()))),
    };
    let name = BUILTIN_NAMES.iter().find(|n| **n == name).expect("listed");
    Ok(Fixture {
        name,
        region,
        shell: shell_data,
        tilings,
        base,
    })
}

/// A shell for `region`: the stored one of the builtin with the same region,
/// or an auto-routed one.
pub fn build_shell(region: &Region, strategy: ShellStrategy, margin: i64) -> Result<Shell, PipeError> {
    match strategy {
        ShellStrategy::LayeredAuto => layered_auto(region, margin),
        ShellStrategy::Builtin => {
            for (json, name) in [
                (BOX221_SHELL, "box-2-2-1"),
                (HEX_SHELL, "hex"),
                (BOX332_SHELL, "box-3-3-2"),
            ] {
                let f = builtin(name).expect("builtin loads");
                if *f.region == *region {
                    return Shell::from_json(json);
                }
            }
            Err(PipeError::UnknownFixture("no stored shell for this region".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::enumerate_tilings;

    #[test]
    fn all_builtins_load() {
        for n in BUILTIN_NAMES {
            if n == "cube-hole-13-5" {
                continue;
            }
            let f = builtin(n).unwrap();
            assert_eq!(f.name, n);
            if let Some(s) = &f.shell {
                s.validate(&f.region).unwrap();
            }
        }
        assert!(builtin("box-9").is_err());
    }

    #[test]
    fn stored_tilings() {
        let f = builtin("box-3-3-2").unwrap();
        let t0 = f.tiling("t0").unwrap();
        assert!(t0.list_flips().is_empty());
        assert!(t0.list_trits().iter().all(|t| t.sign == 1));
        assert_eq!(t0.render(), BOX332_T0_RENDER);
        assert_eq!(f.tiling("vertical").unwrap().axis_counts(), [0, 0, 9]);
        let h = builtin("hex").unwrap();
        assert_eq!(h.tiling("t0").unwrap().list_trits()[0].sign, 1);
        let all = enumerate_tilings(&h.region).unwrap();
        assert!(all.contains(h.tiling("t1").unwrap()));
    }

    #[test]
    fn fig1_dominoes() {
        let f = builtin("box-4-4-2").unwrap();
        let t = f.tiling("fig1").unwrap();
        let c = CellCoord::new;
        assert_eq!(t.partner(c(0, 0, 0)), Some(c(0, 1, 0)));
        assert_eq!(t.partner(c(0, 0, 1)), Some(c(1, 0, 1)));
        assert_eq!(t.partner(c(1, 1, 0)), Some(c(1, 1, 1)));
        assert!(t.list_flips().is_empty());
    }

    #[test]
    fn stored_shell_lookup() {
        let f = builtin("hex").unwrap();
        assert_eq!(
            build_shell(&f.region, ShellStrategy::Builtin, 1).unwrap().pipes.len(),
            12
        );
        let b = make_box(2, 2, 2).unwrap();
        assert!(build_shell(&b, ShellStrategy::Builtin, 1).is_err());
        assert_eq!(build_shell(&b, ShellStrategy::LayeredAuto, 1).unwrap().pipes.len(), 12);
    }
}
