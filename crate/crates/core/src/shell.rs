//! Isolating shells: pipes in the complement of a region joining each white
//! boundary square to a black one, so that the pipe arcs of any tiling
//! close up into loops.

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::PipeError;
use crate::geom::segments_meet;
use crate::pipes::{add, sub, PipeArc, P4};
use crate::region::{BoundarySquare, CellCoord, Color, Region};
use crate::tiling::REFINE_SCALE;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shell {
    pub name: String,
    /// Each pipe runs from a white boundary square center to a black one.
    pub pipes: Vec<PipeArc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShellStrategy {
    Builtin,
    LayeredAuto,
}

/// On-disk shell: pipe vertices in quarter units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellFile {
    pub version: u32,
    pub units: u32,
    pub name: String,
    pub pipes: Vec<Vec<[i64; 3]>>,
}

impl Shell {
    pub fn empty() -> Shell {
        Shell {
            name: "empty".into(),
            pipes: Vec::new(),
        }
    }

    pub fn to_file(&self) -> ShellFile {
        ShellFile {
            version: 1,
            units: 4,
            name: self.name.clone(),
            pipes: self.pipes.iter().map(|p| p.points.clone()).collect(),
        }
    }

    pub fn from_file(f: ShellFile) -> Result<Shell, PipeError> {
        if f.version != 1 || f.units != 4 {
            return Err(PipeError::Format("unsupported shell file version or units".into()));
        }
        Ok(Shell {
            name: f.name,
            pipes: f.pipes.into_iter().map(PipeArc::new).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("shell serializes")
    }

    pub fn from_json(s: &str) -> Result<Shell, PipeError> {
        let f: ShellFile = serde_json::from_str(s).map_err(|e| PipeError::Format(e.to_string()))?;
        Shell::from_file(f)
    }

    pub fn load(path: &Path) -> Result<Shell, PipeError> {
        let s = std::fs::read_to_string(path).map_err(|e| PipeError::Format(format!("{}: {e}", path.display())))?;
        Shell::from_json(&s)
    }

    pub fn save(&self, path: &Path) -> Result<(), PipeError> {
        std::fs::write(path, self.to_json()).map_err(|e| PipeError::Format(format!("{}: {e}", path.display())))
    }

    /// Checks endpoints, orthogonal approach, and that pipes stay outside the
    /// region and apart from each other.
    pub fn validate(&self, region: &Region) -> Result<(), PipeError> {
        if region.is_wrapped() {
            if self.pipes.is_empty() {
                return Ok(());
            }
            return Err(PipeError::ShellMismatch("wrapped regions take no shell".into()));
        }
        let squares = region.boundary_squares();
        let by_center: HashMap<P4, &BoundarySquare> = squares.iter().map(|s| (s.center4(), s)).collect();
        let mut used = HashSet::new();
        for (i, p) in self.pipes.iter().enumerate() {
            if p.points.len() < 3 {
                return Err(PipeError::ShellMismatch(format!("pipe {i} is too short")));
            }
            for (end, color) in [(p.start(), Color::White), (p.end(), Color::Black)] {
                let sq = by_center
                    .get(&end)
                    .ok_or_else(|| PipeError::ShellMismatch(format!("pipe {i} ends off the boundary at {end:?}")))?;
                if sq.color != color {
                    return Err(PipeError::ShellMismatch(format!(
                        "pipe {i} has a wrong-colored end at {end:?}"
                    )));
                }
                if !used.insert(end) {
                    return Err(PipeError::ShellMismatch(format!("square {end:?} used twice")));
                }
            }
            let n0 = by_center[&p.start()].normal();
            let n1 = by_center[&p.end()].normal();
            let first = sub(p.points[1], p.points[0]);
            let last = sub(p.points[p.points.len() - 2], p.end());
            if !positive_multiple(first, n0) || !positive_multiple(last, n1) {
                return Err(PipeError::ShellMismatch(format!(
                    "pipe {i} does not leave the boundary orthogonally"
                )));
            }
            for q in &p.points[1..p.points.len() - 1] {
                if in_closed_region(region, *q) {
                    return Err(PipeError::ShellMismatch(format!("pipe {i} enters the region at {q:?}")));
                }
            }
            for (a, b) in p.segments() {
                if crosses_region(region, a, b) {
                    return Err(PipeError::ShellMismatch(format!(
                        "pipe {i} crosses the region near {a:?}"
                    )));
                }
            }
        }
        if used.len() != squares.len() {
            return Err(PipeError::ShellMismatch(format!(
                "{} boundary squares, {} used",
                squares.len(),
                used.len()
            )));
        }
        for i in 0..self.pipes.len() {
            for j in i + 1..self.pipes.len() {
                for (a0, a1) in self.pipes[i].segments() {
                    for (b0, b1) in self.pipes[j].segments() {
                        if segments_meet(a0, a1, b0, b1) {
                            return Err(PipeError::SelfIntersection(a0));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn positive_multiple(a: P4, n: P4) -> bool {
    let k = n.iter().zip(a.iter()).map(|(x, y)| x * y).sum::<i64>();
    k > 0 && (0..3).all(|i| a[i] == k * n[i])
}

/// Whether a quarter-unit point lies in a closed cell of the region.
pub fn in_closed_region(region: &Region, p: P4) -> bool {
    in_closed_region_scaled(region, p, 4)
}

/// Same test for a point given in units of `1/scale`.
fn in_closed_region_scaled(region: &Region, p: P4, scale: i64) -> bool {
    let opts = |x: i64| -> [Option<i64>; 2] {
        let f = x.div_euclid(scale);
        if x.rem_euclid(scale) == 0 {
            [Some(f), Some(f - 1)]
        } else {
            [Some(f), None]
        }
    };
    for cx in opts(p[0]).into_iter().flatten() {
        for cy in opts(p[1]).into_iter().flatten() {
            for cz in opts(p[2]).into_iter().flatten() {
                if region.contains(CellCoord::new(cx, cy, cz)) {
                    return true;
                }
            }
        }
    }
    false
}

/// Whether an axis-parallel segment meets the closed region away from its
/// endpoints. Other segments are reported as crossing.
fn crosses_region(region: &Region, a: P4, b: P4) -> bool {
    let d = sub(b, a);
    if d.iter().filter(|x| **x != 0).count() != 1 {
        return true;
    }
    let n = d.iter().map(|x| x.abs()).sum::<i64>();
    (1..2 * n).any(|k| {
        let p8 = [0, 1, 2].map(|i| 2 * a[i] + d[i].signum() * k);
        in_closed_region_scaled(region, p8, 8)
    })
}

/// Routes a shell by breadth-first search on the quarter lattice outside the
/// region, within `margin` cells of its bounding box. White squares are
/// taken in order and paired with the nearest free black square of the same
/// complement component.
pub fn layered_auto(region: &Region, margin: i64) -> Result<Shell, PipeError> {
    route_shell(region, margin, None)
}

/// Like [`layered_auto`], but with `seed` set the white squares are taken in
/// shuffled order, each picks one of its three nearest free black squares at
/// random, and path search breaks ties randomly. Used to search for shells
/// with prescribed linking data.
pub fn route_shell(region: &Region, margin: i64, seed: Option<u64>) -> Result<Shell, PipeError> {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    if region.is_wrapped() {
        if region.boundary_squares().is_empty() {
            return Ok(Shell::empty());
        }
        return Err(PipeError::ShellMismatch("wrapped region with boundary".into()));
    }
    let squares = region.boundary_squares();
    let whites: Vec<&BoundarySquare> = squares.iter().filter(|s| s.color == Color::White).collect();
    let blacks: Vec<&BoundarySquare> = squares.iter().filter(|s| s.color == Color::Black).collect();
    if whites.len() != blacks.len() {
        return Err(PipeError::UnbalancedBoundary {
            white: whites.len(),
            black: blacks.len(),
        });
    }
    let (lo, hi) = region.bounds();
    let lo4 = lo.map(|v| 4 * (v - margin));
    let hi4 = hi.map(|v| 4 * (v + 1 + margin));
    let grid = Grid::new(lo4, hi4);
    let mut blocked = vec![false; grid.len()];
    for (i, b) in blocked.iter_mut().enumerate() {
        *b = in_closed_region(region, grid.point(i));
    }
    let porch = |s: &BoundarySquare| add(s.center4(), s.normal());
    let porch_idx: HashMap<P4, usize> = squares
        .iter()
        .map(|s| (s.center4(), grid.index(porch(s)).expect("porch inside margin box")))
        .collect();
    let comp = grid.components(&blocked);
    let mut bal: HashMap<usize, (usize, usize)> = HashMap::new();
    for s in &squares {
        let c = comp[porch_idx[&s.center4()]];
        let e = bal.entry(c).or_default();
        if s.color == Color::White {
            e.0 += 1
        } else {
            e.1 += 1
        }
    }
    let mut comps: Vec<_> = bal.into_iter().collect();
    comps.sort();
    for (c, (w, b)) in comps {
        if w != b {
            return Err(PipeError::UnbalancedComponent {
                component: c,
                white: w,
                black: b,
            });
        }
    }
    for s in &squares {
        blocked[porch_idx[&s.center4()]] = true;
    }
    let mut free_black: Vec<&BoundarySquare> = blacks.clone();
    let mut whites = whites;
    if let Some(rng) = rng.as_mut() {
        whites.shuffle(rng);
    }
    let mut pipes = Vec::new();
    for w in whites {
        let wp = porch(w);
        let wc = comp[porch_idx[&w.center4()]];
        let mut near: Vec<(i64, [i64; 3], usize)> = free_black
            .iter()
            .enumerate()
            .filter(|(_, b)| comp[porch_idx[&b.center4()]] == wc)
            .map(|(k, b)| {
                let bp = porch(b);
                ((0..3).map(|i| (bp[i] - wp[i]).abs()).sum::<i64>(), b.center2, k)
            })
            .collect();
        near.sort();
        let pick = match rng.as_mut() {
            Some(rng) => rng.gen_range(0..near.len().min(3)),
            None => 0,
        };
        let k = near[pick].2;
        let b = free_black.remove(k);
        let from = porch_idx[&w.center4()];
        let to = porch_idx[&b.center4()];
        let path = grid
            .shortest_path(from, to, &blocked, rng.as_mut())
            .ok_or(PipeError::RoutingFailed {
                from: w.center4(),
                margin,
            })?;
        for &i in &path {
            blocked[i] = true;
        }
        let mut pts = vec![w.center4()];
        pts.extend(path.iter().map(|&i| grid.point(i)));
        pts.push(b.center4());
        pipes.push(PipeArc::new(simplify(&pts)));
    }
    Ok(Shell {
        name: match seed {
            None => format!("layered-auto:{margin}"),
            Some(s) => format!("routed:{margin}:{s}"),
        },
        pipes,
    })
}

/// Drops interior vertices where the path goes straight on.
pub fn simplify(pts: &[P4]) -> Vec<P4> {
    let mut out: Vec<P4> = Vec::with_capacity(pts.len());
    for &p in pts {
        if out.last() == Some(&p) {
            continue;
        }
        if out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            if crate::pipes::cross(sub(b, a), sub(p, b)) == [0; 3] && dot(sub(b, a), sub(p, b)) > 0 {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

fn dot(a: P4, b: P4) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Grid {
    lo: P4,
    dims: [usize; 3],
}

impl Grid {
    fn new(lo: P4, hi: P4) -> Grid {
        Grid {
            lo,
            dims: [0, 1, 2].map(|i| (hi[i] - lo[i] + 1) as usize),
        }
    }

    fn len(&self) -> usize {
        self.dims.iter().product()
    }

    fn index(&self, p: P4) -> Option<usize> {
        let mut idx = 0;
        for i in (0..3).rev() {
            let c = p[i] - self.lo[i];
            if c < 0 || c as usize >= self.dims[i] {
                return None;
            }
            idx = idx * self.dims[i] + c as usize;
        }
        Some(idx)
    }

    fn point(&self, mut idx: usize) -> P4 {
        let mut p = [0; 3];
        for i in 0..3 {
            p[i] = self.lo[i] + (idx % self.dims[i]) as i64;
            idx /= self.dims[i];
        }
        p
    }

    fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.point(idx);
        const STEPS: [P4; 6] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];
        STEPS.into_iter().filter_map(move |s| self.index(add(p, s)))
    }

    fn components(&self, blocked: &[bool]) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut next = 0;
        for start in 0..self.len() {
            if blocked[start] || comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut q = VecDeque::from([start]);
            while let Some(i) = q.pop_front() {
                for j in self.neighbors(i) {
                    if !blocked[j] && comp[j] == usize::MAX {
                        comp[j] = next;
                        q.push_back(j);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    fn shortest_path(
        &self,
        from: usize,
        to: usize,
        blocked: &[bool],
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.len()];
        prev[from] = from;
        let mut q = VecDeque::from([from]);
        while let Some(i) = q.pop_front() {
            if i == to {
                let mut path = vec![to];
                let mut c = to;
                while c != from {
                    c = prev[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            let mut next: Vec<usize> = self.neighbors(i).collect();
            if let Some(rng) = rng.as_deref_mut() {
                next.shuffle(rng);
            }
            for j in next {
                if prev[j] == usize::MAX && (!blocked[j] || j == to) {
                    prev[j] = i;
                    q.push_back(j);
                }
            }
        }
        None
    }
}

/// Shell for the 5x refined region: old pipes scaled so they end at the
/// central small square of each old square, plus twelve short pipes per old
/// square pairing the remaining small squares.
pub fn refine_shell(region: &Region, shell: &Shell) -> Shell {
    let k = REFINE_SCALE;
    let mut pipes: Vec<PipeArc> = shell
        .pipes
        .iter()
        .map(|p| PipeArc::new(p.points.iter().map(|q| q.map(|v| k * v)).collect()))
        .collect();
    // Pairs of small squares, in face coordinates, covering the 5x5 block
    // minus its center.
    const PAIRS: [[(i64, i64); 2]; 12] = [
        [(0, 0), (1, 0)],
        [(2, 0), (3, 0)],
        [(4, 0), (4, 1)],
        [(4, 2), (4, 3)],
        [(4, 4), (3, 4)],
        [(2, 4), (1, 4)],
        [(0, 4), (0, 3)],
        [(0, 2), (0, 1)],
        [(1, 1), (2, 1)],
        [(3, 1), (3, 2)],
        [(3, 3), (2, 3)],
        [(1, 3), (1, 2)],
    ];
    for sq in region.boundary_squares() {
        let a = sq.axis.index();
        let (u, v) = ((a + 1) % 3, (a + 2) % 3);
        let n = sq.normal();
        let cell = sq.cell.to_array();
        // Refined cell adjacent to the face, in refined cell units.
        let layer = if sq.side > 0 { k * cell[a] + k - 1 } else { k * cell[a] };
        let small = |(i, j): (i64, i64)| -> (P4, Color) {
            let mut c = [0; 3];
            c[a] = layer;
            c[u] = k * cell[u] + i;
            c[v] = k * cell[v] + j;
            let cc = CellCoord::from(c);
            let mut center = c.map(|x| 4 * x + 2);
            center[a] += 2 * sq.side;
            (center, region.convention().color(cc))
        };
        for pair in PAIRS {
            let (c0, col0) = small(pair[0]);
            let (c1, _) = small(pair[1]);
            let (w, b) = if col0 == Color::White { (c0, c1) } else { (c1, c0) };
            pipes.push(PipeArc::new(vec![w, add(w, n), add(b, n), b]));
        }
    }
    Shell {
        name: format!("{}:refined", shell.name),
        pipes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{make_box, make_region};
    use crate::tiling::refine_region;

    fn hex() -> Region {
        let cells = (0..8)
            .map(|k| CellCoord::new(k & 1, (k >> 1) & 1, (k >> 2) & 1))
            .filter(|c| *c != CellCoord::new(1, 1, 0) && *c != CellCoord::new(0, 0, 1));
        make_region(cells, [None; 3]).unwrap()
    }

    #[test]
    fn auto_shells_are_valid() {
        for r in [
            make_box(2, 2, 1).unwrap(),
            make_box(3, 3, 2).unwrap(),
            hex(),
            make_box(2, 2, 2).unwrap(),
        ] {
            let s = layered_auto(&r, 1).unwrap();
            assert_eq!(s.pipes.len(), r.boundary_squares().len() / 2);
            s.validate(&r).unwrap();
        }
    }

    #[test]
    fn unbalanced_boundary() {
        let r = make_box(3, 3, 1).unwrap();
        assert!(matches!(layered_auto(&r, 1), Err(PipeError::UnbalancedBoundary { .. })));
    }

    #[test]
    fn validation_catches_bad_pipes() {
        let r = make_box(2, 2, 1).unwrap();
        let mut s = layered_auto(&r, 1).unwrap();
        s.pipes[0].points.reverse();
        assert!(matches!(s.validate(&r), Err(PipeError::ShellMismatch(_))));
        let mut s = layered_auto(&r, 1).unwrap();
        s.pipes.pop();
        assert!(s.validate(&r).is_err());
    }

    #[test]
    fn refined_shell_is_valid() {
        let r = make_box(2, 2, 1).unwrap();
        let s = layered_auto(&r, 1).unwrap();
        let rs = refine_shell(&r, &s);
        assert_eq!(rs.pipes.len(), s.pipes.len() + 12 * 16);
        let rr = refine_region(&r).unwrap();
        rs.validate(&rr).unwrap();
    }

    #[test]
    fn one_square_refines_to_25() {
        // Thirteen of one color and twelve of the other; the center is used
        // by the old pipe.
        let r = make_box(1, 1, 1).unwrap();
        let sq = r.boundary_squares()[0];
        let rr = refine_region(&r).unwrap();
        let small: Vec<_> = rr
            .boundary_squares()
            .into_iter()
            .filter(|s| s.axis == sq.axis && s.side == sq.side)
            .collect();
        assert_eq!(small.len(), 25);
        let whites = small.iter().filter(|s| s.color == Color::White).count();
        assert_eq!(whites, 12);
    }

    #[test]
    fn simplify_merges_straight_runs() {
        let pts = [[0, 0, 0], [1, 0, 0], [2, 0, 0], [2, 1, 0], [2, 2, 0]];
        assert_eq!(simplify(&pts), vec![[0, 0, 0], [2, 0, 0], [2, 2, 0]]);
    }
}
