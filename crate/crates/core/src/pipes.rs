//! Polygonal pipe arcs inside dominoes. All coordinates are stored times
//! four, so quarter-integer points are exact.

use crate::region::{Axis, CellCoord, Region};
use crate::tiling::Domino;

pub type P4 = [i64; 3];

/// Directed open polyline, vertices in quarter units.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PipeArc {
    pub points: Vec<P4>,
}

impl PipeArc {
    pub fn new(points: Vec<P4>) -> Self {
        PipeArc { points }
    }

    pub fn start(&self) -> P4 {
        self.points[0]
    }

    pub fn end(&self) -> P4 {
        *self.points.last().expect("nonempty arc")
    }

    pub fn segments(&self) -> impl Iterator<Item = (P4, P4)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn translated(&self, v: P4) -> PipeArc {
        PipeArc::new(self.points.iter().map(|p| add(*p, v)).collect())
    }
}

/// Arcs of the reference domino `[0,2]x[0,1]x[0,1]`, black cube at the origin.
pub const REFERENCE_ARCS: [&[P4]; 5] = [
    &[[0, 2, 2], [8, 2, 2]],
    &[[2, 0, 2], [2, 1, 2], [6, 1, 2], [6, 0, 2]],
    &[[2, 2, 0], [2, 2, 1], [6, 2, 1], [6, 2, 0]],
    &[[2, 4, 2], [2, 3, 2], [6, 3, 2], [6, 4, 2]],
    &[[2, 2, 4], [2, 2, 3], [6, 2, 3], [6, 2, 4]],
];

/// Closed loop added in six-pipe mode: forward along the domino axis near
/// one edge, back along the opposite edge, linking nothing.
pub const REFERENCE_LOOP: [P4; 6] = [[1, 1, 1], [7, 1, 1], [7, 3, 1], [7, 3, 3], [1, 3, 3], [1, 3, 1]];

pub fn add(a: P4, b: P4) -> P4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: P4, b: P4) -> P4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: P4, b: P4) -> P4 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Rotation taking +x to the domino step; columns are images of the axes.
fn rotation_for(step: P4, axis: Axis) -> [P4; 3] {
    let mut t = [0; 3];
    t[(axis.index() + 1) % 3] = 1;
    [step, t, cross(step, t)]
}

fn apply(rot: &[P4; 3], v: P4) -> P4 {
    let mut out = [0; 3];
    for (i, col) in rot.iter().enumerate() {
        for k in 0..3 {
            out[k] += col[k] * v[i];
        }
    }
    out
}

/// Maps a reference point (quarter units) into the domino's position.
pub fn domino_transform(region: &Region, d: &Domino) -> impl Fn(P4) -> P4 {
    let (axis, s) = d.direction(region);
    let mut step = [0; 3];
    step[axis.index()] = s;
    let rot = rotation_for(step, axis);
    let center = cell_center4(d.black);
    move |p| add(center, apply(&rot, sub(p, [2, 2, 2])))
}

pub fn cell_center4(c: CellCoord) -> P4 {
    c.to_array().map(|v| 4 * v + 2)
}

/// The five arcs of a domino, oriented from the black cube to the white one.
pub fn domino_pipes(region: &Region, d: &Domino) -> [PipeArc; 5] {
    let f = domino_transform(region, d);
    REFERENCE_ARCS.map(|pts| PipeArc::new(pts.iter().map(|p| f(*p)).collect()))
}

/// The extra closed loop of six-pipe mode.
pub fn six_pipe_loop(region: &Region, d: &Domino) -> Vec<P4> {
    let f = domino_transform(region, d);
    REFERENCE_LOOP.iter().map(|p| f(*p)).collect()
}

/// Five arcs plus the closed loop.
pub fn six_pipe_arcs(region: &Region, d: &Domino) -> ([PipeArc; 5], Vec<P4>) {
    (domino_pipes(region, d), six_pipe_loop(region, d))
}

pub use crate::framing::{Framing, DEFAULT_FRAMING};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::make_box;

    fn seg_dist_zero(a: (P4, P4), b: (P4, P4)) -> bool {
        // Axis-parallel segments on the quarter lattice meet iff they share a lattice point.
        let pts = |s: (P4, P4)| -> Vec<P4> {
            let d = sub(s.1, s.0);
            let n = d.iter().map(|v| v.abs()).max().unwrap();
            (0..=n).map(|k| add(s.0, d.map(|v| v.signum() * k))).collect()
        };
        let pa = pts(a);
        pts(b).iter().any(|p| pa.contains(p))
    }

    #[test]
    fn reference_arcs() {
        let r = make_box(2, 1, 1).unwrap();
        let d = Domino::new(CellCoord::new(0, 0, 0), CellCoord::new(1, 0, 0));
        let arcs = domino_pipes(&r, &d);
        assert_eq!(arcs[0].points, vec![[0, 2, 2], [8, 2, 2]]);
        assert_eq!(arcs[1].points, vec![[2, 0, 2], [2, 1, 2], [6, 1, 2], [6, 0, 2]]);
    }

    #[test]
    fn arcs_are_disjoint_and_hit_faces() {
        let r = make_box(1, 2, 1).unwrap();
        let d = Domino::new(CellCoord::new(0, 1, 0), CellCoord::new(0, 0, 0));
        let arcs = domino_pipes(&r, &d);
        for i in 0..5 {
            for j in i + 1..5 {
                for sa in arcs[i].segments() {
                    for sb in arcs[j].segments() {
                        assert!(!seg_dist_zero(sa, sb));
                    }
                }
            }
            // Start on a face of the black cube, end on a face of the white cube.
            let s = arcs[i].start();
            let e = arcs[i].end();
            assert_eq!(s.iter().filter(|v| *v % 4 == 0).count(), 1);
            assert_eq!(e.iter().filter(|v| *v % 4 == 0).count(), 1);
            assert!(s[1] >= 4 && e[1] <= 4);
        }
        let lp = six_pipe_loop(&r, &d);
        for k in 0..lp.len() {
            let s = (lp[k], lp[(k + 1) % lp.len()]);
            for a in &arcs {
                for sb in a.segments() {
                    assert!(!seg_dist_zero(s, sb));
                }
            }
        }
    }

    #[test]
    fn rotation_is_proper() {
        for axis in Axis::ALL {
            for s in [1, -1] {
                let mut step = [0; 3];
                step[axis.index()] = s;
                let m = rotation_for(step, axis);
                let c = cross(m[1], m[2]);
                let det = m[0][0] * c[0] + m[0][1] * c[1] + m[0][2] * c[2];
                assert_eq!(det, 1);
            }
        }
    }
}
