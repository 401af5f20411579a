//! Closing pipe arcs into loops, and reading and writing curve systems.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{LinkError, PipeError};
use crate::framing::FramingData;
use crate::geom::segments_meet;
use crate::linkhel::{self, TabulationMatrix};
use crate::pipes::{add, domino_pipes, six_pipe_loop, sub, Framing, PipeArc, DEFAULT_FRAMING, P4};
use crate::region::Region;
use crate::shell::{simplify, Shell};
use crate::tiling::Tiling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PipeMode {
    Five,
    Six,
}

/// Where a piece of a curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ArcRef {
    Domino { domino: usize, arc: usize },
    Shell { pipe: usize },
    Loop { domino: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    /// Closed polyline in quarter units; the first vertex is not repeated.
    pub vertices: Vec<P4>,
    pub arcs: Vec<ArcRef>,
    /// Translation between the end and the start; nonzero only for curves
    /// that wind around a wrapped region.
    #[serde(default)]
    pub winding: P4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSystem {
    pub curves: Vec<Curve>,
    pub phi: Rational64,
    pub framing: Framing,
    pub shell: String,
    pub mode: PipeMode,
    pub wrapped: bool,
}

/// Settings shared by every curve system built for one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveOptions {
    /// Flux carried by each pipe.
    pub phi: Rational64,
    pub mode: PipeMode,
    pub framing: Framing,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions {
            phi: Rational64::new(1, 6),
            mode: PipeMode::Five,
            framing: DEFAULT_FRAMING,
        }
    }
}

/// All directed arcs of a tiling and shell, tagged with their origin.
pub fn collect_arcs(t: &Tiling, shell: &Shell) -> Vec<(ArcRef, PipeArc)> {
    let r = t.region();
    let mut arcs = Vec::with_capacity(5 * t.dominoes().len() + shell.pipes.len());
    for (i, d) in t.dominoes().iter().enumerate() {
        for (k, a) in domino_pipes(r, d).into_iter().enumerate() {
            arcs.push((ArcRef::Domino { domino: i, arc: k }, a));
        }
    }
    for (i, p) in shell.pipes.iter().enumerate() {
        arcs.push((ArcRef::Shell { pipe: i }, p.clone()));
    }
    arcs
}

fn canonical4(region: &Region, p: P4) -> P4 {
    let w = region.wrap();
    [0, 1, 2].map(|i| match w[i] {
        Some(per) => p[i].rem_euclid(4 * per),
        None => p[i],
    })
}

/// Joins the arcs of `t` and the shell pipes into closed curves. Six-pipe
/// mode appends one extra loop per domino.
pub fn assemble_curves(t: &Tiling, shell: &Shell, opts: &CurveOptions) -> Result<CurveSystem, PipeError> {
    let CurveOptions { phi, mode, framing } = *opts;
    let r = t.region();
    if r.is_wrapped() && !shell.pipes.is_empty() {
        return Err(PipeError::ShellMismatch("wrapped regions take no shell".into()));
    }
    let arcs = collect_arcs(t, shell);
    let mut by_start: HashMap<P4, usize> = HashMap::with_capacity(arcs.len());
    for (i, (_, a)) in arcs.iter().enumerate() {
        if by_start.insert(canonical4(r, a.start()), i).is_some() {
            return Err(PipeError::ShellMismatch(format!("two arcs start at {:?}", a.start())));
        }
    }
    let mut used = vec![false; arcs.len()];
    let mut curves = Vec::new();
    for first in 0..arcs.len() {
        if used[first] {
            continue;
        }
        let mut pts: Vec<P4> = Vec::new();
        let mut refs = Vec::new();
        let mut cur = first;
        let mut shift = [0; 3];
        loop {
            used[cur] = true;
            let (tag, arc) = &arcs[cur];
            refs.push(*tag);
            let moved = arc.translated(shift);
            if !pts.is_empty() {
                pts.pop();
            }
            pts.extend_from_slice(&moved.points);
            let end = moved.end();
            let next = *by_start
                .get(&canonical4(r, end))
                .ok_or(PipeError::DanglingEndpoint(end))?;
            shift = sub(end, arcs[next].1.start());
            if next == first {
                break;
            }
            if used[next] {
                return Err(PipeError::DanglingEndpoint(end));
            }
            cur = next;
        }
        let start = pts[0];
        let last = pts.pop().expect("closed");
        let winding = sub(last, start);
        curves.push(Curve {
            vertices: close_simplify(&pts),
            arcs: refs,
            winding,
        });
    }
    if mode == PipeMode::Six {
        for (i, d) in t.dominoes().iter().enumerate() {
            curves.push(Curve {
                vertices: six_pipe_loop(r, d),
                arcs: vec![ArcRef::Loop { domino: i }],
                winding: [0; 3],
            });
        }
    }
    let sys = CurveSystem {
        curves,
        phi,
        framing,
        shell: shell.name.clone(),
        mode,
        wrapped: r.is_wrapped(),
    };
    if !sys.wrapped {
        sys.check_disjoint()?;
    }
    Ok(sys)
}

/// Simplifies a closed polyline, including across the seam.
fn close_simplify(pts: &[P4]) -> Vec<P4> {
    let mut v = simplify(pts);
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let (a, b, c) = (v[n - 1], v[0], v[1]);
        if crate::pipes::cross(sub(b, a), sub(c, b)) == [0; 3] {
            v.remove(0);
            continue;
        }
        let (a, b, c) = (v[n - 2], v[n - 1], v[0]);
        if crate::pipes::cross(sub(b, a), sub(c, b)) == [0; 3] {
            v.pop();
            continue;
        }
        return v;
    }
}

impl Curve {
    pub fn segments(&self) -> impl Iterator<Item = (P4, P4)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| {
            (
                self.vertices[i],
                if i + 1 < n {
                    self.vertices[i + 1]
                } else {
                    add(self.vertices[0], self.winding)
                },
            )
        })
    }

    /// Whether the curve is made of domino arcs only and stays inside
    /// dominoes (no shell pipe).
    pub fn is_interior(&self) -> bool {
        self.arcs.iter().all(|a| !matches!(a, ArcRef::Shell { .. }))
    }
}

impl CurveSystem {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn polylines(&self) -> Vec<Vec<P4>> {
        self.curves.iter().map(|c| c.vertices.clone()).collect()
    }

    /// Segments of distinct curves never meet, and non-adjacent segments of
    /// one curve never meet.
    pub fn check_disjoint(&self) -> Result<(), PipeError> {
        let segs: Vec<(usize, usize, P4, P4)> = self
            .curves
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.segments().enumerate().map(move |(si, (a, b))| (ci, si, a, b)))
            .collect();
        let lens: Vec<usize> = self.curves.iter().map(|c| c.vertices.len()).collect();
        // Sort by min x for a sweep.
        let mut order: Vec<usize> = (0..segs.len()).collect();
        order.sort_by_key(|&i| segs[i].2[0].min(segs[i].3[0]));
        for (oi, &i) in order.iter().enumerate() {
            let (ci, si, a0, a1) = segs[i];
            let max_x = a0[0].max(a1[0]);
            for &j in &order[oi + 1..] {
                let (cj, sj, b0, b1) = segs[j];
                if b0[0].min(b1[0]) > max_x {
                    break;
                }
                if ci == cj {
                    let n = lens[ci];
                    if (si + 1) % n == sj || (sj + 1) % n == si || si == sj {
                        continue;
                    }
                }
                if segments_meet(a0, a1, b0, b1) {
                    return Err(PipeError::SelfIntersection(a0));
                }
            }
        }
        Ok(())
    }

    pub fn tabulation_matrix(&self) -> Result<TabulationMatrix, LinkError> {
        if self.wrapped {
            return Err(LinkError::Wrapped);
        }
        linkhel::tabulation_matrix(&self.polylines(), &self.framing)
    }

    /// Helicity `phi^2 * sum(L)`.
    pub fn helicity(&self) -> Result<Rational64, LinkError> {
        let m = self.tabulation_matrix()?;
        Ok(self.phi * self.phi * Rational64::from_integer(m.sum()))
    }

    /// Net signed number of crossings of the curves through the plane
    /// `axis = c8 / 8`, counting only crossing points inside the region.
    /// `c8` must be odd so the plane avoids every curve vertex.
    pub fn section_flux(&self, region: &Region, axis: usize, c8: i64) -> i64 {
        let mut total = 0;
        for c in &self.curves {
            for (a, b) in c.segments() {
                total += segment_plane_crossings(region, a, b, axis, c8);
            }
        }
        total
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile {
            version: 1,
            units: 4,
            phi: format!("{}", self.phi),
            framing: self.framing,
            shell: self.shell.clone(),
            mode: self.mode,
            wrapped: self.wrapped,
            curves: self
                .curves
                .iter()
                .enumerate()
                .map(|(i, c)| CurveRecord {
                    id: i,
                    framing: self.framing.data(&c.vertices).ok(),
                    curve: c.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("curves serialize")
    }

    pub fn from_json(s: &str) -> Result<CurveSystem, PipeError> {
        let f: CurveFile = serde_json::from_str(s).map_err(|e| PipeError::Format(e.to_string()))?;
        if f.version != 1 || f.units != 4 {
            return Err(PipeError::Format("unsupported curve file version or units".into()));
        }
        let phi = crate::parse_rational(&f.phi).map_err(PipeError::Format)?;
        Ok(CurveSystem {
            curves: f.curves.into_iter().map(|r| r.curve).collect(),
            phi,
            framing: f.framing,
            shell: f.shell,
            mode: f.mode,
            wrapped: f.wrapped,
        })
    }

    /// Polyline geometry with `v` and `l` records, in unit lengths.
    pub fn to_obj(&self) -> String {
        let mut s = String::from("# closed flux curves\n");
        let mut base = 1;
        for (i, c) in self.curves.iter().enumerate() {
            let _ = writeln!(s, "o curve{i}");
            for p in &c.vertices {
                let _ = writeln!(s, "v {} {} {}", p[0] as f64 / 4.0, p[1] as f64 / 4.0, p[2] as f64 / 4.0);
            }
            let idx: Vec<String> = (0..c.vertices.len())
                .chain(std::iter::once(0))
                .map(|k| (base + k).to_string())
                .collect();
            let _ = writeln!(s, "l {}", idx.join(" "));
            base += c.vertices.len();
        }
        s
    }
}

/// Signed crossings of segment `ab` (quarter units) with the plane
/// `axis = c8/8` and, for wrapped axes, all its translates; only crossings
/// at points of the region count.
pub fn segment_plane_crossings(region: &Region, a: P4, b: P4, axis: usize, c8: i64) -> i64 {
    let (a8, b8) = (a.map(|v| 2 * v), b.map(|v| 2 * v));
    let (lo, hi) = (a8[axis].min(b8[axis]), a8[axis].max(b8[axis]));
    let planes: Vec<i64> = match region.wrap()[axis] {
        None => vec![c8],
        Some(p) => {
            let per = 8 * p;
            let first = lo + (c8 - lo).rem_euclid(per);
            (0..).map(|k| first + k * per).take_while(|x| *x <= hi).collect()
        }
    };
    let mut total = 0;
    for pl in planes {
        if pl <= lo || pl >= hi {
            continue;
        }
        // Point on the segment at the plane, as a rational with denominator den.
        let den = b8[axis] - a8[axis];
        let num = pl - a8[axis];
        let point_in = {
            // Cell containing the crossing point: coordinates (a8 + (b8-a8)*num/den) / 8.
            let mut ok = true;
            let mut cell = [0i64; 3];
            for k in 0..3 {
                let numk = a8[k] * den + (b8[k] - a8[k]) * num;
                let d8 = 8 * den;
                let (n, d) = if d8 < 0 { (-numk, -d8) } else { (numk, d8) };
                if k != axis && n.rem_euclid(d) == 0 {
                    // On a cell face: the pipes never run inside faces.
                    ok = false;
                }
                cell[k] = n.div_euclid(d);
            }
            ok && region.contains(cell.into())
        };
        if point_in {
            total += den.signum();
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub id: usize,
    #[serde(flatten)]
    pub curve: Curve,
    /// Push-off normals per segment, in eighth units; absent when the
    /// framing is undefined for this curve.
    pub framing: Option<FramingData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub version: u32,
    pub units: u32,
    pub phi: String,
    pub framing: Framing,
    pub shell: String,
    pub mode: PipeMode,
    pub wrapped: bool,
    pub curves: Vec<CurveRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::make_box;
    use crate::shell::layered_auto;
    use crate::tiling::enumerate_tilings;
    use std::sync::Arc;

    #[test]
    fn box221_curves_close() {
        let r = Arc::new(make_box(2, 2, 1).unwrap());
        let shell = layered_auto(&r, 1).unwrap();
        for t in enumerate_tilings(&r).unwrap() {
            let sys = assemble_curves(&t, &shell, &CurveOptions::default()).unwrap();
            let arcs: usize = sys.curves.iter().map(|c| c.arcs.len()).sum();
            assert_eq!(arcs, 5 * 2 + shell.pipes.len());
            assert!(sys.curves.iter().all(|c| c.winding == [0; 3]));
        }
    }

    #[test]
    fn round_trip_json() {
        let r = Arc::new(make_box(2, 2, 1).unwrap());
        let shell = layered_auto(&r, 1).unwrap();
        let t = &enumerate_tilings(&r).unwrap()[0];
        let sys = assemble_curves(
            t,
            &shell,
            &CurveOptions {
                mode: PipeMode::Six,
                ..Default::default()
            },
        )
        .unwrap();
        let back = CurveSystem::from_json(&sys.to_json()).unwrap();
        assert_eq!(back, sys);
        let obj = sys.to_obj();
        assert_eq!(obj.lines().filter(|l| l.starts_with("l ")).count(), sys.len());
    }

    #[test]
    fn torus_curves_wind() {
        let r =
            Arc::new(crate::region::make_region(make_box(4, 4, 4).unwrap().cells().copied(), [Some(4); 3]).unwrap());
        let t = crate::tiling::find_tiling(&r).unwrap();
        let sys = assemble_curves(&t, &Shell::empty(), &CurveOptions::default()).unwrap();
        assert_eq!(sys.curves.iter().map(|c| c.arcs.len()).sum::<usize>(), 5 * 32);
        assert_eq!(sys.tabulation_matrix(), Err(LinkError::Wrapped));
    }
}
