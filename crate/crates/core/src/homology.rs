//! Chains on the refined complex and the homology classes attached to
//! tilings.
//!
//! Chains live on the refined complex, in quarter units: cube centers of the
//! region sit at `4c + 2`, face centers at `4c + 4` along one axis. An edge
//! code has one odd coordinate and is oriented towards increasing values of
//! that coordinate.
//!
//! Classes are computed on the dual graph: one node per unit cube, one edge
//! per face. A chain made of center-to-face half edges is read off as the
//! net flux through each face. Cycles of this graph modulo the small loops
//! around unit edges compute H1 of the region; adding a node for the whole
//! boundary and the loops around boundary edges computes H1 relative to the
//! boundary.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cubical::{boundary_of, canonical, Code};
use crate::error::{HomologyError, TilingError};
use crate::linalg::{self, Echelon, SparseVec, Q};
use crate::region::{CellCoord, Color, Region};
use crate::tiling::Tiling;

/// Upper bound on refined cells handled before giving up.
pub const SHARP_CELL_CAP: usize = 1_000_000;

/// A chain on the refined complex with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    pub dim: usize,
    terms: BTreeMap<Code, Rational64>,
}

impl Chain {
    pub fn zero(dim: usize) -> Chain {
        Chain {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<Code, Rational64> {
        &self.terms
    }

    pub fn get(&self, code: &Code) -> Rational64 {
        self.terms.get(code).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, code: Code, c: Rational64) {
        let e = self.terms.entry(code).or_insert_with(Rational64::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&code);
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        self.combine(other, Rational64::one())
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.combine(other, -Rational64::one())
    }

    /// `self + k * other`.
    pub fn combine(&self, other: &Chain, k: Rational64) -> Chain {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (c, v) in &other.terms {
            out.add_term(*c, *v * k);
        }
        out
    }

    pub fn scale(&self, k: Rational64) -> Chain {
        let mut out = Chain::zero(self.dim);
        if !k.is_zero() {
            out.terms = self.terms.iter().map(|(c, v)| (*c, *v * k)).collect();
        }
        out
    }

    /// Boundary on the refined complex of `region`.
    pub fn boundary(&self, region: &Region) -> Chain {
        let periods = sharp_periods(region);
        let mut out = Chain::zero(self.dim.saturating_sub(1));
        if self.dim == 0 {
            return out;
        }
        for (c, v) in &self.terms {
            for (f, s) in boundary_of(c, &periods) {
                out.add_term(f, *v * s);
            }
        }
        out
    }

    pub fn to_file(&self) -> ChainFile {
        ChainFile {
            dim: self.dim,
            terms: self.terms.iter().map(|(c, v)| (*c, *v.numer(), *v.denom())).collect(),
        }
    }

    pub fn from_file(f: &ChainFile) -> Chain {
        let mut c = Chain::zero(f.dim);
        for &(code, n, d) in &f.terms {
            c.add_term(code, Rational64::new(n, d));
        }
        c
    }
}

/// Structured text form of a chain: `(cell code, numerator, denominator)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFile {
    pub dim: usize,
    pub terms: Vec<(Code, i64, i64)>,
}

/// Periods of the refined complex in quarter units.
pub fn sharp_periods(region: &Region) -> [Option<i64>; 3] {
    region.wrap().map(|p| p.map(|p| 4 * p))
}

fn cell_center(c: CellCoord) -> Code {
    c.to_array().map(|v| 4 * v + 2)
}

/// Half edge from the center of `cell` to the center of its face on side
/// `dir` of `axis`, as (code, orientation sign).
fn half_edge(region: &Region, cell: CellCoord, axis: usize, dir: i64) -> (Code, i64) {
    let mut code = cell_center(cell);
    code[axis] += dir;
    (canonical(&code, &sharp_periods(region)), dir)
}

/// The tiling as a 1-chain: each domino is the path from its black center
/// through the shared face to its white center.
pub fn domino_chain(t: &Tiling) -> Chain {
    let r = t.region();
    let mut ch = Chain::zero(1);
    for d in t.dominoes() {
        let (axis, dir) = d.direction(r);
        let a = axis.index();
        let (e1, s1) = half_edge(r, d.black, a, dir);
        let (e2, s2) = half_edge(r, d.white, a, -dir);
        ch.add_term(e1, Rational64::from_integer(s1));
        ch.add_term(e2, Rational64::from_integer(-s2));
    }
    ch
}

/// Sum of the center-to-face edges of black cubes minus those of white cubes.
pub fn q1_chain(region: &Region) -> Chain {
    let mut ch = Chain::zero(1);
    for &c in region.cells() {
        let sign = if region.color_of(c) == Color::Black { 1 } else { -1 };
        for a in 0..3 {
            for dir in [1, -1] {
                let (e, s) = half_edge(region, c, a, dir);
                ch.add_term(e, Rational64::from_integer(sign * s));
            }
        }
    }
    ch
}

/// `6t - q1`.
pub fn six_t_minus_q1(t: &Tiling) -> Chain {
    domino_chain(t)
        .scale(Rational64::from_integer(6))
        .sub(&q1_chain(t.region()))
}

/// The 0-chain `+1` at white boundary square centers and `-1` at black ones.
pub fn boundary_square_chain(region: &Region) -> Chain {
    let mut ch = Chain::zero(0);
    for s in region.boundary_squares() {
        let sign = if s.color == Color::White { 1 } else { -1 };
        ch.add_term(
            canonical(&s.center4(), &sharp_periods(region)),
            Rational64::from_integer(sign),
        );
    }
    ch
}

/// Net flux of a chain of center-to-face half edges through each face,
/// keyed by (lower cell, axis), in the direction of increasing coordinate.
fn face_fluxes(region: &Region, ch: &Chain) -> Result<HashMap<(CellCoord, usize), Rational64>, HomologyError> {
    let periods = sharp_periods(region);
    let mut out: HashMap<(CellCoord, usize), Rational64> = HashMap::new();
    for (code, v) in ch.terms() {
        let odd: Vec<usize> = (0..3).filter(|&a| code[a].rem_euclid(2) == 1).collect();
        if odd.len() != 1 || (0..3).any(|a| a != odd[0] && code[a].rem_euclid(4) != 2) {
            return Err(HomologyError::NotDualChain(*code));
        }
        let a = odd[0];
        let mut cc = code.map(|x| (x - 2).div_euclid(4));
        let upper_half = code[a].rem_euclid(4) == 1;
        if upper_half {
            // From the face at 4c to the center of c: lower cell is c - e_a.
            cc[a] = (code[a] - 1).div_euclid(4) - 1;
        } else {
            cc[a] = (code[a] - 3).div_euclid(4);
        }
        let lower = canonical_cell(region, CellCoord::from(cc), &periods);
        let mut upper_c = cc;
        upper_c[a] += 1;
        let upper = canonical_cell(region, CellCoord::from(upper_c), &periods);
        let owner = if upper_half { upper } else { lower };
        if !region.contains(owner) {
            return Err(HomologyError::NotDualChain(*code));
        }
        // Only the half on the lower side counts when both cells are present.
        if upper_half && region.contains(lower) {
            continue;
        }
        *out.entry((lower, a)).or_insert_with(Rational64::zero) += *v;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

fn canonical_cell(region: &Region, c: CellCoord, _periods: &[Option<i64>; 3]) -> CellCoord {
    region.canonical(c)
}

/// H1 of the region (`relative = false`) or of the region relative to its
/// boundary, as a quotient of the dual-graph cycle space.
#[derive(Debug, Clone)]
pub struct DualHomology {
    relative: bool,
    cells: HashMap<CellCoord, usize>,
    /// Dual edges (faces) keyed by (lower cell, axis).
    edges: HashMap<(CellCoord, usize), usize>,
    /// Column of each non-tree edge.
    column: HashMap<usize, usize>,
    echelon: Echelon,
    /// Non-pivot columns, i.e. the class coordinates.
    free: Vec<usize>,
}

impl DualHomology {
    /// `relative = false`: H1(R). `relative = true`: H1(R, dR).
    pub fn new(region: &Region, relative: bool) -> Result<Self, HomologyError> {
        let sharp_cells = 64 * region.len();
        if sharp_cells > SHARP_CELL_CAP {
            return Err(HomologyError::TooLarge {
                cells: sharp_cells,
                cap: SHARP_CELL_CAP,
            });
        }
        let cells: HashMap<CellCoord, usize> = region.cells().enumerate().map(|(i, c)| (*c, i)).collect();
        let infinity = cells.len();
        // Dual edges: interior faces, plus boundary faces to the extra node.
        let mut ends: Vec<(usize, usize)> = Vec::new();
        let mut edges: HashMap<(CellCoord, usize), usize> = HashMap::new();
        for &c in region.cells() {
            for a in 0..3 {
                let up = region.canonical(c.offset(crate::region::Axis::from_index(a), 1));
                let down = region.canonical(c.offset(crate::region::Axis::from_index(a), -1));
                if region.contains(up) {
                    edges.insert((c, a), ends.len());
                    ends.push((cells[&c], cells[&up]));
                } else if relative {
                    edges.insert((c, a), ends.len());
                    ends.push((cells[&c], infinity));
                }
                if relative && !region.contains(down) {
                    edges.insert((down, a), ends.len());
                    ends.push((infinity, cells[&c]));
                }
            }
        }
        let n_nodes = if relative { infinity + 1 } else { infinity };
        // Spanning forest by BFS; the non-tree edges index the cycle space.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
        for (e, &(u, v)) in ends.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let mut tree = vec![false; ends.len()];
        let mut seen = vec![false; n_nodes];
        for s in 0..n_nodes {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &(v, e) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        tree[e] = true;
                        q.push_back(v);
                    }
                }
            }
        }
        let mut column = HashMap::new();
        for (e, t) in tree.iter().enumerate() {
            if !*t {
                let k = column.len();
                column.insert(e, k);
            }
        }
        let mut h = DualHomology {
            relative,
            cells,
            edges,
            column,
            echelon: Echelon::new(),
            free: Vec::new(),
        };
        // Loops around unit edges: the coboundary of each edge, read on faces.
        let coarse = region.coarse_complex();
        let periods = coarse.periods();
        let mut cofaces: HashMap<Code, Vec<(Code, i64)>> = HashMap::new();
        for f in coarse.cells(2) {
            for (e, s) in boundary_of(f, &periods) {
                cofaces.entry(e).or_default().push((*f, s));
            }
        }
        let mut unit_edges: Vec<&Code> = coarse.cells(1).iter().collect();
        unit_edges.sort();
        for e in unit_edges {
            if !relative && coarse.in_boundary(e) {
                continue;
            }
            let mut flux = HashMap::new();
            for &(f, s) in cofaces.get(e).map(|v| v.as_slice()).unwrap_or(&[]) {
                let a = (0..3).find(|&a| f[a].rem_euclid(2) == 0).expect("face has a normal");
                let mut lower = f.map(|x| (x - 1).div_euclid(2));
                lower[a] = f[a] / 2 - 1;
                let lower = region.canonical(CellCoord::from(lower));
                let sign = if a % 2 == 0 { s } else { -s };
                *flux.entry((lower, a)).or_insert_with(Rational64::zero) += Rational64::from_integer(sign);
            }
            let v = h.cycle_vector(&flux)?;
            h.echelon.insert(v)?;
        }
        if !relative {
            // The cells around one lattice point have a star-shaped union, so
            // every dual cycle among them bounds. Around interior edges this
            // adds nothing new; at pinched boundary points it does.
            let mut points: Vec<[i64; 3]> = region
                .cells()
                .flat_map(|c| (0..8).map(move |k| [c.x + (k & 1), c.y + ((k >> 1) & 1), c.z + ((k >> 2) & 1)]))
                .map(|p| canonical_point(p, &region.wrap()))
                .collect();
            points.sort();
            points.dedup();
            for p in points {
                for flux in star_cycles(region, p) {
                    let v = h.cycle_vector(&flux)?;
                    h.echelon.insert(v)?;
                }
            }
        }
        h.free = (0..h.column.len()).filter(|k| !h.echelon.is_pivot(*k)).collect();
        Ok(h)
    }

    pub fn rank(&self) -> usize {
        self.free.len()
    }

    pub fn is_relative(&self) -> bool {
        self.relative
    }

    fn cycle_vector(&self, flux: &HashMap<(CellCoord, usize), Rational64>) -> Result<SparseVec, HomologyError> {
        let mut v = SparseVec::new();
        for (key, x) in flux {
            let Some(e) = self.edges.get(key) else {
                if self.relative {
                    return Err(HomologyError::NotDualChain(cell_center(key.0)));
                }
                // Boundary faces do not enter absolute classes.
                continue;
            };
            if let Some(&k) = self.column.get(e) {
                let q = Q::new(*x.numer() as i128, *x.denom() as i128);
                *v.entry(k).or_insert_with(Q::zero) += q;
            }
        }
        v.retain(|_, x| !x.is_zero());
        Ok(v)
    }

    /// Coordinates of the class of a chain of center-to-face half edges.
    /// The chain must be a cycle (relative to the boundary in the relative
    /// case); this is not rechecked here.
    pub fn class_of(&self, region: &Region, ch: &Chain) -> Result<Vec<Rational64>, HomologyError> {
        let flux = face_fluxes(region, ch)?;
        if !self.relative {
            for (c, a) in flux.keys() {
                if !self.edges.contains_key(&(*c, *a)) {
                    return Err(HomologyError::NotDualChain(cell_center(*c)));
                }
            }
        }
        let v = self.echelon.reduce(self.cycle_vector(&flux)?)?;
        self.free
            .iter()
            .map(|k| {
                let q = v.get(k).copied().unwrap_or_else(Q::zero);
                to_r64(q)
            })
            .collect()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }
}

fn canonical_point(p: [i64; 3], wrap: &[Option<i64>; 3]) -> [i64; 3] {
    [0, 1, 2].map(|i| match wrap[i] {
        Some(per) => p[i].rem_euclid(per),
        None => p[i],
    })
}

/// Fundamental cycles of the dual graph on the cells having `p` as a
/// corner, as face fluxes.
fn star_cycles(region: &Region, p: [i64; 3]) -> Vec<HashMap<(CellCoord, usize), Rational64>> {
    let corner = |k: usize| {
        [
            p[0] - (k & 1) as i64,
            p[1] - ((k >> 1) & 1) as i64,
            p[2] - ((k >> 2) & 1) as i64,
        ]
    };
    let present: Vec<bool> = (0..8)
        .map(|k| region.contains(region.canonical(CellCoord::from(corner(k)))))
        .collect();
    // Edges between corners k and k ^ bit; the lower cell has the bit set.
    let mut edges = Vec::new();
    for k in 0..8usize {
        for a in 0..3 {
            let bit = 1 << a;
            if k & bit != 0 && present[k] && present[k ^ bit] {
                edges.push((k, k ^ bit, a));
            }
        }
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; 8];
    let mut seen = [false; 8];
    let mut tree = vec![false; edges.len()];
    for s in 0..8 {
        if !present[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for (e, &(lo, hi, _)) in edges.iter().enumerate() {
                let v = if lo == u {
                    hi
                } else if hi == u {
                    lo
                } else {
                    continue;
                };
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, e));
                    tree[e] = true;
                    q.push_back(v);
                }
            }
        }
    }
    let key = |e: usize| {
        let (lo, _, a) = edges[e];
        ((region.canonical(CellCoord::from(corner(lo)))), a)
    };
    // Walks from `k` to its tree root, adding each edge in the walk direction.
    let walk = |mut k: usize, sign: i64, flux: &mut HashMap<(CellCoord, usize), Rational64>| {
        while let Some((u, e)) = parent[k] {
            // Positive orientation runs from the lower cell to the upper one.
            let dir = if edges[e].0 == k { 1 } else { -1 };
            *flux.entry(key(e)).or_insert_with(Rational64::zero) += Rational64::from_integer(sign * dir);
            k = u;
        }
    };
    let mut out = Vec::new();
    for (e, &(lo, hi, _)) in edges.iter().enumerate() {
        if tree[e] {
            continue;
        }
        // lo -> hi along the edge, then hi back to the root, then root to lo.
        let mut flux = HashMap::new();
        flux.insert(key(e), Rational64::one());
        walk(hi, 1, &mut flux);
        walk(lo, -1, &mut flux);
        flux.retain(|_, v| !v.is_zero());
        out.push(flux);
    }
    out
}

fn to_r64(q: Q) -> Result<Rational64, HomologyError> {
    let n = i64::try_from(*q.numer()).map_err(|_| HomologyError::Overflow)?;
    let d = i64::try_from(*q.denom()).map_err(|_| HomologyError::Overflow)?;
    Ok(Rational64::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FluxClass {
    pub coords: Vec<Rational64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RFluxClass {
    pub coords: Vec<Rational64>,
}

impl FluxClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl RFluxClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

pub fn h1_rank(region: &Region) -> Result<usize, HomologyError> {
    Ok(DualHomology::new(region, false)?.rank())
}

pub fn h1_rel_rank(region: &Region) -> Result<usize, HomologyError> {
    Ok(DualHomology::new(region, true)?.rank())
}

fn check_same_region(t: &Tiling, t0: &Tiling) -> Result<(), HomologyError> {
    if t.region() != t0.region() {
        return Err(TilingError::RegionMismatch.into());
    }
    Ok(())
}

/// Class of `t - t0` in H1 of the region.
pub fn flux_diff_class(t: &Tiling, t0: &Tiling) -> Result<FluxClass, HomologyError> {
    check_same_region(t, t0)?;
    let h = DualHomology::new(t.region(), false)?;
    flux_diff_class_with(&h, t, t0)
}

pub fn flux_diff_class_with(h: &DualHomology, t: &Tiling, t0: &Tiling) -> Result<FluxClass, HomologyError> {
    let ch = domino_chain(t).sub(&domino_chain(t0));
    Ok(FluxClass {
        coords: h.class_of(t.region(), &ch)?,
    })
}

pub fn is_same_flux(t: &Tiling, t0: &Tiling) -> Result<bool, HomologyError> {
    Ok(flux_diff_class(t, t0)?.is_zero())
}

/// Class of `(6t - q1) / 6` in H1 of the region relative to its boundary.
pub fn rflux(t: &Tiling) -> Result<RFluxClass, HomologyError> {
    let h = DualHomology::new(t.region(), true)?;
    rflux_with(&h, t)
}

pub fn rflux_with(h: &DualHomology, t: &Tiling) -> Result<RFluxClass, HomologyError> {
    let ch = six_t_minus_q1(t).scale(Rational64::new(1, 6));
    Ok(RFluxClass {
        coords: h.class_of(t.region(), &ch)?,
    })
}

/// Image of a flux difference in relative homology, in the coordinates of
/// `rel`.
pub fn flux_diff_in_relative(rel: &DualHomology, t: &Tiling, t0: &Tiling) -> Result<RFluxClass, HomologyError> {
    check_same_region(t, t0)?;
    let ch = domino_chain(t).sub(&domino_chain(t0));
    Ok(RFluxClass {
        coords: rel.class_of(t.region(), &ch)?,
    })
}

/// An axis-aligned plane `x_axis = c8 / 8`, cut down to the region.
/// For wrapped axes every translate of the plane by a period is included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Section {
    pub axis: usize,
    pub c8: i64,
}

/// Signed number of crossings of a 1-chain with a section, edges counted
/// positively when they cross towards increasing coordinate.
pub fn chain_section_intersection(region: &Region, ch: &Chain, s: &Section) -> Result<Rational64, HomologyError> {
    let period8 = region.wrap()[s.axis].map(|p| 8 * p);
    let mut total = Rational64::zero();
    for (code, v) in ch.terms() {
        let x = code[s.axis];
        let along = x.rem_euclid(2) == 1;
        // Extent of the edge along the axis, in eighth units.
        let (lo, hi) = if along { (2 * x - 2, 2 * x + 2) } else { (2 * x, 2 * x) };
        let hits = |pl: i64| -> Result<bool, HomologyError> {
            if pl == lo || pl == hi {
                return Err(HomologyError::NonTransversal(*code));
            }
            Ok(lo < pl && pl < hi)
        };
        let mut crossed = false;
        match period8 {
            None => crossed = hits(s.c8)?,
            Some(p) => {
                let first = lo + (s.c8 - lo).rem_euclid(p);
                let mut pl = first;
                if pl - p == lo {
                    hits(lo)?;
                }
                while pl <= hi {
                    crossed |= hits(pl)?;
                    pl += p;
                }
            }
        }
        if crossed {
            total += *v;
        }
    }
    Ok(total)
}

/// Ranks of H1 and relative H1 computed directly on the refined complex.
/// Slow; used to cross-check [`DualHomology`] on small regions.
pub fn sharp_h1_ranks(region: &Region) -> Result<(usize, usize), HomologyError> {
    let k = region.sharp_complex().complex;
    let mut out = [0usize; 2];
    for (i, relative) in [false, true].into_iter().enumerate() {
        let (c1, _, _) = k.boundary_matrix(1, relative);
        let (_, _, m1) = k.boundary_matrix(1, relative);
        let (_, _, m2) = k.boundary_matrix(2, relative);
        let r1 = linalg::rank(m1.iter().map(|c| linalg::from_ints(c)))?;
        let r2 = linalg::rank(m2.iter().map(|c| linalg::from_ints(c)))?;
        out[i] = c1.len() - r1 - r2;
    }
    Ok((out[0], out[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{make_box, make_region};
    use crate::tiling::{enumerate_tilings, find_tiling};
    use std::sync::Arc;

    fn annulus() -> Region {
        let cells = make_box(4, 4, 2)
            .unwrap()
            .cells()
            .copied()
            .filter(|c| !(1..3).contains(&c.x) || !(1..3).contains(&c.y))
            .collect::<Vec<_>>();
        make_region(cells, [None; 3]).unwrap()
    }

    fn cube_hole(n: i64, h: i64) -> Region {
        let lo = (n - h) / 2;
        let inside = |v: i64| (lo..lo + h).contains(&v);
        let cells = make_box(n, n, n)
            .unwrap()
            .cells()
            .copied()
            .filter(|c| !(inside(c.x) && inside(c.y) && inside(c.z)))
            .collect::<Vec<_>>();
        make_region(cells, [None; 3]).unwrap()
    }

    #[test]
    fn single_domino_chain() {
        let r = Arc::new(make_box(2, 1, 1).unwrap());
        let t = &enumerate_tilings(&r).unwrap()[0];
        let ch = domino_chain(t);
        assert_eq!(ch.len(), 2);
        let b = ch.boundary(&r);
        assert_eq!(b.get(&[6, 2, 2]), Rational64::one());
        assert_eq!(b.get(&[2, 2, 2]), -Rational64::one());
        assert_eq!(b.len(), 2);
        let s = Section { axis: 0, c8: 10 };
        assert_eq!(chain_section_intersection(&r, &ch, &s), Ok(Rational64::one()));
        assert_eq!(
            chain_section_intersection(&r, &ch, &Section { axis: 1, c8: 3 }),
            Ok(Rational64::zero())
        );
        assert!(chain_section_intersection(&r, &ch, &Section { axis: 0, c8: 8 }).is_err());
    }

    #[test]
    fn q1_boundary_is_boundary_squares() {
        let r = Arc::new(make_box(1, 1, 2).unwrap());
        assert_eq!(q1_chain(&r).len(), 12);
        for dims in [(2, 2, 1), (2, 2, 2), (3, 3, 2)] {
            let r = Arc::new(make_box(dims.0, dims.1, dims.2).unwrap());
            let want = boundary_square_chain(&r);
            for t in enumerate_tilings(&r).unwrap().iter().take(20) {
                assert_eq!(six_t_minus_q1(t).boundary(&r), want);
            }
        }
    }

    #[test]
    fn torus_chain_is_a_cycle() {
        let r = Arc::new(make_region(make_box(4, 4, 2).unwrap().cells().copied(), [Some(4), Some(4), None]).unwrap());
        let t = find_tiling(&r).unwrap();
        let r6 = Arc::new(make_region(make_box(6, 6, 6).unwrap().cells().copied(), [Some(6); 3]).unwrap());
        let t6 = find_tiling(&r6).unwrap();
        assert!(six_t_minus_q1(&t6).boundary(&r6).is_zero());
        assert!(domino_chain(&t).sub(&domino_chain(&t)).is_zero());
    }

    #[test]
    fn ranks() {
        let b = make_box(2, 2, 1).unwrap();
        assert_eq!((h1_rank(&b).unwrap(), h1_rel_rank(&b).unwrap()), (0, 0));
        let a = annulus();
        assert_eq!((h1_rank(&a).unwrap(), h1_rel_rank(&a).unwrap()), (1, 0));
        let c = cube_hole(5, 1);
        assert_eq!((h1_rank(&c).unwrap(), h1_rel_rank(&c).unwrap()), (0, 1));
        let t = make_region(make_box(4, 4, 2).unwrap().cells().copied(), [Some(4), Some(4), None]).unwrap();
        assert_eq!(h1_rank(&t).unwrap(), 2);
    }

    #[test]
    fn dual_ranks_match_refined_complex() {
        let hex = make_region(
            make_box(2, 2, 2)
                .unwrap()
                .cells()
                .copied()
                .filter(|c| *c != CellCoord::new(1, 1, 0) && *c != CellCoord::new(0, 0, 1)),
            [None; 3],
        )
        .unwrap();
        for r in [make_box(2, 1, 1).unwrap(), annulus(), cube_hole(3, 1), hex] {
            let (a, b) = sharp_h1_ranks(&r).unwrap();
            assert_eq!((a, b), (h1_rank(&r).unwrap(), h1_rel_rank(&r).unwrap()));
        }
    }

    #[test]
    fn pinched_ring_has_one_flux_class() {
        // Six cubes around a diagonal meet at the center point, so the
        // ring of dual faces bounds.
        let r = Arc::new(
            make_region(
                make_box(2, 2, 2)
                    .unwrap()
                    .cells()
                    .copied()
                    .filter(|c| *c != CellCoord::new(1, 1, 0) && *c != CellCoord::new(0, 0, 1)),
                [None; 3],
            )
            .unwrap(),
        );
        let ts = enumerate_tilings(&r).unwrap();
        assert_eq!(h1_rank(&r).unwrap(), 0);
        assert!(is_same_flux(&ts[0], &ts[1]).unwrap());
    }

    #[test]
    fn annulus_flux_classes() {
        let r = Arc::new(annulus());
        let ts = enumerate_tilings(&r).unwrap();
        let h = DualHomology::new(&r, false).unwrap();
        let rel = DualHomology::new(&r, true).unwrap();
        let mut classes = std::collections::BTreeSet::new();
        for t in &ts {
            let f = flux_diff_class_with(&h, t, &ts[0]).unwrap();
            assert!(rflux_with(&rel, t).unwrap().is_zero());
            assert!(flux_diff_in_relative(&rel, t, &ts[0]).unwrap().is_zero());
            classes.insert(f.coords);
        }
        assert!(classes.len() >= 2, "{classes:?}");
    }

    #[test]
    fn rflux_on_boxes_is_zero() {
        let r = Arc::new(make_box(3, 3, 2).unwrap());
        let rel = DualHomology::new(&r, true).unwrap();
        assert_eq!(rel.rank(), 0);
        for t in enumerate_tilings(&r).unwrap().iter().take(10) {
            assert!(rflux_with(&rel, t).unwrap().is_zero());
        }
    }

    #[test]
    fn not_a_dual_chain() {
        let r = make_box(2, 1, 1).unwrap();
        let h = DualHomology::new(&r, false).unwrap();
        let mut ch = Chain::zero(1);
        ch.add_term([3, 0, 0], Rational64::one());
        assert_eq!(h.class_of(&r, &ch), Err(HomologyError::NotDualChain([3, 0, 0])));
    }

    #[test]
    fn chain_file_round_trip() {
        let r = Arc::new(make_box(2, 2, 1).unwrap());
        let t = &enumerate_tilings(&r).unwrap()[0];
        let ch = six_t_minus_q1(t).scale(Rational64::new(1, 6));
        assert_eq!(Chain::from_file(&ch.to_file()), ch);
    }
}
