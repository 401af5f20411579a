//! Domino tilings, flips and trits, the move graph, and 5x refinement.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::TilingError;
use crate::region::{Axis, CellCoord, Color, Region, RegionFile};

/// Default cap on the number of cells `enumerate_tilings` accepts.
pub const DEFAULT_CELL_CAP: usize = 64;
/// Environment variable overriding [`DEFAULT_CELL_CAP`].
pub const CELL_CAP_ENV: &str = "DOMTWIST_CELL_CAP";

/// Sign convention for trits: a trit is positive when `TRIT_KAPPA` times the
/// chirality of the resulting matching is +1.
pub const TRIT_KAPPA: i64 = 1;

pub const REFINE_SCALE: i64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[CellCoord; 2]", into = "[CellCoord; 2]")]
pub struct Domino {
    pub black: CellCoord,
    pub white: CellCoord,
}

impl From<[CellCoord; 2]> for Domino {
    fn from(a: [CellCoord; 2]) -> Self {
        Domino {
            black: a[0],
            white: a[1],
        }
    }
}

impl From<Domino> for [CellCoord; 2] {
    fn from(d: Domino) -> Self {
        [d.black, d.white]
    }
}

impl Domino {
    pub fn new(black: CellCoord, white: CellCoord) -> Self {
        Domino { black, white }
    }

    /// Axis and sign of the step from the black cell to the white one.
    pub fn direction(&self, region: &Region) -> (Axis, i64) {
        for axis in Axis::ALL {
            for s in [1, -1] {
                if region.canonical(self.black.offset(axis, s)) == self.white {
                    return (axis, s);
                }
            }
        }
        panic!("domino {self:?} is not a unit step")
    }

    /// Unit vector from black to white.
    pub fn step(&self, region: &Region) -> [i64; 3] {
        let (a, s) = self.direction(region);
        let mut v = [0; 3];
        v[a.index()] = s;
        v
    }

    pub fn contains(&self, c: CellCoord) -> bool {
        self.black == c || self.white == c
    }
}

#[derive(Debug, Clone)]
pub struct Tiling {
    region: Arc<Region>,
    dominoes: Vec<Domino>,
    partner: HashMap<CellCoord, CellCoord>,
}

impl PartialEq for Tiling {
    fn eq(&self, other: &Self) -> bool {
        self.dominoes == other.dominoes
    }
}

impl Eq for Tiling {}

impl std::hash::Hash for Tiling {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dominoes.hash(state)
    }
}

impl PartialOrd for Tiling {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tiling {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dominoes.cmp(&other.dominoes)
    }
}

impl Tiling {
    /// Validates and builds a tiling; domino cells are canonicalized and the
    /// pair is reordered so that `black` is the black cell.
    pub fn new(region: Arc<Region>, dominoes: impl IntoIterator<Item = Domino>) -> Result<Self, TilingError> {
        let mut list = Vec::new();
        let mut partner = HashMap::with_capacity(region.len());
        for d in dominoes {
            let (a, b) = (region.canonical(d.black), region.canonical(d.white));
            for c in [a, b] {
                if !region.contains(c) {
                    return Err(crate::error::RegionError::CellNotInRegion(c).into());
                }
            }
            let (black, white) = match (region.color_of(a), region.color_of(b)) {
                (Color::Black, Color::White) => (a, b),
                (Color::White, Color::Black) => (b, a),
                _ => return Err(TilingError::NotADomino(a, b)),
            };
            if !region.neighbors(black).any(|(_, _, n)| n == white) {
                return Err(TilingError::NotADomino(black, white));
            }
            for (c, p) in [(black, white), (white, black)] {
                if partner.insert(c, p).is_some() {
                    return Err(TilingError::Overlap(c));
                }
            }
            list.push(Domino { black, white });
        }
        if let Some(c) = region.cells().find(|c| !partner.contains_key(c)) {
            return Err(TilingError::Uncovered(*c));
        }
        list.sort();
        Ok(Tiling {
            region,
            dominoes: list,
            partner,
        })
    }

    fn from_sorted_unchecked(region: Arc<Region>, mut dominoes: Vec<Domino>) -> Self {
        dominoes.sort();
        let mut partner = HashMap::with_capacity(dominoes.len() * 2);
        for d in &dominoes {
            partner.insert(d.black, d.white);
            partner.insert(d.white, d.black);
        }
        Tiling {
            region,
            dominoes,
            partner,
        }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn region_arc(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn dominoes(&self) -> &[Domino] {
        &self.dominoes
    }

    pub fn partner(&self, c: CellCoord) -> Option<CellCoord> {
        self.partner.get(&self.region.canonical(c)).copied()
    }

    pub fn domino_at(&self, c: CellCoord) -> Option<Domino> {
        let c = self.region.canonical(c);
        let p = *self.partner.get(&c)?;
        Some(if self.region.color_of(c) == Color::Black {
            Domino::new(c, p)
        } else {
            Domino::new(p, c)
        })
    }

    /// Number of dominoes along each axis.
    pub fn axis_counts(&self) -> [usize; 3] {
        let mut n = [0; 3];
        for d in &self.dominoes {
            n[d.direction(&self.region).0.index()] += 1;
        }
        n
    }

    pub fn list_flips(&self) -> Vec<Flip> {
        let r = &*self.region;
        let mut out = BTreeSet::new();
        for d in &self.dominoes {
            let (a, _) = d.direction(r);
            for b in Axis::ALL {
                if b == a {
                    continue;
                }
                let nb = r.canonical(d.black.offset(b, 1));
                let nw = r.canonical(d.white.offset(b, 1));
                if self.partner.get(&nb) == Some(&nw) {
                    // nb is white, nw is black.
                    let before = sort2(*d, Domino::new(nw, nb));
                    let after = sort2(Domino::new(d.black, nb), Domino::new(nw, d.white));
                    out.insert(Flip { before, after });
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn apply_flip(&self, f: &Flip) -> Result<Tiling, TilingError> {
        self.replace(&f.before, &f.after)
    }

    pub fn list_trits(&self) -> Vec<Trit> {
        let r = &*self.region;
        let mut origins = BTreeSet::new();
        for c in r.cells() {
            for k in 0..8 {
                let o = CellCoord::new(c.x - (k & 1), c.y - ((k >> 1) & 1), c.z - ((k >> 2) & 1));
                origins.insert(r.canonical(o));
            }
        }
        let mut out = BTreeSet::new();
        for o in origins {
            for hex in hexagons(o) {
                let cells: Vec<CellCoord> = hex.iter().map(|c| r.canonical(*c)).collect();
                if cells.iter().any(|c| !r.contains(*c)) {
                    continue;
                }
                // Under wrapping a box may revisit a cell; skip such degenerate hexagons.
                if cells.iter().collect::<HashSet<_>>().len() != 6 {
                    continue;
                }
                let matched = |i: usize, j: usize| self.partner.get(&cells[i]) == Some(&cells[j]);
                let before_pairs = if matched(0, 1) && matched(2, 3) && matched(4, 5) {
                    [(0, 1), (2, 3), (4, 5)]
                } else if matched(1, 2) && matched(3, 4) && matched(5, 0) {
                    [(1, 2), (3, 4), (5, 0)]
                } else {
                    continue;
                };
                let after_pairs = if before_pairs[0] == (0, 1) {
                    [(1, 2), (3, 4), (5, 0)]
                } else {
                    [(0, 1), (2, 3), (4, 5)]
                };
                let mk = |pairs: [(usize, usize); 3]| -> [Domino; 3] {
                    let mut ds = pairs.map(|(i, j)| orient(r, cells[i], cells[j]));
                    ds.sort();
                    ds
                };
                let before = mk(before_pairs);
                let after = mk(after_pairs);
                let sign = TRIT_KAPPA * chirality(r, &after);
                out.insert(Trit { before, after, sign });
            }
        }
        out.into_iter().collect()
    }

    pub fn apply_trit(&self, t: &Trit) -> Result<Tiling, TilingError> {
        self.replace(&t.before, &t.after)
    }

    fn replace(&self, before: &[Domino], after: &[Domino]) -> Result<Tiling, TilingError> {
        for d in before {
            if self.partner.get(&d.black) != Some(&d.white) {
                return Err(TilingError::MoveNotApplicable);
            }
        }
        let removed: HashSet<&Domino> = before.iter().collect();
        let mut ds: Vec<Domino> = self.dominoes.iter().filter(|d| !removed.contains(d)).copied().collect();
        ds.extend_from_slice(after);
        Ok(Tiling::from_sorted_unchecked(self.region.clone(), ds))
    }

    pub fn to_file(&self) -> TilingFile {
        TilingFile {
            region: self.region.to_file(),
            dominoes: self.dominoes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("tiling serializes")
    }

    pub fn from_file(f: TilingFile) -> Result<Self, TilingError> {
        let region = Region::from_file(f.region)?;
        Tiling::new(Arc::new(region), f.dominoes)
    }

    pub fn from_json(s: &str) -> Result<Self, TilingError> {
        let f: TilingFile = serde_json::from_str(s).map_err(|e| TilingError::Format(e.to_string()))?;
        Tiling::from_file(f)
    }

    pub fn load(path: &Path) -> Result<Self, TilingError> {
        let s = std::fs::read_to_string(path).map_err(|e| TilingError::Format(format!("{}: {e}", path.display())))?;
        Tiling::from_json(&s)
    }

    /// Floor-by-floor drawing, bottom floor first. Within a floor, rows run
    /// from high y to low y. Horizontal dominoes are drawn as `===` or `|`
    /// joins between cells; the lower cell of a vertical domino is `#` and
    /// the upper cell is left as `o`.
    pub fn render(&self) -> String {
        let r = &*self.region;
        let (lo, hi) = r.bounds();
        let mut s = String::new();
        for z in lo[2]..=hi[2] {
            let _ = writeln!(s, "z = {z}");
            for y in (lo[1]..=hi[1]).rev() {
                let mut row = String::new();
                let mut below = String::new();
                for x in lo[0]..=hi[0] {
                    let c = CellCoord::new(x, y, z);
                    let glyph = match self.domino_at(c) {
                        None => ' ',
                        Some(d) => {
                            let (a, sgn) = d.direction(r);
                            let up = (a == Axis::Z) && ((d.black == c) == (sgn < 0));
                            match a {
                                Axis::Z if up => 'o',
                                Axis::Z => '#',
                                _ => '+',
                            }
                        }
                    };
                    row.push(glyph);
                    if x < hi[0] {
                        let joined = self.partner(c) == Some(r.canonical(CellCoord::new(x + 1, y, z)))
                            && r.contains(CellCoord::new(x + 1, y, z));
                        row.push_str(if joined { "---" } else { "   " });
                    }
                    if y > lo[1] {
                        let joined = self.partner(c) == Some(r.canonical(CellCoord::new(x, y - 1, z)))
                            && r.contains(CellCoord::new(x, y - 1, z));
                        below.push(if joined { '|' } else { ' ' });
                        if x < hi[0] {
                            below.push_str("   ");
                        }
                    }
                }
                let _ = writeln!(s, "{}", row.trim_end());
                if y > lo[1] {
                    let _ = writeln!(s, "{}", below.trim_end());
                }
            }
        }
        s
    }
}

fn sort2(a: Domino, b: Domino) -> [Domino; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

fn orient(r: &Region, a: CellCoord, b: CellCoord) -> Domino {
    if r.color_of(a) == Color::Black {
        Domino::new(a, b)
    } else {
        Domino::new(b, a)
    }
}

/// The four hexagonal cycles of a 2x2x2 box with min corner `o`, one per
/// removed diagonal, each listed as a closed 6-cycle of face-adjacent cells.
fn hexagons(o: CellCoord) -> [[CellCoord; 6]; 4] {
    // Corners are indexed by bits (x, y, z); corner k and 7 - k are opposite.
    let cell = |k: usize| {
        CellCoord::new(
            o.x + (k & 1) as i64,
            o.y + ((k >> 1) & 1) as i64,
            o.z + ((k >> 2) & 1) as i64,
        )
    };
    [0usize, 1, 2, 4].map(|k| {
        let mut cyc = [k ^ 1; 6];
        for i in 1..6 {
            let prev = if i >= 2 { cyc[i - 2] } else { usize::MAX };
            cyc[i] = [1, 2, 4]
                .into_iter()
                .map(|b| cyc[i - 1] ^ b)
                .find(|&c| c != k && c != 7 - k && c != prev)
                .expect("hexagon walk");
        }
        cyc.map(cell)
    })
}

/// Determinant of the black-to-white steps of three dominoes filling a
/// hexagon, taken in cyclic order around the hexagon.
pub fn chirality(region: &Region, ds: &[Domino; 3]) -> i64 {
    // Order: from domino i, the white cell's other hexagon neighbour is the
    // black cell of the next domino.
    let steps: Vec<[i64; 3]> = ds.iter().map(|d| d.step(region)).collect();
    let next_of = |i: usize| -> usize {
        (0..3)
            .find(|&j| j != i && region.neighbors(ds[i].white).any(|(_, _, n)| n == ds[j].black))
            .expect("hexagon dominoes are cyclically adjacent")
    };
    let j = next_of(0);
    let k = 3 - j;
    let (a, b, c) = (steps[0], steps[j], steps[k]);
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flip {
    pub before: [Domino; 2],
    pub after: [Domino; 2],
}

impl Flip {
    pub fn reverse(&self) -> Flip {
        Flip {
            before: self.after,
            after: self.before,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trit {
    pub before: [Domino; 3],
    pub after: [Domino; 3],
    pub sign: i64,
}

impl Trit {
    pub fn reverse(&self) -> Trit {
        Trit {
            before: self.after,
            after: self.before,
            sign: -self.sign,
        }
    }
}

pub fn default_cell_cap() -> usize {
    std::env::var(CELL_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CELL_CAP)
}

/// All tilings of a region in canonical order. Refuses regions above the
/// cell cap (see [`default_cell_cap`]).
pub fn enumerate_tilings(region: &Arc<Region>) -> Result<Vec<Tiling>, TilingError> {
    enumerate_tilings_capped(region, default_cell_cap())
}

pub fn enumerate_tilings_capped(region: &Arc<Region>, cap: usize) -> Result<Vec<Tiling>, TilingError> {
    let (b, w) = region.color_counts();
    if b != w {
        return Err(TilingError::Unbalanced { black: b, white: w });
    }
    if region.len() > cap {
        return Err(TilingError::TooLarge {
            cells: region.len(),
            cap,
        });
    }
    let cells: Vec<CellCoord> = region.cells().copied().collect();
    let index: HashMap<CellCoord, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    // Only neighbours later in the order matter: the first uncovered cell has
    // every earlier cell already covered.
    let adj: Vec<Vec<usize>> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut v: Vec<usize> = region
                .neighbors(*c)
                .map(|(_, _, n)| index[&n])
                .filter(|&j| j > i)
                .collect();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    let mut covered = vec![false; cells.len()];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut raw: Vec<Vec<(usize, usize)>> = Vec::new();
    dfs(0, &adj, &mut covered, &mut stack, &mut raw);
    let mut out: Vec<Tiling> = raw
        .into_iter()
        .map(|pairs| {
            let ds = pairs
                .into_iter()
                .map(|(i, j)| orient(region, cells[i], cells[j]))
                .collect();
            Tiling::from_sorted_unchecked(region.clone(), ds)
        })
        .collect();
    out.sort();
    Ok(out)
}

fn dfs(
    from: usize,
    adj: &[Vec<usize>],
    covered: &mut [bool],
    stack: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let Some(i) = (from..covered.len()).find(|&i| !covered[i]) else {
        out.push(stack.clone());
        return;
    };
    covered[i] = true;
    for &j in &adj[i] {
        if !covered[j] {
            covered[j] = true;
            stack.push((i, j));
            dfs(i + 1, adj, covered, stack, out);
            stack.pop();
            covered[j] = false;
        }
    }
    covered[i] = false;
}

/// Finds one tiling by bipartite matching; suited to regions far beyond the
/// enumeration cap.
pub fn find_tiling(region: &Arc<Region>) -> Result<Tiling, TilingError> {
    let (b, w) = region.color_counts();
    if b != w {
        return Err(TilingError::Unbalanced { black: b, white: w });
    }
    let blacks: Vec<CellCoord> = region
        .cells()
        .filter(|c| region.color_of(**c) == Color::Black)
        .copied()
        .collect();
    let whites: Vec<CellCoord> = region
        .cells()
        .filter(|c| region.color_of(**c) == Color::White)
        .copied()
        .collect();
    let widx: HashMap<CellCoord, usize> = whites.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let adj: Vec<Vec<usize>> = blacks
        .iter()
        .map(|c| region.neighbors(*c).map(|(_, _, n)| widx[&n]).collect())
        .collect();
    let matching = hopcroft_karp(&adj, whites.len()).ok_or(TilingError::NoTiling)?;
    let ds = matching
        .into_iter()
        .enumerate()
        .map(|(bi, wi)| Domino::new(blacks[bi], whites[wi]));
    Ok(Tiling::from_sorted_unchecked(region.clone(), ds.collect()))
}

/// Perfect matching of the left side, or `None`.
fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> Option<Vec<usize>> {
    const NIL: usize = usize::MAX;
    let n = adj.len();
    let mut ml = vec![NIL; n];
    let mut mr = vec![NIL; n_right];
    let mut dist = vec![0usize; n];
    loop {
        let mut queue = std::collections::VecDeque::new();
        for u in 0..n {
            if ml[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mr[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..n {
            if ml[u] == NIL {
                augment(u, adj, &mut ml, &mut mr, &mut dist);
            }
        }
    }
    ml.iter().all(|&v| v != NIL).then_some(ml)
}

fn augment(u: usize, adj: &[Vec<usize>], ml: &mut [usize], mr: &mut [usize], dist: &mut [usize]) -> bool {
    // Iterative DFS along the layered graph.
    let mut path: Vec<(usize, usize)> = vec![(u, 0)];
    while let Some(&mut (x, ref mut next)) = path.last_mut() {
        if *next >= adj[x].len() {
            dist[x] = usize::MAX;
            path.pop();
            continue;
        }
        let v = adj[x][*next];
        *next += 1;
        let w = mr[v];
        if w == usize::MAX {
            // Flip the path.
            let mut v = v;
            for &(x, _) in path.iter().rev() {
                let prev = ml[x];
                ml[x] = v;
                mr[v] = x;
                v = prev;
            }
            return true;
        }
        if dist[w] == dist[x] + 1 {
            path.push((w, 0));
        }
    }
    false
}

#[derive(Debug, Clone)]
pub struct MoveGraph {
    pub tilings: Vec<Tiling>,
    /// Unordered flip edges with `i < j`.
    pub flips: Vec<(usize, usize)>,
    /// Trit edges oriented so that the move from `.0` to `.1` is positive.
    pub trits: Vec<(usize, usize)>,
}

pub fn move_graph(tilings: &[Tiling]) -> Result<MoveGraph, TilingError> {
    let mut sorted: Vec<Tiling> = tilings.to_vec();
    sorted.sort();
    sorted.dedup();
    if let Some(first) = sorted.first() {
        if sorted.iter().any(|t| t.region() != first.region()) {
            return Err(TilingError::RegionMismatch);
        }
    }
    let index: HashMap<&[Domino], usize> = sorted.iter().enumerate().map(|(i, t)| (t.dominoes(), i)).collect();
    let mut flips = BTreeSet::new();
    let mut trits = BTreeSet::new();
    for (i, t) in sorted.iter().enumerate() {
        for f in t.list_flips() {
            let u = t.apply_flip(&f)?;
            if let Some(&j) = index.get(u.dominoes()) {
                flips.insert((i.min(j), i.max(j)));
            }
        }
        for r in t.list_trits() {
            let u = t.apply_trit(&r)?;
            if let Some(&j) = index.get(u.dominoes()) {
                trits.insert(if r.sign > 0 { (i, j) } else { (j, i) });
            }
        }
    }
    Ok(MoveGraph {
        tilings: sorted,
        flips: flips.into_iter().collect(),
        trits: trits.into_iter().collect(),
    })
}

impl MoveGraph {
    pub fn index_of(&self, t: &Tiling) -> Option<usize> {
        self.tilings.binary_search(t).ok()
    }

    /// Neighbours of each vertex as (neighbour, twist step), where the step
    /// is 0 for flips and the trit sign otherwise.
    pub fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.tilings.len()];
        for &(i, j) in &self.flips {
            adj[i].push((j, 0));
            adj[j].push((i, 0));
        }
        for &(i, j) in &self.trits {
            adj[i].push((j, 1));
            adj[j].push((i, -1));
        }
        adj
    }

    /// Vertices with no incident flip edge.
    pub fn flip_isolated(&self) -> Vec<usize> {
        let mut has = vec![false; self.tilings.len()];
        for &(i, j) in &self.flips {
            has[i] = true;
            has[j] = true;
        }
        (0..self.tilings.len()).filter(|&i| !has[i]).collect()
    }
}

pub fn refine_region(region: &Region) -> Result<Region, TilingError> {
    let k = REFINE_SCALE;
    let cells = region.cells().flat_map(|c| {
        let c = *c;
        (0..k * k * k).map(move |i| CellCoord::new(k * c.x + i % k, k * c.y + (i / k) % k, k * c.z + i / (k * k)))
    });
    Ok(Region::new(
        cells.collect(),
        region.wrap().map(|p| p.map(|p| k * p)),
        region.convention(),
    )?)
}

pub fn refine_tiling(t: &Tiling) -> Result<Tiling, TilingError> {
    let k = REFINE_SCALE;
    let region = Arc::new(refine_region(t.region())?);
    let mut ds = Vec::with_capacity(t.dominoes().len() * 125);
    for d in t.dominoes() {
        let (a, s) = d.direction(t.region());
        let ai = a.index();
        // Lower cell of the pair along the axis.
        let low = if s > 0 { d.black } else { d.white };
        let base = low.to_array().map(|v| k * v);
        let (u, v) = ((ai + 1) % 3, (ai + 2) % 3);
        for i in 0..k {
            for j in 0..k {
                for m in 0..k {
                    let mut p = base;
                    p[u] += i;
                    p[v] += j;
                    p[ai] += 2 * m;
                    let c0 = region.canonical(p.into());
                    p[ai] += 1;
                    let c1 = region.canonical(p.into());
                    ds.push(orient(&region, c0, c1));
                }
            }
        }
    }
    Ok(Tiling::from_sorted_unchecked(region, ds))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingFile {
    pub region: RegionFile,
    pub dominoes: Vec<Domino>,
}

/// Several tilings of one region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingListFile {
    pub version: u32,
    pub region: RegionFile,
    pub tilings: Vec<Vec<Domino>>,
}

/// Writes tilings of a common region as one JSON document.
pub fn tilings_to_json(region: &Region, ts: &[Tiling]) -> String {
    let f = TilingListFile {
        version: 1,
        region: region.to_file(),
        tilings: ts.iter().map(|t| t.dominoes().to_vec()).collect(),
    };
    serde_json::to_string(&f).expect("tilings serialize")
}

pub fn tilings_from_json(s: &str) -> Result<Vec<Tiling>, TilingError> {
    let f: TilingListFile = serde_json::from_str(s).map_err(|e| TilingError::Format(e.to_string()))?;
    if f.version != 1 {
        return Err(TilingError::Format(format!("unsupported version {}", f.version)));
    }
    let region = Arc::new(Region::from_file(f.region)?);
    f.tilings
        .into_iter()
        .map(|ds| Tiling::new(region.clone(), ds))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{make_box, make_region};

    fn arc(r: Region) -> Arc<Region> {
        Arc::new(r)
    }

    fn hex() -> Arc<Region> {
        let cells = (0..8)
            .map(|k| CellCoord::new(k & 1, (k >> 1) & 1, (k >> 2) & 1))
            .filter(|c| *c != CellCoord::new(1, 1, 0) && *c != CellCoord::new(0, 0, 1));
        arc(make_region(cells, [None; 3]).unwrap())
    }

    /// Counts perfect matchings by inclusion over subsets; independent of the
    /// DFS in `enumerate_tilings`.
    fn brute_count(region: &Region) -> u64 {
        let cells: Vec<CellCoord> = region.cells().copied().collect();
        let n = cells.len();
        let idx: HashMap<CellCoord, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let adj: Vec<u64> = cells
            .iter()
            .map(|c| region.neighbors(*c).fold(0u64, |m, (_, _, x)| m | 1 << idx[&x]))
            .collect();
        let mut memo: HashMap<u64, u64> = HashMap::new();
        fn go(mask: u64, n: usize, adj: &[u64], memo: &mut HashMap<u64, u64>) -> u64 {
            if mask == (1u64 << n) - 1 {
                return 1;
            }
            if let Some(v) = memo.get(&mask) {
                return *v;
            }
            let i = (!mask).trailing_zeros() as usize;
            let mut free = adj[i] & !mask;
            let mut total = 0;
            while free != 0 {
                let j = free.trailing_zeros();
                free &= free - 1;
                total += go(mask | 1 << i | 1 << j, n, adj, memo);
            }
            memo.insert(mask, total);
            total
        }
        go(0, n, &adj, &mut memo)
    }

    #[test]
    fn counts_small_boxes() {
        let b221 = arc(make_box(2, 2, 1).unwrap());
        assert_eq!(enumerate_tilings(&b221).unwrap().len(), 2);
        let b222 = arc(make_box(2, 2, 2).unwrap());
        assert_eq!(enumerate_tilings(&b222).unwrap().len(), 9);
        assert_eq!(enumerate_tilings(&hex()).unwrap().len(), 2);
    }

    #[test]
    fn enumeration_matches_bitmask_oracle() {
        for (l, m, n) in [(2, 2, 2), (2, 3, 2), (4, 3, 2), (2, 2, 4), (3, 2, 2)] {
            let r = arc(make_box(l, m, n).unwrap());
            if r.len() % 2 == 1 {
                continue;
            }
            assert_eq!(
                enumerate_tilings(&r).unwrap().len() as u64,
                brute_count(&r),
                "{l}x{m}x{n}"
            );
        }
        assert_eq!(brute_count(&make_box(2, 2, 2).unwrap()), 9);
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let r = arc(make_box(2, 3, 2).unwrap());
        let ts = enumerate_tilings(&r).unwrap();
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_and_balance_errors() {
        let r = arc(make_box(3, 3, 1).unwrap());
        assert_eq!(
            enumerate_tilings(&r),
            Err(TilingError::Unbalanced { black: 5, white: 4 })
        );
        let r = arc(make_box(4, 4, 2).unwrap());
        assert_eq!(
            enumerate_tilings_capped(&r, 16),
            Err(TilingError::TooLarge { cells: 32, cap: 16 })
        );
    }

    #[test]
    fn tiling_list_round_trip() {
        let r = arc(make_box(2, 2, 2).unwrap());
        let ts = enumerate_tilings(&r).unwrap();
        let back = tilings_from_json(&tilings_to_json(&r, &ts)).unwrap();
        assert_eq!(back, ts);
        assert!(tilings_from_json("{}").is_err());
    }

    #[test]
    fn box221_flip() {
        let r = arc(make_box(2, 2, 1).unwrap());
        let ts = enumerate_tilings(&r).unwrap();
        for t in &ts {
            let fs = t.list_flips();
            assert_eq!(fs.len(), 1);
            assert!(t.list_trits().is_empty());
            let u = t.apply_flip(&fs[0]).unwrap();
            assert_ne!(&u, t);
            assert_eq!(&u.apply_flip(&fs[0].reverse()).unwrap(), t);
        }
        let g = move_graph(&ts).unwrap();
        assert_eq!((g.flips.len(), g.trits.len()), (1, 0));
    }

    #[test]
    fn hex_trit() {
        let ts = enumerate_tilings(&hex()).unwrap();
        let mut signs = Vec::new();
        for t in &ts {
            assert!(t.list_flips().is_empty());
            let tr = t.list_trits();
            assert_eq!(tr.len(), 1);
            signs.push(tr[0].sign);
            let u = t.apply_trit(&tr[0]).unwrap();
            let back = u.list_trits();
            assert_eq!(back, vec![tr[0].reverse()]);
        }
        signs.sort();
        assert_eq!(signs, vec![-1, 1]);
        let g = move_graph(&ts).unwrap();
        assert_eq!((g.flips.len(), g.trits.len()), (0, 1));
    }

    #[test]
    fn chirality_reference() {
        let r = hex();
        let d = |a: [i64; 3], b: [i64; 3]| Domino::new(a.into(), b.into());
        let m1 = [
            d([0, 0, 0], [1, 0, 0]),
            d([1, 0, 1], [1, 1, 1]),
            d([0, 1, 1], [0, 1, 0]),
        ];
        let m2 = [
            d([0, 0, 0], [0, 1, 0]),
            d([0, 1, 1], [1, 1, 1]),
            d([1, 0, 1], [1, 0, 0]),
        ];
        assert_eq!(chirality(&r, &m1), -1);
        assert_eq!(chirality(&r, &m2), 1);
    }

    #[test]
    fn moves_reversible_on_box222() {
        let r = arc(make_box(2, 2, 2).unwrap());
        let ts = enumerate_tilings(&r).unwrap();
        for t in &ts {
            for f in t.list_flips() {
                assert_eq!(&t.apply_flip(&f).unwrap().apply_flip(&f.reverse()).unwrap(), t);
            }
            for m in t.list_trits() {
                let u = t.apply_trit(&m).unwrap();
                assert!(u.list_trits().contains(&m.reverse()));
                assert_eq!(&u.apply_trit(&m.reverse()).unwrap(), t);
            }
        }
    }

    #[test]
    fn find_tiling_large() {
        let r = arc(make_box(6, 5, 4).unwrap());
        let t = find_tiling(&r).unwrap();
        assert_eq!(t.dominoes().len(), 60);
        Tiling::new(r, t.dominoes().to_vec()).unwrap();
        let odd = arc(make_box(3, 3, 3).unwrap());
        assert!(matches!(find_tiling(&odd), Err(TilingError::Unbalanced { .. })));
    }

    #[test]
    fn refinement() {
        let r = arc(make_box(2, 2, 1).unwrap());
        let rr = refine_region(&r).unwrap();
        assert_eq!(rr, make_box(10, 10, 5).unwrap());
        let t = &enumerate_tilings(&r).unwrap()[0];
        let rt = refine_tiling(t).unwrap();
        assert_eq!(rt.dominoes().len(), 250);
        Tiling::new(rt.region_arc().clone(), rt.dominoes().to_vec()).unwrap();
        let single = arc(make_box(2, 1, 1).unwrap());
        let st = refine_tiling(&enumerate_tilings(&single).unwrap()[0]).unwrap();
        assert_eq!(st.dominoes().len(), 125);
        assert!(st.dominoes().iter().all(|d| d.direction(st.region()).0 == Axis::X));
        assert_eq!(rr.color_of(CellCoord::new(5, 0, 0)), Color::White);
    }

    #[test]
    fn validation_errors() {
        let r = arc(make_box(2, 1, 1).unwrap());
        let c0 = CellCoord::new(0, 0, 0);
        let c1 = CellCoord::new(1, 0, 0);
        assert_eq!(Tiling::new(r.clone(), []), Err(TilingError::Uncovered(c0)));
        assert!(matches!(
            Tiling::new(r.clone(), [Domino::new(c0, c0)]),
            Err(TilingError::NotADomino(..))
        ));
        assert_eq!(
            Tiling::new(r.clone(), [Domino::new(c0, c1), Domino::new(c1, c0)]),
            Err(TilingError::Overlap(c0))
        );
        let t = Tiling::new(r, [Domino::new(c1, c0)]).unwrap();
        assert_eq!(t.dominoes()[0].black, c0);
    }

    #[test]
    fn json_round_trip() {
        let ts = enumerate_tilings(&hex()).unwrap();
        let s = ts[0].to_json();
        assert_eq!(Tiling::from_json(&s).unwrap(), ts[0]);
    }

    #[test]
    fn render_vertical_domino() {
        let r = arc(make_box(1, 1, 2).unwrap());
        let t = &enumerate_tilings(&r).unwrap()[0];
        assert_eq!(t.render(), "z = 0\n#\nz = 1\no\n");
        let r = arc(make_box(2, 1, 1).unwrap());
        let t = &enumerate_tilings(&r).unwrap()[0];
        assert_eq!(t.render(), "z = 0\n+---+\n");
    }

    #[test]
    fn torus_enumeration_wraps() {
        let r = arc(make_region(make_box(4, 1, 1).unwrap().cells().copied(), [Some(4), None, None]).unwrap());
        // A 4-cycle has two perfect matchings.
        assert_eq!(enumerate_tilings(&r).unwrap().len(), 2);
    }
}
