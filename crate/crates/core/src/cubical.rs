//! Cubical cell complexes built from a set of lattice cubes.
//!
//! Cells are encoded by their center in "code units", where a cube has side
//! two: a coordinate is odd exactly when the cell extends along that axis.
//! The unit-cube complex of a region uses half-integer code units; the finer
//! complex used for chains uses quarter units.

use std::collections::{HashMap, HashSet};

pub type Code = [i64; 3];

pub fn dim_of(code: &Code) -> usize {
    code.iter().filter(|c| c.rem_euclid(2) == 1).count()
}

#[derive(Debug, Clone)]
pub struct CubicalComplex {
    /// Cells of each dimension, sorted.
    cells: [Vec<Code>; 4],
    index: [HashMap<Code, usize>; 4],
    /// Cells lying in the boundary subcomplex.
    boundary: HashSet<Code>,
    /// Periods in code units.
    periods: [Option<i64>; 3],
}

impl CubicalComplex {
    /// Builds the complex from cube indices (cube `q` has code `2q + 1`).
    /// `periods` are given in cube units.
    pub fn from_cubes<I: IntoIterator<Item = [i64; 3]>>(cubes: I, periods: [Option<i64>; 3]) -> Self {
        let periods = periods.map(|p| p.map(|p| 2 * p));
        let mut sets: [HashSet<Code>; 4] = Default::default();
        let mut face_count: HashMap<Code, u8> = HashMap::new();
        for q in cubes {
            for dx in 0..3 {
                for dy in 0..3 {
                    for dz in 0..3 {
                        let code = canonical(&[2 * q[0] + dx, 2 * q[1] + dy, 2 * q[2] + dz], &periods);
                        let d = dim_of(&code);
                        sets[d].insert(code);
                        if d == 2 {
                            *face_count.entry(code).or_default() += 1;
                        }
                    }
                }
            }
        }
        let mut boundary = HashSet::new();
        for (face, n) in &face_count {
            if *n == 1 {
                let mut stack = vec![*face];
                while let Some(c) = stack.pop() {
                    if boundary.insert(c) {
                        stack.extend(boundary_of(&c, &periods).into_iter().map(|(f, _)| f));
                    }
                }
            }
        }
        let cells = sets.map(|s| {
            let mut v: Vec<Code> = s.into_iter().collect();
            v.sort();
            v
        });
        let index = [0, 1, 2, 3].map(|d| cells[d].iter().enumerate().map(|(i, c)| (*c, i)).collect());
        CubicalComplex {
            cells,
            index,
            boundary,
            periods,
        }
    }

    pub fn cells(&self, dim: usize) -> &[Code] {
        &self.cells[dim]
    }

    pub fn index_of(&self, code: &Code) -> Option<usize> {
        self.index[dim_of(code)].get(code).copied()
    }

    pub fn contains(&self, code: &Code) -> bool {
        self.index_of(&self.canonical(code)).is_some()
    }

    pub fn in_boundary(&self, code: &Code) -> bool {
        self.boundary.contains(code)
    }

    pub fn boundary_cells(&self, dim: usize) -> impl Iterator<Item = &Code> {
        self.cells[dim].iter().filter(move |c| self.boundary.contains(*c))
    }

    pub fn len(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn periods(&self) -> [Option<i64>; 3] {
        self.periods
    }

    pub fn canonical(&self, code: &Code) -> Code {
        canonical(code, &self.periods)
    }

    /// Signed boundary of a cell.
    pub fn boundary(&self, code: &Code) -> Vec<(Code, i64)> {
        boundary_of(code, &self.periods)
    }

    /// Boundary matrix `C_dim -> C_{dim-1}` as sparse columns of row indices,
    /// optionally dropping cells of the boundary subcomplex (relative chains).
    pub fn boundary_matrix(&self, dim: usize, relative: bool) -> (Vec<Code>, Vec<Code>, Vec<Vec<(usize, i64)>>) {
        let keep = |c: &Code| !relative || !self.boundary.contains(c);
        let cols: Vec<Code> = self.cells[dim].iter().filter(|c| keep(c)).copied().collect();
        let rows: Vec<Code> = if dim == 0 {
            Vec::new()
        } else {
            self.cells[dim - 1].iter().filter(|c| keep(c)).copied().collect()
        };
        let row_index: HashMap<Code, usize> = rows.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let matrix = cols
            .iter()
            .map(|c| {
                let mut col: Vec<(usize, i64)> = Vec::new();
                if dim > 0 {
                    for (f, s) in self.boundary(c) {
                        if let Some(&r) = row_index.get(&f) {
                            col.push((r, s));
                        }
                    }
                }
                col.sort();
                merge_sorted(col)
            })
            .collect();
        (cols, rows, matrix)
    }
}

fn merge_sorted(col: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(col.len());
    for (r, s) in col {
        match out.last_mut() {
            Some((lr, ls)) if *lr == r => *ls += s,
            _ => out.push((r, s)),
        }
    }
    out.retain(|(_, s)| *s != 0);
    out
}

pub fn canonical(code: &Code, periods: &[Option<i64>; 3]) -> Code {
    let mut c = *code;
    for a in 0..3 {
        if let Some(p) = periods[a] {
            c[a] = c[a].rem_euclid(p);
        }
    }
    c
}

/// Standard cubical boundary: for extended axes `a_0 < a_1 < ..`, the face
/// at the upper end of `a_i` has sign `(-1)^i` and the lower one the opposite.
pub fn boundary_of(code: &Code, periods: &[Option<i64>; 3]) -> Vec<(Code, i64)> {
    let mut out = Vec::with_capacity(6);
    let mut i = 0;
    for a in 0..3 {
        if code[a].rem_euclid(2) == 1 {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let mut up = *code;
            up[a] += 1;
            let mut lo = *code;
            lo[a] -= 1;
            out.push((canonical(&up, periods), sign));
            out.push((canonical(&lo, periods), -sign));
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cube_counts() {
        let k = CubicalComplex::from_cubes([[0, 0, 0]], [None; 3]);
        assert_eq!(
            [k.cells(0).len(), k.cells(1).len(), k.cells(2).len(), k.cells(3).len()],
            [8, 12, 6, 1]
        );
        assert_eq!(k.boundary_cells(2).count(), 6);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let k = CubicalComplex::from_cubes([[0, 0, 0], [1, 0, 0], [0, 1, 1]], [None; 3]);
        for d in 2..4 {
            for c in k.cells(d) {
                let mut acc: HashMap<Code, i64> = HashMap::new();
                for (f, s) in k.boundary(c) {
                    for (g, t) in k.boundary(&f) {
                        *acc.entry(g).or_default() += s * t;
                    }
                }
                assert!(acc.values().all(|v| *v == 0), "{c:?}");
            }
        }
    }

    #[test]
    fn torus_has_no_boundary() {
        let cubes = (0..4).flat_map(|x| (0..4).flat_map(move |y| (0..4).map(move |z| [x, y, z])));
        let k = CubicalComplex::from_cubes(cubes, [Some(4); 3]);
        assert_eq!(k.cells(3).len(), 64);
        assert_eq!(k.cells(0).len(), 64);
        assert_eq!(k.boundary_cells(2).count(), 0);
    }
}
