//! Linking and self-linking numbers of disjoint closed polygonal curves,
//! helicity of a curve system, and tabulation matrices.
//!
//! Curves are closed polylines with integer vertices in any common unit.
//! Linking numbers are half the sum of crossing signs in a generic
//! projection; every test is an exact integer determinant.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::LinkError;
use crate::pipes::{Framing, P4};

const DIRECTION_SEED: u64 = 0x5eed_0f_1c;
pub const MAX_DIRECTION_TRIES: usize = 64;

type V = [i128; 3];

fn v(p: P4) -> V {
    p.map(|c| c as i128)
}

fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn det(a: V, b: V, c: V) -> i128 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn cross(a: V, b: V) -> V {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: V, b: V) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Crossing {
    None,
    Sign(i64),
    /// The projection is not generic for this pair.
    Degenerate,
    /// The segments meet in space.
    Touching,
}

/// Crossing of segments `a0a1` and `b0b1` seen along `d`. The sign is that
/// of `det(a', b', a - b)` at the crossing, matching the Gauss integrand.
fn crossing(a0: V, a1: V, b0: V, b1: V, d: V) -> Crossing {
    let ad = sub(a1, a0);
    let bd = sub(b1, b0);
    let nb = [-bd[0], -bd[1], -bd[2]];
    let r = sub(b0, a0);
    let mut den = det(ad, nb, d);
    if den == 0 {
        // Parallel projections; degenerate only if they overlap on one line.
        if det(ad, r, d) != 0 {
            return Crossing::None;
        }
        let ax = cross(ad, d);
        let n2 = dot(ax, ax);
        if n2 == 0 {
            return Crossing::Degenerate;
        }
        let s0 = dot(cross(r, d), ax);
        let s1 = dot(cross(sub(b1, a0), d), ax);
        let (lo, hi) = (s0.min(s1), s0.max(s1));
        return if hi < 0 || lo > n2 {
            Crossing::None
        } else {
            Crossing::Degenerate
        };
    }
    let mut s = det(r, nb, d);
    let mut t = det(ad, r, d);
    // The crossing sign is that of lam before normalising den.
    let lam = det(ad, nb, r);
    if den < 0 {
        den = -den;
        s = -s;
        t = -t;
    }
    if s < 0 || s > den || t < 0 || t > den {
        return Crossing::None;
    }
    if lam == 0 {
        return Crossing::Touching;
    }
    if s == 0 || s == den || t == 0 || t == den {
        return Crossing::Degenerate;
    }
    Crossing::Sign(lam.signum() as i64)
}

fn segments(curve: &[P4]) -> impl Iterator<Item = (V, V)> + '_ {
    let n = curve.len();
    (0..n).map(move |i| (v(curve[i]), v(curve[(i + 1) % n])))
}

/// Deterministic sequence of candidate projection directions.
pub fn directions() -> impl Iterator<Item = V> {
    let mut rng = ChaCha8Rng::seed_from_u64(DIRECTION_SEED);
    std::iter::repeat_with(move || {
        [0; 3].map(|_| {
            let m: i128 = rng.gen_range(17..=997);
            if rng.gen_bool(0.5) {
                m
            } else {
                -m
            }
        })
    })
    .take(MAX_DIRECTION_TRIES)
}

/// Sum of crossing signs between the two curves along `d`, or `None` when
/// `d` is not generic.
pub fn crossing_sum(c1: &[P4], c2: &[P4], d: V) -> Result<Option<i64>, LinkError> {
    let mut total = 0;
    for (a0, a1) in segments(c1) {
        for (b0, b1) in segments(c2) {
            match crossing(a0, a1, b0, b1, d) {
                Crossing::None => {}
                Crossing::Sign(s) => total += s,
                Crossing::Degenerate => return Ok(None),
                Crossing::Touching => return Err(LinkError::Intersecting),
            }
        }
    }
    Ok(Some(total))
}

fn check_len(c: &[P4]) -> Result<(), LinkError> {
    if c.len() < 3 {
        Err(LinkError::TooShort(c.len()))
    } else {
        Ok(())
    }
}

/// Gauss linking number of two disjoint closed polylines.
pub fn linking_number(c1: &[P4], c2: &[P4]) -> Result<i64, LinkError> {
    check_len(c1)?;
    check_len(c2)?;
    for d in directions() {
        if let Some(total) = crossing_sum(c1, c2, d)? {
            debug_assert!(total % 2 == 0);
            return Ok(total / 2);
        }
    }
    Err(LinkError::NoGenericDirection(MAX_DIRECTION_TRIES))
}

/// Linking number along a given direction; used to check projection
/// independence.
pub fn linking_number_along(c1: &[P4], c2: &[P4], d: [i64; 3]) -> Result<Option<i64>, LinkError> {
    Ok(crossing_sum(c1, c2, v(d))?.map(|t| t / 2))
}

/// Linking number of a curve (quarter units) with its push-off.
pub fn self_linking(curve4: &[P4], framing: &Framing) -> Result<i64, LinkError> {
    check_len(curve4)?;
    let (f, sat) = framing.satellite(curve4)?;
    let core: Vec<P4> = curve4.iter().map(|p| p.map(|c| f * c)).collect();
    linking_number(&core, &sat).map_err(|e| match e {
        LinkError::Intersecting => LinkError::DegenerateFraming(0),
        other => other,
    })
}

/// Symmetric matrix with linking numbers off the diagonal and
/// self-linking numbers on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabulationMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl TabulationMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.entries.iter().flatten().sum()
    }

    /// Indices of curves with a nonzero row.
    pub fn nontrivial(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.entries[i].iter().any(|&x| x != 0))
            .collect()
    }

    pub fn submatrix(&self, idx: &[usize]) -> TabulationMatrix {
        TabulationMatrix {
            entries: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.entries[i][j]).collect())
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Rows as text, one row per line, entries right-aligned.
    pub fn render(&self) -> String {
        let w = self
            .entries
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        let mut s = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>w$}")).collect();
            s.push_str(&format!("[ {} ]\n", cells.join(" ")));
        }
        s
    }
}

/// Tabulation matrix of closed curves (quarter units) with one framing.
pub fn tabulation_matrix(curves: &[Vec<P4>], framing: &Framing) -> Result<TabulationMatrix, LinkError> {
    use rayon::prelude::*;
    let n = curves.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<i64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            if i == j {
                self_linking(&curves[i], framing)
            } else if !boxes_overlap_shadow(&curves[i], &curves[j]) {
                Ok(0)
            } else {
                linking_number(&curves[i], &curves[j])
            }
        })
        .collect::<Result<_, _>>()?;
    let mut entries = vec![vec![0; n]; n];
    for (&(i, j), val) in pairs.iter().zip(values) {
        entries[i][j] = val;
        entries[j][i] = val;
    }
    Ok(TabulationMatrix { entries })
}

/// Disjoint bounding boxes imply zero linking.
fn boxes_overlap_shadow(a: &[P4], b: &[P4]) -> bool {
    let bbox = |c: &[P4]| {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for p in c {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    };
    let (la, ha) = bbox(a);
    let (lb, hb) = bbox(b);
    (0..3).all(|k| la[k] <= hb[k] && lb[k] <= ha[k])
}

/// Helicity in units of phi squared: sum of all tabulation entries, which
/// is `2 sum_{i<j} lk + sum slk` for equal fluxes.
pub fn helicity_coefficient(m: &TabulationMatrix) -> i64 {
    m.sum()
}

/// Helicity for per-curve fluxes.
pub fn helicity_with_fluxes(m: &TabulationMatrix, flux: &[Rational64]) -> Rational64 {
    let mut h = Rational64::from_integer(0);
    for i in 0..m.len() {
        for j in 0..m.len() {
            h += Rational64::from_integer(m.entries[i][j]) * flux[i] * flux[j];
        }
    }
    h
}

/// Numeric Gauss double integral over all segment pairs, using the closed
/// form solid angle of a pair of straight segments. Each segment is split
/// into `samples` pieces first. Test oracle only.
pub fn gauss_integral_oracle(c1: &[P4], c2: &[P4], samples: usize) -> f64 {
    let split = |c: &[P4]| -> Vec<([f64; 3], [f64; 3])> {
        let n = c.len();
        let k = samples.max(1);
        let mut out = Vec::with_capacity(n * k);
        for i in 0..n {
            let a = c[i].map(|x| x as f64);
            let b = c[(i + 1) % n].map(|x| x as f64);
            for s in 0..k {
                let t0 = s as f64 / k as f64;
                let t1 = (s + 1) as f64 / k as f64;
                let p = |t: f64| {
                    [
                        a[0] + t * (b[0] - a[0]),
                        a[1] + t * (b[1] - a[1]),
                        a[2] + t * (b[2] - a[2]),
                    ]
                };
                out.push((p(t0), p(t1)));
            }
        }
        out
    };
    let s1 = split(c1);
    let s2 = split(c2);
    let mut total = 0.0;
    for &(p1, p2) in &s1 {
        for &(p3, p4) in &s2 {
            total += segment_pair_solid_angle(p1, p2, p3, p4);
        }
    }
    total / (4.0 * std::f64::consts::PI)
}

/// Numeric writhe of a closed polyline: the Gauss integral of the curve
/// with itself, skipping each segment paired with itself or a neighbour.
/// Test oracle only.
pub fn writhe_oracle(c: &[P4]) -> f64 {
    let n = c.len();
    let f = |p: P4| p.map(|x| x as f64);
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j || (i + 1) % n == j || (j + 1) % n == i {
                continue;
            }
            total += segment_pair_solid_angle(f(c[i]), f(c[(i + 1) % n]), f(c[j]), f(c[(j + 1) % n]));
        }
    }
    total / (4.0 * std::f64::consts::PI)
}

fn segment_pair_solid_angle(p1: [f64; 3], p2: [f64; 3], p3: [f64; 3], p4: [f64; 3]) -> f64 {
    let s = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let cr = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let dt = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let unit = |a: [f64; 3]| {
        let n = dt(a, a).sqrt();
        if n < 1e-300 {
            None
        } else {
            Some([a[0] / n, a[1] / n, a[2] / n])
        }
    };
    let r13 = s(p3, p1);
    let r14 = s(p4, p1);
    let r23 = s(p3, p2);
    let r24 = s(p4, p2);
    let normals = [cr(r13, r14), cr(r14, r24), cr(r24, r23), cr(r23, r13)];
    let mut n = [[0.0; 3]; 4];
    for (k, raw) in normals.iter().enumerate() {
        match unit(*raw) {
            Some(u) => n[k] = u,
            None => return 0.0,
        }
    }
    let asin = |x: f64| x.clamp(-1.0, 1.0).asin();
    let omega = asin(dt(n[0], n[1])) + asin(dt(n[1], n[2])) + asin(dt(n[2], n[3])) + asin(dt(n[3], n[0]));
    let orient = dt(cr(s(p4, p3), s(p2, p1)), r13);
    if orient.abs() < 1e-300 {
        return 0.0;
    }
    omega * orient.signum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipes::DEFAULT_FRAMING;

    fn hopf() -> (Vec<P4>, Vec<P4>) {
        (
            vec![[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0]],
            vec![[1, 1, -1], [1, 1, 1], [1, 3, 1], [1, 3, -1]],
        )
    }

    #[test]
    fn hopf_link_is_plus_one() {
        let (a, b) = hopf();
        assert_eq!(linking_number(&a, &b), Ok(1));
        assert_eq!(linking_number(&b, &a), Ok(1));
        let rev: Vec<P4> = b.iter().rev().copied().collect();
        assert_eq!(linking_number(&a, &rev), Ok(-1));
        assert!((gauss_integral_oracle(&a, &b, 1) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn separated_squares() {
        let a: Vec<P4> = vec![[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]];
        let b: Vec<P4> = a.iter().map(|p| [p[0] + 5, p[1], p[2]]).collect();
        assert_eq!(linking_number(&a, &b), Ok(0));
        assert!(gauss_integral_oracle(&a, &b, 1).abs() < 1e-6);
    }

    #[test]
    fn touching_curves_error() {
        let a: Vec<P4> = vec![[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0]];
        let b: Vec<P4> = vec![[1, 0, -1], [1, 0, 1], [1, -2, 1], [1, -2, -1]];
        assert_eq!(linking_number(&a, &b), Err(LinkError::Intersecting));
        assert_eq!(linking_number(&a[..2], &b), Err(LinkError::TooShort(2)));
    }

    #[test]
    fn planar_curve_has_zero_self_linking() {
        let sq: Vec<P4> = vec![[0, 0, 0], [4, 0, 0], [4, 4, 0], [0, 4, 0]];
        assert_eq!(self_linking(&sq, &DEFAULT_FRAMING), Ok(0));
        assert_eq!(
            self_linking(&sq, &Framing::Constant { offset8: [1, 0, 1] }),
            Err(LinkError::DegenerateFraming(0))
        );
    }

    #[test]
    fn projection_independence_on_hopf() {
        let (a, b) = hopf();
        let mut seen = 0;
        for d in [[3, 5, 7], [-11, 2, 13], [17, -19, 4], [1, 23, -29], [31, 37, 41]] {
            if let Some(lk) = linking_number_along(&a, &b, d).unwrap() {
                assert_eq!(lk, 1);
                seen += 1;
            }
        }
        assert!(seen >= 5);
    }

    #[test]
    fn torus_knot_style_double_link() {
        // A curve winding twice through a square has linking number 2.
        let a: Vec<P4> = vec![[0, 0, 0], [10, 0, 0], [10, 10, 0], [0, 10, 0]];
        let b: Vec<P4> = vec![
            [2, 2, -3],
            [2, 2, 3],
            [12, 2, 3],
            [12, 2, -2],
            [4, 2, -2],
            [4, 4, -2],
            [4, 4, 2],
            [14, 4, 2],
            [14, 4, -3],
        ];
        let lk = linking_number(&a, &b).unwrap();
        assert_eq!(lk, 2);
        assert!((gauss_integral_oracle(&a, &b, 1) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn helicity_formula() {
        let m = TabulationMatrix {
            entries: vec![vec![-2; 3]; 3],
        };
        assert_eq!(helicity_coefficient(&m), -18);
        let phi = Rational64::new(1, 6);
        assert_eq!(helicity_with_fluxes(&m, &[phi; 3]), Rational64::new(-1, 2));
        assert_eq!(m.nontrivial(), vec![0, 1, 2]);
    }
}
