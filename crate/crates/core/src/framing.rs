//! Satellite curves for self-linking numbers.
//!
//! A curve (quarter units, axis-parallel segments) is pushed off along a
//! normal field. Satellites are returned together with a scale `f`: the core
//! curve must be multiplied by `f` to live in the same coordinates, and the
//! push-off has length one there, well below the spacing of the lattice.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LinkError;
use crate::pipes::{add, cross, P4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Framing {
    /// The normal is carried along the curve without turning about the
    /// tangent, starting in the plane of the first bend. At the end it is
    /// rotated back by the shortest quarter turn; a half turn is ambiguous.
    Transported,
    /// Transported framing with `turns` extra full twists per curve.
    Twisted { turns: i64 },
    /// Every vertex displaced by `offset8 / 8`. All three components must
    /// be odd.
    Constant { offset8: [i64; 3] },
}

pub const DEFAULT_FRAMING: Framing = Framing::Transported;

impl Default for Framing {
    fn default() -> Self {
        DEFAULT_FRAMING
    }
}

/// Per-curve framing data: the normal along each segment (unit axis
/// vectors for transported framings) and the quarter turns inserted on the
/// first segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramingData {
    pub normals: Vec<[i64; 3]>,
    pub quarter_turns: i64,
}

fn dot(a: P4, b: P4) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn scale(p: P4, f: i64) -> P4 {
    p.map(|c| c * f)
}

fn direction(a: P4, b: P4, i: usize) -> Result<P4, LinkError> {
    let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    if d.iter().filter(|c| **c != 0).count() != 1 {
        return Err(LinkError::DegenerateFraming(i));
    }
    Ok(d.map(i64::signum))
}

/// Parallel transport of a normal across a corner from `d_in` to `d_out`.
fn transport(x: P4, d_in: P4, d_out: P4) -> P4 {
    if d_in == d_out {
        return x;
    }
    let ax = cross(d_in, d_out);
    let (a, b, c) = (dot(x, d_in), dot(x, d_out), dot(x, ax));
    [0, 1, 2].map(|k| a * d_out[k] - b * d_in[k] + c * ax[k])
}

/// Push-off direction at a corner whose incoming and outgoing segments
/// carry normals `a` and `b`.
fn corner(a: P4, b: P4) -> P4 {
    if a == b {
        a
    } else {
        add(a, b)
    }
}

impl fmt::Display for Framing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Framing::Transported => write!(f, "transported"),
            Framing::Twisted { turns } => write!(f, "twisted:{turns}"),
            Framing::Constant { offset8: [a, b, c] } => write!(f, "constant:{a},{b},{c}"),
        }
    }
}

/// Parses `transported`, `twisted:N` or `constant:X,Y,Z`.
impl FromStr for Framing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("unknown framing {s:?}; use transported, twisted:N or constant:X,Y,Z");
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "transported" if arg.is_empty() => Ok(Framing::Transported),
            "twisted" => arg.parse().map(|turns| Framing::Twisted { turns }).map_err(|_| bad()),
            "constant" => {
                let v: Vec<i64> = arg
                    .split(',')
                    .map(|x| x.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?;
                let offset8: [i64; 3] = v.try_into().map_err(|_| bad())?;
                let f = Framing::Constant { offset8 };
                if !f.is_transversal() {
                    return Err(format!("constant framing offsets must be odd, got {s:?}"));
                }
                Ok(f)
            }
            _ => Err(bad()),
        }
    }
}

impl Framing {
    pub fn is_transversal(&self) -> bool {
        match self {
            Framing::Constant { offset8 } => offset8.iter().all(|v| v.rem_euclid(2) == 1),
            _ => true,
        }
    }

    /// Normals along each segment and the closing quarter turns.
    pub fn data(&self, curve4: &[P4]) -> Result<FramingData, LinkError> {
        let n = curve4.len();
        if n < 3 {
            return Err(LinkError::TooShort(n));
        }
        let turns = match self {
            Framing::Constant { offset8 } => {
                if !self.is_transversal() {
                    return Err(LinkError::DegenerateFraming(0));
                }
                return Ok(FramingData {
                    normals: vec![*offset8; n],
                    quarter_turns: 0,
                });
            }
            Framing::Transported => 0,
            Framing::Twisted { turns } => *turns,
        };
        let dirs = (0..n)
            .map(|i| direction(curve4[i], curve4[(i + 1) % n], i))
            .collect::<Result<Vec<_>, _>>()?;
        for i in 0..n {
            if dirs[(i + 1) % n] == dirs[i].map(|c| -c) {
                return Err(LinkError::DegenerateFraming((i + 1) % n));
            }
        }
        let d0 = dirs[0];
        let bend = dirs
            .iter()
            .copied()
            .find(|d| dot(*d, d0) == 0)
            .ok_or(LinkError::DegenerateFraming(0))?;
        let mut normals = Vec::with_capacity(n);
        normals.push(bend);
        for i in 1..n {
            let prev = normals[i - 1];
            normals.push(transport(prev, dirs[i - 1], dirs[i]));
        }
        let back = transport(normals[n - 1], dirs[n - 1], d0);
        // back = R^q normals[0], with R the quarter turn about d0.
        let mut q = 0;
        let mut x = normals[0];
        while x != back {
            x = cross(d0, x);
            q += 1;
            if q > 3 {
                return Err(LinkError::DegenerateFraming(0));
            }
        }
        let closing = match q {
            0 => 0,
            1 => -1,
            3 => 1,
            _ => return Err(LinkError::AmbiguousFraming),
        };
        Ok(FramingData {
            normals,
            quarter_turns: closing + 4 * turns,
        })
    }

    /// Satellite polyline and the scale applied to the core curve.
    pub fn satellite(&self, curve4: &[P4]) -> Result<(i64, Vec<P4>), LinkError> {
        let data = self.data(curve4)?;
        if let Framing::Constant { offset8 } = self {
            return Ok((2, curve4.iter().map(|p| add(scale(*p, 2), *offset8)).collect()));
        }
        let n = curve4.len();
        let q = data.quarter_turns;
        let f = 2 * (q.abs() + 1);
        let nr = &data.normals;
        let d0 = direction(curve4[0], curve4[1], 0)?;
        // The normal enters the first segment rotated by -q quarter turns.
        let mut m = nr[0];
        for _ in 0..q.rem_euclid(4) {
            m = cross(m, d0);
        }
        let mut sat = Vec::with_capacity(n + 2 * q.unsigned_abs() as usize);
        sat.push(add(scale(curve4[0], f), corner(nr[n - 1], m)));
        let step = if q > 0 { 1 } else { -1 };
        for k in 1..=q.abs() {
            let at = add(scale(curve4[0], f), d0.map(|c| c * 2 * k));
            sat.push(add(at, m));
            m = if step > 0 { cross(d0, m) } else { cross(m, d0) };
            sat.push(add(at, m));
        }
        debug_assert_eq!(m, nr[0]);
        for i in 1..n {
            sat.push(add(scale(curve4[i], f), corner(nr[i - 1], nr[i])));
        }
        Ok((f, sat))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkhel::linking_number;

    fn slk(c: &[P4], fr: Framing) -> i64 {
        let (f, sat) = fr.satellite(c).unwrap();
        let core: Vec<P4> = c.iter().map(|p| scale(*p, f)).collect();
        linking_number(&core, &sat).unwrap()
    }

    #[test]
    fn parse_and_print() {
        for f in [
            Framing::Transported,
            Framing::Twisted { turns: -3 },
            Framing::Constant { offset8: [1, -1, 3] },
        ] {
            assert_eq!(f.to_string().parse::<Framing>(), Ok(f));
        }
        assert!("constant:1,2,1".parse::<Framing>().is_err());
        assert!("twisted".parse::<Framing>().is_err());
        assert!("bishop".parse::<Framing>().is_err());
    }

    #[test]
    fn square_and_twists() {
        let sq: Vec<P4> = vec![[0, 0, 0], [4, 0, 0], [4, 4, 0], [0, 4, 0]];
        let d = Framing::Transported.data(&sq).unwrap();
        assert_eq!(d.quarter_turns, 0);
        assert_eq!(slk(&sq, Framing::Transported), 0);
        assert_eq!(slk(&sq, Framing::Twisted { turns: 1 }), 1);
        assert_eq!(slk(&sq, Framing::Twisted { turns: -2 }), -2);
        assert_eq!(slk(&sq, Framing::Constant { offset8: [1, 1, 1] }), 0);
    }

    #[test]
    fn collinear_and_backtracking_vertices() {
        let c: Vec<P4> = vec![[0, 0, 0], [2, 0, 0], [4, 0, 0], [4, 4, 0], [0, 4, 0]];
        assert_eq!(slk(&c, Framing::Transported), 0);
        let back: Vec<P4> = vec![[0, 0, 0], [4, 0, 0], [2, 0, 0], [2, 4, 0], [0, 4, 0]];
        assert_eq!(Framing::Transported.data(&back), Err(LinkError::DegenerateFraming(1)));
        let diag: Vec<P4> = vec![[0, 0, 0], [4, 4, 0], [0, 4, 0]];
        assert_eq!(Framing::Transported.data(&diag), Err(LinkError::DegenerateFraming(0)));
    }

    #[test]
    fn self_linking_is_rounded_writhe() {
        // Small random lattice walks closed up into simple polygons.
        use crate::linkhel::writhe_oracle;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut seen_turn = false;
        let mut checked = 0;
        while checked < 40 {
            let mut pts: Vec<P4> = vec![[0, 0, 0]];
            let mut p = [0, 0, 0];
            for _ in 0..rng.gen_range(4..9) {
                let mut d = [0; 3];
                d[rng.gen_range(0..3)] = if rng.gen_bool(0.5) { 1 } else { -1 };
                p = add(p, d.map(|c| c * rng.gen_range(1..4)));
                pts.push(p);
            }
            // Close with an axis-parallel staircase back to the origin.
            let mut q = p;
            for k in 0..3 {
                if q[k] != 0 {
                    q[k] = 0;
                    pts.push(q);
                }
            }
            pts.pop();
            let mut c: Vec<P4> = Vec::new();
            for x in pts {
                if c.last() != Some(&x) {
                    c.push(x);
                }
            }
            let simple = {
                let n = c.len();
                n >= 4
                    && (0..n).all(|i| {
                        (0..n).all(|j| {
                            let adj = i == j || (i + 1) % n == j || (j + 1) % n == i;
                            adj || !crate::geom::segments_meet(c[i], c[(i + 1) % n], c[j], c[(j + 1) % n])
                        })
                    })
            };
            if !simple {
                continue;
            }
            let Ok(d) = Framing::Transported.data(&c) else { continue };
            let w = writhe_oracle(&c);
            assert!((w - w.round()).abs() > 0.1 || d.quarter_turns == 0);
            seen_turn |= d.quarter_turns != 0;
            assert_eq!(slk(&c, Framing::Transported), w.round() as i64, "{c:?} writhe {w}");
            checked += 1;
        }
        assert!(seen_turn);
    }
}
