//! Exact tests on integer segments.

use crate::pipes::P4;

type V = [i128; 3];

fn v(p: P4) -> V {
    p.map(|c| c as i128)
}

fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
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

/// Whether closed segments `a0a1` and `b0b1` share a point.
pub fn segments_meet(a0: P4, a1: P4, b0: P4, b1: P4) -> bool {
    for k in 0..3 {
        if a0[k].max(a1[k]) < b0[k].min(b1[k]) || b0[k].max(b1[k]) < a0[k].min(a1[k]) {
            return false;
        }
    }
    let (a0, a1, b0, b1) = (v(a0), v(a1), v(b0), v(b1));
    let u = sub(a1, a0);
    let w = sub(b1, b0);
    let r = sub(b0, a0);
    let n = cross(u, w);
    if n != [0; 3] {
        if dot(n, r) != 0 {
            return false;
        }
        // Coplanar, not parallel: a0 + s u = b0 + t w.
        let nn = dot(n, n);
        let s = dot(cross(r, w), n);
        let t = dot(cross(r, u), n);
        return (0..=nn).contains(&s) && (0..=nn).contains(&t);
    }
    // Parallel (or degenerate).
    if cross(r, u) != [0; 3] {
        // Distinct parallel lines, or u is zero.
        if u == [0; 3] {
            return point_on_segment(a0, b0, b1);
        }
        return false;
    }
    if u == [0; 3] {
        return point_on_segment(a0, b0, b1);
    }
    let uu = dot(u, u);
    let s0 = dot(r, u);
    let s1 = dot(sub(b1, a0), u);
    let (lo, hi) = (s0.min(s1), s0.max(s1));
    hi >= 0 && lo <= uu
}

fn point_on_segment(p: V, b0: V, b1: V) -> bool {
    let w = sub(b1, b0);
    let r = sub(p, b0);
    if cross(r, w) != [0; 3] {
        return false;
    }
    let t = dot(r, w);
    t >= 0 && t <= dot(w, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases() {
        assert!(segments_meet([0, 0, 0], [4, 0, 0], [2, -1, 0], [2, 1, 0]));
        assert!(!segments_meet([0, 0, 0], [4, 0, 0], [2, -1, 1], [2, 1, 1]));
        assert!(segments_meet([0, 0, 0], [4, 0, 0], [4, 0, 0], [4, 3, 0]));
        assert!(segments_meet([0, 0, 0], [4, 0, 0], [3, 0, 0], [9, 0, 0]));
        assert!(!segments_meet([0, 0, 0], [4, 0, 0], [5, 0, 0], [9, 0, 0]));
        assert!(!segments_meet([0, 0, 0], [4, 0, 0], [0, 1, 0], [4, 1, 0]));
        assert!(segments_meet([0, 0, 0], [4, 4, 4], [0, 4, 0], [4, 0, 4]));
        assert!(segments_meet([0, 0, 0], [4, 4, 4], [0, 4, 0], [4, 1, 4]));
        assert!(!segments_meet([0, 0, 0], [4, 4, 4], [0, 4, 0], [4, 1, 5]));
    }
}
