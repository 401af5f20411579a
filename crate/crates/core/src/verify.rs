//! The reproduction suite: one check per published claim about the
//! builtin fixtures, each reported as a pass/fail line.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rayon::prelude::*;

use crate::curves::{assemble_curves, CurveOptions, CurveSystem, PipeMode};
use crate::fixtures::{builtin, Fixture, AUTO_MARGIN};
use crate::framing::{Framing, DEFAULT_FRAMING};
use crate::homology::{
    chain_section_intersection, flux_diff_class_with, rflux_with, six_t_minus_q1, DualHomology, Section,
};
use crate::linkhel::{gauss_integral_oracle, linking_number, TabulationMatrix};
use crate::pipes::P4;
use crate::shell::{layered_auto, Shell};
use crate::tiling::{enumerate_tilings, move_graph, Tiling};
use crate::twist::{cross_check, helicity};

pub const COUNT_LIMIT: Duration = Duration::from_secs(5);
pub const MATRIX_LIMIT: Duration = Duration::from_secs(30);
pub const SWEEP_LIMIT: Duration = Duration::from_secs(600);
pub const RFLUX_LIMIT: Duration = Duration::from_secs(300);
pub const ORACLE_LIMIT: Duration = Duration::from_secs(60);
/// Largest allowed gap between an exact linking number and the numeric
/// Gauss integral.
pub const ORACLE_TOLERANCE: f64 = 0.5;
/// Sections tried per tiling in the rotation class check.
pub const MIN_SECTIONS: usize = 3;

/// Linking matrix of the seven tracked curves of the first tiling of the
/// 3x3x2 box.
pub const BOX332_MATRIX: [[i64; 7]; 7] = [
    [0, 0, -1, -1, -1, -1, -1],
    [0, 0, 0, 0, 0, 0, -1],
    [-1, 0, -1, -1, -1, -1, -1],
    [-1, 0, -1, -1, -1, -1, -1],
    [-1, 0, -1, -1, -1, -1, -1],
    [-1, 0, -1, -1, -1, -1, -1],
    [-1, -1, -1, -1, -1, -1, 0],
];

pub const HEX_MATRIX: [[i64; 3]; 3] = [[-2; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub phi: Rational64,
    pub framing: Framing,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            phi: Rational64::new(1, 6),
            framing: DEFAULT_FRAMING,
        }
    }
}

impl VerifyOptions {
    fn curves(&self, mode: PipeMode) -> CurveOptions {
        CurveOptions {
            phi: self.phi,
            mode,
            framing: self.framing,
        }
    }

    fn p2(&self) -> Rational64 {
        self.phi * self.phi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {} ({:.2}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&c.line());
            s.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        s.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        s
    }
}

pub const TITLES: [&str; 11] = [
    "tiling counts",
    "move structure",
    "tabulation matrices",
    "helicity values",
    "twist sweep",
    "flip and trit steps",
    "shell independence",
    "relative flux",
    "rotation class",
    "linking oracle",
    "mirror antisymmetry",
];

type Outcome = Result<(bool, String), String>;

/// Runs check `id` (1 to 11).
pub fn run_check(id: usize, opts: &VerifyOptions) -> Check {
    let start = Instant::now();
    let out: Outcome = match id {
        1 => counts(),
        2 => moves(),
        3 => matrices(opts),
        4 => helicities(opts),
        5 => sweep(opts),
        6 => edges(opts),
        7 => shells(opts),
        8 => relative_flux(),
        9 => rotation_class(opts),
        10 => oracle(opts),
        11 => mirror(opts),
        _ => Err(format!("no check numbered {id}")),
    };
    let elapsed = start.elapsed();
    let limit = match id {
        1 => Some(COUNT_LIMIT),
        3 => Some(MATRIX_LIMIT),
        5 => Some(SWEEP_LIMIT),
        8 => Some(RFLUX_LIMIT),
        10 => Some(ORACLE_LIMIT),
        _ => None,
    };
    let (mut pass, mut detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(l) = limit {
        if elapsed > l {
            pass = false;
            detail.push_str(&format!("; over the {}s limit", l.as_secs()));
        }
    }
    Check {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        pass,
        detail,
        elapsed,
    }
}

pub fn verify_paper(opts: &VerifyOptions) -> Report {
    Report {
        checks: (1..=11).map(|i| run_check(i, opts)).collect(),
    }
}

fn load(name: &str) -> Result<Fixture, String> {
    builtin(name).map_err(|e| e.to_string())
}

fn stored<'a>(f: &'a Fixture, name: &str) -> Result<&'a Tiling, String> {
    f.tiling(name).ok_or_else(|| format!("{} has no tiling {name}", f.name))
}

fn shell_of(f: &Fixture) -> Result<Shell, String> {
    f.shell_or_auto().map_err(|e| e.to_string())
}

fn all_tilings(f: &Fixture) -> Result<Vec<Tiling>, String> {
    enumerate_tilings(&f.region).map_err(|e| e.to_string())
}

fn system(t: &Tiling, s: &Shell, opts: &VerifyOptions, mode: PipeMode) -> Result<CurveSystem, String> {
    assemble_curves(t, s, &opts.curves(mode)).map_err(|e| e.to_string())
}

fn hel(t: &Tiling, s: &Shell, opts: &VerifyOptions) -> Result<Rational64, String> {
    helicity(t, s, &opts.curves(PipeMode::Five)).map_err(|e| e.to_string())
}

fn hels(ts: &[Tiling], s: &Shell, opts: &VerifyOptions) -> Result<Vec<Rational64>, String> {
    ts.par_iter().map(|t| hel(t, s, opts)).collect()
}

/// `x` as a multiple of phi squared.
fn in_p2(x: Rational64, opts: &VerifyOptions) -> String {
    format!("{}phi^2", x / opts.p2())
}

fn counts() -> Outcome {
    let mut got = Vec::new();
    for (name, want) in [("box-2-2-1", 2), ("hex", 2), ("box-3-3-2", 229)] {
        let n = all_tilings(&load(name)?)?.len();
        got.push((name, n, want));
    }
    let pass = got.iter().all(|(_, n, w)| n == w);
    let detail = got
        .iter()
        .map(|(name, n, _)| format!("{name}={n}"))
        .collect::<Vec<_>>()
        .join(" ");
    Ok((pass, detail))
}

fn moves() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let b = load("box-2-2-1")?;
    let g = move_graph(&all_tilings(&b)?).map_err(|e| e.to_string())?;
    let ok = g.tilings.len() == 2 && g.flips == vec![(0, 1)] && g.trits.is_empty();
    pass &= ok;
    notes.push(format!("box-2-2-1 {} flips {} trits", g.flips.len(), g.trits.len()));

    let h = load("hex")?;
    let (t0, t1) = (stored(&h, "t0")?, stored(&h, "t1")?);
    let g = move_graph(&all_tilings(&h)?).map_err(|e| e.to_string())?;
    let trits = t0.list_trits();
    let ok = g.flips.is_empty()
        && g.trits.len() == 1
        && trits.len() == 1
        && trits[0].sign == 1
        && t0.apply_trit(&trits[0]).ok().as_ref() == Some(t1);
    pass &= ok;
    notes.push(format!("hex t0->t1 trit sign {:?}", trits.first().map(|t| t.sign)));

    let f = load("box-3-3-2")?;
    let t = stored(&f, "t0")?;
    let trits = t.list_trits();
    let after: Vec<usize> = trits
        .iter()
        .filter_map(|r| t.apply_trit(r).ok())
        .map(|u| u.list_flips().len())
        .collect();
    let ok = t.list_flips().is_empty()
        && !trits.is_empty()
        && trits.iter().all(|r| r.sign == 1)
        && after.iter().all(|&n| n > 0);
    pass &= ok;
    notes.push(format!(
        "box-3-3-2 t0 {} flips, {} positive trits",
        t.list_flips().len(),
        trits.iter().filter(|r| r.sign == 1).count()
    ));
    Ok((pass, notes.join("; ")))
}

/// Matches `m` to `want` up to a simultaneous permutation of rows and
/// columns. Returns the permutation with the fewest mismatched entries
/// and the mismatches, as (row, column, got, want) in the order of `want`.
pub fn match_matrix(m: &TabulationMatrix, want: &[Vec<i64>]) -> Option<(Vec<usize>, Vec<(usize, usize, i64, i64)>)> {
    let n = want.len();
    if m.len() != n {
        return None;
    }
    let mut best: Option<(Vec<usize>, Vec<(usize, usize, i64, i64)>)> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let g = m.entries[p[i]][p[j]];
                if g != want[i][j] {
                    bad.push((i, j, g, want[i][j]));
                }
            }
        }
        if best.as_ref().map_or(true, |(_, b)| bad.len() < b.len()) {
            best = Some((p.to_vec(), bad));
        }
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn matrix_vs(t: &Tiling, s: &Shell, opts: &VerifyOptions, want: &[Vec<i64>]) -> Result<(bool, String), String> {
    let sys = system(t, s, opts, PipeMode::Five)?;
    let m = sys.tabulation_matrix().map_err(|e| e.to_string())?;
    let nt = m.nontrivial();
    let sub = m.submatrix(&nt);
    if nt.len() != want.len() {
        return Ok((
            false,
            format!("{} nontrivial curves, expected {}", nt.len(), want.len()),
        ));
    }
    let (perm, bad) = match_matrix(&sub, want).expect("sizes agree");
    if bad.is_empty() {
        return Ok((true, format!("{n}x{n} exact", n = want.len())));
    }
    let list: Vec<String> = bad
        .iter()
        .map(|(i, j, g, w)| format!("C{}C{}={g} (expected {w})", i + 1, j + 1))
        .collect();
    let curves: Vec<usize> = perm.iter().map(|&k| nt[k]).collect();
    Ok((
        false,
        format!("best match (curves {curves:?}) differs at {}", list.join(", ")),
    ))
}

fn matrices(opts: &VerifyOptions) -> Outcome {
    let h = load("hex")?;
    let want: Vec<Vec<i64>> = HEX_MATRIX.iter().map(|r| r.to_vec()).collect();
    let (hp, hd) = matrix_vs(stored(&h, "t0")?, &shell_of(&h)?, opts, &want)?;
    let b = load("box-3-3-2")?;
    let want: Vec<Vec<i64>> = BOX332_MATRIX.iter().map(|r| r.to_vec()).collect();
    let (bp, bd) = matrix_vs(stored(&b, "t0")?, &shell_of(&b)?, opts, &want)?;
    Ok((hp && bp, format!("hex t0 {hd}; box-3-3-2 t0 {bd}")))
}

fn helicities(opts: &VerifyOptions) -> Outcome {
    let p2 = opts.p2();
    let k = |n: i64| Rational64::from_integer(n) * p2;
    let h = load("hex")?;
    let hs = shell_of(&h)?;
    let b = load("box-3-3-2")?;
    let bs = shell_of(&b)?;
    let small = load("box-2-2-1")?;
    let ss = shell_of(&small)?;
    let mut cases = vec![
        ("hex t0", hel(stored(&h, "t0")?, &hs, opts)?, k(-18)),
        ("hex t1", hel(stored(&h, "t1")?, &hs, opts)?, k(18)),
        ("box-3-3-2 t0", hel(stored(&b, "t0")?, &bs, opts)?, k(-36)),
        ("box-3-3-2 vertical", hel(stored(&b, "vertical")?, &bs, opts)?, k(0)),
    ];
    for (i, t) in all_tilings(&small)?.iter().enumerate() {
        let name = if i == 0 { "box-2-2-1 a" } else { "box-2-2-1 b" };
        cases.push((name, hel(t, &ss, opts)?, k(0)));
    }
    let pass = cases.iter().all(|(_, g, w)| g == w);
    let detail = cases
        .iter()
        .map(|(n, g, _)| format!("{n} {}", in_p2(*g, opts)))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((pass, detail))
}

fn sweep(opts: &VerifyOptions) -> Outcome {
    let b = load("box-3-3-2")?;
    let ts = all_tilings(&b)?;
    let base = stored(&b, "vertical")?;
    let rep = cross_check(base, &ts, &shell_of(&b)?, &opts.curves(PipeMode::Five)).map_err(|e| e.to_string())?;
    let k36 = Rational64::from_integer(36) * opts.p2();
    let off: Vec<usize> = rep
        .rows
        .iter()
        .filter(|r| r.helicity != k36 * Rational64::from_integer(r.twist_bfs))
        .map(|r| r.index)
        .collect();
    let hist: Vec<String> = rep.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    let want = BTreeMap::from([(-1, 1), (0, 227), (1, 1)]);
    let pass = off.is_empty() && rep.rows.len() == 229 && rep.histogram == want;
    Ok((
        pass,
        format!(
            "{} tilings, twist histogram {{{}}}, {} off the line",
            rep.rows.len(),
            hist.join(", "),
            off.len()
        ),
    ))
}

fn edges(opts: &VerifyOptions) -> Outcome {
    let b = load("box-3-3-2")?;
    let g = move_graph(&all_tilings(&b)?).map_err(|e| e.to_string())?;
    let h = hels(&g.tilings, &shell_of(&b)?, opts)?;
    let k36 = Rational64::from_integer(36) * opts.p2();
    let bad_flips = g.flips.iter().filter(|&&(i, j)| h[i] != h[j]).count();
    let bad_trits = g.trits.iter().filter(|&&(i, j)| h[j] - h[i] != k36).count();
    Ok((
        bad_flips == 0 && bad_trits == 0,
        format!(
            "{} flips ({} nonzero), {} trits ({} not +36phi^2)",
            g.flips.len(),
            bad_flips,
            g.trits.len(),
            bad_trits
        ),
    ))
}

fn shells(opts: &VerifyOptions) -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for name in ["box-2-2-1", "hex", "box-3-3-2"] {
        let f = load(name)?;
        let fixed = shell_of(&f)?;
        let auto = layered_auto(&f.region, AUTO_MARGIN).map_err(|e| e.to_string())?;
        let ts = all_tilings(&f)?;
        let a = hels(&ts, &fixed, opts)?;
        let b = hels(&ts, &auto, opts)?;
        let same = ts.iter().enumerate().all(|(i, _)| a[i] - a[0] == b[i] - b[0]);
        pass &= same && fixed != auto;
        notes.push(format!(
            "{name} {} tilings, constant shift {}",
            ts.len(),
            in_p2(b[0] - a[0], opts)
        ));
        if !same {
            notes.push(format!("{name} differences disagree"));
        }
    }
    Ok((pass, notes.join("; ")))
}

fn relative_flux() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();

    let b = load("box-3-3-2")?;
    let rel = DualHomology::new(&b.region, true).map_err(|e| e.to_string())?;
    let mut nonzero = 0;
    for t in all_tilings(&b)? {
        if !rflux_with(&rel, &t).map_err(|e| e.to_string())?.is_zero() {
            nonzero += 1;
        }
    }
    pass &= nonzero == 0 && rel.rank() == 0;
    notes.push(format!("box-3-3-2 relative H1 rank {}, {nonzero} nonzero", rel.rank()));

    for (name, want_zero) in [("cube-hole-12-4", true), ("cube-hole-13-5", false)] {
        let f = load(name)?;
        let t = &f.tilings[0].1;
        let rel = DualHomology::new(&f.region, true).map_err(|e| e.to_string())?;
        let r = rflux_with(&rel, t).map_err(|e| e.to_string())?;
        pass &= r.is_zero() == want_zero;
        let coords: Vec<String> = r.coords.iter().map(|c| c.to_string()).collect();
        notes.push(format!("{name} RFlux ({})", coords.join(", ")));
    }

    let a = load("annulus-4-4-2")?;
    let ts = all_tilings(&a)?;
    let abs = DualHomology::new(&a.region, false).map_err(|e| e.to_string())?;
    let rel = DualHomology::new(&a.region, true).map_err(|e| e.to_string())?;
    let mut classes: BTreeMap<Vec<Rational64>, usize> = BTreeMap::new();
    let mut rnonzero = 0;
    for t in &ts {
        let c = flux_diff_class_with(&abs, t, &ts[0]).map_err(|e| e.to_string())?;
        *classes.entry(c.coords).or_insert(0) += 1;
        if !rflux_with(&rel, t).map_err(|e| e.to_string())?.is_zero() {
            rnonzero += 1;
        }
    }
    pass &= classes.len() >= 2 && rnonzero == 0;
    notes.push(format!(
        "annulus {} tilings in {} flux classes, {rnonzero} with nonzero RFlux",
        ts.len(),
        classes.len()
    ));
    Ok((pass, notes.join("; ")))
}

/// Odd eighth-unit plane positions strictly inside the bounds on `axis`.
fn planes(f: &Fixture, axis: usize) -> Vec<i64> {
    let (lo, hi) = f.region.bounds();
    (8 * lo[axis] + 1..8 * hi[axis] + 8).step_by(2).collect()
}

fn rotation_class(opts: &VerifyOptions) -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for name in ["box-2-2-1", "hex", "box-3-3-2", "box-4-4-2", "torus-6"] {
        let f = load(name)?;
        let (shell, ts) = if f.region.is_wrapped() {
            (Shell::empty(), f.tilings.iter().map(|(_, t)| t.clone()).collect())
        } else if name == "box-4-4-2" {
            (shell_of(&f)?, f.tilings.iter().map(|(_, t)| t.clone()).collect())
        } else {
            (shell_of(&f)?, all_tilings(&f)?)
        };
        let mut sections = 0;
        let mut bad = 0;
        for t in &ts {
            let sys = system(t, &shell, opts, PipeMode::Six)?;
            let ch = six_t_minus_q1(t);
            let mut here = 0;
            for axis in 0..3 {
                for c8 in planes(&f, axis) {
                    let s = Section { axis, c8 };
                    let pipes = opts.phi * Rational64::from_integer(sys.section_flux(&f.region, axis, c8));
                    let chain = opts.phi * chain_section_intersection(&f.region, &ch, &s).map_err(|e| e.to_string())?;
                    here += 1;
                    if pipes != chain {
                        bad += 1;
                    }
                }
            }
            pass &= here >= MIN_SECTIONS;
            sections += here;
        }
        pass &= bad == 0;
        notes.push(format!(
            "{name} {} tilings x sections = {sections}, {bad} mismatched",
            ts.len()
        ));
    }
    Ok((pass, notes.join("; ")))
}

fn square(x0: i64, y0: i64, z: i64, side: i64) -> Vec<P4> {
    vec![
        [x0, y0, z],
        [x0 + side, y0, z],
        [x0 + side, y0 + side, z],
        [x0, y0 + side, z],
    ]
}

/// Returns the number of pairs checked and the largest gap.
fn oracle_pairs(curves: &[Vec<P4>]) -> Result<(usize, f64, usize), String> {
    let n = curves.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let res: Vec<(f64, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let lk = linking_number(&curves[i], &curves[j]).map_err(|e| e.to_string())?;
            let g = gauss_integral_oracle(&curves[i], &curves[j], 1);
            let gap = (lk as f64 - g).abs();
            Ok((gap, gap < ORACLE_TOLERANCE && g.round() as i64 == lk))
        })
        .collect::<Result<_, String>>()?;
    let worst = res.iter().map(|r| r.0).fold(0.0, f64::max);
    let bad = res.iter().filter(|r| !r.1).count();
    Ok((pairs.len(), worst, bad))
}

fn oracle(opts: &VerifyOptions) -> Outcome {
    let mut total = 0;
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for (name, tiling) in [
        ("box-2-2-1", None),
        ("hex", Some("t0")),
        ("hex", Some("t1")),
        ("box-3-3-2", Some("t0")),
        ("box-3-3-2", Some("vertical")),
    ] {
        let f = load(name)?;
        let s = shell_of(&f)?;
        let t = match tiling {
            Some(n) => stored(&f, n)?.clone(),
            None => all_tilings(&f)?.remove(0),
        };
        let sys = system(&t, &s, opts, PipeMode::Five)?;
        let (n, w, b) = oracle_pairs(&sys.polylines())?;
        total += n;
        worst = worst.max(w);
        bad += b;
    }
    // Hopf link, its mirror, and a split pair.
    let a = square(0, 0, 0, 8);
    let hopf = vec![[4, 4, -4], [4, 4, 4], [4, 12, 4], [4, 12, -4]];
    let mirror: Vec<P4> = hopf.iter().map(|p| [p[0], p[1], -p[2]]).collect();
    let far = square(40, 40, 0, 8);
    let controls = [(&a, &hopf, 1i64), (&a, &mirror, -1), (&a, &far, 0)];
    let mut control_ok = true;
    for (c1, c2, want) in controls {
        let lk = linking_number(c1, c2).map_err(|e| e.to_string())?;
        let g = gauss_integral_oracle(c1, c2, 1);
        control_ok &= lk.abs() == want.abs() && (lk as f64 - g).abs() < ORACLE_TOLERANCE;
        control_ok &= (want == 0) == (lk == 0);
    }
    Ok((
        bad == 0 && control_ok,
        format!(
            "{total} fixture pairs, largest gap {worst:.2e}, {bad} outside tolerance; controls {}",
            if control_ok { "ok" } else { "wrong" }
        ),
    ))
}

/// Reflection swapping the first two coordinates, applied to a tiling.
pub fn swap_xy(t: &Tiling) -> Result<Tiling, String> {
    use crate::region::{make_region, CellCoord};
    use crate::tiling::Domino;
    let sw = |c: CellCoord| CellCoord::new(c.y, c.x, c.z);
    let r = t.region();
    let region = make_region(r.cells().map(|c| sw(*c)), r.wrap()).map_err(|e| e.to_string())?;
    let region = std::sync::Arc::new(region);
    let ds: Vec<Domino> = t
        .dominoes()
        .iter()
        .map(|d| {
            let (a, b) = (sw(d.black), sw(d.white));
            if region.color_of(a) == crate::region::Color::Black {
                Domino::new(a, b)
            } else {
                Domino::new(b, a)
            }
        })
        .collect();
    Tiling::new(region, ds).map_err(|e| e.to_string())
}

fn mirror(opts: &VerifyOptions) -> Outcome {
    let h = load("hex")?;
    let s = shell_of(&h)?;
    let (t0, t1) = (stored(&h, "t0")?, stored(&h, "t1")?);
    let sys = system(t0, &s, opts, PipeMode::Five)?;
    let h0 = sys.helicity().map_err(|e| e.to_string())?;
    let mut m = sys.clone();
    for c in &mut m.curves {
        for p in &mut c.vertices {
            *p = [p[1], p[0], p[2]];
        }
    }
    let hm = m.helicity().map_err(|e| e.to_string())?;
    let image = swap_xy(t0)?;
    let h1 = hel(t1, &s, opts)?;
    let pass = hm == -h0 && &image == t1 && h1 == -h0;
    Ok((
        pass,
        format!(
            "Hel(t0) {}, reflected system {}, t1 is the reflection of t0: {}, Hel(t1) {}",
            in_p2(h0, opts),
            in_p2(hm, opts),
            &image == t1,
            in_p2(h1, opts)
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_matching() {
        let m = TabulationMatrix {
            entries: vec![vec![1, 0, 2], vec![0, 3, 0], vec![2, 0, 5]],
        };
        let want = vec![vec![3, 0, 0], vec![0, 5, 2], vec![0, 2, 1]];
        let (p, bad) = match_matrix(&m, &want).unwrap();
        assert!(bad.is_empty());
        assert_eq!(p, vec![1, 2, 0]);
        let want = vec![vec![3, 0, 0], vec![0, 5, 2], vec![0, 2, 0]];
        assert_eq!(match_matrix(&m, &want).unwrap().1.len(), 1);
    }

    #[test]
    fn unknown_check() {
        let c = run_check(12, &VerifyOptions::default());
        assert!(!c.pass);
        assert!(c.line().starts_with("[FAIL] 12 unknown"));
    }
}
