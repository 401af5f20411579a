//! The twist of a tiling, computed by walking the move graph and, separately,
//! from helicity.

use std::collections::{BTreeMap, VecDeque};

use num_rational::Rational64;
use rayon::prelude::*;

use crate::curves::{assemble_curves, CurveOptions};
use crate::error::TwistError;
use crate::homology::{flux_diff_class_with, rflux, DualHomology};
use crate::shell::Shell;
use crate::tiling::{move_graph, MoveGraph, Tiling};

#[derive(Debug, Clone)]
pub struct TwistTable {
    /// Tilings of the base's flux class, sorted.
    pub tilings: Vec<Tiling>,
    pub twist: Vec<i64>,
    pub base: usize,
    pub graph: MoveGraph,
}

impl TwistTable {
    pub fn get(&self, t: &Tiling) -> Option<i64> {
        self.graph.index_of(t).map(|i| self.twist[i])
    }

    pub fn histogram(&self) -> BTreeMap<i64, usize> {
        let mut h = BTreeMap::new();
        for &v in &self.twist {
            *h.entry(v).or_insert(0) += 1;
        }
        h
    }
}

fn require_zero_rflux(base: &Tiling) -> Result<(), TwistError> {
    if !rflux(base)?.is_zero() {
        return Err(TwistError::NonzeroRelativeFlux);
    }
    Ok(())
}

/// Tilings among `all` with the same flux as `base`.
pub fn flux_class_of(base: &Tiling, all: &[Tiling]) -> Result<Vec<Tiling>, TwistError> {
    let h = DualHomology::new(base.region(), false)?;
    if h.rank() == 0 {
        return Ok(all.to_vec());
    }
    let mut out = Vec::new();
    for t in all {
        if flux_diff_class_with(&h, t, base)?.is_zero() {
            out.push(t.clone());
        }
    }
    Ok(out)
}

/// Twist of every tiling in the flux class of `base`, by breadth-first
/// search over flips (step 0) and signed trits (step +-1). Every edge is
/// checked afterwards, so a nonzero signed sum around any cycle is caught.
pub fn twist_bfs(base: &Tiling, all: &[Tiling]) -> Result<TwistTable, TwistError> {
    require_zero_rflux(base)?;
    let class = flux_class_of(base, all)?;
    let graph = move_graph(&class)?;
    let b = graph.index_of(base).ok_or(TwistError::FluxMismatch)?;
    let adj = graph.adjacency();
    let mut tw: Vec<Option<i64>> = vec![None; graph.tilings.len()];
    tw[b] = Some(0);
    let mut q = VecDeque::from([b]);
    while let Some(i) = q.pop_front() {
        let ti = tw[i].expect("queued vertices have a value");
        for &(j, step) in &adj[i] {
            match tw[j] {
                None => {
                    tw[j] = Some(ti + step);
                    q.push_back(j);
                }
                Some(tj) if tj != ti + step => return Err(TwistError::InconsistentCycle(tj - ti - step)),
                Some(_) => {}
            }
        }
    }
    let unreached = tw.iter().filter(|v| v.is_none()).count();
    if unreached > 0 {
        return Err(TwistError::Disconnected { unreached });
    }
    Ok(TwistTable {
        tilings: graph.tilings.clone(),
        twist: tw.into_iter().map(|v| v.expect("all reached")).collect(),
        base: b,
        graph,
    })
}

/// Helicity of the curve system of `t` closed by `shell`.
pub fn helicity(t: &Tiling, shell: &Shell, opts: &CurveOptions) -> Result<Rational64, TwistError> {
    let sys = assemble_curves(t, shell, opts)?;
    Ok(sys.helicity()?)
}

fn twist_from_hel(d: Rational64, phi: Rational64) -> Result<i64, TwistError> {
    let q = d / (Rational64::from_integer(36) * phi * phi);
    if !q.is_integer() {
        return Err(TwistError::NonInteger(q.to_string()));
    }
    Ok(q.to_integer())
}

/// `(Hel(t) - Hel(base)) / (36 phi^2)`, required to be an integer.
pub fn twist_via_helicity(t: &Tiling, base: &Tiling, shell: &Shell, opts: &CurveOptions) -> Result<i64, TwistError> {
    require_zero_rflux(base)?;
    let h = DualHomology::new(base.region(), false)?;
    if !flux_diff_class_with(&h, t, base)?.is_zero() {
        return Err(TwistError::FluxMismatch);
    }
    let d = helicity(t, shell, opts)? - helicity(base, shell, opts)?;
    twist_from_hel(d, opts.phi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckRow {
    pub index: usize,
    pub twist_bfs: i64,
    pub twist_hel: i64,
    pub helicity: Rational64,
}

#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub rows: Vec<CrossCheckRow>,
    pub phi: Rational64,
    pub histogram: BTreeMap<i64, usize>,
}

impl CrossCheckReport {
    pub fn render(&self) -> String {
        let mut s = String::from("id\ttwist_bfs\ttwist_hel\thel/phi^2\n");
        let p2 = self.phi * self.phi;
        for r in &self.rows {
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.index,
                r.twist_bfs,
                r.twist_hel,
                r.helicity / p2
            ));
        }
        let hist: Vec<String> = self.histogram.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        s.push_str(&format!("twist histogram: {}\n", hist.join(", ")));
        s
    }
}

/// Computes both twists on the whole flux class of `base` and fails on the
/// first tiling where they differ.
pub fn cross_check(
    base: &Tiling,
    all: &[Tiling],
    shell: &Shell,
    opts: &CurveOptions,
) -> Result<CrossCheckReport, TwistError> {
    let table = twist_bfs(base, all)?;
    let hels: Vec<Rational64> = table
        .tilings
        .par_iter()
        .map(|t| helicity(t, shell, opts))
        .collect::<Result<_, _>>()?;
    let h0 = hels[table.base];
    let mut rows = Vec::with_capacity(hels.len());
    for (i, h) in hels.iter().enumerate() {
        let th = twist_from_hel(*h - h0, opts.phi)?;
        if th != table.twist[i] {
            return Err(TwistError::Disagreement {
                index: i,
                bfs: table.twist[i],
                hel: th,
                render: table.tilings[i].render(),
            });
        }
        rows.push(CrossCheckRow {
            index: i,
            twist_bfs: table.twist[i],
            twist_hel: th,
            helicity: *h,
        });
    }
    Ok(CrossCheckReport {
        rows,
        phi: opts.phi,
        histogram: table.histogram(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::make_box;
    use crate::shell::layered_auto;
    use crate::tiling::enumerate_tilings;
    use std::sync::Arc;

    #[test]
    fn box221_twists_are_zero() {
        let r = Arc::new(make_box(2, 2, 1).unwrap());
        let ts = enumerate_tilings(&r).unwrap();
        let shell = layered_auto(&r, 1).unwrap();
        let rep = cross_check(&ts[0], &ts, &shell, &CurveOptions::default()).unwrap();
        assert_eq!(rep.histogram, BTreeMap::from([(0, 2)]));
        assert!(rep.rows.iter().all(|r| r.helicity == Rational64::from_integer(0)));
    }

    #[test]
    fn base_choice_shifts_by_a_constant() {
        let r = Arc::new(make_box(2, 2, 2).unwrap());
        let ts = enumerate_tilings(&r).unwrap();
        let a = twist_bfs(&ts[0], &ts).unwrap();
        let b = twist_bfs(&ts[3], &ts).unwrap();
        let d = a.twist[0] - b.twist[0];
        assert!(a.twist.iter().zip(&b.twist).all(|(x, y)| x - y == d));
    }

    #[test]
    fn non_integer_is_reported() {
        assert!(matches!(
            twist_from_hel(Rational64::new(1, 2), Rational64::new(1, 6)),
            Err(TwistError::NonInteger(_))
        ));
        assert_eq!(
            twist_from_hel(Rational64::from_integer(-1), Rational64::new(1, 6)),
            Ok(-1)
        );
    }
}
