use std::sync::{Arc, OnceLock};

use domtwist::curves::{assemble_curves, CurveOptions, CurveSystem};
use domtwist::fixtures::builtin;
use domtwist::framing::Framing;
use domtwist::homology::{flux_diff_class, rflux};
use domtwist::linkhel::{linking_number, self_linking};
use domtwist::pipes::P4;
use domtwist::region::make_box;
use domtwist::shell::Shell;
use domtwist::tiling::{enumerate_tilings, Tiling};
use domtwist::twist::{twist_bfs, twist_via_helicity};
use proptest::prelude::*;

struct Box332 {
    tilings: Vec<Tiling>,
    shell: Shell,
}

fn box332() -> &'static Box332 {
    static DATA: OnceLock<Box332> = OnceLock::new();
    DATA.get_or_init(|| {
        let f = builtin("box-3-3-2").unwrap();
        Box332 {
            tilings: enumerate_tilings(&f.region).unwrap(),
            shell: f.shell.unwrap(),
        }
    })
}

fn curves_of(i: usize) -> CurveSystem {
    let d = box332();
    assemble_curves(&d.tilings[i], &d.shell, &CurveOptions::default()).unwrap()
}

fn shift(c: &[P4], by: P4) -> Vec<P4> {
    c.iter().map(|p| [p[0] + by[0], p[1] + by[1], p[2] + by[2]]).collect()
}

fn reversed(c: &[P4]) -> Vec<P4> {
    c.iter().rev().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flips_and_trits_undo(i in 0usize..229, k in 0usize..64) {
        let t = &box332().tilings[i];
        let flips = t.list_flips();
        if !flips.is_empty() {
            let f = flips[k % flips.len()];
            let u = t.apply_flip(&f).unwrap();
            prop_assert_ne!(&u, t);
            prop_assert!(u.list_flips().contains(&f.reverse()));
            prop_assert_eq!(&u.apply_flip(&f.reverse()).unwrap(), t);
        }
        let trits = t.list_trits();
        if !trits.is_empty() {
            let s = trits[k % trits.len()];
            let u = t.apply_trit(&s).unwrap();
            prop_assert!(u.list_trits().contains(&s.reverse()));
            prop_assert_eq!(&u.apply_trit(&s.reverse()).unwrap(), t);
        }
    }

    #[test]
    fn box_tilings_share_one_flux_class(i in 0usize..229, j in 0usize..229) {
        let d = box332();
        prop_assert!(rflux(&d.tilings[i]).unwrap().is_zero());
        prop_assert!(flux_diff_class(&d.tilings[i], &d.tilings[j]).unwrap().is_zero());
    }

    #[test]
    fn twist_routes_agree_under_base_change(i in 0usize..229, j in 0usize..229, k in 0usize..229) {
        let d = box332();
        let opts = CurveOptions::default();
        let (t, b1, b2) = (&d.tilings[i], &d.tilings[j], &d.tilings[k]);
        let a = twist_via_helicity(t, b1, &d.shell, &opts).unwrap();
        let b = twist_via_helicity(t, b2, &d.shell, &opts).unwrap();
        let c = twist_via_helicity(b2, b1, &d.shell, &opts).unwrap();
        prop_assert_eq!(a, b + c);
        let table = twist_bfs(b1, &d.tilings).unwrap();
        prop_assert_eq!(table.get(t), Some(a));
    }

    #[test]
    fn linking_is_symmetric_and_odd_under_reversal(i in 0usize..229, a in 0usize..32, b in 0usize..32) {
        let sys = curves_of(i);
        let ps = sys.polylines();
        let (a, b) = (a % ps.len(), b % ps.len());
        prop_assume!(a != b);
        let lk = linking_number(&ps[a], &ps[b]).unwrap();
        prop_assert_eq!(lk, linking_number(&ps[b], &ps[a]).unwrap());
        prop_assert_eq!(-lk, linking_number(&reversed(&ps[a]), &ps[b]).unwrap());
        prop_assert_eq!(lk, linking_number(&reversed(&ps[a]), &reversed(&ps[b])).unwrap());
        let m = sys.tabulation_matrix().unwrap();
        prop_assert!(m.is_symmetric());
        prop_assert_eq!(m.entries[a][b], lk);
    }

    #[test]
    fn linking_is_translation_invariant(i in 0usize..229, dx in -20i64..20, dy in -20i64..20, dz in -20i64..20) {
        let ps = curves_of(i).polylines();
        prop_assume!(ps.len() >= 2);
        let by = [4 * dx, 4 * dy, 4 * dz];
        prop_assert_eq!(
            linking_number(&ps[0], &ps[1]).unwrap(),
            linking_number(&shift(&ps[0], by), &shift(&ps[1], by)).unwrap()
        );
    }

    #[test]
    fn twisted_framing_adds_turns(i in 0usize..229, turns in -3i64..4) {
        for c in curves_of(i).polylines() {
            let base = self_linking(&c, &Framing::Transported).unwrap();
            prop_assert_eq!(self_linking(&c, &Framing::Twisted { turns }).unwrap(), base + turns);
            prop_assert_eq!(self_linking(&reversed(&c), &Framing::Transported).unwrap(), base);
        }
    }

    #[test]
    fn tiling_json_round_trips(i in 0usize..229) {
        let t = &box332().tilings[i];
        prop_assert_eq!(&Tiling::from_json(&t.to_json()).unwrap(), t);
        let sys = curves_of(i);
        prop_assert_eq!(CurveSystem::from_json(&sys.to_json()).unwrap(), sys);
    }
}

#[test]
fn enumeration_is_stable_across_region_copies() {
    let a = enumerate_tilings(&Arc::new(make_box(2, 2, 2).unwrap())).unwrap();
    let b = enumerate_tilings(&Arc::new(make_box(2, 2, 2).unwrap())).unwrap();
    assert_eq!(a.len(), 9);
    assert_eq!(a, b);
}
