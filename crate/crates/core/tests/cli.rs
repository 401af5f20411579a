use domtwist::cli::main_with;
use domtwist::curves::CurveSystem;
use domtwist::fixtures::BOX332_T0_RENDER;
use domtwist::tiling::tilings_from_json;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(
        std::iter::once("domtwist").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn enumerate_counts_and_writes() {
    assert_eq!(run(&["enumerate", "--builtin", "box-2-2-1"]).1.trim(), "2");
    assert_eq!(run(&["enumerate", "--builtin", "hex"]).1.trim(), "2");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all.json");
    let (code, out, _) = run(&["enumerate", "--builtin", "box-3-3-2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "229");
    let ts = tilings_from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(ts.len(), 229);
}

#[test]
fn invariants_of_hex() {
    let (code, out, _) = run(&["invariants", "--builtin", "hex", "--stored", "t1"]);
    assert_eq!(code, 0);
    assert!(out.contains("twist (trit walk): 1\n"), "{out}");
    assert!(out.contains("twist (helicity): 1\n"), "{out}");
    assert!(out.contains("Hel: 18 phi^2 = 1/2"), "{out}");
}

#[test]
fn invariants_of_box_t0() {
    let (code, out, _) = run(&["invariants", "--builtin", "box-3-3-2", "--stored", "t0"]);
    assert_eq!(code, 0);
    assert!(out.contains("twist (helicity): -1\n"), "{out}");
    assert!(out.contains("Hel: -36 phi^2"), "{out}");
}

#[test]
fn render_matches_golden() {
    let (code, out, _) = run(&["render", "--builtin", "box-3-3-2", "--stored", "t0"]);
    assert_eq!(code, 0);
    assert_eq!(out, BOX332_T0_RENDER);
}

#[test]
fn move_graph_summary() {
    let (_, out, _) = run(&["moves", "--builtin", "box-3-3-2", "--graph"]);
    assert!(out.contains("tilings: 229"), "{out}");
    assert!(out.contains("trit edges: 8"), "{out}");
    assert!(out.contains("components: 1"), "{out}");
}

#[test]
fn export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&["export-curves", "--builtin", "hex", "--stored", "t0", "--out", p]).0,
        0
    );
    let sys = CurveSystem::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(sys.helicity().unwrap(), num_rational::Rational64::new(-1, 2));
    let (code, obj, _) = run(&["export-curves", "--builtin", "hex", "--stored", "t0", "--format", "obj"]);
    assert_eq!(code, 0);
    assert_eq!(obj.matches("\no curve").count(), sys.len());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["enumerate", "--builtin", "nope"]).0, 3);
    let (code, _, err) = run(&["enumerate", "--region", "/nonexistent/region.json"]);
    assert!(code == 3 || code == 9, "{code} {err}");
    assert_eq!(run(&["render", "--builtin", "hex", "--stored", "t7"]).0, 2);
    assert_eq!(
        run(&["invariants", "--builtin", "hex", "--stored", "t1", "--pipes", "4"]).0,
        2
    );
    assert_eq!(run(&["verify-paper", "--check", "12"]).0, 2);
}

#[test]
fn verify_paper_negative_control() {
    let (code, out, _) = run(&["verify-paper", "--check", "6"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("[PASS]"), "{out}");
    let (code, out, _) = run(&["verify-paper", "--check", "6", "--framing", "twisted:1"]);
    assert_eq!(code, 10, "{out}");
    assert!(out.contains("[FAIL]"), "{out}");
}
