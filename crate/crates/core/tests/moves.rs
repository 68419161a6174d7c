use std::path::{Path, PathBuf};

use gcoalg::diagrams::{BeadConvention, GDiagram, MovePair};
use gcoalg::Uq;

fn data(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(sub)
}

fn pairs() -> Vec<MovePair> {
    MovePair::load_dir(&data("moves")).unwrap()
}

#[test]
fn every_move_pair_agrees() {
    let pairs = pairs();
    assert_eq!(pairs.len(), 10);
    for ell in [3, 4, 5, 6] {
        let u = Uq::with_ell(ell).unwrap();
        for r in u.check_moves(&pairs, BeadConvention::OverFirst).unwrap() {
            assert!(r.mismatches.is_empty(), "ell {ell} {}: {:?}", r.name, r.mismatches);
            assert!(r.evaluations > 0);
        }
    }
}

#[test]
fn results_match_the_golden_file() {
    let u = Uq::with_ell(4).unwrap();
    let got = serde_json::to_value(u.check_moves(&pairs(), BeadConvention::OverFirst).unwrap()).unwrap();
    let text = std::fs::read_to_string(data("golden/moves_ell4.json")).unwrap();
    let want: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(got, want);
}

#[test]
fn exactly_one_convention_survives() {
    let frozen: BeadConvention = std::fs::read_to_string(data("golden/bead_convention.txt")).unwrap().parse().unwrap();
    for ell in [3, 4] {
        let u = Uq::with_ell(ell).unwrap();
        assert_eq!(u.passing_conventions(&pairs()).unwrap(), vec![frozen], "ell {ell}");
    }
    assert_eq!(frozen, BeadConvention::default());
}

#[test]
fn marked_points_can_move() {
    let u = Uq::with_ell(4).unwrap();
    let trefoil = "component 0 color=2/3\nrow: cup@0\nrow: cup@1\nrow: x+@0\nrow: x+@0\nrow: x+@0\nrow: cap@1\nrow: cap@0\n";
    let hopf = "component 0 color=1/3\ncomponent 1 color=1/2 orient=down\nrow: cup@0\nrow: cup@1\nrow: x+@0\nrow: x+@0\nrow: cap@1\nrow: cap@0\n";
    for text in [trefoil, hopf] {
        let d = GDiagram::parse(text).unwrap();
        let base = u.universal_invariant(&d).unwrap();
        let n = d.num_components();
        for shift in 1..5 {
            let shifts = vec![shift; n];
            let moved = u.universal_invariant_marked(&d, &shifts, BeadConvention::OverFirst).unwrap();
            let cmp = u.compare_invariants(&base, &moved, &[]).unwrap();
            assert!(cmp.agree(), "shift {shift}: {:?}", cmp.mismatches);
        }
    }
}

#[test]
fn unknown_conventions_are_rejected() {
    assert!("sideways".parse::<BeadConvention>().is_err());
    assert_eq!("under-first".parse::<BeadConvention>().unwrap().to_string(), "under-first");
}
