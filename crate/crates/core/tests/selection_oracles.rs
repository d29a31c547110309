use hypersel_core::basebuilder::extreme_selection_at;
use hypersel_core::hyperspace::{basic_nbhd_family, vietoris_member, VietorisBasic};
use hypersel_core::selection::{Mode, Selection};
use hypersel_core::selrel::derived_sets;
use hypersel_core::space::closed_family;
use hypersel_core::{ord, Delta, FamilyParams, PointSet, Space};

fn square() -> Space {
    Space::ordinal(ord("w^2"))
}

fn family(space: &Space, k: u64) -> Vec<PointSet> {
    closed_family(space, FamilyParams { grid_k: k, max_runs: 2 })
}

// Every 7th complement of a small closed set, 200 in total.
fn opens(space: &Space) -> Vec<PointSet> {
    let opens: Vec<PointSet> = family(space, 4)
        .iter()
        .map(|c| space.complement(c))
        .filter(|v| !v.is_empty())
        .collect();
    let step = (opens.len() / 200).max(1);
    opens.into_iter().step_by(step).take(200).collect()
}

#[test]
fn derived_sets_agree_pointwise() {
    let x = square();
    let top = x.parse_point("w^2").unwrap();
    let f = extreme_selection_at(&x, &top, Mode::Maximal, &family(&x, 3)).unwrap();
    let vs = opens(&x);
    assert_eq!(vs.len(), 200);
    let grid = x.grid_points(6);
    for v in &vs {
        let d = derived_sets(&x, &f, v).unwrap();
        let c = x.complement(v);
        let q = f.eval(&x, &c).unwrap();
        assert_eq!(d.boundary_point, Some(q.clone()));
        for p in &grid {
            let wins = f.eval(&x, &c.union(&x.singleton(p))).unwrap() == *p;
            assert_eq!(x.contains(&d.bracket, p), wins, "{p} against {v}");
            assert_eq!(x.contains(&d.interior, p), wins && !x.contains(&c, p));
        }
        assert!(x.is_open(&d.interior) && x.is_closed(&d.bracket));
        assert_eq!(d.bracket, d.interior.union(&x.singleton(&q)));
        match x.clopen_modulo(&d.bracket).unwrap() {
            Delta::Clopen => {}
            Delta::Modulo(m) => assert_eq!(m, q),
            Delta::NotInDelta => panic!("bracket of {v} outside Δ"),
        }
    }
}

#[test]
fn winners_agree_pointwise() {
    let x = Space::wedge(2).unwrap();
    let hub = x.parse_point("w").unwrap();
    let fam = family(&x, 3);
    let sels = [
        Selection::OrderMax,
        Selection::OrderMin,
        extreme_selection_at(&x, &hub, Mode::Maximal, &fam).unwrap(),
        extreme_selection_at(&x, &hub, Mode::Minimal, &fam).unwrap(),
    ];
    let grid = x.grid_points(5);
    for f in &sels {
        for a in fam.iter().step_by(5) {
            let w = f.winners(&x, a).unwrap();
            for p in &grid {
                let wins = f.eval(&x, &a.union(&x.singleton(p))).unwrap() == *p;
                assert_eq!(x.contains(&w, p), wins, "{f} on {a} at {p}");
            }
        }
    }
}

#[test]
fn vietoris_membership_is_pointwise() {
    let x = Space::fan(3).unwrap();
    let grid = x.grid_points(4);
    let fam = family(&x, 2);
    let center = x.parse_set(&["[2,w]", "1:{3}"]).unwrap();
    for basic in basic_nbhd_family(&x, &center, 2) {
        let union = basic.union(&x);
        for s in fam.iter().step_by(11) {
            let inside = grid.iter().filter(|p| x.contains(s, p)).all(|p| x.contains(&union, p));
            let meets = basic.parts.iter().all(|v| grid.iter().any(|p| x.contains(s, p) && x.contains(v, p)));
            assert_eq!(vietoris_member(&x, s, &basic), inside && meets, "{s} in {basic}");
        }
        assert!(vietoris_member(&x, &center, &basic));
    }
    let b = VietorisBasic::new(&x, vec![x.parse_set(&["[0,3)"]).unwrap(), x.parse_set(&["1:(2,w)"]).unwrap()]).unwrap();
    assert!(vietoris_member(&x, &x.parse_set(&["{1}", "1:{4}"]).unwrap(), &b));
    assert!(!vietoris_member(&x, &x.parse_set(&["{1}"]).unwrap(), &b));
    assert!(!vietoris_member(&x, &x.parse_set(&["{1}", "1:{4}", "2:{0}"]).unwrap(), &b));
}
