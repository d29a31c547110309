use hypersel_core::basebuilder::{
    base_at_cut, decomp_to_extreme_selection, extreme_selection_at, gamma_base_to_decomp, pcut_validate, roundtrip,
    transfinite_base, wedge_cut, PointwiseMaximal, TransfiniteParams,
};
use hypersel_core::decomp::{decomp_at, decomp_from_chain, ChainSpec, TailPiece};
use hypersel_core::hyperspace::canonical_nets;
use hypersel_core::selection::{continuity_check, extremality_check, selection_law_check, Mode, Selection};
use hypersel_core::selrel::derived_sets;
use hypersel_core::space::closed_family;
use hypersel_core::{ord, FamilyParams, PointSet, Space};

fn family(space: &Space, k: u64) -> Vec<PointSet> {
    closed_family(space, FamilyParams { grid_k: k, max_runs: 2 })
}

#[test]
fn minimal_selections_at_every_grid_point() {
    for (x, k) in [(Space::ordinal(ord("w*2")), 6), (Space::fan(3).unwrap(), 2)] {
        let fam = family(&x, k);
        for p in x.grid_points(k) {
            let d = decomp_at(&x, &p).unwrap();
            let f = decomp_to_extreme_selection(&x, &d, &p, Mode::Minimal, &fam).unwrap();
            assert!(extremality_check(&x, &f, &p, Mode::Minimal, &fam, None).unwrap().passed(), "{p}");
            assert_eq!(selection_law_check(&x, &f, &fam).unwrap(), None);
        }
    }
}

#[test]
fn roundtrip_on_omega_two() {
    let x = Space::ordinal(ord("w*2"));
    let top = x.parse_point("w*2").unwrap();
    let fam = family(&x, 6);
    let rt = roundtrip(&x, &Selection::OrderMax, &top, &ord("w*2"), &TransfiniteParams::default(), &fam).unwrap();
    assert_eq!(rt.run.limits.len(), 1);
    assert_eq!(rt.run.successor_steps, 128);
    assert!(rt.report.passed());
    assert!(rt.report.limit_points.iter().all(|(l, q)| x.character(q, Some(&rt.decomp.fiber(&x, l))).is_ok()));
    assert!(extremality_check(&x, &rt.selection, &top, Mode::Maximal, &fam, None).unwrap().passed());
}

#[test]
fn tail_base_matches_the_chain() {
    let x = Space::ordinal(ord("w"));
    let w = x.parse_point("w").unwrap();
    let run = transfinite_base(&x, &Selection::OrderMax, &w, &ord("w"), &PointwiseMaximal, &TransfiniteParams::default())
        .unwrap();
    let (d, _) = gamma_base_to_decomp(&x, &run.base).unwrap();
    let chain = ChainSpec { fixed: x.empty(), tails: vec![TailPiece { branch: 0, lambda: ord("w"), top: ord("w"), shift: 0 }] };
    let c = decomp_from_chain(&x, chain, &w).unwrap();
    for a in (0..20).map(ord_n).chain([ord("w")]) {
        assert_eq!(d.fiber(&x, &a), c.fiber(&x, &a), "fiber {a}");
    }
}

fn ord_n(n: u64) -> hypersel_core::Ordinal {
    hypersel_core::Ordinal::finite(n)
}

#[test]
fn wedge_tail_base_pairs_fibers() {
    let x = Space::wedge(2).unwrap();
    let hub = x.parse_point("w").unwrap();
    let fam = family(&x, 4);
    let f = extreme_selection_at(&x, &hub, Mode::Maximal, &fam).unwrap();
    let run = transfinite_base(&x, &f, &hub, &ord("w"), &PointwiseMaximal, &TransfiniteParams::default()).unwrap();
    let (d, _) = gamma_base_to_decomp(&x, &run.base).unwrap();
    assert_eq!(d.fiber(&x, &ord("3")), x.parse_set(&["{4}", "1:{4}"]).unwrap());
}

#[test]
fn cut_base_hypotheses() {
    let x = Space::wedge(2).unwrap();
    let hub = x.parse_point("w").unwrap();
    let fam = family(&x, 6);
    let f = extreme_selection_at(&x, &hub, Mode::Maximal, &fam).unwrap();
    let cut = wedge_cut(&x, &hub).unwrap();
    let cb = base_at_cut(&x, &f, &cut, 8, &fam).unwrap();
    for (n, st) in cb.stages.iter().enumerate() {
        let q = f.eval(&x, &x.complement(&st.u)).unwrap();
        assert!(x.contains(cut.side(n), &q));
        if let Some(next) = cb.stages.get(n + 1) {
            assert!(x.contains(&next.u, &hub));
            assert!(next.u.is_subset(&derived_sets(&x, &f, &st.u).unwrap().interior));
        }
    }
    let meet = cb.stages.iter().fold(x.universe(), |acc, st| acc.intersect(&st.u));
    let on_grid: Vec<_> = x.grid_points(10).into_iter().filter(|p| x.contains(&meet, p)).collect();
    assert_eq!(on_grid, vec![hub.clone()]);

    let five = x.parse_point("5").unwrap();
    let rest = x.universe().difference(&x.singleton(&five));
    assert!(pcut_validate(&x, &five, &rest, &x.empty()).is_err());
    let broken = Selection::patched(f.clone(), x.parse_set(&["{0}", "{w}"]).unwrap(), x.parse_point("0").unwrap());
    assert!(base_at_cut(&x, &broken, &cut, 8, &fam).is_err());
}

#[test]
fn continuity_on_the_wedge() {
    let x = Space::wedge(2).unwrap();
    let hub = x.parse_point("w").unwrap();
    let fam = family(&x, 4);
    let nets = canonical_nets(&x, 6, 64);
    assert!(nets.len() >= 50, "{}", nets.len());
    for mode in [Mode::Maximal, Mode::Minimal] {
        let f = extreme_selection_at(&x, &hub, mode, &fam).unwrap();
        assert!(continuity_check(&x, &f, &nets, 2).unwrap().passed(), "{mode}");
    }
    let f = extreme_selection_at(&x, &hub, Mode::Maximal, &fam).unwrap();
    let broken = Selection::patched(f, x.parse_set(&["{0}", "{w}"]).unwrap(), x.parse_point("0").unwrap());
    assert!(!continuity_check(&x, &broken, &nets, 2).unwrap().passed());
}
