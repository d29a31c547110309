use hypersel_core::{brute, ord, Delta, Space};

fn agree(space: &Space, k: u64) -> usize {
    let sets = brute::interval_sets(space, k, 2);
    for s in &sets {
        let sat = space.saturate(s);
        assert_eq!(space.is_open(&sat), brute::is_open(space, &sat, k), "is_open({sat})");
        match brute::modulo_points(space, &sat, k) {
            None => assert!(space.clopen_modulo(&sat).is_err(), "{sat} is not closed"),
            Some(qs) => {
                let got = space.clopen_modulo(&sat).unwrap();
                let want = match (space.is_open(&sat), qs.as_slice()) {
                    (true, _) => Delta::Clopen,
                    (false, [q]) => Delta::Modulo(q.clone()),
                    (false, _) => Delta::NotInDelta,
                };
                assert_eq!(got, want, "clopen_modulo({sat}), brute points {qs:?}");
            }
        }
    }
    sets.len()
}

#[test]
fn ordinal_space_matches_interval_search() {
    let n = agree(&Space::ordinal(ord("w*2 + 5")), 10);
    assert!(n > 20_000, "{n}");
}

#[test]
fn fan_matches_interval_search() {
    let n = agree(&Space::fan(3).unwrap(), 10);
    assert!(n > 20_000, "{n}");
}

#[test]
fn wedge_of_successor_limits() {
    let x = Space::new(vec![ord("w*2"), ord("w^2")], vec![vec![(0, ord("w")), (1, ord("w*3"))]]).unwrap();
    agree(&x, 2);
}
