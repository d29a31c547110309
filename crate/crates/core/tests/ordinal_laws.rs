use hypersel_core::Ordinal;
use proptest::prelude::*;

const EXPS: usize = 4;

// Coefficient vectors indexed by exponent: an independent model of CNF.
fn to_coefs(a: &Ordinal) -> [u64; EXPS] {
    let mut c = [0; EXPS];
    for t in a.terms() {
        c[t.exp as usize] = t.coef;
    }
    c
}

fn from_coefs(c: &[u64; EXPS]) -> Ordinal {
    let terms: Vec<(u32, u64)> = (0..EXPS).rev().filter(|&e| c[e] > 0).map(|e| (e as u32, c[e])).collect();
    Ordinal::from_terms(&terms)
}

fn oracle_add(a: &[u64; EXPS], b: &[u64; EXPS]) -> [u64; EXPS] {
    let Some(lead) = (0..EXPS).rev().find(|&e| b[e] > 0) else {
        return *a;
    };
    let mut out = [0; EXPS];
    for e in 0..EXPS {
        out[e] = match e.cmp(&lead) {
            std::cmp::Ordering::Greater => a[e],
            std::cmp::Ordering::Equal => a[e] + b[e],
            std::cmp::Ordering::Less => b[e],
        };
    }
    out
}

fn oracle_cmp(a: &[u64; EXPS], b: &[u64; EXPS]) -> std::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::array::uniform4(prop_oneof![3 => Just(0u64), 2 => 1u64..4, 1 => 4u64..20]).prop_map(|c| from_coefs(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn addition_matches_the_coefficient_model(a in ordinal(), b in ordinal()) {
        prop_assert_eq!(to_coefs(&a.add(&b)), oracle_add(&to_coefs(&a), &to_coefs(&b)));
        prop_assert_eq!(a.cmp(&b), oracle_cmp(&to_coefs(&a), &to_coefs(&b)));
    }

    #[test]
    fn addition_is_associative(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn addition_is_strictly_monotone_on_the_right(a in ordinal(), b in ordinal(), c in ordinal()) {
        if b < c {
            prop_assert!(a.add(&b) < a.add(&c));
        }
        prop_assert!(b <= a.add(&b));
    }

    #[test]
    fn small_summands_are_absorbed_on_the_left(a in ordinal(), e in 1u32..4, k in 1u64..5) {
        let big = Ordinal::omega_pow_times(e, k);
        if a < Ordinal::omega_pow_times(e, 1) {
            prop_assert_eq!(a.add(&big), big);
        }
    }

    #[test]
    fn fundamental_sequences_are_cofinal(lam in ordinal(), below in ordinal()) {
        if lam.is_limit() {
            let seq: Vec<Ordinal> = (0..12).map(|n| lam.fundamental(n).unwrap()).collect();
            prop_assert!(seq.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(seq.iter().all(|x| *x < lam));
            if below < lam {
                prop_assert!((0..=below.terms().iter().map(|t| t.coef).sum::<u64>() + 1)
                    .any(|n| lam.fundamental(n).unwrap() > below));
            }
        } else {
            prop_assert!(lam.fundamental(3).is_none());
        }
    }

    #[test]
    fn subtraction_inverts_addition(a in ordinal(), b in ordinal()) {
        let s = a.add(&b);
        prop_assert_eq!(s.sub_left(&a), Some(b.clone()));
        let x0 = s.sub_right(&b).unwrap();
        prop_assert!(x0 <= a);
        prop_assert_eq!(x0.add(&b), s);
    }

    #[test]
    fn display_round_trips(a in ordinal()) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
    }
}
