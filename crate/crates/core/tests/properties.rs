use std::sync::Arc;

use proptest::prelude::*;
use regfact::connsets::ConnectionSet;
use regfact::greedy::BaseFactorBuilder;
use regfact::subfact::LiftedFactorization;
use regfact::table::FactorTable;
use regfact::{
    Cardinal, Element, FactorId, Factorization, Group, RegularFactorization, SubgroupSpec,
};

fn groups() -> Vec<Group> {
    [
        "Z",
        "Z^2",
        "Z^3",
        "Z x C2",
        "C3 x Z",
        "Z x Z",
        "Dinf",
        "F2",
        "F3",
        "Dinf x C2",
        "C4 x C6",
    ]
    .iter()
    .map(|s| Group::parse(s).unwrap())
    .collect()
}

fn group() -> impl Strategy<Value = Group> {
    proptest::sample::select(groups())
}

fn index_in(g: &Group, i: u64) -> u64 {
    match g.order().finite() {
        Some(k) => i % k,
        None => i,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enumeration_round_trips(g in group(), i in 0u64..5000) {
        let i = index_in(&g, i);
        let x = g.enumerate(i).unwrap();
        prop_assert_eq!(g.index_of(&x).unwrap(), i);
        prop_assert_eq!(g.parse_element(&x.encode()).unwrap(), x);
    }

    #[test]
    fn group_laws(g in group(), i in 0u64..400, j in 0u64..400, k in 0u64..400) {
        let [a, b, c] = [i, j, k].map(|n| g.enumerate(index_in(&g, n)).unwrap());
        let e = g.identity();
        prop_assert_eq!(
            g.op(&g.op(&a, &b).unwrap(), &c).unwrap(),
            g.op(&a, &g.op(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(g.op(&a, &e).unwrap(), a.clone());
        prop_assert_eq!(g.op(&e, &a).unwrap(), a.clone());
        let inv = g.inv(&a).unwrap();
        prop_assert!(g.is_identity(&g.op(&a, &inv).unwrap()));
        prop_assert!(g.is_identity(&g.op(&inv, &a).unwrap()));
        // right translation preserves differences
        prop_assert_eq!(
            g.diff(&g.op(&a, &c).unwrap(), &g.op(&b, &c).unwrap()).unwrap(),
            g.diff(&a, &b).unwrap()
        );
    }

    #[test]
    fn coset_keys_are_canonical(
        spec in proptest::sample::select(vec![("Z", "3Z"), ("Z x C2", "{0} x C2"), ("Z^2", "2Z^2"), ("Dinf", "rot"), ("Z x C4", "Z x 2C4")]),
        i in 0u64..300,
        j in 0u64..300,
    ) {
        let g = Group::parse(spec.0).unwrap();
        let h = SubgroupSpec::parse(&g, spec.1).unwrap();
        let x = g.enumerate(i).unwrap();
        let key = h.coset_key(&x).unwrap();
        prop_assert!(h.contains(&g.diff(&key, &x).unwrap()));
        prop_assert!(g.index_of(&key).unwrap() <= i);
        prop_assert_eq!(h.coset_key(&key).unwrap(), key.clone());
        let y = g.enumerate(j).unwrap();
        let same = h.contains(&g.diff(&x, &y).unwrap());
        prop_assert_eq!(same, h.coset_key(&y).unwrap() == key);
    }

    #[test]
    fn cardinal_quotients(a in 1u64..50, b in 1u64..50) {
        let m = Cardinal::Finite(a * b);
        prop_assert_eq!(Cardinal::Finite(a).quotient_of(m), Some(Cardinal::Finite(b)));
        prop_assert_eq!(Cardinal::Finite(a).quotient_of(Cardinal::CountablyInfinite), Some(Cardinal::CountablyInfinite));
        prop_assert_eq!(Cardinal::CountablyInfinite.quotient_of(m), None);
    }
}

fn builder_cases() -> Vec<(&'static str, &'static str)> {
    vec![
        ("Z", "all-nonzero"),
        ("Z", "complement(3Z)"),
        ("Z x C2", "complement({0} x C2)"),
        ("Z^2", "all-nonzero"),
        ("F2", "all-nonzero"),
        ("Z x C3", "all-nonzero"),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn greedy_invariants_hold(case in proptest::sample::select(builder_cases()), steps in 1u64..80) {
        let g = Group::parse(case.0).unwrap();
        let u = ConnectionSet::parse(&g, case.1).unwrap();
        let mut b = BaseFactorBuilder::new(g, u).unwrap();
        b.run(steps).unwrap();
        prop_assert_eq!(b.check_invariants(), Ok(()));
    }

    #[test]
    fn greedy_is_deterministic(case in proptest::sample::select(builder_cases()), steps in 1u64..40) {
        let run = || {
            let g = Group::parse(case.0).unwrap();
            let mut b = BaseFactorBuilder::new(g.clone(), ConnectionSet::parse(&g, case.1).unwrap()).unwrap();
            b.run(steps).unwrap();
            b.trace_text()
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn ids_are_equivariant(
        case in proptest::sample::select(vec![
            ("Z x C2", "all-nonzero"), ("Dinf", "all-nonzero"), ("F2", "all-nonzero"), ("Z", "complement(2Z)"),
        ]),
        i in 0u64..60, j in 0u64..60, k in 0u64..60,
    ) {
        let g = Group::parse(case.0).unwrap();
        let f = RegularFactorization::build(g.clone(), ConnectionSet::parse(&g, case.1).unwrap()).unwrap();
        let [x, y, t] = [i, j, k].map(|n| g.enumerate(n).unwrap());
        prop_assume!(x != y && f.in_connection_set(&g.diff(&x, &y).unwrap()).unwrap());
        let id = f.factor_of_edge(&x, &y).unwrap();
        let moved = f.factor_of_edge(&g.op(&x, &t).unwrap(), &g.op(&y, &t).unwrap()).unwrap();
        prop_assert_eq!(f.translate_id(&id, &t).unwrap(), moved);
        // the edge is in its factor
        prop_assert_eq!(f.partner(&id, &x).unwrap(), y);
    }

    #[test]
    fn partners_are_involutions(
        case in proptest::sample::select(vec![("Z", "all-nonzero"), ("Z x C2", "all-nonzero"), ("Dinf", "all-nonzero")]),
        i in 0u64..50, v in 0u64..200,
    ) {
        let g = Group::parse(case.0).unwrap();
        let f = RegularFactorization::build(g.clone(), ConnectionSet::parse(&g, case.1).unwrap()).unwrap();
        let s = g.enumerate(i).unwrap();
        let id = if g.is_involution(&s).unwrap() { FactorId::Inv(s) } else { FactorId::Trans(s) };
        prop_assume!(!matches!(&id, FactorId::Inv(s) if !f.in_connection_set(s).unwrap()));
        let v = g.enumerate(v).unwrap();
        let w = f.partner(&id, &v).unwrap();
        prop_assert_ne!(&w, &v);
        prop_assert_eq!(f.partner(&id, &w).unwrap(), v);
    }

    #[test]
    fn lifting_preserves_partner_involutions(v1 in -50i64..50, h in 0i64..4, k in 0usize..3) {
        let spec = r#"{"group":"C4","subgroup":"{0}","factors":[[["0","1"],["2","3"]],[["0","2"],["1","3"]],[["0","3"],["1","2"]]]}"#;
        let inner: Arc<dyn Factorization> = Arc::new(FactorTable::from_json(spec).unwrap());
        let lift = LiftedFactorization::lift(inner, Group::Integers);
        let id = FactorId::Lifted(Box::new(FactorId::Listed(k)));
        let v = Element::pair(Element::Int(v1), Element::Int(h));
        let w = lift.partner(&id, &v).unwrap();
        prop_assert_eq!(w.as_pair().unwrap().0, &Element::Int(v1));
        prop_assert_ne!(&w, &v);
        prop_assert_eq!(lift.partner(&id, &w).unwrap(), v);
    }
}
