//! Property tests: algebraic invariants of the constructions, witness
//! composition, and the formula layer, checked against naive evaluation.

mod common;

use common::*;
use monolith::construct::{direct_power, is_homomorphism, quotient, restrict, subgroup_generated, Recipe};
use monolith::folog::{evaluate, parse, parse_term, Formula, GroupTerm};
use monolith::group::GroupFile;
use monolith::lattice::{is_normal, is_subgroup, normal_closure, subgroup_generated as closure};
use monolith::witness::{ConjugateProductTerm, ConjugateSearch, Witness};
use monolith::{Analysis, Elem, ElementSet, FiniteGroup};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::LazyLock;

static GROUPS: LazyLock<Vec<(String, FiniteGroup)>> = LazyLock::new(|| corpus_up_to(32));

fn group_and_elems(n: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..GROUPS.len(), prop::collection::vec(any::<usize>(), n)).prop_map(|(i, xs)| {
        let order = GROUPS[i].1.order();
        (i, xs.into_iter().map(|x| x % order).collect())
    })
}

fn term_value(g: &FiniteGroup, t: &GroupTerm, env: &BTreeMap<String, Elem>) -> Elem {
    match t {
        GroupTerm::Var(v) => env[v],
        GroupTerm::One => 0,
        GroupTerm::Mul(a, b) => g.mul(term_value(g, a, env), term_value(g, b, env)),
        GroupTerm::Inv(a) => g.inv(term_value(g, a, env)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normal_closure_is_least_normal_subgroup((i, seeds) in group_and_elems(2)) {
        let g = &GROUPS[i].1;
        let n = normal_closure(g, &seeds);
        prop_assert!(is_normal(g, &n));
        prop_assert!(seeds.iter().all(|&x| n.contains(x)));
        prop_assert_eq!(normal_closure(g, &n.members()), n.clone());
        for h in g.elements() {
            let conj: Vec<Elem> = seeds.iter().map(|&x| g.conjugate(h, x)).collect();
            prop_assert_eq!(normal_closure(g, &conj), n.clone());
        }
    }

    #[test]
    fn generated_subgroup_embeds((i, gens) in group_and_elems(2)) {
        let g = &GROUPS[i].1;
        let sub = subgroup_generated(g, &gens).unwrap();
        let members = closure(g, &gens);
        prop_assert!(is_subgroup(g, &members));
        prop_assert_eq!(sub.group.order(), members.len());
        prop_assert_eq!(g.order() % sub.group.order(), 0);
        prop_assert!(is_homomorphism(&sub.group, g, &sub.embedding));
        prop_assert!(sub.embedding.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(restrict(g, &members).embedding, sub.embedding);
    }

    #[test]
    fn quotient_projection_is_surjective_homomorphism((i, seeds) in group_and_elems(1)) {
        let g = &GROUPS[i].1;
        let k = normal_closure(g, &seeds);
        let q = quotient(g, &k).unwrap();
        prop_assert_eq!(q.group.order() * k.len(), g.order());
        prop_assert!(is_homomorphism(g, &q.group, &q.projection));
        let kernel: Vec<Elem> = g.elements().filter(|&x| q.projection[x] == 0).collect();
        prop_assert_eq!(kernel, k.members());
        for (coset, &rep) in q.representatives.iter().enumerate() {
            prop_assert_eq!(q.projection[rep], coset);
            prop_assert!(g.elements().filter(|&x| q.projection[x] == coset).all(|x| x >= rep));
        }
    }

    #[test]
    fn quotient_by_non_normal_is_rejected((i, gens) in group_and_elems(1)) {
        let g = &GROUPS[i].1;
        let h = closure(g, &gens);
        prop_assert_eq!(quotient(g, &h).is_ok(), is_normal(g, &h));
    }

    #[test]
    fn power_components_multiply_independently(i in 0..GROUPS.len(), a in any::<usize>(), b in any::<usize>()) {
        let g = &GROUPS[i].1;
        prop_assume!(g.order() <= 16);
        let p = direct_power(g, 2, usize::MAX).unwrap();
        let n = g.order();
        prop_assert_eq!(p.order(), n * n);
        let (a, b) = (a % p.order(), b % p.order());
        let split = |x: Elem| (x / n, x % n);
        let ((a1, a2), (b1, b2)) = (split(a), split(b));
        prop_assert_eq!(split(p.mul(a, b)), (g.mul(a1, b1), g.mul(a2, b2)));
        prop_assert!(p.validate().is_ok());
    }

    #[test]
    fn witness_composition_evaluates_the_composite(
        (i, xs) in group_and_elems(8),
        inner in prop::collection::vec((0usize..4, any::<bool>()), 0..4),
        outer in prop::collection::vec((0usize..4, any::<bool>()), 0..4),
    ) {
        let g = &GROUPS[i].1;
        let mk = |pairs: &[(usize, bool)], params: &[Elem]| Witness {
            term: ConjugateProductTerm::from_pairs(
                &pairs.iter().map(|&(s, pos)| (s, if pos { 1 } else { -1 })).collect::<Vec<_>>(),
            ),
            params: params.to_vec(),
        };
        let p = mk(&inner, &xs[..4]);
        let q = mk(&outer, &xs[4..]);
        let composed = p.then(g, &q);
        prop_assert_eq!(composed.complexity(), p.complexity() * q.complexity());
        for x in g.elements() {
            let expected = q.evaluate(g, p.evaluate(g, x).unwrap()).unwrap();
            prop_assert_eq!(composed.evaluate(g, x).unwrap(), expected);
        }
    }

    #[test]
    fn search_witnesses_are_minimal_and_correct((i, c) in group_and_elems(1)) {
        let g = &GROUPS[i].1;
        let mut search = ConjugateSearch::new(g, c[0]);
        search.saturate();
        let reached = search.reached();
        prop_assert_eq!(reached.clone(), normal_closure(g, &c));
        for t in reached.iter() {
            let w = search.witness_for(t).unwrap();
            prop_assert_eq!(Some(w.complexity()), search.depth_of(t));
            prop_assert_eq!(w.evaluate(g, c[0]).unwrap(), t);
        }
    }

    #[test]
    fn element_sets_match_btree_sets(a in prop::collection::btree_set(0usize..70, 0..40), b in prop::collection::btree_set(0usize..70, 0..40)) {
        let sa = ElementSet::from_elems(70, a.iter().copied());
        let sb = ElementSet::from_elems(70, b.iter().copied());
        prop_assert_eq!(sa.len(), a.len());
        prop_assert_eq!(sa.members(), a.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.union(&sb).members(), a.union(&b).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.intersection(&sb).members(), a.intersection(&b).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
    }

    #[test]
    fn formulas_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_formula(&mut rng, 5, 3);
        let printed = f.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), f);
        let t = random_term(&mut rng, 4);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn substitution_commutes_with_evaluation(seed in any::<u64>(), (i, xs) in group_and_elems(4)) {
        let g = &GROUPS[i].1;
        prop_assume!(g.order() <= 12);
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_formula(&mut rng, 3, 2);
        let t = random_term(&mut rng, 2);
        let env: BTreeMap<String, Elem> = VARS.iter().map(|v| v.to_string()).zip(xs).collect();
        let mut shifted = env.clone();
        shifted.insert("x".into(), term_value(g, &t, &env));
        let substituted = f.substitute(&HashMap::from([("x".to_string(), t)]));
        let restrict_env = |phi: &Formula, e: &BTreeMap<String, Elem>| -> BTreeMap<String, Elem> {
            let free = phi.free_vars();
            e.iter().filter(|(k, _)| free.contains(*k)).map(|(k, v)| (k.clone(), *v)).collect()
        };
        prop_assert_eq!(
            evaluate(g, &substituted, &restrict_env(&substituted, &env)).unwrap(),
            evaluate(g, &f, &restrict_env(&f, &shifted)).unwrap()
        );
    }
}

#[test]
fn corpus_exponent_and_classes_match_definitions() {
    for (spec, g) in corpus() {
        assert_eq!(g.exponent(), naive_exponent(&g), "{spec}");
        for x in g.elements() {
            assert_eq!(g.element_order(x), naive_order(&g, x), "{spec}");
            for h in g.elements().step_by(3) {
                assert_eq!(g.conjugate(h, x), naive_conjugate(&g, h, x), "{spec}");
            }
        }
        let a = Analysis::new(&g);
        assert_eq!(a.nilpotency_class(), naive_class(&g), "{spec}");
    }
}

#[test]
fn normal_lattice_matches_brute_force() {
    for (spec, g) in corpus_up_to(64) {
        if naive_classes(&g).len() > 20 {
            continue;
        }
        let oracle = brute_normal_subgroups(&g);
        let lib: BTreeSet<BTreeSet<Elem>> = Analysis::new(&g)
            .normal_subgroups()
            .unwrap()
            .iter()
            .map(|n| n.iter().collect())
            .collect();
        assert_eq!(lib, oracle.into_iter().collect(), "{spec}");
    }
}

#[test]
fn group_files_round_trip_with_stable_hash() {
    for (spec, g) in corpus_up_to(32) {
        let text = serde_json::to_string(&g.to_file()).unwrap();
        let loaded = GroupFile::from_json(&text).unwrap().load().unwrap().group;
        assert_eq!(loaded.content_hash(), g.content_hash(), "{spec}");
        assert_eq!(loaded, g, "{spec}");
    }
}

#[test]
fn recipes_survive_serialization() {
    for member in quaternion_sample() {
        let text = serde_json::to_string(&member.recipe).unwrap();
        let back: Recipe = serde_json::from_str(&text).unwrap();
        assert_eq!(back, member.recipe);
        assert_eq!(back.replay_named().unwrap(), member.group);
        assert_eq!(back.base_spec(), "quaternion");
    }
}
