//! Shared fixtures for the integration tests: a corpus of small groups,
//! variety samples, brute-force oracles written independently of the
//! library algorithms, and a random formula generator.

#![allow(dead_code)]

use monolith::construct::{sample_variety_members, SampleLimits, VarietyMember};
use monolith::folog::{Formula, GroupTerm};
use monolith::{Elem, FamilySpec, FiniteGroup, Permutation};
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::{BTreeSet, HashSet};

pub fn named(spec: &str) -> FiniteGroup {
    FamilySpec::parse(spec).unwrap().build().unwrap()
}

const NAMED: &[&str] = &[
    "trivial",
    "cyclic:2",
    "cyclic:3",
    "klein",
    "cyclic:4",
    "cyclic:5",
    "cyclic:6",
    "symmetric:3",
    "cyclic:7",
    "cyclic:8",
    "dihedral:4",
    "quaternion",
    "product:(klein,cyclic:2)",
    "product:(cyclic:4,cyclic:2)",
    "cyclic:9",
    "product:(cyclic:3,cyclic:3)",
    "cyclic:10",
    "dihedral:5",
    "cyclic:12",
    "dihedral:6",
    "product:(symmetric:3,cyclic:2)",
    "cyclic:16",
    "dihedral:8",
    "product:(quaternion,cyclic:2)",
    "product:(dihedral:4,cyclic:2)",
    "product:(cyclic:4,cyclic:4)",
    "product:(klein,klein)",
    "symmetric:4",
    "heisenberg:3",
    "cyclic:27",
    "product:(quaternion,cyclic:4)",
    "dihedral:16",
    "product:(quaternion,quaternion)",
    "product:(dihedral:4,quaternion)",
];

const PERMUTATIONS: &[&str] = &[
    "(1 2 3);(1 2)(3 4)",
    "(1 2 3 4)(5 6 7);(1 3)(2 4)(5 6)",
    "(1 2 3 4 5);(2 3 5 4)",
];

/// Every corpus group, by ascending order.
pub fn corpus() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = NAMED.iter().map(|s| (s.to_string(), named(s))).collect();
    for spec in PERMUTATIONS {
        let gens = Permutation::parse_generators(spec).unwrap();
        let g = FiniteGroup::from_permutation_generators(&gens, 10_000).unwrap();
        out.push((spec.to_string(), g));
    }
    out.sort_by_key(|(_, g)| g.order());
    out
}

pub fn corpus_up_to(order: usize) -> Vec<(String, FiniteGroup)> {
    corpus().into_iter().filter(|(_, g)| g.order() <= order).collect()
}

/// The deterministic variety samples used throughout the acceptance suite.
pub fn quaternion_sample() -> Vec<VarietyMember> {
    sample_variety_members(&named("quaternion"), "quaternion", &SampleLimits::default()).unwrap()
}

pub fn heisenberg_sample() -> Vec<VarietyMember> {
    let limits = SampleLimits {
        max_order: 729,
        ..SampleLimits::default()
    };
    sample_variety_members(&named("heisenberg:3"), "heisenberg:3", &limits).unwrap()
}

pub fn dihedral_sample() -> Vec<VarietyMember> {
    sample_variety_members(&named("dihedral:4"), "dihedral:4", &SampleLimits::default()).unwrap()
}

// ---------------------------------------------------------------- oracles

pub fn power(g: &FiniteGroup, x: Elem, n: usize) -> Elem {
    (0..n).fold(g.identity(), |acc, _| g.mul(acc, x))
}

pub fn naive_order(g: &FiniteGroup, x: Elem) -> usize {
    (1..=g.order()).find(|&n| power(g, x, n) == 0).unwrap()
}

pub fn naive_exponent(g: &FiniteGroup) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    g.elements()
        .map(|x| naive_order(g, x))
        .fold(1, |acc, o| acc / gcd(acc, o) * o)
}

fn inverse(g: &FiniteGroup, x: Elem) -> Elem {
    g.elements().find(|&y| g.mul(x, y) == 0).unwrap()
}

pub fn naive_conjugate(g: &FiniteGroup, h: Elem, x: Elem) -> Elem {
    g.mul(g.mul(h, x), inverse(g, h))
}

/// Conjugacy classes by direct orbit computation.
pub fn naive_classes(g: &FiniteGroup) -> Vec<BTreeSet<Elem>> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        let class: BTreeSet<Elem> = g.elements().map(|h| naive_conjugate(g, h, x)).collect();
        for &y in &class {
            seen[y] = true;
        }
        out.push(class);
    }
    out
}

fn closed_under_mul(g: &FiniteGroup, set: &BTreeSet<Elem>) -> bool {
    set.iter().all(|&a| set.iter().all(|&b| set.contains(&g.mul(a, b))))
}

/// All normal subgroups, by enumerating unions of conjugacy classes that
/// contain the identity and are closed under multiplication. Exponential in
/// the number of classes; meant for groups with at most ~16 classes.
pub fn brute_normal_subgroups(g: &FiniteGroup) -> Vec<BTreeSet<Elem>> {
    let classes: Vec<BTreeSet<Elem>> = naive_classes(g)
        .into_iter()
        .filter(|c| !c.contains(&0))
        .collect();
    assert!(classes.len() <= 20, "too many classes for the brute-force oracle");
    let mut out = Vec::new();
    for mask in 0u32..(1 << classes.len()) {
        let mut set = BTreeSet::from([0]);
        for (i, c) in classes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                set.extend(c);
            }
        }
        if g.order().is_multiple_of(set.len()) && closed_under_mul(g, &set) {
            out.push(set);
        }
    }
    out
}

fn naive_closure(g: &FiniteGroup, seed: &BTreeSet<Elem>) -> BTreeSet<Elem> {
    let mut set = seed.clone();
    set.insert(0);
    loop {
        let products: Vec<Elem> = set
            .iter()
            .flat_map(|&a| set.iter().map(move |&b| (a, b)))
            .map(|(a, b)| g.mul(a, b))
            .filter(|p| !set.contains(p))
            .collect();
        if products.is_empty() {
            return set;
        }
        set.extend(products);
    }
}

/// All normal subgroups, grown from the trivial subgroup by adjoining one
/// conjugacy class at a time and closing under multiplication.
pub fn incremental_normal_subgroups(g: &FiniteGroup) -> Vec<BTreeSet<Elem>> {
    let classes = naive_classes(g);
    let mut found: HashSet<BTreeSet<Elem>> = HashSet::new();
    let mut frontier = vec![BTreeSet::from([0])];
    found.insert(frontier[0].clone());
    while let Some(n) = frontier.pop() {
        for c in &classes {
            if c.is_subset(&n) {
                continue;
            }
            let mut seed = n.clone();
            seed.extend(c);
            let m = naive_closure(g, &seed);
            if found.insert(m.clone()) {
                frontier.push(m);
            }
        }
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// Minimal nontrivial members of a list of normal subgroups.
pub fn minimal_nontrivial(normals: &[BTreeSet<Elem>]) -> Vec<BTreeSet<Elem>> {
    let nontrivial: Vec<&BTreeSet<Elem>> = normals.iter().filter(|n| n.len() > 1).collect();
    nontrivial
        .iter()
        .filter(|n| !nontrivial.iter().any(|m| m.len() < n.len() && m.is_subset(n)))
        .map(|n| (*n).clone())
        .collect()
}

/// Upper central series from the definition
/// `Z_{i+1} = { x : [x, g] in Z_i for all g }`; class is `None` if it
/// stalls below the whole group.
pub fn naive_class(g: &FiniteGroup) -> Option<usize> {
    let comm = |a: Elem, b: Elem| g.mul(g.mul(a, b), inverse(g, g.mul(b, a)));
    let mut z: BTreeSet<Elem> = BTreeSet::from([0]);
    let mut k = 0;
    while z.len() < g.order() {
        let next: BTreeSet<Elem> = g
            .elements()
            .filter(|&x| g.elements().all(|y| z.contains(&comm(x, y))))
            .collect();
        if next.len() == z.len() {
            return None;
        }
        z = next;
        k += 1;
    }
    Some(k)
}

/// Checks `[[x1, x2], ..., x_{k+1}] = 1` over all `(k+1)`-tuples.
pub fn naive_class_law(g: &FiniteGroup, k: usize) -> bool {
    let comm = |a: Elem, b: Elem| g.mul(g.mul(a, b), inverse(g, g.mul(b, a)));
    fn go(g: &FiniteGroup, acc: Elem, left: usize, comm: &dyn Fn(Elem, Elem) -> Elem) -> bool {
        if left == 0 {
            return acc == 0;
        }
        g.elements().all(|x| go(g, comm(acc, x), left - 1, comm))
    }
    g.elements().all(|x| go(g, x, k, &comm))
}

/// Minimal number of conjugates of `c^{+-1}` whose product is each element,
/// by depth-first enumeration of factor sequences of length at most
/// `max_depth`. Conjugates are recomputed for every `(h, sign)` pair without
/// merging equal values; a node is re-expanded whenever it is reached at a
/// smaller depth than before.
pub fn dfs_min_complexities(g: &FiniteGroup, c: Elem, max_depth: usize) -> Vec<Option<usize>> {
    let c_inv = inverse(g, c);
    let factors: Vec<Elem> = g
        .elements()
        .flat_map(|h| [naive_conjugate(g, h, c), naive_conjugate(g, h, c_inv)])
        .collect();
    let mut best: Vec<Option<usize>> = vec![None; g.order()];
    best[0] = Some(0);
    let mut expanded = vec![usize::MAX; g.order()];
    dfs(g, &factors, 0, 0, max_depth, &mut best, &mut expanded);
    best
}

fn dfs(
    g: &FiniteGroup,
    factors: &[Elem],
    x: Elem,
    depth: usize,
    limit: usize,
    best: &mut [Option<usize>],
    expanded: &mut [usize],
) {
    if depth == limit || expanded[x] <= depth {
        return;
    }
    expanded[x] = depth;
    for &f in factors {
        let y = g.mul(x, f);
        if best[y].is_none_or(|d| d > depth + 1) {
            best[y] = Some(depth + 1);
        }
        dfs(g, factors, y, depth + 1, limit, best, expanded);
    }
}

// ------------------------------------------------------ random formulas

pub const VARS: &[&str] = &["x", "y", "z", "w"];

pub fn random_term(rng: &mut StdRng, depth: usize) -> GroupTerm {
    if depth == 0 || rng.gen_bool(0.35) {
        return if rng.gen_bool(0.15) {
            GroupTerm::One
        } else {
            GroupTerm::var(VARS[rng.gen_range(0..VARS.len())])
        };
    }
    if rng.gen_bool(0.3) {
        GroupTerm::inv(random_term(rng, depth - 1))
    } else {
        GroupTerm::mul(random_term(rng, depth - 1), random_term(rng, depth - 1))
    }
}

/// A random formula with at most `quantifiers` nested quantifiers.
pub fn random_formula(rng: &mut StdRng, depth: usize, quantifiers: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        let (a, b) = (random_term(rng, 2), random_term(rng, 2));
        return Formula::eq(a, b);
    }
    let pick = rng.gen_range(0..7);
    let sub = |rng: &mut StdRng, q| random_formula(rng, depth - 1, q);
    match pick {
        0 => Formula::not(sub(rng, quantifiers)),
        1 | 2 => {
            let n = rng.gen_range(2..=3);
            let parts = (0..n).map(|_| sub(rng, quantifiers)).collect();
            if pick == 1 {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        3 => Formula::implies(sub(rng, quantifiers), sub(rng, quantifiers)),
        4 => Formula::iff(sub(rng, quantifiers), sub(rng, quantifiers)),
        _ if quantifiers > 0 => {
            let v = VARS[rng.gen_range(0..VARS.len())];
            let body = sub(rng, quantifiers - 1);
            if pick == 5 {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
        _ => Formula::not(sub(rng, quantifiers)),
    }
}

/// Replaces every connective and quantifier by its De Morgan or
/// quantifier dual.
pub fn dualize(f: &Formula) -> Formula {
    let not = |x: Formula| Formula::not(x);
    match f {
        Formula::Eq(..) => f.clone(),
        Formula::Not(a) => not(dualize(a)),
        Formula::And(xs) => not(Formula::Or(xs.iter().map(|x| not(dualize(x))).collect())),
        Formula::Or(xs) => not(Formula::And(xs.iter().map(|x| not(dualize(x))).collect())),
        Formula::Implies(a, b) => Formula::Or(vec![not(dualize(a)), dualize(b)]),
        Formula::Iff(a, b) => {
            let (a, b) = (dualize(a), dualize(b));
            Formula::And(vec![
                Formula::implies(a.clone(), b.clone()),
                Formula::implies(b, a),
            ])
        }
        Formula::ForAll(v, body) => not(Formula::exists(v, not(dualize(body)))),
        Formula::Exists(v, body) => not(Formula::forall(v, not(dualize(body)))),
    }
}

/// Negation normal form: negations pushed down to equations.
pub fn nnf(f: &Formula) -> Formula {
    push(f, false)
}

fn push(f: &Formula, negated: bool) -> Formula {
    match f {
        Formula::Eq(..) => {
            if negated {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(a) => push(a, !negated),
        Formula::And(xs) | Formula::Or(xs) => {
            let parts = xs.iter().map(|x| push(x, negated)).collect();
            match (f, negated) {
                (Formula::And(_), false) | (Formula::Or(_), true) => Formula::And(parts),
                _ => Formula::Or(parts),
            }
        }
        Formula::Implies(a, b) => {
            if negated {
                Formula::And(vec![push(a, false), push(b, true)])
            } else {
                Formula::Or(vec![push(a, true), push(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            // a <-> b  ==  (a & b) | (!a & !b)
            let same = Formula::Or(vec![
                Formula::And(vec![push(a, false), push(b, false)]),
                Formula::And(vec![push(a, true), push(b, true)]),
            ]);
            let differ = Formula::Or(vec![
                Formula::And(vec![push(a, false), push(b, true)]),
                Formula::And(vec![push(a, true), push(b, false)]),
            ]);
            if negated {
                differ
            } else {
                same
            }
        }
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::ForAll(..)) != negated;
            let body = push(body, negated);
            if universal {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}
