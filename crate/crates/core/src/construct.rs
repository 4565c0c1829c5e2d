//! Members of the variety generated by a finite group, built with the HSP
//! operators: finite direct powers, subgroups and quotients. Every member
//! carries the recipe that produced it, so membership is certified by
//! construction and the table can be rebuilt and checked.

use crate::group::{Elem, FamilySpec, FiniteGroup, GroupError};
use crate::lattice::{
    is_normal, subgroup_generated_bounded, Analysis, ElementSet, LatticeError,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("kernel is not a normal subgroup")]
    NotNormal,
    #[error("element {element} is out of range for a group of order {order}")]
    ElementOutOfRange { element: Elem, order: usize },
    #[error("base group `{spec}` has hash {found}, recipe expects {expected}")]
    HashMismatch {
        spec: String,
        expected: String,
        found: String,
    },
    #[error("cannot resolve base group `{spec}`: {reason}")]
    Unresolved { spec: String, reason: String },
}

/// `g^n`, with element `(x_1, ..., x_n)` at index `sum x_i |G|^(n-i)`.
pub fn direct_power(g: &FiniteGroup, n: usize, max_order: usize) -> Result<FiniteGroup, GroupError> {
    let order = u32::try_from(n)
        .ok()
        .and_then(|e| g.order().checked_pow(e))
        .filter(|&o| o <= max_order)
        .ok_or(GroupError::SizeLimitExceeded { limit: max_order })?;
    if n == 1 {
        return Ok(g.clone());
    }
    let mut power = FiniteGroup::trivial();
    for _ in 0..n {
        power = FiniteGroup::direct_product(&power, g);
    }
    let names = (0..order).map(|x| tuple_name(g, &digits(g.order(), n, x))).collect();
    power.with_names(names)
}

fn digits(base: usize, n: usize, mut x: usize) -> Vec<Elem> {
    let mut out = vec![0; n];
    for d in out.iter_mut().rev() {
        *d = x % base;
        x /= base;
    }
    out
}

fn tuple_name(g: &FiniteGroup, parts: &[Elem]) -> String {
    let inner: Vec<String> = parts.iter().map(|&p| g.name(p)).collect();
    format!("({})", inner.join(","))
}

/// A subgroup as a standalone group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: FiniteGroup,
    /// `embedding[i]` is the ambient element with local index `i`.
    pub embedding: Vec<Elem>,
}

/// Restricts `g` to a subgroup given by its members. Local indices follow
/// the ascending order of the ambient indices.
pub fn restrict(g: &FiniteGroup, members: &ElementSet) -> Subgroup {
    let embedding = members.members();
    let n = embedding.len();
    let mut local = vec![u32::MAX; g.order()];
    for (i, &x) in embedding.iter().enumerate() {
        local[x] = i as u32;
    }
    let mut table = Vec::with_capacity(n * n);
    for &a in &embedding {
        for &b in &embedding {
            table.push(local[g.mul(a, b)]);
        }
    }
    let names = embedding.iter().map(|&x| g.name(x)).collect();
    Subgroup {
        group: FiniteGroup::from_trusted_table(n, table, Some(names)),
        embedding,
    }
}

pub fn subgroup_generated(g: &FiniteGroup, gens: &[Elem]) -> Result<Subgroup, ConstructError> {
    check_elements(g, gens)?;
    let members = subgroup_generated_bounded(g, gens, usize::MAX).expect("unbounded closure");
    Ok(restrict(g, &members))
}

fn check_elements(g: &FiniteGroup, xs: &[Elem]) -> Result<(), ConstructError> {
    match xs.iter().find(|&&x| x >= g.order()) {
        Some(&element) => Err(ConstructError::ElementOutOfRange {
            element,
            order: g.order(),
        }),
        None => Ok(()),
    }
}

/// A quotient group together with the natural projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `projection[x]` is the coset of `x`.
    pub projection: Vec<Elem>,
    /// Smallest element of each coset.
    pub representatives: Vec<Elem>,
}

/// `g / kernel`, cosets numbered by their smallest element.
pub fn quotient(g: &FiniteGroup, kernel: &ElementSet) -> Result<Quotient, ConstructError> {
    if kernel.universe() != g.order() || !is_normal(g, kernel) {
        return Err(ConstructError::NotNormal);
    }
    let mut projection = vec![usize::MAX; g.order()];
    let mut representatives = Vec::new();
    for x in g.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let coset = representatives.len();
        representatives.push(x);
        for k in kernel.iter() {
            projection[g.mul(x, k)] = coset;
        }
    }
    let n = representatives.len();
    let mut table = Vec::with_capacity(n * n);
    for &a in &representatives {
        for &b in &representatives {
            table.push(projection[g.mul(a, b)] as u32);
        }
    }
    let names = representatives.iter().map(|&x| format!("[{}]", g.name(x))).collect();
    Ok(Quotient {
        group: FiniteGroup::from_trusted_table(n, table, Some(names)),
        projection,
        representatives,
    })
}

/// How a group was built from a base group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Recipe {
    Base { spec: String, hash: String },
    Power { of: Box<Recipe>, n: usize },
    Subgroup { of: Box<Recipe>, generators: Vec<Elem> },
    Quotient { of: Box<Recipe>, kernel: Vec<Elem> },
}

impl Recipe {
    pub fn base(spec: &str, g: &FiniteGroup) -> Recipe {
        Recipe::Base {
            spec: spec.to_string(),
            hash: g.content_hash(),
        }
    }

    /// The spec string of the base group.
    pub fn base_spec(&self) -> &str {
        match self {
            Recipe::Base { spec, .. } => spec,
            Recipe::Power { of, .. } | Recipe::Subgroup { of, .. } | Recipe::Quotient { of, .. } => {
                of.base_spec()
            }
        }
    }

    /// Rebuilds the group, resolving the base with `resolve` and checking
    /// its content hash.
    pub fn replay<F>(&self, resolve: &F) -> Result<FiniteGroup, ConstructError>
    where
        F: Fn(&str) -> Result<FiniteGroup, ConstructError>,
    {
        match self {
            Recipe::Base { spec, hash } => {
                let g = resolve(spec)?;
                let found = g.content_hash();
                if &found != hash {
                    return Err(ConstructError::HashMismatch {
                        spec: spec.clone(),
                        expected: hash.clone(),
                        found,
                    });
                }
                Ok(g)
            }
            Recipe::Power { of, n } => {
                let g = of.replay(resolve)?;
                Ok(direct_power(&g, *n, usize::MAX)?)
            }
            Recipe::Subgroup { of, generators } => {
                let g = of.replay(resolve)?;
                Ok(subgroup_generated(&g, generators)?.group)
            }
            Recipe::Quotient { of, kernel } => {
                let g = of.replay(resolve)?;
                check_elements(&g, kernel)?;
                let k = ElementSet::from_elems(g.order(), kernel.iter().copied());
                Ok(quotient(&g, &k)?.group)
            }
        }
    }

    /// Replays against named families only.
    pub fn replay_named(&self) -> Result<FiniteGroup, ConstructError> {
        self.replay(&|spec: &str| Ok(FamilySpec::parse(spec)?.build()?))
    }
}

/// Isomorphism invariants used to deduplicate sampled groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub exponent: usize,
    pub nilpotency_class: Option<usize>,
    pub center_size: usize,
    pub upper_central_series: Vec<usize>,
    pub normal_subgroup_sizes: Vec<usize>,
    pub atom_sizes: Vec<usize>,
    pub chief_factor_sizes: Vec<usize>,
    /// `(element order, count)` pairs in ascending order.
    pub element_orders: Vec<(usize, usize)>,
}

impl Fingerprint {
    pub fn of(analysis: &Analysis<'_>) -> Result<Fingerprint, LatticeError> {
        let g = analysis.group();
        let normals = analysis.normal_subgroups()?;
        let mut normal_subgroup_sizes: Vec<usize> = normals.iter().map(ElementSet::len).collect();
        normal_subgroup_sizes.sort_unstable();
        let mut atom_sizes: Vec<usize> = analysis.atoms()?.iter().map(ElementSet::len).collect();
        atom_sizes.sort_unstable();
        let mut chief_factor_sizes = analysis.chief_factor_sizes()?;
        chief_factor_sizes.sort_unstable();
        let mut histogram = BTreeMap::new();
        for x in g.elements() {
            *histogram.entry(g.element_order(x)).or_insert(0) += 1;
        }
        Ok(Fingerprint {
            order: g.order(),
            exponent: analysis.exponent(),
            nilpotency_class: analysis.nilpotency_class(),
            center_size: analysis.center().len(),
            upper_central_series: analysis.upper_central_series().sizes(),
            normal_subgroup_sizes,
            atom_sizes,
            chief_factor_sizes,
            element_orders: histogram.into_iter().collect(),
        })
    }
}

/// A group certified to lie in the variety generated by a base group.
#[derive(Debug, Clone)]
pub struct VarietyMember {
    pub group: FiniteGroup,
    pub recipe: Recipe,
    pub si: bool,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleLimits {
    /// Largest power `n` whose subgroups are sampled.
    pub max_power: usize,
    /// Largest order of a sampled subgroup.
    pub max_order: usize,
    /// Largest order of an ambient power `G^n`.
    pub max_power_order: usize,
    /// Generators per subgroup, 1 or 2.
    pub max_gens: usize,
    pub max_members: usize,
}

impl Default for SampleLimits {
    fn default() -> SampleLimits {
        SampleLimits {
            max_power: 2,
            max_order: 64,
            max_power_order: 1024,
            max_gens: 2,
            max_members: 256,
        }
    }
}

struct Sampler {
    members: Vec<VarietyMember>,
    seen: HashSet<Fingerprint>,
    max_members: usize,
}

impl Sampler {
    fn full(&self) -> bool {
        self.members.len() >= self.max_members
    }

    /// Adds `group` unless an equal fingerprint is already present.
    fn offer(&mut self, group: FiniteGroup, recipe: Recipe) -> Result<bool, LatticeError> {
        if self.full() {
            return Ok(false);
        }
        let analysis = Analysis::new(&group);
        let fingerprint = Fingerprint::of(&analysis)?;
        if !self.seen.insert(fingerprint.clone()) {
            return Ok(false);
        }
        let si = analysis.is_subdirectly_irreducible()?;
        drop(analysis);
        self.members.push(VarietyMember {
            group,
            recipe,
            si,
            fingerprint,
        });
        Ok(true)
    }

    /// Offers `g` and, if it was new, its proper nontrivial quotients.
    fn offer_with_quotients(&mut self, group: FiniteGroup, recipe: Recipe) -> Result<(), LatticeError> {
        if !self.offer(group.clone(), recipe.clone())? {
            return Ok(());
        }
        let normals = Analysis::new(&group).normal_subgroups()?.to_vec();
        for n in normals.iter().filter(|n| !n.is_trivial()) {
            let q = quotient(&group, n).expect("listed subgroups are normal");
            let r = Recipe::Quotient {
                of: Box::new(recipe.clone()),
                kernel: n.members(),
            };
            self.offer(q.group, r)?;
        }
        Ok(())
    }
}

/// A deterministic sample of the variety generated by `g`: `g` and its
/// quotients, then for `n = 2, ..., max_power` the power `g^n` itself when
/// small enough and the subgroups of `g^n` generated by one or two
/// elements, each followed by its quotients.
/// Groups with equal fingerprints are kept once, first come first kept.
pub fn sample_variety_members(
    g: &FiniteGroup,
    spec: &str,
    limits: &SampleLimits,
) -> Result<Vec<VarietyMember>, ConstructError> {
    let base = Recipe::base(spec, g);
    let mut sampler = Sampler {
        members: Vec::new(),
        seen: HashSet::new(),
        max_members: limits.max_members,
    };
    sampler.offer_with_quotients(g.clone(), base.clone())?;
    for n in 2..=limits.max_power {
        if sampler.full() {
            break;
        }
        let Ok(power) = direct_power(g, n, limits.max_power_order) else {
            break;
        };
        let power_recipe = Recipe::Power {
            of: Box::new(base.clone()),
            n,
        };
        if power.order() <= limits.max_order {
            sampler.offer_with_quotients(power.clone(), power_recipe.clone())?;
        }
        for (gens, members) in small_subgroups(&power, limits) {
            if sampler.full() {
                break;
            }
            let sub = restrict(&power, &members);
            let recipe = Recipe::Subgroup {
                of: Box::new(power_recipe.clone()),
                generators: gens,
            };
            sampler.offer_with_quotients(sub.group, recipe)?;
        }
    }
    Ok(sampler.members)
}

/// Distinct subgroups of order at most `max_order` generated by one or two
/// elements, in enumeration order. Generators are drawn from the first
/// generator of each cyclic subgroup.
fn small_subgroups(g: &FiniteGroup, limits: &SampleLimits) -> Vec<(Vec<Elem>, ElementSet)> {
    let mut seen = HashSet::new();
    let mut cyclic_reps = Vec::new();
    let mut out = Vec::new();
    for x in g.elements().skip(1) {
        let c = subgroup_generated_bounded(g, &[x], usize::MAX).expect("unbounded closure");
        if seen.insert(c.clone()) {
            cyclic_reps.push(x);
            if c.len() <= limits.max_order {
                out.push((vec![x], c));
            }
        }
    }
    if limits.max_gens >= 2 {
        for (i, &a) in cyclic_reps.iter().enumerate() {
            for &b in &cyclic_reps[i + 1..] {
                if let Some(s) = subgroup_generated_bounded(g, &[a, b], limits.max_order) {
                    if seen.insert(s.clone()) {
                        out.push((vec![a, b], s));
                    }
                }
            }
        }
    }
    out
}

/// The projection `x -> projection[x]` is a homomorphism onto `q`.
pub fn is_homomorphism(g: &FiniteGroup, q: &FiniteGroup, map: &[Elem]) -> bool {
    g.elements()
        .all(|a| g.elements().all(|b| map[g.mul(a, b)] == q.mul(map[a], map[b])))
}
