//! Normal structure of a finite group: closures, the normal-subgroup lattice,
//! atoms and the monolith, the upper central series, and chief factors.

mod set;

pub use set::ElementSet;

use crate::group::{Elem, FiniteGroup};
use serde::Serialize;
use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;
use thiserror::Error;

/// Default cap on the number of normal subgroups enumerated.
pub const DEFAULT_MAX_NORMAL_SUBGROUPS: usize = 10_000;
/// Default cap on commutator evaluations in [`verify_class_identity`].
pub const DEFAULT_MAX_COMMUTATOR_EVALS: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("more than {limit} normal subgroups")]
    TooManyNormalSubgroups { limit: usize },
    #[error("commutator identity check needs more than {limit} evaluations")]
    TooManyEvaluations { limit: u64 },
}

/// Subgroup generated by `gens`.
pub fn subgroup_generated(g: &FiniteGroup, gens: &[Elem]) -> ElementSet {
    subgroup_generated_bounded(g, gens, usize::MAX).expect("unbounded closure")
}

/// Subgroup generated by `gens`, or `None` as soon as it exceeds `max_size`.
pub fn subgroup_generated_bounded(
    g: &FiniteGroup,
    gens: &[Elem],
    max_size: usize,
) -> Option<ElementSet> {
    let mut set = ElementSet::identity_only(g.order());
    let mut members = vec![0];
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        i += 1;
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                if members.len() >= max_size {
                    return None;
                }
                members.push(y);
            }
        }
    }
    Some(set)
}

/// Conjugacy class of `x`, in ascending order.
pub fn conjugacy_class(g: &FiniteGroup, x: Elem) -> Vec<Elem> {
    let set = ElementSet::from_elems(g.order(), g.elements().map(|h| g.conjugate(h, x)));
    set.members()
}

/// All conjugacy classes, ordered by smallest member.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<Elem>> {
    let mut seen = ElementSet::empty(g.order());
    let mut classes = Vec::new();
    for x in g.elements() {
        if seen.contains(x) {
            continue;
        }
        let class = conjugacy_class(g, x);
        for &y in &class {
            seen.insert(y);
        }
        classes.push(class);
    }
    classes
}

/// Smallest normal subgroup containing `xs`.
pub fn normal_closure(g: &FiniteGroup, xs: &[Elem]) -> ElementSet {
    let mut gens = ElementSet::empty(g.order());
    for &x in xs {
        for h in g.elements() {
            gens.insert(g.conjugate(h, x));
        }
    }
    gens.remove(0);
    subgroup_generated(g, &gens.members())
}

pub fn is_subgroup(g: &FiniteGroup, s: &ElementSet) -> bool {
    if !s.contains(0) {
        return false;
    }
    let members = s.members();
    members
        .iter()
        .all(|&a| s.contains(g.inv(a)) && members.iter().all(|&b| s.contains(g.mul(a, b))))
}

pub fn is_normal(g: &FiniteGroup, s: &ElementSet) -> bool {
    is_subgroup(g, s)
        && s
            .iter()
            .all(|x| g.elements().all(|h| s.contains(g.conjugate(h, x))))
}

/// Product `NM` of two normal subgroups.
fn join_normal(g: &FiniteGroup, n: &ElementSet, m: &ElementSet) -> ElementSet {
    if m.is_subset(n) {
        return n.clone();
    }
    if n.is_subset(m) {
        return m.clone();
    }
    let mut result = n.clone();
    let n_members = n.members();
    for y in m.iter() {
        if !result.contains(y) {
            for &x in &n_members {
                result.insert(g.mul(x, y));
            }
        }
    }
    result
}

/// Every normal subgroup exactly once, sorted by size then members.
///
/// Every normal subgroup is a join of principal ones, so the lattice is the
/// join-closure of `{1}` and the closures of conjugacy-class representatives.
pub fn normal_subgroups(g: &FiniteGroup, limit: usize) -> Result<Vec<ElementSet>, LatticeError> {
    let mut principals: Vec<ElementSet> = Vec::new();
    let mut seen: HashSet<ElementSet> = HashSet::new();
    let trivial = ElementSet::identity_only(g.order());
    seen.insert(trivial.clone());
    let mut all = vec![trivial];
    for class in conjugacy_classes(g) {
        let closure = normal_closure(g, &class[..1]);
        if seen.insert(closure.clone()) {
            principals.push(closure.clone());
            all.push(closure);
        }
    }
    if all.len() > limit {
        return Err(LatticeError::TooManyNormalSubgroups { limit });
    }
    let mut queue: VecDeque<usize> = (1..all.len()).collect();
    while let Some(i) = queue.pop_front() {
        for p in &principals {
            let joined = join_normal(g, &all[i], p);
            if seen.contains(&joined) {
                continue;
            }
            seen.insert(joined.clone());
            all.push(joined);
            if all.len() > limit {
                return Err(LatticeError::TooManyNormalSubgroups { limit });
            }
            queue.push_back(all.len() - 1);
        }
    }
    all.sort();
    Ok(all)
}

/// Minimal nontrivial members of a sorted normal lattice.
pub fn atoms_of(normals: &[ElementSet]) -> Vec<ElementSet> {
    let nontrivial: Vec<&ElementSet> = normals.iter().filter(|n| n.len() > 1).collect();
    nontrivial
        .iter()
        .filter(|n| {
            !nontrivial
                .iter()
                .any(|m| m.len() < n.len() && m.is_subset(n))
        })
        .map(|n| (*n).clone())
        .collect()
}

/// Index pairs `(k, h)` into `normals` with `K < H` and nothing strictly between.
pub fn covering_pairs(normals: &[ElementSet]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (h, big) in normals.iter().enumerate() {
        let below: Vec<usize> = (0..normals.len())
            .filter(|&k| normals[k].len() < big.len() && normals[k].is_subset(big))
            .collect();
        for &k in &below {
            let covered = !below.iter().any(|&j| {
                j != k && normals[j].len() > normals[k].len() && normals[k].is_subset(&normals[j])
            });
            if covered {
                pairs.push((k, h));
            }
        }
    }
    pairs
}

/// `|H| / |K|` for every covering pair of the lattice.
pub fn chief_factor_sizes_of(normals: &[ElementSet]) -> Vec<usize> {
    covering_pairs(normals)
        .into_iter()
        .map(|(k, h)| normals[h].len() / normals[k].len())
        .collect()
}

pub fn center(g: &FiniteGroup) -> ElementSet {
    ElementSet::from_elems(
        g.order(),
        g.elements()
            .filter(|&x| g.elements().all(|y| g.mul(x, y) == g.mul(y, x))),
    )
}

/// The upper central series `1 = Z_0 <= Z_1 <= ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralSeries {
    pub levels: Vec<ElementSet>,
    /// The series stopped below the whole group.
    pub stabilized: bool,
    /// Nilpotency class, when the last level is the whole group.
    pub class: Option<usize>,
}

impl CentralSeries {
    /// Least `i` with `x` in `Z_i`.
    pub fn level_of(&self, x: Elem) -> Option<usize> {
        self.levels.iter().position(|z| z.contains(x))
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(ElementSet::len).collect()
    }
}

/// Computed with `Z_{i+1} = { x : [x, g] in Z_i for all g }`, so no quotient
/// tables are built.
pub fn upper_central_series(g: &FiniteGroup) -> CentralSeries {
    let n = g.order();
    let mut levels = vec![ElementSet::identity_only(n)];
    loop {
        let last = levels.last().expect("nonempty");
        if last.len() == n {
            let class = levels.len() - 1;
            return CentralSeries {
                levels,
                stabilized: false,
                class: Some(class),
            };
        }
        let next = ElementSet::from_elems(
            n,
            g.elements()
                .filter(|&x| g.elements().all(|y| last.contains(g.commutator(x, y)))),
        );
        if next == *last {
            return CentralSeries {
                levels,
                stabilized: true,
                class: None,
            };
        }
        levels.push(next);
    }
}

/// Checks the law `[[...[x1, x2], x3] ..., x_{k+1}] = 1`.
///
/// Only distinct values of the partial commutators are iterated, so the
/// work is `sum_j |values_j| * |G|` rather than `|G|^(k+1)`.
pub fn verify_class_identity(g: &FiniteGroup, k: usize, max_evals: u64) -> Result<bool, LatticeError> {
    let mut values = ElementSet::full(g.order());
    let mut evals: u64 = 0;
    for _ in 0..k {
        let mut next = ElementSet::empty(g.order());
        for s in values.iter() {
            evals += g.order() as u64;
            if evals > max_evals {
                return Err(LatticeError::TooManyEvaluations { limit: max_evals });
            }
            for x in g.elements() {
                next.insert(g.commutator(s, x));
            }
        }
        values = next;
        if values.is_trivial() {
            break;
        }
    }
    Ok(values.is_trivial())
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A finite group is nilpotent iff it is the direct product of its Sylow
/// subgroups, iff for each prime the elements of prime-power order form a
/// subgroup.
pub fn is_nilpotent_sylow_check(g: &FiniteGroup) -> bool {
    prime_factors(g.order()).into_iter().all(|p| {
        let is_p_power = |mut m: usize| {
            while m.is_multiple_of(p) {
                m /= p;
            }
            m == 1
        };
        let set: Vec<Elem> = g
            .elements()
            .filter(|&x| is_p_power(g.element_order(x)))
            .collect();
        let lookup = ElementSet::from_elems(g.order(), set.iter().copied());
        set.iter()
            .all(|&a| set.iter().all(|&b| lookup.contains(g.mul(a, b))))
    })
}

/// Write-once analysis record for one group.
pub struct Analysis<'g> {
    group: &'g FiniteGroup,
    max_normal_subgroups: usize,
    normals: OnceLock<Result<Vec<ElementSet>, LatticeError>>,
    series: OnceLock<CentralSeries>,
    center: OnceLock<ElementSet>,
    exponent: OnceLock<usize>,
}

impl<'g> Analysis<'g> {
    pub fn new(group: &'g FiniteGroup) -> Analysis<'g> {
        Analysis::with_limit(group, DEFAULT_MAX_NORMAL_SUBGROUPS)
    }

    pub fn with_limit(group: &'g FiniteGroup, max_normal_subgroups: usize) -> Analysis<'g> {
        Analysis {
            group,
            max_normal_subgroups,
            normals: OnceLock::new(),
            series: OnceLock::new(),
            center: OnceLock::new(),
            exponent: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn exponent(&self) -> usize {
        *self.exponent.get_or_init(|| self.group.exponent())
    }

    pub fn normal_subgroups(&self) -> Result<&[ElementSet], LatticeError> {
        self.normals
            .get_or_init(|| normal_subgroups(self.group, self.max_normal_subgroups))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn atoms(&self) -> Result<Vec<ElementSet>, LatticeError> {
        Ok(atoms_of(self.normal_subgroups()?))
    }

    /// The unique atom, if there is exactly one.
    pub fn monolith(&self) -> Result<Option<ElementSet>, LatticeError> {
        let mut atoms = self.atoms()?;
        Ok(if atoms.len() == 1 { atoms.pop() } else { None })
    }

    pub fn is_subdirectly_irreducible(&self) -> Result<bool, LatticeError> {
        Ok(self.monolith()?.is_some())
    }

    pub fn center(&self) -> &ElementSet {
        self.center.get_or_init(|| center(self.group))
    }

    pub fn upper_central_series(&self) -> &CentralSeries {
        self.series.get_or_init(|| upper_central_series(self.group))
    }

    pub fn nilpotency_class(&self) -> Option<usize> {
        self.upper_central_series().class
    }

    pub fn chief_factor_sizes(&self) -> Result<Vec<usize>, LatticeError> {
        Ok(chief_factor_sizes_of(self.normal_subgroups()?))
    }

    pub fn report(&self) -> Result<AnalysisReport, LatticeError> {
        let normals = self.normal_subgroups()?;
        let atoms = atoms_of(normals);
        let monolith_size = (atoms.len() == 1).then(|| atoms[0].len());
        let mut chief = chief_factor_sizes_of(normals);
        chief.sort_unstable();
        Ok(AnalysisReport {
            order: self.group.order(),
            exponent: self.exponent(),
            nilpotency_class: self.nilpotency_class(),
            center_size: self.center().len(),
            upper_central_series: self.upper_central_series().sizes(),
            normal_subgroup_count: normals.len(),
            atom_sizes: atoms.iter().map(ElementSet::len).collect(),
            monolith_size,
            chief_factor_sizes: chief,
            subdirectly_irreducible: monolith_size.is_some(),
        })
    }
}

/// Summary of a group's normal structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub order: usize,
    pub exponent: usize,
    pub nilpotency_class: Option<usize>,
    pub center_size: usize,
    pub upper_central_series: Vec<usize>,
    pub normal_subgroup_count: usize,
    pub atom_sizes: Vec<usize>,
    pub monolith_size: Option<usize>,
    /// Sorted multiset over covering pairs.
    pub chief_factor_sizes: Vec<usize>,
    pub subdirectly_irreducible: bool,
}
