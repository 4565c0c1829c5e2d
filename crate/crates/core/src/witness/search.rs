use super::term::{ConjugateProductTerm, Factor, Sign, Witness};
use crate::group::{Elem, FiniteGroup};
use crate::lattice::ElementSet;

const UNSEEN: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Edge {
    conjugator: Elem,
    sign: Sign,
    value: Elem,
}

/// Breadth-first search over products of conjugates of `c^{+-1}`.
///
/// The state is a group element; an edge right-multiplies by one conjugate
/// `h c^s h^-1`. The set first reached at depth `n` is exactly the set of
/// values of complexity-`n` conjugate product polynomials at `c` that no
/// shorter polynomial reaches. Conjugates with equal values are merged,
/// keeping the first `(h, sign)` in the order `h = 0, 1, ...`, `+` before `-`.
#[derive(Debug, Clone)]
pub struct ConjugateSearch<'g> {
    group: &'g FiniteGroup,
    source: Elem,
    edges: Vec<Edge>,
    depth: Vec<u32>,
    parent: Vec<(u32, u32)>,
    layers: Vec<Vec<Elem>>,
    saturated: bool,
}

impl<'g> ConjugateSearch<'g> {
    pub fn new(group: &'g FiniteGroup, source: Elem) -> ConjugateSearch<'g> {
        ConjugateSearch::with_signs(group, source, &[Sign::Pos, Sign::Neg])
    }

    /// Only conjugates of `c^s` for `s` in `signs` are used as edges.
    pub fn with_signs(group: &'g FiniteGroup, source: Elem, signs: &[Sign]) -> ConjugateSearch<'g> {
        let n = group.order();
        let mut seen = ElementSet::empty(n);
        let mut edges = Vec::new();
        for h in group.elements() {
            for &sign in &[Sign::Pos, Sign::Neg] {
                if !signs.contains(&sign) {
                    continue;
                }
                let base = match sign {
                    Sign::Pos => source,
                    Sign::Neg => group.inv(source),
                };
                let value = group.conjugate(h, base);
                if seen.insert(value) {
                    edges.push(Edge {
                        conjugator: h,
                        sign,
                        value,
                    });
                }
            }
        }
        let mut depth = vec![UNSEEN; n];
        depth[0] = 0;
        ConjugateSearch {
            group,
            source,
            edges,
            depth,
            parent: vec![(UNSEEN, UNSEEN); n],
            layers: vec![vec![0]],
            saturated: false,
        }
    }

    pub fn source(&self) -> Elem {
        self.source
    }

    /// Depth of the deepest completed layer.
    pub fn explored_depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Elements first reached at `depth`, in discovery order.
    pub fn layer(&self, depth: usize) -> &[Elem] {
        self.layers.get(depth).map_or(&[], Vec::as_slice)
    }

    /// Minimal complexity of `x`, if reached so far.
    pub fn depth_of(&self, x: Elem) -> Option<usize> {
        (self.depth[x] != UNSEEN).then_some(self.depth[x] as usize)
    }

    /// Expands one more layer. Returns false once nothing new is reachable.
    pub fn grow(&mut self) -> bool {
        if self.saturated {
            return false;
        }
        let d = self.layers.len() as u32;
        let mut next = Vec::new();
        for &node in self.layers.last().expect("nonempty") {
            for (e, edge) in self.edges.iter().enumerate() {
                let y = self.group.mul(node, edge.value);
                if self.depth[y] == UNSEEN {
                    self.depth[y] = d;
                    self.parent[y] = (node as u32, e as u32);
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            self.saturated = true;
            return false;
        }
        self.layers.push(next);
        true
    }

    /// Grows until `depth` layers are complete or the search saturates.
    pub fn grow_to(&mut self, depth: usize) {
        while self.explored_depth() < depth && self.grow() {}
    }

    pub fn saturate(&mut self) {
        while self.grow() {}
    }

    /// Every element reached so far.
    pub fn reached(&self) -> ElementSet {
        ElementSet::from_elems(self.group.order(), self.layers.iter().flatten().copied())
    }

    /// Reconstructs the polynomial along the search tree. Each factor gets
    /// its own parameter slot.
    pub fn witness_for(&self, target: Elem) -> Option<Witness> {
        self.depth_of(target)?;
        let mut rev = Vec::new();
        let mut x = target;
        while x != 0 {
            let (prev, e) = self.parent[x];
            rev.push(self.edges[e as usize]);
            x = prev as usize;
        }
        rev.reverse();
        let factors = (0..rev.len())
            .map(|slot| Factor {
                slot,
                sign: rev[slot].sign,
            })
            .collect();
        let params = rev.iter().map(|e| e.conjugator).collect();
        Some(Witness {
            term: ConjugateProductTerm::new(factors),
            params,
        })
    }
}

/// A minimal-complexity conjugate product polynomial `pi` with
/// `pi(c) = target`, if one of complexity at most `max_complexity` exists.
pub fn minimal_witness(
    g: &FiniteGroup,
    target: Elem,
    c: Elem,
    max_complexity: usize,
) -> Option<Witness> {
    let mut search = ConjugateSearch::new(g, c);
    while search.depth_of(target).is_none() && search.explored_depth() < max_complexity {
        if !search.grow() {
            break;
        }
    }
    let w = search.witness_for(target)?;
    assert_eq!(w.evaluate(g, c), Ok(target), "witness re-evaluation failed");
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FamilySpec;
    use crate::lattice::normal_closure;

    fn q8() -> FiniteGroup {
        FamilySpec::Quaternion.build().unwrap()
    }

    #[test]
    fn target_equal_to_source_has_complexity_one() {
        let q = q8();
        let w = minimal_witness(&q, 2, 2, 4).unwrap();
        assert_eq!(w.complexity(), 1);
        assert_eq!(w.params, vec![0]);
    }

    #[test]
    fn identity_has_complexity_zero() {
        let q = q8();
        assert_eq!(minimal_witness(&q, 0, 2, 4).unwrap().complexity(), 0);
    }

    #[test]
    fn quaternion_minus_one_from_i() {
        let q = q8();
        let mut s = ConjugateSearch::new(&q, 2);
        s.grow();
        assert_eq!(s.layer(1), &[2, 3]);
        let w = minimal_witness(&q, 1, 2, 4).unwrap();
        assert_eq!(w.complexity(), 2);
        assert_eq!(w.evaluate(&q, 2).unwrap(), 1);
        assert!(minimal_witness(&q, 1, 2, 1).is_none());
    }

    #[test]
    fn outside_closure_is_absent() {
        let q = q8();
        // j is not in the normal closure of i.
        assert!(minimal_witness(&q, 4, 2, 100).is_none());
    }

    #[test]
    fn saturated_reach_is_normal_closure() {
        for spec in ["quaternion", "symmetric:4", "heisenberg:3", "dihedral:6"] {
            let g = FamilySpec::parse(spec).unwrap().build().unwrap();
            for c in g.elements() {
                let mut s = ConjugateSearch::new(&g, c);
                s.saturate();
                assert_eq!(s.reached(), normal_closure(&g, &[c]), "{spec} c={c}");
            }
        }
    }
}
