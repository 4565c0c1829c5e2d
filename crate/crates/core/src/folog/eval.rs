//! Model checking by exhaustive quantifier expansion.
//!
//! Formulas are compiled once: variables become slots (free variables first,
//! in name order, then one slot per quantifier depth) and group terms become
//! a hash-consed DAG. Each term node caches its value together with the
//! binding generation of its highest slot, so a subterm is recomputed only
//! after one of the variables it depends on has been rebound.

use super::ast::{Formula, GroupTerm};
use super::FologError;
use crate::group::{Elem, FiniteGroup};
use crate::lattice::ElementSet;
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Slot(usize),
    One,
    Mul(usize, usize),
    Inv(usize),
}

#[derive(Debug, Clone)]
enum Compiled {
    Eq(usize, usize),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
    ForAll(usize, Box<Compiled>),
    Exists(usize, Box<Compiled>),
}

#[derive(Default)]
struct Compiler {
    nodes: Vec<Node>,
    deps: Vec<Option<usize>>,
    index: HashMap<Node, usize>,
    scope: Vec<(String, usize)>,
}

impl Compiler {
    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let dep = match node {
            Node::Slot(s) => Some(s),
            Node::One => None,
            Node::Mul(a, b) => self.deps[a].max(self.deps[b]),
            Node::Inv(a) => self.deps[a],
        };
        let id = self.nodes.len();
        self.nodes.push(node);
        self.deps.push(dep);
        self.index.insert(node, id);
        id
    }

    fn term(&mut self, t: &GroupTerm) -> usize {
        match t {
            GroupTerm::Var(v) => {
                let slot = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(name, _)| name == v)
                    .map(|&(_, s)| s)
                    .expect("free variables are in scope");
                self.intern(Node::Slot(slot))
            }
            GroupTerm::One => self.intern(Node::One),
            GroupTerm::Mul(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                self.intern(Node::Mul(a, b))
            }
            GroupTerm::Inv(a) => {
                let a = self.term(a);
                self.intern(Node::Inv(a))
            }
        }
    }

    fn formula(&mut self, f: &Formula, depth: usize) -> Compiled {
        match f {
            Formula::Eq(a, b) => Compiled::Eq(self.term(a), self.term(b)),
            Formula::Not(a) => Compiled::Not(Box::new(self.formula(a, depth))),
            Formula::And(xs) => Compiled::And(xs.iter().map(|x| self.formula(x, depth)).collect()),
            Formula::Or(xs) => Compiled::Or(xs.iter().map(|x| self.formula(x, depth)).collect()),
            Formula::Implies(a, b) => Compiled::Implies(
                Box::new(self.formula(a, depth)),
                Box::new(self.formula(b, depth)),
            ),
            Formula::Iff(a, b) => Compiled::Iff(
                Box::new(self.formula(a, depth)),
                Box::new(self.formula(b, depth)),
            ),
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                self.scope.push((v.clone(), depth));
                let body = Box::new(self.formula(body, depth + 1));
                self.scope.pop();
                match f {
                    Formula::ForAll(..) => Compiled::ForAll(depth, body),
                    _ => Compiled::Exists(depth, body),
                }
            }
        }
    }
}

fn max_depth(f: &Formula) -> usize {
    match f {
        Formula::Eq(..) => 0,
        Formula::Not(a) => max_depth(a),
        Formula::And(xs) | Formula::Or(xs) => xs.iter().map(max_depth).max().unwrap_or(0),
        Formula::Implies(a, b) | Formula::Iff(a, b) => max_depth(a).max(max_depth(b)),
        Formula::ForAll(_, b) | Formula::Exists(_, b) => 1 + max_depth(b),
    }
}

/// A formula compiled against one group, reusable across assignments.
pub struct ModelChecker<'g> {
    group: &'g FiniteGroup,
    free: Vec<String>,
    root: Compiled,
    nodes: Vec<Node>,
    deps: Vec<Option<usize>>,
    cache: Vec<(u64, Elem)>,
    env: Vec<Elem>,
    generation: Vec<u64>,
    clock: u64,
}

impl<'g> ModelChecker<'g> {
    pub fn new(group: &'g FiniteGroup, phi: &Formula) -> ModelChecker<'g> {
        let free: Vec<String> = phi.free_vars().into_iter().collect();
        let slots = free.len() + max_depth(phi);
        let mut c = Compiler {
            scope: free.iter().cloned().zip(0..).collect(),
            ..Compiler::default()
        };
        let root = c.formula(phi, free.len());
        let n = c.nodes.len();
        ModelChecker {
            group,
            free,
            root,
            nodes: c.nodes,
            deps: c.deps,
            cache: vec![(0, 0); n],
            env: vec![0; slots],
            generation: vec![0; slots],
            clock: 0,
        }
    }

    /// Free variables in slot order.
    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    pub fn check(&mut self, assignment: &BTreeMap<String, Elem>) -> Result<bool, FologError> {
        let mut values = Vec::with_capacity(self.free.len());
        for v in &self.free {
            let value = *assignment
                .get(v)
                .ok_or_else(|| FologError::UnboundVariable(v.clone()))?;
            values.push(value);
        }
        self.check_slots(&values)
    }

    /// Evaluates with the free variables given in slot order.
    pub fn check_slots(&mut self, values: &[Elem]) -> Result<bool, FologError> {
        if values.len() != self.free.len() {
            return Err(FologError::WrongFreeVariables {
                expected: self.free.clone(),
                found: self.free[..values.len().min(self.free.len())].to_vec(),
            });
        }
        for (i, &value) in values.iter().enumerate() {
            if value >= self.group.order() {
                return Err(FologError::ElementOutOfRange {
                    var: self.free[i].clone(),
                    value,
                    order: self.group.order(),
                });
            }
            self.bind(i, value);
        }
        let root = std::mem::replace(&mut self.root, Compiled::And(Vec::new()));
        let result = self.holds(&root);
        self.root = root;
        Ok(result)
    }

    fn bind(&mut self, slot: usize, value: Elem) {
        self.clock += 1;
        self.env[slot] = value;
        self.generation[slot] = self.clock;
    }

    fn value(&mut self, id: usize) -> Elem {
        let Some(dep) = self.deps[id] else {
            return self.group.identity();
        };
        let node = self.nodes[id];
        if let Node::Slot(s) = node {
            return self.env[s];
        }
        let stamp = self.generation[dep];
        let (cached_at, cached) = self.cache[id];
        if cached_at == stamp {
            return cached;
        }
        let v = match node {
            Node::Mul(a, b) => {
                let (a, b) = (self.value(a), self.value(b));
                self.group.mul(a, b)
            }
            Node::Inv(a) => {
                let a = self.value(a);
                self.group.inv(a)
            }
            Node::Slot(_) | Node::One => unreachable!("handled above"),
        };
        self.cache[id] = (stamp, v);
        v
    }

    fn holds(&mut self, f: &Compiled) -> bool {
        match f {
            Compiled::Eq(a, b) => self.value(*a) == self.value(*b),
            Compiled::Not(a) => !self.holds(a),
            Compiled::And(xs) => xs.iter().all(|x| self.holds(x)),
            Compiled::Or(xs) => xs.iter().any(|x| self.holds(x)),
            Compiled::Implies(a, b) => !self.holds(a) || self.holds(b),
            Compiled::Iff(a, b) => self.holds(a) == self.holds(b),
            Compiled::ForAll(slot, body) => {
                (0..self.group.order()).all(|x| {
                    self.bind(*slot, x);
                    self.holds(body)
                })
            }
            Compiled::Exists(slot, body) => {
                (0..self.group.order()).any(|x| {
                    self.bind(*slot, x);
                    self.holds(body)
                })
            }
        }
    }
}

/// Truth of `phi` in `g` under `assignment`. Entries for variables that are
/// not free in `phi` are ignored.
pub fn evaluate(
    g: &FiniteGroup,
    phi: &Formula,
    assignment: &BTreeMap<String, Elem>,
) -> Result<bool, FologError> {
    ModelChecker::new(g, phi).check(assignment)
}

/// The set defined by a formula in one free variable.
pub fn defined_set(g: &FiniteGroup, phi: &Formula, var: &str) -> Result<ElementSet, FologError> {
    let mut checker = ModelChecker::new(g, phi);
    if checker.free_vars() != [var] {
        return Err(FologError::WrongFreeVariables {
            expected: vec![var.to_string()],
            found: checker.free_vars().to_vec(),
        });
    }
    let mut out = ElementSet::empty(g.order());
    for x in g.elements() {
        if checker.check_slots(&[x])? {
            out.insert(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folog::parse;
    use crate::group::FamilySpec;

    fn group(spec: &str) -> FiniteGroup {
        FamilySpec::parse(spec).unwrap().build().unwrap()
    }

    fn holds(g: &FiniteGroup, text: &str, binds: &[(&str, Elem)]) -> bool {
        let a = binds.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        evaluate(g, &parse(text).unwrap(), &a).unwrap()
    }

    #[test]
    fn inverse_existence_everywhere() {
        for spec in ["trivial", "quaternion", "symmetric:3", "cyclic:7", "heisenberg:3"] {
            assert!(holds(&group(spec), "forall x. exists y. x*y = 1", &[]), "{spec}");
        }
    }

    #[test]
    fn commutativity() {
        let s = "forall x. forall y. x*y = y*x";
        assert!(!holds(&group("symmetric:3"), s, &[]));
        assert!(holds(&group("klein"), s, &[]));
    }

    #[test]
    fn center_formula_on_quaternion() {
        let q = group("quaternion");
        let center = "forall y. x*y = y*x & !(x = 1)";
        assert!(holds(&q, center, &[("x", 1)]));
        assert!(!holds(&q, center, &[("x", 2)]));
        let set = defined_set(&q, &parse(center).unwrap(), "x").unwrap();
        assert_eq!(set.members(), vec![1]);
    }

    #[test]
    fn trivial_defined_sets() {
        let q = group("quaternion");
        assert_eq!(defined_set(&q, &parse("x = 1").unwrap(), "x").unwrap().members(), vec![0]);
        assert!(defined_set(&q, &parse("!(x = x)").unwrap(), "x").unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let q = group("quaternion");
        let f = parse("x = y").unwrap();
        assert_eq!(
            evaluate(&q, &f, &BTreeMap::from([("x".to_string(), 0)])),
            Err(FologError::UnboundVariable("y".into()))
        );
        assert!(matches!(
            defined_set(&q, &f, "x"),
            Err(FologError::WrongFreeVariables { .. })
        ));
        let a = BTreeMap::from([("x".to_string(), 0), ("y".to_string(), 8)]);
        assert!(matches!(
            evaluate(&q, &f, &a),
            Err(FologError::ElementOutOfRange { value: 8, .. })
        ));
    }

    #[test]
    fn shadowing_and_reuse() {
        let g = group("symmetric:3");
        // the inner x shadows the outer one
        assert!(holds(&g, "forall x. exists x. x = 1", &[]));
        assert!(holds(&g, "(exists y. y*y = x) | (forall y. y = y)", &[("x", 3)]));
        // slots are reused by sibling quantifiers with different names
        let f = parse("(forall a. a*a*a*a*a*a = 1) & (exists b. b != 1 & b*b = 1)").unwrap();
        let mut m = ModelChecker::new(&g, &f);
        for _ in 0..3 {
            assert!(m.check(&BTreeMap::new()).unwrap());
        }
    }

    #[test]
    fn cached_values_follow_rebinding() {
        let g = group("symmetric:3");
        let f = parse("exists y. x*y*x' = y").unwrap();
        let mut m = ModelChecker::new(&g, &f);
        for x in g.elements() {
            let brute = g.elements().any(|y| g.conjugate(x, y) == y);
            assert_eq!(m.check_slots(&[x]).unwrap(), brute);
        }
        let centralizer = parse("forall y. x*y = y*x").unwrap();
        let mut m = ModelChecker::new(&g, &centralizer);
        let answers: Vec<bool> = g.elements().map(|x| m.check_slots(&[x]).unwrap()).collect();
        assert_eq!(answers.iter().filter(|&&b| b).count(), 1);
    }
}
