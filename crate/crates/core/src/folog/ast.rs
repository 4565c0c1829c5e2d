use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Terms of the language of groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupTerm {
    Var(String),
    One,
    Mul(Box<GroupTerm>, Box<GroupTerm>),
    Inv(Box<GroupTerm>),
}

impl GroupTerm {
    pub fn var(name: &str) -> GroupTerm {
        GroupTerm::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: GroupTerm, b: GroupTerm) -> GroupTerm {
        GroupTerm::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: GroupTerm) -> GroupTerm {
        GroupTerm::Inv(Box::new(a))
    }

    /// `h x h^-1`.
    pub fn conjugate(h: GroupTerm, x: GroupTerm) -> GroupTerm {
        GroupTerm::mul(GroupTerm::mul(h.clone(), x), GroupTerm::inv(h))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            GroupTerm::Var(v) => {
                out.insert(v.clone());
            }
            GroupTerm::One => {}
            GroupTerm::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            GroupTerm::Inv(a) => a.collect_vars(out),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn substitute(&self, map: &HashMap<String, GroupTerm>) -> GroupTerm {
        match self {
            GroupTerm::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            GroupTerm::One => GroupTerm::One,
            GroupTerm::Mul(a, b) => GroupTerm::mul(a.substitute(map), b.substitute(map)),
            GroupTerm::Inv(a) => GroupTerm::inv(a.substitute(map)),
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, atomic: bool) -> fmt::Result {
        match self {
            GroupTerm::Var(v) => write!(f, "{v}"),
            GroupTerm::One => write!(f, "1"),
            GroupTerm::Inv(a) => {
                a.fmt_at(f, true)?;
                write!(f, "'")
            }
            GroupTerm::Mul(a, b) => {
                if atomic {
                    write!(f, "(")?;
                }
                a.fmt_at(f, false)?;
                write!(f, "*")?;
                b.fmt_at(f, true)?;
                if atomic {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for GroupTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, false)
    }
}

/// Elementary formulas. `And` and `Or` are n-ary and hold at least two
/// operands; `Implies` and `Iff` associate to the left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(GroupTerm, GroupTerm),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn eq(a: GroupTerm, b: GroupTerm) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn neq(a: GroupTerm, b: GroupTerm) -> Formula {
        Formula::not(Formula::Eq(a, b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    /// Conjunction; a single operand is returned as is and the empty
    /// conjunction is `1 = 1`.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::Eq(GroupTerm::One, GroupTerm::One),
            1 => parts.pop().expect("one part"),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; a single operand is returned as is and the empty
    /// disjunction is `1 != 1`.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::neq(GroupTerm::One, GroupTerm::One),
            1 => parts.pop().expect("one part"),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::ForAll(v.to_string(), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                for v in a.vars().into_iter().chain(b.vars()) {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(xs) | Formula::Or(xs) => {
                for x in xs {
                    x.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    fn all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(a) => a.all_vars(out),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.all_vars(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                out.insert(v.clone());
                body.all_vars(out);
            }
        }
    }

    /// Simultaneous capture-avoiding substitution of free variables.
    pub fn substitute(&self, map: &HashMap<String, GroupTerm>) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.substitute(map), b.substitute(map)),
            Formula::Not(a) => Formula::not(a.substitute(map)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.substitute(map)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.substitute(map)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(map), b.substitute(map)),
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let mut inner = map.clone();
                inner.remove(v);
                let body_free = body.free_vars();
                inner.retain(|k, _| body_free.contains(k));
                let captured = inner.values().any(|t| t.vars().contains(v));
                let (name, inner) = if captured {
                    let mut avoid = BTreeSet::new();
                    body.all_vars(&mut avoid);
                    for t in inner.values() {
                        t.collect_vars(&mut avoid);
                    }
                    let fresh = (1..)
                        .map(|i| format!("{v}_{i}"))
                        .find(|c| !avoid.contains(c))
                        .expect("unbounded supply of names");
                    let mut renamed = inner.clone();
                    renamed.insert(v.clone(), GroupTerm::Var(fresh.clone()));
                    (fresh, renamed)
                } else {
                    (v.clone(), inner)
                };
                let body = body.substitute(&inner);
                match self {
                    Formula::ForAll(..) => Formula::forall(&name, body),
                    _ => Formula::exists(&name, body),
                }
            }
        }
    }

    // Precedence levels used by the printer: quantifier 0, <-> 1, -> 2,
    // | 3, & 4, unary and atoms 5.
    fn level(&self) -> u8 {
        match self {
            Formula::ForAll(..) | Formula::Exists(..) => 0,
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(_) => 3,
            Formula::And(_) => 4,
            Formula::Not(_) | Formula::Eq(..) => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.level() < min;
        if wrap {
            write!(f, "(")?;
        }
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}")?,
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Eq(a, b) => write!(f, "{a} != {b}")?,
                other => {
                    write!(f, "!")?;
                    other.fmt_at(f, 5)?;
                }
            },
            Formula::And(xs) | Formula::Or(xs) => {
                let (op, child) = match self {
                    Formula::And(_) => (" & ", 5),
                    _ => (" | ", 4),
                };
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    x.fmt_at(f, child)?;
                }
            }
            Formula::Implies(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_at(f, 3)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " <-> ")?;
                b.fmt_at(f, 2)?;
            }
            Formula::ForAll(v, body) => {
                write!(f, "forall {v}. ")?;
                body.fmt_at(f, 0)?;
            }
            Formula::Exists(v, body) => {
                write!(f, "exists {v}. ")?;
                body.fmt_at(f, 0)?;
            }
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}
