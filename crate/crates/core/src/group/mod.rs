//! Finite groups stored as complete multiplication tables.
//!
//! Elements are dense indices `0..order` and the identity is always index 0.
//! Every other module in the crate talks about elements by index only; the
//! optional display names are consulted for input and output.

mod named;
mod perm;

pub use named::FamilySpec;
pub use perm::Permutation;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

/// Element index inside a [`FiniteGroup`].
pub type Elem = usize;

/// Default cap on the order of any group built by closure.
pub const DEFAULT_MAX_ORDER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    EmptyTable,
    #[error("table row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("not a Latin square: {line} {index} repeats entry {repeated}")]
    NotLatinSquare {
        line: &'static str,
        index: usize,
        repeated: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("stored inverse of {element} is wrong")]
    BadInverse { element: usize },
    #[error("group order exceeds the configured limit of {limit}")]
    SizeLimitExceeded { limit: usize },
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameter for {family}: {reason}")]
    BadParameter { family: String, reason: String },
    #[error("names table has {found} entries, expected {expected}")]
    NamesLength { found: usize, expected: usize },
    #[error("order field {declared} disagrees with table size {actual}")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("malformed group file: {0}")]
    Json(String),
}

/// A finite group given by its full Cayley table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Builds a group from a table produced by a construction that is a group
    /// by design (products, quotients, closures). Only inverses are derived.
    pub(crate) fn from_trusted_table(
        order: usize,
        table: Vec<u32>,
        names: Option<Vec<String>>,
    ) -> FiniteGroup {
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let inv = row.iter().position(|&v| v == 0).expect("row contains identity");
            inverses[a] = inv as u32;
        }
        let group = FiniteGroup {
            order,
            table,
            inverses,
            names,
        };
        debug_assert!(order > 64 || group.validate().is_ok());
        group
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_trusted_table(1, vec![0], Some(vec!["e".to_string()]))
    }

    /// Validates a square table and builds the group. If the identity is not
    /// at index 0 it is swapped there.
    pub fn from_multiplication_table(rows: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        Self::from_multiplication_table_renumbered(rows).map(|(g, _)| g)
    }

    /// Like [`FiniteGroup::from_multiplication_table`], also returning the
    /// relabelling `old index -> new index` when the identity had to move.
    pub fn from_multiplication_table_renumbered(
        rows: &[Vec<usize>],
    ) -> Result<(FiniteGroup, Option<Vec<Elem>>), GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare {
                    row: r,
                    len: row.len(),
                    expected: n,
                });
            }
            if let Some((c, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::EntryOutOfRange {
                    row: r,
                    col: c,
                    value: v,
                });
            }
        }
        check_latin(n, |r, c| rows[r][c])?;

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| rows[e][a] == a && rows[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;

        let relabel: Vec<usize> = if identity == 0 {
            (0..n).collect()
        } else {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(0, identity);
            p
        };
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel[a] * n + relabel[b]] = relabel[rows[a][b]] as u32;
            }
        }
        check_associative(n, &table)?;
        let group = FiniteGroup::from_trusted_table(n, table, None);
        let renumbering = (identity != 0).then_some(relabel);
        Ok((group, renumbering))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<FiniteGroup, GroupError> {
        if names.len() != self.order {
            return Err(GroupError::NamesLength {
                found: names.len(),
                expected: self.order,
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Closes the given permutations under composition. Elements are numbered
    /// in breadth-first discovery order with generators tried in list order.
    /// Composition is right-to-left: `(p*q)(x) = p(q(x))`.
    pub fn from_permutation_generators(
        gens: &[Permutation],
        max_order: usize,
    ) -> Result<FiniteGroup, GroupError> {
        let degree = gens.first().map_or(1, Permutation::degree);
        for (i, g) in gens.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    index: i,
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut elements = vec![Permutation::identity(degree)];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let next = elements[i].compose(g);
                if !index.contains_key(&next) {
                    if elements.len() >= max_order {
                        return Err(GroupError::SizeLimitExceeded { limit: max_order });
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                table[a * n + b] = index[&pa.compose(pb)] as u32;
            }
        }
        let names = elements.iter().map(Permutation::to_cycle_string).collect();
        Ok(FiniteGroup::from_trusted_table(n, table, Some(names)))
    }

    /// Direct product `A x B`; the element `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            let (xa, xb) = (x / nb, x % nb);
            for y in 0..n {
                let (ya, yb) = (y / nb, y % nb);
                table[x * n + y] = (a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32;
            }
        }
        let names = (0..n)
            .map(|x| format!("({},{})", a.name(x / nb), b.name(x % nb)))
            .collect();
        FiniteGroup::from_trusted_table(n, table, Some(names))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as Elem
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a] as Elem
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ab = self.mul(a, b);
        let ab_ai = self.mul(ab, self.inv(a));
        self.mul(ab_ai, self.inv(b))
    }

    /// `h x h^-1`.
    pub fn conjugate(&self, h: Elem, x: Elem) -> Elem {
        self.mul(self.mul(h, x), self.inv(h))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least `m` with `g^m = 1` for every `g`.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of `a`, falling back to its index.
    pub fn name(&self, a: Elem) -> String {
        match &self.names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    /// Resolves a display name first, then a decimal index.
    pub fn resolve(&self, token: &str) -> Option<Elem> {
        if let Some(names) = &self.names {
            if let Some(i) = names.iter().position(|n| n == token) {
                return Some(i);
            }
        }
        token.parse::<usize>().ok().filter(|&i| i < self.order)
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// SHA-256 over the order and the table, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.order as u64).to_le_bytes());
        for v in &self.table {
            hasher.update(v.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// Checks all four table invariants.
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.order;
        check_latin(n, |r, c| self.mul(r, c))?;
        if (0..n).any(|a| self.mul(0, a) != a || self.mul(a, 0) != a) {
            return Err(GroupError::NoIdentity);
        }
        if let Some(a) = (0..n).find(|&a| self.mul(a, self.inv(a)) != 0) {
            return Err(GroupError::BadInverse { element: a });
        }
        check_associative(n, &self.table)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            order: self.order,
            table: self.rows(),
            names: self.names.clone(),
        }
    }
}

/// On-disk JSON representation of a group table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

/// Result of loading a group file.
#[derive(Debug, Clone)]
pub struct LoadedGroup {
    pub group: FiniteGroup,
    /// `old index -> new index`, present when the identity was moved to 0.
    pub renumbering: Option<Vec<Elem>>,
}

impl GroupFile {
    pub fn from_json(text: &str) -> Result<GroupFile, GroupError> {
        serde_json::from_str(text).map_err(|e| GroupError::Json(e.to_string()))
    }

    pub fn load(&self) -> Result<LoadedGroup, GroupError> {
        if self.order != self.table.len() {
            return Err(GroupError::OrderMismatch {
                declared: self.order,
                actual: self.table.len(),
            });
        }
        let (mut group, renumbering) = FiniteGroup::from_multiplication_table_renumbered(&self.table)?;
        if let Some(names) = &self.names {
            let names = match &renumbering {
                Some(p) => {
                    let mut out = names.clone();
                    for (old, &new) in p.iter().enumerate() {
                        if let Some(n) = names.get(old) {
                            out[new] = n.clone();
                        }
                    }
                    out
                }
                None => names.clone(),
            };
            group = group.with_names(names)?;
        }
        Ok(LoadedGroup { group, renumbering })
    }
}

fn check_latin(n: usize, at: impl Fn(usize, usize) -> usize) -> Result<(), GroupError> {
    let mut seen = vec![usize::MAX; n];
    for r in 0..n {
        for c in 0..n {
            let v = at(r, c);
            if seen[v] == r {
                return Err(GroupError::NotLatinSquare {
                    line: "row",
                    index: r,
                    repeated: v,
                });
            }
            seen[v] = r;
        }
    }
    seen.fill(usize::MAX);
    for c in 0..n {
        for r in 0..n {
            let v = at(r, c);
            if seen[v] == c {
                return Err(GroupError::NotLatinSquare {
                    line: "column",
                    index: c,
                    repeated: v,
                });
            }
            seen[v] = c;
        }
    }
    Ok(())
}

/// Light's associativity test: `(ab)g = a(bg)` for all `a, b` and every `g`
/// in a set that generates the table under multiplication. The set of such
/// `g` is closed under products, so it suffices to check generators.
fn check_associative(n: usize, table: &[u32]) -> Result<(), GroupError> {
    let mul = |a: usize, b: usize| table[a * n + b] as usize;
    let mut covered = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    let mut gens = Vec::new();
    for start in 0..n {
        if covered[start] {
            continue;
        }
        gens.push(start);
        let mut queue = VecDeque::from([start]);
        covered[start] = true;
        members.push(start);
        while let Some(x) = queue.pop_front() {
            let snapshot = members.len();
            for i in 0..snapshot {
                let y = members[i];
                for z in [mul(x, y), mul(y, x)] {
                    if !covered[z] {
                        covered[z] = true;
                        members.push(z);
                        queue.push_back(z);
                    }
                }
            }
        }
    }
    for &g in &gens {
        for a in 0..n {
            for b in 0..n {
                if mul(mul(a, b), g) != mul(a, mul(b, g)) {
                    return Err(GroupError::NotAssociative { a, b, c: g });
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
