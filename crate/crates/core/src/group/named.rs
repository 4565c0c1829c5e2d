//! Named group families used as fixtures and CLI inputs.
//!
//! Expressions: `trivial`, `klein`, `quaternion`, `cyclic:N`, `dihedral:N`
//! (order 2N), `heisenberg:P`, `symmetric:N`, `product:(A,B)`.

use super::{FiniteGroup, GroupError, Permutation, DEFAULT_MAX_ORDER};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Trivial,
    Klein,
    Quaternion,
    Cyclic(usize),
    Dihedral(usize),
    Heisenberg(usize),
    Symmetric(usize),
    Product(Box<FamilySpec>, Box<FamilySpec>),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Trivial => write!(f, "trivial"),
            FamilySpec::Klein => write!(f, "klein"),
            FamilySpec::Quaternion => write!(f, "quaternion"),
            FamilySpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            FamilySpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            FamilySpec::Heisenberg(p) => write!(f, "heisenberg:{p}"),
            FamilySpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            FamilySpec::Product(a, b) => write!(f, "product:({a},{b})"),
        }
    }
}

impl FamilySpec {
    pub fn parse(text: &str) -> Result<FamilySpec, GroupError> {
        let text = text.trim();
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (text, None),
        };
        let number = |family: &str| -> Result<usize, GroupError> {
            let arg = arg.ok_or_else(|| GroupError::BadParameter {
                family: family.to_string(),
                reason: "missing parameter".into(),
            })?;
            arg.parse().map_err(|_| GroupError::BadParameter {
                family: family.to_string(),
                reason: format!("`{arg}` is not a positive integer"),
            })
        };
        let no_arg = |spec: FamilySpec| match arg {
            None => Ok(spec),
            Some(_) => Err(GroupError::BadParameter {
                family: head.to_string(),
                reason: "takes no parameter".into(),
            }),
        };
        match head {
            "trivial" => no_arg(FamilySpec::Trivial),
            "klein" => no_arg(FamilySpec::Klein),
            "quaternion" => no_arg(FamilySpec::Quaternion),
            "cyclic" => Ok(FamilySpec::Cyclic(number(head)?)),
            "dihedral" => Ok(FamilySpec::Dihedral(number(head)?)),
            "heisenberg" => Ok(FamilySpec::Heisenberg(number(head)?)),
            "symmetric" => Ok(FamilySpec::Symmetric(number(head)?)),
            "product" => {
                let arg = arg.unwrap_or("");
                let inner = arg
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| GroupError::BadParameter {
                        family: "product".into(),
                        reason: "expected `(A,B)`".into(),
                    })?;
                let split = top_level_comma(inner).ok_or_else(|| GroupError::BadParameter {
                    family: "product".into(),
                    reason: "expected two comma-separated factors".into(),
                })?;
                Ok(FamilySpec::Product(
                    Box::new(FamilySpec::parse(&inner[..split])?),
                    Box::new(FamilySpec::parse(&inner[split + 1..])?),
                ))
            }
            other => Err(GroupError::UnknownFamily(other.to_string())),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match *self {
            FamilySpec::Trivial => Ok(FiniteGroup::trivial()),
            FamilySpec::Klein => Ok(FiniteGroup::direct_product(&cyclic(2)?, &cyclic(2)?)),
            FamilySpec::Quaternion => Ok(quaternion()),
            FamilySpec::Cyclic(n) => cyclic(n),
            FamilySpec::Dihedral(n) => dihedral(n),
            FamilySpec::Heisenberg(p) => heisenberg(p),
            FamilySpec::Symmetric(n) => symmetric(n),
            FamilySpec::Product(ref a, ref b) => {
                let (a, b) = (a.build()?, b.build()?);
                if a.order().saturating_mul(b.order()) > DEFAULT_MAX_ORDER {
                    return Err(GroupError::SizeLimitExceeded {
                        limit: DEFAULT_MAX_ORDER,
                    });
                }
                Ok(FiniteGroup::direct_product(&a, &b))
            }
        }
    }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn bad(family: &str, reason: impl Into<String>) -> GroupError {
    GroupError::BadParameter {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn check_order(family: &str, order: usize) -> Result<(), GroupError> {
    if order > DEFAULT_MAX_ORDER {
        return Err(bad(family, format!("order {order} exceeds {DEFAULT_MAX_ORDER}")));
    }
    Ok(())
}

/// `a^i` has index `i`.
pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(bad("cyclic", "order must be positive"));
    }
    check_order("cyclic", n)?;
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as u32;
        }
    }
    let names = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        })
        .collect();
    Ok(FiniteGroup::from_trusted_table(n, table, Some(names)))
}

/// Symmetries of an `n`-gon, order `2n`. `r^i s^j` has index `j*n + i`.
pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(bad("dihedral", "n must be positive"));
    }
    check_order("dihedral", 2 * n)?;
    let order = 2 * n;
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let (i, a) = (x % n, x / n);
        for y in 0..order {
            let (k, b) = (y % n, y / n);
            let rot = if a == 0 { (i + k) % n } else { (i + n - k) % n };
            table[x * order + y] = (((a + b) % 2) * n + rot) as u32;
        }
    }
    let names = (0..order)
        .map(|x| {
            let (i, s) = (x % n, x / n == 1);
            let r = match i {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{i}"),
            };
            match (r.is_empty(), s) {
                (true, false) => "e".to_string(),
                (false, false) => r,
                (_, true) => format!("{r}s"),
            }
        })
        .collect();
    Ok(FiniteGroup::from_trusted_table(order, table, Some(names)))
}

/// Q8 with elements ordered `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion() -> FiniteGroup {
    // unit index: 0 = 1, 1 = i, 2 = j, 3 = k; element = 2 * unit + sign
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mut table = vec![0u32; 64];
    for x in 0..8 {
        for y in 0..8 {
            let (u, neg) = UNIT[x / 2][y / 2];
            let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
            table[x * 8 + y] = (2 * u + sign as usize) as u32;
        }
    }
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_trusted_table(8, table, Some(names))
}

/// Upper unitriangular 3x3 matrices over Z/p:
///
/// ```text
/// [1 a c]
/// [0 1 b]
/// [0 0 1]
/// ```
///
/// The upper entries are read row-major as `(a, c, b)` and the element index
/// is `a*p^2 + c*p + b`.
pub fn heisenberg(p: usize) -> Result<FiniteGroup, GroupError> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(bad("heisenberg", format!("{p} is not prime")));
    }
    let order = p.checked_pow(3).filter(|&o| o <= DEFAULT_MAX_ORDER);
    let order = order.ok_or_else(|| bad("heisenberg", "order too large"))?;
    let decode = |x: usize| (x / (p * p), (x / p) % p, x % p);
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let (a, c, b) = decode(x);
        for y in 0..order {
            let (a2, c2, b2) = decode(y);
            let na = (a + a2) % p;
            let nc = (c + c2 + a * b2) % p;
            let nb = (b + b2) % p;
            table[x * order + y] = (na * p * p + nc * p + nb) as u32;
        }
    }
    let names = (0..order)
        .map(|x| {
            let (a, c, b) = decode(x);
            format!("[{a},{c},{b}]")
        })
        .collect();
    Ok(FiniteGroup::from_trusted_table(order, table, Some(names)))
}

/// Generated by `(1 2)` and `(1 2 ... n)`.
pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(bad("symmetric", "degree must be positive"));
    }
    if n == 1 {
        return Ok(FiniteGroup::trivial());
    }
    let factorial = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
    if factorial.is_none_or(|f| f > DEFAULT_MAX_ORDER) {
        return Err(bad("symmetric", format!("{n}! exceeds {DEFAULT_MAX_ORDER}")));
    }
    let all: Vec<usize> = (0..n).collect();
    let gens = [Permutation::cycle(n, &[0, 1])?, Permutation::cycle(n, &all)?];
    FiniteGroup::from_permutation_generators(&gens, DEFAULT_MAX_ORDER)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> FiniteGroup {
        FamilySpec::parse(s).unwrap().build().unwrap()
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in [
            "trivial",
            "klein",
            "quaternion",
            "cyclic:6",
            "dihedral:4",
            "heisenberg:3",
            "symmetric:3",
            "product:(quaternion,cyclic:3)",
            "product:(product:(cyclic:2,cyclic:2),klein)",
        ] {
            assert_eq!(FamilySpec::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(FamilySpec::parse("octonion"), Err(GroupError::UnknownFamily(_))));
        assert!(matches!(FamilySpec::parse("cyclic"), Err(GroupError::BadParameter { .. })));
        assert!(matches!(FamilySpec::parse("cyclic:x"), Err(GroupError::BadParameter { .. })));
        assert!(matches!(
            FamilySpec::parse("heisenberg:4").unwrap().build(),
            Err(GroupError::BadParameter { .. })
        ));
        assert!(matches!(FamilySpec::parse("product:(cyclic:2)"), Err(GroupError::BadParameter { .. })));
    }

    #[test]
    fn orders_and_exponents() {
        let cases = [
            ("cyclic:1", 1, 1),
            ("cyclic:6", 6, 6),
            ("quaternion", 8, 4),
            ("heisenberg:3", 27, 3),
            ("heisenberg:2", 8, 4),
            ("dihedral:4", 8, 4),
            ("dihedral:1", 2, 2),
            ("symmetric:3", 6, 6),
            ("symmetric:4", 24, 12),
            ("klein", 4, 2),
            ("product:(quaternion,cyclic:3)", 24, 12),
        ];
        for (s, order, exp) in cases {
            let g = build(s);
            g.validate().unwrap();
            assert_eq!((g.order(), g.exponent()), (order, exp), "{s}");
        }
    }

    /// Brute-force exponent oracle: smallest m with g^m = 1 for all g.
    fn brute_exponent(g: &FiniteGroup) -> usize {
        (1..=g.order())
            .find(|&m| g.elements().all(|x| g.pow(x, m as u64) == 0))
            .unwrap()
    }

    #[test]
    fn exponent_matches_brute_force() {
        for s in ["quaternion", "heisenberg:3", "dihedral:6", "symmetric:4"] {
            let g = build(s);
            assert_eq!(g.exponent(), brute_exponent(&g), "{s}");
        }
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion();
        let (minus_one, i, minus_i, j) = (1, 2, 3, 4);
        assert_eq!(q.commutator(j, i), minus_one);
        assert_eq!(q.conjugate(j, i), minus_i);
        assert_eq!(q.mul(i, j), q.resolve("k").unwrap());
        assert_eq!(q.mul(j, i), q.resolve("-k").unwrap());
        assert_eq!(q.mul(i, i), minus_one);
    }

    #[test]
    fn abelian_commutators_vanish() {
        let g = build("product:(cyclic:4,cyclic:6)");
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(g.commutator(a, b), 0);
                assert_eq!(g.conjugate(a, b), b);
            }
            assert_eq!(g.commutator(a, a), 0);
        }
    }

    #[test]
    fn element_names() {
        let d = build("dihedral:4");
        assert_eq!(d.name(0), "e");
        assert_eq!(d.name(2), "r^2");
        assert_eq!(d.name(5), "rs");
        assert_eq!(build("cyclic:6").resolve("1"), Some(1));
        assert_eq!(quaternion().resolve("-1"), Some(1));
    }
}
