use crate::group::{Elem, FiniteGroup};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt;

use super::WitnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// One conjugate `u_slot x^sign u_slot^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub slot: usize,
    pub sign: Sign,
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.slot)?;
        seq.serialize_element(&self.sign.as_i8())?;
        seq.end()
    }
}

/// A product of conjugates of `x` and `x^-1`. The empty product is the term `1`;
/// the complexity is the number of factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct ConjugateProductTerm {
    factors: Vec<Factor>,
}

impl ConjugateProductTerm {
    pub fn one() -> ConjugateProductTerm {
        ConjugateProductTerm::default()
    }

    pub fn new(factors: Vec<Factor>) -> ConjugateProductTerm {
        ConjugateProductTerm { factors }
    }

    /// `(slot, +1/-1)` pairs.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> ConjugateProductTerm {
        ConjugateProductTerm {
            factors: pairs
                .iter()
                .map(|&(slot, s)| Factor {
                    slot,
                    sign: if s >= 0 { Sign::Pos } else { Sign::Neg },
                })
                .collect(),
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn complexity(&self) -> usize {
        self.factors.len()
    }

    /// Number of parameters needed: one past the largest slot.
    pub fn arity(&self) -> usize {
        self.factors.iter().map(|f| f.slot + 1).max().unwrap_or(0)
    }

    pub fn has_mixed_signs(&self) -> bool {
        let pos = self.factors.iter().any(|f| f.sign == Sign::Pos);
        let neg = self.factors.iter().any(|f| f.sign == Sign::Neg);
        pos && neg
    }
}

impl fmt::Display for ConjugateProductTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " . ")?;
            }
            let x = match fac.sign {
                Sign::Pos => "x",
                Sign::Neg => "x^-1",
            };
            write!(f, "u{0} {x} u{0}^-1", fac.slot)?;
        }
        Ok(())
    }
}

/// The product over factors of `p x^sign p^-1`, in order.
pub fn evaluate_term(
    g: &FiniteGroup,
    term: &ConjugateProductTerm,
    x: Elem,
    params: &[Elem],
) -> Result<Elem, WitnessError> {
    let x_inv = g.inv(x);
    let mut acc = g.identity();
    for fac in &term.factors {
        let p = *params
            .get(fac.slot)
            .ok_or(WitnessError::MissingParameter { slot: fac.slot })?;
        let base = match fac.sign {
            Sign::Pos => x,
            Sign::Neg => x_inv,
        };
        acc = g.mul(acc, g.conjugate(p, base));
    }
    Ok(acc)
}

/// A conjugate product polynomial: a term together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub term: ConjugateProductTerm,
    pub params: Vec<Elem>,
}

impl Witness {
    /// `u0 x u0^-1` with `u0 = 1`, the identity polynomial.
    pub fn identity() -> Witness {
        Witness {
            term: ConjugateProductTerm::from_pairs(&[(0, 1)]),
            params: vec![0],
        }
    }

    pub fn complexity(&self) -> usize {
        self.term.complexity()
    }

    pub fn evaluate(&self, g: &FiniteGroup, x: Elem) -> Result<Elem, WitnessError> {
        evaluate_term(g, &self.term, x, &self.params)
    }

    /// The polynomial `x -> outer(inner(x))`.
    ///
    /// Conjugation distributes over the inner product, and an inverted outer
    /// factor reverses the inner factors and flips their signs, so the result
    /// has `|outer| * |inner|` factors, each with its own parameter slot.
    pub fn then(&self, g: &FiniteGroup, outer: &Witness) -> Witness {
        let mut factors = Vec::with_capacity(self.complexity() * outer.complexity());
        let mut params = Vec::with_capacity(factors.capacity());
        for of in outer.term.factors() {
            let q = outer.params[of.slot];
            let inner: Box<dyn Iterator<Item = &Factor>> = match of.sign {
                Sign::Pos => Box::new(self.term.factors().iter()),
                Sign::Neg => Box::new(self.term.factors().iter().rev()),
            };
            for inf in inner {
                let p = self.params[inf.slot];
                factors.push(Factor {
                    slot: params.len(),
                    sign: of.sign.times(inf.sign),
                });
                params.push(g.mul(q, p));
            }
        }
        Witness {
            term: ConjugateProductTerm::new(factors),
            params,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FamilySpec;

    #[test]
    fn empty_term_is_one() {
        let q = FamilySpec::Quaternion.build().unwrap();
        let one = ConjugateProductTerm::one();
        assert_eq!(one.to_string(), "1");
        for x in q.elements() {
            assert_eq!(evaluate_term(&q, &one, x, &[]).unwrap(), 0);
        }
    }

    #[test]
    fn sample_term_from_three_slots() {
        // t(x, y0, y2, y7) = y0 x y0^-1 . y2 x^-1 y2^-1 . y7 x y7^-1
        let t = ConjugateProductTerm::from_pairs(&[(0, 1), (2, -1), (7, 1)]);
        assert_eq!(t.complexity(), 3);
        assert_eq!(t.arity(), 8);
        assert!(t.has_mixed_signs());
        assert_eq!(
            t.to_string(),
            "u0 x u0^-1 . u2 x^-1 u2^-1 . u7 x u7^-1"
        );
        let q = FamilySpec::Quaternion.build().unwrap();
        let (i, j) = (2, 4);
        let params = [j, 0, i, 0, 0, 0, 0, 0];
        // j i j^-1 . i i^-1 i^-1 . i = -i
        assert_eq!(evaluate_term(&q, &t, i, &params).unwrap(), 3);
        assert_eq!(
            evaluate_term(&q, &t, i, &[j]).unwrap_err(),
            WitnessError::MissingParameter { slot: 2 }
        );
    }

    #[test]
    fn identity_parameter_gives_x() {
        let q = FamilySpec::Quaternion.build().unwrap();
        let t = ConjugateProductTerm::from_pairs(&[(0, 1)]);
        for x in q.elements() {
            assert_eq!(evaluate_term(&q, &t, x, &[0]).unwrap(), x);
        }
    }

    #[test]
    fn serializes_as_slot_sign_pairs() {
        let t = ConjugateProductTerm::from_pairs(&[(0, 1), (1, -1)]);
        assert_eq!(serde_json::to_string(&t).unwrap(), "[[0,1],[1,-1]]");
    }

    #[test]
    fn composition_multiplies_complexity() {
        let g = FamilySpec::parse("symmetric:4").unwrap().build().unwrap();
        let inner = Witness {
            term: ConjugateProductTerm::from_pairs(&[(0, 1), (1, -1)]),
            params: vec![3, 7],
        };
        let outer = Witness {
            term: ConjugateProductTerm::from_pairs(&[(0, -1), (1, 1), (0, 1)]),
            params: vec![5, 11],
        };
        let composed = inner.then(&g, &outer);
        assert_eq!(composed.complexity(), 6);
        for x in g.elements() {
            let direct = outer.evaluate(&g, inner.evaluate(&g, x).unwrap()).unwrap();
            assert_eq!(composed.evaluate(&g, x).unwrap(), direct);
        }
        let step = Witness {
            term: ConjugateProductTerm::from_pairs(&[(0, -1), (1, 1), (2, 1)]),
            params: vec![5, 11, 2],
        };
        assert_eq!(Witness::identity().then(&g, &step), step);
    }
}
