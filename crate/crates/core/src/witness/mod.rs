//! Conjugate product polynomials as witnesses of membership conditions
//! `a ∈ c^G`, and the descent from an arbitrary element into the monolith
//! of a nilpotent subdirectly irreducible group.

mod search;
mod term;

pub use search::{minimal_witness, ConjugateSearch};
pub use term::{evaluate_term, ConjugateProductTerm, Factor, Sign, Witness};

use crate::group::{Elem, FiniteGroup};
use crate::lattice::{normal_closure, Analysis, ElementSet, LatticeError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("no parameter supplied for slot {slot}")]
    MissingParameter { slot: usize },
    #[error("the identity has no descent")]
    IdentityInput,
    #[error("group is not subdirectly irreducible")]
    NotSubdirectlyIrreducible,
    #[error("group is not nilpotent")]
    NotNilpotent,
    #[error("normal closure of {0} is not an atom")]
    NotAnAtom(Elem),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("complexity bound violated: {0}")]
    BoundViolation(Box<BoundViolation>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// No admissible target within the search cap.
    NoTargetWithinCap,
    /// The minimal step complexity exceeds the exponent.
    StepExceedsExponent,
    /// A minimal mixed-sign step has complexity other than 2.
    MixedStepNotTwo,
    /// The composed polynomial exceeds `m^k`.
    TotalExceedsBound,
}

/// Everything needed to reproduce a failed bound check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub kind: ViolationKind,
    pub group_hash: String,
    pub group_order: usize,
    pub start: Elem,
    pub source: Elem,
    pub level: usize,
    pub exponent: usize,
    pub search_cap: usize,
    pub found_complexity: Option<usize>,
    pub witness: Option<Witness>,
}

impl std::fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:?} at level {} from element {} (start {}, m = {}, found {:?}) in group {}",
            self.kind,
            self.level,
            self.source,
            self.start,
            self.exponent,
            self.found_complexity,
            self.group_hash
        )
    }
}

/// Sign pattern of a step's polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignPattern {
    Positive,
    Negative,
    Mixed,
}

impl SignPattern {
    fn of(term: &ConjugateProductTerm) -> SignPattern {
        if term.has_mixed_signs() {
            SignPattern::Mixed
        } else if term.factors().iter().all(|f| f.sign == Sign::Pos) {
            SignPattern::Positive
        } else {
            SignPattern::Negative
        }
    }
}

/// One step `a_{i+1} -> a_i` of the descent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessStep {
    /// Target level `i`: the target lies in `Z_i`, or in the monolith when 0.
    pub level: usize,
    /// Least level actually containing the target (0 = monolith).
    pub reached_level: usize,
    pub source: Elem,
    pub target: Elem,
    pub witness: Witness,
    pub complexity: usize,
    pub signs: SignPattern,
    /// Whether a single-sign polynomial of the same complexity also reaches
    /// the target.
    pub same_sign_alternative: bool,
}

/// The full descent record from `start` into the monolith.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessChain {
    pub start: Elem,
    pub steps: Vec<WitnessStep>,
    #[serde(rename = "final")]
    pub final_element: Elem,
    pub composed: Witness,
    pub step_complexities: Vec<usize>,
    pub total_complexity: usize,
    /// Exponent `m` of the group.
    pub exponent: usize,
    /// Nilpotency class `k`.
    pub class: usize,
    /// `m^k`, saturating.
    pub bound: u64,
    pub monolith: ElementSet,
    /// Minimal complexity of a direct polynomial from `start` to some
    /// nonidentity monolith element, for comparison.
    pub direct_complexity: Option<usize>,
    pub steps_within_exponent: bool,
    pub total_within_bound: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DescentOptions {
    /// Per-step search cap; defaults to the exponent. A larger cap lets a
    /// violating step be found and reported with its witness.
    pub step_cap: Option<usize>,
}

/// Descends from `a` into the monolith of `g`.
pub fn descend(g: &FiniteGroup, a: Elem) -> Result<WitnessChain, WitnessError> {
    descend_with(&Analysis::new(g), a, DescentOptions::default())
}

/// Walks `a` down the upper central series. From a source whose least level
/// is `s`, the next element is a nonidentity member of `Z_{s-1}` (of the
/// monolith when `s = 1`) reachable by a polynomial of minimal complexity;
/// ties at that complexity go to the smallest element index.
pub fn descend_with(
    analysis: &Analysis<'_>,
    a: Elem,
    options: DescentOptions,
) -> Result<WitnessChain, WitnessError> {
    let g = analysis.group();
    if a == g.identity() {
        return Err(WitnessError::IdentityInput);
    }
    let monolith = analysis
        .monolith()?
        .ok_or(WitnessError::NotSubdirectlyIrreducible)?;
    let series = analysis.upper_central_series();
    let class = series.class.ok_or(WitnessError::NotNilpotent)?;
    let m = analysis.exponent();
    let bound = (m as u64).saturating_pow(class as u32);
    let cap = options.step_cap.unwrap_or(m).max(m);

    let level_of = |x: Elem| -> usize {
        if monolith.contains(x) {
            0
        } else {
            series.level_of(x).expect("nilpotent series covers the group")
        }
    };
    let violation = |kind, source, level, found: Option<&Witness>| {
        WitnessError::BoundViolation(Box::new(BoundViolation {
            kind,
            group_hash: g.content_hash(),
            group_order: g.order(),
            start: a,
            source,
            level,
            exponent: m,
            search_cap: cap,
            found_complexity: found.map(Witness::complexity),
            witness: found.cloned(),
        }))
    };

    let mut steps = Vec::new();
    let mut current = a;
    while level_of(current) != 0 {
        let source_level = level_of(current);
        let level = source_level - 1;
        let mut targets = if level == 0 {
            monolith.clone()
        } else {
            series.levels[level].clone()
        };
        targets.remove(g.identity());

        let mut search = ConjugateSearch::new(g, current);
        let mut found = None;
        while found.is_none() && search.explored_depth() < cap && search.grow() {
            let d = search.explored_depth();
            found = search.layer(d).iter().copied().filter(|&x| targets.contains(x)).min();
        }
        let Some(target) = found else {
            return Err(violation(ViolationKind::NoTargetWithinCap, current, level, None));
        };
        let witness = search.witness_for(target).expect("target was reached");
        let complexity = witness.complexity();
        debug_assert_eq!(witness.evaluate(g, current), Ok(target));
        if complexity > m {
            return Err(violation(
                ViolationKind::StepExceedsExponent,
                current,
                level,
                Some(&witness),
            ));
        }
        let signs = SignPattern::of(&witness.term);
        if signs == SignPattern::Mixed && complexity != 2 {
            return Err(violation(
                ViolationKind::MixedStepNotTwo,
                current,
                level,
                Some(&witness),
            ));
        }
        let same_sign_alternative = [Sign::Pos, Sign::Neg].iter().any(|&s| {
            let mut restricted = ConjugateSearch::with_signs(g, current, &[s]);
            restricted.grow_to(complexity);
            restricted.depth_of(target) == Some(complexity)
        });
        steps.push(WitnessStep {
            level,
            reached_level: level_of(target),
            source: current,
            target,
            witness,
            complexity,
            signs,
            same_sign_alternative,
        });
        current = target;
    }

    let composed = compose_chain(g, &steps);
    assert_eq!(
        composed.evaluate(g, a),
        Ok(current),
        "composed polynomial must map start to final"
    );
    let total = composed.complexity();
    if total as u64 > bound {
        return Err(violation(ViolationKind::TotalExceedsBound, a, class, Some(&composed)));
    }

    let direct_complexity = {
        let mut search = ConjugateSearch::new(g, a);
        let mut hit = None;
        while hit.is_none() && search.grow() {
            let d = search.explored_depth();
            if search.layer(d).iter().any(|&x| x != 0 && monolith.contains(x)) {
                hit = Some(d);
            }
        }
        hit
    };

    Ok(WitnessChain {
        start: a,
        step_complexities: steps.iter().map(|s| s.complexity).collect(),
        steps,
        final_element: current,
        composed,
        total_complexity: total,
        exponent: m,
        class,
        bound,
        monolith,
        direct_complexity,
        steps_within_exponent: true,
        total_within_bound: true,
    })
}

/// Composes the step polynomials in order. The empty chain composes to the
/// identity polynomial `u0 x u0^-1` with `u0 = 1`.
pub fn compose_chain(g: &FiniteGroup, steps: &[WitnessStep]) -> Witness {
    steps
        .iter()
        .fold(Witness::identity(), |acc, step| acc.then(g, &step.witness))
}

/// Per-atom record of minimal witness complexities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomBoundReport {
    pub generator: Elem,
    pub atom: ElementSet,
    pub atom_size: usize,
    pub r: usize,
    /// `(element, minimal complexity)` for every member of the atom.
    pub complexities: Vec<(Elem, usize)>,
    pub max_complexity: usize,
    pub within_r: bool,
    pub within_atom_size: bool,
}

/// Records the minimal witness complexity of every element of the atom
/// `c^G` and compares the maximum with `r`.
pub fn atom_bound_check(g: &FiniteGroup, c: Elem, r: usize) -> Result<AtomBoundReport, WitnessError> {
    let atom = normal_closure(g, &[c]);
    let is_atom = atom.len() > 1
        && atom
            .iter()
            .filter(|&b| b != 0)
            .all(|b| normal_closure(g, &[b]) == atom);
    if !is_atom {
        return Err(WitnessError::NotAnAtom(c));
    }
    let mut search = ConjugateSearch::new(g, c);
    search.saturate();
    let complexities: Vec<(Elem, usize)> = atom
        .iter()
        .map(|x| (x, search.depth_of(x).expect("closure is reachable")))
        .collect();
    let max_complexity = complexities.iter().map(|&(_, d)| d).max().unwrap_or(0);
    Ok(AtomBoundReport {
        generator: c,
        atom_size: atom.len(),
        r,
        max_complexity,
        within_r: max_complexity <= r,
        within_atom_size: max_complexity <= atom.len(),
        complexities,
        atom,
    })
}
