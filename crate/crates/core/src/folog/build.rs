use super::ast::{Formula, GroupTerm};
use super::FologError;
use crate::group::FiniteGroup;
use crate::witness::ConjugateSearch;
use std::collections::{BTreeSet, HashMap};

pub const DEFAULT_MAX_DISJUNCTS: u128 = 1_000_000;

/// `sum_{n <= cap} (2 vars)^n`, saturating.
pub fn closure_disjunct_count(vars: usize, cap: usize) -> u128 {
    let base = 2 * vars as u128;
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..=cap {
        total = total.saturating_add(power);
        power = power.saturating_mul(base);
    }
    total
}

fn param(i: usize) -> String {
    format!("u{i}")
}

/// `exists u0 ... u_{vars-1}. OR_t t(y, u) = x` over every conjugate product
/// term `t` with at most `cap` factors.
fn closure_formula(vars: usize, cap: usize, max_disjuncts: u128) -> Result<Formula, FologError> {
    let count = closure_disjunct_count(vars, cap);
    if count > max_disjuncts {
        return Err(FologError::FormulaTooLarge {
            count,
            limit: max_disjuncts,
        });
    }
    let y = GroupTerm::var("y");
    let y_inv = GroupTerm::inv(y.clone());
    // every (slot, sign) choice for one factor, `+` before `-`
    let choices: Vec<GroupTerm> = (0..vars)
        .flat_map(|i| {
            let u = GroupTerm::var(&param(i));
            [y.clone(), y_inv.clone()].map(|base| GroupTerm::conjugate(u.clone(), base))
        })
        .collect();
    let mut disjuncts = Vec::with_capacity(count as usize);
    let mut layer: Vec<GroupTerm> = vec![GroupTerm::One];
    for n in 0..=cap {
        disjuncts.extend(layer.iter().map(|t| Formula::eq(t.clone(), GroupTerm::var("x"))));
        if n == cap || choices.is_empty() {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|t| {
                choices.iter().map(move |c| match t {
                    GroupTerm::One => c.clone(),
                    _ => GroupTerm::mul(t.clone(), c.clone()),
                })
            })
            .collect();
    }
    let mut phi = Formula::or(disjuncts);
    for i in (0..vars).rev() {
        phi = Formula::exists(&param(i), phi);
    }
    Ok(phi)
}

/// The normal closure formula `Phi(x, y)` with `r` parameter variables and
/// terms of complexity at most `cap`.
pub fn build_phi(r: usize, cap: usize, max_disjuncts: u128) -> Result<Formula, FologError> {
    closure_formula(r, cap, max_disjuncts)
}

/// The normal closure formula `Psi(x, y)`; same shape as [`build_phi`].
pub fn build_psi(num_vars: usize, cap: usize, max_disjuncts: u128) -> Result<Formula, FologError> {
    closure_formula(num_vars, cap, max_disjuncts)
}

fn check_xy(f: &Formula) -> Result<(), FologError> {
    let free = f.free_vars();
    let allowed: BTreeSet<String> = ["x", "y"].map(String::from).into();
    if free.is_subset(&allowed) {
        Ok(())
    } else {
        Err(FologError::WrongFreeVariables {
            expected: allowed.into_iter().collect(),
            found: free.into_iter().collect(),
        })
    }
}

/// `exists u. u != 1 & forall z. (z != 1 -> exists x. Phi(u, x) & Psi(x, z))`.
pub fn build_si_sentence(phi: &Formula, psi: &Formula) -> Result<Formula, FologError> {
    check_xy(phi)?;
    check_xy(psi)?;
    let var = GroupTerm::var;
    let phi_ux = phi.substitute(&HashMap::from([
        ("x".to_string(), var("u")),
        ("y".to_string(), var("x")),
    ]));
    let psi_xz = psi.substitute(&HashMap::from([("y".to_string(), var("z"))]));
    let inner = Formula::exists("x", Formula::and(vec![phi_ux, psi_xz]));
    let body = Formula::forall(
        "z",
        Formula::implies(Formula::neq(var("z"), GroupTerm::One), inner),
    );
    Ok(Formula::exists(
        "u",
        Formula::and(vec![Formula::neq(var("u"), GroupTerm::One), body]),
    ))
}

/// The subdirect-irreducibility sentence with `Phi(u, x)` read as "u is a
/// product of at most `r` conjugates of `x^{+-1}`" and `Psi(x, z)` as "x is a
/// product of at most `psi_cap` conjugates of `z^{+-1}`".
pub fn evaluate_si_semantic(g: &FiniteGroup, r: usize, psi_cap: usize) -> bool {
    let n = g.order();
    let cap = r.max(psi_cap);
    // depth[c][t]: minimal complexity of t from c, if within cap
    let depth: Vec<Vec<Option<usize>>> = g
        .elements()
        .map(|c| {
            let mut s = ConjugateSearch::new(g, c);
            s.grow_to(cap);
            g.elements().map(|t| s.depth_of(t)).collect()
        })
        .collect();
    let within = |source: usize, target: usize, bound: usize| {
        depth[source][target].is_some_and(|d| d <= bound)
    };
    (1..n).any(|u| {
        (1..n).all(|z| (0..n).any(|x| within(x, u, r) && within(z, x, psi_cap)))
    })
}
