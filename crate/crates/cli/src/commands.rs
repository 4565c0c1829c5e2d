use crate::resolve::{replay_file, resolve_element, resolve_group, ProvenanceFile, ResolveError};
use crate::SampleArgs;
use monolith::construct::{sample_variety_members, ConstructError, SampleLimits, VarietyMember};
use monolith::folog::{
    build_phi, build_psi, build_si_sentence, evaluate_si_semantic, parse, FologError, ModelChecker,
};
use monolith::lattice::{atoms_of, covering_pairs, LatticeError};
use monolith::witness::{atom_bound_check, descend_with, DescentOptions, WitnessError};
use monolith::{Analysis, ElementSet, FiniteGroup};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Folog(#[from] FologError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("{0}")]
    Usage(String),
    #[error("writing {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn pass(json: Value, text: String) -> Outcome {
        Outcome {
            json,
            text,
            passed: true,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn names(g: &FiniteGroup, set: &ElementSet) -> Vec<String> {
    set.iter().map(|x| g.name(x)).collect()
}

fn limits(args: &SampleArgs) -> SampleLimits {
    SampleLimits {
        max_power: args.power,
        max_order: args.max_order,
        max_power_order: args.max_power_order,
        max_gens: args.max_gens,
        max_members: args.max_members,
    }
}

pub fn analyze(spec: &str) -> Result<Outcome, CliError> {
    let g = resolve_group(spec)?;
    let a = Analysis::new(&g);
    let report = a.report()?;
    let monolith = a.monolith()?;
    let mut value = to_value(&report);
    value["group"] = json!(spec);
    value["hash"] = json!(g.content_hash());
    value["monolith"] = json!(monolith.as_ref().map(|m| names(&g, m)));
    let mut text = String::new();
    let _ = writeln!(text, "group {spec} (order {}, exponent {})", report.order, report.exponent);
    let _ = writeln!(text, "subdirectly irreducible: {}", report.subdirectly_irreducible);
    if let Some(m) = &monolith {
        let _ = writeln!(text, "monolith: {{{}}} (size {})", names(&g, m).join(", "), m.len());
    }
    let _ = writeln!(text, "atoms: sizes {:?}", report.atom_sizes);
    match report.nilpotency_class {
        Some(k) => {
            let _ = writeln!(text, "nilpotent of class {k}; upper central series {:?}", report.upper_central_series);
        }
        None => {
            let _ = writeln!(text, "not nilpotent; upper central series {:?}", report.upper_central_series);
        }
    }
    let _ = writeln!(text, "center size {}", report.center_size);
    let _ = writeln!(text, "normal subgroups: {}", report.normal_subgroup_count);
    let _ = write!(text, "chief factor sizes: {:?}", report.chief_factor_sizes);
    Ok(Outcome::pass(value, text))
}

pub fn lattice(spec: &str) -> Result<Outcome, CliError> {
    let g = resolve_group(spec)?;
    let a = Analysis::new(&g);
    let normals = a.normal_subgroups()?;
    let atoms = atoms_of(normals);
    let atom_index: Vec<usize> = atoms
        .iter()
        .map(|at| normals.iter().position(|n| n == at).expect("atoms are listed"))
        .collect();
    let covers = covering_pairs(normals);
    let subgroups: Vec<Value> = normals
        .iter()
        .enumerate()
        .map(|(i, n)| json!({"index": i, "size": n.len(), "members": n, "names": names(&g, n)}))
        .collect();
    let monolith = (atom_index.len() == 1).then(|| atom_index[0]);
    let value = json!({
        "group": spec,
        "order": g.order(),
        "normal_subgroups": subgroups,
        "atoms": atom_index,
        "monolith": monolith,
        "covers": covers,
    });
    let mut text = format!("normal subgroups of {spec} (order {}):", g.order());
    for (i, n) in normals.iter().enumerate() {
        let _ = write!(text, "\n  N{i} size {:>4}  {{{}}}", n.len(), names(&g, n).join(", "));
    }
    let _ = write!(text, "\natoms: {atom_index:?}\ncovers (lower, upper): {covers:?}");
    Ok(Outcome::pass(value, text))
}

pub fn witness(spec: &str, element: &str, cap: Option<usize>) -> Result<Outcome, CliError> {
    let g = resolve_group(spec)?;
    let a = resolve_element(&g, element)?;
    let analysis = Analysis::new(&g);
    match descend_with(&analysis, a, DescentOptions { step_cap: cap }) {
        Ok(chain) => {
            let passed = chain.steps_within_exponent && chain.total_within_bound;
            let mut value = to_value(&chain);
            value["group"] = json!(spec);
            value["start_name"] = json!(g.name(chain.start));
            value["final_name"] = json!(g.name(chain.final_element));
            value["passed"] = json!(passed);
            let mut text = format!("descent in {spec} from {}", g.name(chain.start));
            for s in &chain.steps {
                let _ = write!(
                    text,
                    "\n  {} -> {}  complexity {} ({:?}), target level {}",
                    g.name(s.source),
                    g.name(s.target),
                    s.complexity,
                    s.signs,
                    s.level
                );
            }
            let _ = write!(
                text,
                "\nfinal {} in the monolith; total complexity {} vs bound m^k = {}^{} = {}: {}",
                g.name(chain.final_element),
                chain.total_complexity,
                chain.exponent,
                chain.class,
                chain.bound,
                if passed { "PASS" } else { "FAIL" }
            );
            Ok(Outcome {
                json: value,
                text,
                passed,
            })
        }
        Err(WitnessError::BoundViolation(v)) => Ok(Outcome {
            text: format!("bound violation: {v}"),
            json: json!({"group": spec, "violation": v}),
            passed: false,
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn eval(spec: &str, formula: &str, free: Option<&str>, binds: &[String]) -> Result<Outcome, CliError> {
    let g = resolve_group(spec)?;
    let phi = parse(formula).map_err(FologError::from)?;
    let mut assignment = BTreeMap::new();
    for b in binds {
        let (var, token) = b
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("binding `{b}` is not of the form var=element")))?;
        assignment.insert(var.trim().to_string(), resolve_element(&g, token.trim())?);
    }
    let mut checker = ModelChecker::new(&g, &phi);
    let printed = phi.to_string();
    let Some(var) = free else {
        let result = checker.check(&assignment)?;
        let value = json!({"group": spec, "formula": printed, "result": result});
        return Ok(Outcome::pass(value, format!("{printed}\n{result}")));
    };
    if !checker.free_vars().iter().any(|v| v == var) {
        return Err(FologError::WrongFreeVariables {
            expected: vec![var.to_string()],
            found: checker.free_vars().to_vec(),
        }
        .into());
    }
    let mut set = ElementSet::empty(g.order());
    for x in g.elements() {
        assignment.insert(var.to_string(), x);
        if checker.check(&assignment)? {
            set.insert(x);
        }
    }
    let value = json!({
        "group": spec,
        "formula": printed,
        "free": var,
        "defined_set": set,
        "names": names(&g, &set),
    });
    let text = format!("{printed}\n{var} in {{{}}}", names(&g, &set).join(", "));
    Ok(Outcome::pass(value, text))
}

/// Sample plus the parameters `m`, `k` and `r` shared by `axioms` and
/// `bounds`.
struct VarietySample {
    members: Vec<VarietyMember>,
    exponent: usize,
    class: usize,
    bound: u64,
    r: usize,
}

fn variety_sample(spec: &str, g: &FiniteGroup, args: &SampleArgs) -> Result<VarietySample, CliError> {
    let a = Analysis::new(g);
    let class = a.nilpotency_class().ok_or(WitnessError::NotNilpotent)?;
    let exponent = a.exponent();
    let members = sample_variety_members(g, spec, &limits(args))?;
    let r = members
        .iter()
        .flat_map(|m| m.fingerprint.chief_factor_sizes.iter().copied())
        .max()
        .unwrap_or(1);
    Ok(VarietySample {
        members,
        exponent,
        class,
        bound: (exponent as u64).saturating_pow(class as u32),
        r,
    })
}

#[derive(Serialize)]
struct DescentSummary {
    max_total_complexity: usize,
    max_step_complexity: usize,
    elements: usize,
    violations: Vec<Value>,
}

fn descent_summary(g: &FiniteGroup) -> Result<DescentSummary, CliError> {
    let analysis = Analysis::new(g);
    let mut out = DescentSummary {
        max_total_complexity: 0,
        max_step_complexity: 0,
        elements: 0,
        violations: Vec::new(),
    };
    for a in g.elements().skip(1) {
        out.elements += 1;
        match descend_with(&analysis, a, DescentOptions::default()) {
            Ok(chain) => {
                out.max_total_complexity = out.max_total_complexity.max(chain.total_complexity);
                let step_max = chain.step_complexities.iter().copied().max().unwrap_or(0);
                out.max_step_complexity = out.max_step_complexity.max(step_max);
                if !(chain.steps_within_exponent && chain.total_within_bound) {
                    out.violations.push(json!({"start": a, "chain": chain}));
                }
            }
            Err(WitnessError::BoundViolation(v)) => out.violations.push(to_value(&v)),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

pub fn axioms(
    spec: &str,
    args: &SampleArgs,
    complexity_cap: Option<usize>,
    max_disjuncts: u128,
) -> Result<Outcome, CliError> {
    let g = resolve_group(spec)?;
    let s = variety_sample(spec, &g, args)?;
    let psi_cap = complexity_cap.unwrap_or(usize::try_from(s.bound).unwrap_or(usize::MAX));
    let sentence = build_phi(s.r, s.r, max_disjuncts)
        .and_then(|phi| Ok((phi, build_psi(psi_cap, psi_cap, max_disjuncts)?)))
        .and_then(|(phi, psi)| build_si_sentence(&phi, &psi));
    let syntactic_note = match &sentence {
        Ok(_) => "evaluated".to_string(),
        Err(e) => e.to_string(),
    };
    let mut rows = Vec::new();
    let mut text = format!(
        "variety of {spec}: m = {}, k = {}, m^k = {}, r = {}, psi cap = {psi_cap}",
        s.exponent, s.class, s.bound, s.r
    );
    let (mut agreements, mut disagreements) = (0, 0);
    for (i, m) in s.members.iter().enumerate() {
        let semantic = evaluate_si_semantic(&m.group, s.r, psi_cap);
        let syntactic = match &sentence {
            Ok(theta) => Some(ModelChecker::new(&m.group, theta).check(&BTreeMap::new())?),
            Err(_) => None,
        };
        let agree = semantic == m.si && syntactic.is_none_or(|v| v == m.si);
        if agree {
            agreements += 1;
        } else {
            disagreements += 1;
        }
        let descent = if m.si {
            Some(descent_summary(&m.group)?)
        } else {
            None
        };
        let atom_max = atom_maxima(&m.group, s.r)?.into_iter().map(|(_, c)| c).max();
        let _ = write!(
            text,
            "\n  #{i:<3} order {:>4}  SI {:<5}  semantic {:<5}  {}",
            m.group.order(),
            m.si,
            semantic,
            if agree { "agree" } else { "DISAGREE" }
        );
        rows.push(json!({
            "index": i,
            "order": m.group.order(),
            "hash": m.group.content_hash(),
            "recipe": m.recipe,
            "subdirectly_irreducible": m.si,
            "semantic": semantic,
            "syntactic": syntactic,
            "agree": agree,
            "max_atom_witness_complexity": atom_max,
            "max_descent_complexity": descent.as_ref().map(|d| d.max_total_complexity),
        }));
    }
    let _ = write!(text, "\nagreements {agreements}, disagreements {disagreements}");
    let value = json!({
        "group": spec,
        "exponent": s.exponent,
        "class": s.class,
        "bound": s.bound,
        "r": s.r,
        "psi_cap": psi_cap,
        "syntactic_check": syntactic_note,
        "members": rows,
        "agreements": agreements,
        "disagreements": disagreements,
    });
    Ok(Outcome {
        json: value,
        text,
        passed: disagreements == 0,
    })
}

/// `(atom size, max witness complexity)` for each atom.
fn atom_maxima(g: &FiniteGroup, r: usize) -> Result<Vec<(usize, usize)>, CliError> {
    let atoms = Analysis::new(g).atoms()?;
    let mut out = Vec::new();
    for atom in atoms {
        let c = atom.iter().find(|&x| x != 0).expect("atoms are nontrivial");
        let report = atom_bound_check(g, c, r)?;
        out.push((report.atom_size, report.max_complexity));
    }
    Ok(out)
}

pub fn bounds(spec: &str, args: &SampleArgs) -> Result<Outcome, CliError> {
    let g = resolve_group(spec)?;
    let s = variety_sample(spec, &g, args)?;
    let mut rows = Vec::new();
    let mut violations = 0usize;
    let (mut atom_max, mut descent_max) = (0usize, 0usize);
    let mut text = format!(
        "bounds for the variety of {spec}: r = {}, m^k = {}^{} = {}, |G| = {}",
        s.r,
        s.exponent,
        s.class,
        s.bound,
        g.order()
    );
    for (i, m) in s.members.iter().enumerate().filter(|(_, m)| m.group.order() > 1) {
        let atoms: Vec<Value> = atom_maxima(&m.group, s.r)?
            .into_iter()
            .map(|(size, max)| {
                let ok = max <= s.r && max <= size && size <= g.order();
                if !ok {
                    violations += 1;
                }
                atom_max = atom_max.max(max);
                json!({"size": size, "max_complexity": max, "within_r": max <= s.r,
                       "within_atom_size": max <= size, "size_within_order": size <= g.order()})
            })
            .collect();
        let descent = if m.si {
            let d = descent_summary(&m.group)?;
            violations += d.violations.len();
            descent_max = descent_max.max(d.max_total_complexity);
            Some(d)
        } else {
            None
        };
        let _ = write!(
            text,
            "\n  #{i:<3} order {:>4}  atoms {:>2}  descent max {}",
            m.group.order(),
            atoms.len(),
            descent
                .as_ref()
                .map_or("-".to_string(), |d| d.max_total_complexity.to_string())
        );
        rows.push(json!({
            "index": i,
            "order": m.group.order(),
            "subdirectly_irreducible": m.si,
            "atoms": atoms,
            "descent": descent,
        }));
    }
    let _ = write!(
        text,
        "\nmax atom witness complexity {atom_max} (r = {}), max descent complexity {descent_max} (bound {}), violations {violations}",
        s.r, s.bound
    );
    let value = json!({
        "group": spec,
        "exponent": s.exponent,
        "class": s.class,
        "bound": s.bound,
        "r": s.r,
        "members": rows,
        "max_atom_complexity": atom_max,
        "max_descent_complexity": descent_max,
        "violations": violations,
    });
    Ok(Outcome {
        json: value,
        text,
        passed: violations == 0,
    })
}

pub fn replay(path: &str) -> Result<Outcome, CliError> {
    let (g, file) = replay_file(path)?;
    let report = Analysis::new(&g).report()?;
    let value = json!({
        "file": path,
        "hash": file.hash,
        "verified": true,
        "recipe": file.recipe,
        "analysis": report,
    });
    let text = format!(
        "replayed {path}: order {}, hash {} verified, SI {}",
        g.order(),
        file.hash,
        report.subdirectly_irreducible
    );
    Ok(Outcome::pass(value, text))
}

pub fn sample(spec: &str, args: &SampleArgs, out_dir: Option<&str>) -> Result<Outcome, CliError> {
    let g = resolve_group(spec)?;
    let members = sample_variety_members(&g, spec, &limits(args))?;
    let mut rows = Vec::new();
    let mut text = format!("{} sampled members of the variety of {spec}", members.len());
    for (i, m) in members.iter().enumerate() {
        let hash = m.group.content_hash();
        let file = out_dir.map(|dir| format!("{dir}/member-{i:03}.json"));
        if let Some(path) = &file {
            let record = ProvenanceFile {
                recipe: m.recipe.clone(),
                hash: hash.clone(),
            };
            let body = serde_json::to_string_pretty(&record).expect("records serialize");
            std::fs::create_dir_all(out_dir.expect("dir given"))
                .and_then(|()| std::fs::write(path, body))
                .map_err(|source| CliError::Write {
                    path: path.clone(),
                    source,
                })?;
        }
        let _ = write!(
            text,
            "\n  #{i:<3} order {:>4}  exponent {:>3}  class {:?}  SI {}",
            m.group.order(),
            m.fingerprint.exponent,
            m.fingerprint.nilpotency_class,
            m.si
        );
        rows.push(json!({
            "index": i,
            "order": m.group.order(),
            "hash": hash,
            "subdirectly_irreducible": m.si,
            "fingerprint": m.fingerprint,
            "recipe": m.recipe,
            "file": file,
        }));
    }
    let value = json!({"group": spec, "members": rows});
    Ok(Outcome::pass(value, text))
}
