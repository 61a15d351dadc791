//! Greedy subset selection under an independence constraint `A ⊥ P`.
//!
//! For `MI` and `PI` the constraint reduces to per-element conditions, so the
//! ground set is filtered up front and plain greedy runs on what remains. For
//! `JI` a candidate is admissible only while `I_f(A ∪ {a}; P) ≤ ε`. Every
//! result is re-verified against the two-sided definition before it is
//! reported feasible.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::SetFn;
use crate::independence::{check_type, IndependenceType, Witness};
use crate::measures::mi_value;
use crate::sets::Subset;
use crate::value::{Tolerance, Value};

pub struct ConstraintSpec<'a, F: ?Sized> {
    /// Function measuring information shared with the private set.
    pub f: &'a F,
    pub private: Subset,
    pub kind: IndependenceType,
    /// Only used for `JI`.
    pub epsilon: Value,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub element: usize,
    pub gain: Value,
    /// `I_f(A_t; P)` after the step, when a constraint is in force.
    pub information: Option<Value>,
    /// `ε - I_f(A_t; P)`.
    pub slack: Option<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub selected: Subset,
    pub utility: Value,
    pub trace: Vec<TraceStep>,
    pub feasible: bool,
    pub check: Option<ConstraintCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    pub feasible: bool,
    /// `I_f(A; P)`.
    pub information: Value,
    pub slack: Value,
    pub witness: Option<Witness>,
}

fn ensure_constraint_kind(kind: IndependenceType) -> Result<()> {
    match kind {
        IndependenceType::JI | IndependenceType::MI | IndependenceType::PI => Ok(()),
        other => Err(Error::UnsupportedConstraint(other.to_string())),
    }
}

/// Elements outside `P` that satisfy the one-sided element condition:
/// `f(a|P) = f(a)` for `MI`, `f(a|{b}) = f(a)` for every `b ∈ P` for `PI`.
pub fn filter_ground_set<F: SetFn + ?Sized>(
    f: &F,
    private: &Subset,
    kind: IndependenceType,
    tol: Tolerance,
) -> Result<Subset> {
    let ground = f.ground();
    ground.check(private)?;
    let n = ground.len();
    let empty = ground.empty_subset();
    let keep = |a: usize| {
        let single = f.element_gain(a, &empty);
        match kind {
            IndependenceType::MI => tol.eq(&f.element_gain(a, private), &single),
            IndependenceType::PI => private
                .iter()
                .all(|b| tol.eq(&f.element_gain(a, &Subset::from_indices(n, [b])), &single)),
            _ => unreachable!(),
        }
    };
    match kind {
        IndependenceType::MI | IndependenceType::PI => Ok(Subset::from_indices(
            n,
            (0..n).filter(|&a| !private.contains(a) && keep(a)),
        )),
        other => Err(Error::UnsupportedConstraint(other.to_string())),
    }
}

/// Add the admissible candidate with the largest gain (lowest index on ties)
/// until the budget is spent, nothing is admissible, or the best gain is negative.
fn greedy<G, A>(
    g: &G,
    candidates: &Subset,
    budget: usize,
    mut admissible: A,
) -> (Subset, Vec<(usize, Value)>)
where
    G: SetFn + ?Sized,
    A: FnMut(&Subset) -> bool,
{
    let mut selected = g.ground().empty_subset();
    let mut steps = Vec::new();
    while steps.len() < budget {
        let mut best: Option<(usize, Value)> = None;
        for a in candidates.iter().filter(|&a| !selected.contains(a)) {
            let gain = g.element_gain(a, &selected);
            if best
                .as_ref()
                .is_some_and(|(_, b)| gain.partial_cmp(b) != Some(std::cmp::Ordering::Greater))
            {
                continue;
            }
            if admissible(&selected.with(a)) {
                best = Some((a, gain));
            }
        }
        match best {
            Some((a, gain)) if !gain.is_negative() => {
                selected.insert(a);
                steps.push((a, gain));
            }
            _ => break,
        }
    }
    (selected, steps)
}

pub fn greedy_maximize<G: SetFn + ?Sized>(
    g: &G,
    candidates: &Subset,
    budget: usize,
) -> Result<SelectionResult> {
    g.ground().check(candidates)?;
    let (selected, steps) = greedy(g, candidates, budget, |_| true);
    Ok(SelectionResult {
        utility: g.value(&selected),
        selected,
        trace: steps
            .into_iter()
            .map(|(element, gain)| TraceStep {
                element,
                gain,
                information: None,
                slack: None,
            })
            .collect(),
        feasible: true,
        check: None,
    })
}

/// Maximize `g(A)` subject to `|A| ≤ budget` and `A ⊥ P` under `spec.f`.
pub fn constrained_select<G, F>(
    g: &G,
    spec: &ConstraintSpec<'_, F>,
    tol: Tolerance,
) -> Result<SelectionResult>
where
    G: SetFn + ?Sized,
    F: SetFn + ?Sized,
{
    let f = spec.f;
    if g.ground() != f.ground() {
        return Err(Error::InvalidFunction(
            "utility and privacy functions are over different ground sets".into(),
        ));
    }
    f.ground().check(&spec.private)?;
    ensure_constraint_kind(spec.kind)?;
    if spec.epsilon.is_negative() {
        return Err(Error::NegativeEpsilon(spec.epsilon.to_f64()));
    }
    let p = &spec.private;
    let empty = f.ground().empty_subset();
    let epsilon = match spec.kind {
        IndependenceType::JI => spec.epsilon,
        _ => Value::ZERO,
    };
    let (selected, steps) = match spec.kind {
        IndependenceType::JI => {
            let candidates = p.complement();
            greedy(g, &candidates, spec.budget, |trial| {
                tol.le(&mi_value(f, trial, p, &empty), &epsilon)
            })
        }
        kind => {
            let candidates = filter_ground_set(f, p, kind, tol)?;
            greedy(g, &candidates, spec.budget, |_| true)
        }
    };
    let mut prefix = empty.clone();
    let trace = steps
        .into_iter()
        .map(|(element, gain)| {
            prefix.insert(element);
            let info = mi_value(f, &prefix, p, &empty);
            TraceStep {
                element,
                gain,
                information: Some(info),
                slack: Some(epsilon - info),
            }
        })
        .collect();
    let check = verify_constraint(f, &selected, p, spec.kind, epsilon, tol)?;
    Ok(SelectionResult {
        utility: g.value(&selected),
        selected,
        trace,
        feasible: check.feasible,
        check: Some(check),
    })
}

/// Check `A ⊥ P`: `I_f(A; P) ≤ ε` for `JI`, the full two-sided definition
/// for `MI` and `PI`. Element witnesses are searched from the side of `A`
/// first, so they read `f(a | P) ≠ f(a)`.
pub fn verify_constraint<F: SetFn + ?Sized>(
    f: &F,
    a: &Subset,
    private: &Subset,
    kind: IndependenceType,
    epsilon: Value,
    tol: Tolerance,
) -> Result<ConstraintCheck> {
    ensure_constraint_kind(kind)?;
    if epsilon.is_negative() {
        return Err(Error::NegativeEpsilon(epsilon.to_f64()));
    }
    let g = f.ground();
    g.check(a)?;
    g.check(private)?;
    if !a.is_disjoint(private) {
        return Err(Error::Overlap {
            shared: g.join(&a.intersection(private)),
        });
    }
    let information = mi_value(f, a, private, &g.empty_subset());
    let (feasible, witness) = match kind {
        IndependenceType::JI => (tol.le(&information, &epsilon), None),
        kind => {
            let v = check_type(f, private, a, kind, None, tol)?;
            (v.holds(), v.witness().cloned())
        }
    };
    Ok(ConstraintCheck {
        feasible,
        information,
        slack: epsilon - information,
        witness,
    })
}
