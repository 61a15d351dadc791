//! Combinatorial independence between sets with respect to a submodular function.
//!
//! Six relations are checked literally from their quantified definitions:
//!
//! | type    | condition                                                         |
//! |---------|-------------------------------------------------------------------|
//! | `JI`    | `f(A ∪ B) = f(A) + f(B)`                                          |
//! | `MI`    | `f(j \| B) = f(j)` for `j ∈ A` and `f(j \| A) = f(j)` for `j ∈ B` |
//! | `PI`    | `f(a \| b) = f(a)` and `f(b \| a) = f(b)` for `a ∈ A, b ∈ B`      |
//! | `SMI`   | `f(j \| X) = f(j)` for `j ∈ A, X ⊆ B` and symmetrically           |
//! | `ModI`  | `f(j \| X) = f(j)` for `X ⊆ A ∪ B`, `j ∈ (A ∪ B) \ X`             |
//! | `SModI` | as `ModI` but only for `X ⊆ A` or `X ⊆ B`                         |
//!
//! For a submodular function the verdicts satisfy
//! `ModI ⟹ JI ⟹ MI ⟺ SMI ⟹ PI` and `ModI ⟹ SModI ⟹ MI`; [`verify_lattice`]
//! checks this on concrete verdicts.
//!
//! Failing checks return the first counterexample in a fixed order: the
//! conditioning set `X` is enumerated outermost (subsets of `A` before
//! subsets of `B`, each by cardinality then lexicographically), and the tested
//! element `j` ascends innermost.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{Conditioned, CoverageMap, Memo, SetFn, SetFunction};
use crate::measures::{mi_value, total_correlation};
use crate::sets::{subsets_within, GroundSet, Subset, ENUMERATION_CAP};
use crate::value::{Tolerance, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IndependenceType {
    JI,
    MI,
    PI,
    SMI,
    ModI,
    SModI,
}

impl IndependenceType {
    pub const ALL: [IndependenceType; 6] = [
        IndependenceType::JI,
        IndependenceType::MI,
        IndependenceType::PI,
        IndependenceType::SMI,
        IndependenceType::ModI,
        IndependenceType::SModI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndependenceType::JI => "JI",
            IndependenceType::MI => "MI",
            IndependenceType::PI => "PI",
            IndependenceType::SMI => "SMI",
            IndependenceType::ModI => "ModI",
            IndependenceType::SModI => "SModI",
        }
    }
}

impl fmt::Display for IndependenceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndependenceType {
    type Err = Error;

    fn from_str(s: &str) -> Result<IndependenceType> {
        IndependenceType::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Format(format!("unknown independence type `{s}`")))
    }
}

/// The implications every submodular function satisfies, as `(premise, conclusion)`.
pub const IMPLICATIONS: [(IndependenceType, IndependenceType); 7] = {
    use IndependenceType::*;
    [
        (ModI, JI),
        (JI, MI),
        (MI, SMI),
        (SMI, MI),
        (SMI, PI),
        (ModI, SModI),
        (SModI, MI),
    ]
};

/// Why an independence check failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `f(A ∪ B) ≠ f(A) + f(B)`.
    Joint { union: Value, sum: Value },
    /// `f({j} | X) ≠ f({j})`.
    Element {
        j: usize,
        x: Subset,
        gain: Value,
        singleton: Value,
    },
}

impl Witness {
    /// Re-evaluate the witness on `f` (conditioned on `given`, if any) and
    /// confirm the recorded inequality.
    pub fn reproduces<F: SetFn + ?Sized>(
        &self,
        f: &F,
        a: &Subset,
        b: &Subset,
        given: Option<&Subset>,
        tol: Tolerance,
    ) -> Result<bool> {
        match given {
            Some(c) => self.reproduces_on(&Conditioned::new(f, c.clone())?, a, b, tol),
            None => self.reproduces_on(f, a, b, tol),
        }
    }

    /// One-line rendering with element labels from `ground`.
    pub fn describe(&self, ground: &GroundSet) -> String {
        match self {
            Witness::Joint { union, sum } => format!("f(A∪B)={union} vs f(A)+f(B)={sum}"),
            Witness::Element {
                j,
                x,
                gain,
                singleton,
            } => format!(
                "j={}, X={}: f({{j}}|X)={gain} vs f({{j}})={singleton}",
                ground.label(*j),
                ground.display(x)
            ),
        }
    }

    fn reproduces_on<G: SetFn + ?Sized>(
        &self,
        g: &G,
        a: &Subset,
        b: &Subset,
        tol: Tolerance,
    ) -> Result<bool> {
        Ok(match self {
            Witness::Joint { union, sum } => {
                let u = g.value(&a.union(b));
                let s = g.value(a) + g.value(b);
                tol.eq(&u, union) && tol.eq(&s, sum) && !tol.eq(&u, &s)
            }
            Witness::Element {
                j,
                x,
                gain,
                singleton,
            } => {
                let gj = g.element_gain(*j, x);
                let sj = g.value(&g.ground().empty_subset().with(*j));
                tol.eq(&gj, gain) && tol.eq(&sj, singleton) && !tol.eq(&gj, &sj)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<W = Witness> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

fn verdict_from(witness: Option<Witness>) -> Verdict {
    witness.map_or(Verdict::Holds, Verdict::Fails)
}

/// `f({j}|X) = f({j})` for every `j ∈ S₁ \ X` and every `X ⊆ S₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct MCondition {
    pub s1: Subset,
    pub s2: Subset,
}

fn ensure_disjoint<F: SetFn + ?Sized>(f: &F, a: &Subset, b: &Subset) -> Result<()> {
    if a.is_disjoint(b) {
        Ok(())
    } else {
        Err(Error::Overlap {
            shared: f.ground().join(&a.intersection(b)),
        })
    }
}

fn ensure_cap(size: usize) -> Result<()> {
    if size > ENUMERATION_CAP {
        Err(Error::EnumerationCap {
            size,
            cap: ENUMERATION_CAP,
        })
    } else {
        Ok(())
    }
}

/// Checks `f({j}|X) = f({j})` with the singleton values cached.
struct ElementTest<'a, G: ?Sized> {
    g: &'a G,
    singletons: Vec<Value>,
    tol: Tolerance,
}

impl<'a, G: SetFn + ?Sized> ElementTest<'a, G> {
    fn new(g: &'a G, tol: Tolerance) -> Self {
        let ground = g.ground();
        let empty = ground.empty_subset();
        let singletons = (0..ground.len()).map(|j| g.value(&empty.with(j))).collect();
        ElementTest { g, singletons, tol }
    }

    fn test(&self, j: usize, x: &Subset) -> Option<Witness> {
        let gain = self.g.element_gain(j, x);
        let singleton = self.singletons[j];
        (!self.tol.eq(&gain, &singleton)).then(|| Witness::Element {
            j,
            x: x.clone(),
            gain,
            singleton,
        })
    }

    /// First failure over `X ∈ contexts` (outer) and `j ∈ targets \ X` (inner).
    fn first_failure<I>(&self, contexts: I, targets: &Subset) -> Option<Witness>
    where
        I: IntoIterator<Item = Subset>,
    {
        contexts.into_iter().find_map(|x| {
            targets
                .iter()
                .filter(|&j| !x.contains(j))
                .find_map(|j| self.test(j, &x))
        })
    }

    fn m_condition(&self, s1: &Subset, s2: &Subset) -> Result<Option<Witness>> {
        Ok(self.first_failure(subsets_within(s2, None)?, s1))
    }
}

fn check_on<G: SetFn + ?Sized>(
    g: &G,
    a: &Subset,
    b: &Subset,
    t: IndependenceType,
    tol: Tolerance,
) -> Result<Verdict> {
    use IndependenceType::*;
    if t == JI {
        let union = g.value(&a.union(b));
        let sum = g.value(a) + g.value(b);
        return Ok(if tol.eq(&union, &sum) {
            Verdict::Holds
        } else {
            Verdict::Fails(Witness::Joint { union, sum })
        });
    }
    let et = ElementTest::new(g, tol);
    let n = g.ground().len();
    let singletons = |s: &Subset| {
        s.iter()
            .map(|i| Subset::from_indices(n, [i]))
            .collect::<Vec<_>>()
    };
    let witness = match t {
        JI => unreachable!(),
        MI => et
            .first_failure([a.clone()], b)
            .or_else(|| et.first_failure([b.clone()], a)),
        PI => et
            .first_failure(singletons(a), b)
            .or_else(|| et.first_failure(singletons(b), a)),
        SMI => {
            let (within_a, within_b) = (subsets_within(a, None)?, subsets_within(b, None)?);
            et.first_failure(within_a, b)
                .or_else(|| et.first_failure(within_b, a))
        }
        ModI => {
            let ab = a.union(b);
            ensure_cap(ab.len())?;
            et.m_condition(&ab, &ab)?
        }
        SModI => {
            ensure_cap(a.len().max(b.len()))?;
            let ab = a.union(b);
            match et.m_condition(&ab, a)? {
                Some(w) => Some(w),
                None => et.m_condition(&ab, b)?,
            }
        }
    };
    Ok(verdict_from(witness))
}

fn check_inputs<F: SetFn + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
    given: Option<&Subset>,
) -> Result<()> {
    let g = f.ground();
    g.check(a)?;
    g.check(b)?;
    if let Some(c) = given {
        g.check(c)?;
    }
    ensure_disjoint(f, a, b)
}

/// Check one independence type for disjoint `A`, `B`, optionally conditioned
/// on `given` (the check then runs on `g(·) = f(· | given)`).
pub fn check_type<F: SetFn + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
    t: IndependenceType,
    given: Option<&Subset>,
    tol: Tolerance,
) -> Result<Verdict> {
    check_inputs(f, a, b, given)?;
    match given {
        Some(c) => check_on(&Conditioned::new(f, c.clone())?, a, b, t, tol),
        None => check_on(f, a, b, t, tol),
    }
}

/// All six verdicts for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub a: Subset,
    pub b: Subset,
    pub given: Option<Subset>,
    pub verdicts: Vec<(IndependenceType, Verdict)>,
    pub validated_submodular: bool,
}

impl IndependenceReport {
    pub fn verdict(&self, t: IndependenceType) -> &Verdict {
        &self
            .verdicts
            .iter()
            .find(|(u, _)| *u == t)
            .expect("report covers every type")
            .1
    }

    pub fn holds(&self, t: IndependenceType) -> bool {
        self.verdict(t).holds()
    }

    /// Implications from [`IMPLICATIONS`] whose premise holds but conclusion fails.
    pub fn lattice_violations(&self) -> Vec<(IndependenceType, IndependenceType)> {
        IMPLICATIONS
            .into_iter()
            .filter(|&(p, c)| self.holds(p) && !self.holds(c))
            .collect()
    }
}

fn classify_on<G: SetFn + ?Sized>(
    g: &G,
    a: &Subset,
    b: &Subset,
    given: Option<&Subset>,
    tol: Tolerance,
) -> Result<IndependenceReport> {
    let verdicts = IndependenceType::ALL
        .into_iter()
        .map(|t| Ok((t, check_on(g, a, b, t, tol)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IndependenceReport {
        a: a.clone(),
        b: b.clone(),
        given: given.cloned(),
        verdicts,
        validated_submodular: g.validated_submodular(),
    })
}

pub fn classify<F: SetFn + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
    given: Option<&Subset>,
    tol: Tolerance,
) -> Result<IndependenceReport> {
    check_inputs(f, a, b, given)?;
    match given {
        Some(c) => classify_on(&Conditioned::new(f, c.clone())?, a, b, given, tol),
        None => classify_on(f, a, b, None, tol),
    }
}

pub fn check_m_condition<F: SetFn + ?Sized>(
    f: &F,
    m: &MCondition,
    tol: Tolerance,
) -> Result<Verdict> {
    f.ground().check(&m.s1)?;
    f.ground().check(&m.s2)?;
    ensure_cap(m.s2.len())?;
    Ok(verdict_from(
        ElementTest::new(f, tol).m_condition(&m.s1, &m.s2)?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeViolation {
    pub pair_index: usize,
    pub a: Subset,
    pub b: Subset,
    pub premise: IndependenceType,
    pub conclusion: IndependenceType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeReport {
    pub pairs_checked: usize,
    /// Number of pairs for which each type holds, in [`IndependenceType::ALL`] order.
    pub holds_counts: [usize; 6],
    pub violations: Vec<LatticeViolation>,
}

impl LatticeReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Classify every pair and collect verdict combinations that break an implication.
///
/// Pairs are classified in parallel; the report lists violations in pair order.
pub fn verify_lattice<F: SetFn + ?Sized>(
    f: &F,
    pairs: &[(Subset, Subset)],
    tol: Tolerance,
) -> Result<LatticeReport> {
    for (a, b) in pairs {
        check_inputs(f, a, b, None)?;
    }
    let memo = Memo::new(f);
    let g: &dyn SetFn = match &memo {
        Some(m) => m,
        None => &f,
    };
    let reports = pairs
        .par_iter()
        .map(|(a, b)| classify_on(g, a, b, None, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut holds_counts = [0; 6];
    let mut violations = Vec::new();
    for (i, report) in reports.iter().enumerate() {
        for (k, t) in IndependenceType::ALL.into_iter().enumerate() {
            holds_counts[k] += report.holds(t) as usize;
        }
        violations.extend(
            report
                .lattice_violations()
                .into_iter()
                .map(|(p, c)| LatticeViolation {
                    pair_index: i,
                    a: report.a.clone(),
                    b: report.b.clone(),
                    premise: p,
                    conclusion: c,
                }),
        );
    }
    Ok(LatticeReport {
        pairs_checked: pairs.len(),
        holds_counts,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataProcessingReport {
    /// `I_f(A; C | B)`.
    pub conditional_mi: Value,
    /// `I_f(A; C)`.
    pub mi_ac: Value,
    /// `I_f(A; B)`.
    pub mi_ab: Value,
    /// `I_f(C; B)`.
    pub mi_cb: Value,
    pub premise: bool,
    /// `Some` only when the premise holds.
    pub conclusion: Option<bool>,
}

impl DataProcessingReport {
    pub fn holds(&self) -> bool {
        self.conclusion.unwrap_or(true)
    }
}

/// If `A ⊥ C | B`, check `I_f(A;C) ≤ I_f(A;B)` and `I_f(A;C) ≤ I_f(C;B)`.
pub fn check_data_processing<F: SetFn + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
    c: &Subset,
    tol: Tolerance,
) -> Result<DataProcessingReport> {
    let g = f.ground();
    g.check(a)?;
    g.check(b)?;
    g.check(c)?;
    let empty = g.empty_subset();
    let conditional_mi = mi_value(f, a, c, b);
    let mi_ac = mi_value(f, a, c, &empty);
    let mi_ab = mi_value(f, a, b, &empty);
    let mi_cb = mi_value(f, c, b, &empty);
    let premise = tol.is_zero(&conditional_mi);
    let conclusion = premise.then(|| tol.le(&mi_ac, &mi_ab) && tol.le(&mi_ac, &mi_cb));
    Ok(DataProcessingReport {
        conditional_mi,
        mi_ac,
        mi_ab,
        mi_cb,
        premise,
        conclusion,
    })
}

/// `γ⁻¹(U') = { c ∈ Ω : γ(c) ∩ U' ≠ ∅ }`.
pub fn coverage_preimage(cov: &CoverageMap, concepts: &Subset) -> Result<Subset> {
    cov.concepts().check(concepts)?;
    let n = cov.ground().len();
    Ok(Subset::from_indices(
        n,
        (0..n).filter(|&i| !cov.covers(i).is_disjoint(concepts)),
    ))
}

/// Concept subset from labels, reporting unknown concepts as such.
pub fn concept_subset<S: AsRef<str>>(cov: &CoverageMap, labels: &[S]) -> Result<Subset> {
    let mut s = cov.concepts().empty_subset();
    for label in labels {
        let label = label.as_ref().trim();
        let i = cov
            .concepts()
            .index_of(label)
            .map_err(|_| Error::UnknownConcept(label.to_string()))?;
        s.insert(i);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovReport {
    pub preimage: Subset,
    /// `I_f(A; γ⁻¹(B_U) | B)`.
    pub measure: Value,
    pub is_zero: bool,
}

/// Measure `I_f(A; γ⁻¹(B_U) | B)` for `B_U ⊆ γ(B)` under the coverage function.
/// The result is reported, not asserted: it is not zero on every instance.
pub fn check_markov_chain(
    cov: &CoverageMap,
    a: &Subset,
    b: &Subset,
    b_u: &Subset,
    tol: Tolerance,
) -> Result<MarkovReport> {
    cov.ground().check(a)?;
    cov.ground().check(b)?;
    cov.concepts().check(b_u)?;
    let uncovered = b_u.difference(&cov.image(b));
    if !uncovered.is_empty() {
        return Err(Error::ConceptsNotCovered(cov.concepts().join(&uncovered)));
    }
    let f = SetFunction::coverage(cov.clone());
    let preimage = coverage_preimage(cov, b_u)?;
    let measure = mi_value(&f, a, &preimage, b);
    Ok(MarkovReport {
        preimage,
        is_zero: tol.is_zero(&measure),
        measure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MultisetMode {
    Mutual,
    Pairwise,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MultisetWitness {
    /// `C_f(A_1; ...; A_k) ≠ 0`.
    TotalCorrelation(Value),
    /// `I_f(A_i; A_j) ≠ 0`.
    Pair { i: usize, j: usize, mi: Value },
}

/// Mutual (`C_f = 0`) or pairwise (every pair `JI`) independence of disjoint sets.
pub fn check_multiset<F: SetFn + ?Sized>(
    f: &F,
    sets: &[Subset],
    mode: MultisetMode,
    tol: Tolerance,
) -> Result<Verdict<MultisetWitness>> {
    if sets.is_empty() {
        return Err(Error::EmptySetList);
    }
    for s in sets {
        f.ground().check(s)?;
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            ensure_disjoint(f, &sets[i], &sets[j])?;
        }
    }
    let empty = f.ground().empty_subset();
    Ok(match mode {
        MultisetMode::Mutual => {
            let c = total_correlation(f, sets)?.value;
            if tol.is_zero(&c) {
                Verdict::Holds
            } else {
                Verdict::Fails(MultisetWitness::TotalCorrelation(c))
            }
        }
        MultisetMode::Pairwise => (0..sets.len())
            .flat_map(|i| (i + 1..sets.len()).map(move |j| (i, j)))
            .find_map(|(i, j)| {
                let mi = mi_value(f, &sets[i], &sets[j], &empty);
                (!tol.is_zero(&mi)).then_some(MultisetWitness::Pair { i, j, mi })
            })
            .map_or(Verdict::Holds, Verdict::Fails),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointCheck {
    pub mi: Value,
    pub independent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnionReport {
    pub a_b: JointCheck,
    pub a_c: JointCheck,
    pub a_bc: JointCheck,
}

/// Joint independence of `A` from `B`, from `C` and from `B ∪ C`.
pub fn check_union_nonclosure<F: SetFn + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
    c: &Subset,
    tol: Tolerance,
) -> Result<UnionReport> {
    let g = f.ground();
    g.check(a)?;
    g.check(b)?;
    g.check(c)?;
    let empty = g.empty_subset();
    let joint = |x: &Subset| {
        let mi = mi_value(f, a, x, &empty);
        JointCheck {
            mi,
            independent: tol.is_zero(&mi),
        }
    };
    Ok(UnionReport {
        a_b: joint(b),
        a_c: joint(c),
        a_bc: joint(&b.union(c)),
    })
}
