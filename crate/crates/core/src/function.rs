//! Set-function families and brute-force property validators.

use std::collections::HashMap;
use std::sync::Arc;

use crate::entropy::JointDistribution;
use crate::error::{Error, Result};
use crate::sets::{subsets_of, GroundSet, Subset, ENUMERATION_CAP};
use crate::value::{Exactness, Tolerance, Value};

/// Functions with at most this many elements are tabulated by [`Memo`].
pub const MEMO_CAP: usize = 18;

/// A normalized set function over a ground set.
///
/// Implementors must be pure: the same subset always yields the same value.
/// `value` may assume its argument is over `ground()`; the checked entry
/// points are [`evaluate`] and [`conditional_gain`].
pub trait SetFn: Sync {
    fn ground(&self) -> &GroundSet;

    fn value(&self, s: &Subset) -> Value;

    fn value_kind(&self) -> Exactness;

    /// Whether the function is known (by construction or by exhaustive
    /// validation) to be submodular.
    fn validated_submodular(&self) -> bool;

    /// `f(A | C) = f(A ∪ C) - f(C)`.
    fn gain(&self, a: &Subset, c: &Subset) -> Value {
        self.value(&a.union(c)) - self.value(c)
    }

    /// `f({j} | C)`.
    fn element_gain(&self, j: usize, c: &Subset) -> Value {
        if c.contains(j) {
            return Value::ZERO;
        }
        self.value(&c.with(j)) - self.value(c)
    }
}

impl<F: SetFn + ?Sized> SetFn for &F {
    fn ground(&self) -> &GroundSet {
        (**self).ground()
    }
    fn value(&self, s: &Subset) -> Value {
        (**self).value(s)
    }
    fn value_kind(&self) -> Exactness {
        (**self).value_kind()
    }
    fn validated_submodular(&self) -> bool {
        (**self).validated_submodular()
    }
}

pub fn evaluate<F: SetFn + ?Sized>(f: &F, s: &Subset) -> Result<Value> {
    f.ground().check(s)?;
    Ok(f.value(s))
}

pub fn conditional_gain<F: SetFn + ?Sized>(f: &F, a: &Subset, c: &Subset) -> Result<Value> {
    f.ground().check(a)?;
    f.ground().check(c)?;
    Ok(f.gain(a, c))
}

/// Concept coverage `γ` with nonnegative concept weights; `f(A) = w(γ(A))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageMap {
    ground: GroundSet,
    concepts: GroundSet,
    gamma: Vec<Subset>,
    weights: Vec<Value>,
}

impl CoverageMap {
    /// `gamma[i]` lists the concepts covered by ground element `i`.
    pub fn new<S: AsRef<str>>(
        ground: GroundSet,
        concepts: GroundSet,
        gamma: &[Vec<S>],
        weights: Vec<Value>,
    ) -> Result<CoverageMap> {
        if gamma.len() != ground.len() {
            return Err(Error::InvalidFunction(format!(
                "gamma has {} entries for {} ground elements",
                gamma.len(),
                ground.len()
            )));
        }
        if weights.len() != concepts.len() {
            return Err(Error::InvalidFunction(format!(
                "{} weights for {} concepts",
                weights.len(),
                concepts.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidFunction(format!(
                "weight of concept `{}` is negative ({w})",
                concepts.label(i)
            )));
        }
        let gamma = gamma
            .iter()
            .map(|covered| {
                let mut s = concepts.empty_subset();
                for c in covered {
                    let idx = concepts
                        .index_of(c.as_ref())
                        .map_err(|_| Error::UnknownConcept(c.as_ref().to_string()))?;
                    s.insert(idx);
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverageMap {
            ground,
            concepts,
            gamma,
            weights,
        })
    }

    /// Coverage with unit weight on every concept.
    pub fn unweighted<S: AsRef<str>>(
        ground: GroundSet,
        concepts: GroundSet,
        gamma: &[Vec<S>],
    ) -> Result<CoverageMap> {
        let weights = vec![Value::int(1); concepts.len()];
        CoverageMap::new(ground, concepts, gamma, weights)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn concepts(&self) -> &GroundSet {
        &self.concepts
    }

    pub fn weights(&self) -> &[Value] {
        &self.weights
    }

    /// Concepts covered by a single element.
    pub fn covers(&self, element: usize) -> &Subset {
        &self.gamma[element]
    }

    /// `γ(A)`, as a subset of the concept universe.
    pub fn image(&self, a: &Subset) -> Subset {
        a.iter().fold(self.concepts.empty_subset(), |acc, i| {
            acc.union(&self.gamma[i])
        })
    }

    pub fn weight(&self, concepts: &Subset) -> Value {
        concepts.iter().map(|c| self.weights[c]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Modular { weights: Vec<Value> },
    Coverage(CoverageMap),
    TruncatedCardinality { k: usize },
    FacilityLocation { similarity: Vec<Vec<Value>> },
    Entropy(Arc<JointDistribution>),
    Tabulated { values: Vec<Value> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Modular { .. } => "modular",
            Family::Coverage(_) => "coverage",
            Family::TruncatedCardinality { .. } => "truncated_cardinality",
            Family::FacilityLocation { .. } => "facility_location",
            Family::Entropy(_) => "entropy",
            Family::Tabulated { .. } => "tabulated",
        }
    }
}

/// A concrete set function from one of the supported families.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFunction {
    ground: GroundSet,
    family: Family,
    kind: Exactness,
    validated: bool,
}

fn kind_of<'a>(values: impl IntoIterator<Item = &'a Value>) -> Exactness {
    values
        .into_iter()
        .fold(Exactness::Exact, |k, v| k.combine(v.exactness()))
}

impl SetFunction {
    /// `f(A) = Σ_{a∈A} w_a` with nonnegative weights.
    pub fn modular(ground: GroundSet, weights: Vec<Value>) -> Result<SetFunction> {
        if weights.len() != ground.len() {
            return Err(Error::InvalidFunction(format!(
                "{} weights for {} ground elements",
                weights.len(),
                ground.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidFunction(format!(
                "weight of `{}` is negative ({w})",
                ground.label(i)
            )));
        }
        Ok(SetFunction {
            kind: kind_of(&weights),
            ground,
            family: Family::Modular { weights },
            validated: true,
        })
    }

    pub fn coverage(map: CoverageMap) -> SetFunction {
        SetFunction {
            ground: map.ground.clone(),
            kind: kind_of(&map.weights),
            family: Family::Coverage(map),
            validated: true,
        }
    }

    /// Matroid rank of the uniform matroid, `f(A) = min(|A|, k)`.
    pub fn truncated_cardinality(ground: GroundSet, k: usize) -> Result<SetFunction> {
        if k == 0 {
            return Err(Error::InvalidFunction(
                "truncation level k must be at least 1".into(),
            ));
        }
        Ok(SetFunction {
            ground,
            family: Family::TruncatedCardinality { k },
            kind: Exactness::Exact,
            validated: true,
        })
    }

    /// `f(A) = Σ_{i∈Ω} max_{a∈A} s(i, a)`, with the max over ∅ taken as 0.
    pub fn facility_location(
        ground: GroundSet,
        similarity: Vec<Vec<Value>>,
    ) -> Result<SetFunction> {
        let n = ground.len();
        if similarity.len() != n || similarity.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidFunction(format!(
                "similarity must be a {n}x{n} matrix"
            )));
        }
        if similarity.iter().flatten().any(Value::is_negative) {
            return Err(Error::InvalidFunction(
                "similarities must be nonnegative".into(),
            ));
        }
        Ok(SetFunction {
            kind: kind_of(similarity.iter().flatten()),
            ground,
            family: Family::FacilityLocation { similarity },
            validated: true,
        })
    }

    /// Explicit table indexed by membership mask. Accepted even when not
    /// submodular; the submodularity flag reflects an exhaustive validation.
    pub fn tabulated(ground: GroundSet, values: Vec<Value>) -> Result<SetFunction> {
        let n = ground.len();
        if n > ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                size: n,
                cap: ENUMERATION_CAP,
            });
        }
        if values.len() != 1usize << n {
            return Err(Error::InvalidFunction(format!(
                "table has {} entries, expected 2^{n} = {}",
                values.len(),
                1usize << n
            )));
        }
        if !Tolerance::default().is_zero(&values[0]) {
            return Err(Error::InvalidFunction(format!(
                "f(∅) must be 0, got {}",
                values[0]
            )));
        }
        let mut f = SetFunction {
            kind: kind_of(&values),
            ground,
            family: Family::Tabulated { values },
            validated: false,
        };
        f.validated = validate(&f, Tolerance::default())?.submodular.is_none();
        Ok(f)
    }

    pub(crate) fn entropy(dist: Arc<JointDistribution>, validated: bool) -> SetFunction {
        SetFunction {
            ground: dist.ground().clone(),
            family: Family::Entropy(dist),
            kind: Exactness::Floating,
            validated,
        }
    }

    /// Tabulate any set function (used for files and oracles).
    pub fn tabulate<F: SetFn + ?Sized>(f: &F) -> Result<SetFunction> {
        let values = subsets_by_mask(f.ground())?
            .iter()
            .map(|s| f.value(s))
            .collect();
        SetFunction::tabulated(f.ground().clone(), values)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn coverage_map(&self) -> Option<&CoverageMap> {
        match &self.family {
            Family::Coverage(map) => Some(map),
            _ => None,
        }
    }
}

fn subsets_by_mask(ground: &GroundSet) -> Result<Vec<Subset>> {
    let n = ground.len();
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            size: n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok((0..1u64 << n).map(|m| Subset::from_mask(n, m)).collect())
}

impl SetFn for SetFunction {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn value(&self, s: &Subset) -> Value {
        match &self.family {
            Family::Modular { weights } => s.iter().map(|i| weights[i]).sum(),
            Family::Coverage(map) => map.weight(&map.image(s)),
            Family::TruncatedCardinality { k } => Value::int(s.len().min(*k) as i128),
            Family::FacilityLocation { similarity } => similarity
                .iter()
                .map(|row| s.iter().map(|a| row[a]).fold(Value::ZERO, Value::max))
                .sum(),
            Family::Entropy(dist) => Value::Float(dist.entropy_bits(s)),
            Family::Tabulated { values } => {
                values[s.mask().expect("tabulated ground sets are small") as usize]
            }
        }
    }

    fn value_kind(&self) -> Exactness {
        self.kind
    }

    fn validated_submodular(&self) -> bool {
        self.validated
    }
}

/// `g(S) = f(S | C)` for a fixed conditioning set `C`.
pub struct Conditioned<'a, F: ?Sized> {
    f: &'a F,
    given: Subset,
    base: Value,
}

impl<'a, F: SetFn + ?Sized> Conditioned<'a, F> {
    pub fn new(f: &'a F, given: Subset) -> Result<Conditioned<'a, F>> {
        f.ground().check(&given)?;
        let base = f.value(&given);
        Ok(Conditioned { f, given, base })
    }

    pub fn given(&self) -> &Subset {
        &self.given
    }
}

impl<F: SetFn + ?Sized> SetFn for Conditioned<'_, F> {
    fn ground(&self) -> &GroundSet {
        self.f.ground()
    }
    fn value(&self, s: &Subset) -> Value {
        self.f.value(&s.union(&self.given)) - self.base
    }
    fn value_kind(&self) -> Exactness {
        self.f.value_kind()
    }
    fn validated_submodular(&self) -> bool {
        self.f.validated_submodular()
    }
}

/// A precomputed table of every value of a small set function.
pub struct Memo {
    ground: GroundSet,
    table: Vec<Value>,
    kind: Exactness,
    validated: bool,
}

impl Memo {
    /// Returns `None` when the ground set exceeds [`MEMO_CAP`].
    pub fn new<F: SetFn + ?Sized>(f: &F) -> Option<Memo> {
        let n = f.ground().len();
        if n > MEMO_CAP {
            return None;
        }
        let table = (0..1u64 << n)
            .map(|m| f.value(&Subset::from_mask(n, m)))
            .collect();
        Some(Memo {
            ground: f.ground().clone(),
            table,
            kind: f.value_kind(),
            validated: f.validated_submodular(),
        })
    }
}

impl SetFn for Memo {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }
    fn value(&self, s: &Subset) -> Value {
        self.table[s.mask().expect("memo ground sets are small") as usize]
    }
    fn value_kind(&self) -> Exactness {
        self.kind
    }
    fn validated_submodular(&self) -> bool {
        self.validated
    }
}

/// `f(j | S) < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneViolation {
    pub j: usize,
    pub s: Subset,
    pub gain: Value,
}

/// `f(j | S) < f(j | T)` with `S ⊆ T`, `j ∉ T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularViolation {
    pub j: usize,
    pub s: Subset,
    pub t: Subset,
    pub gain_s: Value,
    pub gain_t: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub empty_value: Value,
    pub normalized: bool,
    pub monotone: Option<MonotoneViolation>,
    pub submodular: Option<SubmodularViolation>,
}

impl ValidationReport {
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
    pub fn is_monotone(&self) -> bool {
        self.monotone.is_none()
    }
    pub fn is_submodular(&self) -> bool {
        self.submodular.is_none()
    }
    pub fn all_hold(&self) -> bool {
        self.is_normalized() && self.is_monotone() && self.is_submodular()
    }
}

/// Exhaustively check normalization, monotonicity and diminishing returns.
///
/// Diminishing returns is checked on adjacent pairs `T = S ∪ {i}`, which
/// telescopes to every `S ⊆ T`; a failure is reported with that `T`. Witnesses
/// are the first failures in enumeration order of `S`, then `i`, then `j`.
pub fn validate<F: SetFn + ?Sized>(f: &F, tol: Tolerance) -> Result<ValidationReport> {
    let ground = f.ground();
    let n = ground.len();
    let memo;
    let f: &dyn SetFn = match Memo::new(f) {
        Some(m) => {
            memo = m;
            &memo
        }
        None => &f,
    };
    let empty = ground.empty_subset();
    let empty_value = f.value(&empty);
    let mut monotone = None;
    let mut submodular = None;
    for s in subsets_of(ground, None)? {
        if monotone.is_some() && submodular.is_some() {
            break;
        }
        let fs = f.value(&s);
        let gains: Vec<Option<Value>> = (0..n)
            .map(|j| (!s.contains(j)).then(|| f.value(&s.with(j)) - fs))
            .collect();
        if monotone.is_none() {
            if let Some((j, g)) = gains
                .iter()
                .enumerate()
                .find_map(|(j, g)| g.filter(|g| !tol.le(&Value::ZERO, g)).map(|g| (j, g)))
            {
                monotone = Some(MonotoneViolation {
                    j,
                    s: s.clone(),
                    gain: g,
                });
            }
        }
        if submodular.is_some() {
            continue;
        }
        'outer: for i in (0..n).filter(|&i| !s.contains(i)) {
            let t = s.with(i);
            let ft = f.value(&t);
            for j in (0..n).filter(|&j| !t.contains(j)) {
                let gain_s = gains[j].expect("j not in S");
                let gain_t = f.value(&t.with(j)) - ft;
                if !tol.le(&gain_t, &gain_s) {
                    submodular = Some(SubmodularViolation {
                        j,
                        s: s.clone(),
                        t,
                        gain_s,
                        gain_t,
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(ValidationReport {
        normalized: tol.is_zero(&empty_value),
        empty_value,
        monotone,
        submodular,
    })
}

/// Labels-to-value view of a tabulated function, keyed by comma-joined labels.
pub fn table_by_labels<F: SetFn + ?Sized>(f: &F) -> Result<HashMap<String, Value>> {
    Ok(subsets_by_mask(f.ground())?
        .iter()
        .map(|s| (f.ground().join(s), f.value(s)))
        .collect())
}
