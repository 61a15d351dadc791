//! Submodular information measures: (conditional) mutual information, total
//! correlation and multi-set mutual information.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::SetFn;
use crate::sets::Subset;
use crate::value::{Exactness, Value};

/// Largest set family accepted by [`multiset_mutual_information`].
pub const MAX_MULTISET: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: Value,
    pub exactness: Exactness,
    pub validated_submodular: bool,
}

impl MeasureValue {
    fn new<F: SetFn + ?Sized>(f: &F, value: Value) -> MeasureValue {
        MeasureValue {
            value,
            exactness: value.exactness(),
            validated_submodular: f.validated_submodular(),
        }
    }
}

fn check_all<F: SetFn + ?Sized>(f: &F, sets: &[&Subset]) -> Result<()> {
    sets.iter().try_for_each(|s| f.ground().check(s))
}

/// `I_f(A; B | C) = f(A|C) + f(B|C) - f(A∪B|C)`, with `C = ∅` when `given` is `None`.
pub fn mutual_information<F: SetFn + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
    given: Option<&Subset>,
) -> Result<MeasureValue> {
    check_all(f, &[a, b])?;
    let empty;
    let c = match given {
        Some(c) => {
            f.ground().check(c)?;
            c
        }
        None => {
            empty = f.ground().empty_subset();
            &empty
        }
    };
    Ok(MeasureValue::new(f, mi_value(f, a, b, c)))
}

pub(crate) fn mi_value<F: SetFn + ?Sized>(f: &F, a: &Subset, b: &Subset, c: &Subset) -> Value {
    f.gain(a, c) + f.gain(b, c) - f.gain(&a.union(b), c)
}

/// `C_f(A_1; ...; A_k) = Σ_i f(A_i) - f(∪_i A_i)`.
pub fn total_correlation<F: SetFn + ?Sized>(f: &F, sets: &[Subset]) -> Result<MeasureValue> {
    if sets.is_empty() {
        return Err(Error::EmptySetList);
    }
    check_all(f, &sets.iter().collect::<Vec<_>>())?;
    let union = sets
        .iter()
        .fold(f.ground().empty_subset(), |acc, s| acc.union(s));
    let sum: Value = sets.iter().map(|s| f.value(s)).sum();
    Ok(MeasureValue::new(f, sum - f.value(&union)))
}

/// `I_f(A_1; ...; A_k) = -Σ_{T ⊆ [k]} (-1)^{|T|} f(∪_{i∈T} A_i)`.
///
/// Terms are summed in increasing order of the index mask of `T`. Repeated
/// sets are kept as given.
pub fn multiset_mutual_information<F: SetFn + ?Sized>(
    f: &F,
    sets: &[Subset],
) -> Result<MeasureValue> {
    let k = sets.len();
    if k == 0 || k > MAX_MULTISET {
        return Err(Error::TooManySets {
            got: k,
            max: MAX_MULTISET,
        });
    }
    check_all(f, &sets.iter().collect::<Vec<_>>())?;
    let mut unions: Vec<Subset> = Vec::with_capacity(1 << k);
    unions.push(f.ground().empty_subset());
    let mut total = Value::ZERO;
    for mask in 1usize..1 << k {
        let low = mask.trailing_zeros() as usize;
        let u = unions[mask & (mask - 1)].union(&sets[low]);
        let term = f.value(&u);
        // -(-1)^{|T|}: odd subsets add, even subsets subtract
        total = if mask.count_ones() % 2 == 1 {
            total + term
        } else {
            total - term
        };
        unions.push(u);
    }
    Ok(MeasureValue::new(f, total))
}
