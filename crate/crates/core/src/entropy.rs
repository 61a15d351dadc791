//! Discrete joint distributions and Shannon entropy as a set function.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::{validate, SetFunction};
use crate::sets::{GroundSet, Subset, ENUMERATION_CAP};
use crate::value::{Rational, Tolerance, Value};

/// Distributions with at most this many variables are validated on
/// conversion to an entropy function.
const VALIDATE_ON_BUILD: usize = 10;

/// A probability mass function over full assignments of `k` discrete variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    variables: GroundSet,
    arities: Vec<usize>,
    pmf: Vec<(Vec<usize>, Rational)>,
}

impl JointDistribution {
    pub fn new(
        variables: GroundSet,
        arities: Vec<usize>,
        pmf: Vec<(Vec<usize>, Rational)>,
    ) -> Result<JointDistribution> {
        let invalid = |msg: String| Err(Error::InvalidDistribution(msg));
        if arities.len() != variables.len() {
            return invalid(format!(
                "{} arities for {} variables",
                arities.len(),
                variables.len()
            ));
        }
        if let Some(i) = arities.iter().position(|&a| a == 0) {
            return invalid(format!("variable `{}` has arity 0", variables.label(i)));
        }
        let mut seen = std::collections::HashSet::new();
        let mut total = Value::ZERO;
        for (row, (x, p)) in pmf.iter().enumerate() {
            if x.len() != arities.len() {
                return invalid(format!(
                    "pmf entry {row}: assignment has {} values, expected {}",
                    x.len(),
                    arities.len()
                ));
            }
            if let Some(i) = (0..x.len()).find(|&i| x[i] >= arities[i]) {
                return invalid(format!(
                    "pmf entry {row}: value {} of `{}` exceeds arity {}",
                    x[i],
                    variables.label(i),
                    arities[i]
                ));
            }
            if *p < Rational::from_integer(0) || *p > Rational::from_integer(1) {
                return invalid(format!("pmf entry {row}: probability {p} outside [0, 1]"));
            }
            if !seen.insert(x.clone()) {
                return invalid(format!("pmf entry {row}: duplicate assignment {x:?}"));
            }
            total = total + Value::Exact(*p);
        }
        if (total.to_f64() - 1.0).abs() > 1e-12 {
            return invalid(format!("probabilities sum to {total}, not 1"));
        }
        Ok(JointDistribution {
            variables,
            arities,
            pmf,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.variables
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn pmf(&self) -> &[(Vec<usize>, Rational)] {
        &self.pmf
    }

    /// Marginal over the variables in `s`, keyed by their values in index order.
    pub fn marginal(&self, s: &Subset) -> BTreeMap<Vec<usize>, Value> {
        let vars = s.to_vec();
        let mut out: BTreeMap<Vec<usize>, Value> = BTreeMap::new();
        for (x, p) in &self.pmf {
            if *p == Rational::from_integer(0) {
                continue;
            }
            let key: Vec<usize> = vars.iter().map(|&v| x[v]).collect();
            let slot = out.entry(key).or_insert(Value::ZERO);
            *slot = *slot + Value::Exact(*p);
        }
        out
    }

    /// `H(X_S)` in bits with `0 log 0 = 0`.
    pub fn entropy_bits(&self, s: &Subset) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        -self
            .marginal(s)
            .values()
            .map(Value::to_f64)
            .filter(|&p| p > 0.0)
            .map(|p| p * p.log2())
            .sum::<f64>()
    }
}

pub fn entropy(dist: &JointDistribution, a: &Subset) -> Result<f64> {
    dist.ground().check(a)?;
    Ok(dist.entropy_bits(a))
}

/// Wrap a distribution as the set function `A ↦ H(X_A)`.
pub fn make_entropy_function(dist: JointDistribution) -> Result<SetFunction> {
    let n = dist.ground().len();
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            size: n,
            cap: ENUMERATION_CAP,
        });
    }
    let dist = Arc::new(dist);
    let f = SetFunction::entropy(dist.clone(), true);
    if n <= VALIDATE_ON_BUILD {
        let report = validate(&f, Tolerance::default())?;
        return Ok(SetFunction::entropy(dist, report.all_hold()));
    }
    Ok(f)
}

/// A point where the joint marginal differs from the product of marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationWitness {
    pub x_a: Vec<usize>,
    pub x_b: Vec<usize>,
    pub joint: f64,
    pub product: f64,
}

/// Pointwise test of `P(X_A, X_B) = P(X_A) P(X_B)`.
pub fn check_statistical_independence(
    dist: &JointDistribution,
    a: &Subset,
    b: &Subset,
    tol: Tolerance,
) -> Result<Option<FactorizationWitness>> {
    let g = dist.ground();
    g.check(a)?;
    g.check(b)?;
    if !a.is_disjoint(b) {
        return Err(Error::Overlap {
            shared: g.join(&a.intersection(b)),
        });
    }
    let union = a.union(b);
    let joint = dist.marginal(&union);
    let pa = dist.marginal(a);
    let pb = dist.marginal(b);
    let members = union.to_vec();
    let pos_a: Vec<usize> = a
        .iter()
        .map(|v| members.binary_search(&v).unwrap())
        .collect();
    let pos_b: Vec<usize> = b
        .iter()
        .map(|v| members.binary_search(&v).unwrap())
        .collect();
    for (xa, &p_a) in &pa {
        for (xb, &p_b) in &pb {
            let mut key = vec![0; members.len()];
            for (k, &pos) in pos_a.iter().enumerate() {
                key[pos] = xa[k];
            }
            for (k, &pos) in pos_b.iter().enumerate() {
                key[pos] = xb[k];
            }
            let pj = joint.get(&key).map(Value::to_f64).unwrap_or(0.0);
            let prod = p_a.to_f64() * p_b.to_f64();
            if !tol.eq(&Value::Float(pj), &Value::Float(prod)) {
                return Ok(Some(FactorizationWitness {
                    x_a: xa.clone(),
                    x_b: xb.clone(),
                    joint: pj,
                    product: prod,
                }));
            }
        }
    }
    Ok(None)
}

fn binary_vars(k: usize) -> GroundSet {
    GroundSet::new((1..=k).map(|i| format!("X{i}"))).expect("distinct labels")
}

/// The three named distributions used to separate independence types.
///
/// * `D1`: `(X1, X2)` with `P(0,0)=1/4, P(0,1)=P(1,0)=1/8, P(1,1)=1/2`,
///   independent of a fair bit `X3`.
/// * `D2`: uniform over the even-parity 4-bit strings (`X4 = X1⊕X2⊕X3`).
/// * `D3`: uniform over `{000, 011, 101, 110}` (`X3 = X1⊕X2`).
pub fn builtin_distribution(name: &str) -> Result<JointDistribution> {
    let r = Rational::new;
    match name.to_ascii_uppercase().as_str() {
        "D1" => {
            let pair = [
                ([0, 0], r(1, 4)),
                ([0, 1], r(1, 8)),
                ([1, 0], r(1, 8)),
                ([1, 1], r(1, 2)),
            ];
            let pmf = pair
                .iter()
                .flat_map(|(x, p)| (0..2).map(move |x3| (vec![x[0], x[1], x3], p * r(1, 2))))
                .collect();
            JointDistribution::new(binary_vars(3), vec![2; 3], pmf)
        }
        "D2" => {
            let pmf = (0..16usize)
                .map(|m| (0..4).map(|i| (m >> (3 - i)) & 1).collect::<Vec<_>>())
                .filter(|x| x.iter().sum::<usize>() % 2 == 0)
                .map(|x| (x, r(1, 8)))
                .collect();
            JointDistribution::new(binary_vars(4), vec![2; 4], pmf)
        }
        "D3" => {
            let pmf = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]
                .iter()
                .map(|x| (x.to_vec(), r(1, 4)))
                .collect();
            JointDistribution::new(binary_vars(3), vec![2; 3], pmf)
        }
        _ => Err(Error::UnknownDistribution(name.to_string())),
    }
}
