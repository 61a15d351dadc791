//! Instance generators and brute-force oracles shared by the integration tests.
//!
//! The oracles work on bitmasks and recompute everything from the raw
//! instance description, independently of the library's own enumeration.

#![allow(dead_code)]

use std::collections::HashMap;

use proptest::collection::vec;
use proptest::prelude::*;
use subind::entropy::JointDistribution;
use subind::function::CoverageMap;
use subind::value::Rational;
use subind::{GroundSet, IndependenceType, SetFn, SetFunction, Subset, Tolerance, Value};

#[derive(Debug, Clone)]
pub struct CoverSpec {
    pub n: usize,
    /// Concept mask covered by each element.
    pub gamma: Vec<u32>,
    pub weights: Vec<Rational>,
}

impl CoverSpec {
    pub fn build(&self) -> SetFunction {
        let ground = GroundSet::numbered(0, self.n);
        let concepts = GroundSet::new((0..self.weights.len()).map(|c| format!("c{c}"))).unwrap();
        let gamma: Vec<Vec<String>> = self
            .gamma
            .iter()
            .map(|&m| {
                (0..self.weights.len())
                    .filter(|c| m >> c & 1 == 1)
                    .map(|c| format!("c{c}"))
                    .collect()
            })
            .collect();
        let weights = self.weights.iter().map(|&w| Value::Exact(w)).collect();
        SetFunction::coverage(CoverageMap::new(ground, concepts, &gamma, weights).unwrap())
    }

    pub fn image(&self, mask: u64) -> u32 {
        (0..self.n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(0, |acc, i| acc | self.gamma[i])
    }

    pub fn weight(&self, concepts: u32) -> Rational {
        (0..self.weights.len())
            .filter(|c| concepts >> c & 1 == 1)
            .map(|c| self.weights[c])
            .sum()
    }

    pub fn value(&self, mask: u64) -> Rational {
        self.weight(self.image(mask))
    }

    /// Concepts with positive weight.
    pub fn support(&self) -> u32 {
        (0..self.weights.len())
            .filter(|&c| self.weights[c] > Rational::from_integer(0))
            .fold(0, |acc, c| acc | 1 << c)
    }
}

pub fn cover_spec(min_n: usize, max_n: usize) -> impl Strategy<Value = CoverSpec> {
    (min_n..=max_n, 1..=5usize)
        .prop_flat_map(|(n, m)| (Just(n), vec(0u32..1 << m, n), vec((0i128..5, 1i128..4), m)))
        .prop_map(|(n, gamma, weights)| CoverSpec {
            n,
            gamma,
            weights: weights
                .into_iter()
                .map(|(p, q)| Rational::new(p, q))
                .collect(),
        })
}

/// Facility location with small integer similarities.
pub fn facility(min_n: usize, max_n: usize) -> impl Strategy<Value = SetFunction> {
    (min_n..=max_n)
        .prop_flat_map(|n| vec(vec(0i128..4, n), n))
        .prop_map(|rows| {
            let n = rows.len();
            let sim = rows
                .into_iter()
                .map(|r| r.into_iter().map(Value::int).collect())
                .collect();
            SetFunction::facility_location(GroundSet::numbered(0, n), sim).unwrap()
        })
}

pub fn truncated(min_n: usize, max_n: usize) -> impl Strategy<Value = SetFunction> {
    (min_n..=max_n, 1..=4usize).prop_map(|(n, k)| {
        SetFunction::truncated_cardinality(GroundSet::numbered(0, n), k).unwrap()
    })
}

pub fn modular(min_n: usize, max_n: usize) -> impl Strategy<Value = SetFunction> {
    (min_n..=max_n)
        .prop_flat_map(|n| vec((0i128..6, 1i128..4), n))
        .prop_map(|w| {
            let n = w.len();
            let w = w.into_iter().map(|(p, q)| Value::ratio(p, q)).collect();
            SetFunction::modular(GroundSet::numbered(0, n), w).unwrap()
        })
}

/// Any exact monotone submodular family.
pub fn submodular(min_n: usize, max_n: usize) -> impl Strategy<Value = SetFunction> {
    prop_oneof![
        cover_spec(min_n, max_n).prop_map(|s| s.build()),
        facility(min_n, max_n),
        truncated(min_n, max_n),
        modular(min_n, max_n),
    ]
}

/// Random distribution over `n` binary variables. Some are built as products
/// of independent blocks so that independence actually occurs.
pub fn binary_distribution(n: usize) -> impl Strategy<Value = JointDistribution> {
    (vec(1i128..8, 1usize << n), any::<u32>()).prop_map(move |(weights, split)| {
        // bit i of `split` starts a new block at variable i
        let mut block_of = vec![0usize; n];
        for i in 1..n {
            block_of[i] = block_of[i - 1] + (split >> i & 1) as usize;
        }
        let blocks = block_of[n - 1] + 1;
        // one independent factor per block, drawn from the weights
        let factors: Vec<Vec<Rational>> = (0..blocks)
            .map(|b| {
                let vars: Vec<usize> = (0..n).filter(|&i| block_of[i] == b).collect();
                let raw: Vec<i128> = (0..1usize << vars.len())
                    .map(|x| weights[(x * 7 + b * 3) % weights.len()])
                    .collect();
                let total: i128 = raw.iter().sum();
                raw.into_iter().map(|w| Rational::new(w, total)).collect()
            })
            .collect();
        let pmf = (0..1usize << n)
            .map(|x| {
                let bits: Vec<usize> = (0..n).map(|i| x >> i & 1).collect();
                let p = (0..blocks)
                    .map(|b| {
                        let local = (0..n)
                            .filter(|&i| block_of[i] == b)
                            .enumerate()
                            .fold(0, |acc, (k, i)| acc | bits[i] << k);
                        factors[b][local]
                    })
                    .product();
                (bits, p)
            })
            .collect();
        let vars = GroundSet::new((1..=n).map(|i| format!("X{i}"))).unwrap();
        JointDistribution::new(vars, vec![2; n], pmf).unwrap()
    })
}

/// Random `(A, B)` as disjoint masks over `n` elements.
pub fn disjoint_masks(n: usize, seed: u64) -> (u64, u64) {
    let mut a = 0;
    let mut b = 0;
    let mut s = seed;
    for i in 0..n {
        match s % 3 {
            1 => a |= 1 << i,
            2 => b |= 1 << i,
            _ => {}
        }
        s /= 3;
    }
    (a, b)
}

pub fn all_disjoint_masks(n: usize) -> Vec<(u64, u64)> {
    (0..3u64.pow(n as u32))
        .map(|s| disjoint_masks(n, s))
        .collect()
}

pub fn sub(n: usize, mask: u64) -> Subset {
    Subset::from_mask(n, mask)
}

/// Brute-force value table.
pub fn table<F: SetFn + ?Sized>(f: &F) -> Vec<Value> {
    let n = f.ground().len();
    (0..1u64 << n).map(|m| f.value(&sub(n, m))).collect()
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

fn submasks(mask: u64) -> Vec<u64> {
    let mut out = vec![0];
    let mut s = mask;
    while s != 0 {
        out.push(s);
        s = (s - 1) & mask;
    }
    out
}

/// Literal definitions of the six independence types on a value table.
pub fn oracle_holds(t: &[Value], a: u64, b: u64, kind: IndependenceType, tol: Tolerance) -> bool {
    let eq = |x: Value, y: Value| tol.eq(&x, &y);
    let single = |j: usize| t[1 << j];
    let gain = |j: usize, x: u64| t[(x | 1 << j) as usize] - t[x as usize];
    let element_ok = |targets: u64, contexts: &[u64]| {
        contexts
            .iter()
            .all(|&x| bits(targets & !x).all(|j| eq(gain(j, x), single(j))))
    };
    use IndependenceType::*;
    match kind {
        JI => eq(t[(a | b) as usize], t[a as usize] + t[b as usize]),
        MI => element_ok(a, &[b]) && element_ok(b, &[a]),
        PI => bits(a)
            .all(|i| bits(b).all(|j| eq(t[(1 << i | 1 << j) as usize], single(i) + single(j)))),
        SMI => element_ok(a, &submasks(b)) && element_ok(b, &submasks(a)),
        ModI => element_ok(a | b, &submasks(a | b)),
        SModI => {
            let mut contexts = submasks(a);
            contexts.extend(submasks(b));
            element_ok(a | b, &contexts)
        }
    }
}

/// Shannon entropy in bits of the marginal on `vars`, computed from the pmf.
pub fn oracle_entropy(d: &JointDistribution, vars: u64) -> f64 {
    let mut marginal: HashMap<Vec<usize>, f64> = HashMap::new();
    for (x, p) in d.pmf() {
        let key: Vec<usize> = bits(vars).map(|i| x[i]).collect();
        *marginal.entry(key).or_default() += *p.numer() as f64 / *p.denom() as f64;
    }
    marginal
        .values()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Pointwise factorization `P(x_A, x_B) = P(x_A) P(x_B)`, in exact arithmetic.
pub fn oracle_factorizes(d: &JointDistribution, a: u64, b: u64) -> bool {
    let n = d.arities().len();
    let marginal = |vars: u64| {
        let mut m: HashMap<Vec<usize>, Rational> = HashMap::new();
        for (x, p) in d.pmf() {
            let key: Vec<usize> = (0..n)
                .map(|i| if vars >> i & 1 == 1 { x[i] } else { 0 })
                .collect();
            *m.entry(key).or_insert_with(|| Rational::from_integer(0)) += *p;
        }
        m
    };
    let (pa, pb, pab) = (marginal(a), marginal(b), marginal(a | b));
    let zero = Rational::from_integer(0);
    pa.iter().all(|(xa, p)| {
        pb.iter().all(|(xb, q)| {
            let key: Vec<usize> = (0..n).map(|i| xa[i] + xb[i]).collect();
            *pab.get(&key).unwrap_or(&zero) == p * q
        })
    })
}
