//! Built-in counterexamples with their expected exact values.
//!
//! Each entry rebuilds its instance, runs the relevant checks and compares
//! the outcome with the expected verdicts and values. [`emit_instances`]
//! writes the instances as JSON files readable by [`crate::formats`].

use serde::Serialize;
use serde_json::Value as Json;

use crate::entropy::{
    builtin_distribution, check_statistical_independence, entropy, make_entropy_function,
    JointDistribution,
};
use crate::error::Result;
use crate::formats::{distribution_to_json, function_to_json};
use crate::function::{SetFn, SetFunction};
use crate::independence::{
    check_data_processing, check_markov_chain, check_multiset, check_type, check_union_nonclosure,
    classify, concept_subset, IndependenceType, MultisetMode, MultisetWitness, Verdict, Witness,
};
use crate::instances;
use crate::measures::{multiset_mutual_information, mutual_information, total_correlation};
use crate::optimizer::{constrained_select, filter_ground_set, verify_constraint, ConstraintSpec};
use crate::sets::{disjoint_pairs, subsets_of, GroundSet, Subset};
use crate::value::{Tolerance, Value};

use IndependenceType::*;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: &'static str,
    pub claim: &'static str,
    pub pass: bool,
    pub detail: String,
}

struct Entry {
    id: &'static str,
    claim: &'static str,
    run: fn(Tolerance) -> Result<(bool, String)>,
}

const ENTRIES: &[Entry] = &[
    Entry {
        id: "ji-not-modi",
        claim: "JI does not imply ModI (coverage, A={1,2}, B={3})",
        run: ji_not_modi,
    },
    Entry {
        id: "ji-not-smodi",
        claim: "JI does not imply SModI (coverage, A={1,2}, B={3})",
        run: ji_not_smodi,
    },
    Entry {
        id: "smodi-not-modi",
        claim: "SModI does not imply ModI (min(|A|,4), |A|=|B|=3)",
        run: smodi_not_modi,
    },
    Entry {
        id: "smodi-not-ji",
        claim: "SModI does not imply JI (min(|A|,4), |A|=|B|=3)",
        run: smodi_not_ji,
    },
    Entry {
        id: "mi-not-smodi",
        claim: "MI does not imply SModI (coverage, A={1,2}, B={3})",
        run: mi_not_smodi,
    },
    Entry {
        id: "mi-not-ji",
        claim: "MI does not imply JI (min(|A|,4), |A|=|B|=3)",
        run: mi_not_ji,
    },
    Entry {
        id: "pi-not-mi",
        claim: "PI does not imply MI (min(|A|,2), |A|=|B|=4)",
        run: pi_not_mi,
    },
    Entry {
        id: "set-cover-collapse",
        claim: "coverage: JI, MI, SMI and PI agree on every disjoint pair; JI without ModI",
        run: set_cover_collapse,
    },
    Entry {
        id: "entropy-d1",
        claim: "D1, A={X1,X2}, B={X3}: JI holds, ModI and SModI fail",
        run: entropy_d1,
    },
    Entry {
        id: "entropy-d2",
        claim: "D2, A={X1,X2}, B={X3,X4}: SModI holds, ModI and JI fail",
        run: entropy_d2,
    },
    Entry {
        id: "entropy-d3",
        claim: "D3, A={X1,X2}, B={X3}: PI holds, MI fails",
        run: entropy_d3,
    },
    Entry {
        id: "entropy-factorization",
        claim: "entropy JI agrees with PMF factorization on D1, D2, D3",
        run: entropy_factorization,
    },
    Entry {
        id: "union-nonclosure",
        claim: "A⊥B and A⊥C without A⊥B∪C (min(|A|,4), three size-2 sets)",
        run: union_nonclosure,
    },
    Entry {
        id: "pairwise-not-mutual",
        claim: "pairwise without mutual independence (min(|A|,4), three size-2 sets)",
        run: pairwise_not_mutual,
    },
    Entry {
        id: "total-correlation-vs-multiset-mi",
        claim: "total correlation and multi-set MI differ (min(|A|,4), three size-2 sets)",
        run: total_correlation_vs_multiset_mi,
    },
    Entry {
        id: "multiset-mi-coverage",
        claim: "coverage multi-set MI is zero when the triple concept intersection is empty",
        run: multiset_mi_coverage,
    },
    Entry {
        id: "markov-chain-measurement",
        claim: "coverage preimage chain measures I_f(A; γ⁻¹(B_U) | B) = 1 on the recorded instance",
        run: markov_chain_measurement,
    },
    Entry {
        id: "data-processing",
        claim: "I_f(A;C|B)=0 implies I_f(A;C) ≤ min(I_f(A;B), I_f(C;B)) on all triples",
        run: data_processing,
    },
    Entry {
        id: "private-selection",
        claim: "coverage with γ(4)={c3,c4}, P={3}: MI filter {1,2}; MI and JI(ε=0) select {1,2}",
        run: private_selection,
    },
];

pub fn entry_ids() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.id).collect()
}

/// Run every entry. Errors inside an entry are reported as failures.
pub fn run(tol: Tolerance) -> Vec<Outcome> {
    ENTRIES
        .iter()
        .map(|e| {
            let (pass, detail) = match (e.run)(tol) {
                Ok(r) => r,
                Err(err) => (false, format!("error: {err}")),
            };
            Outcome {
                id: e.id,
                claim: e.claim,
                pass,
                detail,
            }
        })
        .collect()
}

fn element(g: &GroundSet, j: &str, x: &str) -> impl Fn(&Verdict) -> bool {
    let j = g.index_of(j).expect("known label");
    let x = g.parse_subset(x).expect("known labels");
    move |v: &Verdict| {
        matches!(v, Verdict::Fails(Witness::Element { j: wj, x: wx, gain, singleton })
            if *wj == j && *wx == x && *gain == Value::ZERO && *singleton == Value::int(1))
    }
}

fn show(g: &GroundSet, t: IndependenceType, v: &Verdict) -> String {
    match v {
        Verdict::Holds => format!("{t} holds"),
        Verdict::Fails(w) => format!("{t} fails ({})", w.describe(g)),
    }
}

fn coverage_pair() -> (SetFunction, Subset, Subset) {
    let f = instances::running_coverage();
    let a = f.ground().parse_subset("1,2").unwrap();
    let b = f.ground().parse_subset("3").unwrap();
    (f, a, b)
}

fn truncated_pair(k: usize, size: usize) -> (SetFunction, Subset, Subset) {
    let (f, blocks) = instances::truncated_blocks(k, &[size, size]);
    (f, blocks[0].clone(), blocks[1].clone())
}

fn ji_not_modi(tol: Tolerance) -> Result<(bool, String)> {
    let (f, a, b) = coverage_pair();
    let g = f.ground();
    let union = f.value(&a.union(&b));
    let sum = f.value(&a) + f.value(&b);
    let ji = check_type(&f, &a, &b, JI, None, tol)?;
    let modi = check_type(&f, &a, &b, ModI, None, tol)?;
    let pass =
        union == Value::int(3) && sum == Value::int(3) && ji.holds() && element(g, "2", "1")(&modi);
    Ok((
        pass,
        format!("f(A∪B)={union}, f(A)+f(B)={sum}; {}", show(g, ModI, &modi)),
    ))
}

fn ji_not_smodi(tol: Tolerance) -> Result<(bool, String)> {
    let (f, a, b) = coverage_pair();
    let g = f.ground();
    let ji = check_type(&f, &a, &b, JI, None, tol)?;
    let smodi = check_type(&f, &a, &b, SModI, None, tol)?;
    let pass = ji.holds() && element(g, "2", "1")(&smodi);
    Ok((
        pass,
        format!("{}; {}", show(g, JI, &ji), show(g, SModI, &smodi)),
    ))
}

fn smodi_not_modi(tol: Tolerance) -> Result<(bool, String)> {
    let (f, a, b) = truncated_pair(4, 3);
    let g = f.ground();
    let smodi = check_type(&f, &a, &b, SModI, None, tol)?;
    let modi = check_type(&f, &a, &b, ModI, None, tol)?;
    let pass = smodi.holds()
        && matches!(&modi, Verdict::Fails(Witness::Element { x, gain, singleton, .. })
            if x.len() == 4 && *gain == Value::ZERO && *singleton == Value::int(1));
    Ok((
        pass,
        format!("{}; {}", show(g, SModI, &smodi), show(g, ModI, &modi)),
    ))
}

fn smodi_not_ji(tol: Tolerance) -> Result<(bool, String)> {
    let (f, a, b) = truncated_pair(4, 3);
    let g = f.ground();
    let smodi = check_type(&f, &a, &b, SModI, None, tol)?;
    let ji = check_type(&f, &a, &b, JI, None, tol)?;
    let expected = Verdict::Fails(Witness::Joint {
        union: Value::int(4),
        sum: Value::int(6),
    });
    let pass = smodi.holds() && ji == expected;
    Ok((
        pass,
        format!("{}; {}", show(g, SModI, &smodi), show(g, JI, &ji)),
    ))
}

fn mi_not_smodi(tol: Tolerance) -> Result<(bool, String)> {
    let (f, a, b) = coverage_pair();
    let g = f.ground();
    let mi = check_type(&f, &a, &b, MI, None, tol)?;
    let smodi = check_type(&f, &a, &b, SModI, None, tol)?;
    let pass = mi.holds() && element(g, "2", "1")(&smodi);
    Ok((
        pass,
        format!("{}; {}", show(g, MI, &mi), show(g, SModI, &smodi)),
    ))
}

fn mi_not_ji(tol: Tolerance) -> Result<(bool, String)> {
    let (f, a, b) = truncated_pair(4, 3);
    let g = f.ground();
    let mi = check_type(&f, &a, &b, MI, None, tol)?;
    let ji = check_type(&f, &a, &b, JI, None, tol)?;
    let pass = mi.holds() && !ji.holds();
    Ok((pass, format!("{}; {}", show(g, MI, &mi), show(g, JI, &ji))))
}

fn pi_not_mi(tol: Tolerance) -> Result<(bool, String)> {
    let (f, a, b) = truncated_pair(2, 4);
    let g = f.ground();
    let pi = check_type(&f, &a, &b, PI, None, tol)?;
    let mi = check_type(&f, &a, &b, MI, None, tol)?;
    let pass = pi.holds()
        && matches!(&mi, Verdict::Fails(Witness::Element { j, x, gain, singleton })
            if b.contains(*j) && *x == a && *gain == Value::ZERO && *singleton == Value::int(1));
    Ok((pass, format!("{}; {}", show(g, PI, &pi), show(g, MI, &mi))))
}

fn set_cover_collapse(tol: Tolerance) -> Result<(bool, String)> {
    let mut pairs = 0;
    let mut disagreements = 0;
    let mut ji_without_modi = 0;
    for f in [
        instances::running_coverage(),
        instances::extended_coverage(),
    ] {
        for (a, b) in disjoint_pairs(f.ground())? {
            let report = classify(&f, &a, &b, None, tol)?;
            let ji = report.holds(JI);
            if [MI, SMI, PI].iter().any(|&t| report.holds(t) != ji) {
                disagreements += 1;
            }
            if ji && !report.holds(ModI) {
                ji_without_modi += 1;
            }
            pairs += 1;
        }
    }
    Ok((
        disagreements == 0 && ji_without_modi > 0,
        format!(
            "{pairs} pairs, {disagreements} disagreements, {ji_without_modi} pairs JI without ModI"
        ),
    ))
}

fn entropy_instance(
    name: &str,
    a: &str,
    b: &str,
) -> Result<(JointDistribution, SetFunction, Subset, Subset)> {
    let d = builtin_distribution(name)?;
    let f = make_entropy_function(d.clone())?;
    let a = d.ground().parse_subset(a)?;
    let b = d.ground().parse_subset(b)?;
    Ok((d, f, a, b))
}

fn verdicts(
    f: &SetFunction,
    a: &Subset,
    b: &Subset,
    types: &[IndependenceType],
    tol: Tolerance,
) -> Result<(Vec<bool>, String)> {
    let report = classify(f, a, b, None, tol)?;
    let text = types
        .iter()
        .map(|&t| show(f.ground(), t, report.verdict(t)))
        .collect::<Vec<_>>()
        .join("; ");
    Ok((types.iter().map(|&t| report.holds(t)).collect(), text))
}

fn conditional_entropy(d: &JointDistribution, target: &str, given: &str) -> Result<(f64, f64)> {
    let g = d.ground();
    let t = g.parse_subset(target)?;
    let c = g.parse_subset(given)?;
    let h_t = entropy(d, &t)?;
    let h_cond = entropy(d, &t.union(&c))? - entropy(d, &c)?;
    Ok((h_t, h_cond))
}

fn close(tol: Tolerance, x: f64, y: f64) -> bool {
    tol.eq(&Value::Float(x), &Value::Float(y))
}

fn entropy_d1(tol: Tolerance) -> Result<(bool, String)> {
    let (_, f, a, b) = entropy_instance("D1", "X1,X2", "X3")?;
    let (v, text) = verdicts(&f, &a, &b, &[JI, ModI, SModI], tol)?;
    Ok((v == [true, false, false], text))
}

fn entropy_d2(tol: Tolerance) -> Result<(bool, String)> {
    let (d, f, a, b) = entropy_instance("D2", "X1,X2", "X3,X4")?;
    let (v, text) = verdicts(&f, &a, &b, &[SModI, ModI, JI], tol)?;
    let (h4, h4_cond) = conditional_entropy(&d, "X4", "X1,X2,X3")?;
    let pass = v == [true, false, false] && close(tol, h4, 1.0) && close(tol, h4_cond, 0.0);
    Ok((
        pass,
        format!("{text}; H(X4)={h4:.9}, H(X4|X1,X2,X3)={:.9}", h4_cond.abs()),
    ))
}

fn entropy_d3(tol: Tolerance) -> Result<(bool, String)> {
    let (d, f, a, b) = entropy_instance("D3", "X1,X2", "X3")?;
    let (v, text) = verdicts(&f, &a, &b, &[PI, MI], tol)?;
    let (h3, h3_cond) = conditional_entropy(&d, "X3", "X1,X2")?;
    let pass = v == [true, false] && close(tol, h3, 1.0) && close(tol, h3_cond, 0.0);
    Ok((
        pass,
        format!("{text}; H(X3)={h3:.9}, H(X3|X1,X2)={:.9}", h3_cond.abs()),
    ))
}

fn entropy_factorization(tol: Tolerance) -> Result<(bool, String)> {
    let mut pairs = 0;
    let mut mismatches = 0;
    for name in ["D1", "D2", "D3"] {
        let d = builtin_distribution(name)?;
        let f = make_entropy_function(d.clone())?;
        for (a, b) in disjoint_pairs(d.ground())? {
            let ji = check_type(&f, &a, &b, JI, None, tol)?.holds();
            let factorizes = check_statistical_independence(&d, &a, &b, tol)?.is_none();
            if ji != factorizes {
                mismatches += 1;
            }
            pairs += 1;
        }
    }
    Ok((
        mismatches == 0,
        format!("{pairs} pairs, {mismatches} mismatches"),
    ))
}

fn three_blocks() -> (SetFunction, Vec<Subset>) {
    instances::truncated_blocks(4, &[2, 2, 2])
}

fn union_nonclosure(tol: Tolerance) -> Result<(bool, String)> {
    let (f, s) = three_blocks();
    let r = check_union_nonclosure(&f, &s[0], &s[1], &s[2], tol)?;
    let pass = r.a_b.mi == Value::ZERO
        && r.a_c.mi == Value::ZERO
        && r.a_bc.mi == Value::int(2)
        && r.a_b.independent
        && r.a_c.independent
        && !r.a_bc.independent;
    Ok((
        pass,
        format!(
            "I_f(A;B)={}, I_f(A;C)={}, I_f(A;B∪C)={}",
            r.a_b.mi, r.a_c.mi, r.a_bc.mi
        ),
    ))
}

fn pairwise_not_mutual(tol: Tolerance) -> Result<(bool, String)> {
    let (f, s) = three_blocks();
    let pairwise = check_multiset(&f, &s, MultisetMode::Pairwise, tol)?;
    let mutual = check_multiset(&f, &s, MultisetMode::Mutual, tol)?;
    let pass = pairwise.holds()
        && mutual == Verdict::Fails(MultisetWitness::TotalCorrelation(Value::int(2)));
    let c = total_correlation(&f, &s)?.value;
    Ok((
        pass,
        format!(
            "pairwise {}, mutual {}, C_f={c}",
            if pairwise.holds() { "holds" } else { "fails" },
            if mutual.holds() { "holds" } else { "fails" }
        ),
    ))
}

fn total_correlation_vs_multiset_mi(_tol: Tolerance) -> Result<(bool, String)> {
    let (f, s) = three_blocks();
    let c = total_correlation(&f, &s)?.value;
    let i = multiset_mutual_information(&f, &s)?.value;
    Ok((
        c == Value::int(2) && i == Value::int(-2),
        format!("C_f={c}, I_f={i}"),
    ))
}

fn multiset_mi_coverage(_tol: Tolerance) -> Result<(bool, String)> {
    let f = instances::running_coverage();
    let g = f.ground();
    let sets = [
        g.parse_subset("1")?,
        g.parse_subset("3")?,
        g.parse_subset("3")?,
    ];
    let cov = f.coverage_map().expect("coverage instance");
    let common = sets
        .iter()
        .map(|s| cov.image(s))
        .reduce(|x, y| x.intersection(&y))
        .expect("nonempty");
    let i = multiset_mutual_information(&f, &sets)?.value;
    let dependent = mutual_information(&f, &sets[1], &sets[2], None)?.value;
    let pass = i == Value::ZERO && cov.weight(&common) == Value::ZERO && dependent == Value::int(1);
    Ok((
        pass,
        format!(
            "sets {{1}},{{3}},{{3}}: I_f={i}, w(∩γ)={}, I_f(A2;A3)={dependent}",
            cov.weight(&common)
        ),
    ))
}

fn markov_chain_measurement(tol: Tolerance) -> Result<(bool, String)> {
    let f = instances::markov_coverage();
    let cov = f.coverage_map().expect("coverage instance");
    let g = f.ground();
    let (a, b) = (g.parse_subset("3")?, g.parse_subset("2")?);
    let r = check_markov_chain(cov, &a, &b, &concept_subset(cov, &["c1"])?, tol)?;
    let empty = check_markov_chain(cov, &a, &b, &cov.concepts().empty_subset(), tol)?;
    let pass = r.measure == Value::int(1) && !r.is_zero && empty.is_zero;
    Ok((
        pass,
        format!(
            "A={{3}}, B={{2}}, B_U={{c1}}: preimage {}, measure {}; B_U=∅: measure {}",
            g.display(&r.preimage),
            r.measure,
            empty.measure
        ),
    ))
}

fn data_processing(tol: Tolerance) -> Result<(bool, String)> {
    let mut premises = 0;
    let mut violations = 0;
    let (truncated, _) = instances::truncated_blocks(3, &[5]);
    for f in [instances::extended_coverage(), truncated] {
        let subsets: Vec<Subset> = subsets_of(f.ground(), None)?.collect();
        for a in &subsets {
            for b in &subsets {
                for c in &subsets {
                    let r = check_data_processing(&f, a, b, c, tol)?;
                    if r.premise {
                        premises += 1;
                        if !r.holds() {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok((
        violations == 0 && premises > 0,
        format!("{premises} triples with premise, {violations} violations"),
    ))
}

fn private_selection(tol: Tolerance) -> Result<(bool, String)> {
    let f = instances::extended_coverage();
    let g = f.ground();
    let p = g.parse_subset("3")?;
    let expected = g.parse_subset("1,2")?;
    let filter = filter_ground_set(&f, &p, MI, tol)?;
    let spec = |kind| ConstraintSpec {
        f: &f,
        private: p.clone(),
        kind,
        epsilon: Value::ZERO,
        budget: 2,
    };
    let mi = constrained_select(&f, &spec(MI), tol)?;
    let ji = constrained_select(&f, &spec(JI), tol)?;
    let check = verify_constraint(&f, &mi.selected, &p, MI, Value::ZERO, tol)?;
    let pass = filter == expected
        && mi.selected == expected
        && ji.selected == expected
        && mi.feasible
        && ji.feasible
        && check.feasible
        && check.information == Value::ZERO;
    Ok((
        pass,
        format!(
            "filter {}, MI selects {} (I_f={}), JI(ε=0) selects {}",
            g.display(&filter),
            g.display(&mi.selected),
            check.information,
            g.display(&ji.selected)
        ),
    ))
}

/// Instance files as `(file name, JSON document)`.
pub fn emit_instances() -> Result<Vec<(String, Json)>> {
    let mut out = Vec::new();
    let functions = [
        ("coverage_running.json", instances::running_coverage()),
        ("coverage_extended.json", instances::extended_coverage()),
        ("coverage_markov.json", instances::markov_coverage()),
        ("truncated_k4_3x2.json", three_blocks().0),
        ("truncated_k4_2x3.json", truncated_pair(4, 3).0),
        ("truncated_k2_2x4.json", truncated_pair(2, 4).0),
    ];
    for (name, f) in functions {
        out.push((name.to_string(), function_to_json(&f)?));
    }
    for name in ["D1", "D2", "D3"] {
        let d = builtin_distribution(name)?;
        out.push((
            format!("dist_{}.json", name.to_lowercase()),
            distribution_to_json(&d),
        ));
    }
    Ok(out)
}
