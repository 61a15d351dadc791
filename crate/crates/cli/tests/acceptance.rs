//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subind::entropy::{builtin_distribution, entropy, make_entropy_function, JointDistribution};
use subind::function::{CoverageMap, Memo};
use subind::independence::{
    check_data_processing, check_multiset, check_type, check_union_nonclosure, classify,
    verify_lattice, MultisetMode, MultisetWitness,
};
use subind::instances;
use subind::measures::{multiset_mutual_information, total_correlation};
use subind::optimizer::{constrained_select, filter_ground_set, verify_constraint, ConstraintSpec};
use subind::sets::{disjoint_pairs, subsets_of};
use subind::value::Rational;
use subind::{
    validate, GroundSet, IndependenceType, SetFn, SetFunction, Subset, Tolerance, Value, Verdict,
    Witness,
};

use IndependenceType::*;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> Tolerance {
    Tolerance::default()
}

fn random_coverage(rng: &mut ChaCha8Rng, n: usize, concepts: usize, weighted: bool) -> SetFunction {
    let ground = GroundSet::numbered(0, n);
    let labels: Vec<String> = (0..concepts).map(|c| format!("c{c}")).collect();
    let gamma: Vec<Vec<String>> = (0..n)
        .map(|_| {
            labels
                .iter()
                .filter(|_| rng.gen_bool(0.35))
                .cloned()
                .collect()
        })
        .collect();
    let weights = (0..concepts)
        .map(|_| {
            if weighted {
                Value::int(rng.gen_range(1..=5))
            } else {
                Value::int(1)
            }
        })
        .collect();
    let concepts = GroundSet::new(labels).unwrap();
    SetFunction::coverage(CoverageMap::new(ground, concepts, &gamma, weights).unwrap())
}

fn random_modular(rng: &mut ChaCha8Rng, n: usize) -> SetFunction {
    let w = (0..n)
        .map(|_| Value::ratio(rng.gen_range(0..6), rng.gen_range(1..4)))
        .collect();
    SetFunction::modular(GroundSet::numbered(0, n), w).unwrap()
}

fn random_facility(rng: &mut ChaCha8Rng, n: usize) -> SetFunction {
    let sim = (0..n)
        .map(|_| (0..n).map(|_| Value::int(rng.gen_range(0..4))).collect())
        .collect();
    SetFunction::facility_location(GroundSet::numbered(0, n), sim).unwrap()
}

fn truncated(n: usize, k: usize) -> SetFunction {
    SetFunction::truncated_cardinality(GroundSet::numbered(0, n), k).unwrap()
}

/// Random pmf over `n` binary variables; `blocks` groups variables into
/// independent factors.
fn random_distribution(rng: &mut ChaCha8Rng, n: usize, blocks: &[usize]) -> JointDistribution {
    let factors: Vec<Vec<Rational>> = (0..=*blocks.iter().max().unwrap())
        .map(|b| {
            let size = blocks.iter().filter(|&&x| x == b).count();
            let raw: Vec<i128> = (0..1 << size).map(|_| rng.gen_range(1..10)).collect();
            let total: i128 = raw.iter().sum();
            raw.into_iter().map(|w| Rational::new(w, total)).collect()
        })
        .collect();
    let pmf = (0..1usize << n)
        .map(|x| {
            let bits: Vec<usize> = (0..n).map(|i| x >> i & 1).collect();
            let p = factors
                .iter()
                .enumerate()
                .map(|(b, factor)| {
                    let local = (0..n)
                        .filter(|&i| blocks[i] == b)
                        .enumerate()
                        .fold(0, |acc, (k, i)| acc | bits[i] << k);
                    factor[local]
                })
                .product();
            (bits, p)
        })
        .collect();
    let vars = GroundSet::new((1..=n).map(|i| format!("X{i}"))).unwrap();
    JointDistribution::new(vars, vec![2; n], pmf).unwrap()
}

/// Exact pointwise test of `P(x_A, x_B) = P(x_A) P(x_B)`.
fn factorizes(d: &JointDistribution, a: &Subset, b: &Subset) -> bool {
    let marginal = |s: &Subset| {
        let mut m: HashMap<Vec<usize>, Rational> = HashMap::new();
        for (x, p) in d.pmf() {
            let key = s.iter().map(|i| x[i]).collect();
            *m.entry(key).or_insert_with(|| Rational::from_integer(0)) += *p;
        }
        m
    };
    let (pa, pb) = (marginal(a), marginal(b));
    let mut joint: HashMap<(Vec<usize>, Vec<usize>), Rational> = HashMap::new();
    for (x, p) in d.pmf() {
        let key = (
            a.iter().map(|i| x[i]).collect(),
            b.iter().map(|i| x[i]).collect(),
        );
        *joint
            .entry(key)
            .or_insert_with(|| Rational::from_integer(0)) += *p;
    }
    let zero = Rational::from_integer(0);
    pa.iter().all(|(xa, p)| {
        pb.iter()
            .all(|(xb, q)| *joint.get(&(xa.clone(), xb.clone())).unwrap_or(&zero) == p * q)
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut functions = vec![truncated(7, 2), truncated(7, 3)];
    for _ in 0..3 {
        functions.push(random_coverage(&mut rng, 7, 6, true));
    }
    functions.push(random_modular(&mut rng, 7));
    let mut pairs_total = 0;
    let mut violations = 0;
    for f in &functions {
        let pairs = disjoint_pairs(f.ground()).unwrap();
        let r = verify_lattice(f, &pairs, tol()).unwrap();
        pairs_total += r.pairs_checked;
        violations += r.violations.len();
    }
    let secs = start.elapsed().as_secs_f64();
    (
        violations == 0 && secs < 60.0,
        format!(
            "{} functions, {pairs_total} pairs, {violations} violations, {secs:.2} s",
            functions.len()
        ),
    )
}

fn element_witness(v: &Verdict, j: usize, x: &Subset) -> bool {
    matches!(v, Verdict::Fails(Witness::Element { j: wj, x: wx, gain, singleton })
        if *wj == j && wx == x && *gain == Value::ZERO && *singleton == Value::int(1))
}

fn criterion_2() -> Outcome {
    let f = instances::running_coverage();
    let g = f.ground();
    let (a, b) = (g.parse_subset("1,2").unwrap(), g.parse_subset("3").unwrap());
    let two = g.index_of("2").unwrap();
    let one = g.parse_subset("1").unwrap();
    let union = f.value(&a.union(&b));
    let sum = f.value(&a) + f.value(&b);
    let part_a = union == Value::int(3)
        && sum == Value::int(3)
        && check_type(&f, &a, &b, JI, None, tol()).unwrap().holds()
        && element_witness(
            &check_type(&f, &a, &b, ModI, None, tol()).unwrap(),
            two,
            &one,
        )
        && element_witness(
            &check_type(&f, &a, &b, SModI, None, tol()).unwrap(),
            two,
            &one,
        );

    let (f, blocks) = instances::truncated_blocks(4, &[3, 3]);
    let part_b = check_type(&f, &blocks[0], &blocks[1], SModI, None, tol())
        .unwrap()
        .holds()
        && check_type(&f, &blocks[0], &blocks[1], JI, None, tol()).unwrap()
            == Verdict::Fails(Witness::Joint {
                union: Value::int(4),
                sum: Value::int(6),
            });

    let (f, blocks) = instances::truncated_blocks(2, &[4, 4]);
    let mi = check_type(&f, &blocks[0], &blocks[1], MI, None, tol()).unwrap();
    let part_c = check_type(&f, &blocks[0], &blocks[1], PI, None, tol())
        .unwrap()
        .holds()
        && matches!(&mi, Verdict::Fails(Witness::Element { j, x, gain, singleton })
            if blocks[1].contains(*j) && *x == blocks[0] && *gain == Value::ZERO && *singleton == Value::int(1));

    let run = Command::new(env!("CARGO_BIN_EXE_subind"))
        .args(["registry", "run"])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&run.stdout);
    let fails = stdout.matches("status=FAIL").count();
    let code = run.status.code();
    (
        part_a && part_b && part_c && code == Some(0) && fails == 0,
        format!(
            "(a) {} (b) {} (c) {}; registry run exit {:?}, {fails} failing rows",
            ok(part_a),
            ok(part_b),
            ok(part_c),
            code
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pairs = 0;
    let mut disagreements = 0;
    for i in 0..200 {
        let n = 1 + i % 7;
        let concepts = rng.gen_range(1..=6);
        let f = random_coverage(&mut rng, n, concepts, i % 2 == 0);
        for (a, b) in disjoint_pairs(f.ground()).unwrap() {
            let verdicts: Vec<bool> = [JI, MI, SMI, PI]
                .iter()
                .map(|&t| check_type(&f, &a, &b, t, None, tol()).unwrap().holds())
                .collect();
            if verdicts.iter().any(|&v| v != verdicts[0]) {
                disagreements += 1;
            }
            pairs += 1;
        }
    }
    (
        disagreements == 0,
        format!("200 instances, {pairs} pairs, {disagreements} disagreements"),
    )
}

fn conditional(d: &JointDistribution, target: &str, given: &str) -> (f64, f64) {
    let g = d.ground();
    let t = g.parse_subset(target).unwrap();
    let c = g.parse_subset(given).unwrap();
    let h = entropy(d, &t).unwrap();
    (
        h,
        entropy(d, &t.union(&c)).unwrap() - entropy(d, &c).unwrap(),
    )
}

fn criterion_4() -> Outcome {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-9;
    let verdicts = |name: &str, a: &str, b: &str, types: &[IndependenceType]| {
        let d = builtin_distribution(name).unwrap();
        let f = make_entropy_function(d.clone()).unwrap();
        let (a, b) = (
            d.ground().parse_subset(a).unwrap(),
            d.ground().parse_subset(b).unwrap(),
        );
        let r = classify(&f, &a, &b, None, tol()).unwrap();
        types.iter().map(|&t| r.holds(t)).collect::<Vec<_>>()
    };
    let d1 = verdicts("D1", "X1,X2", "X3", &[JI, ModI, SModI]) == [true, false, false];
    let d2_dist = builtin_distribution("D2").unwrap();
    let (h4, h4c) = conditional(&d2_dist, "X4", "X1,X2,X3");
    let d2 = verdicts("D2", "X1,X2", "X3,X4", &[SModI, ModI, JI]) == [true, false, false]
        && close(h4, 1.0)
        && close(h4c, 0.0);
    let d3_dist = builtin_distribution("D3").unwrap();
    let (h3, h3c) = conditional(&d3_dist, "X3", "X1,X2");
    let d3 = verdicts("D3", "X1,X2", "X3", &[PI, MI]) == [true, false]
        && close(h3, 1.0)
        && close(h3c, 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut dists: Vec<JointDistribution> = ["D1", "D2", "D3"]
        .iter()
        .map(|n| builtin_distribution(n).unwrap())
        .collect();
    let structures = [[0, 0, 0], [0, 0, 1], [0, 1, 1], [0, 1, 0], [0, 1, 2]];
    for i in 0..100 {
        dists.push(random_distribution(
            &mut rng,
            3,
            &structures[i % structures.len()],
        ));
    }
    let mut pairs = 0;
    let mut mismatches = 0;
    let mut independent = 0;
    for d in &dists {
        let f = make_entropy_function(d.clone()).unwrap();
        for (a, b) in disjoint_pairs(d.ground()).unwrap() {
            let ji = check_type(&f, &a, &b, JI, None, tol()).unwrap().holds();
            let fac = factorizes(d, &a, &b);
            mismatches += (ji != fac) as usize;
            independent += (fac && !a.is_empty() && !b.is_empty()) as usize;
            pairs += 1;
        }
    }
    (
        d1 && d2 && d3 && mismatches == 0,
        format!(
            "D1 {} D2 {} (H(X4)={h4:.9}, H(X4|X1,X2,X3)={:.9}) D3 {} (H(X3)={h3:.9}, H(X3|X1,X2)={:.9}); \
             JI vs factorization on {} distributions: {pairs} pairs ({independent} nontrivially independent), {mismatches} mismatches",
            ok(d1),
            ok(d2),
            h4c.abs(),
            ok(d3),
            h3c.abs(),
            dists.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let (f, blocks) = instances::truncated_blocks(4, &[2, 2, 2]);
    let pairwise = check_multiset(&f, &blocks, MultisetMode::Pairwise, tol()).unwrap();
    let mutual = check_multiset(&f, &blocks, MultisetMode::Mutual, tol()).unwrap();
    let c = total_correlation(&f, &blocks).unwrap().value;
    let part_a = pairwise.holds()
        && mutual == Verdict::Fails(MultisetWitness::TotalCorrelation(Value::int(2)))
        && c == Value::int(2);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut families = 0;
    let mut violations = 0;
    let mut converse_failures = 0;
    for n in 1..=6usize {
        let functions = [
            truncated(n, 2),
            truncated(n, 4),
            random_coverage(&mut rng, n, 5, true),
            random_facility(&mut rng, n),
        ];
        for f in &functions {
            for code in 0..4usize.pow(n as u32) {
                let mut sets = vec![f.ground().empty_subset(); 3];
                let mut c = code;
                for i in 0..n {
                    if c % 4 < 3 {
                        sets[c % 4].insert(i);
                    }
                    c /= 4;
                }
                let mutual = check_multiset(f, &sets, MultisetMode::Mutual, tol())
                    .unwrap()
                    .holds();
                let pairwise = check_multiset(f, &sets, MultisetMode::Pairwise, tol())
                    .unwrap()
                    .holds();
                violations += (mutual && !pairwise) as usize;
                converse_failures += (pairwise && !mutual) as usize;
                families += 1;
            }
        }
    }

    let cov = instances::running_coverage();
    let g = cov.ground();
    let sets = [
        g.parse_subset("1").unwrap(),
        g.parse_subset("2").unwrap(),
        g.parse_subset("3").unwrap(),
    ];
    let map = cov.coverage_map().unwrap();
    let common = sets
        .iter()
        .map(|s| map.image(s))
        .reduce(|x, y| x.intersection(&y))
        .unwrap();
    let mmi = multiset_mutual_information(&cov, &sets).unwrap().value;
    let part_c = common.is_empty() && mmi == Value::ZERO;

    (
        part_a && violations == 0 && part_c,
        format!(
            "pairwise holds, mutual fails with C_f={c}; {families} families, {violations} mutual-without-pairwise, \
             {converse_failures} pairwise-without-mutual; coverage {{1}},{{2}},{{3}} multi-set MI={mmi}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let (f, s) = instances::truncated_blocks(4, &[2, 2, 2]);
    let r = check_union_nonclosure(&f, &s[0], &s[1], &s[2], tol()).unwrap();
    (
        r.a_b.mi == Value::ZERO && r.a_c.mi == Value::ZERO && r.a_bc.mi == Value::int(2),
        format!(
            "I_f(A;B)={}, I_f(A;C)={}, I_f(A;B∪C)={}",
            r.a_b.mi, r.a_c.mi, r.a_bc.mi
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let functions = [
        random_coverage(&mut rng, 6, 5, true),
        random_facility(&mut rng, 6),
    ];
    let mut premises = 0;
    let mut violations = 0;
    let mut triples = 0;
    for f in &functions {
        let memo = Memo::new(f).unwrap();
        let subsets: Vec<Subset> = subsets_of(f.ground(), None).unwrap().collect();
        for a in &subsets {
            for b in &subsets {
                for c in &subsets {
                    let r = check_data_processing(&memo, a, b, c, tol()).unwrap();
                    triples += 1;
                    if r.premise {
                        premises += 1;
                        violations += !r.holds() as usize;
                    }
                }
            }
        }
    }
    (
        violations == 0,
        format!("{triples} triples, {premises} with I_f(A;C|B)=0, {violations} violations"),
    )
}

fn criterion_8() -> Outcome {
    let f = instances::extended_coverage();
    let g = f.ground();
    let p = g.parse_subset("3").unwrap();
    let expected = g.parse_subset("1,2").unwrap();
    let filter = filter_ground_set(&f, &p, MI, tol()).unwrap();
    let spec = |kind| ConstraintSpec {
        f: &f,
        private: p.clone(),
        kind,
        epsilon: Value::ZERO,
        budget: 2,
    };
    let mi = constrained_select(&f, &spec(MI), tol()).unwrap();
    let ji = constrained_select(&f, &spec(JI), tol()).unwrap();
    let check = verify_constraint(&f, &mi.selected, &p, MI, Value::ZERO, tol()).unwrap();
    let check_ji = verify_constraint(&f, &ji.selected, &p, JI, Value::ZERO, tol()).unwrap();
    let repeated = (0..10).all(|_| {
        constrained_select(&f, &spec(MI), tol()).unwrap() == mi
            && constrained_select(&f, &spec(JI), tol()).unwrap() == ji
    });
    let pass = filter == expected
        && mi.selected == expected
        && mi.feasible
        && check.feasible
        && check.information == Value::ZERO
        && ji.selected == expected
        && check_ji.feasible
        && repeated;
    (
        pass,
        format!(
            "filter {}, MI selects {} (I_f={}, verified {}), JI(ε=0) selects {}, 10 repeats identical: {repeated}",
            g.display(&filter),
            g.display(&mi.selected),
            check.information,
            check.feasible,
            g.display(&ji.selected)
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=8usize {
        let mut functions = vec![
            random_modular(&mut rng, n),
            random_coverage(&mut rng, n, 6, true),
            random_facility(&mut rng, n),
        ];
        functions.extend((1..=n).map(|k| truncated(n, k)));
        let blocks: Vec<usize> = (0..n).map(|i| i / 3).collect();
        functions.push(make_entropy_function(random_distribution(&mut rng, n, &blocks)).unwrap());
        for f in functions {
            let r = validate(&f, tol()).unwrap();
            checked += 1;
            if !r.all_hold() {
                failures.push(format!("{} n={n}", f.family().name()));
            }
        }
    }
    let tab = SetFunction::tabulated(
        GroundSet::numbered(0, 2),
        vec![Value::ZERO, Value::int(1), Value::int(1), Value::int(3)],
    )
    .unwrap();
    let w = validate(&tab, tol()).unwrap().submodular;
    let witness_ok =
        matches!(&w, Some(v) if v.j == 1 && v.s.is_empty() && v.t == Subset::from_indices(2, [0]));
    (
        failures.is_empty() && witness_ok,
        format!(
            "{checked} instances of 5 families, {} failures{}; tabulated witness {}",
            failures.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!(" ({})", failures.join(", "))
            },
            match &w {
                Some(v) => format!(
                    "j={}, S={:?}, T={:?}, gains {} < {}",
                    v.j,
                    v.s.to_vec(),
                    v.t.to_vec(),
                    v.gain_s,
                    v.gain_t
                ),
                None => "missing".into(),
            }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("lattice soundness sweep", criterion_1),
        ("counterexample registry", criterion_2),
        ("set cover collapse", criterion_3),
        ("entropy hierarchy", criterion_4),
        ("multi-set independence", criterion_5),
        ("union non-closure", criterion_6),
        ("data processing", criterion_7),
        ("private selection", criterion_8),
        ("validators", criterion_9),
    ];
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = run();
        passed += pass as usize;
        println!(
            "[{}] {}. {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
