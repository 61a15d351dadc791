use std::fs;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value as Json};

use subind::entropy::{builtin_distribution, entropy, make_entropy_function, JointDistribution};
use subind::formats::{distribution_to_json, parse_distribution, parse_function};
use subind::independence::{classify, verify_lattice, IndependenceType, Verdict, Witness};
use subind::measures::{
    multiset_mutual_information, mutual_information, total_correlation, MeasureValue,
};
use subind::optimizer::{constrained_select, ConstraintSpec};
use subind::sets::{disjoint_pairs, GroundSet, Subset};
use subind::{registry, validate, Exactness, SetFn, SetFunction, Tolerance, Value};

use crate::report::{InputDigest, Report};
use crate::{Cli, Command, MeasureKind, RegistryAction, Source};

pub fn run(cli: &Cli, report: &mut Report) -> Result<()> {
    if !cli.tolerance.is_finite() || cli.tolerance < 0.0 {
        bail!(
            "--tolerance must be a nonnegative number, got {}",
            cli.tolerance
        );
    }
    let tol = Tolerance::new(cli.tolerance);
    match &cli.command {
        Command::Measure { source, kind } => measure(source, kind, tol, report),
        Command::Classify {
            source,
            a,
            b,
            given,
        } => classify_cmd(source, a, b, given.as_deref(), tol, report),
        Command::VerifyLattice { source, pairs } => lattice_cmd(source, pairs, tol, report),
        Command::Entropy { dist, set, given } => entropy_cmd(dist, set, given.as_deref(), report),
        Command::Select {
            utility,
            privacy,
            private,
            kind,
            epsilon,
            budget,
            trace,
        } => select_cmd(
            SelectArgs {
                utility,
                privacy: privacy.as_deref(),
                private,
                kind,
                epsilon,
                budget: *budget,
                trace: trace.as_deref(),
            },
            tol,
            report,
        ),
        Command::Registry { action } => match action {
            RegistryAction::Run => registry_run(tol, report),
            RegistryAction::Emit { out } => registry_emit(out, report),
        },
        Command::Validate { source } => validate_cmd(source, tol, report),
    }
}

fn read_input(path: &Path, report: &mut Report) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    report
        .inputs
        .push(InputDigest::of(path.display().to_string(), &bytes));
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8 text", path.display()))
}

fn load_distribution(spec: &str, report: &mut Report) -> Result<JointDistribution> {
    let path = Path::new(spec);
    if path.exists() {
        let text = read_input(path, report)?;
        return parse_distribution(&text).with_context(|| format!("in {}", path.display()));
    }
    let dist = builtin_distribution(spec).with_context(|| {
        format!("`{spec}` is neither an existing file nor a built-in distribution (D1, D2, D3)")
    })?;
    let canonical = distribution_to_json(&dist).to_string();
    report.inputs.push(InputDigest::of(
        format!("builtin:{}", spec.to_uppercase()),
        canonical.as_bytes(),
    ));
    Ok(dist)
}

fn load_function(path: &Path, report: &mut Report) -> Result<SetFunction> {
    let text = read_input(path, report)?;
    parse_function(&text).with_context(|| format!("in {}", path.display()))
}

fn load_source(source: &Source, tol: Tolerance, report: &mut Report) -> Result<SetFunction> {
    let f = match (&source.function, &source.entropy_dist) {
        (Some(path), _) => load_function(path, report)?,
        (None, Some(dist)) => make_entropy_function(load_distribution(dist, report)?)?,
        (None, None) => bail!("one of --function or --entropy-dist is required"),
    };
    note_function(&f, tol, report);
    Ok(f)
}

fn note_function(f: &SetFunction, tol: Tolerance, report: &mut Report) {
    if !f.validated_submodular() {
        report.warn("function is not validated submodular; measure guarantees do not apply");
    }
    if f.value_kind() == Exactness::Floating {
        report.warn(format!(
            "floating-point values compared with relative tolerance {:e}",
            tol.rel
        ));
    }
}

fn subset(ground: &GroundSet, text: &str, what: &str) -> Result<Subset> {
    ground
        .parse_subset(text)
        .with_context(|| format!("in {what} `{text}`"))
}

fn set_list(ground: &GroundSet, text: &str) -> Result<Vec<Subset>> {
    let body = text.strip_prefix("sets=").unwrap_or(text);
    body.split(';')
        .map(|part| subset(ground, part, "set list"))
        .collect()
}

fn measure_json(m: &MeasureValue) -> Json {
    json!({
        "value": m.value,
        "exactness": m.exactness,
        "validated_submodular": m.validated_submodular,
    })
}

fn measure(source: &Source, kind: &MeasureKind, tol: Tolerance, report: &mut Report) -> Result<()> {
    let f = load_source(source, tol, report)?;
    let g = f.ground();
    let (name, m) = if let Some(args) = &kind.mi {
        let mut sets: [Option<Subset>; 3] = [None, None, None];
        for arg in args {
            let (key, labels) = arg
                .split_once('=')
                .with_context(|| format!("expected A=..., B=... or C=..., got `{arg}`"))?;
            let slot = match key.trim() {
                "A" | "a" => 0,
                "B" | "b" => 1,
                "C" | "c" => 2,
                other => bail!("unknown set name `{other}` in --mi (expected A, B or C)"),
            };
            if sets[slot].is_some() {
                bail!("set `{key}` given twice in --mi");
            }
            sets[slot] = Some(subset(g, labels, key)?);
        }
        let [a, b, c] = sets;
        let a = a.context("--mi needs A=...")?;
        let b = b.context("--mi needs B=...")?;
        report.put("A", g.display(&a));
        report.put("B", g.display(&b));
        if let Some(c) = &c {
            report.put("C", g.display(c));
        }
        let name = if c.is_some() {
            "I_f(A;B|C)"
        } else {
            "I_f(A;B)"
        };
        (name, mutual_information(&f, &a, &b, c.as_ref())?)
    } else if let Some(text) = &kind.total_correlation {
        let sets = set_list(g, text)?;
        report.put(
            "sets",
            sets.iter().map(|s| g.display(s)).collect::<Vec<_>>(),
        );
        ("C_f", total_correlation(&f, &sets)?)
    } else if let Some(text) = &kind.multiset_mi {
        let sets = set_list(g, text)?;
        report.put(
            "sets",
            sets.iter().map(|s| g.display(s)).collect::<Vec<_>>(),
        );
        ("I_f(multi-set)", multiset_mutual_information(&f, &sets)?)
    } else {
        bail!("choose one of --mi, --total-correlation, --multiset-mi");
    };
    report.put("measure", name);
    for (k, v) in measure_json(&m).as_object().expect("object") {
        report.put(k, v);
    }
    Ok(())
}

fn witness_json(g: &GroundSet, w: &Witness) -> Map<String, Json> {
    let v = match w {
        Witness::Joint { union, sum } => json!({
            "kind": "joint",
            "union": union,
            "sum": sum,
        }),
        Witness::Element {
            j,
            x,
            gain,
            singleton,
        } => json!({
            "kind": "element",
            "j": g.label(*j),
            "X": g.display(x),
            "gain": gain,
            "singleton": singleton,
        }),
    };
    v.as_object().expect("object").clone()
}

fn verdict_json(g: &GroundSet, v: &Verdict) -> Json {
    let mut out = Map::new();
    match v {
        Verdict::Holds => {
            out.insert("verdict".into(), "holds".into());
        }
        Verdict::Fails(w) => {
            out.insert("verdict".into(), "fails".into());
            out.extend(witness_json(g, w));
        }
    }
    Json::Object(out)
}

fn classify_cmd(
    source: &Source,
    a: &str,
    b: &str,
    given: Option<&str>,
    tol: Tolerance,
    report: &mut Report,
) -> Result<()> {
    let f = load_source(source, tol, report)?;
    let g = f.ground();
    let a = subset(g, a, "--A")?;
    let b = subset(g, b, "--B")?;
    let given = given.map(|c| subset(g, c, "--given")).transpose()?;
    let r = classify(&f, &a, &b, given.as_ref(), tol)?;
    report.put("A", g.display(&a));
    report.put("B", g.display(&b));
    if let Some(c) = &given {
        report.put("given", g.display(c));
    }
    for (t, v) in &r.verdicts {
        report.put(t.name(), verdict_json(g, v));
    }
    let violations = r.lattice_violations();
    report.put("lattice_consistent", violations.is_empty());
    if !violations.is_empty() {
        report.put(
            "lattice_violations",
            violations
                .iter()
                .map(|(p, c)| format!("{p} => {c}"))
                .collect::<Vec<_>>(),
        );
    }
    Ok(())
}

fn read_pairs(
    ground: &GroundSet,
    path: &Path,
    report: &mut Report,
) -> Result<Vec<(Subset, Subset)>> {
    let text = read_input(path, report)?;
    let doc: Json = serde_json::from_str(&text)
        .with_context(|| format!("malformed JSON in {}", path.display()))?;
    let items = doc
        .as_array()
        .with_context(|| format!("{}: expected an array of pairs", path.display()))?;
    let side = |v: &Json, at: &str| -> Result<Subset> {
        match v {
            Json::String(s) => subset(ground, s, at),
            Json::Array(labels) => {
                let labels = labels
                    .iter()
                    .map(|l| {
                        l.as_str()
                            .with_context(|| format!("{at}: labels must be strings"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ground.subset(&labels).with_context(|| at.to_string())?)
            }
            _ => bail!("{at}: expected a label string or array"),
        }
    };
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let (a, b) = match item {
                Json::Object(m) => (
                    m.get("A")
                        .with_context(|| format!("pairs[{i}]: missing `A`"))?,
                    m.get("B")
                        .with_context(|| format!("pairs[{i}]: missing `B`"))?,
                ),
                Json::Array(ab) if ab.len() == 2 => (&ab[0], &ab[1]),
                _ => bail!("pairs[{i}]: expected {{\"A\": ..., \"B\": ...}} or [A, B]"),
            };
            Ok((
                side(a, &format!("pairs[{i}].A"))?,
                side(b, &format!("pairs[{i}].B"))?,
            ))
        })
        .collect()
}

fn lattice_cmd(source: &Source, pairs: &str, tol: Tolerance, report: &mut Report) -> Result<()> {
    let f = load_source(source, tol, report)?;
    let g = f.ground();
    let pairs = if pairs == "all" {
        disjoint_pairs(g)?
    } else {
        read_pairs(g, Path::new(pairs), report)?
    };
    let r = verify_lattice(&f, &pairs, tol)?;
    report.put("pairs_checked", r.pairs_checked);
    let holds: Map<String, Json> = IndependenceType::ALL
        .iter()
        .zip(r.holds_counts)
        .map(|(t, n)| (t.name().to_string(), n.into()))
        .collect();
    report.put("holds", holds);
    report.put(
        "violations",
        r.violations
            .iter()
            .map(|v| {
                json!({
                    "pair": v.pair_index,
                    "A": g.display(&v.a),
                    "B": g.display(&v.b),
                    "implication": format!("{} => {}", v.premise, v.conclusion),
                })
            })
            .collect::<Vec<_>>(),
    );
    report.put("sound", r.is_sound());
    if !r.is_sound() {
        report.exit_status = 1;
    }
    Ok(())
}

fn entropy_cmd(dist: &str, set: &str, given: Option<&str>, report: &mut Report) -> Result<()> {
    let d = load_distribution(dist, report)?;
    let g = d.ground();
    let s = subset(g, set, "--set")?;
    report.put("set", g.display(&s));
    let bits = match given {
        Some(c) => {
            let c = subset(g, c, "--given")?;
            report.put("given", g.display(&c));
            entropy(&d, &s.union(&c))? - entropy(&d, &c)?
        }
        None => entropy(&d, &s)?,
    };
    report.put("entropy_bits", Value::Float(bits));
    report.put("exactness", Exactness::Floating);
    Ok(())
}

struct SelectArgs<'a> {
    utility: &'a Path,
    privacy: Option<&'a Path>,
    private: &'a str,
    kind: &'a str,
    epsilon: &'a str,
    budget: Option<usize>,
    trace: Option<&'a Path>,
}

fn select_cmd(args: SelectArgs<'_>, tol: Tolerance, report: &mut Report) -> Result<()> {
    let utility = load_function(args.utility, report)?;
    note_function(&utility, tol, report);
    let privacy = match args.privacy {
        Some(path) => {
            let f = load_function(path, report)?;
            note_function(&f, tol, report);
            f
        }
        None => utility.clone(),
    };
    let g = privacy.ground();
    let kind = IndependenceType::from_str(args.kind)?;
    let private = subset(g, args.private, "--P")?;
    let epsilon = Value::parse_exact(args.epsilon).context("in --epsilon")?;
    let budget = args.budget.unwrap_or(g.len());
    let spec = ConstraintSpec {
        f: &privacy,
        private: private.clone(),
        kind,
        epsilon,
        budget,
    };
    let result = constrained_select(&utility, &spec, tol)?;
    report.put("type", kind.name());
    report.put("P", g.display(&private));
    report.put("epsilon", epsilon);
    report.put("budget", budget);
    report.put("selected", g.display(&result.selected));
    report.put("utility", result.utility);
    report.put("feasible", result.feasible);
    if let Some(check) = &result.check {
        report.put("information", check.information);
        report.put("slack", check.slack);
        if let Some(w) = &check.witness {
            report.put("witness", Json::Object(witness_json(g, w)));
        }
    }
    let steps: Vec<Json> = result
        .trace
        .iter()
        .map(|s| {
            json!({
                "element": g.label(s.element),
                "gain": s.gain,
                "information": s.information,
                "slack": s.slack,
            })
        })
        .collect();
    report.put("steps", steps.len());
    if let Some(path) = args.trace {
        let doc = json!({ "type": kind.name(), "epsilon": epsilon, "steps": steps });
        fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
            .with_context(|| format!("cannot write trace to {}", path.display()))?;
        report.put("trace_file", path.display().to_string());
    }
    Ok(())
}

fn registry_run(tol: Tolerance, report: &mut Report) -> Result<()> {
    let outcomes = registry::run(tol);
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let rows: Map<String, Json> = outcomes
        .iter()
        .map(|o| {
            (
                o.id.to_string(),
                json!({
                    "status": if o.pass { "PASS" } else { "FAIL" },
                    "claim": o.claim,
                    "detail": o.detail,
                }),
            )
        })
        .collect();
    report.put("entries", rows);
    report.put("passed", format!("{passed}/{}", outcomes.len()));
    if passed != outcomes.len() {
        report.exit_status = 1;
    }
    Ok(())
}

fn registry_emit(out: &Path, report: &mut Report) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let mut written = Vec::new();
    for (name, doc) in registry::emit_instances()? {
        let path = out.join(&name);
        let text = serde_json::to_string_pretty(&doc)? + "\n";
        fs::write(&path, &text).with_context(|| format!("cannot write {}", path.display()))?;
        written.push(json!({
            "file": path.display().to_string(),
            "sha256": InputDigest::of("", text.as_bytes()).sha256,
        }));
    }
    report.put("written", written);
    Ok(())
}

fn validate_cmd(source: &Source, tol: Tolerance, report: &mut Report) -> Result<()> {
    let f = load_source(source, tol, report)?;
    let g = f.ground();
    let r = validate(&f, tol)?;
    report.put("family", f.family().name());
    report.put("n", g.len());
    report.put(
        "normalized",
        json!({ "holds": r.normalized, "f(empty)": r.empty_value }),
    );
    report.put(
        "monotone",
        match &r.monotone {
            None => json!({ "holds": true }),
            Some(m) => json!({
                "holds": false,
                "j": g.label(m.j),
                "S": g.display(&m.s),
                "gain": m.gain,
            }),
        },
    );
    report.put(
        "submodular",
        match &r.submodular {
            None => json!({ "holds": true }),
            Some(v) => json!({
                "holds": false,
                "j": g.label(v.j),
                "S": g.display(&v.s),
                "T": g.display(&v.t),
                "gain_S": v.gain_s,
                "gain_T": v.gain_t,
            }),
        },
    );
    Ok(())
}
