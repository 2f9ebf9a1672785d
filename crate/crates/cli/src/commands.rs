//! Subcommand implementations.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use groupapprox::approx::{self, Evidence, LowerBound};
use groupapprox::bounds;
use groupapprox::catalog::catalog_up_to;
use groupapprox::constructions::{self, Partition};
use groupapprox::group::{construct_with, ConstructOptions};
use groupapprox::jk::{self, JkElement, JkParams, VerifyMode};
use groupapprox::morphism;
use groupapprox::{FamilyKind, Group, GroupFunction};
use serde_json::{json, Value};

use crate::report::{document, to_value, VERSION};
use crate::{
    BoundsArgs, Cache, Command, ComputeArgs, Env, Metric, Mode, PartitionArgs, Reply, TableArgs, VerifyJkArgs,
    WitnessArgs, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Limit(String),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Limit(_) => EXIT_LIMIT,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Limit(m) => f.write_str(m),
        }
    }
}

impl From<groupapprox::Error> for CliError {
    fn from(e: groupapprox::Error) -> Self {
        match e {
            groupapprox::Error::Capacity(_) => CliError::Limit(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn execute(command: &Command, env: &Env) -> Result<Reply> {
    match command {
        Command::Compute(a) => compute(a, env),
        Command::Table(a) => table(a),
        Command::VerifyJk(a) => verify_jk(a),
        Command::Bounds(a) => bounds_cmd(a),
        Command::PartitionAvoid(a) => partition_avoid(a),
        Command::Witness(a) => witness(a),
    }
}

/// `min(n, floor(main bound))`: an upper bound valid for every group of
/// order `n`.
fn theorem_upper(n: usize, kind: FamilyKind) -> usize {
    if n < 2 {
        return 1;
    }
    let b = bounds::main_theorem_bounds(n).expect("n >= 2");
    let v = match kind {
        FamilyKind::Endo => b.endo,
        FamilyKind::Affine => b.affine,
    };
    n.min((v + 1e-9).floor() as usize)
}

fn trivial_lower(kind: FamilyKind) -> LowerBound {
    match kind {
        FamilyKind::Endo => LowerBound {
            value: 0,
            evidence: Evidence::None,
        },
        FamilyKind::Affine => LowerBound {
            value: 1,
            evidence: Evidence::Constants,
        },
    }
}

fn compute(args: &ComputeArgs, env: &Env) -> Result<Reply> {
    let spec = args.group.to_string();
    let metric = args.metric;
    let kind = metric.kind();
    let cache = match (&env.cache_dir, args.no_cache) {
        (Some(dir), false) => Some(Cache::new(dir, VERSION)),
        _ => None,
    };
    if !args.bounds_only {
        if let Some(doc) = cache.as_ref().and_then(|c| c.get(&spec, metric.name())) {
            let mut doc = doc;
            doc["cached"] = Value::Bool(true);
            let human = compute_human(&doc);
            return Ok(Reply {
                status: EXIT_OK,
                document: document("compute", doc),
                human,
            });
        }
    }
    let group = construct_with(
        &args.group,
        ConstructOptions {
            allow_large_jk: args.allow_large,
        },
    )?;
    let n = group.order();
    let start = Instant::now();
    let endos = match morphism::enumerate_endomorphisms(&group) {
        Ok(e) => e,
        Err(groupapprox::Error::Capacity(message)) => {
            let fields = bounds_only_fields(&spec, &group, metric, trivial_lower(kind), Vec::new(), start);
            let mut doc = document("compute", fields);
            doc["note"] = Value::String(message);
            return Ok(Reply {
                status: EXIT_LIMIT,
                human: compute_human(&doc),
                document: doc,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let lbs = approx::lower_bounds_from(&group, &endos);
    let lower = lbs.for_kind(kind).clone();
    if args.bounds_only {
        let fields = bounds_only_fields(&spec, &group, metric, lower, lbs.evidence, start);
        let doc = document("compute", fields);
        return Ok(Reply {
            status: EXIT_OK,
            human: compute_human(&doc),
            document: doc,
        });
    }
    let family = groupapprox::Family::from_endos(&group, kind, endos);
    let cert = approx::worst_case_with(&family, lower, args.budget);
    let upper = cert.upper.min(theorem_upper(n, kind));
    let fields = json!({
        "group": spec,
        "order": n,
        "metric": metric.name(),
        "cached": false,
        "certificate": {
            "exact": cert.exact,
            "value": cert.value,
            "lower": cert.lower,
            "upper": upper,
            "lower_bound": to_value(&cert.lower_bound),
            "witness": cert.witness.as_ref().map(|w| w.images().to_vec()),
            "best_map": cert.best_map.as_ref().map(|m| json!({
                "constant": m.constant,
                "endomorphism": m.endo.images(),
            })),
        },
        "evidence": to_value(&lbs.evidence),
        "stats": {
            "nodes": cert.stats.nodes,
            "duration_ms": start.elapsed().as_secs_f64() * 1e3,
            "refuted_thresholds": cert.stats.refuted_thresholds,
        },
    });
    let doc = document("compute", fields);
    if cert.exact {
        if let Some(c) = &cache {
            if let Err(e) = c.put(&spec, metric.name(), &doc) {
                log::warn!("cannot write cache in {}: {e}", c.dir().display());
            }
        }
    }
    Ok(Reply {
        status: if cert.exact { EXIT_OK } else { EXIT_LIMIT },
        human: compute_human(&doc),
        document: doc,
    })
}

fn bounds_only_fields(
    spec: &str,
    group: &Group,
    metric: Metric,
    lower: LowerBound,
    evidence: Vec<Evidence>,
    start: Instant,
) -> Value {
    let n = group.order();
    json!({
        "group": spec,
        "order": n,
        "metric": metric.name(),
        "cached": false,
        "certificate": {
            "exact": false,
            "value": null,
            "lower": lower.value,
            "upper": theorem_upper(n, metric.kind()),
            "lower_bound": to_value(&lower),
            "witness": null,
            "best_map": null,
        },
        "evidence": to_value(&evidence),
        "stats": {
            "nodes": 0,
            "duration_ms": start.elapsed().as_secs_f64() * 1e3,
            "refuted_thresholds": [],
        },
    })
}

fn compute_human(doc: &Value) -> String {
    let c = &doc["certificate"];
    let value = if c["exact"] == true {
        format!("= {}", c["value"])
    } else {
        format!("in [{}, {}]", c["lower"], c["upper"])
    };
    let cached = if doc["cached"] == true { " (cached)" } else { "" };
    format!("{}({}) {}{}\n", doc["metric"].as_str().unwrap_or("?"), doc["group"].as_str().unwrap_or("?"), value, cached)
}

fn table(args: &TableArgs) -> Result<Reply> {
    let entries = catalog_up_to(args.max_order)?;
    let mut rows = Vec::new();
    let mut all_exact = true;
    let mut human = format!("{:<12} {:>5} {:>6} {:>7}\n", "group", "order", "enapp", "affapp");
    for e in entries {
        let endos = morphism::enumerate_endomorphisms(&e.group)?;
        let lbs = approx::lower_bounds_from(&e.group, &endos);
        let mut cell = |kind: FamilyKind| {
            let family = groupapprox::Family::from_endos(&e.group, kind, endos.clone());
            let cert = approx::worst_case_with(&family, lbs.for_kind(kind).clone(), args.budget);
            all_exact &= cert.exact;
            json!({
                "exact": cert.exact,
                "value": cert.value,
                "lower": cert.lower,
                "upper": cert.upper.min(theorem_upper(e.group.order(), kind)),
                "lower_bound": to_value(lbs.for_kind(kind)),
                "witness": cert.witness.as_ref().map(|w| w.images().to_vec()),
            })
        };
        let enapp = cell(FamilyKind::Endo);
        let affapp = cell(FamilyKind::Affine);
        let show = |c: &Value| match c["value"].as_u64() {
            Some(v) => v.to_string(),
            None => format!("{}..{}", c["lower"], c["upper"]),
        };
        human.push_str(&format!(
            "{:<12} {:>5} {:>6} {:>7}\n",
            e.label,
            e.group.order(),
            show(&enapp),
            show(&affapp)
        ));
        rows.push(json!({
            "label": e.label,
            "group": e.spec.to_string(),
            "order": e.group.order(),
            "enapp": enapp,
            "affapp": affapp,
        }));
    }
    let doc = document(
        "table",
        json!({
            "max_order": args.max_order,
            "budget": args.budget,
            "rows": rows,
        }),
    );
    Ok(Reply {
        status: if all_exact { EXIT_OK } else { EXIT_LIMIT },
        document: doc,
        human,
    })
}

fn parse_lambda(s: &str) -> Result<(u64, u64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<u64>().map_err(|_| CliError::Usage(format!("bad lambda {s:?}")));
    match parts.as_slice() {
        [a, b] => Ok((num(a)?, num(b)?)),
        _ => Err(CliError::Usage(format!("lambda must be L1,L2, got {s:?}"))),
    }
}

fn read_matrix(path: &Path) -> Result<[[u64; 4]; 4]> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<u64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad sigma matrix in {}: {e}", path.display())))?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(CliError::Usage(format!("{} must hold four rows of four integers", path.display())));
    }
    let mut m = [[0u64; 4]; 4];
    for (i, r) in rows.iter().enumerate() {
        m[i].copy_from_slice(r);
    }
    Ok(m)
}

fn verify_jk(args: &VerifyJkArgs) -> Result<Reply> {
    let start = Instant::now();
    let (l1, l2) = parse_lambda(&args.lambda)?;
    let params = JkParams::new(args.p, l1, l2)?;
    jk::jk_power_formula(&params, &JkElement::IDENTITY)?;
    if args.p > 3 && args.mode == Mode::Full {
        return Err(CliError::Usage("p > 3 supports sampled mode only".into()));
    }
    let group = jk::jk_group(&params, args.allow_large)?;
    let sigma = match args.sigma.as_str() {
        "singer" => jk::singer_sigma(args.p)?,
        path => jk::make_sigma(args.p, read_matrix(Path::new(path))?)?,
    };

    // Arithmetic gate: the closed-form power and associativity must hold
    // before the scan means anything.
    let n = params.order();
    let exhaustive_gate = args.p == 3;
    let gate_elements: Vec<usize> = if exhaustive_gate {
        (0..n).collect()
    } else {
        (0..n).step_by((n / 100_000).max(1)).collect()
    };
    let power_failures = gate_elements
        .iter()
        .filter(|&&i| {
            let x = JkElement::decode(&params, i);
            jk::jk_power(&params, &x, args.p) != jk::jk_power_formula(&params, &x).expect("lambda2 = 1")
        })
        .count();
    let validation = group.validate();
    let gate_passed = power_failures == 0 && validation.passed();

    let f = jk::final_prop_function(&group, &params, &sigma)?;
    let mode = match args.mode {
        Mode::Full => VerifyMode::Full,
        Mode::Sampled => VerifyMode::Sampled {
            samples: args.samples,
            seed: args.seed,
        },
    };
    let scan = jk::verify_affapp_one(&params, &f, mode)?;
    let zero = jk::jk_enapp_zero_witness(&group, &params)?;
    let zero_failures = (0..n)
        .filter(|&i| {
            let x = JkElement::decode(&params, i);
            let y = JkElement::decode(&params, zero.apply(i));
            jk::endo_reachable(&params, &x, &y).expect("lambda2 = 1")
        })
        .count();
    let passed = gate_passed && scan.passed() && zero_failures == 0;
    let doc = document(
        "verify-jk",
        json!({
            "params": {"p": args.p, "lambda": [l1, l2]},
            "sigma": {"matrix": sigma.matrix(), "order": sigma.order()},
            "gate": {
                "power_formula_checked": gate_elements.len(),
                "power_formula_failures": power_failures,
                "power_formula_exhaustive": exhaustive_gate,
                "validation_passed": validation.passed(),
                "validation_failure": validation.first_failure(),
            },
            "affapp_one": to_value(&scan),
            "enapp_zero": {"arguments_scanned": n, "failures": zero_failures},
            "passed": passed,
            "duration_ms": start.elapsed().as_secs_f64() * 1e3,
        }),
    );
    let human = format!(
        "jk({},{},{}) {:?}: {} pairs, {} violations, enapp-zero failures {}, gate {}\n",
        args.p,
        l1,
        l2,
        args.mode,
        scan.pairs_scanned,
        scan.violation_count,
        zero_failures,
        if gate_passed { "ok" } else { "FAILED" }
    );
    Ok(Reply {
        status: if passed { EXIT_OK } else { EXIT_VIOLATION },
        document: doc,
        human,
    })
}

fn parse_fval(s: &str, m1: usize) -> Result<(f64, String)> {
    if s == "log2" {
        return Ok(((m1 as f64).log2(), "log2".into()));
    }
    if let Ok(v) = s.trim().parse::<f64>() {
        return Ok((v, "literal".into()));
    }
    let text = std::fs::read_to_string(s).map_err(|e| CliError::Usage(format!("--f {s:?}: {e}")))?;
    let v = text
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("{s} does not hold a number")))?;
    Ok((v, "file".into()))
}

fn bounds_cmd(args: &BoundsArgs) -> Result<Reply> {
    let (fval, source) = parse_fval(&args.fval, args.m1)?;
    let report = bounds::gen_app_bounds(args.m1, args.m2, fval)?;
    let mut fields = to_value(&report);
    fields["fval_source"] = Value::String(source);
    let human = format!(
        "m1={} m2={} fval={:.6}: lower {} upper {:.6} ({:?})\n",
        report.m1, report.m2, report.fval, report.lower_exact, report.upper, report.upper_branch
    );
    Ok(Reply {
        status: EXIT_OK,
        document: document("bounds", fields),
        human,
    })
}

fn partition_avoid(args: &PartitionArgs) -> Result<Reply> {
    if args.classes.contains(&0) {
        return Err(CliError::Usage("class sizes must be positive".into()));
    }
    let partition = Partition::from_sizes(&args.classes)?;
    let perm = constructions::build_avoiding_permutation(&partition);
    let human = match &perm {
        Some(p) => format!("avoiding permutation: {p:?}\n"),
        None => "no avoiding permutation (a class exceeds half the points)\n".to_string(),
    };
    let doc = document(
        "partition-avoid",
        json!({
            "sizes": args.classes,
            "m": partition.m(),
            "classes": partition.classes(),
            "exists": perm.is_some(),
            "permutation": perm,
        }),
    );
    Ok(Reply {
        status: EXIT_OK,
        document: doc,
        human,
    })
}

/// The witness named on the command line, with its metric and known value
/// (`None` when only an upper bound is known).
fn named_witness(name: &str) -> Result<(GroupFunction, FamilyKind, Option<usize>, Option<usize>)> {
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad number {t:?} in witness {name:?}")))
    };
    Ok(match head {
        "cyclic-enapp" => (constructions::cyclic_enapp_witness(num(arg)?)?, FamilyKind::Endo, Some(1), None),
        "prime-square" => (constructions::prime_square_witness(num(arg)?)?, FamilyKind::Affine, Some(2), None),
        "rem-quot" => {
            let (p, k) = arg
                .split_once(',')
                .ok_or_else(|| CliError::Usage("rem-quot needs P,K".into()))?;
            let p = num(p)?;
            let k = u32::try_from(num(k)?).map_err(|_| CliError::Usage("k too large".into()))?;
            (constructions::rem_quot_witness(p, k)?, FamilyKind::Affine, None, Some(p))
        }
        "z6-swap" | "klein" | "sym3" if arg.is_empty() => {
            let w = constructions::small_group_witnesses()
                .into_iter()
                .find(|w| w.name == head)
                .expect("known witness");
            (w.function, w.metric, Some(w.value), None)
        }
        _ => return Err(CliError::Usage(format!("unknown witness {name:?}"))),
    })
}

fn witness(args: &WitnessArgs) -> Result<Reply> {
    let (f, kind, value, at_most) = named_witness(&args.name)?;
    let (measured, _) = approx::approximability(&f, kind)?;
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        let write = |w: &mut csv::Writer<std::fs::File>| -> std::result::Result<(), csv::Error> {
            w.write_record(["index", "image"])?;
            for (i, y) in f.images().iter().enumerate() {
                w.write_record([i.to_string(), y.to_string()])?;
            }
            w.flush()?;
            Ok(())
        };
        write(&mut w).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let metric = match kind {
        FamilyKind::Endo => "enapp",
        FamilyKind::Affine => "affapp",
    };
    let doc = document(
        "witness",
        json!({
            "name": args.name,
            "group": f.group().name(),
            "order": f.group().order(),
            "metric": metric,
            "expected": value,
            "expected_at_most": at_most,
            "measured": measured,
            "images": f.images(),
        }),
    );
    let consistent = value.is_none_or(|v| v == measured) && at_most.is_none_or(|v| measured <= v);
    Ok(Reply {
        status: if consistent { EXIT_OK } else { EXIT_VIOLATION },
        human: format!("{} on {}: {metric} = {measured}\n", args.name, f.group().name()),
        document: doc,
    })
}
