use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use thetaur::bounds::{Entropy, ThetaContext, TightHint};
use thetaur::entanglement::{
    build_witness, detection_threshold, ppt_product_max_with, seesaw_max, SeesawOptions,
    DEFAULT_PPT_CAP,
};
use thetaur::graph::{anticommutativity_graph, clique_number, to_dot, GraphCaps, GraphJson};
use thetaur::numerics::{DensityMatrix, MatrixJson};
use thetaur::pauli::{ObservableSet, ObservableSetJson, PauliString};
use thetaur::sdp::SdpOptions;
use thetaur::theta::{lovasz_theta_with, sandwich_report_with};
use thetaur::Error;

use crate::{
    BoundsArgs, EntropyArg, Format, GraphArgs, ScanArgs, SeesawArgs, VerifyArgs, WitnessArgs,
};

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DIMENSION: u8 = 3;
pub const EXIT_CAP: u8 = 4;
pub const EXIT_UNCERTIFIED: u8 = 5;

/// Largest qubit count accepted by `scan`.
const SCAN_QUBIT_CAP: usize = 3;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::DimensionMismatch { .. }
                | Error::LengthMismatch { .. }
                | Error::LabelCountMismatch { .. } => EXIT_DIMENSION,
                Error::SizeCapExceeded { .. } | Error::DimensionCapExceeded { .. } => EXIT_CAP,
                Error::NoCertificate { .. }
                | Error::CertificateRejected { .. }
                | Error::IllConditioned { .. }
                | Error::DependentConstraints { .. }
                | Error::SandwichViolated { .. } => EXIT_UNCERTIFIED,
                _ => EXIT_PARSE,
            };
        }
        if cause.downcast_ref::<serde_json::Error>().is_some()
            || cause.downcast_ref::<std::io::Error>().is_some()
        {
            return EXIT_PARSE;
        }
    }
    1
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_set(path: &Path) -> Result<ObservableSet<f64>> {
    let parsed: ObservableSetJson = serde_json::from_str(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    parsed
        .to_set()
        .with_context(|| format!("validating {}", path.display()))
}

fn load_state(path: &Path) -> Result<DensityMatrix<f64>> {
    let parsed: MatrixJson = serde_json::from_str(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    parsed
        .to_density()
        .with_context(|| format!("validating {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &impl Serialize) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(out, &s)
}

fn sdp_options(gap_tol: Option<f64>) -> Result<SdpOptions> {
    let mut o = SdpOptions::default();
    if let Some(t) = gap_tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(
                Error::InvalidInput(format!("--gap-tol must lie in (0, 1), got {t}")).into(),
            );
        }
        o.gap_tol = t;
    }
    Ok(o)
}

fn seesaw_options(a: &SeesawArgs) -> SeesawOptions {
    SeesawOptions {
        restarts: a.restarts,
        seed: a.seed,
        jobs: a.jobs,
        ..Default::default()
    }
}

pub fn graph(a: &GraphArgs) -> Result<()> {
    let set = load_set(&a.common.input)?;
    let gbar = anticommutativity_graph(&set)?;
    let labels = set.labels();
    eprintln!("n {} edges {}", gbar.n(), gbar.edge_count());
    let out = a.common.out.as_deref();
    match a.common.format {
        Format::Json => {
            let mut v = json!({
                "n": gbar.n(),
                "edge_count": gbar.edge_count(),
                "labels": labels,
                "anticommutativity": GraphJson::from(&gbar),
            });
            if a.commutation {
                v["commutation"] = serde_json::to_value(GraphJson::from(&gbar.complement()))?;
            }
            emit_json(out, &v)
        }
        Format::Dot => {
            let mut s = to_dot(&gbar, &labels)?;
            if a.commutation {
                s.push_str(&to_dot(&gbar.complement(), &labels)?);
            }
            emit(out, &s)
        }
        Format::Text => {
            let mut s = format!("n {}\nedges {}\n", gbar.n(), gbar.edge_count());
            for (i, j) in gbar.edges() {
                let _ = writeln!(s, "{} -- {}", labels[i], labels[j]);
            }
            emit(out, &s)
        }
    }
}

fn error_field(e: &Error) -> Value {
    match e {
        Error::NonIntegerTheta { theta, advisory } => json!({
            "error": "non_integer_theta",
            "theta": theta,
            "advisory": advisory,
            "advisory_note": "conjectural (n - floor(theta))·S0; not a proven bound",
        }),
        Error::NotDichotomic { index } => json!({ "error": "not_dichotomic", "index": index }),
        other => json!({ "error": other.to_string() }),
    }
}

pub fn bounds(a: &BoundsArgs) -> Result<()> {
    let set = load_set(&a.common.input)?;
    let entropy = match a.entropy {
        EntropyArg::Shannon => Entropy::Shannon,
        EntropyArg::Tsallis => {
            if !((a.q > 1.0 && a.q < 2.0) || a.q > 3.0) {
                return Err(Error::InvalidTsallisQ { q: a.q }.into());
            }
            Entropy::Tsallis(a.q)
        }
    };
    let state = a.state.as_deref().map(load_state).transpose()?;
    let opts = sdp_options(a.common.gap_tol)?;
    let sandwich = sandwich_report_with(&set, GraphCaps::default(), &opts)?;
    let hint = TightHint::from_perfectness(&sandwich.perfect, set.is_all_pauli());
    let ctx = ThetaContext::from_certificate(sandwich.theta.clone(), hint);

    let expectation = ctx.expectation_bound().to_json();
    let variance = match ctx.variance_ur(&set) {
        Ok(r) => serde_json::to_value(r.to_json())?,
        Err(e) => error_field(&e),
    };
    let entropic = match ctx.entropic_ur(&set, entropy) {
        Ok(r) => serde_json::to_value(r.to_json())?,
        Err(e) => error_field(&e),
    };
    let mut doc = json!({
        "n": set.len(),
        "labels": set.labels(),
        "sandwich": sandwich.to_json(),
        "expectation_square": expectation,
        "variance_ur": variance,
        "entropic_ur": entropic,
    });
    if let Some(rho) = &state {
        doc["state_check"] =
            serde_json::to_value(thetaur::bounds::check_state_with(&ctx, &set, rho)?)?;
    }
    match a.common.format {
        Format::Text => {
            let s = sandwich.to_json();
            let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
            let mut t = format!(
                "n {}\nomega {}\ntheta {:.10}\nchi {}\nexpectation_square {:.10}\n",
                set.len(),
                opt(s.omega),
                s.theta,
                opt(s.chi),
                expectation.value
            );
            for key in ["variance_ur", "entropic_ur"] {
                match doc[key].get("value") {
                    Some(v) => {
                        let _ = writeln!(t, "{key} {:.10}", v.as_f64().unwrap_or(f64::NAN));
                    }
                    None => {
                        let _ = writeln!(
                            t,
                            "{key} {}",
                            doc[key]["error"].as_str().unwrap_or("unavailable")
                        );
                    }
                }
            }
            emit(a.common.out.as_deref(), &t)
        }
        _ => emit_json(a.common.out.as_deref(), &doc),
    }
}

pub fn witness(a: &WitnessArgs) -> Result<()> {
    let set_a = load_set(&a.common.input)?;
    let set_b = load_set(&a.input_b)?;
    let state = a.state.as_deref().map(load_state).transpose()?;
    let mut w = build_witness(&set_a, &set_b)?;
    let mut threshold = None;
    if let Some(rho) = &state {
        w.evaluate("state", rho)?;
        threshold = Some(detection_threshold(&w, rho)?);
    }
    let doc = json!({
        "theta_a": w.theta_a,
        "theta_b": w.theta_b,
        "theta_ab": w.theta_ab,
        "dim_a": w.dim_a,
        "dim_b": w.dim_b,
        "labels_a": w.labels_a,
        "labels_b": w.labels_b,
        "weakly_optimal_hint": w.weakly_optimal_hint,
        "evaluations": w.evaluations.iter().map(|(l, v)| json!({"label": l, "trace": v})).collect::<Vec<_>>(),
        "detection_threshold": threshold,
        "witness": MatrixJson::from_hermitian(&w.witness),
    });
    match a.common.format {
        Format::Text => {
            let mut t = format!("theta_ab {:.10}\n", w.theta_ab);
            for (l, v) in &w.evaluations {
                let _ = writeln!(t, "trace[{l}] {v:.10}");
            }
            if let Some(th) = threshold {
                let _ = writeln!(t, "detection_threshold {}", serde_json::to_string(&th)?);
            }
            emit(a.common.out.as_deref(), &t)
        }
        _ => emit_json(a.common.out.as_deref(), &doc),
    }
}

/// Slack for comparing lower and upper bounds.
const GAP_SLACK: f64 = 1e-6;

pub fn verify(a: &VerifyArgs) -> Result<()> {
    let set = load_set(&a.common.input)?;
    let opts = sdp_options(a.common.gap_tol)?;
    let gbar = anticommutativity_graph(&set)?;
    let theta = lovasz_theta_with(&gbar, set.weights(), &opts)?.value;
    let omega = clique_number(&gbar.complement())?;
    let mut doc = json!({ "n": set.len(), "theta": theta, "omega": omega });
    let mut flags = serde_json::Map::new();
    let mut seesaw_value = None;
    if a.seesaw {
        let so = seesaw_options(&a.seesaw_args);
        let r = seesaw_max(&set, &so)?;
        doc["seesaw"] = json!({
            "value": r.value,
            "seed": so.seed,
            "restarts": so.restarts,
            "best_restart": r.best_restart,
            "iterations": r.trace.len() - 1,
            "state": r.state.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
        });
        flags.insert(
            "seesaw_below_theta".into(),
            json!(r.value < theta - GAP_SLACK),
        );
        flags.insert(
            "seesaw_above_omega".into(),
            json!(r.value > omega as f64 + GAP_SLACK),
        );
        flags.insert(
            "seesaw_exceeds_theta".into(),
            json!(r.value > theta + GAP_SLACK),
        );
        seesaw_value = Some(r.value);
    }
    if a.ppt {
        let r = ppt_product_max_with(&set, DEFAULT_PPT_CAP, &opts)?;
        doc["ppt"] = json!({
            "upper_bound": r.upper_bound,
            "primal_value": r.primal_value,
            "real_formulation": r.real_formulation,
            "iterations": r.solution.iterations,
        });
        flags.insert(
            "ppt_below_theta".into(),
            json!(r.upper_bound < theta - GAP_SLACK),
        );
        if let Some(s) = seesaw_value {
            flags.insert("ppt_gap_to_seesaw".into(), json!(r.upper_bound - s));
            flags.insert(
                "seesaw_exceeds_ppt".into(),
                json!(s > r.upper_bound + GAP_SLACK),
            );
        }
    }
    doc["flags"] = Value::Object(flags);
    emit_json(a.common.out.as_deref(), &doc)
}

#[derive(Serialize)]
struct ScanRow {
    observables: Vec<String>,
    omega: usize,
    theta: f64,
    seesaw: f64,
    gap: f64,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn subsets_up_to(pool: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, pool: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for i in start..pool {
            cur.push(i);
            go(i + 1, pool, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, pool, k, &mut Vec::new(), &mut out);
    out
}

pub fn scan(a: &ScanArgs) -> Result<()> {
    if a.qubits == 0 {
        return Err(Error::InvalidInput("--qubits must be positive".into()).into());
    }
    if a.qubits > SCAN_QUBIT_CAP {
        return Err(Error::SizeCapExceeded {
            what: "scan qubits",
            size: a.qubits,
            cap: SCAN_QUBIT_CAP,
        }
        .into());
    }
    let pool = 4usize.pow(a.qubits as u32) - 1;
    let k = a.max_set_size.min(pool);
    if k == 0 {
        return Err(Error::InvalidInput("--max-set-size must be positive".into()).into());
    }
    let opts = sdp_options(a.gap_tol)?;
    let total: u128 = (1..=k).map(|s| binomial(pool, s)).sum();
    let exhaustive = total <= a.samples as u128;
    let subsets: Vec<Vec<usize>> = if exhaustive {
        subsets_up_to(pool, k)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seesaw_args.seed);
        (0..a.samples)
            .map(|_| {
                let size = rng.random_range(1..=k);
                let mut idx = sample(&mut rng, pool, size).into_vec();
                idx.sort_unstable();
                idx
            })
            .collect()
    };

    let mut rows = Vec::with_capacity(subsets.len());
    let mut violations = 0usize;
    for (r, subset) in subsets.iter().enumerate() {
        let paulis: Vec<PauliString> = subset
            .iter()
            .map(|&i| PauliString::from_index(a.qubits, i as u64 + 1))
            .collect();
        let set = ObservableSet::<f64>::from_paulis(paulis)?;
        let gbar = anticommutativity_graph(&set)?;
        let theta = lovasz_theta_with(&gbar, set.weights(), &opts)?.value;
        let omega = clique_number(&gbar.complement())?;
        let so = SeesawOptions {
            seed: a.seesaw_args.seed.wrapping_add(r as u64),
            ..seesaw_options(&a.seesaw_args)
        };
        let seesaw = seesaw_max(&set, &so)?.value;
        if (omega as f64) > seesaw + GAP_SLACK || seesaw > theta + GAP_SLACK {
            violations += 1;
        }
        rows.push(ScanRow {
            observables: set.labels(),
            omega,
            theta,
            seesaw,
            gap: theta - omega as f64,
        });
    }
    rows.sort_by(|x, y| y.gap.total_cmp(&x.gap));

    match a.format {
        Format::Text => {
            let mut t = String::from("gap\ttheta\tomega\tseesaw\tobservables\n");
            for row in &rows {
                let _ = writeln!(
                    t,
                    "{:.6}\t{:.6}\t{}\t{:.6}\t{}",
                    row.gap,
                    row.theta,
                    row.omega,
                    row.seesaw,
                    row.observables.join(",")
                );
            }
            emit(a.out.as_deref(), &t)
        }
        _ => emit_json(
            a.out.as_deref(),
            &json!({
                "qubits": a.qubits,
                "max_set_size": k,
                "samples": rows.len(),
                "seed": a.seesaw_args.seed,
                "exhaustive": exhaustive,
                "invariant_violations": violations,
                "rows": rows,
            }),
        ),
    }
}
