use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use qaoa_decode::archive::{optimize_all_syndromes, optimize_syndrome, AngleArchive, OptimizedSyndrome};
use qaoa_decode::catalog;
use qaoa_decode::curve::{channel_for, error_rate_curve, write_csv, CurveConfig, CurveLabels};
use qaoa_decode::decoder::{CosetLeaderDecoder, QaoaDecoder, SyndromeDecoder, COSET_LEADER_MAX_BITS};
use qaoa_decode::graph::{qaoa_maxcut, Graph};
use qaoa_decode::hamiltonian::DEFAULT_QUBIT_CAP;
use qaoa_decode::metrics::distribution_report;
use qaoa_decode::optimizer::optimize;
use qaoa_decode::{BitVector, Code, Construction, DecodingProblem, Objective, Schedule};
use serde_json::{json, Value};

use crate::config::{load_code, DecoderName, RunConfig};

/// Stdout writes that stop quietly when the reader goes away.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn print_json(v: &Value) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v)?))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn dry_run(command: &str, cfg: &RunConfig, extra: Value) -> Result<()> {
    print_json(&json!({ "dry_run": true, "command": command, "config": cfg, "checks": extra }))
}

/// `# key: value` lines put in front of text outputs.
fn metadata(command: &str, cfg: &RunConfig) -> String {
    format!(
        "# qaoa-decode {command}\n# seed: {}\n# config: {}\n",
        cfg.seed(),
        serde_json::to_string(cfg).expect("config serializes")
    )
}

fn check_register(problem: &DecodingProblem) -> Result<usize> {
    let m = problem.qubits();
    ensure!(m <= DEFAULT_QUBIT_CAP, "{m} qubits exceeds the simulator cap of {DEFAULT_QUBIT_CAP}");
    Ok(m)
}

fn warn_selection_rule(problem: &DecodingProblem) {
    if let Some(pen) = problem.construction.penalty() {
        if !pen.satisfies_selection_rule() {
            eprintln!(
                "warning: eta = {} < alpha = {} breaks the selection rule eta >= alpha; \
                 a weight-one error can score below the all-zero vector",
                pen.eta, pen.alpha
            );
        }
    }
}

pub fn codes_list() -> Result<()> {
    let text: String = catalog::list().map(|(id, desc)| format!("{id}\t{desc}\n")).collect();
    emit(&text)
}

pub fn codes_show(id: &str, as_json: bool) -> Result<()> {
    let def = match catalog::definition(id) {
        Ok(def) => def,
        Err(_) => load_code(id)?.definition(),
    };
    if as_json {
        return emit(&format!("{}\n", serde_json::to_string(&def)?));
    }
    let code = def.build()?;
    let quantum = matches!(code, Code::Quantum(_));
    let row = |bits: &Vec<u8>| {
        let mut s: String = bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect();
        if quantum {
            s.insert(bits.len() / 2, '|');
        }
        s
    };
    let mut text = format!(
        "{}\t{}\tn={}\tk={}\tchecks={}\n",
        def.name,
        if quantum { "quantum" } else { "classical" },
        def.n,
        def.k,
        code.r()
    );
    text.push_str(if quantum { "H_S (X|Z):\n" } else { "H:\n" });
    for r in &def.rows_h {
        text.push_str(&format!("  {}\n", row(r)));
    }
    let g = match &code {
        Code::Classical(c) => c.g.row_iter().map(|r| r.to_bits()).collect::<Vec<_>>(),
        Code::Quantum(q) => q.g_s.row_iter().map(|r| r.to_bits()).collect(),
    };
    text.push_str(if quantum { "G_S (X|Z):\n" } else { "G:\n" });
    for r in &g {
        text.push_str(&format!("  {}\n", row(r)));
    }
    emit(&text)
}

/// Syndrome and optional explicit offset from `--syndrome` / `--offset`.
fn syndrome_and_offset(cfg: &RunConfig, code: &Code) -> Result<(BitVector, Option<BitVector>)> {
    let s = cfg.syndrome_for(code)?;
    let z = cfg.offset_for(code)?;
    match (s, z) {
        (None, None) => bail!("give --syndrome or --offset"),
        (Some(s), None) => {
            code.coset_representative(&s)
                .with_context(|| format!("syndrome {s} is not reachable"))?;
            Ok((s, None))
        }
        (s, Some(z)) => {
            let sz = code.syndrome(&z)?;
            if let Some(s) = s {
                ensure!(s == sz, "offset has syndrome {sz}, not {s}");
            }
            Ok((sz, Some(z)))
        }
    }
}

pub fn ham(cfg: &RunConfig, dry: bool) -> Result<()> {
    let problem = cfg.problem()?;
    warn_selection_rule(&problem);
    let m = check_register(&problem)?;
    let (s, z) = syndrome_and_offset(cfg, &problem.code)?;
    if dry {
        return dry_run("ham", cfg, json!({ "qubits": m, "syndrome": s.to_string() }));
    }
    let inst = match &z {
        Some(z) => problem.instance_with_offset::<f64>(z)?,
        None => problem.instance::<f64>(&s)?,
    };
    let dump = inst.hamiltonian.to_dump();
    match &cfg.out {
        Some(path) => {
            let header = format!(
                "{}# syndrome: {}\n# offset: {}\n",
                metadata("ham", cfg),
                inst.syndrome,
                inst.offset
            );
            write_file(path, format!("{header}{dump}").as_bytes())?;
            eprintln!("wrote {} terms on {m} qubits to {}", inst.hamiltonian.terms().len(), path.display());
        }
        None => emit(&dump)?,
    }
    Ok(())
}

fn record_json(o: &OptimizedSyndrome) -> Value {
    json!({
        "syndrome": o.record.syndrome,
        "F_p": o.record.f_p,
        "spectrum_max": o.spectrum_max,
        "spectrum_min": o.spectrum_min,
        "normalized": o.normalized(),
        "gammas": o.record.gammas,
        "betas": o.record.betas,
        "strategy": o.record.strategy,
    })
}

pub fn angles_optimize(cfg: &RunConfig, dry: bool) -> Result<()> {
    let problem = cfg.problem()?;
    warn_selection_rule(&problem);
    let m = check_register(&problem)?;
    let p = cfg.p()?;
    let strategy = cfg.strategy()?;
    let archive_path = cfg.archive.as_deref().context("no archive given (--archive)")?;
    let all = cfg.all_syndromes.unwrap_or(false);
    let syndromes = if all {
        problem.code.reachable_syndromes()
    } else {
        let (s, _) = syndrome_and_offset(cfg, &problem.code)
            .context("give --syndrome or --all-syndromes")?;
        vec![s]
    };
    let mut archive = if archive_path.exists() {
        AngleArchive::load(archive_path)?
    } else {
        AngleArchive::new()
    };
    if dry {
        return dry_run(
            "angles optimize",
            cfg,
            json!({ "qubits": m, "syndromes": syndromes.len(), "archive_records": archive.len() }),
        );
    }
    let runs = if all {
        optimize_all_syndromes(&problem, p, strategy, cfg.seed())?
    } else {
        vec![optimize_syndrome(&problem, &syndromes[0], p, strategy, cfg.seed())?]
    };
    archive.extend(runs.iter().map(|o| o.record.clone()));
    archive.save(archive_path)?;

    let normalized: Vec<f64> = runs.iter().map(OptimizedSyndrome::normalized).collect();
    let avg = normalized.iter().sum::<f64>() / normalized.len() as f64;
    let min = normalized.iter().copied().fold(f64::INFINITY, f64::min);
    let summary = json!({
        "command": "angles optimize",
        "config": cfg,
        "archive": archive_path,
        "records": runs.iter().map(record_json).collect::<Vec<_>>(),
        "avg_normalized_F_p": avg,
        "min_normalized_F_p": min,
    });
    if let Some(path) = &cfg.summary {
        write_file(path, serde_json::to_string_pretty(&summary)?.as_bytes())?;
    }
    print_json(&summary)
}

/// `Some(d)` when the code is perfect: the patterns of weight `≤ t` fill the
/// syndrome space exactly, so `d = 2t + 1`.
fn perfect_distance(code: &Code) -> Option<usize> {
    let len = code.error_len();
    if len > COSET_LEADER_MAX_BITS {
        return None;
    }
    let cosets = code.reachable_syndromes().len();
    let mut by_weight = vec![Vec::new(); code.n() + 1];
    for x in 0..1u64 << len {
        let e = BitVector::from_u64(x, len);
        by_weight[code.error_weight(&e)].push(e);
    }
    let mut seen = std::collections::HashSet::new();
    for (t, patterns) in by_weight.iter().enumerate() {
        for e in patterns {
            if !seen.insert(code.syndrome(e).ok()?) {
                return None;
            }
        }
        if seen.len() == cosets {
            return Some(2 * t + 1);
        }
    }
    None
}

pub fn decode_curve(cfg: &RunConfig, dry: bool) -> Result<()> {
    let problem = cfg.problem()?;
    let code = problem.code.clone();
    let epsilons = cfg.epsilons.clone().context("no channel parameters given (--epsilons)")?;
    ensure!(!epsilons.is_empty(), "--epsilons is empty");
    for &eps in &epsilons {
        channel_for(&code, eps)?;
    }
    let mut curve = CurveConfig::new(epsilons, cfg.seed());
    curve.max_failures = cfg.max_failures.unwrap_or(curve.max_failures);
    curve.max_trials = cfg.max_trials.unwrap_or(curve.max_trials);
    ensure!(curve.max_failures > 0 && curve.max_trials > 0, "stop limits must be positive");
    let kind = cfg.decoder.unwrap_or(DecoderName::Qaoa);

    let (decoder, labels): (Box<dyn SyndromeDecoder>, CurveLabels) = match kind {
        DecoderName::Qaoa => {
            warn_selection_rule(&problem);
            check_register(&problem)?;
            let p = cfg.p()?;
            let shots = cfg.shots.context("no shot count given (--shots)")?;
            ensure!(shots > 0, "--shots must be positive");
            let path = cfg.archive.as_deref().context("the qaoa decoder needs --archive")?;
            let archive = AngleArchive::load(path)?;
            let missing: Vec<String> = code
                .reachable_syndromes()
                .into_iter()
                .filter(|s| !s.is_zero() && archive.lookup(&problem, p, s).is_none())
                .map(|s| s.to_string())
                .collect();
            if !missing.is_empty() {
                bail!(
                    "archive {} has no p={p} angles for syndromes {}; run `angles optimize --all-syndromes` first",
                    path.display(),
                    missing.join(", ")
                );
            }
            if dry {
                return dry_run("decode curve", cfg, json!({ "decoder": "qaoa", "archive_records": archive.len() }));
            }
            let labels = CurveLabels {
                decoder: format!("qaoa-{}", problem.construction.kind()),
                code: code.name().to_string(),
                p: Some(p),
                shots: Some(shots),
            };
            (Box::new(QaoaDecoder::new(problem, &archive, p, shots)?), labels)
        }
        DecoderName::CosetLeader => {
            ensure!(
                code.error_len() <= COSET_LEADER_MAX_BITS,
                "coset-leader enumeration is limited to {COSET_LEADER_MAX_BITS} error bits"
            );
            if dry {
                return dry_run("decode curve", cfg, json!({ "decoder": "coset-leader" }));
            }
            let labels = CurveLabels {
                decoder: "coset-leader".into(),
                code: code.name().to_string(),
                p: None,
                shots: None,
            };
            (Box::new(CosetLeaderDecoder::new(code.clone())?), labels)
        }
    };
    let points = error_rate_curve(decoder.as_ref(), &curve)?;
    let bdd = perfect_distance(&code).map(|d| (code.n(), d));
    let mut buf = metadata("decode curve", cfg).into_bytes();
    write_csv(&mut buf, &points, &labels, bdd)?;
    match &cfg.out {
        Some(path) => write_file(path, &buf)?,
        None => emit(std::str::from_utf8(&buf)?)?,
    }
    Ok(())
}

pub fn dist_report(cfg: &RunConfig, dry: bool) -> Result<()> {
    let code = cfg.code()?;
    let Code::Quantum(q) = &code else {
        bail!("distribution reports need a stabilizer code");
    };
    let z = cfg.offset_for(&code)?.context("no error given (--error)")?;
    let eps = match cfg.epsilons.as_deref() {
        Some([e]) => *e,
        _ => bail!("give exactly one depolarizing rate (--epsilon)"),
    };
    ensure!(eps > 0.0 && eps < 0.75, "depolarizing rate must lie in (0, 0.75), got {eps}");
    let problem = DecodingProblem::new(code.clone(), Construction::Generator);
    let m = check_register(&problem)?;
    let p = cfg.p()?;
    let top = cfg.top.unwrap_or(5);
    let s = code.syndrome(&z)?;

    let explicit = match (&cfg.gammas, &cfg.betas) {
        (Some(g), Some(b)) => {
            let sched = Schedule::new(g.clone(), b.clone())?;
            ensure!(sched.p() == p || cfg.p.is_none(), "--p {p} disagrees with {} given angles", sched.p());
            Some((sched, "explicit".to_string()))
        }
        (None, None) => None,
        _ => bail!("give both --gammas and --betas"),
    };
    let archived = match (&explicit, &cfg.archive) {
        (None, Some(path)) => {
            let archive = AngleArchive::load(path)?;
            let rec = archive
                .lookup(&problem, p, &s)
                .with_context(|| format!("archive {} has no p={p} generator angles for syndrome {s}", path.display()))?;
            Some((rec.schedule()?, format!("archive {}", path.display())))
        }
        _ => None,
    };
    let strategy = cfg.strategy()?;
    if dry {
        return dry_run("dist report", cfg, json!({ "qubits": m, "syndrome": s.to_string() }));
    }
    let (sched, source) = match explicit.or(archived) {
        Some(x) => x,
        None => {
            let h = problem.instance_with_offset::<f64>(&z)?.hamiltonian;
            let report = optimize(&Objective::new(&h, p)?, strategy, cfg.seed())?;
            (report.best, report.strategy)
        }
    };
    let report = distribution_report(q, &z, eps, &sched, top)?;
    if let Some(path) = &cfg.out {
        let mut buf = metadata("dist report", cfg).into_bytes();
        report.write_csv(&mut buf)?;
        write_file(path, &buf)?;
    }
    let mut summary = report.summary_json();
    summary["angles_source"] = json!(source);
    summary["config"] = json!(cfg);
    if let Some(path) = &cfg.summary {
        write_file(path, serde_json::to_string_pretty(&summary)?.as_bytes())?;
    }
    print_json(&summary)
}

pub fn maxcut_solve(cfg: &RunConfig, dry: bool) -> Result<()> {
    let path = cfg.graph.as_deref().context("no graph file given")?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graph = Graph::parse_edge_list(&text).with_context(|| format!("in {}", path.display()))?;
    let p = cfg.p()?;
    let shots = cfg.shots.unwrap_or(100);
    ensure!(shots > 0, "--shots must be positive");
    let strategy = cfg.strategy()?;
    ensure!(
        graph.vertices() <= DEFAULT_QUBIT_CAP,
        "{} vertices exceeds the simulator cap of {DEFAULT_QUBIT_CAP}",
        graph.vertices()
    );
    if dry {
        return dry_run(
            "maxcut solve",
            cfg,
            json!({ "vertices": graph.vertices(), "edges": graph.edges().len() }),
        );
    }
    let run = qaoa_maxcut(&graph, p, shots, strategy, cfg.seed())?;
    let mut out = json!({
        "command": "maxcut solve",
        "config": cfg,
        "vertices": graph.vertices(),
        "edges": graph.edges().len(),
        "cut": run.cut,
        "assignment": run.assignment.to_string(),
        "F_p": run.f_p,
        "gammas": run.schedule.gammas(),
        "betas": run.schedule.betas(),
    });
    if let (Some(opt), Some(ratio)) = (run.optimum, run.ratio()) {
        out["optimum"] = json!(opt);
        out["ratio"] = json!(ratio);
    }
    print_json(&out)
}
