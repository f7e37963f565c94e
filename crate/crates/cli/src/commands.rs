use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use ldpc_distance::distance::{
    binomial_u64, distance_cs, distance_exhaustive, distance_mb, distance_sw,
    mb_patterns_per_round, sw_window_len, sw_window_weights, CsOptions, MbOptions, SwOptions,
};
use ldpc_distance::ensembles::{detect_regular, random_subset, sample_a_with_budget, sample_b};
use ldpc_distance::spectra::{generic_exponents, ldpc_exponents, theta_star};
use ldpc_distance::{
    BitMatrix, Code, DistanceResult, Ensemble, EnsembleSpec, Seed, SpectrumParams, ThresholdReport,
};
use rayon::prelude::*;
use serde_json::json;

use crate::alist::{read_alist, to_alist_string};
use crate::args::{
    Algorithm, BenchArgs, Cli, Command, DistanceArgs, EnsembleArgs, ErasureArgs, FigureArgs, PairArgs,
    SampleArgs, SearchArgs,
};
use crate::error::{CliError, EXIT_INCONCLUSIVE, EXIT_INTERNAL, EXIT_OK};
use crate::record::{
    BenchRow, ErasurePoint, ErasureStats, FigureRow, Input, RunRecord, RunResult, SampleSummary, TOOL_VERSION,
};

/// A finished run: the record, a human-readable summary, and the primary
/// artifact (alist or CSV) for commands that produce one.
#[derive(Debug, Clone)]
pub struct Output {
    pub record: RunRecord,
    pub text: String,
    pub artifact: Option<String>,
}

struct Partial {
    input: Option<Input>,
    parameters: serde_json::Value,
    result: RunResult,
    text: String,
    artifact: Option<String>,
}

/// Runs `cli` on a pool of `--threads` workers.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let start = Instant::now();
    let seed = Seed(cli.global.seed);
    let partial = match cli.global.threads {
        Some(0) => return Err(CliError::Input("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .install(|| dispatch(&cli.command, seed))?,
        None => dispatch(&cli.command, seed)?,
    };
    let name = match &cli.command {
        Command::Sample(_) => "sample",
        Command::Distance(_) => "distance",
        Command::Thresholds(_) => "thresholds",
        Command::Figure(_) => "figure",
        Command::ErasureSim(_) => "erasure-sim",
        Command::Bench(_) => "bench",
    };
    Ok(Output {
        record: RunRecord {
            command: name.into(),
            version: TOOL_VERSION.into(),
            seed,
            input: partial.input,
            parameters: partial.parameters,
            result: partial.result,
            duration_secs: start.elapsed().as_secs_f64(),
        },
        text: partial.text,
        artifact: partial.artifact,
    })
}

fn dispatch(command: &Command, seed: Seed) -> Result<Partial, CliError> {
    match command {
        Command::Sample(a) => sample(a, seed),
        Command::Distance(a) => distance(a, seed),
        Command::Thresholds(a) => thresholds(a),
        Command::Figure(a) => figure(a),
        Command::ErasureSim(a) => erasure_sim(a, seed),
        Command::Bench(a) => bench(a, seed),
    }
}

/// Runs `cli`, writes its outputs and returns the process exit status.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let out = match run(cli) {
        Ok(out) => out,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = emit(cli, &out, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_INTERNAL;
    }
    match out.record.inconclusive_reason() {
        Some(reason) => {
            let _ = writeln!(stderr, "inconclusive: {reason}");
            EXIT_INCONCLUSIVE
        }
        None => EXIT_OK,
    }
}

fn emit(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Internal(e.to_string());
    let g = &cli.global;
    match (&out.artifact, &g.out) {
        (Some(art), Some(path)) => {
            std::fs::write(path, art).map_err(io)?;
            if !g.json {
                stdout.write_all(out.text.as_bytes()).map_err(io)?;
            }
        }
        (Some(art), None) => {
            if !g.json {
                stdout.write_all(art.as_bytes()).map_err(io)?;
            }
        }
        (None, path) => {
            if let Some(path) = path {
                std::fs::write(path, out.record.to_json()? + "\n").map_err(io)?;
            }
            if !g.json {
                stdout.write_all(out.text.as_bytes()).map_err(io)?;
            }
        }
    }
    if g.json {
        writeln!(stdout, "{}", out.record.to_json()?).map_err(io)?;
    }
    Ok(())
}

fn ensemble_spec(a: &EnsembleArgs, n: usize) -> Result<(Ensemble, EnsembleSpec), CliError> {
    let spec = if a.allow_low_weight {
        EnsembleSpec::with_low_weight(a.ell, a.emm, n)?
    } else {
        EnsembleSpec::new(a.ell, a.emm, n)?
    };
    let ensemble = Ensemble::from(a.ensemble);
    spec.validate_for(ensemble)?;
    Ok((ensemble, spec))
}

fn draw(ensemble: Ensemble, spec: &EnsembleSpec, seed: Seed, budget: u32) -> Result<BitMatrix, CliError> {
    Ok(match ensemble {
        Ensemble::A => sample_a_with_budget(spec, seed, budget)?,
        Ensemble::B => sample_b(spec, seed)?,
    })
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{flag}: cannot parse {t:?}")))
        })
        .collect()
}

fn sample(a: &SampleArgs, seed: Seed) -> Result<Partial, CliError> {
    let (ensemble, spec) = ensemble_spec(&a.ensemble, a.n)?;
    let h = draw(ensemble, &spec, seed, a.ensemble.max_attempts)?;
    let alist = to_alist_string(&h);
    let rank = h.rank();
    let text = format!(
        "sampled {ensemble}({},{}) with n={}: {}×{} matrix of rank {rank}\n",
        spec.ell,
        spec.emm,
        spec.n,
        h.rows(),
        h.cols()
    );
    Ok(Partial {
        input: Some(Input::Ensemble { ensemble, spec }),
        parameters: json!({ "max_attempts": a.ensemble.max_attempts }),
        result: RunResult::Sample(SampleSummary {
            rows: h.rows(),
            cols: h.cols(),
            rank,
            alist: alist.clone(),
        }),
        text,
        artifact: Some(alist),
    })
}

/// θ for SW/CS: the flag if given, else `θ* − ε` for regular codes, else `rank/n`.
fn resolve_theta(code: &Code, s: &SearchArgs) -> (f64, &'static str) {
    if let Some(t) = s.theta {
        return (t, "flag");
    }
    let regular = detect_regular(code.parity_check())
        .and_then(|(l, m)| SpectrumParams::new(l as u32, m as u32).ok())
        .and_then(|p| theta_star::<f64>(&p).ok());
    match regular {
        Some(t) => ((t - s.epsilon).clamp(0.05, 0.95), "threshold"),
        None => ((code.rank() as f64 / code.n() as f64).clamp(0.05, 0.95), "rank"),
    }
}

fn search(code: &Code, s: &SearchArgs, theta: f64, seed: Seed) -> Result<DistanceResult, CliError> {
    let d_max = s.dmax.unwrap_or(code.n());
    let early_exit = !s.no_early_exit;
    Ok(match s.alg {
        Algorithm::Exhaustive => distance_exhaustive(code, s.dim_cap),
        Algorithm::Sw => distance_sw(
            code,
            &SwOptions {
                theta,
                d_max,
                enum_cap: s.enum_cap,
                early_exit,
            },
        )?,
        Algorithm::Mb => distance_mb(
            code,
            &MbOptions {
                d_max,
                list_cap: s.list_cap,
                early_exit,
            },
        )?,
        Algorithm::Cs => distance_cs(
            code,
            &CsOptions {
                theta,
                d_max,
                b_cap: s.bcap,
                seed,
                early_exit,
            },
        )?,
    })
}

fn uses_theta(alg: Algorithm) -> bool {
    matches!(alg, Algorithm::Sw | Algorithm::Cs)
}

fn search_parameters(s: &SearchArgs, theta: Option<(f64, &str)>, d_max: usize) -> serde_json::Value {
    json!({
        "alg": s.alg.name(),
        "theta": theta.map(|t| t.0),
        "theta_source": theta.map(|t| t.1),
        "epsilon": s.epsilon,
        "d_max": d_max,
        "b_cap": s.bcap,
        "enum_cap": s.enum_cap,
        "list_cap": s.list_cap,
        "dim_cap": s.dim_cap,
        "early_exit": !s.no_early_exit,
    })
}

fn distance(a: &DistanceArgs, seed: Seed) -> Result<Partial, CliError> {
    let code = Code::new(read_alist(&a.input)?);
    let s = &a.search;
    let theta = uses_theta(s.alg).then(|| resolve_theta(&code, s));
    let result = search(&code, s, theta.map_or(0.0, |t| t.0), seed)?;

    let mut text = String::new();
    match theta {
        Some((t, src)) => writeln!(text, "algorithm: {} (theta {t:.4}, {src})", s.alg.name()),
        None => writeln!(text, "algorithm: {}", s.alg.name()),
    }
    .unwrap();
    match result.distance {
        Some(d) => writeln!(text, "distance: {d}").unwrap(),
        None => writeln!(text, "distance: none").unwrap(),
    }
    writeln!(text, "certificate: {}", result.certificate).unwrap();
    if let Some(w) = &result.witness {
        writeln!(text, "witness: {}", w.to_hex()).unwrap();
    }
    let c = &result.counters;
    writeln!(
        text,
        "counters: row_xors={} patterns={} trials={} eliminations={} skipped={}",
        c.row_xors, c.patterns, c.trials, c.eliminations, c.skipped
    )
    .unwrap();

    Ok(Partial {
        input: Some(Input::File {
            path: a.input.display().to_string(),
        }),
        parameters: search_parameters(s, theta, s.dmax.unwrap_or(code.n())),
        result: RunResult::Distance(result),
        text,
        artifact: None,
    })
}

fn report_text(r: &ThresholdReport) -> String {
    let mut t = String::new();
    writeln!(t, "ensemble: ({},{})  rate {:.6}", r.ell, r.emm, r.rate).unwrap();
    writeln!(t, "delta_star: {:.6}", r.delta_star).unwrap();
    writeln!(t, "theta_star: {:.6}", r.theta_star).unwrap();
    writeln!(t, "f_sw: {:.6}", r.f_sw).unwrap();
    writeln!(t, "f_mb: {:.6}", r.f_mb).unwrap();
    writeln!(t, "f_comb: {:.6}", r.f_comb).unwrap();
    writeln!(t, "f_cs: {:.6}", r.f_cs).unwrap();
    writeln!(t, "generic_gv_delta: {:.6}", r.generic_gv_delta).unwrap();
    writeln!(t, "generic_f_swmb: {:.6}", r.generic_f_swmb).unwrap();
    writeln!(t, "generic_f_cs: {:.6}", r.generic_f_cs).unwrap();
    t
}

fn thresholds(a: &PairArgs) -> Result<Partial, CliError> {
    let report = ldpc_exponents::<f64>(&SpectrumParams::new(a.ell, a.emm)?)?;
    Ok(Partial {
        input: Some(Input::Pair { ell: a.ell, emm: a.emm }),
        parameters: json!({}),
        text: report_text(&report),
        result: RunResult::Thresholds(report),
        artifact: None,
    })
}

fn parse_pairs(text: &str) -> Result<Vec<(u32, u32)>, CliError> {
    text.split(',')
        .map(|item| {
            let bad = || CliError::Input(format!("--codes: expected ℓ:m, found {item:?}"));
            let (l, m) = item.trim().split_once(':').ok_or_else(bad)?;
            Ok((l.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn figure_rows(pairs: &[(u32, u32)], step: f64) -> Result<Vec<FigureRow>, CliError> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(CliError::Input(format!("--rate-grid {step} outside (0, 0.5]")));
    }
    let params = pairs
        .iter()
        .map(|&(l, m)| SpectrumParams::new(l, m))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for k in 1.. {
        let rate = k as f64 * step;
        if rate >= 1.0 - 1e-12 {
            break;
        }
        let g = generic_exponents(rate)?;
        rows.push(FigureRow {
            kind: "generic".into(),
            rate,
            generic_gv_delta: g.gv_delta,
            generic_f_swmb: g.f_swmb,
            generic_f_cs: g.f_cs,
            ell: None,
            emm: None,
            delta_star: None,
            theta_star: None,
            f_sw: None,
            f_mb: None,
            f_comb: None,
            f_cs: None,
        });
    }
    let reports: Vec<ThresholdReport> = params
        .par_iter()
        .map(ldpc_exponents::<f64>)
        .collect::<Result<_, _>>()?;
    rows.extend(reports.into_iter().map(|r| FigureRow {
        kind: "ldpc".into(),
        rate: r.rate,
        generic_gv_delta: r.generic_gv_delta,
        generic_f_swmb: r.generic_f_swmb,
        generic_f_cs: r.generic_f_cs,
        ell: Some(r.ell),
        emm: Some(r.emm),
        delta_star: Some(r.delta_star),
        theta_star: Some(r.theta_star),
        f_sw: Some(r.f_sw),
        f_mb: Some(r.f_mb),
        f_comb: Some(r.f_comb),
        f_cs: Some(r.f_cs),
    }));
    Ok(rows)
}

fn to_csv<T: serde::Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

fn figure(a: &FigureArgs) -> Result<Partial, CliError> {
    let pairs = parse_pairs(&a.codes)?;
    let rows = figure_rows(&pairs, a.rate_grid)?;
    let mut text = String::new();
    if let Some(peak) = rows
        .iter()
        .filter(|r| r.kind == "generic")
        .max_by(|x, y| x.generic_f_cs.total_cmp(&y.generic_f_cs))
    {
        writeln!(text, "generic f_cs maximum {:.4} at R={:.3}", peak.generic_f_cs, peak.rate).unwrap();
    }
    for r in rows.iter().filter(|r| r.kind == "ldpc") {
        writeln!(
            text,
            "({},{}) R={:.3}: f_comb={:.4} f_cs={:.4} (generic f_swmb={:.4} f_cs={:.4})",
            r.ell.unwrap(),
            r.emm.unwrap(),
            r.rate,
            r.f_comb.unwrap(),
            r.f_cs.unwrap(),
            r.generic_f_swmb,
            r.generic_f_cs
        )
        .unwrap();
    }
    Ok(Partial {
        input: Some(Input::Codes { pairs }),
        parameters: json!({ "rate_grid": a.rate_grid }),
        artifact: Some(to_csv(&rows)?),
        result: RunResult::Figure(rows),
        text,
    })
}

/// Erasure-correction success rates over `thetas`, one trial per
/// (θ index, trial index) stream.
pub fn erasure_stats(
    ensemble: Ensemble,
    spec: &EnsembleSpec,
    thetas: &[f64],
    trials: u64,
    fixed_code: bool,
    seed: Seed,
    budget: u32,
) -> Result<ErasureStats, CliError> {
    if let Some(t) = thetas.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(CliError::Input(format!("θ={t} outside (0,1)")));
    }
    let n = spec.n;
    let fixed = if fixed_code {
        Some(draw(ensemble, spec, seed.derive2(u64::MAX, 0), budget)?)
    } else {
        None
    };
    let mut points = Vec::new();
    for (p, &theta) in thetas.iter().enumerate() {
        let erased = ((theta * n as f64) + 1e-9).floor() as usize;
        let coranks: Vec<usize> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let stream = seed.derive2(p as u64, t);
                let fresh;
                let h = match &fixed {
                    Some(h) => h,
                    None => {
                        fresh = draw(ensemble, spec, stream.derive(0), budget)?;
                        &fresh
                    }
                };
                let j = random_subset(&mut stream.derive(1).rng(), n, erased);
                Ok(h.column_submatrix(&j)?.corank())
            })
            .collect::<Result<_, CliError>>()?;
        let successes = coranks.iter().filter(|&&b| b == 0).count() as u64;
        points.push(ErasurePoint {
            theta,
            erased,
            trials,
            successes,
            failures: trials - successes,
            mean_corank: if trials == 0 {
                0.0
            } else {
                coranks.iter().sum::<usize>() as f64 / trials as f64
            },
        });
    }
    Ok(ErasureStats {
        ensemble,
        spec: *spec,
        fixed_code,
        points,
    })
}

fn erasure_sim(a: &ErasureArgs, seed: Seed) -> Result<Partial, CliError> {
    let (ensemble, spec) = ensemble_spec(&a.ensemble, a.n)?;
    let thetas: Vec<f64> = parse_list("--thetas", &a.thetas)?;
    let stats = erasure_stats(ensemble, &spec, &thetas, a.trials, a.fixed_code, seed, a.ensemble.max_attempts)?;
    let mut text = String::from("theta erased trials successes success_rate mean_corank\n");
    for p in &stats.points {
        writeln!(
            text,
            "{:.4} {} {} {} {:.4} {:.4}",
            p.theta,
            p.erased,
            p.trials,
            p.successes,
            p.success_rate(),
            p.mean_corank
        )
        .unwrap();
    }
    Ok(Partial {
        input: Some(Input::Ensemble { ensemble, spec }),
        parameters: json!({
            "thetas": thetas,
            "trials": a.trials,
            "fixed_code": a.fixed_code,
            "max_attempts": a.ensemble.max_attempts,
        }),
        result: RunResult::ErasureSim(stats),
        text,
        artifact: None,
    })
}

/// Pattern count of a full run (no early exit) that stopped at weight `d`.
pub fn closed_form_patterns(alg: Algorithm, code: &Code, theta: f64, d: usize) -> Option<u64> {
    let n = code.n();
    match alg {
        Algorithm::Mb => Some((1..=d).map(|w| mb_patterns_per_round(n, w)).sum()),
        Algorithm::Sw => {
            let s = sw_window_len(n, theta);
            Some(
                (1..=d)
                    .map(|w| {
                        n as u64
                            * sw_window_weights(n, s, w)
                                .iter()
                                .filter(|&&v| v <= w)
                                .map(|&v| binomial_u64(s, v))
                                .sum::<u64>()
                    })
                    .sum(),
            )
        }
        Algorithm::Exhaustive => Some((1u64 << code.dimension()) - 1),
        Algorithm::Cs => None,
    }
}

fn bench(a: &BenchArgs, seed: Seed) -> Result<Partial, CliError> {
    let grid: Vec<usize> = parse_list("--n-grid", &a.n_grid)?;
    let s = &a.search;
    let params = SpectrumParams::new(a.ensemble.ell as u32, a.ensemble.emm as u32)?;
    let report = ldpc_exponents::<f64>(&params).ok();
    let theta = uses_theta(s.alg).then(|| match (s.theta, &report) {
        (Some(t), _) => Ok(t),
        (None, Some(r)) => Ok((r.theta_star - s.epsilon).clamp(0.05, 0.95)),
        (None, None) => Err(CliError::Input(format!(
            "no threshold for ({},{}); pass --theta",
            params.ell, params.m
        ))),
    });
    let theta = theta.transpose()?;
    let predicted = report.map(|r| match s.alg {
        Algorithm::Exhaustive => r.rate,
        Algorithm::Sw => r.f_sw,
        Algorithm::Mb => r.f_mb,
        Algorithm::Cs => r.f_cs,
    });

    let mut rows = Vec::new();
    for &n in &grid {
        let (ensemble, spec) = ensemble_spec(&a.ensemble, n)?;
        let code = Code::new(draw(ensemble, &spec, seed.derive(n as u64), a.ensemble.max_attempts)?);
        let r = search(&code, s, theta.unwrap_or(0.0), seed.derive(n as u64))?;
        let c = r.counters;
        rows.push(BenchRow {
            n,
            alg: s.alg.name().into(),
            theta,
            distance: r.distance,
            certificate: r.certificate.to_string(),
            row_xors: c.row_xors,
            patterns: c.patterns,
            trials: c.trials,
            eliminations: c.eliminations,
            skipped: c.skipped,
            log2_patterns_per_n: if c.patterns > 0 {
                (c.patterns as f64).log2() / n as f64
            } else {
                0.0
            },
            predicted_exponent: predicted,
            closed_form_patterns: match (s.no_early_exit, r.distance) {
                (true, Some(d)) => closed_form_patterns(s.alg, &code, theta.unwrap_or(0.0), d),
                _ => None,
            },
        });
    }
    let mut text = String::from("n distance patterns log2(patterns)/n predicted\n");
    for r in &rows {
        writeln!(
            text,
            "{} {} {} {:.4} {}",
            r.n,
            r.distance.map_or("none".into(), |d| d.to_string()),
            r.patterns,
            r.log2_patterns_per_n,
            r.predicted_exponent.map_or("-".into(), |p| format!("{p:.4}"))
        )
        .unwrap();
    }
    let mut parameters = search_parameters(s, theta.map(|t| (t, if s.theta.is_some() { "flag" } else { "threshold" })), 0);
    parameters["d_max"] = json!(s.dmax);
    parameters["n_grid"] = json!(grid);
    parameters["max_attempts"] = json!(a.ensemble.max_attempts);
    parameters["ensemble"] = json!(Ensemble::from(a.ensemble.ensemble));
    Ok(Partial {
        input: Some(Input::Pair {
            ell: params.ell,
            emm: params.m,
        }),
        parameters,
        artifact: Some(to_csv(&rows)?),
        result: RunResult::Bench(rows),
        text,
    })
}
