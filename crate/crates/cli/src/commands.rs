//! Implementations of the subcommands.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anosov_core::forms::{invariant_bilinear_form, FormKind};
use anosov_core::gaps::{certify, GapCertificate, GapThresholds, Verdict};
use anosov_core::limits::{
    hyperconvexity_scan, pairing_scan, plucker_compatibility, HyperconvexReport, PairingReport,
};
use anosov_core::rep::{complexify, exterior_power_rep, schottky_rep, sym_power_rep};
use anosov_core::symplectic::SymplecticStructure;
use anosov_core::words::{sample_boundary, BoundaryRay};
use serde_json::{json, Value};

use anosov_cli::format::{self, AnyRepresentation, Provenance};
use anosov_cli::report::{fmt_f64, CsvWriter, RunReport};
use anosov_cli::CliError;

use crate::{CertifyArgs, GenCommand, ReportArgs, ScanArgs, ScanMode};

pub fn run_gen(construction: GenCommand) -> Result<u8, CliError> {
    match construction {
        GenCommand::Schottky {
            rank,
            lambda,
            seed,
            output,
        } => {
            let rep = schottky_rep(rank, lambda, seed)?;
            let mut parameters = BTreeMap::new();
            parameters.insert("rank".into(), rank.to_string());
            parameters.insert("lambda".into(), lambda.to_string());
            let doc = format::to_file(
                &AnyRepresentation::Real(rep),
                Provenance {
                    construction: "schottky".into(),
                    parameters,
                    seed,
                },
            );
            format::save(&output, &doc)?;
            summarize_file(&output, &doc);
            Ok(0)
        }
        GenCommand::Pipeline {
            schottky,
            sym,
            seed,
            output,
        } => {
            let (rank, lambda) = schottky;
            let base = schottky_rep(rank, lambda, seed)?;
            let plain = sym_power_rep(&base, sym, None)?;
            // attach the recovered invariant form when the solver finds one
            let structure = match invariant_bilinear_form(plain.generator_images(), 1e-8)? {
                Some(form) if form.kind == FormKind::SkewSymmetric => {
                    let skew = form.matrix.sub(&form.matrix.transpose()).scale(0.5);
                    let skew = skew.scale(1.0 / skew.frobenius_norm());
                    Some(SymplecticStructure::new(skew)?)
                }
                _ => None,
            };
            let rep = sym_power_rep(&base, sym, structure)?;
            let mut parameters = BTreeMap::new();
            parameters.insert("schottky_rank".into(), rank.to_string());
            parameters.insert("schottky_lambda".into(), lambda.to_string());
            parameters.insert("sym_dim".into(), sym.to_string());
            let doc = format::to_file(
                &AnyRepresentation::Real(rep),
                Provenance {
                    construction: "pipeline".into(),
                    parameters,
                    seed,
                },
            );
            format::save(&output, &doc)?;
            summarize_file(&output, &doc);
            Ok(0)
        }
        GenCommand::Exterior { input, k, output } => {
            let (doc_in, rep) = format::load(&input)?;
            let mut parameters = BTreeMap::new();
            parameters.insert("k".into(), k.to_string());
            parameters.insert("source".into(), input.display().to_string());
            parameters.insert(
                "source_construction".into(),
                doc_in.provenance.construction.clone(),
            );
            let out_rep = match rep {
                AnyRepresentation::Real(r) => AnyRepresentation::Real(exterior_power_rep(&r, k)?),
                AnyRepresentation::Complex(r) => {
                    AnyRepresentation::Complex(exterior_power_rep(&r, k)?)
                }
            };
            let doc = format::to_file(
                &out_rep,
                Provenance {
                    construction: "exterior-power".into(),
                    parameters,
                    seed: doc_in.provenance.seed,
                },
            );
            format::save(&output, &doc)?;
            summarize_file(&output, &doc);
            Ok(0)
        }
        GenCommand::Complexify { input, output } => {
            let (doc_in, rep) = format::load(&input)?;
            let real = match rep {
                AnyRepresentation::Real(r) => r,
                AnyRepresentation::Complex(_) => {
                    return Err(CliError::Core(anosov_core::Error::AlreadyComplex))
                }
            };
            let mut parameters = BTreeMap::new();
            parameters.insert("source".into(), input.display().to_string());
            let doc = format::to_file(
                &AnyRepresentation::Complex(complexify(&real)),
                Provenance {
                    construction: "complexify".into(),
                    parameters,
                    seed: doc_in.provenance.seed,
                },
            );
            format::save(&output, &doc)?;
            summarize_file(&output, &doc);
            Ok(0)
        }
    }
}

fn summarize_file(path: &Path, doc: &format::RepresentationFile) {
    println!(
        "wrote {}: {} {}x{} over the {} field, invariant form {}",
        path.display(),
        doc.provenance.construction,
        doc.dim,
        doc.dim,
        doc.field,
        if doc.form.is_some() {
            "present"
        } else {
            "absent"
        }
    );
}

fn certificate_json(cert: &GapCertificate) -> Value {
    json!({
        "k": cert.k,
        "radius": cert.radius,
        "mu_hat": cert.mu_hat,
        "log_c_hat": cert.log_c_hat,
        "fit_quality": cert.fit_quality,
        "min_observed_ratio": cert.min_observed_ratio,
        "minima_monotone": cert.minima_monotone,
        "verdict": cert.verdict.to_string(),
        "thresholds": {
            "mu_min": cert.thresholds.mu_min,
            "min_radius": cert.thresholds.min_radius,
            "burn_in": cert.thresholds.burn_in,
            "sphere_cap": cert.thresholds.sphere_cap,
        },
        "word_universe": cert.word_universe,
        "scope_note": cert.scope_note,
    })
}

pub fn run_certify(args: CertifyArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let (_, rep) = format::load(&args.input)?;
    let thresholds = GapThresholds {
        mu_min: args.mu_min,
        min_radius: args.min_radius,
        burn_in: args.burn_in,
        sphere_cap: args.cap,
    };
    let cert = match &rep {
        AnyRepresentation::Real(r) => certify(r, args.k, args.radius, &thresholds)?,
        AnyRepresentation::Complex(r) => certify(r, args.k, args.radius, &thresholds)?,
    };

    let mut csv = CsvWriter::new(&[
        "length",
        "count",
        "min_ratio",
        "geo_mean_ratio",
        "max_ratio",
    ]);
    for s in &cert.profile.per_length {
        csv.row(&[
            s.length.to_string(),
            s.count.to_string(),
            fmt_f64(s.min_ratio),
            fmt_f64(s.geo_mean_ratio),
            fmt_f64(s.max_ratio),
        ]);
    }
    csv.save(&args.csv)?;

    let mut run = RunReport::new("certify");
    run.parameter("k", args.k)
        .parameter("radius", args.radius)
        .parameter("mu_min", args.mu_min)
        .parameter("min_radius", args.min_radius)
        .parameter("burn_in", args.burn_in)
        .parameter("cap", args.cap);
    run.input(&args.input)?;
    run.result = certificate_json(&cert);
    run.wall_time_ms = started.elapsed().as_millis() as u64;
    run.save(&args.output)?;

    println!(
        "verdict: {} (mu_hat = {:.4}, fit quality = {:.6}, min ratio = {:.6})",
        cert.verdict, cert.mu_hat, cert.fit_quality, cert.min_observed_ratio
    );
    println!("note: {}", cert.scope_note);
    println!("wrote {} and {}", args.output.display(), args.csv.display());
    Ok(match cert.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 2,
        Verdict::Inconclusive => 3,
    })
}

fn sample_rays(
    rep: &AnyRepresentation,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<Vec<BoundaryRay>, CliError> {
    Ok(sample_boundary(rep.presentation(), count, max_len, seed)?)
}

pub fn run_scan(args: ScanArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let (_, rep) = format::load(&args.input)?;
    let rays = sample_rays(&rep, args.rays, args.max_len, args.seed)?;
    match args.mode {
        ScanMode::Pairing => {
            let tol = args.tol.unwrap_or(1e-9);
            if !rep.has_form() {
                return Err(CliError::Core(anosov_core::Error::MissingForm(
                    "pairing scan",
                )));
            }
            let scan = match &rep {
                AnyRepresentation::Real(r) => pairing_scan(r, &rays, args.depth, tol)?,
                AnyRepresentation::Complex(r) => pairing_scan(r, &rays, args.depth, tol)?,
            };
            finish_pairing(&args, started, &rep, &rays, &scan, tol)
        }
        ScanMode::Hyperconvex => {
            let tol = args.tol.unwrap_or(1e-4);
            let scan = match &rep {
                AnyRepresentation::Real(r) => {
                    hyperconvexity_scan(r, args.p, args.q, args.r, &rays, args.depth, tol)?
                }
                AnyRepresentation::Complex(r) => {
                    hyperconvexity_scan(r, args.p, args.q, args.r, &rays, args.depth, tol)?
                }
            };
            finish_hyperconvex(&args, started, &rep, &rays, &scan, tol)
        }
        ScanMode::Plucker => {
            let tol = args.tol.unwrap_or(1e-7);
            finish_plucker(&args, started, &rep, &rays, tol)
        }
    }
}

fn ray_names(rep: &AnyRepresentation, rays: &[BoundaryRay]) -> Vec<String> {
    rays.iter().map(|r| r.display(rep.presentation())).collect()
}

fn finish_pairing(
    args: &ScanArgs,
    started: Instant,
    rep: &AnyRepresentation,
    rays: &[BoundaryRay],
    scan: &PairingReport,
    tol: f64,
) -> Result<u8, CliError> {
    let names = ray_names(rep, rays);
    let mut csv = CsvWriter::new(&[
        "pair_index",
        "ray_a",
        "ray_b",
        "depth_a",
        "depth_b",
        "value",
    ]);
    let mut plot = CsvWriter::new(&["pair_index", "value"]);
    for (index, e) in scan.entries.iter().enumerate() {
        csv.row(&[
            index.to_string(),
            names[e.i].clone(),
            names[e.j].clone(),
            e.depth_i.to_string(),
            e.depth_j.to_string(),
            fmt_f64(e.value),
        ]);
        plot.row(&[index.to_string(), fmt_f64(e.value)]);
    }
    csv.save(&args.csv)?;
    plot.save(&args.plot)?;

    let total_pairs = scan.entries.len() + scan.skipped_pairs;
    let mut run = RunReport::new("scan");
    scan_parameters(&mut run, args, tol);
    run.input(&args.input)?;
    run.result = json!({
        "mode": "pairing",
        "rays": names,
        "pairs_evaluated": scan.entries.len(),
        "pairs_skipped": scan.skipped_pairs,
        "skipped_rays": scan.skipped_rays,
        "min_value": scan.min_value,
        "argmin": [scan.argmin.0, scan.argmin.1],
    });
    run.wall_time_ms = started.elapsed().as_millis() as u64;
    run.save(&args.output)?;

    println!(
        "pairing scan over {} rays: {} pairs, minimum {:.6e} at ({}, {})",
        rays.len(),
        scan.entries.len(),
        scan.min_value,
        names[scan.argmin.0],
        names[scan.argmin.1]
    );
    if !scan.skipped_rays.is_empty() {
        println!("skipped rays: {:?}", scan.skipped_rays);
    }
    println!(
        "wrote {}, {}, {}",
        args.output.display(),
        args.csv.display(),
        args.plot.display()
    );
    Ok(if scan.skipped_pairs * 10 > total_pairs {
        5
    } else {
        0
    })
}

fn finish_hyperconvex(
    args: &ScanArgs,
    started: Instant,
    rep: &AnyRepresentation,
    rays: &[BoundaryRay],
    scan: &HyperconvexReport,
    tol: f64,
) -> Result<u8, CliError> {
    let names = ray_names(rep, rays);
    let mut csv = CsvWriter::new(&[
        "triple_index",
        "ray_x",
        "ray_y",
        "ray_w",
        "gap",
        "h_re",
        "h_im",
        "swap_defect",
    ]);
    let mut plot = CsvWriter::new(&["triple_index", "gap"]);
    for (index, e) in scan.entries.iter().enumerate() {
        let (h_re, h_im, defect) = match (e.h_value, e.swap_defect) {
            (Some((re, im)), Some(d)) => (fmt_f64(re), fmt_f64(im), fmt_f64(d)),
            _ => (String::new(), String::new(), String::new()),
        };
        csv.row(&[
            index.to_string(),
            names[e.x].clone(),
            names[e.y].clone(),
            names[e.w].clone(),
            fmt_f64(e.gap),
            h_re,
            h_im,
            defect,
        ]);
        plot.row(&[index.to_string(), fmt_f64(e.gap)]);
    }
    csv.save(&args.csv)?;
    plot.save(&args.plot)?;

    let total = scan.entries.len() + scan.skipped_triples;
    let mut run = RunReport::new("scan");
    scan_parameters(&mut run, args, tol);
    run.input(&args.input)?;
    run.result = json!({
        "mode": "hyperconvex",
        "degrees": [scan.p, scan.q, scan.r],
        "rays": names,
        "triples_evaluated": scan.entries.len(),
        "triples_skipped": scan.skipped_triples,
        "skipped_rays": scan.skipped_rays,
        "min_gap": scan.min_gap,
        "argmin": [scan.argmin.0, scan.argmin.1, scan.argmin.2],
        "max_swap_defect": scan.max_swap_defect,
    });
    run.wall_time_ms = started.elapsed().as_millis() as u64;
    run.save(&args.output)?;

    println!(
        "hyperconvexity ({},{},{}) scan over {} rays: {} triples, minimum gap {:.6e}",
        scan.p,
        scan.q,
        scan.r,
        rays.len(),
        scan.entries.len(),
        scan.min_gap
    );
    if let Some(defect) = scan.max_swap_defect {
        println!("maximal swap antisymmetry defect: {defect:.3e}");
    }
    println!(
        "wrote {}, {}, {}",
        args.output.display(),
        args.csv.display(),
        args.plot.display()
    );
    Ok(if scan.skipped_triples * 10 > total {
        5
    } else {
        0
    })
}

fn finish_plucker(
    args: &ScanArgs,
    started: Instant,
    rep: &AnyRepresentation,
    rays: &[BoundaryRay],
    tol: f64,
) -> Result<u8, CliError> {
    let names = ray_names(rep, rays);
    let mut rows: Vec<(usize, Result<f64, String>)> = Vec::new();
    for (index, ray) in rays.iter().enumerate() {
        let angle = match rep {
            AnyRepresentation::Real(r) => {
                plucker_compatibility(r, ray, args.k, args.depth, tol).map_err(|e| e.to_string())
            }
            AnyRepresentation::Complex(r) => {
                plucker_compatibility(r, ray, args.k, args.depth, tol).map_err(|e| e.to_string())
            }
        };
        rows.push((index, angle));
    }
    let mut csv = CsvWriter::new(&["ray_index", "ray", "depth", "angle"]);
    let mut plot = CsvWriter::new(&["ray_index", "angle"]);
    let mut failures = 0usize;
    let mut max_angle: f64 = 0.0;
    for (index, outcome) in &rows {
        match outcome {
            Ok(angle) => {
                csv.row(&[
                    index.to_string(),
                    names[*index].clone(),
                    args.depth.to_string(),
                    fmt_f64(*angle),
                ]);
                plot.row(&[index.to_string(), fmt_f64(*angle)]);
                max_angle = max_angle.max(*angle);
            }
            Err(_) => failures += 1,
        }
    }
    csv.save(&args.csv)?;
    plot.save(&args.plot)?;

    let mut run = RunReport::new("scan");
    scan_parameters(&mut run, args, tol);
    run.input(&args.input)?;
    run.result = json!({
        "mode": "plucker",
        "k": args.k,
        "rays": names,
        "rays_evaluated": rows.len() - failures,
        "rays_failed": failures,
        "max_angle": max_angle,
        "failures": rows
            .iter()
            .filter_map(|(i, r)| r.as_ref().err().map(|e| json!([i, e])))
            .collect::<Vec<_>>(),
    });
    run.wall_time_ms = started.elapsed().as_millis() as u64;
    run.save(&args.output)?;

    println!(
        "wedge compatibility scan (k = {}) over {} rays: worst angle {:.6e}, {} failures",
        args.k,
        rays.len(),
        max_angle,
        failures
    );
    println!(
        "wrote {}, {}, {}",
        args.output.display(),
        args.csv.display(),
        args.plot.display()
    );
    Ok(if failures * 10 > rows.len() { 5 } else { 0 })
}

fn scan_parameters(run: &mut RunReport, args: &ScanArgs, tol: f64) {
    run.parameter("rays", args.rays)
        .parameter("max_len", args.max_len)
        .parameter("depth", args.depth)
        .parameter("seed", args.seed)
        .parameter("tol", tol);
}

pub fn run_report(args: ReportArgs) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.input.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Format(format!("cannot parse {}: {e}", args.input.display())))?;
    if value.get("command").is_some() {
        print_run_report(&value);
    } else if value.get("schema").is_some() {
        print_representation_summary(&value);
    } else {
        return Err(CliError::Format("unrecognized report file".into()));
    }
    Ok(0)
}

fn print_run_report(value: &Value) {
    let command = value["command"].as_str().unwrap_or("?");
    println!(
        "{} {} run: {}",
        value["tool"].as_str().unwrap_or("?"),
        value["version"].as_str().unwrap_or("?"),
        command
    );
    if let Some(params) = value["parameters"].as_object() {
        for (k, v) in params {
            println!("  {k} = {}", v.as_str().unwrap_or("?"));
        }
    }
    if let Some(inputs) = value["inputs"].as_array() {
        for i in inputs {
            println!(
                "  input {} ({})",
                i["path"].as_str().unwrap_or("?"),
                i["digest"].as_str().unwrap_or("?")
            );
        }
    }
    println!(
        "  wall time: {} ms",
        value["wall_time_ms"].as_u64().unwrap_or(0)
    );
    match command {
        "certify" => {
            let r = &value["result"];
            println!(
                "  verdict {} at k = {} radius = {}: mu_hat = {}, fit quality = {}, min ratio = {}",
                r["verdict"].as_str().unwrap_or("?"),
                r["k"],
                r["radius"],
                r["mu_hat"],
                r["fit_quality"],
                r["min_observed_ratio"]
            );
        }
        "scan" => {
            let r = &value["result"];
            match r["mode"].as_str().unwrap_or("?") {
                "pairing" => println!(
                    "  pairing minimum {} over {} pairs ({} skipped)",
                    r["min_value"], r["pairs_evaluated"], r["pairs_skipped"]
                ),
                "hyperconvex" => println!(
                    "  hyperconvexity minimum gap {} over {} triples (swap defect {})",
                    r["min_gap"], r["triples_evaluated"], r["max_swap_defect"]
                ),
                "plucker" => println!(
                    "  worst wedge-compatibility angle {} over {} rays",
                    r["max_angle"], r["rays_evaluated"]
                ),
                other => println!("  mode {other}"),
            }
        }
        _ => println!("  result: {}", value["result"]),
    }
}

fn print_representation_summary(value: &Value) {
    println!(
        "representation file: {} {}x{} over the {} field",
        value["provenance"]["construction"].as_str().unwrap_or("?"),
        value["dim"],
        value["dim"],
        value["field"].as_str().unwrap_or("?")
    );
    let names: Vec<&str> = value["presentation"]["generators"]
        .as_array()
        .map(|a| a.iter().filter_map(|v| v.as_str()).collect())
        .unwrap_or_default();
    println!(
        "  presentation: {} with generators {}",
        value["presentation"]["kind"].as_str().unwrap_or("?"),
        names.join(", ")
    );
    println!(
        "  invariant form: {}",
        if value.get("form").is_some_and(|f| !f.is_null()) {
            "present"
        } else {
            "absent"
        }
    );
}
