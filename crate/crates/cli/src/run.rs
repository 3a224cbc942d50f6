//! Executes a [`RunConfig`] and writes its artifacts.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use posfourier::algebra::{exact_transform, is_nonneg};
use posfourier::analytic::jensen_bound;
use posfourier::criteria::{build_associates, run_checklist_on, TestVerdict};
use posfourier::experiments::{
    figure1_case_with, grid_census_3param, random_census_1d, random_census_2d, ExperimentStats,
};
use posfourier::moments::{moment_report, MomentMethod};
use posfourier::toeplitz::toeplitz_scan;
use posfourier::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};

/// What a run reports back to `main`.
pub struct Outcome {
    pub message: String,
}

#[derive(Serialize)]
struct CriterionCounts {
    detections: usize,
    rate: f64,
    rebel_detections: usize,
    false_detections: usize,
}

fn per_criterion(stats: &ExperimentStats) -> BTreeMap<String, CriterionCounts> {
    stats
        .criteria
        .iter()
        .map(|c| {
            let counts = CriterionCounts {
                detections: stats.count(c),
                rate: stats.rate(c),
                rebel_detections: stats.rebel_detections[c],
                false_detections: stats.false_detections[c],
            };
            (c.clone(), counts)
        })
        .collect()
}

fn write_summary(out: &Path, config: &RunConfig, stats: Value, per_criterion: Value, timings: Value) -> Result<()> {
    let summary = json!({ "config": config, "stats": stats, "per_criterion": per_criterion, "timings": timings });
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Output(e.to_string()))?;
    fs::write(out.join("summary.json"), text + "\n")?;
    Ok(())
}

/// Two-column curve file with header `r,value`.
fn write_curve(path: &Path, header: &str, points: impl IntoIterator<Item = (f64, f64)>) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record([header, "value"])?;
    for (x, y) in points {
        w.write_record([x.to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn write_census(path: &Path, stats: &ExperimentStats) -> Result<()> {
    stats.write_csv(BufWriter::new(File::create(path)?))
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Output(e.to_string()))
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    fs::create_dir_all(&config.out)?;
    let start = Instant::now();
    let out = config.out.as_path();
    let message = match config.command {
        Command::Analyze => analyze(config, out, start)?,
        Command::Grid3 => {
            let stats = grid_census_3param(&config.grid_config())?;
            let elapsed = start.elapsed().as_secs_f64();
            write_census(&out.join("census.csv"), &stats)?;
            write_summary(out, config, to_value(&stats)?, to_value(&per_criterion(&stats))?, json!({ "campaign_seconds": elapsed }))?;
            format!(
                "grid3: {} with psi >= 0, {} both positive, {} phi-negative, {} rebels",
                stats.population, stats.both_positive, stats.phi_negative, stats.rebels
            )
        }
        Command::Random1d => {
            let stats = random_census_1d(&config.random_config())?;
            let elapsed = start.elapsed().as_secs_f64();
            write_census(&out.join("census.csv"), &stats)?;
            write_summary(out, config, to_value(&stats)?, to_value(&per_criterion(&stats))?, json!({ "campaign_seconds": elapsed }))?;
            format!("random1d: {} phi-negative of {} draws", stats.phi_negative, stats.draws)
        }
        Command::Random2d => {
            let both = random_census_2d(&config.random_config())?;
            let elapsed = start.elapsed().as_secs_f64();
            write_census(&out.join("census_2d.csv"), &both.two_d)?;
            write_census(&out.join("census_1d.csv"), &both.one_d)?;
            let per = json!({ "two_d": per_criterion(&both.two_d), "one_d": per_criterion(&both.one_d) });
            write_summary(out, config, to_value(&both)?, per, json!({ "campaign_seconds": elapsed }))?;
            format!("random2d: {} phi-negative in 2D, {} in 1D", both.two_d.phi_negative, both.one_d.phi_negative)
        }
        Command::Fig1 => {
            let rep = figure1_case_with(&config.toeplitz_grid, &config.imaginary_grid)?;
            let elapsed = start.elapsed().as_secs_f64();
            let psi0 = rep.psi.at_origin();
            let s = rep.moments.mean_s;
            write_curve(&out.join("fig1_cosh_margin.csv"), "r", rep.cosh.margin_curve.iter().copied())?;
            write_curve(
                &out.join("fig1_psi_imag.csv"),
                "r",
                config.imaginary_grid.points().map(|r| (r, rep.psi.eval_imag(r))),
            )?;
            write_curve(
                &out.join("fig1_cosh_rhs.csv"),
                "r",
                config.imaginary_grid.points().map(|r| (r, psi0 * (s * r).cosh())),
            )?;
            write_curve(&out.join("fig1_phi.csv"), "s", (0..=600).map(|k| k as f64 * 0.01).map(|x| (x, rep.phi.eval(x))))?;
            for scan in &rep.toeplitz {
                write_curve(&out.join(format!("fig1_toeplitz_order{}.csv", scan.order)), "r", scan.min_eig.iter().copied())?;
            }
            let stats = json!({
                "psi": rep.psi,
                "phi": rep.phi,
                "phi_at_origin": rep.phi_at_origin(),
                "psi_nonneg": rep.psi_nonneg,
                "phi_negative_witness": rep.phi_negative_witness,
                "moments": rep.moments,
                "cosh_first_violation": rep.cosh.first_violation,
                "toeplitz_first_violation": rep.toeplitz.iter().map(|t| json!({"order": t.order, "first_violation": t.first_violation})).collect::<Vec<_>>(),
            });
            let per = json!({
                "cosh": rep.cosh.detected(),
                "toeplitz(3)": rep.toeplitz[0].first_violation.is_some(),
                "toeplitz(4)": rep.toeplitz[1].first_violation.is_some(),
            });
            write_summary(out, config, stats, per, json!({ "campaign_seconds": elapsed }))?;
            format!("fig1: <s> = {:.6}, phi(0) = {:.5}", rep.moments.mean_s, rep.phi_at_origin())
        }
    };
    Ok(Outcome { message })
}

fn analyze(config: &RunConfig, out: &Path, start: Instant) -> Result<String> {
    let f = config.function()?;
    let selection = config.selection()?;
    let params = config.checklist_params();
    let set = build_associates(&f, &params.widths, params.qmax)?;
    let verdicts: Vec<TestVerdict> = run_checklist_on(&set, &selection, &params)?;
    let elapsed = start.elapsed().as_secs_f64();

    for &n in &config.orders {
        let scan = toeplitz_scan(&f, n, &config.toeplitz_grid)?;
        write_curve(&out.join(format!("toeplitz_order{n}.csv")), "r", scan.min_eig)?;
    }
    let moments = moment_report(&f, MomentMethod::RSpaceFormula)?;
    let bound = jensen_bound(&f, moments.mean_s, &config.imaginary_grid)?;
    write_curve(&out.join(format!("{}_margin.csv", bound.bound_id)), "r", bound.margin_curve.iter().copied())?;

    let phi = exact_transform(&f);
    let detected: Vec<&TestVerdict> = verdicts.iter().filter(|v| v.detected).collect();
    let stats = json!({
        "function": f,
        "psi_nonneg": is_nonneg(&f).nonneg,
        "transform": phi,
        "ground_truth_positive": is_nonneg(&phi).nonneg,
        "moments": moments,
        "detected": !detected.is_empty(),
    });
    write_summary(out, config, stats, to_value(&verdicts)?, json!({ "checklist_seconds": elapsed }))?;
    Ok(if detected.is_empty() {
        "no detection".to_string()
    } else {
        let names: Vec<&str> = detected.iter().map(|v| v.criterion.as_str()).collect();
        format!("detected by {}", names.join(", "))
    })
}
