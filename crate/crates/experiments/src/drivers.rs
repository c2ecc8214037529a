//! The three sweeps. Grid points are evaluated in parallel and returned in
//! grid order.

use rayon::prelude::*;
use starloc_core::fim::evaluate;
use starloc_core::{DesignKind, Error};

use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::records::{Cell, SweepRecord};

#[derive(Debug, Clone, Copy)]
struct Point {
    snr_db: f64,
    eps1: f64,
    eta1: f64,
    design: DesignKind,
    seed: Option<u64>,
}

fn evaluate_point(cfg: &ScenarioConfig, p: Point) -> Result<SweepRecord> {
    let model = cfg.model(p.eps1, p.eta1, p.snr_db, p.design, p.seed.unwrap_or(0))?;
    let mut record = SweepRecord {
        snr_db: p.snr_db,
        eps1: p.eps1,
        eta1: p.eta1,
        design: p.design,
        seed: p.seed,
        crlb: [Cell::Singular; 9],
        rmse_outdoor: Cell::Singular,
        rmse_indoor: Cell::Singular,
        cond: Cell::Singular,
    };
    match evaluate(&model) {
        Ok(report) => {
            record.crlb = std::array::from_fn(|i| Cell::Value(report.channel_crlb[i]));
            record.rmse_outdoor = Cell::Value(report.rmse_outdoor);
            record.rmse_indoor = Cell::Value(report.rmse_indoor);
            record.cond = Cell::Value(report.condition_number);
        }
        Err(Error::SingularFim { condition }) => {
            if condition.is_finite() {
                record.cond = Cell::Value(condition);
            }
        }
        Err(e) => return Err(e.into()),
    }
    Ok(record)
}

fn run(cfg: &ScenarioConfig, points: Vec<Point>) -> Result<Vec<SweepRecord>> {
    points
        .into_par_iter()
        .map(|p| evaluate_point(cfg, p))
        .collect()
}

fn base_design(cfg: &ScenarioConfig) -> (DesignKind, Option<u64>) {
    let kind = DesignKind::from(cfg.system.design);
    (
        kind,
        (kind == DesignKind::Random).then_some(cfg.system.seed),
    )
}

/// One row per `(pair, SNR)`, pairs outermost.
pub fn run_snr_sweep(cfg: &ScenarioConfig) -> Result<Vec<SweepRecord>> {
    let (design, seed) = base_design(cfg);
    let snrs = cfg.snr_sweep.snr_db.values();
    let points = cfg
        .snr_sweep
        .pairs
        .iter()
        .flat_map(|&[eps1, eta1]| {
            snrs.iter().map(move |&snr_db| Point {
                snr_db,
                eps1,
                eta1,
                design,
                seed,
            })
        })
        .collect();
    run(cfg, points)
}

/// The `ε1 × η1` grid at a fixed SNR, `ε1` outermost.
pub fn run_heatmap(cfg: &ScenarioConfig) -> Result<Vec<SweepRecord>> {
    let (design, seed) = base_design(cfg);
    let snr_db = cfg.heatmap.snr_db;
    let etas = cfg.heatmap.eta1.values();
    let points = cfg
        .heatmap
        .eps1
        .values()
        .into_iter()
        .flat_map(|eps1| {
            etas.iter().map(move |&eta1| Point {
                snr_db,
                eps1,
                eta1,
                design,
                seed,
            })
        })
        .collect();
    run(cfg, points)
}

/// Every structured design once and the random design once per seed, each
/// over the SNR grid.
pub fn run_design_compare(cfg: &ScenarioConfig) -> Result<Vec<SweepRecord>> {
    let dc = &cfg.design_compare;
    let mut variants = Vec::new();
    for &d in &dc.designs {
        let kind = DesignKind::from(d);
        if kind == DesignKind::Random {
            variants.extend(dc.seeds.iter().map(|&s| (kind, Some(s))));
        } else {
            variants.push((kind, None));
        }
    }
    let snrs = dc.snr_db.values();
    let points = variants
        .into_iter()
        .flat_map(|(design, seed)| {
            snrs.iter().map(move |&snr_db| Point {
                snr_db,
                eps1: dc.eps1,
                eta1: dc.eta1,
                design,
                seed,
            })
        })
        .collect();
    run(cfg, points)
}
