//! Acceptance suite: one line per criterion, nonzero exit on any
//! unexpected failure. Run with `cargo test -p starloc-experiments --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::FRAC_PI_2;

use common::{random_full_size_model, random_model, random_scene, rng};
use nalgebra::{Complex, DMatrix, Point3};
use rand::Rng;
use starloc_core::fim::{
    analytic_mean_jacobian, block_inverse_via_projections, crlb_position, evaluate, fim_channel,
    fim_position, mean_vector, mean_vector_at, simulate_measurement,
};
use starloc_core::geometry::{
    channel_params_from_scene, jacobian, position_from_spherical, spherical_from_positions,
    ChannelParams, SceneGeometry, SphericalTriple,
};
use starloc_core::starris::{design_principal_angles, make_design, orthogonality_defect};
use starloc_core::{DesignKind, Model, Upa};
use starloc_experiments::{
    run_design_compare, run_heatmap, run_snr_sweep, ScenarioConfig, SweepRecord,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn derivative_gate() -> Outcome {
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    let scenes = 24;
    for _ in 0..scenes {
        let model = random_model(&mut r);
        let g = analytic_mean_jacobian(&model).unwrap().g;
        let base = model.channel_params().unwrap().to_array();
        for i in 0..9 {
            let h = 1e-6;
            let eval = |delta: f64| {
                let mut p = base;
                p[i] += delta;
                mean_vector_at(&model, &ChannelParams::from_array(p).unwrap()).unwrap()
            };
            let fd = (eval(h) - eval(-h)) / Complex::new(2.0 * h, 0.0);
            let col = g.column(i);
            worst = worst.max((col - &fd).norm() / col.norm());
        }
    }
    outcome(
        worst <= 1e-5,
        format!("worst column error {worst:.2e} over {scenes} scenes (tol 1e-5)"),
    )
}

fn wrap(a: f64) -> f64 {
    (a + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI
}

fn jacobian_gate() -> Outcome {
    let mut r = rng(21);
    let mut scenes = vec![SceneGeometry::reference()];
    scenes.extend((0..20).map(|_| random_scene(&mut r)));
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for scene in &scenes {
        let t = jacobian(scene).unwrap().assembled();
        for i in 0..6 {
            let params = |sign: f64| {
                let mut s = *scene;
                let p = if i < 3 {
                    &mut s.ms_outdoor
                } else {
                    &mut s.ms_indoor
                };
                p[i % 3] += sign * h;
                channel_params_from_scene(&s).unwrap().to_array()
            };
            let (plus, minus) = (params(1.0), params(-1.0));
            let row_scale = t.row(i).amax();
            for j in 0..9 {
                let diff = if j % 3 == 0 {
                    wrap(plus[j] - minus[j])
                } else {
                    plus[j] - minus[j]
                };
                let fd = diff / (2.0 * h);
                worst = worst.max((t[(i, j)] - fd).abs() / t[(i, j)].abs().max(1e-3 * row_scale));
            }
        }
    }
    outcome(
        worst <= 1e-6,
        format!(
            "worst entry error {worst:.2e} over {} scenes (tol 1e-6)",
            scenes.len()
        ),
    )
}

fn snr_scaling() -> Outcome {
    let mut r = rng(3);
    let mut models = vec![Model::reference()];
    models.extend((0..5).map(|_| random_full_size_model(&mut r)));
    let (mut var_err, mut rmse_err): (f64, f64) = (0.0, 0.0);
    for model in &models {
        let snr = 10.0 * model.snr().log10();
        let lo = evaluate(model).unwrap();
        let hi = evaluate(&model.clone().with_snr_db(snr + 10.0)).unwrap();
        for i in 0..9 {
            var_err = var_err.max(rel(hi.channel_crlb[i] * 10.0, lo.channel_crlb[i]));
        }
        let s = 10f64.sqrt();
        rmse_err = rmse_err
            .max(rel(hi.rmse_outdoor * s, lo.rmse_outdoor))
            .max(rel(hi.rmse_indoor * s, lo.rmse_indoor));
    }
    outcome(
        var_err <= 1e-9 && rmse_err <= 1e-9,
        format!("variance error {var_err:.2e}, rmse error {rmse_err:.2e} (tol 1e-9)"),
    )
}

fn projection_identity() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let scenes = 12;
    for _ in 0..scenes {
        let model = random_full_size_model(&mut r);
        let t = jacobian(&model.scene).unwrap();
        let cov = crlb_position(&fim_position(&fim_channel(&model).unwrap(), &t))
            .unwrap()
            .covariance;
        let (b1, b2) = block_inverse_via_projections(&model, &t).unwrap();
        for (b, o) in [(b1, 0), (b2, 3)] {
            let direct = cov.fixed_view::<3, 3>(o, o);
            worst = worst.max((b - direct).amax() / direct.amax());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("worst block error {worst:.2e} over {scenes} scenes (tol 1e-8)"),
    )
}

fn design_optimality() -> Outcome {
    let mut defect: f64 = 0.0;
    let mut angle: f64 = 0.0;
    let mut js = Vec::new();
    for kind in [DesignKind::Dft, DesignKind::Hadamard] {
        let pair = make_design::<f64>(kind, 64, 128, 0).unwrap();
        defect = defect.max(orthogonality_defect(&pair));
        for a in design_principal_angles(&pair).unwrap() {
            angle = angle.max((a - FRAC_PI_2).abs());
        }
        let mut model = Model::reference();
        model.profiles = pair;
        js.push(fim_channel(&model).unwrap().j);
    }
    let j_err = (js[0] - js[1]).amax() / js[0].amax();
    outcome(
        defect <= 1e-12 && angle <= 1e-9 && j_err <= 1e-9,
        format!("defect {defect:.2e} (tol 1e-12), angle deviation {angle:.2e} (tol 1e-9), J difference {j_err:.2e} (tol 1e-9)"),
    )
}

fn refraction_trend(sweep: &[SweepRecord]) -> Outcome {
    let (a, b) = (0.5f64.sqrt(), 0.9f64.sqrt());
    let pick = |eps1: f64| sweep.iter().filter(move |r| r.eps1 == eps1 && r.eta1 == a);
    let mut h1_change: f64 = 0.0;
    let mut lowered = true;
    for (base, raised) in pick(a).zip(pick(b)) {
        assert_eq!(base.snr_db, raised.snr_db);
        let v = |r: &SweepRecord, i: usize| r.crlb[i].value().unwrap();
        for i in 0..3 {
            h1_change = h1_change.max(rel(v(raised, i), v(base, i)));
        }
        lowered &= (6..9).all(|i| v(raised, i) < v(base, i));
    }
    outcome(
        lowered && h1_change <= 1e-9,
        format!(
            "h3 bounds strictly lower: {lowered}; largest h1 change {h1_change:.2e} (tol 1e-9)"
        ),
    )
}

fn heatmap_trend(cells: &[SweepRecord]) -> Outcome {
    let argmax = |f: fn(&SweepRecord) -> f64| {
        let r = cells.iter().max_by(|x, y| f(x).total_cmp(&f(y))).unwrap();
        (r.eps1, r.eta1)
    };
    let out = |r: &SweepRecord| r.rmse_outdoor.value().unwrap();
    let ind = |r: &SweepRecord| r.rmse_indoor.value().unwrap();
    let lo = cells.iter().map(|r| r.eps1).fold(f64::INFINITY, f64::min);
    let hi = cells.iter().map(|r| r.eps1).fold(0.0, f64::max);
    let corners_ok = argmax(ind) == (lo, hi) && argmax(out) == (hi, lo);
    let product = |r: &SweepRecord| ind(r) * r.eps1 * (1.0 - r.eta1 * r.eta1).sqrt();
    let p0 = product(&cells[0]);
    let spread = cells
        .iter()
        .map(|r| rel(product(r), p0))
        .fold(0.0, f64::max);
    let (wo, wi) = (
        cells.iter().map(out).fold(0.0, f64::max),
        cells.iter().map(ind).fold(0.0, f64::max),
    );
    let bounded = cells
        .iter()
        .filter(|r| r.eps1 > 0.3 && r.eta1 > 0.3)
        .all(|r| out(r).is_finite() && ind(r).is_finite() && out(r) <= wo && ind(r) <= wi);
    outcome(
        corners_ok && spread <= 1e-9 && bounded,
        format!(
            "indoor max at (eps1, eta1) = {:?}, outdoor max at {:?}; rmse_indoor*eps1*eta2 spread {spread:.2e} (tol 1e-9); interior bounded: {bounded}",
            argmax(ind),
            argmax(out)
        ),
    )
}

struct DesignFindings {
    structured_err: f64,
    max_gap: f64,
    mean_ratio_min: f64,
    seeds_beating: Vec<u64>,
    seeds: usize,
}

fn design_findings(rows: &[SweepRecord]) -> DesignFindings {
    let of = |kind: DesignKind| rows.iter().filter(move |r| r.design == kind);
    let rmse = |r: &SweepRecord| {
        [
            r.rmse_outdoor.value().unwrap(),
            r.rmse_indoor.value().unwrap(),
        ]
    };
    let mut structured_err: f64 = 0.0;
    for (d, h) in of(DesignKind::Dft).zip(of(DesignKind::Hadamard)) {
        for (x, y) in rmse(d).into_iter().zip(rmse(h)) {
            structured_err = structured_err.max(rel(y, x));
        }
    }
    let dft: Vec<&SweepRecord> = of(DesignKind::Dft).collect();
    let baseline = |snr: f64| rmse(dft.iter().find(|r| r.snr_db == snr).unwrap());
    let mut max_gap: f64 = 0.0;
    let mut seeds_beating = Vec::new();
    let mut sums: Vec<(f64, [f64; 2], usize)> =
        dft.iter().map(|r| (r.snr_db, [0.0; 2], 0)).collect();
    for r in of(DesignKind::Random) {
        let base = baseline(r.snr_db);
        let got = rmse(r);
        for m in 0..2 {
            max_gap = max_gap.max(rel(got[m], base[m]));
            if got[m] < base[m] && !seeds_beating.contains(&r.seed.unwrap()) {
                seeds_beating.push(r.seed.unwrap());
            }
        }
        let slot = sums.iter_mut().find(|s| s.0 == r.snr_db).unwrap();
        slot.1[0] += got[0];
        slot.1[1] += got[1];
        slot.2 += 1;
    }
    let mut mean_ratio_min = f64::INFINITY;
    for (snr, total, n) in &sums {
        let base = baseline(*snr);
        for m in 0..2 {
            mean_ratio_min = mean_ratio_min.min(total[m] / *n as f64 / base[m]);
        }
    }
    let seeds = of(DesignKind::Random)
        .filter_map(|r| r.seed)
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    DesignFindings {
        structured_err,
        max_gap,
        mean_ratio_min,
        seeds_beating,
        seeds,
    }
}

fn design_trend(f: &DesignFindings) -> Outcome {
    outcome(
        f.structured_err <= 1e-9 && f.max_gap < 0.2 && f.mean_ratio_min >= 1.0,
        format!(
            "DFT/Hadamard rmse difference {:.2e} (tol 1e-9); largest random-vs-DFT gap {:.1}% (< 20%); seed-averaged rmse / DFT >= {:.4} at every SNR",
            f.structured_err,
            100.0 * f.max_gap,
            f.mean_ratio_min
        ),
    )
}

fn design_per_seed(f: &DesignFindings) -> Outcome {
    outcome(
        f.seeds_beating.is_empty(),
        format!(
            "{} of {} random seeds beat DFT on at least one MS (seeds {:?})",
            f.seeds_beating.len(),
            f.seeds,
            f.seeds_beating
        ),
    )
}

fn geometry_constants() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let origin: Point3<f64> = Point3::new(
            r.random_range(-10.0..10.0),
            r.random_range(-10.0..10.0),
            r.random_range(-10.0..10.0),
        );
        let s: SphericalTriple<f64> = SphericalTriple::new(
            r.random_range(-3.1..3.1),
            r.random_range(-1.5..1.5),
            r.random_range(0.1..50.0),
        )
        .unwrap();
        let target = position_from_spherical(&origin, &s);
        let back = spherical_from_positions(&origin, &target).unwrap();
        worst = worst
            .max((back.theta - s.theta).abs())
            .max((back.phi - s.phi).abs())
            .max((back.d - s.d).abs() / s.d);
        let again = position_from_spherical(&origin, &back);
        worst = worst.max((again - target).norm() / (1.0 + target.coords.norm()));
    }
    let scene = SceneGeometry::<f64>::reference();
    let p = channel_params_from_scene(&scene).unwrap();
    let d4 = scene.bs_ris_link().unwrap().d;
    let dist_err = [
        (p.links[0].d, 62f64),
        (p.links[1].d, 19.0),
        (p.links[2].d, 19.0),
        (d4, 17.0),
    ]
    .iter()
    .map(|(got, want)| (got - want.sqrt()).abs())
    .fold(0.0, f64::max);
    outcome(
        worst <= 1e-12 && dist_err <= 1e-12,
        format!(
            "round-trip error {worst:.2e}, reference distance error {dist_err:.2e} (tol 1e-12)"
        ),
    )
}

fn sampler_statistics() -> Outcome {
    let mut model = Model::reference();
    model.bs_upa = Upa::half_wavelength(2, 1);
    model.ris_upa = Upa::half_wavelength(2, 1);
    model.k_slots = 4;
    model.profiles = make_design(DesignKind::Dft, 2, 4, 0).unwrap();
    model.noise_variance = 0.25;
    let mu = mean_vector(&model).unwrap() * Complex::new(model.alloc.total_power.sqrt(), 0.0);
    let draws = 100_000;
    let mut sum = DMatrix::<Complex<f64>>::zeros(mu.len(), 1);
    let mut power = vec![0.0; mu.len()];
    for seed in 0..draws {
        let noise = simulate_measurement(&model, seed).unwrap() - &mu;
        for (i, z) in noise.iter().enumerate() {
            sum[i] += z;
            power[i] += z.norm_sqr();
        }
    }
    let n = draws as f64;
    let sigma2 = model.noise_variance;
    let mean_tol = 5.0 * (sigma2 / 2.0).sqrt() / n.sqrt();
    let worst_mean = sum
        .iter()
        .map(|z| (z.re / n).abs().max((z.im / n).abs()))
        .fold(0.0, f64::max);
    let worst_var = power
        .iter()
        .map(|p| (p / n / sigma2 - 1.0).abs())
        .fold(0.0, f64::max);
    outcome(
        worst_mean <= mean_tol && worst_var <= 0.05,
        format!("largest |mean| {worst_mean:.2e} (tol {mean_tol:.2e}), largest variance error {:.2}% (tol 5%)", 100.0 * worst_var),
    )
}

fn main() {
    // `cargo test` passes harness flags such as --nocapture; none apply here.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let cfg = ScenarioConfig::default();
    let sweep = run_snr_sweep(&cfg).unwrap();
    let cells = run_heatmap(&cfg).unwrap();
    let designs = design_findings(&run_design_compare(&cfg).unwrap());

    // (label, outcome, known to be unattainable)
    let results: Vec<(&str, Outcome, bool)> = vec![
        ("1  derivative gate", derivative_gate(), false),
        ("2  geometry Jacobian gate", jacobian_gate(), false),
        ("3  exact SNR scaling", snr_scaling(), false),
        (
            "4  projection-form block inverse",
            projection_identity(),
            false,
        ),
        (
            "5  structured design optimality",
            design_optimality(),
            false,
        ),
        ("6a refraction split trend", refraction_trend(&sweep), false),
        (
            "6b energy/power heatmap trend",
            heatmap_trend(&cells),
            false,
        ),
        (
            "6c random vs DFT: parity, gap, seed average",
            design_trend(&designs),
            false,
        ),
        (
            "6c random vs DFT: per-seed ordering",
            design_per_seed(&designs),
            true,
        ),
        (
            "7  geometry round trip and constants",
            geometry_constants(),
            false,
        ),
        ("8  noise sampler statistics", sampler_statistics(), false),
    ];

    let mut unexpected = 0;
    for (label, o, known) in &results {
        let verdict = match (o.pass, known) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known, see README)",
        };
        println!("criterion {label}: {verdict} - {}", o.detail);
        if !o.pass && !known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
