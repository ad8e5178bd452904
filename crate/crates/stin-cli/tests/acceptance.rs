//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run `cargo test -p stin-cli --test acceptance -- --nocapture` to see the
//! per-criterion lines; without `--nocapture` they surface only on failure.

use std::path::Path;
use std::process::Command;
use std::sync::LazyLock;
use std::time::Instant;
use stin_core::channel::{received_power_mw, sample_fading, Beamforming, LinkRole, NoiseConfig};
use stin_core::connectivity::coverage_indicator;
use stin_core::engine::{
    discrepancy_curve, preset, run_beamforming, run_connectivity, single_link_coverage,
    BeamformingRun, ConnectivityRun, CoverageEstimate, Scheme,
};
use stin_core::geometry::{sample_shell, ShellConfig};
use stin_core::stats::{ks_critical_value, one_sample_ks};
use stin_core::sync::{arrival_difference_us, cluster_compensation, slot_offset_pair, SyncConfig};

/// Shared fig6 run (10^4 trials, fixed preset seed) plus its wall time.
static FIG6: LazyLock<(ConnectivityRun, f64)> = LazyLock::new(|| {
    let cfg = preset("fig6").unwrap();
    assert_eq!(cfg.n_trials, 10_000);
    let start = Instant::now();
    let run = run_connectivity(&cfg).unwrap();
    (run, start.elapsed().as_secs_f64())
});

static FIG3: LazyLock<BeamformingRun> =
    LazyLock::new(|| run_beamforming(&preset("fig3").unwrap()).unwrap());

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!("[{}] criterion {id}: {name} - {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn nonincreasing(curve: &[CoverageEstimate]) -> bool {
    curve.windows(2).all(|w| w[1].p_hat <= w[0].p_hat)
}

#[test]
fn criterion_01_fig6_paired_mc_dominance() {
    let (run, secs) = &*FIG6;
    let mut violations = 0u64;
    let mut checks = 0u64;
    for trial in &run.trials {
        for &threshold in &run.thresholds_db {
            let mc = coverage_indicator(trial.sinr_mc, threshold);
            let sat = coverage_indicator(trial.sinr_sc_sat, threshold);
            let bs = coverage_indicator(trial.sinr_sc_bs, threshold);
            if (sat && !mc) || (bs && !mc) {
                violations += 1;
            }
            checks += 1;
        }
    }
    let pass = violations == 0 && *secs <= 60.0;
    report(
        1,
        "fig6 paired MC dominance",
        pass,
        &format!("{violations} violations over {checks} trial-threshold checks, run took {secs:.2}s (limit 60s)"),
    );
}

#[test]
fn criterion_02_fig6_low_threshold_gap() {
    let (run, _) = &*FIG6;
    let mc = run.coverage_curve(Scheme::MultiConnectivity);
    let sat = run.coverage_curve(Scheme::SatelliteOnly);
    let bs = run.coverage_curve(Scheme::BaseStationOnly);
    let mut worst_gap = f64::INFINITY;
    for i in 0..mc.len() {
        if mc[i].threshold_db <= 0.0 {
            worst_gap = worst_gap.min(mc[i].ci_low - sat[i].ci_high);
            worst_gap = worst_gap.min(mc[i].ci_low - bs[i].ci_high);
        }
    }
    report(
        2,
        "fig6 strict MC gap at low thresholds",
        worst_gap > 0.0,
        &format!("smallest CI separation at thresholds <= 0 dB is {worst_gap:+.4}"),
    );
}

#[test]
fn criterion_03_monotone_coverage_curves() {
    let (run, _) = &*FIG6;
    let mut pass = true;
    for scheme in Scheme::ALL {
        pass &= nonincreasing(&run.coverage_curve(scheme));
    }
    let fig3 = &*FIG3;
    for k in 0..fig3.m_grid.len() {
        pass &= nonincreasing(&fig3.coverage_curve(k, true));
        pass &= nonincreasing(&fig3.coverage_curve(k, false));
    }
    report(
        3,
        "coverage curves nonincreasing in threshold",
        pass,
        "fig6 mc/sc_sat/sc_bs and fig3 curves for every m",
    );
}

#[test]
fn criterion_04_fig3_beamforming_dominance() {
    let run = &*FIG3;
    let mut violations = 0u64;
    let mut checks = 0u64;
    for trial in &run.trials {
        for sample in trial {
            for &threshold in &run.thresholds_db {
                if coverage_indicator(sample.without_beamforming, threshold)
                    && !coverage_indicator(sample.with_beamforming, threshold)
                {
                    violations += 1;
                }
                checks += 1;
            }
        }
    }
    report(
        4,
        "fig3 beamforming dominates trial-paired",
        violations == 0,
        &format!(
            "{violations} violations over {checks} checks, m grid {:?}, {} trials",
            run.m_grid,
            run.trials.len()
        ),
    );
}

#[test]
fn criterion_05_fig4_pilot_monotonicity_and_perfect_limit() {
    let cfg = preset("fig4").unwrap();
    assert!(cfg.pilot_seeds >= 20);
    assert_eq!(cfg.pilot_grid, vec![1, 2, 4, 8, 16]);
    let curve = discrepancy_curve(&cfg).unwrap();
    let monotone = curve.windows(2).all(|w| w[1].ks_mean <= w[0].ks_mean);
    let means: Vec<f64> = curve.iter().map(|e| e.ks_mean).collect();

    // Perfect-pilot limit: more pilots than any population draw, infinite
    // pilot SNR, 10^5 samples.
    let mut limit_cfg = preset("fig4").unwrap();
    limit_cfg.pilot_grid = vec![4096];
    limit_cfg.pilots.pilot_snr_db = f64::INFINITY;
    limit_cfg.pilot_seeds = 1;
    limit_cfg.pilot_samples = 100_000;
    let limit = discrepancy_curve(&limit_cfg).unwrap()[0].ks_mean;

    report(
        5,
        "fig4 discrepancy shrinks with pilots",
        monotone && limit < 0.02,
        &format!("means over {} seeds: {means:.4?}; perfect-pilot KS = {limit:.5} (< 0.02)", cfg.pilot_seeds),
    );
}

#[test]
fn criterion_06_analytic_gamma_tail_oracle() {
    // Single 500 km zenith link, no interference; transmit power lowered so
    // the mean SNR sits inside the threshold grid.
    let base = preset("fig6").unwrap();
    let noise = NoiseConfig { noise_power_dbm: -110.0 };
    let thresholds: Vec<f64> = (-10..=20).map(f64::from).collect();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for m in [1.0, 2.0, 5.0] {
        let mut link = base.ntn_link.clone();
        link.tx_power_dbm = 5.0;
        link.nakagami_m = m;
        let curve = single_link_coverage(&link, 500.0, &noise, &thresholds, 10_000, 4242).unwrap();
        let mean_rx_mw =
            received_power_mw(&link, 500.0, 1.0, LinkRole::Serving, Beamforming::On).unwrap();
        for e in &curve {
            // Coverage = Q(m, m * tau * sigma^2 / S_bar), the regularized
            // upper incomplete Gamma tail.
            let x = m * 10f64.powf(e.threshold_db / 10.0) * noise.noise_mw() / mean_rx_mw;
            let analytic = statrs::function::gamma::gamma_ur(m, x);
            let width = e.ci_high - e.ci_low;
            let err = (e.p_hat - analytic).abs();
            worst = worst.max(err / width.max(1e-12));
            pass &= err <= 3.0 * width;
        }
    }
    report(
        6,
        "Monte Carlo matches the Gamma-tail coverage law",
        pass,
        &format!("worst |p_hat - analytic| = {worst:.2} CI widths (limit 3) for m in {{1,2,5}}"),
    );
}

#[test]
fn criterion_07_fading_law() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let n = 100_000;
    let rayleigh: Vec<f64> =
        (0..n).map(|_| sample_fading(1.0, &mut rng).unwrap().power_gain).collect();
    let d = one_sample_ks(&rayleigh, |x| 1.0 - (-x).exp());
    let crit = ks_critical_value(n, 0.01);
    let ks_ok = d < crit;

    let mut means_ok = true;
    let mut detail_means = Vec::new();
    for m in [0.5, 1.0, 2.0, 5.0] {
        let draws: Vec<f64> =
            (0..n).map(|_| sample_fading(m, &mut rng).unwrap().power_gain).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let se = (1.0 / m / n as f64).sqrt();
        means_ok &= (mean - 1.0).abs() < 3.0 * se;
        detail_means.push(mean);
    }
    report(
        7,
        "Nakagami fading law",
        ks_ok && means_ok,
        &format!("m=1 KS {d:.5} < critical {crit:.5}; means {detail_means:.4?} within 3 SE of 1"),
    );
}

#[test]
fn criterion_08_shell_geometry() {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rayon::prelude::*;

    // Frozen oracle values: lambda * 4 pi (6371 + 500)^2.
    let cases = [(1e-5, 5932.664117474604), (5e-7, 296.6332058737302)];
    let draws = 10_000u64;
    let mut counts_ok = true;
    let mut details = Vec::new();
    for (density, expected) in cases {
        let shell = ShellConfig::new(500.0, density);
        let total: u64 = (0..draws)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(808);
                rng.set_stream(i);
                sample_shell(&shell, &mut rng).len() as u64
            })
            .sum();
        let mean = total as f64 / draws as f64;
        let se = (expected / draws as f64).sqrt();
        counts_ok &= (mean - expected).abs() < 3.0 * se;
        details.push(format!("{mean:.2} vs {expected:.2} (3se {:.2})", 3.0 * se));
    }

    let shell = ShellConfig::new(500.0, 1e-5);
    let mut rng = ChaCha8Rng::seed_from_u64(809);
    let mut z = Vec::new();
    let r = shell.shell_radius_km();
    for _ in 0..2 {
        z.extend(sample_shell(&shell, &mut rng).iter().map(|p| p.z / r));
    }
    let d = one_sample_ks(&z, |x| ((x + 1.0) / 2.0).clamp(0.0, 1.0));
    let crit = ks_critical_value(z.len(), 0.01);
    report(
        8,
        "shell count mean and hat-box uniformity",
        counts_ok && d < crit,
        &format!("means {details:?}; hat-box KS {d:.5} < {crit:.5} on {} points", z.len()),
    );
}

#[test]
fn criterion_09_sync_compensation() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(90);
    let mut zero_ok = true;
    for _ in 0..1000 {
        let sat = rng.random::<f64>() * 9000.0;
        let bs = rng.random::<f64>() * 300.0;
        let slot = 100.0 + rng.random::<f64>() * 900.0;
        let offset = slot_offset_pair(sat, bs, slot);
        zero_ok &= arrival_difference_us(sat, bs, slot, &offset) == 0.0;
    }

    let mut cluster_ok = true;
    for _ in 0..200 {
        let delays: Vec<f64> = (0..5).map(|_| 1000.0 + rng.random::<f64>() * 20.0).collect();
        let timing = cluster_compensation(&delays).unwrap();
        let min = timing.residuals_us.iter().cloned().fold(f64::INFINITY, f64::min);
        cluster_ok &= min == 0.0;
        let shift = rng.random::<f64>() * 500.0 - 250.0;
        let shifted: Vec<f64> = delays.iter().map(|d| d + shift).collect();
        let shifted_timing = cluster_compensation(&shifted).unwrap();
        for (a, b) in timing.residuals_us.iter().zip(&shifted_timing.residuals_us) {
            cluster_ok &= (a - b).abs() < 1e-9;
        }
    }

    let cfg = SyncConfig::default();
    let misaligned = !cluster_compensation(&[1000.0, 1010.0]).unwrap().aligned(cfg.cp_length_us);
    let aligned = cluster_compensation(&[1000.0, 1003.0]).unwrap().aligned(cfg.cp_length_us);

    report(
        9,
        "timing compensation",
        zero_ok && cluster_ok && misaligned && aligned,
        "exact zero arrival difference on 1000 pairs; residual min 0 and translation-invariant; CP 4.7us flags the 10us spread",
    );
}

#[test]
fn criterion_10_manifest_reproducibility() {
    let bin = env!("CARGO_BIN_EXE_stin-sim");
    let dir = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut details = Vec::new();

    let presets: [(&str, &[&str], &[&str]); 3] = [
        ("fig6", &["--trials", "2500"], &["mc.csv", "sc_sat.csv", "sc_bs.csv"]),
        ("fig3", &["--trials", "400"], &["beamforming_m1.csv", "non_beamforming_m5.csv"]),
        (
            "fig4",
            &["--set", "sweep.pilot_seeds=4", "--set", "sweep.pilot_samples=300"],
            &["discrepancy.csv"],
        ),
    ];
    for (name, extra, files) in presets {
        let first = dir.path().join(format!("{name}_serial"));
        let status = Command::new(bin)
            .args(["run", "--preset", name, "--parallel", "1", "--out"])
            .arg(&first)
            .args(extra)
            .status()
            .unwrap();
        assert!(status.success());

        // Reproduce from the manifest alone: extract the embedded config and
        // rerun it with full parallelism.
        let manifest = stin_cli::output::read_manifest(&first.join("manifest.json")).unwrap();
        let cfg_path = dir.path().join(format!("{name}.conf"));
        std::fs::write(&cfg_path, &manifest.config_text).unwrap();
        let second = dir.path().join(format!("{name}_parallel"));
        let status = Command::new(bin)
            .args(["run", "--config"])
            .arg(&cfg_path)
            .args(["--parallel", "8", "--out"])
            .arg(&second)
            .status()
            .unwrap();
        assert!(status.success());

        for file in files {
            let identical = read(&first.join(file)) == read(&second.join(file));
            pass &= identical;
            if !identical {
                details.push(format!("{name}/{file} differs"));
            }
        }
    }
    if details.is_empty() {
        details.push("serial and manifest-replayed parallel runs byte-identical for fig6, fig3, fig4".into());
    }
    report(10, "manifest reproducibility", pass, &details.join("; "));
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
