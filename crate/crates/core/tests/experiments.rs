use std::f64::consts::PI;

use sparseproc::experiments::{mterm_curves, run, run_gallery, run_pdf, run_simulate, run_stats};
use sparseproc::{Error, ExperimentConfig, ExperimentKind};

fn column(t: &sparseproc::Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap().into_iter().map(|c| c.as_f64().unwrap()).collect()
}

#[test]
fn unknown_keys_are_rejected_with_location() {
    let text = "seed = 3\n\n[noise]\nkind = \"gaussian\"\nvariance = 2.0\ncolour = 1\n";
    match ExperimentConfig::from_toml(text) {
        Err(Error::Config { line, key, .. }) => {
            assert_eq!(line, Some(6));
            assert_eq!(key.as_deref(), Some("colour"));
        }
        other => panic!("{other:?}"),
    }
    assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    assert!(ExperimentConfig::from_toml("[grid]\nn = \"many\"").is_err());
}

#[test]
fn error_json_is_machine_readable() {
    let err = ExperimentConfig::from_toml("[grid]\nwidth = 2").unwrap_err();
    let v = err.to_json();
    assert_eq!(v["error"]["kind"], "config");
    assert_eq!(v["error"]["line"], 2);
    assert_eq!(v["error"]["key"], "width");
}

#[test]
fn experiment_tag_must_match() {
    let c = ExperimentConfig::from_toml("experiment = \"pdf\"").unwrap();
    assert!(c.check_kind(ExperimentKind::Pdf).is_ok());
    assert!(c.check_kind(ExperimentKind::Stats).is_err());
}

#[test]
fn csv_carries_resolved_config_and_header() {
    let c = ExperimentConfig::from_toml("seed = 5\n[grid]\nn = 8\n").unwrap();
    let tables = run_simulate(&c).unwrap();
    let csv = tables[0].to_csv(&c.resolved_json());
    let mut lines = csv.lines();
    let first = lines.next().unwrap();
    let json = first.strip_prefix("# config: ").unwrap();
    let back: ExperimentConfig = serde_json::from_str(json).unwrap();
    assert_eq!(back, c);
    let header = lines.find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "realization,t,value");
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 8);
    let (_, max) = tables[0].notes.iter().find(|(k, _)| k == "max_abs_increment").unwrap();
    assert!(max.parse::<f64>().unwrap() > 0.0);
}

#[test]
fn runs_are_deterministic() {
    let c = ExperimentConfig::from_toml("seed = 17\nrealizations = 3\n[noise]\nkind = \"laplace\"\n[grid]\nn = 64\n")
        .unwrap();
    let a = run(ExperimentKind::Simulate, &c).unwrap();
    let b = run(ExperimentKind::Simulate, &c).unwrap();
    assert_eq!(a[0].to_csv("{}"), b[0].to_csv("{}"));
}

#[test]
fn pdf_of_brownian_motion() {
    let c = ExperimentConfig::from_toml("[system]\npoles = [0.0]\n[pdf]\nt = 1.0\nx_max = 4.0\nstep = 0.05\n").unwrap();
    let t = &run_pdf(&c).unwrap()[0];
    let (x, p) = (column(t, "x"), column(t, "pdf"));
    for (x, p) in x.iter().zip(&p) {
        assert!((p - (-x * x / 2.0).exp() / (2.0 * PI).sqrt()).abs() < 2e-3, "x={x}: {p}");
    }
}

#[test]
fn stats_of_ar1() {
    let c = ExperimentConfig::from_toml("[stats]\nmax_lag = 2.0\nn_omega = 5\nomega_max = 4.0\nwavelet_levels = 2\n")
        .unwrap();
    let tables = run_stats(&c).unwrap();
    let names: Vec<&str> = tables.iter().map(|t| t.name.as_str()).collect();
    assert_eq!(names, ["autocorrelation", "spectrum", "pdf", "wavelet_exponents"]);
    let r = &tables[0];
    for (tau, v) in column(r, "tau").iter().zip(column(r, "r")) {
        assert!((v - 0.5 * (-tau).exp()).abs() < 1e-5, "τ={tau}");
    }
    let s = &tables[1];
    for ((w, a), b) in column(s, "omega").iter().zip(column(s, "phi")).zip(column(s, "phi_from_autocorrelation")) {
        assert!((a - 1.0 / (1.0 + w * w)).abs() < 1e-12);
        assert!((a - b).abs() < 1e-3, "ω={w}: {a} vs {b}");
    }
}

#[test]
fn stats_skip_second_order_for_heavy_tails() {
    let c =
        ExperimentConfig::from_toml("[noise]\nkind = \"cauchy\"\n[stats]\nn_omega = 3\nwavelet_levels = 1\n").unwrap();
    let tables = run_stats(&c).unwrap();
    assert!(tables[0].rows.is_empty());
    assert!(tables[0].notes.iter().any(|(k, _)| k == "skipped"));
}

#[test]
fn small_mterm_run() {
    let c = ExperimentConfig::from_toml(
        "realizations = 4\n[mterm]\nn = 64\nnoises = [\"gaussian\"]\ntransforms = [\"dct\", \"haar\"]\nm_fractions = [0.25, 1.0]\n",
    )
    .unwrap();
    let curves = mterm_curves(&c).unwrap();
    assert_eq!(curves.len(), 2);
    for curve in &curves {
        assert_eq!(curve.realizations, 4);
        assert!(curve.points[1].mean < 1e-20);
        assert!(curve.points[0].mean > 0.0 && curve.points[0].mean < 1.0);
    }
}

#[test]
fn gallery_tables() {
    let c = ExperimentConfig::from_toml("[gallery]\nduration = 32.0\nbins = 11\n").unwrap();
    let tables = run_gallery(&c).unwrap();
    let names: Vec<&str> = tables.iter().map(|t| t.name.as_str()).collect();
    assert_eq!(names, ["gallery_paths", "gallery_histograms", "gallery_increments"]);
}
