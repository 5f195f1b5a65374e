use bnls::evolution::snapshot::{read_snapshot, write_snapshot};
use bnls::harness::{run_scenario, ExperimentConfig};
use bnls::{Field2D, GridSpec, C64};

#[test]
fn snapshot_round_trip_at_single_precision() {
    let grid = GridSpec::new(5.0, 16).unwrap();
    let f = Field2D::from_fn(grid, |x, y| C64::new(x.sin(), (2.0 * y).cos()));
    let mut buf = Vec::new();
    write_snapshot(&mut buf, &f, 0.25).unwrap();
    assert_eq!(buf.len(), 32 + 8 * 16 * 16);
    assert_eq!(&buf[0..4], b"BNLS");
    assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
    assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 16);
    assert_eq!(f64::from_le_bytes(buf[16..24].try_into().unwrap()), 5.0);
    let (g, t) = read_snapshot(&mut buf.as_slice()).unwrap();
    assert_eq!(t, 0.25);
    assert!(g.to_physical().relative_l2_error(&f).unwrap() < 1e-6);
}

fn header(path: &std::path::Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn evolve_outputs_follow_the_documented_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_toml_str("[run]\nscenario = \"evolve\"\n[solver]\nt_end = 0.5\n").unwrap();
    let m = run_scenario(&cfg, dir.path()).unwrap();
    assert!(m.passed());
    assert_eq!(header(&dir.path().join("trajectory.csv")), "time,mass,energy,modified_energy,hs_norm,linf,l2_error");
    let last = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let err: f64 = last.lines().last().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(err <= 1e-7);
    let (u, t) = read_snapshot(&mut std::fs::File::open(dir.path().join("final.snap")).unwrap()).unwrap();
    assert_eq!((u.grid().points_per_side(), t), (64, 0.5));
    let svg = std::fs::read_to_string(dir.path().join("drift.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn sweep_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_toml_str(
        "[run]\nscenario = \"almost-conservation-sweep\"\n[grid]\npoints = 96\n[solver]\ndt = 1e-3\n[imethod]\ncutoffs = [4, 8]\n[sweep]\nseeds = 1\ndelta = 0.01\n",
    )
    .unwrap();
    let m = run_scenario(&cfg, dir.path()).unwrap();
    assert_eq!(header(&dir.path().join("sweep.csv")), "N,increment,log2N,log_increment,slope,seed,config_digest");
    let body = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(body.lines().count(), 3);
    assert!(body.lines().skip(1).all(|l| l.ends_with(&m.config_digest)));
    assert!(header(&dir.path().join("aggregate.csv")).contains("implied_c1"));
    assert!(std::fs::read_to_string(dir.path().join("sweep.svg")).unwrap().contains("N^-3"));
}
