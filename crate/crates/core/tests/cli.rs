use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pathdensity::integrator::gaussian_closed_form;
use pathdensity::io::{read_curve, Manifest};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pathdensity"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().args(args).arg("--out-dir").arg(dir).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn manifest(dir: &Path) -> Manifest {
    Manifest::parse(&fs::read_to_string(dir.join("manifest.txt")).unwrap()).unwrap()
}

fn write_sheet(dir: &Path) -> PathBuf {
    let path = dir.join("sheet.csv");
    let mut text = String::from("time,price\n");
    let mut x: f64 = 50.0;
    for i in 0..3000u64 {
        // a deterministic zig-zag with a slow drift
        let step = ((i * 7919) % 13) as f64 - 6.0;
        x *= 1.0 + 0.0004 * step;
        text.push_str(&format!("{},{x}\n", 1_600_000_000 + 60 * i));
    }
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn gaussian_pdf_matches_the_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    ok(
        tmp.path(),
        &[
            "pdf", "--gamma", "1", "--p", "2", "--sigma", "0.1", "--T", "1", "--points", "4096",
        ],
    );
    let c = read_curve(
        fs::File::open(tmp.path().join("curve.tsv"))
            .map(std::io::BufReader::new)
            .unwrap(),
    )
    .unwrap();
    assert_eq!(c.grid.len(), 40);
    let exact: Vec<f64> = c
        .grid
        .iter()
        .map(|&x| gaussian_closed_form(0.0, x, 0.1, 0.0, 1.0))
        .collect();
    let mass = pathdensity::integrator::trapezoid(&c.grid, &exact);
    for (d, e) in c.density.iter().zip(&exact) {
        assert!((d - e / mass).abs() <= 1e-6 * e / mass);
    }
    let m = manifest(tmp.path());
    assert_eq!(m.get("sigma"), Some("0.1"));
    assert_eq!(m.get("seed"), Some("0"));
    assert!(m.get("args").unwrap().starts_with("pdf --gamma 1"));
}

#[test]
fn manifest_args_reproduce_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    ok(&a, &["pdf", "--preset", "ge-5m", "--points", "2048", "--seed", "5"]);
    let args = manifest(&a).get("args").unwrap().to_string();
    let args: Vec<&str> = args.split(' ').collect();
    ok(&b, &args);
    assert_eq!(
        fs::read(a.join("curve.tsv")).unwrap(),
        fs::read(b.join("curve.tsv")).unwrap()
    );
    // the canonical args spell the preset out, so only its name goes missing
    let (ma, mb) = (manifest(&a), manifest(&b));
    let without_preset = |m: &Manifest| {
        m.entries()
            .iter()
            .filter(|(k, _)| k != "preset")
            .cloned()
            .collect::<Vec<_>>()
    };
    assert_eq!(without_preset(&ma), without_preset(&mb));
}

#[test]
fn beta_is_an_alternative_to_sigma() {
    let tmp = tempfile::tempdir().unwrap();
    ok(
        tmp.path(),
        &[
            "pdf", "--gamma", "1", "--p", "2", "--beta", "50", "--points", "1024", "--span", "0.5",
        ],
    );
    let sigma: f64 = manifest(tmp.path()).get("sigma").unwrap().parse().unwrap();
    assert!((sigma - 0.1).abs() < 1e-12);
}

#[test]
fn histograms_from_a_sheet() {
    let tmp = tempfile::tempdir().unwrap();
    let sheet = write_sheet(tmp.path());
    let out = tmp.path().join("h1");
    ok(
        &out,
        &[
            "hist",
            "--file",
            sheet.to_str().unwrap(),
            "--bins",
            "40",
            "--range",
            "0.02",
        ],
    );
    let m = manifest(&out);
    assert_eq!(m.get("sample_count"), Some("2999"));
    assert_eq!(m.get("skipped_gaps"), Some("0"));
    let table = fs::read_to_string(out.join("histogram.tsv")).unwrap();
    assert!(table.starts_with("bin_center\tdensity\terrbar\n"));
    assert_eq!(table.lines().count(), 41);

    let out5 = tmp.path().join("h5");
    ok(
        &out5,
        &[
            "hist",
            "--file",
            sheet.to_str().unwrap(),
            "--stride",
            "5",
            "--preset",
            "amazon-5m",
        ],
    );
    let m = manifest(&out5);
    assert_eq!(m.get("sample_count"), Some("2995"));
    assert_eq!(m.get("bins"), Some("75"));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let code = |args: &[&str]| run(tmp.path(), args).status.code().unwrap();
    assert_eq!(
        code(&[
            "hist",
            "--file",
            empty.to_str().unwrap(),
            "--bins",
            "10",
            "--range",
            "0.1"
        ]),
        1
    );
    assert_eq!(
        code(&["hist", "--file", "/no/such/file", "--bins", "10", "--range", "0.1"]),
        3
    );
    assert_eq!(code(&["pdf", "--gamma", "3", "--p", "2", "--sigma", "0.1"]), 1);
    assert_eq!(
        code(&["pdf", "--gamma", "1", "--p", "2", "--sigma", "0.1", "--beta", "2"]),
        1
    );
    assert_eq!(code(&["pdf", "--p", "2", "--sigma", "0.1"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["pdf", "--preset", "nowhere"]), 1);
    // the whole density underflows on this grid
    assert_eq!(
        code(&[
            "pdf", "--gamma", "0.23", "--p", "1.23", "--sigma", "0.0099", "--T", "0.0333", "--span", "0.04",
            "--points", "1024"
        ]),
        2
    );
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn analysis_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let fast = ["--points", "2048"];

    let dir = root.join("converge");
    let mut args = vec![
        "converge", "--dims", "4,6,8", "--gamma", "1", "--p", "1.5", "--sigma", "0.0037",
    ];
    args.extend(fast);
    ok(&dir, &args);
    let metrics = fs::read_to_string(dir.join("metrics.tsv")).unwrap();
    assert_eq!(metrics.lines().count(), 4);
    assert!(manifest(&dir).get("relative_4_6").is_some());

    let dir = root.join("ck");
    let mut args = vec!["ck", "--gamma", "1", "--p", "2", "--sigma", "0.1", "--split", "0.5"];
    args.extend(fast);
    ok(&dir, &args);
    let z: f64 = manifest(&dir).get("max_z").unwrap().parse().unwrap();
    assert!(z < 3.0);

    // a curve on the bin centers of a histogram compares perfectly with it
    let sheet = write_sheet(root);
    let hdir = root.join("hist");
    ok(
        &hdir,
        &[
            "hist",
            "--file",
            sheet.to_str().unwrap(),
            "--bins",
            "30",
            "--range",
            "0.012",
        ],
    );
    let hist = hdir.join("histogram.tsv");
    let dir = root.join("compare");
    ok(
        &dir,
        &[
            "compare",
            "--hist",
            hist.to_str().unwrap(),
            "--curve",
            hist.to_str().unwrap(),
        ],
    );
    let m = manifest(&dir);
    assert_eq!(m.get("log_rmse"), Some("0e0"));
    assert_eq!(m.get("within_errbar"), Some("1e0"));

    let dir = root.join("sweep");
    let mut args = vec![
        "sweep",
        "--hist",
        hist.to_str().unwrap(),
        "--gammas",
        "1,0.5",
        "--ps",
        "1.5,2",
        "--sigmas",
        "0.002,0.004",
        "--slices",
        "4",
    ];
    args.extend(fast);
    ok(&dir, &args);
    let table = fs::read_to_string(dir.join("sweep.tsv")).unwrap();
    assert_eq!(table.lines().count(), 9);
    assert_eq!(manifest(&dir).get("rows"), Some("8"));
}

#[test]
fn inputs_are_left_alone() {
    let tmp = tempfile::tempdir().unwrap();
    let sheet = write_sheet(tmp.path());
    let before = fs::read(&sheet).unwrap();
    ok(
        &tmp.path().join("h"),
        &[
            "hist",
            "--file",
            sheet.to_str().unwrap(),
            "--bins",
            "20",
            "--range",
            "0.02",
        ],
    );
    assert_eq!(fs::read(&sheet).unwrap(), before);
}
