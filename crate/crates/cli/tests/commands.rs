use std::fs;
use std::path::Path;
use std::process::Command;

use arclen_cli::commands::{self, fixture};
use arclen_cli::{AlphaGrid, Emit, RunConfig};
use arclen_core::{datasets, PenaltyKind, PointSet, SolverConfig};

const BIN: &str = env!("CARGO_BIN_EXE_arclen-reg");

fn fixture_path(id: u8) -> String {
    format!("{}/fixtures/example{id}.csv", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Parses the file as XML and returns (polylines, circles).
fn svg_counts(path: &Path) -> (usize, usize) {
    let text = fs::read_to_string(path).unwrap();
    let doc =
        roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let count = |tag: &str| doc.descendants().filter(|n| n.has_tag_name(tag)).count();
    (count("polyline"), count("circle"))
}

fn config(input: &str, penalties: Vec<PenaltyKind>, grid: AlphaGrid, out: &Path) -> RunConfig {
    RunConfig {
        input: input.into(),
        penalties,
        grid,
        solver: SolverConfig::default(),
        out: out.to_path_buf(),
        emit: Emit::default(),
    }
}

#[test]
fn example1_fit_at_bound_matches_reference_vector() {
    let dir = tempfile::tempdir().unwrap();
    let grid = AlphaGrid::from_options(None, Some(0.105), None).unwrap();
    let cfg = config(
        &fixture_path(1),
        vec![PenaltyKind::ArcLength],
        grid,
        dir.path(),
    );
    let art = commands::cmd_fit(&cfg).unwrap();
    let fit = &art.report.fits[0];
    let err = fit
        .ordinates
        .iter()
        .zip(datasets::EXAMPLE1_MINIMIZER)
        .map(|(a, p)| (a.0 - p).abs())
        .fold(0.0, f64::max);
    assert!(err <= 5e-3, "{err}");
    assert!(fit.theta.as_ref().unwrap().separated);
    let csv = fs::read_to_string(dir.path().join("fit.csv")).unwrap();
    assert!(csv.starts_with("x,a\n"));
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn two_points_at_zero_alpha_reproduce_the_data() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("two.csv");
    fs::write(&input, "0,1\n1,3\n").unwrap();
    let out = dir.path().join("out");
    let grid = AlphaGrid::from_options(Some(vec![0.0]), None, None).unwrap();
    let cfg = config(
        input.to_str().unwrap(),
        vec![PenaltyKind::ArcLength],
        grid,
        &out,
    );
    let art = commands::cmd_fit(&cfg).unwrap();
    let a: Vec<f64> = art.report.fits[0].ordinates.iter().map(|v| v.0).collect();
    assert_eq!(a, vec![1.0, 3.0]);
    assert_eq!(svg_counts(&out.join("fit-1.svg")), (1, 2));
}

#[test]
fn example4_all_kinds_gives_one_plot_per_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let grid = AlphaGrid::from_options(
        Some(datasets::reference(4).reference_alphas.to_vec()),
        None,
        None,
    )
    .unwrap();
    let mut cfg = config(
        &fixture_path(4),
        PenaltyKind::ALL.to_vec(),
        grid,
        dir.path(),
    );
    cfg.solver.grad_tol = 1e-7;
    let art = commands::cmd_fit(&cfg).unwrap();
    assert_eq!(art.report.fits.len(), 12);
    for i in 1..=4 {
        let svg = dir.path().join(format!("fit-{i}.svg"));
        assert_eq!(svg_counts(&svg), (3, 12));
        let text = fs::read_to_string(&svg).unwrap();
        for color in ["orange", "green", "red", "blue"] {
            assert!(text.contains(&format!("stroke=\"{color}\"")), "{color}");
        }
    }
    assert!(!dir.path().join("fit-5.svg").exists());
}

#[test]
fn path_outputs_are_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let grid = AlphaGrid::from_options(None, Some(0.1), Some(vec![0.4, 0.6, 0.8, 1.0])).unwrap();
    let cfg = config(
        &fixture_path(2),
        vec![PenaltyKind::ArcLength],
        grid,
        dir.path(),
    );
    let art = commands::cmd_path(&cfg).unwrap();
    let alphas: Vec<f64> = art.report.paths[0].alphas.iter().map(|v| v.0).collect();
    assert_eq!(alphas, vec![500.0, 750.0, 1000.0, 1250.0]);
    for i in 1..=4 {
        assert_eq!(
            svg_counts(&dir.path().join(format!("path-{i}.svg"))),
            (1, 12)
        );
    }
    let (lines, markers) = svg_counts(&dir.path().join("path-summary.svg"));
    assert_eq!((lines, markers), (1, 4));
}

#[test]
fn single_alpha_path_is_valid() {
    let d = fixture(3);
    let grid = AlphaGrid::from_options(Some(vec![25.0]), None, None).unwrap();
    let (art, sweeps) =
        commands::path("t", &d, &PenaltyKind::ALL, &grid, &SolverConfig::default()).unwrap();
    assert!(sweeps.iter().all(|s| s.entries.len() == 1));
    assert_eq!(art.report.paths.len(), 3);
}

#[test]
fn example3_path_compares_all_kinds() {
    let d = fixture(3);
    let grid = AlphaGrid::from_options(Some(vec![10.0, 25.0, 50.0, 250.0]), None, None).unwrap();
    let (art, _) =
        commands::path("t", &d, &PenaltyKind::ALL, &grid, &SolverConfig::default()).unwrap();
    let kinds: Vec<&str> = art.report.paths.iter().map(|p| p.penalty).collect();
    assert_eq!(kinds, ["arclength", "ridge", "lasso"]);
    assert!(art.report.paths.iter().all(|p| p.entries.len() == 4));
}

#[test]
fn bound_reports() {
    let (_, b) = commands::bound("t", &fixture(2), 0.1).unwrap();
    assert_eq!(b.alpha_bar, 1250.0);
    let flat = PointSet::from_pairs([(0.0, 2.0), (1.0, 2.0), (3.0, 2.0)]).unwrap();
    let (art, b) = commands::bound("flat", &flat, 0.1).unwrap();
    assert_eq!(b.alpha_bar, 0.0);
    assert!(b.degenerate && art.report.bound.unwrap().degenerate);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let ex1 = fixture_path(1);

    let (code, stdout, _) = run(&["bound", "--input", &ex1, "--epsilon", "0.105", "--out", out]);
    assert_eq!(code, 0);
    assert!(stdout.contains("672.42"), "{stdout}");

    let (code, _, _) = run(&["fit", "--input", &ex1, "--alpha", "10,100", "--out", out]);
    assert_eq!(code, 0);

    let (code, _, _) = run(&[
        "fit",
        "--input",
        &ex1,
        "--alpha",
        "100",
        "--max-iters",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(code, 2);

    let (code, _, _) = run(&[
        "path",
        "--input",
        &ex1,
        "--epsilon",
        "0.105",
        "--grid-fractions",
        "0.5,1",
        "--max-iters",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(code, 2);

    let dup = dir.path().join("dup.csv");
    fs::write(&dup, "0,1\n0,2\n").unwrap();
    let (code, _, stderr) = run(&[
        "fit",
        "--input",
        dup.to_str().unwrap(),
        "--alpha",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(code, 1);
    assert!(
        stderr.contains("duplicate x value 0 on rows 1 and 2"),
        "{stderr}"
    );

    for bad in [
        vec!["fit", "--input", "/nonexistent.csv", "--alpha", "1"],
        vec!["fit", "--input", &ex1],
        vec![
            "fit",
            "--input",
            &ex1,
            "--alpha",
            "1",
            "--grid-fractions",
            "0.5",
        ],
        vec!["fit", "--input", &ex1, "--alpha", "2,1"],
        vec!["fit", "--input", &ex1, "--alpha", "1", "--grad-tol", "0"],
        vec![
            "fit",
            "--input",
            &ex1,
            "--penalty",
            "elastic",
            "--alpha",
            "1",
        ],
        vec!["bogus"],
    ] {
        let (code, _, _) = run(&bad);
        assert_eq!(code, 1, "{bad:?}");
    }
}

#[test]
fn emit_selects_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, _) = run(&[
        "fit",
        "--input",
        &fixture_path(2),
        "--alpha",
        "500",
        "--emit",
        "json",
        "--out",
        out,
    ]);
    assert_eq!(code, 0);
    assert!(dir.path().join("report.json").exists());
    assert!(!dir.path().join("fit.csv").exists());
    assert!(!dir.path().join("fit-1.svg").exists());
}

#[test]
fn examples_into_unwritable_dir_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    let (code, _, _) = run(&["examples", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn examples_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ca, table, _) = run(&["examples", "--out", a.path().to_str().unwrap()]);
    let (cb, _, _) = run(&["examples", "--out", b.path().to_str().unwrap()]);
    assert_eq!((ca, cb), (0, 0));
    assert!(!table.contains("FAIL"), "{table}");
    for i in 1..=4 {
        let name = format!("example{i}/report.json");
        let ra = fs::read(a.path().join(&name)).unwrap();
        let rb = fs::read(b.path().join(&name)).unwrap();
        assert_eq!(ra, rb, "{name}");
        let v: serde_json::Value = serde_json::from_slice(&ra).unwrap();
        assert_eq!(v["schema"], "arclen-reg/1");
        assert_eq!(v["input"]["source"], format!("bundled:example{i}"));
    }
    for entry in fs::read_dir(a.path().join("example4")).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "svg") {
            svg_counts(&p);
        }
    }
}
