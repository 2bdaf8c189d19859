use std::collections::BTreeMap;
use std::path::Path;

use splitsim::cli::{cli_run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use splitsim::snapshot::Snapshot;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("splitsim").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli_run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn four_grains_on_the_line() {
    let (code, out, err) = run(&["simulate", "-d", "1", "-n", "4", "-h", "0", "--order", "parallel"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let snap = Snapshot::parse(&out).unwrap();
    assert_eq!(snap.t, 5);
    assert!(out.ends_with("-3 | 1/2 | 0/1\n-2 | 3/4 | 0/1\n-1 | 3/4 | 0/1\n1 | 3/4 | 0/1\n2 | 3/4 | 0/1\n3 | 1/2 | 0/1\n"));
    assert!(err.contains("stabilized at t=5"));
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["simulate", "-d", "1", "-n", "3/0", "-h", "0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--n"), "{err}");
    let (code, _, err) = run(&["simulate", "-d", "1", "-n", "4", "-h", "0", "--frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--frobnicate"));
    let (code, _, err) = run(&["simulate", "-d", "9", "-n", "4", "-h", "0"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
    // the origin's instability changes inside the interval
    let (code, _, _) = run(&["simulate", "-d", "1", "-n", "1/4+h", "-h", "[1/2,1)"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    // a wrong target shape fails the check
    let (code, _, _) = run(&["shape", "--polygon", "square", "-n", "3", "-h", "3/4", "-t", "30", "--eps", "1/10"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("simulate"));
}

#[test]
fn constants_line() {
    let (code, out, err) = run(&["constants", "-d", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "p=1 q=1/2 h*=7/10 C'=7/10\n");
    assert!(err.contains('≈'));
    let (_, json, _) = run(&["constants", "-d", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["h_star"], "7/9");
    assert!(!json.contains('.'));
}

#[test]
fn outputs_are_deterministic() {
    let runs: [&[&str]; 4] = [
        &["simulate", "-d", "2", "-n", "20", "-h", "1/5", "--order", "random", "--seed", "7", "--every", "3"],
        &["simulate", "-d", "2", "-n", "5-5h", "-h", "[7/10,40/57)", "--every", "4", "--max-steps", "12"],
        &["ca", "--automaton", "square", "--steps", "12", "--every", "4", "--ppm"],
        &["scan", "-d", "2", "-h", "-1,1/4,2/3,7/8", "-n", "4,9", "--orders", "parallel,random:3", "--threads", "4", "--certify"],
    ];
    for args in runs {
        // identical argv, output directory included
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let mut a: Vec<&str> = args.to_vec();
        a.extend(["--out", out.to_str().unwrap()]);
        let mut seen = Vec::new();
        for _ in 0..2 {
            let (code, _, err) = run(&a);
            assert_eq!(code, EXIT_OK, "{args:?}: {err}");
            seen.push(files(&out));
            std::fs::remove_dir_all(&out).unwrap();
        }
        assert!(!seen[0].is_empty(), "{args:?}: {:?}", seen[0].keys());
        assert_eq!(seen[0], seen[1], "{args:?}");
    }
}

#[test]
fn snapshot_render_and_grid_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().to_str().unwrap();
    let (code, _, _) = run(&["simulate", "-d", "2", "-n", "3", "-h", "[3/4,1)", "--max-steps", "6", "--out", p]);
    assert_eq!(code, EXIT_OK);
    let snap = dir.path().join("final.snapshot");
    let snap = snap.to_str().unwrap();
    let (code, _, err) = run(&["render", "--snapshot", snap]);
    assert_eq!(code, EXIT_USAGE, "{err}");
    assert!(err.contains("--h"));
    let (code, ppm, _) = run(&["render", "--snapshot", snap, "-h", "7/8", "--scale", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(ppm.starts_with("P3\n15 15\n255\n"), "{}", &ppm[..20]);

    let (code, grid, _) = run(&["ca", "--automaton", "octagon", "--steps", "3"]);
    assert_eq!(code, EXIT_OK);
    let gpath = dir.path().join("g.grid");
    std::fs::write(&gpath, grid).unwrap();
    let (code, ppm, err) = run(&["render", "--grid", gpath.to_str().unwrap(), "--automaton", "octagon"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(ppm.starts_with("P3\n"));
}

#[test]
fn rules_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (code, rules, _) = run(&["ca", "--automaton", "octagon", "--dump-rules"]);
    assert_eq!(code, EXIT_OK);
    let path = dir.path().join("octagon.rules");
    std::fs::write(&path, &rules).unwrap();
    let from_file = run(&["ca", "--rules", path.to_str().unwrap(), "--steps", "10"]).1;
    let builtin = run(&["ca", "--automaton", "octagon", "--steps", "10"]).1;
    assert_eq!(from_file, builtin);
}

#[test]
fn config_files_drive_runs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run");
    let (code, _, _) = run(&["simulate", "-d", "1", "-n", "4", "-h", "0", "--out", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let cfg = p.join("config.toml");
    let (code, out, _) = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    // the stored out_dir is reused
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(p.join("final.snapshot")).unwrap().lines().nth(1), Some("d=1 t=5 order=parallel"));
}
