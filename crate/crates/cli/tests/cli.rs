use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn stacklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stacklab"))
        .args(args)
        .env_remove("STACKLAB_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("stacklab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn pi1_of_the_modular_segment() {
    let o = stacklab(&["pi1", &data("segment_z2_z3.gog")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("<a, b | a^2, b^3>"));
    assert!(out.contains("abelianization Z6"));
}

#[test]
fn swap_is_morita_equivalent_to_a_point() {
    let o = stacklab(&[
        "morita-check",
        &data("swap.groupoid.json"),
        &data("point.groupoid.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("equivalent\n"));
    let o = stacklab(&[
        "morita-check",
        &data("swap.groupoid.json"),
        &data("s3.group.json"),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reduce_in_the_infinite_dihedral_group() {
    let o = stacklab(&["reduce", &data("dinfty.gog"), "a a b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "b\n");
    let o = stacklab(&["reduce", &data("dinfty.gog"), "a b b a"]);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["uniformize".to_string(), data("segment_z2_z3.gog")],
        vec![
            "enumerate".into(),
            data("segment_z2_z3.gog"),
            "--degree".into(),
            "4".into(),
            "--json".into(),
        ],
        vec![
            "cover".into(),
            data("segment_z2_z3.gog"),
            data("modular_degree3.action.json"),
            "--dot".into(),
        ],
        vec!["inertia".into(), data("s3.group.json"), "--json".into()],
    ];
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = stacklab(&args);
        let b = stacklab(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn cover_json_round_trips_through_monodromy() {
    let o = stacklab(&[
        "cover",
        &data("segment_z2_z3.gog"),
        &data("modular_degree3.action.json"),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(data("modular_degree3.cover.json")).unwrap()
    );
    let o = stacklab(&["monodromy", &data("modular_degree3.cover.json"), "--json"]);
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(data("modular_degree3.action.json")).unwrap()
    );
}

#[test]
fn double_cosets_and_fiber_product_agree() {
    let o = stacklab(&[
        "double-cosets",
        &data("z2_in_s3.hom.json"),
        &data("z3_in_s3.hom.json"),
    ]);
    assert!(
        stdout(&o).starts_with("double cosets 1\n  representative 0 size 6 stabilizer order 1\n")
    );
    let o = stacklab(&[
        "fiber-product",
        &data("bz2_to_bs3.functor.json"),
        &data("bz3_to_bs3.functor.json"),
    ]);
    let out = stdout(&o);
    assert!(out.contains("components 1\n"));
    assert!(out.contains("isotropy order 1\n"));
}

#[test]
fn ball_dot_has_three_nodes() {
    let o = stacklab(&["ball", &data("segment_z2_z3.gog"), "--radius", "1", "--dot"]);
    assert_eq!(stdout(&o).matches("label=\"v").count(), 3);
}

#[test]
fn validate_distinguishes_invalid_from_malformed() {
    let o = stacklab(&["validate", &data("modular_degree3.cover.json")]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "valid cover\n".to_string())
    );
    // identity of the only object is not an identity for composition
    let bad_axiom = scratch(
        "bad.groupoid.json",
        "{\"arrows\": [[0,0],[0,0]],\n\"compose\": [[0,0,1],[0,1,1],[1,0,1],[1,1,1]],\n\"identities\": [0],\n\"kind\": \"groupoid\",\n\"objects\": [\"*\"],\n\"version\": 1}\n",
    );
    let o = stacklab(&["validate", &bad_axiom]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid:"));
    let truncated = scratch("truncated.groupoid.json", "{\"arrows\": [[0,0]],\n\"comp");
    let o = stacklab(&["validate", &truncated]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    let dangling = scratch(
        "dangling.groupoid.json",
        "{\"arrows\": [[0,3]],\n\"compose\": [[0,0,0]],\n\"identities\": [0],\n\"kind\": \"groupoid\",\n\"objects\": [\"*\"],\n\"version\": 1}\n",
    );
    let o = stacklab(&["validate", &dangling]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("arrows[0]"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(stacklab(&[]).status.code(), Some(2));
    assert_eq!(stacklab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        stacklab(&["pi1", &data("segment_z2_z3.gog"), "--dot"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        stacklab(&["pi1", "/nonexistent.gog"]).status.code(),
        Some(2)
    );
    assert_eq!(
        stacklab(&["skeleton", &data("segment_z2_z3.gog")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn degree_cap_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_stacklab"))
        .args(["enumerate", &data("dinfty.gog"), "--degree", "3"])
        .env("STACKLAB_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn selftest_passes_and_logs_its_seed() {
    let o = stacklab(&["selftest", "--quick", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("seed 7\n"));
    assert!(out.contains(", 0 failed\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("selftest seed 7"));
    let q = stacklab(&["selftest", "--quick", "--seed", "7", "--quiet"]);
    assert!(q.stderr.is_empty());
    assert_eq!(q.stdout, o.stdout);
}
