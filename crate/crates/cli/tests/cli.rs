use std::process::{Command, Output};

fn twocover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twocover"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const T2: [&str; 6] = ["--theorem", "2", "--q", "2", "--p", "3"];

#[test]
fn exit_codes() {
    let mut args = vec!["verify", "--mode", "full"];
    args.extend(T2);
    assert_eq!(code(&twocover(&args)), 0);

    args.extend(["--second", "3"]);
    let out = twocover(&args);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("[FAIL] coverage"));

    assert_eq!(
        code(&twocover(&[
            "verify",
            "--mode",
            "exact",
            "--theorem",
            "3",
            "--p",
            "3"
        ])),
        2
    );
    assert_eq!(
        code(&twocover(&[
            "verify",
            "--mode",
            "exact",
            "--theorem",
            "2",
            "--q",
            "3",
            "--p",
            "3"
        ])),
        2
    );
    assert_eq!(
        code(&twocover(&[
            "verify",
            "--mode",
            "full",
            "--theorem",
            "2",
            "--q",
            "4",
            "--p",
            "5"
        ])),
        2
    );
    assert_eq!(code(&twocover(&["verify"])), 2);
    assert_eq!(
        code(&twocover(&[
            "oracle",
            "--family",
            "elem-abelian",
            "--p",
            "4",
            "--rank",
            "3"
        ])),
        2
    );
}

#[test]
fn machine_output_is_thread_independent() {
    let run = |threads: &str| {
        let mut args = vec![
            "--threads",
            threads,
            "--report",
            "machine",
            "verify",
            "--mode",
            "exact",
        ];
        args.extend(T2);
        let out = twocover(&args);
        assert_eq!(code(&out), 0);
        stdout(&out)
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert!(one.contains("\nsigma2_computed=31\n"));
}

#[test]
fn oracle_family() {
    let out = twocover(&[
        "--report",
        "machine",
        "oracle",
        "--family",
        "elem-abelian",
        "--p",
        "2",
        "--rank",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("sigma2_computed=7\n"), "{text}");
    assert!(text.ends_with("verdict=pass\n"));
}

#[test]
fn maximals_listing() {
    let mut args = vec!["--report", "machine", "maximals"];
    args.extend(T2);
    let out = twocover(&args);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("handle.")).count(),
        32
    );
    assert!(text.contains("gamma_check=pass"));
}

#[test]
fn exported_cayley_table_round_trips() {
    let dir = std::env::temp_dir().join(format!("twocover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    let p = path.to_str().unwrap();
    let mut args = vec!["construct", "--export-cayley", p];
    args.extend(T2);
    assert_eq!(code(&twocover(&args)), 0);

    let inst = twocover::constructions::build_theorem2(2, 3).unwrap();
    let back = twocover::tabular::TabularGroup::load(&path).unwrap();
    assert_eq!(
        back,
        twocover::tabular::TabularGroup::from_group(inst.group())
    );
    // 384 exceeds the tabular subgroup cap
    let out = twocover(&["sigma2", "--cayley", p]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds subgroup cap"));

    std::fs::write(&path, "2\n0 1\n1 1\n").unwrap();
    assert_eq!(code(&twocover(&["sigma2", "--cayley", p])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cyclic_group_has_no_covering() {
    let dir = std::env::temp_dir().join(format!("twocover-z6-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z6.txt");
    let table: String = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| ((i + j) % 6).to_string())
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect();
    std::fs::write(&path, format!("6\n{table}")).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&twocover(&["sigma2", "--cayley", p])), 2);
    assert_eq!(code(&twocover(&["sigma", "--cayley", p])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
