use std::fs;
use std::process::Command;

use proptest::prelude::*;
use streamcalc::{CanonicalCircuit, Field, PointedLinearSystem, RationalStream, WeightedAutomaton};
use streamcalc_cli::formats;
use streamcalc_cli::{run, Outcome};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("streamcalc").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert_eq!(out.code, 0, "{args:?} failed: {}", out.stderr);
    out.stdout
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_streamcalc");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let good = run(&["eval", "1/(1-X)^2", "--n", "6"]);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&good.stdout),
        "1, 2, 3, 4, 5, 6\n1/(1 - 2*X + X^2)\n"
    );
    assert_eq!(run(&["eval", "1/X", "--n", "2"]).status.code(), Some(1));
    let syntax = run(&["eval", "1 +", "--n", "2"]);
    assert_eq!(syntax.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&syntax.stderr).contains("at byte 3"));
}

#[test]
fn derivatives() {
    assert_eq!(
        ok(&["derive", "1/(1-X)^2", "--k", "1"]),
        "(2 - X)/(1 - 2*X + X^2)\n"
    );
    assert_eq!(
        ok(&["derive", "1/(1-X)^2", "--k", "2"]),
        "(3 - 2*X)/(1 - 2*X + X^2)\n"
    );
    assert_eq!(ok(&["derive", "1 + 2*X", "--k", "2"]), "0\n");
}

#[test]
fn realize_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.txt");
    let text = ok(&["realize", "1/(1-X)^2"]);
    assert_eq!(text, "field: q\nn: 2\nm: 1\nF: 0,-1;1,2\nH: 1,2\nv0: 1,0\n");
    fs::write(&path, &text).unwrap();
    let sys = format!("system:{}", path.display());
    assert_eq!(ok(&["equal", &sys, "expr:1/(1-X)^2"]), "equal\n");
    let other_state = format!("system:{}@0,1", path.display());
    assert_eq!(
        ok(&["equal", &other_state, "expr:(2-X)/(1-X)^2"]),
        "equal\n"
    );
    assert_eq!(
        ok(&["equal", &sys, "expr:1/(1-2*X)"]),
        "not-equal at index 2\n"
    );

    let pair = ok(&["realize", "1/(1-2*X)", "1/(1-X)^2"]);
    assert!(pair.contains("n: 3\n") && pair.contains("F: 0,0,2;1,0,-5;0,1,4\n"));
    fs::write(&path, &pair).unwrap();
    assert_eq!(cli(&["equal", &sys, "expr:1"]).code, 1);
}

#[test]
fn circuits_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let compact = ok(&["circuit", "synth", "1/(1-X)^2"]);
    assert_eq!(compact, "M=0,-1;1,2; N=1,2; r=1,0\n");
    let canon = dir.path().join("c.txt");
    fs::write(&canon, &compact).unwrap();
    let canon = canon.to_str().unwrap();
    assert_eq!(
        ok(&["circuit", "sim", "--file", canon, "--n", "5"]),
        "1, 2, 3, 4, 5\n"
    );
    assert_eq!(
        ok(&["equal", &format!("circuit:{canon}"), "expr:1/(1-X)^2"]),
        "equal\n"
    );

    let net = dir.path().join("n.txt");
    fs::write(&net, ok(&["circuit", "synth", "1/(1-X)^2", "--netlist"])).unwrap();
    let net = net.to_str().unwrap();
    assert_eq!(
        ok(&["circuit", "sim", "--file", net, "--n", "5"]),
        "1, 2, 3, 4, 5\n"
    );
    assert_eq!(cli(&["equal", &format!("circuit:{net}"), "expr:1"]).code, 2);

    let broken = dir.path().join("b.txt");
    fs::write(
        &broken,
        "register r 1\nmultiplier m 2\nr.out -> m.in\noutput m.out\n",
    )
    .unwrap();
    assert_eq!(
        cli(&[
            "circuit",
            "sim",
            "--file",
            broken.to_str().unwrap(),
            "--n",
            "3"
        ])
        .code,
        1
    );
}

#[test]
fn automata_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    fs::write(
        &path,
        "states 2\nout 1 1\nout 2 2\nedge 1 2 1\nedge 2 1 -1\nedge 2 2 2\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    for method in ["path", "closed"] {
        let one = ok(&[
            "automaton",
            "eval",
            "--file",
            p,
            "--state",
            "1",
            "--n",
            "4",
            "--method",
            method,
        ]);
        let two = ok(&[
            "automaton",
            "eval",
            "--file",
            p,
            "--state",
            "2",
            "--n",
            "4",
            "--method",
            method,
        ]);
        assert_eq!(one, "1, 2, 3, 4\n");
        assert_eq!(two, "2, 3, 4, 5\n");
    }
    assert_eq!(
        ok(&["equal", &format!("automaton:{p}@2"), "expr:(2-X)/(1-X)^2"]),
        "equal\n"
    );
    assert_eq!(
        cli(&["automaton", "eval", "--file", p, "--state", "3", "--n", "2"]).code,
        1
    );

    let synth = ok(&["automaton", "synth", "1/(1-X)^2"]);
    assert_eq!(
        synth,
        "field q\nstates 2\nout 1 1\nout 2 2\nedge 1 2 1\nedge 2 1 -1\nedge 2 2 2\n"
    );
}

#[test]
fn rank_and_probe_reports() {
    assert_eq!(
        ok(&["rank", "--prefix", "1,2,3,4,5,6,7", "--m", "4"]),
        "prefix_len: 7\nhankel_size: 4\nrank: 2\n"
    );
    assert_eq!(
        ok(&["probe", "--expr", "1/(1-X)^2", "--d", "5"]),
        "prefix_len: 11\nhankel_size: 6\nrank: 2\nverdict: RationalWitnessConsistent\n"
    );
    let triangular: Vec<String> = (0..41)
        .map(|i: usize| {
            if (0..=i).any(|k| k * (k + 1) / 2 == i) {
                "1"
            } else {
                "0"
            }
            .to_string()
        })
        .collect();
    let report = ok(&["probe", "--prefix", &triangular.join(","), "--d", "10"]);
    assert!(
        report.ends_with("verdict: NotRationalBelowBound(10)\n"),
        "{report}"
    );
    assert_eq!(cli(&["rank", "--m", "2"]).code, 2);
}

#[test]
fn prime_field_commands() {
    let text = ok(&["--field", "gf:5", "realize", "1/(1-X)^2"]);
    assert!(text.starts_with("field: gf:5\n"));
    assert!(text.contains("F: 0,4;1,2\n"));
    assert_eq!(
        ok(&["--field", "gf:5", "derive", "1/(1-X)", "--k", "3"]),
        "1/(1 + 4*X)\n"
    );
}

fn small_rational() -> impl Strategy<Value = RationalStream> {
    let q = Field::Rationals;
    (
        prop::collection::vec(-4i64..=4, 0..=3),
        prop::collection::vec(-4i64..=4, 0..=3),
    )
        .prop_map(move |(n, d)| {
            let mut den = vec![1];
            den.extend(d);
            RationalStream::new(
                streamcalc::Polynomial::from_ints(&q, &n),
                streamcalc::Polynomial::from_ints(&q, &den),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn file_formats_round_trip(s in small_rational()) {
        let q = Field::Rationals;
        let sys = streamcalc::realize(std::slice::from_ref(&s)).unwrap();
        let parsed = formats::parse_system(&formats::format_system(&sys), &q).unwrap();
        let back = PointedLinearSystem::new(parsed.system, parsed.initial.unwrap()).unwrap();
        prop_assert_eq!(back, sys);

        let a = WeightedAutomaton::synthesize(&s);
        prop_assert_eq!(formats::parse_automaton(&formats::format_automaton(&a), &q).unwrap(), a);

        let c = CanonicalCircuit::synthesize(&s);
        prop_assert_eq!(formats::parse_canonical(&formats::format_canonical(&c), &q).unwrap(), c.clone());
        let net = c.to_netlist();
        prop_assert_eq!(formats::parse_netlist(&formats::format_netlist(&net), &q).unwrap(), net);
    }

    #[test]
    fn printed_normal_form_reparses(s in small_rational()) {
        let text = s.to_string();
        let out = cli(&["eval", &text, "--n", "1"]);
        prop_assert_eq!(out.code, 0);
        prop_assert_eq!(out.stdout.lines().nth(1).unwrap(), text);
    }
}
