//! Acceptance criteria, one test per criterion. Each prints a single
//! `PASS` or `FAIL` line straight to stderr (past the test harness's output
//! capture) and then fails the test if the criterion does not hold.
//!
//! Run with `cargo test -p streamcalc-cli --test acceptance`.

use std::io::Write;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};
use streamcalc::{
    realize, resolvent, CanonicalCircuit, Field, FieldElement, FieldOps, LinearSystem, Matrix,
    PointedLinearSystem, Polynomial, RationalFunction, RationalStream, Representation,
    StreamPrefix, Verdict, WeightedAutomaton,
};
use streamcalc_cli::run;

type Check = Result<(), String>;

/// Prints the verdict line and fails the test on `Err`.
fn report(criterion: &str, outcome: Check) {
    let line = match &outcome {
        Ok(()) => format!("PASS  {criterion}"),
        Err(why) => format!("FAIL  {criterion}: {why}"),
    };
    let _ = writeln!(std::io::stderr(), "{line}");
    if let Err(why) = outcome {
        panic!("{criterion}: {why}");
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = run(std::iter::once("streamcalc").chain(args.iter().copied()));
    if out.code == 0 {
        Ok(out.stdout)
    } else {
        Err(format!(
            "{args:?} exited {}: {}",
            out.code,
            out.stderr.trim_end()
        ))
    }
}

/// Runs a property over a fixed number of cases from a fixed seed, so every
/// run of the suite checks the same inputs.
fn property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Check {
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: 10 * cases,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| match e {
        TestError::Abort(why) => format!("aborted: {why}"),
        TestError::Fail(why, input) => format!("{why}; minimal counterexample: {input:?}"),
    })
}

fn q() -> Field {
    Field::Rationals
}

fn gf101() -> Field {
    Field::prime(101u32).unwrap()
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(q()), Just(gf101())]
}

fn ints(field: &Field, v: &[i64]) -> Vec<FieldElement> {
    v.iter().map(|&c| field.int(c)).collect()
}

fn matrix(field: &Field, rows: &[&[i64]]) -> Matrix<FieldElement> {
    Matrix::from_rows(field, rows.iter().map(|r| ints(field, r)).collect()).unwrap()
}

fn rat(field: &Field, num: &[i64], den: &[i64]) -> RationalStream {
    RationalStream::new(
        Polynomial::from_ints(field, num),
        Polynomial::from_ints(field, den),
    )
    .unwrap()
}

/// Numerator and denominator of degree at most 5, coefficients in -9..=9,
/// denominator constant term 1.
fn rational_in(field: Field) -> impl Strategy<Value = RationalStream> {
    (
        prop::collection::vec(-9i64..=9, 0..=6),
        prop::collection::vec(-9i64..=9, 0..=5),
    )
        .prop_map(move |(num, tail)| {
            let mut den = vec![1];
            den.extend(tail);
            rat(&field, &num, &den)
        })
}

fn rational() -> impl Strategy<Value = RationalStream> {
    fields().prop_flat_map(rational_in)
}

/// Like [`rational`] but with a nonzero initial value.
fn invertible() -> impl Strategy<Value = RationalStream> {
    fields().prop_flat_map(|field| {
        (
            prop_oneof![-9i64..=-1, 1i64..=9],
            prop::collection::vec(-9i64..=9, 0..=5),
            prop::collection::vec(-9i64..=9, 0..=5),
        )
            .prop_map(move |(head, rest, tail)| {
                let mut num = vec![head];
                num.extend(rest);
                let mut den = vec![1];
                den.extend(tail);
                rat(&field, &num, &den)
            })
    })
}

fn square(field: Field, n: usize, bound: i64) -> impl Strategy<Value = Matrix<FieldElement>> {
    prop::collection::vec(-bound..=bound, n * n)
        .prop_map(move |v| Matrix::from_fn(&field, n, n, |i, j| field.int(v[i * n + j])))
}

fn vector(field: Field, n: usize, bound: i64) -> impl Strategy<Value = Vec<FieldElement>> {
    prop::collection::vec(-bound..=bound, n).prop_map(move |v| ints(&field, &v))
}

#[test]
fn criterion_01_example_expansions() {
    let outcome = (|| {
        expect(
            "eval 1/(1-3*X)",
            cli(&["eval", "1/(1-3*X)", "--n", "6"])?
                .lines()
                .next()
                .map(str::to_owned),
            Some("1, 3, 9, 27, 81, 243".to_owned()),
        )?;
        expect(
            "eval 1/(1-X)^2",
            cli(&["eval", "1/(1-X)^2", "--n", "6"])?
                .lines()
                .next()
                .map(str::to_owned),
            Some("1, 2, 3, 4, 5, 6".to_owned()),
        )
    })();
    report("criterion 1: example expansions", outcome);
}

#[test]
fn criterion_02_derivative_chain() {
    let outcome = (|| {
        expect(
            "derive --k 1",
            cli(&["derive", "1/(1-X)^2", "--k", "1"])?,
            "(2 - X)/(1 - 2*X + X^2)\n".to_owned(),
        )?;
        expect(
            "derive --k 2",
            cli(&["derive", "1/(1-X)^2", "--k", "2"])?,
            "(3 - 2*X)/(1 - 2*X + X^2)\n".to_owned(),
        )?;
        // The printed forms denote (2 - X)/(1 - X)^2 and (3 - 2X)/(1 - X)^2.
        let f = q();
        let sigma = rat(&f, &[1], &[1, -1]).pow(2);
        expect(
            "first derivative",
            sigma.derivative(),
            rat(&f, &[2, -1], &[1]).mul(&sigma),
        )?;
        expect(
            "second derivative",
            sigma.nth_derivative(2),
            rat(&f, &[3, -2], &[1]).mul(&sigma),
        )
    })();
    report("criterion 2: derivative chain", outcome);
}

#[test]
fn criterion_03_matrix_inverses() {
    let f = q();
    let outcome = (|| {
        let geo = rat(&f, &[1], &[1, -1]);
        let want = Matrix::from_rows(
            &f,
            vec![
                vec![geo.clone(), rat(&f, &[0, 1], &[1, -1])],
                vec![RationalStream::zero(&f), RationalStream::one(&f)],
            ],
        )
        .unwrap();
        let got = resolvent(&matrix(&f, &[&[1, 1], &[0, 0]])).map_err(|e| e.to_string())?;
        expect("resolvent of [[1,1],[0,0]]", got, want)?;

        let rf = |num: &[i64], den: &[i64]| {
            RationalFunction::new(
                Polynomial::from_ints(&f, num),
                Polynomial::from_ints(&f, den),
            )
            .unwrap()
        };
        let pencil = Matrix::from_rows(
            &f,
            vec![
                vec![rf(&[1], &[1]), rf(&[0, 1], &[1])],
                vec![rf(&[0, -1], &[1]), rf(&[1, -2], &[1])],
            ],
        )
        .unwrap();
        let sq = [1, -2, 1];
        let want = Matrix::from_rows(
            &f,
            vec![
                vec![rf(&[1, -2], &sq), rf(&[0, -1], &sq)],
                vec![rf(&[0, 1], &sq), rf(&[1], &sq)],
            ],
        )
        .unwrap();
        let got = pencil.inverse().map_err(|e| e.to_string())?;
        expect("inverse of [[1,X],[-X,1-2X]]", got, want)?;

        let via_resolvent =
            resolvent(&matrix(&f, &[&[0, -1], &[1, 2]])).map_err(|e| e.to_string())?;
        let want = Matrix::from_rows(
            &f,
            vec![
                vec![rat(&f, &[1, -2], &sq), rat(&f, &[0, -1], &sq)],
                vec![rat(&f, &[0, 1], &sq), rat(&f, &[1], &sq)],
            ],
        )
        .unwrap();
        expect("resolvent of [[0,-1],[1,2]]", via_resolvent, want)
    })();
    report("criterion 3: matrix inverses", outcome);
}

#[test]
fn criterion_04_realization_goldens() {
    let f = q();
    let outcome = (|| {
        let single = realize(&[rat(&f, &[1], &[1, -2, 1])]).map_err(|e| e.to_string())?;
        expect("n", single.dim(), 2)?;
        expect("H", single.system().output(), &matrix(&f, &[&[1, 2]]))?;
        expect(
            "F",
            single.system().dynamics(),
            &matrix(&f, &[&[0, -1], &[1, 2]]),
        )?;
        expect("v0", single.initial(), ints(&f, &[1, 0]).as_slice())?;

        let pair = realize(&[rat(&f, &[1], &[1, -2]), rat(&f, &[1], &[1, -2, 1])])
            .map_err(|e| e.to_string())?;
        expect("n", pair.dim(), 3)?;
        expect(
            "H",
            pair.system().output(),
            &matrix(&f, &[&[1, 2, 4], &[1, 2, 3]]),
        )?;
        expect(
            "F",
            pair.system().dynamics(),
            &matrix(&f, &[&[0, 0, 2], &[1, 0, -5], &[0, 1, 4]]),
        )?;
        expect("v0", pair.initial(), ints(&f, &[1, 0, 0]).as_slice())
    })();
    report("criterion 4: realization goldens", outcome);
}

#[test]
fn criterion_05_final_behaviour_goldens() {
    let f = q();
    let outcome = (|| {
        let dynamics = matrix(&f, &[&[1, 1], &[0, 0]]);
        let plain = LinearSystem::new(dynamics.clone(), matrix(&f, &[&[1, 1]])).unwrap();
        let barred = LinearSystem::new(dynamics, matrix(&f, &[&[1, 2]])).unwrap();
        let at = |sys: &LinearSystem, v: &[i64]| {
            sys.final_behaviour(&ints(&f, v)).map_err(|e| e.to_string())
        };
        let geo = rat(&f, &[1], &[1, -1]);
        expect("f(1,0)", at(&plain, &[1, 0])?, vec![geo.clone()])?;
        expect("f(0,1)", at(&plain, &[0, 1])?, vec![geo])?;
        expect(
            "f-bar(0,1)",
            at(&barred, &[0, 1])?,
            vec![rat(&f, &[2, -1], &[1, -1])],
        )
    })();
    report("criterion 5: final behaviour goldens", outcome);
}

#[test]
fn criterion_06_canonical_circuit() {
    let f = q();
    let outcome = (|| {
        let circuit = CanonicalCircuit::new(
            matrix(&f, &[&[0, -1], &[1, 2]]),
            matrix(&f, &[&[1, 2]]),
            ints(&f, &[1, 0]),
        )
        .map_err(|e| e.to_string())?;
        let steps = circuit
            .to_netlist()
            .simulate(12)
            .map_err(|e| e.to_string())?;
        expect("12 steps", steps, ints(&f, &(1..=12).collect::<Vec<_>>()))?;
        expect("behaviour", circuit.behaviour(), rat(&f, &[1], &[1, -2, 1]))
    })();
    report("criterion 6: canonical circuit", outcome);
}

#[test]
fn criterion_07_automaton() {
    let f = q();
    let outcome = (|| {
        let a = WeightedAutomaton::new(ints(&f, &[1, 2]), matrix(&f, &[&[0, 1], &[-1, 2]]))
            .map_err(|e| e.to_string())?;
        let paths = |state: usize| -> Result<Vec<FieldElement>, String> {
            (0..=3)
                .map(|k| a.path_sum(state, k).map_err(|e| e.to_string()))
                .collect()
        };
        expect("path sums of q1", paths(0)?, ints(&f, &[1, 2, 3, 4]))?;
        expect("path sums of q2", paths(1)?, ints(&f, &[2, 3, 4, 5]))?;
        let closed = a.behaviour();
        expect(
            "closed form",
            closed.clone(),
            vec![rat(&f, &[1], &[1, -2, 1]), rat(&f, &[2, -1], &[1, -2, 1])],
        )?;
        expect("q1 methods agree", closed[0].expand(4), paths(0)?)?;
        expect("q2 methods agree", closed[1].expand(4), paths(1)?)
    })();
    report("criterion 7: weighted automaton", outcome);
}

fn round_trips(field: Field) -> Check {
    property(200, rational_in(field), |s| {
        let realized = realize(std::slice::from_ref(&s)).unwrap();
        let views = [
            ("realize", Representation::System(realized)),
            (
                "circuit",
                Representation::Circuit(CanonicalCircuit::synthesize(&s)),
            ),
            (
                "automaton",
                Representation::Automaton(WeightedAutomaton::synthesize(&s), 0),
            ),
        ];
        for (name, view) in views {
            let back = view
                .to_rational()
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&back, &s, "{} did not round-trip", name);
        }
        Ok(())
    })
}

#[test]
fn criterion_08_round_trips() {
    let outcome = round_trips(q())
        .map_err(|e| format!("over Q: {e}"))
        .and_then(|()| round_trips(gf101()).map_err(|e| format!("over GF(101): {e}")));
    report(
        "criterion 8: representation round-trips over Q and GF(101)",
        outcome,
    );
}

#[test]
fn criterion_09_automaton_oracles() {
    let automata = (1usize..=4).prop_flat_map(|n| {
        (vector(q(), n, 3), square(q(), n, 3))
            .prop_map(|(l, k)| WeightedAutomaton::new(l, k).unwrap())
    });
    let outcome = property(100, automata, |a| {
        let closed = a.behaviour();
        for (state, stream) in closed.iter().enumerate() {
            let coeffs = stream.expand(7);
            for (k, coeff) in coeffs.iter().enumerate() {
                let paths = a.path_sum(state, k).unwrap();
                let powers = a
                    .weights()
                    .pow(k as u32)
                    .unwrap()
                    .mul_vec(a.outputs())
                    .unwrap();
                prop_assert_eq!(
                    &paths,
                    coeff,
                    "path sum vs closed form at q{} k={}",
                    state + 1,
                    k
                );
                prop_assert_eq!(
                    &powers[state],
                    coeff,
                    "K^k L vs closed form at q{} k={}",
                    state + 1,
                    k
                );
            }
        }
        Ok(())
    });
    report("criterion 9: automaton semantics agree three ways", outcome);
}

/// Rank of an integer matrix by fraction-free elimination in `i128`,
/// independent of the library's field arithmetic.
fn integer_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let (n, m) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..m {
        let Some(p) = (rank..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in rank + 1..n {
            for c in col + 1..m {
                rows[r][c] = (rows[rank][col] * rows[r][c] - rows[r][col] * rows[rank][c]) / prev;
            }
            rows[r][col] = 0;
        }
        prev = rows[rank][col];
        rank += 1;
    }
    rank
}

#[test]
fn criterion_10_nonrationality_probe() {
    let outcome = (|| {
        let triangular: Vec<i64> = (0..41i64)
            .map(|i| (0..=i).any(|k| k * (k + 1) / 2 == i) as i64)
            .collect();
        let hankel: Vec<Vec<i128>> = (0..11)
            .map(|i| (0..11).map(|j| triangular[i + j] as i128).collect())
            .collect();
        let oracle = integer_rank(hankel);
        if oracle <= 10 {
            return Err(format!(
                "elimination oracle gives rank {oracle}, not above 10"
            ));
        }

        let text: Vec<String> = triangular.iter().map(i64::to_string).collect();
        let out = cli(&["probe", "--prefix", &text.join(","), "--d", "10"])?;
        expect(
            "probe --d 10 on the triangular stream",
            out,
            format!("prefix_len: 41\nhankel_size: 11\nrank: {oracle}\nverdict: NotRationalBelowBound(10)\n"),
        )?;
        let report = streamcalc::analysis::nonrationality_probe(&ints(&q(), &triangular), 10)
            .map_err(|e| e.to_string())?;
        expect(
            "library verdict",
            report.verdict,
            Verdict::NotRationalBelowBound(10),
        )?;

        let out = cli(&["probe", "--expr", "1/(1-X)^2", "--d", "5"])?;
        expect(
            "probe --d 5 on 1/(1-X)^2",
            out,
            "prefix_len: 11\nhankel_size: 6\nrank: 2\nverdict: RationalWitnessConsistent\n"
                .to_owned(),
        )
    })();
    report("criterion 10: non-rationality probe", outcome);
}

const INVARIANT_CASES: u32 = 500;

fn element(field: Field) -> impl Strategy<Value = FieldElement> {
    (-50i64..=50, 1i64..=12).prop_map(move |(n, d)| field.ratio(n, d).unwrap())
}

#[test]
fn criterion_11a_field_axioms() {
    let triples = fields().prop_flat_map(|f| (element(f.clone()), element(f.clone()), element(f)));
    let outcome = property(INVARIANT_CASES, triples, |(a, b, c)| {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.add(&a.field().zero()) == a && a.mul(&a.field().one()) == a);
        prop_assert!(a.add(&FieldOps::neg(&a)).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&FieldOps::inv(&a).unwrap()).is_one());
        }
        Ok(())
    });
    report("criterion 11: field axioms", outcome);
}

#[test]
fn criterion_11b_fundamental_theorem() {
    let outcome = property(INVARIANT_CASES, rational(), |s| {
        let x = RationalStream::x(s.field());
        let rebuilt = RationalStream::constant(s.initial_value()).add(&x.mul(&s.derivative()));
        prop_assert_eq!(rebuilt, s);
        Ok(())
    });
    report("criterion 11: s = s(0) + X s'", outcome);
}

#[test]
fn criterion_11c_x_commutes() {
    let outcome = property(INVARIANT_CASES, rational(), |s| {
        let x = RationalStream::x(s.field());
        prop_assert_eq!(x.mul(&s), s.mul(&x));
        let prefix = StreamPrefix::x(s.field())
            .convolve(StreamPrefix::from_rational(&s))
            .prefix(16);
        let flipped = StreamPrefix::from_rational(&s)
            .convolve(StreamPrefix::x(s.field()))
            .prefix(16);
        prop_assert_eq!(prefix, flipped);
        Ok(())
    });
    report("criterion 11: X commutes", outcome);
}

#[test]
fn criterion_11d_inverse_law() {
    let outcome = property(INVARIANT_CASES, invertible(), |s| {
        let f = s.field().clone();
        let inverse = StreamPrefix::from_rational(&s).inverse().unwrap();
        let product = StreamPrefix::from_rational(&s).convolve(inverse).prefix(16);
        let mut unit = vec![f.zero(); 16];
        unit[0] = f.one();
        prop_assert_eq!(product, unit);
        prop_assert_eq!(s.mul(&s.inverse().unwrap()), RationalStream::one(&f));
        Ok(())
    });
    report(
        "criterion 11: s * s^-1 = 1 on prefixes of length 16",
        outcome,
    );
}

#[test]
fn criterion_11e_dimension_bound() {
    let outcome = property(INVARIANT_CASES, rational(), |s| {
        let bound = s.max_degree();
        let dim = realize(std::slice::from_ref(&s)).unwrap().dim();
        prop_assert!(
            dim <= bound,
            "dim(realize({})) = {} exceeds max(deg num, deg den) = {}",
            s,
            dim,
            bound
        );
        Ok(())
    });
    report(
        "criterion 11: dim(realize(s)) <= max(deg num, deg den)",
        outcome,
    );
}

#[test]
fn criterion_11f_minimize() {
    let systems = (fields(), 1usize..=4, 1usize..=2).prop_flat_map(|(f, n, m)| {
        (
            square(f.clone(), n, 3),
            prop::collection::vec(vector(f.clone(), n, 3), m),
            vector(f.clone(), n, 3),
        )
            .prop_map(move |(dynamics, rows, v0)| {
                let output = Matrix::from_rows(&f, rows).unwrap();
                PointedLinearSystem::new(LinearSystem::new(dynamics, output).unwrap(), v0).unwrap()
            })
    });
    let outcome = property(INVARIANT_CASES, systems, |sys| {
        let small = sys.minimize();
        prop_assert!(small.dim() <= sys.dim());
        prop_assert_eq!(small.behaviour().unwrap(), sys.behaviour().unwrap());
        Ok(())
    });
    report(
        "criterion 11: minimize keeps behaviour and never grows",
        outcome,
    );
}
