use std::fs;
use std::path::PathBuf;

use finality::dsl::{Domain, ErrorKind, Goal, Loc, MechExpr, Row, Statement};
use finality::{load_model, parse_model, Document};
use finality_core::{CmpOp, Level};
use proptest::prelude::*;

fn corpus() -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata");
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "tele"))
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn corpus_round_trips() {
    for (path, text) in corpus() {
        let doc = parse_model(&text).unwrap();
        let printed = doc.to_string();
        assert_eq!(parse_model(&printed).unwrap(), doc, "{}", path.display());
        assert_eq!(parse_model(&printed).unwrap().to_string(), printed);

        let a = load_model(&text).unwrap();
        let b = load_model(&printed).unwrap();
        assert_eq!(a.scm(), b.scm());
        assert_eq!(a.finals().len(), b.finals().len());
    }
}

#[test]
fn m1_spec_gives_the_four_worlds() {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/testdata/m1.tele")).unwrap();
    let spec = load_model(&text).unwrap();
    let worlds: Vec<Vec<Level>> = spec
        .scm()
        .enumerate_worlds()
        .worlds()
        .iter()
        .map(|w| w.values().to_vec())
        .collect();
    assert_eq!(worlds, [[0, 0, 0, 0], [0, 1, 1, 1], [1, 0, 1, 0], [1, 1, 2, 1]]);
    assert_eq!(spec.rest_level("H"), Some(0));
    assert_eq!(spec.mstar().unwrap().target_name(), "H");
}

const SMALL: &str = "var H in 0..1\nvar B in {0, 1}\nedge H -> B\n";

#[test]
fn explicit_key_order() {
    let spec = load_model(
        "var A in 0..1\nvar C in 0..2\nvar Y in 0..2\nedge A -> Y\nedge C -> Y\n\
         mech Y = table(C, A) { (0,0)->0; (0,1)->0; (1,0)->1; (1,1)->1; (2,0)->2; (2,1)->2 }\n",
    )
    .unwrap();
    // Y copies C whatever A is.
    for w in spec.scm().enumerate_worlds().worlds() {
        assert_eq!(w.get(2), w.get(1));
    }
}

#[test]
fn error_locations() {
    let cases: &[(&str, ErrorKind, (usize, usize))] = &[
        ("var H in 0..1\nvar H in 0..1\n", ErrorKind::Duplicate, (2, 1)),
        ("var H in 0..1\nedge H -> Q\n", ErrorKind::Undeclared, (2, 1)),
        ("var H in 0..1\n  bogus H\n", ErrorKind::Syntax, (2, 3)),
        ("var H in 0..\n", ErrorKind::Syntax, (1, 13)),
        ("var H in {1, 0}\n", ErrorKind::Invalid, (1, 1)),
        ("var H in 1..0\n", ErrorKind::Invalid, (1, 1)),
        ("var H in 0..1\nedge H -> H\n", ErrorKind::Invalid, (2, 1)),
        (&after_small("mech B = table { (0)->1 }\n"), ErrorKind::NonTotal, (4, 1)),
        (&after_small("mech B = sum(H, H)\n"), ErrorKind::Invalid, (4, 1)),
        (&after_small("mech H = table { (0)->1 }\n"), ErrorKind::Invalid, (4, 1)),
        (&after_small("mech B = table { (0)->0; (1)->1 }\nmech B = sum(H)\n"), ErrorKind::Duplicate, (5, 1)),
        (&after_small("mech B = sum(H)\ndo H\ndo B\n"), ErrorKind::Duplicate, (6, 1)),
        (&after_small("mech B = sum(H)\nrest H = 4\n"), ErrorKind::Invalid, (5, 1)),
        (&after_small("mech B = sum(H)\ndo H\nfinal f { effects: B; goal: B = 0 }\nfinal f { effects: B; goal: B = 1 }\n"), ErrorKind::Duplicate, (7, 1)),
        (&after_small("mech B = sum(H)\ndo H\nfinal f { effects: B; goal: B = 7 }\n"), ErrorKind::Invalid, (6, 1)),
        (&after_small("mech B = sum(H)\ndo H\nfinal f { effects: B; goal: Q = 0 }\n"), ErrorKind::Undeclared, (6, 1)),
        (&after_small("mech B = sum(H)\ndo H\nfinal f { effects: B; goal: B ~ 0 }\n"), ErrorKind::Syntax, (6, 31)),
    ];
    for (text, kind, (line, column)) in cases {
        let e = load_model(text).unwrap_err();
        assert_eq!((e.kind, e.loc.line, e.loc.column), (*kind, *line, *column), "{text:?}: {e}");
    }
}

fn after_small(b: &str) -> String {
    format!("{SMALL}{b}")
}

#[test]
fn error_messages_carry_position() {
    let e = load_model("var H in 0..1\nedge H -> Q\n").unwrap_err();
    assert_eq!(e.to_string(), "2:1: variable `Q` is not declared");
}

#[test]
fn comments_and_blank_lines() {
    let doc = parse_model("# heading\n\n   # indented\nvar X in 0..1 # trailing\n\n").unwrap();
    assert_eq!(doc.statements.len(), 1);
}

fn name() -> impl Strategy<Value = String> {
    "[A-Za-z_][A-Za-z0-9_]{0,3}"
}

fn level() -> impl Strategy<Value = Level> {
    prop_oneof![4 => -20i64..20, 1 => any::<Level>()]
}

fn op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Gt),
        Just(CmpOp::Ge)
    ]
}

fn statement() -> impl Strategy<Value = Statement> {
    let loc = Loc::default();
    let domain = prop_oneof![
        (level(), level()).prop_map(|(a, b)| Domain::Range(a, b)),
        prop::collection::vec(level(), 1..4).prop_map(Domain::Set),
    ];
    let row = (prop::collection::vec(level(), 1..4), level()).prop_map(move |(key, value)| Row { key, value, loc });
    let expr = prop_oneof![
        prop::collection::vec(name(), 1..4).prop_map(MechExpr::Sum),
        (
            prop::option::of(prop::collection::vec(name(), 1..4)),
            prop::collection::vec(row, 0..4)
        )
            .prop_map(|(parents, rows)| MechExpr::Table { parents, rows }),
    ];
    let goal = (name(), op(), level()).prop_map(|(variable, op, level)| Goal { variable, op, level });
    prop_oneof![
        (name(), domain).prop_map(move |(name, domain)| Statement::Var { name, domain, loc }),
        (name(), name()).prop_map(move |(from, to)| Statement::Edge { from, to, loc }),
        (name(), expr).prop_map(move |(child, expr)| Statement::Mech { child, expr, loc }),
        name().prop_map(move |target| Statement::Do { target, loc }),
        (name(), level()).prop_map(move |(variable, level)| Statement::Rest { variable, level, loc }),
        (
            name(),
            prop::collection::vec(name(), 1..3),
            prop::collection::vec(goal, 1..3)
        )
            .prop_map(move |(name, effects, goal)| Statement::Final { name, effects, goal, loc }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_then_parse_is_identity(statements in prop::collection::vec(statement(), 0..12)) {
        let doc = Document { statements };
        let printed = doc.to_string();
        let reparsed = parse_model(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(reparsed, doc);
    }
}
