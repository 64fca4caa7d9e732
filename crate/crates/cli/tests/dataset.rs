use finality::{load_dataset, load_model, DatasetError};
use finality_core::Scm;

fn m1() -> Scm {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/testdata/m1.tele")).unwrap();
    load_model(&text).unwrap().scm().clone()
}

fn line_of(e: DatasetError) -> (u64, String) {
    match e {
        DatasetError::Parse { line, message } => (line, message),
        other => panic!("expected a located error, got {other}"),
    }
}

#[test]
fn repeated_rows_aggregate() {
    let text = "W,H,T,B\n0,1,1,1\n0,1,1,1\n0,1,1,1\n1,0,1,0\n1,0,1,0\n";
    let d = load_dataset(text, &m1()).unwrap();
    assert_eq!(d.distinct_rows(), 2);
    let counts: Vec<u64> = d.rows().map(|(_, n)| n).collect();
    assert_eq!(counts, [3, 2]);
    assert_eq!(d.total(), 5);
}

#[test]
fn count_column_and_comments() {
    let text = "# observed\nW,H,T,B,count\n# bad weather\n0,1,1,1,3\n1,0,1,0,2\n0,1,1,1,4\n";
    let d = load_dataset(text, &m1()).unwrap();
    let counts: Vec<u64> = d.rows().map(|(_, n)| n).collect();
    assert_eq!(counts, [7, 2]);
}

#[test]
fn columns_are_reordered_to_the_model() {
    let d = load_dataset("B,T,H,W\n1,1,1,0\n", &m1()).unwrap();
    assert_eq!(d.columns(), ["W", "H", "T", "B"]);
    let (row, _) = d.rows().next().unwrap();
    assert_eq!(row.values(), [0, 1, 1, 1]);
}

#[test]
fn out_of_domain_names_variable_and_line() {
    let (line, message) = line_of(load_dataset("W,H,T,B\n0,0,0,0\n0,1,5,1\n", &m1()).unwrap_err());
    assert_eq!(line, 3);
    assert!(message.contains("`T`"), "{message}");
}

#[test]
fn empty_body_is_rejected() {
    let (line, message) = line_of(load_dataset("W,H,T,B\n", &m1()).unwrap_err());
    assert_eq!(line, 1);
    assert!(message.contains("no observations"), "{message}");
}

#[test]
fn header_problems() {
    let (_, message) = line_of(load_dataset("W,H,T,X\n0,0,0,0\n", &m1()).unwrap_err());
    assert!(message.contains("unknown variable `X`"), "{message}");
    let (_, message) = line_of(load_dataset("W,H,T\n0,0,0\n", &m1()).unwrap_err());
    assert!(message.contains("missing columns for B"), "{message}");
    let (_, message) = line_of(load_dataset("W,H,T,B,B\n0,0,0,0,0\n", &m1()).unwrap_err());
    assert!(message.contains("twice"), "{message}");
}

#[test]
fn malformed_rows() {
    let cases = [
        ("W,H,T,B\n0,0,0\n", 2, "expected 4 fields"),
        ("W,H,T,B\n0,0,x,0\n", 2, "not an integer"),
        ("W,H,T,B,count\n0,0,0,0,0\n", 2, "positive"),
        ("W,H,T,B,count\n0,0,0,0,1\n0,0,0,0,-1\n", 3, "positive"),
    ];
    for (text, want_line, fragment) in cases {
        let (line, message) = line_of(load_dataset(text, &m1()).unwrap_err());
        assert_eq!(line, want_line, "{text:?}");
        assert!(message.contains(fragment), "{message}");
    }
}
