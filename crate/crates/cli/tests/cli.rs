use std::fs;
use std::path::Path;

use reshape_cli::{run, EXIT_DATA, EXIT_OK, EXIT_UNMATCHED, EXIT_USAGE};
use reshape_testkit::corpora;
use serde_json::Value;

fn reshape(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("reshape").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_lines(dir: &Path, name: &str, rows: &[&str]) -> String {
    let path = dir.join(name);
    fs::write(&path, rows.iter().map(|r| format!("{r}\n")).collect::<String>()).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_values(text: &str) -> Vec<(String, String)> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].to_string())
        })
        .collect()
}

#[test]
fn profile_prints_phone_leaves() {
    let dir = tempfile::tempdir().unwrap();
    let rows = corpora::phone_corpus(500, 2);
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    let input = write_lines(dir.path(), "phones.txt", &refs);

    let (code, out, _) = reshape(&["profile", "--input", &input]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("500 rows, 0 empty\n"));
    for leaf in [
        "<D>3'-'<D>3'-'<D>4",
        "'('<D>3')'<D>3'-'<D>4",
        "'('<D>3')'' '<D>3'-'<D>4",
        "<D>3'.'<D>3'.'<D>4",
    ] {
        assert!(out.contains(&format!("] {leaf}  (")), "missing {leaf} in\n{out}");
    }

    let (code, out, _) = reshape(&["profile", "--input", &input, "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["layers"], 4);
    assert_eq!(v["row_count"], 500);
}

#[test]
fn synth_medical_codes() {
    let dir = tempfile::tempdir().unwrap();
    let rows: Vec<&str> = corpora::MEDICAL.iter().map(|(raw, _)| *raw).collect();
    let input = write_lines(dir.path(), "codes.txt", &rows);
    let program = dir.path().join("prog.json");
    let program = program.to_str().unwrap();

    let (code, out, err) = reshape(&["synth", "--input", &input, "--target", "'['<U>+'-'<D>+']'", "--out", program]);
    assert_eq!(code, EXIT_OK, "{err}");
    let replace_lines = out.lines().filter(|l| l.starts_with("Replace '")).count();
    assert_eq!(replace_lines, 3, "{out}");
    assert!(out.contains("branch 0: '['<U>+'-'<D>+"));

    let (code, out, _) = reshape(&["apply", "--input", &input, "--program", program, "--strict"]);
    assert_eq!(code, EXIT_OK);
    let got: Vec<String> = csv_values(&out).into_iter().map(|(v, _)| v).collect();
    let want: Vec<&str> = corpora::MEDICAL.iter().map(|(_, t)| *t).collect();
    assert_eq!(got, want);

    let (code, out, _) = reshape(&["synth", "--input", &input, "--target", "'['<U>+'-'<D>+']'", "--json", "-k", "1"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["program"]["branches"].as_array().unwrap().len(), 3);
    for b in v["synthesis"]["branches"].as_array().unwrap() {
        assert!(b["alternates"].as_array().unwrap().len() <= 2);
    }
}

#[test]
fn empty_program_keeps_every_value() {
    let dir = tempfile::tempdir().unwrap();
    let rows = ["  padded ", "", "a,b", "\"quoted\"", "ünïcode", "N/A"];
    let input = write_lines(dir.path(), "any.txt", &rows);
    let program = dir.path().join("empty.json");
    fs::write(&program, r#"{"branches": []}"#).unwrap();
    let out_path = dir.path().join("out.csv");

    let (code, _, _) = reshape(&[
        "apply",
        "--input",
        &input,
        "--program",
        program.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let values: Vec<String> = csv_values(&fs::read_to_string(&out_path).unwrap())
        .into_iter()
        .map(|(v, _)| v)
        .collect();
    assert_eq!(values, rows);

    let (code, out, _) = reshape(&["apply", "--input", &input, "--program", program.to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["value"], "  padded ");
    assert_eq!(v[0]["status"], "Unmatched");
}

#[test]
fn strict_apply_flags_unmatched_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_lines(dir.path(), "p.txt", &["734-422-8073", "(734) 645-8397", "N/A"]);
    let program = dir.path().join("p.json");
    let program = program.to_str().unwrap();
    let (code, _, _) = reshape(&["synth", "--input", &input, "--target", "<D>3'-'<D>3'-'<D>4", "--out", program]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = reshape(&["apply", "--input", &input, "--program", program, "--strict"]);
    assert_eq!(code, EXIT_UNMATCHED);
    assert_eq!(
        csv_values(&out),
        vec![
            ("734-422-8073".into(), "AlreadyConforming".into()),
            ("734-645-8397".into(), "Transformed".into()),
            ("N/A".into(), "Unmatched".into()),
        ]
    );
    let (code, _, _) = reshape(&["apply", "--input", &input, "--program", program]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn csv_input_uses_the_named_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("people.csv");
    fs::write(&path, "id,date\n1,25/12/2017\n2,01/02/2018\n3,12-25-2017\n").unwrap();
    let input = path.to_str().unwrap();
    let (code, out, _) = reshape(&["synth", "--input", input, "--column", "date", "--target", corpora::DATE_TARGET]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().next().unwrap().contains(" in date with "), "{out}");
    let (code, _, err) = reshape(&["profile", "--input", input, "--column", "nope"]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("nope"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_lines(dir.path(), "x.txt", &["a1"]);
    assert_eq!(reshape(&[]).0, EXIT_USAGE);
    assert_eq!(reshape(&["profile"]).0, EXIT_USAGE);
    assert_eq!(reshape(&["profile", "--input", &input, "--bogus"]).0, EXIT_USAGE);
    assert_eq!(reshape(&["synth", "--input", &input, "--target", "<Q>"]).0, EXIT_USAGE);
    assert_eq!(reshape(&["--help"]).0, EXIT_OK);
    assert_eq!(reshape(&["profile", "--input", "/definitely/missing.txt"]).0, EXIT_DATA);
    let empty = write_lines(dir.path(), "empty.txt", &[]);
    assert_eq!(reshape(&["profile", "--input", &empty]).0, EXIT_DATA);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "not json").unwrap();
    assert_eq!(reshape(&["apply", "--input", &input, "--program", bad.to_str().unwrap()]).0, EXIT_DATA);
    fs::write(&bad, r#"{"branches":[{"match":"<D>","plan":[{"extract":[1,4]}]}]}"#).unwrap();
    assert_eq!(reshape(&["apply", "--input", &input, "--program", bad.to_str().unwrap()]).0, EXIT_DATA);
}
