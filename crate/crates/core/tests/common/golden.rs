//! Golden-file cases for the command line. Paths are relative to the
//! package root, which is the working directory of integration tests.

use std::path::{Path, PathBuf};

pub const DIR: &str = "tests/golden";

/// `(case name, arguments)`; `@CERT` is replaced by a scratch file whose
/// contents are appended to the transcript.
pub const CASES: &[(&str, &[&str])] = &[
    ("check_dual", &["algebra-check", "dual"]),
    ("check_hs3", &["algebra-check", "hs:3"]),
    ("check_dd21", &["algebra-check", "dd:2,1"]),
    ("check_e4_file", &["algebra-check", "tests/golden/e4.json"]),
    (
        "check_misordered",
        &["algebra-check", "tests/golden/misordered.json"],
    ),
    (
        "check_broken",
        &["algebra-check", "tests/golden/broken.json"],
    ),
    (
        "rank_less",
        &["rank", "--algebra", "dual", "x1[1,0]", "x1[0,1]"],
    ),
    (
        "rank_greater",
        &["rank", "--algebra", "hs:2", "x2[0,1,0]", "x1[0,0,1]"],
    ),
    (
        "rank_equal",
        &["rank", "--algebra", "fields:2", "x1[2,1]", "x1[2,1]"],
    ),
    (
        "apply_dual",
        &["apply", "--algebra", "dual", "--op", "d1.1", "x1[0,0]^2"],
    ),
    (
        "apply_hs2",
        &["apply", "--algebra", "hs:2", "--op", "d1.2", "x1^2 + x1*x2"],
    ),
    (
        "apply_dd_composite",
        &[
            "apply",
            "--algebra",
            "dd:1,1",
            "--op",
            "s2 d1.1",
            "x1*x2 - 1/2",
        ],
    ),
    (
        "apply_theta",
        &["apply", "--algebra", "dual", "--op", "theta=[1,1]", "x1^2"],
    ),
    (
        "apply_bad_expr",
        &["apply", "--algebra", "dual", "--op", "d1.1", "x1[0,0]^"],
    ),
    (
        "apply_bad_op",
        &["apply", "--algebra", "dual", "--op", "d2.1", "x1"],
    ),
    (
        "reduce_worked",
        &[
            "reduce",
            "--algebra",
            "dual",
            "--set",
            "tests/golden/dual_set.txt",
            "x1[0,2]",
            "--cert",
            "@CERT",
        ],
    ),
    (
        "reduce_reduced",
        &[
            "reduce",
            "--algebra",
            "dual",
            "--set",
            "tests/golden/dual_set.txt",
            "x1",
        ],
    ),
    (
        "reduce_duplicate",
        &[
            "reduce",
            "--algebra",
            "dual",
            "--set",
            "tests/golden/dual_dup.txt",
            "x1",
        ],
    ),
    (
        "charset_trace",
        &[
            "charset",
            "--algebra",
            "dual",
            "--gens",
            "tests/golden/dual_gens.txt",
            "--trace",
        ],
    ),
    (
        "charset_inconsistent",
        &[
            "charset",
            "--algebra",
            "dual",
            "--gens",
            "tests/golden/inconsistent.txt",
        ],
    ),
    (
        "closure_accept",
        &[
            "closure-check",
            "--algebra",
            "dual",
            "--gens",
            "tests/golden/closure_gens.txt",
            "--witness",
            "tests/golden/witness_accept.json",
        ],
    ),
    (
        "closure_reject",
        &[
            "closure-check",
            "--algebra",
            "dual",
            "--gens",
            "tests/golden/closure_gens.txt",
            "--witness",
            "tests/golden/witness_reject.json",
        ],
    ),
];

pub fn expected_path(name: &str) -> PathBuf {
    Path::new(DIR).join(format!("{name}.golden"))
}

/// Runs one case in-process and renders the transcript.
pub fn transcript(name: &str, args: &[&str]) -> String {
    let cert =
        std::env::temp_dir().join(format!("dstar-golden-{}-{name}.json", std::process::id()));
    let argv: Vec<String> = std::iter::once("dstar".to_string())
        .chain(args.iter().map(|a| {
            if *a == "@CERT" {
                cert.display().to_string()
            } else {
                a.to_string()
            }
        }))
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dstar::cli::run(argv, &mut out, &mut err);
    let mut text = format!(
        "$ dstar {}\nexit {code}\n--- stdout\n{}--- stderr\n{}",
        args.join(" "),
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap()
    );
    if args.contains(&"@CERT") {
        let body = std::fs::read_to_string(&cert).unwrap_or_default();
        let _ = std::fs::remove_file(&cert);
        text.push_str("--- certificate\n");
        text.push_str(&body);
    }
    text
}

/// Compares every case with its golden file, running each twice. With
/// `DSTAR_BLESS=1` the golden files are rewritten instead.
pub fn check_all() -> Result<usize, String> {
    let bless = std::env::var("DSTAR_BLESS").is_ok_and(|v| v == "1");
    for (name, args) in CASES {
        let first = transcript(name, args);
        let second = transcript(name, args);
        if first != second {
            return Err(format!("{name}: output differs between runs"));
        }
        let path = expected_path(name);
        if bless {
            std::fs::write(&path, &first).map_err(|e| e.to_string())?;
            continue;
        }
        let want =
            std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if want != first {
            return Err(format!("{name}: differs from {}\n{first}", path.display()));
        }
    }
    Ok(CASES.len())
}
