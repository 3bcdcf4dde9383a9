//! The oracle stays independent of the integer program.

use std::path::Path;

#[test]
fn oracle_sources_never_mention_the_model_builder() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("src/oracle");
    let mut checked = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "rs") || path.file_name().is_some_and(|n| n == "tests.rs") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        for (i, line) in text.lines().enumerate() {
            let code = line.split("//").next().unwrap();
            assert!(
                !code.contains("ilp::") && !code.contains("crate::ilp") && !code.contains("build_model"),
                "{}:{} uses the model builder: {line}",
                path.display(),
                i + 1
            );
        }
        checked += 1;
    }
    assert!(checked >= 3);
}
