use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

/// Runs every `*.args` case and returns the names of the cases whose
/// stdout, stderr or exit status differ from the stored ones.
pub fn mismatches() -> (usize, Vec<String>) {
    let dir = corpus_dir();
    let mut cases: Vec<PathBuf> = fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "args"))
        .collect();
    cases.sort();
    let mut bad = Vec::new();
    for case in &cases {
        let name = case.file_stem().unwrap().to_string_lossy().into_owned();
        let args: Vec<String> = fs::read_to_string(case)
            .unwrap()
            .lines()
            .map(str::to_owned)
            .collect();
        let out = Command::new(env!("CARGO_BIN_EXE_totmonoid"))
            .args(&args)
            .current_dir(&dir)
            .output()
            .expect("binary runs");
        let read = |ext: &str| fs::read(dir.join(format!("{name}.{ext}"))).unwrap();
        let status: i32 = String::from_utf8(read("status"))
            .unwrap()
            .trim()
            .parse()
            .unwrap();
        if out.stdout != read("stdout")
            || out.stderr != read("stderr")
            || out.status.code() != Some(status)
        {
            bad.push(name);
        }
    }
    (cases.len(), bad)
}
