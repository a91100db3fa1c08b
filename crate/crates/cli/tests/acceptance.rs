//! Acceptance criterion 10: byte-identical outputs on rerun with the same
//! seed, covering dataset generation and the benchmark pipeline.

use std::collections::BTreeMap;
use std::path::Path;
use strikesim_cli::{cmd_benchmark, cmd_generate, ExperimentSpec};

fn write_spec(dir: &Path, dataset_dir: &Path) -> std::path::PathBuf {
    let config = format!(
        r#"
seed = 77

[dataset]
path = "{}"

[dataset.generator]
segment_count = 140

[predictor]
kind = "knn"
k = 5
train_rows = [1, 10, 20]

[uncertainty]
frames = [1, 10, 20]
"#,
        dataset_dir.display()
    );
    let path = dir.join("exp.toml");
    std::fs::write(&path, config).unwrap();
    path
}

/// Recursive file-bytes map keyed by relative path.
fn tree_bytes(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let key = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                out.insert(key, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_10_determinism_of_generate_and_benchmark() {
    let workspace = tempfile::tempdir().unwrap();
    let dataset = workspace.path().join("dataset");
    let spec = ExperimentSpec::load(&write_spec(workspace.path(), &dataset), None).unwrap();

    // rerun the identical command into the same location and compare bytes
    cmd_generate(&spec, &dataset).unwrap();
    let first = tree_bytes(&dataset);
    cmd_generate(&spec, &dataset).unwrap();
    let second = tree_bytes(&dataset);
    assert_eq!(
        first.keys().collect::<Vec<_>>(),
        second.keys().collect::<Vec<_>>()
    );
    for (path, content) in &first {
        assert_eq!(
            Some(content),
            second.get(path),
            "dataset file {path} differs between identical-seed runs"
        );
    }

    let bench = workspace.path().join("bench");
    cmd_benchmark(&spec, &bench).unwrap();
    let bench_first = tree_bytes(&bench);
    cmd_benchmark(&spec, &bench).unwrap();
    let bench_second = tree_bytes(&bench);
    assert_eq!(
        bench_first.keys().collect::<Vec<_>>(),
        bench_second.keys().collect::<Vec<_>>()
    );
    for (path, content) in &bench_first {
        assert_eq!(
            Some(content),
            bench_second.get(path),
            "benchmark file {path} differs between identical runs"
        );
    }
    assert!(bench_first.contains_key("trials.csv"));
    assert!(bench_first.contains_key("metrics.json"));
    println!(
        "criterion 10 PASS: {} dataset files and {} benchmark files byte-identical across reruns",
        first.len(),
        bench_first.len()
    );
}
