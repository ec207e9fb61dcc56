use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use witsets::io::{load_cache, CodeFile};
use witsets::cache::CacheKey;

fn witsets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witsets"))
        .args(args)
        .env_remove("WITSETS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = write(dir.path(), "s.txt", "n 4\n0011\n0101\n0110\n1001\n1010\n1100\n");
    assert_eq!(witsets(&["verify", "--code", &sphere, "--w", "2"]).status.code(), Some(0));
    assert_eq!(witsets(&["verify", "--code", &sphere, "--w", "1"]).status.code(), Some(1));

    let bad = write(dir.path(), "b.txt", "n 3\n000\n100\n010\n001\n");
    let out = witsets(&["verify", "--code", &bad, "--w", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("000"));

    let empty = write(dir.path(), "e.txt", "n 3\n");
    assert_eq!(witsets(&["verify", "--code", &empty, "--w", "0"]).status.code(), Some(0));

    let broken = write(dir.path(), "x.txt", "n 3\n10\n");
    let out = witsets(&["verify", "--code", &broken, "--w", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = dir.path().join("none.txt");
    let out = witsets(&["verify", "--code", missing.to_str().unwrap(), "--w", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(witsets(&["verify", "--w", "1"]).status.code(), Some(2));
}

#[test]
fn constructions_verify_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&[&str], &str)] = &[
        (&["construct", "sphere", "--n", "6", "--k", "3"], "3"),
        (&["construct", "cube", "--n", "5", "--window", "1,3,4"], "3"),
        (&["construct", "twopart", "--n", "9", "--w", "7", "--t", "1"], "7"),
    ];
    for (i, (args, w)) in cases.iter().enumerate() {
        let out = witsets(args);
        assert!(out.status.success(), "{args:?}");
        let text = stdout(&out);
        let parsed = CodeFile::parse(&text).unwrap();
        assert_eq!(parsed.render(), text);
        let path = write(dir.path(), &format!("c{i}.txt"), &text);
        assert_eq!(witsets(&["verify", "--code", &path, "--w", w]).status.code(), Some(0), "{args:?}");
    }

    let blocks = dir.path().join("blocks.txt");
    let out = witsets(&["construct", "--out", blocks.to_str().unwrap(), "steiner348"]);
    assert!(out.status.success());
    let code = dir.path().join("fam.txt");
    let out = witsets(&[
        "construct",
        "family",
        "--blocks",
        blocks.to_str().unwrap(),
        "--out",
        code.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let words = CodeFile::read(&code).unwrap().words;
    assert_eq!(words.len(), 70);
    assert_eq!(witsets(&["verify", "--code", code.to_str().unwrap(), "--w", "4"]).status.code(), Some(0));
}

#[test]
fn min_witness_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let code = write(dir.path(), "c.txt", "n 3\n000\n100\n010\n001\n");
    let out = witsets(&["min-witness", "--code", &code, "--word", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("{1,2,3}"), "{}", stdout(&out));
    assert_eq!(witsets(&["min-witness", "--code", &code, "--word", "4"]).status.code(), Some(2));

    let out = witsets(&["stats", "--code", &code, "--w", "1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.is_object());
}

#[test]
fn bounds_and_solve_share_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let cache_s = cache.to_str().unwrap();
    let cert = dir.path().join("cert.txt");

    let out = witsets(&[
        "solve",
        "--n",
        "4",
        "--w",
        "2",
        "--cache",
        cache_s,
        "--certificate",
        cert.to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "exact");
    let value: usize = v["value"].as_str().unwrap().parse().unwrap();
    assert_eq!(CodeFile::read(&cert).unwrap().words.len(), value);
    assert_eq!(
        witsets(&["verify", "--code", cert.to_str().unwrap(), "--w", "2"]).status.code(),
        Some(0)
    );

    let stored = load_cache(&cache).unwrap();
    assert_eq!(stored.exact(&CacheKey::new(4, 2)).map(|v| v.to_string()), Some(value.to_string()));

    let without = witsets(&["bounds", "--n", "10", "--w", "2", "--json"]);
    let with = witsets(&["bounds", "--n", "10", "--w", "2", "--cache", cache_s, "--json"]);
    let a: serde_json::Value = serde_json::from_str(&stdout(&without)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&with)).unwrap();
    let upper = |v: &serde_json::Value| v["best_upper"].as_str().unwrap().parse::<u64>().unwrap();
    assert_eq!(upper(&b), 45 * value as u64 / 6);
    assert!(upper(&b) <= upper(&a));
}

#[test]
fn solve_rejects_out_of_range() {
    assert_eq!(witsets(&["solve", "--n", "9", "--w", "2"]).status.code(), Some(2));
    assert_eq!(witsets(&["solve", "--n", "3", "--w", "4"]).status.code(), Some(2));
}

#[test]
fn audit_and_probe() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let out = witsets(&["audit", "--cache", cache.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = witsets(&["probe", "--w", "1", "--max-n", "6"]);
    assert!(out.status.success());
}

#[test]
fn reproduce_is_repeatable() {
    let runs: Vec<serde_json::Value> = (0..2)
        .map(|_| {
            let out = witsets(&["reproduce", "--json"]);
            assert_eq!(out.status.code(), Some(0));
            serde_json::from_str(&stdout(&out)).unwrap()
        })
        .collect();
    let strip = |v: &serde_json::Value| -> Vec<(u64, bool, String)> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|c| {
                (
                    c["id"].as_u64().unwrap(),
                    c["passed"].as_bool().unwrap(),
                    c["detail"].as_str().unwrap().to_owned(),
                )
            })
            .collect()
    };
    assert_eq!(strip(&runs[0]), strip(&runs[1]));
    assert_eq!(strip(&runs[0]).len(), 10);
}
