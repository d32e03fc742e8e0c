//! Replays the fuzz seeds, and every prefix of them, through the parsers.

use std::fs;
use std::path::PathBuf;

use psc_core::desc::{parse_descriptor, print_descriptor};
use psc_core::disks::{parse_config_table, print_config_table};
use psc_core::tree::{parse_tree, print_tree};

const CONFIGS: &str = "psc-disks 1\ndim 2\n@id = [(0, 0) 1]\n@pair = [(-0.5, 0) 0.4; (0.5, 0) 0.4]\n@big = [(0, 0) 0.8]\n";

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("seed-"))
        .map(|p| fs::read_to_string(p).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

fn prefixes(s: &str) -> impl Iterator<Item = &str> {
    (0..=s.len()).filter(|&k| s.is_char_boundary(k)).map(|k| &s[..k])
}

#[test]
fn tree_seeds() {
    let mut table = parse_config_table(CONFIGS).unwrap();
    for seed in seeds("tree_grammar") {
        let t = parse_tree(&seed, &table).unwrap();
        let printed = print_tree(&t, &mut table);
        assert_eq!(parse_tree(&printed, &table).unwrap(), t);
        for p in prefixes(&seed) {
            let _ = parse_tree(p, &table);
        }
    }
}

#[test]
fn config_seeds() {
    for seed in seeds("disk_config") {
        let table = parse_config_table(&seed).unwrap();
        assert_eq!(parse_config_table(&print_config_table(&table)).unwrap(), table);
        for p in prefixes(&seed) {
            let _ = parse_config_table(p);
        }
    }
}

#[test]
fn descriptor_seeds() {
    for seed in seeds("descriptor") {
        let d = parse_descriptor(&seed).unwrap();
        assert_eq!(print_descriptor(&d), seed);
        for p in prefixes(&seed) {
            assert!(p.len() >= seed.trim_end().len() || parse_descriptor(p).is_err());
        }
    }
}
