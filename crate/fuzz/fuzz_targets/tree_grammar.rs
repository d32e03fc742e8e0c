#![no_main]

use libfuzzer_sys::fuzz_target;
use psc_core::disks::parse_config_table;
use psc_core::tree::{parse_tree, print_tree};

const CONFIGS: &str = "psc-disks 1\ndim 2\n@id = [(0, 0) 1]\n@pair = [(-0.5, 0) 0.4; (0.5, 0) 0.4]\n@big = [(0, 0) 0.8]\n";

fuzz_target!(|data: &str| {
    let mut table = parse_config_table(CONFIGS).unwrap();
    let Ok(t) = parse_tree(data, &table) else {
        return;
    };
    let printed = print_tree(&t, &mut table);
    let back = parse_tree(&printed, &table).expect("printed tree reparses");
    assert_eq!(print_tree(&back, &mut table), printed);
});
