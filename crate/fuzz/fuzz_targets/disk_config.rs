#![no_main]

use libfuzzer_sys::fuzz_target;
use psc_core::disks::{parse_config_table, print_config_table};

fuzz_target!(|data: &str| {
    let Ok(table) = parse_config_table(data) else {
        return;
    };
    // geometry is checked separately and must not panic either
    for c in table.configs.values() {
        let _ = c.violations();
    }
    let printed = print_config_table(&table);
    let back = parse_config_table(&printed).expect("printed table reparses");
    assert_eq!(print_config_table(&back), printed);
});
