#![no_main]

use libfuzzer_sys::fuzz_target;
use psc_core::desc::{parse_descriptor, print_descriptor};

fuzz_target!(|data: &str| {
    let Ok(d) = parse_descriptor(data) else {
        return;
    };
    let printed = print_descriptor(&d);
    let back = parse_descriptor(&printed).expect("printed descriptor reparses");
    assert_eq!(print_descriptor(&back), printed);
});
