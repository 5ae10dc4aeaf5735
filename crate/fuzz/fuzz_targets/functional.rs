#![no_main]

use libfuzzer_sys::fuzz_target;
use ultrafine::lie::Functional;

fuzz_target!(|s: &str| {
    if let Ok(xi) = Functional::parse(s) {
        assert_eq!(Functional::parse(&xi.to_string()).unwrap(), xi);
    }
});
