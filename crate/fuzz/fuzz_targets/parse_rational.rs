#![no_main]

use libfuzzer_sys::fuzz_target;
use ultrafine::scalar::{format_rational, parse_rational, parse_rational_list};

fuzz_target!(|s: &str| {
    if let Ok(q) = parse_rational(s) {
        assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }
    let _ = parse_rational_list(s);
});
