#![no_main]

use libfuzzer_sys::fuzz_target;
use ultrafine::format::{report_from_json, report_to_json};

fuzz_target!(|s: &str| {
    if let Ok(doc) = report_from_json(s) {
        let text = report_to_json(&doc);
        assert_eq!(report_from_json(&text).unwrap(), doc);
    }
});
