#![no_main]

use libfuzzer_sys::fuzz_target;
use uav_icic::harness::{format_csv, parse_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(rows) = parse_csv(s) {
            // anything that parses must re-emit and re-parse to the same rows
            if let Ok(text) = format_csv(&rows) {
                let again = parse_csv(&text).expect("re-emitted CSV must parse");
                assert_eq!(again.len(), rows.len());
            }
        }
    }
});
