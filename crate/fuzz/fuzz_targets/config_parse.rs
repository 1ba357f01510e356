#![no_main]

use libfuzzer_sys::fuzz_target;
use uav_icic::harness::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        // must never panic on arbitrary config text
        let _ = ExperimentConfig::from_json_str(s);
    }
});
