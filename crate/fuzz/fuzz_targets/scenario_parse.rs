#![no_main]

use libfuzzer_sys::fuzz_target;
use uav_icic::scenario::{available_rbs, Scenario};

fuzz_target!(|data: &[u8]| {
    if let Ok(scenario) = serde_json::from_slice::<Scenario>(data) {
        if scenario.validate().is_ok() {
            let _ = available_rbs(&scenario, scenario.serving_bs);
        }
    }
});
