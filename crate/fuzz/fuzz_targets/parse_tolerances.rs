#![no_main]

use clarke_kit::verify::Tolerances;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = serde_json::from_slice::<Tolerances>(data);
});
