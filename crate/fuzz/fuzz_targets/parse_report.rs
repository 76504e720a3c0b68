#![no_main]

use clarke_kit::report::RunReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = RunReport::from_json(text) {
        // writing and re-reading is a fixed point after one round
        let once = report.to_json();
        let back = RunReport::from_json(&once).expect("own output parses");
        assert_eq!(back.to_json(), once);
    }
});
