#![no_main]

use clarke_kit::report::parse_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(xs) = parse_list(text) {
        assert_eq!(xs.len(), text.split(',').count());
        assert!(xs.iter().all(|x| x.is_finite()));
    }
});
