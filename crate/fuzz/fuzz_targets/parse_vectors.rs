#![no_main]

use clarke_kit::report::parse_vectors;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(vs) = parse_vectors(text) {
        assert!(!vs.is_empty());
        assert!(vs.iter().all(|v| v.dim() == vs[0].dim()));
    }
});
