#![no_main]

use clarke_kit::report::parse_vector;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_vector(text) {
        assert!(v.dim() > 0);
        assert!(v.coords().iter().all(|x| x.is_finite()));
        // the shortest round-trip representation parses back exactly
        let again = v.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(parse_vector(&again).unwrap(), v);
    }
});
