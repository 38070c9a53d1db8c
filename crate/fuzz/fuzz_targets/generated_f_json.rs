#![no_main]

use cdforge::diractest::GeneratedF;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = GeneratedF::from_json(text) {
        let back = GeneratedF::from_json(&f.to_json()).expect("own output loads");
        assert_eq!(back, f);
    }
});
