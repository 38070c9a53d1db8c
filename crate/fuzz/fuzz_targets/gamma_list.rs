#![no_main]

use cdforge::twistlab::render::GammaMode;
use cdforge::AlgebraSignature;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sig) = AlgebraSignature::parse(text) {
        assert!(sig.t() >= 1 && sig.gammas().iter().all(|g| g.numer().bits() > 0));
    }
    let _ = GammaMode::parse(text);
});
