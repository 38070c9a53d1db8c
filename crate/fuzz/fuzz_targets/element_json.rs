#![no_main]

use std::sync::Arc;

use cdforge::{AlgebraSignature, Element};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&t, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let sig = Arc::new(AlgebraSignature::uniform(1 + (t % 4) as usize, -1));
    if let Ok(e) = Element::from_json(sig.clone(), text) {
        assert_eq!(Element::from_json(sig, &e.to_json()).unwrap(), e);
    }
});
