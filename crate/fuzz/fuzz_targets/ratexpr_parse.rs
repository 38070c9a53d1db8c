#![no_main]

use cdforge::ratexpr::parse;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(e) = parse(src) {
        // whatever parses must print to text that parses back to the same print
        let printed = e.to_string();
        let again = parse(&printed).expect("printed expression reparses");
        assert_eq!(again.to_string(), printed);
    }
});
