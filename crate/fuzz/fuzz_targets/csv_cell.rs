#![no_main]

use cdforge::twistlab::render::parse_csv_cell;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cell) = parse_csv_cell(text) {
        // `1*e3` and `e3` are the same cell, so compare printed forms
        let printed = cell.csv();
        assert_eq!(parse_csv_cell(&printed).unwrap().csv(), printed);
    }
});
