#![no_main]

use cat_entropy::wire::{invariants_json, parse_weights};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = parse_weights(s) {
        let _ = invariants_json(&w);
    }
});
