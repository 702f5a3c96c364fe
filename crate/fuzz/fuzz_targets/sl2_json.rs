#![no_main]

use cat_entropy::sl2z::positive_factorize;
use cat_entropy::wire::parse_sl2;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_sl2(s) {
        if m.entries().iter().all(|x| x.bits() <= 64) {
            if let Ok(w) = positive_factorize(&m) {
                assert!(w.verify(&m));
            }
        }
    }
});
