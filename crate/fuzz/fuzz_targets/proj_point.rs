#![no_main]

use cat_entropy::orbifold::ProjPoint;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = s.parse::<ProjPoint>() {
        assert_eq!(p.to_string().parse::<ProjPoint>().unwrap(), p);
    }
});
