#![no_main]

use cat_entropy::quiver::{DynkinType, ExtendedDynkin};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = s.parse::<DynkinType>() {
        assert_eq!(d.to_string().parse::<DynkinType>().unwrap(), d);
    }
    if let Ok(e) = s.parse::<ExtendedDynkin>() {
        assert_eq!(e.to_string().parse::<ExtendedDynkin>().unwrap(), e);
    }
});
