#![no_main]

use cat_entropy::entropy::AuteqWord;
use cat_entropy::wire::parse_entropy_input;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(input) = parse_entropy_input(s) {
        if input.word.len() <= 16 {
            let _ = AuteqWord::new(input.context, input.word);
        }
    }
});
