#![no_main]

use bcov_core::models::ModelSpec;
use libfuzzer_sys::fuzz_target;

// Schema parsing only: the consistency checks expand series and would make
// every input with a large omega0_check list slow.
fuzz_target!(|text: &str| {
    if text.len() > 4096 {
        return;
    }
    let _ = ModelSpec::parse_schema(text);
});
