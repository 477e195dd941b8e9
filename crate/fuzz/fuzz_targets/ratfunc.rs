#![no_main]

use bcov_core::exact::parse_ratfunc;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    // huge exponents are legal input but not interesting here
    if text.len() > 256 {
        return;
    }
    if let Ok(f) = parse_ratfunc(text) {
        let printed = f.to_string();
        let back = parse_ratfunc(&printed).expect("printed form reparses");
        assert_eq!(back, f, "{printed}");
    }
});
