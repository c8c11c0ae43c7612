#![no_main]

use libfuzzer_sys::fuzz_target;
use meanarc::shapes::{parse_shape_json, shape_to_json};

fuzz_target!(|text: &str| {
    // Anything accepted must survive a save/load round trip unchanged.
    if let Ok(p) = parse_shape_json(text) {
        let again = parse_shape_json(&shape_to_json(&p)).expect("saved shape reloads");
        assert_eq!(p.vertices(), again.vertices());
    }
});
