#![no_main]

use libfuzzer_sys::fuzz_target;
use meanarc::shapes::{build, ShapeSpec};

fuzz_target!(|text: &str| {
    if let Ok(spec) = text.parse::<ShapeSpec>() {
        // Building reads the filesystem for file specs; skip those.
        if !matches!(spec, ShapeSpec::FromFile { .. }) {
            let _ = build(&spec);
        }
    }
});
