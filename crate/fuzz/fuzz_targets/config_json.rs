#![no_main]

use libfuzzer_sys::fuzz_target;
use meanarc_cli::config::parse_config_json;

fuzz_target!(|text: &str| {
    let _ = parse_config_json(text);
});
