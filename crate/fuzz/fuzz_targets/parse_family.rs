#![no_main]
use beyondcp::{io, ToleranceConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = io::parse_family(s, ToleranceConfig::default());
});
