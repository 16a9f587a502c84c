#![no_main]
use beyondcp::{io, ToleranceConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let tol = ToleranceConfig::default();
    if let Ok(spec) = io::parse_map(s, tol) {
        // Building may still refuse (e.g. mismatched Kraus dims) but must not panic.
        if let Ok(map) = spec.build(tol) {
            let _ = map.trace_preservation_residual();
        }
    }
});
