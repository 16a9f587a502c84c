#![no_main]
use beyondcp::{io, ToleranceConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let tol = ToleranceConfig::default();
    if let Ok(v) = io::parse_subspace(s, tol) {
        assert!(v.dim() <= v.ambient_dim());
        let _ = io::emit_subspace(&v);
    }
});
