#![no_main]
use beyondcp::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = io::parse_report(s) {
        let again = io::parse_report(&io::emit_report(&r)).expect("emitted report must parse");
        assert_eq!(r, again);
    }
});
