#![no_main]
use beyondcp::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(op) = io::parse_operator(s) {
        let again = io::parse_operator(&io::emit_operator(&op).to_string()).expect("emitted operator must parse");
        assert_eq!(op, again);
    }
});
