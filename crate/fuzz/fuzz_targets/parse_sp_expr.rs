#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(e) = linext::io::parse_sp_expr(text) {
            let again = linext::io::parse_sp_expr(&linext::io::sp_to_string(&e)).unwrap();
            assert_eq!(e, again);
        }
    }
});
