#![no_main]
use libfuzzer_sys::fuzz_target;
use motion_factor::io;
use std::str;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = str::from_utf8(data) {
        if let Ok(c) = io::parse_dqpoly(s) {
            let _ = c.right_eval(c.leading());
        }
    }
});
