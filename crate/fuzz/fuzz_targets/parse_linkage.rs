#![no_main]
use libfuzzer_sys::fuzz_target;
use motion_factor::dualquat::DEFAULT_TOL;
use motion_factor::io;
use std::str;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = str::from_utf8(data) {
        let _ = io::parse_linkage(s, DEFAULT_TOL);
    }
});
