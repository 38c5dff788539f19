#![no_main]
use libfuzzer_sys::fuzz_target;
use motion_factor::dualquat::DEFAULT_TOL;
use motion_factor::io;
use std::str;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = str::from_utf8(data) {
        if let Ok((m, h)) = io::parse_flip(s) {
            let _ = motion_factor::synthesis::bennett_flip(&m, &h, DEFAULT_TOL);
        }
    }
});
