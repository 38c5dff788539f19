#![no_main]
use libfuzzer_sys::fuzz_target;
use motion_factor::dualquat::DEFAULT_TOL;
use motion_factor::io;
use std::str;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = str::from_utf8(data) {
        if let Ok(h) = io::parse_dual_quaternion(s) {
            let _ = motion_factor::dualquat::classify_generator(&h, DEFAULT_TOL);
        }
    }
});
