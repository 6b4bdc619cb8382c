#![no_main]

use libfuzzer_sys::fuzz_target;
use schroeter::io::{format_seed, parse_seed};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(seed) = parse_seed(text) {
        // anything accepted must survive a write and re-read
        assert_eq!(parse_seed(&format_seed(&seed)).unwrap(), seed);
    }
});
