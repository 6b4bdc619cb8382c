#![no_main]

use libfuzzer_sys::fuzz_target;
use schroeter::io::{format_run, parse_run};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(run) = parse_run(text) {
        let again = format_run(&run.state, run.weierstrass.as_ref());
        assert!(parse_run(&again).is_ok());
    }
});
