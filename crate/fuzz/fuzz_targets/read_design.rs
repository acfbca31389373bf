#![no_main]
use libfuzzer_sys::fuzz_target;

use hamforge_core::geometry::{read_design, verify_steiner, write_design};

fuzz_target!(|data: &[u8]| {
    let Ok(sys) = read_design(data) else { return };
    let _ = verify_steiner(&sys);
    let mut out = Vec::new();
    write_design(&sys, &mut out).unwrap();
    assert_eq!(read_design(out.as_slice()).expect("re-read"), sys);
});
