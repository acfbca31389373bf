#![no_main]
use libfuzzer_sys::fuzz_target;

use hamforge_core::packing::{read_packing, write_packing};

fuzz_target!(|data: &[u8]| {
    let Ok(p) = read_packing(data) else { return };
    let mut out = Vec::new();
    write_packing(&p, &mut out).unwrap();
    assert_eq!(read_packing(out.as_slice()).expect("re-read"), p);
});
