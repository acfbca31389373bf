#![no_main]
use libfuzzer_sys::fuzz_target;

use hamforge_core::hypergraph::{read_hypergraph, write_hypergraph};

fuzz_target!(|data: &[u8]| {
    let Ok(g) = read_hypergraph(data) else { return };
    let mut out = Vec::new();
    write_hypergraph(&g, &mut out).unwrap();
    let back = read_hypergraph(out.as_slice()).expect("canonical output parses");
    assert_eq!(back, g);
});
