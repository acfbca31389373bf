#![no_main]
use libfuzzer_sys::fuzz_target;

use hamforge_core::packing::PartitionedFamily;

fuzz_target!(|data: &str| {
    let Ok(f) = PartitionedFamily::from_json(data) else { return };
    let back = PartitionedFamily::from_json(&f.to_json()).expect("round trip");
    assert_eq!(back, f);
    let index = f.index();
    for e in f.elements.iter().flat_map(|e| &e.edges).take(64) {
        assert!(index.owner(e).is_some());
    }
});
