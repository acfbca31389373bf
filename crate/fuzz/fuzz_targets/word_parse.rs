#![no_main]
use libfuzzer_sys::fuzz_target;

use hamforge_core::constructions::{is_admissible, Word};

fuzz_target!(|data: &str| {
    let Ok(w) = Word::parse(data) else { return };
    assert_eq!(w.to_string(), data);
    for r in 2..=4 {
        let _ = is_admissible(w.letters(), r);
    }
});
