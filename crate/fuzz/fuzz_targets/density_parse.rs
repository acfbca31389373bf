#![no_main]
use libfuzzer_sys::fuzz_target;

use hamforge_core::randmodels::DensitySpec;

fuzz_target!(|data: &str| {
    let Ok(p) = DensitySpec::parse(data) else { return };
    assert!(0.0 < p.value() && p.value() < 1.0);
    assert_eq!(DensitySpec::parse(&p.to_string()), Ok(p));
});
