#![no_main]

use libfuzzer_sys::fuzz_target;
use simplicial_means::{sample, SampleSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = SampleSpec::from_json(text) else { return };
    if spec.count <= 10_000 {
        if let Ok(cloud) = sample(&spec) {
            assert_eq!(cloud.len(), spec.count);
            assert_eq!(cloud.dim(), spec.ambient_dim());
        }
    }
});
