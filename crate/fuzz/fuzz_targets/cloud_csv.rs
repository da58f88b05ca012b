#![no_main]

use libfuzzer_sys::fuzz_target;
use simplicial_means::PointCloud;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cloud) = PointCloud::from_csv(text) {
        assert!(cloud.is_finite());
        let again = PointCloud::from_csv(&cloud.to_csv()).expect("written cloud parses");
        assert_eq!(again.as_slice(), cloud.as_slice());
    }
});
