#![no_main]

use libfuzzer_sys::fuzz_target;
use simplicial_means::LinearMap;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(map) = LinearMap::from_json(text) {
        assert!(map.is_finite());
        let again = LinearMap::from_json(&map.to_json()).expect("written positions parse");
        assert_eq!(again, map);
    }
});
