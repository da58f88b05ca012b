#![no_main]

use libfuzzer_sys::fuzz_target;
use simplicial_means::SimplicialComplex;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(k) = SimplicialComplex::from_json(text) {
        let again = SimplicialComplex::from_json(&k.to_json()).expect("written complex parses");
        assert_eq!(again.facets(), k.facets());
        assert_eq!(again.vertex_count(), k.vertex_count());
    }
});
