#![no_main]

use libfuzzer_sys::fuzz_target;
use simplicial_means::MeshSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = MeshSpec::from_json(text) else { return };
    // large meshes are rejected or built correctly; keep single inputs fast
    if spec.facet_bound().is_some_and(|n| n <= 20_000) {
        if let Ok(mesh) = spec.build() {
            assert_eq!(mesh.map.len(), mesh.complex.vertex_count());
            assert!(mesh.complex.facet_count() <= spec.facet_bound().unwrap());
        }
    }
});
