#![no_main]

use libfuzzer_sys::fuzz_target;
use simplicial_means::io::PruneFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = PruneFile::from_json(text) {
        let again = PruneFile::from_json(&file.to_json()).expect("written prune file parses");
        assert_eq!(again.vertex_map, file.vertex_map);
    }
});
