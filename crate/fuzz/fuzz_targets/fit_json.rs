#![no_main]

use libfuzzer_sys::fuzz_target;
use simplicial_means::io::FitFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(loaded) = FitFile::from_json(text) {
        let file = FitFile::new(&loaded.complex, &loaded.cloud, &loaded.config, &loaded.result);
        FitFile::from_json(&file.to_json()).expect("written fit parses");
    }
});
