#![no_main]

use libfuzzer_sys::fuzz_target;
use simplicial_means::presets::Preset;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(preset) = Preset::from_json(text) {
        assert!(!preset.runs.is_empty());
    }
});
