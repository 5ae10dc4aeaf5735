#![no_main]

use libfuzzer_sys::fuzz_target;
use ultrafine::format::AlgebraFile;

fuzz_target!(|s: &str| {
    let Ok(file) = AlgebraFile::from_toml_str(s) else { return };
    let Ok(alg) = file.to_algebra() else { return };
    let _ = file.to_flag(&alg);
});
