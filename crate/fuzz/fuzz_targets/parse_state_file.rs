#![no_main]
use libfuzzer_sys::fuzz_target;

use cvrobust::format::StateFile;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(file) = StateFile::parse(text) {
            // anything accepted must survive a write/read cycle unchanged
            let again = StateFile::parse(&file.to_json()).expect("written files parse");
            assert_eq!(again.covariance().unwrap(), file.covariance().unwrap());
        }
    }
});
