#![no_main]
use libfuzzer_sys::fuzz_target;

use cvrobust::families::{build, family_witnesses, FamilySpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<FamilySpec>() else {
        return;
    };
    let text = spec.to_string();
    assert_eq!(text.parse::<FamilySpec>().unwrap().to_string(), text);
    if build(&spec).is_ok() {
        family_witnesses(&spec).expect("buildable specs have witnesses");
    }
});
