#![no_main]
use libfuzzer_sys::fuzz_target;

use cvrobust::format::StateFile;
use cvrobust::{classify, esd_contour, RobustnessClass};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(v) = StateFile::parse(text).and_then(|f| f.covariance()) else {
        return;
    };
    let Ok(report) = classify(&v) else {
        return;
    };
    let points = esd_contour(&v, 32);
    if report.class == RobustnessClass::FullyRobust {
        assert!(points.is_empty());
    }
    for (t1, t2) in points {
        assert!(t1 > 0.0 && t1 <= 1.0 && t2 > 0.0 && t2 <= 1.0);
    }
});
