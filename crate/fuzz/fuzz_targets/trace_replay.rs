#![no_main]

use fiplab::{ConstructionTrace, Mode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(trace) = ConstructionTrace::parse(text) else { return };
    let reparsed = ConstructionTrace::parse(&trace.to_text()).expect("printed trace parses");
    assert_eq!(reparsed, trace);
    for mode in [Mode::Fip, Mode::TwoIp] {
        let _ = trace.replay(mode, 12);
    }
});
