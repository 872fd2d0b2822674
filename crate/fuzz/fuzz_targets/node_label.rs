#![no_main]

use fiplab::{Label, Mode, Node, TraceEvent};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(node) = text.parse::<Node>() {
        assert_eq!(node.to_string().parse::<Node>().expect("printed node parses"), node);
    }
    if let Ok(label) = text.parse::<Label>() {
        assert_eq!(label.to_string().parse::<Label>().expect("printed label parses"), label);
    }
    if let Ok(event) = text.parse::<TraceEvent>() {
        assert_eq!(event.to_string().parse::<TraceEvent>().expect("printed record parses"), event);
    }
    let _ = text.parse::<Mode>();
});
