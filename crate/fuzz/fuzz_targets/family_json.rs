#![no_main]

use fiplab::algebra::{forcing_maximal_fip, greedy_maximal_fip, has_fip, has_nip, reduce_nip_to_fip, FiniteFamily};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(family) = FiniteFamily::from_json(text) else { return };
    assert_eq!(FiniteFamily::from_json(&family.to_json()).expect("printed family parses"), family);
    if family.len() > 12 {
        return;
    }
    let greedy = greedy_maximal_fip(&family);
    assert_eq!(greedy, forcing_maximal_fip(&family));
    if let Ok(kept) = greedy {
        assert!(has_fip(&family.restrict(&kept)));
    }
    let reduced = reduce_nip_to_fip(&family, 2);
    assert_eq!(has_fip(&reduced), has_nip(&family, 2));
});
