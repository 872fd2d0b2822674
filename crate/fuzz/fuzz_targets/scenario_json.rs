#![no_main]

use fiplab::{run, Mode, Scenario};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(scenario) = Scenario::from_json(text) else { return };
    let canonical = scenario.to_canonical_json();
    let again = Scenario::from_json(&canonical).expect("canonical form parses");
    assert_eq!(again, scenario);
    assert_eq!(again.to_canonical_json(), canonical);
    for mode in [Mode::Fip, Mode::TwoIp] {
        if scenario.validate_for(mode).is_ok() {
            let c = run(&scenario, mode).expect("validated scenario runs");
            let (tree, family) = c.trace.replay(mode, scenario.max_depth).expect("own trace replays");
            assert_eq!(tree.len(), c.tree.len());
            assert_eq!(family.sets(), c.family.sets());
        }
    }
});
