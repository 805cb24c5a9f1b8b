//! Scenario documents shipped with the binary.

pub const PRESETS: &[(&str, &str)] = &[
    ("two_slit", include_str!("../presets/two_slit.scn")),
    ("detector_chain", include_str!("../presets/detector_chain.scn")),
    ("coin_container", include_str!("../presets/coin_container.scn")),
    ("eraser", include_str!("../presets/eraser.scn")),
    ("eraser_escaped", include_str!("../presets/eraser_escaped.scn")),
];

/// Look up a preset by name, with or without the `.scn` suffix.
pub fn preset(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".scn").unwrap_or(name);
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcopy_core::scenario::parse_scenario;

    #[test]
    fn every_preset_parses() {
        for (name, text) in PRESETS {
            parse_scenario(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(preset("eraser.scn").is_some());
        assert!(preset("nope").is_none());
    }
}
