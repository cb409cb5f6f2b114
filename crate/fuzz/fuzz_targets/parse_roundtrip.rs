#![no_main]
use libfuzzer_sys::fuzz_target;
use stabilis::mpoly::VarNames;
use stabilis::parse::{parse_mpoly_with, ParseLimits, VarMode};

// Parsed input must reproduce itself exactly through the canonical
// printer: serialize . parse is the identity on canonical forms.
fuzz_target!(|data: &[u8]| {
    if data.len() > 2048 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else { return };
    let limits = ParseLimits::default();
    let Ok((poly, names)) = parse_mpoly_with(text, VarMode::Z { nvars: None }, &limits) else {
        return;
    };
    let canonical = poly.to_canonical_string(&names);
    let reparsed = parse_mpoly_with(
        &canonical,
        VarMode::Named(VarNames(names.0.clone())),
        &limits,
    )
    .unwrap_or_else(|e| panic!("canonical form must reparse: {} -> {}", canonical, e));
    assert_eq!(reparsed.0, poly, "roundtrip mismatch for {}", canonical);
});
