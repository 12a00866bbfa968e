//! Grammars shipped with the tool.

pub const BUNDLED: &[(&str, &str)] = &[
    ("dyck.grm", include_str!("../corpus/dyck.grm")),
    ("charney_b3.grm", include_str!("../corpus/charney_b3.grm")),
    (
        "charney_b3_braidweighted.grm",
        include_str!("../corpus/charney_b3_braidweighted.grm"),
    ),
];

/// Text of a bundled grammar by file name.
pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
