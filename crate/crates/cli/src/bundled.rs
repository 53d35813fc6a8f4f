//! The bundled scenario library. Each entry mirrors one verification
//! scenario; `walklab run <name>` resolves names here before trying the
//! filesystem.

pub const SCENARIOS: &[(&str, &str)] = &[
    (
        "z-biased-spectral",
        include_str!("../scenarios/z-biased-spectral.json"),
    ),
    ("z-biased-t1", include_str!("../scenarios/z-biased-t1.json")),
    ("z-biased-t2", include_str!("../scenarios/z-biased-t2.json")),
    (
        "z-biased-twisted",
        include_str!("../scenarios/z-biased-twisted.json"),
    ),
    (
        "z-symmetric-lazy",
        include_str!("../scenarios/z-symmetric-lazy.json"),
    ),
    (
        "f2-lazy-spectral",
        include_str!("../scenarios/f2-lazy-spectral.json"),
    ),
    (
        "z-biased-checks",
        include_str!("../scenarios/z-biased-checks.json"),
    ),
    ("affine-t3", include_str!("../scenarios/affine-t3.json")),
    (
        "h3-exploratory",
        include_str!("../scenarios/h3-exploratory.json"),
    ),
];

pub fn find(name: &str) -> Option<&'static str> {
    SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
