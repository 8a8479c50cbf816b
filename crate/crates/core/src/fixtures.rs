//! The bundled example nets, by file stem.

pub const CORPUS: [(&str, &str); 6] = [
    ("fig1", include_str!("../fixtures/fig1.mlcp")),
    ("fig2", include_str!("../fixtures/fig2.mlcp")),
    ("fig3", include_str!("../fixtures/fig3.mlcp")),
    ("fig4", include_str!("../fixtures/fig4.mlcp")),
    ("fig6a", include_str!("../fixtures/fig6a.mlcp")),
    ("fig6b", include_str!("../fixtures/fig6b.mlcp")),
];

/// Source text of a bundled net.
pub fn fixture(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
