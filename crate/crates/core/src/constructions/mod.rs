//! Explicit extremal constructions: crown graphs, Turán graphs, complete
//! multipartite `r`-graphs, and the word machinery used to exhibit many
//! Hamiltonian cycles in the latter.

mod crown;
mod multipartite;
mod words;

pub use crown::{
    count_placements_crown, count_placements_crown_brute_force, crown_allowed_matrix, crown_graph,
    crown_placement_lower_bound, is_good_crown_permutation, CrownLowerBound,
};
pub use multipartite::{multipartite_rgraph, turan_graph, MultipartiteRGraph};
pub use words::{
    count_admissible_words, enumerate_admissible, extend_to_good_word, is_admissible, is_good_word,
    sample_feasible_word, sample_good_cycles, word_to_permutation, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("n = {n} is too small (need n >= {min})")]
    TooSmall { n: usize, min: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("word extension failed: {0}")]
    ExtensionFailed(String),
    #[error("scale limit: {0}")]
    ScaleLimit(String),
}

impl From<crate::counting::CountError> for ConstructionError {
    fn from(e: crate::counting::CountError) -> Self {
        ConstructionError::ScaleLimit(e.to_string())
    }
}
