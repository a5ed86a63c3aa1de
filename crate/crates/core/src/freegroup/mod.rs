//! Words, automorphisms and Whitehead graphs in free groups.

mod automorphism;
mod factor;
mod whitehead;
mod word;

pub use automorphism::{FreeAutomorphism, Side, WhiteheadMove};
pub use factor::{conjugate_into_factor, conjugated_power, enumerate_factor_product, stable_letter};
pub use whitehead::{
    connected_no_cutvertex, is_simple, whitehead_graph, whitehead_minimize, Minimization, WhiteheadGraph,
};
pub use word::{
    cyclically_reduced_words, is_conjugate, letter_code, letter_from_code, words_of_length, CyclicWord, Letter,
    Word,
};
