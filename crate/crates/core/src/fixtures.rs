//! Reference networks used by tests, benches and the CLI.

use crate::network::{parse_network, split, ReactionNetwork, SplitGraph};

/// Three species: a fast 2-cycle `1 <-> 2` leaking into an inert species `3`, with
/// self-replication of `1` at rate `b^kappa_scale`.
pub fn example1_text(kappa_scale: i64) -> String {
    format!(
        "base 10\nspecies 1 2 3\n\
         reaction 1 -> 2 scale 0\n\
         reaction 2 -> 1 scale -2\n\
         reaction 2 -> 3 scale -5\n\
         reaction 1 -> 1 + 1 scale {kappa_scale}\n"
    )
}

/// Two coupled autocatalytic cycles `{1, 2}` and `{1b, 2b}` in base `b`.
pub fn example2_text(b: f64) -> String {
    format!(
        "base {b}\nspecies 1 2 1b 2b\n\
         reaction 1 -> 2 scale 0\n\
         reaction 1b -> 2b scale -2\n\
         reaction 1b -> 1b + 1b scale -3\n\
         reaction 2 -> 1 scale -5\n\
         reaction 2b -> 1b scale -6\n\
         reaction 1 -> 1 + 1 scale -7\n\
         reaction 2 -> 2 + 2 scale -12\n\
         reaction 1 -> 1b scale -12\n\
         reaction 1b -> 1 scale -16\n\
         reaction 2b -> 2b + 2b scale -16\n"
    )
}

/// Index of the `2 -> 1` reaction in [`variant_text`], swept by the variant study.
pub const VARIANT_SWEPT_REACTION: usize = 3;

/// Reverse-wired variant of [`example2_text`] in base 5 with `k_{2 -> 1} = 5^k_min_scale`.
pub fn variant_text(k_min_scale: i64) -> String {
    format!(
        "base 5\nspecies 1 2 1b 2b\n\
         reaction 1 -> 2 scale 0\n\
         reaction 1b -> 2b scale -2\n\
         reaction 1b -> 1b + 1b scale -3\n\
         reaction 2 -> 1 scale {k_min_scale}\n\
         reaction 2b -> 1b scale -9\n\
         reaction 1 -> 1 + 1 scale -6\n\
         reaction 2 -> 2 + 2 scale -11\n\
         reaction 2b -> 2b + 2b scale -10\n\
         reaction 2 -> 2b scale -12\n\
         reaction 2b -> 2 scale -13\n"
    )
}

/// Strongly connected conservative chain on four species with rates spread over six decades.
pub const MARKOV_TEXT: &str = "base 10
species a b c d
reaction a -> b scale 0
reaction b -> a scale -1
reaction b -> c scale -3
reaction c -> b scale -2
reaction c -> d scale -4
reaction d -> a scale -6
";

/// A 2-cycle whose deficiency weight and leakage have the same scale.
pub const RESONANT_TEXT: &str = "base 10
species 1 2 x
reaction 1 -> 2 scale 0
reaction 2 -> 1 scale -2
reaction 1 -> 1 + 1 scale -3
reaction 1 -> x scale -3
";

fn parsed(text: &str) -> ReactionNetwork {
    parse_network(text).expect("fixture networks are well formed")
}

pub fn example1_network(kappa_scale: i64) -> ReactionNetwork {
    parsed(&example1_text(kappa_scale))
}

pub fn example1_graph(kappa_scale: i64) -> SplitGraph {
    split(&example1_network(kappa_scale))
}

pub fn example2_network(b: f64) -> ReactionNetwork {
    parsed(&example2_text(b))
}

/// Species order `1, 2, 1b, 2b`.
pub fn example2_graph(b: f64) -> SplitGraph {
    split(&example2_network(b))
}

pub fn variant_network(k_min_scale: i64) -> ReactionNetwork {
    parsed(&variant_text(k_min_scale))
}

pub fn variant_graph(k_min_scale: i64) -> SplitGraph {
    split(&variant_network(k_min_scale))
}

pub fn markov_graph() -> SplitGraph {
    split(&parsed(MARKOV_TEXT))
}

pub fn resonant_graph() -> SplitGraph {
    split(&parsed(RESONANT_TEXT))
}
