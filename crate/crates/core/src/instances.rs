//! Small named instances that separate the independence types.

use crate::function::{CoverageMap, SetFunction};
use crate::sets::{GroundSet, Subset};

fn coverage(gamma: &[Vec<&str>], concepts: &[&str]) -> SetFunction {
    let ground = GroundSet::numbered(1, gamma.len());
    let concepts = GroundSet::new(concepts.iter().copied()).expect("distinct concepts");
    SetFunction::coverage(CoverageMap::unweighted(ground, concepts, gamma).expect("valid coverage"))
}

/// `γ(1)={c1,c2}, γ(2)={c1}, γ(3)={c3}` with unit weights.
pub fn running_coverage() -> SetFunction {
    coverage(
        &[vec!["c1", "c2"], vec!["c1"], vec!["c3"]],
        &["c1", "c2", "c3"],
    )
}

/// The running instance plus element `4` with `γ(4)={c3,c4}`.
pub fn extended_coverage() -> SetFunction {
    coverage(
        &[vec!["c1", "c2"], vec!["c1"], vec!["c3"], vec!["c3", "c4"]],
        &["c1", "c2", "c3", "c4"],
    )
}

/// `γ(1)={c1,c2}, γ(2)={c1}, γ(3)={c2}`.
pub fn markov_coverage() -> SetFunction {
    coverage(&[vec!["c1", "c2"], vec!["c1"], vec!["c2"]], &["c1", "c2"])
}

/// `min(|A|, k)` over a ground set split into consecutive disjoint blocks of
/// the given sizes, labeled `a1.., b1.., c1..`.
pub fn truncated_blocks(k: usize, sizes: &[usize]) -> (SetFunction, Vec<Subset>) {
    let mut labels = Vec::new();
    for (b, &size) in sizes.iter().enumerate() {
        let prefix = (b'a' + b as u8) as char;
        labels.extend((1..=size).map(|i| format!("{prefix}{i}")));
    }
    let ground = GroundSet::new(labels).expect("distinct labels");
    let n = ground.len();
    let mut blocks = Vec::new();
    let mut start = 0;
    for &size in sizes {
        blocks.push(Subset::from_indices(n, start..start + size));
        start += size;
    }
    let f = SetFunction::truncated_cardinality(ground, k).expect("k >= 1");
    (f, blocks)
}
