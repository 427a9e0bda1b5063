#![allow(dead_code)]

use proptest::prelude::*;
use wbnn_core::transform::{CoefficientTree, Interval};

/// Level layouts `(j0, detail level count)` with at most 12 betas.
pub const SMALL_LAYOUTS: [(u32, usize); 4] = [(0, 3), (1, 2), (2, 2), (3, 1)];

pub fn tree_from(j0: u32, levels: usize, flat: &[f64]) -> CoefficientTree {
    let alpha_count = 1usize << j0;
    let mut it = flat.iter().copied();
    let alphas: Vec<f64> = it.by_ref().take(alpha_count).collect();
    let betas = (0..levels)
        .map(|i| it.by_ref().take(alpha_count << i).collect())
        .collect();
    CoefficientTree::from_parts(j0, alphas, betas, Interval::UNIT).unwrap()
}

/// Values that are exactly zero a fifth of the time.
fn coefficient() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 4 => -5.0f64..5.0]
}

/// Trees with `j0 ≤ 3` and at most 12 betas.
pub fn small_tree() -> impl Strategy<Value = CoefficientTree> {
    (0..SMALL_LAYOUTS.len()).prop_flat_map(|i| {
        let (j0, levels) = SMALL_LAYOUTS[i];
        let total = (1usize << j0) << levels;
        proptest::collection::vec(coefficient(), total)
            .prop_map(move |flat| tree_from(j0, levels, &flat))
    })
}

/// Trees with up to six detail levels.
pub fn tree() -> impl Strategy<Value = CoefficientTree> {
    (0u32..3, 1usize..=6).prop_flat_map(|(j0, levels)| {
        let total = (1usize << j0) << levels;
        proptest::collection::vec(coefficient(), total)
            .prop_map(move |flat| tree_from(j0, levels, &flat))
    })
}
