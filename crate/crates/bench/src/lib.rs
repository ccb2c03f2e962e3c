//! Fixed inputs for the criterion harnesses, sized so one iteration stays in
//! the millisecond range.

use stabreduce::gm_poly::Graded1TAction;
use stabreduce::linalg::{vector, IntMatrix, Vector};
use stabreduce::{reichstein_transform, DiagonalizableGroup, ToricStack, ToricUnion};

/// Affine space with a rank-one torus acting by `weights`.
pub fn affine(weights: &[i64]) -> ToricStack {
    ToricStack::affine(DiagonalizableGroup::gm(weights))
}

/// `A⁴` with a rank-two torus; two reduction steps.
pub fn rank_two() -> ToricUnion {
    let weights: Vec<Vector> = [[1, 0], [0, 1], [-1, 0], [0, -1]].iter().map(|w| vector(w)).collect();
    let group = DiagonalizableGroup::new(2, &[], &weights).expect("four weights in rank two");
    ToricStack::affine(group).as_union()
}

/// The rank-two stack after its first transform: a non-affine fan that
/// still has positive-dimensional stabilizers.
pub fn half_reduced() -> ToricUnion {
    let x = rank_two();
    let centers = x.next_centers().expect("stable stack");
    reichstein_transform(&x, &centers, &[]).expect("valid centers").output
}

pub fn false_example() -> Graded1TAction {
    Graded1TAction::parse(vec![-1, 1, 3, 2, 7], &["x1*x3^2 + x2^5", "x1*x5 + x4^3"]).expect("valid generators")
}

/// A representation of a rank-three torus on `A⁶`.
pub fn representation() -> IntMatrix {
    let rows: Vec<Vector> = [[1, -1, 2, 0, -3, 1], [0, 1, -1, 2, 1, -2], [2, 0, 1, -1, -1, 0]].iter().map(|r| vector(r)).collect();
    IntMatrix::from_rows(6, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabreduce::{reduce, verify_trace};

    #[test]
    fn fixtures_reduce() {
        for x in [affine(&[1, -1]).as_union(), rank_two(), half_reduced()] {
            let trace = reduce(&x, &[]).unwrap();
            assert!(verify_trace(&trace).passed());
        }
    }
}
