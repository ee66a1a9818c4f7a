//! Random symplectic maps and Gaussian states shared by the property suites.
#![allow(dead_code)]

use cvgate::{
    beamsplitter_50_50, phase_rotation, single_mode_squeezer, GaussianState, SymplecticOp,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

pub const CASES: u32 = 1000;

#[derive(Debug, Clone)]
pub enum Step {
    Squeeze { mode: usize, r: f64 },
    Rotate { mode: usize, theta: f64 },
    Split { a: usize, b: usize },
}

/// Up to `max_steps` elementary gates on `n` modes. Squeezing is bounded so
/// products stay well conditioned.
pub fn steps(n: usize, max_steps: usize) -> impl Strategy<Value = Vec<Step>> {
    let step = prop_oneof![
        (0..n, -0.5f64..0.5).prop_map(|(mode, r)| Step::Squeeze { mode, r }),
        (0..n, -3.2f64..3.2).prop_map(|(mode, theta)| Step::Rotate { mode, theta }),
        (0..n, 0..n).prop_map(|(a, b)| Step::Split { a, b }),
    ];
    prop::collection::vec(step, 1..=max_steps)
}

pub fn compose(n: usize, steps: &[Step]) -> SymplecticOp {
    let mut op = SymplecticOp::identity(n);
    for s in steps {
        let next = match *s {
            Step::Squeeze { mode, r } => single_mode_squeezer(r).unwrap().embed(mode, n).unwrap(),
            Step::Rotate { mode, theta } => phase_rotation(theta).unwrap().embed(mode, n).unwrap(),
            Step::Split { a, b } if a != b => beamsplitter_50_50(a, b, n).unwrap(),
            Step::Split { .. } => continue,
        };
        op = op.then(&next).unwrap();
    }
    op
}

pub fn symplectic(n: usize) -> impl Strategy<Value = SymplecticOp> {
    steps(n, 4).prop_map(move |s| compose(n, &s))
}

/// Williamson form: thermal occupations `ν >= 1/4` dressed by a random
/// symplectic map and displaced.
pub fn gaussian_state(n: usize) -> impl Strategy<Value = GaussianState> {
    (
        prop::collection::vec(0.25f64..1.0, n),
        prop::collection::vec(-2.0f64..2.0, 2 * n),
        steps(n, 4),
    )
        .prop_map(move |(nu, mean, s)| {
            let diag: Vec<f64> = nu.iter().flat_map(|&v| [v, v]).collect();
            let thermal = GaussianState::new(
                DVector::from_vec(mean),
                DMatrix::from_diagonal(&DVector::from_vec(diag)),
            )
            .unwrap();
            compose(n, &s).apply(&thermal).unwrap()
        })
}

pub fn any_modes() -> impl Strategy<Value = usize> {
    1usize..=3
}
