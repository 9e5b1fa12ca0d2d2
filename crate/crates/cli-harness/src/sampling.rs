//! Seeded operator sampling for the verification suite.
//!
//! Stream semantics: every trial draws from `ChaCha8Rng::seed_from_u64(seed)`
//! with the ChaCha stream id set to the trial's global index, so trials are
//! independent, reorderable, and reproducible on any platform. Gaussian
//! variates come from the Box-Muller transform over the top 53 bits of the
//! raw stream — a fixed deterministic map with no rejection step.

use nalgebra::{DMatrix, DVector};
use operator_core::Operator;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct TrialRng {
    state: ChaCha8Rng,
}

impl TrialRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut state = ChaCha8Rng::seed_from_u64(seed);
        state.set_stream(stream);
        Self { state }
    }

    /// Uniform in `(0, 1]`.
    pub fn unit_open(&mut self) -> f64 {
        ((self.state.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.unit_open();
        let u2 = self.unit_open();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn gaussian_vector(&mut self, n: usize) -> DVector<f64> {
        DVector::from_fn(n, |_, _| self.gaussian())
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows, cols, |_, _| self.gaussian())
    }

    /// Index in `0..bound`.
    pub fn index(&mut self, bound: usize) -> usize {
        (self.state.next_u64() % bound as u64) as usize
    }
}

/// The shapes of operator fed into every suite run: Gaussian trials plus
/// structured adversarial cases that stress the tolerance logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    Gaussian,
    Zero,
    IdentityEmbedded,
    DuplicatedColumns,
    /// Smooth singular-value decay down to a 1e-8 ratio; exercises rank
    /// thresholds and conditioning-sensitive paths.
    NearDeficient,
}

impl CaseKind {
    pub const STRUCTURED: [CaseKind; 4] = [
        CaseKind::Zero,
        CaseKind::IdentityEmbedded,
        CaseKind::DuplicatedColumns,
        CaseKind::NearDeficient,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseKind::Gaussian => "gaussian",
            CaseKind::Zero => "zero",
            CaseKind::IdentityEmbedded => "identity-embedded",
            CaseKind::DuplicatedColumns => "duplicated-columns",
            CaseKind::NearDeficient => "near-deficient",
        }
    }
}

pub fn build_case(kind: CaseKind, rows: usize, cols: usize, rng: &mut TrialRng) -> Operator {
    match kind {
        CaseKind::Gaussian => {
            Operator::from_matrix(rng.gaussian_matrix(rows, cols)).expect("finite")
        }
        CaseKind::Zero => Operator::zeros(rows, cols),
        CaseKind::IdentityEmbedded => {
            let mut m = DMatrix::zeros(rows, cols);
            for i in 0..rows.min(cols) {
                m[(i, i)] = 1.0;
            }
            Operator::from_matrix(m).expect("finite")
        }
        CaseKind::DuplicatedColumns => {
            let mut m = rng.gaussian_matrix(rows, cols);
            if cols >= 2 {
                let src = rng.index(cols);
                let dst = (src + 1 + rng.index(cols - 1)) % cols;
                let col = m.column(src).into_owned();
                m.set_column(dst, &col);
            }
            Operator::from_matrix(m).expect("finite")
        }
        CaseKind::NearDeficient => {
            let k = rows.min(cols);
            let q1 = orthogonal_factor(rng, rows, k);
            let q2 = orthogonal_factor(rng, cols, k);
            let mut m = DMatrix::zeros(rows, cols);
            for i in 0..k {
                let sigma = if k == 1 {
                    1.0
                } else {
                    10f64.powf(-8.0 * i as f64 / (k - 1) as f64)
                };
                let u = q1.column(i);
                let v = q2.column(i);
                for r in 0..rows {
                    for c in 0..cols {
                        m[(r, c)] += sigma * u[r] * v[c];
                    }
                }
            }
            Operator::from_matrix(m).expect("finite")
        }
    }
}

fn orthogonal_factor(rng: &mut TrialRng, n: usize, k: usize) -> DMatrix<f64> {
    let qr = rng.gaussian_matrix(n, n).qr();
    qr.q().columns(0, k).into_owned()
}
