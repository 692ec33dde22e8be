//! The intrinsic classifier: viewing-direction inner products from the
//! top-3 eigenspace of the transport matrix.
//!
//! The top eigenspace of the transport matrix is three-dimensional and
//! canonically isomorphic to complexified 3-space. With `P` the orthogonal
//! projector onto it, the rescaled entries `(2N/3)·P_ij` converge to the
//! Hermitian products `⟨δ_{x_j}, δ_{x_i}⟩`, so
//! `(π_i, π_j) ≈ |(2N/3)·P_ij| − 1` recovers every pairwise inner product
//! of viewing directions without knowing any frame. Edges of the similarity
//! graph whose recovered inner product falls below a threshold are outliers.

mod dataset;

pub use dataset::{generate_geometric_dataset, DatasetEdge, GeometricDataset};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::Frame;
use crate::operator::{hermitian_top_k, OperatorError, TransportMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    /// Eigenvalues 3 and 4 are too close to pin down a three-dimensional
    /// top eigenspace; the dataset has too few frames or the cap is too
    /// large.
    #[error("no spectral gap between eigenvalues 3 and 4 ({e3:.6} vs {e4:.6})")]
    NoSpectralGap { e3: f64, e4: f64 },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Minimum relative separation `(e₃ − e₄)/e₃` accepted as a spectral gap.
const GAP_THRESHOLD: f64 = 0.1;

/// Top-3 eigenspace of a transport matrix with the normalization needed to
/// read Hermitian products of camera vectors out of its projector.
#[derive(Debug, Clone)]
pub struct IntrinsicModel {
    n: usize,
    eigenvalues: [f64; 3],
    fourth_eigenvalue: f64,
    basis: [Vec<Complex64>; 3],
    scale: f64,
}

impl IntrinsicModel {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The three leading eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        self.eigenvalues
    }

    pub fn fourth_eigenvalue(&self) -> f64 {
        self.fourth_eigenvalue
    }

    pub fn basis(&self) -> &[Vec<Complex64>; 3] {
        &self.basis
    }

    /// Rebuild the model from a re-mixed eigenbasis (used to check that all
    /// outputs depend on the eigenspace only).
    pub fn with_basis(&self, basis: [Vec<Complex64>; 3]) -> Self {
        IntrinsicModel {
            basis,
            ..self.clone()
        }
    }
}

/// Extract the intrinsic model from the transport matrix. Fails with
/// [`ClassifyError::NoSpectralGap`] when the third and fourth eigenvalues
/// are not separated by at least `GAP_THRESHOLD` relative.
pub fn intrinsic_model(matrix: &TransportMatrix) -> Result<IntrinsicModel, ClassifyError> {
    let n = matrix.n();
    assert!(n >= 4, "need at least four frames to certify a top-3 eigenspace");
    let top = hermitian_top_k(n, 4, 0x0c1a_55ef, |x, out| matrix.matvec_into(x, out))
        .map_err(OperatorError::ConvergenceFailure)?;
    let e3 = top.values[2];
    let e4 = top.values[3];
    if !(e3 > 0.0) || e3 - e4 <= GAP_THRESHOLD * e3 {
        return Err(ClassifyError::NoSpectralGap { e3, e4 });
    }
    let mut vectors = top.vectors.into_iter();
    let basis = [
        vectors.next().expect("k = 4"),
        vectors.next().expect("k = 4"),
        vectors.next().expect("k = 4"),
    ];
    Ok(IntrinsicModel {
        n,
        eigenvalues: [top.values[0], top.values[1], e3],
        fourth_eigenvalue: e4,
        basis,
        scale: n as f64,
    })
}

/// `⟨φ_i, φ_j⟩ = scale · (2/3) · P_ij` with `P_ij = Σ_k conj(v_k(i))·v_k(j)`
/// the eigenspace projector; approximates the Hermitian product
/// `⟨δ_{x_j}, δ_{x_i}⟩` of the camera vectors, so an in-plane offset `g`
/// between frames sharing a viewing direction shows up as `2·ḡ`. The
/// diagonal is real and ≈ 2.
pub fn pairwise_phi_inner(model: &IntrinsicModel, i: usize, j: usize) -> Complex64 {
    let p: Complex64 = model
        .basis
        .iter()
        .map(|v| v[i].conj() * v[j])
        .sum();
    p * (model.scale * 2.0 / 3.0)
}

/// Viewing-direction inner product estimate `|⟨φ_i, φ_j⟩| − 1`, before
/// clamping.
pub fn estimate_viewing_inner_unclamped(model: &IntrinsicModel, i: usize, j: usize) -> f64 {
    pairwise_phi_inner(model, i, j).norm() - 1.0
}

/// Viewing-direction inner product estimate, clamped to `[−1, 1]`.
pub fn estimate_viewing_inner(model: &IntrinsicModel, i: usize, j: usize) -> f64 {
    estimate_viewing_inner_unclamped(model, i, j).clamp(-1.0, 1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeLabel {
    pub i: u32,
    pub j: u32,
    /// Clamped inner-product estimate.
    pub estimate: f64,
    pub is_neighbor: bool,
    /// Present when ground-truth frames were supplied.
    pub is_true_neighbor: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeLabeling {
    pub threshold: f64,
    pub labels: Vec<EdgeLabel>,
    /// Estimates that fell outside `[−1, 1]` before clamping.
    pub clamp_count: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

/// Label each edge neighbor/outlier by thresholding the estimated inner
/// product. With ground-truth frames attached, an edge counts as a true
/// neighbor when the actual viewing-direction inner product clears the same
/// threshold, and precision/recall are reported against that labeling.
pub fn classify_edges(
    model: &IntrinsicModel,
    edges: &[(u32, u32)],
    threshold: f64,
    truth: Option<&[Frame]>,
) -> EdgeLabeling {
    assert!((-1.0..1.0).contains(&threshold), "threshold must lie in (-1, 1)");
    let mut clamp_count = 0usize;
    let labels: Vec<EdgeLabel> = edges
        .iter()
        .map(|&(i, j)| {
            let raw = estimate_viewing_inner_unclamped(model, i as usize, j as usize);
            if !(-1.0..=1.0).contains(&raw) {
                clamp_count += 1;
            }
            let estimate = raw.clamp(-1.0, 1.0);
            let is_true_neighbor = truth.map(|frames| {
                frames[i as usize].e3.dot(&frames[j as usize].e3) >= threshold
            });
            EdgeLabel {
                i,
                j,
                estimate,
                is_neighbor: estimate >= threshold,
                is_true_neighbor,
            }
        })
        .collect();

    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    if truth.is_some() {
        for l in &labels {
            match (l.is_neighbor, l.is_true_neighbor == Some(true)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    let ratio = |num: usize, den: usize| {
        if truth.is_some() && den > 0 {
            Some(num as f64 / den as f64)
        } else {
            None
        }
    };
    EdgeLabeling {
        threshold,
        labels,
        clamp_count,
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, tp + fn_),
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EstimateQuality {
    pub median_abs_error: f64,
    pub pair_count: usize,
    pub clamp_count: usize,
}

/// Median `|estimate − (π_i, π_j)|` over all unordered pairs, against
/// ground-truth frames.
pub fn all_pairs_estimate_quality(model: &IntrinsicModel, frames: &[Frame]) -> EstimateQuality {
    let n = model.n();
    assert_eq!(frames.len(), n);
    let pairs: Vec<(f64, bool)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let model = &model;
            (i + 1..n).map(move |j| {
                let truth = frames[i].e3.dot(&frames[j].e3);
                let raw = estimate_viewing_inner_unclamped(model, i, j);
                let err = (raw.clamp(-1.0, 1.0) - truth).abs();
                (err, !(-1.0..=1.0).contains(&raw))
            })
        })
        .collect();
    let clamp_count = pairs.iter().filter(|p| p.1).count();
    let mut errors: Vec<f64> = pairs.into_iter().map(|p| p.0).collect();
    errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = median_of_sorted(&errors);
    EstimateQuality {
        median_abs_error: median,
        pair_count: errors.len(),
        clamp_count,
    }
}

pub(crate) fn median_of_sorted(sorted: &[f64]) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{act_right, sample_haar_frame, UnitComplex};
    use crate::operator::build_transport_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn haar_frames(n: usize, seed: u64) -> Vec<Frame> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| sample_haar_frame(&mut rng)).collect()
    }

    #[test]
    fn degenerate_input_has_no_gap() {
        let frames = haar_frames(10, 2);
        let m = build_transport_matrix(&frames, 0.05).unwrap();
        assert!(matches!(
            intrinsic_model(&m),
            Err(ClassifyError::NoSpectralGap { .. })
        ));
    }

    #[test]
    fn model_on_geometric_data() {
        let frames = haar_frames(900, 1);
        let m = build_transport_matrix(&frames, 0.3).unwrap();
        let model = intrinsic_model(&m).unwrap();
        assert!(model.eigenvalues[2] / model.fourth_eigenvalue > 1.2);
        // Orthonormal basis.
        for a in 0..3 {
            for b in 0..3 {
                let g: Complex64 = model.basis[a]
                    .iter()
                    .zip(&model.basis[b])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((g - Complex64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
        // Diagonal of the rescaled projector sits near ‖δ‖² = 2.
        let mut diags: Vec<f64> = (0..model.n())
            .map(|i| pairwise_phi_inner(&model, i, i).re)
            .collect();
        diags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = median_of_sorted(&diags);
        assert!((median - 2.0).abs() < 0.15, "median diagonal {median}");
    }

    #[test]
    fn pairwise_inner_is_hermitian_exactly() {
        let frames = haar_frames(300, 8);
        let m = build_transport_matrix(&frames, 0.4).unwrap();
        let model = intrinsic_model(&m).unwrap();
        for (i, j) in [(0usize, 7usize), (3, 250), (12, 13)] {
            let a = pairwise_phi_inner(&model, i, j);
            let b = pairwise_phi_inner(&model, j, i);
            assert_eq!(a, b.conj());
            assert_eq!(
                estimate_viewing_inner(&model, i, j),
                estimate_viewing_inner(&model, j, i)
            );
        }
    }

    #[test]
    fn fiber_pair_recovers_conjugated_offset() {
        // Plant two frames sharing a viewing direction with in-plane offset
        // g; the rescaled projector entry approximates 2·conj(g).
        let mut frames = haar_frames(1200, 21);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let x = sample_haar_frame(&mut rng);
        let g = UnitComplex::from_angle(rng.gen_range(-3.0..3.0));
        frames[0] = x;
        frames[1] = act_right(&x, g);
        let m = build_transport_matrix(&frames, 0.3).unwrap();
        let model = intrinsic_model(&m).unwrap();
        let inner = pairwise_phi_inner(&model, 0, 1);
        let expect = g.conj().to_complex() * 2.0;
        assert!(
            (inner - expect).norm() < 0.2,
            "projector entry {inner} vs {expect}"
        );
        assert!((estimate_viewing_inner(&model, 0, 1) - 1.0).abs() < 0.1);
    }

    #[test]
    fn orthogonal_directions_estimate_near_zero() {
        let mut frames = haar_frames(1200, 22);
        let x = Frame::standard();
        // Frame with viewing direction orthogonal to x's.
        let y = Frame {
            e1: crate::geometry::Vec3::new(0.0, 1.0, 0.0),
            e2: crate::geometry::Vec3::new(0.0, 0.0, 1.0),
            e3: crate::geometry::Vec3::new(1.0, 0.0, 0.0),
        };
        frames[0] = x;
        frames[1] = y;
        let m = build_transport_matrix(&frames, 0.3).unwrap();
        let model = intrinsic_model(&m).unwrap();
        let est = estimate_viewing_inner(&model, 0, 1);
        assert!(est.abs() < 0.12, "orthogonal estimate {est}");
    }

    #[test]
    fn estimates_depend_only_on_the_eigenspace() {
        let frames = haar_frames(400, 9);
        let m = build_transport_matrix(&frames, 0.35).unwrap();
        let model = intrinsic_model(&m).unwrap();

        // Re-mix the basis by a random unitary (Gram-Schmidt on a random
        // complex matrix) and compare estimates.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut u = [[Complex64::new(0.0, 0.0); 3]; 3];
        for row in u.iter_mut() {
            for z in row.iter_mut() {
                *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        // Orthonormalize the rows of u.
        for r in 0..3 {
            for prev in 0..r {
                let proj: Complex64 = (0..3).map(|c| u[prev][c].conj() * u[r][c]).sum();
                for c in 0..3 {
                    let sub = proj * u[prev][c];
                    u[r][c] -= sub;
                }
            }
            let nrm = (0..3).map(|c| u[r][c].norm_sqr()).sum::<f64>().sqrt();
            for c in 0..3 {
                u[r][c] /= nrm;
            }
        }
        let n = model.n();
        let mixed: [Vec<Complex64>; 3] = std::array::from_fn(|r| {
            (0..n)
                .map(|i| (0..3).map(|c| u[r][c] * model.basis()[c][i]).sum())
                .collect()
        });
        let remixed = model.with_basis(mixed);
        for (i, j) in [(0usize, 1usize), (5, 300), (17, 18), (2, 2)] {
            let a = estimate_viewing_inner(&model, i, j);
            let b = estimate_viewing_inner(&remixed, i, j);
            assert!((a - b).abs() < 1e-12, "basis dependence at ({i},{j})");
        }
    }

    #[test]
    fn classify_empty_and_fiber_edges() {
        let frames = haar_frames(600, 14);
        let m = build_transport_matrix(&frames, 0.35).unwrap();
        let model = intrinsic_model(&m).unwrap();
        let empty = classify_edges(&model, &[], 0.5, None);
        assert!(empty.labels.is_empty());
        assert_eq!(empty.clamp_count, 0);
        assert_eq!(empty.precision, None);

        // Self-pairs estimate ≈ 1, so they are neighbors at any threshold
        // with finite-N headroom.
        let self_edges: Vec<(u32, u32)> = (0..10).map(|i| (i, i)).collect();
        let labeled = classify_edges(&model, &self_edges, 0.6, None);
        assert!(labeled.labels.iter().all(|l| l.is_neighbor));
    }
}
