//! Synthetic geometric datasets with planted outlier edges.
//!
//! True edges carry the geometric transport rotations of a Haar-sampled
//! frame set; planted outliers are uniformly random non-neighbor pairs
//! carrying independent uniform in-plane rotations (Hermitian-symmetrized
//! by construction of the matrix). Planted pairs never overlap cap pairs,
//! so every planted edge is a geometric non-neighbor and the ground-truth
//! labels stay unambiguous.

use std::collections::HashSet;

use rand::Rng;

use crate::geometry::{sample_haar_frame, Frame, UnitComplex};
use crate::operator::{cap_edges, OperatorError, TransportMatrix};

#[derive(Debug, Clone, Copy)]
pub struct DatasetEdge {
    pub i: u32,
    pub j: u32,
    /// Planted outlier (carries a random rotation) rather than a cap pair.
    pub planted: bool,
}

#[derive(Debug, Clone)]
pub struct GeometricDataset {
    pub frames: Vec<Frame>,
    pub matrix: TransportMatrix,
    pub edges: Vec<DatasetEdge>,
}

impl GeometricDataset {
    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }
}

/// Sample `n` Haar frames, build their cap-`h` transport matrix, and
/// corrupt it with planted outlier edges so that a fraction `outlier_frac`
/// of the final edge list is planted.
pub fn generate_geometric_dataset<R: Rng + ?Sized>(
    n: usize,
    h: f64,
    outlier_frac: f64,
    rng: &mut R,
) -> Result<GeometricDataset, OperatorError> {
    assert!(n >= 2);
    assert!(h > 0.0 && h <= 2.0);
    assert!((0.0..1.0).contains(&outlier_frac));

    let frames: Vec<Frame> = (0..n).map(|_| sample_haar_frame(rng)).collect();
    let true_edges = cap_edges(&frames, h)?;
    let n_true = true_edges.len();
    let n_planted = (outlier_frac / (1.0 - outlier_frac) * n_true as f64).round() as usize;

    let cos_cap = 1.0 - h;
    let mut chosen: HashSet<(u32, u32)> = HashSet::with_capacity(n_planted);
    let mut planted = Vec::with_capacity(n_planted);
    while planted.len() < n_planted {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let (i, j) = (a.min(b) as u32, a.max(b) as u32);
        if frames[i as usize].e3.dot(&frames[j as usize].e3) > cos_cap {
            continue; // cap pair: already a true edge
        }
        if !chosen.insert((i, j)) {
            continue;
        }
        let g = UnitComplex::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
        planted.push((i, j, g));
    }

    let mut edges: Vec<DatasetEdge> = true_edges
        .iter()
        .map(|&(i, j, _)| DatasetEdge { i, j, planted: false })
        .collect();
    edges.extend(planted.iter().map(|&(i, j, _)| DatasetEdge { i, j, planted: true }));

    let matrix = TransportMatrix::from_edges(n, h, true_edges.into_iter().chain(planted));
    Ok(GeometricDataset {
        frames,
        matrix,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::build_transport_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_fraction_reproduces_the_clean_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ds = generate_geometric_dataset(80, 0.5, 0.0, &mut rng).unwrap();
        let clean = build_transport_matrix(&ds.frames, 0.5).unwrap();
        assert_eq!(ds.matrix.nnz(), clean.nnz());
        for i in 0..80 {
            for j in 0..80 {
                assert_eq!(ds.matrix.entry(i, j), clean.entry(i, j));
            }
        }
        assert!(ds.edges.iter().all(|e| !e.planted));
    }

    #[test]
    fn planted_fraction_matches_request() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ds = generate_geometric_dataset(2000, 0.25, 0.2, &mut rng).unwrap();
        let planted = ds.edges.iter().filter(|e| e.planted).count();
        let frac = planted as f64 / ds.edges.len() as f64;
        assert!((frac - 0.2).abs() <= 0.01, "planted fraction {frac}");
        // Planted edges are geometric non-neighbors by construction.
        for e in ds.edges.iter().filter(|e| e.planted) {
            assert!(ds.frames[e.i as usize].e3.dot(&ds.frames[e.j as usize].e3) <= 0.75);
        }
        assert!(ds.matrix.is_hermitian_exact());
    }
}
