//! Monte-Carlo discretization of the localized parallel transport operator.
//!
//! Frames drawn from the Haar measure become matrix indices; every pair of
//! frames whose viewing directions fall in a common spherical cap of height
//! `h` contributes the transport rotation between them, scaled by `1/N` so
//! that the matrix eigenvalues converge to the operator eigenvalues
//! `λ_n(h)` with multiplicities `2n+1` as `N` grows.

mod eigensolver;

pub(crate) use eigensolver::hermitian_top_k;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{delta, transport_rotation, Frame, GeometryError, UnitComplex};
use crate::spectral;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    /// A pair of frames inside the cap has antipodal viewing directions
    /// (possible only for caps reaching almost the full sphere).
    #[error("frames {i} and {j} have antipodal viewing directions inside the cap")]
    AntipodalPoints { i: usize, j: usize },
    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),
}

/// Sparse Hermitian transport matrix: entry `(i, j)` holds the transport
/// rotation between frames `i` and `j` divided by `N`, present exactly when
/// the viewing directions satisfy `(π_i, π_j) > 1 − h`; the diagonal always
/// carries `1/N`.
#[derive(Debug, Clone)]
pub struct TransportMatrix {
    n: usize,
    h: f64,
    rows: Vec<Vec<(u32, Complex64)>>,
}

impl TransportMatrix {
    /// Assemble from unordered off-diagonal entries `(i, j, rotation)` with
    /// `i ≠ j`, each listed once; the mirrored entry is stored conjugated so
    /// Hermiticity holds exactly as stored.
    pub fn from_edges<I>(n: usize, h: f64, edges: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, UnitComplex)>,
    {
        let scale = 1.0 / n as f64;
        let mut rows: Vec<Vec<(u32, Complex64)>> = (0..n)
            .map(|i| vec![(i as u32, Complex64::new(scale, 0.0))])
            .collect();
        for (i, j, g) in edges {
            debug_assert_ne!(i, j);
            let v = g.to_complex() * scale;
            rows[i as usize].push((j, v));
            rows[j as usize].push((i, v.conj()));
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(c, _)| c);
        }
        TransportMatrix { n, h, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<Complex64> {
        let row = &self.rows[i];
        row.binary_search_by_key(&(j as u32), |&(c, _)| c)
            .ok()
            .map(|idx| row[idx].1)
    }

    /// Number of stored entries, diagonal included.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Number of unordered off-diagonal pairs with a stored entry.
    pub fn off_diagonal_pair_count(&self) -> usize {
        (self.nnz() - self.n) / 2
    }

    /// `out = M·x`. Row sums are sequential (deterministic) while rows are
    /// processed in parallel.
    pub fn matvec_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(out.len(), self.n);
        out.par_iter_mut().enumerate().for_each(|(i, o)| {
            *o = self.rows[i]
                .iter()
                .map(|&(j, v)| v * x[j as usize])
                .sum();
        });
    }

    /// Entry-wise exact Hermiticity check (used by tests).
    pub fn is_hermitian_exact(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter().all(|&(j, v)| {
                self.entry(j as usize, i)
                    .map_or(false, |w| w == v.conj())
            })
        })
    }
}

/// Transport rotations for every unordered pair of frames whose viewing
/// directions share the cap of height `h`.
pub(crate) fn cap_edges(
    frames: &[Frame],
    h: f64,
) -> Result<Vec<(u32, u32, UnitComplex)>, OperatorError> {
    let n = frames.len();
    let cos_cap = 1.0 - h;
    let upper: Result<Vec<Vec<(u32, UnitComplex)>>, OperatorError> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::new();
            for j in (i + 1)..n {
                if frames[i].e3.dot(&frames[j].e3) > cos_cap {
                    let g = transport_rotation(&frames[i], &frames[j]).map_err(
                        |GeometryError::AntipodalPoints| OperatorError::AntipodalPoints { i, j },
                    )?;
                    row.push((j as u32, g));
                }
            }
            Ok(row)
        })
        .collect();
    Ok(upper?
        .into_iter()
        .enumerate()
        .flat_map(|(i, row)| row.into_iter().map(move |(j, g)| (i as u32, j, g)))
        .collect())
}

/// Build the transport matrix for a cap of height `h` over sampled frames.
pub fn build_transport_matrix(frames: &[Frame], h: f64) -> Result<TransportMatrix, OperatorError> {
    assert!(frames.len() >= 2, "need at least two frames");
    assert!(h > 0.0 && h <= 2.0, "cap height must lie in (0, 2]");
    let edges = cap_edges(frames, h)?;
    Ok(TransportMatrix::from_edges(frames.len(), h, edges))
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenCluster {
    pub mean: f64,
    pub multiplicity: usize,
}

/// Top of the spectrum with eigenvalues grouped into clusters.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// Computed eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<EigenCluster>,
    /// Gaps between consecutive cluster means.
    pub gaps: Vec<f64>,
    pub clustering_tolerance: f64,
}

/// Group descending eigenvalues: a new cluster starts wherever the gap to
/// the previous eigenvalue exceeds the tolerance `0.15 · (e₃ − e₄)` (the
/// empirical spectral gap below the expected top eigenspace), floored at
/// `1e-9`.
pub fn cluster_eigenvalues(eigenvalues: &[f64]) -> (Vec<EigenCluster>, f64) {
    let tol = if eigenvalues.len() >= 4 {
        (0.15 * (eigenvalues[2] - eigenvalues[3])).max(1e-9)
    } else {
        1e-9
    };
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 0..eigenvalues.len() {
        let split = i + 1 == eigenvalues.len() || eigenvalues[i] - eigenvalues[i + 1] > tol;
        if split {
            let members = &eigenvalues[start..=i];
            clusters.push(EigenCluster {
                mean: members.iter().sum::<f64>() / members.len() as f64,
                multiplicity: members.len(),
            });
            start = i + 1;
        }
    }
    (clusters, tol)
}

/// Top-`k` spectrum of the transport matrix, clustered.
pub fn spectrum(matrix: &TransportMatrix, k: usize) -> Result<SpectrumReport, OperatorError> {
    assert!(k >= 1 && k <= matrix.n(), "need 1 <= k <= N");
    let top = hermitian_top_k(matrix.n(), k, 0x1705_c3a1, |x, out| {
        matrix.matvec_into(x, out)
    })
    .map_err(OperatorError::ConvergenceFailure)?;
    let (clusters, tol) = cluster_eigenvalues(&top.values);
    let gaps = clusters
        .windows(2)
        .map(|w| w[0].mean - w[1].mean)
        .collect();
    Ok(SpectrumReport {
        eigenvalues: top.values,
        clusters,
        gaps,
        clustering_tolerance: tol,
    })
}

/// Continuum prediction for the top of the spectrum: `(n, λ_n(h), 2n+1)`
/// rows covering at least `count` eigenvalues.
pub fn predicted_clusters(h: f64, count: usize) -> Vec<(usize, f64, usize)> {
    let mut rows = Vec::new();
    let mut covered = 0;
    let mut n = 1;
    while covered < count {
        let lambda = spectral::eigenvalue_numeric(n, h).expect("h in (0, 2]");
        rows.push((n, lambda, 2 * n + 1));
        covered += 2 * n + 1;
        n += 1;
    }
    rows
}

/// Rayleigh residual `‖M v‖ / ‖v‖` for the canonical weight-`k` test vector
/// `v_i = f(x_i)`, where `f` transforms under the right action as
/// `f(x ◁ g) = g^k f(x)` (constant for `k = 0`, built from powers of the
/// first component of `δ_x` otherwise). For every `k ≠ −1` the continuum
/// operator annihilates `f`, so the residual decays like `N^{-1/2}`; the
/// weight `−1` vectors project onto the live spectrum instead.
pub fn kernel_residual(matrix: &TransportMatrix, frames: &[Frame], weight: i32) -> f64 {
    assert_eq!(frames.len(), matrix.n());
    let v: Vec<Complex64> = frames
        .iter()
        .map(|x| {
            let d = delta(x).0[0];
            match weight {
                0 => Complex64::new(1.0, 0.0),
                k if k < 0 => d.powi(-k),
                k => d.conj().powi(k),
            }
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); matrix.n()];
    matrix.matvec_into(&v, &mut out);
    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let no = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    no / nv
}
