//! Rotational alignment, invariant distance, and the image graph.
//!
//! The invariant distance between two images is the L² distance after the
//! best in-plane rotation of the first; the rotation realizing the minimum
//! is the empirical transport datum `T̃(i, j)`, which approximates the
//! geometric transport rotation when the viewing directions are close.

use rayon::prelude::*;

use super::{rotate_image, ImagingError, ProjectionImage};
use crate::geometry::UnitComplex;

/// Alignment result for one unordered pair.
#[derive(Debug, Clone, Copy)]
pub struct PairAlignment {
    pub i: u32,
    pub j: u32,
    /// Invariant distance (physical L², minimized over the angle grid).
    pub distance: f64,
    /// Aligning rotation `T̃(i, j)`.
    pub rotation: UnitComplex,
}

/// Squared distances between every rotated copy of `stack` and `other`.
fn scan_distances_sq(stack: &[ProjectionImage], other: &ProjectionImage) -> Vec<f64> {
    stack
        .iter()
        .map(|rot| {
            rot.pixels()
                .iter()
                .zip(other.pixels())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .collect()
}

/// Index of the grid minimum; ties go to the smallest angle (lowest index).
fn grid_argmin(d_sq: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in d_sq.iter().enumerate().skip(1) {
        if *v < d_sq[best] {
            best = k;
        }
    }
    best
}

/// Sub-grid refinement: parabola through the squared distances at the
/// minimum and its two cyclic neighbors. Returns the angle offset in grid
/// steps, clamped to half a step.
fn parabolic_offset(d_sq: &[f64], k: usize) -> f64 {
    let n = d_sq.len();
    let dm = d_sq[(k + n - 1) % n];
    let d0 = d_sq[k];
    let dp = d_sq[(k + 1) % n];
    let denom = dm - 2.0 * d0 + dp;
    if denom <= 0.0 {
        return 0.0;
    }
    (0.5 * (dm - dp) / denom).clamp(-0.5, 0.5)
}

fn rotated_stack(img: &ProjectionImage, n_angles: usize) -> Vec<ProjectionImage> {
    (0..n_angles)
        .map(|k| {
            rotate_image(
                img,
                UnitComplex::from_angle(std::f64::consts::TAU * k as f64 / n_angles as f64),
            )
        })
        .collect()
}

fn check_grids(a: &ProjectionImage, b: &ProjectionImage) -> Result<(), ImagingError> {
    if !a.same_grid(b) {
        return Err(ImagingError::ShapeMismatch(
            a.side(),
            a.extent(),
            b.side(),
            b.extent(),
        ));
    }
    Ok(())
}

/// Invariant distance `min_g ‖R(g)·i1 − i2‖` over `n_angles` uniformly
/// spaced rotations, together with the minimizing rotation. Ties break to
/// the smallest angle in `[0, 2π)`.
pub fn invariant_distance(
    i1: &ProjectionImage,
    i2: &ProjectionImage,
    n_angles: usize,
) -> Result<(f64, UnitComplex), ImagingError> {
    assert!(n_angles >= 4);
    check_grids(i1, i2)?;
    let d_sq = scan_distances_sq(&rotated_stack(i1, n_angles), i2);
    let k = grid_argmin(&d_sq);
    Ok((
        d_sq[k].max(0.0).sqrt() * i1.pixel_size(),
        UnitComplex::from_angle(std::f64::consts::TAU * k as f64 / n_angles as f64),
    ))
}

/// All-pairs alignment: grid minimum plus parabolic refinement of the
/// angle. Each image is rotated once and scanned against all later ones;
/// pairs are processed in parallel with a fixed output order.
pub fn alignment_table(
    images: &[ProjectionImage],
    n_angles: usize,
) -> Result<Vec<PairAlignment>, ImagingError> {
    assert!(n_angles >= 4);
    assert!(images.len() >= 2);
    for img in &images[1..] {
        check_grids(&images[0], img)?;
    }
    let n = images.len();
    let step = std::f64::consts::TAU / n_angles as f64;
    let per_i: Vec<Vec<PairAlignment>> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let stack = rotated_stack(&images[i], n_angles);
            ((i + 1)..n)
                .map(|j| {
                    let d_sq = scan_distances_sq(&stack, &images[j]);
                    let k = grid_argmin(&d_sq);
                    let angle = step * (k as f64 + parabolic_offset(&d_sq, k));
                    PairAlignment {
                        i: i as u32,
                        j: j as u32,
                        distance: d_sq[k].max(0.0).sqrt() * images[i].pixel_size(),
                        rotation: UnitComplex::from_angle(angle),
                    }
                })
                .collect()
        })
        .collect();
    Ok(per_i.into_iter().flatten().collect())
}

/// Edge of the image graph, stored once per unordered pair with `i < j`.
#[derive(Debug, Clone, Copy)]
pub struct GraphEdge {
    pub i: u32,
    pub j: u32,
    pub distance: f64,
    /// Aligning rotation `T̃(i, j)`; the reverse direction is its inverse.
    pub rotation: UnitComplex,
}

/// Graph over images with an edge wherever the invariant distance is within
/// the threshold; edges carry the aligning rotations.
#[derive(Debug, Clone)]
pub struct ImageGraph {
    pub n_images: usize,
    pub epsilon: f64,
    pub edges: Vec<GraphEdge>,
}

impl ImageGraph {
    /// Stored rotation `T̃(i, j)`; the reversed lookup returns the exact
    /// inverse of the forward one.
    pub fn rotation(&self, i: u32, j: u32) -> Option<UnitComplex> {
        let (a, b) = (i.min(j), i.max(j));
        self.edges
            .binary_search_by_key(&(a, b), |e| (e.i, e.j))
            .ok()
            .map(|idx| {
                let g = self.edges[idx].rotation;
                if i < j {
                    g
                } else {
                    g.inverse()
                }
            })
    }

    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }
}

/// Threshold matching a target fraction of pairs: the `frac`-quantile of
/// the pairwise invariant distances.
pub fn epsilon_for_cap_fraction(table: &[PairAlignment], frac: f64) -> f64 {
    assert!((0.0..=1.0).contains(&frac));
    let mut distances: Vec<f64> = table.iter().map(|p| p.distance).collect();
    distances.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((frac * distances.len() as f64).floor() as usize).min(distances.len() - 1);
    distances[idx]
}

/// Build the image graph by thresholding a precomputed alignment table.
pub fn graph_from_table(table: &[PairAlignment], n_images: usize, epsilon: f64) -> ImageGraph {
    let edges = table
        .iter()
        .filter(|p| p.distance <= epsilon)
        .map(|p| GraphEdge {
            i: p.i,
            j: p.j,
            distance: p.distance,
            rotation: p.rotation,
        })
        .collect();
    ImageGraph {
        n_images,
        epsilon,
        edges,
    }
}

/// All-pairs invariant distances thresholded at `epsilon`.
pub fn build_image_graph(
    images: &[ProjectionImage],
    epsilon: f64,
    n_angles: usize,
) -> Result<ImageGraph, ImagingError> {
    let table = alignment_table(images, n_angles)?;
    Ok(graph_from_table(&table, images.len(), epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_haar_frame, Frame};
    use crate::imaging::{xray_project, Density};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn test_image(seed: u64) -> ProjectionImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = sample_haar_frame(&mut rng);
        xray_project(&Density::asymmetric_three_blob(), &frame, 64, 3.0)
    }

    #[test]
    fn distance_to_itself_is_zero_at_unit_rotation() {
        let img = test_image(1);
        let (d, g) = invariant_distance(&img, &img, 36).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(g, UnitComplex::from_angle(0.0));
    }

    #[test]
    fn planted_rotation_is_recovered_within_one_step() {
        let img = test_image(2);
        let n_angles = 72;
        let step = std::f64::consts::TAU / n_angles as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let g0 = UnitComplex::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
            let rotated = rotate_image(&img, g0);
            let (d, g) = invariant_distance(&img, &rotated, n_angles).unwrap();
            let err = g.mul(&g0.inverse()).angle().abs();
            assert!(err <= step + 1e-12, "argmin off by {err}");
            // Interpolation noise floor: small relative to the image norm.
            let scale = img.pixel_size() * img.norm_sq_pixels().sqrt();
            assert!(d / scale < 0.05, "distance {d} above noise floor");
        }
    }

    #[test]
    fn swapped_arguments_invert_the_rotation() {
        let a = test_image(4);
        let b = test_image(5);
        let n_angles = 72;
        let step = std::f64::consts::TAU / n_angles as f64;
        let (_, g_ab) = invariant_distance(&a, &b, n_angles).unwrap();
        let (_, g_ba) = invariant_distance(&b, &a, n_angles).unwrap();
        let err = g_ba.mul(&g_ab).angle().abs();
        assert!(err <= step + 1e-12, "exchange identity off by {err}");
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = test_image(6);
        let b = xray_project(&Density::asymmetric_three_blob(), &Frame::standard(), 32, 3.0);
        assert!(matches!(
            invariant_distance(&a, &b, 8),
            Err(ImagingError::ShapeMismatch(..))
        ));
    }

    #[test]
    fn graph_thresholds_and_exchange_identity() {
        let images: Vec<ProjectionImage> = (0..6).map(|s| test_image(10 + s)).collect();
        let table = alignment_table(&images, 36).unwrap();
        assert_eq!(table.len(), 15);

        // ε = 0 keeps no generic pair; a huge ε keeps them all.
        let empty = graph_from_table(&table, 6, 0.0);
        assert!(empty.edges.is_empty());
        let full = graph_from_table(&table, 6, f64::INFINITY);
        assert_eq!(full.edges.len(), 15);

        // Stored rotations satisfy T̃(j,i) = T̃(i,j)⁻¹ exactly.
        for e in &full.edges {
            let fwd = full.rotation(e.i, e.j).unwrap();
            let bwd = full.rotation(e.j, e.i).unwrap();
            let prod = fwd.mul(&bwd);
            assert_eq!(prod.re, fwd.re * fwd.re + fwd.im * fwd.im);
            assert_eq!(prod.im, 0.0);
        }
    }

    #[test]
    fn quantile_threshold_keeps_the_requested_fraction() {
        let images: Vec<ProjectionImage> = (0..10).map(|s| test_image(30 + s)).collect();
        let table = alignment_table(&images, 24).unwrap();
        let eps = epsilon_for_cap_fraction(&table, 0.2);
        let graph = graph_from_table(&table, 10, eps);
        let frac = graph.edges.len() as f64 / table.len() as f64;
        assert!((frac - 0.2).abs() < 0.1, "kept fraction {frac}");
    }
}
