// temporary probe
use classavg_core::classify::*;
use classavg_core::geometry::{delta, sample_haar_frame, Frame};
use classavg_core::operator::build_transport_matrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let (n, h, seed) = (2000usize, 0.25f64, 2u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames: Vec<Frame> = (0..n).map(|_| sample_haar_frame(&mut rng)).collect();
    let m = build_transport_matrix(&frames, h).unwrap();

    // Residual of the sampled exact eigenfunctions f_a(x_i) = (delta_i)_a
    let lambda1 = 0.25f64 / 2.0 - 0.25 * 0.25 * 5.0 / 8.0 + 0.25f64.powi(3) / 6.0; // lambda2
    let l1 = 0.5 * h - h * h / 8.0;
    for a in 0..3 {
        let f: Vec<Complex64> = frames.iter().map(|x| delta(x).0[a]).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        m.matvec_into(&f, &mut out);
        let nf: f64 = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let res: f64 = out
            .iter()
            .zip(&f)
            .map(|(o, fi)| (o - Complex64::new(l1, 0.0) * fi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        println!("a={a}: ||(M - l1) f||/||f|| = {:.5}  (l1={l1:.5}, l2={lambda1:.5}, gap={:.5})", res / nf, l1 - lambda1);
    }

    // Subspace angle between the top-3 eigenvectors and the sampled delta space
    let model = intrinsic_model(&m).unwrap();
    let basis = model.basis();
    // Orthonormalize sampled deltas (Gram-Schmidt)
    let mut fs: Vec<Vec<Complex64>> = (0..3)
        .map(|a| frames.iter().map(|x| delta(x).0[a]).collect())
        .collect();
    for r in 0..3 {
        for p in 0..r {
            let fp = fs[p].clone();
            let c: Complex64 = fp.iter().zip(&fs[r]).map(|(x, y)| x.conj() * y).sum();
            for (fr, fpv) in fs[r].iter_mut().zip(&fp) {
                *fr -= c * fpv;
            }
        }
        let nr: f64 = fs[r].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut fs[r] {
            *z /= nr;
        }
    }
    // singular values of the 3x3 overlap matrix: cos of principal angles
    let mut overlap_fro = 0.0;
    for v in basis.iter() {
        for f in &fs {
            let c: Complex64 = f.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
            overlap_fro += c.norm_sqr();
        }
    }
    println!("sum cos^2 principal angles = {overlap_fro:.5} (3 = aligned)");

    // Error stratified by truth + P/R at threshold 1-h with 20% outliers
    let mut rng2 = ChaCha8Rng::seed_from_u64(7);
    let ds = generate_geometric_dataset(n, h, 0.2, &mut rng2).unwrap();
    let model2 = intrinsic_model(&ds.matrix).unwrap();
    let q = all_pairs_estimate_quality(&model2, &ds.frames);
    println!("with outliers: median={:.5}", q.median_abs_error);
    let labeling = classify_edges(&model2, &ds.edge_pairs(), 1.0 - h, Some(&ds.frames));
    println!("precision={:?} recall={:?}", labeling.precision, labeling.recall);

    // stratify clean-run error by truth bucket
    let model = &model2;
    let mut buckets = vec![Vec::new(); 4]; // truth in [-1,0),[0,.5),[.5,.75),[.75,1]
    for i in 0..n {
        for j in (i + 1)..n {
            let truth = ds.frames[i].e3.dot(&ds.frames[j].e3);
            let est = estimate_viewing_inner(model, i, j);
            let b = if truth < 0.0 { 0 } else if truth < 0.5 { 1 } else if truth < 0.75 { 2 } else { 3 };
            buckets[b].push((est - truth).abs());
        }
    }
    for (b, v) in buckets.iter_mut().enumerate() {
        v.sort_by(|a, c| a.partial_cmp(c).unwrap());
        println!("bucket {b}: median={:.5} n={}", v[v.len() / 2], v.len());
    }
}
