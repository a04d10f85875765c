use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};

/// Top principal axes of a point cloud.
#[derive(Debug, Clone)]
pub struct Pca {
    pub mean: Vec<f64>,
    /// Unit axes, strongest first.
    pub components: Vec<Vec<f64>>,
    pub variances: Vec<f64>,
}

/// Fits the top `k` axes from the sample covariance. Each axis is signed so
/// that its largest-magnitude coordinate is positive.
pub fn fit_pca(points: &[Vec<f64>], k: usize) -> Result<Pca> {
    let m = points.len();
    if m < 3 {
        return Err(Error::InvalidParameter("PCA needs at least 3 points"));
    }
    let dim = points[0].len();
    if dim < k.max(2) {
        return Err(Error::InvalidParameter("PCA dimension too small"));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::SizeMismatch { expected: dim, found: bad.len() });
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut mean = alloc::vec![0.0; dim];
    for p in points {
        for (a, v) in mean.iter_mut().zip(p) {
            *a += v;
        }
    }
    mean.iter_mut().for_each(|a| *a /= m as f64);

    let mut cov = Matrix::zeros(dim, dim);
    let mut centered = alloc::vec![0.0; dim];
    for p in points {
        for ((c, v), mu) in centered.iter_mut().zip(p).zip(&mean) {
            *c = v - mu;
        }
        for i in 0..dim {
            let ci = centered[i];
            if ci == 0.0 {
                continue;
            }
            let row = cov.row_mut(i);
            for j in i..dim {
                row[j] += ci * centered[j];
            }
        }
    }
    let scale = 1.0 / (m - 1) as f64;
    for i in 0..dim {
        for j in i..dim {
            let v = cov[(i, j)] * scale;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    let eig = symmetric_eigen(&cov);
    let mut components = Vec::with_capacity(k);
    for c in 0..k {
        let mut axis = eig.vectors.column(c);
        let lead = axis
            .iter()
            .enumerate()
            .fold(0, |best, (i, v)| if v.abs() > axis[best].abs() { i } else { best });
        if axis[lead] < 0.0 {
            axis.iter_mut().for_each(|v| *v = -*v);
        }
        components.push(axis);
    }
    let variances = eig.values[..k].iter().map(|v| v.max(0.0)).collect();
    Ok(Pca { mean, components, variances })
}

impl Pca {
    pub fn project(&self, point: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|axis| axis.iter().zip(point).zip(&self.mean).map(|((a, v), mu)| a * (v - mu)).sum())
            .collect()
    }
}

/// Mean-centered projection onto the top two principal axes.
pub fn pca_2d(points: &[Vec<f64>]) -> Result<Vec<[f64; 2]>> {
    let pca = fit_pca(points, 2)?;
    Ok(points
        .iter()
        .map(|p| {
            let c = pca.project(p);
            [c[0], c[1]]
        })
        .collect())
}
