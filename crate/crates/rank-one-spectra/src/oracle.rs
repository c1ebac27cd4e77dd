//! Brute-force verification backend: dense eigensolution, eigenvalue
//! clustering and rank-based multiplicity, independent of the
//! characteristic-function machinery it is used to check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, singular_values, CMatrix, EigOptions};

/// Dense problems above this size are refused; large scans belong to the
/// localization module, not the oracle.
pub const DIMENSION_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub center: Complex64,
    pub size: usize,
    pub radius: f64,
}

#[derive(Debug, Clone)]
pub struct EigenReport {
    /// All eigenvalues, dimension many.
    pub values: Vec<Complex64>,
    /// Single-linkage clusters at the requested tolerance.
    pub clusters: Vec<Cluster>,
    /// Relative Schur residual of the factorization that produced `values`.
    pub backward_error: f64,
}

/// Every eigenvalue of `m` by Hessenberg reduction and shifted QR, plus
/// single-linkage clusters at `cluster_tol`.
pub fn dense_eigenvalues(m: &CMatrix, cluster_tol: f64) -> Result<EigenReport> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let n = m.nrows();
    if n > DIMENSION_CAP {
        return Err(Error::OracleDimension {
            dim: n,
            cap: DIMENSION_CAP,
        });
    }
    let eig = eigenvalues(m, EigOptions::default())?;
    let clusters = cluster(&eig.values, cluster_tol);
    Ok(EigenReport {
        values: eig.values,
        clusters,
        backward_error: eig.backward_error.unwrap_or(f64::NAN),
    })
}

/// Single-linkage clustering at radius `tol`; cluster centers are means.
/// A tolerance larger than the separation merges everything, by design.
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<Cluster> {
    assert!(tol > 0.0, "cluster tolerance must be positive");
    let k = values.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..k {
        for j in i + 1..k {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    let mut out: Vec<Cluster> = groups
        .into_iter()
        .map(|members| {
            let size = members.len();
            let center = members.iter().map(|&i| values[i]).sum::<Complex64>()
                / Complex64::new(size as f64, 0.0);
            let radius = members
                .iter()
                .map(|&i| (values[i] - center).norm())
                .fold(0.0, f64::max);
            Cluster {
                center,
                size,
                radius,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.center.re, a.center.im)
            .partial_cmp(&(b.center.re, b.center.im))
            .unwrap()
    });
    out
}

/// Dimension of the root subspace at `z`: `n − rank((M − z)^p)` stabilized
/// over increasing `p ≤ max_power`. Numerical rank counts singular values
/// above `tol·‖M − z‖₂^p`.
pub fn rank_multiplicity(m: &CMatrix, z: Complex64, max_power: usize, tol: f64) -> Result<usize> {
    assert!(m.is_square());
    let n = m.nrows();
    if n > DIMENSION_CAP {
        return Err(Error::OracleDimension {
            dim: n,
            cap: DIMENSION_CAP,
        });
    }
    if max_power == 0 {
        return Err(Error::RankNotStabilized { max_power });
    }
    let shifted = m.shifted(z);
    let base_norm = shifted.norm2();
    if base_norm == 0.0 {
        return Ok(n); // M = z·Id
    }
    let mut power = shifted.clone();
    let mut prev_dim: Option<usize> = None;
    for p in 1..=max_power {
        let s = singular_values(&power);
        let thr = tol * base_norm.powi(p as i32);
        let rank = s.iter().filter(|&&sv| sv > thr).count();
        let dim = n - rank;
        if let Some(d) = prev_dim {
            if d == dim {
                return Ok(dim);
            }
        }
        prev_dim = Some(dim);
        if p < max_power {
            power = power.matmul(&shifted);
        }
    }
    Err(Error::RankNotStabilized { max_power })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn nilpotent_two_by_two() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(2.0, 0.0);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(-4.0, 0.0);
        m[(1, 1)] = c(-2.0, 0.0);
        let rep = dense_eigenvalues(&m, 1e-8).unwrap();
        for v in &rep.values {
            assert!(v.norm() <= 1e-12);
        }
        assert_eq!(rep.clusters.len(), 1);
        assert_eq!(rep.clusters[0].size, 2);
        assert_eq!(rank_multiplicity(&m, c(0.0, 0.0), 4, 1e-10).unwrap(), 2);
    }

    #[test]
    fn diagonal_spectrum_and_rank() {
        let mut m = CMatrix::zeros(3, 3);
        for (i, l) in [1.0, 2.0, 3.0].iter().enumerate() {
            m[(i, i)] = c(*l, 0.0);
        }
        let rep = dense_eigenvalues(&m, 1e-8).unwrap();
        assert_eq!(rep.clusters.len(), 3);
        assert!(rep.clusters.iter().all(|cl| cl.size == 1));
        assert_eq!(rank_multiplicity(&m, c(2.0, 0.0), 3, 1e-10).unwrap(), 1);
    }

    #[test]
    fn double_eigenvalue_at_i_is_one_cluster() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(-1.0, 0.0);
        m[(0, 1)] = c(-1.0, 0.0);
        m[(1, 0)] = c(0.0, 2.0);
        m[(1, 1)] = c(1.0, 2.0);
        let rep = dense_eigenvalues(&m, 1e-4).unwrap();
        assert_eq!(rep.clusters.len(), 1);
        let cl = &rep.clusters[0];
        assert_eq!(cl.size, 2);
        assert!((cl.center - c(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn cluster_tolerance_behaviour() {
        let vals = [c(0.0, 0.0), c(1e-9, 0.0), c(5.0, 0.0)];
        let cls = cluster(&vals, 1e-6);
        assert_eq!(cls.len(), 2);
        assert_eq!(cls[0].size, 2);
        assert_eq!(cls[1].size, 1);

        // documented: an oversized tolerance merges everything
        let all = cluster(&[c(1.0, 0.0), c(2.0, 0.0)], 10.0);
        assert_eq!(all.len(), 1);
        assert!((all[0].center - c(1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn oversized_matrix_is_refused() {
        let m = CMatrix::zeros(DIMENSION_CAP + 1, DIMENSION_CAP + 1);
        assert!(matches!(
            dense_eigenvalues(&m, 1e-8),
            Err(Error::OracleDimension { .. })
        ));
    }
}
