use ndarray::Array2;

use super::state::DensityMatrix;
use crate::linalg::C64;
use crate::{Error, Result};

/// Partial trace of a matrix over the factors not listed in `keep`.
///
/// `dims` lists the tensor factors with the first one most significant;
/// `keep` may be given in any order but the result keeps the original factor
/// order.
pub fn partial_trace_matrix(rho: &Array2<C64>, dims: &[usize], keep: &[usize]) -> Result<Array2<C64>> {
    let total: usize = dims.iter().product();
    if rho.nrows() != total || rho.ncols() != total {
        return Err(Error::DimensionMismatch { expected: total, got: rho.nrows() });
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!("factor {bad} out of range for {} factors", dims.len())));
    }
    // stride of each factor in the flat index
    let mut strides = vec![1usize; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let kept: Vec<usize> = (0..dims.len()).filter(|f| keep.contains(f)).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|f| !keep.contains(f)).collect();
    let offsets = |factors: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &f in factors {
            let stride = strides[f];
            out = out
                .iter()
                .flat_map(|&base| (0..dims[f]).map(move |d| base + d * stride))
                .collect();
        }
        out
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);

    let dk = kept_off.len();
    let mut out = Array2::zeros((dk, dk));
    for (r, &ro) in kept_off.iter().enumerate() {
        for (c, &co) in kept_off.iter().enumerate() {
            out[[r, c]] = traced_off.iter().map(|&t| rho[[ro + t, co + t]]).sum();
        }
    }
    Ok(out)
}

/// `Tr_{not keep} ρ`.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_matrix(rho.matrix(), dims, keep)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::symmetry::bell_basis;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        let g = Array2::from_shape_fn((dim, dim), |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = g.dot(&crate::linalg::dagger(&g));
        let tr = crate::linalg::trace(&m);
        DensityMatrix::new(m / tr).unwrap()
    }

    #[test]
    fn product_state_reduces_to_factor() {
        let a = DensityMatrix::new(array![[c(0.7), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), c(0.3)]]).unwrap();
        let b = DensityMatrix::new(Array2::from_diag(&array![c(0.2), c(0.5), c(0.3)])).unwrap();
        let ab = a.kron(&b);
        let ra = partial_trace(&ab, &[2, 3], &[0]).unwrap();
        assert!(max_abs_diff(ra.matrix(), a.matrix()) < 1e-14);
        let rb = partial_trace(&ab, &[2, 3], &[1]).unwrap();
        assert!(max_abs_diff(rb.matrix(), b.matrix()) < 1e-14);
    }

    #[test]
    fn bell_state_reduces_to_identity_half() {
        let e1 = DensityMatrix::from_pure(&bell_basis().vector(0)).unwrap();
        let r = partial_trace(&e1, &[2, 2], &[0]).unwrap();
        assert!(max_abs_diff(r.matrix(), &(Array2::eye(2) * c(0.5))) < 1e-15);
    }

    #[test]
    fn random_state_trace_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let rho = random_density(6, &mut rng);
            for keep in [[0usize], [1]] {
                let r = partial_trace(&rho, &[2, 3], &keep).unwrap();
                assert!((r.trace() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn keep_everything_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(8, &mut rng);
        let r = partial_trace(&rho, &[2, 2, 2], &[2, 0, 1]).unwrap();
        assert!(max_abs_diff(r.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn inconsistent_dims() {
        let rho = DensityMatrix::maximally_mixed(6);
        assert!(partial_trace(&rho, &[2, 2], &[0]).is_err());
        assert!(partial_trace(&rho, &[2, 3], &[2]).is_err());
    }
}
