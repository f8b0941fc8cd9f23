//! Linear algebra over finite fields.

pub mod field;
pub mod matrix;
pub mod poly;

pub use field::{is_prime, Field, FieldDescriptor, FieldExt, PrimeField};
pub use matrix::{Matrix, QuotientMap, Subspace};
pub use poly::Poly;

use crate::error::{Error, Result};
use rand::Rng as RandRng;

/// Echelon form, pivot columns and rank.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>, usize) {
    let (r, p) = m.rref();
    let rank = p.len();
    (r, p, rank)
}

pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    m.kernel()
}

pub fn quotient_basis<F: Field>(ambient_dim: usize, sub: &Subspace<F>) -> Result<QuotientMap<F>> {
    if sub.ambient_dim() != ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in dimension {}, not {}",
            sub.ambient_dim(),
            ambient_dim
        )));
    }
    Ok(QuotientMap::new(sub))
}

pub fn charpoly<F: Field>(m: &Matrix<F>) -> Result<Poly<F>> {
    m.charpoly()
}

pub fn factor_poly<F: Field, R: RandRng + ?Sized>(f: &Poly<F>, rng: &mut R) -> Result<Vec<(Poly<F>, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.factor_with_rng(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let (r, p, k) = rref(&Matrix::zeros(f(5), 0, 0));
        assert_eq!((r.rows(), p.len(), k), (0, 0, 0));
        let id = Matrix::identity(f(5), 3);
        assert_eq!(rref(&id), (id.clone(), vec![0, 1, 2], 3));
        let m = Matrix::from_int_rows(f(7), &[vec![2, 4], vec![1, 2]]);
        let (r, p, k) = rref(&m);
        assert_eq!(r, Matrix::from_int_rows(f(7), &[vec![1, 2], vec![0, 0]]));
        assert_eq!((p, k), (vec![0], 1));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::zeros(f(3), 2, 2)).dim(), 2);
        assert_eq!(kernel(&Matrix::identity(f(3), 2)).dim(), 0);
        let k = kernel(&Matrix::from_int_rows(f(2), &[vec![1, 1], vec![1, 1]]));
        // brute force over F_2^2
        let sols: Vec<Vec<u64>> = (0..4u64)
            .map(|v| vec![v & 1, v >> 1])
            .filter(|v| (v[0] + v[1]) % 2 == 0)
            .collect();
        assert_eq!(sols.len(), 1 << k.dim());
        assert!(sols.iter().all(|v| k.contains(v)));
        assert_eq!(k.basis().row(0), &[1, 1]);
    }

    #[test]
    fn quotient_examples() {
        let full = Subspace::full(f(5), 3);
        assert_eq!(quotient_basis(3, &full).unwrap().dim(), 0);
        let zero = Subspace::zero(f(5), 3);
        assert!(quotient_basis(3, &zero).unwrap().project.is_identity());
        let e1 = Subspace::from_vectors(f(5), 3, vec![vec![1, 0, 0]]);
        let q = quotient_basis(3, &e1).unwrap();
        assert_eq!(q.project(&[1, 0, 0]), vec![0, 0]);
        assert_eq!(q.project.rank(), 2);
        assert!(quotient_basis(4, &e1).is_err());
    }

    #[test]
    fn charpoly_examples() {
        for n in 0..5 {
            let one = Poly::new(f(5), vec![4, 1]);
            let mut expect = Poly::one(f(5));
            for _ in 0..n {
                expect = expect.mul(&one);
            }
            assert_eq!(charpoly(&Matrix::identity(f(5), n)).unwrap(), expect);
            let mut xn = vec![0; n + 1];
            xn[n] = 1;
            assert_eq!(charpoly(&Matrix::zeros(f(5), n, n)).unwrap(), Poly::new(f(5), xn));
        }
        let comp = Matrix::from_int_rows(f(2), &[vec![0, 1], vec![1, 1]]);
        assert_eq!(charpoly(&comp).unwrap(), Poly::new(f(2), vec![1, 1, 1]));
        assert!(charpoly(&Matrix::zeros(f(2), 2, 3)).is_err());
    }

    #[test]
    fn factor_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = factor_poly(&Poly::new(f(5), vec![4, 0, 1]), &mut rng).unwrap();
        assert_eq!(g, vec![(Poly::new(f(5), vec![1, 1]), 1), (Poly::new(f(5), vec![4, 1]), 1)]);
        let g = factor_poly(&Poly::new(f(3), vec![1, 0, 1]), &mut rng).unwrap();
        assert_eq!(g.len(), 1);
        assert!((0..3).all(|x| Poly::new(f(3), vec![1, 0, 1]).eval(x) != 0));
        let g = factor_poly(&Poly::new(f(3), vec![0, 2, 0, 1]), &mut rng).unwrap();
        assert_eq!(g.iter().map(|(h, _)| h.coeff(0)).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(factor_poly(&Poly::zero(f(3)), &mut rng), Err(Error::ZeroPolynomial));
    }

    fn arb(p: u64, maxr: usize, maxc: usize) -> impl Strategy<Value = Matrix<PrimeField>> {
        (0..=maxr, 0..=maxc).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |d| Matrix::from_data(f(p), r, c, d))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn rref_idempotent_and_rank_nullity(p in prop::sample::select(vec![2u64, 3, 5, 13]), seed in any::<u64>(), r in 0usize..12, c in 0usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = Matrix::from_fn(f(p), r, c, |_, _| rng.gen_range(0..p));
            let (e, piv, rank) = rref(&m);
            prop_assert_eq!(rref(&e), (e.clone(), piv.clone(), rank));
            prop_assert!(piv.windows(2).all(|w| w[0] < w[1]));
            let k = kernel(&m);
            prop_assert_eq!(rank + k.dim(), c);
            for i in 0..k.dim() {
                prop_assert!(m.mul_vec(k.basis().row(i)).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn cayley_hamilton_large(p in prop::sample::select(vec![2u64, 3, 5, 13]), n in 1usize..=30, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = Matrix::from_fn(f(p), n, n, |_, _| rng.gen_range(0..p));
            let cp = charpoly(&m).unwrap();
            prop_assert_eq!(cp.lead(), 1);
            prop_assert!(m.eval_poly(&cp).is_zero());
        }

        #[test]
        fn quotient_projection(m in arb(5, 6, 8)) {
            let n = m.cols();
            let sub = Subspace::from_rows(m);
            let q = quotient_basis(n, &sub).unwrap();
            prop_assert_eq!(q.dim() + sub.dim(), n);
            prop_assert_eq!(q.project.rank(), q.dim());
            for i in 0..sub.dim() {
                prop_assert!(q.project(sub.basis().row(i)).iter().all(|&x| x == 0));
            }
        }
    }
}
