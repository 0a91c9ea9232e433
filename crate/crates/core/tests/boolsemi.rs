use cobweave_core::boolsemi::BoolMat;
use proptest::prelude::*;

fn mat(rows: usize, cols: usize) -> impl Strategy<Value = BoolMat> {
    proptest::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| BoolMat::from_fn(rows, cols, |i, j| bits[i * cols + j]))
}

fn dims() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1..6usize, 1..6usize, 1..6usize, 1..6usize)
}

proptest! {
    #[test]
    fn join_is_idempotent((r, c) in (1..8usize, 1..8usize), seed in any::<u64>()) {
        let m = BoolMat::from_fn(r, c, |i, j| (seed >> ((i * c + j) % 64)) & 1 == 1);
        prop_assert_eq!(m.join(&m).unwrap(), m);
    }

    #[test]
    fn mul_is_associative((a, b, c) in dims().prop_flat_map(|(m, n, p, q)| (mat(m, n), mat(n, p), mat(p, q)))) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kron_is_functorial(
        (a, b, c, d) in (1..4usize, 1..4usize, 1..4usize, 1..4usize, 1..4usize, 1..4usize)
            .prop_flat_map(|(m, n, p, q, r, s)| (mat(m, n), mat(p, q), mat(n, r), mat(q, s)))
    ) {
        let lhs = a.kron(&b).unwrap().mul(&c.kron(&d).unwrap()).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transpose_reverses_products((a, b) in (1..6usize, 1..6usize, 1..6usize).prop_flat_map(|(m, n, p)| (mat(m, n), mat(n, p)))) {
        prop_assert_eq!(a.mul(&b).unwrap().transpose(), b.transpose().mul(&a.transpose()).unwrap());
    }

    #[test]
    fn identity_is_neutral(a in (1..6usize, 1..6usize).prop_flat_map(|(m, n)| mat(m, n))) {
        prop_assert_eq!(BoolMat::identity(a.rows()).mul(&a).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&BoolMat::identity(a.cols())).unwrap(), a);
    }
}

#[test]
fn mul_is_associative_exhaustively_on_2x2() {
    let all: Vec<BoolMat> = (0..16u32).map(|m| BoolMat::from_fn(2, 2, |i, j| m >> (2 * i + j) & 1 == 1)).collect();
    for a in &all {
        for b in &all {
            let ab = a.mul(b).unwrap();
            for c in &all {
                assert_eq!(ab.mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn mismatched_shapes_are_rejected() {
    assert!(BoolMat::zeros(2, 3).mul(&BoolMat::zeros(2, 3)).is_err());
    assert!(BoolMat::zeros(2, 3).join(&BoolMat::zeros(3, 2)).is_err());
}
