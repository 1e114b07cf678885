use proptest::prelude::*;

use secrecy_core::bcregion::pareto_front;
use secrecy_core::matcore::{gen_eig_pencil, logdet, lu_det, psd_sqrt, sym_eig, GeneralMatrix, SymMatrix};
use secrecy_core::wiretap::{secrecy_capacity, WiretapScenario};
use secrecy_core::RatePair;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = GeneralMatrix> {
    prop::collection::vec(-3.0..3.0_f64, rows * cols)
        .prop_map(move |v| GeneralMatrix::from_vec(rows, cols, v).unwrap())
}

fn square(max: usize) -> impl Strategy<Value = GeneralMatrix> {
    (1..=max).prop_flat_map(|t| matrix(t, t))
}

/// `A·Aᵀ + floor·I` for a random `A` of the given size.
fn psd(t: usize, floor: f64) -> impl Strategy<Value = SymMatrix> {
    matrix(t, t).prop_map(move |a| {
        a.transpose()
            .gram()
            .add(&SymMatrix::identity(t).scale(floor))
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigen_decomposition_recomposes(a in square(6)) {
        let s = a.symmetrize().unwrap();
        let eig = sym_eig(&s).unwrap();
        let back = eig.recompose(|l| l);
        prop_assert!(back.sub(&s).unwrap().frobenius_norm() <= 1e-10 * s.frobenius_norm().max(1.0));
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let q = &eig.vectors;
        let qtq = q.transpose().matmul(q).unwrap();
        prop_assert!(qtq.sub(&GeneralMatrix::identity(s.dim())).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn pencil_spectrum_satisfies_eigen_equation(
        (a, b) in (1..=4usize).prop_flat_map(|t| (psd(t, 1.0), psd(t, 1.0)))
    ) {
        let sp = gen_eig_pencil(&a, &b).unwrap();
        for (j, phi) in sp.phi.iter().enumerate() {
            let g = GeneralMatrix::from_columns(a.dim(), &[sp.g.column(j)]);
            let lhs = a.matmul(&g).unwrap();
            let rhs = b.matmul(&g).unwrap().scale(*phi);
            prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-8 * lhs.max_abs().max(1.0));
        }
        prop_assert_eq!(sp.rho, sp.phi.iter().filter(|&&p| p > 1.0).count());
    }

    #[test]
    fn swapping_receivers_inverts_the_spectrum(
        (hl, he, s) in (1..=3usize, 1..=3usize, 1..=3usize)
            .prop_flat_map(|(t, rl, re)| (matrix(rl, t), matrix(re, t), psd(t, 0.1)))
    ) {
        let sc = WiretapScenario::new(hl, he, s).unwrap();
        let fwd = secrecy_capacity(&sc).unwrap();
        let rev = secrecy_capacity(&sc.swapped()).unwrap();
        let total: f64 = 0.5 * fwd.spectrum.phi.iter().map(|p| p.ln().abs()).sum::<f64>();
        prop_assert!((fwd.value_nats + rev.value_nats - total).abs() <= 1e-10 * total.max(1.0));
        let mut inv: Vec<f64> = rev.spectrum.phi.iter().map(|p| 1.0 / p).collect();
        inv.sort_by(|x, y| y.total_cmp(x));
        for (p, q) in fwd.spectrum.phi.iter().zip(&inv) {
            prop_assert!((p - q).abs() <= 1e-8 * p.max(1.0));
        }
    }

    #[test]
    fn determinant_lemma(
        (h, b) in (1..=5usize).prop_flat_map(|t| (matrix(t, t), psd(t, 0.0)))
    ) {
        let t = h.rows();
        let lhs = logdet(&b.sandwich(&h).unwrap().add_identity()).unwrap().exp();
        let rhs = lu_det(&h.gram().matmul(b.as_general()).unwrap().add(&GeneralMatrix::identity(t)).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs);
    }

    #[test]
    fn square_root_of_projector_is_itself(v in matrix(4, 2)) {
        let eig = sym_eig(&v.transpose().gram()).unwrap();
        prop_assume!(eig.values[1] > 1e-6 * eig.values[0]);
        let basis = eig.vectors.select_columns(&[0, 1]);
        let p = SymMatrix::identity(2).sandwich(&basis).unwrap();
        let root = psd_sqrt(&p).unwrap();
        // roundoff eigenvalues ~1e-16 of the null space come back as ~1e-8
        prop_assert!(root.sub(&p).unwrap().frobenius_norm() < 1e-6);
    }

    #[test]
    fn pareto_front_is_a_staircase(pts in prop::collection::vec((0.0..5.0_f64, 0.0..5.0_f64), 1..60)) {
        let pts: Vec<RatePair> = pts.into_iter().map(|(a, b)| RatePair::new(a, b)).collect();
        let front = pareto_front(&pts);
        for w in front.windows(2) {
            prop_assert!(w[0].r1 < w[1].r1 && w[0].r2 > w[1].r2);
        }
        for p in &pts {
            prop_assert!(front.iter().any(|q| q.covers(p, 0.0)));
        }
    }
}
