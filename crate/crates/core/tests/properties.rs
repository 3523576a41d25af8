//! Invariants checked over randomly generated inputs.

use chanent::channel::{check_unital, classical_embed, is_ucp, Channel, DensityOperator};
use chanent::choi::{matrix_elements, reconstruct, representative_operator, verify_properties, KRAUS_CUTOFF};
use chanent::decomposition::{
    binary_f, channel_entropy_classical, minimize_f_closed_form, BinaryFamily, DeterministicMap,
};
use chanent::entropy::{eigen_entropy, mixing_entropy};
use chanent::kernel::{hermitian_eig, kron, partial_trace_second, ComplexMatrix, C64};
use chanent::sampling::{
    random_density, random_hermitian, random_matrix, random_stochastic, random_ucp_channel, random_unitary,
};
use chanent::StochasticMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn apply_gap(a: &Channel, b: &Channel, x: &ComplexMatrix) -> f64 {
    a.apply(x).unwrap().max_abs_diff(&b.apply(x).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs_and_is_orthonormal(seed in any::<u64>(), n in 1usize..=4) {
        let h = random_hermitian(&mut rng(seed), n);
        let spec = hermitian_eig(&h).unwrap();
        prop_assert!(spec.reconstruct().max_abs_diff(&h) < 1e-9);
        prop_assert!(spec.values.windows(2).all(|w| w[0] >= w[1]));
        let v = &spec.vectors;
        prop_assert!((&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
    }

    #[test]
    fn kron_trace_and_mixed_product(seed in any::<u64>(), na in 1usize..=3, nb in 1usize..=3) {
        let mut r = rng(seed);
        let (a, c) = (random_matrix(&mut r, na), random_matrix(&mut r, na));
        let (b, d) = (random_matrix(&mut r, nb), random_matrix(&mut r, nb));
        let ab = kron(&a, &b).unwrap();
        prop_assert!((ab.trace() - a.trace() * b.trace()).norm() < 1e-10);
        let lhs = &ab * &kron(&c, &d).unwrap();
        let rhs = kron(&(&a * &c), &(&b * &d)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let (x, y) = (random_matrix(&mut r, n), random_matrix(&mut r, n));
        let pt = partial_trace_second(&kron(&x, &y).unwrap(), n).unwrap();
        prop_assert!(pt.max_abs_diff(&x.scale(y.trace())) < 1e-10);
    }

    #[test]
    fn representative_operator_is_linear(seed in any::<u64>(), w in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let t = random_ucp_channel(&mut r, 2, 2).unwrap();
        let s = classical_embed(random_stochastic(&mut r, 2));
        let mix = Channel::combine(&[(w, &t), (1.0 - w, &s)]).unwrap();
        let lhs = representative_operator(&mix).unwrap();
        let rt = representative_operator(&t).unwrap();
        let rs = representative_operator(&s).unwrap();
        let rhs = &rt.matrix().scale_real(w) + &rs.matrix().scale_real(1.0 - w);
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn reconstruction_agrees_on_random_inputs(seed in any::<u64>(), n in 2usize..=3, rank in 1usize..=4) {
        let mut r = rng(seed);
        let t = random_ucp_channel(&mut r, n, rank).unwrap();
        let back = reconstruct(&representative_operator(&t).unwrap()).unwrap();
        let x = random_matrix(&mut r, n);
        prop_assert!(apply_gap(&t, &back, &x) < 1e-10);
    }

    #[test]
    fn storage_forms_agree(seed in any::<u64>(), n in 1usize..=3, rank in 1usize..=3) {
        let mut r = rng(seed);
        let t = random_ucp_channel(&mut r, n, rank).unwrap();
        let sup = t.to_superoperator().unwrap();
        let kraus = sup.to_kraus(KRAUS_CUTOFF).unwrap();
        let x = random_matrix(&mut r, n);
        prop_assert!(apply_gap(&t, &sup, &x) < 1e-10);
        prop_assert!(apply_gap(&t, &kraus, &x) < 1e-9);
        if let chanent::ChannelForm::Kraus(ops) = kraus.form() {
            prop_assert!(ops.len() <= rank);
        }
    }

    #[test]
    fn random_ucp_maps_satisfy_all_properties(seed in any::<u64>(), n in 1usize..=3, rank in 1usize..=3) {
        let t = random_ucp_channel(&mut rng(seed), n, rank).unwrap();
        prop_assert!(is_ucp(&t).unwrap());
        let report = verify_properties(&t).unwrap();
        prop_assert!(report.all(), "{:?}", report);
        prop_assert!(report.min_quadratic_form >= -1e-9);
    }

    #[test]
    fn sampled_quadratic_form_is_non_negative(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let t = random_ucp_channel(&mut r, n, 2).unwrap();
        let p = matrix_elements(&t).unwrap();
        for _ in 0..20 {
            let a: Vec<C64> = chanent::sampling::random_vector(&mut r, n);
            let b: Vec<C64> = chanent::sampling::random_vector(&mut r, n);
            let q = p.quadratic_form(&a, &b);
            prop_assert!(q.re >= -1e-9 && q.im.abs() < 1e-9, "{}", q);
        }
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, n).unwrap();
        let u = random_unitary(&mut r, n);
        let rotated = &(&u * rho.matrix()) * &u.adjoint();
        let a = eigen_entropy(rho.matrix()).unwrap().nats();
        let b = eigen_entropy(&rotated).unwrap().nats();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!(a >= -1e-15 && a <= (n as f64).ln() + 1e-12);
    }

    #[test]
    fn entropy_is_concave(seed in any::<u64>(), n in 1usize..=4, w in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, n).unwrap();
        let sigma = random_density(&mut r, n).unwrap();
        let mix = &rho.matrix().scale_real(w) + &sigma.matrix().scale_real(1.0 - w);
        let lhs = eigen_entropy(&mix).unwrap().nats();
        let rhs = w * eigen_entropy(rho.matrix()).unwrap().nats()
            + (1.0 - w) * eigen_entropy(sigma.matrix()).unwrap().nats();
        prop_assert!(lhs >= rhs - 1e-10);
    }

    #[test]
    fn classical_embedding_is_ucp(seed in any::<u64>(), n in 1usize..=4) {
        let t = classical_embed(random_stochastic(&mut rng(seed), n));
        prop_assert!(check_unital(&t).unwrap());
        prop_assert!(is_ucp(&t).unwrap());
    }

    #[test]
    fn witness_is_a_valid_decomposition(seed in any::<u64>(), n in 2usize..=3) {
        let s = random_stochastic(&mut rng(seed), n);
        let report = channel_entropy_classical(&s).unwrap();
        let w = &report.witness;
        prop_assert!(w.weights.iter().all(|&x| x >= 1e-12));
        prop_assert!((w.total_weight() - 1.0).abs() < 1e-10);
        let mix = w.mixture();
        for (i, row) in mix.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert!((x - s.get(i, j)).abs() < 1e-10);
            }
        }
        prop_assert!((w.entropy().nats() - report.h_channel.nats()).abs() < 1e-12);
        prop_assert!(report.gap >= -1e-9);
        // no decomposition is cheaper than the deterministic row-wise bound
        let row_max = (0..n).map(|i| mixing_entropy(s.rows()[i].iter().copied())).fold(0.0, f64::max);
        prop_assert!(report.h_channel.nats() >= row_max - 1e-10);
    }

    #[test]
    fn vertex_minimum_matches_binary_family(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        let s = StochasticMatrix::binary(p, q).unwrap();
        let h = channel_entropy_classical(&s).unwrap().h_channel.nats();
        let (_, closed) = BinaryFamily::new(p, q).minimum();
        prop_assert!((h - closed).abs() < 1e-10);
    }

    #[test]
    fn balanced_pairs_match_the_closed_form(p in 0.0f64..=1.0) {
        let q = 1.0 - p;
        let h = channel_entropy_classical(&StochasticMatrix::binary(p, q).unwrap()).unwrap().h_channel.nats();
        let closed = minimize_f_closed_form(p, q).unwrap().nats();
        prop_assert!((h - closed).abs() < 1e-10);
        let direct = mixing_entropy([p, q]);
        prop_assert!((closed - direct).abs() < 1e-12);
    }

    #[test]
    fn f_is_maximal_at_the_critical_point(p in 0.05f64..=0.95, x in 0.0f64..=1.0) {
        let q = 1.0 - p;
        let (hi, lo) = if p >= q { (p, q) } else { (q, p) };
        let x = x * lo;
        prop_assert!(binary_f(hi, lo, x) <= binary_f(hi, lo, hi * lo) + 1e-12);
        prop_assert!(binary_f(hi, lo, x) >= binary_f(hi, lo, 0.0) - 1e-12);
    }

    #[test]
    fn deterministic_maps_have_zero_entropy(n in 1usize..=3, code in any::<u32>()) {
        let assignment: Vec<usize> = (0..n).map(|i| (code as usize / n.pow(i as u32)) % n).collect();
        let f = DeterministicMap::new(assignment).unwrap();
        let r = channel_entropy_classical(&f.to_stochastic()).unwrap();
        prop_assert_eq!(r.h_channel.nats(), 0.0);
        prop_assert!(r.d_choi.nats().abs() < 1e-12);
        prop_assert_eq!(r.witness.components, vec![f]);
    }

    #[test]
    fn density_operators_have_unit_trace(seed in any::<u64>(), n in 1usize..=4) {
        let rho: DensityOperator = random_density(&mut rng(seed), n).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}
