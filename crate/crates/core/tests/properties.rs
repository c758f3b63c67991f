use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use permlat::butler::{
    coinvariants_upstairs, component_image, diagram_of, invariants_in_blocks, lattice_of,
    lattice_route, pred_coinvariants_lattice, pred_coinvariants_perm, pred_invariants_perm, pred_perm, perm_upstairs,
    random_diagram, round_trip, RandomDiagramConfig,
};
use permlat::fp_modules::{fp_decompose, fp_is_permutation, fp_iso, jordan_type, FpModule};
use permlat::glattice::{
    cyclic_model, cyclic_type, fixed_points, is_perm_cyclic, GLattice, HellerReinerKind, Verdict,
};
use permlat::group::{block_indices, BlockIndex, GroupSpec};
use permlat::linalg::{determinant, is_saturated, quotient, saturate, snf, FpMatrix, Subspace};
use permlat::IntMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-bound..=bound, rows * cols)
        .prop_map(move |v| IntMatrix::from_vec(rows, cols, v.into_iter().map(BigInt::from).collect()).unwrap())
}

fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            m.add_row_multiple(i, j, &BigInt::from(rng.gen_range(-2i64..=2)));
        }
    }
    m
}

fn fp_invertible(rng: &mut ChaCha8Rng, p: u64, n: usize) -> FpMatrix {
    loop {
        let m = FpMatrix::from_fn(p, n, n, |_, _| rng.gen_range(0..p));
        if m.is_invertible() {
            return m;
        }
    }
}

fn cyclic_sum(g: &GroupSpec, counts: (usize, usize, usize)) -> GLattice {
    let mut parts = Vec::new();
    for (k, n) in [(HellerReinerKind::Trivial, counts.0), (HellerReinerKind::Free, counts.1), (HellerReinerKind::Augmentation, counts.2)] {
        for _ in 0..n {
            parts.push(cyclic_model(g, k).unwrap());
        }
    }
    GLattice::direct_sum_all(g, &parts).unwrap()
}

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snf_divisors_survive_unimodular_change(m in int_matrix(3, 4, 9), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (unimodular(&mut rng, 3), unimodular(&mut rng, 4));
        let moved = &(&a * &m) * &b;
        prop_assert_eq!(snf(&m).divisors, snf(&moved).divisors);
    }

    #[test]
    fn torsion_orders_multiply_to_determinant(m in int_matrix(3, 3, 7)) {
        let d = determinant(&m);
        prop_assume!(!d.is_zero());
        let q = quotient(3, &m);
        let prod = q.torsion.iter().fold(BigInt::from(1), |acc, t| acc * t);
        prop_assert_eq!(q.free_rank, 0);
        prop_assert_eq!(prod, d.abs());
    }

    #[test]
    fn saturate_is_idempotent(m in int_matrix(4, 2, 6)) {
        let s = saturate(&m);
        prop_assert!(is_saturated(&s));
        prop_assert!(snf(&s).divisors.iter().all(|d| *d == BigInt::from(1)));
        prop_assert_eq!(saturate(&s), s);
    }

    #[test]
    fn subspace_dimension_formula(p in prime(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 5;
        let mut pick = |k: usize| {
            let vs: Vec<Vec<u64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
            Subspace::from_vectors(p, n, &vs)
        };
        let (a, b) = (pick(3), pick(3));
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
    }

    #[test]
    fn cyclic_type_is_additive_and_conjugation_invariant(
        p in prime(), x in (0usize..3, 0usize..3, 0usize..3), y in (0usize..3, 0usize..3, 0usize..3), seed in any::<u64>()
    ) {
        let g = GroupSpec::cyclic(p, "n").unwrap();
        let (a, b) = (cyclic_sum(&g, x), cyclic_sum(&g, y));
        prop_assume!(a.rank() + b.rank() > 0);
        let sum = a.direct_sum(&b).unwrap();
        let t = cyclic_type(&sum).unwrap();
        prop_assert_eq!(t, cyclic_type(&a).unwrap() + cyclic_type(&b).unwrap());
        prop_assert_eq!((t.a, t.b, t.c), (x.0 + y.0, x.1 + y.1, x.2 + y.2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = unimodular(&mut rng, sum.rank());
        prop_assert_eq!(cyclic_type(&sum.conjugate(&q).unwrap()).unwrap(), t);
    }

    #[test]
    fn cyclic_perm_verdict_tracks_augmentation_summands(p in prime(), x in (0usize..3, 0usize..3, 0usize..3)) {
        prop_assume!(x.0 + x.1 + x.2 > 0);
        let g = GroupSpec::cyclic(p, "n").unwrap();
        let v = is_perm_cyclic(&cyclic_sum(&g, x)).unwrap().verdict;
        prop_assert_eq!(v, Verdict::from_bool(x.2 == 0));
    }

    #[test]
    fn fixed_points_are_saturated(p in prime(), seed in any::<u64>()) {
        let g = GroupSpec::standard(p, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&g, &RandomDiagramConfig::default(), &mut rng).unwrap();
        let lat = lattice_of(&d).unwrap().lattice;
        for h in g.all_subgroups() {
            prop_assert!(is_saturated(&fixed_points(&lat, &h).unwrap().basis));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_covers_the_module(seed in any::<u64>(), k in 1usize..4) {
        let g = GroupSpec::standard(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool: Vec<FpModule> = g
            .all_subgroups()
            .iter()
            .map(|h| FpModule::perm_module(&g, h))
            .collect();
        let parts: Vec<&FpModule> = (0..k).map(|_| &pool[rng.gen_range(0..pool.len())]).collect();
        let m = FpModule::direct_sum_all(&g, parts.iter().copied()).unwrap();
        let m = m.conjugate(&fp_invertible(&mut rng, 2, m.dim())).unwrap();
        let dec = fp_decompose(&m).unwrap();
        prop_assert_eq!(dec.summands.iter().map(|s| s.module.dim()).sum::<usize>(), m.dim());
        for s in &dec.summands {
            let again = fp_decompose(&s.module).unwrap();
            prop_assert_eq!(again.summands.len(), 1);
        }
        prop_assert_eq!(fp_is_permutation(&m).unwrap().verdict, Verdict::Yes);
    }

    #[test]
    fn jordan_blocks_match_fixed_space(p in prime(), sizes in proptest::collection::vec(1usize..6, 1..4)) {
        let g = GroupSpec::cyclic(p, "n").unwrap();
        let sizes: Vec<usize> = sizes.into_iter().map(|s| s.min(p as usize)).collect();
        let blocks: Vec<FpMatrix> = sizes
            .iter()
            .map(|&s| FpMatrix::from_fn(p, s, s, |i, j| u64::from(i == j || j == i + 1)))
            .collect();
        let refs: Vec<&FpMatrix> = blocks.iter().collect();
        let a = FpMatrix::block_diag(p, &refs);
        let m = FpModule::new(g.clone(), a.rows(), vec![a.clone()]).unwrap();
        let jt = jordan_type(&a);
        prop_assert_eq!(jt.iter().sum::<usize>(), m.dim());
        prop_assert_eq!(jt.len(), m.fixed_space(&g.whole()).dim());
        let mut want = sizes.clone();
        want.sort_unstable_by(|x, y| y.cmp(x));
        let mut got = jt.clone();
        got.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn fp_permutation_survives_base_change(seed in any::<u64>()) {
        let p = 2;
        let g = GroupSpec::standard(p, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&g, &RandomDiagramConfig::default(), &mut rng).unwrap();
        let m = d.module().clone();
        prop_assume!(m.dim() > 0);
        let moved = m.conjugate(&fp_invertible(&mut rng, p, m.dim())).unwrap();
        prop_assert_eq!(fp_is_permutation(&m).unwrap().verdict, fp_is_permutation(&moved).unwrap().verdict);
    }

    #[test]
    fn fp_iso_is_an_equivalence(p in prime(), seed in any::<u64>()) {
        let g = GroupSpec::standard(p, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_diagram(&g, &RandomDiagramConfig::default(), &mut rng).unwrap().module().clone();
        let b = a.conjugate(&fp_invertible(&mut rng, p, a.dim())).unwrap();
        let c = b.conjugate(&fp_invertible(&mut rng, p, a.dim())).unwrap();
        prop_assert!(fp_iso(&a, &a).unwrap().map.is_some());
        prop_assert!(fp_iso(&a, &b).unwrap().map.is_some());
        prop_assert!(fp_iso(&b, &a).unwrap().map.is_some());
        prop_assert!(fp_iso(&a, &c).unwrap().map.is_some());
        prop_assert_eq!(a.invariant_vector(), c.invariant_vector());
        let other = random_diagram(&g, &RandomDiagramConfig::default(), &mut rng).unwrap().module().clone();
        if fp_iso(&a, &other).unwrap().map.is_some() {
            prop_assert_eq!(a.invariant_vector(), other.invariant_vector());
        }
    }
}

fn diagram_case() -> impl Strategy<Value = (u64, u64, bool)> {
    (prime(), any::<u64>(), any::<bool>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn both_round_trips_hold((p, seed, heavy) in diagram_case()) {
        let g = GroupSpec::standard(p, 2).unwrap();
        let cfg = RandomDiagramConfig { perm_heavy: heavy, ..Default::default() };
        let d = random_diagram(&g, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let rt = round_trip(&d).unwrap();
        prop_assert!(rt.ok(), "{:?}", rt);
        let b = lattice_of(&d).unwrap();
        let ex = diagram_of(&b.lattice, true).unwrap();
        prop_assert_eq!(ex.diagram.dimension_vector(), d.dimension_vector());
    }

    #[test]
    fn routes_agree_for_every_subgroup((p, seed, heavy) in diagram_case()) {
        let g = GroupSpec::standard(p, 2).unwrap();
        let cfg = RandomDiagramConfig { perm_heavy: heavy, ..Default::default() };
        let d = random_diagram(&g, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let lat = lattice_of(&d).unwrap().lattice;
        for n in block_indices(&g).unwrap().into_iter().filter(|i| *i != BlockIndex::Zero) {
            let m = lattice_route(&lat, &n).unwrap();
            prop_assert_eq!(m[0], Verdict::from_bool(pred_invariants_perm(&d, &n).unwrap().holds));
            let lat_ok = pred_coinvariants_lattice(&d, &n).unwrap().holds;
            prop_assert_eq!(m[1], Verdict::from_bool(lat_ok));
            if lat_ok {
                prop_assert_eq!(m[2], Verdict::from_bool(pred_coinvariants_perm(&d, &n).unwrap().holds));
            }
            prop_assert_eq!(m[3], Verdict::from_bool(pred_perm(&d).holds));
        }
    }

    #[test]
    fn block_lemmas_hold((p, seed, heavy) in diagram_case()) {
        let g = GroupSpec::standard(p, 2).unwrap();
        let cfg = RandomDiagramConfig { perm_heavy: heavy, ..Default::default() };
        let d = random_diagram(&g, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = lattice_of(&d).unwrap();
        let idx = block_indices(&g).unwrap();
        for n in idx.iter().filter(|i| **i != BlockIndex::Zero) {
            prop_assert!(invariants_in_blocks(&b, n).unwrap());
            let inc = coinvariants_upstairs(&b, n).unwrap();
            prop_assert!(inc.holds);
            prop_assert_eq!(inc.equal, pred_coinvariants_lattice(&d, n).unwrap().holds);
            if inc.equal {
                let up = perm_upstairs(&b).unwrap();
                prop_assert!(up.holds);
                prop_assert_eq!(up.equal, pred_coinvariants_perm(&d, n).unwrap().holds);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let a = idx[rng.gen_range(0..idx.len())].clone();
        let set: Vec<BlockIndex> = idx.iter().filter(|i| **i != a && rng.gen_bool(0.5)).cloned().collect();
        let (image, target) = component_image(&b, &d, &a, &set);
        prop_assert_eq!(image, target);
    }
}
