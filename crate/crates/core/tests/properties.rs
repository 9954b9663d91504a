use bottbord_core::charclass::partitions;
use bottbord_core::charmatrix::{Mode, ReducedVectorMatrix};
use bottbord_core::cobordism::verdict;
use bottbord_core::enumerate::{random_permutation, random_triangular, random_valid, Analyses, ResultRecord};
use bottbord_core::poly::{Coefficient, Gf2, Monomial, Polynomial, Q};
use bottbord_core::polytope::SimplexProduct;
use bottbord_core::ring::{CohomologyRing, DegreeScale, EngineChoice, RingScalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DIMS: &[&[usize]] = &[
    &[1],
    &[2],
    &[1, 1],
    &[2, 1],
    &[1, 2],
    &[2, 2],
    &[1, 1, 1],
    &[3, 1],
    &[1, 1, 1, 1],
];

fn sample(seed: u64, which: usize, mode: Mode) -> ReducedVectorMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = SimplexProduct::from_dims(DIMS[which % DIMS.len()]).unwrap();
    random_valid(&p, mode, 2, 100_000, &mut rng).expect("valid matrices exist over every product")
}

fn mode_of(flag: bool) -> Mode {
    if flag {
        Mode::Integer
    } else {
        Mode::ModTwo
    }
}

fn random_poly<C: Coefficient>(nvars: usize, max_degree: usize, seed: u64) -> Polynomial<C> {
    let mut state = seed | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut p = Polynomial::zero(nvars);
    for d in 0..=max_degree {
        for m in Monomial::all_of_degree(nvars, d) {
            let c = (next() % 5) as i64 - 2;
            if c != 0 {
                p.add_term(m, C::from_i64(c));
            }
        }
    }
    p
}

fn h_polynomial(dims: &[usize]) -> Vec<usize> {
    dims.iter().fold(vec![1usize], |h, &d| {
        let mut next = vec![0; h.len() + d];
        for (i, &c) in h.iter().enumerate() {
            for slot in &mut next[i..=i + d] {
                *slot += c;
            }
        }
        next
    })
}

fn normal_form_laws<C: RingScalar>(ring: &CohomologyRing<C>, seed: u64) {
    let m = ring.nvars();
    let top = ring.top_degree();
    let p = random_poly::<C>(m, top + 1, seed);
    let q = random_poly::<C>(m, top + 1, seed.wrapping_mul(31).wrapping_add(7));
    let np = ring.normal_form(&p);
    assert_eq!(ring.normal_form(&np), np, "idempotent");
    assert_eq!(ring.normal_form(&(&p + &q)), &np + &ring.normal_form(&q), "linear");
    for g in ring.relations() {
        assert!(ring.normal_form(g).is_zero());
    }
    // multiplication is compatible with reduction
    let lhs = ring.normal_form(&(&p * &q));
    let rhs = ring.mul(&np, &ring.normal_form(&q));
    assert_eq!(lhs, rhs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ranks_follow_h_polynomial(seed in any::<u64>(), which in 0usize..9, integer in any::<bool>()) {
        let a = sample(seed, which, mode_of(integer));
        let ranks = match a.mode() {
            Mode::ModTwo => CohomologyRing::<Gf2>::build(&a, DegreeScale::SmallCover).unwrap().poincare_ranks(),
            Mode::Integer => CohomologyRing::<Q>::build(&a, DegreeScale::Quasitoric).unwrap().poincare_ranks(),
        };
        prop_assert_eq!(&ranks, &h_polynomial(a.polytope().dims()));
        prop_assert_eq!(ranks.iter().sum::<usize>(), a.polytope().vertex_count());
    }

    #[test]
    fn normal_form_is_a_ring_retraction(seed in any::<u64>(), which in 0usize..9, integer in any::<bool>()) {
        let a = sample(seed, which, mode_of(integer));
        match a.mode() {
            Mode::ModTwo => normal_form_laws(&CohomologyRing::<Gf2>::build(&a, DegreeScale::SmallCover).unwrap(), seed),
            Mode::Integer => normal_form_laws(&CohomologyRing::<Q>::build(&a, DegreeScale::Quasitoric).unwrap(), seed),
        }
    }

    #[test]
    fn verdict_invariant_under_factor_permutation(seed in any::<u64>(), which in 0usize..9, integer in any::<bool>()) {
        let a = sample(seed, which, mode_of(integer));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
        let perm = random_permutation(a.polytope().factors(), &mut rng);
        let b = a.conjugate(&perm);
        prop_assert!(b.is_characteristic());
        let (va, vb) = (verdict(&a).unwrap(), verdict(&b).unwrap());
        prop_assert_eq!(va.sw.to_map(), vb.sw.to_map());
        let abs = |v: &bottbord_core::cobordism::CobordismVerdict| {
            v.pontryagin.as_ref().map(|r| r.to_map().into_values().map(i64::abs).collect::<Vec<_>>())
        };
        prop_assert_eq!(abs(&va), abs(&vb));
        prop_assert_eq!(va.oriented_obstruction, vb.oriented_obstruction);
    }

    #[test]
    fn triangularize_inverts_scrambling(seed in any::<u64>(), which in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = SimplexProduct::from_dims(DIMS[which]).unwrap();
        let a = random_triangular(&p, Mode::Integer, 2, &mut rng);
        let perm = random_permutation(p.factors(), &mut rng);
        let t = a.conjugate(&perm).triangularize().unwrap();
        prop_assert!(t.matrix.is_unipotent_upper_triangular());
        prop_assert!(t.matrix.principal_minors_all_one());
    }

    #[test]
    fn engines_agree_on_triangular_rings(seed in any::<u64>(), which in 0usize..9, integer in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = SimplexProduct::from_dims(DIMS[which]).unwrap();
        let a = random_triangular(&p, mode_of(integer), 2, &mut rng);
        fn check<C: RingScalar>(a: &ReducedVectorMatrix, scale: DegreeScale, seed: u64) -> bool {
            let t = CohomologyRing::<C>::build_with(a, scale, EngineChoice::Triangular).unwrap();
            let g = CohomologyRing::<C>::build_with(a, scale, EngineChoice::Generic).unwrap();
            let p = random_poly::<C>(t.nvars(), t.top_degree() + 1, seed);
            t.normal_form(&p) == g.normal_form(&p) && t.top_monomial() == g.top_monomial()
        }
        let ok = match a.mode() {
            Mode::ModTwo => check::<Gf2>(&a, DegreeScale::SmallCover, seed),
            Mode::Integer => check::<Q>(&a, DegreeScale::Quasitoric, seed),
        };
        prop_assert!(ok);
    }

    #[test]
    fn records_round_trip(seed in any::<u64>(), which in 0usize..9, integer in any::<bool>(), ts in any::<u64>()) {
        let a = sample(seed, which, mode_of(integer));
        let v = verdict(&a).unwrap();
        let r = ResultRecord::from_verdict(&a, &v, Analyses::default(), ts);
        let text = serde_json::to_string(&r).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn partitions_are_distinct_and_complete(n in 0usize..12, cap in 0usize..12) {
        let cap = cap.min(n);
        let ps = partitions(n, cap);
        let mut seen = std::collections::BTreeSet::new();
        for p in &ps {
            prop_assert_eq!(p.weight(), n);
            prop_assert!(p.parts().iter().all(|&x| x <= cap));
            prop_assert!(seen.insert(p.clone()));
        }
    }
}
