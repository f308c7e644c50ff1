use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gmx_core::amc::{conflicted_sum, normalize_word, ConflictRelation, MonoidPresentation, Symbol};
use gmx_core::benor::{adt_components, interpret_adt, random_adt};
use gmx_core::entropy::{count_admissible, h0_estimate, state_cover_hk, Admissibility};
use gmx_core::fans::{
    brute_force_volatility, make_fan, maxflow_with, min_cut_exhaustive, parametric_profile, pdec_member, project,
    random_network, volatility, Dinic, EdmondsKarp, Profile,
};
use gmx_core::machines::{compile_pram, compile_sram, pram_agreement, random_pram, random_sram, sram_agreement};
use gmx_core::realalg::{int, rat, AlgebraicReal, Rat, SignChart, UniPoly};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn profile_strategy() -> impl Strategy<Value = Profile> {
    (prop::collection::btree_set(-20i64..=20, 2..6), prop::collection::vec(-10i64..=10, 6)).prop_map(|(xs, ys)| {
        Profile {
            points: xs.into_iter().zip(ys).map(|(x, y)| (rat(x, 4), rat(y, 3))).collect(),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pdec_is_ray_invariant(
        prof in profile_strategy(),
        x in -30i64..=30,
        y in -30i64..=30,
        z in -5i64..=10,
        s in 1i64..=50,
    ) {
        let fan = make_fan(&prof).unwrap();
        let p = [x, y, z].map(BigInt::from);
        let q = [x * s, y * s, z * s].map(BigInt::from);
        prop_assert_eq!(pdec_member(&fan, &p), pdec_member(&fan, &q));
    }

    #[test]
    fn projection_is_idempotent(x in small_rat(), y in small_rat(), z in 1i64..=9, s in 1i64..=9) {
        let p = [x, y, int(z)];
        let once = project(&p).unwrap();
        prop_assert_eq!(project(&once).unwrap(), once.clone());
        let scaled = p.map(|c| c * int(s));
        prop_assert_eq!(project(&scaled).unwrap(), once);
    }

    #[test]
    fn maxflow_equals_min_cut(seed in any::<u64>(), n in 2usize..=7) {
        let net = random_network(&mut rng(seed), n, 0.5, false);
        let lambda = int(0);
        let cap = net.capacities(&lambda).unwrap();
        let cut = min_cut_exhaustive(&cap, net.source, net.sink).unwrap();
        let ek = maxflow_with(&net, &lambda, &EdmondsKarp).unwrap();
        let di = maxflow_with(&net, &lambda, &Dinic).unwrap();
        prop_assert_eq!(&ek.value, &cut);
        prop_assert_eq!(&di.value, &cut);
    }

    #[test]
    fn profile_interpolates_maxflow(seed in any::<u64>(), n in 2usize..=5, num in 0i64..=97) {
        let net = random_network(&mut rng(seed), n, 0.6, true);
        let prof = parametric_profile(&net).unwrap();
        let lambda = rat(num, 97);
        let direct = maxflow_with(&net, &lambda, &EdmondsKarp).unwrap().value;
        prop_assert_eq!(prof.eval(&lambda).unwrap(), direct);
        let fan = make_fan(&prof).unwrap();
        let slopes = prof.slopes();
        let concave = slopes.windows(2).all(|w| w[0] >= w[1]);
        prop_assert!(concave);
        prop_assert_eq!(fan.rho + 2, prof.points.len());
    }

    #[test]
    fn volatility_matches_sampling(coeffs in prop::collection::vec(-6i64..=6, 1..=8)) {
        let c = UniPoly::from_ints(&coeffs);
        prop_assume!(!c.is_zero());
        let (lo, hi) = (int(-1), int(1));
        let v = volatility(&c, &lo, &hi).unwrap();
        let b = brute_force_volatility(&c, &lo, &hi, 64, 1 << 14);
        prop_assert_eq!(v, b);
    }

    #[test]
    fn sign_chart_alternates(roots in prop::collection::vec(small_rat(), 1..5), extra in small_rat()) {
        let p = UniPoly::from_roots(&roots);
        let q = UniPoly::from_roots(&[extra]);
        let chart = SignChart::new(&[p.clone(), q], None).unwrap();
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let points = chart.pieces.len() / 2;
        prop_assert_eq!(chart.pieces.len() % 2, 1);
        prop_assert!(points == distinct.len() || points == distinct.len() + 1);
        for piece in &chart.pieces {
            prop_assert!(piece.signs.len() == 2);
        }
        let zeros = chart.pieces.iter().filter(|pc| pc.signs[0] == 0).count();
        prop_assert_eq!(zeros, distinct.len());
    }

    #[test]
    fn algebraic_compare_is_consistent(a in 1i64..=30, b in 1i64..=30) {
        let sa = UniPoly::from_ints(&[-a, 0, 1]);
        let sb = UniPoly::from_ints(&[-b, 0, 1]);
        let ra = gmx_core::realalg::isolate_roots(&sa, Some((&int(0), &int(31)))).unwrap();
        let rb = gmx_core::realalg::isolate_roots(&sb, Some((&int(0), &int(31)))).unwrap();
        let mut x = AlgebraicReal::new(sa, ra[0].clone());
        let mut y = AlgebraicReal::new(sb, rb[0].clone());
        prop_assert_eq!(x.compare(&mut y), a.cmp(&b));
        prop_assert_eq!(y.compare(&mut x), b.cmp(&a));
    }

    #[test]
    fn sram_traces_agree(seed in any::<u64>(), lines in 1usize..=15, input in prop::collection::vec(-5i64..=5, 0..4)) {
        let p = random_sram(&mut rng(seed), lines, false);
        let g = compile_sram(&p).unwrap();
        let x: Vec<Rat> = input.into_iter().map(int).collect();
        prop_assert!(sram_agreement(&p, &g, &x, 60).holds());
    }

    #[test]
    fn pram_traces_agree(seed in any::<u64>(), lines in 1usize..=6, input in prop::collection::vec(-5i64..=5, 0..4)) {
        let p = random_pram(&mut rng(seed), 2, lines);
        let g = compile_pram(&p).unwrap();
        let x: Vec<Rat> = input.into_iter().map(int).collect();
        prop_assert!(pram_agreement(&p, &g, &x, 40).holds());
    }

    #[test]
    fn admissible_counts_are_submultiplicative(seed in any::<u64>(), k in 1usize..=4, l in 1usize..=4) {
        let p = random_sram(&mut rng(seed), 6, false);
        let g = compile_sram(&p).unwrap();
        let ck = count_admissible(&g, k);
        let cl = count_admissible(&g, l);
        prop_assert!(count_admissible(&g, k + l) <= ck * cl);
        let e = state_cover_hk(&g, k, Admissibility::Syntactic);
        prop_assert_eq!(e.count, count_admissible(&g, k));
        let a = h0_estimate(&g, k, Admissibility::Syntactic).value;
        let b = h0_estimate(&g, k + l, Admissibility::Syntactic).value;
        prop_assert!(b <= a);
    }

    #[test]
    fn decision_trees_decide_like_their_graphings(seed in any::<u64>(), h in 1usize..=4, num in -20i64..=20) {
        let t = random_adt(&mut rng(seed), 1, h, 2);
        let g = interpret_adt(&t);
        prop_assert!(g.is_treeing());
        let x = [rat(num, 3)];
        let acc = gmx_core::machines::accepts(&g, &x, h + 2).unwrap();
        prop_assert_eq!(acc.accepted, t.decide(&x));
        prop_assert!(adt_components(&t).is_ok());
    }
}

fn letters(names: &[&str]) -> MonoidPresentation {
    MonoidPresentation::free(names.iter().map(|n| Symbol::new(*n)).collect())
}

proptest! {
    #[test]
    fn conflicted_sum_commutation(i in 0usize..3, j in 0usize..3, word in prop::collection::vec(0usize..6, 0..8)) {
        let l = letters(&["a", "b", "c"]);
        let r = letters(&["a", "b", "c"]);
        let free = conflicted_sum(&l, &r, &ConflictRelation::empty()).unwrap();
        let full = conflicted_sum(&l, &r, &ConflictRelation::full(&l, &r)).unwrap();
        let x = Symbol::tagged(1, &l.generators[i]);
        let y = Symbol::tagged(2, &r.generators[j]);
        let xy = [x.clone(), y.clone()];
        let yx = [y, x];
        prop_assert_eq!(normalize_word(&free, &xy).unwrap(), normalize_word(&free, &yx).unwrap());
        prop_assert_ne!(normalize_word(&full, &xy).unwrap(), normalize_word(&full, &yx).unwrap());
        let gens: Vec<Symbol> = free.generators.clone();
        let w: Vec<Symbol> = word.into_iter().map(|k| gens[k].clone()).collect();
        let once = normalize_word(&free, &w).unwrap();
        prop_assert_eq!(normalize_word(&free, &once).unwrap(), once.clone());
        prop_assert_eq!(once.len(), w.len());
    }
}
