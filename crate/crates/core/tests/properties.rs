use cycalc_core::fermat::{self, FermatSystem};
use cycalc_core::intersection::{canonical_chain, CoverDiagram, CoverMap, DivisorClass, SpaceModel};
use cycalc_core::rational::{q, qi, Q};
use cycalc_core::riemann_roch::{c2_restriction, chi_of_resolution, minus_k_dot_c2, solve_isolated_count};
use cycalc_core::weighted::{
    fixed_locus, singularity_type, InvolutionSpec, SingularityType, WeightedPoint, WeightedSpace,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

const GENS: [&str; 3] = ["A'", "B'", "C'"];

/// Random three-generator space: all ten triple numbers and `c₁`.
fn arb_space() -> impl Strategy<Value = SpaceModel> {
    (prop::collection::vec(-4i64..=4, 10), prop::collection::vec(-3i64..=3, 3)).prop_map(
        |(t, c1)| {
            let mut y = SpaceModel::new("Y", &GENS).unwrap();
            let mut it = t.into_iter();
            for i in 0..3 {
                for j in i..3 {
                    for k in j..3 {
                        y.set_triple(GENS[i], GENS[j], GENS[k], qi(it.next().unwrap())).unwrap();
                    }
                }
            }
            let terms: Vec<(&str, Q)> = GENS.iter().copied().zip(c1.into_iter().map(qi)).collect();
            y.c1 = y.class(&terms).unwrap();
            y
        },
    )
}

fn arb_coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..=5, 1i64..=3), 3)
}

fn class_on(space: &SpaceModel, c: &[(i64, i64)]) -> DivisorClass {
    let terms: Vec<(&str, Q)> = space
        .generators()
        .iter()
        .zip(c)
        .map(|(g, &(n, d))| (g.as_str(), q(n, d)))
        .collect();
    space.class(&terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triple_product_symmetric(y in arb_space(), a in arb_coeffs(), b in arb_coeffs(), c in arb_coeffs()) {
        let (a, b, c) = (class_on(&y, &a), class_on(&y, &b), class_on(&y, &c));
        let abc = y.triple_product(&a, &b, &c).unwrap();
        for (p, r, s) in [(&a, &c, &b), (&b, &a, &c), (&b, &c, &a), (&c, &a, &b), (&c, &b, &a)] {
            prop_assert_eq!(&y.triple_product(p, r, s).unwrap(), &abc);
        }
    }

    #[test]
    fn triple_product_trilinear(
        y in arb_space(),
        a in arb_coeffs(), a2 in arb_coeffs(), b in arb_coeffs(), c in arb_coeffs(),
        (ln, ld) in (-6i64..=6, 1i64..=5),
    ) {
        let (a, a2, b, c) = (class_on(&y, &a), class_on(&y, &a2), class_on(&y, &b), class_on(&y, &c));
        let lambda = q(ln, ld);
        let combo = &a.scale(&lambda) + &a2;
        let lhs = y.triple_product(&combo, &b, &c).unwrap();
        let rhs = &lambda * y.triple_product(&a, &b, &c).unwrap() + y.triple_product(&a2, &b, &c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_pullback_doubles_triples(
        y in arb_space(), k in 0u32..4,
        a in arb_coeffs(), b in arb_coeffs(), c in arb_coeffs(), br in arb_coeffs(),
    ) {
        let branch = class_on(&y, &br);
        let dia = CoverDiagram::with_branch(y, k, branch).unwrap();
        let (a, b, c) = (class_on(&dia.y, &a), class_on(&dia.y, &b), class_on(&dia.y, &c));
        let pull = |d: &DivisorClass| dia.pullback(CoverMap::Phi, d).unwrap();
        prop_assert_eq!(
            dia.x.triple_product(&pull(&a), &pull(&b), &pull(&c)).unwrap(),
            qi(2) * dia.y.triple_product(&a, &b, &c).unwrap()
        );
    }

    #[test]
    fn blowup_pullbacks_miss_exceptionals(y in arb_space(), k in 1u32..4, a in arb_coeffs(), b in arb_coeffs()) {
        let two_c1 = dia_branch(&y);
        let dia = CoverDiagram::with_branch(y, k, two_c1).unwrap();
        let (ay, by) = (class_on(&dia.y, &a), class_on(&dia.y, &b));
        let (ax, bx) = (dia.pullback(CoverMap::Phi, &ay).unwrap(), dia.pullback(CoverMap::Phi, &by).unwrap());
        let fa = dia.pullback(CoverMap::F, &ax).unwrap();
        let fb = dia.pullback(CoverMap::F, &bx).unwrap();
        let ga = dia.pullback(CoverMap::G, &ay).unwrap();
        let gb = dia.pullback(CoverMap::G, &by).unwrap();
        for e in &dia.exceptional_e {
            prop_assert!(dia.xt.triple_product(&fa, &fb, &dia.xt.generator(e).unwrap()).unwrap().is_zero());
        }
        for f in &dia.exceptional_f {
            prop_assert!(dia.yt.triple_product(&ga, &gb, &dia.yt.generator(f).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn pushforward_after_pullback_is_doubling(y in arb_space(), k in 0u32..5, a in prop::collection::vec((-5i64..=5, 1i64..=3), 7)) {
        let two_c1 = dia_branch(&y);
        let dia = CoverDiagram::with_branch(y, k, two_c1).unwrap();
        let d = class_on(&dia.yt, &a);
        let up = dia.pullback(CoverMap::PhiTilde, &d).unwrap();
        prop_assert_eq!(dia.pushforward_cover(&up).unwrap(), d.scale(&qi(2)));
    }

    /// `2K_Ỹ + S_Ỹ = ΣF` whenever `K_X = 0`; the oracle reads the
    /// coefficients directly: 1 on every `F_i`, 0 on every `g*` generator.
    #[test]
    fn canonical_relation_for_random_branch(y in arb_space(), k in prop::sample::select(vec![0u32, 1, 16])) {
        let branch = dia_branch(&y);
        let dia = CoverDiagram::with_branch(y, k, branch).unwrap();
        prop_assert!(dia.x.canonical().is_zero());
        let chain = canonical_chain(&dia).unwrap();
        prop_assert!(chain.holds);
        for g in dia.yt.generators() {
            let want = if g.starts_with('F') { Q::one() } else { Q::zero() };
            prop_assert_eq!(chain.lhs.coeff(g), want);
        }
    }

    #[test]
    fn branch_off_anticanonical_is_not_calabi_yau(y in arb_space(), k in 0u32..3, shift in 1i64..4) {
        let branch = &dia_branch(&y) + &y.generator("A'").unwrap().scale(&qi(shift));
        let dia = CoverDiagram::with_branch(y, k, branch).unwrap();
        prop_assert!(canonical_chain(&dia).is_err());
    }

    #[test]
    fn riemann_roch_identities(n in 0u32..200, b in -20i64..20, k in 0i64..500) {
        prop_assert_eq!(chi_of_resolution(&minus_k_dot_c2(n), n), Q::one());
        prop_assert_eq!(c2_restriction(b + 1) - c2_restriction(b), qi(3));
        let chi = q(k, 16);
        let solved = solve_isolated_count(&chi).unwrap();
        prop_assert_eq!(q(solved.k.into(), 16), chi);
    }
}

/// `-2K_Y = 2c₁`, the branch class that makes `K_X` vanish.
fn dia_branch(y: &SpaceModel) -> DivisorClass {
    y.c1.scale(&qi(2))
}

#[test]
fn c2_restriction_anchor() {
    assert_eq!(c2_restriction(-2), qi(-3));
}

fn arb_weighted() -> impl Strategy<Value = (WeightedSpace, InvolutionSpec)> {
    (2usize..=5)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(1u32..=6, n),
                prop::collection::vec(prop::bool::ANY, n),
            )
        })
        .prop_map(|(w, s)| {
            let space = WeightedSpace::with_default_names(w).unwrap();
            let inv = InvolutionSpec::new(s.into_iter().map(|b| if b { 1 } else { -1 }).collect()).unwrap();
            (space, inv)
        })
}

fn arb_well_formed() -> impl Strategy<Value = (WeightedSpace, InvolutionSpec)> {
    arb_weighted().prop_filter("well-formed", |(s, _)| s.is_well_formed())
}

fn nonzero_q() -> impl Strategy<Value = Q> {
    (prop_oneof![-7i64..=-1, 1i64..=7], 1i64..=4).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn involution_squared_is_identity(
        (space, inv) in arb_weighted(),
        coords in prop::collection::vec(prop_oneof![Just(Q::zero()), nonzero_q()], 5),
        mu in nonzero_q(),
    ) {
        let n = space.len();
        let p = WeightedPoint(coords[..n].to_vec());
        prop_assume!(!p.is_origin());
        // rescale by μ before applying, so the comparison needs weights
        let scaled = WeightedPoint(
            p.0.iter()
                .zip(&space.weights)
                .map(|(x, &w)| x * cycalc_core::rational::pow(&mu, w.into()))
                .collect(),
        );
        let twice = inv.apply(&inv.apply(&scaled));
        prop_assert!(twice.projectively_equal(&p, &space.weights));
    }

    #[test]
    fn witnesses_realise_signs((space, inv) in arb_well_formed()) {
        let locus = fixed_locus(&space, &inv).unwrap();
        for s in &locus.strata {
            for &i in &s.support {
                prop_assert!(s.lambda.pow_equals_sign(space.weights[i], inv.signs[i]));
            }
        }
    }

    /// A point with every coordinate of a stratum's support nonzero lies
    /// in that stratum only; shared boundary is reported as a junction.
    #[test]
    fn generic_stratum_points_are_unique(
        (space, inv) in arb_well_formed(),
        vals in prop::collection::vec(nonzero_q(), 5),
    ) {
        let locus = fixed_locus(&space, &inv).unwrap();
        for (idx, s) in locus.strata.iter().enumerate() {
            let mut c = vec![Q::zero(); space.len()];
            for (j, &i) in s.support.iter().enumerate() {
                c[i] = vals[j].clone();
            }
            let p = WeightedPoint(c);
            prop_assert_eq!(locus.strata_containing(&p), vec![idx]);
            // fixed: inv(p) ~ p
            prop_assert!(inv.apply(&p).projectively_equal(&p, &space.weights));
        }
        for pair in locus.strata.iter().enumerate().flat_map(|(i, a)| locus.strata[i + 1..].iter().map(move |b| (a, b))) {
            let shared: Vec<usize> = pair.0.support.iter().copied().filter(|i| pair.1.support.contains(i)).collect();
            if !shared.is_empty() {
                prop_assert!(locus.junctions.contains(&shared));
            }
        }
    }

    #[test]
    fn projective_space_is_smooth(n in 1usize..7, i in 0usize..7) {
        prop_assume!(i <= n);
        prop_assert_eq!(singularity_type(&WeightedSpace::projective(n), i).unwrap(), SingularityType::Smooth);
    }
}

fn arb_block_perm() -> impl Strategy<Value = Vec<usize>> {
    (Just(vec![0usize, 1, 2]).prop_shuffle(), Just(vec![3usize, 4, 5]).prop_shuffle())
        .prop_map(|(a, b)| [a, b].concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fermat_count_invariant_under_block_permutations(perm in arb_block_perm()) {
        let base = fermat::count_fixed_points(&FermatSystem::quadric_quartic()).unwrap();
        let permuted = fermat::count_fixed_points(&FermatSystem::quadric_quartic().permuted(&perm)).unwrap();
        prop_assert_eq!(permuted.count, base.count);
        let per: Vec<usize> = permuted.strata.iter().map(|s| s.count).collect();
        prop_assert_eq!(per, vec![8, 8]);
    }
}

#[test]
fn fermat_bezout_consistency() {
    let systems = [
        FermatSystem::quadric_quartic(),
        FermatSystem::parse(5, "2:1,1,1,1,1,1;4:1,1,1,1,1,1", "+,-,-,-,+,+").unwrap(),
        FermatSystem::parse(3, "4:1,1,1,1", "-,-,+,+").unwrap(),
        FermatSystem::parse(3, "4:1,2,3,5", "-,-,+,+").unwrap(),
    ];
    for sys in &systems {
        let c = fermat::count_fixed_points(sys).unwrap();
        for s in &c.strata {
            if let (Some(b), Some(ok)) = (s.bezout, s.bezout_consistent) {
                assert!(ok, "{s:?}");
                assert_eq!(s.count as u64, b, "{s:?}");
            }
            if let Some(e) = s.enumerated_count {
                assert_eq!(e, s.symbolic_count, "{s:?}");
            }
        }
    }
}

#[test]
fn fermat_points_are_fixed_solutions() {
    let sys = FermatSystem::quadric_quartic();
    let k = cycalc_core::cyclotomic::CyclotomicField::new(fermat::ENUMERATION_ORDER);
    let pts = fermat::list_fixed_points(&sys).unwrap();
    assert_eq!(pts.len(), 16);
    for p in &pts {
        let x = p.exact_coords.as_ref().expect("exact on this system");
        assert!(fermat::evaluate_exact(&sys, &k, x).iter().all(|v| v.is_zero()));
        let apply = |v: &[_]| -> Vec<_> {
            v.iter()
                .zip(&sys.signs.signs)
                .map(|(c, &s)| if s < 0 { k.neg(c) } else { c.clone() })
                .collect()
        };
        let once = apply(x);
        assert!(fermat::projectively_equal_exact(&k, &once, x));
        assert_eq!(apply(&once), *x);
        assert!(p.residual < fermat::RESIDUAL_TOL);
    }
}
