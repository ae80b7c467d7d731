//! Property tests for the algebraic identities the library is built on.

use proptest::prelude::*;

use nilcohom::algebra::StructureConstants;
use nilcohom::ce::build_differential;
use nilcohom::exterior::{degree_basis, Form, Monomial};
use nilcohom::parse::parse_algebra;
use nilcohom::rational::{rat, Rational};

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(num, den)| Rational::new(num.into(), den.into()))
}

/// A sparse homogeneous form of the given degree.
fn homogeneous_form(dim: usize, degree: usize) -> impl Strategy<Value = Form> {
    let basis = degree_basis(dim, degree);
    let len = basis.len();
    proptest::collection::vec((0..len, rational_strategy()), 0..=len.min(4))
        .prop_map(move |terms| Form::from_terms(dim, terms.into_iter().map(|(i, c)| (basis[i], c))))
}

fn form_with_degree(dim: usize) -> impl Strategy<Value = (Form, usize)> {
    (0..=dim).prop_flat_map(move |k| homogeneous_form(dim, k).prop_map(move |f| (f, k)))
}

/// Brackets of base generators landing in a central tail: the Jacobi identity
/// holds identically, and the algebra is nilpotent of class at most 2.
fn two_step_algebra() -> impl Strategy<Value = StructureConstants> {
    (3usize..=6).prop_flat_map(|dim| {
        (1usize..dim - 1).prop_flat_map(move |base| {
            let pairs: Vec<(usize, usize)> = (1..=base)
                .flat_map(|i| (i + 1..=base).map(move |j| (i, j)))
                .collect();
            let targets = base + 1..=dim;
            let bracket_entries = proptest::collection::vec(
                (
                    0..pairs.len().max(1),
                    proptest::sample::select(targets.collect::<Vec<_>>()),
                    rational_strategy(),
                ),
                0..=4,
            );
            bracket_entries.prop_map(move |entries| {
                let mut sc = StructureConstants::abelian(dim);
                let mut per_pair: std::collections::BTreeMap<
                    (usize, usize),
                    Vec<(usize, Rational)>,
                > = Default::default();
                for (pair_index, target, coeff) in entries {
                    if pairs.is_empty() {
                        continue;
                    }
                    let (i, j) = pairs[pair_index % pairs.len()];
                    per_pair.entry((i, j)).or_default().push((target, coeff));
                }
                for ((i, j), coeffs) in per_pair {
                    sc.set_bracket(i, j, coeffs);
                }
                sc
            })
        })
    })
}

/// Arbitrary sparse structure constants; not necessarily Jacobi-valid, which
/// is fine for grammar round-trips.
fn arbitrary_algebra() -> impl Strategy<Value = StructureConstants> {
    (2usize..=5).prop_flat_map(|dim| {
        proptest::collection::vec(
            (1usize..=5, 1usize..=5, 1usize..=5, rational_strategy()),
            0..=5,
        )
        .prop_map(move |entries| {
            let mut per_pair: std::collections::BTreeMap<(usize, usize), Vec<(usize, Rational)>> =
                Default::default();
            for (i, j, k, c) in entries {
                let (i, j, k) = (i.min(dim), j.min(dim), k.min(dim));
                if i < j {
                    per_pair.entry((i, j)).or_default().push((k, c));
                }
            }
            let mut sc = StructureConstants::abelian(dim);
            for ((i, j), coeffs) in per_pair {
                sc.set_bracket(i, j, coeffs);
            }
            sc
        })
    })
}

fn two_forms() -> impl Strategy<Value = ((Form, usize), (Form, usize))> {
    (2usize..=5).prop_flat_map(|dim| (form_with_degree(dim), form_with_degree(dim)))
}

fn three_forms() -> impl Strategy<Value = (Form, Form, Form)> {
    (2usize..=4).prop_flat_map(|dim| {
        (
            form_with_degree(dim).prop_map(|p| p.0),
            form_with_degree(dim).prop_map(|p| p.0),
            form_with_degree(dim).prop_map(|p| p.0),
        )
    })
}

proptest! {
    #[test]
    fn wedge_is_graded_commutative(pair in two_forms()) {
        let ((a, ka), (b, kb)) = pair;
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let expected = if (ka * kb) % 2 == 0 { ba.clone() } else { ba.neg() };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn wedge_is_associative(triple in three_forms()) {
        let (a, b, c) = triple;
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn interior_is_an_antiderivation(
        pair in two_forms(),
        index_seed in 1usize..=5,
    ) {
        let ((a, ka), (b, _)) = pair;
        let dim = a.dim();
        let index = 1 + (index_seed - 1) % dim;
        let product = a.wedge(&b).unwrap();
        let lhs = product.interior(index).unwrap();
        let mut rhs = a.interior(index).unwrap().wedge(&b).unwrap();
        let mut second = a.wedge(&b.interior(index).unwrap()).unwrap();
        if ka % 2 == 1 {
            second = second.neg();
        }
        rhs = rhs.add(&second).unwrap();
        prop_assert_eq!(lhs, rhs);
        // double contraction vanishes
        prop_assert!(a.interior(index).unwrap().interior(index).unwrap().is_zero());
    }

    #[test]
    fn algebra_serialization_round_trips(sc in arbitrary_algebra()) {
        let reparsed = parse_algebra(&sc.serialize()).unwrap();
        prop_assert_eq!(sc, reparsed);
    }

    #[test]
    fn forms_round_trip_through_render(pair in two_forms()) {
        let ((form, _), _) = pair;
        let sc = StructureConstants::abelian(form.dim());
        let reparsed = parse_algebra(&sc.serialize())
            .and_then(|sc| nilcohom::parse::parse_form(&form.render(None), &sc));
        prop_assert_eq!(reparsed.unwrap(), form);
    }

    #[test]
    fn parser_rejects_garbage_without_panicking(text in "[ -~]{0,60}") {
        let _ = parse_algebra(&text);
        let sc = StructureConstants::abelian(4);
        let _ = nilcohom::parse::parse_form(&text, &sc);
    }

    #[test]
    fn direct_sum_preserves_jacobi_exactly_when_both_sides_do(
        a in arbitrary_algebra(),
        b in two_step_algebra(),
    ) {
        let sum = StructureConstants::direct_sum(&a, &b);
        let expected = a.validate().jacobi_ok && b.validate().jacobi_ok;
        prop_assert_eq!(sum.validate().jacobi_ok, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_step_algebras_have_square_zero_differentials(sc in two_step_algebra()) {
        let report = sc.validate();
        prop_assert!(report.jacobi_ok);
        prop_assert!(report.nilpotent);
        let d = build_differential(&sc).unwrap();
        let n = sc.dim();
        for k in 0..=n {
            for monomial in degree_basis(n, k) {
                let f = Form::from_terms(n, [(monomial, rat(1))]);
                prop_assert!(d.apply(&d.apply(&f)).is_zero());
            }
        }
    }

    #[test]
    fn betti_numbers_satisfy_euler_and_duality(sc in two_step_algebra()) {
        let d = build_differential(&sc).unwrap();
        let coh = d.cohomology();
        prop_assert_eq!(coh.euler_characteristic(), 0);
        let n = sc.dim();
        for k in 0..=n {
            // nilpotent algebras are unimodular, so the pairing is perfect
            prop_assert_eq!(coh.betti(k), coh.betti(n - k));
            let pairing = coh.poincare_pairing(k);
            prop_assert_eq!(pairing.rank(), coh.betti(k));
        }
    }

    #[test]
    fn cup_product_is_graded_commutative_and_associative(
        coeffs in proptest::collection::vec(rational_strategy(), 6),
    ) {
        // fixed complex, varying classes
        let sc = parse_algebra("dim 4; generators x,e1,e2,e3; [2,3]=-1*4;").unwrap();
        let d = build_differential(&sc).unwrap();
        let coh = d.cohomology();
        let h1 = coh.basis_classes(1);
        let combine = |i: usize, j: usize| nilcohom::ce::CohClass {
            degree: 1,
            coords: h1[i]
                .coords
                .iter()
                .zip(h1[j].coords.iter())
                .enumerate()
                .map(|(slot, (a, b))| a * &coeffs[slot % 6] + b * &coeffs[(slot + 3) % 6])
                .collect(),
        };
        let a = combine(0, 1);
        let b = combine(1, 2);
        let ab = coh.cup(&d, &a, &b).unwrap();
        let ba = coh.cup(&d, &b, &a).unwrap();
        // odd degrees anticommute
        prop_assert_eq!(ab.clone(), ba.scale(&rat(-1)));
        // associativity against a degree-2 class
        let c = &coh.basis_classes(2)[0];
        let left = coh.cup(&d, &ab, c).unwrap();
        let right = coh.cup(&d, &a, &coh.cup(&d, &b, c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reduction_left_inverse_on_random_classes(
        coords in proptest::collection::vec(rational_strategy(), 4),
        boundary_coeff in rational_strategy(),
    ) {
        let sc = parse_algebra("dim 4; generators x,e1,e2,e3; [2,3]=-1*4;").unwrap();
        let d = build_differential(&sc).unwrap();
        let coh = d.cohomology();
        let class = nilcohom::ce::CohClass { degree: 2, coords: coords.clone() };
        let rep = coh.class_to_form(&class).unwrap();
        // shifting by a degree-2 boundary must not change the reduction
        let boundary = d
            .apply(&Form::from_terms(
                4,
                [(Monomial::from_indices(&[4], 4).unwrap(), boundary_coeff)],
            ));
        let shifted = rep.add(&boundary).unwrap();
        let reduced = coh.reduce_at(&d, 2, &shifted).unwrap();
        prop_assert_eq!(reduced.coords, coords);
    }

    #[test]
    fn formality_smoke_every_defined_torus_product_is_trivial(
        ia in 0usize..4,
        ib in 0usize..4,
        ic in 0usize..4,
    ) {
        let d = build_differential(&StructureConstants::abelian(4)).unwrap();
        let coh = d.cohomology();
        let h1 = coh.basis_classes(1);
        let result =
            nilcohom::massey::triple_massey(&d, &coh, &h1[ia], &h1[ib], &h1[ic]).unwrap();
        if let Some(product) = result.product() {
            prop_assert!(product.trivial);
            prop_assert!(product.representative.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Random closed 2-forms on the six-dimensional catalog algebra: whenever
    /// the form is symplectic, the codifferential must satisfy the star
    /// identity and its square must vanish, monomial by monomial.
    #[test]
    fn star_identity_holds_for_random_symplectic_forms(
        coords in proptest::collection::vec(rational_strategy(), 8),
    ) {
        use nilcohom::symplectic::{check_symplectic, koszul_delta, star};

        let sc = parse_algebra(
            "dim 6; [1,2]=-1*4; [1,4]=-1*5; [1,5]=-1*6; [2,3]=-1*6; [2,4]=-1*6;",
        )
        .unwrap();
        let d = build_differential(&sc).unwrap();
        let coh = d.cohomology();

        // a random element of ker d₂: representatives plus boundaries
        let mut w = Form::zero(6);
        for (i, c) in coords.iter().take(5).enumerate() {
            let rep = &coh.representatives(2)[i];
            w = w.add(&rep.scale(c)).unwrap();
        }
        for (slot, c) in coords.iter().skip(5).enumerate() {
            let primitive = Form::generator(6, 4 + slot).unwrap();
            w = w.add(&d.apply(&primitive).scale(c)).unwrap();
        }
        prop_assume!(!w.is_zero());
        let Ok(s) = check_symplectic(&d, &w) else {
            return Ok(()); // degenerate points carry no star operator
        };
        for k in 1..=4usize {
            for monomial in degree_basis(6, k) {
                let f = Form::from_terms(6, [(monomial, rat(1))]);
                let delta_f = koszul_delta(&s, &d, &f);
                let star_d_star = star(&s, &d.apply(&star(&s, &f)));
                let rhs = if (k + 1) % 2 == 0 {
                    star_d_star
                } else {
                    star_d_star.neg()
                };
                prop_assert_eq!(delta_f.clone(), rhs, "star identity at degree {}", k);
                prop_assert!(koszul_delta(&s, &d, &delta_f).is_zero());
            }
        }
    }
}
