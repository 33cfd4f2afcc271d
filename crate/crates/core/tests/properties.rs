use kahler_twistor::sample;
use kahler_twistor::{
    BilinearContext, Exact, FormFiber, FormSection, Involution, Kahler, PairingMatrix, Scalar, SpinGeometry,
    SpinorFiber, SpinorSection, TypeConvention, VectorFiber,
};
use proptest::prelude::*;

fn coeffs(len: usize) -> impl Strategy<Value = Vec<Exact>> {
    prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -3i64..=3], len)
        .prop_map(|v| v.into_iter().map(Exact::from_i64).collect())
}

fn form(m: usize) -> impl Strategy<Value = FormFiber<Exact>> {
    coeffs(1 << (2 * m)).prop_map(move |c| FormFiber::from_coeffs(m, c).unwrap())
}

fn vector(m: usize) -> impl Strategy<Value = VectorFiber<Exact>> {
    coeffs(2 * m).prop_map(move |c| VectorFiber::new(m, c).unwrap())
}

fn spinor(m: usize) -> impl Strategy<Value = SpinorFiber<Exact>> {
    coeffs(1 << m).prop_map(move |c| SpinorFiber::new(m, c).unwrap())
}

fn forms3(m: usize) -> impl Strategy<Value = (FormFiber<Exact>, FormFiber<Exact>, FormFiber<Exact>)> {
    (form(m), form(m), form(m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clifford_product_is_associative((a, b, c) in (1usize..=2).prop_flat_map(forms3)) {
        let left = a.clifford_mul(&b).unwrap().clifford_mul(&c).unwrap();
        let right = a.clifford_mul(&b.clifford_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn wedge_is_associative((a, b, c) in (1usize..=2).prop_flat_map(forms3)) {
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn grade_involution_is_an_automorphism((a, b, _) in (1usize..=2).prop_flat_map(forms3)) {
        let lhs = a.clifford_mul(&b).unwrap().involution(Involution::ETA);
        let rhs = a.involution(Involution::ETA).clifford_mul(&b.involution(Involution::ETA)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_squares_to_zero((a, x) in (1usize..=2).prop_flat_map(|m| (form(m), vector(m)))) {
        prop_assert!(a.contract(&x).unwrap().contract(&x).unwrap().is_zero());
    }

    #[test]
    fn kahler_form_is_invariant_under_j(m in 1usize..=3) {
        let k = Kahler::<Exact>::flat(m).unwrap();
        prop_assert!(k.j_derivation(k.kahler_form()).is_zero());
    }

    #[test]
    fn spinor_action_is_a_representation(
        (a, b, psi) in (1usize..=2).prop_flat_map(|m| (form(m), form(m), spinor(m)))
    ) {
        let m = psi.m();
        let geo = SpinGeometry::<Exact>::flat(m, TypeConvention::Spectral).unwrap();
        let rep = geo.rep();
        let lhs = rep.act(&a.clifford_mul(&b).unwrap(), &psi).unwrap();
        let rhs = rep.act(&a, &rep.act(&b, &psi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn square_map_is_additive_in_the_first_slot(
        (p1, p2, phi) in (1usize..=2).prop_flat_map(|m| (spinor(m), spinor(m), spinor(m))),
        inv in prop::sample::select(Involution::PAIRING_CHOICES.to_vec()),
    ) {
        let m = phi.m();
        let geo = SpinGeometry::<Exact>::flat(m, TypeConvention::Spectral).unwrap();
        let pm = PairingMatrix::build(geo.rep(), inv).unwrap();
        let ctx = BilinearContext::new(&geo, &pm).unwrap();
        let lhs = ctx.square_fiber(&p1.add(&p2), &phi);
        let rhs = ctx.square_fiber(&p1, &phi).add(&ctx.square_fiber(&p2, &phi));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sections_survive_a_json_round_trip(seed in any::<u64>(), m in 1usize..=2, degree in 0usize..=3) {
        let mut r = sample::rng(seed);
        let w = sample::form_section(&mut r, m, degree, 3, 0.2);
        prop_assert_eq!(FormSection::<Exact>::from_json(&w.to_json()).unwrap(), w);
        let psi = sample::spinor_section(&mut r, m, degree, 3);
        prop_assert_eq!(SpinorSection::<Exact>::from_json(&psi.to_json()).unwrap(), psi);
    }

    #[test]
    fn exterior_derivative_squares_to_zero(seed in any::<u64>(), m in 1usize..=2) {
        let w = sample::form_section(&mut sample::rng(seed), m, 3, 4, 0.2);
        prop_assert!(w.ext_d().ext_d().is_zero());
        prop_assert!(w.coderiv().coderiv().is_zero());
    }
}
