use monobasis::multiindex::{count_up_to_length, enumerate, rank};
use monobasis::polynomial::{exact, sum_all, ExactComplex};
use monobasis::{ExactPoly, MultiIndex};
use num_traits::Zero;
use proptest::prelude::*;

fn arb_exact_poly(max_degree: u32, max_len: usize) -> impl Strategy<Value = ExactPoly> {
    (1..=max_degree, 1..=max_len).prop_flat_map(|(degree, len)| {
        let basis = enumerate(degree, len);
        let n = basis.len();
        prop::collection::vec((-5i64..=5, -5i64..=5, 1i64..=4), n).prop_map(move |coeffs| {
            ExactPoly::from_terms(
                degree,
                basis
                    .iter()
                    .zip(coeffs)
                    .map(|(m, (re, im, den))| (m.clone(), exact(re, im, den))),
            )
            .unwrap()
        })
    })
}

fn arb_point(len: usize) -> impl Strategy<Value = Vec<ExactComplex>> {
    prop::collection::vec((-3i64..=3, -3i64..=3, 1i64..=3), len)
        .prop_map(|v| v.into_iter().map(|(re, im, den)| exact(re, im, den)).collect())
}

proptest! {
    #[test]
    fn telescope_equals_length_split(p in arb_exact_poly(4, 5)) {
        let cut = p.max_length().max(1);
        let parts = p.telescope_split(cut).unwrap();
        let by_length = p.length_split();
        for (i, q) in parts.iter().enumerate() {
            let expected = by_length.get(&(i + 1)).cloned().unwrap_or_else(|| ExactPoly::zero(p.degree()));
            prop_assert_eq!(q, &expected);
        }
        prop_assert_eq!(sum_all(p.degree(), parts.iter()).unwrap(), p);
    }

    #[test]
    fn components_sum_pointwise(p in arb_exact_poly(3, 4), z in arb_point(4)) {
        let total = p.length_split().values().fold(ExactComplex::zero(), |acc, q| acc + q.evaluate(&z));
        prop_assert_eq!(total, p.evaluate(&z));
    }

    #[test]
    fn restriction_zeroes_trailing_coordinates(p in arb_exact_poly(3, 4), z in arb_point(4), k in 0usize..=4) {
        let mut truncated = z.clone();
        truncated.iter_mut().skip(k).for_each(|c| *c = ExactComplex::zero());
        prop_assert_eq!(p.restrict(k).evaluate(&z), p.evaluate(&truncated));
    }

    #[test]
    fn factor_and_multiply_are_inverse(p in arb_exact_poly(4, 5), z in arb_point(5)) {
        for (k, q) in p.length_split() {
            let r = q.reduce_by_last_variable(k).unwrap();
            prop_assert_eq!(r.degree() + 1, q.degree());
            prop_assert_eq!(r.multiply_by_coordinate(k).unwrap(), q.clone());
            prop_assert_eq!(r.evaluate(&z) * z[k - 1].clone(), q.evaluate(&z));
        }
    }

    #[test]
    fn projection_is_an_idempotent_linear_filter(
        p in arb_exact_poly(3, 4),
        s in 0u64..40,
        t in 0u64..40,
    ) {
        let ps = p.project(s).unwrap();
        prop_assert_eq!(ps.project(s).unwrap(), ps.clone());
        prop_assert_eq!(p.project(t).unwrap().project(s).unwrap(), p.project(s.min(t)).unwrap());
        for (m, _) in ps.terms() {
            prop_assert!(rank(m).unwrap() <= s);
        }
        let total = count_up_to_length(p.degree(), p.max_length()).unwrap();
        for r in 1..=total {
            let expected = if r <= s { p.coefficient_at_rank(r).unwrap() } else { ExactComplex::zero() };
            prop_assert_eq!(ps.coefficient_at_rank(r).unwrap(), expected);
        }
    }

    #[test]
    fn projection_is_linear(a in arb_exact_poly(2, 3), b in arb_exact_poly(2, 3), s in 0u64..10) {
        prop_assume!(a.degree() == b.degree());
        let two = exact(2, 0, 1);
        let lhs = a.try_add(&b.scale(&two)).unwrap().project(s).unwrap();
        let rhs = a.project(s).unwrap().try_add(&b.project(s).unwrap().scale(&two)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn mismatched_degrees_are_rejected() {
    let a = ExactPoly::monomial(MultiIndex::from_exponents(&[2]), exact(1, 0, 1));
    let b = ExactPoly::monomial(MultiIndex::from_exponents(&[1]), exact(1, 0, 1));
    assert!(a.try_add(&b).is_err());
    assert!(ExactPoly::from_terms(2, [(MultiIndex::from_exponents(&[1]), exact(1, 0, 1))]).is_err());
}
