use fq_smarandache::factor::{factorize, CantorZassenhaus, Factorizer};
use fq_smarandache::smarandache::{rep_compose, rep_decompose, s, s_oracle_valuation, RepDecomposition};
use fq_smarandache::{FieldSpec, Nat, Poly};
use proptest::prelude::*;

fn field(q: u64) -> FieldSpec {
    FieldSpec::of_order(q).unwrap()
}

fn any_field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27]).prop_map(field)
}

fn poly_in(f: FieldSpec, max_len: usize) -> impl Strategy<Value = Poly> {
    let q = f.q() as u32;
    prop::collection::vec(0..q, 0..=max_len)
        .prop_map(move |c| Poly::from_indices(&f, &c.iter().map(|&x| x as u64).collect::<Vec<_>>()).unwrap())
}

fn field_and_poly(max_len: usize) -> impl Strategy<Value = (FieldSpec, Poly)> {
    any_field().prop_flat_map(move |f| (Just(f.clone()), poly_in(f, max_len)))
}

proptest! {
    #[test]
    fn delta_round_trip((f, g) in field_and_poly(24)) {
        prop_assert_eq!(Poly::from_delta(&f, &g.delta()), g);
    }

    #[test]
    fn delta_inv_round_trip(q in prop::sample::select(vec![2u64, 3, 5, 9]), m in any::<u64>()) {
        let f = field(q);
        prop_assert_eq!(Poly::from_delta_u64(&f, m).delta(), Nat::from(m));
    }

    #[test]
    fn compare_agrees_with_delta((f, a) in field_and_poly(10), b_seed in any::<u64>()) {
        let mut b = Poly::from_delta_u64(&f, b_seed % f.q().pow(6));
        if b_seed % 5 == 0 {
            b = a.clone();
        }
        prop_assert_eq!(a.compare(&b).unwrap(), a.delta().cmp(&b.delta()));
    }

    #[test]
    fn ring_laws((f, a) in field_and_poly(12), seed in any::<u64>()) {
        let b = Poly::from_delta_u64(&f, seed % 100_000);
        let c = Poly::from_delta_u64(&f, seed / 7 % 100_000);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            let (qq, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&qq * &b) + &r, a.clone());
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }
    }

    #[test]
    fn factorization_reconstructs((_f, g) in field_and_poly(40)) {
        prop_assume!(!g.is_zero());
        let fz = CantorZassenhaus::new(9).factorize(&g).unwrap();
        prop_assert_eq!(fz.reconstruct(), g);
    }

    #[test]
    fn s_ignores_scalars((f, g) in field_and_poly(10), a in 1u32..27) {
        let a = a % f.q() as u32;
        prop_assume!(a != 0);
        prop_assert_eq!(s(&g.scale(a)), s(&g));
    }

    #[test]
    fn s_output_divisible_by_t((_f, g) in field_and_poly(14)) {
        prop_assert!(s(&g).divisible_by_t());
    }

    #[test]
    fn s_matches_valuation_oracle(q in prop::sample::select(vec![2u64, 3, 4, 5]), m in 1u64..20_000) {
        let g = Poly::from_delta_u64(&field(q), m);
        prop_assert_eq!(s(&g), s_oracle_valuation(&g).unwrap());
    }

    #[test]
    fn s_divides_factorial_bound((f, g) in field_and_poly(8)) {
        prop_assume!(!g.is_constant());
        let deg = g.degree().unwrap();
        prop_assert!(s(&g) <= Poly::t_pow(&f, deg));
        let top = factorize(&g).unwrap().max_irreducible().unwrap().degree().unwrap();
        prop_assert!(s(&g) >= Poly::t_pow(&f, top));
    }

    #[test]
    fn rep_round_trip(e in 1u64..u64::MAX, base in 2u64..1000) {
        let r = rep_decompose(&Nat::from(e), &Nat::from(base)).unwrap();
        let checked = RepDecomposition::new(Nat::from(base), r.terms().to_vec()).unwrap();
        prop_assert_eq!(rep_compose(&checked), Nat::from(e));
    }
}
