use flatcover::exactnum::{qn_sign, rational_embed, QuadNumber, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn quad(d: u32) -> impl Strategy<Value = QuadNumber> {
    (rational(), rational()).prop_map(move |(a, b)| QuadNumber::new(a, b, d).unwrap())
}

fn field() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn triple() -> impl Strategy<Value = (QuadNumber, QuadNumber, QuadNumber)> {
    field().prop_flat_map(|d| (quad(d), quad(d), quad(d)))
}

proptest! {
    #[test]
    fn field_axioms((x, y, z) in triple()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inverse().unwrap(), QuadNumber::one());
        }
    }

    #[test]
    fn sign_is_multiplicative((x, y, _z) in triple()) {
        prop_assert_eq!(qn_sign(&(&x * &y)), qn_sign(&x) * qn_sign(&y));
        let f = x.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(qn_sign(&x), if f > 0.0 { 1 } else { -1 });
        }
    }

    #[test]
    fn embedding_is_linear((x, y, _z) in triple(), r in rational()) {
        let [a, b] = rational_embed(&(&x + &y));
        let [xa, xb] = rational_embed(&x);
        let [ya, yb] = rational_embed(&y);
        prop_assert_eq!((a, b), (&xa + &ya, &xb + &yb));
        let [sa, sb] = rational_embed(&x.scale(&r));
        prop_assert_eq!((sa, sb), (&xa * &r, &xb * &r));
    }

    #[test]
    fn text_round_trip((x, _y, _z) in triple()) {
        let back: QuadNumber = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}
