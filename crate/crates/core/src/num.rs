//! Exact rational helpers: parsing, printing, f64 conversion and serde adapters.
//!
//! Rationals are written as decimal strings when the denominator has only
//! factors 2 and 5, and as `p/q` otherwise. Parsing accepts both forms as well
//! as plain JSON numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    ratio(1, 2)
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge numerators and denominators together.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Exact conversion of a finite f64.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Round `v` to the nearest multiple of `2^-bits`.
pub fn from_f64_grid(v: f64, bits: u32) -> Rational {
    let scale = (2f64).powi(bits as i32);
    let n = (v * scale).round();
    Rational::new(BigInt::from(n as i128), BigInt::one() << bits as usize)
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{ip}{fp}");
    let n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut q = Rational::from_integer(n);
    if scale >= 0 {
        q *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

/// Canonical text form: exact decimal when possible, else `p/q`.
pub fn format(q: &Rational) -> String {
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut a, mut b) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let places = a.max(b);
    let scaled = q * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    if places == 0 {
        return n.to_string();
    }
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = places + 1);
    let (ip, fp) = digits.split_at(digits.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

pub mod serde_q {
    //! `#[serde(with = "...")]` adapters for [`Rational`](super::Rational).
    use super::Rational;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(q))
    }

    struct QVisitor;

    impl<'de> Visitor<'de> for QVisitor {
        type Value = Rational;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational as a decimal string, p/q string or number")
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            super::parse(v).map_err(E::custom)
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(super::int(v))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }
        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
            super::parse(&format!("{v:e}")).map_err(E::custom)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(QVisitor)
    }

    /// Newtype used to reuse the adapters inside containers.
    #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
    pub struct Q(pub Rational);

    impl serde::Serialize for Q {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize(&self.0, s)
        }
    }

    impl<'de> serde::Deserialize<'de> for Q {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
            deserialize(d).map(Q)
        }
    }

    pub mod vec {
        use super::{Q, Rational};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let w: Vec<Q> = v.iter().cloned().map(Q).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Ok(Vec::<Q>::deserialize(d)?.into_iter().map(|q| q.0).collect())
        }
    }

    pub mod vec_vec {
        use super::{Q, Rational};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let w: Vec<Vec<Q>> = v.iter().map(|r| r.iter().cloned().map(Q).collect()).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
            Ok(Vec::<Vec<Q>>::deserialize(d)?
                .into_iter()
                .map(|r| r.into_iter().map(|q| q.0).collect())
                .collect())
        }
    }

    pub mod option {
        use super::{Q, Rational};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            v.clone().map(Q).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Ok(Option::<Q>::deserialize(d)?.map(|q| q.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse("5/4").unwrap(), ratio(5, 4));
        assert_eq!(parse("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse(".5").unwrap(), half());
        assert!(parse("abc").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn format_round_trip() {
        for q in [ratio(5, 4), ratio(1, 3), int(7), ratio(-1, 8), ratio(3, 1000), zero()] {
            assert_eq!(parse(&format(&q)).unwrap(), q);
        }
        assert_eq!(format(&ratio(5, 4)), "1.25");
        assert_eq!(format(&ratio(-1, 8)), "-0.125");
        assert_eq!(format(&ratio(1, 3)), "1/3");
        assert_eq!(format(&int(12)), "12");
    }

    #[test]
    fn grid_rounding() {
        assert_eq!(from_f64_grid(0.5, 10), half());
        assert_eq!(to_f64(&ratio(1, 4)), 0.25);
    }
}
