//! Serde helpers writing big integers and rationals as decimal strings.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

pub mod biguint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

pub mod opt_biguint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|x| x.to_str_radix(10)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|x| x.parse().map_err(D::Error::custom)).transpose()
    }
}

#[derive(Serialize, Deserialize)]
struct RatioRepr {
    numerator: String,
    denominator: String,
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RatioRepr {
            numerator: v.numer().to_str_radix(10),
            denominator: v.denom().to_str_radix(10),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let r = RatioRepr::deserialize(d)?;
        let num: BigInt = r.numerator.parse().map_err(D::Error::custom)?;
        let den: BigInt = r.denominator.parse().map_err(D::Error::custom)?;
        if den == BigInt::from(0) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

pub mod duration_secs {
    use super::*;
    use std::time::Duration;

    pub fn serialize<S: Serializer>(v: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(v.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let x = f64::deserialize(d)?;
        Duration::try_from_secs_f64(x).map_err(D::Error::custom)
    }
}
