//! Certified computations for genus-2 curves with complex multiplication by
//! cyclic quartic CM fields.

pub mod arith;
pub mod ball;
pub mod character;
pub mod classgroup;
pub mod ideal;
pub mod lattice;
pub mod nf;
pub mod polarize;
pub mod siegel;
pub mod theta;
pub mod analytic;
pub mod error;
pub mod fieldenum;

pub use error::{Error, Result};

/// Serde adapters writing big integers as decimal strings.
pub mod serde_int {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let s = String::deserialize(d)?;
        Integer::from_str_radix(&s, 10).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use rug::Integer;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| x.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| Integer::from_str_radix(s, 10).map_err(serde::de::Error::custom)).collect()
        }
    }
}

/// Serde adapter writing rationals as "p/q" (or "p") strings.
pub mod serde_rat {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        crate::arith::parse_decimal(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {}", s)))
    }
}
