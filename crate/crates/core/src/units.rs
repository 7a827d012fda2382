//! Physical quantities with mandatory units in configuration files.
//!
//! A quantity is written as a number, whitespace, and a unit symbol, for
//! example `"0.12 ms"` or `"5 Hz"`. Values are stored in SI and serialised
//! back in the SI unit of their dimension, so a parse/serialise/parse cycle
//! reproduces the stored value bit for bit. A bare number is rejected.

use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub trait Dimension {
    const NAME: &'static str;
    const SI_UNIT: &'static str;
    /// Accepted unit symbols and their factor to the SI unit.
    const UNITS: &'static [(&'static str, f64)];
}

macro_rules! dimension {
    ($ty:ident, $name:literal, $si:literal, [$(($sym:literal, $f:expr)),* $(,)?]) => {
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $ty;
        impl Dimension for $ty {
            const NAME: &'static str = $name;
            const SI_UNIT: &'static str = $si;
            const UNITS: &'static [(&'static str, f64)] = &[$(($sym, $f)),*];
        }
    };
}

dimension!(Time, "time", "s", [
    ("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("µs", 1e-6), ("μs", 1e-6), ("ns", 1e-9),
]);
dimension!(Length, "length", "m", [
    ("m", 1.0), ("mm", 1e-3), ("um", 1e-6), ("µm", 1e-6), ("μm", 1e-6), ("nm", 1e-9),
]);
// Cyclic frequency; multiply by 2π for an angular frequency.
dimension!(Frequency, "frequency", "Hz", [("Hz", 1.0), ("kHz", 1e3)]);
dimension!(Rate, "rate", "1/s", [
    ("1/s", 1.0), ("s^-1", 1.0), ("rad/s", 1.0), ("1/ms", 1e3), ("rad/ms", 1e3),
]);
dimension!(Wavenumber, "wavenumber", "rad/m", [
    ("rad/m", 1.0), ("1/m", 1.0), ("m^-1", 1.0), ("rad/um", 1e6), ("1/um", 1e6),
]);
dimension!(Mass, "mass", "kg", [("kg", 1.0), ("u", 1.660_539_066_60e-27)]);
dimension!(Angle, "angle", "rad", [
    ("rad", 1.0), ("mrad", 1e-3), ("deg", std::f64::consts::PI / 180.0),
]);
dimension!(InteractionStrength, "1D interaction strength", "J m", [
    ("J m", 1.0), ("J*m", 1.0),
]);

pub struct Quantity<D> {
    si: f64,
    _dim: PhantomData<fn() -> D>,
}

impl<D> Quantity<D> {
    pub const fn si(value: f64) -> Self {
        Quantity { si: value, _dim: PhantomData }
    }

    pub fn value(&self) -> f64 {
        self.si
    }
}

impl<D> Clone for Quantity<D> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<D> Copy for Quantity<D> {}

impl<D> PartialEq for Quantity<D> {
    fn eq(&self, other: &Self) -> bool {
        self.si == other.si
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<D: Dimension> fmt::Display for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}", self.si, D::SI_UNIT)
    }
}

impl<D: Dimension> FromStr for Quantity<D> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let split = s.find(char::is_whitespace).ok_or_else(|| {
            Error::config(format!(
                "`{s}` has no unit; a {} needs one of {}",
                D::NAME,
                unit_list::<D>()
            ))
        })?;
        let (num, unit) = s.split_at(split);
        let unit = unit.trim();
        let value: f64 = num
            .parse()
            .map_err(|_| Error::config(format!("`{num}` is not a number")))?;
        let factor = D::UNITS
            .iter()
            .find(|(sym, _)| *sym == unit)
            .map(|(_, f)| *f)
            .ok_or_else(|| {
                Error::config(format!(
                    "unknown {} unit `{unit}` (expected one of {})",
                    D::NAME,
                    unit_list::<D>()
                ))
            })?;
        if !value.is_finite() {
            return Err(Error::config(format!("`{s}` is not finite")));
        }
        Ok(Quantity::si(value * factor))
    }
}

fn unit_list<D: Dimension>() -> String {
    D::UNITS.iter().map(|(s, _)| *s).collect::<Vec<_>>().join(", ")
}

impl<D: Dimension> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> Result<Self, De::Error> {
        struct QVisitor<D>(PhantomData<fn() -> D>);

        impl<D: Dimension> Visitor<'_> for QVisitor<D> {
            type Value = Quantity<D>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a {} with an explicit unit, e.g. \"1 {}\"", D::NAME, D::SI_UNIT)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse().map_err(|e: Error| E::custom(e))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Err(E::custom(format!(
                    "unitless value {v} for a {}; write e.g. \"{v} {}\"",
                    D::NAME,
                    D::SI_UNIT
                )))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }
        }

        deserializer.deserialize_any(QVisitor(PhantomData))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_prefixed_units() {
        let t: Quantity<Time> = "0.12 ms".parse().unwrap();
        assert!((t.value() - 1.2e-4).abs() < 1e-18);
        let x: Quantity<Length> = "0.55 µm".parse().unwrap();
        assert!((x.value() - 0.55e-6).abs() < 1e-20);
        let f: Quantity<Frequency> = "5 Hz".parse().unwrap();
        assert_eq!(f.value(), 5.0);
    }

    #[test]
    fn rejects_missing_or_wrong_unit() {
        assert!("0.12".parse::<Quantity<Time>>().is_err());
        assert!("0.12 mm".parse::<Quantity<Time>>().is_err());
        assert!("fast ms".parse::<Quantity<Time>>().is_err());
    }

    #[test]
    fn display_round_trips_exactly() {
        let t: Quantity<Time> = "0.12 ms".parse().unwrap();
        let again: Quantity<Time> = t.to_string().parse().unwrap();
        assert_eq!(t.value().to_bits(), again.value().to_bits());
    }

    #[test]
    fn toml_rejects_bare_number() {
        #[derive(Deserialize)]
        struct S {
            #[allow(dead_code)]
            t: Quantity<Time>,
        }
        assert!(toml::from_str::<S>("t = 0.12").is_err());
        assert!(toml::from_str::<S>("t = \"0.12 ms\"").is_ok());
    }
}
