use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coefficient {
    pub re: BigRational,
    pub im: BigRational,
}

impl Coefficient {
    pub fn new(re: BigRational, im: BigRational) -> Coefficient {
        Coefficient { re, im }
    }

    pub fn zero() -> Coefficient {
        Coefficient::default()
    }

    pub fn one() -> Coefficient {
        Coefficient::from_int(1)
    }

    pub fn i() -> Coefficient {
        Coefficient::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Coefficient {
        Coefficient::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }

    pub fn ratio(num: i64, den: i64) -> Coefficient {
        Coefficient::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Coefficient {
        Coefficient::new(self.re.clone(), -self.im.clone())
    }

    /// `|c|²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn add(self, o: &Coefficient) -> Coefficient {
        Coefficient::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn sub(self, o: &Coefficient) -> Coefficient {
        Coefficient::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn mul(self, o: &Coefficient) -> Coefficient {
        Coefficient::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, o: &Coefficient) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = |q: &BigRational| match fmt_rational(&q.abs()).as_str() {
            "1" => "i".to_string(),
            s => format!("{s}i"),
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}", im(&self.im))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{sign}{}", fmt_rational(&self.re), im(&self.im))
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (BigInt, BigInt) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Accepts `r`, `ri`, `i`, `-i` and `r±si` with rationals `r`, `s` written
/// as `n` or `n/d`.
impl FromStr for Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Coefficient> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::parse(0, format!("malformed coefficient `{s}`"));
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(&t)
                .map(|re| Coefficient::new(re, BigRational::zero()))
                .ok_or_else(bad);
        };
        // Split `re ± im` at the last sign that is not leading.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (parse_rational(&body[..i]).ok_or_else(bad)?, &body[i..]),
            None => (BigRational::zero(), body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            x => parse_rational(x.strip_prefix('+').unwrap_or(x)).ok_or_else(bad)?,
        };
        Ok(Coefficient::new(re, im))
    }
}

/// A rational as a `[numerator, denominator]` pair of decimal strings.
pub fn rational_pair(q: &BigRational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

pub fn rational_from_pair(pair: &[String; 2]) -> Result<BigRational> {
    let n: BigInt = pair[0]
        .parse()
        .map_err(|_| Error::Schema(format!("bad numerator `{}`", pair[0])))?;
    let d: BigInt = pair[1]
        .parse()
        .map_err(|_| Error::Schema(format!("bad denominator `{}`", pair[1])))?;
    if d.is_zero() {
        return Err(Error::Schema("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

#[derive(Serialize, Deserialize)]
struct Wire {
    re: [String; 2],
    im: [String; 2],
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            re: rational_pair(&self.re),
            im: rational_pair(&self.im),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let re = rational_from_pair(&w.re).map_err(serde::de::Error::custom)?;
        let im = rational_from_pair(&w.im).map_err(serde::de::Error::custom)?;
        Ok(Coefficient::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let i = Coefficient::i();
        assert_eq!(&i * &i, Coefficient::from_int(-1));
        assert_eq!(i.conj(), -&i);
        let half = Coefficient::ratio(1, 2);
        assert_eq!(&half + &half, Coefficient::one());
        assert_eq!(
            (&half + &i).norm_sqr(),
            BigRational::new(5.into(), 4.into())
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["0", "1", "-3/4", "i", "-i", "2i", "1/2+i", "-1-3/5i", "7-i"] {
            let c: Coefficient = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert!("".parse::<Coefficient>().is_err());
        assert!("1/0".parse::<Coefficient>().is_err());
        assert!("x".parse::<Coefficient>().is_err());
    }

    #[test]
    fn serde_uses_numerator_denominator_pairs() {
        let c: Coefficient = "-1/2+3i".parse().unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"re":["-1","2"],"im":["3","1"]}"#);
        assert_eq!(serde_json::from_str::<Coefficient>(&json).unwrap(), c);
    }
}
