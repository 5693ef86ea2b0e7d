//! Exact coefficient rings: ℤ, ℚ and ℤ/p.
//!
//! Every element is stored as a fully reduced [`BigRational`] with positive
//! denominator, so equality is structural. Over ℤ the denominator is always 1;
//! over ℤ/p the value is the integer representative in `0..p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, parse_err, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coeff(BigRational);

impl Coeff {
    pub fn zero() -> Self {
        Coeff(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// Integer value, when the element is integral.
    pub fn to_bigint(&self) -> Option<BigInt> {
        self.0.is_integer().then(|| self.0.to_integer())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Parses `n`, `-n` or `p/q` into an exact rational (no ring reduction).
pub fn parse_rational(tok: &str) -> Result<BigRational> {
    let tok = tok.trim();
    let bad = || parse_err!("malformed coefficient '{tok}'");
    match tok.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(parse_err!("zero denominator in '{tok}'"));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(tok).map_err(|_| bad())?)),
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(RingSpec::PrimeField(p))
        } else {
            Err(invalid!("modulus {p} is not prime"))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn zero(&self) -> Coeff {
        Coeff::zero()
    }

    pub fn one(&self) -> Coeff {
        Coeff(BigRational::one())
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.reduce_int(BigInt::from(n))
    }

    fn reduce_int(&self, n: BigInt) -> Coeff {
        match self {
            RingSpec::PrimeField(p) => Coeff(BigRational::from_integer(n.mod_floor(&BigInt::from(*p)))),
            _ => Coeff(BigRational::from_integer(n)),
        }
    }

    /// Brings an exact rational into the ring, failing when it has no image
    /// (a proper fraction over ℤ, or a denominator divisible by p).
    pub fn embed(&self, q: &BigRational) -> Result<Coeff> {
        match self {
            RingSpec::Rationals => Ok(Coeff(q.clone())),
            RingSpec::Integers => {
                if q.is_integer() {
                    Ok(Coeff(q.clone()))
                } else {
                    Err(invalid!("{} is not an integer", Coeff(q.clone())))
                }
            }
            RingSpec::PrimeField(p) => {
                let num = self.reduce_int(q.numer().clone());
                let den = self.reduce_int(q.denom().clone());
                let inv = self.inv(&den).ok_or_else(|| {
                    invalid!("{} has no image in Z/{p}: denominator divisible by {p}", Coeff(q.clone()))
                })?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    pub fn parse(&self, tok: &str) -> Result<Coeff> {
        self.embed(&parse_rational(tok)?)
    }

    /// Is `x` a legal element of this ring in canonical form?
    pub fn contains(&self, x: &Coeff) -> bool {
        match self {
            RingSpec::Rationals => true,
            RingSpec::Integers => x.is_integer(),
            RingSpec::PrimeField(p) => x.is_integer() && !x.numer().is_negative() && x.numer() < &BigInt::from(*p),
        }
    }

    pub fn add(&self, x: &Coeff, y: &Coeff) -> Coeff {
        match self {
            RingSpec::PrimeField(_) => self.reduce_int(x.numer() + y.numer()),
            _ => Coeff(&x.0 + &y.0),
        }
    }

    pub fn sub(&self, x: &Coeff, y: &Coeff) -> Coeff {
        match self {
            RingSpec::PrimeField(_) => self.reduce_int(x.numer() - y.numer()),
            _ => Coeff(&x.0 - &y.0),
        }
    }

    pub fn neg(&self, x: &Coeff) -> Coeff {
        match self {
            RingSpec::PrimeField(_) => self.reduce_int(-x.numer()),
            _ => Coeff(-&x.0),
        }
    }

    pub fn mul(&self, x: &Coeff, y: &Coeff) -> Coeff {
        match self {
            RingSpec::PrimeField(_) => self.reduce_int(x.numer() * y.numer()),
            _ => Coeff(&x.0 * &y.0),
        }
    }

    /// Multiplicative inverse, if `x` is a unit.
    pub fn inv(&self, x: &Coeff) -> Option<Coeff> {
        if x.is_zero() {
            return None;
        }
        match self {
            RingSpec::Rationals => Some(Coeff(x.0.recip())),
            RingSpec::Integers => {
                let n = x.numer();
                (n.abs().is_one()).then(|| x.clone())
            }
            RingSpec::PrimeField(p) => {
                let p = BigInt::from(*p);
                let e = x.numer().extended_gcd(&p);
                e.gcd.is_one().then(|| self.reduce_int(e.x))
            }
        }
    }

    pub fn is_unit(&self, x: &Coeff) -> bool {
        self.inv(x).is_some()
    }

    pub fn sign(&self, s: i32) -> Coeff {
        self.from_i64(s as i64)
    }

    pub fn name(&self) -> String {
        match self {
            RingSpec::Integers => "Z".into(),
            RingSpec::Rationals => "Q".into(),
            RingSpec::PrimeField(p) => format!("F{p}"),
        }
    }

    /// Reads `Z`, `Q`, `Fp` (with `modulus`), or a literal `F<p>` such as `F3`.
    pub fn from_name(name: &str, modulus: Option<u64>) -> Result<Self> {
        let name = name.trim();
        match name {
            "Z" | "integers" => {
                if modulus.is_some() {
                    return Err(invalid!("modulus given for ring Z"));
                }
                Ok(RingSpec::Integers)
            }
            "Q" | "rationals" => {
                if modulus.is_some() {
                    return Err(invalid!("modulus given for ring Q"));
                }
                Ok(RingSpec::Rationals)
            }
            "Fp" | "prime-field" => match modulus {
                Some(p) => RingSpec::prime_field(p),
                None => Err(invalid!("ring {name} requires a modulus")),
            },
            _ => match name.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
                Some(p) => {
                    if modulus.is_some_and(|m| m != p) {
                        return Err(invalid!("ring {name} conflicts with modulus {}", modulus.unwrap()));
                    }
                    RingSpec::prime_field(p)
                }
                None => Err(invalid!("unknown ring '{name}' (expected Z, Q or Fp)")),
            },
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => *p,
            _ => 0,
        }
    }
}

/// Small-integer view for reporting; `None` for fractions or huge values.
pub fn as_i64(x: &Coeff) -> Option<i64> {
    x.to_bigint().and_then(|n| n.to_i64())
}
