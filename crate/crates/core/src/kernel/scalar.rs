//! Exact scalars over the rationals or a prime field.
//!
//! Every value in the library is either an arbitrary-precision rational in
//! canonical reduced form or a residue in `[0, p)` for a prime `p`. There is
//! no floating point anywhere: equality of scalars is structural equality and
//! arithmetic never rounds.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    /// The field of rational numbers.
    Rationals,
    /// The prime field GF(p).
    PrimeField(u64),
}

impl FieldSpec {
    /// Builds a prime-field spec, rejecting composite or undersized moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Mod { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::PrimeField(p) => Scalar::Mod { value: 1 % *p, modulus: *p },
        }
    }

    /// Embeds a signed integer into the field.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField(p) => {
                let p = *p;
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Mod { value: r, modulus: p }
            }
        }
    }

    /// Parses the textual scalar forms used by definition files: `a` or `a/b`
    /// over the rationals, a decimal residue in `[0, p)` over GF(p).
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self {
            FieldSpec::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), Some(d.trim())),
                    None => (s, None),
                };
                let n: BigInt = num
                    .parse()
                    .map_err(|_| Error::BadScalar(s.to_string()))?;
                let d: BigInt = match den {
                    Some(d) => d.parse().map_err(|_| Error::BadScalar(s.to_string()))?,
                    None => BigInt::one(),
                };
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            FieldSpec::PrimeField(p) => {
                let v: u64 = s.parse().map_err(|_| Error::BadScalar(s.to_string()))?;
                if v >= *p {
                    return Err(Error::BadScalar(format!("{s} out of range for GF({p})")));
                }
                Ok(Scalar::Mod { value: v, modulus: *p })
            }
        }
    }

    /// All field elements, for exhaustive sweeps. Only finite fields.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => Err(Error::UnsupportedField("rationals are infinite".into())),
            FieldSpec::PrimeField(p) => Ok((0..*p)
                .map(|v| Scalar::Mod { value: v, modulus: *p })
                .collect()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// Deterministic Miller–Rabin, exact for all `u64` with this base set.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// An exact field element. `Rational` values are kept in canonical reduced
/// form with positive denominator (the representation `BigRational` enforces);
/// `Mod` values are residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, modulus: u64 },
}

/// The four field operations, as data for the checked entry point.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Mod { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, modulus } => *value == 1 % *modulus,
        }
    }

    /// Checked field arithmetic: the only two failure modes are mixing fields
    /// and dividing by zero.
    pub fn binop(op: ScalarOp, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        if x.field() != y.field() {
            return Err(Error::FieldMismatch {
                left: x.field(),
                right: y.field(),
            });
        }
        match op {
            ScalarOp::Add => Ok(x.add_ref(y)),
            ScalarOp::Sub => Ok(x.sub_ref(y)),
            ScalarOp::Mul => Ok(x.mul_ref(y)),
            ScalarOp::Div => x.div_ref(y),
        }
    }

    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                assert_eq!(p, q, "scalar arithmetic across distinct fields");
                Scalar::Mod { value: (a + b) % p, modulus: *p }
            }
            _ => panic!("scalar arithmetic across distinct fields"),
        }
    }

    pub fn sub_ref(&self, other: &Scalar) -> Scalar {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                assert_eq!(p, q, "scalar arithmetic across distinct fields");
                Scalar::Mod {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => panic!("scalar arithmetic across distinct fields"),
        }
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rational(a) => Ok(Scalar::Rational(a.recip())),
            Scalar::Mod { value, modulus } => Ok(Scalar::Mod {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            }),
        }
    }

    pub fn div_ref(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Canonical text form: `a` or `a/b` over the rationals, the residue over
    /// GF(p). This is the form definition files use, so parse ∘ render = id.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => value.to_string(),
        }
    }

    /// The residue of a prime-field scalar.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    /// Reduces a rational scalar mod p (denominator inverted mod p).
    pub fn reduce_mod(&self, p: u64) -> Result<Scalar> {
        match self {
            Scalar::Mod { .. } => Err(Error::UnsupportedField(
                "reduce_mod expects a rational scalar".into(),
            )),
            Scalar::Rational(r) => {
                let pm = BigInt::from(p);
                let num = r.numer().mod_floor(&pm);
                let den = r.denom().mod_floor(&pm);
                let num = num.to_string().parse::<u64>().expect("reduced residue");
                let den = den.to_string().parse::<u64>().expect("reduced residue");
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Mod {
                    value: mul_mod(num, pow_mod(den, p - 2, p), p),
                    modulus: p,
                })
            }
        }
    }

    /// Rational scalars only: true if negative (used for pretty-printing).
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        FieldSpec::Rationals.parse(s).unwrap()
    }

    #[test]
    fn rational_addition_is_exact() {
        let sum = Scalar::binop(ScalarOp::Add, &q("1/2"), &q("1/3")).unwrap();
        assert_eq!(sum, q("5/6"));
        assert_eq!(sum.render(), "5/6");
    }

    #[test]
    fn modular_product_reduces() {
        let f = FieldSpec::prime(5).unwrap();
        let p = Scalar::binop(ScalarOp::Mul, &f.from_i64(3), &f.from_i64(4)).unwrap();
        assert_eq!(p, f.from_i64(2));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let err = Scalar::binop(ScalarOp::Div, &q("1"), &q("0")).unwrap_err();
        assert!(matches!(err, Error::DivisionByZero));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let f = FieldSpec::prime(5).unwrap();
        let err = Scalar::binop(ScalarOp::Add, &q("1"), &f.one()).unwrap_err();
        assert!(matches!(err, Error::FieldMismatch { .. }));
    }

    #[test]
    fn nonzero_scalars_invert() {
        for v in 1..7 {
            let f = FieldSpec::prime(7).unwrap();
            let x = f.from_i64(v);
            assert!(x.mul_ref(&x.inv().unwrap()).is_one());
        }
        let x = q("-3/7");
        assert!(x.mul_ref(&x.inv().unwrap()).is_one());
    }

    #[test]
    fn canonical_form_is_unique() {
        assert_eq!(q("2/4"), q("1/2"));
        assert_eq!(q("-1/-2"), q("1/2"));
        assert_eq!(q("-1/2").render(), "-1/2");
    }

    #[test]
    fn primality_is_checked() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(97).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(91).is_err());
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(u64::MAX));
    }

    #[test]
    fn reduction_mod_p_inverts_denominators() {
        let r = q("1/2").reduce_mod(5).unwrap();
        assert_eq!(r.residue(), Some(3));
    }
}
