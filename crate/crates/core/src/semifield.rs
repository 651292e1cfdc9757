//! Selective idempotent semifields and their scalars.
//!
//! Two instances are provided:
//!
//! | Kind | ⊕ | ⊗ | ε (zero) | 𝟙 (one) | order |
//! |------|---|---|----------|---------|-------|
//! | [`SemifieldKind::MaxPlus`] | max | + | −∞ | 0 | natural |
//! | [`SemifieldKind::MinTimes`] | min | × | +∞ | 1 | reversed |
//!
//! Scalars carry either an exact rational or an `f64`; the [`Semifield`]
//! value fixes which one and, for floats, the absolute comparison tolerance.
//! ε is a distinguished variant rather than an extreme carrier value, so both
//! instances share a single representation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default absolute tolerance for floating mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SemifieldKind {
    MaxPlus,
    MinTimes,
}

impl SemifieldKind {
    pub fn name(self) -> &'static str {
        match self {
            SemifieldKind::MaxPlus => "max-plus",
            SemifieldKind::MinTimes => "min-times",
        }
    }
}

impl fmt::Display for SemifieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemifieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max-plus" | "maxplus" | "max,+" => Ok(SemifieldKind::MaxPlus),
            "min-times" | "mintimes" | "min,x" => Ok(SemifieldKind::MinTimes),
            other => Err(Error::InvalidScalar {
                token: other.to_string(),
                reason: "unknown semifield, expected max-plus or min-times".into(),
            }),
        }
    }
}

/// Carrier arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Arithmetic {
    /// Exact rationals; equality is structural.
    Exact,
    /// `f64` with an absolute tolerance for order and equality tests.
    Float { tolerance: f64 },
}

impl Arithmetic {
    pub fn is_exact(self) -> bool {
        matches!(self, Arithmetic::Exact)
    }
}

/// One element of a semifield: ε or a finite carrier value.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Zero,
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Zero)
    }

    /// The carrier value as an `f64`, or `None` for ε.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Zero => None,
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(v) => Some(*v),
        }
    }

    /// The carrier value when it is an exact integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Exact(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Zero => f.write_str("eps"),
            Scalar::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

enum Carrier<'a> {
    Exact(&'a BigRational),
    Float(f64),
}

fn carrier(s: &Scalar) -> Option<Carrier<'_>> {
    match s {
        Scalar::Zero => None,
        Scalar::Exact(r) => Some(Carrier::Exact(r)),
        Scalar::Float(v) => Some(Carrier::Float(*v)),
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A semifield instance: the algebra plus the carrier arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Semifield {
    kind: SemifieldKind,
    arithmetic: Arithmetic,
}

impl Semifield {
    pub fn new(kind: SemifieldKind, arithmetic: Arithmetic) -> Self {
        Self { kind, arithmetic }
    }

    pub fn max_plus() -> Self {
        Self::new(SemifieldKind::MaxPlus, Arithmetic::Exact)
    }

    pub fn min_times() -> Self {
        Self::new(SemifieldKind::MinTimes, Arithmetic::Exact)
    }

    /// Same algebra with floating carriers and the given absolute tolerance.
    pub fn with_tolerance(self, tolerance: f64) -> Self {
        Self::new(self.kind, Arithmetic::Float { tolerance })
    }

    pub fn kind(&self) -> SemifieldKind {
        self.kind
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic
    }

    pub fn is_exact(&self) -> bool {
        self.arithmetic.is_exact()
    }

    pub fn zero(&self) -> Scalar {
        Scalar::Zero
    }

    pub fn one(&self) -> Scalar {
        let v = match self.kind {
            SemifieldKind::MaxPlus => 0,
            SemifieldKind::MinTimes => 1,
        };
        self.wrap_rational(BigRational::from_integer(v.into()))
    }

    /// Finite scalar from an integer carrier value.
    pub fn int(&self, value: i64) -> Result<Scalar> {
        self.rational(BigRational::from_integer(value.into()))
    }

    /// Finite scalar from an exact rational carrier value.
    pub fn rational(&self, value: BigRational) -> Result<Scalar> {
        if self.kind == SemifieldKind::MinTimes && !value.is_positive() {
            return Err(Error::InvalidScalar {
                token: value.to_string(),
                reason: "min-times carrier must be positive".into(),
            });
        }
        Ok(self.wrap_rational(value))
    }

    /// Finite scalar from a floating carrier value.
    pub fn float(&self, value: f64) -> Result<Scalar> {
        if !value.is_finite() {
            return Err(Error::InvalidScalar {
                token: value.to_string(),
                reason: "carrier must be finite; use the zero token for ε".into(),
            });
        }
        if self.kind == SemifieldKind::MinTimes && value <= 0.0 {
            return Err(Error::InvalidScalar {
                token: value.to_string(),
                reason: "min-times carrier must be positive".into(),
            });
        }
        match self.arithmetic {
            Arithmetic::Float { .. } => Ok(Scalar::Float(value)),
            Arithmetic::Exact => BigRational::from_float(value)
                .ok_or_else(|| Error::InvalidScalar {
                    token: value.to_string(),
                    reason: "not representable".into(),
                })
                .map(Scalar::Exact),
        }
    }

    fn wrap_rational(&self, value: BigRational) -> Scalar {
        match self.arithmetic {
            Arithmetic::Exact => Scalar::Exact(value),
            Arithmetic::Float { .. } => Scalar::Float(rational_to_f64(&value)),
        }
    }

    fn tolerance(&self) -> f64 {
        match self.arithmetic {
            Arithmetic::Exact => 0.0,
            Arithmetic::Float { tolerance } => tolerance,
        }
    }

    /// Natural order of two finite carriers, with the float tolerance applied.
    fn carrier_cmp(&self, a: &Carrier<'_>, b: &Carrier<'_>) -> Ordering {
        match (a, b) {
            (Carrier::Exact(x), Carrier::Exact(y)) => x.cmp(y),
            _ => {
                let x = match a {
                    Carrier::Exact(r) => rational_to_f64(r),
                    Carrier::Float(v) => *v,
                };
                let y = match b {
                    Carrier::Exact(r) => rational_to_f64(r),
                    Carrier::Float(v) => *v,
                };
                if (x - y).abs() <= self.tolerance() {
                    Ordering::Equal
                } else if x < y {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// Total order induced by ⊕ (`a ≤ b` iff `a ⊕ b = b`).
    pub fn cmp(&self, a: &Scalar, b: &Scalar) -> Ordering {
        match (carrier(a), carrier(b)) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => {
                let natural = self.carrier_cmp(&x, &y);
                match self.kind {
                    SemifieldKind::MaxPlus => natural,
                    SemifieldKind::MinTimes => natural.reverse(),
                }
            }
        }
    }

    pub fn leq(&self, a: &Scalar, b: &Scalar) -> bool {
        self.cmp(a, b) != Ordering::Greater
    }

    pub fn lt(&self, a: &Scalar, b: &Scalar) -> bool {
        self.cmp(a, b) == Ordering::Less
    }

    /// Equality; exact in exact mode, within tolerance in floating mode.
    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        self.cmp(a, b) == Ordering::Equal
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        self.eq(a, &self.one())
    }

    /// a ⊕ b; always returns one of the operands.
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if self.lt(a, b) {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// Greatest lower bound of a and b in the semifield order.
    pub fn meet(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if self.lt(b, a) {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// a ⊗ b.
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let (x, y) = match (carrier(a), carrier(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Scalar::Zero,
        };
        match (x, y) {
            (Carrier::Exact(x), Carrier::Exact(y)) => Scalar::Exact(match self.kind {
                SemifieldKind::MaxPlus => x + y,
                SemifieldKind::MinTimes => x * y,
            }),
            (x, y) => {
                let (x, y) = (float_of(&x), float_of(&y));
                Scalar::Float(match self.kind {
                    SemifieldKind::MaxPlus => x + y,
                    SemifieldKind::MinTimes => x * y,
                })
            }
        }
    }

    /// Multiplicative inverse; ε has none.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match a {
            Scalar::Zero => Err(Error::ZeroInverse),
            Scalar::Exact(r) => Ok(Scalar::Exact(match self.kind {
                SemifieldKind::MaxPlus => -r,
                SemifieldKind::MinTimes => r.recip(),
            })),
            Scalar::Float(v) => Ok(Scalar::Float(match self.kind {
                SemifieldKind::MaxPlus => -v,
                SemifieldKind::MinTimes => v.recip(),
            })),
        }
    }

    /// Integer power: `x⁰ = 𝟙`, negative exponents invert, `εᵖ = ε` for `p ≥ 1`.
    pub fn pow(&self, a: &Scalar, exponent: i64) -> Result<Scalar> {
        match a {
            Scalar::Zero if exponent >= 1 => Ok(Scalar::Zero),
            Scalar::Zero => Err(Error::ZeroPower(exponent)),
            Scalar::Exact(r) => Ok(Scalar::Exact(match self.kind {
                SemifieldKind::MaxPlus => r * BigRational::from_integer(exponent.into()),
                SemifieldKind::MinTimes => {
                    let magnitude = i32::try_from(exponent.unsigned_abs()).map_err(|_| {
                        Error::InvalidScalar {
                            token: exponent.to_string(),
                            reason: "exponent out of range".into(),
                        }
                    })?;
                    let p = num_traits::pow(r.clone(), magnitude as usize);
                    if exponent < 0 {
                        p.recip()
                    } else {
                        p
                    }
                }
            })),
            Scalar::Float(v) => Ok(Scalar::Float(match self.kind {
                SemifieldKind::MaxPlus => v * exponent as f64,
                SemifieldKind::MinTimes => v.powf(exponent as f64),
            })),
        }
    }

    /// Parses one scalar token.
    ///
    /// ε may be written `.`, `eps` or `ε`, and additionally `-inf` in
    /// max-plus or `+inf`/`inf` in min-times. Finite values are integers,
    /// decimals or `p/q` rationals.
    pub fn parse_scalar(&self, token: &str) -> Result<Scalar> {
        let invalid = |reason: &str| Error::InvalidScalar {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        match token {
            "." | "eps" | "ε" => return Ok(Scalar::Zero),
            "-inf" if self.kind == SemifieldKind::MaxPlus => return Ok(Scalar::Zero),
            "+inf" | "inf" if self.kind == SemifieldKind::MinTimes => return Ok(Scalar::Zero),
            "-inf" | "+inf" | "inf" => {
                return Err(invalid("this infinity is not the zero of the semifield"))
            }
            _ => {}
        }
        let value = parse_rational(token).ok_or_else(|| invalid("not a number"))?;
        if let Arithmetic::Float { .. } = self.arithmetic {
            if !token.contains('/') {
                let v: f64 = token.parse().map_err(|_| invalid("not a number"))?;
                return self.float(v).map_err(|e| invalid(&e.to_string()));
            }
        }
        self.rational(value)
            .map_err(|_| invalid("min-times carrier must be positive"))
    }
}

fn float_of(c: &Carrier<'_>) -> f64 {
    match c {
        Carrier::Exact(r) => rational_to_f64(r),
        Carrier::Float(v) => *v,
    }
}

/// Parses `p/q`, an integer, or a plain decimal such as `-2.75` exactly.
fn parse_rational(token: &str) -> Option<BigRational> {
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = parse_integer(num)?;
        let den: BigInt = parse_integer(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (negative, digits) = match token.as_bytes().first()? {
        b'-' => (true, &token[1..]),
        b'+' => (false, &token[1..]),
        _ => (false, token),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all_digits = |s: &str| s.bytes().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let mantissa: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10u8), frac_part.len());
    let value = BigRational::new(mantissa, scale);
    Some(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Default for Semifield {
    fn default() -> Self {
        Self::max_plus()
    }
}
