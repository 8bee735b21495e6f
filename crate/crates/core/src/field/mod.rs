//! Exact arithmetic in GF(p) and GF(2^s).
//!
//! A [`FieldSpec`] describes the field; a [`FieldElement`] is a canonical
//! representative tagged with the spec it belongs to. Both are small `Copy`
//! values. Elements of different fields never mix: the `checked_*` methods
//! return [`FieldError::Mismatch`], the operator impls panic.
//!
//! Prime fields are limited to `p < 2^31`; binary fields to `s <= 128`.

mod table;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rand::RngCore;
use thiserror::Error;

use table::REDUCTION_LOW_BITS;

/// Largest binary extension degree supported.
pub const MAX_BINARY_DEGREE: u32 = 128;
/// Prime moduli must be below this bound.
pub const PRIME_LIMIT: u64 = 1 << 31;
/// Binary fields with a caller-supplied reduction polynomial are checked
/// exhaustively up to this degree; above it only the built-in table is accepted.
pub const EXHAUSTIVE_IRREDUCIBILITY_LIMIT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field mismatch: {left} vs {right}")]
    Mismatch { left: FieldSpec, right: FieldSpec },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} is outside the supported range 2..2^31")]
    ModulusOutOfRange(u64),
    #[error("binary extension degree {0} is outside the supported range 1..=128")]
    DegreeOutOfRange(u32),
    #[error("reduction polynomial for GF(2^{s}) is reducible")]
    Reducible { s: u32 },
    #[error("cannot verify a custom reduction polynomial for GF(2^{s}); use the built-in one")]
    Unverifiable { s: u32 },
    #[error("value {value:#x} is not a canonical element of {spec}")]
    OutOfRange { spec: FieldSpec, value: u128 },
    #[error("bit string has length {got}, field needs {expected}")]
    BitLength { expected: usize, got: usize },
    #[error("bit-string encoding needs a binary field, got {0}")]
    UnsupportedEncoding(FieldSpec),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Binary,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Repr {
    Prime { p: u32 },
    // `poly` holds the low `s` bits of the reduction polynomial.
    Binary { s: u32, poly: u128 },
}

/// Description of a finite field: GF(p) for a prime `p`, or GF(2^s) with a
/// fixed irreducible reduction polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    repr: Repr,
}

impl FieldSpec {
    /// GF(p). `p` is checked for primality by trial division.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !(2..PRIME_LIMIT).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec {
            repr: Repr::Prime { p: p as u32 },
        })
    }

    /// GF(2^s) with the built-in reduction polynomial for degree `s`.
    pub fn binary(s: u32) -> Result<Self, FieldError> {
        if !(1..=MAX_BINARY_DEGREE).contains(&s) {
            return Err(FieldError::DegreeOutOfRange(s));
        }
        Ok(FieldSpec {
            repr: Repr::Binary {
                s,
                poly: REDUCTION_LOW_BITS[(s - 1) as usize],
            },
        })
    }

    /// GF(2^s) with an explicit reduction polynomial, given by its low `s`
    /// bits (the `x^s` term is implicit).
    ///
    /// For `s <= 16` the polynomial is checked for irreducibility by trial
    /// division; for larger `s` only the built-in polynomial is accepted.
    pub fn binary_with_poly(s: u32, low_bits: u128) -> Result<Self, FieldError> {
        let builtin = Self::binary(s)?;
        if s < 128 && low_bits >> s != 0 {
            return Err(FieldError::Parse {
                what: "reduction polynomial",
                input: format!("{low_bits:#x} for degree {s}"),
            });
        }
        if builtin.reduction_low_bits() == Some(low_bits) {
            return Ok(builtin);
        }
        if s > EXHAUSTIVE_IRREDUCIBILITY_LIMIT {
            return Err(FieldError::Unverifiable { s });
        }
        let full = (1u32 << s) | low_bits as u32;
        if !is_irreducible_gf2(full, s) {
            return Err(FieldError::Reducible { s });
        }
        Ok(FieldSpec {
            repr: Repr::Binary { s, poly: low_bits },
        })
    }

    pub fn kind(&self) -> FieldKind {
        match self.repr {
            Repr::Prime { .. } => FieldKind::Prime,
            Repr::Binary { .. } => FieldKind::Binary,
        }
    }

    /// The prime modulus, for prime fields.
    pub fn modulus(&self) -> Option<u64> {
        match self.repr {
            Repr::Prime { p } => Some(p as u64),
            Repr::Binary { .. } => None,
        }
    }

    /// The extension degree `s`, for binary fields.
    pub fn degree(&self) -> Option<u32> {
        match self.repr {
            Repr::Prime { .. } => None,
            Repr::Binary { s, .. } => Some(s),
        }
    }

    /// Low `s` bits of the reduction polynomial, for binary fields.
    pub fn reduction_low_bits(&self) -> Option<u128> {
        match self.repr {
            Repr::Prime { .. } => None,
            Repr::Binary { poly, .. } => Some(poly),
        }
    }

    /// Field order, or `None` for GF(2^128) whose order does not fit in `u128`.
    pub fn order(&self) -> Option<u128> {
        match self.repr {
            Repr::Prime { p } => Some(p as u128),
            Repr::Binary { s, .. } if s < 128 => Some(1u128 << s),
            Repr::Binary { .. } => None,
        }
    }

    /// `true` when the field has strictly more than `bound` elements.
    pub fn order_exceeds(&self, bound: u128) -> bool {
        self.order().is_none_or(|order| order > bound)
    }

    /// Number of hex digits in the fixed-width serialization of an element.
    pub fn hex_width(&self) -> usize {
        match self.repr {
            Repr::Prime { p } => hex_digits(p as u128 - 1),
            Repr::Binary { s, .. } => s.div_ceil(4) as usize,
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: *self,
            repr: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            spec: *self,
            repr: 1,
        }
    }

    /// The element with canonical representative `value`.
    pub fn element(&self, value: u128) -> Result<FieldElement, FieldError> {
        if !self.contains_repr(value) {
            return Err(FieldError::OutOfRange { spec: *self, value });
        }
        Ok(FieldElement {
            spec: *self,
            repr: value,
        })
    }

    /// Image of an integer under the ring map Z -> F (`n * 1`).
    ///
    /// In characteristic 2 this is the parity of `n`.
    pub fn from_integer(&self, n: i64) -> FieldElement {
        let repr = match self.repr {
            Repr::Prime { p } => n.rem_euclid(p as i64) as u128,
            Repr::Binary { .. } => (n.rem_euclid(2)) as u128,
        };
        FieldElement { spec: *self, repr }
    }

    /// `num / den` mapped into the field. Fails when `den` vanishes in it.
    pub fn ratio(&self, num: i64, den: i64) -> Result<FieldElement, FieldError> {
        self.from_integer(num).checked_div(self.from_integer(den))
    }

    /// Uniform element by rejection sampling on the canonical range.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let repr = match self.repr {
            Repr::Prime { p } => {
                let mask = (p as u64).next_power_of_two() as u32 - 1;
                loop {
                    let candidate = rng.next_u32() & mask;
                    if candidate < p {
                        break candidate as u128;
                    }
                }
            }
            Repr::Binary { s, .. } => {
                let wide = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
                wide & low_mask(s)
            }
        };
        FieldElement { spec: *self, repr }
    }

    /// Element encoded by an `s`-bit string, most significant bit first.
    pub fn from_bits(&self, bits: &[bool]) -> Result<FieldElement, FieldError> {
        let s = self
            .degree()
            .ok_or(FieldError::UnsupportedEncoding(*self))? as usize;
        if bits.len() != s {
            return Err(FieldError::BitLength {
                expected: s,
                got: bits.len(),
            });
        }
        let repr = bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
        Ok(FieldElement { spec: *self, repr })
    }

    /// Parse a hex representative. Any width is accepted as long as the value
    /// is canonical.
    pub fn parse_hex(&self, text: &str) -> Result<FieldElement, FieldError> {
        let trimmed = text.trim();
        let digits = trimmed
            .strip_prefix("0x")
            .or_else(|| trimmed.strip_prefix("0X"))
            .unwrap_or(trimmed);
        let value = u128::from_str_radix(digits, 16).map_err(|_| FieldError::Parse {
            what: "field element",
            input: text.to_string(),
        })?;
        self.element(value)
    }

    /// Iterate over every element in canonical order. Intended for tiny fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let order = self.order().expect("field too large to enumerate");
        (0..order).map(move |repr| FieldElement { spec: *self, repr })
    }

    fn contains_repr(&self, value: u128) -> bool {
        match self.repr {
            Repr::Prime { p } => value < p as u128,
            Repr::Binary { s, .. } => value & !low_mask(s) == 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    /// Header form: `p=13` or `gf2=8/11b` (full reduction polynomial in hex).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Prime { p } => write!(f, "p={p}"),
            Repr::Binary { s, poly } => {
                if s == 128 {
                    write!(f, "gf2=128/1{poly:032x}")
                } else {
                    write!(f, "gf2={s}/{:x}", (1u128 << s) | poly)
                }
            }
        }
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `p=<int>`, `gf2=<s>` (built-in polynomial) or `gf2=<s>/<hex>`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Parse {
            what: "field descriptor",
            input: text.to_string(),
        };
        let text = text.trim();
        if let Some(p) = text.strip_prefix("p=") {
            return FieldSpec::prime(p.parse().map_err(|_| bad())?);
        }
        let rest = text.strip_prefix("gf2=").ok_or_else(bad)?;
        match rest.split_once('/') {
            None => FieldSpec::binary(rest.parse().map_err(|_| bad())?),
            Some((s, hex)) => {
                let s: u32 = s.parse().map_err(|_| bad())?;
                if !(1..=MAX_BINARY_DEGREE).contains(&s) {
                    return Err(FieldError::DegreeOutOfRange(s));
                }
                let hex = hex.trim_start_matches('0');
                // The polynomial has s + 1 bits; for s = 128 that is one more
                // than u128 holds, so split off the leading digit.
                let expected_digits = (s as usize + 1).div_ceil(4);
                if hex.len() != expected_digits {
                    return Err(bad());
                }
                let (head, tail) = hex.split_at(1);
                let head = u128::from_str_radix(head, 16).map_err(|_| bad())?;
                let tail_value = if tail.is_empty() {
                    0
                } else {
                    u128::from_str_radix(tail, 16).map_err(|_| bad())?
                };
                let tail_bits = 4 * tail.len() as u32;
                // Leading digit must carry exactly the x^s bit among its set bits.
                let lead_shift = s - tail_bits;
                if head >> lead_shift != 1 {
                    return Err(bad());
                }
                let low = (head & ((1 << lead_shift) - 1))
                    .checked_shl(tail_bits)
                    .unwrap_or(0)
                    | tail_value;
                FieldSpec::binary_with_poly(s, low)
            }
        }
    }
}

/// A canonical element of a finite field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    repr: u128,
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Canonical representative in `[0, order)`.
    pub fn value(&self) -> u128 {
        self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.repr == 0
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::Mismatch {
                left: self.spec,
                right: other.spec,
            })
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, FieldError> {
        self.same_field(&rhs)?;
        Ok(self.add_unchecked(rhs))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, FieldError> {
        self.same_field(&rhs)?;
        Ok(self.add_unchecked(rhs.neg_unchecked()))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, FieldError> {
        self.same_field(&rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, FieldError> {
        self.same_field(&rhs)?;
        Ok(self.mul_unchecked(rhs.inv()?))
    }

    /// Multiplicative inverse.
    pub fn inv(self) -> Result<Self, FieldError> {
        if self.repr == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let repr = match self.spec.repr {
            Repr::Prime { p } => prime_inverse(self.repr as i64, p as i64) as u128,
            Repr::Binary { s, .. } => {
                // a^(2^s - 2)
                let exponent = if s == 128 {
                    u128::MAX - 1
                } else {
                    (1u128 << s) - 2
                };
                return Ok(self.pow(exponent));
            }
        };
        Ok(FieldElement {
            spec: self.spec,
            repr,
        })
    }

    pub fn pow(self, mut exponent: u128) -> Self {
        let mut base = self;
        let mut acc = self.spec.one();
        while exponent != 0 {
            if exponent & 1 == 1 {
                acc = acc.mul_unchecked(base);
            }
            base = base.mul_unchecked(base);
            exponent >>= 1;
        }
        acc
    }

    /// `s`-bit encoding, most significant bit first. Binary fields only.
    pub fn to_bits(&self) -> Result<Vec<bool>, FieldError> {
        let s = self
            .spec
            .degree()
            .ok_or(FieldError::UnsupportedEncoding(self.spec))?;
        Ok((0..s).rev().map(|i| (self.repr >> i) & 1 == 1).collect())
    }

    /// Fixed-width big-endian hex (see [`FieldSpec::hex_width`]).
    pub fn to_hex(&self) -> String {
        format!("{:0width$x}", self.repr, width = self.spec.hex_width())
    }

    fn add_unchecked(self, rhs: Self) -> Self {
        let repr = match self.spec.repr {
            Repr::Prime { p } => {
                let sum = self.repr + rhs.repr;
                if sum >= p as u128 {
                    sum - p as u128
                } else {
                    sum
                }
            }
            Repr::Binary { .. } => self.repr ^ rhs.repr,
        };
        FieldElement {
            spec: self.spec,
            repr,
        }
    }

    fn neg_unchecked(self) -> Self {
        let repr = match self.spec.repr {
            Repr::Prime { p } if self.repr != 0 => p as u128 - self.repr,
            _ => self.repr,
        };
        FieldElement {
            spec: self.spec,
            repr,
        }
    }

    fn mul_unchecked(self, rhs: Self) -> Self {
        let repr = match self.spec.repr {
            Repr::Prime { p } => (self.repr * rhs.repr) % p as u128,
            Repr::Binary { s, poly } => gf2_mul(self.repr, rhs.repr, s, poly),
        };
        FieldElement {
            spec: self.spec,
            repr,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.spec.kind() {
            FieldKind::Prime => write!(f, "{}", self.repr),
            FieldKind::Binary => write!(f, "0x{}", self.to_hex()),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.spec)
    }
}

fn expect_same(a: &FieldElement, b: &FieldElement) {
    if let Err(err) = a.same_field(b) {
        panic!("{err}");
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    /// # Panics
    /// On operands from different fields; use [`FieldElement::checked_add`]
    /// to get an error instead.
    fn add(self, rhs: Self) -> Self {
        expect_same(&self, &rhs);
        self.add_unchecked(rhs)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: Self) -> Self {
        expect_same(&self, &rhs);
        self.add_unchecked(rhs.neg_unchecked())
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: Self) -> Self {
        expect_same(&self, &rhs);
        self.mul_unchecked(rhs)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> Self {
        self.neg_unchecked()
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

fn low_mask(s: u32) -> u128 {
    if s >= 128 {
        u128::MAX
    } else {
        (1u128 << s) - 1
    }
}

fn hex_digits(value: u128) -> usize {
    let bits = 128 - value.leading_zeros() as usize;
    bits.div_ceil(4).max(1)
}

/// Carry-less multiply with the reduction folded into each shift.
fn gf2_mul(mut a: u128, mut b: u128, s: u32, poly: u128) -> u128 {
    let top = 1u128 << (s - 1);
    let mask = low_mask(s);
    let mut acc = 0u128;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        let carry = a & top != 0;
        a = (a << 1) & mask;
        if carry {
            a ^= poly;
        }
    }
    acc
}

fn prime_inverse(a: i64, p: i64) -> i64 {
    // Extended Euclid; the caller guarantees gcd(a, p) = 1.
    let (mut old_r, mut r) = (a, p);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn gf2_poly_rem(mut a: u32, b: u32) -> u32 {
    let b_deg = 31 - b.leading_zeros();
    while a != 0 && 31 - a.leading_zeros() >= b_deg {
        a ^= b << (31 - a.leading_zeros() - b_deg);
    }
    a
}

/// Trial division by every polynomial of degree `1..=s/2`.
fn is_irreducible_gf2(full: u32, s: u32) -> bool {
    (1..=s / 2).all(|d| ((1u32 << d)..(1u32 << (d + 1))).all(|q| gf2_poly_rem(full, q) != 0))
}
