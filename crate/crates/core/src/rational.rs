//! Exact rational numbers with a machine-word fast path.
//!
//! Coefficient arithmetic dominates every identity check, and almost all
//! coefficients that actually occur are tiny. `Rational` therefore keeps a
//! reduced `i64 / i64` representation and falls back to an arbitrary
//! precision `BigRational` only when a result leaves the machine range, so
//! exactness is never compromised. Canonical form: the `Big` variant is
//! used only for values that do not fit the small variant, which makes
//! structural equality and hashing correct.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

type BigRational = num_rational::BigRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    /// Reduced fraction, denominator strictly positive.
    Small(i64, i64),
    /// Reduced fraction outside the `i64` range.
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Builds the canonical value for `num / den` (den != 0) given i128 parts.
fn make(num: i128, den: i128) -> Rational {
    debug_assert!(den != 0);
    let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
    if num == 0 {
        return Rational::Small(0, 1);
    }
    let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
    num /= g;
    den /= g;
    if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
        Rational::Small(n, d)
    } else {
        Rational::Big(Box::new(BigRational::new(num.into(), den.into())))
    }
}

/// Demotes a reduced `BigRational` back to the small variant when it fits.
fn demote(r: BigRational) -> Rational {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        Rational::Small(n, d)
    } else {
        Rational::Big(Box::new(r))
    }
}

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        demote(BigRational::new(num, den))
    }

    pub fn from_integer(n: BigInt) -> Self {
        match n.to_i64() {
            Some(n) => Rational::Small(n, 1),
            None => Rational::Big(Box::new(BigRational::from_integer(n))),
        }
    }

    pub fn from_i64(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        make(num as i128, den as i128)
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new((*n).into(), (*d).into()),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(b) => b.is_integer(),
        }
    }

    pub fn to_integer(&self) -> BigInt {
        match self {
            Rational::Small(n, d) => BigInt::from(*n / *d),
            Rational::Big(b) => b.to_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::Small(0, 1)
    }

    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::Small(1, 1)
    }

    fn is_one(&self) -> bool {
        matches!(self, Rational::Small(1, 1))
    }
}

fn add_ref(a: &Rational, b: &Rational) -> Rational {
    match (a, b) {
        (Rational::Small(n1, d1), Rational::Small(n2, d2)) => {
            let (n1, d1, n2, d2) = (*n1 as i128, *d1 as i128, *n2 as i128, *d2 as i128);
            make(n1 * d2 + n2 * d1, d1 * d2)
        }
        _ => demote(a.to_big() + b.to_big()),
    }
}

fn sub_ref(a: &Rational, b: &Rational) -> Rational {
    match (a, b) {
        (Rational::Small(n1, d1), Rational::Small(n2, d2)) => {
            let (n1, d1, n2, d2) = (*n1 as i128, *d1 as i128, *n2 as i128, *d2 as i128);
            make(n1 * d2 - n2 * d1, d1 * d2)
        }
        _ => demote(a.to_big() - b.to_big()),
    }
}

fn mul_ref(a: &Rational, b: &Rational) -> Rational {
    match (a, b) {
        (Rational::Small(n1, d1), Rational::Small(n2, d2)) => {
            make(*n1 as i128 * *n2 as i128, *d1 as i128 * *d2 as i128)
        }
        _ => demote(a.to_big() * b.to_big()),
    }
}

fn div_ref(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division by zero");
    match (a, b) {
        (Rational::Small(n1, d1), Rational::Small(n2, d2)) => {
            make(*n1 as i128 * *d2 as i128, *d1 as i128 * *n2 as i128)
        }
        _ => demote(a.to_big() / b.to_big()),
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(self, &rhs)
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(self, rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div_ref);

macro_rules! assign_op {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait for Rational {
            fn $method(&mut self, rhs: Rational) {
                *self = $f(self, &rhs);
            }
        }
        impl $trait<&Rational> for Rational {
            fn $method(&mut self, rhs: &Rational) {
                *self = $f(self, rhs);
            }
        }
    };
}

assign_op!(AddAssign, add_assign, add_ref);
assign_op!(SubAssign, sub_assign, sub_ref);
assign_op!(MulAssign, mul_assign, mul_ref);
assign_op!(DivAssign, div_assign, div_ref);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) => make(-(*n as i128), *d as i128),
            Rational::Big(b) => demote(-(**b).clone()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        match (self, other) {
            (Rational::Small(n1, d1), Rational::Small(n2, d2)) => {
                (*n1 as i128 * *d2 as i128).cmp(&(*n2 as i128 * *d1 as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_i64(n, d)
    }

    #[test]
    fn reduced_and_sign_normalized() {
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(1, -2), r(-1, 2));
        assert_eq!(r(0, -7), Rational::zero());
    }

    #[test]
    fn field_operations() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
        assert_eq!(r(1, 2) - r(1, 2), Rational::zero());
        assert_eq!(r(2, 3) * r(3, 4), r(1, 2));
        assert_eq!(r(1, 2) / r(1, 4), r(2, 1));
        assert_eq!(-r(1, 2), r(-1, 2));
    }

    #[test]
    fn overflow_promotes_and_stays_exact() {
        let big = r(i64::MAX, 1) * r(i64::MAX, 1);
        assert!(matches!(big, Rational::Big(_)));
        // (MAX^2) / MAX demotes back to the small variant.
        let back = &big / &r(i64::MAX, 1);
        assert_eq!(back, r(i64::MAX, 1));
        assert!(matches!(back, Rational::Small(..)));
        // a full cancellation through the big range is exact
        assert_eq!(&big - &big, Rational::zero());
    }

    #[test]
    fn ordering_and_display() {
        assert!(r(1, 3) < r(1, 2));
        assert!(r(-1, 2) < Rational::zero());
        assert_eq!(r(-3, 2).to_string(), "-3/2");
        assert_eq!(r(4, 2).to_string(), "2");
        assert_eq!(r(7, 2).abs(), r(7, 2));
        assert_eq!(r(-7, 2).abs(), r(7, 2));
    }

    #[test]
    fn integer_predicates() {
        assert!(r(4, 2).is_integer());
        assert!(!r(1, 2).is_integer());
        assert_eq!(r(6, 2).to_integer(), BigInt::from(3));
    }
}
