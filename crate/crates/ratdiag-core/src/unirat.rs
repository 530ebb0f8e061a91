//! Reduced univariate rational functions.
//!
//! Canonical form: numerator and denominator coprime, denominator primitive
//! (integer coefficients, content one) with positive leading coefficient.
//! Equality of canonical forms is then plain structural equality.

use alloc::string::ToString;
use core::fmt;

use num_traits::{One, Zero};

use crate::poly::{poly_gcd, UniPoly};
use crate::rational::BigRat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniRat {
    pub num: UniPoly,
    pub den: UniPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniRatError {
    ZeroDenominator,
}

impl fmt::Display for UniRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniRatError::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

/// Canonical reduced form of num/den.
pub fn unirat_normalize(num: &UniPoly, den: &UniPoly) -> Result<UniRat, UniRatError> {
    if den.is_zero() {
        return Err(UniRatError::ZeroDenominator);
    }
    let var = if num.is_constant() { den.var.clone() } else { num.var.clone() };
    if num.is_zero() {
        return Ok(UniRat { num: UniPoly::zero(&var), den: UniPoly::one(&var) });
    }
    let g = poly_gcd(num, den);
    let num_red = num.div_exact(&g).expect("gcd divides numerator");
    let den_red = den.div_exact(&g).expect("gcd divides denominator");
    let (den_prim, factor) = den_red.primitive_part();
    let num_scaled = num_red.scale(&factor.recip());
    Ok(UniRat { num: num_scaled, den: den_prim })
}

/// Exact equality as rational functions (canonical forms compare structurally).
pub fn unirat_equal(a: &UniRat, b: &UniRat) -> bool {
    a == b
}

impl UniRat {
    pub fn from_poly(p: UniPoly) -> Self {
        let var = p.var.clone();
        unirat_normalize(&p, &UniPoly::one(&var)).expect("unit denominator")
    }

    pub fn constant(var: &str, c: BigRat) -> Self {
        Self::from_poly(UniPoly::constant(var, c))
    }

    pub fn zero(var: &str) -> Self {
        Self::from_poly(UniPoly::zero(var))
    }

    pub fn one(var: &str) -> Self {
        Self::from_poly(UniPoly::one(var))
    }

    /// The identity function x.
    pub fn variable(var: &str) -> Self {
        Self::from_poly(UniPoly::monomial(var, BigRat::one(), 1))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn var(&self) -> &str {
        if self.num.is_constant() && !self.den.is_constant() {
            &self.den.var
        } else {
            &self.num.var
        }
    }

    pub fn add(&self, other: &UniRat) -> UniRat {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        unirat_normalize(&num, &den).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &UniRat) -> UniRat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniRat {
        UniRat { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &UniRat) -> UniRat {
        let num = self.num.mul(&other.num);
        let den = self.den.mul(&other.den);
        unirat_normalize(&num, &den).expect("nonzero denominators")
    }

    pub fn scale(&self, c: &BigRat) -> UniRat {
        unirat_normalize(&self.num.scale(c), &self.den).expect("nonzero denominator")
    }

    pub fn recip(&self) -> Result<UniRat, UniRatError> {
        unirat_normalize(&self.den, &self.num)
    }

    pub fn div(&self, other: &UniRat) -> Result<UniRat, UniRatError> {
        let num = self.num.mul(&other.den);
        let den = self.den.mul(&other.num);
        unirat_normalize(&num, &den)
    }

    /// Integer power; negative exponents invert (error on zero).
    pub fn pow_i64(&self, e: i64) -> Result<UniRat, UniRatError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = UniRat::one(base.var());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Derivative by the quotient rule, renormalized.
    pub fn derivative(&self) -> UniRat {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        unirat_normalize(&num, &den).expect("nonzero denominator")
    }

    /// Value at a rational point; None when the denominator vanishes there.
    pub fn eval(&self, x: &BigRat) -> Option<BigRat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// self(g): substitution of a rational function for the variable.
    pub fn compose(&self, g: &UniRat) -> Result<UniRat, UniRatError> {
        let num = eval_poly_at_unirat(&self.num, g);
        let den = eval_poly_at_unirat(&self.den, g);
        num.div(&den)
    }
}

fn eval_poly_at_unirat(p: &UniPoly, g: &UniRat) -> UniRat {
    let var = g.var().to_string();
    let mut acc = UniRat::zero(&var);
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(g).add(&UniRat::constant(&var, c.clone()));
    }
    acc
}

impl fmt::Display for UniRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.leading_coeff().is_one() {
            if self.num.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
