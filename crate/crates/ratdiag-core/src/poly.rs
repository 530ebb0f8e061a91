//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so the
//! zero polynomial is the empty list. Binary operations allow mixing a
//! constant with any variable; otherwise variables must agree.
//!
//! Key operations: ring arithmetic, exact division, primitive parts, a
//! fraction-free (primitive-part Euclid) GCD returned monic, composition and
//! evaluation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{rat_to_string, BigRat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub var: String,
    pub coeffs: Vec<BigRat>,
}

impl UniPoly {
    pub fn new(var: &str, mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { var: var.into(), coeffs }
    }

    pub fn zero(var: &str) -> Self {
        UniPoly { var: var.into(), coeffs: Vec::new() }
    }

    pub fn constant(var: &str, c: BigRat) -> Self {
        Self::new(var, vec![c])
    }

    pub fn one(var: &str) -> Self {
        Self::constant(var, BigRat::one())
    }

    /// c · x^k
    pub fn monomial(var: &str, c: BigRat, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero(var);
        }
        let mut coeffs = vec![BigRat::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { var: var.into(), coeffs }
    }

    /// Convenience constructor from integer coefficients, lowest degree first.
    pub fn from_ints(var: &str, ints: &[i64]) -> Self {
        Self::new(var, ints.iter().map(|&n| BigRat::from_integer(BigInt::from(n))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with deg 0 = None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn leading_coeff(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_else(BigRat::zero)
    }

    fn join_var(&self, other: &UniPoly) -> String {
        if self.is_constant() {
            other.var.clone()
        } else {
            if !other.is_constant() {
                assert_eq!(self.var, other.var, "mixed polynomial variables");
            }
            self.var.clone()
        }
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let var = self.join_var(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        UniPoly::new(&var, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { var: self.var.clone(), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let var = self.join_var(other);
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&var);
        }
        let mut coeffs = vec![BigRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::new(&var, coeffs)
    }

    pub fn scale(&self, c: &BigRat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero(&self.var);
        }
        UniPoly { var: self.var.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::one(&self.var);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder over Q with deg(rem) < deg(divisor).
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let var = self.join_var(divisor);
        let dd = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (UniPoly::zero(&var), self.clone());
        }
        let mut quot = vec![BigRat::zero(); rem.len() - dd];
        let lead = divisor.leading_coeff();
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] / &lead;
            quot[k - dd] = q.clone();
            for (j, b) in divisor.coeffs.iter().enumerate() {
                let t = &q * b;
                rem[k - dd + j] -= t;
            }
        }
        (UniPoly::new(&var, quot), UniPoly::new(&var, rem))
    }

    /// Exact division; None when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(&self.var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRat::from_integer(BigInt::from(k)))
            .collect();
        UniPoly::new(&self.var, coeffs)
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// self(g) by Horner.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(&g.var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&UniPoly::constant(&g.var, c.clone()));
        }
        acc
    }

    /// Integer-coefficient primitive part and the rational factor it was
    /// pulled out of: self = factor · primitive, primitive with content 1 and
    /// positive leading coefficient (zero maps to zero with factor 1).
    pub fn primitive_part(&self) -> (UniPoly, BigRat) {
        if self.is_zero() {
            return (self.clone(), BigRat::one());
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for n in &ints {
            content = content.gcd(n);
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        let prim = UniPoly::new(
            &self.var,
            ints.iter().map(|n| BigRat::from_integer(n / &content)).collect(),
        );
        let factor = BigRat::new(content, den_lcm);
        (prim, factor)
    }

    pub fn make_monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading_coeff();
        self.scale(&lead.recip())
    }

    /// Lowest power of the variable dividing self; None for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// Monic GCD via a primitive-part Euclidean chain (fraction-free inner loop);
/// gcd(0, 0) = 0.
pub fn poly_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let var = a.join_var(b);
    let (mut f, _) = a.primitive_part();
    let (mut g, _) = b.primitive_part();
    if f.is_zero() {
        return g.make_monic();
    }
    while !g.is_zero() {
        if g.is_constant() {
            return UniPoly::one(&var);
        }
        let r = pseudo_rem(&f, &g);
        let (r_prim, _) = r.primitive_part();
        f = g;
        g = r_prim;
    }
    f.make_monic()
}

/// Pseudo-remainder: lc(g)^(deg f − deg g + 1) · f = q·g + r with deg r < deg g.
fn pseudo_rem(f: &UniPoly, g: &UniPoly) -> UniPoly {
    let df = f.degree().expect("pseudo_rem of zero");
    let dg = g.degree().expect("pseudo_rem by zero");
    if df < dg {
        return f.clone();
    }
    let lead = g.leading_coeff();
    let mut scaled = f.clone();
    for _ in 0..(df - dg + 1) {
        scaled = scaled.scale(&lead);
    }
    scaled.div_rem(g).1
}

impl fmt::Display for UniPoly {
    /// Parseable ascending-degree text, e.g. `1 - 88*p + 1696*p^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_text = rat_to_string(&mag);
            if k == 0 {
                write!(f, "{coeff_text}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{coeff_text}*")?;
                }
                if k == 1 {
                    write!(f, "{}", self.var)?;
                } else {
                    write!(f, "{}^{}", self.var, k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;
    use alloc::string::ToString;

    fn p(ints: &[i64]) -> UniPoly {
        UniPoly::from_ints("x", ints)
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[1, 2, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a, b.mul(&b));
        assert_eq!(a.sub(&a), UniPoly::zero("x"));
        assert_eq!(a.div_exact(&b), Some(b.clone()));
        assert_eq!(p(&[1, 0, 1]).div_exact(&b), None);
    }

    #[test]
    fn gcd_known_factors() {
        // gcd(x^2 - 1, x - 1) = x - 1
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        // gcd(x^3 + 1, x + 1) = x + 1
        assert_eq!(poly_gcd(&p(&[1, 0, 0, 1]), &p(&[1, 1])), p(&[1, 1]));
        assert_eq!(poly_gcd(&UniPoly::zero("x"), &UniPoly::zero("x")), UniPoly::zero("x"));
        assert_eq!(poly_gcd(&p(&[4, 4]), &UniPoly::zero("x")), p(&[1, 1]));
    }

    #[test]
    fn primitive_part_sign() {
        let q = UniPoly::new("x", vec![crate::rational::rat(1, 2), rat_int(-2)]);
        let (prim, factor) = q.primitive_part();
        assert_eq!(prim, p(&[-1, 4]));
        assert_eq!(prim.scale(&factor), q);
        assert!(prim.leading_coeff() > BigRat::zero());
    }

    #[test]
    fn display_round_shape() {
        let q = p(&[1, -88, 1696]);
        assert_eq!(q.to_string(), "1 - 88*x + 1696*x^2");
    }

    #[test]
    fn eval_and_compose() {
        let q = p(&[2, 0, 1]);
        assert_eq!(q.eval(&rat_int(3)), rat_int(11));
        let shifted = q.compose(&p(&[1, 1]));
        assert_eq!(shifted, p(&[3, 2, 1]));
    }
}
