//! Truncated power series over the rationals, and the closed forms built
//! from them: hypergeometric series, algebraic prefactors and pullbacked
//! hypergeometric solutions.
//!
//! A series stores coefficients 0..=order; the order tracks how far the
//! expansion is actually known, and every operation propagates the largest
//! order it can honestly guarantee (valuation-aware for products and
//! composition). Coefficient access beyond the stored order panics rather
//! than inventing zeros.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::UniPoly;
use crate::rational::{rat_int, rat_nth_root, rat_to_string, BigRat};
use crate::unirat::UniRat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    pub var: String,
    pub coeffs: Vec<BigRat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// Inversion (or expansion of a rational function) needs a unit:
    /// a nonzero constant term in the denominator.
    NonUnitInverse,
    /// log and fractional powers need constant term exactly one.
    RequiresUnitConstant,
    /// exp needs constant term zero.
    RequiresZeroConstant,
    /// A pullback must vanish at the origin and be finite there.
    NonzeroConstantPullback,
    /// The aggregate constant of an algebraic prefactor is not rational.
    IrrationalConstant,
    /// A prefactor base is zero or undefined at the origin.
    BaseVanishesAtZero,
    /// A lower hypergeometric parameter is a nonpositive integer.
    InvalidLowerParameter,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonUnitInverse => {
                write!(f, "series inversion needs a nonzero constant term")
            }
            SeriesError::RequiresUnitConstant => {
                write!(f, "operation needs constant term equal to one")
            }
            SeriesError::RequiresZeroConstant => {
                write!(f, "operation needs constant term equal to zero")
            }
            SeriesError::NonzeroConstantPullback => {
                write!(f, "pullback must vanish and be finite at the origin")
            }
            SeriesError::IrrationalConstant => {
                write!(f, "aggregate prefactor constant is irrational")
            }
            SeriesError::BaseVanishesAtZero => {
                write!(f, "prefactor base is zero or undefined at the origin")
            }
            SeriesError::InvalidLowerParameter => {
                write!(f, "lower hypergeometric parameter is a nonpositive integer")
            }
        }
    }
}

impl PowerSeries {
    pub fn new(var: &str, coeffs: Vec<BigRat>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores at least its constant term");
        PowerSeries { var: var.to_string(), coeffs }
    }

    pub fn zero(var: &str, order: usize) -> Self {
        PowerSeries::new(var, alloc::vec![BigRat::zero(); order + 1])
    }

    pub fn constant(var: &str, c: BigRat, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(var: &str, order: usize) -> Self {
        Self::constant(var, BigRat::one(), order)
    }

    /// The series x itself.
    pub fn identity(var: &str, order: usize) -> Self {
        assert!(order >= 1);
        let mut s = Self::zero(var, order);
        s.coeffs[1] = BigRat::one();
        s
    }

    /// Highest exponent whose coefficient is known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRat {
        assert!(
            k <= self.order(),
            "coefficient {} beyond known order {}",
            k,
            self.order()
        );
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> PowerSeries {
        assert!(order <= self.order(), "cannot extend a series by truncation");
        PowerSeries::new(&self.var, self.coeffs[..=order].to_vec())
    }

    fn join_var(&self, other: &PowerSeries) -> String {
        assert_eq!(self.var, other.var, "series in different variables");
        self.var.clone()
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let var = self.join_var(other);
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| &self.coeffs[k] + &other.coeffs[k])
            .collect();
        PowerSeries::new(&var, coeffs)
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PowerSeries {
        PowerSeries {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> PowerSeries {
        PowerSeries {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product, keeping every order the factors' known parts support: with
    /// valuations va, vb the product is known through
    /// min(order_a + vb, order_b + va).
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let var = self.join_var(other);
        let (na, nb) = (self.order(), other.order());
        let va = self.valuation().unwrap_or(na + 1);
        let vb = other.valuation().unwrap_or(nb + 1);
        let out = (na + vb).min(nb + va);
        let mut coeffs = alloc::vec![BigRat::zero(); out + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > out {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        PowerSeries::new(&var, coeffs)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn invert(&self) -> Result<PowerSeries, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::NonUnitInverse);
        }
        let n = self.order();
        let c0 = self.coeffs[0].recip();
        let mut out = alloc::vec![BigRat::zero(); n + 1];
        out[0] = c0.clone();
        for m in 1..=n {
            let mut acc = BigRat::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[m - k];
                }
            }
            out[m] = -acc * &c0;
        }
        Ok(PowerSeries::new(&self.var, out))
    }

    /// Termwise derivative; one order of precision is spent.
    pub fn derivative(&self) -> PowerSeries {
        assert!(self.order() >= 1, "cannot differentiate an order-zero series");
        let coeffs = (1..=self.order())
            .map(|k| &self.coeffs[k] * rat_int(k as i64))
            .collect();
        PowerSeries::new(&self.var, coeffs)
    }
}

/// Expand a univariate polynomial as a series of the given order.
pub fn poly_series(p: &UniPoly, var: &str, order: usize) -> PowerSeries {
    let mut coeffs = alloc::vec![BigRat::zero(); order + 1];
    for (k, c) in p.coeffs.iter().enumerate() {
        if k > order {
            break;
        }
        coeffs[k] = c.clone();
    }
    PowerSeries::new(var, coeffs)
}

/// Expand a univariate rational function at the origin; its denominator must
/// not vanish there.
pub fn unirat_series(r: &UniRat, order: usize) -> Result<PowerSeries, SeriesError> {
    let var = r.var();
    let num = poly_series(&r.num, var, order);
    let den = poly_series(&r.den, var, order);
    Ok(num.mul(&den.invert()?).truncate(order))
}

/// Substitute one series into another; the inner series must vanish at the
/// origin. The result is known through
/// min(inner.order, v*(outer.order + 1) - 1) with v the inner valuation.
pub fn compose_series(
    outer: &PowerSeries,
    inner: &PowerSeries,
) -> Result<PowerSeries, SeriesError> {
    if !inner.coeffs[0].is_zero() {
        return Err(SeriesError::NonzeroConstantPullback);
    }
    let ni = inner.order();
    let out = match inner.valuation() {
        Some(v) => ni.min(v * (outer.order() + 1) - 1),
        None => ni,
    };
    let v = inner.valuation().unwrap_or(ni + 1);
    if inner.valuation().is_none() || out == 0 {
        return Ok(PowerSeries::constant(&inner.var, outer.coeffs[0].clone(), out));
    }
    let inner_t = inner.truncate(out.min(ni));
    let top = outer.order().min(out / v);
    let mut acc = PowerSeries::constant(&inner.var, outer.coeffs[top].clone(), out);
    for k in (0..top).rev() {
        acc = acc.mul(&inner_t).truncate(out);
        acc.coeffs[0] += &outer.coeffs[k];
    }
    Ok(acc)
}

/// Substitute a rational-function pullback h (with h(0) = 0, finite at 0)
/// into a series.
pub fn compose_ratfunc(s: &PowerSeries, h: &UniRat) -> Result<PowerSeries, SeriesError> {
    if h.den.coeff(0).is_zero() {
        return Err(SeriesError::NonzeroConstantPullback);
    }
    if !h.num.coeff(0).is_zero() {
        return Err(SeriesError::NonzeroConstantPullback);
    }
    let inner = unirat_series(h, s.order())?;
    compose_series(s, &inner)
}

/// log of a series with constant term one.
pub fn series_log(s: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    if !s.coeffs[0].is_one() {
        return Err(SeriesError::RequiresUnitConstant);
    }
    let n = s.order();
    let mut out = alloc::vec![BigRat::zero(); n + 1];
    if n >= 1 {
        let t = s.derivative().mul(&s.invert()?);
        for m in 1..=n {
            out[m] = &t.coeffs[m - 1] / rat_int(m as i64);
        }
    }
    Ok(PowerSeries::new(&s.var, out))
}

/// exp of a series with constant term zero.
pub fn series_exp(s: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    if !s.coeffs[0].is_zero() {
        return Err(SeriesError::RequiresZeroConstant);
    }
    let n = s.order();
    let mut out = alloc::vec![BigRat::zero(); n + 1];
    out[0] = BigRat::one();
    for m in 1..=n {
        let mut acc = BigRat::zero();
        for k in 1..=m {
            if !s.coeffs[k].is_zero() {
                acc += &s.coeffs[k] * rat_int(k as i64) * &out[m - k];
            }
        }
        out[m] = acc / rat_int(m as i64);
    }
    Ok(PowerSeries::new(&s.var, out))
}

/// s^q for rational q; the constant term of s must be one.
pub fn series_pow(s: &PowerSeries, q: &BigRat) -> Result<PowerSeries, SeriesError> {
    if !s.coeffs[0].is_one() {
        return Err(SeriesError::RequiresUnitConstant);
    }
    let n = s.order();
    let mut out = alloc::vec![BigRat::zero(); n + 1];
    out[0] = BigRat::one();
    let q1 = q + BigRat::one();
    for m in 1..=n {
        let mut acc = BigRat::zero();
        for k in 1..=m {
            if !s.coeffs[k].is_zero() {
                let w = &q1 * rat_int(k as i64) - rat_int(m as i64);
                acc += w * &s.coeffs[k] * &out[m - k];
            }
        }
        out[m] = acc / rat_int(m as i64);
    }
    Ok(PowerSeries::new(&s.var, out))
}

/// Generalized hypergeometric series pFq(upper; lower; x) through the given
/// order, by the term ratio recurrence.
pub fn hypergeom_series(
    upper: &[BigRat],
    lower: &[BigRat],
    var: &str,
    order: usize,
) -> Result<PowerSeries, SeriesError> {
    for l in lower {
        if l.is_integer() && !l.is_positive() {
            return Err(SeriesError::InvalidLowerParameter);
        }
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = BigRat::one();
    coeffs.push(c.clone());
    for m in 0..order {
        let mr = rat_int(m as i64);
        for u in upper {
            c *= u + &mr;
        }
        for l in lower {
            c /= l + &mr;
        }
        c /= rat_int(m as i64 + 1);
        coeffs.push(c.clone());
    }
    Ok(PowerSeries::new(var, coeffs))
}

/// Product of rational-function bases raised to rational exponents,
/// expandable at the origin. The series is
/// (aggregate constant) * exp(sum_i e_i log(base_i(x)/base_i(0))), and the
/// aggregate constant prod base_i(0)^{e_i} must come out rational.
#[derive(Debug, Clone)]
pub struct AlgebraicPrefactor {
    pub factors: Vec<(UniRat, BigRat)>,
}

impl AlgebraicPrefactor {
    pub fn one() -> Self {
        AlgebraicPrefactor { factors: Vec::new() }
    }

    pub fn series(&self, var: &str, order: usize) -> Result<PowerSeries, SeriesError> {
        if self.factors.is_empty() {
            return Ok(PowerSeries::one(var, order));
        }
        // Aggregate constant: common exponent denominator Q, exact Q-th root.
        let mut q_lcm = BigInt::one();
        for (_, e) in &self.factors {
            q_lcm = q_lcm.lcm(e.denom());
        }
        let mut agg = BigRat::one();
        let mut values = Vec::with_capacity(self.factors.len());
        for (base, e) in &self.factors {
            let r = match base.eval(&BigRat::zero()) {
                Some(v) if !v.is_zero() => v,
                _ => return Err(SeriesError::BaseVanishesAtZero),
            };
            let n = (e.numer() * (&q_lcm / e.denom()))
                .to_i64()
                .expect("prefactor exponent out of range");
            agg *= crate::rational::rat_pow_i64(&r, n);
            values.push(r);
        }
        let q = q_lcm.to_u32().expect("prefactor exponent denominator out of range");
        let root = rat_nth_root(&agg, q).ok_or(SeriesError::IrrationalConstant)?;

        let mut logsum = PowerSeries::zero(var, order);
        for ((base, e), r) in self.factors.iter().zip(values.iter()) {
            let normalized = unirat_series(base, order)?.scale(&r.recip());
            logsum = logsum.add(&series_log(&normalized)?.scale(e));
        }
        Ok(series_exp(&logsum)?.scale(&root))
    }
}

/// Series of prefactor(x) * pFq(upper; lower; h(x)) through the given order.
pub fn pullbacked_solution(
    prefactor: &AlgebraicPrefactor,
    upper: &[BigRat],
    lower: &[BigRat],
    pullback: &UniRat,
    var: &str,
    order: usize,
) -> Result<PowerSeries, SeriesError> {
    let f = hypergeom_series(upper, lower, var, order)?;
    let composed = compose_ratfunc(&f, pullback)?;
    let pre = prefactor.series(var, order)?;
    Ok(pre.mul(&composed).truncate(order.min(composed.order())))
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            wrote = true;
            if k == 0 {
                write!(f, "{}", rat_to_string(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", rat_to_string(&mag))?;
                }
                if k == 1 {
                    write!(f, "{}", self.var)?;
                } else {
                    write!(f, "{}^{}", self.var, k)?;
                }
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}
