//! j-invariant and Hauptmodul of a curve quadratic in one variable.
//!
//! Completing the square in the quadratic variable turns the curve into
//! w^2 = Delta(x, p) with Delta the discriminant. When Delta has degree at
//! most four in x it is a (possibly degenerate) quartic whose classical
//! invariants I and J give the j-invariant as a rational function of the
//! parameter: j = 1728 * 4I^3 / (4I^3 - J^2). The Hauptmodul used for
//! hypergeometric pullbacks is its reciprocal scaled back, 1728/j.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::curve::CurvePoly;
use crate::multipoly::MultiPoly;
use crate::poly::UniPoly;
use crate::rational::{rat_int, BigRat};
use crate::unirat::{unirat_normalize, UniRat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EllipticError {
    /// The requested split variable is not one of the curve variables.
    UnknownVariable(String),
    /// The curve has degree other than two in the split variable.
    NotQuadratic { var: String, degree: u32 },
    /// The discriminant has degree above four in the remaining variable.
    DiscriminantDegreeTooHigh { degree: u32 },
    /// 4I^3 = J^2 identically: the generic fiber is rational, not elliptic.
    DegenerateCurve,
    /// I = 0 identically (j = 0): the Hauptmodul 1728/j has no expansion.
    HauptmodulInfinite,
}

impl fmt::Display for EllipticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllipticError::UnknownVariable(v) => write!(f, "unknown curve variable {v}"),
            EllipticError::NotQuadratic { var, degree } => {
                write!(f, "curve has degree {degree} in {var}, expected 2")
            }
            EllipticError::DiscriminantDegreeTooHigh { degree } => {
                write!(f, "discriminant degree {degree} exceeds 4")
            }
            EllipticError::DegenerateCurve => write!(f, "4I^3 - J^2 vanishes identically"),
            EllipticError::HauptmodulInfinite => {
                write!(f, "I vanishes identically, Hauptmodul is infinite")
            }
        }
    }
}

/// The curve written as A w^2 + B w + C = 0 in the split variable w, with
/// A, B, C and the discriminant B^2 - 4AC as polynomials in the remaining
/// variable and the parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSplit {
    pub split_var: String,
    pub other_var: String,
    pub param: String,
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub c: MultiPoly,
    pub delta: MultiPoly,
}

/// Split a curve along one of its two variables, which must appear with
/// degree exactly two.
pub fn quadratic_split(curve: &CurvePoly, var: &str) -> Result<QuadraticSplit, EllipticError> {
    let other = if var == curve.x_var {
        curve.y_var.clone()
    } else if var == curve.y_var {
        curve.x_var.clone()
    } else {
        return Err(EllipticError::UnknownVariable(var.into()));
    };
    let degree = curve.poly.degree_in(var).unwrap_or(0);
    if degree != 2 {
        return Err(EllipticError::NotQuadratic { var: var.into(), degree });
    }
    let keep: [&str; 2] = [other.as_str(), curve.param.as_str()];
    let slice = |k: u32| {
        curve
            .poly
            .coeff_in(var, k)
            .restrict_vars(&keep)
            .expect("split variable no longer occurs")
    };
    let a = slice(2);
    let b = slice(1);
    let c = slice(0);
    let delta = b.mul(&b).sub(&a.mul(&c).scale(&rat_int(4)));
    Ok(QuadraticSplit {
        split_var: var.into(),
        other_var: other,
        param: curve.param.clone(),
        a,
        b,
        c,
        delta,
    })
}

/// The I and J invariants of the discriminant quartic, as polynomials in
/// the curve parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticInvariants {
    pub i: UniPoly,
    pub j: UniPoly,
}

/// Read the discriminant as a quartic a x^4 + b x^3 + c x^2 + d x + e in the
/// non-split variable (degree three or less means a leading zero) and form
/// I = 12ae - 3bd + c^2, J = 72ace + 9bcd - 27ad^2 - 27b^2 e - 2c^3.
pub fn quartic_invariants(split: &QuadraticSplit) -> Result<QuarticInvariants, EllipticError> {
    let degree = split.delta.degree_in(&split.other_var).unwrap_or(0);
    if degree > 4 {
        return Err(EllipticError::DiscriminantDegreeTooHigh { degree });
    }
    let xi = split
        .delta
        .var_index(&split.other_var)
        .expect("discriminant is built over the non-split variable");
    let pi = split.delta.var_index(&split.param).expect("parameter present");
    let mut slices: Vec<Vec<BigRat>> = alloc::vec![Vec::new(); 5];
    for (mono, coeff) in &split.delta.terms {
        let k = mono.0[xi] as usize;
        let e = mono.0[pi] as usize;
        let row = &mut slices[k];
        if row.len() <= e {
            row.resize(e + 1, BigRat::zero());
        }
        row[e] = coeff.clone();
    }
    let p = &split.param;
    let [e, d, c, b, a] = [0usize, 1, 2, 3, 4]
        .map(|k| UniPoly::new(p, core::mem::take(&mut slices[k])));
    let i = a
        .mul(&e)
        .scale(&rat_int(12))
        .sub(&b.mul(&d).scale(&rat_int(3)))
        .add(&c.mul(&c));
    let j = a
        .mul(&c)
        .mul(&e)
        .scale(&rat_int(72))
        .add(&b.mul(&c).mul(&d).scale(&rat_int(9)))
        .sub(&a.mul(&d).mul(&d).scale(&rat_int(27)))
        .sub(&b.mul(&b).mul(&e).scale(&rat_int(27)))
        .sub(&c.mul(&c).mul(&c).scale(&rat_int(2)));
    Ok(QuarticInvariants { i, j })
}

fn four_i_cubed(inv: &QuarticInvariants) -> UniPoly {
    inv.i.mul(&inv.i).mul(&inv.i).scale(&rat_int(4))
}

/// j = 1728 * 4I^3 / (4I^3 - J^2), a rational function of the parameter.
pub fn j_invariant(split: &QuadraticSplit) -> Result<UniRat, EllipticError> {
    let inv = quartic_invariants(split)?;
    let num = four_i_cubed(&inv);
    let den = num.sub(&inv.j.mul(&inv.j));
    if den.is_zero() {
        return Err(EllipticError::DegenerateCurve);
    }
    Ok(unirat_normalize(&num.scale(&rat_int(1728)), &den).expect("denominator nonzero"))
}

/// The reciprocal normalization 1728/j = (4I^3 - J^2) / 4I^3, the form that
/// feeds hypergeometric pullbacks.
pub fn hauptmodul(split: &QuadraticSplit) -> Result<UniRat, EllipticError> {
    let inv = quartic_invariants(split)?;
    let den = four_i_cubed(&inv);
    let num = den.sub(&inv.j.mul(&inv.j));
    if num.is_zero() {
        return Err(EllipticError::DegenerateCurve);
    }
    if den.is_zero() {
        return Err(EllipticError::HauptmodulInfinite);
    }
    Ok(unirat_normalize(&num, &den).expect("denominator nonzero"))
}

/// Evaluate a two-variable polynomial relation at a pair of univariate
/// rational functions and test whether it vanishes identically.
pub fn verify_relation(rel: &MultiPoly, a: &UniRat, b: &UniRat) -> bool {
    assert_eq!(rel.vars.len(), 2, "relation must involve exactly two names");
    assert_eq!(a.var(), b.var(), "arguments must share a variable");
    let mut acc = UniRat::zero(a.var());
    for (mono, coeff) in &rel.terms {
        let term = a
            .pow_i64(mono.0[0] as i64)
            .expect("nonnegative power")
            .mul(&b.pow_i64(mono.0[1] as i64).expect("nonnegative power"))
            .scale(coeff);
        acc = acc.add(&term);
    }
    acc.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_polynomial, parse_unirat};
    use crate::unirat::unirat_equal;

    fn curve(src: &str) -> CurvePoly {
        let poly = parse_polynomial(src, &["x", "y", "p"]).unwrap();
        CurvePoly::new(&poly, "x", "y", "p").unwrap()
    }

    #[test]
    fn split_extracts_quadratic_data() {
        let c = curve("y^2 - x^3 + x + 0*p");
        let s = quadratic_split(&c, "y").unwrap();
        assert_eq!(s.split_var, "y");
        assert_eq!(s.other_var, "x");
        assert!(s.b.is_zero());
        assert_eq!(s.delta, parse_polynomial("4*x^3 - 4*x", &["x", "p"]).unwrap());
        assert!(matches!(
            quadratic_split(&c, "x"),
            Err(EllipticError::NotQuadratic { degree: 3, .. })
        ));
        assert!(matches!(
            quadratic_split(&c, "q"),
            Err(EllipticError::UnknownVariable(_))
        ));
    }

    #[test]
    fn lemniscatic_curve_has_j_1728() {
        let s = quadratic_split(&curve("y^2 - x^3 + x + 0*p"), "y").unwrap();
        let inv = quartic_invariants(&s).unwrap();
        assert_eq!(inv.i, UniPoly::from_ints("p", &[48]));
        assert!(inv.j.is_zero());
        let j = j_invariant(&s).unwrap();
        assert!(unirat_equal(&j, &UniRat::constant("p", rat_int(1728))));
        let h = hauptmodul(&s).unwrap();
        assert!(unirat_equal(&h, &UniRat::one("p")));
    }

    #[test]
    fn equianharmonic_curve_has_j_zero() {
        let s = quadratic_split(&curve("y^2 - x^3 + 1 + 0*p"), "y").unwrap();
        assert!(quartic_invariants(&s).unwrap().i.is_zero());
        let j = j_invariant(&s).unwrap();
        assert!(j.is_zero());
        assert!(matches!(hauptmodul(&s), Err(EllipticError::HauptmodulInfinite)));
    }

    #[test]
    fn legendre_family_hauptmodul() {
        // y^2 = x (x - 1) (x - p): the classical lambda-line, with
        // 1728/j = (27/4) p^2 (1 - p)^2 / (p^2 - p + 1)^3.
        let s = quadratic_split(&curve("y^2 - x^3 + (1+p)*x^2 - p*x"), "y").unwrap();
        let inv = quartic_invariants(&s).unwrap();
        assert_eq!(inv.i, UniPoly::from_ints("p", &[16, -16, 16]));
        let h = hauptmodul(&s).unwrap();
        let expect = parse_unirat(
            "27*p^2*(1-p)^2 / (4*(p^2 - p + 1)^3)",
            "p",
        )
        .unwrap();
        assert!(unirat_equal(&h, &expect));
    }

    #[test]
    fn j_is_stable_under_affine_moves() {
        // x -> x + 3 and x -> 5x rescale (I, J) by (s^4, s^6) and leave j
        // untouched.
        let base = quadratic_split(&curve("y^2 - x^3 - p*x - 2"), "y").unwrap();
        let shifted =
            quadratic_split(&curve("y^2 - (x+3)^3 - p*(x+3) - 2"), "y").unwrap();
        let scaled =
            quadratic_split(&curve("y^2 - 125*x^3 - 5*p*x - 2"), "y").unwrap();
        let j0 = j_invariant(&base).unwrap();
        assert!(unirat_equal(&j0, &j_invariant(&shifted).unwrap()));
        assert!(unirat_equal(&j0, &j_invariant(&scaled).unwrap()));
    }

    #[test]
    fn degenerate_quartic_is_rejected() {
        // Delta = 4 x^2 (x - p)^2 is a perfect square: 4I^3 = J^2.
        let s = quadratic_split(&curve("y^2 - x^2*(x-p)^2"), "y").unwrap();
        assert!(matches!(j_invariant(&s), Err(EllipticError::DegenerateCurve)));
        assert!(matches!(hauptmodul(&s), Err(EllipticError::DegenerateCurve)));
    }

    #[test]
    fn quintic_discriminant_is_rejected() {
        let s = quadratic_split(&curve("y^2 - x^5 - p"), "y").unwrap();
        assert!(matches!(
            j_invariant(&s),
            Err(EllipticError::DiscriminantDegreeTooHigh { degree: 5 })
        ));
    }

    #[test]
    fn relation_verification_distinguishes() {
        let rel = parse_polynomial("A^2 - B", &["A", "B"]).unwrap();
        let a = parse_unirat("p/(1-p)", "p").unwrap();
        let b = parse_unirat("p^2/(1-p)^2", "p").unwrap();
        assert!(verify_relation(&rel, &a, &b));
        let b_wrong = parse_unirat("p^2/(1-p)", "p").unwrap();
        assert!(!verify_relation(&rel, &a, &b_wrong));
    }
}
