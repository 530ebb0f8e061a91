//! From denominators to plane curves: elimination through the product of the
//! variables, reduction modulo a quadratic relation, and the tri-quadratic
//! involution.
//!
//! `eliminate_to_curve` substitutes one variable by p/(product of the
//! others), clears the resulting monomial denominators and normalizes
//! content, turning the denominator of a rational function in k variables
//! into a polynomial in the k-1 remaining variables and the deformation
//! parameter p. For k = 3 the result is a plane curve over Q[p].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::Point;
use crate::multipoly::{Monomial, MultiPoly, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveError {
    UnknownVariable(String),
    ParameterNameClash(String),
    /// Elimination needs at least three variables so that a curve (or higher
    /// dimensional relation) remains.
    TooFewVariables,
    NotQuadraticIn(String),
    /// The coefficient of v^0 vanishes, so v -> C/(A v) is not birational.
    DegenerateInvolution,
    /// A variable outside the two curve variables and the parameter occurs.
    ExtraVariable(String),
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::UnknownVariable(v) => write!(f, "variable {v} is not declared"),
            CurveError::ParameterNameClash(v) => {
                write!(f, "parameter name {v} collides with a variable")
            }
            CurveError::TooFewVariables => {
                write!(f, "elimination needs at least three variables")
            }
            CurveError::NotQuadraticIn(v) => write!(f, "polynomial is not quadratic in {v}"),
            CurveError::DegenerateInvolution => {
                write!(f, "constant coefficient vanishes; involution is degenerate")
            }
            CurveError::ExtraVariable(v) => {
                write!(f, "variable {v} does not belong to the curve")
            }
        }
    }
}

/// A plane curve over Q[param]: a polynomial in two curve variables whose
/// coefficients are polynomials in the deformation parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoly {
    pub x_var: String,
    pub y_var: String,
    pub param: String,
    pub poly: MultiPoly,
}

impl CurvePoly {
    /// Wrap a polynomial over exactly {x_var, y_var, param} (in that order
    /// after re-embedding).
    pub fn new(poly: &MultiPoly, x_var: &str, y_var: &str, param: &str) -> Result<Self, CurveError> {
        for v in [x_var, y_var, param] {
            if poly.var_index(v).is_none() {
                return Err(CurveError::UnknownVariable(v.to_string()));
            }
        }
        let narrowed = poly.restrict_vars(&[x_var, y_var, param]).ok_or_else(|| {
            let extra = poly
                .vars
                .iter()
                .enumerate()
                .find(|(i, v)| {
                    let v = v.as_str();
                    v != x_var
                        && v != y_var
                        && v != param
                        && poly.terms.keys().any(|m| m.0[*i] > 0)
                })
                .map(|(_, v)| v.clone())
                .unwrap_or_default();
            CurveError::ExtraVariable(extra)
        })?;
        Ok(CurvePoly {
            x_var: x_var.to_string(),
            y_var: y_var.to_string(),
            param: param.to_string(),
            poly: narrowed,
        })
    }

    /// Support in the two curve variables, parameter powers projected out.
    pub fn support(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self
            .poly
            .terms
            .keys()
            .map(|m| (m.0[0] as i64, m.0[1] as i64))
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

/// Result of eliminating one variable: a plane curve when two variables and
/// the parameter remain, otherwise a higher-dimensional relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eliminated {
    Curve(CurvePoly),
    Poly(MultiPoly),
}

impl Eliminated {
    pub fn into_poly(self) -> MultiPoly {
        match self {
            Eliminated::Curve(c) => c.poly,
            Eliminated::Poly(p) => p,
        }
    }
}

/// Substitute `eliminated -> param / (product of the other variables)` in
/// `den`, clear monomial denominators, and normalize: divide by the integer
/// content and by any common pure monomial in the remaining (curve)
/// variables, with positive leading coefficient. Powers of `param` are never
/// divided out.
pub fn eliminate_to_curve(
    den: &MultiPoly,
    eliminated: &str,
    param: &str,
) -> Result<Eliminated, CurveError> {
    let t = den
        .var_index(eliminated)
        .ok_or_else(|| CurveError::UnknownVariable(eliminated.to_string()))?;
    if den.var_index(param).is_some() {
        return Err(CurveError::ParameterNameClash(param.to_string()));
    }
    let k = den.vars.len();
    if k < 3 {
        return Err(CurveError::TooFewVariables);
    }
    let remaining: Vec<&str> = den
        .vars
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != t)
        .map(|(_, v)| v.as_str())
        .collect();
    let mut new_vars: Vec<&str> = remaining.clone();
    new_vars.push(param);

    let shift = den.terms.keys().map(|m| m.0[t]).max().unwrap_or(0);
    let mut out = MultiPoly::new(&new_vars);
    for (m, c) in &den.terms {
        let et = m.0[t];
        let mut exps: Vec<u32> = Vec::with_capacity(k);
        for (i, &e) in m.0.iter().enumerate() {
            if i != t {
                exps.push(e + shift - et);
            }
        }
        exps.push(et);
        out.add_term(Monomial(exps), c.clone());
    }

    // Strip any pure monomial factor in the curve variables.
    for i in 0..k - 1 {
        let min = out.terms.keys().map(|m| m.0[i]).min().unwrap_or(0);
        if min > 0 {
            let mut shifted = MultiPoly::new(&new_vars);
            for (m, c) in &out.terms {
                let mut exps = m.0.clone();
                exps[i] -= min;
                shifted.add_term(Monomial(exps), c.clone());
            }
            out = shifted;
        }
    }
    let (out, _) = out.primitive_part();

    if k == 3 {
        let c = CurvePoly::new(&out, remaining[0], remaining[1], param)?;
        Ok(Eliminated::Curve(c))
    } else {
        Ok(Eliminated::Poly(out))
    }
}

/// Pseudo-reduce `q` modulo a relation `c` that is quadratic in `y`.
/// Returns `(remainder, multiplier)` with `multiplier * q = remainder`
/// modulo `c`, the remainder of degree at most one in `y` and the multiplier
/// a power of the leading coefficient of `c` in `y` (so no denominators are
/// introduced).
pub fn reduce_modulo_curve(
    q: &MultiPoly,
    c: &MultiPoly,
    y: &str,
) -> Result<(MultiPoly, MultiPoly), CurveError> {
    if q.var_index(y).is_none() || c.var_index(y).is_none() {
        return Err(CurveError::UnknownVariable(y.to_string()));
    }
    if c.degree_in(y) != Some(2) {
        return Err(CurveError::NotQuadraticIn(y.to_string()));
    }
    let yi = q.var_index(y).unwrap();
    let a = c.coeff_in(y, 2);
    let vars: Vec<&str> = q.vars.iter().map(|s| s.as_str()).collect();
    let mut r = q.clone();
    let mut mult = MultiPoly::one(&vars);
    while let Some(d) = r.degree_in(y) {
        if d < 2 {
            break;
        }
        let lead = r.coeff_in(y, d);
        let mut shift = alloc::vec![0u32; r.vars.len()];
        shift[yi] = d - 2;
        r = r
            .mul(&a)
            .sub(&lead.mul(c).mul_monomial(&shift, &crate::rational::rat_int(1)));
        mult = mult.mul(&a);
    }
    Ok((r, mult))
}

/// The involution v -> C/(A v) attached to a polynomial quadratic in v,
/// s = A v^2 + B v + C; the other variables are fixed. Applying the map to s
/// multiplies it by the cofactor C/(A v^2), and the map is its own inverse.
#[derive(Debug, Clone)]
pub struct TriquadraticInvolution {
    pub var: String,
    pub a: MultiPoly,
    pub c: MultiPoly,
    pub bindings: BTreeMap<String, RationalFunction>,
}

pub fn triquadratic_involution(
    s: &MultiPoly,
    v: &str,
) -> Result<TriquadraticInvolution, CurveError> {
    let vi = s
        .var_index(v)
        .ok_or_else(|| CurveError::UnknownVariable(v.to_string()))?;
    if s.degree_in(v) != Some(2) {
        return Err(CurveError::NotQuadraticIn(v.to_string()));
    }
    let a = s.coeff_in(v, 2);
    let c = s.coeff_in(v, 0);
    if c.is_zero() {
        return Err(CurveError::DegenerateInvolution);
    }
    let vars: Vec<&str> = s.vars.iter().map(|x| x.as_str()).collect();
    let mut shift = alloc::vec![0u32; s.vars.len()];
    shift[vi] = 1;
    let av = a.mul_monomial(&shift, &crate::rational::rat_int(1));
    let mut bindings = BTreeMap::new();
    bindings.insert(v.to_string(), RationalFunction::new(c.clone(), av));
    for w in &s.vars {
        if w != v {
            bindings.insert(
                w.clone(),
                RationalFunction::from_poly(MultiPoly::variable(&vars, w)),
            );
        }
    }
    Ok(TriquadraticInvolution { var: v.to_string(), a, c, bindings })
}

impl TriquadraticInvolution {
    pub fn apply(&self, rf: &RationalFunction) -> RationalFunction {
        rf.substitute(&self.bindings).expect("involution bindings are total")
    }

    /// Check that applying the involution twice fixes every variable.
    pub fn squares_to_identity(&self) -> bool {
        let vars: Vec<&str> = self.a.vars.iter().map(|s| s.as_str()).collect();
        self.bindings.keys().all(|w| {
            let image = &self.bindings[w];
            let twice = self.apply(image);
            twice == RationalFunction::from_poly(MultiPoly::variable(&vars, w))
        })
    }
}
