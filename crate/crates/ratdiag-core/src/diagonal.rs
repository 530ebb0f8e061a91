//! Diagonal series of multivariate rational functions.
//!
//! The diagonal of F = sum a_{m1..mk} x1^m1...xk^mk is the univariate series
//! sum a_{m..m} x^m. It is extracted exactly by expanding F slice by slice in
//! total degree: with D = sum_e D_e and N = sum_d N_d graded by total degree,
//! the slices T_d of N/D satisfy c0 T_d = N_d - sum_{e>=1} D_e T_{d-e}, and
//! the diagonal coefficient at m sits in slice k*m. Only the last max-degree
//! slices are kept.
//!
//! Monomial coordinate changes whose image monomials multiply to a power
//! (x1...xk)^n rescale the diagonal variable: Diag(F after the change)(x) =
//! Diag(F)(x^n).

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::multipoly::{Monomial, MultiPoly, RationalFunction};
use crate::rational::BigRat;
use crate::series::PowerSeries;

/// Expansion work grows like binomial(k*N + k - 1, k - 1); past this total
/// degree (for four or more variables) the guarded entry point refuses.
pub const TOTAL_DEGREE_BUDGET: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagonalError {
    /// The denominator vanishes at the origin, so F has no Taylor expansion.
    NotExpandable,
    /// k*N exceeds the total-degree budget for k >= 4 variables; use the
    /// unguarded entry point to force the computation.
    BudgetExceeded { variables: usize, total_degree: usize, limit: usize },
}

impl fmt::Display for DiagonalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagonalError::NotExpandable => {
                write!(f, "denominator vanishes at the origin; no Taylor expansion")
            }
            DiagonalError::BudgetExceeded { variables, total_degree, limit } => write!(
                f,
                "expansion to total degree {total_degree} in {variables} variables exceeds the budget of {limit}; force to override"
            ),
        }
    }
}

type Slice = BTreeMap<Vec<u32>, BigRat>;

fn slices_of(p: &MultiPoly) -> Vec<Slice> {
    let top = p.total_degree().unwrap_or(0) as usize;
    let mut out = alloc::vec![Slice::new(); top + 1];
    for (m, c) in &p.terms {
        out[m.total_degree() as usize].insert(m.0.clone(), c.clone());
    }
    out
}

/// acc -= a * b (slice product, both homogeneous).
fn mul_sub(acc: &mut Slice, a: &Slice, b: &Slice) {
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb.iter()).map(|(x, y)| x + y).collect();
            let c = ca * cb;
            match acc.entry(m) {
                Entry::Vacant(e) => {
                    e.insert(-c);
                }
                Entry::Occupied(mut e) => {
                    *e.get_mut() -= c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }
}

/// Diagonal of F through x^order, refusing oversized expansions.
pub fn diagonal(f: &RationalFunction, order: usize) -> Result<PowerSeries, DiagonalError> {
    let k = f.num.vars.len();
    if k >= 4 && k * order > TOTAL_DEGREE_BUDGET {
        return Err(DiagonalError::BudgetExceeded {
            variables: k,
            total_degree: k * order,
            limit: TOTAL_DEGREE_BUDGET,
        });
    }
    diagonal_unguarded(f, order)
}

/// Diagonal of F through x^order, with no size guard.
pub fn diagonal_unguarded(
    f: &RationalFunction,
    order: usize,
) -> Result<PowerSeries, DiagonalError> {
    let k = f.num.vars.len();
    assert!(k >= 1, "diagonal needs at least one variable");
    let den = slices_of(&f.den);
    let c0 = match den[0].values().next() {
        Some(c) => c.clone(),
        None => return Err(DiagonalError::NotExpandable),
    };
    let c0_inv = c0.recip();
    let num = slices_of(&f.num);
    let max_e = den.len() - 1;
    let var = f.num.vars[0].clone();

    let mut coeffs = alloc::vec![BigRat::zero(); order + 1];
    let mut window: VecDeque<Slice> = VecDeque::with_capacity(max_e.max(1));
    for d in 0..=(k * order) {
        let mut t = num.get(d).cloned().unwrap_or_default();
        for e in 1..=max_e.min(d) {
            if !den[e].is_empty() {
                let prev = &window[window.len() - e];
                mul_sub(&mut t, &den[e], prev);
            }
        }
        if !c0_inv.is_one() {
            for c in t.values_mut() {
                *c *= &c0_inv;
            }
        }
        if d % k == 0 {
            let m = (d / k) as u32;
            if let Some(c) = t.get(&alloc::vec![m; k]) {
                coeffs[d / k] = c.clone();
            }
        }
        if max_e > 0 {
            if window.len() == max_e {
                window.pop_front();
            }
            window.push_back(t);
        }
    }
    Ok(PowerSeries::new(&var, coeffs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialMapError {
    NotSquare,
    SingularMatrix,
    /// The image monomials must multiply to (x1...xk)^n for a single n >= 1;
    /// equivalently every variable occurs with the same total exponent n
    /// across the images.
    UnequalSums,
    /// A constant column makes an image a pure power of the product of all
    /// variables; such coordinates are excluded.
    ConstantColumn,
}

impl fmt::Display for MonomialMapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialMapError::NotSquare => write!(f, "exponent matrix is not square"),
            MonomialMapError::SingularMatrix => write!(f, "exponent matrix is singular"),
            MonomialMapError::UnequalSums => {
                write!(f, "product of the images is not a power of the product of the variables")
            }
            MonomialMapError::ConstantColumn => {
                write!(f, "an image is a pure power of the product of the variables")
            }
        }
    }
}

/// A monomial coordinate change: variable j maps to the monomial whose
/// exponent vector is column j, so v_j -> prod_i v_i^{matrix[i][j]}.
///
/// Valid maps are invertible, no image is a pure power of the product of the
/// variables, and the product of all images is (v_1...v_k)^n for some
/// n >= 1 (row sums all equal n); under that condition the diagonal of the
/// transformed function is the original diagonal in x^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    pub matrix: Vec<Vec<u32>>,
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0i64;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        det += sign * m[0][j] * int_det(&minor);
    }
    det
}

impl MonomialMap {
    pub fn new(matrix: Vec<Vec<u32>>) -> Result<Self, Vec<MonomialMapError>> {
        let k = matrix.len();
        if k == 0 || matrix.iter().any(|row| row.len() != k) {
            return Err(alloc::vec![MonomialMapError::NotSquare]);
        }
        let mut errors = Vec::new();
        let signed: Vec<Vec<i64>> =
            matrix.iter().map(|row| row.iter().map(|&v| v as i64).collect()).collect();
        if int_det(&signed) == 0 {
            errors.push(MonomialMapError::SingularMatrix);
        }
        let sums: Vec<u32> = matrix.iter().map(|row| row.iter().sum()).collect();
        if sums.iter().any(|&s| s != sums[0]) || sums[0] == 0 {
            errors.push(MonomialMapError::UnequalSums);
        }
        for j in 0..k {
            if (0..k).all(|i| matrix[i][j] == matrix[0][j]) {
                errors.push(MonomialMapError::ConstantColumn);
                break;
            }
        }
        if errors.is_empty() {
            Ok(MonomialMap { matrix })
        } else {
            Err(errors)
        }
    }

    /// The power n with product of images = (product of variables)^n; the
    /// diagonal variable rescales as x -> x^n.
    pub fn product_power(&self) -> u32 {
        self.matrix[0].iter().sum()
    }

    fn apply_exponents(&self, e: &[u32]) -> Vec<u32> {
        let k = self.matrix.len();
        (0..k)
            .map(|i| (0..k).map(|j| self.matrix[i][j] * e[j]).sum())
            .collect()
    }
}

fn transform_poly(p: &MultiPoly, map: &MonomialMap) -> MultiPoly {
    let vars: Vec<&str> = p.vars.iter().map(|s| s.as_str()).collect();
    let mut out = MultiPoly::new(&vars);
    for (m, c) in &p.terms {
        out.add_term(Monomial(map.apply_exponents(&m.0)), c.clone());
    }
    out
}

/// Apply a monomial coordinate change to a rational function.
pub fn monomial_transform(f: &RationalFunction, map: &MonomialMap) -> RationalFunction {
    assert_eq!(map.matrix.len(), f.num.vars.len(), "map size must match variable count");
    RationalFunction::new(transform_poly(&f.num, map), transform_poly(&f.den, map))
}

/// Raise every variable to the n-th power (the diagonal becomes a series in
/// x^n).
pub fn power_substitution(f: &RationalFunction, n: u32) -> RationalFunction {
    assert!(n >= 1);
    let stretch = |p: &MultiPoly| {
        let vars: Vec<&str> = p.vars.iter().map(|s| s.as_str()).collect();
        let mut out = MultiPoly::new(&vars);
        for (m, c) in &p.terms {
            let e: Vec<u32> = m.0.iter().map(|&x| x * n).collect();
            out.add_term(Monomial(e), c.clone());
        }
        out
    };
    RationalFunction::new(stretch(&f.num), stretch(&f.den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;
    use crate::rational::rat_int;

    #[test]
    fn two_variable_central_binomials() {
        // Diag 1/(1 - x - y) = sum binomial(2m, m) x^m.
        let f = parse_expression("1/(1 - x - y)", &["x", "y"]).unwrap();
        let d = diagonal(&f, 6).unwrap();
        let expect: Vec<BigRat> =
            [1, 2, 6, 20, 70, 252, 924].iter().map(|&n| rat_int(n)).collect();
        assert_eq!(d.coeffs, expect);
    }

    #[test]
    fn numerator_shifts_the_diagonal() {
        // Coefficient of x^m y^m in x*y/(1 - x - y) is binomial(2m-2, m-1).
        let f = parse_expression("x*y/(1 - x - y)", &["x", "y"]).unwrap();
        let d = diagonal(&f, 5).unwrap();
        let expect: Vec<BigRat> = [0, 1, 2, 6, 20, 70].iter().map(|&n| rat_int(n)).collect();
        assert_eq!(d.coeffs, expect);
    }

    #[test]
    fn origin_pole_is_rejected() {
        let f = parse_expression("1/(x + y)", &["x", "y"]).unwrap();
        assert!(matches!(diagonal(&f, 3), Err(DiagonalError::NotExpandable)));
    }

    #[test]
    fn budget_guard_trips_and_can_be_forced() {
        let f = parse_expression("1/(1 - x - y - z - w)", &["x", "y", "z", "w"]).unwrap();
        assert!(matches!(
            diagonal(&f, 16),
            Err(DiagonalError::BudgetExceeded { .. })
        ));
        // Multinomial diagonal: (4m)!/m!^4 at m = 1 is 24.
        let d = diagonal_unguarded(&f, 1).unwrap();
        assert_eq!(d.coeffs[1], rat_int(24));
        let d = diagonal(&f, 15).unwrap();
        assert_eq!(d.coeffs[1], rat_int(24));
    }

    #[test]
    fn monomial_map_validation() {
        // Images x*z^2, x*y, y: product (x*y*z)^2, det 2.
        let ok = MonomialMap::new(alloc::vec![
            alloc::vec![1, 1, 0],
            alloc::vec![0, 1, 1],
            alloc::vec![2, 0, 0],
        ])
        .unwrap();
        assert_eq!(ok.product_power(), 2);
        let errs = MonomialMap::new(alloc::vec![alloc::vec![1, 2], alloc::vec![1, 2]])
            .unwrap_err();
        assert!(errs.contains(&MonomialMapError::SingularMatrix));
        assert!(errs.contains(&MonomialMapError::ConstantColumn));
        let errs = MonomialMap::new(alloc::vec![alloc::vec![2, 0], alloc::vec![0, 1]])
            .unwrap_err();
        assert!(errs.contains(&MonomialMapError::UnequalSums));
        assert!(MonomialMap::new(alloc::vec![alloc::vec![1, 0], alloc::vec![1, 0, 3]]).is_err());
    }

    #[test]
    fn transform_rescales_the_diagonal_variable() {
        // Images x^2 and x*y^3: product (x*y)^3, det 6.
        let f = parse_expression("1/(1 - x - y)", &["x", "y"]).unwrap();
        let map = MonomialMap::new(alloc::vec![alloc::vec![2, 1], alloc::vec![0, 3]]).unwrap();
        assert_eq!(map.product_power(), 3);
        let g = monomial_transform(&f, &map);
        let dg = diagonal(&g, 9).unwrap();
        let df = diagonal(&f, 3).unwrap();
        for m in 0..=3 {
            assert_eq!(dg.coeffs[3 * m], df.coeffs[m], "coefficient {m}");
        }
        for m in (0..=9).filter(|m| m % 3 != 0) {
            assert!(dg.coeffs[m].is_zero(), "off-lattice coefficient {m}");
        }
    }

    #[test]
    fn identity_map_preserves_everything() {
        let f = parse_expression("(1 + x*y)/(1 - x - y - x*y^2)", &["x", "y"]).unwrap();
        let map = MonomialMap::new(alloc::vec![alloc::vec![1, 0], alloc::vec![0, 1]]).unwrap();
        let g = monomial_transform(&f, &map);
        assert_eq!(g, f);
    }

    #[test]
    fn power_substitution_spreads_coefficients() {
        let f = parse_expression("1/(1 - x - y)", &["x", "y"]).unwrap();
        let g = power_substitution(&f, 3);
        let dg = diagonal(&g, 9).unwrap();
        let df = diagonal(&f, 3).unwrap();
        for m in 0..=3 {
            assert_eq!(dg.coeffs[3 * m], df.coeffs[m]);
        }
    }
}
