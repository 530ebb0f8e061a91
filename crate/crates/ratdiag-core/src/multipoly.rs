//! Sparse multivariate polynomials and rational functions over the rationals.
//!
//! Terms live in a BTreeMap keyed by graded-lexicographic monomials over a
//! declared, ordered variable list, so printing and iteration are
//! deterministic. Binary operations require both operands to carry the same
//! variable list; `with_vars` re-embeds a polynomial into a superset.
//!
//! Key operations: ring arithmetic, simultaneous substitution of rational
//! functions for variables (used for parameters that become functions of the
//! product p = x·y·…), and rational-function arithmetic with equality by
//! cross-multiplication.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{rat_to_string, BigRat};

/// Exponent vector, one entry per declared variable; ordered graded-lex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.0.len(), other.0.len(), "monomials from different variable spaces");
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub vars: Vec<String>,
    pub terms: BTreeMap<Monomial, BigRat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstituteError {
    /// A substituted denominator (or the full denominator after substitution)
    /// vanishes identically.
    DenominatorVanishes,
    /// Binding images do not all share one target variable list.
    MixedTargetVariables,
    /// An unbound source variable is missing from the target variable list.
    UnboundVariable(String),
}

impl fmt::Display for SubstituteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstituteError::DenominatorVanishes => {
                write!(f, "substitution makes a denominator vanish identically")
            }
            SubstituteError::MixedTargetVariables => {
                write!(f, "substitution images use different variable lists")
            }
            SubstituteError::UnboundVariable(v) => {
                write!(f, "variable {v} is neither bound nor present in the target variables")
            }
        }
    }
}

impl MultiPoly {
    pub fn new(vars: &[&str]) -> Self {
        MultiPoly { vars: vars.iter().map(|v| v.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn zero(vars: &[&str]) -> Self {
        Self::new(vars)
    }

    pub fn constant(vars: &[&str], c: BigRat) -> Self {
        let mut p = Self::new(vars);
        p.add_term(Monomial(alloc::vec![0; p.vars.len()]), c);
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, BigRat::one())
    }

    pub fn variable(vars: &[&str], name: &str) -> Self {
        let mut p = Self::new(vars);
        let idx = p.var_index(name).expect("variable not declared");
        let mut exps = alloc::vec![0; p.vars.len()];
        exps[idx] = 1;
        p.add_term(Monomial(exps), BigRat::one());
        p
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Accumulate a term, dropping it if the sum cancels to zero.
    pub fn add_term(&mut self, m: Monomial, c: BigRat) {
        assert_eq!(m.0.len(), self.vars.len(), "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> BigRat {
        self.terms.get(m).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, name: &str) -> Option<u32> {
        let idx = self.var_index(name)?;
        self.terms.keys().map(|m| m.0[idx]).max()
    }

    fn assert_same_vars(&self, other: &MultiPoly) {
        assert_eq!(self.vars, other.vars, "polynomials over different variable lists");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(other);
        let mut out = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: Vec<u32> =
                    ma.0.iter().zip(mb.0.iter()).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(exps), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, exps: &[u32], c: &BigRat) -> MultiPoly {
        assert_eq!(exps.len(), self.vars.len());
        let mut out = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (m, a) in &self.terms {
            let e: Vec<u32> = m.0.iter().zip(exps.iter()).map(|(x, y)| x + y).collect();
            out.add_term(Monomial(e), a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Re-embed into a superset (or reordering) of the variable list; every
    /// used variable must appear in the new list.
    pub fn with_vars(&self, vars: &[&str]) -> MultiPoly {
        let mapping: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = MultiPoly::new(vars);
        for (m, c) in &self.terms {
            let mut exps = alloc::vec![0u32; vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let j = mapping[i].unwrap_or_else(|| {
                        panic!("variable {} used but absent from new list", self.vars[i])
                    });
                    exps[j] = e;
                }
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Restrict to a subset of variables; fails if a dropped variable occurs.
    pub fn restrict_vars(&self, vars: &[&str]) -> Option<MultiPoly> {
        for (i, v) in self.vars.iter().enumerate() {
            if !vars.contains(&v.as_str()) && self.terms.keys().any(|m| m.0[i] > 0) {
                return None;
            }
        }
        Some(self.with_vars(vars))
    }

    /// Pull the integer content and the sign of the graded-lex leading term
    /// out, leaving integer coefficients with content one and positive leading
    /// coefficient.
    pub fn primitive_part(&self) -> (MultiPoly, BigRat) {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return (self.clone(), BigRat::one());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigInt::zero();
        for c in self.terms.values() {
            content = content.gcd(&(c.numer() * (&den_lcm / c.denom())));
        }
        let lead_negative = self.terms.iter().next_back().map(|(_, c)| c.is_negative()).unwrap();
        if lead_negative {
            content = -content;
        }
        let factor = BigRat::new(content, den_lcm);
        (self.scale(&factor.recip()), factor)
    }

    /// Substitute rational functions for variables (simultaneously); unbound
    /// variables map to themselves in the target space.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<String, RationalFunction>,
    ) -> Result<RationalFunction, SubstituteError> {
        let target_vars: Vec<String> = match bindings.values().next() {
            Some(rf) => rf.num.vars.clone(),
            None => self.vars.clone(),
        };
        for rf in bindings.values() {
            if rf.num.vars != target_vars || rf.den.vars != target_vars {
                return Err(SubstituteError::MixedTargetVariables);
            }
        }
        let target_ref: Vec<&str> = target_vars.iter().map(|s| s.as_str()).collect();
        // Image of each source variable as num/den over the target space.
        let mut nums = Vec::with_capacity(self.vars.len());
        let mut dens = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match bindings.get(v) {
                Some(rf) => {
                    nums.push(rf.num.clone());
                    dens.push(rf.den.clone());
                }
                None => {
                    if !target_vars.contains(v) {
                        return Err(SubstituteError::UnboundVariable(v.clone()));
                    }
                    nums.push(MultiPoly::variable(&target_ref, v));
                    dens.push(MultiPoly::one(&target_ref));
                }
            }
        }
        // Common denominator prod den_i^max_i clears every term at once.
        let max_deg: Vec<u32> = (0..self.vars.len())
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let mut num_acc = MultiPoly::new(&target_ref);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(&target_ref, c.clone());
            for i in 0..self.vars.len() {
                if m.0[i] > 0 {
                    term = term.mul(&nums[i].pow(m.0[i]));
                }
                let pad = max_deg[i] - m.0[i];
                if pad > 0 && !dens[i].is_one_poly() {
                    term = term.mul(&dens[i].pow(pad));
                }
            }
            num_acc = num_acc.add(&term);
        }
        let mut den_acc = MultiPoly::one(&target_ref);
        for i in 0..self.vars.len() {
            if max_deg[i] > 0 && !dens[i].is_one_poly() {
                den_acc = den_acc.mul(&dens[i].pow(max_deg[i]));
            }
        }
        Ok(RationalFunction { num: num_acc, den: den_acc })
    }

    fn is_one_poly(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.total_degree() == 0 && c.is_one())
                .unwrap()
    }

    /// Coefficient of `name^k`, as a polynomial over the same variable list
    /// with the exponent of `name` zeroed.
    pub fn coeff_in(&self, name: &str, k: u32) -> MultiPoly {
        let idx = self.var_index(name).expect("variable not declared");
        let mut out = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m.0[idx] == k {
                let mut exps = m.0.clone();
                exps[idx] = 0;
                out.add_term(Monomial(exps), c.clone());
            }
        }
        out
    }

    /// Exponent support projected onto two variables; None if any other
    /// variable occurs.
    pub fn support_2d(&self, x: &str, y: &str) -> Option<Vec<(i64, i64)>> {
        let xi = self.var_index(x)?;
        let yi = self.var_index(y)?;
        let mut pts = Vec::with_capacity(self.terms.len());
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if i != xi && i != yi && e > 0 {
                    return None;
                }
            }
            pts.push((m.0[xi] as i64, m.0[yi] as i64));
        }
        Some(pts)
    }
}

#[derive(Debug, Clone, Eq)]
pub struct RationalFunction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        num.assert_same_vars(&den);
        RationalFunction { num, den }
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        let vars: Vec<&str> = num.vars.iter().map(|s| s.as_str()).collect();
        let den = MultiPoly::one(&vars);
        RationalFunction { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalFunction::new(num, den)
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RationalFunction) -> Option<RationalFunction> {
        if other.num.is_zero() {
            return None;
        }
        Some(RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn scale(&self, c: &BigRat) -> RationalFunction {
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> RationalFunction {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn substitute(
        &self,
        bindings: &BTreeMap<String, RationalFunction>,
    ) -> Result<RationalFunction, SubstituteError> {
        let n = self.num.substitute(bindings)?;
        let d = self.den.substitute(bindings)?;
        if d.num.is_zero() {
            return Err(SubstituteError::DenominatorVanishes);
        }
        Ok(n.div(&d).expect("nonzero divisor"))
    }
}

/// Equality as rational functions: cross-multiplication, not structural.
impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for MultiPoly {
    /// Parseable text in ascending graded-lex term order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
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
            let is_const = m.total_degree() == 0;
            let mut wrote_factor = false;
            if is_const || !mag.is_one() {
                write!(f, "{}", rat_to_string(&mag))?;
                wrote_factor = true;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote_factor {
                    write!(f, "*")?;
                }
                wrote_factor = true;
                if e == 1 {
                    write!(f, "{}", self.vars[i])?;
                } else {
                    write!(f, "{}^{}", self.vars[i], e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
