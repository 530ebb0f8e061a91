//! Diagonals of the headline rational functions, matched against their
//! pullbacked hypergeometric closed forms.

use std::collections::BTreeMap;

use ratdiag_core::diagonal::{diagonal, diagonal_unguarded, DiagonalError, TOTAL_DEGREE_BUDGET};
use ratdiag_core::parse::{parse_expression, parse_polynomial, parse_unirat};
use ratdiag_core::rational::{rat, rat_int, BigRat};
use ratdiag_core::series::{pullbacked_solution, AlgebraicPrefactor, PowerSeries};

fn q(n: i64, d: i64) -> BigRat {
    rat(n, d)
}

fn int_series(var: &str, coeffs: &[i64]) -> PowerSeries {
    PowerSeries::new(var, coeffs.iter().map(|&c| rat_int(c)).collect())
}

fn diag(src: &str, vars: &[&str], order: usize) -> PowerSeries {
    diagonal(&parse_expression(src, vars).unwrap(), order).unwrap()
}

/// Pullbacked 2F1([1/12,5/12],[1],h) with quarter-root style prefactors.
fn modular_solution(factors: &[(&str, BigRat)], h: &str, order: usize) -> PowerSeries {
    let pre = AlgebraicPrefactor {
        factors: factors
            .iter()
            .map(|(src, e)| (parse_unirat(src, "x").unwrap(), e.clone()))
            .collect(),
    };
    pullbacked_solution(
        &pre,
        &[q(1, 12), q(5, 12)],
        &[rat_int(1)],
        &parse_unirat(h, "x").unwrap(),
        "x",
        order,
    )
    .unwrap()
}

#[test]
fn central_binomial_diagonal() {
    let s = diag("1/(1 - x - y)", &["x", "y"], 6);
    assert_eq!(s, int_series("x", &[1, 2, 6, 20, 70, 252, 924]));
}

const QUARTIC_GOLD: [i64; 10] = [
    1,
    0,
    648,
    -72900,
    1224720,
    -330674400,
    23370413220,
    -1276733858400,
    180019474034400,
    -12013427240614800,
];

#[test]
fn four_variable_diagonal_matches_its_modular_form() {
    let s = diag(
        "1/(1 + 3*y + z + 9*y*z + 11*z^2*y + 3*u*x)",
        &["x", "y", "z", "u"],
        9,
    );
    assert_eq!(s, int_series("x", &QUARTIC_GOLD));
    let closed = modular_solution(
        &[("1 - 2592*x^2", q(-1, 4))],
        "-419904*x^3*(5 - 12*x - 19440*x^2 + 2665872*x^3)/(1 - 2592*x^2)^3",
        9,
    );
    assert_eq!(s, closed);
}

#[test]
fn splitting_the_product_term_changes_nothing() {
    // Replacing u by a product u1*u2 adds a variable but keeps the diagonal.
    let s = diag(
        "1/(1 + 3*y + z + 9*y*z + 11*z^2*y + 3*x*u1*u2)",
        &["x", "y", "z", "u1", "u2"],
        5,
    );
    assert_eq!(s, int_series("x", &QUARTIC_GOLD[..6]));
}

#[test]
fn low_degree_perturbations_leave_the_diagonal_unchanged() {
    let gold = int_series(
        "x",
        &[
            1,
            -78,
            15606,
            -3888540,
            1069866630,
            -311621002308,
            94190901642684,
            -29220290149904568,
        ],
    );
    let vars = ["x", "y", "z", "u"];
    let base = "1 + 2*y + 3*z + 5*y*z + 4*y^2*z + 3*x*u";
    let s = diag(&format!("1/({base})"), &vars, 7);
    assert_eq!(s, gold);

    // Terms c(y,z)*x^n with no u cannot meet the diagonal monomials.
    for n in 1..=2 {
        let s = diag(&format!("1/({base} + (7 + 5*z + 2*y)*x^{n})"), &vars, 7);
        assert_eq!(s, gold, "perturbation at x^{n}");
    }

    let closed = modular_solution(
        &[("1 + 312*x - 1584*x^2", q(-1, 4))],
        "5038848*x^3*(13248*x^3 + 2928*x^2 + 368*x + 1)/(1584*x^2 - 312*x - 1)^3",
        7,
    );
    assert_eq!(s, closed);
}

#[test]
fn parameters_bound_to_the_product_of_the_variables() {
    // Two free coefficients of the denominator become rational functions of
    // p = x*y*z; the diagonal picks up the dependence exactly.
    let vars = ["x", "y", "z"];
    let src = "1/(1 + 2*x + ((1 + 3*x*y*z)/(1 + 7*x^2*y^2*z^2))*y + 5*y*z + x*z \
               + ((1 + x^2*y^2*z^2)/(1 + 2*x*y*z))*x*y)";
    let f = parse_expression(src, &vars).unwrap();

    // The same function through the substitution interface.
    let den = parse_polynomial("1 + 2*x + b2*y + 5*y*z + x*z + c3*x*y", &["x", "y", "z", "b2", "c3"]);
    let mut bindings = BTreeMap::new();
    bindings.insert(
        "b2".to_string(),
        parse_expression("(1 + 3*x*y*z)/(1 + 7*x^2*y^2*z^2)", &vars).unwrap(),
    );
    bindings.insert(
        "c3".to_string(),
        parse_expression("(1 + x^2*y^2*z^2)/(1 + 2*x*y*z)", &vars).unwrap(),
    );
    let bound = den.unwrap().substitute(&bindings).unwrap();
    let recip = ratdiag_core::multipoly::RationalFunction::new(bound.den.clone(), bound.num.clone());
    assert_eq!(f, recip);

    let gold = int_series(
        "x",
        &[
            1,
            22,
            822,
            37322,
            1879198,
            100677266,
            5615071804,
            322002537910,
            18844373634212,
        ],
    );
    let s = diagonal(&f, 8).unwrap();
    assert_eq!(s, gold);

    // Closed form: the generic two-parameter prefactor and pullback with the
    // bound parameters cleared to the polynomials q8 and q20.
    let q8 = "5880*x^8 + 156800*x^7 + 71400*x^6 + 35330*x^5 + 19985*x^4 + 1332*x^3 \
              + 1390*x^2 - 86*x + 1";
    let q20 = "-1620675*x^20 + 1234800*x^18 + 158332230*x^17 + 153642195*x^16 \
               + 427157990*x^15 + 344201585*x^14 + 367632300*x^13 + 293263834*x^12 \
               + 229496405*x^11 + 188180096*x^10 + 107454499*x^9 + 51936025*x^8 \
               + 21019296*x^7 + 6259829*x^6 + 1645018*x^5 + 266619*x^4 + 40629*x^3 \
               - 1110*x^2 - 127*x + 2";
    let closed = modular_solution(
        &[
            ("1 + 2*x", q(1, 4)),
            ("1 + 7*x^2", q(1, 2)),
            (q8, q(-1, 4)),
        ],
        &format!("43200*x^4*(1 + 7*x^2)^2*({q20})/((1 + 2*x)*({q8})^3)"),
        8,
    );
    assert_eq!(s, closed);
}

#[test]
fn constant_parameters_instantiate_the_generic_pullback() {
    // Same family with the two parameters frozen to 1 and 2; the discriminant
    // polynomials collapse to P2 = 1 - 88x + 1696x^2 and a quartic P4.
    let s = diag("1/(1 + 2*x + y + 5*y*z + x*z + 2*x*y)", &["x", "y", "z"], 6);
    assert_eq!(s, int_series("x", &[1, 22, 786, 33220, 1542070, 75974052, 3896534964]));
    let closed = modular_solution(
        &[("1 - 88*x + 1696*x^2", q(-1, 4))],
        "43200*x^4*(44*x - 3832*x^2 + 69344*x^3 - 10800*x^4)/(1 - 88*x + 1696*x^2)^3",
        6,
    );
    assert_eq!(s, closed);
}

#[test]
fn diagonal_as_a_half_sum_of_two_modular_branches() {
    let s = diag(
        "1/(1 + x + y + z + x*y + y*z - x^3*y*z)",
        &["x", "y", "z"],
        8,
    );
    let gold = int_series("x", &[1, -2, 6, -11, -10, 273, -1875, 9210, -34218]);
    assert_eq!(s, gold);

    // Neither branch alone is the diagonal; their half-sum is.
    let s1 = modular_solution(
        &[
            ("1 + 9*x", q(-1, 4)),
            ("1 + 3*x", q(-1, 4)),
            ("1 + 27*x^2", q(-1, 4)),
        ],
        "1728*x^3*(1 + 9*x + 27*x^2)^3/((1 + 3*x)^3*(1 + 9*x)^3*(1 + 27*x^2)^3)",
        8,
    );
    let s2 = modular_solution(
        &[("1 + 4*x - 2*x^2 - 36*x^3 + 81*x^4", q(-1, 4))],
        "1728*x^5*(1 + 9*x + 27*x^2)*(1 - 2*x)^2/(1 + 4*x - 2*x^2 - 36*x^3 + 81*x^4)^3",
        8,
    );
    assert_ne!(s, s1);
    assert_ne!(s, s2);
    assert_eq!(s, s1.add(&s2).scale(&q(1, 2)));
}

#[test]
fn telescoper_solutions_need_not_be_diagonals() {
    // The denominator is a product of elliptic curves and the telescoper has
    // a modular solution, but the diagonal itself vanishes.
    let s = diag(
        "x*y*z/((1 + z)^2 - x*(1 - x)*(x - x*y*z*w)*y*(1 - y)*(y - x*y*z*w))",
        &["x", "y", "z", "w"],
        4,
    );
    assert!(s.is_zero());
    let closed = modular_solution(
        &[("1 - x + x^2", q(-1, 4))],
        "27*x^2*(1 - x)^2/(4*(1 - x + x^2)^3)",
        4,
    );
    assert!(!closed.is_zero());
}

#[test]
fn expansion_needs_a_unit_denominator() {
    let f = parse_expression("1/(x + y)", &["x", "y"]).unwrap();
    assert_eq!(diagonal(&f, 3), Err(DiagonalError::NotExpandable));
}

#[test]
fn budget_guard_and_unguarded_escape() {
    let f = parse_expression("1/(1 - x*y*z*u)", &["x", "y", "z", "u"]).unwrap();
    assert_eq!(
        diagonal(&f, 16),
        Err(DiagonalError::BudgetExceeded {
            variables: 4,
            total_degree: 64,
            limit: TOTAL_DEGREE_BUDGET,
        })
    );
    // Exactly at the budget is still allowed; past it needs the escape hatch.
    assert_eq!(diagonal(&f, 15).unwrap(), int_series("x", &[1; 16]));
    assert_eq!(diagonal_unguarded(&f, 16).unwrap(), int_series("x", &[1; 17]));

    // Three variables are never guarded.
    let f = parse_expression("1/(1 - x - y - z)", &["x", "y", "z"]).unwrap();
    let s = diagonal(&f, 21).unwrap();
    let n = 21u64;
    let c = binomial(3 * n, n) * binomial(2 * n, n);
    assert_eq!(s.coeff(21), &BigRat::from(c));
}

fn binomial(n: u64, k: u64) -> num_bigint::BigInt {
    use num_traits::One;
    let mut b = num_bigint::BigInt::one();
    for i in 0..k {
        b = b * num_bigint::BigInt::from(n - i) / num_bigint::BigInt::from(i + 1);
    }
    b
}
