//! Exact scalar arithmetic: Laurent polynomials and rational functions in
//! the parameters r and q, rational numbers, and cyclotomic fields — plus
//! the specialization machinery that maps between them.

pub mod cyclotomic;
pub mod expr;
pub mod laurent;
pub mod point;
pub mod ratfunc;
pub mod unipoly;

pub use cyclotomic::CycElem;
pub use expr::{parse as parse_expr, Expr};
pub use laurent::LaurentPoly;
pub use point::{CycR, Params, Scalar, SpecPoint};
pub use ratfunc::RatFunc;
pub use unipoly::{cyclotomic_poly, Q, UniPoly};

/// The quantum integer [n] = (q^n - q^{-n})/(q - q^{-1}), expanded as the
/// Laurent polynomial q^{n-1} + q^{n-3} + ... + q^{1-n}.
pub fn qnum(n: i64) -> RatFunc {
    if n == 0 {
        return RatFunc::zero();
    }
    let (mag, neg) = (n.abs(), n < 0);
    let mut p = LaurentPoly::zero();
    for i in 0..mag {
        p = p.add(&LaurentPoly::q_pow(mag - 1 - 2 * i));
    }
    if neg {
        p = p.neg();
    }
    RatFunc::from_poly(p)
}

/// The shifted quantum integer [y+n] = (r q^n - r^{-1} q^{-n})/(q - q^{-1}).
pub fn ynum(n: i64) -> RatFunc {
    let num = LaurentPoly::monomial(unipoly::q_one(), 1, n)
        .sub(&LaurentPoly::monomial(unipoly::q_one(), -1, -n));
    let den = LaurentPoly::var_q().sub(&LaurentPoly::q_pow(-1));
    RatFunc::new(num, den).expect("denominator is nonzero")
}

/// The loop value d(X) = (r - r^{-1})/(q - q^{-1}) + 1.
pub fn dx() -> RatFunc {
    ynum(0).add(&RatFunc::one())
}
