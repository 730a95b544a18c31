//! The fraction field of Laurent polynomials in r and q, kept in a canonical
//! gcd-reduced form so that structural equality decides identity.

use std::fmt;

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::unipoly::{q_one, Q, UniPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    /// Build from numerator and denominator, reducing to canonical form:
    /// gcd-reduced, denominator a polynomial with minimal exponents (0,0)
    /// and lex-leading coefficient 1.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num: LaurentPoly::zero(),
                den: LaurentPoly::one(),
            };
        }
        let g = num.gcd(&den);
        // a single-term gcd normalizes to 1; only genuine common factors divide
        let (mut n, mut d) = if g.num_terms() > 1 {
            (num.div_exact(&g), den.div_exact(&g))
        } else {
            (num, den)
        };
        // strip the denominator to a polynomial with min exponents (0,0)
        let (mr, mq) = d.min_exponents().unwrap();
        d = d.shift(-mr, -mq);
        n = n.shift(-mr, -mq);
        // also strip any common monomial so representations stay small: shift
        // the numerator only by its own monomial content combined with the
        // denominator's (handled above). Finally normalize the leading unit.
        let lead = d.leading_coeff_lex().unwrap().clone();
        let inv = q_one() / lead;
        RatFunc {
            num: n.scale(&inv),
            den: d.scale(&inv),
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::reduce(p, LaurentPoly::one())
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_i64(n))
    }

    pub fn from_rational(c: Q) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn var_r() -> Self {
        Self::from_poly(LaurentPoly::var_r())
    }

    pub fn var_q() -> Self {
        Self::from_poly(LaurentPoly::var_q())
    }

    pub fn q_pow(k: i64) -> Self {
        Self::from_poly(LaurentPoly::q_pow(k))
    }

    pub fn r_pow(k: i64) -> Self {
        Self::from_poly(LaurentPoly::r_pow(k))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduce(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduce(num, den)
    }

    /// Sum many rational functions, accumulating the numerator over a
    /// running common denominator and gcd-reducing only once at the end.
    /// Folding `add` reduces after every step, which is far slower when
    /// the summands share structured denominators (powers of the same
    /// few factors), as coefficients in diagram-algebra products do.
    pub fn sum<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = &'a RatFunc>,
    {
        let mut num = LaurentPoly::zero();
        let mut den = LaurentPoly::one();
        for t in terms {
            if t.is_zero() {
                continue;
            }
            if t.den == den {
                num = num.add(&t.num);
                continue;
            }
            let g = den.gcd(&t.den);
            let lift_old = t.den.div_exact(&g);
            let lift_new = den.div_exact(&g);
            num = num.mul(&lift_old).add(&t.num.mul(&lift_new));
            den = den.mul(&lift_old);
        }
        Self::reduce(num, den)
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        let base = if e > 0 { self.clone() } else { self.inv()? };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Apply a sign/inversion substitution to both variables:
    /// r -> sr * r^ir and q -> sq * q^iq, with sr, sq in {1,-1} and
    /// ir, iq in {1,-1}.
    pub fn substitute_signs(&self, sr: i64, ir: i64, sq: i64, iq: i64) -> Self {
        Self::reduce(
            self.num.substitute_signs(sr, ir, sq, iq),
            self.den.substitute_signs(sr, ir, sq, iq),
        )
    }

    /// Substitute r -> sign * q^k, producing a univariate function of q.
    pub fn substitute_r_qpow(&self, sign: i64, k: i64) -> Result<Self> {
        let den = self.den.substitute_r_qpow(sign, k);
        if den.is_zero() {
            return Err(Error::PoleAtSpecialization(format!(
                "denominator vanishes identically on r = {}q^{}",
                if sign < 0 { "-" } else { "" },
                k
            )));
        }
        Ok(Self::reduce(self.num.substitute_r_qpow(sign, k), den))
    }

    /// Substitute r -> r0 (nonzero rational), producing a univariate
    /// function of q.
    pub fn substitute_r_rational(&self, r0: &Q) -> Result<Self> {
        let num = self
            .num
            .substitute_r_rational(r0)
            .ok_or_else(|| Error::PoleAtSpecialization("r = 0".into()))?;
        let den = self
            .den
            .substitute_r_rational(r0)
            .ok_or_else(|| Error::PoleAtSpecialization("r = 0".into()))?;
        if den.is_zero() {
            return Err(Error::PoleAtSpecialization(format!(
                "denominator vanishes identically at r = {}",
                r0
            )));
        }
        Ok(Self::reduce(num, den))
    }

    /// Evaluate at a rational point, detecting removable factors by staged
    /// substitution (first r, then q).
    pub fn eval_rational(&self, r0: &Q, q0: &Q) -> Result<Q> {
        if r0.is_zero() || q0.is_zero() {
            return Err(Error::PoleAtSpecialization(
                "evaluation requires nonzero r and q".into(),
            ));
        }
        let uni = self.substitute_r_rational(r0)?;
        let dv = uni
            .den
            .eval_rational(r0, q0)
            .ok_or_else(|| Error::PoleAtSpecialization("negative power of zero".into()))?;
        if dv.is_zero() {
            return Err(Error::PoleAtSpecialization(format!(
                "pole at (r,q) = ({}, {})",
                r0, q0
            )));
        }
        let nv = uni
            .num
            .eval_rational(r0, q0)
            .ok_or_else(|| Error::PoleAtSpecialization("negative power of zero".into()))?;
        Ok(nv / dv)
    }

    /// For a function of q alone: the limit as q -> 1, removing (q-1)
    /// factors exactly. Errors if a genuine pole remains.
    pub fn limit_q_to_one(&self) -> Result<Q> {
        if !self.num.is_univariate_in_q() || !self.den.is_univariate_in_q() {
            return Err(Error::PreconditionFailed(
                "limit_q_to_one requires a function of q only".into(),
            ));
        }
        if self.is_zero() {
            return Ok(Q::zero());
        }
        let (_, mut n) = self.num.to_unipoly_q();
        let (_, mut d) = self.den.to_unipoly_q();
        let qm1 = UniPoly(vec![-q_one(), q_one()]);
        loop {
            let nv = n.eval(&Q::one());
            let dv = d.eval(&Q::one());
            if !dv.is_zero() {
                return Ok(nv / dv);
            }
            if nv.is_zero() {
                n = n.div_exact(&qm1);
                d = d.div_exact(&qm1);
            } else {
                return Err(Error::PoleAtSpecialization("pole at q = 1".into()));
            }
        }
    }

    /// True if this function is sign * q^k for some integer k; returns
    /// (sign, k).
    pub fn as_signed_qpow(&self) -> Option<(i64, i64)> {
        if self.den != LaurentPoly::one() {
            return None;
        }
        if self.num.num_terms() != 1 {
            return None;
        }
        let ((a, b), c) = self.num.terms().next().unwrap();
        if *a != 0 {
            return None;
        }
        if c == &q_one() {
            Some((1, *b))
        } else if c == &(-q_one()) {
            Some((-1, *b))
        } else {
            None
        }
    }

    /// True if constant; returns the rational value.
    pub fn as_rational(&self) -> Option<Q> {
        if self.den != LaurentPoly::one() {
            return None;
        }
        if self.num.is_zero() {
            return Some(Q::zero());
        }
        if self.num.num_terms() != 1 {
            return None;
        }
        let ((a, b), c) = self.num.terms().next().unwrap();
        if *a == 0 && *b == 0 {
            Some(c.clone())
        } else {
            None
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentPoly::one() {
            if self.num.num_terms() <= 1 {
                write!(f, "{}", self.num)
            } else {
                write!(f, "({})", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl std::ops::Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        RatFunc::add(&self, &rhs)
    }
}

impl std::ops::Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        RatFunc::mul(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::unipoly::q_from;

    fn r() -> RatFunc {
        RatFunc::var_r()
    }
    fn q() -> RatFunc {
        RatFunc::var_q()
    }

    #[test]
    fn canonical_cancellation() {
        // (r^2 - q^2)/(r - q) reduces to r + q
        let num = r().mul(&r()).sub(&q().mul(&q()));
        let den = r().sub(&q());
        let f = num.div(&den).unwrap();
        assert_eq!(f, r().add(&q()));
    }

    #[test]
    fn add_then_sub_is_identity() {
        let a = r().div(&q().add(&RatFunc::one())).unwrap();
        let b = q().div(&r().sub(&q())).unwrap();
        assert_eq!(a.add(&b).sub(&b), a);
    }

    #[test]
    fn eval_with_staged_substitution() {
        // (r - q)/(r^2 - q^2) = 1/(r+q); at (1,1) the reduced form is finite
        let f = r()
            .sub(&q())
            .div(&r().mul(&r()).sub(&q().mul(&q())))
            .unwrap();
        let v = f.eval_rational(&q_from(1), &q_from(1)).unwrap();
        assert_eq!(v, q_from(1) / q_from(2));
    }

    #[test]
    fn limit_q1_removes_factors() {
        // (q^3 - q^-3)/(q - q^-1) -> 3 as q -> 1
        let num = RatFunc::q_pow(3).sub(&RatFunc::q_pow(-3));
        let den = q().sub(&RatFunc::q_pow(-1));
        let f = num.div(&den).unwrap();
        assert_eq!(f.limit_q_to_one().unwrap(), q_from(3));
    }

    #[test]
    fn signed_qpow_recognition() {
        assert_eq!(RatFunc::q_pow(-2).as_signed_qpow(), Some((1, -2)));
        assert_eq!(RatFunc::q_pow(3).neg().as_signed_qpow(), Some((-1, 3)));
        assert_eq!(r().as_signed_qpow(), None);
        assert_eq!(RatFunc::one().as_signed_qpow(), Some((1, 0)));
    }
}
