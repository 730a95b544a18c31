//! The scalar domains the algebra engines run over, and the specialization
//! points that connect them.
//!
//! Three kinds of scalars are supported:
//! * `Sym` — rational functions in the parameters r and q,
//! * `Rat` — rational numbers (r and q fixed to rational values),
//! * `Cyc` — elements of a cyclotomic field (q a root of unity).
//!
//! Rational numbers embed into the other two kinds, so mixed arithmetic
//! promotes `Rat` operands automatically. Mixing `Sym` and `Cyc` has no
//! meaning and is treated as an internal invariant violation.

use std::fmt;

use num_traits::Zero;

use super::cyclotomic::CycElem;
use super::ratfunc::RatFunc;
use super::unipoly::{Q};
use crate::error::{Error, Result};

/// How r is pinned at a cyclotomic specialization point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycR {
    /// r = sign * q^k.
    SignedQPow { sign: i64, k: i64 },
    /// r a fixed nonzero rational.
    Rational(Q),
}

/// A point (or partial point) of the parameter space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecPoint {
    /// Substitute r = sign * q^k but leave q symbolic.
    RQPow { sign: i64, k: i64 },
    /// Fix both parameters to rational values.
    Rational { r: Q, q: Q },
    /// Fix q = zeta_order^q_exp (a root of unity) and r per `r`.
    Cyclotomic { order: u32, q_exp: i64, r: CycR },
}

impl SpecPoint {
    /// The multiplicative order of q^2 at this point, if q is a root of
    /// unity there (rational q other than +-1 never is).
    pub fn q_squared_order(&self) -> Option<u32> {
        match self {
            SpecPoint::Cyclotomic { order, q_exp, .. } => {
                let o = *order as i64;
                let e = (2 * q_exp).rem_euclid(o);
                let g = num_integer::gcd(o, e);
                Some((o / g) as u32)
            }
            SpecPoint::Rational { q, .. } => {
                let one = Q::from_integer(1.into());
                if q == &one || q == &(-one) {
                    Some(1)
                } else {
                    None
                }
            }
            SpecPoint::RQPow { .. } => None,
        }
    }
}

/// A scalar from one of the supported domains.
#[derive(Clone, Debug)]
pub enum Scalar {
    Sym(RatFunc),
    Rat(Q),
    Cyc(CycElem),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Q::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Q::from_integer(1.into()))
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::Rat(Q::from_integer(n.into()))
    }

    pub fn from_rational(c: Q) -> Self {
        Scalar::Rat(c)
    }

    pub fn sym_r() -> Self {
        Scalar::Sym(RatFunc::var_r())
    }

    pub fn sym_q() -> Self {
        Scalar::Sym(RatFunc::var_q())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Sym(f) => f.is_zero(),
            Scalar::Rat(c) => c.is_zero(),
            Scalar::Cyc(e) => e.is_zero(),
        }
    }

    /// Promote a rational operand into the other operand's domain.
    fn promoted(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match (a, b) {
            (Scalar::Rat(c), Scalar::Sym(_)) => {
                (Scalar::Sym(RatFunc::from_rational(c.clone())), b.clone())
            }
            (Scalar::Sym(_), Scalar::Rat(c)) => {
                (a.clone(), Scalar::Sym(RatFunc::from_rational(c.clone())))
            }
            (Scalar::Rat(c), Scalar::Cyc(e)) => (
                Scalar::Cyc(CycElem::from_rational(e.order(), c.clone())),
                b.clone(),
            ),
            (Scalar::Cyc(e), Scalar::Rat(c)) => (
                a.clone(),
                Scalar::Cyc(CycElem::from_rational(e.order(), c.clone())),
            ),
            _ => (a.clone(), b.clone()),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match Scalar::promoted(self, other) {
            (Scalar::Sym(a), Scalar::Sym(b)) => Scalar::Sym(a.add(&b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Cyc(a), Scalar::Cyc(b)) => {
                Scalar::Cyc(a.add(&b).expect("matching cyclotomic orders"))
            }
            _ => panic!("cannot mix symbolic and cyclotomic scalars"),
        }
    }

    /// Sum a batch of scalars. For symbolic scalars this accumulates over
    /// a common denominator and reduces once, which is much faster than
    /// folding `add` when many terms share structured denominators.
    pub fn sum(terms: &[Scalar]) -> Scalar {
        if terms.iter().any(|t| matches!(t, Scalar::Sym(_))) {
            let fracs: Vec<RatFunc> = terms
                .iter()
                .map(|t| match t {
                    Scalar::Sym(f) => f.clone(),
                    Scalar::Rat(c) => RatFunc::from_rational(c.clone()),
                    Scalar::Cyc(_) => panic!("cannot mix symbolic and cyclotomic scalars"),
                })
                .collect();
            return Scalar::Sym(RatFunc::sum(&fracs));
        }
        terms
            .iter()
            .fold(Scalar::zero(), |acc, t| acc.add(t))
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Sym(f) => Scalar::Sym(f.neg()),
            Scalar::Rat(c) => Scalar::Rat(-c),
            Scalar::Cyc(e) => Scalar::Cyc(e.neg()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match Scalar::promoted(self, other) {
            (Scalar::Sym(a), Scalar::Sym(b)) => Scalar::Sym(a.mul(&b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Cyc(a), Scalar::Cyc(b)) => {
                Scalar::Cyc(a.mul(&b).expect("matching cyclotomic orders"))
            }
            _ => panic!("cannot mix symbolic and cyclotomic scalars"),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Sym(f) => Ok(Scalar::Sym(f.inv()?)),
            Scalar::Rat(c) => {
                if c.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(c.recip()))
                }
            }
            Scalar::Cyc(e) => Ok(Scalar::Cyc(e.inv()?)),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e == 0 {
            return Ok(Scalar::one());
        }
        let base = if e > 0 { self.clone() } else { self.inv()? };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self {
            Scalar::Sym(f) => f.as_rational(),
            Scalar::Rat(c) => Some(c.clone()),
            Scalar::Cyc(e) => e.as_rational(),
        }
    }

    pub fn as_sym(&self) -> Option<&RatFunc> {
        match self {
            Scalar::Sym(f) => Some(f),
            _ => None,
        }
    }

    /// Specialize a symbolic scalar at a parameter point. Rational scalars
    /// pass through unchanged; cyclotomic scalars are accepted only when the
    /// point matches their field.
    pub fn specialize(&self, point: &SpecPoint) -> Result<Scalar> {
        match self {
            Scalar::Rat(c) => Ok(Scalar::Rat(c.clone())),
            Scalar::Cyc(e) => match point {
                SpecPoint::Cyclotomic { order, .. } if *order == e.order() => {
                    Ok(self.clone())
                }
                _ => Err(Error::MixedScalarKinds(
                    "cyclotomic scalar at a non-matching point".into(),
                )),
            },
            Scalar::Sym(f) => match point {
                SpecPoint::RQPow { sign, k } => {
                    Ok(Scalar::Sym(f.substitute_r_qpow(*sign, *k)?))
                }
                SpecPoint::Rational { r, q } => {
                    Ok(Scalar::Rat(f.eval_rational(r, q)?))
                }
                SpecPoint::Cyclotomic { order, q_exp, r } => {
                    // Stage 1: substitute r, leaving a function of q alone.
                    // The result is gcd-reduced, so numerator and denominator
                    // share no root and the pole test below is exact.
                    let uni = match r {
                        CycR::SignedQPow { sign, k } => f.substitute_r_qpow(*sign, *k)?,
                        CycR::Rational(r0) => f.substitute_r_rational(r0)?,
                    };
                    let (ns, np) = uni.numerator().to_unipoly_q();
                    let (ds, dp) = uni.denominator().to_unipoly_q();
                    let dv = CycElem::eval_laurent_q(*order, *q_exp, ds, &dp)?;
                    if dv.is_zero() {
                        return Err(Error::PoleAtSpecialization(format!(
                            "pole at q = zeta{}^{}",
                            order, q_exp
                        )));
                    }
                    let nv = CycElem::eval_laurent_q(*order, *q_exp, ns, &np)?;
                    Ok(Scalar::Cyc(nv.mul(&dv.inv()?)?))
                }
            },
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match Scalar::promoted(self, other) {
            (Scalar::Sym(a), Scalar::Sym(b)) => a == b,
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Cyc(a), Scalar::Cyc(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Sym(x) => write!(f, "{}", x),
            Scalar::Rat(x) => write!(f, "{}", x),
            Scalar::Cyc(x) => write!(f, "{}", x),
        }
    }
}

/// The algebra parameters r and q, as scalars from one common domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub r: Scalar,
    pub q: Scalar,
}

impl Params {
    /// Fully symbolic parameters.
    pub fn symbolic() -> Self {
        Params {
            r: Scalar::sym_r(),
            q: Scalar::sym_q(),
        }
    }

    /// Parameters pinned at a specialization point.
    pub fn at(point: &SpecPoint) -> Result<Self> {
        let s = Params::symbolic();
        match point {
            SpecPoint::RQPow { .. } => Ok(Params {
                r: s.r.specialize(point)?,
                q: s.q.specialize(point)?,
            }),
            SpecPoint::Rational { r, q } => {
                if r.is_zero() || q.is_zero() {
                    return Err(Error::PreconditionFailed(
                        "parameters r and q must be nonzero".into(),
                    ));
                }
                Ok(Params {
                    r: Scalar::Rat(r.clone()),
                    q: Scalar::Rat(q.clone()),
                })
            }
            SpecPoint::Cyclotomic { order, q_exp, r } => {
                let qv = CycElem::zeta_pow(*order, *q_exp);
                let rv = match r {
                    CycR::SignedQPow { sign, k } => {
                        let mut v = CycElem::zeta_pow(*order, *q_exp * *k);
                        if *sign < 0 {
                            v = v.neg();
                        }
                        v
                    }
                    CycR::Rational(r0) => {
                        if r0.is_zero() {
                            return Err(Error::PreconditionFailed(
                                "parameter r must be nonzero".into(),
                            ));
                        }
                        CycElem::from_rational(*order, r0.clone())
                    }
                };
                if rv.is_zero() {
                    return Err(Error::PreconditionFailed(
                        "parameter r must be nonzero".into(),
                    ));
                }
                Ok(Params {
                    r: rv.into(),
                    q: qv.into(),
                })
            }
        }
    }

    /// The skein parameter z = q - q^{-1}.
    pub fn z(&self) -> Result<Scalar> {
        Ok(self.q.sub(&self.q.inv()?))
    }

    /// The categorical dimension d = (r - r^{-1})/(q - q^{-1}) + 1.
    pub fn dx(&self) -> Result<Scalar> {
        let z = self.z()?;
        if z.is_zero() {
            return Err(Error::PoleAtSpecialization(
                "q - q^{-1} vanishes; the loop value is not determined by (r, q)".into(),
            ));
        }
        Ok(self.r.sub(&self.r.inv()?).div(&z)?.add(&Scalar::one()))
    }

    /// Evaluate a symbolic rational function at these parameters, term by
    /// term. Errors with PoleAtSpecialization if the (reduced) denominator
    /// vanishes at the working point.
    pub fn eval(&self, f: &RatFunc) -> Result<Scalar> {
        let eval_poly = |p: &crate::scalars::LaurentPoly| -> Result<Scalar> {
            let mut acc = Scalar::zero();
            for ((a, b), c) in p.terms() {
                let t = Scalar::from_rational(c.clone())
                    .mul(&self.r.pow(*a)?)
                    .mul(&self.q.pow(*b)?);
                acc = acc.add(&t);
            }
            Ok(acc)
        };
        let num = eval_poly(f.numerator())?;
        let den = eval_poly(f.denominator())?;
        if den.is_zero() {
            return Err(Error::PoleAtSpecialization(format!(
                "denominator of {} vanishes at the working parameters",
                f
            )));
        }
        num.div(&den)
    }

    /// The quantum integer [k] = (q^k - q^{-k})/(q - q^{-1}), computed as a
    /// Laurent polynomial sum so it stays defined at every q.
    pub fn q_int(&self, k: i64) -> Scalar {
        if k == 0 {
            return Scalar::zero();
        }
        let (mag, sign) = if k > 0 { (k, 1) } else { (-k, -1) };
        let mut acc = Scalar::zero();
        for i in 0..mag {
            let p = self.q.pow(mag - 1 - 2 * i).expect("q is invertible");
            acc = acc.add(&p);
        }
        if sign < 0 {
            acc = acc.neg();
        }
        acc
    }
}

impl From<CycElem> for Scalar {
    fn from(e: CycElem) -> Self {
        Scalar::Cyc(e)
    }
}

impl From<RatFunc> for Scalar {
    fn from(f: RatFunc) -> Self {
        Scalar::Sym(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::unipoly::q_from;

    #[test]
    fn promotion_between_rat_and_sym() {
        let a = Scalar::from_i64(2);
        let b = Scalar::sym_q();
        let s = a.add(&b);
        let expect = Scalar::Sym(RatFunc::var_q().add(&RatFunc::from_i64(2)));
        assert_eq!(s, expect);
    }

    #[test]
    fn dx_symbolic_matches_direct_formula() {
        let p = Params::symbolic();
        let d = p.dx().unwrap();
        // (r - r^-1)/(q - q^-1) + 1
        let r = RatFunc::var_r();
        let q = RatFunc::var_q();
        let expect = r
            .sub(&r.inv().unwrap())
            .div(&q.sub(&q.inv().unwrap()))
            .unwrap()
            .add(&RatFunc::one());
        assert_eq!(d, Scalar::Sym(expect));
    }

    #[test]
    fn q_int_at_rational_point() {
        let p = Params::at(&SpecPoint::Rational {
            r: q_from(3),
            q: q_from(2),
        })
        .unwrap();
        // [3] at q = 2 is 4 + 1 + 1/4
        assert_eq!(
            p.q_int(3),
            Scalar::Rat(q_from(21) / q_from(4))
        );
        assert_eq!(p.q_int(-3), Scalar::Rat(-(q_from(21) / q_from(4))));
        assert_eq!(p.q_int(0), Scalar::zero());
    }

    #[test]
    fn specialize_symbolic_to_cyclotomic_with_pole_detection() {
        // f = (q^3 - q^-3)/(q - q^-1) = [3]; at q = zeta6 (primitive 6th
        // root) this is q^2 + 1 + q^-2 = zeta3 + 1 + zeta3^-1 = 0... in fact
        // [3] at a primitive 6th root of unity vanishes.
        let q = RatFunc::var_q();
        let f = q
            .pow(3)
            .unwrap()
            .sub(&q.pow(-3).unwrap())
            .div(&q.sub(&q.pow(-1).unwrap()))
            .unwrap();
        let pt = SpecPoint::Cyclotomic {
            order: 6,
            q_exp: 1,
            r: CycR::Rational(q_from(5) / q_from(7)),
        };
        let v = Scalar::Sym(f).specialize(&pt).unwrap();
        assert!(v.is_zero());

        // 1/[3] at the same point is a genuine pole.
        let g = RatFunc::one()
            .div(
                &q.pow(3)
                    .unwrap()
                    .sub(&q.pow(-3).unwrap())
                    .div(&q.sub(&q.pow(-1).unwrap()))
                    .unwrap(),
            )
            .unwrap();
        let err = Scalar::Sym(g).specialize(&pt);
        assert!(matches!(err, Err(Error::PoleAtSpecialization(_))));
    }

    #[test]
    fn dx_at_r_equals_q_pow() {
        // r = q^2: d = (q^2 - q^-2)/(q - q^-1) + 1 = q + q^-1 + 1
        let p = Params::at(&SpecPoint::RQPow { sign: 1, k: 2 }).unwrap();
        let d = p.dx().unwrap();
        let q = RatFunc::var_q();
        let expect = q.add(&q.pow(-1).unwrap()).add(&RatFunc::one());
        assert_eq!(d, Scalar::Sym(expect));
    }
}
