//! Exact arithmetic in cyclotomic fields Q(zeta_m), represented as
//! Q[x]/(Phi_m(x)).

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::Zero;

use super::unipoly::{cyclotomic_poly, q_one, Q, UniPoly};
use crate::error::{Error, Result};

fn modulus(order: u32) -> UniPoly {
    static CACHE: Mutex<Option<HashMap<u32, UniPoly>>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    map.entry(order).or_insert_with(|| cyclotomic_poly(order)).clone()
}

/// An element of Q(zeta_order), reduced modulo Phi_order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycElem {
    order: u32,
    poly: UniPoly,
}

impl CycElem {
    pub fn zero(order: u32) -> Self {
        CycElem {
            order,
            poly: UniPoly::zero(),
        }
    }

    pub fn one(order: u32) -> Self {
        CycElem {
            order,
            poly: UniPoly::one(),
        }
    }

    pub fn from_rational(order: u32, c: Q) -> Self {
        CycElem {
            order,
            poly: UniPoly::constant(c),
        }
    }

    /// zeta_order^k for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let phi = modulus(order);
        let (_, rem) = UniPoly::monomial(q_one(), e).divrem(&phi);
        CycElem { order, poly: rem }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.poly.is_zero() {
            return Some(Q::zero());
        }
        if self.poly.degree() == 0 {
            return Some(self.poly.0[0].clone());
        }
        None
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::MixedScalarKinds(format!(
                "cyclotomic orders {} and {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycElem {
            order: self.order,
            poly: self.poly.add(&other.poly),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycElem {
            order: self.order,
            poly: self.poly.sub(&other.poly),
        })
    }

    pub fn neg(&self) -> Self {
        CycElem {
            order: self.order,
            poly: self.poly.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (_, rem) = self.poly.mul(&other.poly).divrem(&modulus(self.order));
        Ok(CycElem {
            order: self.order,
            poly: rem,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = modulus(self.order);
        let (g, s, _) = self.poly.xgcd(&phi);
        debug_assert_eq!(g, UniPoly::one(), "Phi_m is irreducible over Q");
        let (_, rem) = s.divrem(&phi);
        Ok(CycElem {
            order: self.order,
            poly: rem,
        })
    }

    /// Evaluate a univariate Laurent polynomial in q at q = zeta^exp.
    pub fn eval_laurent_q(
        order: u32,
        exp: i64,
        shift: i64,
        poly: &UniPoly,
    ) -> Result<Self> {
        let mut acc = CycElem::zero(order);
        let z = CycElem::zeta_pow(order, exp);
        let mut power = CycElem::zeta_pow(order, exp * shift);
        for c in &poly.0 {
            if !c.is_zero() {
                let term = power.mul(&CycElem::from_rational(order, c.clone()))?;
                acc = acc.add(&term)?;
            }
            power = power.mul(&z)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.poly.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*zeta{}", c, self.order)?,
                _ => write!(f, "{}*zeta{}^{}", c, self.order, i)?,
            }
        }
        Ok(())
    }
}
