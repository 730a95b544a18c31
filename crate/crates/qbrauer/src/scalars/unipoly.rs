//! Dense univariate polynomials over the rationals. Internal helper for
//! bivariate gcd computations and cyclotomic arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

pub fn q_from(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

/// Integer polynomial helpers for the primitive pseudo-remainder gcd.
/// Representation: ascending coefficients, no trailing zeros.
fn int_trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn int_content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = num_integer::gcd(g, c.clone());
        if g.is_one() {
            break;
        }
    }
    g
}

fn int_strip_content(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = int_content(&v);
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Clear denominators and strip the integer content.
fn int_primitive(p: &UniPoly) -> Vec<BigInt> {
    let lcm = p
        .0
        .iter()
        .map(|c| c.denom().clone())
        .fold(BigInt::one(), num_integer::lcm);
    let v: Vec<BigInt> = p.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    int_strip_content(int_trim(v))
}

/// Pseudo-remainder of a by b: lead(b)^(da-db+1) * a mod b, degree < deg b.
fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lead_b = b.last().unwrap();
    let mut rem = a.to_vec();
    while rem.len() > db {
        let dr = rem.len() - 1;
        let lead_r = rem.last().unwrap().clone();
        for c in rem.iter_mut() {
            *c *= lead_b;
        }
        for (j, bc) in b.iter().enumerate() {
            rem[dr - db + j] -= &lead_r * bc;
        }
        rem = int_trim(rem);
        if rem.len() > dr {
            unreachable!("pseudo-remainder failed to reduce the degree");
        }
        if rem.is_empty() {
            break;
        }
    }
    rem
}

/// Coefficients in ascending degree order; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Q>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn one() -> Self {
        UniPoly(vec![q_one()])
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            UniPoly(vec![c])
        }
    }

    pub fn monomial(c: Q, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![q_zero(); deg + 1];
        v[deg] = c;
        UniPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        debug_assert!(!self.is_zero());
        self.0.len() - 1
    }

    pub fn leading(&self) -> &Q {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn trimmed(v: Vec<Q>) -> Self {
        Self::trim(v)
    }

    fn trim(mut v: Vec<Q>) -> Self {
        while v.last().map_or(false, |c| c.is_zero()) {
            v.pop();
        }
        UniPoly(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![q_zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] += c;
        }
        Self::trim(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![q_zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] -= c;
        }
        Self::trim(v)
    }

    pub fn neg(&self) -> Self {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![q_zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::trim(v)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly(self.0.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics only if `other` is zero.
    pub fn divrem(&self, other: &Self) -> (Self, Self) {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.0.len() < other.0.len() {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.0.clone();
        let dq = self.0.len() - other.0.len();
        let mut quot = vec![q_zero(); dq + 1];
        let lead = other.leading().clone();
        for k in (0..=dq).rev() {
            let c = &rem[k + other.0.len() - 1] / &lead;
            if !c.is_zero() {
                for (j, b) in other.0.iter().enumerate() {
                    let t = &c * b;
                    rem[k + j] -= t;
                }
            }
            quot[k] = c;
        }
        (Self::trim(quot), Self::trim(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, other: &Self) -> Self {
        let (q, r) = self.divrem(other);
        assert!(r.is_zero(), "inexact univariate division");
        q
    }

    /// Monic gcd, via the primitive pseudo-remainder sequence over the
    /// integers (plain rational Euclid suffers exponential coefficient
    /// swell on inputs with large coefficients).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = int_primitive(self);
        let mut b = int_primitive(other);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = int_pseudo_rem(&a, &b);
            if r.is_empty() {
                break;
            }
            a = b;
            b = int_strip_content(r);
        }
        let v: Vec<Q> = b.into_iter().map(Q::from_integer).collect();
        Self::trim(v).monic()
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lead = self.leading().clone();
        self.scale(&(q_one() / lead))
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = q_zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lead = r0.leading().clone();
        let inv = q_one() / lead;
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }
}

/// The cyclotomic polynomial Phi_m, computed by dividing x^m - 1 by the
/// cyclotomic polynomials of the proper divisors of m.
pub fn cyclotomic_poly(m: u32) -> UniPoly {
    assert!(m >= 1);
    let mut num = UniPoly::monomial(q_one(), m as usize).sub(&UniPoly::one());
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = num.div_exact(&phi_d);
        }
    }
    num
}
