//! Bivariate Laurent polynomials in the symbols r and q over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::unipoly::{q_from, q_one, q_zero, Q, UniPoly};

/// Map from exponent pairs (power of r, power of q) to nonzero rational
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<(i64, i64), Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(q_one(), 0, 0)
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(q_from(n))
    }

    pub fn monomial(c: Q, er: i64, eq: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((er, eq), c);
        }
        LaurentPoly { terms }
    }

    /// The symbol r.
    pub fn var_r() -> Self {
        Self::monomial(q_one(), 1, 0)
    }

    /// The symbol q.
    pub fn var_q() -> Self {
        Self::monomial(q_one(), 0, 1)
    }

    /// q^k for any integer k.
    pub fn q_pow(k: i64) -> Self {
        Self::monomial(q_one(), 0, k)
    }

    /// r^k for any integer k.
    pub fn r_pow(k: i64) -> Self {
        Self::monomial(q_one(), k, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(terms: &mut BTreeMap<(i64, i64), Q>, key: (i64, i64), val: Q) {
        if val.is_zero() {
            return;
        }
        match terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(val);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += val;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            Self::insert_add(&mut terms, *k, v.clone());
        }
        LaurentPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            Self::insert_add(&mut terms, *k, -v.clone());
        }
        LaurentPoly { terms }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for ((ar, aq), ac) in &self.terms {
            for ((br, bq), bc) in &other.terms {
                Self::insert_add(&mut terms, (ar + br, aq + bq), ac * bc);
            }
        }
        LaurentPoly { terms }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiply by the monomial r^er q^eq.
    pub fn shift(&self, er: i64, eq: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), v)| ((a + er, b + eq), v.clone()))
                .collect(),
        }
    }

    /// Minimal exponents (in r and q) over all terms.
    pub fn min_exponents(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            return None;
        }
        let mut mr = i64::MAX;
        let mut mq = i64::MAX;
        for (a, b) in self.terms.keys() {
            mr = mr.min(*a);
            mq = mq.min(*b);
        }
        Some((mr, mq))
    }

    pub fn max_exponents(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            return None;
        }
        let mut mr = i64::MIN;
        let mut mq = i64::MIN;
        for (a, b) in self.terms.keys() {
            mr = mr.max(*a);
            mq = mq.max(*b);
        }
        Some((mr, mq))
    }

    /// Leading coefficient under lexicographic order, r before q.
    pub fn leading_coeff_lex(&self) -> Option<&Q> {
        self.terms.iter().next_back().map(|(_, v)| v)
    }

    /// Substitute r -> sign * q^k.
    pub fn substitute_r_qpow(&self, sign: i64, k: i64) -> Self {
        assert!(sign == 1 || sign == -1);
        let mut terms = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            let s = if sign == -1 && a.rem_euclid(2) == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            Self::insert_add(&mut terms, (0, a * k + b), s);
        }
        LaurentPoly { terms }
    }

    /// Substitute r -> r0, a rational number, yielding a Laurent polynomial in
    /// q only. Fails if r0 = 0 and a negative power of r occurs.
    pub fn substitute_r_rational(&self, r0: &Q) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            let factor = if *a >= 0 {
                num_traits::pow::pow(r0.clone(), *a as usize)
            } else {
                if r0.is_zero() {
                    return None;
                }
                num_traits::pow::pow(r0.recip(), (-a) as usize)
            };
            Self::insert_add(&mut terms, (0, *b), c * factor);
        }
        Some(LaurentPoly { terms })
    }

    /// Substitute both variables by nonzero rationals.
    pub fn eval_rational(&self, r0: &Q, q0: &Q) -> Option<Q> {
        let mut acc = q_zero();
        for ((a, b), c) in &self.terms {
            let pr = rational_pow(r0, *a)?;
            let pq = rational_pow(q0, *b)?;
            acc += c * pr * pq;
        }
        Some(acc)
    }

    /// Apply one of the reparametrization substitutions: each variable maps
    /// to +/- itself or its inverse. `(sr, ir)` say: r -> sr * r^ir.
    pub fn substitute_signs(&self, sr: i64, ir: i64, sq: i64, iq: i64) -> Self {
        let mut terms = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            let mut v = c.clone();
            if sr == -1 && a.rem_euclid(2) == 1 {
                v = -v;
            }
            if sq == -1 && b.rem_euclid(2) == 1 {
                v = -v;
            }
            Self::insert_add(&mut terms, (a * ir, b * iq), v);
        }
        LaurentPoly { terms }
    }

    /// Swap the roles of r and q (used for conjugate-diagram identities).
    pub fn swap_vars(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())).collect(),
        }
    }

    /// True if the polynomial involves only q (no r powers).
    pub fn is_univariate_in_q(&self) -> bool {
        self.terms.keys().all(|(a, _)| *a == 0)
    }

    /// View as a univariate polynomial in q, after shifting the minimal q
    /// exponent to zero. Returns (shift, poly).
    pub fn to_unipoly_q(&self) -> (i64, UniPoly) {
        assert!(self.is_univariate_in_q());
        if self.is_zero() {
            return (0, UniPoly::zero());
        }
        let (_, mq) = self.min_exponents().unwrap();
        let (_, top) = self.max_exponents().unwrap();
        let mut v = vec![q_zero(); (top - mq + 1) as usize];
        for ((_, b), c) in &self.terms {
            v[(b - mq) as usize] = c.clone();
        }
        (mq, UniPoly(v))
    }

    pub fn from_unipoly_q(shift: i64, p: &UniPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in p.0.iter().enumerate() {
            if !c.is_zero() {
                terms.insert((0, shift + i as i64), c.clone());
            }
        }
        LaurentPoly { terms }
    }

    /// Gcd of two Laurent polynomials, up to a monomial and scalar unit.
    /// The result is a genuine polynomial with min exponents (0,0) and
    /// leading lex coefficient 1.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return normalize_unit(other.clone());
        }
        if other.is_zero() {
            return normalize_unit(self.clone());
        }
        let a = to_bipoly(self);
        let b = to_bipoly(other);
        let g = bipoly_gcd(&a, &b);
        normalize_unit(from_bipoly(&g))
    }

    /// Exact division (self must be a multiple of other up to nothing).
    pub fn div_exact(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "laurent division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        // Shift both to genuine polynomials and divide; re-apply the shift.
        let (smr, smq) = self.min_exponents().unwrap();
        let (omr, omq) = other.min_exponents().unwrap();
        let a = to_bipoly(&self.shift(-smr, -smq));
        let b = to_bipoly(&other.shift(-omr, -omq));
        let q = bipoly_div_exact(&a, &b);
        from_bipoly(&q).shift(smr - omr, smq - omq)
    }

    pub fn to_string_pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        // highest lex term first
        for ((a, b), c) in self.terms.iter().rev() {
            let mono = match (*a, *b) {
                (0, 0) => String::new(),
                _ => {
                    let mut s = String::new();
                    if *a != 0 {
                        s.push('r');
                        if *a != 1 {
                            s.push_str(&format!("^{}", a));
                        }
                    }
                    if *b != 0 {
                        if !s.is_empty() {
                            s.push('*');
                        }
                        s.push('q');
                        if *b != 1 {
                            s.push_str(&format!("^{}", b));
                        }
                    }
                    s
                }
            };
            let coeff = if mono.is_empty() {
                format!("{}", c)
            } else if c == &q_one() {
                mono.clone()
            } else if c == &(-q_one()) {
                format!("-{}", mono)
            } else {
                format!("{}*{}", c, mono)
            };
            if parts.is_empty() {
                parts.push(coeff);
            } else if coeff.starts_with('-') {
                parts.push(format!(" - {}", &coeff[1..]));
            } else {
                parts.push(format!(" + {}", coeff));
            }
        }
        parts.concat()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_pretty())
    }
}

fn rational_pow(x: &Q, e: i64) -> Option<Q> {
    if e == 0 {
        return Some(q_one());
    }
    if x.is_zero() {
        return if e > 0 { Some(q_zero()) } else { None };
    }
    let base = if e > 0 { x.clone() } else { x.recip() };
    Some(num_traits::pow::pow(base, e.unsigned_abs() as usize))
}

/// Strip the monomial content and normalize the lex-leading coefficient to 1.
pub fn normalize_unit(p: LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return p;
    }
    let (mr, mq) = p.min_exponents().unwrap();
    let shifted = p.shift(-mr, -mq);
    let lead = shifted.leading_coeff_lex().unwrap().clone();
    shifted.scale(&(q_one() / lead))
}

// --- bivariate polynomial helpers (dense in r, coefficients in Q[q]) ---

/// Polynomial in r with coefficients in Q[q]; index = power of r.
type BiPoly = Vec<UniPoly>;

fn bi_trim(mut v: BiPoly) -> BiPoly {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn to_bipoly(p: &LaurentPoly) -> BiPoly {
    // shift so that all exponents are non-negative
    let (mr, mq) = p.min_exponents().expect("nonzero");
    let shifted = p.shift(-mr.min(0), -mq.min(0));
    let (top_r, _) = shifted.max_exponents().unwrap();
    let mut v: Vec<BTreeMap<i64, Q>> = vec![BTreeMap::new(); (top_r + 1) as usize];
    for ((a, b), c) in &shifted.terms {
        v[*a as usize].insert(*b, c.clone());
    }
    v.into_iter()
        .map(|m| {
            if m.is_empty() {
                UniPoly::zero()
            } else {
                let top = *m.keys().next_back().unwrap();
                let mut coeffs = vec![q_zero(); (top + 1) as usize];
                for (b, c) in m {
                    coeffs[b as usize] = c;
                }
                UniPoly(coeffs)
            }
        })
        .collect()
}

fn from_bipoly(p: &BiPoly) -> LaurentPoly {
    let mut terms = BTreeMap::new();
    for (a, coeff) in p.iter().enumerate() {
        for (b, c) in coeff.0.iter().enumerate() {
            if !c.is_zero() {
                terms.insert((a as i64, b as i64), c.clone());
            }
        }
    }
    LaurentPoly { terms }
}

fn bi_is_zero(p: &BiPoly) -> bool {
    p.is_empty()
}

fn bi_content(p: &BiPoly) -> UniPoly {
    let mut g = UniPoly::zero();
    for c in p {
        if !c.is_zero() {
            g = if g.is_zero() { c.clone() } else { g.gcd(c) };
            if !g.is_zero() && g.degree() == 0 {
                return UniPoly::one();
            }
        }
    }
    if g.is_zero() {
        g
    } else {
        let lead = g.leading().clone();
        g.scale(&(q_one() / lead))
    }
}

fn bi_div_content(p: &BiPoly, cont: &UniPoly) -> BiPoly {
    p.iter()
        .map(|c| {
            if c.is_zero() {
                UniPoly::zero()
            } else {
                c.div_exact(cont)
            }
        })
        .collect()
}

fn bi_mul_coeff(p: &BiPoly, c: &UniPoly) -> BiPoly {
    if c.is_zero() {
        return Vec::new();
    }
    p.iter().map(|a| a.mul(c)).collect()
}

fn bi_sub(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let n = a.len().max(b.len());
    let mut v = vec![UniPoly::zero(); n];
    for (i, c) in a.iter().enumerate() {
        v[i] = v[i].add(c);
    }
    for (i, c) in b.iter().enumerate() {
        v[i] = v[i].sub(c);
    }
    bi_trim(v)
}

fn bi_shift_r(p: &BiPoly, k: usize) -> BiPoly {
    if bi_is_zero(p) {
        return Vec::new();
    }
    let mut v = vec![UniPoly::zero(); k];
    v.extend(p.iter().cloned());
    v
}

/// Pseudo-remainder of a by b in (Q[q])[r].
fn bi_pseudo_rem(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let db = b.len() - 1;
    let lead_b = b.last().unwrap().clone();
    let mut rem = a.clone();
    while !bi_is_zero(&rem) && rem.len() - 1 >= db {
        let dr = rem.len() - 1;
        let lead_r = rem.last().unwrap().clone();
        // rem = rem * lead_b - lead_r * r^(dr-db) * b
        let scaled = bi_mul_coeff(&rem, &lead_b);
        let sub = bi_shift_r(&bi_mul_coeff(b, &lead_r), dr - db);
        rem = bi_sub(&scaled, &sub);
        if rem.len() > dr {
            rem.truncate(dr);
            rem = bi_trim(rem);
        }
    }
    rem
}

fn bi_deg_q(p: &BiPoly) -> usize {
    p.iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.degree())
        .max()
        .unwrap_or(0)
}

fn bi_eval_q(p: &BiPoly, q0: &Q) -> UniPoly {
    UniPoly::trimmed(p.iter().map(|c| c.eval(q0)).collect())
}

/// Division in (Q[q])[r]; None if the division is inexact.
fn bi_try_div(a: &BiPoly, b: &BiPoly) -> Option<BiPoly> {
    if bi_is_zero(a) {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lead_b = b.last().unwrap();
    let mut rem = a.clone();
    let mut quot = vec![UniPoly::zero(); a.len() - b.len() + 1];
    while !bi_is_zero(&rem) {
        let dr = rem.len() - 1;
        if dr < db {
            return None;
        }
        let (c, r) = rem.last().unwrap().divrem(lead_b);
        if !r.is_zero() {
            return None;
        }
        quot[dr - db] = c.clone();
        let sub = bi_shift_r(&bi_mul_coeff(b, &c), dr - db);
        rem = bi_sub(&rem, &sub);
        if !bi_is_zero(&rem) && rem.len() - 1 >= dr {
            return None;
        }
    }
    Some(bi_trim(quot))
}

/// Lagrange interpolation through (xs[i], ys[i]).
fn interpolate(xs: &[Q], ys: &[Q]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, xi) in xs.iter().enumerate() {
        let mut basis = UniPoly::one();
        let mut denom = q_one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                // basis *= (x - xj)
                basis = basis.mul(&UniPoly::trimmed(vec![-xj.clone(), q_one()]));
                denom *= xi - xj;
            }
        }
        acc = acc.add(&basis.scale(&(ys[i].clone() / denom)));
    }
    acc
}

/// Gcd of primitive parts via evaluation at q-points and interpolation
/// (Brown's method). The candidate is verified by exact trial division, so
/// a `Some` answer is always correct; `None` means the caller must fall
/// back to the pseudo-remainder sequence.
fn bipoly_gcd_modular(p: &BiPoly, s: &BiPoly) -> Option<BiPoly> {
    let lp = p.last().unwrap();
    let ls = s.last().unwrap();
    // the r-leading coefficient of the gcd divides both leading coefficients
    let gamma = lp.gcd(ls);
    let m = gamma_deg(&gamma) + bi_deg_q(p).min(bi_deg_q(s)) + 1;
    let mut xs: Vec<Q> = Vec::new();
    let mut ys: Vec<Vec<Q>> = Vec::new();
    let mut dmin = usize::MAX;
    let mut next = 2i64;
    let mut tried = 0;
    while xs.len() < m {
        tried += 1;
        if tried > 4 * m + 64 {
            return None;
        }
        let q0 = q_from(next);
        next += 1;
        if lp.eval(&q0).is_zero() || ls.eval(&q0).is_zero() {
            continue;
        }
        let pu = bi_eval_q(p, &q0);
        let su = bi_eval_q(s, &q0);
        let g = pu.gcd(&su);
        if g.is_zero() {
            continue;
        }
        let d = g.degree();
        if d == 0 {
            // coprime primitive parts
            return Some(vec![UniPoly::one()]);
        }
        if d < dmin {
            dmin = d;
            xs.clear();
            ys.clear();
        } else if d > dmin {
            continue; // unlucky evaluation point
        }
        let scale = gamma.eval(&q0);
        let mut coeffs = vec![q_zero(); dmin + 1];
        for (k, c) in g.0.iter().enumerate() {
            coeffs[k] = c * &scale;
        }
        xs.push(q0);
        ys.push(coeffs);
    }
    let mut cand: BiPoly = (0..=dmin)
        .map(|k| {
            let vals: Vec<Q> = ys.iter().map(|row| row[k].clone()).collect();
            interpolate(&xs, &vals)
        })
        .collect();
    cand = bi_trim(cand);
    if bi_is_zero(&cand) {
        return None;
    }
    let content = bi_content(&cand);
    let cand = bi_div_content(&cand, &content);
    if bi_try_div(p, &cand).is_some() && bi_try_div(s, &cand).is_some() {
        Some(cand)
    } else {
        None
    }
}

fn gamma_deg(g: &UniPoly) -> usize {
    if g.is_zero() {
        0
    } else {
        g.degree()
    }
}

fn bipoly_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    if bi_is_zero(a) {
        return b.clone();
    }
    if bi_is_zero(b) {
        return a.clone();
    }
    let ca = bi_content(a);
    let cb = bi_content(b);
    let gc = ca.gcd(&cb);
    let mut p = bi_div_content(a, &ca);
    let mut s = bi_div_content(b, &cb);
    if p.len() < s.len() {
        std::mem::swap(&mut p, &mut s);
    }
    // Shortcut: evaluate q at a point that keeps both leading r-coefficients
    // nonzero. The r-leading coefficient of any common divisor g divides
    // lead_r(p), so deg_r(g(., q0)) = deg_r(g), and g(., q0) divides the
    // evaluated gcd. A constant evaluated gcd therefore proves deg_r(g) = 0,
    // i.e. the gcd of the primitive parts is trivial.
    for q0 in [2i64, 3, 5, 7, 11] {
        let q0 = q_from(q0);
        if p.last().unwrap().eval(&q0).is_zero() || s.last().unwrap().eval(&q0).is_zero() {
            continue;
        }
        let pu = UniPoly::trimmed(p.iter().map(|c| c.eval(&q0)).collect());
        let su = UniPoly::trimmed(s.iter().map(|c| c.eval(&q0)).collect());
        if !pu.is_zero() && !su.is_zero() && pu.gcd(&su).degree() == 0 {
            return vec![gc];
        }
        break;
    }
    if let Some(g) = bipoly_gcd_modular(&p, &s) {
        return bi_mul_coeff(&g, &gc);
    }
    loop {
        let r = bi_pseudo_rem(&p, &s);
        if bi_is_zero(&r) {
            break;
        }
        let cr = bi_content(&r);
        p = s;
        s = bi_div_content(&r, &cr);
    }
    bi_mul_coeff(&s, &gc)
}

/// Exact division in (Q[q])[r]; panics on nonzero remainder.
fn bipoly_div_exact(a: &BiPoly, b: &BiPoly) -> BiPoly {
    assert!(!bi_is_zero(b));
    if bi_is_zero(a) {
        return Vec::new();
    }
    let db = b.len() - 1;
    let lead_b = b.last().unwrap();
    let mut rem = a.clone();
    let da = a.len() - 1;
    assert!(da >= db, "inexact bivariate division (degree)");
    let mut quot = vec![UniPoly::zero(); da - db + 1];
    while !bi_is_zero(&rem) {
        let dr = rem.len() - 1;
        assert!(dr >= db, "inexact bivariate division");
        let lead_r = rem.last().unwrap();
        let c = lead_r.div_exact(lead_b);
        quot[dr - db] = c.clone();
        let sub = bi_shift_r(&bi_mul_coeff(b, &c), dr - db);
        rem = bi_sub(&rem, &sub);
        if !bi_is_zero(&rem) {
            assert!(rem.len() - 1 < dr, "division made no progress");
        }
    }
    bi_trim(quot)
}
