//! The BMW algebra D_n(r,q) on its canonical basis indexed by Brauer
//! diagrams, with multiplication by Kauffman-skein reduction of tangle
//! words, the Markov trace via full strand closure, and the conditional
//! expectation via partial closure.
//!
//! Reduction strategy: trace the strands of a word; if the diagram is
//! descending (every crossing is first reached on its over-arc, in
//! canonical strand order), its value is d(X)^{#loops} · r^{writhe} times
//! the basis element of the underlying matching. Otherwise resolve the
//! first bad crossing by the skein relation
//!     sigma - sigma^{-1} = (q - q^{-1})(1 - e),
//! branching into three strictly smaller terms under the lexicographic
//! metric (crossing count, bad-crossing count). Results are memoized per
//! word. Correctness is pinned by the relation, dimension, associativity
//! and q=1 degeneration tests rather than a confluence proof.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::diagrams::BrauerDiagram;
use crate::error::{Error, Result};
use crate::scalars::{Params, Scalar};
use crate::tangle::{canonical_word, trace, Closure, Letter, Word};

/// An element of D_n(r,q): a finitely supported coefficient map on the
/// canonical basis, indexed by Brauer diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmwElement {
    n: usize,
    coeffs: BTreeMap<BrauerDiagram, Scalar>,
}

impl BmwElement {
    pub fn zero(n: usize) -> Self {
        BmwElement {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::basis(BrauerDiagram::identity(n))
    }

    pub fn basis(d: BrauerDiagram) -> Self {
        let n = d.n();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(d, Scalar::one());
        BmwElement { n, coeffs }
    }

    pub fn from_coeffs(n: usize, coeffs: BTreeMap<BrauerDiagram, Scalar>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        BmwElement { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<BrauerDiagram, Scalar> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, d: &BrauerDiagram) -> Scalar {
        self.coeffs.get(d).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, d: BrauerDiagram, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(d) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BmwElement {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (d.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        BmwElement {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, v)| (d.clone(), v.mul(c)))
                .collect(),
        }
    }

    /// Embed into n + extra strands by appending vertical strands.
    pub fn pad(&self, extra: usize) -> Self {
        let n2 = self.n + extra;
        let mut coeffs = BTreeMap::new();
        for (d, c) in &self.coeffs {
            let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n2);
            for (p, q) in d.pairs() {
                let lift = |u: usize| if u < self.n { u } else { u + extra };
                pairs.push((lift(p), lift(q)));
            }
            for j in self.n..n2 {
                pairs.push((j, n2 + j));
            }
            coeffs.insert(
                BrauerDiagram::from_pairs(n2, &pairs).expect("padded matching"),
                c.clone(),
            );
        }
        BmwElement { n: n2, coeffs }
    }
}

impl fmt::Display for BmwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(d, c)| format!("({})*{}", c, d))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type ReducedMap = BTreeMap<BrauerDiagram, Scalar>;

/// Evaluation context for D_n(r,q) at fixed parameters, carrying the memo
/// tables for word reduction. Single-threaded.
pub struct BmwContext {
    params: Params,
    z: Scalar,
    dx: Scalar,
    words: RefCell<HashMap<BrauerDiagram, Word>>,
    reduces: RefCell<HashMap<(usize, Closure, Word), ReducedMap>>,
}

impl BmwContext {
    /// Requires q - q^{-1} != 0 at the chosen parameters (the loop value
    /// d(X) must be determined); d(X) itself may be zero.
    pub fn new(params: Params) -> Result<Self> {
        let z = params.z()?;
        if z.is_zero() {
            return Err(Error::PoleAtSpecialization(
                "q - q^{-1} = 0: the skein engine needs the loop value d(X)".into(),
            ));
        }
        let dx = params.dx()?;
        Ok(BmwContext {
            params,
            z,
            dx,
            words: RefCell::new(HashMap::new()),
            reduces: RefCell::new(HashMap::new()),
        })
    }

    pub fn symbolic() -> Self {
        Self::new(Params::symbolic()).expect("generic parameters")
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn dx(&self) -> &Scalar {
        &self.dx
    }

    pub fn z(&self) -> &Scalar {
        &self.z
    }

    /// The canonical tangle word of a basis diagram (cached).
    pub fn word_of(&self, d: &BrauerDiagram) -> Word {
        if let Some(w) = self.words.borrow().get(d) {
            return w.clone();
        }
        let w = canonical_word(d);
        self.words.borrow_mut().insert(d.clone(), w.clone());
        w
    }

    /// Reduce a tangle word to the canonical basis (of the boundary after
    /// closure). The result maps diagrams on n, n-1 or 0 strands for Open,
    /// CloseLast, CloseAll respectively.
    pub fn reduce(&self, n: usize, word: &Word, closure: Closure) -> Result<ReducedMap> {
        let key = (n, closure, word.clone());
        if let Some(v) = self.reduces.borrow().get(&key) {
            return Ok(v.clone());
        }
        let tr = trace(n, word, closure);
        let out = match tr.first_bad {
            None => {
                let mut val = self.dx.pow(tr.loops as i64)?;
                val = val.mul(&self.params.r.pow(tr.writhe)?);
                let mut m = BTreeMap::new();
                if !val.is_zero() {
                    m.insert(tr.matching, val);
                }
                m
            }
            Some(slice) => {
                let Letter::S { i, positive } = word[slice] else {
                    unreachable!("bad crossing index points at a crossing letter")
                };
                let mut switched = word.clone();
                switched[slice] = Letter::S {
                    i,
                    positive: !positive,
                };
                let mut deleted = word.clone();
                deleted.remove(slice);
                let mut smoothed = word.clone();
                smoothed[slice] = Letter::E { i };
                // sigma = sigma^{-1} + z - z e   (positive crossing)
                // sigma^{-1} = sigma - z + z e   (negative crossing)
                let eps = if positive {
                    self.z.clone()
                } else {
                    self.z.neg()
                };
                let mut m = self.reduce(n, &switched, closure)?;
                for (d, c) in self.reduce(n, &deleted, closure)? {
                    add_into(&mut m, d, c.mul(&eps));
                }
                for (d, c) in self.reduce(n, &smoothed, closure)? {
                    add_into(&mut m, d, c.mul(&eps).neg());
                }
                m
            }
        };
        self.reduces.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    /// The generator T_i (sign +1) or its inverse T_i^{-1} (sign -1),
    /// expanded on the canonical basis.
    pub fn gen_t(&self, i: usize, n: usize, sign: i8) -> Result<BmwElement> {
        let t = BmwElement::basis(BrauerDiagram::transposition(i, n)?);
        if sign >= 0 {
            return Ok(t);
        }
        // T^{-1} = T - (q - q^{-1})(1 - E)
        let e = self.gen_e(i, n)?;
        t.sub(&BmwElement::one(n).sub(&e)?.scale(&self.z))
    }

    /// The generator E_i: the basis element on the cup-cap diagram.
    pub fn gen_e(&self, i: usize, n: usize) -> Result<BmwElement> {
        Ok(BmwElement::basis(BrauerDiagram::cupcap(i, n)?))
    }

    /// Stack a single tangle letter on top of an element. Every skein
    /// reduction then starts from a canonical word plus one letter, so
    /// the reduction cache stays small and is shared across products.
    fn apply_letter(&self, n: usize, l: Letter, v: &BmwElement) -> Result<BmwElement> {
        let mut batches: BTreeMap<BrauerDiagram, Vec<Scalar>> = BTreeMap::new();
        for (d, c) in &v.coeffs {
            let mut word = self.word_of(d);
            word.push(l);
            for (e, ce) in self.reduce(n, &word, Closure::Open)? {
                batches.entry(e).or_default().push(ce.mul(c));
            }
        }
        let mut out = BmwElement::zero(n);
        for (d, batch) in batches {
            out.add_term(d, Scalar::sum(&batch));
        }
        Ok(out)
    }

    /// The anti-involution * reflecting tangles top-to-bottom: it fixes
    /// the generators T_i and E_i and reverses products. On a basis
    /// diagram it is computed by reversing the canonical tangle word and
    /// re-expanding; the result is the flipped diagram plus lower-order
    /// skein corrections, so * is not simply a permutation of the basis.
    pub fn star(&self, a: &BmwElement) -> Result<BmwElement> {
        let mut out = BmwElement::zero(a.n);
        for (d, c) in &a.coeffs {
            let mut w = self.word_of(d);
            w.reverse();
            for (e, ce) in self.reduce(a.n, &w, Closure::Open)? {
                out.add_term(e, ce.mul(c));
            }
        }
        Ok(out)
    }

    /// The product a·b in D_n(r,q) (a stacked above b).
    pub fn mul(&self, a: &BmwElement, b: &BmwElement) -> Result<BmwElement> {
        if a.n != b.n {
            return Err(Error::StrandMismatch(a.n, b.n));
        }
        // For each left basis diagram, stack its canonical word onto b one
        // letter at a time. This avoids reducing concatenations of two full
        // canonical words, whose skein trees (and memo entries) grow
        // exponentially with word length.
        let mut batches: BTreeMap<BrauerDiagram, Vec<Scalar>> = BTreeMap::new();
        for (da, ca) in &a.coeffs {
            let mut cur = b.clone();
            for l in self.word_of(da) {
                cur = self.apply_letter(a.n, l, &cur)?;
            }
            for (d, c) in cur.coeffs {
                batches.entry(d).or_default().push(c.mul(ca));
            }
        }
        let mut out = BmwElement::zero(a.n);
        for (d, batch) in batches {
            out.add_term(d, Scalar::sum(&batch));
        }
        Ok(out)
    }

    pub fn mul3(&self, a: &BmwElement, b: &BmwElement, c: &BmwElement) -> Result<BmwElement> {
        self.mul(&self.mul(a, b)?, c)
    }

    /// The value of the fully closed basis tangle (not yet normalized).
    fn closed_value(&self, d: &BrauerDiagram) -> Result<Scalar> {
        let word = self.word_of(d);
        let m = self.reduce(d.n(), &word, Closure::CloseAll)?;
        Ok(m
            .get(&BrauerDiagram::identity(0))
            .cloned()
            .unwrap_or_else(Scalar::zero))
    }

    /// The normalized Markov trace: tr(1) = 1; computed by closing all
    /// strands and dividing by d(X)^n.
    pub fn markov_trace(&self, a: &BmwElement) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (d, c) in &a.coeffs {
            acc = acc.add(&c.mul(&self.closed_value(d)?));
        }
        let norm = self.dx.pow(a.n as i64).map_err(|_| pole_dx())?;
        if norm.is_zero() {
            return Err(pole_dx());
        }
        acc.div(&norm).map_err(|_| pole_dx())
    }

    /// The conditional expectation D_n -> D_{n-1}: close the last strand
    /// and normalize by 1/d(X).
    pub fn cond_expect(&self, a: &BmwElement) -> Result<BmwElement> {
        if a.n == 0 {
            return Err(Error::PreconditionFailed(
                "conditional expectation needs at least one strand".into(),
            ));
        }
        if self.dx.is_zero() {
            return Err(pole_dx());
        }
        let inv_d = self.dx.inv().map_err(|_| pole_dx())?;
        let mut out = BmwElement::zero(a.n - 1);
        for (d, c) in &a.coeffs {
            let word = self.word_of(d);
            for (m, v) in self.reduce(a.n, &word, Closure::CloseLast)? {
                out.add_term(m, v.mul(c).mul(&inv_d));
            }
        }
        Ok(out)
    }

    /// Check the defining relations of D_n(r,q) as exact identities on the
    /// canonical basis, plus the trace values tr(T_1) = r/d(X) and
    /// tr(E_1) = 1/d(X).
    pub fn verify_relations(&self, n: usize) -> Result<RelationReport> {
        if n < 2 {
            return Err(Error::PreconditionFailed(
                "relations need at least two strands".into(),
            ));
        }
        let mut entries: Vec<(String, CheckStatus)> = Vec::new();
        let mut check = |name: String, res: Result<bool>| {
            let status = match res {
                Ok(true) => CheckStatus::Pass,
                Ok(false) => CheckStatus::Fail,
                Err(e) => CheckStatus::Error(e.to_string()),
            };
            entries.push((name, status));
        };
        let t: Vec<BmwElement> = (1..n)
            .map(|i| self.gen_t(i, n, 1))
            .collect::<Result<_>>()?;
        let ti: Vec<BmwElement> = (1..n)
            .map(|i| self.gen_t(i, n, -1))
            .collect::<Result<_>>()?;
        let e: Vec<BmwElement> = (1..n).map(|i| self.gen_e(i, n)).collect::<Result<_>>()?;
        let one = BmwElement::one(n);
        for i in 0..n - 1 {
            let gi = i + 1; // 1-indexed generator label
            check(
                format!("T{gi} T{gi}^-1 = 1"),
                self.mul(&t[i], &ti[i]).map(|p| p == one),
            );
            // (D): T - T^{-1} = (q - q^{-1})(1 - E)
            check(format!("(D) at {gi}"), {
                let lhs = t[i].sub(&ti[i])?;
                let rhs = one.sub(&e[i])?.scale(&self.z);
                Ok(lhs == rhs)
            });
            // (R1): E T = r^{-1} E and T E = r^{-1} E
            check(format!("(R1) E{gi} T{gi} = r^-1 E{gi}"), {
                let lhs = self.mul(&e[i], &t[i])?;
                let rhs = e[i].scale(&self.params.r.inv()?);
                Ok(lhs == rhs)
            });
            check(format!("(R1) T{gi} E{gi} = r^-1 E{gi}"), {
                let lhs = self.mul(&t[i], &e[i])?;
                let rhs = e[i].scale(&self.params.r.inv()?);
                Ok(lhs == rhs)
            });
            // cubic: (T - r^{-1})(T + q^{-1})(T - q) = 0
            check(format!("cubic at {gi}"), {
                let f1 = t[i].sub(&one.scale(&self.params.r.inv()?))?;
                let f2 = t[i].add(&one.scale(&self.params.q.inv()?))?;
                let f3 = t[i].sub(&one.scale(&self.params.q))?;
                Ok(self.mul3(&f1, &f2, &f3)?.is_zero())
            });
            // E^2 = d(X) E
            check(format!("E{gi}^2 = d(X) E{gi}"), {
                Ok(self.mul(&e[i], &e[i])? == e[i].scale(&self.dx))
            });
        }
        for i in 0..n.saturating_sub(2) {
            let (gi, gj) = (i + 1, i + 2);
            check(format!("braid T{gi} T{gj} T{gi} = T{gj} T{gi} T{gj}"), {
                Ok(self.mul3(&t[i], &t[i + 1], &t[i])?
                    == self.mul3(&t[i + 1], &t[i], &t[i + 1])?)
            });
            // (R2): E_i T_{i+1}^{±1} E_i = r^{±1} E_i, both neighbors
            for (sign, te, lbl) in [(1i64, &t[i + 1], "+1"), (-1, &ti[i + 1], "-1")] {
                check(format!("(R2) E{gi} T{gj}^{lbl} E{gi} = r^{lbl} E{gi}"), {
                    let lhs = self.mul3(&e[i], te, &e[i])?;
                    let rhs = e[i].scale(&self.params.r.pow(sign)?);
                    Ok(lhs == rhs)
                });
            }
            for (sign, te, lbl) in [(1i64, &t[i], "+1"), (-1, &ti[i], "-1")] {
                check(format!("(R2) E{gj} T{gi}^{lbl} E{gj} = r^{lbl} E{gj}"), {
                    let lhs = self.mul3(&e[i + 1], te, &e[i + 1])?;
                    let rhs = e[i + 1].scale(&self.params.r.pow(sign)?);
                    Ok(lhs == rhs)
                });
            }
            check(format!("E{gi} E{gj} E{gi} = E{gi}"), {
                Ok(self.mul3(&e[i], &e[i + 1], &e[i])? == e[i])
            });
            check(format!("E{gj} E{gi} E{gj} = E{gj}"), {
                Ok(self.mul3(&e[i + 1], &e[i], &e[i + 1])? == e[i + 1])
            });
        }
        // far commutation
        for i in 0..n - 1 {
            for j in i + 2..n - 1 {
                check(format!("T{} T{} commute", i + 1, j + 1), {
                    Ok(self.mul(&t[i], &t[j])? == self.mul(&t[j], &t[i])?)
                });
                check(format!("E{} E{} commute", i + 1, j + 1), {
                    Ok(self.mul(&e[i], &e[j])? == self.mul(&e[j], &e[i])?)
                });
                check(format!("T{} E{} commute", i + 1, j + 1), {
                    Ok(self.mul(&t[i], &e[j])? == self.mul(&e[j], &t[i])?)
                });
            }
        }
        // trace values (trace-dependent checks may pole at d(X) = 0)
        check(
            "tr(T1) = r/d(X)".into(),
            (|| {
                let lhs = self.markov_trace(&t[0])?;
                Ok(lhs == self.params.r.div(&self.dx)?)
            })(),
        );
        check(
            "tr(E1) = 1/d(X)".into(),
            (|| {
                let lhs = self.markov_trace(&e[0])?;
                Ok(lhs == self.dx.inv()?)
            })(),
        );
        Ok(RelationReport { entries })
    }
}

/// A 3x3 matrix over the scalar domain.
pub type Mat3 = Vec<Vec<Scalar>>;

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = vec![vec![Scalar::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = Scalar::zero();
            for k in 0..3 {
                s = s.add(&a[i][k].mul(&b[k][j]));
            }
            out[i][j] = s;
        }
    }
    out
}

/// Invert a 3x3 matrix by Gauss-Jordan elimination.
pub fn mat3_inv(a: &Mat3) -> Result<Mat3> {
    let mut m: Vec<Vec<Scalar>> = (0..3)
        .map(|i| {
            let mut row = a[i].clone();
            for j in 0..3 {
                row.push(if i == j { Scalar::one() } else { Scalar::zero() });
            }
            row
        })
        .collect();
    for col in 0..3 {
        let pivot = (col..3)
            .find(|&i| !m[i][col].is_zero())
            .ok_or(Error::DivisionByZero)?;
        m.swap(col, pivot);
        let inv = m[col][col].inv()?;
        for j in 0..6 {
            m[col][j] = m[col][j].mul(&inv);
        }
        for i in 0..3 {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..6 {
                    let t = m[col][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[3..].to_vec()).collect())
}

/// The matrices of c_1, c_2 and the rescaled projections on the basis
/// {i_2, c_1 i_2, i_1} of Hom(X, X^{otimes 3}), in terms of the three
/// braiding eigenvalues and the sign alpha.
#[derive(Clone, Debug)]
pub struct Hom3Matrices {
    pub lambda: [Scalar; 3],
    pub alpha: i8,
    pub dim_x: Scalar,
    pub c1: Mat3,
    pub c2: Mat3,
    pub c1_inv: Mat3,
    pub c2_inv: Mat3,
    pub e1: Mat3,
    pub e2: Mat3,
}

/// Build the six 3x3 matrices of the two braidings, their inverses and the
/// two rescaled projections acting on Hom(X, X^{otimes 3}).
pub fn hom3_matrices(l1: &Scalar, l2: &Scalar, l3: &Scalar, alpha: i8) -> Result<Hom3Matrices> {
    if l1.is_zero() || l2.is_zero() || l3.is_zero() {
        return Err(Error::ConstraintViolated(
            "braiding eigenvalues must be nonzero".into(),
        ));
    }
    let l12 = l1.mul(l2);
    if l12.mul(&l12) != Scalar::one() {
        return Err(Error::ConstraintViolated(
            "(lambda1 lambda2)^2 must equal 1".into(),
        ));
    }
    let s12 = l1.add(l2);
    if s12.is_zero() {
        return Err(Error::ConstraintViolated(
            "lambda1 + lambda2 = 0: the dimension formula degenerates".into(),
        ));
    }
    let a = Scalar::from_i64(alpha as i64);
    let zero = Scalar::zero;
    let one = Scalar::one;
    // dim X from comparing (3,2) entries in e~_1 c_1 = lambda3 e~_1:
    //   lambda3 (l1^-1 + l2^-1) dim X
    //     = alpha (lambda3^2 + l1 l2 - lambda3 (l1 + l2))
    let inv_sum = l1.inv()?.add(&l2.inv()?);
    let dim_x = a
        .mul(&l3.mul(l3).add(&l12).sub(&l3.mul(&s12)))
        .div(&l3.mul(&inv_sum))?;
    let c1: Mat3 = vec![
        vec![zero(), l12.neg(), zero()],
        vec![one(), s12.clone(), zero()],
        vec![zero(), l3.mul(&inv_sum), l3.clone()],
    ];
    let c2: Mat3 = vec![
        vec![l3.clone(), zero(), l12.mul(&s12)],
        vec![zero(), zero(), l12.neg()],
        vec![zero(), one(), s12.clone()],
    ];
    let e1: Mat3 = vec![
        vec![zero(), zero(), zero()],
        vec![zero(), zero(), zero()],
        vec![a.clone(), a.mul(l3), dim_x.clone()],
    ];
    let e2: Mat3 = vec![
        vec![dim_x.clone(), a.mul(&l3.inv()?), a.clone()],
        vec![zero(), zero(), zero()],
        vec![zero(), zero(), zero()],
    ];
    let c1_inv = mat3_inv(&c1)?;
    let c2_inv = mat3_inv(&c2)?;
    Ok(Hom3Matrices {
        lambda: [l1.clone(), l2.clone(), l3.clone()],
        alpha,
        dim_x,
        c1,
        c2,
        c1_inv,
        c2_inv,
        e1,
        e2,
    })
}

impl BmwContext {
    /// The matrices of left multiplication by T_1, T_2, E_1, E_2 on the
    /// minimal left ideal of D_3 spanned by {E_2, T_1 E_2, E_1 E_2}.
    pub fn left_ideal_matrices(&self) -> Result<[Mat3; 4]> {
        let e2 = self.gen_e(2, 3)?;
        let basis = [
            e2.clone(),
            self.mul(&self.gen_t(1, 3, 1)?, &e2)?,
            self.mul(&self.gen_e(1, 3)?, &e2)?,
        ];
        let gens = [
            self.gen_t(1, 3, 1)?,
            self.gen_t(2, 3, 1)?,
            self.gen_e(1, 3)?,
            self.gen_e(2, 3)?,
        ];
        let mut out: Vec<Mat3> = Vec::new();
        for g in &gens {
            let mut m = vec![vec![Scalar::zero(); 3]; 3];
            for (j, b) in basis.iter().enumerate() {
                let img = self.mul(g, b)?;
                let coords = express_in_ideal_basis(&img, &basis)?;
                for i in 0..3 {
                    m[i][j] = coords[i].clone();
                }
            }
            out.push(m);
        }
        Ok(out.try_into().expect("four matrices"))
    }
}

/// Solve img = sum_i x_i basis_i in D_3 by matching diagram coefficients.
fn express_in_ideal_basis(img: &BmwElement, basis: &[BmwElement; 3]) -> Result<Vec<Scalar>> {
    // collect the support union and solve the (overdetermined) linear
    // system by Gaussian elimination on a 3-column matrix
    let mut rows: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
    let mut support: Vec<BrauerDiagram> = Vec::new();
    for b in basis.iter() {
        for d in b.coeffs().keys() {
            if !support.contains(d) {
                support.push(d.clone());
            }
        }
    }
    for d in img.coeffs().keys() {
        if !support.contains(d) {
            return Err(Error::ConstraintViolated(
                "element does not lie in the ideal span".into(),
            ));
        }
    }
    for d in &support {
        let row: Vec<Scalar> = basis.iter().map(|b| b.coeff(d)).collect();
        rows.push((row, img.coeff(d)));
    }
    // Gaussian elimination for a 3-unknown least-constraint solve
    let mut x = vec![Scalar::zero(); 3];
    let mut used = vec![false; rows.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..3 {
        let Some(pi) = rows
            .iter()
            .enumerate()
            .position(|(i, (r, _))| !used[i] && !r[col].is_zero())
        else {
            continue;
        };
        used[pi] = true;
        pivots.push((pi, col));
        let inv = rows[pi].0[col].inv()?;
        rows[pi].0 = rows[pi].0.iter().map(|v| v.mul(&inv)).collect();
        rows[pi].1 = rows[pi].1.mul(&inv);
        let pivot_row = rows[pi].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pi && !row.0[col].is_zero() {
                let f = row.0[col].clone();
                for (v, pv) in row.0.iter_mut().zip(pivot_row.0.iter()) {
                    *v = v.sub(&pv.mul(&f));
                }
                row.1 = row.1.sub(&pivot_row.1.mul(&f));
            }
        }
    }
    for (pi, col) in &pivots {
        x[*col] = rows[*pi].1.clone();
    }
    // consistency: every non-pivot row must have zero residual
    for (i, (r, v)) in rows.iter().enumerate() {
        if !used[i] && (r.iter().any(|c| !c.is_zero()) || !v.is_zero()) {
            return Err(Error::ConstraintViolated(
                "element does not lie in the ideal span".into(),
            ));
        }
    }
    Ok(x)
}

fn pole_dx() -> Error {
    Error::PoleAtSpecialization("d(X) = 0 at the chosen parameters".into())
}

fn add_into(m: &mut ReducedMap, d: BrauerDiagram, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match m.entry(d) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Error(String),
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub entries: Vec<(String, CheckStatus)>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.entries
            .iter()
            .all(|(_, s)| matches!(s, CheckStatus::Pass))
    }

    /// True if every check passes except possibly trace-dependent ones,
    /// which may report an error at d(X) = 0.
    pub fn algebra_relations_pass(&self) -> bool {
        self.entries.iter().all(|(name, s)| {
            matches!(s, CheckStatus::Pass)
                || (name.starts_with("tr(") && matches!(s, CheckStatus::Error(_)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::all_diagrams;
    use crate::scalars::{unipoly::q_from, RatFunc, SpecPoint};

    fn sym() -> BmwContext {
        BmwContext::symbolic()
    }

    fn rs() -> Scalar {
        Scalar::Sym(RatFunc::var_r())
    }

    #[test]
    fn star_is_a_trace_preserving_anti_involution() {
        let ctx = sym();
        // involution and trace invariance on the whole basis of D_3
        for d in all_diagrams(3) {
            let x = BmwElement::basis(d.clone());
            let sx = ctx.star(&x).unwrap();
            assert!(
                ctx.star(&sx).unwrap().sub(&x).unwrap().is_zero(),
                "star not involutive on {}",
                d
            );
            assert!(
                ctx.markov_trace(&sx)
                    .unwrap()
                    .sub(&ctx.markov_trace(&x).unwrap())
                    .is_zero(),
                "trace not star-invariant on {}",
                d
            );
        }
        // anti-multiplicativity on generator products
        let t1 = ctx.gen_t(1, 3, 1).unwrap();
        let e2 = ctx.gen_e(2, 3).unwrap();
        let lhs = ctx.star(&ctx.mul(&t1, &e2).unwrap()).unwrap();
        let rhs = ctx
            .mul(&ctx.star(&e2).unwrap(), &ctx.star(&t1).unwrap())
            .unwrap();
        assert!(lhs.sub(&rhs).unwrap().is_zero());
        // star differs from the plain diagram flip in general: it adds
        // skein corrections on diagrams whose flipped word is ascending
        let some_correction = all_diagrams(4).iter().any(|d| {
            let sx = ctx.star(&BmwElement::basis(d.clone())).unwrap();
            sx.coeffs().len() > 1
        });
        assert!(some_correction);
    }

    #[test]
    fn canonical_words_reduce_to_themselves() {
        let ctx = sym();
        for n in 1..=3 {
            for d in all_diagrams(n) {
                let w = ctx.word_of(&d);
                let m = ctx.reduce(n, &w, Closure::Open).unwrap();
                assert_eq!(m.len(), 1, "support of reduced canonical word of {}", d);
                assert_eq!(m.get(&d), Some(&Scalar::one()), "coefficient for {}", d);
            }
        }
    }

    #[test]
    fn relations_pass_symbolically() {
        let ctx = sym();
        for n in [2, 3] {
            let report = ctx.verify_relations(n).unwrap();
            for (name, status) in &report.entries {
                assert_eq!(status, &CheckStatus::Pass, "relation {} at n={}", name, n);
            }
        }
    }

    #[test]
    fn trace_values_match() {
        let ctx = sym();
        let d = ctx.dx().clone();
        let t1 = ctx.gen_t(1, 2, 1).unwrap();
        let t1i = ctx.gen_t(1, 2, -1).unwrap();
        let e1 = ctx.gen_e(1, 2).unwrap();
        assert_eq!(
            ctx.markov_trace(&BmwElement::one(2)).unwrap(),
            Scalar::one()
        );
        assert_eq!(
            ctx.markov_trace(&t1).unwrap(),
            Scalar::Sym(RatFunc::var_r()).div(&d).unwrap()
        );
        assert_eq!(ctx.markov_trace(&e1).unwrap(), d.inv().unwrap());
        assert_eq!(
            ctx.markov_trace(&t1i).unwrap(),
            rs().inv().unwrap().div(&d).unwrap()
        );
    }

    #[test]
    fn cond_expect_basics() {
        let ctx = sym();
        let d = ctx.dx().clone();
        // id_3 -> id_2
        assert_eq!(
            ctx.cond_expect(&BmwElement::one(3)).unwrap(),
            BmwElement::one(2)
        );
        // E_2 at n=3 -> (1/d) id_2
        let e2 = ctx.gen_e(2, 3).unwrap();
        assert_eq!(
            ctx.cond_expect(&e2).unwrap(),
            BmwElement::one(2).scale(&d.inv().unwrap())
        );
        // (a tensor id) -> a, e.g. a = T_1 at n=2 padded to 3
        let t1 = ctx.gen_t(1, 2, 1).unwrap();
        assert_eq!(ctx.cond_expect(&t1.pad(1)).unwrap(), t1);
        // compatibility: tr_3 = tr_2 after conditional expectation
        let x = ctx.gen_t(2, 3, 1).unwrap();
        let y = ctx.mul(&ctx.gen_e(1, 3).unwrap(), &x).unwrap();
        assert_eq!(
            ctx.markov_trace(&y).unwrap(),
            ctx.markov_trace(&ctx.cond_expect(&y).unwrap()).unwrap()
        );
    }

    #[test]
    fn associativity_on_sampled_triples() {
        let ctx = sym();
        let diags = all_diagrams(3);
        // a deterministic sample of basis triples
        let idx = [(0usize, 4usize, 8usize), (2, 7, 14), (5, 3, 11), (10, 1, 6)];
        for (i, j, k) in idx {
            let a = BmwElement::basis(diags[i].clone());
            let b = BmwElement::basis(diags[j].clone());
            let c = BmwElement::basis(diags[k].clone());
            let lhs = ctx.mul(&ctx.mul(&a, &b).unwrap(), &c).unwrap();
            let rhs = ctx.mul(&a, &ctx.mul(&b, &c).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "associativity at ({}, {}, {})", i, j, k);
        }
    }

    #[test]
    fn engine_works_at_rational_point() {
        let params = Params::at(&SpecPoint::Rational {
            r: q_from(3),
            q: q_from(2),
        })
        .unwrap();
        let ctx = BmwContext::new(params).unwrap();
        let report = ctx.verify_relations(3).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn trace_is_symmetric_sampled() {
        let ctx = sym();
        let diags = all_diagrams(3);
        for (i, j) in [(0usize, 7usize), (3, 11), (5, 9), (14, 2)] {
            let a = BmwElement::basis(diags[i].clone());
            let b = BmwElement::basis(diags[j].clone());
            let ab = ctx.markov_trace(&ctx.mul(&a, &b).unwrap()).unwrap();
            let ba = ctx.markov_trace(&ctx.mul(&b, &a).unwrap()).unwrap();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn hom3_matrices_constraints_and_braid() {
        let q = Scalar::sym_q();
        let r = Scalar::sym_r();
        let l1 = q.clone();
        let l2 = q.inv().unwrap().neg();
        let l3 = r.inv().unwrap();
        let h = hom3_matrices(&l1, &l2, &l3, 1).unwrap();
        // det and trace constraints
        let ctx = sym();
        assert_eq!(h.dim_x, ctx.dx().clone());
        // braid relation c1 c2 c1 = c2 c1 c2
        let lhs = mat3_mul(&mat3_mul(&h.c1, &h.c2), &h.c1);
        let rhs = mat3_mul(&mat3_mul(&h.c2, &h.c1), &h.c2);
        assert_eq!(lhs, rhs);
        // e~_1 c_1 = lambda3 e~_1
        let prod = mat3_mul(&h.e1, &h.c1);
        let scaled: Mat3 = h
            .e1
            .iter()
            .map(|row| row.iter().map(|v| v.mul(&l3)).collect())
            .collect();
        assert_eq!(prod, scaled);
        // inverses really invert
        let id: Mat3 = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        assert_eq!(mat3_mul(&h.c1, &h.c1_inv), id);
        assert_eq!(mat3_mul(&h.c2, &h.c2_inv), id);
        // rejects (l1 l2)^2 != 1
        assert!(hom3_matrices(&q, &q, &l3, 1).is_err());
    }

    #[test]
    fn left_ideal_action_matches_hom3_matrices() {
        let ctx = sym();
        let q = Scalar::sym_q();
        let r = Scalar::sym_r();
        let h = hom3_matrices(&q, &q.inv().unwrap().neg(), &r.inv().unwrap(), 1).unwrap();
        let [mt1, mt2, me1, me2] = ctx.left_ideal_matrices().unwrap();
        assert_eq!(mt1, h.c1, "T1 action vs c1");
        assert_eq!(mt2, h.c2, "T2 action vs c2");
        assert_eq!(me1, h.e1, "E1 action vs e~1");
        assert_eq!(me2, h.e2, "E2 action vs e~2");
    }

    #[test]
    fn markov_property_sampled() {
        let ctx = sym();
        let diags = all_diagrams(2);
        for d in &diags {
            let a = BmwElement::basis(d.clone());
            let tra = ctx.markov_trace(&a).unwrap();
            let big = a.pad(1);
            for chi in [ctx.gen_t(2, 3, 1).unwrap(), ctx.gen_e(2, 3).unwrap()] {
                let lhs = ctx.markov_trace(&ctx.mul(&big, &chi).unwrap()).unwrap();
                let rhs = tra.mul(&ctx.markov_trace(&chi).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}
