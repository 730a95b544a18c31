//! Brauer diagrams — perfect matchings on n bottom and n top points — and
//! the classical Brauer algebra BD_n(x), where closed loops formed during
//! composition contribute a scalar factor x.
//!
//! Point numbering: bottom points are 0..n-1, top points are n..2n-1.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// A perfect matching on the 2n endpoints of an (n,n) diagram, stored as an
/// involution `partner[p]` without fixed points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerDiagram {
    n: usize,
    partner: Vec<usize>,
}

impl BrauerDiagram {
    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n).map(|p| (p + n) % (2 * n)).collect();
        BrauerDiagram { n, partner }
    }

    /// Build from a list of endpoint pairs covering all 2n points.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if pairs.len() != n {
            return Err(Error::PreconditionFailed(format!(
                "expected {} pairs, got {}",
                n,
                pairs.len()
            )));
        }
        let mut partner = vec![usize::MAX; 2 * n];
        for &(a, b) in pairs {
            if a >= 2 * n || b >= 2 * n || a == b {
                return Err(Error::PreconditionFailed(format!(
                    "invalid pair ({}, {}) for {} strands",
                    a, b, n
                )));
            }
            if partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::PreconditionFailed(format!(
                    "point repeated in pair ({}, {})",
                    a, b
                )));
            }
            partner[a] = b;
            partner[b] = a;
        }
        Ok(BrauerDiagram { n, partner })
    }

    /// The transposition of strands i and i+1 (1-indexed, 1 <= i <= n-1).
    pub fn transposition(i: usize, n: usize) -> Result<Self> {
        check_index(i, n)?;
        let mut d = Self::identity(n);
        d.swap_points(i - 1 + n, i + n);
        Ok(d)
    }

    /// The cup-cap diagram at position i (1-indexed): bottom i, i+1 joined,
    /// top i, i+1 joined, all other strands vertical.
    pub fn cupcap(i: usize, n: usize) -> Result<Self> {
        check_index(i, n)?;
        let mut d = Self::identity(n);
        d.pair(i - 1, i);
        d.pair(i - 1 + n, i + n);
        Ok(d)
    }

    fn pair(&mut self, a: usize, b: usize) {
        self.partner[a] = b;
        self.partner[b] = a;
    }

    fn swap_points(&mut self, a: usize, b: usize) {
        let pa = self.partner[a];
        let pb = self.partner[b];
        self.pair(a, pb);
        self.pair(b, pa);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner_of(&self, p: usize) -> usize {
        self.partner[p]
    }

    /// Pairs (a, b) with a < b, sorted by a.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n);
        for a in 0..2 * self.n {
            let b = self.partner[a];
            if a < b {
                out.push((a, b));
            }
        }
        out
    }

    /// Reflect top-to-bottom (the diagram anti-involution).
    pub fn flip(&self) -> Self {
        let n = self.n;
        let sw = |p: usize| if p < n { p + n } else { p - n };
        let mut partner = vec![0; 2 * n];
        for p in 0..2 * n {
            partner[sw(p)] = sw(self.partner[p]);
        }
        BrauerDiagram { n, partner }
    }

    /// True if every pair connects a bottom point to a top point.
    pub fn is_permutation(&self) -> bool {
        (0..self.n).all(|b| self.partner[b] >= self.n)
    }

    /// Number of cups (bottom-bottom pairs); equals the number of caps.
    pub fn num_cups(&self) -> usize {
        (0..self.n).filter(|&b| self.partner[b] < self.n).count()
    }

    /// Stack `self` above `other` and trace paths through the middle row;
    /// returns the resulting diagram and the number of closed loops removed.
    pub fn compose(&self, other: &BrauerDiagram) -> Result<(BrauerDiagram, usize)> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let n = self.n;
        // Nodes: 0..n = bottom of `other`; n..2n = middle (other's top =
        // self's bottom); 2n..3n = top of `self`. Both diagrams' own point
        // p maps to node p for `other` and node p+n for `self`.
        let next_other = |p: usize| other.partner[p];
        let next_self = |p: usize| self.partner[p - n] + n;
        let mut partner = vec![usize::MAX; 2 * n];
        let mut seen_mid = vec![false; n];
        // Trace from each external point to the other end of its path.
        for start in (0..n).chain(2 * n..3 * n) {
            if start < n && partner[start] != usize::MAX {
                continue;
            }
            if start >= 2 * n && partner[start - n] != usize::MAX {
                continue;
            }
            let mut pos = start;
            // alternate through the two pairings, switching at middle nodes
            let mut in_other = start < n;
            loop {
                pos = if in_other { next_other(pos) } else { next_self(pos) };
                if (n..2 * n).contains(&pos) {
                    seen_mid[pos - n] = true;
                    in_other = !in_other;
                } else {
                    break;
                }
            }
            let a = if start < n { start } else { start - n };
            let b = if pos < n { pos } else { pos - n };
            partner[a] = b;
            partner[b] = a;
        }
        // Untouched middle nodes lie on closed loops.
        let mut loops = 0;
        for m in 0..n {
            if seen_mid[m] {
                continue;
            }
            loops += 1;
            let mut pos = m + n;
            let mut in_other = true;
            loop {
                pos = if in_other { next_other(pos) } else { next_self(pos) };
                in_other = !in_other;
                seen_mid[pos - n] = true;
                if pos == m + n && in_other {
                    break;
                }
            }
        }
        Ok((BrauerDiagram { n, partner }, loops))
    }

    /// Number of cycles in the closure of the diagram (top i joined to
    /// bottom i for every i).
    pub fn closure_cycles(&self) -> usize {
        let n = self.n;
        let mut seen = vec![false; 2 * n];
        let mut cycles = 0;
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut pos = start;
            loop {
                seen[pos] = true;
                // alternate: diagram pairing, then closure arc
                let across = self.partner[pos];
                seen[across] = true;
                pos = (across + n) % (2 * n);
                if pos == start {
                    break;
                }
            }
        }
        cycles
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i + 1 > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

impl fmt::Display for BrauerDiagram {
    /// Text notation `[(b0,t1),(b1,t0),...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |p: usize| {
            if p < self.n {
                format!("b{}", p)
            } else {
                format!("t{}", p - self.n)
            }
        };
        let parts: Vec<String> = self
            .pairs()
            .iter()
            .map(|&(a, b)| format!("({},{})", name(a), name(b)))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Parse the text notation `[(b0,t1),(b1,t0),...]`; the strand count is the
/// number of pairs.
pub fn parse_diagram(s: &str) -> Result<BrauerDiagram> {
    let bad = |msg: &str| Error::MalformedExpression(format!("{}: `{}`", msg, s));
    let body = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| bad("diagram must be bracketed"))?;
    let mut raw_pairs = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| bad("expected `(`"))?;
        let close = open.find(')').ok_or_else(|| bad("expected `)`"))?;
        let inner = &open[..close];
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| bad("pair must have two points"))?;
        raw_pairs.push((a.trim().to_string(), b.trim().to_string()));
        rest = open[close + 1..].trim().trim_start_matches(',').trim_start();
    }
    let n = raw_pairs.len();
    let point = |t: &str| -> Result<usize> {
        let (prefix, idx) = t.split_at(1);
        let k: usize = idx
            .parse()
            .map_err(|_| bad("point index must be a number"))?;
        if k >= n {
            return Err(bad("point index out of range"));
        }
        match prefix {
            "b" => Ok(k),
            "t" => Ok(k + n),
            _ => Err(bad("point must start with `b` or `t`")),
        }
    };
    let mut pairs = Vec::with_capacity(n);
    for (a, b) in &raw_pairs {
        pairs.push((point(a)?, point(b)?));
    }
    BrauerDiagram::from_pairs(n, &pairs)
}

/// All perfect matchings on 2n points; length (2n-1)!!.
pub fn all_diagrams(n: usize) -> Vec<BrauerDiagram> {
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; 2 * n];
    fill(&mut partner, &mut out, n);
    out
}

fn fill(partner: &mut Vec<usize>, out: &mut Vec<BrauerDiagram>, n: usize) {
    let a = match partner.iter().position(|&p| p == usize::MAX) {
        None => {
            out.push(BrauerDiagram {
                n,
                partner: partner.clone(),
            });
            return;
        }
        Some(a) => a,
    };
    for b in a + 1..2 * n {
        if partner[b] == usize::MAX {
            partner[a] = b;
            partner[b] = a;
            fill(partner, out, n);
            partner[a] = usize::MAX;
            partner[b] = usize::MAX;
        }
    }
}

/// An element of the Brauer algebra BD_n(x): a finitely supported
/// coefficient map on diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerElement {
    n: usize,
    coeffs: BTreeMap<BrauerDiagram, Scalar>,
}

impl BrauerElement {
    pub fn zero(n: usize) -> Self {
        BrauerElement {
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
        BrauerElement { n, coeffs }
    }

    /// The generator T'_i (transposition lift).
    pub fn gen_t(i: usize, n: usize) -> Result<Self> {
        Ok(Self::basis(BrauerDiagram::transposition(i, n)?))
    }

    /// The generator E'_i (cup-cap lift).
    pub fn gen_e(i: usize, n: usize) -> Result<Self> {
        Ok(Self::basis(BrauerDiagram::cupcap(i, n)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<BrauerDiagram, Scalar> {
        &self.coeffs
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

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        BrauerElement {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, v)| (d.clone(), v.mul(c)))
                .collect(),
        }
    }
}

/// The product a·b in BD_n(x): a stacked above b, each closed loop
/// contributing a factor x.
pub fn brauer_mul(a: &BrauerElement, b: &BrauerElement, x: &Scalar) -> Result<BrauerElement> {
    if a.n != b.n {
        return Err(Error::StrandMismatch(a.n, b.n));
    }
    let mut out = BrauerElement::zero(a.n);
    for (da, ca) in &a.coeffs {
        for (db, cb) in &b.coeffs {
            let (d, loops) = da.compose(db)?;
            let mut c = ca.mul(cb);
            for _ in 0..loops {
                c = c.mul(x);
            }
            out.add_term(d, c);
        }
    }
    Ok(out)
}

/// The normalized closure trace on BD_n(x): each basis diagram d contributes
/// coeff(d) · x^(c(d) - n), where c(d) counts cycles of the closure.
pub fn closure_trace(a: &BrauerElement, x: &Scalar) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (d, c) in &a.coeffs {
        let e = d.closure_cycles() as i64 - a.n as i64;
        acc = acc.add(&c.mul(&x.pow(e)?));
    }
    Ok(acc)
}
