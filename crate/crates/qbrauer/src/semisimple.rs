//! Gram matrices of the Markov trace form, semisimple-quotient dimensions,
//! semisimplicity tests, and the (r,q) classification with reparametrization
//! normal forms.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::bmw::{BmwContext, BmwElement};
use crate::diagrams::{all_diagrams, BrauerDiagram};
use crate::error::{Error, Result};
use crate::fusion::{double_factorial_odd, LabelSet};
use crate::qdim::{partitions_up_to, q_column, q_dim, YoungDiagram};
use crate::scalars::{qnum, Params, RatFunc, Scalar, SpecPoint, Q};

/// The Gram matrix of the Markov trace pairing G[a][b] = tr(a* b), where *
/// reflects a diagram top-to-bottom.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub n: usize,
    pub order: Vec<BrauerDiagram>,
    pub entries: Vec<Vec<Scalar>>,
}

pub fn gram(ctx: &BmwContext, n: usize, max_n: usize) -> Result<GramMatrix> {
    if n > max_n {
        return Err(Error::ResourceBound(format!(
            "gram({}) needs {} basis elements; bound is n <= {}",
            n,
            double_factorial_odd(n),
            max_n
        )));
    }
    let order = all_diagrams(n);
    let m = order.len();
    let mut entries = vec![vec![Scalar::zero(); m]; m];
    // the pairing is symmetric: the trace is invariant under the tangle
    // anti-involution *, so tr(a* b) = tr((a* b)*) = tr(b* a). Note that
    // * of a basis element is the flipped diagram plus skein corrections,
    // not just the flipped diagram.
    for (i, a) in order.iter().enumerate() {
        let astar = ctx.star(&BmwElement::basis(a.clone()))?;
        for j in i..m {
            let prod = ctx.mul(&astar, &BmwElement::basis(order[j].clone()))?;
            let v = ctx.markov_trace(&prod)?;
            entries[i][j] = v.clone();
            entries[j][i] = v;
        }
    }
    Ok(GramMatrix { n, order, entries })
}

/// Rank of a matrix of scalars (all from one field) by Gaussian elimination.
/// Matrices of rational functions go through fraction-free (Bareiss)
/// elimination over the polynomial ring to avoid expression swell.
pub fn rank(entries: &[Vec<Scalar>]) -> Result<usize> {
    if entries
        .iter()
        .flatten()
        .any(|s| matches!(s, Scalar::Sym(_)))
    {
        let m: Vec<Vec<RatFunc>> = entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| match s {
                        Scalar::Sym(f) => Ok(f.clone()),
                        Scalar::Rat(c) => Ok(RatFunc::from_rational(c.clone())),
                        Scalar::Cyc(_) => Err(Error::PreconditionFailed(
                            "mixed cyclotomic and symbolic entries".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        return Ok(sym_rank(m));
    }
    if entries
        .iter()
        .flatten()
        .all(|s| matches!(s, Scalar::Rat(_)))
    {
        let m: Vec<Vec<Q>> = entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.as_rational().expect("rational entry"))
                    .collect()
            })
            .collect();
        return Ok(rational_rank(m));
    }
    let mut m: Vec<Vec<Scalar>> = entries.to_vec();
    let rows = m.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv()?;
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in c..cols {
                    let t = m[r][cc].mul(&f);
                    m[i][cc] = m[i][cc].sub(&t);
                }
            }
        }
        r += 1;
    }
    Ok(r)
}

/// Bareiss fraction-free rank over the integers: rows are scaled integral
/// (rank-preserving) and every elimination step divides exactly by the
/// previous pivot, keeping entries minor-sized.
fn rational_rank(entries: Vec<Vec<Q>>) -> usize {
    use num_bigint::BigInt;
    let rows = entries.len();
    if rows == 0 {
        return 0;
    }
    let cols = entries[0].len();
    let mut m: Vec<Vec<BigInt>> = entries
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .map(|c| c.denom().clone())
                .fold(BigInt::from(1), |acc, d| num_integer::lcm(acc, d));
            row.iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect()
        })
        .collect();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for step in 0..rows.min(cols) {
        let Some((pi, pj)) = (step..rows)
            .flat_map(|i| (step..cols).map(move |j| (i, j)))
            .find(|&(i, j)| m[i][j] != BigInt::from(0))
        else {
            break;
        };
        m.swap(step, pi);
        for row in m.iter_mut() {
            row.swap(step, pj);
        }
        for i in step + 1..rows {
            for j in step + 1..cols {
                let cross = &m[step][step] * &m[i][j] - &m[i][step] * &m[step][j];
                m[i][j] = cross / &prev;
            }
            m[i][step] = BigInt::from(0);
        }
        prev = m[step][step].clone();
        r += 1;
    }
    r
}

/// Fraction-free rank over Laurent polynomials: rows are cleared of
/// denominators (rank-preserving), and each cross-multiplication step is
/// followed by stripping the row content, which removes at least the
/// previous pivot factor and keeps entries small.
fn sym_rank(entries: Vec<Vec<RatFunc>>) -> usize {
    use crate::scalars::LaurentPoly;
    let rows = entries.len();
    if rows == 0 {
        return 0;
    }
    let cols = entries[0].len();
    // Shortcut: rank at any rational point bounds the symbolic rank from
    // below, and min(rows, cols) bounds it from above. A full-rank
    // evaluation therefore decides the symbolic rank exactly.
    for (r0, q0) in [(7i64, 3i64), (11, 5), (23, 10)] {
        let r0 = Q::from_integer(r0.into());
        let q0 = Q::from_integer(q0.into());
        let evaluated: Option<Vec<Vec<Scalar>>> = entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| {
                        let den = f.denominator().eval_rational(&r0, &q0)?;
                        if den.is_zero() {
                            return None;
                        }
                        let num = f.numerator().eval_rational(&r0, &q0)?;
                        Some(Scalar::from_rational(num / den))
                    })
                    .collect()
            })
            .collect();
        if let Some(m) = evaluated {
            if let Ok(r) = rank(&m) {
                if r == rows.min(cols) {
                    return r;
                }
            }
        }
    }
    // A matrix in q alone admits a modular evaluation certificate that is
    // far cheaper than symbolic elimination.
    if let Some(r) = univariate_rank(&entries) {
        return r;
    }
    let mut m: Vec<Vec<LaurentPoly>> = entries
        .iter()
        .map(|row| {
            let mut lcm = LaurentPoly::one();
            for f in row {
                let d = f.denominator();
                let g = lcm.gcd(d);
                lcm = lcm.mul(&d.div_exact(&g));
            }
            row.iter()
                .map(|f| f.numerator().mul(&lcm.div_exact(f.denominator())))
                .collect()
        })
        .collect();
    // strip the content of a row in place (gcd of its entries, up to a
    // monomial unit); row scalings do not change the rank
    let strip = |row: &mut [LaurentPoly]| {
        let mut g = LaurentPoly::zero();
        for e in row.iter() {
            if !e.is_zero() {
                g = if g.is_zero() { e.clone() } else { g.gcd(e) };
                if g.num_terms() == 1 {
                    break;
                }
            }
        }
        if g.is_zero() || g.num_terms() == 1 {
            // a monomial content is already stripped by the reduced form
            return;
        }
        for e in row.iter_mut() {
            if !e.is_zero() {
                *e = e.div_exact(&g);
            }
        }
    };
    for row in m.iter_mut() {
        strip(row);
    }
    let mut r = 0;
    for step in 0..rows.min(cols) {
        // pick the pivot with the fewest terms among the remaining rows
        let Some((pi, pj)) = (step..rows)
            .flat_map(|i| (step..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| m[i][j].num_terms())
        else {
            break;
        };
        m.swap(step, pi);
        for row in m.iter_mut() {
            row.swap(step, pj);
        }
        for i in step + 1..rows {
            if m[i][step].is_zero() {
                continue;
            }
            for j in step + 1..cols {
                m[i][j] = m[step][step]
                    .mul(&m[i][j])
                    .sub(&m[i][step].mul(&m[step][j]));
            }
            m[i][step] = LaurentPoly::zero();
            strip(&mut m[i][step..]);
        }
        r += 1;
    }
    r
}

/// Exact rank of a matrix of rational functions in q alone, by a modular
/// evaluation-count certificate. After clearing denominators (a row
/// scaling, so rank-preserving) the entries are integer polynomials, and
/// every (k+1)-minor is an integer polynomial whose degree and coefficient
/// size obey explicit bounds: the degree is at most the sum of the k+1
/// largest per-row degree maxima, and each coefficient is bounded by the
/// product of the k+1 largest per-row coefficient 1-norms (and likewise
/// per column; the smaller bound is used). If the rank is at most k at
/// `degree bound + 1` distinct points modulo each of enough primes — with
/// product exceeding the coefficient bound — then every (k+1)-minor
/// vanishes identically, so the rank over Q(q) is at most k. Every
/// modular evaluation also bounds the rank from below (a nonzero minor
/// mod p is a nonzero minor), so the certified value is exact.
///
/// Returns None when some entry involves r.
fn univariate_rank(entries: &[Vec<RatFunc>]) -> Option<usize> {
    use crate::scalars::LaurentPoly;
    use num_bigint::BigInt;
    use num_traits::{One, ToPrimitive};

    let rows = entries.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = entries[0].len();
    for row in entries {
        for f in row {
            if f.numerator().terms().any(|((er, _), _)| *er != 0)
                || f.denominator().terms().any(|((er, _), _)| *er != 0)
            {
                return None;
            }
        }
    }
    // Clear denominators and rescale each row to integer coefficient
    // vectors (ascending in q after shifting out the lowest exponent —
    // a unit multiple, so rank-preserving).
    let mut m: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(rows);
    for row in entries {
        let mut lcm = LaurentPoly::one();
        for f in row {
            let d = f.denominator();
            let g = lcm.gcd(d);
            lcm = lcm.mul(&d.div_exact(&g));
        }
        let cleared: Vec<LaurentPoly> = row
            .iter()
            .map(|f| f.numerator().mul(&lcm.div_exact(f.denominator())))
            .collect();
        let min_e = cleared
            .iter()
            .flat_map(|p| p.terms().map(|((_, eq), _)| *eq))
            .min()
            .unwrap_or(0);
        let den_lcm = cleared
            .iter()
            .flat_map(|p| p.terms().map(|(_, c)| c.denom().clone()))
            .fold(BigInt::one(), num_integer::lcm);
        let mut irow: Vec<Vec<BigInt>> = Vec::with_capacity(cols);
        for poly in &cleared {
            let mut v: Vec<BigInt> = Vec::new();
            for ((_, eq), c) in poly.terms() {
                let k = (eq - min_e) as usize;
                if v.len() <= k {
                    v.resize(k + 1, BigInt::from(0));
                }
                v[k] = c.numer() * (&den_lcm / c.denom());
            }
            while v.last().map_or(false, |c| c.is_zero()) {
                v.pop();
            }
            irow.push(v);
        }
        // strip the integer content (another row scaling) to sharpen bounds
        let mut g = BigInt::from(0);
        'content: for e in &irow {
            for c in e {
                g = num_integer::gcd(g, c.clone());
                if g.is_one() {
                    break 'content;
                }
            }
        }
        if !g.is_zero() && !g.is_one() {
            for e in irow.iter_mut() {
                for c in e.iter_mut() {
                    *c = c.clone() / &g;
                }
            }
        }
        m.push(irow);
    }
    let row_deg: Vec<u64> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.len().saturating_sub(1) as u64)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let col_deg: Vec<u64> = (0..cols)
        .map(|j| {
            m.iter()
                .map(|row| row[j].len().saturating_sub(1) as u64)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let norm_bits = |coeffs: &mut dyn Iterator<Item = &BigInt>| -> u64 {
        let s: BigInt = coeffs.map(|c| c.abs()).sum();
        s.bits()
    };
    let row_bits: Vec<u64> = m
        .iter()
        .map(|row| norm_bits(&mut row.iter().flatten()))
        .collect();
    let col_bits: Vec<u64> = (0..cols)
        .map(|j| norm_bits(&mut m.iter().flat_map(|row| row[j].iter())))
        .collect();
    let top_sum = |vals: &[u64], k: usize| -> u64 {
        let mut v = vals.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.iter().take(k).sum()
    };
    let nz_rows = m.iter().filter(|r| r.iter().any(|e| !e.is_empty())).count();
    let nz_cols = (0..cols)
        .filter(|&j| m.iter().any(|r| !r[j].is_empty()))
        .count();
    let max_rank = nz_rows.min(nz_cols);
    let mut primes: Vec<u64> = Vec::new();
    let mut candidate = (1u64 << 60) + 1;
    let mut r0 = 0usize;
    'outer: loop {
        // r0 was witnessed by a nonzero minor, so it is a firm lower bound
        if r0 >= max_rank {
            return Some(r0);
        }
        let n1 = r0 + 1;
        let dbound = top_sum(&row_deg, n1).min(top_sum(&col_deg, n1));
        let hbits = top_sum(&row_bits, n1).min(top_sum(&col_bits, n1));
        // primes exceed 2^60, so their product exceeds 2^hbits
        let nprimes = ((hbits + 59) / 60).max(1) as usize;
        while primes.len() < nprimes {
            if is_prime_u64(candidate) {
                primes.push(candidate);
            }
            candidate += 2;
        }
        for &p in &primes[..nprimes] {
            let pb = BigInt::from(p);
            let mp: Vec<Vec<Vec<u64>>> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| {
                            e.iter()
                                .map(|c| {
                                    let r = ((c % &pb) + &pb) % &pb;
                                    r.to_u64().expect("residue fits in u64")
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            for x in 1..=dbound + 1 {
                let a: Vec<Vec<u64>> = mp
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| {
                                let mut acc = 0u64;
                                for c in e.iter().rev() {
                                    acc = add_mod(mul_mod(acc, x, p), *c, p);
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect();
                let rk = rank_mod_p(a, p);
                if rk > r0 {
                    r0 = rk;
                    continue 'outer;
                }
            }
        }
        return Some(r0);
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the listed witness set decides primality
/// for all 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Row-echelon rank over F_p.
fn rank_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pi) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pi);
        let inv = pow_mod(a[r][c], p - 2, p);
        for x in a[r][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in r + 1..rows {
            let f = a[i][c];
            if f == 0 {
                continue;
            }
            let (top, bot) = a.split_at_mut(i);
            let pivot_row = &top[r];
            let row_i = &mut bot[0];
            for j in c..cols {
                let t = mul_mod(f, pivot_row[j], p);
                row_i[j] = sub_mod(row_i[j], t, p);
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the quotient by the annihilator ideal of the trace:
/// the rank of the Gram matrix over the working scalar field.
pub fn quotient_dim(ctx: &BmwContext, n: usize, max_n: usize) -> Result<usize> {
    // Cheap certificate first: the Gram matrix at a rational member of the
    // parameter family is the evaluation of the symbolic one, and evaluation
    // never raises the rank. A full-rank evaluation therefore pins the rank
    // without ever building the symbolic matrix.
    if let Some(pt) = rational_member(ctx.params()) {
        if let Ok(pctx) = BmwContext::new(Params::at(&pt)?) {
            if let Ok(g) = gram(&pctx, n, max_n) {
                let r = rank(&g.entries)?;
                if r == g.order.len() {
                    return Ok(r);
                }
            }
        }
    }
    let g = gram(ctx, n, max_n)?;
    rank(&g.entries)
}

/// A rational specialization belonging to the same parameter family as
/// `params`, when the parameters are symbolic rational functions.
fn rational_member(params: &Params) -> Option<SpecPoint> {
    let (Scalar::Sym(fr), Scalar::Sym(fq)) = (&params.r, &params.q) else {
        return None;
    };
    let r0 = Q::from_integer(7.into());
    let q0 = Q::from_integer(3.into());
    let ev = |f: &RatFunc| -> Option<Q> {
        let den = f.denominator().eval_rational(&r0, &q0)?;
        if den.is_zero() {
            return None;
        }
        Some(f.numerator().eval_rational(&r0, &q0)? / den)
    };
    Some(SpecPoint::Rational {
        r: ev(fr)?,
        q: ev(fq)?,
    })
}

/// Sylvester inertia (rank, positives, negatives) of a symmetric rational
/// matrix, by congruence elimination. This is the q-independent invariant
/// used to compare Gram forms across specializations.
pub fn rational_inertia(entries: &[Vec<Scalar>]) -> Result<(usize, usize, usize)> {
    let dim = entries.len();
    let mut m: Vec<Vec<Q>> = entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    s.as_rational().ok_or_else(|| {
                        Error::PreconditionFailed("inertia needs rational entries".into())
                    })
                })
                .collect::<Result<Vec<Q>>>()
        })
        .collect::<Result<_>>()?;
    let mut plus = 0usize;
    let mut minus = 0usize;
    let mut active: Vec<usize> = (0..dim).collect();
    while !active.is_empty() {
        // find a nonzero diagonal pivot, or fix one up congruently
        let pivot = active.iter().position(|&i| !m[i][i].is_zero());
        let pivot = match pivot {
            Some(k) => active[k],
            None => {
                let Some((i, j)) = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero())
                else {
                    break; // remaining block is zero
                };
                // congruence: row_i += row_j, col_i += col_j gives
                // m[i][i] = 2 m[i][j] != 0
                for c in 0..dim {
                    let t = m[j][c].clone();
                    m[i][c] += t;
                }
                for r in 0..dim {
                    let t = m[r][j].clone();
                    m[r][i] += t;
                }
                i
            }
        };
        let d = m[pivot][pivot].clone();
        if d.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        active.retain(|&i| i != pivot);
        for &i in &active {
            if !m[i][pivot].is_zero() {
                let f = m[i][pivot].clone() / d.clone();
                for c in 0..dim {
                    let t = f.clone() * m[pivot][c].clone();
                    m[i][c] -= t;
                }
                for r in 0..dim {
                    let t = f.clone() * m[r][pivot].clone();
                    m[r][i] -= t;
                }
            }
        }
    }
    Ok((plus + minus, plus, minus))
}

/// Outcome of the semisimplicity test, with its justification.
#[derive(Clone, Debug)]
pub struct SemisimpleReport {
    pub semisimple: bool,
    /// False when neither the sufficient criterion nor a nilpotent witness
    /// applies, so `semisimple: false` only means "not certified".
    pub conclusive: bool,
    pub reason: String,
}

/// Apply the sufficient semisimplicity criterion (q^2 not a primitive
/// l-th root of unity for 1 < l <= n, and Q_lambda != 0 for |lambda| < n),
/// and report the nilpotent obstruction when q^2 is a small root of unity.
pub fn is_semisimple(n: usize, point: Option<&SpecPoint>) -> Result<SemisimpleReport> {
    let Some(point) = point else {
        return Ok(SemisimpleReport {
            semisimple: true,
            conclusive: true,
            reason: "generic parameters: q^2 is not a root of unity and all Q_lambda are nonzero rational functions".into(),
        });
    };
    let params = Params::at(point)?;
    if let Some(l) = point.q_squared_order() {
        if l == 1 {
            return Ok(SemisimpleReport {
                semisimple: false,
                conclusive: false,
                reason: "q^2 = 1: outside the scope of the criterion".into(),
            });
        }
        if (l as usize) <= n {
            // obstruction: [l] Q_{[l]} or [l] Q_{[1^l]} nonzero at the point
            // (the products are regular even where Q alone has a pole)
            let col = params.eval(&qnum(l as i64).mul(&q_column(l as usize)?))?;
            let row = params.eval(
                &qnum(l as i64).mul(&q_dim(&YoungDiagram::new(vec![l as usize])?)),
            )?;
            if !col.is_zero() || !row.is_zero() {
                return Ok(SemisimpleReport {
                    semisimple: false,
                    conclusive: true,
                    reason: format!(
                        "q^2 is a primitive {}-th root of unity and the nilpotent element N_{} has nonzero trace",
                        l, l
                    ),
                });
            }
            return Ok(SemisimpleReport {
                semisimple: false,
                conclusive: false,
                reason: format!(
                    "q^2 is a primitive {}-th root of unity; no nilpotent witness (Q_[{}] and Q_[1^{}] both vanish)",
                    l, l, l
                ),
            });
        }
    }
    // q^2 not a small root of unity: check Q_lambda != 0 for |lambda| < n
    for lambda in partitions_up_to(n.saturating_sub(1)) {
        let v = params.eval(&q_dim(&lambda))?;
        if v.is_zero() {
            return Ok(SemisimpleReport {
                semisimple: false,
                conclusive: false,
                reason: format!(
                    "Q_{} vanishes at the working point; the sufficient criterion does not apply",
                    lambda
                ),
            });
        }
    }
    Ok(SemisimpleReport {
        semisimple: true,
        conclusive: true,
        reason: format!(
            "q^2 is not a primitive l-th root of unity for 1 < l <= {} and Q_lambda != 0 for all |lambda| < {}",
            n, n
        ),
    })
}

/// How the parameters are presented to the classifier.
#[derive(Clone, Debug)]
pub enum ParamInput {
    /// r and q independent symbols.
    Symbolic,
    /// r = sign * q^k with q a symbol.
    QPow { sign: i64, k: i64 },
    /// Both rational.
    Rational { r: Q, q: Q },
    /// q a root of unity.
    RootOfUnity(SpecPoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    ONum(u32),
    SpNum(u32),
    OInfinity,
    Fusion { n: u32, m: u32 },
    SpecialO2,
    SpecialSp1,
    Excluded(String),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::ONum(n) => write!(f, "O({})", n),
            Outcome::SpNum(n) => write!(f, "Sp({})", n),
            Outcome::OInfinity => write!(f, "O(inf)"),
            Outcome::Fusion { n, m } => write!(f, "fusion-O({},{})", n, m),
            Outcome::SpecialO2 => write!(f, "special-O(2)"),
            Outcome::SpecialSp1 => write!(f, "special-Sp(1)"),
            Outcome::Excluded(why) => write!(f, "excluded: {}", why),
        }
    }
}

impl Outcome {
    /// The labeling set of the corresponding semisimple quotient, when the
    /// outcome names one.
    pub fn label_set(&self) -> Option<LabelSet> {
        match self {
            Outcome::ONum(n) => Some(LabelSet::ON(*n)),
            Outcome::SpNum(n) => Some(LabelSet::SpN(*n)),
            Outcome::OInfinity => Some(LabelSet::OInf),
            Outcome::Fusion { n, m } => Some(LabelSet::FusionO(*n, *m)),
            Outcome::SpecialO2 => Some(LabelSet::ON(2)),
            Outcome::SpecialSp1 => Some(LabelSet::SpN(1)),
            Outcome::Excluded(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParamClass {
    pub outcome: Outcome,
    /// The orbit representative actually classified, as `r = ...` text.
    pub normalized: String,
    /// Metadata: the +-i-twisted eigenvalue family yields the same algebra.
    pub twist_family: bool,
    pub notes: Vec<String>,
}

/// Classify r = sign * q^k (q not a root of unity). `notes` collects the
/// normalizations applied.
fn classify_qpow(mut sign: i64, mut k: i64, notes: &mut Vec<String>) -> (Outcome, String) {
    if k < 0 {
        // (r, q) -> (-r^{-1}, q)
        sign = -sign;
        k = -k;
        notes.push("normalized via r -> -1/r".into());
    }
    if k % 2 == 0 && sign < 0 {
        // (r, q) -> (-r, -q) flips the sign when the exponent is even
        sign = 1;
        notes.push("normalized via (r, q) -> (-r, -q)".into());
    }
    let normalized = format!("r = {}q^{}", if sign < 0 { "-" } else { "" }, k);
    let outcome = if k == 0 {
        Outcome::Excluded("r = +-1 with q generic".into())
    } else if sign > 0 {
        if k == 1 {
            Outcome::SpecialO2
        } else {
            Outcome::ONum(k as u32 + 1)
        }
    } else if k == 1 {
        Outcome::Excluded("d(X) = 0 at r = -q".into())
    } else if k == 3 {
        Outcome::SpecialSp1
    } else {
        // k odd >= 5: r = -q^{2N+1}
        Outcome::SpNum(((k - 1) / 2) as u32)
    };
    (outcome, normalized)
}

pub fn classify(input: &ParamInput, dx_override: Option<Q>) -> Result<ParamClass> {
    let mut notes: Vec<String> = Vec::new();
    let one = Q::from_integer(1.into());
    match input {
        ParamInput::Symbolic => Ok(ParamClass {
            outcome: Outcome::OInfinity,
            normalized: "r, q independent".into(),
            twist_family: false,
            notes,
        }),
        ParamInput::QPow { sign, k } => {
            let (outcome, normalized) = classify_qpow(*sign, *k, &mut notes);
            Ok(ParamClass {
                outcome,
                normalized,
                twist_family: false,
                notes,
            })
        }
        ParamInput::Rational { r, q } => {
            if r.is_zero() || q.is_zero() {
                return Err(Error::PreconditionFailed("r and q must be nonzero".into()));
            }
            if q == &one || q == &(-one.clone()) {
                // the presentation degenerates at q = +-1: the loop value
                // d(X) is an independent input there
                let Some(dx) = dx_override else {
                    return Err(Error::PreconditionFailed(
                        "q = +-1 needs an explicit d(X) override".into(),
                    ));
                };
                notes.push("q = +-1: classified by the loop value d(X)".into());
                let outcome = classify_brauer_dim(&dx);
                return Ok(ParamClass {
                    outcome,
                    normalized: format!("q = +-1, d(X) = {}", dx),
                    twist_family: false,
                    notes,
                });
            }
            if r == &one || r == &(-one.clone()) {
                return Ok(ParamClass {
                    outcome: Outcome::Excluded("r = +-1 with q != +-1".into()),
                    normalized: format!("r = {}, q = {}", r, q),
                    twist_family: false,
                    notes,
                });
            }
            // rational q != +-1 is never a root of unity; check r = +-q^k
            if let Some((sign, k)) = match_rational_power(r, q) {
                notes.push(format!(
                    "rational point lies on r = {}q^{}",
                    if sign < 0 { "-" } else { "" },
                    k
                ));
                let (outcome, normalized) = classify_qpow(sign, k, &mut notes);
                return Ok(ParamClass {
                    outcome,
                    normalized,
                    twist_family: false,
                    notes,
                });
            }
            Ok(ParamClass {
                outcome: Outcome::OInfinity,
                normalized: format!("r = {}, q = {}", r, q),
                twist_family: false,
                notes,
            })
        }
        ParamInput::RootOfUnity(point) => {
            let SpecPoint::Cyclotomic { order, q_exp, r } = point else {
                return Err(Error::PreconditionFailed(
                    "RootOfUnity input must carry a cyclotomic point".into(),
                ));
            };
            let o = *order as i64;
            let qord = o / num_integer::gcd(o, q_exp.rem_euclid(o));
            if qord <= 2 {
                return Err(Error::PreconditionFailed(
                    "q = +-1 needs the rational classifier with a d(X) override".into(),
                ));
            }
            match r {
                crate::scalars::CycR::Rational(_) => Ok(ParamClass {
                    outcome: Outcome::Excluded(
                        "q is a root of unity but r is not +- a power of q".into(),
                    ),
                    normalized: format!("q of order {}", qord),
                    twist_family: false,
                    notes,
                }),
                crate::scalars::CycR::SignedQPow { sign, k } => {
                    // reduce k modulo the order of q, then read off the
                    // orthogonal-side exponent; pair it with the smallest
                    // t >= 1 with q^t = -1 when one exists
                    let kk = k.rem_euclid(qord);
                    let n_param = kk as u32 + 1;
                    notes.push(
                        "fusion (N,M) extraction is citation-dependent; reported per the label-set conventions".into(),
                    );
                    let t = (1..=qord).find(|t| {
                        // q^t = -1 iff t*q_exp = order/2 (mod order), order even
                        o % 2 == 0 && (t * q_exp).rem_euclid(o) == o / 2
                    });
                    let m_param = match (sign, t) {
                        (1, Some(t)) if t > kk => (t - kk + 1) as u32,
                        _ => {
                            notes.push(
                                "no orthogonal (N,M) pairing at this point; M reported as the order of q^2".into(),
                            );
                            point.q_squared_order().unwrap_or(0)
                        }
                    };
                    Ok(ParamClass {
                        outcome: Outcome::Fusion {
                            n: n_param,
                            m: m_param,
                        },
                        normalized: format!(
                            "q of order {}, r = {}q^{}",
                            qord,
                            if *sign < 0 { "-" } else { "" },
                            kk
                        ),
                        twist_family: false,
                        notes,
                    })
                }
            }
        }
    }
}

/// Classify by the Brauer loop value at q = +-1: d(X) = N gives O(N)
/// (N odd also appears as d(X) = 2 - N), d(X) = -2N gives Sp(N).
fn classify_brauer_dim(dx: &Q) -> Outcome {
    if !dx.is_integer() {
        return Outcome::OInfinity;
    }
    let v: i64 = {
        use num_traits::ToPrimitive;
        match dx.to_integer().to_i64() {
            Some(v) => v,
            None => return Outcome::OInfinity,
        }
    };
    if v >= 1 {
        return Outcome::ONum(v as u32);
    }
    if v <= -2 && v % 2 == 0 {
        return Outcome::SpNum((-v / 2) as u32);
    }
    if v <= 0 && (2 - v) % 2 == 1 {
        // d(X) = 2 - N with N odd
        return Outcome::ONum((2 - v) as u32);
    }
    Outcome::OInfinity
}

/// If r = sign * q^k for rational r, q (|q| != 1), return (sign, k).
fn match_rational_power(r: &Q, q: &Q) -> Option<(i64, i64)> {
    for k in -64i64..=64 {
        let p = rational_pow(q, k)?;
        if r == &p {
            return Some((1, k));
        }
        if r == &(-p) {
            return Some((-1, k));
        }
    }
    None
}

fn rational_pow(q: &Q, k: i64) -> Option<Q> {
    let mut acc = Q::from_integer(1.into());
    let base = if k >= 0 {
        q.clone()
    } else {
        if q.is_zero() {
            return None;
        }
        Q::from_integer(1.into()) / q.clone()
    };
    for _ in 0..k.unsigned_abs() {
        acc *= base.clone();
    }
    Some(acc)
}

/// True iff (r', q') lies in the orbit of (r, q) under the group generated
/// by (r,q) -> (-r,-q), (r^{-1},q^{-1}), (r,-q^{-1}), (-r^{-1},q),
/// with the parameters given as exact rational functions.
pub fn equivalent_params(a: (&RatFunc, &RatFunc), b: (&RatFunc, &RatFunc)) -> Result<bool> {
    let target = (b.0.clone(), b.1.clone());
    let start = (a.0.clone(), a.1.clone());
    let mut seen: Vec<(RatFunc, RatFunc)> = vec![start.clone()];
    let mut queue: VecDeque<(RatFunc, RatFunc)> = VecDeque::from([start]);
    while let Some((r, q)) = queue.pop_front() {
        if (r.clone(), q.clone()) == target {
            return Ok(true);
        }
        let images = [
            (r.neg(), q.neg()),
            (r.inv()?, q.inv()?),
            (r.clone(), q.inv()?.neg()),
            (r.inv()?.neg(), q.clone()),
        ];
        for im in images {
            if !seen.contains(&im) {
                seen.push(im.clone());
                queue.push_back(im);
            }
        }
        if seen.len() > 64 {
            return Err(Error::ConstraintViolated(
                "parameter orbit failed to close (internal error)".into(),
            ));
        }
    }
    Ok(false)
}

/// The three projection matrices of the O(2) specialization r = q = q0:
/// left multiplication by p_2^(lambda) on Hom(X, X^{x3}) in the basis
/// p_1^(lambda) i_2, lambda in {[0], [1^2], [2]}, with the trace-dual basis.
/// The entries are independent of q0.
pub fn o2_projection_matrices(q0: &Q) -> Result<[Vec<Vec<Q>>; 3]> {
    let point = SpecPoint::Rational {
        r: q0.clone(),
        q: q0.clone(),
    };
    let ctx = BmwContext::new(Params::at(&point)?)?;
    let params = ctx.params();
    let half = Scalar::from_rational(Q::new(1.into(), 2.into()));

    // the spectral projections of T_i in the two-strand subalgebras of D_3,
    // for i = 1, 2: p^{[0]} = E_i/d(X) (d(X) = 2 here), p^{[1^2]} the
    // antisymmetrizer, p^{[2]} the rest
    let projections = |i: usize| -> Result<[BmwElement; 3]> {
        let t = ctx.gen_t(i, 3, 1)?;
        let e = ctx.gen_e(i, 3)?;
        let p0 = e.scale(&half);
        let z_over = ctx
            .z()
            .div(&Scalar::one().add(&params.r.mul(&params.q.pow(-1)?)))?;
        let p_anti = BmwElement::one(3)
            .scale(&params.q)
            .sub(&t)?
            .sub(&e.scale(&z_over))?
            .scale(&params.q_int(2).inv()?);
        let p_sym = BmwElement::one(3).sub(&p0)?.sub(&p_anti)?;
        Ok([p0, p_anti, p_sym])
    };
    let p1 = projections(1)?;
    let p2 = projections(2)?;
    let e2 = ctx.gen_e(2, 3)?;
    let e2_diag = BrauerDiagram::cupcap(2, 3)?;

    // the scalar c with E_2 x E_2 = c E_2
    let sandwich = |x: &BmwElement| -> Result<Scalar> {
        let v = ctx.mul3(&e2, x, &e2)?;
        for (d, coeff) in v.coeffs() {
            if d != &e2_diag && !coeff.is_zero() {
                return Err(Error::ConstraintViolated(
                    "E_2 x E_2 is not a multiple of E_2 (internal error)".into(),
                ));
            }
        }
        Ok(v.coeff(&e2_diag))
    };

    let mut norms = Vec::new();
    for pk in &p1 {
        norms.push(sandwich(pk)?);
    }
    let mut out: [Vec<Vec<Q>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (mi, pm) in p2.iter().enumerate() {
        let mut matrix = vec![vec![Q::zero(); 3]; 3];
        for (ki, pk) in p1.iter().enumerate() {
            for (li, pl) in p1.iter().enumerate() {
                let x = ctx.mul3(pk, pm, pl)?;
                let c = sandwich(&x)?.div(&norms[ki])?;
                matrix[ki][li] = c.as_rational().ok_or_else(|| {
                    Error::ConstraintViolated("entry is not rational (internal error)".into())
                })?;
            }
        }
        out[mi] = matrix;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::unipoly::{q_from, q_one};
    use crate::scalars::CycR;

    fn rat(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn gram_small() {
        let ctx = BmwContext::symbolic();
        let g1 = gram(&ctx, 1, 5).unwrap();
        assert_eq!(g1.entries, vec![vec![Scalar::one()]]);
        let g2 = gram(&ctx, 2, 5).unwrap();
        assert_eq!(rank(&g2.entries).unwrap(), 3);
        // symmetric under the pairing
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g2.entries[i][j], g2.entries[j][i]);
            }
        }
        assert!(matches!(
            gram(&ctx, 4, 3),
            Err(Error::ResourceBound(_))
        ));
    }

    #[test]
    fn gram_symmetry_uses_the_true_star() {
        // the pairing is symmetric only with the tangle anti-involution;
        // verify by filling the full matrix without mirroring
        let pt = SpecPoint::Rational {
            r: rat(9, 1),
            q: rat(3, 1),
        };
        let ctx = BmwContext::new(Params::at(&pt).unwrap()).unwrap();
        let order = all_diagrams(3);
        for a in &order {
            let astar = ctx.star(&BmwElement::basis(a.clone())).unwrap();
            for b in &order {
                let bstar = ctx.star(&BmwElement::basis(b.clone())).unwrap();
                let ab = ctx
                    .markov_trace(&ctx.mul(&astar, &BmwElement::basis(b.clone())).unwrap())
                    .unwrap();
                let ba = ctx
                    .markov_trace(&ctx.mul(&bstar, &BmwElement::basis(a.clone())).unwrap())
                    .unwrap();
                assert!(ab.sub(&ba).is_zero(), "asymmetric at {} {}", a, b);
            }
        }
    }

    #[test]
    fn univariate_modular_rank_certificate() {
        let qv = RatFunc::var_q();
        let one = RatFunc::one();
        // rows a, b, a + q·b: rank 2
        let a = vec![one.clone(), qv.clone(), one.clone()];
        let b = vec![qv.clone(), one.clone(), RatFunc::zero()];
        let c: Vec<RatFunc> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.add(&y.mul(&qv)))
            .collect();
        let to_scalars = |rows: Vec<Vec<RatFunc>>| -> Vec<Vec<Scalar>> {
            rows.into_iter()
                .map(|r| r.into_iter().map(Scalar::Sym).collect())
                .collect()
        };
        let m = to_scalars(vec![a.clone(), b.clone(), c]);
        assert_eq!(rank(&m).unwrap(), 2);
        // rank 1 after scaling a row by a rational function
        let inv = RatFunc::one().div(&qv.add(&RatFunc::one())).unwrap();
        let a_scaled: Vec<RatFunc> = a.iter().map(|x| x.mul(&inv)).collect();
        let m1 = to_scalars(vec![a.clone(), a_scaled]);
        assert_eq!(rank(&m1).unwrap(), 1);
        // zero matrix
        let z = to_scalars(vec![vec![RatFunc::zero(); 2]; 2]);
        assert_eq!(rank(&z).unwrap(), 0);
    }

    #[test]
    fn quotient_dims_match_the_table() {
        let sym = BmwContext::symbolic();
        assert_eq!(quotient_dim(&sym, 3, 5).unwrap(), 15);
        let o2 = BmwContext::new(Params::at(&SpecPoint::RQPow { sign: 1, k: 1 }).unwrap()).unwrap();
        assert_eq!(quotient_dim(&o2, 3, 5).unwrap(), 10);
        let sp1 =
            BmwContext::new(Params::at(&SpecPoint::RQPow { sign: -1, k: 3 }).unwrap()).unwrap();
        assert_eq!(quotient_dim(&sp1, 2, 5).unwrap(), 2);
        let o3 = BmwContext::new(Params::at(&SpecPoint::RQPow { sign: 1, k: 2 }).unwrap()).unwrap();
        for n in 1..=3usize {
            let want: u64 = crate::fusion::multiplicities(n, &LabelSet::ON(3))
                .unwrap()
                .sum_of_squares();
            assert_eq!(quotient_dim(&o3, n, 5).unwrap() as u64, want, "O(3) n={}", n);
        }
    }

    #[test]
    fn semisimplicity_reports() {
        let generic = is_semisimple(3, None).unwrap();
        assert!(generic.semisimple && generic.conclusive);
        let point = SpecPoint::Cyclotomic {
            order: 6,
            q_exp: 1,
            r: CycR::Rational(rat(5, 7)),
        };
        let rep = is_semisimple(3, Some(&point)).unwrap();
        assert!(!rep.semisimple && rep.conclusive, "{}", rep.reason);
        assert!(rep.reason.contains("nilpotent"));
        let o3 = SpecPoint::RQPow { sign: 1, k: 2 };
        for n in 2..=4usize {
            let rep = is_semisimple(n, Some(&o3)).unwrap();
            assert!(rep.semisimple, "O(3) n={}: {}", n, rep.reason);
        }
    }

    #[test]
    fn classification_table() {
        let q = |sign, k| ParamInput::QPow { sign, k };
        assert_eq!(classify(&q(1, 2), None).unwrap().outcome, Outcome::ONum(3));
        assert_eq!(classify(&q(1, 4), None).unwrap().outcome, Outcome::ONum(5));
        assert_eq!(
            classify(&q(-1, 3), None).unwrap().outcome,
            Outcome::SpecialSp1
        );
        assert_eq!(classify(&q(1, 1), None).unwrap().outcome, Outcome::SpecialO2);
        assert!(matches!(
            classify(&q(1, -1), None).unwrap().outcome,
            Outcome::Excluded(_)
        ));
        assert!(matches!(
            classify(&q(-1, 1), None).unwrap().outcome,
            Outcome::Excluded(_)
        ));
        assert_eq!(
            classify(&ParamInput::Symbolic, None).unwrap().outcome,
            Outcome::OInfinity
        );
        assert!(matches!(
            classify(
                &ParamInput::Rational {
                    r: q_one(),
                    q: q_from(2)
                },
                None
            )
            .unwrap()
            .outcome,
            Outcome::Excluded(_)
        ));
        let fusion_point = SpecPoint::Cyclotomic {
            order: 10,
            q_exp: 1,
            r: CycR::SignedQPow { sign: 1, k: 3 },
        };
        assert_eq!(
            classify(&ParamInput::RootOfUnity(fusion_point), None)
                .unwrap()
                .outcome,
            Outcome::Fusion { n: 4, m: 3 }
        );
        assert_eq!(
            classify(
                &ParamInput::Rational {
                    r: q_one(),
                    q: q_one()
                },
                Some(rat(-4, 1))
            )
            .unwrap()
            .outcome,
            Outcome::SpNum(2)
        );
        assert_eq!(
            classify(
                &ParamInput::Rational {
                    r: q_one(),
                    q: q_one()
                },
                Some(rat(7, 3))
            )
            .unwrap()
            .outcome,
            Outcome::OInfinity
        );
        // mirrors: r = -q^2 is O(3) via (r,q) -> (-r,-q)
        assert_eq!(classify(&q(-1, 2), None).unwrap().outcome, Outcome::ONum(3));
        // Sp(2) at r = -q^5
        assert_eq!(classify(&q(-1, 5), None).unwrap().outcome, Outcome::SpNum(2));
        // rational point on r = q^2
        assert_eq!(
            classify(
                &ParamInput::Rational {
                    r: q_from(4),
                    q: q_from(2)
                },
                None
            )
            .unwrap()
            .outcome,
            Outcome::ONum(3)
        );
    }

    #[test]
    fn orbit_equivalence() {
        let q2 = RatFunc::q_pow(2);
        let q = RatFunc::var_q();
        let q3 = RatFunc::q_pow(3);
        let qm2 = RatFunc::q_pow(-2);
        let qm1 = RatFunc::q_pow(-1);
        assert!(equivalent_params((&q2, &q), (&qm2, &qm1)).unwrap());
        assert!(equivalent_params((&q2, &q), (&qm2.neg(), &q)).unwrap());
        assert!(!equivalent_params((&q2, &q), (&q3, &q)).unwrap());
    }

    #[test]
    fn o2_matrices_are_q_independent_and_match() {
        let want0: Vec<Vec<Q>> = vec![
            vec![rat(1, 4), rat(1, 4), rat(1, 2)],
            vec![rat(1, 4), rat(1, 4), rat(1, 2)],
            vec![rat(1, 4), rat(1, 4), rat(1, 2)],
        ];
        let want1: Vec<Vec<Q>> = vec![
            vec![rat(1, 4), rat(1, 4), rat(-1, 2)],
            vec![rat(1, 4), rat(1, 4), rat(-1, 2)],
            vec![rat(-1, 4), rat(-1, 4), rat(1, 2)],
        ];
        let want2: Vec<Vec<Q>> = vec![
            vec![rat(1, 2), rat(-1, 2), rat(0, 1)],
            vec![rat(-1, 2), rat(1, 2), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(0, 1)],
        ];
        for q0 in [2i64, 3, 5] {
            let [m0, m1, m2] = o2_projection_matrices(&q_from(q0)).unwrap();
            assert_eq!(m0, want0, "p2^[0] at q0={}", q0);
            assert_eq!(m1, want1, "p2^[1^2] at q0={}", q0);
            assert_eq!(m2, want2, "p2^[2] at q0={}", q0);
        }
    }

    #[test]
    fn gram3_inertia_is_q_independent() {
        let mut seen: Option<(usize, usize, usize)> = None;
        for q0 in [2i64, 3, 5] {
            let point = SpecPoint::Rational {
                r: q_from(q0),
                q: q_from(q0),
            };
            let ctx = BmwContext::new(Params::at(&point).unwrap()).unwrap();
            let g = gram(&ctx, 3, 5).unwrap();
            let inertia = rational_inertia(&g.entries).unwrap();
            assert_eq!(inertia.0, 10, "rank at q0={}", q0);
            match &seen {
                None => seen = Some(inertia),
                Some(prev) => assert_eq!(prev, &inertia, "inertia at q0={}", q0),
            }
        }
    }
}
