//! Quantum-dimension rational functions Q_lambda(r,q), their closed-form
//! column and hook specializations, the Brauer-limit polynomials, and the
//! reparametrization symmetry identities.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{qnum, ynum, LaurentPoly, RatFunc, Scalar};

/// A Young diagram: weakly decreasing row lengths (empty list = the empty
/// diagram).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        let rows: Vec<usize> = rows.into_iter().filter(|&r| r > 0).collect();
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::PreconditionFailed(format!(
                "row lengths must be weakly decreasing: {:?}",
                rows
            )));
        }
        Ok(YoungDiagram { rows })
    }

    pub fn empty() -> Self {
        YoungDiagram { rows: Vec::new() }
    }

    /// The single column [1^m].
    pub fn column(m: usize) -> Self {
        YoungDiagram { rows: vec![1; m] }
    }

    /// The hook [2, 1^(m-2)] with m boxes (m >= 2).
    pub fn hook21(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::PreconditionFailed(
                "the hook [2,1^(m-2)] needs m >= 2".into(),
            ));
        }
        let mut rows = vec![1; m - 1];
        rows[0] = 2;
        Ok(YoungDiagram { rows })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Row length, 1-based; zero beyond the diagram.
    pub fn row(&self, i: usize) -> usize {
        if i >= 1 && i <= self.rows.len() {
            self.rows[i - 1]
        } else {
            0
        }
    }

    /// Column length, 1-based; zero beyond the diagram.
    pub fn col(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.rows.iter().filter(|&&r| r >= j).count()
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.row(1);
        YoungDiagram {
            rows: (1..=cols).map(|j| self.col(j)).collect(),
        }
    }

    /// All boxes (i, j), 1-based, row-major.
    pub fn boxes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for (i, &len) in self.rows.iter().enumerate() {
            for j in 1..=len {
                out.push((i + 1, j));
            }
        }
        out
    }

    /// Hook length h(i,j) = lambda_i - i + lambda'_j - j + 1.
    pub fn hook(&self, i: usize, j: usize) -> i64 {
        self.row(i) as i64 - i as i64 + self.col(j) as i64 - j as i64 + 1
    }

    /// The content-like shift d(i,j): lambda_i + lambda_j - i - j + 1 for
    /// i <= j, and -lambda'_i - lambda'_j + i + j - 1 for i > j.
    pub fn dshift(&self, i: usize, j: usize) -> i64 {
        if i <= j {
            self.row(i) as i64 + self.row(j) as i64 - i as i64 - j as i64 + 1
        } else {
            -(self.col(i) as i64) - self.col(j) as i64 + i as i64 + j as i64 - 1
        }
    }

    /// Parse the literal `[3,1,1]` (also `[]` and `[0]` for empty).
    pub fn parse(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| {
                Error::MalformedExpression(format!("Young diagram literal must be bracketed: `{}`", s))
            })?;
        let body = body.trim();
        if body.is_empty() {
            return Ok(Self::empty());
        }
        let rows: Vec<usize> = body
            .split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| {
                    Error::MalformedExpression(format!("bad row length `{}` in `{}`", p, s))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(rows)
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The q-dimension rational function Q_lambda(r,q): diagonal boxes (j,j)
/// contribute (r - q^{-2 lambda_j + 2j - 1})(r^{-1} + q^{-2 lambda'_j + 2j - 1})
/// / (1 - q^{-2 h(j,j)}); off-diagonal boxes contribute [y+d(i,j)]/[h(i,j)].
pub fn q_dim(lambda: &YoungDiagram) -> RatFunc {
    let mut acc = RatFunc::one();
    for (i, j) in lambda.boxes() {
        let f = if i == j {
            let a = RatFunc::var_r().sub(&RatFunc::q_pow(-2 * (lambda.row(j) as i64) + 2 * j as i64 - 1));
            let b = RatFunc::r_pow(-1).add(&RatFunc::q_pow(-2 * (lambda.col(j) as i64) + 2 * j as i64 - 1));
            let den = RatFunc::one().sub(&RatFunc::q_pow(-2 * lambda.hook(j, j)));
            a.mul(&b).div(&den).expect("hook length is positive")
        } else {
            ynum(lambda.dshift(i, j))
                .div(&qnum(lambda.hook(i, j)))
                .expect("hook length is positive")
        };
        acc = acc.mul(&f);
    }
    acc
}

/// The closed form for Q_{[1^m]}.
pub fn q_column(m: usize) -> Result<RatFunc> {
    if m == 0 {
        return Ok(RatFunc::one());
    }
    let mm = m as i64;
    let head = RatFunc::var_r()
        .sub(&RatFunc::q_pow(-1))
        .mul(&RatFunc::r_pow(-1).add(&RatFunc::q_pow(1 - 2 * mm)))
        .div(&RatFunc::one().sub(&RatFunc::q_pow(-2 * mm)))?;
    let mut acc = head;
    for j in 1..m as i64 {
        let num = RatFunc::from_poly(
            LaurentPoly::monomial(crate::scalars::unipoly::q_one(), 1, 1 - j)
                .sub(&LaurentPoly::monomial(crate::scalars::unipoly::q_one(), -1, j - 1)),
        );
        let den = RatFunc::q_pow(j).sub(&RatFunc::q_pow(-j));
        acc = acc.mul(&num.div(&den)?);
    }
    Ok(acc)
}

/// The closed form for Q_{[2,1^{m-2}]}. The printed formula degenerates at
/// m = 2 (a [0] appears in the denominator), so that case is computed from
/// the general product instead: Q_{[2]} = (r - q^{-3})(r^{-1} + q^{-1})
/// / (1 - q^{-4}) * [y].
pub fn q_hook21(m: usize) -> Result<RatFunc> {
    if m < 2 {
        return Err(Error::PreconditionFailed(
            "Q_hook21 needs m >= 2".into(),
        ));
    }
    let mm = m as i64;
    if m == 2 {
        let head = RatFunc::var_r()
            .sub(&RatFunc::q_pow(-3))
            .mul(&RatFunc::r_pow(-1).add(&RatFunc::q_pow(-1)))
            .div(&RatFunc::one().sub(&RatFunc::q_pow(-4)))?;
        return Ok(head.mul(&ynum(0)));
    }
    let head = RatFunc::var_r()
        .sub(&RatFunc::q_pow(-3))
        .mul(&RatFunc::r_pow(-1).add(&RatFunc::q_pow(3 - 2 * mm)))
        .div(&RatFunc::one().sub(&RatFunc::q_pow(-2 * mm)))?;
    let mid = ynum(1)
        .mul(&ynum(2 - mm))
        .div(&qnum(1).mul(&qnum(mm - 2)))?;
    let mut acc = head.mul(&mid);
    for j in 1..=(mm - 3) {
        let num = RatFunc::from_poly(
            LaurentPoly::monomial(crate::scalars::unipoly::q_one(), 1, 1 - j)
                .sub(&LaurentPoly::monomial(crate::scalars::unipoly::q_one(), -1, j - 1)),
        );
        let den = RatFunc::q_pow(j).sub(&RatFunc::q_pow(-j));
        acc = acc.mul(&num.div(&den)?);
    }
    Ok(acc)
}

/// The Brauer-limit dimension polynomial: the q -> 1 limit of Q_lambda
/// along r = q^{x-1}. Diagonal boxes contribute (x + 2 lambda_j - 2j)
/// / h(j,j); off-diagonal boxes contribute (x - 1 + d(i,j)) / h(i,j).
pub fn q_hat(lambda: &YoungDiagram, x: &Scalar) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for (i, j) in lambda.boxes() {
        let num = if i == j {
            x.add(&Scalar::from_i64(
                2 * lambda.row(j) as i64 - 2 * j as i64,
            ))
        } else {
            x.add(&Scalar::from_i64(lambda.dshift(i, j) - 1))
        };
        let den = Scalar::from_i64(lambda.hook(i, j));
        acc = acc.mul(&num.div(&den)?);
    }
    Ok(acc)
}

/// All Young diagrams with exactly `total` boxes, lexicographically sorted.
pub fn partitions_of(total: usize) -> Vec<YoungDiagram> {
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if remaining == 0 {
            out.push(YoungDiagram { rows: cur.clone() });
            return;
        }
        for next in (1..=remaining.min(max)).rev() {
            cur.push(next);
            rec(remaining - next, next, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total.max(1), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All Young diagrams with at most `total` boxes.
pub fn partitions_up_to(total: usize) -> Vec<YoungDiagram> {
    let mut out: Vec<YoungDiagram> = (0..=total).flat_map(partitions_of).collect();
    out.sort();
    out
}

/// One symmetry identity check.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub entries: Vec<(String, bool)>,
}

impl SymmetryReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|(_, ok)| *ok)
    }
}

/// Check the reparametrization identities
/// Q_lambda(r,q) = Q_lambda(-r,-q) = Q_lambda(r^{-1},q^{-1})
///               = Q_{lambda'}(r,-q^{-1}) = Q_{lambda'}(-r^{-1},q)
/// as structural equalities of reduced rational functions.
pub fn verify_symmetries(lambda: &YoungDiagram) -> SymmetryReport {
    let q = q_dim(lambda);
    let qc = q_dim(&lambda.conjugate());
    let entries = vec![
        (
            format!("Q_{}(r,q) = Q_{}(-r,-q)", lambda, lambda),
            q == q.substitute_signs(-1, 1, -1, 1),
        ),
        (
            format!("Q_{}(r,q) = Q_{}(r^-1,q^-1)", lambda, lambda),
            q == q.substitute_signs(1, -1, 1, -1),
        ),
        (
            format!("Q_{}(r,q) = Q_{}(r,-q^-1)", lambda, lambda.conjugate()),
            q == qc.substitute_signs(1, 1, -1, -1),
        ),
        (
            format!("Q_{}(r,q) = Q_{}(-r^-1,q)", lambda, lambda.conjugate()),
            q == qc.substitute_signs(-1, -1, 1, 1),
        ),
    ];
    SymmetryReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{dx, unipoly::q_from};

    #[test]
    fn young_diagram_basics() {
        let l = YoungDiagram::parse("[3,1,1]").unwrap();
        assert_eq!(l.size(), 5);
        assert_eq!(l.conjugate(), YoungDiagram::parse("[3,1,1]").unwrap());
        let m = YoungDiagram::parse("[2,1]").unwrap();
        assert_eq!(m.conjugate(), YoungDiagram::parse("[2,1]").unwrap());
        let k = YoungDiagram::parse("[3,2]").unwrap();
        assert_eq!(k.conjugate(), YoungDiagram::parse("[2,2,1]").unwrap());
        assert_eq!(k.conjugate().conjugate(), k);
        assert_eq!(YoungDiagram::parse("[]").unwrap(), YoungDiagram::empty());
        assert!(YoungDiagram::parse("[1,2]").is_err());
        // hooks of [2,1]: h(1,1)=3, h(1,2)=1, h(2,1)=1
        assert_eq!(m.hook(1, 1), 3);
        assert_eq!(m.hook(1, 2), 1);
        assert_eq!(m.hook(2, 1), 1);
    }

    #[test]
    fn q_of_empty_and_single_box() {
        assert_eq!(q_dim(&YoungDiagram::empty()), RatFunc::one());
        assert_eq!(q_dim(&YoungDiagram::column(1)), dx());
    }

    #[test]
    fn q_row_at_r_equals_q_is_two() {
        for n in 1..=3 {
            let l = YoungDiagram::new(vec![n]).unwrap();
            let v = q_dim(&l).substitute_r_qpow(1, 1).unwrap();
            assert_eq!(v, RatFunc::from_i64(2), "Q_[{}] at r=q", n);
        }
        // and the companions Q_[0] = 1 = Q_[1^2] at r=q
        assert_eq!(
            q_dim(&YoungDiagram::column(2)).substitute_r_qpow(1, 1).unwrap(),
            RatFunc::one()
        );
    }

    #[test]
    fn closed_forms_match_general_product() {
        for m in 1..=5 {
            assert_eq!(
                q_column(m).unwrap(),
                q_dim(&YoungDiagram::column(m)),
                "column closed form at m={}",
                m
            );
        }
        for m in 2..=5 {
            assert_eq!(
                q_hook21(m).unwrap(),
                q_dim(&YoungDiagram::hook21(m).unwrap()),
                "hook closed form at m={}",
                m
            );
        }
    }

    #[test]
    fn column_degenerations() {
        // m=2 at r=-q^3 vanishes (the Sp(1) degeneration)
        assert!(q_column(2).unwrap().substitute_r_qpow(-1, 3).unwrap().is_zero());
        // hook at m=2 (= Q_[2]) vanishes at r=q^-3
        assert!(q_hook21(2).unwrap().substitute_r_qpow(1, -3).unwrap().is_zero());
    }

    #[test]
    fn qhat_values() {
        let x = Scalar::sym_r(); // formal x
        assert_eq!(q_hat(&YoungDiagram::empty(), &x).unwrap(), Scalar::one());
        assert_eq!(q_hat(&YoungDiagram::column(1), &x).unwrap(), x);
        for n in [3i64, 4, 5] {
            let xn = Scalar::from_i64(n);
            assert_eq!(
                q_hat(&YoungDiagram::column(2), &xn).unwrap(),
                Scalar::from_rational(q_from(n * (n - 1)) / q_from(2))
            );
            assert_eq!(
                q_hat(&YoungDiagram::new(vec![2]).unwrap(), &xn).unwrap(),
                Scalar::from_rational(q_from(n * (n + 1)) / q_from(2) - q_from(1))
            );
        }
    }

    #[test]
    fn qhat_is_the_q_to_one_limit() {
        // evaluate Q_lambda at r = q^{x-1} for integer x and take q -> 1;
        // compare with the closed form
        for (rows, x) in [(vec![1], 4i64), (vec![1, 1], 5), (vec![2], 3), (vec![2, 1], 4)] {
            let l = YoungDiagram::new(rows).unwrap();
            let limit = q_dim(&l)
                .substitute_r_qpow(1, x - 1)
                .unwrap()
                .limit_q_to_one()
                .unwrap();
            let closed = q_hat(&l, &Scalar::from_i64(x)).unwrap();
            assert_eq!(Scalar::from_rational(limit), closed, "lambda = {}", l);
        }
    }

    #[test]
    fn symmetries_pass_small() {
        for s in ["[1]", "[2]", "[1,1]", "[2,1]", "[3]", "[1,1,1]", "[2,2]"] {
            let l = YoungDiagram::parse(s).unwrap();
            let rep = verify_symmetries(&l);
            for (name, ok) in &rep.entries {
                assert!(ok, "symmetry failed: {}", name);
            }
        }
    }
}
