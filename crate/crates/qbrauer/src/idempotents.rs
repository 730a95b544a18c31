//! Antisymmetrizer idempotents built by the inductive formula, the three-way
//! splitting of P ⊗ 1, the Hecke-quotient antisymmetrizers, and the
//! nilpotent elements at roots of unity.

use crate::bmw::{BmwContext, BmwElement};
use crate::error::{Error, Result};
use crate::qdim::{q_column, YoungDiagram};
use crate::scalars::{Params, Scalar, SpecPoint};

/// A labeled idempotent together with its Markov trace.
#[derive(Clone, Debug)]
pub struct IdempotentRecord {
    pub label: YoungDiagram,
    pub n: usize,
    pub element: BmwElement,
    pub trace: Scalar,
}

/// The three parts of P_{[1^m]} ⊗ 1: the antisymmetrizer one level up, the
/// hook part, and the lower part landing back in the [1^{m-1}] component.
#[derive(Clone, Debug)]
pub struct SplitParts {
    pub top: IdempotentRecord,
    pub hook: BmwElement,
    pub lower: BmwElement,
}

fn check_antisym_preconditions(params: &Params, m: usize) -> Result<()> {
    for k in 1..=m as i64 {
        if params.q_int(k).is_zero() {
            return Err(Error::PreconditionFailed(format!(
                "[{}] vanishes at the working parameters",
                k
            )));
        }
        let a = params.r.add(&params.q.pow(1 - 2 * k)?);
        if a.is_zero() {
            return Err(Error::PreconditionFailed(format!(
                "r + q^(1-2*{}) vanishes at the working parameters",
                k
            )));
        }
    }
    // the recursion denominators 1 + r q^{1-2k} = q^{1-2k}(r + q^{2k-1}),
    // used for k = 1 .. m-1
    for k in 1..m as i64 {
        let b = params.r.add(&params.q.pow(2 * k - 1)?);
        if b.is_zero() {
            return Err(Error::PreconditionFailed(format!(
                "r + q^(2*{}-1) vanishes at the working parameters",
                k
            )));
        }
    }
    Ok(())
}

/// The antisymmetrizer P_{[1^m]} in the m-strand algebra, by the inductive
/// formula P_{[1^{m+1}]} = (1/[m+1]) (q^m P - [m] P T_m P
/// - ([m]/(1 + r q^{1-2m})) P E_m P).
pub fn antisym(ctx: &BmwContext, m: usize) -> Result<IdempotentRecord> {
    if m == 0 {
        return Err(Error::PreconditionFailed("antisym needs m >= 1".into()));
    }
    check_antisym_preconditions(ctx.params(), m)?;
    let element = antisym_element(ctx, m)?;
    let trace = ctx.markov_trace(&element)?;
    Ok(IdempotentRecord {
        label: YoungDiagram::column(m),
        n: m,
        element,
        trace,
    })
}

fn antisym_element(ctx: &BmwContext, m: usize) -> Result<BmwElement> {
    let params = ctx.params();
    let mut p = BmwElement::one(1);
    for j in 1..m as i64 {
        let n = j as usize + 1;
        let pj = p.pad(1);
        let t = ctx.gen_t(j as usize, n, 1)?;
        let e = ctx.gen_e(j as usize, n)?;
        let ptp = ctx.mul3(&pj, &t, &pj)?;
        let pep = ctx.mul3(&pj, &e, &pj)?;
        let mj = params.q_int(j);
        let denom = Scalar::one().add(&params.r.mul(&params.q.pow(1 - 2 * j)?));
        if denom.is_zero() {
            return Err(Error::PreconditionFailed(format!(
                "1 + r q^(1-2*{}) vanishes at the working parameters",
                j
            )));
        }
        // the E-term coefficient carries a factor z = q - q^{-1}: it is
        // forced by P_{[1^{m+1}]} E_m = 0 (equivalently by the spectral
        // projection of T onto the -q^{-1} eigenspace at m = 1)
        let coeff_e = mj.mul(ctx.z()).div(&denom)?;
        let sum = pj
            .scale(&params.q.pow(j)?)
            .sub(&ptp.scale(&mj))?
            .sub(&pep.scale(&coeff_e))?;
        let inv = params.q_int(j + 1).inv().map_err(|_| {
            Error::PreconditionFailed(format!("[{}] vanishes at the working parameters", j + 1))
        })?;
        p = sum.scale(&inv);
    }
    Ok(p)
}

/// Split P_{[1^m]} ⊗ 1 into P_{[1^{m+1}]} + P_{[2,1^{m-1}]} + P^{(m+1)}_{[1^{m-1}]}
/// inside the (m+1)-strand algebra. The third part is
/// (Q_{[1^{m-1}]}/Q_{[1^m]}) P E_m P.
pub fn split(ctx: &BmwContext, m: usize) -> Result<SplitParts> {
    if m == 0 {
        return Err(Error::PreconditionFailed("split needs m >= 1".into()));
    }
    let p = antisym(ctx, m)?;
    let top = antisym(ctx, m + 1)?;
    let pp = p.element.pad(1);
    let e = ctx.gen_e(m, m + 1)?;
    let pep = ctx.mul3(&pp, &e, &pp)?;
    let ratio = ctx
        .params()
        .eval(&q_column(m - 1)?.div(&q_column(m)?)?)?;
    let lower = pep.scale(&ratio);
    let hook = pp.sub(&top.element)?.sub(&lower)?;
    Ok(SplitParts { top, hook, lower })
}

/// Project onto the Hecke quotient: delete every basis diagram that is not
/// a permutation (those span the ideal the quotient kills).
pub fn hecke_project(a: &BmwElement) -> BmwElement {
    let coeffs = a
        .coeffs()
        .iter()
        .filter(|(d, _)| d.is_permutation())
        .map(|(d, c)| (d.clone(), c.clone()))
        .collect();
    BmwElement::from_coeffs(a.n(), coeffs)
}

/// Product in the Hecke quotient.
pub fn hecke_mul(ctx: &BmwContext, a: &BmwElement, b: &BmwElement) -> Result<BmwElement> {
    Ok(hecke_project(&ctx.mul(a, b)?))
}

fn hecke_mul3(
    ctx: &BmwContext,
    a: &BmwElement,
    b: &BmwElement,
    c: &BmwElement,
) -> Result<BmwElement> {
    hecke_mul(ctx, &hecke_mul(ctx, a, b)?, c)
}

/// The Hecke-quotient antisymmetrizer by the recursion
/// P~_{m+1} = (1/[m+1]) (q^m P~ - [m] P~ T~_m P~).
pub fn hecke_antisym(ctx: &BmwContext, m: usize) -> Result<BmwElement> {
    if m == 0 {
        return Err(Error::PreconditionFailed("hecke_antisym needs m >= 1".into()));
    }
    let params = ctx.params();
    for k in 1..=m as i64 {
        if params.q_int(k).is_zero() {
            return Err(Error::PreconditionFailed(format!(
                "[{}] vanishes at the working parameters",
                k
            )));
        }
    }
    let mut p = BmwElement::one(1);
    for j in 1..m as i64 {
        let n = j as usize + 1;
        let pj = p.pad(1);
        let t = hecke_project(&ctx.gen_t(j as usize, n, 1)?);
        let ptp = hecke_mul3(ctx, &pj, &t, &pj)?;
        let sum = pj.scale(&params.q.pow(j)?).sub(&ptp.scale(&params.q_int(j)))?;
        p = sum.scale(&params.q_int(j + 1).inv()?);
    }
    Ok(p)
}

/// Specialize every coefficient of a symbolic element at a point.
pub fn specialize_element(a: &BmwElement, point: &SpecPoint) -> Result<BmwElement> {
    let mut coeffs = std::collections::BTreeMap::new();
    for (d, c) in a.coeffs() {
        let v = c.specialize(point)?;
        if !v.is_zero() {
            coeffs.insert(d.clone(), v);
        }
    }
    Ok(BmwElement::from_coeffs(a.n(), coeffs))
}

/// The nilpotent element N_l = [l] P_{[1^l]}, computed symbolically and
/// specialized last so that the simple pole of P at [l] = 0 cancels.
pub fn nilpotent(l: usize, point: &SpecPoint) -> Result<BmwElement> {
    if l < 2 {
        return Err(Error::PreconditionFailed("nilpotent needs l >= 2".into()));
    }
    match point.q_squared_order() {
        Some(o) if o as usize == l => {}
        Some(o) => {
            return Err(Error::PreconditionFailed(format!(
                "q^2 has order {} at this point, not {}",
                o, l
            )))
        }
        None => {
            return Err(Error::PreconditionFailed(
                "q is not a root of unity at this point".into(),
            ))
        }
    }
    // Q_{[1^k]} must be nonzero at the point for k < l
    let params = Params::at(point)?;
    for k in 1..l {
        let v = params.eval(&q_column(k)?)?;
        if v.is_zero() {
            return Err(Error::PreconditionFailed(format!(
                "Q_[1^{}] vanishes at this point",
                k
            )));
        }
    }
    let sym = BmwContext::symbolic();
    let p = antisym_element(&sym, l)?;
    let scaled = p.scale(&sym.params().q_int(l as i64));
    specialize_element(&scaled, point)
}

/// Coefficients (ascending, monic) of the minimal polynomial of
/// A = P~_1 P~_2 P~_1 acting in the Hecke quotient of the 3-strand algebra,
/// where P~_i is the rank-2 antisymmetrizer on strands (i, i+1).
pub fn hecke_a_minimal_poly(ctx: &BmwContext) -> Result<Vec<Scalar>> {
    let params = ctx.params();
    let two = params.q_int(2).inv()?;
    // P~_i = (1/[2]) (q - T~_i) in D_3
    let p1 = BmwElement::one(3)
        .scale(&params.q)
        .sub(&hecke_project(&ctx.gen_t(1, 3, 1)?))?
        .scale(&two);
    let p2 = BmwElement::one(3)
        .scale(&params.q)
        .sub(&hecke_project(&ctx.gen_t(2, 3, 1)?))?
        .scale(&two);
    let a = hecke_mul3(ctx, &p1, &p2, &p1)?;

    // collect the powers A^0, A^1, ... as coefficient vectors on the
    // 6 permutation diagrams and find the first linear dependence
    let basis: Vec<_> = crate::diagrams::all_diagrams(3)
        .into_iter()
        .filter(|d| d.is_permutation())
        .collect();
    let to_vec = |el: &BmwElement| -> Vec<Scalar> {
        basis.iter().map(|d| el.coeff(d)).collect()
    };
    let mut powers: Vec<Vec<Scalar>> = vec![to_vec(&BmwElement::one(3))];
    let mut cur = BmwElement::one(3);
    loop {
        cur = hecke_mul(ctx, &cur, &a)?;
        powers.push(to_vec(&cur));
        if let Some(coeffs) = linear_dependence(&powers)? {
            return Ok(coeffs);
        }
        if powers.len() > basis.len() + 1 {
            return Err(Error::ConstraintViolated(
                "no linear dependence among powers (internal error)".into(),
            ));
        }
    }
}

/// If the last row of `rows` is a linear combination of the previous ones,
/// return the monic polynomial coefficients c_0..c_{k-1}, 1 with
/// sum_i c_i rows[i] + rows[k] = 0; otherwise None.
fn linear_dependence(rows: &[Vec<Scalar>]) -> Result<Option<Vec<Scalar>>> {
    let k = rows.len() - 1;
    let dim = rows[0].len();
    // solve rows[0..k]^T x = -rows[k]^T by Gaussian elimination on the
    // augmented (dim x (k+1)) system
    let mut m: Vec<Vec<Scalar>> = (0..dim)
        .map(|j| {
            let mut row: Vec<Scalar> = (0..k).map(|i| rows[i][j].clone()).collect();
            row.push(rows[k][j].neg());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..k {
        if let Some(pr) = (r..dim).find(|&i| !m[i][c].is_zero()) {
            m.swap(r, pr);
            let inv = m[r][c].inv()?;
            for x in m[r].iter_mut() {
                *x = x.mul(&inv);
            }
            for i in 0..dim {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for cc in 0..=k {
                        let t = m[r][cc].mul(&f);
                        m[i][cc] = m[i][cc].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    // consistent iff no row has zero lhs but nonzero rhs
    for i in r..dim {
        if !m[i][k].is_zero() {
            return Ok(None);
        }
    }
    let mut sol = vec![Scalar::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        sol[c] = m[row][k].clone();
    }
    sol.push(Scalar::one());
    Ok(Some(sol))
}

/// Evaluate an ascending-coefficient polynomial at a scalar.
pub fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdim::q_dim;
    use crate::scalars::{unipoly::q_from, CycR, RatFunc};

    fn sym() -> BmwContext {
        BmwContext::symbolic()
    }

    #[test]
    fn antisym_two_matches_closed_form() {
        let ctx = sym();
        let p = antisym(&ctx, 2).unwrap();
        // (1/[2]) (q - T_1 - (z/(1 + r q^{-1})) E_1)
        let params = ctx.params();
        let two_inv = params.q_int(2).inv().unwrap();
        let e_coeff = ctx
            .z()
            .div(&Scalar::one().add(&params.r.mul(&params.q.pow(-1).unwrap())))
            .unwrap();
        let want = BmwElement::one(2)
            .scale(&params.q)
            .sub(&ctx.gen_t(1, 2, 1).unwrap())
            .unwrap()
            .sub(&ctx.gen_e(1, 2).unwrap().scale(&e_coeff))
            .unwrap()
            .scale(&two_inv);
        assert_eq!(p.element.coeffs(), want.coeffs());
    }

    #[test]
    fn antisym_is_idempotent_and_traced() {
        let ctx = sym();
        for m in 1..=3usize {
            let p = antisym(&ctx, m).unwrap();
            let sq = ctx.mul(&p.element, &p.element).unwrap();
            assert_eq!(sq.coeffs(), p.element.coeffs(), "P^2 = P at m={}", m);
            // trace = Q_{[1^m]} / dX^m
            let mut want = q_dim(&YoungDiagram::column(m));
            for _ in 0..m {
                want = want.div(ctx.dx().as_sym().unwrap()).unwrap();
            }
            assert_eq!(p.trace, Scalar::Sym(want), "trace at m={}", m);
        }
    }

    #[test]
    fn antisym_eigen_relations() {
        let ctx = sym();
        for m in 2..=3usize {
            let p = antisym(&ctx, m).unwrap().element;
            let minus_qinv = ctx.params().q.pow(-1).unwrap().neg();
            for i in 1..m {
                let t = ctx.gen_t(i, m, 1).unwrap();
                let left = ctx.mul(&t, &p).unwrap();
                let right = ctx.mul(&p, &t).unwrap();
                let want = p.scale(&minus_qinv);
                assert_eq!(left.coeffs(), want.coeffs(), "T_{} P at m={}", i, m);
                assert_eq!(right.coeffs(), want.coeffs(), "P T_{} at m={}", i, m);
                let e = ctx.gen_e(i, m).unwrap();
                let pep = ctx.mul3(&p, &e, &p).unwrap();
                assert!(pep.is_zero(), "P E_{} P = 0 at m={}", i, m);
            }
        }
    }

    #[test]
    fn split_parts_behave() {
        let ctx = sym();
        for m in 1..=2usize {
            let s = split(&ctx, m).unwrap();
            let p = antisym(&ctx, m).unwrap().element.pad(1);
            let sum = s.top.element.add(&s.hook).unwrap().add(&s.lower).unwrap();
            assert_eq!(sum.coeffs(), p.coeffs(), "sum at m={}", m);
            for (name, part) in [("top", &s.top.element), ("hook", &s.hook), ("lower", &s.lower)]
            {
                let sq = ctx.mul(part, part).unwrap();
                assert_eq!(sq.coeffs(), part.coeffs(), "{}^2 at m={}", name, m);
            }
            for (a, b) in [
                (&s.top.element, &s.hook),
                (&s.top.element, &s.lower),
                (&s.hook, &s.lower),
            ] {
                assert!(ctx.mul(a, b).unwrap().is_zero(), "orthogonality at m={}", m);
                assert!(ctx.mul(b, a).unwrap().is_zero(), "orthogonality at m={}", m);
            }
        }
        // m=1: the hook part is the q-eigenprojection of T_1
        let s = split(&ctx, 1).unwrap();
        let t = ctx.gen_t(1, 2, 1).unwrap();
        let tq = ctx.mul(&t, &s.hook).unwrap();
        assert_eq!(
            tq.coeffs(),
            s.hook.scale(&ctx.params().q).coeffs(),
            "T_1 acts by q on the hook part"
        );
    }

    #[test]
    fn hecke_antisym_recursion() {
        let ctx = sym();
        let p2 = hecke_antisym(&ctx, 2).unwrap();
        // (1/[2])(q - T~_1)
        let want = BmwElement::one(2)
            .scale(&ctx.params().q)
            .sub(&hecke_project(&ctx.gen_t(1, 2, 1).unwrap()))
            .unwrap()
            .scale(&ctx.params().q_int(2).inv().unwrap());
        assert_eq!(p2.coeffs(), want.coeffs());
        for m in 2..=3usize {
            let p = hecke_antisym(&ctx, m).unwrap();
            let sq = hecke_mul(&ctx, &p, &p).unwrap();
            assert_eq!(sq.coeffs(), p.coeffs(), "idempotent in quotient, m={}", m);
        }
    }

    #[test]
    fn hecke_splitting_identity() {
        // At m=2, with P~ = P~_[1^2] padded and P~_[21] = P~ - P~_[1^3]:
        //   P~ T~_2 P~_[21] T~_2 P~ = (q^4/[2]^2)(P~ - P~_[1^3]),
        //   ([1][3]/[2]^2)(P~ - P~_[1^3]) = ([1]/[2]) P~ (T~_2 + q^{-1}) P~.
        let ctx = sym();
        let params = ctx.params();
        let p = hecke_antisym(&ctx, 2).unwrap().pad(1);
        let p3 = hecke_antisym(&ctx, 3).unwrap();
        let p21 = p.sub(&p3).unwrap();
        let t2 = hecke_project(&ctx.gen_t(2, 3, 1).unwrap());
        let lhs = hecke_mul(
            &ctx,
            &hecke_mul3(&ctx, &p, &t2, &p21).unwrap(),
            &hecke_mul(&ctx, &t2, &p).unwrap(),
        )
        .unwrap();
        let two_sq_inv = params.q_int(2).pow(2).unwrap().inv().unwrap();
        let sandwich = p21.scale(&params.q.pow(4).unwrap().mul(&two_sq_inv));
        assert_eq!(lhs.coeffs(), sandwich.coeffs());
        let c = params
            .q_int(1)
            .mul(&params.q_int(3))
            .mul(&two_sq_inv);
        let split_form = p21.scale(&c);
        let alt = hecke_mul3(
            &ctx,
            &p,
            &t2.add(&BmwElement::one(3).scale(&params.q.pow(-1).unwrap()))
                .unwrap(),
            &p,
        )
        .unwrap()
        .scale(&params.q_int(1).div(&params.q_int(2)).unwrap());
        assert_eq!(split_form.coeffs(), alt.coeffs());
    }

    #[test]
    fn nilpotent_at_sixth_root() {
        // q = zeta_6 (so q^2 is a primitive 3rd root), r = 5/7
        let point = SpecPoint::Cyclotomic {
            order: 6,
            q_exp: 1,
            r: CycR::Rational(q_from(5) / q_from(7)),
        };
        let n3 = nilpotent(3, &point).unwrap();
        assert!(!n3.is_zero());
        let ctx = BmwContext::new(Params::at(&point).unwrap()).unwrap();
        let sq = ctx.mul(&n3, &n3).unwrap();
        assert!(sq.is_zero(), "N_3^2 = 0");
        let tr = ctx.markov_trace(&n3).unwrap();
        assert!(!tr.is_zero(), "tr(N_3) != 0");
        // wrong order is rejected
        assert!(matches!(
            nilpotent(4, &point),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn minimal_poly_of_p1p2p1_has_the_special_root() {
        let ctx = sym();
        let coeffs = hecke_a_minimal_poly(&ctx).unwrap();
        // the nonzero non-unit eigenvalue is 1/(q+q^{-1})^2 = 1/[2]^2
        let c = ctx.params().q_int(2).pow(2).unwrap().inv().unwrap();
        assert!(eval_poly(&coeffs, &c).is_zero(), "min poly vanishes at [2]^-2");
        // sanity: 0 and 1 are also roots (A is a product of projections
        // with a common fixed vector)
        assert!(eval_poly(&coeffs, &Scalar::zero()).is_zero());
        assert!(eval_poly(&coeffs, &Scalar::one()).is_zero());
        assert_eq!(coeffs.len(), 4, "min poly degree 3");
    }

    #[test]
    fn preconditions_name_the_failing_k() {
        // r = -q^3 kills 1 + r q^{-3} (the j=2 recursion denominator)
        let point = SpecPoint::RQPow { sign: -1, k: 3 };
        let params = Params::at(&point).unwrap();
        let ctx = BmwContext::new(params).unwrap();
        match antisym(&ctx, 3) {
            Err(Error::PreconditionFailed(msg)) => {
                assert!(msg.contains('2'), "message names k: {}", msg)
            }
            other => panic!("expected PreconditionFailed, got {:?}", other.map(|r| r.label)),
        }
        // q a primitive 4th root makes [2] = 0
        let point = SpecPoint::Cyclotomic {
            order: 4,
            q_exp: 1,
            r: CycR::Rational(q_from(5)),
        };
        let ctx = BmwContext::new(Params::at(&point).unwrap()).unwrap();
        match antisym(&ctx, 2) {
            Err(Error::PreconditionFailed(msg)) => {
                assert!(msg.contains("[2]"), "message names [2]: {}", msg)
            }
            other => panic!("expected PreconditionFailed, got {:?}", other.map(|r| r.label)),
        }
        let _ = RatFunc::one();
    }
}
