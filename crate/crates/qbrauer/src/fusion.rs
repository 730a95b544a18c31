//! Grothendieck-semiring combinatorics: permissible Young diagrams for each
//! category type, tensor-with-vector rules, and Bratteli multiplicity
//! counting by walk enumeration.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::qdim::YoungDiagram;

/// The labeling set of simple objects for one category type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelSet {
    /// Diagrams with at most N boxes in the first two columns.
    ON(u32),
    /// Diagrams with at most N rows.
    SpN(u32),
    /// All diagrams (the generic / infinite-rank case).
    OInf,
    /// Orthogonal fusion: column bound N, and at most M boxes in the first
    /// two rows.
    FusionO(u32, u32),
    /// Ortho-symplectic fusion: column bound N, and at most M columns.
    FusionOSp(u32, u32),
    /// Symplectic fusion: at most N rows and at most M columns.
    FusionSp(u32, u32),
}

impl LabelSet {
    /// Parse literals like `O(3)`, `Sp(2)`, `O(inf)`, `fusion-O(3,4)`,
    /// `fusion-OSp(3,4)`, `fusion-Sp(2,5)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::MalformedExpression(format!("unrecognized label set `{}`", s));
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums: Vec<&str> = args.split(',').map(str::trim).collect();
        let one = |v: &Vec<&str>| -> Result<u32> {
            if v.len() != 1 {
                return Err(bad());
            }
            v[0].parse().map_err(|_| bad())
        };
        let two = |v: &Vec<&str>| -> Result<(u32, u32)> {
            if v.len() != 2 {
                return Err(bad());
            }
            Ok((v[0].parse().map_err(|_| bad())?, v[1].parse().map_err(|_| bad())?))
        };
        match head.trim() {
            "O" => {
                if nums.len() == 1 && matches!(nums[0], "inf" | "infinity" | "∞") {
                    Ok(LabelSet::OInf)
                } else {
                    Ok(LabelSet::ON(one(&nums)?))
                }
            }
            "Sp" => Ok(LabelSet::SpN(one(&nums)?)),
            "fusion-O" => {
                let (n, m) = two(&nums)?;
                Ok(LabelSet::FusionO(n, m))
            }
            "fusion-OSp" => {
                let (n, m) = two(&nums)?;
                Ok(LabelSet::FusionOSp(n, m))
            }
            "fusion-Sp" => {
                let (n, m) = two(&nums)?;
                Ok(LabelSet::FusionSp(n, m))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelSet::ON(n) => write!(f, "O({})", n),
            LabelSet::SpN(n) => write!(f, "Sp({})", n),
            LabelSet::OInf => write!(f, "O(inf)"),
            LabelSet::FusionO(n, m) => write!(f, "fusion-O({},{})", n, m),
            LabelSet::FusionOSp(n, m) => write!(f, "fusion-OSp({},{})", n, m),
            LabelSet::FusionSp(n, m) => write!(f, "fusion-Sp({},{})", n, m),
        }
    }
}

/// Whether `lambda` belongs to the labeling set.
pub fn permissible(lambda: &YoungDiagram, set: &LabelSet) -> bool {
    let c1 = lambda.col(1) as u32;
    let c2 = lambda.col(2) as u32;
    let r1 = lambda.row(1) as u32;
    let r2 = lambda.row(2) as u32;
    match set {
        LabelSet::ON(n) => c1 + c2 <= *n,
        LabelSet::SpN(n) => c1 <= *n,
        LabelSet::OInf => true,
        LabelSet::FusionO(n, m) => c1 + c2 <= *n && r1 + r2 <= *m,
        LabelSet::FusionOSp(n, m) => c1 + c2 <= *n && r1 <= *m,
        LabelSet::FusionSp(n, m) => c1 <= *n && r1 <= *m,
    }
}

/// All diagrams obtained from `lambda` by adding or removing one box,
/// restricted to the permissible set. The boundary identities of each
/// category type follow from the permissibility filter alone.
pub fn tensor_with_vector(lambda: &YoungDiagram, set: &LabelSet) -> Result<Vec<YoungDiagram>> {
    if !permissible(lambda, set) {
        return Err(Error::NotPermissible(format!(
            "{} is not a label for {}",
            lambda, set
        )));
    }
    let rows = lambda.rows();
    let mut out: Vec<YoungDiagram> = Vec::new();
    // add a box to row i (1-based), including a new row at the bottom
    for i in 1..=rows.len() + 1 {
        let mut r: Vec<usize> = rows.to_vec();
        if i <= rows.len() {
            r[i - 1] += 1;
        } else {
            r.push(1);
        }
        if let Ok(mu) = YoungDiagram::new(r) {
            if permissible(&mu, set) && !out.contains(&mu) {
                out.push(mu);
            }
        }
    }
    // remove a box from row i
    for i in 1..=rows.len() {
        let mut r: Vec<usize> = rows.to_vec();
        r[i - 1] -= 1;
        if let Ok(mu) = YoungDiagram::new(r) {
            if permissible(&mu, set) && !out.contains(&mu) {
                out.push(mu);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Multiplicities of each simple object in the n-th tensor power of the
/// vector object, as counts of length-n walks from the empty diagram in
/// the branching graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub n: usize,
    pub set: LabelSet,
    pub entries: BTreeMap<YoungDiagram, u64>,
}

impl MultiplicityTable {
    /// Sum of squared multiplicities = dimension of the semisimple quotient.
    pub fn sum_of_squares(&self) -> u64 {
        self.entries.values().map(|&m| m * m).sum()
    }
}

pub fn multiplicities(n: usize, set: &LabelSet) -> Result<MultiplicityTable> {
    let mut cur: BTreeMap<YoungDiagram, u64> = BTreeMap::new();
    cur.insert(YoungDiagram::empty(), 1);
    for _ in 0..n {
        let mut next: BTreeMap<YoungDiagram, u64> = BTreeMap::new();
        for (lambda, &mult) in &cur {
            for mu in tensor_with_vector(lambda, set)? {
                *next.entry(mu).or_insert(0) += mult;
            }
        }
        cur = next;
    }
    Ok(MultiplicityTable {
        n,
        set: set.clone(),
        entries: cur,
    })
}

/// (2n-1)!! — the generic dimension of the n-strand algebra.
pub fn double_factorial_odd(n: usize) -> u64 {
    (0..n).map(|k| 2 * k as u64 + 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yd(s: &str) -> YoungDiagram {
        YoungDiagram::parse(s).unwrap()
    }

    #[test]
    fn parse_label_sets() {
        assert_eq!(LabelSet::parse("O(3)").unwrap(), LabelSet::ON(3));
        assert_eq!(LabelSet::parse("Sp(2)").unwrap(), LabelSet::SpN(2));
        assert_eq!(LabelSet::parse("O(inf)").unwrap(), LabelSet::OInf);
        assert_eq!(
            LabelSet::parse("fusion-Sp(2,5)").unwrap(),
            LabelSet::FusionSp(2, 5)
        );
        assert!(LabelSet::parse("U(3)").is_err());
    }

    #[test]
    fn permissibility_rules() {
        assert!(!permissible(&yd("[2,1]"), &LabelSet::ON(2)));
        assert!(permissible(&yd("[2,1]"), &LabelSet::ON(3)));
        assert!(!permissible(&YoungDiagram::column(3), &LabelSet::SpN(2)));
        for k in 0..=7usize {
            let row = if k == 0 { yd("[]") } else { YoungDiagram::new(vec![k]).unwrap() };
            assert_eq!(permissible(&row, &LabelSet::FusionSp(2, 5)), k <= 5);
        }
    }

    #[test]
    fn tensor_rules_and_boundaries() {
        // [1] under O(N), N >= 3: {[], [2], [1,1]}
        let got = tensor_with_vector(&yd("[1]"), &LabelSet::ON(3)).unwrap();
        assert_eq!(got, vec![yd("[]"), yd("[1,1]"), yd("[2]")]);
        // [1^N] under O(N) -> {[1^{N-1}]}
        for n in 2..=4u32 {
            let got = tensor_with_vector(&YoungDiagram::column(n as usize), &LabelSet::ON(n)).unwrap();
            assert_eq!(got, vec![YoungDiagram::column(n as usize - 1)]);
        }
        // [1^N] under Sp(N) -> {[2,1^{N-1}], [1^{N-1}]}
        for n in 2..=4u32 {
            let got = tensor_with_vector(&YoungDiagram::column(n as usize), &LabelSet::SpN(n)).unwrap();
            let mut want = vec![
                YoungDiagram::column(n as usize - 1),
                YoungDiagram::hook21(n as usize + 1).unwrap(),
            ];
            want.sort();
            assert_eq!(got, want);
        }
        assert!(tensor_with_vector(&yd("[2,1]"), &LabelSet::ON(2)).is_err());
    }

    #[test]
    fn multiplicity_tables() {
        let t0 = multiplicities(0, &LabelSet::OInf).unwrap();
        assert_eq!(t0.entries.get(&YoungDiagram::empty()), Some(&1));
        // generic n=3: [1]:3, [2,1]:2, [1^3]:1, [3]:1
        let t3 = multiplicities(3, &LabelSet::OInf).unwrap();
        let want: BTreeMap<_, _> = [
            (yd("[1]"), 3u64),
            (yd("[2,1]"), 2),
            (yd("[1,1,1]"), 1),
            (yd("[3]"), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(t3.entries, want);
        assert_eq!(t3.sum_of_squares(), 15);
        // O(2) n=3: [1]:3, [3]:1; sum of squares 10
        let t = multiplicities(3, &LabelSet::ON(2)).unwrap();
        let want: BTreeMap<_, _> = [(yd("[1]"), 3u64), (yd("[3]"), 1)].into_iter().collect();
        assert_eq!(t.entries, want);
        assert_eq!(t.sum_of_squares(), 10);
    }

    #[test]
    fn generic_sum_of_squares_is_double_factorial() {
        for n in 0..=6 {
            let t = multiplicities(n, &LabelSet::OInf).unwrap();
            assert_eq!(t.sum_of_squares(), double_factorial_odd(n), "n={}", n);
        }
    }

    #[test]
    fn recurrence_and_parity() {
        for set in [
            LabelSet::OInf,
            LabelSet::ON(2),
            LabelSet::ON(3),
            LabelSet::SpN(1),
            LabelSet::FusionSp(1, 3),
        ] {
            for n in 0..=5usize {
                let t = multiplicities(n, &set).unwrap();
                for (l, &m) in &t.entries {
                    assert!(m > 0);
                    assert_eq!(l.size() % 2, n % 2, "parity at n={} {}", n, l);
                }
                // recurrence
                let tn = multiplicities(n + 1, &set).unwrap();
                let mut acc: BTreeMap<YoungDiagram, u64> = BTreeMap::new();
                for (l, &m) in &t.entries {
                    for mu in tensor_with_vector(l, &set).unwrap() {
                        *acc.entry(mu).or_insert(0) += m;
                    }
                }
                assert_eq!(acc, tn.entries, "recurrence at n={} for {}", n, set);
            }
        }
    }
}
