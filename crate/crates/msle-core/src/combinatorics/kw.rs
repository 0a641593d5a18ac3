//! The Kenyon–Wilson relation and the change-of-basis matrices M, M^{-1}.

use serde::{Deserialize, Serialize};

use super::link_pattern::{LinkPattern, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

/// True iff every link of `b` joins an opener of `a` to a closer of `a`.
/// Equivalently: there is a permutation sigma with b = {{a_i, b_sigma(i)}}
/// where (a_i, b_i) are the links of `a`.
pub fn kw_related(a: &LinkPattern, b: &LinkPattern) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(b.links()
        .iter()
        .all(|&(c, d)| a.is_opener(c) != a.is_opener(d)))
}

/// An integer matrix indexed by the canonical link-pattern order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedIntMatrix {
    pub n: usize,
    pub order: Vec<LinkPattern>,
    pub entries: Vec<Vec<i64>>,
}

impl SignedIntMatrix {
    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// Entry by pattern pair; both must belong to the matrix order.
    pub fn get(&self, row: &LinkPattern, col: &LinkPattern) -> Option<i64> {
        let i = self.order.iter().position(|p| p == row)?;
        let j = self.order.iter().position(|p| p == col)?;
        Some(self.entries[i][j])
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let d = self.dim();
        let mut entries = vec![vec![0i64; d]; d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    entries[i][j] += a * other.entries[k][j];
                }
            }
        }
        Self {
            n: self.n,
            order: self.order.clone(),
            entries,
        }
    }

    pub fn identity(n: usize, order: Vec<LinkPattern>) -> Self {
        let d = order.len();
        let entries = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        Self { n, order, entries }
    }
}

/// The 0/1 incidence matrix M of the KW relation in the canonical order.
/// Since the canonical order is descending in the nesting partial order,
/// M comes out unit lower triangular.
pub fn incidence_matrix(n: usize) -> Result<SignedIntMatrix> {
    incidence_matrix_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn incidence_matrix_with_cap(n: usize, cap: usize) -> Result<SignedIntMatrix> {
    let order = LinkPattern::enumerate_with_cap(n, cap)?;
    let entries = order
        .iter()
        .map(|a| {
            order
                .iter()
                .map(|b| Ok(i64::from(kw_related(a, b)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SignedIntMatrix { n, order, entries })
}

/// Exact integer inverse of M by forward substitution on its unit lower
/// triangular form. Entries equal signed cover-inclusive Dyck tiling counts.
pub fn inverse_matrix(n: usize) -> Result<SignedIntMatrix> {
    inverse_matrix_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn inverse_matrix_with_cap(n: usize, cap: usize) -> Result<SignedIntMatrix> {
    let m = incidence_matrix_with_cap(n, cap)?;
    let d = m.dim();
    let mut inv = vec![vec![0i64; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut v = i64::from(i == j);
            for k in j..i {
                v -= m.entries[i][k] * inv[k][j];
            }
            inv[i][j] = v;
        }
    }
    Ok(SignedIntMatrix {
        n,
        order: m.order,
        entries: inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::dyck::DyckPath;

    fn pat(s: &str) -> LinkPattern {
        s.parse().unwrap()
    }

    /// Recursive characterization: pick an up-wedge of b at j; then a KW b
    /// iff a has a wedge at j and the shortened paths are KW related.
    fn kw_recursive(a: &DyckPath, b: &DyckPath) -> bool {
        let n = a.n();
        if n == 0 {
            return true;
        }
        let j = (1..2 * n)
            .find(|&j| b.has_up_wedge(j))
            .expect("every non-empty Dyck path has an up-wedge");
        a.has_wedge(j)
            && kw_recursive(
                &a.remove_wedge(j).unwrap(),
                &b.remove_up_wedge(j).unwrap(),
            )
    }

    #[test]
    fn kw_reflexive_and_agrees_with_recursion() {
        for n in 0..=4 {
            for a in LinkPattern::enumerate(n).unwrap() {
                for b in LinkPattern::enumerate(n).unwrap() {
                    let direct = kw_related(&a, &b).unwrap();
                    assert_eq!(direct, kw_recursive(&a.to_dyck(), &b.to_dyck()));
                    if a == b {
                        assert!(direct);
                    }
                }
            }
        }
    }

    #[test]
    fn kw_implies_leq_and_closure_is_leq() {
        for n in 0..=5 {
            let ps = LinkPattern::enumerate(n).unwrap();
            let d = ps.len();
            let mut reach = vec![vec![false; d]; d];
            for i in 0..d {
                for j in 0..d {
                    if kw_related(&ps[i], &ps[j]).unwrap() {
                        assert!(ps[i].to_dyck().leq(&ps[j].to_dyck()).unwrap());
                        reach[i][j] = true;
                    }
                }
            }
            // Warshall transitive closure.
            for k in 0..d {
                for i in 0..d {
                    if reach[i][k] {
                        for j in 0..d {
                            reach[i][j] |= reach[k][j];
                        }
                    }
                }
            }
            for i in 0..d {
                for j in 0..d {
                    assert_eq!(
                        reach[i][j],
                        ps[i].to_dyck().leq(&ps[j].to_dyck()).unwrap(),
                        "n={n} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn comparable_but_not_kw_related() {
        let a = pat("1-4,2-3,5-6,7-8");
        let b = pat("1-8,2-7,3-6,4-5");
        assert!(a.to_dyck().leq(&b.to_dyck()).unwrap());
        assert!(!kw_related(&a, &b).unwrap());
    }

    #[test]
    fn matrix_fixture_n2() {
        let m = incidence_matrix(2).unwrap();
        assert_eq!(m.order, vec![pat("1-4,2-3"), pat("1-2,3-4")]);
        assert_eq!(m.entries, vec![vec![1, 0], vec![1, 1]]);
        let inv = inverse_matrix(2).unwrap();
        assert_eq!(inv.entries, vec![vec![1, 0], vec![-1, 1]]);
    }

    #[test]
    fn matrix_fixture_n3() {
        let inv = inverse_matrix(3).unwrap();
        assert_eq!(
            inv.order,
            vec![
                pat("1-6,2-5,3-4"),
                pat("1-6,2-3,4-5"),
                pat("1-4,2-3,5-6"),
                pat("1-2,3-6,4-5"),
                pat("1-2,3-4,5-6"),
            ]
        );
        assert_eq!(
            inv.entries,
            vec![
                vec![1, 0, 0, 0, 0],
                vec![-1, 1, 0, 0, 0],
                vec![1, -1, 1, 0, 0],
                vec![1, -1, 0, 1, 0],
                vec![-2, 1, -1, -1, 1],
            ]
        );
    }

    #[test]
    fn inverse_is_exact_inverse() {
        for n in 0..=6 {
            let m = incidence_matrix_with_cap(n, 6).unwrap();
            let inv = inverse_matrix_with_cap(n, 6).unwrap();
            let id = SignedIntMatrix::identity(n, m.order.clone());
            assert_eq!(m.multiply(&inv), id, "n = {n}");
            assert_eq!(inv.multiply(&m), id, "n = {n}");
        }
    }

    #[test]
    fn inverse_unit_triangular_wrt_order() {
        for n in 1..=5 {
            let inv = inverse_matrix(n).unwrap();
            for i in 0..inv.dim() {
                assert_eq!(inv.entries[i][i], 1);
                for j in (i + 1)..inv.dim() {
                    assert_eq!(inv.entries[i][j], 0);
                }
                for j in 0..i {
                    if inv.entries[i][j] != 0 {
                        let a = inv.order[i].to_dyck();
                        let b = inv.order[j].to_dyck();
                        assert!(a.leq(&b).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn lemma_lift_preserves_comparison() {
        // hypothesis: no up-wedge at j in a, down-wedge at j in b.
        for n in 1..=4 {
            let paths = DyckPath::enumerate(n);
            for a in &paths {
                for b in &paths {
                    for j in 1..2 * n {
                        if !a.has_up_wedge(j) && b.has_down_wedge(j) {
                            let lifted = b.lift(j).unwrap();
                            assert_eq!(
                                a.leq(b).unwrap(),
                                a.leq(&lifted).unwrap(),
                                "n={n} j={j}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lemma_lift_negates_inverse_entry() {
        for n in 1..=4 {
            let inv = inverse_matrix(n).unwrap();
            for a in &inv.order {
                for b in &inv.order {
                    let (da, db) = (a.to_dyck(), b.to_dyck());
                    for j in 1..2 * n {
                        if !da.has_up_wedge(j)
                            && db.has_down_wedge(j)
                            && da.leq(&db).unwrap()
                        {
                            let lifted = LinkPattern::from_dyck(&db.lift(j).unwrap());
                            assert_eq!(
                                inv.get(a, b).unwrap(),
                                -inv.get(a, &lifted).unwrap(),
                                "a={a} b={b} j={j}"
                            );
                        }
                    }
                }
            }
        }
    }
}
