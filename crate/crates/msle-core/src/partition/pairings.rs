//! Enumeration of all (crossing allowed) pair partitions of {1, ..., 2N}
//! with their signs, used by the kappa = 2 and kappa = 3 symmetric
//! partition functions.

use crate::error::{Error, Result};

/// Default cap on N for (2N-1)!! enumeration.
pub const DEFAULT_PAIRING_CAP: usize = 6;

/// All (2N-1)!! partitions of {1,...,2N} into pairs (a, b) with a < b,
/// listed with openers increasing.
pub fn enumerate_pairings(n: usize, cap: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    if n > cap {
        return Err(Error::CapacityExceeded {
            what: "pair partition enumeration n",
            value: n,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut used = vec![false; 2 * n + 1];
    let mut current = Vec::with_capacity(n);
    rec(n, &mut used, &mut current, &mut out);
    Ok(out)
}

fn rec(
    n: usize,
    used: &mut Vec<bool>,
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let Some(a) = (1..=2 * n).find(|&i| !used[i]) else {
        out.push(current.clone());
        return;
    };
    used[a] = true;
    for b in (a + 1)..=2 * n {
        if used[b] {
            continue;
        }
        used[b] = true;
        current.push((a, b));
        rec(n, used, current, out);
        current.pop();
        used[b] = false;
    }
    used[a] = false;
}

/// Sign of a pairing: parity of the number of crossing pairs. This equals
/// the sign of the product of (a-c)(a-d)(b-c)(b-d) over distinct pairs
/// {a,b}, {c,d}: the product is negative exactly when the pairs interleave.
pub fn pairing_sign(pairing: &[(usize, usize)]) -> i64 {
    let mut crossings = 0usize;
    for (i, &(a, b)) in pairing.iter().enumerate() {
        for &(c, d) in &pairing[i + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                crossings += 1;
            }
        }
    }
    if crossings % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_double_factorials() {
        let df = [1usize, 1, 3, 15, 105, 945];
        for (n, &c) in df.iter().enumerate() {
            assert_eq!(enumerate_pairings(n, 6).unwrap().len(), c);
        }
        assert!(enumerate_pairings(7, 6).is_err());
    }

    #[test]
    fn sign_matches_product_definition() {
        for pairing in enumerate_pairings(3, 6).unwrap() {
            let mut prod = 1i64;
            for (i, &(a, b)) in pairing.iter().enumerate() {
                for &(c, d) in &pairing[i + 1..] {
                    let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
                    prod *= ((a - c) * (a - d) * (b - c) * (b - d)).signum();
                }
            }
            assert_eq!(pairing_sign(&pairing), prod);
        }
    }

    #[test]
    fn noncrossing_pairings_have_positive_sign() {
        assert_eq!(pairing_sign(&[(1, 2), (3, 4)]), 1);
        assert_eq!(pairing_sign(&[(1, 4), (2, 3)]), 1);
        assert_eq!(pairing_sign(&[(1, 3), (2, 4)]), -1);
    }
}
