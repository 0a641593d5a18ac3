//! Planar pair partitions of {1, ..., 2N} and their Dyck-path encoding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dyck::DyckPath;
use crate::error::{Error, Result};

/// Default cap on the enumeration size (C_10 = 16796 patterns).
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// A non-crossing pairing of {1, ..., 2N}, stored 1-based with each link
/// `(a, b)` satisfying `a < b` and links sorted by opener.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct LinkPattern {
    n: usize,
    links: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawPattern {
    n: usize,
    links: Vec<(usize, usize)>,
}

impl TryFrom<RawPattern> for LinkPattern {
    type Error = Error;
    fn try_from(raw: RawPattern) -> Result<Self> {
        let p = LinkPattern::new(raw.links)?;
        if p.n != raw.n {
            return Err(Error::InvalidPattern(format!(
                "declared n = {} but links give n = {}",
                raw.n, p.n
            )));
        }
        Ok(p)
    }
}

impl From<LinkPattern> for RawPattern {
    fn from(p: LinkPattern) -> Self {
        RawPattern {
            n: p.n,
            links: p.links,
        }
    }
}

impl LinkPattern {
    /// Build a pattern from links in any order; validates coverage,
    /// non-crossing, and normalizes to the canonical ordering.
    pub fn new(mut links: Vec<(usize, usize)>) -> Result<Self> {
        let n = links.len();
        for l in links.iter_mut() {
            if l.0 > l.1 {
                *l = (l.1, l.0);
            }
            if l.0 == l.1 {
                return Err(Error::InvalidPattern(format!(
                    "degenerate link {}-{}",
                    l.0, l.1
                )));
            }
        }
        links.sort_unstable();
        let mut partner = vec![0usize; 2 * n + 1];
        for &(a, b) in &links {
            if a < 1 || b > 2 * n {
                return Err(Error::InvalidPattern(format!(
                    "link {a}-{b} out of range 1..={}",
                    2 * n
                )));
            }
            for &e in &[a, b] {
                if partner[e] != 0 {
                    return Err(Error::InvalidPattern(format!("index {e} used twice")));
                }
            }
            partner[a] = b;
            partner[b] = a;
        }
        // Stack check: a closer must match the most recent open opener.
        let mut stack = Vec::new();
        for i in 1..=2 * n {
            if partner[i] > i {
                stack.push(i);
            } else if stack.pop() != Some(partner[i]) {
                return Err(Error::InvalidPattern(format!(
                    "links {}-{} cross another link",
                    partner[i], i
                )));
            }
        }
        Ok(Self { n, links })
    }

    pub fn empty() -> Self {
        Self {
            n: 0,
            links: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    /// The partner of index `i` (1-based).
    pub fn partner(&self, i: usize) -> usize {
        for &(a, b) in &self.links {
            if a == i {
                return b;
            }
            if b == i {
                return a;
            }
        }
        panic!("index {i} out of range for pattern with n = {}", self.n)
    }

    pub fn is_opener(&self, i: usize) -> bool {
        self.partner(i) > i
    }

    pub fn contains_link(&self, a: usize, b: usize) -> bool {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.links.binary_search(&(a, b)).is_ok()
    }

    /// The fully nested pattern {1-2N, 2-(2N-1), ...}.
    pub fn rainbow(n: usize) -> Self {
        Self {
            n,
            links: (1..=n).map(|j| (j, 2 * n + 1 - j)).collect(),
        }
    }

    /// The fully unnested pattern {1-2, 3-4, ...}.
    pub fn unnested(n: usize) -> Self {
        Self {
            n,
            links: (0..n).map(|j| (2 * j + 1, 2 * j + 2)).collect(),
        }
    }

    /// Dyck-path encoding: openers become up-steps, closers down-steps.
    pub fn to_dyck(&self) -> DyckPath {
        let mut heights = Vec::with_capacity(2 * self.n + 1);
        heights.push(0u32);
        let mut h = 0u32;
        for i in 1..=2 * self.n {
            if self.is_opener(i) {
                h += 1;
            } else {
                h -= 1;
            }
            heights.push(h);
        }
        DyckPath::new(heights).expect("a valid pattern encodes a valid Dyck path")
    }

    /// Inverse of `to_dyck`: match each down-step with the latest open up-step.
    pub fn from_dyck(d: &DyckPath) -> Self {
        let n = d.n();
        let mut links = Vec::with_capacity(n);
        let mut stack = Vec::new();
        for k in 1..=2 * n {
            if d.is_up_step(k) {
                stack.push(k);
            } else {
                let a = stack.pop().expect("Dyck path stays non-negative");
                links.push((a, k));
            }
        }
        links.sort_unstable();
        Self { n, links }
    }

    /// All patterns with `n` links in the canonical order: descending
    /// lexicographic on Dyck heights (rainbow first, unnested last).
    pub fn enumerate(n: usize) -> Result<Vec<Self>> {
        Self::enumerate_with_cap(n, DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_with_cap(n: usize, cap: usize) -> Result<Vec<Self>> {
        if n > cap {
            return Err(Error::CapacityExceeded {
                what: "link pattern enumeration n",
                value: n,
                cap,
            });
        }
        Ok(DyckPath::enumerate(n)
            .iter()
            .map(Self::from_dyck)
            .collect())
    }

    /// Remove the link {j, j+1} and relabel indices above j+1 down by two.
    pub fn remove_link(&self, j: usize) -> Result<Self> {
        if !self.contains_link(j, j + 1) {
            return Err(Error::LinkAbsent { j });
        }
        let links = self
            .links
            .iter()
            .filter(|&&l| l != (j, j + 1))
            .map(|&(a, b)| {
                let shift = |i: usize| if i > j + 1 { i - 2 } else { i };
                (shift(a), shift(b))
            })
            .collect();
        Ok(Self {
            n: self.n - 1,
            links,
        })
    }

    /// Nesting depth of the link whose opener is `a`: the number of links
    /// strictly enclosing it.
    pub fn nesting_depth(&self, a: usize, b: usize) -> usize {
        self.links
            .iter()
            .filter(|&&(c, d)| c < a && b < d)
            .count()
    }

    /// An allowable removal ordering: innermost links first (maximal nesting
    /// depth), leftmost opener breaking ties. Each successive removal then
    /// deletes a consecutive pair in the relabeled pattern.
    pub fn allowable_ordering(&self) -> Vec<(usize, usize)> {
        let mut order: Vec<(usize, usize)> = self.links.clone();
        order.sort_by_key(|&(a, b)| (std::cmp::Reverse(self.nesting_depth(a, b)), a));
        order
    }

    /// Check that removing the links (given by original labels) in the stated
    /// order always deletes a currently-consecutive pair.
    pub fn is_allowable_ordering(&self, order: &[(usize, usize)]) -> bool {
        if order.len() != self.n {
            return false;
        }
        let mut alive = vec![true; 2 * self.n + 1];
        for &(a, b) in order {
            if a < 1 || b > 2 * self.n || !self.contains_link(a, b) || !alive[a] || !alive[b] {
                return false;
            }
            // b must be the next remaining index after a.
            if ((a + 1)..b).any(|i| alive[i]) {
                return false;
            }
            alive[a] = false;
            alive[b] = false;
        }
        true
    }
}

impl fmt::Display for LinkPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(a, b) in &self.links {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{a}-{b}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for LinkPattern {
    type Err = Error;

    /// Accepts either a comma-separated pair list ("1-4,2-3") or a balanced
    /// parenthesis string ("(())"). Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        if s.chars().all(|c| c == '(' || c == ')') {
            let mut links = Vec::new();
            let mut stack = Vec::new();
            for (idx, c) in s.chars().enumerate() {
                let i = idx + 1;
                if c == '(' {
                    stack.push(i);
                } else {
                    let a = stack.pop().ok_or_else(|| {
                        Error::InvalidPattern(format!("unmatched ')' at position {i}"))
                    })?;
                    links.push((a, i));
                }
            }
            if !stack.is_empty() {
                return Err(Error::InvalidPattern("unmatched '(' in pattern".into()));
            }
            return Self::new(links);
        }
        let links = s
            .split(',')
            .map(|part| {
                let (a, b) = part.split_once('-').ok_or_else(|| {
                    Error::InvalidPattern(format!("expected 'a-b' pair, got '{part}'"))
                })?;
                let parse = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidPattern(format!("bad index '{t}'")))
                };
                Ok((parse(a)?, parse(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(links)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> LinkPattern {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_crossing() {
        assert!(LinkPattern::new(vec![(1, 3), (2, 4)]).is_err());
        assert!(LinkPattern::new(vec![(1, 2), (3, 4)]).is_ok());
    }

    #[test]
    fn bijection_fixture() {
        let p = pat("1-10,2-5,3-4,6-7,8-9");
        assert_eq!(p.to_dyck().heights(), &[0, 1, 2, 3, 2, 1, 2, 1, 2, 1, 0]);
        assert_eq!(LinkPattern::from_dyck(&p.to_dyck()), p);
    }

    #[test]
    fn bijection_n1() {
        assert_eq!(pat("1-2").to_dyck().heights(), &[0, 1, 0]);
    }

    #[test]
    fn bijection_round_trip_exhaustive() {
        for n in 0..=6 {
            for p in LinkPattern::enumerate(n).unwrap() {
                assert_eq!(LinkPattern::from_dyck(&p.to_dyck()), p);
            }
        }
    }

    #[test]
    fn enumerate_counts() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (n, &c) in catalan.iter().enumerate() {
            assert_eq!(LinkPattern::enumerate(n).unwrap().len(), c);
        }
        assert!(LinkPattern::enumerate(11).is_err());
    }

    #[test]
    fn enumerate_n5_distinct_noncrossing() {
        let ps = LinkPattern::enumerate(5).unwrap();
        assert_eq!(ps.len(), 42);
        for (i, p) in ps.iter().enumerate() {
            for q in &ps[i + 1..] {
                assert_ne!(p, q);
            }
        }
    }

    #[test]
    fn enumerate_order_endpoints() {
        for n in 1..=5 {
            let ps = LinkPattern::enumerate(n).unwrap();
            assert_eq!(ps[0], LinkPattern::rainbow(n));
            assert_eq!(*ps.last().unwrap(), LinkPattern::unnested(n));
        }
    }

    #[test]
    fn remove_link_fixture() {
        let p = pat("1-14,2-3,4-5,6-13,7-10,8-9,11-12");
        assert_eq!(p.remove_link(4).unwrap(), pat("1-12,2-3,4-11,5-8,6-7,9-10"));
    }

    #[test]
    fn remove_link_trivial_and_absent() {
        assert_eq!(pat("1-2").remove_link(1).unwrap(), LinkPattern::empty());
        assert!(pat("1-4,2-3").remove_link(1).is_err());
    }

    #[test]
    fn remove_link_matches_wedge_removal() {
        for n in 1..=4 {
            for p in LinkPattern::enumerate(n).unwrap() {
                let d = p.to_dyck();
                for j in 1..2 * n {
                    if p.contains_link(j, j + 1) {
                        assert!(d.has_up_wedge(j));
                        assert_eq!(
                            p.remove_link(j).unwrap().to_dyck(),
                            d.remove_up_wedge(j).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn allowable_ordering_simple() {
        let p = pat("1-2,3-4");
        assert!(p.is_allowable_ordering(&[(1, 2), (3, 4)]));
        assert!(p.is_allowable_ordering(&[(3, 4), (1, 2)]));
        // Outer link cannot go first.
        let q = pat("1-4,2-3");
        assert!(!q.is_allowable_ordering(&[(1, 4), (2, 3)]));
        assert!(q.is_allowable_ordering(&[(2, 3), (1, 4)]));
    }

    #[test]
    fn allowable_ordering_always_valid() {
        for n in 0..=5 {
            for p in LinkPattern::enumerate(n).unwrap() {
                let order = p.allowable_ordering();
                assert!(p.is_allowable_ordering(&order), "pattern {p}");
            }
        }
    }

    #[test]
    fn parse_parenthesis_form() {
        assert_eq!(pat("(())"), pat("1-4,2-3"));
        assert_eq!(pat("()()"), pat("1-2,3-4"));
        assert!("(()".parse::<LinkPattern>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for n in 0..=4 {
            for p in LinkPattern::enumerate(n).unwrap() {
                assert_eq!(pat(&p.to_string()), p);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = pat("1-4,2-3");
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":2,"links":[[1,4],[2,3]]}"#);
        assert_eq!(serde_json::from_str::<LinkPattern>(&s).unwrap(), p);
        assert!(serde_json::from_str::<LinkPattern>(r#"{"n":2,"links":[[1,3],[2,4]]}"#).is_err());
    }
}
