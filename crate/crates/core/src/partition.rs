//! Integer partitions indexing the `s` variables and `c` monomials.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A weakly decreasing list of positive parts. The empty partition is valid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, String> {
        if parts.contains(&0) {
            return Err(format!("partition {parts:?} has a zero part"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity form: `(part, count)` pairs, smallest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in self.0.iter().rev() {
            match out.last_mut() {
                Some((q, n)) if *q == p => *n += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// All partitions of `n`, in increasing graded-lex order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill(n, n, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Subscript in the `s_{311}` style; parts above nine are comma separated.
    pub fn subscript(&self, compress: bool) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        let wide = self.0.iter().any(|&p| p > 9);
        if compress {
            let groups: Vec<String> = self
                .multiplicities()
                .into_iter()
                .rev()
                .map(|(p, n)| if n == 1 { p.to_string() } else { format!("{p}^{n}") })
                .collect();
            if groups.len() == 1 && !groups[0].contains('^') {
                return groups[0].clone();
            }
            return groups.join(if wide { "," } else { " " });
        }
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        parts.join(if wide { "," } else { "" })
    }
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=max.min(rest)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

impl Ord for Partition {
    /// Graded lexicographic: weight first, then parts compared left to right.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = String;

    fn try_from(parts: Vec<u32>) -> Result<Self, String> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.subscript(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn parts_are_sorted_and_validated() {
        assert_eq!(p(&[1, 3, 1]).parts(), &[3, 1, 1]);
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(p(&[3, 1, 1]).weight(), 5);
        assert_eq!(p(&[3, 1, 1]).multiplicities(), vec![(1, 2), (3, 1)]);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|n| Partition::all_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn graded_lex_order() {
        let all = Partition::all_of(4);
        let rendered: Vec<String> = all.iter().map(|x| x.to_string()).collect();
        assert_eq!(rendered, vec!["1111", "211", "22", "31", "4"]);
        assert!(p(&[4]) < p(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn subscripts() {
        assert_eq!(Partition::empty().subscript(false), "0");
        assert_eq!(p(&[10, 1, 1]).subscript(false), "10,1,1");
        assert_eq!(p(&[3, 1, 1]).subscript(true), "3 1^2");
        assert_eq!(p(&[2, 2, 1]).subscript(true), "2^2 1");
        assert_eq!(p(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1]).subscript(true), "1^10");
    }
}
