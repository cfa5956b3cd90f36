//! Finite weight posets given by cover pairs.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPoset {
    pub labels: Vec<String>,
    pub covers: Vec<(usize, usize)>,
    /// `lt[a][b]` iff `a < b`.
    lt: Vec<Vec<bool>>,
}

impl WeightPoset {
    /// Builds the order generated by `mu < lambda` pairs. Labels are kept in the given order.
    pub fn new(labels: Vec<String>, covers: &[(String, String)]) -> Result<WeightPoset> {
        let n = labels.len();
        let pos = |s: &str| {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::Unknown { kind: "weight", name: s.to_string() })
        };
        let mut cov = Vec::new();
        let mut lt = vec![vec![false; n]; n];
        for (a, b) in covers {
            let (i, j) = (pos(a)?, pos(b)?);
            cov.push((i, j));
            lt[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if lt[i][k] {
                    for j in 0..n {
                        if lt[k][j] {
                            lt[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(WeightPoset { labels, covers: cov, lt })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index(label).ok_or_else(|| Error::Unknown { kind: "weight", name: label.to_string() })
    }

    /// Irreflexivity of the generated order (no cycles among the covers).
    pub fn is_partial_order(&self) -> bool {
        (0..self.len()).all(|i| !self.lt[i][i])
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.lt[a][b]
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt[a][b]
    }

    pub fn lower_set(&self, l: usize) -> Vec<usize> {
        (0..self.len()).filter(|&m| self.le(m, l)).collect()
    }

    pub fn upper_set(&self, l: usize) -> Vec<usize> {
        (0..self.len()).filter(|&m| self.le(l, m)).collect()
    }

    pub fn is_lower(&self, set: &[usize]) -> bool {
        set.iter().all(|&a| (0..self.len()).all(|b| !self.lt(b, a) || set.contains(&b)))
    }

    pub fn is_upper(&self, set: &[usize]) -> bool {
        set.iter().all(|&a| (0..self.len()).all(|b| !self.lt(a, b) || set.contains(&b)))
    }

    /// Orders `set` so that larger weights come first (`p < q` whenever
    /// `set[p] > set[q]`), breaking ties by the lexicographically smallest label.
    pub fn linear_extension_desc(&self, set: &[usize]) -> Vec<usize> {
        let mut rest: Vec<usize> = set.to_vec();
        let mut out = Vec::new();
        while !rest.is_empty() {
            let pick = rest
                .iter()
                .copied()
                .filter(|&a| !rest.iter().any(|&b| self.lt(a, b)))
                .min_by(|&a, &b| self.labels[a].cmp(&self.labels[b]))
                .expect("finite poset has a maximal element");
            rest.retain(|&x| x != pick);
            out.push(pick);
        }
        out
    }

    pub fn names(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&i| self.labels[i].clone()).collect()
    }

    pub fn parse_set(&self, names: &[String]) -> Result<Vec<usize>> {
        let mut v: Vec<usize> = names.iter().map(|n| self.require(n)).collect::<Result<_>>()?;
        v.sort();
        v.dedup();
        Ok(v)
    }
}
