//! Finite posets with Hasse covers and strict chain enumeration.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    /// `above[a]`: all `b` with `a < b`, increasing.
    above: Vec<Vec<usize>>,
    covers: Vec<(usize, usize)>,
}

impl Poset {
    /// `leq[a][b]` means `a ≤ b`; the partial-order axioms are checked.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("order relation must be square".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::Mismatch(format!(
                    "order is not reflexive at {}",
                    names[a]
                )));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Mismatch(format!(
                        "order is not antisymmetric at {}, {}",
                        names[a], names[b]
                    )));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::Mismatch(format!(
                            "order is not transitive at {}",
                            names[b]
                        )));
                    }
                }
            }
        }
        let above: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).filter(|&b| b != a && leq[a][b]).collect())
            .collect();
        let covers = (0..n)
            .flat_map(|a| {
                let above = &above;
                let leq = &leq;
                above[a]
                    .iter()
                    .copied()
                    .filter(move |&b| !above[a].iter().any(|&c| c != b && leq[c][b]))
                    .map(move |b| (a, b))
            })
            .collect();
        Ok(Poset {
            names,
            leq,
            above,
            covers,
        })
    }

    /// Discrete poset on `n` objects.
    pub fn discrete(n: usize) -> Self {
        let leq = (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect();
        Poset::new((0..n).map(|i| format!("x{i}")).collect(), leq).expect("discrete order")
    }

    /// Total order `0 < 1 < ... < n-1`.
    pub fn linear(n: usize) -> Self {
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Poset::new((0..n).map(|i| format!("x{i}")).collect(), leq).expect("linear order")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.covers.contains(&(a, b))
    }

    /// The unique maximum, if any.
    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|a| self.leq[a][t]))
    }

    /// Strictly increasing chains `a_0 < a_1 < ... < a_n` (`n + 1` objects), lexicographic.
    pub fn chains(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        for a in 0..self.len() {
            cur.push(a);
            self.extend(&mut cur, n, &mut out);
            cur.pop();
        }
        out
    }

    fn extend(&self, cur: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().expect("nonempty chain");
        for &b in &self.above[last] {
            cur.push(b);
            self.extend(cur, n, out);
            cur.pop();
        }
    }

    /// Weakly increasing chains (repetitions allowed), the full nerve at level `n`.
    pub fn nerve(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        for a in 0..self.len() {
            cur.push(a);
            self.extend_weak(&mut cur, n, &mut out);
            cur.pop();
        }
        out
    }

    fn extend_weak(&self, cur: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().expect("nonempty chain");
        for b in std::iter::once(last).chain(self.above[last].iter().copied()) {
            cur.push(b);
            self.extend_weak(cur, n, out);
            cur.pop();
        }
    }

    /// Lexicographically first maximal chain of covers from `a` up to `b` (`a ≤ b`).
    pub fn cover_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if !self.leq[a][b] {
            return None;
        }
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = self
                .covers
                .iter()
                .filter(|(x, y)| *x == cur && self.leq[*y][b])
                .map(|(_, y)| *y)
                .min()
                .expect("a cover below b exists");
            path.push(cur);
        }
        Some(path)
    }

    /// The opposite order.
    pub fn opposite(&self) -> Poset {
        let n = self.len();
        let leq = (0..n)
            .map(|a| (0..n).map(|b| self.leq[b][a]).collect())
            .collect();
        Poset::new(self.names.clone(), leq).expect("opposite of a poset")
    }
}
