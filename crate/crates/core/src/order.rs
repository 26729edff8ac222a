//! The order related to a po-groupoid (`x ⪯ y ⟺ x·y = x`), connectivity,
//! and zigzags `x ⪰ m_1 ⪯ m_2 ⪰ … ⪯ y`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, FiniteAlgebra, Signature};

/// Which partial-order axiom failed, with a witness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("not reflexive: {0}·{0} ≠ {0}")]
    Reflexivity(Element),
    #[error("not antisymmetric: {0} ⪯ {1} and {1} ⪯ {0}")]
    Antisymmetry(Element, Element),
    #[error("not transitive: {0} ⪯ {1} ⪯ {2} but {0} ⋠ {2}")]
    Transitivity(Element, Element, Element),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRelation {
    size: usize,
    leq: Vec<bool>,
}

/// Computes `⪯` from the designated groupoid term and checks that it is a
/// partial order.
pub fn related_order(a: &FiniteAlgebra, sig: &Signature) -> Result<OrderRelation, OrderError> {
    let g = sig.require_groupoid()?;
    a.check_term(g)?;
    let n = a.size();
    let mut leq = vec![false; n * n];
    for x in 0..n {
        for y in 0..n {
            leq[x * n + y] = a.eval_fast(g, &[x, y]) == x;
        }
    }
    OrderRelation::new(n, leq)
}

impl OrderRelation {
    /// Validates reflexivity, antisymmetry and transitivity, in that order.
    pub fn new(size: usize, leq: Vec<bool>) -> Result<Self, OrderError> {
        assert_eq!(leq.len(), size * size);
        let at = |x: usize, y: usize| leq[x * size + y];
        if let Some(x) = (0..size).find(|&x| !at(x, x)) {
            return Err(OrderError::Reflexivity(x));
        }
        for x in 0..size {
            for y in x + 1..size {
                if at(x, y) && at(y, x) {
                    return Err(OrderError::Antisymmetry(x, y));
                }
            }
        }
        for x in 0..size {
            for y in 0..size {
                if !at(x, y) {
                    continue;
                }
                for z in 0..size {
                    if at(y, z) && !at(x, z) {
                        return Err(OrderError::Transitivity(x, y, z));
                    }
                }
            }
        }
        Ok(OrderRelation { size, leq })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn leq(&self, x: Element, y: Element) -> bool {
        self.leq[x * self.size + y]
    }

    pub fn comparable(&self, x: Element, y: Element) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        self.leq.chunks(self.size).map(<[bool]>::to_vec).collect()
    }

    /// True iff the comparability graph has a single component.
    pub fn is_connected(&self) -> bool {
        if self.size == 0 {
            return true;
        }
        let mut seen = vec![false; self.size];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for y in 0..self.size {
                if !seen[y] && self.comparable(x, y) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Shortest zigzag from `x` to `y`, lexicographically least among the
    /// shortest ones. `None` iff `x` and `y` lie in different components.
    pub fn zigzag_between(&self, x: Element, y: Element) -> Option<Zigzag> {
        let n = self.size;
        // Lower points m_{2i−1}; two are adjacent when they share an upper bound.
        let adjacent = |a: usize, b: usize| (0..n).any(|u| self.leq(a, u) && self.leq(b, u));
        // dist[m] = number of further lower points needed after m to reach y.
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for m in 0..n {
            if self.leq(m, y) {
                dist[m] = 0;
                queue.push_back(m);
            }
        }
        while let Some(m) = queue.pop_front() {
            for p in 0..n {
                if dist[p] == usize::MAX && adjacent(p, m) {
                    dist[p] = dist[m] + 1;
                    queue.push_back(p);
                }
            }
        }
        let start = (0..n)
            .filter(|&m| self.leq(m, x) && dist[m] != usize::MAX)
            .min_by_key(|&m| (dist[m], m))?;
        let mut interior = vec![start];
        let mut cur = start;
        while dist[cur] > 0 {
            // least upper point that leads to a lower point one step closer
            let (upper, next) = (0..n)
                .filter(|&u| self.leq(cur, u))
                .find_map(|u| {
                    (0..n)
                        .find(|&p| dist[p] == dist[cur] - 1 && self.leq(p, u))
                        .map(|p| (u, p))
                })
                .expect("distance labels are consistent");
            interior.push(upper);
            interior.push(next);
            cur = next;
        }
        Some(Zigzag { x, y, interior })
    }

    /// Covering pairs `(a, b)` with `a ≺ b` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(Element, Element)> {
        let n = self.size;
        let lt = |a: usize, b: usize| a != b && self.leq(a, b);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph order {\n  rankdir=BT;\n");
        for x in 0..self.size {
            let _ = writeln!(out, "  {x};");
        }
        for (a, b) in self.hasse_edges() {
            let _ = writeln!(out, "  {a} -> {b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct OrderJson {
            size: usize,
            leq: Vec<Vec<bool>>,
        }
        serde_json::to_string(&OrderJson {
            size: self.size,
            leq: self.matrix(),
        })
        .expect("order serializes")
    }
}

/// `x ⪰ m_1 ⪯ m_2 ⪰ … ⪰ m_{2n−1} ⪯ y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Zigzag {
    pub x: Element,
    pub y: Element,
    pub interior: Vec<Element>,
}

impl Zigzag {
    pub fn n(&self) -> usize {
        (self.interior.len() + 1) / 2
    }

    /// Replays every step against `order`.
    pub fn is_valid(&self, order: &OrderRelation) -> bool {
        let m = &self.interior;
        if m.len() % 2 == 0 || !order.leq(m[0], self.x) || !order.leq(m[m.len() - 1], self.y) {
            return false;
        }
        m.windows(2).enumerate().all(|(i, w)| {
            if i % 2 == 0 {
                order.leq(w[0], w[1])
            } else {
                order.leq(w[1], w[0])
            }
        })
    }
}
