//! Brute-force oracles, written against raw tables only.
#![allow(dead_code)]

use pog_core::algebra::{Element, FiniteAlgebra, Presentation, Term};
use pog_core::harness::PRESETS;

pub fn presets() -> Vec<(&'static str, Presentation)> {
    PRESETS.iter().map(|p| (p.name, p.presentation())).collect()
}

pub fn preset(name: &str) -> Presentation {
    pog_core::harness::preset(name).unwrap().presentation()
}

/// Every tuple of `0..n` of length `k`, lexicographic.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn term_value(a: &FiniteAlgebra, t: &Term, env: &[Element]) -> Element {
    match t {
        Term::Var(i) => env[*i],
        Term::App(s, args) => {
            let vals: Vec<Element> = args.iter().map(|x| term_value(a, x, env)).collect();
            a.op(*s, &vals)
        }
    }
}

/// Recursive term evaluation, independent of the library's evaluator.
pub fn eval(a: &FiniteAlgebra, t: &Term, env: &[Element]) -> Element {
    term_value(a, t, env)
}

pub fn satisfies(p: &Presentation, a: &FiniteAlgebra) -> bool {
    p.identities.iter().all(|id| {
        tuples(a.size(), id.var_count())
            .iter()
            .all(|env| eval(a, &id.lhs, env) == eval(a, &id.rhs, env))
    })
}

/// Every algebra of the signature of `p` on `0..n`, by filling all tables.
pub fn all_algebras(p: &Presentation, n: usize) -> Vec<FiniteAlgebra> {
    let arities = p.signature.arities();
    let mut tables_per_symbol = Vec::new();
    for &ar in &arities {
        let cells = n.pow(ar as u32);
        tables_per_symbol.push(tuples(n, cells));
    }
    let mut out = Vec::new();
    for choice in tuples_mixed(&tables_per_symbol.iter().map(Vec::len).collect::<Vec<_>>()) {
        let tables = choice
            .iter()
            .zip(&tables_per_symbol)
            .map(|(&i, ts)| ts[i].clone())
            .collect();
        out.push(FiniteAlgebra::new(n, arities.clone(), tables).unwrap());
    }
    out
}

fn tuples_mixed(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..r).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn brute_models(p: &Presentation, n: usize) -> Vec<FiniteAlgebra> {
    all_algebras(p, n).into_iter().filter(|a| satisfies(p, a)).collect()
}

/// `B` with `B.op(π(x̄)) = π(A.op(x̄))`.
pub fn permute(a: &FiniteAlgebra, perm: &[Element]) -> FiniteAlgebra {
    let n = a.size();
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let tables = a
        .arities()
        .iter()
        .enumerate()
        .map(|(s, &ar)| {
            tuples(n, ar)
                .iter()
                .map(|args| {
                    let pre: Vec<Element> = args.iter().map(|&x| inv[x]).collect();
                    perm[a.op(s, &pre)]
                })
                .collect()
        })
        .collect();
    FiniteAlgebra::new(n, a.arities().to_vec(), tables).unwrap()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    tuples(n, n)
        .into_iter()
        .filter(|t| {
            let mut s = t.clone();
            s.sort_unstable();
            s.dedup();
            s.len() == n
        })
        .collect()
}

pub fn isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    a.size() == b.size() && permutations(a.size()).iter().any(|p| &permute(a, p) == b)
}

/// Least relabelled table over all permutations; equal exactly for
/// isomorphic algebras.
pub fn canonical(a: &FiniteAlgebra) -> Vec<Vec<Element>> {
    permutations(a.size())
        .iter()
        .map(|p| permute(a, p).into_tables())
        .min()
        .unwrap()
}

/// All set partitions of `0..n` as restricted-growth label vectors.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            if i == 0 && b > 0 {
                break;
            }
            cur.push(b);
            go(i + 1, n, cur, if i == 0 { 0 } else { max.max(b) }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Compatible with every operation, argument by argument.
pub fn is_congruence(a: &FiniteAlgebra, labels: &[usize]) -> bool {
    let n = a.size();
    a.arities().iter().enumerate().all(|(s, &ar)| {
        tuples(n, ar).iter().all(|xs| {
            tuples(n, ar).iter().all(|ys| {
                !xs.iter().zip(ys).all(|(&x, &y)| labels[x] == labels[y]) || labels[a.op(s, xs)] == labels[a.op(s, ys)]
            })
        })
    })
}

pub fn congruences(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    partitions(a.size()).into_iter().filter(|l| is_congruence(a, l)).collect()
}

/// `θ ∧ θ′ = Δ` and `θ ∘ θ′ = ∇`.
pub fn complementary(t: &[usize], u: &[usize]) -> bool {
    let n = t.len();
    let meet = (0..n).all(|x| (0..n).all(|y| x == y || t[x] != t[y] || u[x] != u[y]));
    let comp = (0..n).all(|x| (0..n).all(|y| (0..n).any(|z| t[x] == t[z] && u[z] == u[y])));
    meet && comp
}

pub fn factor_pairs(a: &FiniteAlgebra) -> Vec<(Vec<usize>, Vec<usize>)> {
    let cs = congruences(a);
    let mut out = Vec::new();
    for t in &cs {
        for u in &cs {
            if complementary(t, u) {
                out.push((t.clone(), u.clone()));
            }
        }
    }
    out
}

pub fn indecomposable(a: &FiniteAlgebra) -> bool {
    let n = a.size();
    n >= 2
        && factor_pairs(a)
            .iter()
            .all(|(t, u)| (0..n).all(|x| t[x] == x) || (0..n).all(|x| u[x] == x))
}

/// `(e⃗, f⃗)` with `e⃗ ≡ 0⃗ (θ)`, `e⃗ ≡ 1⃗ (θ′)`, `f⃗ ≡ 1⃗ (θ)`, `f⃗ ≡ 0⃗ (θ′)`,
/// found by search over all tuples.
pub fn central_pairs(a: &FiniteAlgebra, zero: &[Element], one: &[Element]) -> Vec<(Vec<Element>, Vec<Element>)> {
    let l = zero.len();
    let mut out = Vec::new();
    for (t, u) in factor_pairs(a) {
        for e in tuples(a.size(), l) {
            for f in tuples(a.size(), l) {
                let ok = (0..l).all(|i| {
                    t[e[i]] == t[zero[i]] && u[e[i]] == u[one[i]] && t[f[i]] == t[one[i]] && u[f[i]] == u[zero[i]]
                });
                if ok && !out.contains(&(e.clone(), f.clone())) {
                    out.push((e.clone(), f.clone()));
                }
            }
        }
    }
    out
}

/// `x ⪯ y ⟺ x·y = x` for a binary `mul` at symbol 0.
pub fn leq_matrix(a: &FiniteAlgebra) -> Vec<Vec<bool>> {
    let n = a.size();
    (0..n).map(|x| (0..n).map(|y| a.op(0, &[x, y]) == x).collect()).collect()
}

pub fn is_partial_order(m: &[Vec<bool>]) -> bool {
    let n = m.len();
    (0..n).all(|x| m[x][x])
        && (0..n).all(|x| (0..n).all(|y| x == y || !(m[x][y] && m[y][x])))
        && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(m[x][y] && m[y][z]) || m[x][z])))
}

/// Union-find over comparability edges.
pub fn connected(m: &[Vec<bool>]) -> bool {
    let n = m.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for x in 0..n {
        for y in 0..n {
            if m[x][y] {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                parent[a] = b;
            }
        }
    }
    let r = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == r)
}
