use super::{for_each_assignment, Element, FiniteAlgebra};

/// Finds a bijection `h: A → B` with `h(f(ā)) = f(h(ā))` for every symbol.
///
/// Candidates are tried in increasing order, so the result is the
/// lexicographically least isomorphism as a vector of images.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<Element>> {
    if a.size() != b.size() || a.arities() != b.arities() {
        return None;
    }
    let n = a.size();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(a, b, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Checks the homomorphism condition on all entries whose arguments and
/// result are already mapped.
fn consistent(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Element], newest: Element) -> bool {
    let n = a.size();
    let mut image = Vec::new();
    for (sym, &arity) in a.arities().iter().enumerate() {
        if arity == 0 {
            let v = a.op(sym, &[]);
            if map[v] != usize::MAX && map[v] != b.op(sym, &[]) {
                return false;
            }
            continue;
        }
        // Only tuples over the mapped prefix that mention the newest element.
        let ok = for_each_assignment(newest + 1, arity, |args| {
            if !args.contains(&newest) {
                return true;
            }
            let v = a.op(sym, args);
            if v > newest {
                return true;
            }
            image.clear();
            image.extend(args.iter().map(|&x| map[x]));
            b.op(sym, &image) == map[v]
        });
        if !ok {
            return false;
        }
    }
    let _ = n;
    true
}

fn extend(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    next: Element,
    map: &mut [Element],
    used: &mut [bool],
) -> bool {
    let n = a.size();
    if next == n {
        return is_homomorphism(a, b, map);
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        map[next] = cand;
        used[cand] = true;
        if consistent(a, b, map, next) && extend(a, b, next + 1, map, used) {
            return true;
        }
        used[cand] = false;
        map[next] = usize::MAX;
    }
    false
}

/// Full check that `map` commutes with every operation.
pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Element]) -> bool {
    if a.arities() != b.arities() {
        return false;
    }
    let mut image = Vec::new();
    a.arities().iter().enumerate().all(|(sym, &arity)| {
        for_each_assignment(a.size(), arity, |args| {
            image.clear();
            image.extend(args.iter().map(|&x| map[x]));
            map[a.op(sym, args)] == b.op(sym, &image)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meet_table(n: usize, meet: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| meet(x, y)).collect()
    }

    fn chain4() -> FiniteAlgebra {
        FiniteAlgebra::new(4, vec![2, 0, 0], vec![meet_table(4, usize::min), vec![0], vec![3]]).unwrap()
    }

    /// Diamond 0 < a=1, b=2 < 3 as a bounded meet-semilattice.
    fn diamond() -> FiniteAlgebra {
        let meet = |x: usize, y: usize| {
            if x == y {
                x
            } else if x == 3 {
                y
            } else if y == 3 {
                x
            } else {
                0
            }
        };
        FiniteAlgebra::new(4, vec![2, 0, 0], vec![meet_table(4, meet), vec![0], vec![3]]).unwrap()
    }

    fn brute_force_iso(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
        let n = a.size();
        let mut perm: Vec<usize> = (0..n).collect();
        fn heap(k: usize, p: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
            if k <= 1 {
                return f(p);
            }
            for i in 0..k {
                if heap(k - 1, p, f) {
                    return true;
                }
                let j = if k % 2 == 0 { i } else { 0 };
                p.swap(j, k - 1);
            }
            false
        }
        heap(n, &mut perm, &mut |p| is_homomorphism(a, b, p))
    }

    #[test]
    fn identity_on_self() {
        let d = diamond();
        assert_eq!(find_isomorphism(&d, &d), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn chain_and_diamond_differ() {
        assert!(!brute_force_iso(&chain4(), &diamond()));
        assert_eq!(find_isomorphism(&chain4(), &diamond()), None);
    }

    #[test]
    fn diamond_matches_square_of_chain() {
        let c2 = FiniteAlgebra::new(2, vec![2, 0, 0], vec![vec![0, 0, 0, 1], vec![0], vec![1]]).unwrap();
        let sq = crate::algebra::direct_product(&c2, &c2, 64).unwrap().algebra;
        assert!(brute_force_iso(&diamond(), &sq));
        let h = find_isomorphism(&diamond(), &sq).unwrap();
        assert!(is_homomorphism(&diamond(), &sq, &h));
    }

    #[test]
    fn inverse_is_an_isomorphism_back() {
        let d = diamond();
        // swap the two atoms
        let mut t = d.tables().to_vec();
        let swap = |v: usize| match v {
            1 => 2,
            2 => 1,
            v => v,
        };
        t[0] = (0..16).map(|i| swap(d.op(0, &[swap(i / 4), swap(i % 4)]))).collect();
        let e = FiniteAlgebra::new(4, vec![2, 0, 0], t).unwrap();
        let h = find_isomorphism(&d, &e).unwrap();
        let mut inv = vec![0; 4];
        for (x, &y) in h.iter().enumerate() {
            inv[y] = x;
        }
        assert!(is_homomorphism(&e, &d, &inv));
    }
}
