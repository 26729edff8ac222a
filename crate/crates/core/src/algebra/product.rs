use super::{for_each_assignment, AlgebraError, Element, FiniteAlgebra};

/// Default cap on `|A|·|B|`.
pub const DEFAULT_MAX_PRODUCT: usize = 64;

/// `A × B` together with its coordinate encoding: the pair `(a, b)` is the
/// element `a·|B| + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectProduct {
    pub algebra: FiniteAlgebra,
    left: usize,
    right: usize,
}

impl DirectProduct {
    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    #[inline]
    pub fn encode(&self, a: Element, b: Element) -> Element {
        debug_assert!(a < self.left && b < self.right);
        a * self.right + b
    }

    #[inline]
    pub fn decode(&self, e: Element) -> (Element, Element) {
        (e / self.right, e % self.right)
    }

    /// `[ā, b̄]`: the tuple of encoded pairs `(a_i, b_i)`.
    pub fn interleave(&self, a: &[Element], b: &[Element]) -> Vec<Element> {
        assert_eq!(a.len(), b.len(), "interleaved tuples must have equal length");
        a.iter().zip(b).map(|(&x, &y)| self.encode(x, y)).collect()
    }

    /// Inverse of [`DirectProduct::interleave`].
    pub fn split(&self, e: &[Element]) -> (Vec<Element>, Vec<Element>) {
        e.iter().map(|&v| self.decode(v)).unzip()
    }
}

/// Pointwise product of two algebras of the same signature.
pub fn direct_product(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    max_size: usize,
) -> Result<DirectProduct, AlgebraError> {
    if a.arities() != b.arities() {
        return Err(AlgebraError::SignatureMismatch);
    }
    let size = a
        .size()
        .checked_mul(b.size())
        .filter(|&s| s <= max_size)
        .ok_or(AlgebraError::ProductTooLarge {
            size: a.size().saturating_mul(b.size()),
            max: max_size,
        })?;
    let right = b.size();
    let mut tables = Vec::with_capacity(a.arities().len());
    for (sym, &arity) in a.arities().iter().enumerate() {
        let mut table = Vec::with_capacity(super::finite::table_len(size, arity)?);
        let mut left_args = vec![0; arity];
        let mut right_args = vec![0; arity];
        for_each_assignment(size, arity, |args| {
            for (i, &e) in args.iter().enumerate() {
                left_args[i] = e / right;
                right_args[i] = e % right;
            }
            table.push(a.op(sym, &left_args) * right + b.op(sym, &right_args));
            true
        });
        tables.push(table);
    }
    Ok(DirectProduct {
        algebra: FiniteAlgebra::new(size, a.arities().to_vec(), tables)?,
        left: a.size(),
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::find_isomorphism;

    fn bsl_chain2() -> FiniteAlgebra {
        // mul, 0, 1 on the chain 0 < 1
        FiniteAlgebra::new(2, vec![2, 0, 0], vec![vec![0, 0, 0, 1], vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn square_of_two_chain_is_pointwise_meet() {
        let c = bsl_chain2();
        let p = direct_product(&c, &c, DEFAULT_MAX_PRODUCT).unwrap();
        assert_eq!(p.algebra.size(), 4);
        for x in 0..4 {
            for y in 0..4 {
                let (a1, b1) = p.decode(x);
                let (a2, b2) = p.decode(y);
                let expected = p.encode(a1.min(a2), b1.min(b2));
                assert_eq!(p.algebra.op(0, &[x, y]), expected);
            }
        }
        assert_eq!(p.algebra.table(1), &[0]);
        assert_eq!(p.algebra.table(2), &[3]);
    }

    #[test]
    fn product_with_trivial_is_isomorphic() {
        let c = bsl_chain2();
        let t = FiniteAlgebra::new(1, vec![2, 0, 0], vec![vec![0], vec![0], vec![0]]).unwrap();
        let p = direct_product(&c, &t, DEFAULT_MAX_PRODUCT).unwrap();
        assert!(find_isomorphism(&c, &p.algebra).is_some());
    }

    #[test]
    fn interleave_single_pair() {
        let c = bsl_chain2();
        let p = direct_product(&c, &c, DEFAULT_MAX_PRODUCT).unwrap();
        assert_eq!(p.interleave(&[0], &[1]), vec![1]);
        assert_eq!(p.split(&[1]), (vec![0], vec![1]));
    }

    #[test]
    fn size_cap() {
        let c = bsl_chain2();
        assert!(matches!(
            direct_product(&c, &c, 3),
            Err(AlgebraError::ProductTooLarge { size: 4, max: 3 })
        ));
    }
}
