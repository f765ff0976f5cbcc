use num_integer::Roots;
use num_traits::{One, Zero};

/// `⌊m^{1/d}⌋` together with whether the root is exact.
///
/// Generic over any unsigned integer type implementing [`Roots`].
pub fn integer_nth_root<T>(m: &T, d: u32) -> (T, bool)
where
    T: Roots + Clone + Zero + One,
{
    assert!(d >= 1, "root degree must be positive");
    let root = m.nth_root(d);
    let exact = num_traits::pow(root.clone(), d as usize) == *m;
    (root, exact)
}

/// Exact square root if `m` is a perfect square.
pub fn exact_sqrt<T>(m: &T) -> Option<T>
where
    T: Roots + Clone + Zero + One,
{
    match integer_nth_root(m, 2) {
        (r, true) => Some(r),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        for d in 1..10 {
            assert_eq!(integer_nth_root(&1u64, d), (1, true));
        }
        assert_eq!(integer_nth_root(&144u64, 2), (12, true));
        assert_eq!(integer_nth_root(&145u64, 2), (12, false));
        assert_eq!(integer_nth_root(&0u64, 3), (0, true));
        let big = BigUint::from(10u32).pow(60u32);
        assert_eq!(integer_nth_root(&big, 3), (BigUint::from(10u32).pow(20u32), true));
    }

    proptest! {
        #[test]
        fn bracketing(m in 0u64..u64::MAX / 2, d in 1u32..8) {
            let (r, exact) = integer_nth_root(&m, d);
            let mb = BigUint::from(m);
            let rb = BigUint::from(r);
            prop_assert!(rb.pow(d) <= mb);
            prop_assert!((&rb + 1u32).pow(d) > mb);
            prop_assert_eq!(exact, rb.pow(d) == mb);
        }
    }
}
