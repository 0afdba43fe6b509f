//! Exact arithmetic on scaled indicator vectors.
//!
//! Every vector produced by the reductions is a 0/1 indicator of a support
//! set scaled to unit norm, so each nonzero entry equals `1/sqrt(|support|)`.
//! These entries are irrational in general, but squared inner products are
//! always rational:
//!
//! ```text
//! <a, b>^2 = |supp a ∩ supp b|^2 / (|supp a| * |supp b|)
//! ```
//!
//! All equality and bound checks in this crate go through that identity.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact rational used for dot products, fractions and bounds.
pub type Exact = Ratio<i128>;

pub fn exact(num: i128, den: i128) -> Exact {
    Ratio::new(num, den)
}

/// Converts an exact rational to the nearest `f64`.
pub fn to_f64(value: &Exact) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// A unit-norm vector whose nonzero entries all equal `1/sqrt(|support|)`.
pub trait ScaledIndicator {
    fn dimension(&self) -> usize;

    /// Sorted, duplicate-free coordinate indices.
    fn support(&self) -> &[usize];

    fn weight(&self) -> usize {
        self.support().len()
    }

    /// Square of the common entry value, `1/|support|`.
    fn entry_value_squared(&self) -> Exact {
        exact(1, self.weight() as i128)
    }

    fn entry_value(&self) -> f64 {
        1.0 / (self.weight() as f64).sqrt()
    }
}

/// Size of the intersection of two sorted index lists.
pub fn intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Inner product of two scaled indicators, exact in its squared form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dot {
    pub overlap: usize,
    pub squared: Exact,
    pub value: f64,
}

impl Dot {
    pub(crate) fn from_counts(overlap: usize, weight_a: usize, weight_b: usize) -> Self {
        let squared = exact(
            (overlap as i128) * (overlap as i128),
            (weight_a as i128) * (weight_b as i128),
        );
        let value = overlap as f64 / ((weight_a as f64) * (weight_b as f64)).sqrt();
        Dot { overlap, squared, value }
    }
}

/// `<a, b>` for two scaled indicators of equal dimension.
pub fn dot<A, B>(a: &A, b: &B) -> Result<Dot>
where
    A: ScaledIndicator + ?Sized,
    B: ScaledIndicator + ?Sized,
{
    if a.dimension() != b.dimension() {
        return Err(Error::Dimension {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    let overlap = intersection_count(a.support(), b.support());
    Ok(Dot::from_counts(overlap, a.weight(), b.weight()))
}

/// Validates a support list: non-empty, strictly increasing, below `dimension`.
pub(crate) fn check_support(dimension: usize, support: &[usize]) -> Result<()> {
    if dimension == 0 {
        return Err(Error::param("vector dimension must be positive"));
    }
    if support.is_empty() {
        return Err(Error::param("support must be non-empty"));
    }
    if support.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("support must be strictly increasing"));
    }
    let last = *support.last().unwrap();
    if last >= dimension {
        return Err(Error::param(format!(
            "support index {last} out of bounds for dimension {dimension}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_of_sorted_lists() {
        assert_eq!(intersection_count(&[0, 2, 4, 6], &[1, 2, 3, 6]), 2);
        assert_eq!(intersection_count(&[], &[1]), 0);
        assert_eq!(intersection_count(&[5], &[5]), 1);
    }

    #[test]
    fn dot_from_counts_is_exact() {
        let d = Dot::from_counts(1, 2, 2);
        assert_eq!(d.squared, exact(1, 4));
        assert!((d.value - 0.5).abs() < 1e-15);
        let z = Dot::from_counts(0, 3, 7);
        assert_eq!(z.squared, exact(0, 1));
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn support_validation() {
        assert!(check_support(4, &[0, 3]).is_ok());
        assert!(check_support(4, &[]).is_err());
        assert!(check_support(4, &[1, 1]).is_err());
        assert!(check_support(4, &[2, 1]).is_err());
        assert!(check_support(4, &[4]).is_err());
        assert!(check_support(0, &[0]).is_err());
    }
}
