//! Fixed-width subsets of a finite carrier `0..n`.

use std::fmt;

/// Largest carrier a [`SubsetMask`] can address.
pub const MAX_ELEMENTS: usize = 128;

/// A subset of `0..width` stored as a bit vector.
///
/// Masks compare by their integer value, which is the tie-break order used by
/// every search in this crate: if `a ⊆ b` then `a <= b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u128,
    width: u8,
}

impl SubsetMask {
    pub fn empty(width: usize) -> Self {
        assert!(width <= MAX_ELEMENTS, "carrier of {width} elements exceeds {MAX_ELEMENTS}");
        SubsetMask { bits: 0, width: width as u8 }
    }

    pub fn full(width: usize) -> Self {
        let mut m = Self::empty(width);
        m.bits = low_bits(width);
        m
    }

    pub fn singleton(width: usize, x: usize) -> Self {
        let mut m = Self::empty(width);
        m.insert(x);
        m
    }

    pub fn from_bits(width: usize, bits: u128) -> Self {
        let mut m = Self::empty(width);
        assert!(bits & !low_bits(width) == 0, "bits outside a carrier of width {width}");
        m.bits = bits;
        m
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(width: usize, elems: I) -> Self {
        let mut m = Self::empty(width);
        for x in elems {
            m.insert(x);
        }
        m
    }

    /// Every subset of a carrier, in ascending bit order.
    pub fn all(width: usize) -> impl Iterator<Item = SubsetMask> {
        assert!(width < 32, "refusing to enumerate 2^{width} subsets");
        (0u128..(1u128 << width)).map(move |b| SubsetMask::from_bits(width, b))
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.width() && self.bits >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.width(), "element {x} outside carrier of width {}", self.width);
        self.bits |= 1 << x;
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.width() {
            self.bits &= !(1 << x);
        }
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == low_bits(self.width())
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_width(other);
        SubsetMask { bits: self.bits | other.bits, width: self.width }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_width(other);
        SubsetMask { bits: self.bits & other.bits, width: self.width }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.check_width(other);
        SubsetMask { bits: self.bits & !other.bits, width: self.width }
    }

    pub fn complement(&self) -> Self {
        SubsetMask { bits: !self.bits & low_bits(self.width()), width: self.width }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_width(other);
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_width(other);
        self.bits & other.bits == 0
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Elements {
        Elements { bits: self.bits }
    }

    /// All subsets of `self`, ascending.
    pub fn subsets(&self) -> Subsets {
        Subsets { mask: *self, next: Some(0) }
    }

    fn check_width(&self, other: &Self) {
        debug_assert_eq!(self.width, other.width, "mixing subsets of different carriers");
    }
}

fn low_bits(width: usize) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `{0,2,3}`; this is also the instance-file syntax.
impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl IntoIterator for &SubsetMask {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

pub struct Elements {
    bits: u128,
}

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let x = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.bits.count_ones() as usize;
        (k, Some(k))
    }
}

/// Submask enumeration in ascending order.
pub struct Subsets {
    mask: SubsetMask,
    next: Option<u128>,
}

impl Iterator for Subsets {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        // next submask above `cur`: (cur - mask) & mask, wrapping to 0 when done
        let succ = cur.wrapping_sub(self.mask.bits) & self.mask.bits;
        self.next = (succ != 0).then_some(succ);
        Some(SubsetMask { bits: cur, width: self.mask.width })
    }
}
