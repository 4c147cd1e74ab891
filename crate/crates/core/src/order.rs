//! Finite preorders and posets on dense indices `0..n`.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::subset::{SubsetMask, MAX_ELEMENTS};

/// A reflexive, transitive relation `≼` on `0..n`.
///
/// Rows are kept in both directions so that up- and down-closures are a
/// single union over bit vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinitePreorder {
    n: usize,
    // up[x] = { y | x ≼ y }
    up: Vec<SubsetMask>,
    // down[x] = { y | y ≼ x }
    down: Vec<SubsetMask>,
}

impl FinitePreorder {
    /// Smallest preorder containing the given pairs.
    pub fn closure_of<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_size(n)?;
        let mut up: Vec<SubsetMask> = (0..n).map(|x| SubsetMask::singleton(n, x)).collect();
        for (x, y) in pairs {
            for z in [x, y] {
                if z >= n {
                    return Err(Error::ElementOutOfRange { x: z, n });
                }
            }
            up[x].insert(y);
        }
        // Warshall over rows: if x ≼ k then x inherits everything above k
        for k in 0..n {
            let row_k = up[k];
            for row in up.iter_mut() {
                if row.contains(k) {
                    *row = row.union(&row_k);
                }
            }
        }
        Ok(Self::from_up_rows(n, up))
    }

    /// Validates an explicit relation matrix without closing it.
    pub fn try_from_matrix(rel: &[Vec<bool>]) -> Result<Self> {
        let n = rel.len();
        check_size(n)?;
        let mut up = Vec::with_capacity(n);
        for (x, row) in rel.iter().enumerate() {
            if row.len() != n {
                return Err(Error::CarrierMismatch { expected: n, found: row.len() });
            }
            if !row[x] {
                return Err(Error::NotReflexive { x });
            }
            up.push(SubsetMask::from_elements(n, (0..n).filter(|&y| row[y])));
        }
        for x in 0..n {
            for y in up[x].iter() {
                if let Some(z) = up[y].difference(&up[x]).first() {
                    return Err(Error::NotTransitive { x, y, z });
                }
            }
        }
        Ok(Self::from_up_rows(n, up))
    }

    pub(crate) fn from_up_rows(n: usize, up: Vec<SubsetMask>) -> Self {
        let mut down = vec![SubsetMask::empty(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.iter() {
                down[y].insert(x);
            }
        }
        FinitePreorder { n, up, down }
    }

    pub fn identity(n: usize) -> Self {
        Self::closure_of(n, []).expect("identity within capacity")
    }

    /// Every pair related: the total symmetric preorder.
    pub fn total(n: usize) -> Self {
        Self::from_up_rows(n, vec![SubsetMask::full(n); n])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// Strict part `x ≺ y`.
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.le(x, y) && !self.le(y, x)
    }

    /// Symmetric part `x ≈ y`.
    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.le(x, y) && self.le(y, x)
    }

    /// `↑x`
    pub fn principal_filter(&self, x: usize) -> SubsetMask {
        self.up[x]
    }

    /// `↓x`
    pub fn principal_ideal(&self, x: usize) -> SubsetMask {
        self.down[x]
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|x| (0..self.n).map(|y| self.le(x, y)).collect()).collect()
    }

    /// All related pairs `(x, y)` with `x ≼ y` and `x ≠ y`, lexicographic.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| self.up[x].iter().filter(move |&y| y != x).map(move |y| (x, y)))
    }

    pub fn full_set(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.antisymmetry_witness().is_none()
    }

    fn antisymmetry_witness(&self) -> Option<(usize, usize)> {
        (0..self.n).find_map(|x| self.up[x].intersection(&self.down[x]).iter().find(|&y| y != x).map(|y| (x, y)))
    }

    pub fn reversed(&self) -> Self {
        FinitePreorder { n: self.n, up: self.down.clone(), down: self.up.clone() }
    }

    /// `↑A = { x | a ≼ x for some a ∈ A }`
    pub fn up_set(&self, a: &SubsetMask) -> SubsetMask {
        a.iter().fold(SubsetMask::empty(self.n), |acc, x| acc.union(&self.up[x]))
    }

    /// `↓A = { x | x ≼ a for some a ∈ A }`
    pub fn down_set(&self, a: &SubsetMask) -> SubsetMask {
        a.iter().fold(SubsetMask::empty(self.n), |acc, x| acc.union(&self.down[x]))
    }

    pub fn is_up_set(&self, a: &SubsetMask) -> bool {
        self.up_set(a) == *a
    }

    pub fn is_down_set(&self, a: &SubsetMask) -> bool {
        self.down_set(a) == *a
    }

    /// `A↑`: elements above every member of `A`.
    pub fn upper_bounds(&self, a: &SubsetMask) -> SubsetMask {
        a.iter().fold(self.full_set(), |acc, x| acc.intersection(&self.up[x]))
    }

    /// `A↓`: elements below every member of `A`.
    pub fn lower_bounds(&self, a: &SubsetMask) -> SubsetMask {
        a.iter().fold(self.full_set(), |acc, x| acc.intersection(&self.down[x]))
    }

    /// `A^δ = (A↑)↓`
    pub fn cut(&self, a: &SubsetMask) -> SubsetMask {
        self.lower_bounds(&self.upper_bounds(a))
    }

    /// Collapses `≈`-classes. Classes are numbered by their smallest member.
    pub fn quotient(&self) -> QuotientMap {
        let mut proj = vec![usize::MAX; self.n];
        let mut classes = Vec::new();
        for x in 0..self.n {
            if proj[x] != usize::MAX {
                continue;
            }
            let class = self.up[x].intersection(&self.down[x]);
            for y in class.iter() {
                proj[y] = classes.len();
            }
            classes.push(class);
        }
        let k = classes.len();
        let up = classes
            .iter()
            .map(|c| {
                let rep = c.first().expect("classes are nonempty");
                SubsetMask::from_elements(k, self.up[rep].iter().map(|y| proj[y]))
            })
            .collect();
        let target = FinitePoset(FinitePreorder::from_up_rows(k, up));
        QuotientMap { source: self.clone(), classes, target, proj }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ELEMENTS {
        return Err(Error::TooLarge { what: "carrier", size: n, cap: MAX_ELEMENTS });
    }
    Ok(())
}

/// An antisymmetric [`FinitePreorder`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinitePoset(FinitePreorder);

impl FinitePoset {
    pub fn try_from_preorder(p: FinitePreorder) -> Result<Self> {
        match p.antisymmetry_witness() {
            Some((x, y)) => Err(Error::NotAntisymmetric { x, y }),
            None => Ok(FinitePoset(p)),
        }
    }

    pub fn closure_of<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::try_from_preorder(FinitePreorder::closure_of(n, pairs)?)
    }

    pub fn chain(n: usize) -> Self {
        Self::closure_of(n, (1..n).map(|i| (i - 1, i))).expect("a chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        FinitePoset(FinitePreorder::identity(n))
    }

    pub fn as_preorder(&self) -> &FinitePreorder {
        &self.0
    }

    pub fn into_preorder(self) -> FinitePreorder {
        self.0
    }

    pub fn reversed(&self) -> Self {
        FinitePoset(self.0.reversed())
    }

    /// Every linear extension, as the sequence of elements from bottom to top.
    ///
    /// Emission order is lexicographic in the sequence; each extension appears
    /// exactly once.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.n);
        self.extend_linear(SubsetMask::empty(self.n), &mut prefix, &mut out);
        out
    }

    fn extend_linear(&self, placed: SubsetMask, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == self.n {
            out.push(prefix.clone());
            return;
        }
        for x in placed.complement().iter() {
            // x is available once everything strictly below it is placed
            let below = self.down[x].difference(&SubsetMask::singleton(self.n, x));
            if below.is_subset(&placed) {
                prefix.push(x);
                let mut next = placed;
                next.insert(x);
                self.extend_linear(next, prefix, out);
                prefix.pop();
            }
        }
    }

    /// One linear extension that lists `first` (a down-set) before everything
    /// else, breaking ties by index.
    pub fn linear_extension_prioritizing(&self, first: &SubsetMask) -> Vec<usize> {
        let mut placed = SubsetMask::empty(self.n);
        let mut seq = Vec::with_capacity(self.n);
        while seq.len() < self.n {
            let available = placed.complement().iter().filter(|&x| {
                let below = self.down[x].difference(&SubsetMask::singleton(self.n, x));
                below.is_subset(&placed)
            });
            let mut pick = None;
            for x in available {
                if first.contains(x) {
                    pick = Some(x);
                    break;
                }
                pick.get_or_insert(x);
            }
            let x = pick.expect("a finite poset always has an available element");
            placed.insert(x);
            seq.push(x);
        }
        seq
    }
}

impl Deref for FinitePoset {
    type Target = FinitePreorder;

    fn deref(&self) -> &FinitePreorder {
        &self.0
    }
}

impl From<FinitePoset> for FinitePreorder {
    fn from(p: FinitePoset) -> Self {
        p.0
    }
}

/// Projection of a preorder onto its poset of `≈`-classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientMap {
    pub source: FinitePreorder,
    /// Classes in order of their smallest member.
    pub classes: Vec<SubsetMask>,
    pub target: FinitePoset,
    /// Element → class index.
    pub proj: Vec<usize>,
}

impl QuotientMap {
    pub fn class_of(&self, x: usize) -> usize {
        self.proj[x]
    }

    /// Image of a subset of the source.
    pub fn project(&self, a: &SubsetMask) -> SubsetMask {
        SubsetMask::from_elements(self.classes.len(), a.iter().map(|x| self.proj[x]))
    }

    /// Preimage of a set of classes.
    pub fn pull_back(&self, c: &SubsetMask) -> SubsetMask {
        c.iter().fold(SubsetMask::empty(self.source.len()), |acc, k| acc.union(&self.classes[k]))
    }
}

/// All preorders on `0..n`, in ascending order of their off-diagonal relation bits.
pub fn all_preorders(n: usize) -> Vec<FinitePreorder> {
    assert!(n <= 5, "exhaustive enumeration is limited to n ≤ 5");
    let off: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << off.len()) {
        let mut up: Vec<SubsetMask> = (0..n).map(|x| SubsetMask::singleton(n, x)).collect();
        for (i, &(x, y)) in off.iter().enumerate() {
            if bits >> i & 1 == 1 {
                up[x].insert(y);
            }
        }
        let transitive = (0..n).all(|x| up[x].iter().all(|y| up[y].is_subset(&up[x])));
        if transitive {
            out.push(FinitePreorder::from_up_rows(n, up));
        }
    }
    out
}

/// All posets on `0..n` (labeled).
pub fn all_posets(n: usize) -> Vec<FinitePoset> {
    all_preorders(n).into_iter().filter_map(|p| FinitePoset::try_from_preorder(p).ok()).collect()
}

/// Smallest preorder containing a raw relation matrix.
pub fn transitive_reflexive_closure(raw: &[Vec<bool>]) -> Result<FinitePreorder> {
    let n = raw.len();
    let mut pairs = Vec::new();
    for (x, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::CarrierMismatch { expected: n, found: row.len() });
        }
        pairs.extend(row.iter().enumerate().filter(|(_, &b)| b).map(|(y, _)| (x, y)));
    }
    FinitePreorder::closure_of(n, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, xs.iter().copied())
    }

    fn v_poset() -> FinitePoset {
        // a=0, b=1, c=2 with a ≼ c, b ≼ c
        FinitePoset::closure_of(3, [(0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn closure_examples() {
        let empty = transitive_reflexive_closure(&vec![vec![false; 3]; 3]).unwrap();
        assert_eq!(empty, FinitePreorder::identity(3));

        let chain = FinitePreorder::closure_of(3, [(0, 1), (1, 2)]).unwrap();
        assert!(chain.le(0, 2));
        assert!(!chain.le(2, 0));
        assert_eq!(&chain, FinitePoset::chain(3).as_preorder());

        let sym = FinitePreorder::closure_of(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(sym, FinitePreorder::total(2));
    }

    #[test]
    fn closure_rejects_out_of_range() {
        assert_eq!(FinitePreorder::closure_of(2, [(0, 2)]), Err(Error::ElementOutOfRange { x: 2, n: 2 }));
    }

    #[test]
    fn matrix_validation() {
        let not_reflexive = vec![vec![false, true], vec![false, true]];
        assert_eq!(FinitePreorder::try_from_matrix(&not_reflexive), Err(Error::NotReflexive { x: 0 }));
        let not_transitive = vec![vec![true, true, false], vec![false, true, true], vec![false, false, true]];
        assert_eq!(FinitePreorder::try_from_matrix(&not_transitive), Err(Error::NotTransitive { x: 0, y: 1, z: 2 }));
        let chain = FinitePoset::chain(3);
        assert_eq!(&FinitePreorder::try_from_matrix(&chain.matrix()).unwrap(), chain.as_preorder());
    }

    #[test]
    fn quotient_examples() {
        let sym = FinitePreorder::total(2);
        let q = sym.quotient();
        assert_eq!(q.classes.len(), 1);
        assert_eq!(q.target.len(), 1);

        let chain = FinitePoset::chain(3);
        let q = chain.quotient();
        assert_eq!(q.proj, vec![0, 1, 2]);
        assert_eq!(q.target, chain);

        // 0 ≈ 1 ≼ 2
        let p = FinitePreorder::closure_of(3, [(0, 1), (1, 0), (0, 2)]).unwrap();
        let q = p.quotient();
        assert_eq!(q.classes, vec![set(3, &[0, 1]), set(3, &[2])]);
        assert_eq!(q.proj, vec![0, 0, 1]);
        assert_eq!(q.target, FinitePoset::chain(2));
    }

    #[test]
    fn quotient_classes_follow_smallest_member() {
        // 2 ≈ 0, 1 alone, 1 ≼ 0
        let p = FinitePreorder::closure_of(3, [(0, 2), (2, 0), (1, 0)]).unwrap();
        let q = p.quotient();
        assert_eq!(q.classes, vec![set(3, &[0, 2]), set(3, &[1])]);
        assert!(q.target.le(1, 0));
    }

    #[test]
    fn up_and_down_sets() {
        let chain = FinitePoset::chain(3);
        assert_eq!(chain.up_set(&set(3, &[1])), set(3, &[1, 2]));
        assert_eq!(chain.down_set(&SubsetMask::empty(3)), SubsetMask::empty(3));
        let anti = FinitePoset::antichain(2);
        assert_eq!(anti.up_set(&set(2, &[0])), set(2, &[0]));
    }

    #[test]
    fn bounds_and_cuts() {
        let v = v_poset();
        assert_eq!(v.upper_bounds(&set(3, &[0, 1])), set(3, &[2]));
        assert_eq!(v.cut(&set(3, &[0, 1])), set(3, &[0, 1, 2]));
        assert_eq!(v.upper_bounds(&SubsetMask::empty(3)), SubsetMask::full(3));
        assert_eq!(v.cut(&SubsetMask::empty(3)), v.lower_bounds(&SubsetMask::full(3)));
        assert_eq!(v.cut(&SubsetMask::empty(3)), SubsetMask::empty(3));
    }

    #[test]
    fn principal_cuts_on_small_posets() {
        for n in 0..=4 {
            for p in all_posets(n) {
                for x in 0..n {
                    let single = SubsetMask::singleton(n, x);
                    assert_eq!(p.cut(&single), p.down_set(&single));
                }
            }
        }
    }

    #[test]
    fn cut_is_closure_operator() {
        for n in 0..=4 {
            for p in all_preorders(n) {
                for a in SubsetMask::all(n) {
                    let ca = p.cut(&a);
                    assert!(a.is_subset(&ca));
                    assert_eq!(p.cut(&ca), ca);
                    for b in a.subsets() {
                        assert!(p.cut(&b).is_subset(&ca));
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        // labeled preorders and posets, OEIS A000798 / A001035
        let preorders: Vec<usize> = (0..=4).map(|n| all_preorders(n).len()).collect();
        assert_eq!(preorders, vec![1, 1, 4, 29, 355]);
        let posets: Vec<usize> = (0..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(posets, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn quotient_reflects_order_exhaustively() {
        for n in 0..=4 {
            for p in all_preorders(n) {
                let q = p.quotient();
                assert!(q.target.is_antisymmetric());
                for x in 0..n {
                    for y in 0..n {
                        assert_eq!(p.le(x, y), q.target.le(q.proj[x], q.proj[y]));
                        assert_eq!(p.equiv(x, y), q.proj[x] == q.proj[y]);
                    }
                }
            }
        }
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for perm in permutations(n - 1) {
            for pos in 0..=perm.len() {
                let mut p = perm.clone();
                p.insert(pos, n - 1);
                out.push(p);
            }
        }
        out.sort();
        out
    }

    fn extension_by_brute_force(p: &FinitePoset) -> Vec<Vec<usize>> {
        permutations(p.len())
            .into_iter()
            .filter(|seq| {
                let mut rank = vec![0; seq.len()];
                for (i, &x) in seq.iter().enumerate() {
                    rank[x] = i;
                }
                p.strict_pairs().all(|(x, y)| rank[x] < rank[y])
            })
            .collect()
    }

    #[test]
    fn linear_extension_examples() {
        assert_eq!(FinitePoset::chain(3).linear_extensions(), vec![vec![0, 1, 2]]);
        assert_eq!(FinitePoset::antichain(2).linear_extensions(), vec![vec![0, 1], vec![1, 0]]);
        let v = v_poset();
        assert_eq!(v.linear_extensions(), extension_by_brute_force(&v));
        assert_eq!(v.linear_extensions().len(), 2);
        assert_eq!(FinitePoset::antichain(0).linear_extensions(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn linear_extensions_match_permutation_filter() {
        for n in 0..=4 {
            for p in all_posets(n) {
                assert_eq!(p.linear_extensions(), extension_by_brute_force(&p));
            }
        }
    }

    #[test]
    fn antichain_extension_counts() {
        let mut fact = 1;
        for k in 0..=5 {
            if k > 0 {
                fact *= k;
            }
            assert_eq!(FinitePoset::antichain(k).linear_extensions().len(), fact);
        }
    }

    #[test]
    fn prioritized_extension_puts_ideal_first() {
        let v = v_poset();
        let seq = v.linear_extension_prioritizing(&v.principal_ideal(1));
        assert_eq!(seq, vec![1, 0, 2]);
    }
}
