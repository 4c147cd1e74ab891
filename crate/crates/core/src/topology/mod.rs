//! Finite topologies, semicontinuity, and bitopological preordered spaces.

mod bitop;
mod urysohn;

pub use bitop::{
    compactness_discrepancies, extrema, find_normal_separation, from_quasi_pseudometric, from_specialization,
    is_closed_in_product, monotone_closedness_suite, monotone_separation, shrink_decreasing, shrink_increasing,
    BitopPreorderedSpace, ClosednessReport, CompactnessDiscrepancy, ProductClosedness, SeparatingBox,
};
pub use urysohn::{separate_points, urysohn_nachbin, UrysohnOutcome};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::order::{FinitePoset, FinitePreorder, QuotientMap};
use crate::scalar::Scalar;
use crate::subset::SubsetMask;
use crate::valuation::Valuation;

/// A topology on `0..n`, given by its complete family of open sets.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteTopology {
    n: usize,
    /// Ascending by bit value; always contains ∅ and the full set.
    opens: Vec<SubsetMask>,
    /// Smallest open set containing each point.
    minimal_nbhd: Vec<SubsetMask>,
}

impl FiniteTopology {
    /// Validates an explicit open family.
    pub fn new(n: usize, opens: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let family: BTreeSet<SubsetMask> = opens.into_iter().collect();
        if let Some(bad) = family.iter().find(|u| u.width() != n) {
            return Err(Error::CarrierMismatch { expected: n, found: bad.width() });
        }
        if !family.contains(&SubsetMask::empty(n)) {
            return Err(Error::NotATopology("missing the empty set".into()));
        }
        if !family.contains(&SubsetMask::full(n)) {
            return Err(Error::NotATopology("missing the full set".into()));
        }
        for a in &family {
            for b in &family {
                if !family.contains(&a.union(b)) {
                    return Err(Error::NotATopology(format!("{a} ∪ {b} is not open")));
                }
                if !family.contains(&a.intersection(b)) {
                    return Err(Error::NotATopology(format!("{a} ∩ {b} is not open")));
                }
            }
        }
        Ok(Self::from_sorted(n, family.into_iter().collect()))
    }

    fn from_sorted(n: usize, opens: Vec<SubsetMask>) -> Self {
        let minimal_nbhd = (0..n)
            .map(|x| opens.iter().filter(|u| u.contains(x)).fold(SubsetMask::full(n), |acc, u| acc.intersection(u)))
            .collect();
        FiniteTopology { n, opens, minimal_nbhd }
    }

    /// Smallest topology containing the subbase.
    pub fn generate(n: usize, subbase: &[SubsetMask]) -> Self {
        // basis: finite intersections, the empty intersection being the full set
        let mut basis = BTreeSet::from([SubsetMask::full(n)]);
        for s in subbase {
            assert_eq!(s.width(), n, "subbase member on a different carrier");
            let fresh: Vec<_> = basis.iter().map(|b| b.intersection(s)).collect();
            basis.extend(fresh);
        }
        // opens: arbitrary unions of basis members, the empty union being ∅
        let mut opens = BTreeSet::from([SubsetMask::empty(n)]);
        for b in &basis {
            let fresh: Vec<_> = opens.iter().map(|u| u.union(b)).collect();
            opens.extend(fresh);
        }
        Self::from_sorted(n, opens.into_iter().collect())
    }

    pub fn discrete(n: usize) -> Self {
        let points: Vec<_> = (0..n).map(|x| SubsetMask::singleton(n, x)).collect();
        Self::generate(n, &points)
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::generate(n, &[])
    }

    /// Opens are exactly the up-sets of `p`.
    pub fn alexandrov(p: &FinitePreorder) -> Self {
        let filters: Vec<_> = (0..p.len()).map(|x| p.principal_filter(x)).collect();
        Self::generate(p.len(), &filters)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn opens(&self) -> &[SubsetMask] {
        &self.opens
    }

    pub fn is_open(&self, a: &SubsetMask) -> bool {
        self.opens.binary_search(a).is_ok()
    }

    pub fn is_closed(&self, a: &SubsetMask) -> bool {
        self.is_open(&a.complement())
    }

    /// Smallest open set containing `x`.
    pub fn minimal_neighborhood(&self, x: usize) -> SubsetMask {
        self.minimal_nbhd[x]
    }

    /// Opens containing `x`, ascending.
    pub fn neighborhoods(&self, x: usize) -> impl Iterator<Item = &SubsetMask> {
        self.opens.iter().filter(move |u| u.contains(x))
    }

    pub fn interior(&self, a: &SubsetMask) -> SubsetMask {
        self.opens.iter().filter(|u| u.is_subset(a)).fold(SubsetMask::empty(self.n), |acc, u| acc.union(u))
    }

    pub fn closure(&self, a: &SubsetMask) -> SubsetMask {
        self.interior(&a.complement()).complement()
    }

    /// `τ1 ∨ τ2`, generated by both open families.
    pub fn join(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "join of topologies on different carriers");
        let subbase: Vec<_> = self.opens.iter().chain(&other.opens).copied().collect();
        Self::generate(self.n, &subbase)
    }

    /// Quotient topology along `q`: a set of classes is open iff its preimage is.
    pub fn quotient(&self, q: &QuotientMap) -> Self {
        assert_eq!(self.n, q.source.len(), "quotient map on a different carrier");
        let k = q.classes.len();
        let opens: Vec<_> = SubsetMask::all(k).filter(|c| self.is_open(&q.pull_back(c))).collect();
        Self::from_sorted(k, opens)
    }

    /// `x ≼ y` iff `x ∈ cl{y}`, i.e. every open set containing `x` contains `y`.
    pub fn specialization_order(&self) -> FinitePreorder {
        let up = (0..self.n)
            .map(|x| {
                SubsetMask::from_elements(self.n, (0..self.n).filter(|&y| self.neighborhoods(x).all(|u| u.contains(y))))
            })
            .collect();
        FinitePreorder::from_up_rows(self.n, up)
    }

    /// Extracts a finite subcover of `target` from `cover`, returned as indices
    /// into `cover`; `None` when `cover` does not cover `target`.
    ///
    /// Each point picks the first member containing it, so the subcover has at
    /// most `|target|` members.
    pub fn finite_subcover(cover: &[SubsetMask], target: &SubsetMask) -> Option<Vec<usize>> {
        let mut chosen = BTreeSet::new();
        for x in target.iter() {
            chosen.insert(cover.iter().position(|u| u.contains(x))?);
        }
        let covered = chosen.iter().fold(SubsetMask::empty(target.width()), |acc, &i| acc.union(&cover[i]));
        debug_assert!(target.is_subset(&covered));
        Some(chosen.into_iter().collect())
    }

    /// Every open cover of `a` (drawn from this topology) has a finite subcover.
    ///
    /// On a finite carrier the family of all opens meeting `a` is itself the
    /// largest cover; we still run the subcover extraction on it.
    pub fn is_quasicompact(&self, a: &SubsetMask) -> bool {
        let cover: Vec<_> = self.opens.iter().filter(|u| !u.is_disjoint(a)).copied().collect();
        let union = cover.iter().fold(SubsetMask::empty(self.n), |acc, u| acc.union(u));
        if !a.is_subset(&union) {
            // cannot happen: the full set is open
            return false;
        }
        Self::finite_subcover(&cover, a).is_some()
    }
}

/// All up-sets of a finite poset.
///
/// A directed subset of a finite poset contains its own maximum, so the
/// inaccessibility-by-directed-suprema condition holds for every up-set.
pub fn scott_topology(p: &FinitePoset) -> FiniteTopology {
    FiniteTopology::alexandrov(p.as_preorder())
}

/// Generated by the complements of the principal filters `X ∖ ↑x`.
pub fn lower_topology(p: &FinitePoset) -> FiniteTopology {
    let n = p.len();
    let subbase: Vec<_> = (0..n).map(|x| p.principal_filter(x).complement()).collect();
    FiniteTopology::generate(n, &subbase)
}

/// Every strict super-level set `{f > r}`, `r` ranging over the values of
/// `f`, is open.
pub fn is_lower_semicontinuous<T: Scalar>(f: &Valuation<T>, t: &FiniteTopology) -> bool {
    f.len() == t.len() && f.values().iter().all(|r| t.is_open(&f.above(r)))
}

/// Every strict sub-level set `{f < r}` is open.
pub fn is_upper_semicontinuous<T: Scalar>(f: &Valuation<T>, t: &FiniteTopology) -> bool {
    f.len() == t.len() && f.values().iter().all(|r| t.is_open(&f.below(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{all_posets, all_preorders};
    use num_rational::Ratio;

    fn set(n: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, xs.iter().copied())
    }

    fn q(v: &[i64]) -> Valuation<Ratio<i64>> {
        Valuation::new(v.iter().map(|&x| Ratio::from_integer(x)).collect())
    }

    #[test]
    fn generation_examples() {
        assert_eq!(FiniteTopology::generate(3, &[]).opens(), &[SubsetMask::empty(3), SubsetMask::full(3)]);
        assert_eq!(FiniteTopology::discrete(3).opens().len(), 8);
        let t = FiniteTopology::generate(3, &[set(3, &[0]), set(3, &[0, 1])]);
        assert_eq!(t.opens(), &[SubsetMask::empty(3), set(3, &[0]), set(3, &[0, 1]), SubsetMask::full(3)]);
    }

    #[test]
    fn generation_matches_explicit_validation() {
        let t = FiniteTopology::generate(4, &[set(4, &[0, 1]), set(4, &[1, 2]), set(4, &[3])]);
        assert_eq!(FiniteTopology::new(4, t.opens().to_vec()).unwrap(), t);
        assert!(t.is_open(&set(4, &[1])));
        assert!(t.is_open(&set(4, &[1, 3])));
        assert!(!t.is_open(&set(4, &[0])));
    }

    #[test]
    fn validation_rejects_non_topologies() {
        let missing_union = [SubsetMask::empty(3), set(3, &[0]), set(3, &[1]), SubsetMask::full(3)];
        assert!(matches!(FiniteTopology::new(3, missing_union), Err(Error::NotATopology(_))));
        assert!(matches!(FiniteTopology::new(2, [SubsetMask::full(2)]), Err(Error::NotATopology(_))));
    }

    #[test]
    fn specialization_examples() {
        assert_eq!(FiniteTopology::discrete(3).specialization_order(), FinitePreorder::identity(3));
        assert_eq!(FiniteTopology::indiscrete(2).specialization_order(), FinitePreorder::total(2));
        let t = FiniteTopology::new(2, [SubsetMask::empty(2), set(2, &[1]), SubsetMask::full(2)]).unwrap();
        let s = t.specialization_order();
        assert!(s.le(0, 1));
        assert!(!s.le(1, 0));
    }

    #[test]
    fn specialization_agrees_with_closure_of_points() {
        for n in 0..=3 {
            for p in all_preorders(n) {
                let t = FiniteTopology::alexandrov(&p);
                let s = t.specialization_order();
                for x in 0..n {
                    for y in 0..n {
                        let cl = t.closure(&SubsetMask::singleton(n, y));
                        assert_eq!(s.le(x, y), cl.contains(x));
                    }
                }
                // up-set topologies recover their preorder
                assert_eq!(s, p);
            }
        }
    }

    #[test]
    fn scott_and_lower_on_chain() {
        let c = FinitePoset::chain(3);
        assert_eq!(
            scott_topology(&c).opens(),
            &[SubsetMask::empty(3), set(3, &[2]), set(3, &[1, 2]), SubsetMask::full(3)]
        );
        assert_eq!(
            lower_topology(&c).opens(),
            &[SubsetMask::empty(3), set(3, &[0]), set(3, &[0, 1]), SubsetMask::full(3)]
        );
    }

    #[test]
    fn scott_and_lower_on_antichain_are_discrete() {
        let a = FinitePoset::antichain(3);
        assert_eq!(scott_topology(&a), FiniteTopology::discrete(3));
        assert_eq!(lower_topology(&a), FiniteTopology::discrete(3));
        let one = FinitePoset::antichain(1);
        assert_eq!(scott_topology(&one), FiniteTopology::indiscrete(1));
        assert_eq!(scott_topology(&one), FiniteTopology::discrete(1));
    }

    /// Scott-open by definition: an up-set `A` such that any directed `D` with
    /// `sup D ∈ A` meets `A`.
    fn scott_open_by_definition(p: &FinitePoset, a: &SubsetMask) -> bool {
        if !p.is_up_set(a) {
            return false;
        }
        let n = p.len();
        SubsetMask::all(n).filter(|d| !d.is_empty()).all(|d| {
            let directed = d.iter().all(|x| d.iter().all(|y| !p.upper_bounds(&set(n, &[x, y])).is_disjoint(&d)));
            if !directed {
                return true;
            }
            let ub = p.upper_bounds(&d);
            let sup = ub.iter().find(|&s| ub.iter().all(|u| p.le(s, u)));
            match sup {
                Some(s) if a.contains(s) => !d.is_disjoint(a),
                _ => true,
            }
        })
    }

    #[test]
    fn scott_and_lower_are_up_and_down_sets() {
        for n in 0..=4 {
            for p in all_posets(n) {
                let ups: Vec<_> = SubsetMask::all(n).filter(|a| p.is_up_set(a)).collect();
                let downs: Vec<_> = SubsetMask::all(n).filter(|a| p.is_down_set(a)).collect();
                assert_eq!(scott_topology(&p).opens(), &ups[..]);
                assert_eq!(lower_topology(&p).opens(), &downs[..]);
                if n <= 3 {
                    let by_def: Vec<_> = SubsetMask::all(n).filter(|a| scott_open_by_definition(&p, a)).collect();
                    assert_eq!(by_def, ups);
                }
                assert_eq!(scott_topology(&p).specialization_order(), *p.as_preorder());
                assert_eq!(lower_topology(&p).specialization_order(), p.as_preorder().reversed());
            }
        }
    }

    #[test]
    fn semicontinuity_examples() {
        let c2 = FinitePoset::chain(2);
        let sigma = scott_topology(&c2);
        assert!(is_lower_semicontinuous(&q(&[0, 1]), &sigma));
        assert!(!is_lower_semicontinuous(&q(&[1, 0]), &sigma));
        for t in [FiniteTopology::indiscrete(3), FiniteTopology::discrete(3)] {
            assert!(is_lower_semicontinuous(&q(&[4, 4, 4]), &t));
            assert!(is_upper_semicontinuous(&q(&[4, 4, 4]), &t));
        }
    }

    fn grid_functions(n: usize, k: i64) -> Vec<Valuation<Ratio<i64>>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v: Vec<Ratio<i64>>| {
                    (0..=k).map(move |j| {
                        let mut w = v.clone();
                        w.push(Ratio::new(j, k));
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(Valuation::new).collect()
    }

    #[test]
    fn scott_lower_semicontinuity_is_monotonicity() {
        for n in 0..=3 {
            for p in all_posets(n) {
                let sigma = scott_topology(&p);
                let omega = lower_topology(&p);
                for f in grid_functions(n, 2) {
                    let mono = f.is_monotone(&p);
                    assert_eq!(is_lower_semicontinuous(&f, &sigma), mono);
                    assert_eq!(is_upper_semicontinuous(&f, &omega), mono);
                }
            }
        }
    }

    #[test]
    fn semicontinuity_works_for_floats() {
        let sigma = scott_topology(&FinitePoset::chain(3));
        assert!(is_lower_semicontinuous(&Valuation::new(vec![0.0, 0.5, 1.0]), &sigma));
        assert!(!is_lower_semicontinuous(&Valuation::new(vec![0.0, 1.0, 0.5]), &sigma));
    }

    #[test]
    fn closure_interior_duality() {
        let t = FiniteTopology::generate(4, &[set(4, &[0, 1]), set(4, &[1, 2])]);
        for a in SubsetMask::all(4) {
            assert_eq!(t.closure(&a), t.interior(&a.complement()).complement());
            assert!(a.is_subset(&t.closure(&a)));
            assert!(t.interior(&a).is_subset(&a));
            assert!(t.is_open(&t.interior(&a)));
            assert!(t.is_closed(&t.closure(&a)));
        }
    }

    #[test]
    fn minimal_neighborhoods() {
        let t = scott_topology(&FinitePoset::chain(3));
        assert_eq!(t.minimal_neighborhood(1), set(3, &[1, 2]));
        for x in 0..3 {
            assert_eq!(t.neighborhoods(x).next(), Some(&t.minimal_neighborhood(x)));
        }
    }

    #[test]
    fn join_of_scott_and_lower_is_discrete() {
        for n in 0..=4 {
            for p in all_posets(n) {
                assert_eq!(scott_topology(&p).join(&lower_topology(&p)), FiniteTopology::discrete(n));
            }
        }
    }

    #[test]
    fn subcover_extraction() {
        let cover = [set(3, &[0, 1]), set(3, &[1]), set(3, &[2])];
        assert_eq!(FiniteTopology::finite_subcover(&cover, &SubsetMask::full(3)), Some(vec![0, 2]));
        assert_eq!(FiniteTopology::finite_subcover(&cover[..2], &SubsetMask::full(3)), None);
        let t = FiniteTopology::discrete(3);
        assert!(SubsetMask::all(3).all(|a| t.is_quasicompact(&a)));
    }

    #[test]
    fn quotient_topology_of_up_sets() {
        for n in 0..=4 {
            for p in all_preorders(n) {
                let q = p.quotient();
                let lifted = FiniteTopology::alexandrov(&p).quotient(&q);
                assert_eq!(lifted, scott_topology(&q.target));
            }
        }
    }
}
