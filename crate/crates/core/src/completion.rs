//! Dedekind-MacNeille completion, way-below relations, Frink ideals and
//! precontinuity.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::order::{FinitePoset, FinitePreorder};
use crate::subset::{SubsetMask, MAX_ELEMENTS};

/// Largest lattice on which directed subsets are enumerated.
pub const DIRECTED_ENUMERATION_CAP: usize = 12;

/// The completion `δ(X)`: every subset fixed by `A ↦ (A↑)↓`, ordered by
/// inclusion, with `x ↦ ↓x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutLattice {
    base: FinitePoset,
    /// Ascending by bit value, so inclusion-smaller cuts come first.
    cuts: Vec<SubsetMask>,
    embed: Vec<usize>,
}

/// Cuts are the intersections of principal ideals; the empty intersection
/// contributes the full set.
pub fn macneille(p: &FinitePoset) -> CutLattice {
    let n = p.len();
    let mut cuts = BTreeSet::from([SubsetMask::full(n)]);
    for u in 0..n {
        let ideal = p.principal_ideal(u);
        let fresh: Vec<_> = cuts.iter().map(|c| c.intersection(&ideal)).collect();
        cuts.extend(fresh);
    }
    let cuts: Vec<_> = cuts.into_iter().collect();
    let embed = (0..n).map(|x| cuts.binary_search(&p.principal_ideal(x)).expect("principal ideals are cuts")).collect();
    CutLattice { base: p.clone(), cuts, embed }
}

/// `{A^δ | A ⊆ X}` straight from the definition, ascending.
pub fn cuts_by_definition(p: &FinitePreorder) -> Vec<SubsetMask> {
    SubsetMask::all(p.len()).map(|a| p.cut(&a)).collect::<BTreeSet<_>>().into_iter().collect()
}

impl CutLattice {
    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn cuts(&self) -> &[SubsetMask] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    /// Never true: the full set is always a cut.
    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    /// Index of `↓x`.
    pub fn embed(&self, x: usize) -> usize {
        self.embed[x]
    }

    pub fn index_of(&self, c: &SubsetMask) -> Option<usize> {
        self.cuts.binary_search(c).ok()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.cuts[i].is_subset(&self.cuts[j])
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.index_of(&self.cuts[i].intersection(&self.cuts[j])).expect("cuts are closed under intersection")
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        let c = self.base.cut(&self.cuts[i].union(&self.cuts[j]));
        self.index_of(&c).expect("a cut of anything is a cut")
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.cuts.len() - 1
    }

    /// The completion as a poset on cut indices.
    pub fn to_poset(&self) -> Result<FinitePoset> {
        let k = self.cuts.len();
        if k > MAX_ELEMENTS {
            return Err(Error::TooLarge { what: "cut lattice", size: k, cap: MAX_ELEMENTS });
        }
        let pairs = (0..k).flat_map(|i| (0..k).filter(move |&j| self.le(i, j)).map(move |j| (i, j)));
        FinitePoset::closure_of(k, pairs)
    }

    /// Checks every structural property of a completion, reporting the first
    /// failure.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Defect(msg));
        let n = self.base.len();
        if let Some(c) = self.cuts.iter().find(|c| self.base.cut(c) != **c) {
            return fail(format!("{c} is not fixed by the cut operator"));
        }
        if self.cuts.last() != Some(&SubsetMask::full(n)) {
            return fail("full set missing".into());
        }
        for a in &self.cuts {
            for b in &self.cuts {
                if self.index_of(&a.intersection(b)).is_none() {
                    return fail(format!("{a} ∩ {b} is not a cut"));
                }
            }
        }
        if !(0..self.len()).all(|i| self.le(self.bottom(), i) && self.le(i, self.top())) {
            return fail("missing bound".into());
        }
        // intersection-closure with a top already forces a complete lattice;
        // the direct bound check is cubic, so it only runs on small lattices
        for i in 0..self.len().min(64) {
            for j in 0..self.len().min(64) {
                let m = self.meet(i, j);
                let s = self.join(i, j);
                let lower = (0..self.len()).filter(|&k| self.le(k, i) && self.le(k, j));
                if !(self.le(m, i) && self.le(m, j) && lower.clone().all(|k| self.le(k, m))) {
                    return fail(format!("meet of {} and {} is wrong", self.cuts[i], self.cuts[j]));
                }
                let upper = (0..self.len()).filter(|&k| self.le(i, k) && self.le(j, k));
                if !(self.le(i, s) && self.le(j, s) && upper.clone().all(|k| self.le(s, k))) {
                    return fail(format!("join of {} and {} is wrong", self.cuts[i], self.cuts[j]));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.base.le(x, y) != self.le(self.embed(x), self.embed(y)) {
                    return fail(format!("embedding does not reflect {x} ≼ {y}"));
                }
            }
        }
        Ok(())
    }
}

/// Least element of `a`, if any.
fn least(p: &FinitePreorder, a: &SubsetMask) -> Option<usize> {
    a.iter().find(|&s| a.iter().all(|u| p.le(s, u)))
}

/// Supremum of `a`, if it exists.
pub fn join_of(p: &FinitePoset, a: &SubsetMask) -> Option<usize> {
    least(p, &p.upper_bounds(a))
}

/// Nonempty with a bottom and all binary joins, which on a finite carrier
/// yields every join.
pub fn is_complete_lattice(p: &FinitePoset) -> bool {
    let n = p.len();
    n > 0
        && least(p, &SubsetMask::full(n)).is_some()
        && (0..n).all(|x| (x + 1..n).all(|y| join_of(p, &SubsetMask::from_elements(n, [x, y])).is_some()))
}

/// How to evaluate `≪`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum WayBelowMode {
    /// `x ≪ y ⟺ x ≼ y`, valid on every finite lattice.
    #[default]
    Fast,
    /// Quantify over every directed subset.
    BruteForce,
}

/// Nonempty subsets in which every pair has an upper bound inside the subset.
pub fn directed_subsets(p: &FinitePoset) -> Result<Vec<SubsetMask>> {
    let n = p.len();
    if n > DIRECTED_ENUMERATION_CAP {
        return Err(Error::TooLarge { what: "directed-subset enumeration", size: n, cap: DIRECTED_ENUMERATION_CAP });
    }
    Ok(SubsetMask::all(n)
        .filter(|d| !d.is_empty())
        .filter(|d| {
            d.iter()
                .all(|x| d.iter().all(|y| !p.principal_filter(x).intersection(&p.principal_filter(y)).is_disjoint(d)))
        })
        .collect())
}

/// Full `≪` matrix, `rel[x][y]` meaning `x ≪ y`.
pub fn way_below_relation(l: &FinitePoset, mode: WayBelowMode) -> Result<Vec<Vec<bool>>> {
    if !is_complete_lattice(l) {
        return Err(Error::NotALattice);
    }
    let n = l.len();
    match mode {
        WayBelowMode::Fast => Ok(l.matrix()),
        WayBelowMode::BruteForce => {
            let directed: Vec<_> =
                directed_subsets(l)?.into_iter().map(|d| (join_of(l, &d).expect("complete lattice"), d)).collect();
            Ok((0..n)
                .map(|x| {
                    let above_x = l.principal_filter(x);
                    (0..n).map(|y| directed.iter().all(|(sup, d)| !l.le(y, *sup) || !d.is_disjoint(&above_x))).collect()
                })
                .collect())
        }
    }
}

pub fn way_below(l: &FinitePoset, x: usize, y: usize, mode: WayBelowMode) -> Result<bool> {
    Ok(way_below_relation(l, mode)?[x][y])
}

/// Every element is the join of the elements way below it.
///
/// Also evaluates the reformulation "`x ⋠ y` implies some `u ≪ x` with
/// `u ⋠ y`" and fails if the two verdicts differ. Directed subsets are
/// enumerated up to [`DIRECTED_ENUMERATION_CAP`] elements.
pub fn is_continuous_lattice(l: &FinitePoset) -> Result<bool> {
    let mode = if l.len() <= DIRECTED_ENUMERATION_CAP { WayBelowMode::BruteForce } else { WayBelowMode::Fast };
    let rel = way_below_relation(l, mode)?;
    let n = l.len();
    let approximants = |x: usize| SubsetMask::from_elements(n, (0..n).filter(|&u| rel[u][x]));
    let by_join = (0..n).all(|x| join_of(l, &approximants(x)) == Some(x));
    let by_approximation = (0..n).all(|x| (0..n).all(|y| l.le(x, y) || approximants(x).iter().any(|u| !l.le(u, y))));
    if by_join != by_approximation {
        return Err(Error::Defect(format!(
            "continuity by joins ({by_join}) and by approximation ({by_approximation}) disagree"
        )));
    }
    Ok(by_join)
}

/// Whether the empty set may count as a Frink ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum FrinkEmpty {
    /// The empty set qualifies whenever `∅^δ = ∅`.
    #[default]
    Allow,
    /// Ideals are required to be nonempty.
    Forbid,
}

/// Subsets `I` containing `Z^δ` for every `Z ⊆ I`, ascending.
///
/// Taking `Z = I` shows these are exactly the cuts, so they are read off the
/// completion; small inputs are cross-checked against the definition.
pub fn frink_ideals(p: &FinitePoset, policy: FrinkEmpty) -> Vec<SubsetMask> {
    let ideals: Vec<_> =
        macneille(p).cuts.into_iter().filter(|i| policy == FrinkEmpty::Allow || !i.is_empty()).collect();
    debug_assert!(p.len() > 8 || ideals == frink_ideals_by_definition(p, policy));
    ideals
}

/// Definition-level enumeration over all pairs `Z ⊆ I ⊆ X`.
pub fn frink_ideals_by_definition(p: &FinitePreorder, policy: FrinkEmpty) -> Vec<SubsetMask> {
    SubsetMask::all(p.len())
        .filter(|i| policy == FrinkEmpty::Allow || !i.is_empty())
        .filter(|i| i.subsets().all(|z| p.cut(&z).is_subset(i)))
        .collect()
}

/// `x ≪_e y`: every Frink ideal `I` with `y ∈ I^δ` contains `x`.
pub fn e_way_below(p: &FinitePoset, x: usize, y: usize, policy: FrinkEmpty) -> bool {
    frink_ideals(p, policy).iter().all(|i| !p.cut(i).contains(y) || i.contains(x))
}

/// Full `≪_e` matrix by quantifying over Frink ideals.
pub fn e_way_below_relation(p: &FinitePoset, policy: FrinkEmpty) -> Vec<Vec<bool>> {
    let n = p.len();
    let ideals: Vec<_> = frink_ideals(p, policy).into_iter().map(|i| (p.cut(&i), i)).collect();
    (0..n)
        .map(|x| (0..n).map(|y| ideals.iter().all(|(hull, i)| !hull.contains(y) || i.contains(x))).collect())
        .collect()
}

/// Every class `[x]` of the quotient lies in the cut of its `≪_e`-approximants.
pub fn is_precontinuous(q: &FinitePreorder, policy: FrinkEmpty) -> bool {
    let p = q.quotient().target;
    let n = p.len();
    let rel = e_way_below_relation(&p, policy);
    (0..n).all(|x| p.cut(&SubsetMask::from_elements(n, (0..n).filter(|&y| rel[y][x]))).contains(x))
}

/// [`is_precontinuous`] with `≪_e` replaced by `≼`, which it equals on finite
/// posets.
pub fn is_precontinuous_fast(q: &FinitePreorder) -> bool {
    let p = q.quotient().target;
    (0..p.len()).all(|x| p.cut(&p.principal_ideal(x)).contains(x))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AeksVerdict {
    pub precontinuous: bool,
    pub continuous_completion: bool,
    pub agree: bool,
}

/// Precontinuity of `q` against continuity of the completion of its
/// quotient, each by its own definition.
pub fn aeks_check(q: &FinitePreorder, policy: FrinkEmpty) -> Result<AeksVerdict> {
    let precontinuous = is_precontinuous(q, policy);
    let completion = macneille(&q.quotient().target).to_poset()?;
    let continuous_completion = is_continuous_lattice(&completion)?;
    Ok(AeksVerdict { precontinuous, continuous_completion, agree: precontinuous == continuous_completion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{all_posets, all_preorders};

    fn set(n: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, xs.iter().copied())
    }

    fn v_poset() -> FinitePoset {
        FinitePoset::closure_of(3, [(0, 2), (1, 2)]).unwrap()
    }

    fn diamond() -> FinitePoset {
        FinitePoset::closure_of(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn macneille_examples() {
        let l = macneille(&FinitePoset::antichain(2));
        assert_eq!(l.cuts(), &[SubsetMask::empty(2), set(2, &[0]), set(2, &[1]), SubsetMask::full(2)]);
        assert!(is_complete_lattice(&l.to_poset().unwrap()));

        let l = macneille(&FinitePoset::chain(3));
        assert_eq!(l.cuts(), &[set(3, &[0]), set(3, &[0, 1]), SubsetMask::full(3)]);

        assert_eq!(macneille(&FinitePoset::chain(1)).len(), 1);
        assert_eq!(macneille(&FinitePoset::chain(0)).cuts(), &[SubsetMask::empty(0)]);

        let l = macneille(&v_poset());
        assert_eq!(l.cuts(), &[SubsetMask::empty(3), set(3, &[0]), set(3, &[1]), SubsetMask::full(3)]);
    }

    #[test]
    fn cut_examples() {
        assert_eq!(v_poset().cut(&set(3, &[0, 1])), SubsetMask::full(3));
    }

    #[test]
    fn macneille_matches_definition_and_verifies() {
        for n in 0..=4 {
            for p in all_posets(n) {
                let l = macneille(&p);
                assert_eq!(l.cuts(), &cuts_by_definition(&p)[..]);
                l.verify().unwrap();
                for x in 0..n {
                    assert_eq!(p.cut(&p.principal_ideal(x)), p.principal_ideal(x));
                    assert_eq!(p.cut(&SubsetMask::singleton(n, x)), p.principal_ideal(x));
                }
            }
        }
    }

    #[test]
    fn completion_of_standard_example_is_too_large_for_a_poset() {
        // a_i < b_j for i ≠ j; the completion is the Boolean lattice on 8 atoms
        let pairs = (0..8).flat_map(|i| (0..8).filter(move |&j| j != i).map(move |j| (i, 8 + j)));
        let l = macneille(&FinitePoset::closure_of(16, pairs).unwrap());
        assert_eq!(l.len(), 256);
        assert_eq!(macneille(&FinitePoset::antichain(8)).len(), 10);
        assert!(matches!(l.to_poset(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn lattice_recognition() {
        assert!(is_complete_lattice(&diamond()));
        assert!(is_complete_lattice(&FinitePoset::chain(1)));
        assert!(!is_complete_lattice(&FinitePoset::chain(0)));
        assert!(!is_complete_lattice(&FinitePoset::antichain(2)));
        assert!(!is_complete_lattice(&v_poset()));
        assert_eq!(way_below_relation(&v_poset(), WayBelowMode::Fast), Err(Error::NotALattice));
    }

    #[test]
    fn way_below_modes_agree() {
        for n in 1..=4 {
            for p in all_posets(n).into_iter().filter(is_complete_lattice) {
                let brute = way_below_relation(&p, WayBelowMode::BruteForce).unwrap();
                assert_eq!(brute, way_below_relation(&p, WayBelowMode::Fast).unwrap());
                assert!((0..n).all(|x| brute[x][x]));
                assert!(is_continuous_lattice(&p).unwrap());
            }
        }
    }

    #[test]
    fn diamond_way_below() {
        let d = diamond();
        assert!(way_below(&d, 1, 3, WayBelowMode::BruteForce).unwrap());
        assert!(!way_below(&d, 1, 2, WayBelowMode::BruteForce).unwrap());
        assert!(is_continuous_lattice(&d).unwrap());
    }

    #[test]
    fn completions_are_continuous() {
        for n in 0..=4 {
            for p in all_posets(n) {
                assert!(is_continuous_lattice(&macneille(&p).to_poset().unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn frink_examples() {
        assert_eq!(
            frink_ideals(&FinitePoset::chain(3), FrinkEmpty::Allow),
            vec![set(3, &[0]), set(3, &[0, 1]), SubsetMask::full(3)]
        );
        let a2 = FinitePoset::antichain(2);
        assert_eq!(frink_ideals(&a2, FrinkEmpty::Allow).len(), 4);
        assert_eq!(frink_ideals(&a2, FrinkEmpty::Forbid), vec![set(2, &[0]), set(2, &[1]), SubsetMask::full(2)]);
        assert_eq!(frink_ideals(&FinitePoset::chain(1), FrinkEmpty::Allow), vec![SubsetMask::full(1)]);
    }

    #[test]
    fn frink_matches_definition() {
        for n in 0..=4 {
            for p in all_posets(n) {
                for policy in [FrinkEmpty::Allow, FrinkEmpty::Forbid] {
                    assert_eq!(frink_ideals(&p, policy), frink_ideals_by_definition(&p, policy));
                }
            }
        }
    }

    #[test]
    fn e_way_below_is_the_order() {
        for n in 0..=4 {
            for p in all_posets(n) {
                for policy in [FrinkEmpty::Allow, FrinkEmpty::Forbid] {
                    assert_eq!(e_way_below_relation(&p, policy), p.matrix());
                }
                for x in 0..n {
                    for y in 0..n {
                        assert_eq!(e_way_below(&p, x, y, FrinkEmpty::Allow), p.le(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn every_small_preorder_is_precontinuous() {
        for n in 0..=4 {
            for q in all_preorders(n) {
                assert!(is_precontinuous_fast(&q));
                for policy in [FrinkEmpty::Allow, FrinkEmpty::Forbid] {
                    assert!(is_precontinuous(&q, policy));
                    let v = aeks_check(&q, policy).unwrap();
                    assert!(v.agree && v.precontinuous && v.continuous_completion);
                }
            }
        }
    }
}
