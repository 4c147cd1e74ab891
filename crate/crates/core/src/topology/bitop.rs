use std::collections::BTreeSet;

use super::FiniteTopology;
use crate::error::{Error, Result};
use crate::order::{FinitePoset, FinitePreorder, QuotientMap};
use crate::scalar::Scalar;
use crate::subset::SubsetMask;
use crate::valuation::Valuation;

/// A basic open `u × v` of the product topology missing the graph of `≼`,
/// witnessing `a ⋠ b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SeparatingBox {
    pub a: usize,
    pub b: usize,
    pub u: SubsetMask,
    pub v: SubsetMask,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProductClosedness {
    /// One box per pair `a ⋠ b`, lexicographic in `(a, b)`.
    Closed(Vec<SeparatingBox>),
    /// First pair `a ⋠ b` (lexicographic) with no separating box.
    Open { a: usize, b: usize },
}

impl ProductClosedness {
    pub fn is_closed(&self) -> bool {
        matches!(self, ProductClosedness::Closed(_))
    }
}

fn check_carriers(t1: &FiniteTopology, t2: &FiniteTopology, ord: &FinitePreorder) -> Result<()> {
    for found in [t1.len(), t2.len()] {
        if found != ord.len() {
            return Err(Error::CarrierMismatch { expected: ord.len(), found });
        }
    }
    Ok(())
}

/// Is the graph of `ord` closed in `t1 × t2`?
///
/// Only basic opens `U × V` are inspected. Shrinking a box keeps it off the
/// graph, so it suffices to try the minimal neighborhoods of `a` and `b`.
pub fn is_closed_in_product(t1: &FiniteTopology, t2: &FiniteTopology, ord: &FinitePreorder) -> ProductClosedness {
    let n = ord.len();
    let mut boxes = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if ord.le(a, b) {
                continue;
            }
            let u = t1.minimal_neighborhood(a);
            let v = t2.minimal_neighborhood(b);
            // U × V meets the graph iff some u ∈ U lies below some v ∈ V
            if !ord.up_set(&u).is_disjoint(&v) {
                return ProductClosedness::Open { a, b };
            }
            boxes.push(SeparatingBox { a, b, u, v });
        }
    }
    ProductClosedness::Closed(boxes)
}

/// Search for an increasing `t1`-neighborhood of `a` and a decreasing
/// `t2`-neighborhood of `b` that are disjoint, scanning every pair of opens
/// `U ∋ a`, `V ∋ b` and testing `i(U) ∩ d(V) = ∅`.
pub fn monotone_separation(
    t1: &FiniteTopology,
    t2: &FiniteTopology,
    ord: &FinitePreorder,
    a: usize,
    b: usize,
) -> Option<(SubsetMask, SubsetMask)> {
    for u in t1.neighborhoods(a) {
        let up = ord.up_set(u);
        for v in t2.neighborhoods(b) {
            let down = ord.down_set(v);
            if up.is_disjoint(&down) {
                return Some((up, down));
            }
        }
    }
    None
}

/// `(X, τ1, τ2, ≼)` whose order graph is known to be closed in `τ1 × τ2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitopPreorderedSpace {
    t1: FiniteTopology,
    t2: FiniteTopology,
    ord: FinitePreorder,
}

impl BitopPreorderedSpace {
    pub fn new(t1: FiniteTopology, t2: FiniteTopology, ord: FinitePreorder) -> Result<Self> {
        check_carriers(&t1, &t2, &ord)?;
        match is_closed_in_product(&t1, &t2, &ord) {
            ProductClosedness::Closed(_) => Ok(BitopPreorderedSpace { t1, t2, ord }),
            ProductClosedness::Open { a, b } => Err(Error::NotOrderClosed { a, b }),
        }
    }

    /// `(X, σ, ω, ≤)` for a finite poset.
    pub fn scott_lower(p: &FinitePoset) -> Self {
        Self::new(super::scott_topology(p), super::lower_topology(p), p.as_preorder().clone())
            .expect("up-set and down-set topologies always close the order")
    }

    /// Up-set and down-set topologies of a preorder, which coincide with
    /// `(σ, ω)` when the preorder is antisymmetric.
    pub fn up_down(p: &FinitePreorder) -> Self {
        let t1 = FiniteTopology::alexandrov(p);
        let t2 = FiniteTopology::alexandrov(&p.reversed());
        Self::new(t1, t2, p.clone()).expect("up-set and down-set topologies always close the order")
    }

    pub fn len(&self) -> usize {
        self.ord.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ord.is_empty()
    }

    pub fn t1(&self) -> &FiniteTopology {
        &self.t1
    }

    pub fn t2(&self) -> &FiniteTopology {
        &self.t2
    }

    pub fn order(&self) -> &FinitePreorder {
        &self.ord
    }

    /// Separating boxes for every pair `a ⋠ b`.
    pub fn certificate(&self) -> Vec<SeparatingBox> {
        match is_closed_in_product(&self.t1, &self.t2, &self.ord) {
            ProductClosedness::Closed(boxes) => boxes,
            ProductClosedness::Open { .. } => unreachable!("closedness is checked on construction"),
        }
    }

    /// Quotient by `≈`, carrying both topologies along. Fails if the image
    /// order is not closed in the quotient topologies.
    pub fn quotient(&self) -> Result<(QuotientMap, BitopPreorderedSpace)> {
        let q = self.ord.quotient();
        let s = BitopPreorderedSpace::new(self.t1.quotient(&q), self.t2.quotient(&q), q.target.as_preorder().clone())?;
        Ok((q, s))
    }

    /// `τ1 ∨ τ2` passes the explicit subcover check on the whole carrier, and
    /// every pair `a ⋠ b` has a monotone separation.
    pub fn is_joincompact(&self) -> bool {
        let join = self.t1.join(&self.t2);
        let n = self.len();
        join.is_quasicompact(&SubsetMask::full(n))
            && (0..n).all(|a| {
                (0..n).all(|b| self.ord.le(a, b) || monotone_separation(&self.t1, &self.t2, &self.ord, a, b).is_some())
            })
    }

    pub(crate) fn is_decreasing_t1_closed(&self, a: &SubsetMask) -> bool {
        self.ord.is_down_set(a) && self.t1.is_closed(a)
    }

    pub(crate) fn is_increasing_t2_closed(&self, b: &SubsetMask) -> bool {
        self.ord.is_up_set(b) && self.t2.is_closed(b)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClosednessReport {
    Success,
    Violation(String),
}

impl ClosednessReport {
    pub fn is_success(&self) -> bool {
        matches!(self, ClosednessReport::Success)
    }
}

/// Closedness of monotone hulls and the point-closure consequences of an
/// order-closed space, plus the compactness of `τ1`-closed sets in `τ2`.
/// Stops at the first violation.
pub fn monotone_closedness_suite(s: &BitopPreorderedSpace) -> ClosednessReport {
    let n = s.len();
    let (t1, t2, ord) = (&s.t1, &s.t2, &s.ord);
    for a in 0..n {
        let d = ord.principal_ideal(a);
        if !t1.is_closed(&d) {
            return ClosednessReport::Violation(format!("d({a}) = {d} is not t1-closed"));
        }
        let i = ord.principal_filter(a);
        if !t2.is_closed(&i) {
            return ClosednessReport::Violation(format!("i({a}) = {i} is not t2-closed"));
        }
        for b in 0..n {
            let pt_b = SubsetMask::singleton(n, b);
            if t1.closure(&pt_b).contains(a) && !ord.le(a, b) {
                return ClosednessReport::Violation(format!("{a} ∈ cl_t1{{{b}}} but {a} ⋠ {b}"));
            }
            let pt_a = SubsetMask::singleton(n, a);
            if t2.closure(&pt_a).contains(b) && !ord.le(a, b) {
                return ClosednessReport::Violation(format!("{b} ∈ cl_t2{{{a}}} but {a} ⋠ {b}"));
            }
        }
    }
    for a in SubsetMask::all(n) {
        let i = ord.up_set(&a);
        if !t2.is_closed(&i) {
            return ClosednessReport::Violation(format!("i({a}) = {i} is not t2-closed"));
        }
        let d = ord.down_set(&a);
        if !t1.is_closed(&d) {
            return ClosednessReport::Violation(format!("d({a}) = {d} is not t1-closed"));
        }
    }
    if t1.join(t2).is_quasicompact(&SubsetMask::full(n)) {
        for c in t1.opens().iter().map(SubsetMask::complement) {
            if !t2.is_quasicompact(&c) {
                return ClosednessReport::Violation(format!("t1-closed {c} is not t2-compact"));
            }
        }
    }
    ClosednessReport::Success
}

/// A set on which "`τ1`-closed" and "`τ2`-quasicompact" disagree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CompactnessDiscrepancy {
    pub set: SubsetMask,
    pub t1_closed: bool,
    pub t2_compact: bool,
}

/// Every subset for which `τ1`-closedness and `τ2`-quasicompactness differ,
/// ascending. On a finite carrier every subset is quasicompact, so this lists
/// exactly the non-`τ1`-closed sets.
pub fn compactness_discrepancies(s: &BitopPreorderedSpace) -> Vec<CompactnessDiscrepancy> {
    SubsetMask::all(s.len())
        .map(|set| CompactnessDiscrepancy {
            set,
            t1_closed: s.t1.is_closed(&set),
            t2_compact: s.t2.is_quasicompact(&set),
        })
        .filter(|d| d.t1_closed != d.t2_compact)
        .collect()
}

/// Shrinks a `τ2`-open `o1 ⊇ a` around the decreasing set `a` to
/// `X ∖ i(cl_τ2(X ∖ o1))`, which is decreasing and `τ2`-open.
pub fn shrink_decreasing(s: &BitopPreorderedSpace, a: &SubsetMask, o1: &SubsetMask) -> Result<SubsetMask> {
    if !s.ord.is_down_set(a) || !s.t2.is_open(o1) || !a.is_subset(o1) {
        return Err(Error::Precondition(format!("need decreasing {a} inside t2-open {o1}")));
    }
    let o2 = s.ord.up_set(&s.t2.closure(&o1.complement())).complement();
    if !(s.t2.is_open(&o2) && s.ord.is_down_set(&o2) && a.is_subset(&o2) && o2.is_subset(o1)) {
        return Err(Error::CounterExample(format!("shrinking {o1} around {a} gave {o2}")));
    }
    Ok(o2)
}

/// Dual of [`shrink_decreasing`]: `X ∖ d(cl_τ1(X ∖ f1))` for increasing
/// `f ⊆ f1` with `f1` open in `τ1`.
pub fn shrink_increasing(s: &BitopPreorderedSpace, f: &SubsetMask, f1: &SubsetMask) -> Result<SubsetMask> {
    if !s.ord.is_up_set(f) || !s.t1.is_open(f1) || !f.is_subset(f1) {
        return Err(Error::Precondition(format!("need increasing {f} inside t1-open {f1}")));
    }
    let f2 = s.ord.down_set(&s.t1.closure(&f1.complement())).complement();
    if !(s.t1.is_open(&f2) && s.ord.is_up_set(&f2) && f.is_subset(&f2) && f2.is_subset(f1)) {
        return Err(Error::CounterExample(format!("shrinking {f1} around {f} gave {f2}")));
    }
    Ok(f2)
}

/// Disjoint `O1 ⊇ a` (decreasing, `τ2`-open) and `O2 ⊇ b` (increasing,
/// `τ1`-open), the lexicographically smallest such pair by bit value.
///
/// `Ok(None)` means the finite search found no pair.
pub fn find_normal_separation(
    s: &BitopPreorderedSpace,
    a: &SubsetMask,
    b: &SubsetMask,
) -> Result<Option<(SubsetMask, SubsetMask)>> {
    if !s.is_decreasing_t1_closed(a) {
        return Err(Error::Precondition(format!("{a} is not decreasing and t1-closed")));
    }
    if !s.is_increasing_t2_closed(b) {
        return Err(Error::Precondition(format!("{b} is not increasing and t2-closed")));
    }
    if !a.is_disjoint(b) {
        return Err(Error::Precondition(format!("{a} and {b} intersect")));
    }
    // increasing t1-opens are closed under intersection, so the smallest one
    // around b is contained in (and numerically below) every other candidate
    let n = s.len();
    let hull =
        s.t1.opens()
            .iter()
            .filter(|u| s.ord.is_up_set(u) && b.is_subset(u))
            .fold(SubsetMask::full(n), |acc, u| acc.intersection(u));
    let o1 = s.t2.opens().iter().find(|u| s.ord.is_down_set(u) && a.is_subset(u) && u.is_disjoint(&hull));
    Ok(o1.map(|&o1| (o1, hull)))
}

/// `(argmin, argmax)` of `f`; both empty on the empty carrier.
pub fn extrema<T: Scalar>(f: &Valuation<T>) -> (SubsetMask, SubsetMask) {
    let n = f.len();
    match (f.min_value(), f.max_value()) {
        (Some(lo), Some(hi)) => (
            SubsetMask::from_elements(n, (0..n).filter(|&x| f[x] == lo)),
            SubsetMask::from_elements(n, (0..n).filter(|&x| f[x] == hi)),
        ),
        _ => (SubsetMask::empty(n), SubsetMask::empty(n)),
    }
}

/// `(X, τ_d, τ_{d⁻¹}, ≼_d)` with `x ≼_d y` iff `d(x, y) = 0`.
///
/// Open balls `{y | d(x, y) < r}` only change at the distances that occur, so
/// the balls `{y | d(x, y) ≤ v}` for `v` among those distances generate `τ_d`.
pub fn from_quasi_pseudometric<T: Scalar>(d: &[Vec<T>]) -> Result<BitopPreorderedSpace> {
    let n = d.len();
    if let Some(row) = d.iter().find(|r| r.len() != n) {
        return Err(Error::InvalidMetric(format!("row of length {} in a {n}×{n} matrix", row.len())));
    }
    for x in 0..n {
        if !d[x][x].is_zero() {
            return Err(Error::InvalidMetric(format!("d({x}, {x}) = {} ≠ 0", d[x][x])));
        }
        for y in 0..n {
            if d[x][y] < T::zero() {
                return Err(Error::InvalidMetric(format!("d({x}, {y}) = {} < 0", d[x][y])));
            }
            for z in 0..n {
                if d[x][z] > d[x][y].clone() + d[y][z].clone() {
                    return Err(Error::InvalidMetric(format!("d({x}, {z}) > d({x}, {y}) + d({y}, {z})")));
                }
            }
        }
    }
    let mut radii: Vec<&T> = vec![];
    for v in d.iter().flatten() {
        if !radii.contains(&v) {
            radii.push(v);
        }
    }
    let mut forward = BTreeSet::new();
    let mut reverse = BTreeSet::new();
    for (x, row) in d.iter().enumerate() {
        for &r in &radii {
            forward.insert(SubsetMask::from_elements(n, (0..n).filter(|&y| row[y] <= *r)));
            reverse.insert(SubsetMask::from_elements(n, (0..n).filter(|&y| d[y][x] <= *r)));
        }
    }
    let forward: Vec<_> = forward.into_iter().collect();
    let reverse: Vec<_> = reverse.into_iter().collect();
    let ord = FinitePreorder::closure_of(
        n,
        (0..n).flat_map(|x| (0..n).filter(move |&y| d[x][y].is_zero()).map(move |y| (x, y))),
    )?;
    BitopPreorderedSpace::new(FiniteTopology::generate(n, &forward), FiniteTopology::generate(n, &reverse), ord)
}

/// `(X, τ, discrete, ≼_τ)`.
pub fn from_specialization(t: &FiniteTopology) -> Result<BitopPreorderedSpace> {
    BitopPreorderedSpace::new(t.clone(), FiniteTopology::discrete(t.len()), t.specialization_order())
}
