//! Utility families, Richter-Peleg representations and their passage through
//! quotients and completions.

use std::cmp::Ordering;
use std::ops::Index;

use crate::completion::{is_continuous_lattice, is_precontinuous_fast, macneille};
use crate::error::{Error, Result};
use crate::order::{FinitePoset, FinitePreorder, QuotientMap};
use crate::scalar::{max_of, min_of, Scalar};
use crate::subset::SubsetMask;
use crate::topology::{
    is_closed_in_product, is_lower_semicontinuous, is_upper_semicontinuous, lower_topology, scott_topology,
    separate_points, BitopPreorderedSpace,
};
use crate::valuation::Valuation;

/// Ordered list of functions on a common carrier.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Family<T> {
    n: usize,
    members: Vec<Valuation<T>>,
}

impl<T: Scalar> Family<T> {
    pub fn new(n: usize, members: Vec<Valuation<T>>) -> Result<Self> {
        for f in &members {
            f.check_len(n)?;
        }
        Ok(Family { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Family { n, members: Vec::new() }
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Valuation<T>] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Valuation<T>> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Valuation<T>> {
        self.members.iter()
    }

    pub fn contains(&self, f: &Valuation<T>) -> bool {
        self.members.contains(f)
    }

    /// Appends `f` unless an equal member is already present.
    pub fn push_unique(&mut self, f: Valuation<T>) -> Result<bool> {
        f.check_len(self.n)?;
        if self.contains(&f) {
            return Ok(false);
        }
        self.members.push(f);
        Ok(true)
    }

    fn with_member_replaced(&self, i: usize, f: Valuation<T>) -> Self {
        let mut members = self.members.clone();
        members[i] = f;
        Family { n: self.n, members }
    }
}

impl<T> Index<usize> for Family<T> {
    type Output = Valuation<T>;

    fn index(&self, i: usize) -> &Valuation<T> {
        &self.members[i]
    }
}

/// `max_x |f(x) − g(x)|`, zero on the empty carrier.
pub fn sup_norm_distance<T: Scalar>(f: &Valuation<T>, g: &Valuation<T>) -> Result<T> {
    g.check_len(f.len())?;
    Ok(f.values().iter().zip(g.values()).map(|(a, b)| T::abs_diff(a, b)).fold(T::zero(), |m, d| max_of(&m, &d)))
}

/// `x ≼ y` iff every member has `f(x) ≤ f(y)`.
pub fn preorder_from_family<T: Scalar>(v: &Family<T>) -> FinitePreorder {
    let n = v.carrier();
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| v.iter().all(|f| f[x] <= f[y]));
    FinitePreorder::closure_of(n, pairs).expect("pairs lie in the carrier")
}

pub fn is_multi_utility<T: Scalar>(v: &Family<T>, p: &FinitePreorder) -> bool {
    v.carrier() == p.len() && preorder_from_family(v) == *p
}

/// Weakly monotone, and strictly increasing across strict pairs.
pub fn is_rp_utility<T: Scalar>(f: &Valuation<T>, p: &FinitePreorder) -> bool {
    f.is_monotone(p) && p.strict_pairs().filter(|&(x, y)| p.lt(x, y)).all(|(x, y)| f[x] < f[y])
}

pub fn is_rp_multi_utility<T: Scalar>(v: &Family<T>, p: &FinitePreorder) -> bool {
    is_multi_utility(v, p) && v.iter().all(|f| is_rp_utility(f, p))
}

/// Some member tells apart every two distinct points.
pub fn is_separating<T: Scalar>(v: &Family<T>) -> bool {
    let n = v.carrier();
    (0..n).all(|x| (x + 1..n).all(|y| v.iter().any(|f| f[x] != f[y])))
}

fn lex_cmp<T: Scalar>(a: &Valuation<T>, b: &Valuation<T>) -> Ordering {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Member positions sorted lexicographically by value, for fast membership.
struct SortedIndex(Vec<usize>);

impl SortedIndex {
    fn build<T: Scalar>(members: &[Valuation<T>]) -> Self {
        let mut idx: Vec<usize> = (0..members.len()).collect();
        idx.sort_by(|&i, &j| lex_cmp(&members[i], &members[j]));
        SortedIndex(idx)
    }

    fn find<T: Scalar>(&self, members: &[Valuation<T>], f: &Valuation<T>) -> std::result::Result<usize, usize> {
        self.0.binary_search_by(|&i| lex_cmp(&members[i], f))
    }
}

/// Closure under pointwise max and min. Original members keep their
/// positions; new members follow in the order they are first produced.
pub fn lattice_closure<T: Scalar>(v: &Family<T>) -> Family<T> {
    let mut members: Vec<Valuation<T>> = Vec::new();
    let mut index = SortedIndex(Vec::new());
    let mut insert = |members: &mut Vec<Valuation<T>>, f: Valuation<T>| {
        if let Err(at) = index.find(members, &f) {
            index.0.insert(at, members.len());
            members.push(f);
        }
    };
    for f in v.iter() {
        insert(&mut members, f.clone());
    }
    let mut k = 0;
    while k < members.len() {
        for j in 0..=k {
            let hi = members[k].pointwise_max(&members[j]);
            let lo = members[k].pointwise_min(&members[j]);
            insert(&mut members, hi);
            insert(&mut members, lo);
        }
        k += 1;
    }
    Family { n: v.carrier(), members }
}

pub fn is_lattice_closed<T: Scalar>(v: &Family<T>) -> bool {
    let index = SortedIndex::build(v.members());
    let has = |f: &Valuation<T>| index.find(v.members(), f).is_ok();
    v.iter().all(|f| v.iter().all(|g| has(&f.pointwise_max(g)) && has(&f.pointwise_min(g))))
}

/// Rescaling any single member by `a·f + b`, `a ∈ {1/2, 2}`, `b ∈ {−1, 1}`,
/// leaves the induced preorder unchanged.
pub fn cone_invariance_check<T: Scalar>(v: &Family<T>) -> bool {
    let base = preorder_from_family(v);
    let one = T::one();
    let coefficients = [T::half(), T::two()];
    let shifts = [T::zero() - one.clone(), one];
    (0..v.len()).all(|i| {
        coefficients
            .iter()
            .all(|a| shifts.iter().all(|b| preorder_from_family(&v.with_member_replaced(i, v[i].affine(a, b))) == base))
    })
}

/// Adding the constants 0 and 1 leaves the induced preorder unchanged.
pub fn constant_invariance_check<T: Scalar>(v: &Family<T>) -> bool {
    let base = preorder_from_family(v);
    [T::zero(), T::one()].into_iter().all(|c| {
        let mut w = v.clone();
        w.members.push(Valuation::constant(v.carrier(), c));
        preorder_from_family(&w) == base
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Interpolation<T> {
    /// Built from matching members; equals the target.
    Found(Valuation<T>),
    /// No member agrees with the target at both points.
    NoMatch { x: usize, y: usize },
}

/// Rebuilds `phi` from a lattice-closed family that matches it on every pair
/// of points: `g_x = min_y f_xy`, then `max_x g_x`, with `f_xy` the first
/// member agreeing with `phi` at `x` and `y`.
pub fn lattice_interpolate<T: Scalar>(phi: &Valuation<T>, l: &Family<T>) -> Result<Interpolation<T>> {
    phi.check_len(l.carrier())?;
    if !is_lattice_closed(l) {
        return Err(Error::NotLatticeClosed);
    }
    let n = l.carrier();
    let mut matchers = vec![vec![0; n]; n];
    for x in 0..n {
        for y in x..n {
            match l.iter().position(|f| f[x] == phi[x] && f[y] == phi[y]) {
                Some(i) => {
                    matchers[x][y] = i;
                    matchers[y][x] = i;
                }
                None => return Ok(Interpolation::NoMatch { x, y }),
            }
        }
    }
    let mut result: Option<Valuation<T>> = None;
    for row in &matchers {
        let g = row.iter().map(|&i| l[i].clone()).reduce(|a, b| a.pointwise_min(&b)).expect("n > 0 inside the loop");
        result = Some(match result {
            None => g,
            Some(r) => r.pointwise_max(&g),
        });
    }
    let result = result.unwrap_or_else(|| phi.clone());
    if result != *phi {
        return Err(Error::Defect(format!("interpolation produced {result}, expected {phi}")));
    }
    Ok(Interpolation::Found(result))
}

/// Position in `seq`, divided by `len − 1` (a single point gets 0).
pub fn rank_valuation<T: Scalar>(seq: &[usize]) -> Valuation<T> {
    let n = seq.len();
    let mut values = vec![T::zero(); n];
    let denom = T::from_usize(n.saturating_sub(1));
    for (rank, &x) in seq.iter().enumerate() {
        if n > 1 {
            values[x] = T::from_usize(rank) / denom.clone();
        }
    }
    Valuation::new(values)
}

/// Scaled ranks along every linear extension, in extension order.
pub fn rp_family_from_linear_extensions<T: Scalar>(p: &FinitePoset) -> Family<T> {
    let members = p.linear_extensions().iter().map(|e| rank_valuation(e)).collect();
    Family { n: p.len(), members }
}

/// For each `y`, the extension listing `↓y` first; deduplicated. Already a
/// multi-utility, and far smaller than the set of all extensions.
pub fn realizer_family<T: Scalar>(p: &FinitePoset) -> Family<T> {
    let mut out = Family::empty(p.len());
    for y in 0..p.len() {
        out.push_unique(rank_valuation(&p.linear_extension_prioritizing(&p.principal_ideal(y)))).expect("same carrier");
    }
    out
}

/// `f̃ ∘ proj`.
pub fn lift_through_quotient<T: Scalar>(q: &QuotientMap, f_tilde: &Valuation<T>) -> Result<Valuation<T>> {
    f_tilde.check_len(q.classes.len())?;
    Ok(Valuation::new(q.proj.iter().map(|&c| f_tilde[c].clone()).collect()))
}

/// Inverse of [`lift_through_quotient`] on class-constant functions.
pub fn push_to_quotient<T: Scalar>(q: &QuotientMap, f: &Valuation<T>) -> Result<Valuation<T>> {
    f.check_len(q.source.len())?;
    let mut values = Vec::with_capacity(q.classes.len());
    for (k, class) in q.classes.iter().enumerate() {
        let rep = class.first().expect("classes are nonempty");
        if class.iter().any(|x| f[x] != f[rep]) {
            return Err(Error::NotClassConstant { class: k });
        }
        values.push(f[rep].clone());
    }
    Ok(Valuation::new(values))
}

/// Rank function on the completion along the extension that lists every cut
/// inside `c` first, each block ascending by bit value.
fn cut_rank<T: Scalar>(cuts: &[SubsetMask], c: &SubsetMask) -> Vec<T> {
    let k = cuts.len();
    let (inside, outside): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| cuts[i].is_subset(c));
    let order: Vec<usize> = inside.into_iter().chain(outside).collect();
    rank_valuation::<T>(&order).into_values()
}

/// Richter-Peleg multi-utility of `q` whose members are Scott lower and
/// lower-topology upper semicontinuous on its quotient.
///
/// Built on the completion of the quotient: one strictly monotone rank
/// function per class, restricted along `x ↦ ↓x` and lifted back.
pub fn scott_omega_rp_family<T: Scalar>(q: &FinitePreorder) -> Result<Family<T>> {
    if !is_precontinuous_fast(q) {
        return Err(Error::Precondition("preorder is not precontinuous".into()));
    }
    let quot = q.quotient();
    let target = &quot.target;
    let completion = macneille(target);
    let mut classes = Family::empty(target.len());
    for y in 0..target.len() {
        let ranks = cut_rank::<T>(completion.cuts(), &completion.cuts()[completion.embed(y)]);
        let restricted = Valuation::new((0..target.len()).map(|x| ranks[completion.embed(x)].clone()).collect());
        classes.push_unique(restricted)?;
    }
    let sigma = scott_topology(target);
    let omega = lower_topology(target);
    let mut out = Family::empty(q.len());
    for f_tilde in classes.iter() {
        if !is_lower_semicontinuous(f_tilde, &sigma) || !is_upper_semicontinuous(f_tilde, &omega) {
            return Err(Error::Defect(format!("{f_tilde} is not semicontinuous on the quotient")));
        }
        out.push_unique(lift_through_quotient(&quot, f_tilde)?)?;
    }
    if q.is_empty() {
        // no classes, but the empty carrier still carries the empty function
        out.push_unique(Valuation::new(Vec::new()))?;
    }
    if !is_rp_multi_utility(&out, q) {
        return Err(Error::Defect("completion ranks do not represent the preorder".into()));
    }
    Ok(out)
}

/// Lifts `v` to the completion of the quotient of `q` by
/// `f^δ(C) = max_{x ∈ C} f̃(x)`, forms the pointwise meet of the lifts, and
/// reports whether the completion is a continuous lattice.
pub fn gjh_converse_witness<T: Scalar>(q: &FinitePreorder, v: &Family<T>) -> Result<bool> {
    if !is_rp_multi_utility(v, q) {
        return Err(Error::Precondition("family is not a Richter-Peleg multi-utility".into()));
    }
    let quot = q.quotient();
    let target = &quot.target;
    let completion = macneille(target);
    let cuts = completion.cuts();
    let mut meet: Option<Vec<T>> = None;
    for f in v.iter() {
        let f_tilde = push_to_quotient(&quot, f)?;
        let floor = f_tilde.min_value().unwrap_or_else(T::zero);
        let lifted: Vec<T> = cuts
            .iter()
            .map(|c| {
                c.iter().map(|x| f_tilde[x].clone()).reduce(|a, b| max_of(&a, &b)).unwrap_or_else(|| floor.clone())
            })
            .collect();
        for (i, ci) in cuts.iter().enumerate() {
            for (j, cj) in cuts.iter().enumerate() {
                if ci.is_subset(cj) && lifted[i] > lifted[j] {
                    return Err(Error::Defect(format!("lift of {f} decreases from {ci} to {cj}")));
                }
            }
        }
        if let Some(x) = (0..target.len()).find(|&x| lifted[completion.embed(x)] != f_tilde[x]) {
            return Err(Error::Defect(format!("lift of {f} disagrees with it at class {x}")));
        }
        meet = Some(match meet {
            None => lifted,
            Some(m) => m.iter().zip(&lifted).map(|(a, b)| min_of(a, b)).collect(),
        });
    }
    if let Some(m) = &meet {
        let monotone = (0..cuts.len()).all(|i| (0..cuts.len()).all(|j| !cuts[i].is_subset(&cuts[j]) || m[i] <= m[j]));
        if !monotone {
            return Err(Error::Defect("pointwise meet of lifts is not monotone".into()));
        }
    }
    is_continuous_lattice(&completion.to_poset()?)
}

/// Condition-by-condition outcome of the characterization of closed-order
/// representations by function families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct A120Report {
    /// The preorder induced by the family is closed in `τ1 × τ2`.
    pub forward_closed: bool,
    pub separating: bool,
    /// The family is already closed under pointwise max and min.
    pub lattice_closed: bool,
    /// Lattice closure leaves the induced preorder unchanged.
    pub lattice_invariant: bool,
    pub cone_invariant: bool,
    /// For a poset: the point separations of the space form a separating
    /// multi-utility whose lattice closure induces the same order. `None`
    /// when the space's order is not antisymmetric.
    pub reverse: Option<bool>,
}

/// Runs both directions on `s` and `v`; conditions are reported, not asserted.
pub fn a120_roundtrip<T: Scalar>(s: &BitopPreorderedSpace, v: &Family<T>, depth: usize) -> Result<A120Report> {
    if v.carrier() != s.len() {
        return Err(Error::CarrierMismatch { expected: s.len(), found: v.carrier() });
    }
    if let Some(f) = v.iter().find(|f| !is_lower_semicontinuous(*f, s.t1()) || !is_upper_semicontinuous(*f, s.t2())) {
        return Err(Error::Precondition(format!("{f} is not t1-lower and t2-upper semicontinuous")));
    }
    let induced = preorder_from_family(v);
    let closure = lattice_closure(v);
    let reverse = if s.order().is_antisymmetric() {
        let n = s.len();
        let mut w = Family::empty(n);
        for a in 0..n {
            for b in 0..n {
                if !s.order().le(a, b) {
                    w.push_unique(separate_points::<T>(s, a, b, depth)?)?;
                }
            }
        }
        let wc = lattice_closure(&w);
        Some(is_separating(&w) && is_multi_utility(&w, s.order()) && preorder_from_family(&wc) == *s.order())
    } else {
        None
    };
    Ok(A120Report {
        forward_closed: is_closed_in_product(s.t1(), s.t2(), &induced).is_closed(),
        separating: is_separating(v),
        lattice_closed: is_lattice_closed(v),
        lattice_invariant: preorder_from_family(&closure) == induced,
        cone_invariant: cone_invariance_check(v),
        reverse,
    })
}

fn grid_functions<T: Scalar>(n: usize, k: usize) -> Vec<Valuation<T>> {
    let grid: Vec<T> = (0..=k).map(|j| T::from_usize(j) / T::from_usize(k)).collect();
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                grid.iter().map(move |g| {
                    let mut w = v.clone();
                    w.push(g.clone());
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Valuation::new).collect()
}

/// Every monotone function into `{0, 1/k, …, 1}`, lexicographic in values.
pub fn monotone_grid_family<T: Scalar>(p: &FinitePreorder, k: usize) -> Family<T> {
    assert!(k > 0, "grid needs at least two points");
    Family { n: p.len(), members: grid_functions(p.len(), k).into_iter().filter(|f| f.is_monotone(p)).collect() }
}

/// The Richter-Peleg utilities among [`monotone_grid_family`].
pub fn rp_grid_family<T: Scalar>(p: &FinitePreorder, k: usize) -> Family<T> {
    let mut f = monotone_grid_family(p, k);
    f.members.retain(|g| is_rp_utility(g, p));
    f
}

/// Grid resolution used when none is given: the carrier size, at least 1.
pub fn default_grid(n: usize) -> usize {
    n.max(1)
}
