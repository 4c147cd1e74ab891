//! Completions, way-below relations and Frink ideals.

use rand_chacha::ChaCha8Rng;

use ordkit::completion::{
    aeks_check, cuts_by_definition, e_way_below_relation, frink_ideals, frink_ideals_by_definition,
    is_complete_lattice, is_continuous_lattice, is_precontinuous, is_precontinuous_fast, way_below_relation,
    WayBelowMode, DIRECTED_ENUMERATION_CAP,
};
use ordkit::representation::{
    default_grid, gjh_converse_witness, realizer_family, rp_grid_family, scott_omega_rp_family,
};
use ordkit::{macneille, FinitePoset, FinitePreorder, FrinkEmpty, Rational, SubsetMask, UtilityFamily};

use super::{
    ensure, exhaustive_posets, exhaustive_preorders, guard, poset_text, preorder_text, Outcome, Params, Suite,
    EXHAUSTIVE_MAX,
};
use crate::generate::{random_poset, random_preorder};

fn upper(p: &FinitePreorder, a: &SubsetMask) -> SubsetMask {
    let n = p.len();
    SubsetMask::from_elements(n, (0..n).filter(|&y| a.iter().all(|x| p.le(x, y))))
}

fn lower(p: &FinitePreorder, a: &SubsetMask) -> SubsetMask {
    let n = p.len();
    SubsetMask::from_elements(n, (0..n).filter(|&y| a.iter().all(|x| p.le(y, x))))
}

/// `A^δ = (A^u)^l`.
fn delta(p: &FinitePreorder, a: &SubsetMask) -> SubsetMask {
    lower(p, &upper(p, a))
}

/// `{A^δ | A ⊆ X}`, ascending by bit value.
fn brute_cuts(p: &FinitePreorder) -> Vec<SubsetMask> {
    let mut cuts: Vec<_> = SubsetMask::all(p.len()).map(|a| delta(p, &a)).collect();
    cuts.sort_by_key(SubsetMask::bits);
    cuts.dedup();
    cuts
}

/// Least upper bound of `a` in a poset, if any.
fn sup(l: &FinitePoset, a: &SubsetMask) -> Option<usize> {
    let ub = upper(l, a);
    ub.iter().find(|&s| ub.iter().all(|t| l.le(s, t)))
}

fn is_directed(l: &FinitePoset, d: &SubsetMask) -> bool {
    !d.is_empty() && d.iter().all(|x| d.iter().all(|y| d.iter().any(|z| l.le(x, z) && l.le(y, z))))
}

/// `x ≪ y` from the definition: every directed set whose supremum lies above
/// `y` meets `↑x`.
fn brute_way_below(l: &FinitePoset) -> Vec<Vec<bool>> {
    let n = l.len();
    let directed: Vec<(SubsetMask, usize)> = SubsetMask::all(n)
        .filter(|d| is_directed(l, d))
        .map(|d| (d, sup(l, &d).expect("finite directed sets have a top element")))
        .collect();
    (0..n)
        .map(|x| (0..n).map(|y| directed.iter().all(|(d, s)| !l.le(y, *s) || d.iter().any(|z| l.le(x, z)))).collect())
        .collect()
}

/// Frink ideals from the definition: closed under `Z ↦ Z^δ` for every
/// `Z ⊆ I`, with `∅` subject to the policy.
fn brute_frink(p: &FinitePreorder, policy: FrinkEmpty) -> Vec<SubsetMask> {
    SubsetMask::all(p.len())
        .filter(|i| !(policy == FrinkEmpty::Forbid && i.is_empty()))
        .filter(|i| i.subsets().all(|z| delta(p, &z).is_subset(i)))
        .collect()
}

fn order_matrix(p: &FinitePreorder) -> Vec<Vec<bool>> {
    (0..p.len()).map(|x| (0..p.len()).map(|y| p.le(x, y)).collect()).collect()
}

/// Completion lattice invariants, the embedding, and the cut family against
/// the `2^n` definition.
pub struct Macneille;

impl Suite for Macneille {
    type Case = FinitePoset;

    fn exhaustive(&self, _: &Params) -> Vec<FinitePoset> {
        exhaustive_posets()
    }

    fn random(&self, rng: &mut ChaCha8Rng, params: &Params) -> FinitePoset {
        let n = params.random_n(rng, 1, 8);
        random_poset(rng, n)
    }

    fn check(&self, p: &FinitePoset, _: &Params) -> Outcome {
        guard(
            || poset_text(p),
            || {
                let l = macneille(p);
                l.verify().map_err(|e| e.to_string())?;
                let cuts = l.cuts();
                let brute = brute_cuts(p);
                ensure(cuts == brute.as_slice(), || format!("cuts {cuts:?}, definition {brute:?}"))?;
                ensure(cuts_by_definition(p) == brute, || "library definition disagrees".into())?;
                let n = p.len();
                let full = SubsetMask::full(n);
                ensure(cuts.contains(&full), || "the whole carrier is not a cut".into())?;
                ensure(l.top() == cuts.len() - 1 && cuts[l.top()] == full, || "top is not the carrier".into())?;
                ensure(cuts[l.bottom()] == brute[0], || "bottom is not the least cut".into())?;
                for i in 0..cuts.len() {
                    for j in 0..cuts.len() {
                        let m = cuts[i].intersection(&cuts[j]);
                        ensure(l.index_of(&m) == Some(l.meet(i, j)), || {
                            format!("meet of {} and {}", cuts[i], cuts[j])
                        })?;
                        let join = delta(p, &cuts[i].union(&cuts[j]));
                        ensure(cuts[l.join(i, j)] == join, || format!("join of {} and {}", cuts[i], cuts[j]))?;
                        ensure(l.le(i, j) == cuts[i].is_subset(&cuts[j]), || "order is not inclusion".into())?;
                    }
                }
                for x in 0..n {
                    let down = SubsetMask::from_elements(n, (0..n).filter(|&y| p.le(y, x)));
                    ensure(cuts[l.embed(x)] == down, || format!("{x} embeds as {}", cuts[l.embed(x)]))?;
                    ensure(delta(p, &SubsetMask::singleton(n, x)) == down, || format!("{{{x}}}^δ ≠ ↓{x}"))?;
                    for y in 0..n {
                        ensure(l.le(l.embed(x), l.embed(y)) == p.le(x, y), || {
                            format!("embedding distorts ({x}, {y})")
                        })?;
                    }
                }
                if cuts.len() <= ordkit::MAX_ELEMENTS {
                    let lp = l.to_poset().map_err(|e| e.to_string())?;
                    ensure(is_complete_lattice(&lp), || "completion is not a complete lattice".into())?;
                }
                Ok(())
            },
        )
    }
}

/// Frink ideals against their definition under each empty-ideal policy, and
/// the induced way-below relation against the order.
pub struct Frink;

impl Suite for Frink {
    type Case = FinitePoset;

    fn exhaustive(&self, _: &Params) -> Vec<FinitePoset> {
        exhaustive_posets()
    }

    fn random(&self, rng: &mut ChaCha8Rng, params: &Params) -> FinitePoset {
        let n = params.random_n(rng, 1, 6);
        random_poset(rng, n)
    }

    fn check(&self, p: &FinitePoset, params: &Params) -> Outcome {
        guard(
            || poset_text(p),
            || {
                let order = order_matrix(p);
                for policy in params.frink_policies() {
                    let brute = brute_frink(p, policy);
                    let fast = frink_ideals(p, policy);
                    ensure(fast == brute, || format!("{policy:?}: ideals {fast:?}, definition {brute:?}"))?;
                    let def = frink_ideals_by_definition(p, policy);
                    ensure(def == brute, || format!("{policy:?}: library definition {def:?}"))?;
                    let e = e_way_below_relation(p, policy);
                    ensure(e == order, || format!("{policy:?}: ≪_e differs from the order"))?;
                }
                Ok(())
            },
        )
    }
}

fn check_way_below(l: &FinitePoset) -> Result<(), String> {
    let fast = way_below_relation(l, WayBelowMode::Fast).map_err(|e| e.to_string())?;
    if l.len() <= DIRECTED_ENUMERATION_CAP {
        let brute = brute_way_below(l);
        let lib = way_below_relation(l, WayBelowMode::BruteForce).map_err(|e| e.to_string())?;
        ensure(lib == brute, || "library enumeration differs from the definition".into())?;
        ensure(fast == brute, || "fast relation differs from the definition".into())?;
    }
    ensure(fast == order_matrix(l), || "fast relation is not the order".into())?;
    ensure(is_continuous_lattice(l).map_err(|e| e.to_string())?, || "lattice is not continuous".into())
}

/// Way-below on lattices and completions, continuity, and grid
/// representations.
pub struct Kjh;

impl Suite for Kjh {
    type Case = FinitePreorder;

    fn exhaustive(&self, _: &Params) -> Vec<FinitePreorder> {
        exhaustive_preorders()
    }

    fn random(&self, rng: &mut ChaCha8Rng, params: &Params) -> FinitePreorder {
        let n = params.random_n(rng, 5, 6);
        random_preorder(rng, n)
    }

    fn check(&self, q: &FinitePreorder, _: &Params) -> Outcome {
        guard(
            || preorder_text(q),
            || {
                let quot = q.quotient();
                let target = &quot.target;
                if is_complete_lattice(target) {
                    check_way_below(target)?;
                }
                let completion = macneille(target).to_poset().map_err(|e| e.to_string())?;
                check_way_below(&completion)?;
                let family: UtilityFamily = if q.len() <= EXHAUSTIVE_MAX {
                    rp_grid_family(q, default_grid(q.len()))
                } else {
                    let lifted = realizer_family::<Rational>(target)
                        .iter()
                        .map(|f| ordkit::Valuation::new(quot.proj.iter().map(|&c| f[c]).collect()))
                        .collect();
                    UtilityFamily::new(q.len(), lifted).map_err(|e| e.to_string())?
                };
                ensure(rp(q, &family), || "family is not a Richter-Peleg multi-utility".into())
            },
        )
    }
}

fn rp(q: &FinitePreorder, v: &UtilityFamily) -> bool {
    let n = q.len();
    (0..n).all(|x| {
        (0..n).all(|y| match (q.le(x, y), q.le(y, x)) {
            (true, false) => v.iter().all(|f| f[x] < f[y]),
            (true, true) => v.iter().all(|f| f[x] == f[y]),
            _ => v.iter().any(|f| f[x] > f[y]),
        })
    })
}

/// Precontinuity against continuity of the completion, and the completion
/// representation of the preorder.
pub struct Gjh;

impl Suite for Gjh {
    type Case = FinitePreorder;

    fn exhaustive(&self, _: &Params) -> Vec<FinitePreorder> {
        exhaustive_preorders()
    }

    fn random(&self, rng: &mut ChaCha8Rng, params: &Params) -> FinitePreorder {
        let n = params.random_n(rng, 6, 6);
        random_preorder(rng, n)
    }

    fn check(&self, q: &FinitePreorder, params: &Params) -> Outcome {
        guard(
            || preorder_text(q),
            || {
                let fast = is_precontinuous_fast(q);
                for policy in params.frink_policies() {
                    let v = aeks_check(q, policy).map_err(|e| e.to_string())?;
                    ensure(v.agree && v.precontinuous && v.continuous_completion, || format!("{policy:?}: {v:?}"))?;
                    ensure(is_precontinuous(q, policy) == fast, || {
                        format!("{policy:?}: precontinuity predicates disagree")
                    })?;
                }
                let family: UtilityFamily = scott_omega_rp_family(q).map_err(|e| e.to_string())?;
                ensure(rp(q, &family), || "completion family is not a Richter-Peleg multi-utility".into())?;
                let witness = gjh_converse_witness(q, &family).map_err(|e| e.to_string())?;
                ensure(witness, || "converse witness failed".into())
            },
        )
    }
}
