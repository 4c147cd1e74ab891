//! Function families: interpolation, representation invariances and the
//! passage through quotients.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ordkit::representation::{
    a120_roundtrip, cone_invariance_check, constant_invariance_check, is_rp_multi_utility, is_rp_utility,
    is_separating, lattice_closure, lattice_interpolate, lift_through_quotient, preorder_from_family, push_to_quotient,
    realizer_family, rp_family_from_linear_extensions, scott_omega_rp_family, sup_norm_distance, Interpolation,
};
use ordkit::topology::{is_closed_in_product, is_lower_semicontinuous, is_upper_semicontinuous};
use ordkit::{
    BitopPreorderedSpace, Error, FinitePoset, FinitePreorder, FiniteTopology, FrinkEmpty, QuotientMap, Rational,
    UtilityFamily, Valuation,
};

use super::{
    ensure, exhaustive_preorders, guard, instance_text, poset_text, preorder_text, Outcome, Params, Suite,
    EXHAUSTIVE_MAX,
};
use crate::generate::{random_grid_function, random_poset, random_preorder};
use crate::instance::Instance;

type Q = Rational;

fn q(p: i64, d: i64) -> Q {
    Rational::new(p, d)
}

/// Every function `{0..n} → grid`, lexicographic.
fn grid_functions(n: usize, grid: &[Q]) -> Vec<Valuation<Q>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<Q>| grid.iter().map(move |g| [v.clone(), vec![*g]].concat())).collect();
    }
    out.into_iter().map(Valuation::new).collect()
}

fn half_grid() -> Vec<Q> {
    vec![q(0, 1), q(1, 2), q(1, 1)]
}

fn family(n: usize, members: Vec<Valuation<Q>>) -> UtilityFamily {
    UtilityFamily::new(n, members).expect("members share the carrier")
}

fn family_text(v: &UtilityFamily) -> String {
    instance_text(Instance::Family(v.clone()))
}

/// `x ≼ y` iff every member agrees, by direct comparison.
fn induced(n: usize, members: &[Valuation<Q>]) -> Vec<Vec<bool>> {
    (0..n).map(|x| (0..n).map(|y| members.iter().all(|f| f[x] <= f[y])).collect()).collect()
}

fn same_order(p: &FinitePreorder, rel: &[Vec<bool>]) -> bool {
    (0..p.len()).all(|x| (0..p.len()).all(|y| p.le(x, y) == rel[x][y]))
}

/// Richter-Peleg multi-utility by definition: every member is monotone and
/// strictly monotone on strict pairs, and every `x ⋠ y` is witnessed.
fn local_rp(p: &FinitePreorder, members: &[Valuation<Q>]) -> bool {
    let n = p.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let (le, ge) = (p.le(x, y), p.le(y, x));
            if le && !ge {
                members.iter().all(|f| f[x] < f[y])
            } else if le {
                members.iter().all(|f| f[x] <= f[y])
            } else {
                members.iter().any(|f| f[x] > f[y])
            }
        })
    })
}

fn is_closed_pointwise(members: &[Valuation<Q>]) -> bool {
    members
        .iter()
        .all(|f| members.iter().all(|g| members.contains(&f.pointwise_max(g)) && members.contains(&f.pointwise_min(g))))
}

/// A member agrees with `phi` at every pair of points.
fn pairwise_matching(phi: &Valuation<Q>, members: &[Valuation<Q>]) -> bool {
    let n = phi.len();
    (0..n).all(|x| (0..n).all(|y| members.iter().any(|f| f[x] == phi[x] && f[y] == phi[y])))
}

/// Lattice interpolation on the closure of some grid generators.
pub struct A812;

impl Suite for A812 {
    type Case = UtilityFamily;

    /// Families of at most three generators with values in `{0, 1/2, 1}` on
    /// at most three points.
    fn exhaustive(&self, _: &Params) -> Vec<UtilityFamily> {
        let mut out = Vec::new();
        for n in 0..=3 {
            let fs = grid_functions(n, &half_grid());
            let m = fs.len();
            out.push(UtilityFamily::empty(n));
            for i in 0..m {
                out.push(family(n, vec![fs[i].clone()]));
                for j in i + 1..m {
                    out.push(family(n, vec![fs[i].clone(), fs[j].clone()]));
                    for k in j + 1..m {
                        out.push(family(n, vec![fs[i].clone(), fs[j].clone(), fs[k].clone()]));
                    }
                }
            }
        }
        out
    }

    fn random(&self, rng: &mut ChaCha8Rng, params: &Params) -> UtilityFamily {
        let n = params.random_n(rng, 1, 4);
        let k = rng.gen_range(1..=3);
        family(n, (0..k).map(|_| random_grid_function(rng, n, 2)).collect())
    }

    fn check(&self, gens: &UtilityFamily, _: &Params) -> Outcome {
        guard(
            || family_text(gens),
            || {
                let n = gens.carrier();
                let l = lattice_closure(gens);
                ensure(is_closed_pointwise(l.members()), || "closure is not closed under max and min".into())?;
                ensure(gens.iter().all(|f| l.contains(f)), || "closure lost a generator".into())?;
                for phi in grid_functions(n, &half_grid()) {
                    let matching = pairwise_matching(&phi, l.members());
                    match lattice_interpolate(&phi, &l).map_err(|e| e.to_string())? {
                        Interpolation::Found(g) => {
                            ensure(matching, || format!("interpolated {phi} without pairwise matching"))?;
                            let d = sup_norm_distance(&g, &phi).map_err(|e| e.to_string())?;
                            ensure(d == q(0, 1), || format!("interpolant of {phi} is {g} at distance {d}"))?;
                            // on the empty carrier the empty function is returned even when the family is empty
                            ensure(n == 0 || l.contains(&g), || format!("interpolant {g} is not in the family"))?;
                        }
                        Interpolation::NoMatch { x, y } => {
                            ensure(!matching, || format!("reported no match for {phi}, which matches pairwise"))?;
                            ensure(!l.iter().any(|f| f[x] == phi[x] && f[y] == phi[y]), || {
                                format!("points ({x}, {y}) do match {phi}")
                            })?;
                        }
                    }
                }
                Ok(())
            },
        )
    }
}

/// Closure, rescaling and constant adjunction keep the induced preorder;
/// checked directly and through the library predicates.
fn invariances(v: &UtilityFamily) -> Result<(), String> {
    let n = v.carrier();
    let base = induced(n, v.members());
    ensure(same_order(&preorder_from_family(v), &base), || "induced preorder differs from direct comparison".into())?;
    let closure = lattice_closure(v);
    ensure(induced(n, closure.members()) == base, || "lattice closure changed the preorder".into())?;
    for i in 0..v.len() {
        for a in [q(1, 2), q(2, 1)] {
            for b in [q(-1, 1), q(1, 1)] {
                let mut members = v.members().to_vec();
                members[i] = Valuation::new(v[i].values().iter().map(|x| a * x + b).collect());
                ensure(induced(n, &members) == base, || {
                    format!("replacing member {i} by {a}·f + {b} changed the preorder")
                })?;
            }
        }
    }
    for c in [q(0, 1), q(1, 1)] {
        let mut members = v.members().to_vec();
        members.push(Valuation::constant(n, c));
        ensure(induced(n, &members) == base, || format!("adding the constant {c} changed the preorder"))?;
    }
    ensure(cone_invariance_check(v), || "cone invariance check failed".into())?;
    ensure(constant_invariance_check(v), || "constant invariance check failed".into())
}

fn roundtrip(s: &BitopPreorderedSpace, v: &UtilityFamily, depth: usize) -> Result<(), String> {
    let r = a120_roundtrip(s, v, depth).map_err(|e| e.to_string())?;
    let n = v.carrier();
    let separating = (0..n).all(|x| (x + 1..n).all(|y| v.iter().any(|f| f[x] != f[y])));
    ensure(r.forward_closed, || "induced preorder is not closed".into())?;
    ensure(r.separating == separating, || format!("separating reported {}, direct {separating}", r.separating))?;
    ensure(r.lattice_closed == is_closed_pointwise(v.members()), || "lattice-closed flag disagrees".into())?;
    ensure(r.lattice_invariant && r.cone_invariant, || format!("invariance failed: {r:?}"))?;
    let expect_reverse = s.order().is_antisymmetric().then_some(true);
    ensure(r.reverse == expect_reverse, || format!("reverse direction {:?}, expected {expect_reverse:?}", r.reverse))
}

pub enum A120Case {
    Poset(FinitePoset),
    Family(UtilityFamily),
}

/// Representation of posets by extension ranks, and the invariances of the
/// induced preorder.
pub struct A120;

impl Suite for A120 {
    type Case = A120Case;

    /// Posets with at most five points; invariances run up to four.
    fn exhaustive(&self, _: &Params) -> Vec<A120Case> {
        (0..=EXHAUSTIVE_MAX + 1).flat_map(ordkit::order::all_posets).map(A120Case::Poset).collect()
    }

    fn random(&self, rng: &mut ChaCha8Rng, params: &Params) -> A120Case {
        if rng.gen_bool(0.5) {
            let n = params.random_n(rng, 5, 5);
            A120Case::Poset(random_poset(rng, n))
        } else {
            let n = params.random_n(rng, 1, 4);
            let k = rng.gen_range(0..=4);
            let g = n.max(1) as i64;
            A120Case::Family(family(n, (0..k).map(|_| random_grid_function(rng, n, g)).collect()))
        }
    }

    fn check(&self, case: &A120Case, params: &Params) -> Outcome {
        match case {
            A120Case::Poset(p) => guard(
                || poset_text(p),
                || {
                    let ext: UtilityFamily = rp_family_from_linear_extensions(p);
                    ensure(local_rp(p, ext.members()), || "extension ranks do not represent the poset".into())?;
                    ensure(is_rp_multi_utility(&ext, p), || "extension family rejected as RP multi-utility".into())?;
                    let real: UtilityFamily = realizer_family(p);
                    ensure(local_rp(p, real.members()), || "realizer family does not represent the poset".into())?;
                    let so: UtilityFamily = scott_omega_rp_family(p).map_err(|e| e.to_string())?;
                    ensure(local_rp(p, so.members()), || "completion family does not represent the poset".into())?;
                    if p.len() <= EXHAUSTIVE_MAX {
                        invariances(&ext)?;
                    }
                    invariances(&real)?;
                    invariances(&so)?;
                    roundtrip(&BitopPreorderedSpace::scott_lower(p), &so, params.depth)
                },
            ),
            A120Case::Family(v) => guard(
                || family_text(v),
                || {
                    invariances(v)?;
                    let ord = preorder_from_family(v);
                    roundtrip(&BitopPreorderedSpace::up_down(&ord), v, params.depth)
                },
            ),
        }
    }
}

fn check_quotient_map(p: &FinitePreorder, qm: &QuotientMap) -> Result<(), String> {
    let n = p.len();
    for x in 0..n {
        ensure(qm.classes[qm.proj[x]].contains(x), || format!("{x} missing from its class"))?;
        for y in 0..n {
            let same = p.le(x, y) && p.le(y, x);
            ensure((qm.proj[x] == qm.proj[y]) == same, || format!("{x}, {y} wrongly identified"))?;
            ensure(qm.target.le(qm.proj[x], qm.proj[y]) == p.le(x, y), || format!("image order wrong at {x}, {y}"))?;
        }
    }
    ensure(qm.target.is_antisymmetric(), || "quotient is not a poset".into())
}

/// Opens of `t` on the classes, pulled back to the carrier.
fn pull_back(t: &FiniteTopology, qm: &QuotientMap) -> FiniteTopology {
    FiniteTopology::new(qm.source.len(), t.opens().iter().map(|u| qm.pull_back(u))).expect("preimages form a topology")
}

fn test_functions(k: usize) -> Vec<Valuation<Q>> {
    if k <= EXHAUSTIVE_MAX {
        grid_functions(k, &half_grid())
    } else {
        grid_functions(k, &[q(0, 1), q(1, 1)])
    }
}

/// Closedness, precontinuity, semicontinuity and representation pass through
/// the quotient by `≈` in both directions.
pub struct Quotient;

impl Suite for Quotient {
    type Case = FinitePreorder;

    fn exhaustive(&self, _: &Params) -> Vec<FinitePreorder> {
        exhaustive_preorders()
    }

    fn random(&self, rng: &mut ChaCha8Rng, params: &Params) -> FinitePreorder {
        let n = params.random_n(rng, 1, 7);
        random_preorder(rng, n)
    }

    fn check(&self, p: &FinitePreorder, params: &Params) -> Outcome {
        guard(
            || preorder_text(p),
            || {
                let s = BitopPreorderedSpace::up_down(p);
                let (qm, sq) = s.quotient().map_err(|e| e.to_string())?;
                check_quotient_map(p, &qm)?;
                let target = qm.target.as_preorder();
                ensure(*sq.t1() == FiniteTopology::alexandrov(target), || "quotient of the up-set topology".into())?;
                ensure(*sq.t2() == FiniteTopology::alexandrov(&target.reversed()), || {
                    "quotient of the down-set topology".into()
                })?;

                // closedness on the classes against closedness upstairs
                let k = target.len();
                let candidates = [
                    (sq.t1().clone(), sq.t2().clone()),
                    (sq.t2().clone(), sq.t1().clone()),
                    (FiniteTopology::discrete(k), FiniteTopology::indiscrete(k)),
                    (FiniteTopology::indiscrete(k), FiniteTopology::discrete(k)),
                    (sq.t1().clone(), FiniteTopology::indiscrete(k)),
                ];
                for (t1, t2) in &candidates {
                    let down = is_closed_in_product(t1, t2, target).is_closed();
                    let up = is_closed_in_product(&pull_back(t1, &qm), &pull_back(t2, &qm), p).is_closed();
                    ensure(down == up, || format!("closedness {up} upstairs, {down} on the quotient"))?;
                    let built = BitopPreorderedSpace::new(pull_back(t1, &qm), pull_back(t2, &qm), p.clone());
                    if let Ok(space) = built {
                        let (_, again) = space.quotient().map_err(|e| e.to_string())?;
                        ensure(again.t1() == t1 && again.t2() == t2, || "quotient of a pulled-back space".into())?;
                    }
                }

                for policy in params.frink_policies() {
                    let up = ordkit::completion::is_precontinuous(p, policy);
                    let down = ordkit::completion::is_precontinuous(target, policy);
                    ensure(up == down, || format!("precontinuity {up} upstairs, {down} on the quotient ({policy:?})"))?;
                }
                ensure(
                    ordkit::completion::is_precontinuous_fast(p)
                        == ordkit::completion::is_precontinuous(p, FrinkEmpty::Allow),
                    || "precontinuity predicates disagree".into(),
                )?;

                let sigma = FiniteTopology::alexandrov(p);
                let omega = FiniteTopology::alexandrov(&p.reversed());
                for f_tilde in test_functions(k) {
                    let f = lift_through_quotient(&qm, &f_tilde).map_err(|e| e.to_string())?;
                    ensure((0..p.len()).all(|x| f[x] == f_tilde[qm.proj[x]]), || format!("lift of {f_tilde} is {f}"))?;
                    let back = push_to_quotient(&qm, &f).map_err(|e| e.to_string())?;
                    ensure(back == f_tilde, || format!("push of lift of {f_tilde} gave {back}"))?;
                    ensure(is_rp_utility(&f_tilde, target) == is_rp_utility(&f, p), || {
                        format!("RP status of {f_tilde} changed")
                    })?;
                    ensure(
                        is_lower_semicontinuous(&f_tilde, sq.t1()) == is_lower_semicontinuous(&f, &sigma)
                            && is_upper_semicontinuous(&f_tilde, sq.t2()) == is_upper_semicontinuous(&f, &omega),
                        || format!("semicontinuity of {f_tilde} changed"),
                    )?;
                    // breaking class-constancy must be rejected
                    if let Some(class) = qm.classes.iter().position(|c| c.len() > 1) {
                        let x = qm.classes[class].iter().nth(1).expect("two members");
                        let mut values = f.values().to_vec();
                        values[x] += q(1, 1);
                        let err = push_to_quotient(&qm, &Valuation::new(values));
                        ensure(matches!(err, Err(Error::NotClassConstant { .. })), || {
                            format!("pushed a non-constant function: {err:?}")
                        })?;
                    }
                }

                let classes: FinitePoset = qm.target.clone();
                let lifted = family(
                    p.len(),
                    realizer_family::<Q>(&classes)
                        .iter()
                        .map(|f| lift_through_quotient(&qm, f))
                        .collect::<Result<_, _>>()
                        .map_err(|e| e.to_string())?,
                );
                ensure(local_rp(p, lifted.members()), || "lifted realizer family does not represent".into())?;
                let so: UtilityFamily = scott_omega_rp_family(p).map_err(|e| e.to_string())?;
                let pushed = family(
                    k,
                    so.iter().map(|f| push_to_quotient(&qm, f)).collect::<Result<_, _>>().map_err(|e| e.to_string())?,
                );
                ensure(local_rp(target, pushed.members()), || "pushed completion family does not represent".into())?;
                ensure(is_separating(&pushed), || "pushed family does not separate classes".into())?;
                Ok(())
            },
        )
    }
}
