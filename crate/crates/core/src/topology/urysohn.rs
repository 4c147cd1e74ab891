use super::bitop::{find_normal_separation, BitopPreorderedSpace};
use super::{is_lower_semicontinuous, is_upper_semicontinuous};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subset::SubsetMask;
use crate::valuation::Valuation;

/// Result of the dyadic construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UrysohnOutcome<T> {
    pub f: Valuation<T>,
    /// Refinement rounds kept; levels have denominator at most `2^rounds`.
    pub rounds: usize,
    /// The last attempted round only reproduced existing pairs.
    pub stabilized: bool,
}

/// One dyadic level `t`: `open` is decreasing and `τ2`-open, `closed` is
/// decreasing and `τ1`-closed, `open ⊆ closed`, and `closed_s ⊆ open_t` for
/// every earlier level `s`.
#[derive(Clone, PartialEq, Eq)]
struct Level<T> {
    t: T,
    open: SubsetMask,
    closed: SubsetMask,
}

fn separate(s: &BitopPreorderedSpace, a: &SubsetMask, b: &SubsetMask, step: usize) -> Result<(SubsetMask, SubsetMask)> {
    find_normal_separation(s, a, b)?.ok_or(Error::SeparationFailed { step })
}

/// Increasing `f` with `f(A) = 0`, `f(B) = 1`, `τ1`-lower and `τ2`-upper
/// semicontinuous, built by dyadic refinement.
///
/// Between consecutive levels `s < t` a normal separation of `closed_s` from
/// `X ∖ open_t` supplies the midpoint pair. Rounds stop once every inserted
/// pair repeats an existing one (that round is discarded) or after `depth`
/// rounds. `f(x)` is the least level whose open set contains `x`, else 1.
pub fn urysohn_nachbin<T: Scalar>(
    s: &BitopPreorderedSpace,
    a: &SubsetMask,
    b: &SubsetMask,
    depth: usize,
) -> Result<UrysohnOutcome<T>> {
    let n = s.len();
    if depth == 0 {
        return Err(Error::Precondition("depth must be positive".into()));
    }
    if a.width() != n || b.width() != n {
        return Err(Error::CarrierMismatch { expected: n, found: if a.width() != n { a.width() } else { b.width() } });
    }
    if a.is_empty() && b.is_empty() {
        return Ok(UrysohnOutcome { f: Valuation::constant(n, T::half()), rounds: 0, stabilized: true });
    }
    let full = SubsetMask::full(n);
    let (p1, p2) = separate(s, a, b, 0)?;
    let mut levels = vec![
        Level { t: T::zero(), open: p1, closed: p2.complement() },
        Level { t: T::one(), open: b.complement(), closed: full },
    ];
    let mut rounds = 0;
    let mut stabilized = false;
    while rounds < depth {
        let mut next = Vec::with_capacity(levels.len() * 2 - 1);
        let mut fresh = false;
        for w in levels.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let (p1, p2) = separate(s, &lo.closed, &hi.open.complement(), rounds + 1)?;
            let mid = Level { t: T::midpoint(&lo.t, &hi.t), open: p1, closed: p2.complement() };
            fresh |= !levels.iter().any(|l| l.open == mid.open && l.closed == mid.closed);
            next.push(lo.clone());
            next.push(mid);
        }
        next.push(levels[levels.len() - 1].clone());
        if !fresh {
            stabilized = true;
            break;
        }
        levels = next;
        rounds += 1;
    }
    let values =
        (0..n).map(|x| levels.iter().find(|l| l.open.contains(x)).map_or_else(T::one, |l| l.t.clone())).collect();
    let f = Valuation::new(values);
    check_postconditions(s, a, b, &f)?;
    Ok(UrysohnOutcome { f, rounds, stabilized })
}

fn check_postconditions<T: Scalar>(
    s: &BitopPreorderedSpace,
    a: &SubsetMask,
    b: &SubsetMask,
    f: &Valuation<T>,
) -> Result<()> {
    let fail = |what: &str| Err(Error::Defect(format!("constructed {f} {what}")));
    if !a.iter().all(|x| f[x].is_zero()) || !b.iter().all(|x| f[x].is_one()) {
        return fail("misses the prescribed values on A or B");
    }
    if !f.is_normalized() {
        return fail("leaves [0, 1]");
    }
    if !f.is_monotone(s.order()) {
        return fail("is not increasing");
    }
    if !is_lower_semicontinuous(f, s.t1()) || !is_upper_semicontinuous(f, s.t2()) {
        return fail("is not semicontinuous");
    }
    Ok(())
}

/// Semicontinuous increasing `f` with `f(a) > f(b)` whenever `a ⋠ b`,
/// separating `d(b)` (sent to 0) from `i(a)` (sent to 1).
pub fn separate_points<T: Scalar>(s: &BitopPreorderedSpace, a: usize, b: usize, depth: usize) -> Result<Valuation<T>> {
    let ord = s.order();
    if ord.le(a, b) {
        return Err(Error::Precondition(format!("{a} ≼ {b}, nothing to separate")));
    }
    let low = ord.principal_ideal(b);
    let high = ord.principal_filter(a);
    debug_assert!(low.is_disjoint(&high));
    let out = urysohn_nachbin::<T>(s, &low, &high, depth)?;
    if out.f[a] <= out.f[b] {
        return Err(Error::Defect(format!("separation of {a} from {b} gave {}", out.f)));
    }
    Ok(out.f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{all_posets, FinitePoset};
    use crate::topology::FiniteTopology;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn set(n: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, xs.iter().copied())
    }

    fn q(p: i64, d: i64) -> Q {
        Ratio::new(p, d)
    }

    #[test]
    fn chain_of_three() {
        let s = BitopPreorderedSpace::scott_lower(&FinitePoset::chain(3));
        let out = urysohn_nachbin::<Q>(&s, &set(3, &[0]), &set(3, &[2]), 8).unwrap();
        assert_eq!(out.f.values(), &[q(0, 1), q(1, 2), q(1, 1)]);
        assert!(out.stabilized);
        assert_eq!(out.rounds, 1);
    }

    #[test]
    fn unconstrained_is_one_half() {
        let s = BitopPreorderedSpace::scott_lower(&FinitePoset::chain(3));
        let out = urysohn_nachbin::<Q>(&s, &SubsetMask::empty(3), &SubsetMask::empty(3), 4).unwrap();
        assert_eq!(out.f, Valuation::constant(3, q(1, 2)));
    }

    #[test]
    fn one_point_with_b() {
        let s = BitopPreorderedSpace::scott_lower(&FinitePoset::chain(1));
        let out = urysohn_nachbin::<Q>(&s, &SubsetMask::empty(1), &SubsetMask::full(1), 4).unwrap();
        assert_eq!(out.f.values(), &[q(1, 1)]);
    }

    #[test]
    fn rejects_bad_input() {
        let s = BitopPreorderedSpace::scott_lower(&FinitePoset::chain(3));
        assert!(matches!(urysohn_nachbin::<Q>(&s, &set(3, &[0]), &set(3, &[2]), 0), Err(Error::Precondition(_))));
        // {1} is neither decreasing nor increasing in the chain
        assert!(matches!(urysohn_nachbin::<Q>(&s, &set(3, &[1]), &set(3, &[2]), 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn depth_bounds_denominators() {
        let s = BitopPreorderedSpace::scott_lower(&FinitePoset::chain(6));
        for depth in 1..=4 {
            let out = urysohn_nachbin::<Q>(&s, &set(6, &[0]), &set(6, &[5]), depth).unwrap();
            assert!(out.rounds <= depth);
            assert!(out.f.values().iter().all(|v| (1i64 << depth) % v.denom() == 0));
        }
    }

    #[test]
    fn floats_give_the_same_dyadics() {
        let s = BitopPreorderedSpace::scott_lower(&FinitePoset::chain(5));
        let exact = urysohn_nachbin::<Q>(&s, &set(5, &[0]), &set(5, &[4]), 10).unwrap();
        let float = urysohn_nachbin::<f64>(&s, &set(5, &[0]), &set(5, &[4]), 10).unwrap();
        for (e, f) in exact.f.values().iter().zip(float.f.values()) {
            assert_eq!(*e.numer() as f64 / *e.denom() as f64, *f);
        }
    }

    #[test]
    fn separate_points_examples() {
        let s = BitopPreorderedSpace::scott_lower(&FinitePoset::chain(3));
        let f = separate_points::<Q>(&s, 2, 1, 8).unwrap();
        assert_eq!(f.values(), &[q(0, 1), q(0, 1), q(1, 1)]);
        assert!(matches!(separate_points::<Q>(&s, 1, 2, 8), Err(Error::Precondition(_))));

        let s = BitopPreorderedSpace::scott_lower(&FinitePoset::antichain(2));
        assert_eq!(*s.t1(), FiniteTopology::discrete(2));
        let f = separate_points::<Q>(&s, 0, 1, 8).unwrap();
        assert_eq!(f.values(), &[q(1, 1), q(0, 1)]);
    }

    #[test]
    fn every_admissible_pair_on_small_posets() {
        for n in 0..=4 {
            for p in all_posets(n) {
                let s = BitopPreorderedSpace::scott_lower(&p);
                let downs: Vec<_> = SubsetMask::all(n).filter(|a| p.is_down_set(a)).collect();
                let ups: Vec<_> = SubsetMask::all(n).filter(|b| p.is_up_set(b)).collect();
                for a in &downs {
                    for b in ups.iter().filter(|b| a.is_disjoint(b)) {
                        // postconditions are checked inside
                        urysohn_nachbin::<Q>(&s, a, b, 12).unwrap();
                    }
                }
            }
        }
    }
}
