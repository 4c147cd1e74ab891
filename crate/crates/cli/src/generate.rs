//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordkit::{FinitePoset, FinitePreorder, FiniteTopology, Rational, SubsetMask, UtilityFamily, Valuation};

use crate::instance::{BitopCandidate, Instance, InstanceFile, Kind};

/// Stream `index` of the generator keyed by `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random DAG on a shuffled labelling, then closed.
pub fn random_poset(rng: &mut impl Rng, n: usize) -> FinitePoset {
    let density = rng.gen_range(0.15..0.6);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((labels[i], labels[j]));
            }
        }
    }
    FinitePoset::closure_of(n, edges).expect("closure of a DAG is antisymmetric")
}

/// Random relation, then closed.
pub fn random_preorder(rng: &mut impl Rng, n: usize) -> FinitePreorder {
    let density = rng.gen_range(0.05..0.35);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    FinitePreorder::closure_of(n, edges).expect("edges lie in the carrier")
}

pub fn random_subset(rng: &mut impl Rng, n: usize) -> SubsetMask {
    SubsetMask::from_elements(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

/// Generated by up to `n` random sets.
pub fn random_topology(rng: &mut impl Rng, n: usize) -> FiniteTopology {
    let k = rng.gen_range(0..=n);
    let subbase: Vec<_> = (0..k).map(|_| random_subset(rng, n)).collect();
    FiniteTopology::generate(n, &subbase)
}

/// Half of the draws refine the up-set/down-set topologies of a random
/// preorder (always order-closed); the rest are unconstrained.
pub fn random_bitop(rng: &mut impl Rng, n: usize) -> BitopCandidate {
    let ord = random_preorder(rng, n);
    if rng.gen_bool(0.5) {
        let t1 = FiniteTopology::alexandrov(&ord).join(&random_topology(rng, n));
        let t2 = FiniteTopology::alexandrov(&ord.reversed()).join(&random_topology(rng, n));
        BitopCandidate { t1, t2, ord }
    } else {
        BitopCandidate { t1: random_topology(rng, n), t2: random_topology(rng, n), ord }
    }
}

/// Distances on the grid `{0, 1/4, …, 2}`, repaired to satisfy the triangle
/// inequality by shortest-path relaxation.
pub fn random_qpm(rng: &mut impl Rng, n: usize) -> Vec<Vec<Rational>> {
    let mut d: Vec<Vec<Rational>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == y || rng.gen_bool(0.25) {
                        Rational::from_integer(0)
                    } else {
                        Rational::new(rng.gen_range(1..=8), 4)
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Values on `{0, 1/k, …, 1}`.
pub fn random_grid_function(rng: &mut impl Rng, n: usize, k: i64) -> Valuation<Rational> {
    Valuation::new((0..n).map(|_| Rational::new(rng.gen_range(0..=k), k)).collect())
}

pub fn random_family(rng: &mut impl Rng, n: usize) -> UtilityFamily {
    // empty rows cannot be written, so the empty carrier gets no members
    let members = if n == 0 { 0 } else { rng.gen_range(0..=4) };
    let k = n.max(1) as i64;
    UtilityFamily::new(n, (0..members).map(|_| random_grid_function(rng, n, k)).collect()).expect("same carrier")
}

/// Deterministic in `(kind, n, seed)`.
pub fn generate(kind: Kind, n: usize, seed: u64) -> InstanceFile {
    let mut rng = rng_for(seed, 0);
    let instance = match kind {
        Kind::Preorder => Instance::Preorder(random_preorder(&mut rng, n)),
        Kind::Poset => Instance::Poset(random_poset(&mut rng, n)),
        Kind::Topology => Instance::Topology(random_topology(&mut rng, n)),
        Kind::Bitop => Instance::Bitop(random_bitop(&mut rng, n)),
        Kind::Qpm => Instance::Qpm(random_qpm(&mut rng, n)),
        Kind::Family => Instance::Family(random_family(&mut rng, n)),
    };
    InstanceFile { name: Some(format!("{kind}-{n}-{seed}")), instance }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{emit, parse};
    use ordkit::topology::from_quasi_pseudometric;

    #[test]
    fn empty_poset() {
        let f = generate(Kind::Poset, 0, 9);
        assert_eq!(f.instance, Instance::Poset(FinitePoset::chain(0)));
    }

    #[test]
    fn deterministic() {
        for kind in Kind::ALL {
            assert_eq!(generate(kind, 4, 42), generate(kind, 4, 42));
        }
        assert_ne!(
            (0..8).map(|s| generate(Kind::Poset, 5, s)).collect::<Vec<_>>(),
            vec![generate(Kind::Poset, 5, 0); 8]
        );
    }

    #[test]
    fn qpm_passes_validation() {
        from_quasi_pseudometric(&random_qpm(&mut rng_for(7, 0), 3)).unwrap();
        for seed in 0..200 {
            let n = (seed % 6) as usize;
            from_quasi_pseudometric(&random_qpm(&mut rng_for(seed, 0), n)).unwrap();
        }
    }

    #[test]
    fn generated_instances_round_trip() {
        for kind in Kind::ALL {
            for seed in 0..20 {
                let f = generate(kind, (seed % 6) as usize, seed);
                assert_eq!(parse(&emit(&f)).unwrap(), f);
            }
        }
    }

    #[test]
    fn refined_bitops_are_closed() {
        let mut closed = 0;
        for i in 0..200 {
            if random_bitop(&mut rng_for(3, i), 4).is_closed() {
                closed += 1;
            }
        }
        assert!(closed >= 80);
    }
}
