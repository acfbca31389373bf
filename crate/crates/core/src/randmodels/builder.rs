use rand::seq::SliceRandom;
use rand::Rng;

use super::{DensitySpec, RandModelError};
use crate::packing::{FamilyKind, PartitionedFamily};
use crate::Hypergraph;

/// Takes exactly `num` of the `den` members of every group, uniformly and
/// independently per group: all edges of a chosen element, or the chosen
/// leftover edge. A singleton family has no groups to choose within, so each
/// of its edges is kept independently with probability `num / den`.
pub fn build_quasirandom_from_partition(
    f: &PartitionedFamily,
    spec: DensitySpec,
    rng: &mut impl Rng,
) -> Result<Hypergraph, RandModelError> {
    let mut g = Hypergraph::empty(f.n, f.r)?;
    if f.kind == FamilyKind::Singletons {
        for e in &f.leftover {
            if rng.gen_ratio(spec.num as u32, spec.den as u32) {
                g.insert(e.clone())?;
            }
        }
        return Ok(g);
    }
    if f.k as u64 != spec.den {
        return Err(RandModelError::GroupSizeMismatch {
            family: f.k,
            spec: spec.den,
        });
    }
    let take = spec.num as usize;
    let pick = |group: &[usize], rng: &mut _| {
        let mut ids = group.to_vec();
        ids.partial_shuffle(rng, take);
        ids.truncate(take);
        ids
    };
    for group in &f.element_groups {
        for i in pick(group, rng) {
            for e in &f.elements[i].edges {
                g.insert(e.clone())?;
            }
        }
    }
    for group in &f.leftover_groups {
        for j in pick(group, rng) {
            g.insert(f.leftover[j].clone())?;
        }
    }
    let sizes_equal = f.elements.windows(2).all(|w| w[0].edges.len() == w[1].edges.len());
    if sizes_equal {
        assert_eq!(
            g.edge_count() * f.k,
            f.owned_edges() * take,
            "builder must take exactly num/den of the owned edges"
        );
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_spherical_steiner;
    use crate::packing::PartitionConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn steiner17() -> PartitionedFamily {
        let sys = build_spherical_steiner(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        PartitionedFamily::from_steiner(&sys, 2, &PartitionConfig::default(), &mut rng).unwrap()
    }

    #[test]
    fn steiner_half_has_exactly_half_the_triples() {
        let f = steiner17();
        let half = DensitySpec::new(1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = build_quasirandom_from_partition(&f, half, &mut rng).unwrap();
        let b = build_quasirandom_from_partition(&f, half, &mut rng).unwrap();
        assert_eq!(a.edge_count(), 340);
        assert_eq!(b.edge_count(), 340);
        assert_ne!(a, b);
        assert!(matches!(
            build_quasirandom_from_partition(&f, DensitySpec::new(1, 3).unwrap(), &mut rng),
            Err(RandModelError::GroupSizeMismatch { .. })
        ));
    }

    #[test]
    fn marginals_are_one_half() {
        let f = steiner17();
        let half = DensitySpec::new(1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 4000;
        let mut hits = vec![0usize; f.elements.len()];
        for _ in 0..trials {
            let g = build_quasirandom_from_partition(&f, half, &mut rng).unwrap();
            for (i, el) in f.elements.iter().enumerate() {
                if g.contains(&el.edges[0]) {
                    hits[i] += 1;
                }
            }
        }
        let sd = (trials as f64 / 4.0).sqrt();
        assert!((hits[0] as f64 - trials as f64 / 2.0).abs() < 3.0 * sd);
        let worst = hits.iter().map(|&h| (h as f64 - trials as f64 / 2.0).abs() / sd).fold(0.0, f64::max);
        // 680 marginals: allow the usual max-of-many excursion
        assert!(worst < 4.5, "{worst}");
        let mean = hits.iter().sum::<usize>() as f64 / (hits.len() * trials) as f64;
        assert!((mean - 0.5).abs() < 1e-12, "pairs are complementary so the mean is exact");
    }

    #[test]
    fn singleton_family_uses_independent_coins() {
        let f = PartitionedFamily::singletons(8, 3).unwrap();
        let p = DensitySpec::new(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 2000;
        let total: usize = (0..trials)
            .map(|_| build_quasirandom_from_partition(&f, p, &mut rng).unwrap().edge_count())
            .sum();
        let mean = total as f64 / trials as f64;
        let sd = (56.0 * 0.75 * 0.25 / trials as f64).sqrt();
        assert!((mean - 42.0).abs() < 3.0 * sd);
    }
}
