//! Seeded instance generators and brute-force oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabreduce::cones::Cone;
use stabreduce::linalg::{rational_solve, to_rational, vector, IntMatrix, QVector, Vector};
use stabreduce::saturation::destabilizing_cocharacter;
use stabreduce::stack::stabilizer_dim_of;
use stabreduce::{DiagonalizableGroup, Fan, ToricStack, ToricUnion};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Torus of rank `1..=min(3, n-1)` with weights in `[-2, 2]`, sometimes with a
/// cyclic factor.
pub fn random_group(rng: &mut ChaCha8Rng, n: usize) -> DiagonalizableGroup {
    let r = rng.gen_range(1..=3.min(n - 1));
    let order = if rng.gen_bool(0.25) { Some(rng.gen_range(2i64..=3)) } else { None };
    let weights: Vec<Vector> = (0..n)
        .map(|_| {
            let mut w: Vec<i64> = (0..r).map(|_| rng.gen_range(-2..=2)).collect();
            if let Some(d) = order {
                w.push(rng.gen_range(0..d));
            }
            vector(&w)
        })
        .collect();
    let torsion: Vec<BigInt> = order.into_iter().map(BigInt::from).collect();
    DiagonalizableGroup::new(r, &torsion, &weights).expect("weights have the right length")
}

/// The orthant, star subdivided up to twice at random cones of dimension at least two.
pub fn random_fan(rng: &mut ChaCha8Rng, n: usize) -> Fan {
    let mut fan = Fan::affine_space(n);
    for _ in 0..rng.gen_range(0..=2) {
        let big: Vec<Cone> = fan.cones().iter().filter(|c| c.len() >= 2).cloned().collect();
        let pick = big[rng.gen_range(0..big.len())].clone();
        fan = fan.star_subdivision(&pick).expect("cone of the fan");
    }
    fan
}

/// A smooth toric stack of dimension `2..=4` with a good moduli space and
/// a dense stable orbit. Most instances have unstable points.
pub fn random_stable_stack(rng: &mut ChaCha8Rng) -> ToricUnion {
    loop {
        let n = rng.gen_range(2..=4);
        let group = random_group(rng, n);
        let fan = random_fan(rng, n);
        // the dense orbit is stable iff the zero cone flows nowhere
        let zero = Cone::zero(n);
        if fan.cones().iter().any(|t| !t.is_empty() && destabilizing_cocharacter(&group, &zero, t).is_some()) {
            continue;
        }
        let x = ToricStack::new(fan, group).expect("valid stack").as_union();
        if !x.has_good_moduli_space() {
            continue;
        }
        if x.stable_cones().len() == x.cones().len() && rng.gen_bool(0.75) {
            continue;
        }
        return x;
    }
}

pub fn stable_instances(seed: u64, count: usize) -> Vec<ToricUnion> {
    let mut r = rng(seed);
    (0..count).map(|_| random_stable_stack(&mut r)).collect()
}

fn cochar_box(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// `reach[τ]`: orbits in the closure of the limits of the generic point of
/// `O_τ` under all cocharacters in a box, closed under composition.
pub fn oracle_reach(x: &ToricUnion, radius: i64) -> Reach {
    let group = x.group();
    let cones = &x.cones();
    let n = group.ambient_dim();
    let mut reach: BTreeMap<Cone, BTreeSet<Cone>> = cones.iter().map(|c| (c.clone(), [c.clone()].into())).collect();
    for y in cochar_box(group.free_rank(), radius) {
        let lam = to_rational(&group.cocharacter_image(&vector(&y)));
        for target in cones {
            // λ lies in the span of the target, with nonpositive coefficients
            // exactly on the rays the limit does not push to zero
            let rows: Vec<QVector> =
                (0..n).map(|i| target.rays().iter().map(|v| BigRational::from_integer(v[i].clone())).collect()).collect();
            let Some(coeffs) = rational_solve(&rows, &lam, target.len()) else { continue };
            let lagging: Vec<Vector> =
                target.rays().iter().zip(&coeffs).filter(|(_, c)| **c <= BigRational::zero()).map(|(v, _)| v.clone()).collect();
            let lagging = Cone::new(n, &lagging).expect("subset of rays");
            for tau in cones {
                if tau.is_face_of(target) && lagging.is_face_of(tau) {
                    reach.get_mut(tau).expect("cone present").insert(target.clone());
                }
            }
        }
    }
    loop {
        let snapshot = reach.clone();
        let mut changed = false;
        for set in reach.values_mut() {
            let extra: BTreeSet<Cone> = set.iter().flat_map(|t| snapshot[t].iter().cloned()).collect();
            for e in extra {
                changed |= set.insert(e);
            }
        }
        if !changed {
            return reach;
        }
    }
}

pub type Reach = BTreeMap<Cone, BTreeSet<Cone>>;

pub fn oracle_saturation(reach: &Reach, centers: &[Cone]) -> BTreeSet<Cone> {
    reach.iter().filter(|(_, set)| set.iter().any(|t| centers.iter().any(|c| c.is_face_of(t)))).map(|(c, _)| c.clone()).collect()
}

/// Orbits that neither degenerate nor are degenerated into.
pub fn oracle_stable(reach: &Reach) -> BTreeSet<Cone> {
    reach
        .iter()
        .filter(|(c, set)| set.len() == 1 && !reach.iter().any(|(d, s)| d != *c && s.contains(*c)))
        .map(|(c, _)| c.clone())
        .collect()
}

pub fn oracle_unstable_max(x: &ToricUnion, reach: &Reach) -> Option<usize> {
    let stable = oracle_stable(reach);
    x.cones().iter().filter(|c| !stable.contains(*c)).map(|c| stabilizer_dim_of(x.group(), c)).max()
}

/// An `r × n` weight matrix, `n ≤ 6`, `r ≤ 3`, entries in `[-3, 3]`.
pub fn random_representation(rng: &mut ChaCha8Rng) -> IntMatrix {
    let n = rng.gen_range(1..=6);
    let r = rng.gen_range(1..=3);
    let rows: Vec<Vector> = (0..r).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()).collect();
    IntMatrix::from_rows(n, rows)
}

pub fn cone(rays: &[&[i64]]) -> Cone {
    let dim = rays.first().map_or(0, |r| r.len());
    Cone::new(dim, &rays.iter().map(|r| vector(r)).collect::<Vec<_>>()).expect("valid rays")
}
