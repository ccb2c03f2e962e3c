//! Saturations of closed torus-invariant loci and Reichstein transforms.
//!
//! A point of `O_τ` flows to `O_τ'` under the cocharacter `λ` exactly when
//! the image of `λ` in `N` is a combination of the rays of `τ'` whose
//! coefficients on the rays outside `τ` are positive. Such single-step
//! limits suffice to detect saturation, which the tests check against a
//! brute-force search over many cocharacters.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cones::{Cone, Fan};
use crate::error::{Error, Result};
use crate::group::DiagonalizableGroup;
use crate::linalg::{clear_denominators, QVector, Vector};
use crate::lp::LinearSystem;
use crate::stack::{cone_support, support_cone, MonomialStack, ToricStack, ToricUnion};

/// A cocharacter of `G` (coordinates in the free part of the character
/// group) driving the generic point of `O_τ` into `O_target`, or `None`.
pub fn destabilizing_cocharacter(group: &DiagonalizableGroup, tau: &Cone, target: &Cone) -> Option<Vector> {
    if tau == target || !tau.is_face_of(target) {
        return None;
    }
    let r = group.free_rank();
    let k = target.len();
    let n = group.ambient_dim();
    let w = group.free_weights();
    // unknowns (y_1..y_r, c_1..c_k): Wᵀy = Σ c_ρ v_ρ and c_ρ ≥ 1 off τ
    let mut system = LinearSystem::new(r + k);
    for i in 0..n {
        let row: QVector = (0..r)
            .map(|j| BigRational::from_integer(w.get(j, i).clone()))
            .chain(target.rays().iter().map(|v| BigRational::from_integer(-v[i].clone())))
            .collect();
        system.eq(row, BigRational::zero());
    }
    for (idx, ray) in target.rays().iter().enumerate() {
        if !tau.has_ray(ray) {
            let mut row = vec![BigRational::zero(); r + k];
            row[r + idx] = BigRational::one();
            system.ge(row, BigRational::one());
        }
    }
    let solution = system.solve()?;
    Some(clear_denominators(&solution[..r]))
}

/// Checked version of [`destabilizing_cocharacter`] for a toric stack.
pub fn destabilizes(x: &ToricStack, tau: &Cone, target: &Cone) -> Result<Option<Vector>> {
    for c in [tau, target] {
        if !x.fan().contains(c) {
            return Err(Error::NotMember(c.to_string()));
        }
    }
    if !tau.is_face_of(target) {
        return Err(Error::Invalid(format!("{tau} is not a face of {target}")));
    }
    Ok(destabilizing_cocharacter(x.group(), tau, target))
}

/// All single-step flows `O_τ ⇝ O_τ'` between orbits of a cone set.
#[derive(Clone, Debug, Default)]
pub struct FlowGraph {
    rank: usize,
    edges: BTreeMap<Cone, Vec<(Cone, Vector)>>,
    incoming: BTreeSet<Cone>,
}

impl FlowGraph {
    pub fn build(group: &DiagonalizableGroup, cones: &BTreeSet<Cone>) -> FlowGraph {
        let mut edges: BTreeMap<Cone, Vec<(Cone, Vector)>> = BTreeMap::new();
        let mut incoming = BTreeSet::new();
        for tau in cones {
            for target in cones {
                if target.len() <= tau.len() || !tau.is_face_of(target) {
                    continue;
                }
                if let Some(y) = destabilizing_cocharacter(group, tau, target) {
                    edges.entry(tau.clone()).or_default().push((target.clone(), y));
                    incoming.insert(target.clone());
                }
            }
        }
        FlowGraph { rank: group.free_rank(), edges, incoming }
    }

    pub fn targets(&self, tau: &Cone) -> &[(Cone, Vector)] {
        self.edges.get(tau).map_or(&[], |v| v.as_slice())
    }

    /// The orbit is closed and no other orbit specializes to it.
    pub fn is_isolated(&self, tau: &Cone) -> bool {
        self.targets(tau).is_empty() && !self.incoming.contains(tau)
    }

    /// Cones whose orbit closure is closed in the stack, i.e. that flow nowhere.
    pub fn is_closed_orbit(&self, tau: &Cone) -> bool {
        self.targets(tau).is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationWitness {
    /// The orbit reached in the limit; contains a center.
    pub target: Cone,
    /// Zero when the cone already lies over a center.
    pub cocharacter: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationResult {
    /// Minimal cones of `π⁻¹(π(C))` with their witnesses, in canonical order.
    pub minimal: Vec<(Cone, SaturationWitness)>,
    /// Every cone whose orbit lies in the saturation.
    pub cones: BTreeSet<Cone>,
}

impl SaturationResult {
    pub fn minimal_cones(&self) -> Vec<Cone> {
        self.minimal.iter().map(|(c, _)| c.clone()).collect()
    }
}

pub(crate) fn saturation_in(cones: &BTreeSet<Cone>, flows: &FlowGraph, centers: &[Cone]) -> SaturationResult {
    let over_center = |c: &Cone| centers.iter().any(|s| s.is_face_of(c));
    let mut witnesses: BTreeMap<Cone, SaturationWitness> = BTreeMap::new();
    for tau in cones {
        if over_center(tau) {
            witnesses.insert(tau.clone(), SaturationWitness { target: tau.clone(), cocharacter: vec![BigInt::zero(); flows.rank] });
            continue;
        }
        if let Some((target, y)) = flows.targets(tau).iter().find(|(t, _)| over_center(t)) {
            witnesses.insert(tau.clone(), SaturationWitness { target: target.clone(), cocharacter: y.clone() });
        }
    }
    let members: BTreeSet<Cone> = witnesses.keys().cloned().collect();
    let minimal = witnesses
        .iter()
        .filter(|(c, _)| !members.iter().any(|d| d != *c && d.is_face_of(c)))
        .map(|(c, w)| (c.clone(), w.clone()))
        .collect();
    SaturationResult { minimal, cones: members }
}

/// `π⁻¹(π(C))` for a union of orbit closures `C = ⋃ V(σ₀)`.
pub fn saturation(x: &ToricStack, centers: &[Cone]) -> Result<SaturationResult> {
    for c in centers {
        if !x.fan().contains(c) {
            return Err(Error::NotMember(c.to_string()));
        }
    }
    x.as_union().saturation(centers)
}

/// One Reichstein transform: blow up the centers, then delete the strict
/// transform of their saturation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformStep {
    pub input: ToricUnion,
    pub centers: Vec<Cone>,
    /// One barycenter per center, in the order of `centers`.
    pub barycenters: Vec<Vector>,
    pub saturation: SaturationResult,
    /// Minimal cones of the deleted strict transforms, in the blown-up fan.
    pub deleted: Vec<Cone>,
    /// The full blown-up fan, before deletion.
    pub blowup: Fan,
    pub output: ToricUnion,
    /// Rays of the exceptional divisor of the output.
    pub exceptional: Vec<Vector>,
}

impl TransformStep {
    /// The cone of the input whose orbit contains the image of `O_ν`.
    pub fn host(&self, nu: &Cone) -> Cone {
        for (center, u) in self.centers.iter().zip(&self.barycenters) {
            if nu.has_ray(u) && !center.has_ray(u) {
                let rest = Cone::new(nu.ambient_dim(), &nu.rays().iter().filter(|r| *r != u).cloned().collect::<Vec<_>>())
                    .expect("rays of a cone are valid generators");
                return rest.join(center);
            }
        }
        nu.clone()
    }
}

/// Reichstein transform of a union of orbit closures along the centers,
/// carrying along an exceptional ray set.
pub fn reichstein_transform(x: &ToricUnion, centers: &[Cone], prior_exceptional: &[Vector]) -> Result<TransformStep> {
    let mut centers = centers.to_vec();
    centers.sort();
    centers.dedup();
    let members = x.cones();
    for c in &centers {
        if !members.contains(c) {
            return Err(Error::NotMember(c.to_string()));
        }
        if c.is_empty() {
            return Err(Error::Invalid("center must be a proper orbit closure".into()));
        }
        if !c.is_smooth() {
            return Err(Error::NotSmooth(c.to_string()));
        }
    }
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            if members.iter().any(|m| a.is_face_of(m) && b.is_face_of(m)) {
                return Err(Error::OverlappingCenters(format!("{a} and {b}")));
            }
        }
    }
    let saturation = x.saturation(&centers)?;
    let mut blowup = x.fan().clone();
    for c in &centers {
        blowup = blowup.star_subdivision(c)?;
    }
    let barycenters: Vec<Vector> = centers.iter().map(Cone::barycenter).collect();
    let deleted: Vec<Cone> = saturation.minimal_cones().into_iter().filter(|t| !centers.iter().any(|c| c.is_face_of(t))).collect();
    let remaining = blowup.remove_stars(deleted.iter());
    let components: Vec<Cone> =
        x.components().iter().filter(|k| !centers.iter().any(|c| c.is_face_of(k)) && remaining.contains(k)).cloned().collect();
    let output = ToricUnion::new(&remaining, x.group().clone(), &components)?;
    let present: BTreeSet<Vector> = output.fan().rays().into_iter().collect();
    let mut exceptional: Vec<Vector> = barycenters.iter().chain(prior_exceptional).filter(|r| present.contains(*r)).cloned().collect();
    exceptional.sort();
    exceptional.dedup();
    Ok(TransformStep { input: x.clone(), centers, barycenters, saturation, deleted, blowup, output, exceptional })
}

/// Reichstein transform of a smooth toric stack.
pub fn reichstein_fan(x: &ToricStack, centers: &[Cone]) -> Result<TransformStep> {
    for c in centers {
        if !x.fan().contains(c) {
            return Err(Error::NotMember(c.to_string()));
        }
    }
    reichstein_transform(&x.as_union(), centers, &[])
}

/// Result of blowing up one component of a monomial stack in its own
/// affine space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTransform {
    pub support: BTreeSet<usize>,
    /// Coordinates of the component's affine space, in ambient numbering.
    pub coordinates: Vec<usize>,
    /// Center inside the component, in local numbering; `None` when the
    /// component lies inside the center and disappears.
    pub local_center: Option<BTreeSet<usize>>,
    /// `None` when the component lies inside the center.
    pub step: Option<TransformStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBlowup {
    pub components: Vec<ComponentTransform>,
    /// The same transform computed on the whole union at once.
    pub union_step: TransformStep,
    /// Pairs of component indices whose strict transforms still meet.
    pub overlaps: Vec<(usize, usize)>,
}

/// Saturated blowup of a union of coordinate subspaces along the coordinate
/// subspace `V(x_j : j ∈ center)`, computed componentwise.
pub fn monomial_saturated_blowup(x: &MonomialStack, center: &BTreeSet<usize>) -> Result<MonomialBlowup> {
    if !x.components().iter().any(|s| s.is_subset(center)) {
        return Err(Error::Invalid(format!("center {center:?} is not contained in the stack")));
    }
    let n = x.ambient_dim();
    let union = x.as_union();
    let union_step = reichstein_transform(&union, &[support_cone(n, center)], &[])?;
    let mut components = Vec::new();
    for s in x.components() {
        let coordinates: Vec<usize> = (0..n).filter(|j| !s.contains(j)).collect();
        let local: BTreeSet<usize> = coordinates.iter().enumerate().filter(|(_, j)| center.contains(j)).map(|(i, _)| i).collect();
        if local.is_empty() {
            components.push(ComponentTransform { support: s.clone(), coordinates, local_center: None, step: None });
            continue;
        }
        let z = ToricStack::affine(x.group().restrict(&coordinates));
        let step = reichstein_fan(&z, &[support_cone(coordinates.len(), &local)])?;
        components.push(ComponentTransform { support: s.clone(), coordinates, local_center: Some(local), step: Some(step) });
    }
    let out = &union_step.output;
    let surviving: Vec<Cone> = x.components().iter().map(|s| support_cone(n, s)).collect();
    let mut overlaps = Vec::new();
    for i in 0..surviving.len() {
        for j in i + 1..surviving.len() {
            if out.contains(&surviving[i]) && out.contains(&surviving[j]) && out.fan().contains(&surviving[i].join(&surviving[j])) {
                overlaps.push((i, j));
            }
        }
    }
    Ok(MonomialBlowup { components, union_step, overlaps })
}

/// Projects the cones of the union containing the component `κ = e_S` to
/// the component's own lattice `ℤ^{[n]∖S}`.
pub fn project_component(x: &ToricUnion, kappa: &Cone) -> Result<BTreeSet<Cone>> {
    let support = cone_support(kappa)?;
    let n = x.ambient_dim();
    let keep: Vec<usize> = (0..n).filter(|j| !support.contains(j)).collect();
    x.cones()
        .iter()
        .filter(|c| kappa.is_face_of(c))
        .map(|c| {
            let rays: Vec<Vector> = c.without_rays(kappa).rays().iter().map(|r| keep.iter().map(|&j| r[j].clone()).collect()).collect();
            Cone::new(keep.len(), &rays)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rational_solve, to_rational, vector};
    use crate::stack::stabilizer_dim_of;
    use proptest::prelude::*;

    fn cone(rays: &[&[i64]]) -> Cone {
        let dim = rays.first().map_or(0, |r| r.len());
        Cone::new(dim, &rays.iter().map(|r| vector(r)).collect::<Vec<_>>()).unwrap()
    }

    /// Limits of the generic point of `O_τ` under every cocharacter in a
    /// box, closed under composition.
    pub(crate) fn oracle_saturation(group: &DiagonalizableGroup, cones: &BTreeSet<Cone>, centers: &[Cone], radius: i64) -> BTreeSet<Cone> {
        let r = group.free_rank();
        let mut cochars: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..r {
            cochars = cochars
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
        let mut reach: BTreeMap<Cone, BTreeSet<Cone>> = cones.iter().map(|c| (c.clone(), [c.clone()].into())).collect();
        for y in &cochars {
            let lam = to_rational(&group.cocharacter_image(&vector(y)));
            for target in cones {
                let rows: Vec<QVector> = (0..group.ambient_dim())
                    .map(|i| target.rays().iter().map(|v| BigRational::from_integer(v[i].clone())).collect())
                    .collect();
                let Some(coeffs) = rational_solve(&rows, &lam, target.len()) else { continue };
                let lagging = Cone::new(
                    group.ambient_dim(),
                    &target
                        .rays()
                        .iter()
                        .zip(&coeffs)
                        .filter(|(_, c)| **c <= BigRational::zero())
                        .map(|(v, _)| v.clone())
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                for tau in cones {
                    if tau.is_face_of(target) && lagging.is_face_of(tau) {
                        reach.get_mut(tau).unwrap().insert(target.clone());
                    }
                }
            }
        }
        loop {
            let mut changed = false;
            let snapshot = reach.clone();
            for set in reach.values_mut() {
                let extra: BTreeSet<Cone> = set.iter().flat_map(|t| snapshot[t].iter().cloned()).collect();
                for e in extra {
                    changed |= set.insert(e);
                }
            }
            if !changed {
                break;
            }
        }
        reach.into_iter().filter(|(_, set)| set.iter().any(|t| centers.iter().any(|c| c.is_face_of(t)))).map(|(c, _)| c).collect()
    }

    #[test]
    fn destabilizing_examples() {
        let x = ToricStack::affine(DiagonalizableGroup::gm(&[1, -1]));
        let e1 = Cone::coordinate(2, &[0]);
        let w = destabilizes(&x, &e1, &Cone::orthant(2)).unwrap().unwrap();
        assert_eq!(w, vector(&[-1]));
        // the limit of (0, b) under t ↦ t^{-1}: weight −1 coordinate scales by t
        assert_eq!(x.group().cocharacter_image(&w), vector(&[-1, 1]));
        assert_eq!(destabilizes(&x, &e1, &e1).unwrap(), None);
        assert!(destabilizes(&x, &Cone::orthant(2), &e1).is_err());

        let y = ToricStack::affine(DiagonalizableGroup::gm(&[1, 1, -1]));
        assert_eq!(destabilizes(&y, &Cone::zero(3), &Cone::coordinate(3, &[2])).unwrap(), None);
        // the generic point (a,b,c) has no limit into V(z) under ±(1,1,−1)
        for s in [1, -1] {
            let lam = y.group().cocharacter_image(&vector(&[s]));
            let coords: Vec<i64> = lam.iter().map(|v| i64::try_from(v).unwrap()).collect();
            assert!(coords.iter().any(|&c| c < 0));
        }
    }

    #[test]
    fn saturation_examples() {
        let line = ToricStack::affine(DiagonalizableGroup::gm(&[1]));
        let s = saturation(&line, &[Cone::orthant(1)]).unwrap();
        assert_eq!(s.minimal_cones(), vec![Cone::zero(1)]);
        assert_eq!(s.cones.len(), 2);

        let x = ToricStack::affine(DiagonalizableGroup::gm(&[1, 1, -1]));
        let s = saturation(&x, &[Cone::orthant(3)]).unwrap();
        assert_eq!(s.minimal_cones(), vec![Cone::coordinate(3, &[2]), Cone::coordinate(3, &[0, 1])]);
        for (c, w) in &s.minimal {
            assert!(Cone::orthant(3).is_face_of(&w.target));
            assert!(c.is_face_of(&w.target));
        }

        let y = ToricStack::affine(DiagonalizableGroup::gm(&[1, -1]));
        let s = saturation(&y, &[Cone::orthant(2)]).unwrap();
        assert_eq!(s.minimal_cones(), vec![Cone::coordinate(2, &[1]), Cone::coordinate(2, &[0])]);
        let oracle = oracle_saturation(y.group(), y.fan().cones(), &[Cone::orthant(2)], 3);
        assert_eq!(s.cones, oracle);
    }

    #[test]
    fn transform_of_the_weight_one_line_is_empty() {
        let line = ToricStack::affine(DiagonalizableGroup::gm(&[1]));
        let step = reichstein_fan(&line, &[Cone::orthant(1)]).unwrap();
        assert!(step.output.is_empty());
        assert!(ToricStack::from_union(&step.output).unwrap().is_empty());
    }

    #[test]
    fn transform_of_opposite_weights() {
        let x = ToricStack::affine(DiagonalizableGroup::gm(&[1, -1]));
        let step = reichstein_fan(&x, &[Cone::orthant(2)]).unwrap();
        let out = ToricStack::from_union(&step.output).unwrap();
        let expected: BTreeSet<Cone> = [Cone::zero(2), cone(&[&[1, 1]])].into_iter().collect();
        assert_eq!(out.fan().cones(), &expected);
        // the two torus-fixed points of the exceptional P¹ are removed
        let u = vector(&[1, 1]);
        let gone: BTreeSet<Cone> = step.blowup.cones().iter().filter(|c| c.has_ray(&u) && !out.fan().contains(c)).cloned().collect();
        assert_eq!(gone, [cone(&[&[1, 0], &[1, 1]]), cone(&[&[0, 1], &[1, 1]])].into_iter().collect());
        assert_eq!(step.exceptional, vec![u]);
    }

    #[test]
    fn transform_of_weights_one_one_minus_one() {
        let x = ToricStack::affine(DiagonalizableGroup::gm(&[1, 1, -1]));
        let step = reichstein_fan(&x, &[Cone::orthant(3)]).unwrap();
        let out = ToricStack::from_union(&step.output).unwrap();
        let mut maximal = out.fan().maximal_cones();
        maximal.sort();
        let mut expected = vec![cone(&[&[1, 0, 0], &[1, 1, 1]]), cone(&[&[0, 1, 0], &[1, 1, 1]])];
        expected.sort();
        assert_eq!(maximal, expected);
    }

    #[test]
    fn overlapping_centers_are_rejected() {
        let x = ToricStack::affine(DiagonalizableGroup::gm(&[1, -1, 0]));
        let a = Cone::coordinate(3, &[0]);
        let b = Cone::coordinate(3, &[1]);
        assert!(matches!(reichstein_fan(&x, &[a, b]), Err(Error::OverlappingCenters(_))));
    }

    #[test]
    fn monomial_example_componentwise() {
        let x = MonomialStack::new(3, &[vec![0, 1], vec![2]], DiagonalizableGroup::gm(&[1, -1, 0])).unwrap();
        let center: BTreeSet<usize> = [0, 1, 2].into();
        let b = monomial_saturated_blowup(&x, &center).unwrap();
        assert!(b.overlaps.is_empty());
        // the z-axis meets the center in a point, a Cartier divisor: unchanged
        let axis = &b.components[0];
        let step = axis.step.as_ref().unwrap();
        assert_eq!(step.output.fan(), step.input.fan());
        // the plane is blown up as in the opposite-weights example
        let plane = &b.components[1];
        let out = plane.step.as_ref().unwrap().output.cones();
        assert_eq!(out, [Cone::zero(2), cone(&[&[1, 1]])].into_iter().collect());
        for (comp, s) in b.components.iter().zip(x.components()) {
            let kappa = support_cone(3, s);
            let projected = project_component(&b.union_step.output, &kappa).unwrap();
            assert_eq!(projected, comp.step.as_ref().unwrap().output.cones());
        }
    }

    #[test]
    fn monomial_component_inside_center_vanishes() {
        let y = MonomialStack::new(2, &[vec![0, 1]], DiagonalizableGroup::gm(&[1, -1])).unwrap();
        let gone = monomial_saturated_blowup(&y, &[0, 1].into()).unwrap();
        assert!(gone.components[0].local_center.is_none());
        assert!(gone.union_step.output.is_empty());
    }

    fn random_group() -> impl Strategy<Value = DiagonalizableGroup> {
        (2usize..5, 1usize..3).prop_flat_map(|(n, r)| {
            proptest::collection::vec(proptest::collection::vec(-2i64..3, r), n)
                .prop_map(move |w| DiagonalizableGroup::torus(&w.iter().map(|c| vector(c)).collect::<Vec<_>>()).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn saturation_matches_exhaustive_limits(g in random_group(), pick in any::<usize>()) {
            let x = ToricStack::affine(g.clone());
            let cones: Vec<Cone> = x.fan().cones().iter().cloned().collect();
            let center = cones[pick % cones.len()].clone();
            let s = saturation(&x, std::slice::from_ref(&center)).unwrap();
            let oracle = oracle_saturation(&g, x.fan().cones(), &[center], 3);
            prop_assert_eq!(s.cones, oracle);
        }

        #[test]
        fn stable_locus_matches_orbit_criterion(g in random_group()) {
            let x = ToricStack::affine(g.clone());
            let report = x.stable_locus().unwrap();
            prop_assert_eq!(&report.stable_cones, &x.as_union().stable_cones());
            for c in &report.stable_cones {
                prop_assert_eq!(stabilizer_dim_of(&g, c), report.min_dim);
            }
        }

        #[test]
        fn stabilizer_dims_are_upper_semicontinuous(g in random_group()) {
            let x = ToricStack::affine(g.clone());
            for a in x.fan().cones() {
                for b in x.fan().cones() {
                    if a.is_face_of(b) {
                        prop_assert!(stabilizer_dim_of(&g, a) <= stabilizer_dim_of(&g, b));
                    }
                }
            }
        }

        #[test]
        fn transform_drops_the_maximal_stabilizer(g in random_group()) {
            let x = ToricStack::affine(g.clone());
            let top = x.fan().cones().iter().map(|c| stabilizer_dim_of(&g, c)).max().unwrap();
            prop_assume!(top > g.generic_stabilizer_dim());
            let centers = x.max_locus().unwrap();
            let step = reichstein_fan(&x, &centers).unwrap();
            for c in step.output.cones() {
                prop_assert!(stabilizer_dim_of(&g, &c) < top);
            }
            prop_assert!(step.output.fan().is_smooth());
            // untouched away from the saturation
            for c in x.fan().cones() {
                if !step.saturation.cones.contains(c) {
                    prop_assert!(step.output.contains(c));
                }
            }
        }

        #[test]
        fn transform_commutes_with_a_trivial_factor(g in random_group()) {
            let x = ToricStack::affine(g.clone()).as_union();
            let top = x.cones().iter().map(|c| stabilizer_dim_of(&g, c)).max().unwrap();
            prop_assume!(top > g.generic_stabilizer_dim());
            let centers = ToricStack::affine(g).max_locus().unwrap();
            let step = reichstein_transform(&x, &centers, &[]).unwrap();
            let lifted: Vec<Cone> = centers.iter().map(|c| {
                let rays: Vec<Vector> = c.rays().iter().map(|r| { let mut r = r.clone(); r.push(0.into()); r }).collect();
                Cone::new(c.ambient_dim() + 1, &rays).unwrap()
            }).collect();
            let step2 = reichstein_transform(&x.times_line(), &lifted, &[]).unwrap();
            prop_assert_eq!(step2.output, step.output.times_line());
        }
    }
}
