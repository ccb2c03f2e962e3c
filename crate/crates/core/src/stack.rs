//! Stack models: `[X(Σ)/G]`, unions of orbit closures, and unions of
//! coordinate subspaces, together with stabilizer dimensions and stability.
//!
//! Points are tracked up to the torus action, so every locus is a set of
//! cones (one per torus orbit). The general model is [`ToricUnion`]: an
//! ambient smooth fan plus the orbit closures `V(κ)` making up the stack.
//! [`ToricStack`] is the irreducible case `κ = {0}` and [`MonomialStack`]
//! is the case of coordinate subspaces of affine space.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cones::{Cone, Fan};
use crate::error::{Error, Result};
use crate::group::DiagonalizableGroup;
use crate::linalg::intersection_dim;
use crate::saturation::{saturation_in, FlowGraph, SaturationResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ProperlyStable,
    StableNotProper,
    NotStable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GerbeClass {
    Tame,
    GerbeOverTame,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// Minimum stabilizer dimension `d`.
    pub min_dim: usize,
    /// Maximum stabilizer dimension `N`.
    pub max_dim: usize,
    pub stable_cones: BTreeSet<Cone>,
    pub classification: Classification,
}

/// Dimension of the stabilizer of a point of the orbit `O_τ`.
pub fn stabilizer_dim_of(group: &DiagonalizableGroup, tau: &Cone) -> usize {
    let shared = intersection_dim(&tau.span(), &group.cocharacter_space()).expect("cone and group live in the same lattice");
    shared + group.generic_stabilizer_dim()
}

/// A stack partitioned by stabilizer dimension into strata given as cone sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    /// Largest stabilizer dimension `N`.
    pub max_dim: usize,
    /// Largest stabilizer dimension of an unstable point, if any.
    pub unstable_max: Option<usize>,
    /// Stable orbits grouped by stabilizer dimension.
    pub stable_by_dim: BTreeMap<usize, BTreeSet<Cone>>,
    /// Orbits with stabilizer dimension at most `n`.
    pub low: BTreeSet<Cone>,
    /// Closure of the stable orbits of dimension `n`.
    pub stable_top_closure: BTreeSet<Cone>,
    /// The open set `X_{≤n}` minus that closure.
    pub rest: BTreeSet<Cone>,
    pub rest_closure: BTreeSet<Cone>,
    /// Minimal cones of the points of `rest_closure` with stabilizer dimension `n`.
    pub center: Vec<Cone>,
}

/// A union of orbit closures `V(κ_i)` in a smooth toric variety, modulo `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricUnion {
    fan: Fan,
    group: DiagonalizableGroup,
    components: Vec<Cone>,
}

impl ToricUnion {
    /// The ambient fan is trimmed to the faces of cones lying in the union,
    /// which changes nothing about the stack but makes equality structural.
    pub fn new(fan: &Fan, group: DiagonalizableGroup, components: &[Cone]) -> Result<Self> {
        if group.ambient_dim() != fan.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: fan.ambient_dim(), found: group.ambient_dim() });
        }
        let mut comps: Vec<Cone> = components.to_vec();
        comps.sort();
        comps.dedup();
        for c in &comps {
            if !fan.contains(c) {
                return Err(Error::NotMember(c.to_string()));
            }
        }
        for (i, a) in comps.iter().enumerate() {
            for b in &comps[i + 1..] {
                if a.is_face_of(b) || b.is_face_of(a) {
                    return Err(Error::Invalid(format!("components {a} and {b} are nested")));
                }
            }
        }
        let union_cones = fan.star_of_set(comps.iter());
        let trimmed = Fan::from_cones(fan.ambient_dim(), union_cones);
        Ok(ToricUnion { fan: trimmed, group, components: comps })
    }

    pub fn empty(dim: usize, group: DiagonalizableGroup) -> Self {
        ToricUnion { fan: Fan::empty(dim), group, components: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.fan.ambient_dim()
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn group(&self) -> &DiagonalizableGroup {
        &self.group
    }

    pub fn components(&self) -> &[Cone] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Cones whose orbits lie in the stack.
    pub fn cones(&self) -> BTreeSet<Cone> {
        self.fan.star_of_set(self.components.iter())
    }

    pub fn contains(&self, c: &Cone) -> bool {
        self.fan.contains(c) && self.components.iter().any(|k| k.is_face_of(c))
    }

    pub fn stabilizer_dim(&self, tau: &Cone) -> Result<usize> {
        if !self.contains(tau) {
            return Err(Error::NotMember(tau.to_string()));
        }
        Ok(stabilizer_dim_of(&self.group, tau))
    }

    pub fn stabilizer_profile(&self) -> BTreeMap<Cone, usize> {
        self.cones()
            .into_iter()
            .map(|c| {
                let d = stabilizer_dim_of(&self.group, &c);
                (c, d)
            })
            .collect()
    }

    pub fn flows(&self) -> FlowGraph {
        FlowGraph::build(&self.group, &self.cones())
    }

    /// Every orbit lies in an affine chart `U_σ` that is a union of fibers:
    /// chains of flows neither leave nor enter it. The good moduli space is
    /// then glued from the affine quotients of these charts.
    pub fn has_good_moduli_space(&self) -> bool {
        let cones = self.cones();
        let flows = self.flows();
        let mut reach: BTreeMap<&Cone, BTreeSet<&Cone>> =
            cones.iter().map(|c| (c, flows.targets(c).iter().map(|(t, _)| t).collect())).collect();
        loop {
            let snapshot = reach.clone();
            let mut changed = false;
            for set in reach.values_mut() {
                let extra: Vec<&Cone> = set.iter().flat_map(|t| snapshot[*t].iter().copied()).collect();
                for t in extra {
                    changed |= set.insert(t);
                }
            }
            if !changed {
                break;
            }
        }
        let saturated = |sigma: &Cone| {
            cones.iter().all(|b| {
                let inside = b.is_face_of(sigma);
                reach[b].iter().all(|t| t.is_face_of(sigma) == inside)
            })
        };
        let mut covered: BTreeSet<&Cone> = BTreeSet::new();
        for sigma in cones.iter().filter(|s| saturated(s)) {
            covered.extend(cones.iter().filter(|b| b.is_face_of(sigma)));
        }
        covered.len() == cones.len()
    }

    pub fn saturation(&self, centers: &[Cone]) -> Result<SaturationResult> {
        for c in centers {
            if !self.contains(c) {
                return Err(Error::NotMember(c.to_string()));
            }
        }
        Ok(saturation_in(&self.cones(), &self.flows(), centers))
    }

    /// Indices of components grouped into connected components; `V(κ_i)`
    /// and `V(κ_j)` meet iff `κ_i ∪ κ_j` is a cone.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let k = self.components.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for i in 0..k {
            for j in i + 1..k {
                if self.fan.contains(&self.components[i].join(&self.components[j])) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..k {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// The sub-union made of the given components.
    pub fn restrict(&self, indices: &[usize]) -> ToricUnion {
        let comps: Vec<Cone> = indices.iter().map(|&i| self.components[i].clone()).collect();
        ToricUnion::new(&self.fan, self.group.clone(), &comps).expect("sub-union of a valid union")
    }

    /// Orbits `O_τ` that are stable: no other orbit flows into them and
    /// they flow nowhere, so the fiber of the good moduli space is `O_τ`.
    pub fn stable_cones(&self) -> BTreeSet<Cone> {
        let flows = self.flows();
        self.cones().into_iter().filter(|c| flows.is_isolated(c)).collect()
    }

    pub fn is_stable(&self) -> bool {
        self.stable_cones().len() == self.cones().len()
    }

    /// Each component contains a dense stable orbit.
    pub fn check_stable(&self) -> Result<()> {
        let stable = self.stable_cones();
        for k in &self.components {
            if !stable.contains(k) {
                return Err(Error::NotStable(format!("generic orbit of component {k} is not stable")));
            }
        }
        Ok(())
    }

    pub fn classify_gerbe(&self) -> GerbeClass {
        let profile = self.stabilizer_profile();
        if profile.values().all(|&d| d == 0) {
            return GerbeClass::Tame;
        }
        let constant = self.connected_components().iter().all(|group| {
            let sub = self.restrict(group);
            let dims: BTreeSet<usize> = sub.cones().iter().map(|c| profile[c]).collect();
            dims.len() <= 1
        });
        if constant {
            GerbeClass::GerbeOverTame
        } else {
            GerbeClass::None
        }
    }

    /// Stratification by stabilizer dimension and the resulting blowup center,
    /// computed on the whole union.
    pub fn partition(&self) -> Partition {
        let profile = self.stabilizer_profile();
        let stable = self.stable_cones();
        partition_of(&profile, &stable)
    }

    /// The center of the next reduction step: the union of the centers of
    /// the connected components that still have unstable points.
    pub fn next_centers(&self) -> Result<Vec<Cone>> {
        let mut centers = Vec::new();
        for group in self.connected_components() {
            let sub = self.restrict(&group);
            let part = sub.partition();
            if part.unstable_max.is_none() {
                continue;
            }
            let members = sub.cones();
            for (i, a) in part.center.iter().enumerate() {
                for b in &part.center[i + 1..] {
                    if members.iter().any(|c| a.is_face_of(c) && b.is_face_of(c)) {
                        return Err(Error::UnsupportedCenter(format!("center components {a} and {b} meet, so the center is not smooth")));
                    }
                }
            }
            centers.extend(part.center);
        }
        centers.sort();
        Ok(centers)
    }

    /// Product with `A¹` carrying the trivial action.
    pub fn times_line(&self) -> ToricUnion {
        let n = self.ambient_dim();
        let lift = |c: &Cone| {
            let rays: Vec<_> = c
                .rays()
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.push(0.into());
                    r
                })
                .collect();
            Cone::new(n + 1, &rays).expect("lifted rays stay primitive")
        };
        let extra = Cone::coordinate(n + 1, &[n]);
        let cones = self.fan.cones().iter().map(|c| lift(c).join(&extra));
        let fan = Fan::from_cones(n + 1, cones);
        let comps: Vec<Cone> = self.components.iter().map(lift).collect();
        ToricUnion::new(&fan, self.group.with_trivial_coordinates(1), &comps).expect("products of valid unions are valid")
    }
}

fn partition_of(profile: &BTreeMap<Cone, usize>, stable: &BTreeSet<Cone>) -> Partition {
    let max_dim = profile.values().copied().max().unwrap_or(0);
    let unstable_max = profile.iter().filter(|(c, _)| !stable.contains(*c)).map(|(_, &d)| d).max();
    let mut stable_by_dim: BTreeMap<usize, BTreeSet<Cone>> = BTreeMap::new();
    for c in stable {
        stable_by_dim.entry(profile[c]).or_default().insert(c.clone());
    }
    let Some(n) = unstable_max else {
        return Partition { max_dim, stable_by_dim, ..Default::default() };
    };
    let closure =
        |set: &BTreeSet<Cone>| -> BTreeSet<Cone> { profile.keys().filter(|c| set.iter().any(|s| s.is_face_of(c))).cloned().collect() };
    let low: BTreeSet<Cone> = profile.iter().filter(|(_, &d)| d <= n).map(|(c, _)| c.clone()).collect();
    let top = stable_by_dim.get(&n).cloned().unwrap_or_default();
    let stable_top_closure = closure(&top);
    let rest: BTreeSet<Cone> = low.difference(&stable_top_closure).cloned().collect();
    let rest_closure = closure(&rest);
    let at_n: Vec<&Cone> = rest_closure.iter().filter(|c| profile[*c] == n).collect();
    let center = at_n.iter().filter(|c| !at_n.iter().any(|d| d != *c && d.is_face_of(c))).map(|c| (*c).clone()).collect();
    Partition { max_dim, unstable_max, stable_by_dim, low, stable_top_closure, rest, rest_closure, center }
}

/// `[X(Σ)/G]` for a smooth fan `Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricStack {
    fan: Fan,
    group: DiagonalizableGroup,
}

impl ToricStack {
    pub fn new(fan: Fan, group: DiagonalizableGroup) -> Result<Self> {
        if fan.ambient_dim() != group.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: fan.ambient_dim(), found: group.ambient_dim() });
        }
        if let Some(c) = fan.cones().iter().find(|c| !c.is_smooth()) {
            return Err(Error::NotSmooth(c.to_string()));
        }
        Ok(ToricStack { fan, group })
    }

    /// `[Aⁿ/G]`.
    pub fn affine(group: DiagonalizableGroup) -> Self {
        let fan = Fan::affine_space(group.ambient_dim());
        ToricStack { fan, group }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn group(&self) -> &DiagonalizableGroup {
        &self.group
    }

    pub fn is_empty(&self) -> bool {
        self.fan.is_empty()
    }

    pub fn as_union(&self) -> ToricUnion {
        if self.fan.is_empty() {
            return ToricUnion::empty(self.fan.ambient_dim(), self.group.clone());
        }
        ToricUnion::new(&self.fan, self.group.clone(), &[Cone::zero(self.fan.ambient_dim())])
            .expect("the zero cone lies in every nonempty fan")
    }

    /// Reads back a stack from a union with at most one component, the zero cone.
    pub fn from_union(u: &ToricUnion) -> Result<Self> {
        match u.components() {
            [] => Ok(ToricStack { fan: Fan::empty(u.ambient_dim()), group: u.group().clone() }),
            [k] if k.is_empty() => Ok(ToricStack { fan: u.fan().clone(), group: u.group().clone() }),
            _ => Err(Error::Invalid("union is not irreducible toric".into())),
        }
    }

    pub fn stabilizer_dim(&self, sigma: &Cone) -> Result<usize> {
        if !self.fan.contains(sigma) {
            return Err(Error::NotMember(sigma.to_string()));
        }
        Ok(stabilizer_dim_of(&self.group, sigma))
    }

    /// Minimal cones of maximal stabilizer dimension.
    pub fn max_locus(&self) -> Result<Vec<Cone>> {
        if self.fan.is_empty() {
            return Err(Error::Invalid("empty fan".into()));
        }
        let dims: BTreeMap<&Cone, usize> = self.fan.cones().iter().map(|c| (c, stabilizer_dim_of(&self.group, c))).collect();
        let top = *dims.values().max().expect("fan is nonempty");
        let at_top: Vec<&Cone> = dims.iter().filter(|(_, &d)| d == top).map(|(c, _)| *c).collect();
        let minimal: Vec<Cone> =
            at_top.iter().filter(|c| !at_top.iter().any(|d| d != *c && d.is_face_of(c))).map(|c| (*c).clone()).collect();
        for (i, a) in minimal.iter().enumerate() {
            for b in &minimal[i + 1..] {
                if self.fan.contains(&a.join(b)) {
                    return Err(Error::Internal(format!("maximal stabilizer locus is not smooth: {a} and {b} meet")));
                }
            }
        }
        Ok(minimal)
    }

    /// Stable orbits as the complement of the saturation of `X_{>d}`.
    pub fn stable_locus(&self) -> Result<StabilityReport> {
        if self.fan.is_empty() {
            return Err(Error::Invalid("empty fan".into()));
        }
        let dims: BTreeMap<Cone, usize> = self.fan.cones().iter().map(|c| (c.clone(), stabilizer_dim_of(&self.group, c))).collect();
        let min_dim = *dims.values().min().expect("fan is nonempty");
        let max_dim = *dims.values().max().expect("fan is nonempty");
        let above: Vec<Cone> = dims.iter().filter(|(_, &d)| d > min_dim).map(|(c, _)| c.clone()).collect();
        let minimal_above: Vec<Cone> = above.iter().filter(|c| !above.iter().any(|d| d != *c && d.is_face_of(c))).cloned().collect();
        let union = self.as_union();
        let sat = union.saturation(&minimal_above)?;
        let stable_cones: BTreeSet<Cone> = self.fan.cones().iter().filter(|c| !sat.cones.contains(*c)).cloned().collect();
        let classification = if stable_cones.is_empty() {
            Classification::NotStable
        } else if min_dim == 0 {
            Classification::ProperlyStable
        } else {
            Classification::StableNotProper
        };
        Ok(StabilityReport { min_dim, max_dim, stable_cones, classification })
    }

    pub fn classify_gerbe(&self) -> GerbeClass {
        self.as_union().classify_gerbe()
    }
}

/// A union of coordinate subspaces `V(x_j : j ∈ S)` of `Aⁿ`, modulo `G`.
/// Supports are 0-based coordinate index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialStack {
    n: usize,
    components: Vec<BTreeSet<usize>>,
    group: DiagonalizableGroup,
}

/// The stratification of a monomial stack, with closed sets given by the
/// supports of their irreducible components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialPartition {
    pub partition: Partition,
    pub stable_top_closure: Vec<BTreeSet<usize>>,
    pub rest_closure: Vec<BTreeSet<usize>>,
    pub center: Vec<BTreeSet<usize>>,
}

impl MonomialStack {
    pub fn new(n: usize, supports: &[Vec<usize>], group: DiagonalizableGroup) -> Result<Self> {
        if group.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: group.ambient_dim() });
        }
        let mut components: Vec<BTreeSet<usize>> = Vec::new();
        for s in supports {
            if let Some(&j) = s.iter().find(|&&j| j >= n) {
                return Err(Error::Invalid(format!("coordinate index {j} out of range")));
            }
            components.push(s.iter().copied().collect());
        }
        components.sort();
        components.dedup();
        for (i, a) in components.iter().enumerate() {
            for b in &components[i + 1..] {
                if a.is_subset(b) || b.is_subset(a) {
                    return Err(Error::Invalid(format!("components {a:?} and {b:?} are nested")));
                }
            }
        }
        Ok(MonomialStack { n, components, group })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[BTreeSet<usize>] {
        &self.components
    }

    pub fn group(&self) -> &DiagonalizableGroup {
        &self.group
    }

    pub fn as_union(&self) -> ToricUnion {
        let comps: Vec<Cone> = self.components.iter().map(|s| support_cone(self.n, s)).collect();
        ToricUnion::new(&Fan::affine_space(self.n), self.group.clone(), &comps).expect("coordinate subspaces form a valid union")
    }

    /// Stabilizer dimension at the generic point of `V(x_S)` minus the
    /// other coordinate hyperplanes: `r` minus the rank of the weights off `S`.
    pub fn support_stabilizer_dim(&self, support: &BTreeSet<usize>) -> usize {
        let off: Vec<usize> = (0..self.n).filter(|j| !support.contains(j)).collect();
        let sub = self.group.restrict(&off);
        self.group.free_rank() - sub.weight_rank()
    }

    pub fn monomial_partition(&self) -> Result<MonomialPartition> {
        let partition = self.as_union().partition();
        let to_supports = |set: &BTreeSet<Cone>| -> Result<Vec<BTreeSet<usize>>> {
            let minimal: Vec<&Cone> = set.iter().filter(|c| !set.iter().any(|d| d != *c && d.is_face_of(c))).collect();
            minimal.into_iter().map(cone_support).collect()
        };
        Ok(MonomialPartition {
            stable_top_closure: to_supports(&partition.stable_top_closure)?,
            rest_closure: to_supports(&partition.rest_closure)?,
            center: partition.center.iter().map(cone_support).collect::<Result<_>>()?,
            partition,
        })
    }
}

pub fn support_cone(n: usize, support: &BTreeSet<usize>) -> Cone {
    Cone::coordinate(n, &support.iter().copied().collect::<Vec<_>>())
}

/// Inverse of [`support_cone`] for cones spanned by standard basis vectors.
pub fn cone_support(c: &Cone) -> Result<BTreeSet<usize>> {
    c.rays()
        .iter()
        .map(|r| {
            let nonzero: Vec<usize> = (0..r.len()).filter(|&i| r[i] != 0.into()).collect();
            match nonzero.as_slice() {
                [i] if r[*i] == 1.into() => Ok(*i),
                _ => Err(Error::Invalid(format!("{c} is not a coordinate cone"))),
            }
        })
        .collect()
}
