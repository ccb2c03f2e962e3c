//! JSON documents for stacks, analyses and reduction traces, plus DOT
//! rendering of fans.
//!
//! Integers cross the JSON boundary as numbers when they fit in 53 bits and
//! as decimal strings otherwise, so nothing is rounded by tools that read
//! numbers as doubles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cones::{Cone, Fan};
use crate::error::{Error, Result};
use crate::gm_poly::{self, CoordinateLocus, FixedComponent, Graded1TAction};
use crate::gms::{self, VarGitCase, Verdict};
use crate::group::DiagonalizableGroup;
use crate::linalg::Vector;
use crate::reduction::{ReductionTrace, VerificationReport};
use crate::stack::{stabilizer_dim_of, Classification, GerbeClass, MonomialStack, ToricStack, ToricUnion};

const SAFE_INTEGER: i64 = (1 << 53) - 1;

/// An exact integer in JSON.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= SAFE_INTEGER => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(i64),
            Text(String),
        }
        match Raw::deserialize(d).map_err(|_| serde::de::Error::custom("expected an integer or a decimal string"))? {
            Raw::Number(v) if v.abs() <= SAFE_INTEGER => Ok(JsonInt(v.into())),
            Raw::Number(v) => Err(serde::de::Error::custom(format!("{v} exceeds 53 bits; write it as a string"))),
            Raw::Text(t) => {
                t.trim().parse::<BigInt>().map(JsonInt).map_err(|_| serde::de::Error::custom(format!("{t:?} is not an integer")))
            }
        }
    }
}

pub type JsonVector = Vec<JsonInt>;

pub fn to_json(v: &[BigInt]) -> JsonVector {
    v.iter().cloned().map(JsonInt).collect()
}

pub fn from_json(v: &[JsonInt]) -> Vector {
    v.iter().map(|x| x.0.clone()).collect()
}

fn cone_rays(c: &Cone) -> Vec<JsonVector> {
    c.rays().iter().map(|r| to_json(r)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub free_rank: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion: Vec<JsonInt>,
    /// One weight per coordinate, each of length `free_rank + torsion.len()`.
    pub weights: Vec<JsonVector>,
}

impl GroupSpec {
    pub fn from_group(g: &DiagonalizableGroup) -> Self {
        let torsion = g.torsion();
        let free = g.free_weights();
        let weights = (0..g.ambient_dim())
            .map(|j| {
                let mut w = free.column(j);
                w.extend(torsion.iter().map(|(_, res)| res[j].clone()));
                to_json(&w)
            })
            .collect();
        GroupSpec { free_rank: g.free_rank(), torsion: torsion.iter().map(|(d, _)| JsonInt(d.clone())).collect(), weights }
    }

    pub fn build(&self, ambient: usize) -> Result<DiagonalizableGroup> {
        if self.weights.len() != ambient {
            return Err(Error::Invalid(format!(
                "group.weights has {} entries, but the ambient dimension is {ambient}",
                self.weights.len()
            )));
        }
        let torsion: Vec<BigInt> = self.torsion.iter().map(|t| t.0.clone()).collect();
        let weights: Vec<Vector> = self.weights.iter().map(|w| from_json(w)).collect();
        DiagonalizableGroup::new(self.free_rank, &torsion, &weights)
    }
}

/// Rays as integer tuples and cones as lists of ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub rays: Vec<JsonVector>,
    pub cones: Vec<Vec<usize>>,
}

impl FanSpec {
    /// The maximal cones of `fan`, over its sorted rays.
    pub fn from_fan(fan: &Fan) -> Self {
        let rays = fan.rays();
        let cones = fan.maximal_cones().iter().map(|c| ray_indices(&rays, c)).collect();
        FanSpec { rays: rays.iter().map(|r| to_json(r)).collect(), cones }
    }

    pub fn dim(&self) -> Result<usize> {
        let dims: BTreeSet<usize> = self.rays.iter().map(Vec::len).collect();
        match dims.len() {
            0 => Err(Error::Invalid("fan.rays is empty; give the ambient dimension through the weights".into())),
            1 => Ok(*dims.iter().next().expect("one length")),
            _ => Err(Error::Invalid(format!("fan.rays have different lengths {dims:?}"))),
        }
    }

    pub fn cone(&self, dim: usize, indices: &[usize], what: &str) -> Result<Cone> {
        let mut gens = Vec::new();
        for &i in indices {
            let ray = self
                .rays
                .get(i)
                .ok_or_else(|| Error::Invalid(format!("{what} {indices:?} references ray {i}, but there are {} rays", self.rays.len())))?;
            gens.push(from_json(ray));
        }
        let cone = Cone::new(dim, &gens).map_err(|e| Error::Invalid(format!("{what} {indices:?}: {e}")))?;
        if cone.len() != indices.len() {
            return Err(Error::Invalid(format!("{what} {indices:?} repeats a ray")));
        }
        if !cone.is_smooth() {
            return Err(Error::NotSmooth(format!("{what} {indices:?}")));
        }
        Ok(cone)
    }

    pub fn build(&self, dim: usize) -> Result<Fan> {
        let cones =
            self.cones.iter().enumerate().map(|(k, c)| self.cone(dim, c, &format!("fan.cones[{k}]"))).collect::<Result<Vec<_>>>()?;
        let fan = Fan::from_cones(dim, cones);
        fan.validate()?;
        Ok(fan)
    }
}

fn ray_indices(rays: &[Vector], c: &Cone) -> Vec<usize> {
    c.rays().iter().map(|r| rays.iter().position(|s| s == r).expect("cone rays are fan rays")).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Degree bound for saturated blowups in the `gm_poly` model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    /// Bound on the Rees degree searched when checking good moduli spaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gms_degree_bound: Option<usize>,
    /// Initial exceptional divisor, as rays.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub divisor: Vec<JsonVector>,
}

/// `[X(Σ)/G]`, or a union of orbit closures in it when `components` is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanModel {
    pub group: GroupSpec,
    pub fan: FanSpec,
    /// Cones `κ` (as ray index lists) whose orbit closures form the union.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

/// A union of coordinate subspaces, each given by its nonzero coordinates
/// (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialModel {
    pub group: GroupSpec,
    pub dim: usize,
    pub components: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GmPolyModel {
    pub weights: Vec<i64>,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarGitModel {
    pub a: u64,
    pub i: u64,
    pub j: i64,
}

fn is_default(o: &Options) -> bool {
    *o == Options::default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelDocument {
    Fan(FanModel),
    Monomial(MonomialModel),
    GmPoly(GmPolyModel),
    Vargit(VarGitModel),
}

/// Parses and validates a document.
pub fn parse_document(text: &str) -> Result<ModelDocument> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.validate()?;
    Ok(doc)
}

impl ModelDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn options(&self) -> Options {
        match self {
            ModelDocument::Fan(m) => m.options.clone(),
            ModelDocument::Monomial(m) => m.options.clone(),
            ModelDocument::GmPoly(m) => m.options.clone(),
            ModelDocument::Vargit(_) => Options::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelDocument::Fan(_) | ModelDocument::Monomial(_) => self.stack().map(|_| ()),
            ModelDocument::GmPoly(m) => m.action().map(|_| ()),
            ModelDocument::Vargit(m) => gms::vargit_locus(m.a, m.i, m.j).map(|_| ()),
        }
    }

    /// The stack of a fan or monomial model.
    pub fn stack(&self) -> Result<ToricUnion> {
        match self {
            ModelDocument::Fan(m) => m.union(),
            ModelDocument::Monomial(m) => m.stack().map(|x| x.as_union()),
            _ => Err(Error::Unsupported("only fan and monomial models describe toric stacks".into())),
        }
    }

    /// Initial exceptional rays from the options.
    pub fn divisor(&self) -> Vec<Vector> {
        self.options().divisor.iter().map(|r| from_json(r)).collect()
    }
}

impl FanModel {
    pub fn union(&self) -> Result<ToricUnion> {
        let dim = match self.fan.dim() {
            Ok(d) => d,
            Err(_) if self.fan.rays.is_empty() => self.group.weights.len(),
            Err(e) => return Err(e),
        };
        let group = self.group.build(dim)?;
        let fan = self.fan.build(dim)?;
        if self.components.is_empty() {
            return Ok(ToricStack::new(fan, group)?.as_union());
        }
        let comps = self
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| self.fan.cone(dim, c, &format!("components[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        ToricUnion::new(&fan, group, &comps)
    }

    pub fn from_union(x: &ToricUnion) -> Self {
        let fan = FanSpec::from_fan(x.fan());
        let rays = x.fan().rays();
        let components = if x.components() == [Cone::zero(x.ambient_dim())] {
            Vec::new()
        } else {
            x.components().iter().map(|c| ray_indices(&rays, c)).collect()
        };
        FanModel { group: GroupSpec::from_group(x.group()), fan, components, options: Options::default() }
    }
}

impl MonomialModel {
    pub fn stack(&self) -> Result<MonomialStack> {
        MonomialStack::new(self.dim, &self.components, self.group.build(self.dim)?)
    }
}

impl GmPolyModel {
    pub fn action(&self) -> Result<Graded1TAction> {
        let gens: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        Graded1TAction::parse(self.weights.clone(), &gens)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub cone: Vec<JsonVector>,
    pub dim: usize,
}

fn profile_entries(profile: &BTreeMap<Cone, usize>) -> Vec<ProfileEntry> {
    profile.iter().map(|(c, d)| ProfileEntry { cone: cone_rays(c), dim: *d }).collect()
}

/// Stability of a union: the generic orbit of every component must be stable.
pub fn classify(x: &ToricUnion) -> Classification {
    if x.is_empty() || x.check_stable().is_err() {
        return Classification::NotStable;
    }
    if x.components().iter().all(|k| stabilizer_dim_of(x.group(), k) == 0) {
        Classification::ProperlyStable
    } else {
        Classification::StableNotProper
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackAnalysis {
    pub classification: Classification,
    pub gerbe: GerbeClass,
    pub max_stabilizer_dim: usize,
    /// Minimal cones with the maximal stabilizer dimension.
    pub max_locus: Vec<Vec<JsonVector>>,
    pub stabilizer_dims: Vec<ProfileEntry>,
    pub stable_cones: Vec<Vec<JsonVector>>,
    /// Center of the first reduction step, when the stack is stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_center: Option<Vec<Vec<JsonVector>>>,
}

pub fn analyze_stack(x: &ToricUnion) -> StackAnalysis {
    let profile = x.stabilizer_profile();
    let top = profile.values().copied().max().unwrap_or(0);
    let at_top: Vec<&Cone> = profile.iter().filter(|(_, &d)| d == top).map(|(c, _)| c).collect();
    let max_locus = at_top.iter().filter(|c| !at_top.iter().any(|d| d != *c && d.is_face_of(c))).map(|c| cone_rays(c)).collect();
    let classification = classify(x);
    let next_center = match classification {
        Classification::NotStable => None,
        _ => x.next_centers().ok().map(|cs| cs.iter().map(cone_rays).collect()),
    };
    StackAnalysis {
        classification,
        gerbe: x.classify_gerbe(),
        max_stabilizer_dim: top,
        max_locus,
        stabilizer_dims: profile_entries(&profile),
        stable_cones: x.stable_cones().iter().map(cone_rays).collect(),
        next_center,
    }
}

/// A computation that may be unsupported or inconclusive on a given input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Error(String),
}

impl<T> From<Result<T>> for Outcome<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Error(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusReport {
    pub text: String,
    pub locus: CoordinateLocus,
}

impl From<CoordinateLocus> for LocusReport {
    fn from(locus: CoordinateLocus) -> Self {
        LocusReport { text: locus.to_string(), locus }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmPolyAnalysis {
    pub fixed_ideal: Vec<String>,
    pub tangent_cone: Outcome<Vec<String>>,
    /// Fixed points of the exceptional divisor of the blowup at the origin.
    pub blowup_fixed_points: Outcome<Vec<FixedComponent>>,
    pub reichstein_fixed_points: Outcome<Vec<FixedComponent>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_good_quotient: Option<LocusReport>,
    pub saturated_blowup_exceptional: Outcome<LocusReport>,
}

pub fn analyze_gm_poly(x: &Graded1TAction, degree_bound: u32) -> GmPolyAnalysis {
    let show = |ps: &[crate::poly::Poly]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let tc = gm_poly::tangent_cone(x);
    let blowup_fixed = tc.clone().and_then(|tc| gm_poly::projectivized_fixed_points(&tc.initial_forms, x.weights()));
    let reich = gm_poly::reichstein_fixed_points(x);
    GmPolyAnalysis {
        fixed_ideal: show(&gm_poly::fixed_ideal(x)),
        tangent_cone: tc.map(|t| show(&t.initial_forms)).into(),
        blowup_fixed_points: blowup_fixed.into(),
        no_good_quotient: reich.as_ref().ok().and_then(|r| r.no_good_quotient.clone()).map(Into::into),
        reichstein_fixed_points: reich.map(|r| r.fixed).into(),
        saturated_blowup_exceptional: gm_poly::saturated_blowup_exceptional(x, degree_bound).map(Into::into).into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Analysis {
    Fan(StackAnalysis),
    Monomial(StackAnalysis),
    GmPoly(GmPolyAnalysis),
    Vargit { case: VarGitCase },
}

pub fn analyze(doc: &ModelDocument, degree_bound: Option<u32>) -> Result<Analysis> {
    Ok(match doc {
        ModelDocument::Fan(_) => Analysis::Fan(analyze_stack(&doc.stack()?)),
        ModelDocument::Monomial(_) => Analysis::Monomial(analyze_stack(&doc.stack()?)),
        ModelDocument::GmPoly(m) => {
            let bound = degree_bound.or(m.options.degree_bound).unwrap_or(gm_poly::DEFAULT_DEGREE_BOUND);
            Analysis::GmPoly(analyze_gm_poly(&m.action()?, bound))
        }
        ModelDocument::Vargit(m) => Analysis::Vargit { case: gms::vargit_locus(m.a, m.i, m.j)? },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDocument {
    pub component: Vec<JsonVector>,
    pub cone: Vec<JsonVector>,
    pub units: Vec<String>,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmsCheckDocument {
    pub degree: Option<usize>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDocument {
    pub center: Vec<Vec<JsonVector>>,
    pub barycenters: Vec<JsonVector>,
    pub deleted_cones: Vec<Vec<JsonVector>>,
    pub exceptional_rays: Vec<JsonVector>,
    pub stab_profile_before: Vec<ProfileEntry>,
    pub stab_profile_after: Vec<ProfileEntry>,
    /// Invariant charts of the output's good moduli space.
    pub gms_charts: Outcome<Vec<ChartDocument>>,
    pub gms_check: Outcome<GmsCheckDocument>,
    pub output: FanModel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub initial: FanModel,
    pub initial_exceptional: Vec<JsonVector>,
    pub steps: Vec<StepDocument>,
    pub result: FanModel,
    pub exceptional: Vec<JsonVector>,
    pub classification: GerbeClass,
    pub verification: Vec<CheckDocument>,
}

fn charts_of(x: &ToricUnion) -> Result<Vec<ChartDocument>> {
    Ok(gms::gms_charts(x)?
        .iter()
        .map(|c| ChartDocument {
            component: cone_rays(&c.component),
            cone: cone_rays(&c.cone),
            units: c.units.iter().map(|u| gms::monomial(u)).collect(),
            generators: c.monomials(),
        })
        .collect())
}

pub fn trace_document(trace: &ReductionTrace, report: &VerificationReport, gms_bound: usize) -> TraceDocument {
    let vectors = |vs: &[Vector]| vs.iter().map(|v| to_json(v)).collect::<Vec<_>>();
    let steps = trace
        .steps
        .iter()
        .map(|s| {
            let t = &s.transform;
            StepDocument {
                center: t.centers.iter().map(cone_rays).collect(),
                barycenters: vectors(&t.barycenters),
                deleted_cones: t.deleted.iter().map(cone_rays).collect(),
                exceptional_rays: vectors(&t.exceptional),
                stab_profile_before: profile_entries(&s.profile_before),
                stab_profile_after: profile_entries(&s.profile_after),
                gms_charts: charts_of(&t.output).into(),
                gms_check: gms::gms_blowup_check(t, gms_bound).map(|c| GmsCheckDocument { degree: c.degree, verdict: c.verdict }).into(),
                output: FanModel::from_union(&t.output),
            }
        })
        .collect();
    TraceDocument {
        initial: FanModel::from_union(&trace.initial),
        initial_exceptional: vectors(&trace.initial_exceptional),
        steps,
        result: FanModel::from_union(&trace.result),
        exceptional: vectors(&trace.exceptional),
        classification: trace.classification,
        verification: report
            .checks
            .iter()
            .map(|c| CheckDocument { name: c.name.to_string(), step: c.step, passed: c.passed, detail: c.detail.clone() })
            .collect(),
    }
}

fn ray_label(r: &[BigInt]) -> String {
    format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// The face poset of the union as an undirected DOT graph, one node per
/// cone labelled by its ray indices; components are drawn as boxes.
pub fn fan_to_dot(x: &ToricUnion) -> String {
    let rays = x.fan().rays();
    let cones: Vec<Cone> = x.cones().into_iter().collect();
    let mut out = String::from("graph fan {\n  node [shape=ellipse];\n");
    for (k, r) in rays.iter().enumerate() {
        let _ = writeln!(out, "  // ray {k} = {}", ray_label(r));
    }
    for (k, c) in cones.iter().enumerate() {
        let idx = ray_indices(&rays, c);
        let label = format!("{{{}}}", idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
        let shape = if x.components().contains(c) { ", shape=box" } else { "" };
        let dim = stabilizer_dim_of(x.group(), c);
        let _ = writeln!(out, "  c{k} [label=\"{label}\\nstab {dim}\"{shape}];");
    }
    for (a, ca) in cones.iter().enumerate() {
        for (b, cb) in cones.iter().enumerate() {
            if cb.len() == ca.len() + 1 && ca.is_face_of(cb) {
                let _ = writeln!(out, "  c{a} -- c{b};");
            }
        }
    }
    out.push_str("}\n");
    out
}
