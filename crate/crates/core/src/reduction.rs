//! The stabilizer reduction loop and an independent checker for its traces.
//!
//! Each step blows up, on every connected component that still has unstable
//! points, the locus of unstable points of maximal stabilizer dimension and
//! removes the strict transform of its saturation. The exceptional ray set
//! is carried along as the inverse image of the center and the previous set.

use std::collections::{BTreeMap, BTreeSet};

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::saturation::{reichstein_transform, TransformStep};
use crate::stack::{stabilizer_dim_of, GerbeClass, ToricUnion};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub transform: TransformStep,
    pub exceptional_before: Vec<Vector>,
    pub profile_before: BTreeMap<Cone, usize>,
    pub profile_after: BTreeMap<Cone, usize>,
    /// Largest stabilizer dimension of an unstable point before the step.
    pub unstable_max_before: usize,
    pub unstable_max_after: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: ToricUnion,
    pub initial_exceptional: Vec<Vector>,
    pub steps: Vec<ReductionStep>,
    pub result: ToricUnion,
    pub exceptional: Vec<Vector>,
    pub classification: GerbeClass,
}

impl ReductionTrace {
    /// The sequence of stacks, without the exceptional bookkeeping.
    pub fn stacks(&self) -> Vec<ToricUnion> {
        std::iter::once(self.initial.clone()).chain(self.steps.iter().map(|s| s.transform.output.clone())).collect()
    }
}

fn unstable_max(x: &ToricUnion) -> Option<usize> {
    let stable = x.stable_cones();
    x.cones().iter().filter(|c| !stable.contains(*c)).map(|c| stabilizer_dim_of(x.group(), c)).max()
}

fn normalize_exceptional(x: &ToricUnion, rays: &[Vector]) -> Result<Vec<Vector>> {
    let present: BTreeSet<Vector> = x.fan().rays().into_iter().collect();
    let mut out = rays.to_vec();
    out.sort();
    out.dedup();
    if out.len() != rays.len() {
        return Err(Error::Invalid("exceptional rays must be distinct".into()));
    }
    if let Some(r) = out.iter().find(|r| !present.contains(*r)) {
        return Err(Error::NotMember(format!("exceptional ray {r:?} is not a ray of the stack")));
    }
    Ok(out)
}

/// Runs the reduction on a stack with a good moduli space whose components
/// all have a dense stable orbit.
pub fn reduce(x: &ToricUnion, initial_exceptional: &[Vector]) -> Result<ReductionTrace> {
    if x.is_empty() {
        return Err(Error::NotStable("the stack is empty".into()));
    }
    if !x.has_good_moduli_space() {
        return Err(Error::Unsupported("the stack has no good moduli space".into()));
    }
    x.check_stable()?;
    let e0 = normalize_exceptional(x, initial_exceptional)?;
    let mut current = x.clone();
    let mut exceptional = e0.clone();
    let mut steps = Vec::new();
    loop {
        let centers = current.next_centers()?;
        if centers.is_empty() {
            break;
        }
        if steps.len() > x.group().free_rank() {
            return Err(Error::Internal(format!(
                "no termination after {} steps on a group of rank {}",
                steps.len(),
                x.group().free_rank()
            )));
        }
        let before = unstable_max(&current).expect("a center exists only when some point is unstable");
        let transform = reichstein_transform(&current, &centers, &exceptional)?;
        let output = transform.output.clone();
        steps.push(ReductionStep {
            exceptional_before: exceptional.clone(),
            profile_before: current.stabilizer_profile(),
            profile_after: output.stabilizer_profile(),
            unstable_max_before: before,
            unstable_max_after: unstable_max(&output),
            transform,
        });
        exceptional = steps.last().expect("just pushed").transform.exceptional.clone();
        current = output;
    }
    let classification = current.classify_gerbe();
    Ok(ReductionTrace { initial: x.clone(), initial_exceptional: e0, steps, result: current, exceptional, classification })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    /// Step index, or `None` for checks on the whole trace.
    pub step: Option<usize>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &'static str, step: Option<usize>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name, step, passed, detail: detail.into() });
    }
}

fn show(cones: &BTreeSet<Cone>) -> String {
    cones.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// The input cone whose orbit receives `O_ν`, recomputed from the rays:
/// a new cone `τ + u` over a center `σ₀` maps into `O_{τ ∪ σ₀}`.
fn host_of(nu: &Cone, centers: &[Cone]) -> Cone {
    for c in centers {
        let u = c.barycenter();
        if nu.has_ray(&u) && c.len() > 1 {
            let rest: Vec<Vector> = nu.rays().iter().filter(|r| **r != u).cloned().collect();
            return Cone::new(nu.ambient_dim(), &rest).expect("faces of cones are cones").join(c);
        }
    }
    nu.clone()
}

fn verify_step(report: &mut VerificationReport, i: usize, step: &ReductionStep, e_before: &[Vector], e_after: &[Vector]) {
    let t = &step.transform;
    let input = &t.input;
    let output = &t.output;
    match input.next_centers() {
        Ok(c) => report.record("center", Some(i), c == t.centers, format!("declared {:?}, recomputed {:?}", names(&t.centers), names(&c))),
        Err(e) => report.record("center", Some(i), false, e.to_string()),
    }

    let e_set: BTreeSet<&Vector> = e_after.iter().collect();
    let rays: BTreeSet<Vector> = output.fan().rays().into_iter().collect();
    let snc = e_set.len() == e_after.len() && e_after.iter().all(|r| rays.contains(r));
    report.record("exceptional rays distinct", Some(i), snc, format!("{} rays", e_after.len()));
    let out_cones = output.cones();
    let in_e: BTreeSet<Cone> = out_cones.iter().filter(|c| c.rays().iter().any(|r| e_set.contains(r))).cloned().collect();
    let expected: BTreeSet<Cone> = out_cones
        .iter()
        .filter(|nu| {
            let host = host_of(nu, &t.centers);
            t.centers.iter().any(|c| c.is_face_of(&host)) || host.rays().iter().any(|r| e_before.contains(r))
        })
        .cloned()
        .collect();
    report.record(
        "exceptional update",
        Some(i),
        in_e == expected,
        format!("difference {}", show(&in_e.symmetric_difference(&expected).cloned().collect())),
    );

    // orbits outside the preimage of the centers, mapped to their images
    let untouched: BTreeSet<Cone> =
        out_cones.iter().map(|nu| host_of(nu, &t.centers)).filter(|host| !t.centers.iter().any(|c| c.is_face_of(host))).collect();
    let sat = match input.saturation(&t.centers) {
        Ok(s) => s.cones,
        Err(e) => {
            report.record("isomorphism off the saturation", Some(i), false, e.to_string());
            return;
        }
    };
    let off_sat: BTreeSet<Cone> = input.cones().into_iter().filter(|c| !sat.contains(c)).collect();
    report.record(
        "isomorphism off the saturation",
        Some(i),
        untouched == off_sat,
        format!("difference {}", show(&untouched.symmetric_difference(&off_sat).cloned().collect())),
    );

    let before = unstable_max(input);
    let after = unstable_max(output);
    let dropped = match (before, after) {
        (Some(b), Some(a)) => a < b,
        (Some(_), None) => true,
        (None, _) => false,
    };
    report.record("stabilizer maximum drops", Some(i), dropped, format!("{before:?} -> {after:?}"));
}

fn names(cones: &[Cone]) -> Vec<String> {
    cones.iter().map(|c| c.to_string()).collect()
}

/// Re-derives every conclusion of the reduction from the raw fans of a trace.
pub fn verify_trace(trace: &ReductionTrace) -> VerificationReport {
    let mut report = VerificationReport::default();
    let mut prev = &trace.initial;
    let mut e_prev: &[Vector] = &trace.initial_exceptional;
    for (i, step) in trace.steps.iter().enumerate() {
        let chained = &step.transform.input == prev && step.exceptional_before == e_prev;
        report.record("steps chain", Some(i), chained, "input of the step is the previous output");
        let e_after: &[Vector] = if i + 1 < trace.steps.len() { &trace.steps[i + 1].exceptional_before } else { &trace.exceptional };
        verify_step(&mut report, i, step, e_prev, e_after);
        let out = &step.transform.output;
        report.record("good moduli space", Some(i), out.is_empty() || out.has_good_moduli_space(), "");
        prev = &step.transform.output;
        e_prev = e_after;
    }
    report.record("result matches last step", None, prev == &trace.result, "");

    let r = trace.initial.group().free_rank();
    report.record("step count", None, trace.steps.len() <= r, format!("{} steps, group rank {r}", trace.steps.len()));

    let x = &trace.result;
    let unstable: BTreeSet<Cone> = x.cones().difference(&x.stable_cones()).cloned().collect();
    report.record("every point stable", None, unstable.is_empty(), format!("unstable {}", show(&unstable)));

    let profile = x.stabilizer_profile();
    let mut constant = true;
    for group in x.connected_components() {
        let dims: BTreeSet<usize> = x.restrict(&group).cones().iter().map(|c| profile[c]).collect();
        constant &= dims.len() <= 1;
    }
    report.record("stabilizer dimension locally constant", None, constant, "");

    let initial_stable = trace.initial.stable_cones();
    let properly = initial_stable.iter().all(|c| stabilizer_dim_of(trace.initial.group(), c) == 0);
    let class = x.classify_gerbe();
    if properly {
        report.record("tame", None, x.is_empty() || class == GerbeClass::Tame, format!("{class:?}"));
    } else {
        report.record("gerbe over a tame stack", None, class != GerbeClass::None, format!("{class:?}"));
    }
    report.record("classification recorded", None, class == trace.classification, format!("{:?}", trace.classification));

    let away = |cones: BTreeSet<Cone>, e: &[Vector]| -> BTreeSet<Cone> {
        cones.into_iter().filter(|c| !c.rays().iter().any(|r| e.contains(r))).collect()
    };
    let final_open = away(x.cones(), &trace.exceptional);
    let initial_open = away(initial_stable, &trace.initial_exceptional);
    report.record(
        "isomorphism over the stable locus",
        None,
        final_open == initial_open,
        format!("difference {}", show(&final_open.symmetric_difference(&initial_open).cloned().collect())),
    );
    report
}
