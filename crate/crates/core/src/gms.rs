//! Good moduli space charts and the saturated-blowup identity.
//!
//! Over an open set `U_σ` that is a union of fibers of `π`, the good moduli
//! space is `Spec k[σ^∨ ∩ κ^⊥ ∩ K]` with `K` the invariant characters. The
//! Rees algebra of the invariant ideals `π_*(I^k)` of a center is again a
//! monoid algebra, so generation in degree one and the charts of its Proj
//! reduce to Hilbert bases.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::hilbert::{relation_lattice, Monoid};
use crate::linalg::{dot, Vector};
use crate::saturation::{FlowGraph, TransformStep};
use crate::stack::{ToricStack, ToricUnion};

/// Default bound on the Rees degree searched by [`gms_blowup_check`].
pub const DEFAULT_DEGREE_BOUND: usize = 12;

/// The invariant monoid of one chart of the good moduli space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantChart {
    /// Minimal cone of the component the chart lives on.
    pub component: Cone,
    pub cone: Cone,
    /// Basis of the invertible invariants (Laurent part).
    pub units: Vec<Vector>,
    pub generators: Vec<Vector>,
    /// Basis of the relation lattice among `generators`.
    pub relations: Vec<Vector>,
}

impl InvariantChart {
    pub fn monomials(&self) -> Vec<String> {
        self.generators.iter().map(|m| monomial(m)).collect()
    }
}

/// `x1^2*x2`, with `1` for the empty product.
pub fn monomial(m: &[BigInt]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| if e.is_one() { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `{m ∈ K : ⟨m, v⟩ ≥ 0 on σ, ⟨m, v⟩ = 0 on κ}`.
pub fn chart_monoid(x: &ToricUnion, component: &Cone, cone: &Cone) -> Monoid {
    Monoid::new(x.ambient_dim(), x.group().invariant_lattice(), cone.rays().to_vec(), component.rays().to_vec())
}

fn chart(x: &ToricUnion, component: &Cone, cone: &Cone) -> Result<InvariantChart> {
    let hb = chart_monoid(x, component, cone).hilbert_basis()?;
    Ok(InvariantChart {
        component: component.clone(),
        cone: cone.clone(),
        relations: relation_lattice(x.ambient_dim(), &hb.basis),
        units: hb.units,
        generators: hb.basis,
    })
}

/// The chart `Spec (k[σ^∨ ∩ M])^G` of `[X(σ)/G]`.
pub fn invariant_chart(x: &ToricStack, sigma: &Cone) -> Result<InvariantChart> {
    if !x.fan().contains(sigma) {
        return Err(Error::NotMember(sigma.to_string()));
    }
    if x.fan().ambient_dim() > 6 {
        return Err(Error::SizeLimit(format!("invariant charts are limited to rank 6, got {}", x.fan().ambient_dim())));
    }
    chart(&x.as_union(), &Cone::zero(sigma.ambient_dim()), sigma)
}

/// The closed orbit in the closure of `O_b`.
fn closed_orbit(flows: &FlowGraph, b: &Cone) -> Cone {
    if flows.is_closed_orbit(b) {
        return b.clone();
    }
    flows
        .targets(b)
        .iter()
        .map(|(t, _)| t)
        .filter(|t| flows.is_closed_orbit(t))
        .max_by(|a, c| a.len().cmp(&c.len()).then(a.cmp(c)))
        .cloned()
        .unwrap_or_else(|| b.clone())
}

/// Cones `σ` of a single-component union with `U_σ = π⁻¹(π(U_σ))`.
pub fn saturated_cones(x: &ToricUnion) -> BTreeSet<Cone> {
    let cones = x.cones();
    let flows = x.flows();
    let polystable: Vec<(Cone, Cone)> = cones.iter().map(|b| (b.clone(), closed_orbit(&flows, b))).collect();
    cones.iter().filter(|sigma| polystable.iter().all(|(b, c)| b.is_face_of(sigma) == c.is_face_of(sigma))).cloned().collect()
}

fn maximal(cones: &BTreeSet<Cone>) -> Vec<Cone> {
    cones.iter().filter(|c| !cones.iter().any(|d| d != *c && c.is_face_of(d))).cloned().collect()
}

/// Charts of the good moduli space of each component, one per maximal
/// saturated cone.
pub fn gms_charts(x: &ToricUnion) -> Result<Vec<InvariantChart>> {
    let mut out = Vec::new();
    for (i, kappa) in x.components().iter().enumerate() {
        let sub = x.restrict(&[i]);
        for sigma in maximal(&saturated_cones(&sub)) {
            out.push(chart(x, kappa, &sigma)?);
        }
    }
    Ok(out)
}

/// `{(m, k) : m ∈ σ^∨ ∩ κ^⊥ ∩ K, 0 ≤ d·k ≤ ⟨m, u⟩}`, the monoid of the
/// invariant Rees algebra `⊕ π_*(I^{dk})`.
fn rees_monoid(x: &ToricUnion, component: &Cone, cone: &Cone, u: &[BigInt], d: usize) -> Monoid {
    let n = x.ambient_dim();
    let pad = |v: &[BigInt], last: BigInt| -> Vector {
        let mut w = v.to_vec();
        w.push(last);
        w
    };
    let mut lattice: Vec<Vector> = x.group().invariant_lattice().iter().map(|m| pad(m, BigInt::zero())).collect();
    let mut t = vec![BigInt::zero(); n];
    t.push(BigInt::one());
    lattice.push(t.clone());
    let mut inequalities: Vec<Vector> = cone.rays().iter().map(|v| pad(v, BigInt::zero())).collect();
    inequalities.push(t);
    inequalities.push(pad(u, -BigInt::from(d)));
    let equalities = component.rays().iter().map(|v| pad(v, BigInt::zero())).collect();
    Monoid::new(n + 1, lattice, inequalities, equalities)
}

/// Module generators of `π_*(I^i)` over the chart, where `I` is the ideal
/// of `V(σ₀)` and `u` its barycenter.
pub fn invariant_ideal_generators(x: &ToricUnion, component: &Cone, cone: &Cone, u: &[BigInt], i: usize) -> Result<Vec<Vector>> {
    let hb = rees_monoid(x, component, cone, u, i).hilbert_basis()?;
    Ok(hb.basis.iter().filter(|v| v[v.len() - 1].is_one()).map(|v| v[..v.len() - 1].to_vec()).collect())
}

fn generated_in_degree_one(m: &Monoid) -> Result<bool> {
    let hb = m.hilbert_basis()?;
    let top = |v: &Vector| v[v.len() - 1].clone();
    Ok(hb.basis.iter().all(|v| top(v) <= BigInt::one()) && hb.units.iter().all(|v| top(v).is_zero()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "detail")]
pub enum Verdict {
    Verified,
    Mismatch(String),
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartBlowup {
    pub component: Cone,
    pub cone: Cone,
    pub center: Cone,
    /// Generators of `π_*(I^d)` on the chart.
    pub ideal_generators: Vec<Vector>,
    /// Output charts lying over this chart.
    pub output_cones: Vec<Cone>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupCheck {
    /// Least `d` for which every invariant Rees algebra is generated in degree one.
    pub degree: Option<usize>,
    pub charts: Vec<ChartBlowup>,
    pub verdict: Verdict,
}

/// Chart `D_+(g)` of `Proj ⊕ π_*(I^{dk})`: the degree-zero part of the
/// localization at the generator `g = x^{m_g}`.
fn blowup_chart(x: &ToricUnion, component: &Cone, cone: &Cone, u: &[BigInt], d: usize, mg: &[BigInt]) -> Monoid {
    let mut inequalities: Vec<Vector> = cone.rays().iter().filter(|v| dot(mg, v).is_zero()).cloned().collect();
    if dot(mg, u) == BigInt::from(d) {
        inequalities.push(u.to_vec());
    }
    Monoid::new(x.ambient_dim(), x.group().invariant_lattice(), inequalities, component.rays().to_vec())
}

/// Compares the good moduli space of the transform with the blowup of the
/// input's good moduli space in `π_*(I^d)`, chart by chart.
pub fn gms_blowup_check(step: &TransformStep, bound: usize) -> Result<BlowupCheck> {
    let input = &step.input;
    let output = &step.output;
    let mut touched = Vec::new();
    let mut verdict = Verdict::Verified;
    for (i, kappa) in input.components().iter().enumerate() {
        let sub = input.restrict(&[i]);
        for sigma in maximal(&saturated_cones(&sub)) {
            match step.centers.iter().position(|c| c.is_face_of(&sigma)) {
                Some(j) => touched.push((kappa.clone(), sigma, j)),
                None => {
                    // away from the center nothing may change
                    let kept = output
                        .components()
                        .iter()
                        .position(|k| k == kappa)
                        .map(|o| saturated_cones(&output.restrict(&[o])).contains(&sigma))
                        .unwrap_or(false);
                    if !kept && verdict == Verdict::Verified {
                        verdict = Verdict::Mismatch(format!("chart {sigma} away from the center changed"));
                    }
                }
            }
        }
    }

    let mut degree = None;
    for d in 1..=bound {
        let mut all = true;
        for (kappa, sigma, j) in &touched {
            let u = &step.barycenters[*j];
            if !generated_in_degree_one(&rees_monoid(input, kappa, sigma, u, d))? {
                all = false;
                break;
            }
        }
        if all {
            degree = Some(d);
            break;
        }
    }
    let Some(d) = degree else {
        return Ok(BlowupCheck {
            degree: None,
            charts: Vec::new(),
            verdict: Verdict::Inconclusive(format!("no Rees degree up to {bound} is generated in degree one")),
        });
    };

    let mut charts = Vec::new();
    for (kappa, sigma, j) in touched {
        let u = &step.barycenters[j];
        let gens = invariant_ideal_generators(input, &kappa, &sigma, u, d)?;
        let pieces: Vec<Monoid> = gens.iter().map(|g| blowup_chart(input, &kappa, &sigma, u, d, g)).collect();
        let mut minimal_pieces: Vec<&Monoid> = Vec::new();
        for p in &pieces {
            let mut smaller = false;
            for q in &pieces {
                if q.cone_within(p)? && !p.cone_within(q)? {
                    smaller = true;
                    break;
                }
            }
            if !smaller {
                minimal_pieces.push(p);
            }
        }
        let output_cones: Vec<Cone> = match output.components().iter().position(|k| *k == kappa) {
            Some(o) => {
                maximal(&saturated_cones(&output.restrict(&[o]))).into_iter().filter(|nu| step.host(nu).is_face_of(&sigma)).collect()
            }
            None => Vec::new(),
        };
        let output_monoids: Vec<Monoid> = output_cones.iter().map(|nu| chart_monoid(output, &kappa, nu)).collect();
        let mut matched = true;
        for q in &output_monoids {
            let mut found = false;
            for p in &minimal_pieces {
                if q.same_cone(p)? {
                    found = true;
                    break;
                }
            }
            matched &= found;
        }
        for p in &minimal_pieces {
            let mut found = false;
            for q in &output_monoids {
                if q.same_cone(p)? {
                    found = true;
                    break;
                }
            }
            matched &= found;
        }
        if !matched && verdict == Verdict::Verified {
            verdict = Verdict::Mismatch(format!("charts over {sigma} differ from the blowup of the quotient"));
        }
        charts.push(ChartBlowup {
            component: kappa,
            cone: sigma,
            center: step.centers[j].clone(),
            ideal_generators: gens,
            output_cones,
            matched,
        });
    }
    Ok(BlowupCheck { degree: Some(d), charts, verdict })
}

/// Open subsets of `ℙ¹` cut out by the semi-invariant sections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarGitCase {
    MinusP2,
    MinusP1,
    MinusBoth,
    Empty,
}

/// Semistable locus of `ℙ¹ = ℙ(𝒪 ⊕ V^a)` for the linearization
/// `𝒪(i) ⊗ V^j`: the common zeros of the invariant sections `u^p v^q`
/// (`p + q = ik`, weight `aq + jk = 0`) are removed. `P₁ = V(v)` and
/// `P₂ = V(u)`.
pub fn vargit_locus(a: u64, i: u64, j: i64) -> Result<VarGitCase> {
    if a == 0 || i == 0 {
        return Err(Error::Invalid("a and i must be positive".into()));
    }
    let (a, i, j) = (a as i128, i as i128, j as i128);
    let (mut all_p, mut all_q, mut any) = (true, true, false);
    // k = a already clears the denominator of q = −jk/a
    for k in 1..=a {
        if (-j * k) % a != 0 {
            continue;
        }
        let q = -j * k / a;
        if q < 0 || q > i * k {
            continue;
        }
        let p = i * k - q;
        any = true;
        all_p &= p > 0;
        all_q &= q > 0;
    }
    Ok(match (any, all_p, all_q) {
        (false, _, _) => VarGitCase::Empty,
        (true, true, true) => VarGitCase::MinusBoth,
        (true, true, false) => VarGitCase::MinusP2,
        (true, false, true) => VarGitCase::MinusP1,
        (true, false, false) => VarGitCase::Empty,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DiagonalizableGroup;
    use crate::linalg::vector;
    use crate::saturation::reichstein_fan;

    #[test]
    fn charts_of_the_examples() {
        let x = ToricStack::affine(DiagonalizableGroup::gm(&[1, -1]));
        let c = invariant_chart(&x, &Cone::orthant(2)).unwrap();
        assert_eq!(c.monomials(), vec!["x1*x2"]);
        let mu2 = ToricStack::affine(DiagonalizableGroup::new(0, &[2.into()], &[vector(&[1]), vector(&[1])]).unwrap());
        let c = invariant_chart(&mu2, &Cone::orthant(2)).unwrap();
        assert_eq!(c.monomials(), vec!["x2^2", "x1*x2", "x1^2"]);
        let c = invariant_chart(&x, &Cone::zero(2)).unwrap();
        assert!(c.generators.is_empty());
        assert_eq!(c.units, vec![vector(&[1, 1])]);
    }

    #[test]
    fn mu2_blowup_needs_degree_two() {
        let g = DiagonalizableGroup::new(0, &[2.into()], &[vector(&[1]), vector(&[1])]).unwrap();
        let x = ToricStack::affine(g);
        let step = reichstein_fan(&x, &[Cone::orthant(2)]).unwrap();
        let check = gms_blowup_check(&step, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(check.degree, Some(2));
        assert_eq!(check.verdict, Verdict::Verified);
        let u = vector(&[1, 1]);
        let union = x.as_union();
        for i in 1..=6usize {
            let gens = invariant_ideal_generators(&union, &Cone::zero(2), &Cone::orthant(2), &u, i).unwrap();
            let want = 2 * i.div_ceil(2);
            assert!(gens.iter().all(|m| m.iter().sum::<BigInt>() == BigInt::from(want)));
            assert_eq!(gens.len(), want + 1);
        }
    }

    #[test]
    fn opposite_weights_quotient_is_unchanged() {
        let x = ToricStack::affine(DiagonalizableGroup::gm(&[1, -1]));
        let step = reichstein_fan(&x, &[Cone::orthant(2)]).unwrap();
        let u = vector(&[1, 1]);
        let gens = invariant_ideal_generators(&x.as_union(), &Cone::zero(2), &Cone::orthant(2), &u, 1).unwrap();
        assert_eq!(gens, vec![vector(&[1, 1])]);
        let check = gms_blowup_check(&step, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(check.verdict, Verdict::Verified);
        assert_eq!(check.charts[0].ideal_generators, vec![vector(&[1, 1])]);
        let out = gms_charts(&step.output).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].generators, vec![vector(&[1, 1])]);
    }

    #[test]
    fn trivial_action_gives_the_ordinary_blowup() {
        let x = ToricStack::affine(DiagonalizableGroup::new(0, &[], &[vec![], vec![]]).unwrap());
        let step = reichstein_fan(&x, &[Cone::orthant(2)]).unwrap();
        let check = gms_blowup_check(&step, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(check.degree, Some(1));
        assert_eq!(check.verdict, Verdict::Verified);
        assert_eq!(check.charts[0].output_cones.len(), 2);
    }

    #[test]
    fn weight_one_line_blows_up_to_nothing() {
        let x = ToricStack::affine(DiagonalizableGroup::gm(&[1]));
        let step = reichstein_fan(&x, &[Cone::orthant(1)]).unwrap();
        let check = gms_blowup_check(&step, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(check.verdict, Verdict::Verified);
        assert!(check.charts[0].ideal_generators.is_empty());
    }

    #[test]
    fn invariant_charts_match_box_enumeration() {
        for w in [[1, -1, 0], [1, 1, -1], [2, -3, 1], [1, -2, 2]] {
            let x = ToricStack::affine(DiagonalizableGroup::gm(&w));
            for sigma in x.fan().cones() {
                let chart = invariant_chart(&x, sigma).unwrap();
                if !chart.units.is_empty() {
                    continue;
                }
                let mut found = Vec::new();
                for a in -4..=4i64 {
                    for b in -4..=4i64 {
                        for c in -4..=4i64 {
                            let m = vector(&[a, b, c]);
                            if m.iter().all(Zero::is_zero) || !x.group().is_invariant(&m) {
                                continue;
                            }
                            if sigma.rays().iter().all(|v| dot(&m, v) >= BigInt::zero()) {
                                found.push(m);
                            }
                        }
                    }
                }
                let irreducible: BTreeSet<Vector> = found
                    .iter()
                    .filter(|m| {
                        !found.iter().any(|h| {
                            h != *m && {
                                let diff: Vector = m.iter().zip(h).map(|(p, q)| p - q).collect();
                                found.contains(&diff)
                            }
                        })
                    })
                    .cloned()
                    .collect();
                let got: BTreeSet<Vector> = chart.generators.iter().cloned().collect();
                assert_eq!(got, irreducible, "weights {w:?}, cone {sigma}");
            }
        }
    }

    fn closed_form(a: i64, i: i64, j: i64) -> VarGitCase {
        if j == 0 {
            VarGitCase::MinusP2
        } else if j == -a * i {
            VarGitCase::MinusP1
        } else if -a * i < j && j < 0 {
            VarGitCase::MinusBoth
        } else {
            VarGitCase::Empty
        }
    }

    #[test]
    fn vargit_examples_and_grid() {
        assert_eq!(vargit_locus(1, 1, 0).unwrap(), VarGitCase::MinusP2);
        assert_eq!(vargit_locus(1, 1, -1).unwrap(), VarGitCase::MinusP1);
        assert_eq!(vargit_locus(2, 2, -1).unwrap(), VarGitCase::MinusBoth);
        for a in 1..=3 {
            for i in 1..=3 {
                for j in -6..=6 {
                    assert_eq!(vargit_locus(a as u64, i as u64, j).unwrap(), closed_form(a, i, j), "{a} {i} {j}");
                }
            }
        }
        assert!(vargit_locus(0, 1, 0).is_err());
    }
}
