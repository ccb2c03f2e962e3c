//! One-dimensional torus actions on affine varieties cut out by weighted
//! homogeneous polynomials: fixed loci, tangent cones, saturations of the
//! origin, and the exceptional divisors of Reichstein transforms and
//! saturated blowups at the origin.
//!
//! Loci in `ℙ(V)` are unions of coordinate subspaces with coordinate
//! subspaces removed. Tangent cones are computed from initial forms; when
//! the initial forms are monomials their zero set is read off from minimal
//! hitting sets of the supports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{clear_denominators, dot, IntMatrix, Vector};
use crate::lp::LinearSystem;
use crate::poly::Poly;

/// Default degree bound for [`saturated_blowup_exceptional`].
pub const DEFAULT_DEGREE_BOUND: u32 = 16;

pub type Coords = BTreeSet<usize>;

/// The common weight of the monomials of `f`.
pub fn weight_of(f: &Poly, weights: &[i64]) -> Result<i64> {
    if f.nvars() != weights.len() {
        return Err(Error::DimensionMismatch { expected: weights.len(), found: f.nvars() });
    }
    let mut seen = BTreeSet::new();
    for e in f.terms().keys() {
        seen.insert(e.iter().zip(weights).map(|(p, w)| *p as i64 * w).sum::<i64>());
    }
    match seen.len() {
        0 => Err(Error::Invalid("the zero polynomial has no weight".into())),
        1 => Ok(*seen.iter().next().expect("one weight")),
        _ => Err(Error::Inhomogeneous(format!("{f} has weights {seen:?}"))),
    }
}

/// `X = V(f_1, …, f_k) ⊆ Aⁿ` with `G_m` acting by the given weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graded1TAction {
    weights: Vec<i64>,
    generators: Vec<Poly>,
}

impl Graded1TAction {
    pub fn new(weights: Vec<i64>, generators: Vec<Poly>) -> Result<Self> {
        for f in &generators {
            weight_of(f, &weights)?;
        }
        Ok(Graded1TAction { weights, generators })
    }

    /// Parses generators in the `x1..xn` grammar.
    pub fn parse(weights: Vec<i64>, generators: &[&str]) -> Result<Self> {
        let n = weights.len();
        let gens = generators.iter().map(|g| Poly::parse(g, n)).collect::<Result<Vec<_>>>()?;
        Self::new(weights, gens)
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }
}

/// Generators of `I + (x_j : j ∈ vars)`, with the `f_i` reduced modulo the `x_j`.
fn add_coordinates(ideal: &[Poly], vars: &Coords, n: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = vars.iter().map(|&j| Poly::var(n, j)).collect();
    for f in ideal {
        let r = f.vanish(vars);
        if !r.is_zero() && !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Ideal of `X^G = X ∩ V(x_j : w_j ≠ 0)`.
pub fn fixed_ideal(x: &Graded1TAction) -> Vec<Poly> {
    let moving: Coords = x.weights.iter().enumerate().filter(|(_, w)| **w != 0).map(|(j, _)| j).collect();
    add_coordinates(&x.generators, &moving, x.nvars())
}

/// `(⋃ V(S_i)) ∖ (⋃ V(T_j))` in `ℙ^{n-1}` or `Aⁿ`, piece by piece: each
/// piece is one `V(S)` with its own removed subspaces.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocusPiece {
    pub vanishing: Coords,
    pub removed: Vec<Coords>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateLocus {
    pub nvars: usize,
    pub projective: bool,
    pub pieces: Vec<LocusPiece>,
}

fn irredundant(mut sets: Vec<Coords>) -> Vec<Coords> {
    sets.sort();
    sets.dedup();
    let all = sets.clone();
    sets.retain(|s| !all.iter().any(|t| t != s && t.is_subset(s)));
    sets
}

impl CoordinateLocus {
    /// `⋃ V(S) ∖ ⋃ V(T)`, canonicalized.
    pub fn new(nvars: usize, projective: bool, vanishing: Vec<Coords>, removed: Vec<Coords>) -> Self {
        let everything: Coords = (0..nvars).collect();
        let mut pieces = Vec::new();
        for s in irredundant(vanishing) {
            if projective && s == everything {
                continue;
            }
            // inside V(S), V(T) is V(T ∖ S)
            let rel: Vec<Coords> = removed.iter().map(|t| t.difference(&s).cloned().collect()).collect();
            if rel.iter().any(|t| t.is_empty()) {
                continue;
            }
            pieces.push(LocusPiece { vanishing: s, removed: irredundant(rel) });
        }
        pieces.sort();
        CoordinateLocus { nvars, projective, pieces }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// True iff the point whose nonzero coordinates are `support` lies in the locus.
    pub fn contains_support(&self, support: &Coords) -> bool {
        self.pieces.iter().any(|p| p.vanishing.is_disjoint(support) && p.removed.iter().all(|t| !t.is_disjoint(support)))
    }

    /// Torus orbits in the locus, by their sets of nonzero coordinates.
    pub fn orbit_supports(&self) -> BTreeSet<Coords> {
        let n = self.nvars;
        (0u64..1 << n)
            .map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect::<Coords>())
            .filter(|s| !(self.projective && s.is_empty()))
            .filter(|s| self.contains_support(s))
            .collect()
    }
}

fn show_v(s: &Coords) -> String {
    if s.is_empty() {
        return "V()".into();
    }
    format!("V({})", s.iter().map(|j| format!("x{}", j + 1)).collect::<Vec<_>>().join(","))
}

impl fmt::Display for CoordinateLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| match p.removed.len() {
                0 => show_v(&p.vanishing),
                1 => format!("{} ∖ {}", show_v(&p.vanishing), show_v(&p.removed[0])),
                _ => format!("{} ∖ ({})", show_v(&p.vanishing), p.removed.iter().map(show_v).collect::<Vec<_>>().join(" ∪ ")),
            })
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// Irreducible components of `V(m_1, …, m_k)` for monomials `m_i`, as the
/// minimal sets of variables meeting every support.
pub fn monomial_components(n: usize, supports: &[Coords]) -> Vec<Coords> {
    let hitting: Vec<Coords> = (0u64..1 << n)
        .map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect::<Coords>())
        .filter(|h| supports.iter().all(|s| !s.is_disjoint(h)))
        .collect();
    irredundant(hitting)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentComponent {
    pub vanishing: Coords,
    /// Codimension equals the number of generators, so the initial forms
    /// describe the tangent cone along this component.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentCone {
    pub initial_forms: Vec<Poly>,
    /// Components of `V(initial forms)` when the initial forms are monomials.
    pub components: Vec<TangentComponent>,
}

impl TangentCone {
    pub fn has_excess(&self) -> bool {
        self.components.iter().any(|c| !c.certified)
    }

    pub fn projectivized(&self, n: usize) -> CoordinateLocus {
        CoordinateLocus::new(n, true, self.components.iter().map(|c| c.vanishing.clone()).collect(), Vec::new())
    }
}

const MAX_COORDS: usize = 16;

/// Initial forms of the generators and the components they cut out.
pub fn tangent_cone(x: &Graded1TAction) -> Result<TangentCone> {
    tangent_cone_of(&x.generators, x.nvars())
}

fn tangent_cone_of(gens: &[Poly], n: usize) -> Result<TangentCone> {
    if n > MAX_COORDS {
        return Err(Error::Unsupported(format!("{n} coordinates exceed the limit {MAX_COORDS}")));
    }
    let initial: Vec<Poly> = gens.iter().filter(|f| !f.is_zero()).map(Poly::initial_form).collect();
    if initial.iter().any(|f| f.order() == Some(0)) {
        return Err(Error::Invalid("the variety does not pass through the origin".into()));
    }
    if initial.iter().any(|f| !f.is_monomial()) {
        return Err(Error::CodimensionGuard("initial forms are not monomials; the tangent cone needs a standard basis computation".into()));
    }
    let supports: Vec<Coords> = initial.iter().map(|f| Poly::support(f.terms().keys().next().expect("monomial"))).collect();
    let components = monomial_components(n, &supports)
        .into_iter()
        .map(|s| TangentComponent { certified: s.len() == initial.len(), vanishing: s })
        .collect();
    Ok(TangentCone { initial_forms: initial, components })
}

/// A component of `ℙ(V)^G`: `ℙ` of the span of `coordinates`, all of one weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedComponent {
    pub weight: i64,
    pub coordinates: Coords,
}

/// Maximal linear pieces of `ℙ(V)^G ∩ V(C)` for a monomial ideal `C`
/// (given by generators).
pub fn projectivized_fixed_points(cone: &[Poly], weights: &[i64]) -> Result<Vec<FixedComponent>> {
    let n = weights.len();
    if cone.iter().any(|f| f.nvars() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: cone[0].nvars() });
    }
    let mut classes: BTreeMap<i64, Coords> = BTreeMap::new();
    for (j, w) in weights.iter().enumerate() {
        classes.entry(*w).or_default().insert(j);
    }
    let mut out = Vec::new();
    for (w, coords) in classes {
        let others: Coords = (0..n).filter(|j| !coords.contains(j)).collect();
        let restricted: Vec<Poly> = cone.iter().map(|f| f.vanish(&others)).filter(|f| !f.is_zero()).collect();
        let mut supports = Vec::new();
        for f in &restricted {
            if !f.is_monomial() {
                return Err(Error::Unsupported(format!("{f} is not a monomial on a fixed component")));
            }
            supports.push(Poly::support(f.terms().keys().next().expect("monomial")));
        }
        for hit in monomial_components(n, &supports) {
            let left: Coords = coords.difference(&hit).cloned().collect();
            if !left.is_empty() {
                out.push(FixedComponent { weight: w, coordinates: left });
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The points flowing to the origin as `t → 0` and as `t → ∞`.
pub fn saturation_origin(x: &Graded1TAction) -> (Vec<Poly>, Vec<Poly>) {
    let n = x.nvars();
    let nonpos: Coords = (0..n).filter(|&j| x.weights[j] <= 0).collect();
    let nonneg: Coords = (0..n).filter(|&j| x.weights[j] >= 0).collect();
    (add_coordinates(&x.generators, &nonpos, n), add_coordinates(&x.generators, &nonneg, n))
}

/// Reduced intersection of the strict transform of `V(Z)` with the
/// exceptional `ℙ(V)` of the blowup at the origin.
pub fn strict_transform_exceptional(z: &[Poly], n: usize) -> Result<CoordinateLocus> {
    let cone = tangent_cone_of(z, n)?;
    if cone.has_excess() {
        return Err(Error::CodimensionGuard(format!(
            "initial forms of {} do not form a regular sequence",
            z.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(cone.projectivized(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReichsteinFixedPoints {
    pub tangent_cone: TangentCone,
    /// Fixed points of the exceptional divisor of the blowup.
    pub exceptional_fixed: Vec<FixedComponent>,
    /// Exceptional loci of the strict transforms of the saturation components.
    pub removed: Vec<CoordinateLocus>,
    /// Fixed points of the Reichstein transform.
    pub fixed: Vec<FixedComponent>,
    /// `ℙ(W) = V(x_j : j ∉ W)` with weights of one sign, lying in the
    /// transform together with both of its extreme fixed points, so the
    /// transform has no good quotient.
    pub no_good_quotient: Option<CoordinateLocus>,
}

/// Fixed points of `R_G(X, X^G)` for `X^G` the origin.
pub fn reichstein_fixed_points(x: &Graded1TAction) -> Result<ReichsteinFixedPoints> {
    let n = x.nvars();
    if x.weights.contains(&0) {
        return Err(Error::Unsupported("zero weights give a non-isolated fixed locus".into()));
    }
    let tc = tangent_cone(x)?;
    let exceptional_fixed = projectivized_fixed_points(&tc.initial_forms, &x.weights)?;
    let (plus, minus) = saturation_origin(x);
    let removed = vec![strict_transform_exceptional(&plus, n)?, strict_transform_exceptional(&minus, n)?];
    let covered = |c: &FixedComponent| removed.iter().any(|l| l.contains_support(&c.coordinates));
    let fixed: Vec<FixedComponent> = exceptional_fixed.iter().filter(|c| !covered(c)).cloned().collect();

    let pcone = tc.projectivized(n);
    let mut witness = None;
    for positive in [true, false] {
        let side: Vec<&FixedComponent> = fixed.iter().filter(|c| (c.weight > 0) == positive).collect();
        if side.len() < 2 {
            continue;
        }
        let span: Coords = side.iter().flat_map(|c| c.coordinates.iter().cloned()).collect();
        // the whole ℙ(W) sits in the exceptional divisor and its generic
        // point avoids the removed strict transforms
        let inside = pcone.pieces.iter().any(|p| p.vanishing.is_disjoint(&span));
        if inside && !covered(&FixedComponent { weight: 0, coordinates: span.clone() }) {
            let rest: Coords = (0..n).filter(|j| !span.contains(j)).collect();
            witness = Some(CoordinateLocus::new(n, true, vec![rest], Vec::new()));
            break;
        }
    }
    Ok(ReichsteinFixedPoints { tangent_cone: tc, exceptional_fixed, removed, fixed, no_good_quotient: witness })
}

/// Weight-zero monomials of degree `1..=bound`, as (degree, support).
fn invariant_supports(weights: &[i64], bound: u32) -> Vec<(u32, Coords)> {
    let n = weights.len();
    let mut out = Vec::new();
    let mut e = vec![0u32; n];
    fn go(i: usize, left: u32, e: &mut Vec<u32>, w: &[i64], out: &mut Vec<(u32, Coords)>, bound: u32) {
        if i == e.len() {
            let deg = bound - left;
            let weight: i64 = e.iter().zip(w).map(|(p, q)| *p as i64 * q).sum();
            if deg > 0 && weight == 0 {
                out.push((deg, Poly::support(e)));
            }
            return;
        }
        for p in 0..=left {
            e[i] = p;
            go(i + 1, left - p, e, w, out, bound);
        }
        e[i] = 0;
    }
    go(0, bound, &mut e, weights, &mut out, bound);
    out
}

/// Exceptional divisor of the saturated blowup of `X` at the origin: the
/// projectivized tangent cone minus the common zeros of the invariant
/// monomials of each degree. The zero set must be the same at two
/// consecutive degrees beyond `2·max|w|`.
pub fn saturated_blowup_exceptional(x: &Graded1TAction, degree_bound: u32) -> Result<CoordinateLocus> {
    let n = x.nvars();
    if x.weights.contains(&0) {
        return Err(Error::Unsupported("zero weights give a non-isolated fixed locus".into()));
    }
    let tc = tangent_cone(x)?;
    let start = 2 * x.weights.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0) as u32;
    if start + 1 > degree_bound {
        return Err(Error::Inconclusive(format!("degree bound {degree_bound} is below {} needed to confirm stabilization", start + 1)));
    }
    let invariants = invariant_supports(&x.weights, degree_bound);
    let null_cone = |deg: u32| -> Vec<Coords> {
        let supports: Vec<Coords> = invariants.iter().filter(|(d, _)| *d <= deg).map(|(_, s)| s.clone()).collect();
        monomial_components(n, &supports)
    };
    let mut previous = null_cone(start);
    let mut confirmed = false;
    for deg in start + 1..=degree_bound {
        let next = null_cone(deg);
        if next == previous {
            confirmed = true;
            break;
        }
        previous = next;
    }
    if !confirmed {
        return Err(Error::Inconclusive(format!("invariant zero locus still changing at degree {degree_bound}")));
    }
    let vanishing = tc.components.iter().map(|c| c.vanishing.clone()).collect();
    Ok(CoordinateLocus::new(n, true, vanishing, previous))
}

/// For a nonzero character `χ`: a cocharacter `λ` with `⟨λ, χ⟩ > 0` and
/// the coordinates on which `λ` is positive or negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointCertificate {
    pub character: Vector,
    pub cocharacter: Vector,
    pub positive: Coords,
    pub negative: Coords,
}

/// One certificate per distinct nonzero weight column of `weights` (`r × n`).
pub fn repfixed_certificate(weights: &IntMatrix) -> Vec<FixedPointCertificate> {
    let r = weights.rows();
    let columns = weights.column_vectors();
    let distinct: BTreeSet<Vector> = columns.iter().filter(|c| !c.iter().all(Zero::is_zero)).cloned().collect();
    distinct
        .into_iter()
        .map(|chi| {
            let mut sys = LinearSystem::new(r);
            sys.ge_int(&chi, 1);
            let lambda = clear_denominators(&sys.solve().expect("a nonzero character is positive somewhere"));
            let pairing: Vec<_> = columns.iter().map(|c| dot(c, &lambda)).collect();
            FixedPointCertificate {
                positive: (0..columns.len()).filter(|&j| pairing[j] > Zero::zero()).collect(),
                negative: (0..columns.len()).filter(|&j| pairing[j] < Zero::zero()).collect(),
                character: chi,
                cocharacter: lambda,
            }
        })
        .collect()
}

/// Fixed components `ℙ(V_χ)` of the exceptional divisor of `R(V, V^G)` for a
/// torus representation, found by removing every `ℙ(V_λ^+)`. Each maximal
/// coordinate set on which some `λ` is positive is found by a feasibility
/// test, independently of the certificates.
pub fn torus_reichstein_fixed_points(weights: &IntMatrix) -> Vec<Vector> {
    let r = weights.rows();
    let columns = weights.column_vectors();
    let moving: Vec<usize> = (0..columns.len()).filter(|&j| !columns[j].iter().all(Zero::is_zero)).collect();
    let m = moving.len();
    let positive_somewhere = |set: &[usize]| -> bool {
        let mut sys = LinearSystem::new(r);
        for &j in set {
            sys.ge(columns[j].iter().map(|x| BigRational::from_integer(x.clone())).collect(), BigRational::from_integer(1.into()));
        }
        sys.is_feasible()
    };
    let unstable: Vec<Coords> = irredundant_max(
        (1u64..1 << m)
            .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).map(|i| moving[i]).collect::<Vec<_>>())
            .filter(|s| positive_somewhere(s))
            .map(|s| s.into_iter().collect())
            .collect(),
    );
    let mut classes: BTreeMap<Vector, Coords> = BTreeMap::new();
    for &j in &moving {
        classes.entry(columns[j].clone()).or_default().insert(j);
    }
    classes.into_iter().filter(|(_, coords)| !unstable.iter().any(|s| coords.is_subset(s))).map(|(chi, _)| chi).collect()
}

fn irredundant_max(mut sets: Vec<Coords>) -> Vec<Coords> {
    sets.sort();
    sets.dedup();
    let all = sets.clone();
    sets.retain(|s| !all.iter().any(|t| t != s && s.is_subset(t)));
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::Cone;
    use crate::group::DiagonalizableGroup;
    use crate::saturation::reichstein_fan;
    use crate::stack::ToricStack;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> Coords {
        v.iter().cloned().collect()
    }

    fn ex_false() -> Graded1TAction {
        Graded1TAction::parse(vec![-1, 1, 3], &["x1*x3^2 + x2^5"]).unwrap()
    }

    fn ex_false2() -> Graded1TAction {
        Graded1TAction::parse(vec![-1, 1, 3, 2, 7], &["x1*x3^2 + x2^5", "x1*x5 + x4^3"]).unwrap()
    }

    #[test]
    fn weights() {
        let x = ex_false2();
        assert_eq!(weight_of(&x.generators()[0], x.weights()).unwrap(), 5);
        assert_eq!(weight_of(&x.generators()[1], x.weights()).unwrap(), 6);
        assert_eq!(weight_of(&Poly::one(2), &[1, 2]).unwrap(), 0);
        assert!(matches!(Graded1TAction::parse(vec![1, 2], &["x1 + x2"]), Err(Error::Inhomogeneous(_))));
        assert!(weight_of(&Poly::zero(1), &[1]).is_err());
    }

    #[test]
    fn fixed_ideals() {
        let f = fixed_ideal(&ex_false());
        assert_eq!(f, vec![Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2)]);
        let trivial = Graded1TAction::parse(vec![0, 0], &["x1^2 - x2^3"]).unwrap();
        assert_eq!(fixed_ideal(&trivial), trivial.generators().to_vec());
        let axis = Graded1TAction::parse(vec![1, 0], &[]).unwrap();
        assert_eq!(fixed_ideal(&axis), vec![Poly::var(2, 0)]);
    }

    #[test]
    fn tangent_cones() {
        let tc = tangent_cone(&ex_false()).unwrap();
        assert_eq!(tc.initial_forms, vec![Poly::parse("x1*x3^2", 3).unwrap()]);
        let tc = tangent_cone(&ex_false2()).unwrap();
        assert_eq!(tc.initial_forms, vec![Poly::parse("x1*x3^2", 5).unwrap(), Poly::parse("x1*x5", 5).unwrap()]);
        // V(x1) has excess dimension, V(x3, x5) the expected one
        assert_eq!(
            tc.components,
            vec![
                TangentComponent { vanishing: set(&[0]), certified: false },
                TangentComponent { vanishing: set(&[2, 4]), certified: true },
            ]
        );
        let cone = Graded1TAction::parse(vec![1, 1], &["x1^2 - x2^2"]).unwrap();
        assert!(matches!(tangent_cone(&cone), Err(Error::CodimensionGuard(_))));
    }

    #[test]
    fn fixed_points_on_tangent_cones() {
        let x = ex_false();
        let tc = tangent_cone(&x).unwrap();
        let pts = projectivized_fixed_points(&tc.initial_forms, x.weights()).unwrap();
        assert_eq!(pts.len(), 3);
        let x2 = ex_false2();
        let tc = tangent_cone(&x2).unwrap();
        assert_eq!(projectivized_fixed_points(&tc.initial_forms, x2.weights()).unwrap().len(), 5);
        let pts = projectivized_fixed_points(&[Poly::var(2, 0)], &[1, 2]).unwrap();
        assert_eq!(pts, vec![FixedComponent { weight: 2, coordinates: set(&[1]) }]);
    }

    #[test]
    fn saturations_of_the_origin() {
        let (plus, minus) = saturation_origin(&ex_false());
        assert_eq!(plus, vec![Poly::var(3, 0), Poly::parse("x2^5", 3).unwrap()]);
        assert_eq!(minus, vec![Poly::var(3, 1), Poly::var(3, 2)]);
        let (plus, minus) = saturation_origin(&ex_false2());
        assert_eq!(plus, vec![Poly::var(5, 0), Poly::parse("x2^5", 5).unwrap(), Poly::parse("x4^3", 5).unwrap()]);
        assert_eq!(minus.len(), 4);
        // limits of (a, b) under t and t⁻¹
        let line = Graded1TAction::parse(vec![1, -1], &[]).unwrap();
        assert_eq!(saturation_origin(&line), (vec![Poly::var(2, 1)], vec![Poly::var(2, 0)]));
    }

    #[test]
    fn strict_transforms() {
        let (plus, minus) = saturation_origin(&ex_false());
        let p0 = strict_transform_exceptional(&plus, 3).unwrap();
        assert_eq!(p0.to_string(), "V(x1,x2)");
        assert_eq!(strict_transform_exceptional(&minus, 3).unwrap().to_string(), "V(x2,x3)");
        let line = [Poly::var(3, 1), Poly::var(3, 2)];
        assert_eq!(strict_transform_exceptional(&line, 3).unwrap().orbit_supports(), [set(&[0])].into());
    }

    #[test]
    fn reichstein_fixed_points_of_the_examples() {
        let r = reichstein_fixed_points(&ex_false()).unwrap();
        assert_eq!(r.fixed, vec![FixedComponent { weight: 1, coordinates: set(&[1]) }]);
        assert!(r.no_good_quotient.is_none());

        let r = reichstein_fixed_points(&ex_false2()).unwrap();
        let coords: Vec<Coords> = r.fixed.iter().map(|c| c.coordinates.clone()).collect();
        assert_eq!(coords, vec![set(&[1]), set(&[3])]);
        assert_eq!(r.no_good_quotient.unwrap().to_string(), "V(x1,x3,x5)");

        let smooth = Graded1TAction::parse(vec![1, -2, 3], &[]).unwrap();
        assert!(reichstein_fixed_points(&smooth).unwrap().fixed.is_empty());
    }

    #[test]
    fn saturated_blowup_exceptional_loci() {
        let e = saturated_blowup_exceptional(&ex_false(), DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(e.to_string(), "V(x3) ∖ (V(x1) ∪ V(x2))");
        let e2 = saturated_blowup_exceptional(&ex_false2(), DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(e2.to_string(), "V(x3,x5) ∖ (V(x1) ∪ V(x2,x4))");
        for (x, loc) in [(ex_false(), e), (ex_false2(), e2)] {
            let fixed = projectivized_fixed_points(&tangent_cone(&x).unwrap().initial_forms, x.weights()).unwrap();
            assert!(fixed.iter().all(|c| !loc.contains_support(&c.coordinates)));
        }
        let line = Graded1TAction::parse(vec![1, -1], &[]).unwrap();
        let e = saturated_blowup_exceptional(&line, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(e.to_string(), "V() ∖ (V(x1) ∪ V(x2))");
        assert!(matches!(saturated_blowup_exceptional(&ex_false2(), 12), Err(Error::Inconclusive(_))));
    }

    #[test]
    fn certificates() {
        let w = IntMatrix::from_i64(&[&[1, -1]]);
        let c = repfixed_certificate(&w);
        assert_eq!(c.len(), 2);
        for cert in &c {
            assert_eq!(cert.cocharacter, cert.character);
        }
        assert_eq!(c[1].positive, set(&[0]));
        let t = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let c = repfixed_certificate(&t);
        let unit = c.iter().find(|x| x.character == crate::linalg::vector(&[1, 0])).unwrap();
        assert_eq!(unit.cocharacter, crate::linalg::vector(&[1, 0]));
    }

    fn orbits_over_the_center(weights: &[i64]) -> BTreeSet<Coords> {
        let n = weights.len();
        let x = ToricStack::affine(DiagonalizableGroup::gm(weights));
        let step = reichstein_fan(&x, &[Cone::orthant(n)]).unwrap();
        let u = Cone::orthant(n).barycenter();
        step.output
            .cones()
            .into_iter()
            .filter(|c| c.has_ray(&u))
            .map(|c| {
                let zero: Coords = (0..n).filter(|&j| c.has_ray(&crate::cones::unit(n, j))).collect();
                (0..n).filter(|j| !zero.contains(j)).collect()
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn smooth_saturated_blowup_matches_the_fan(w in proptest::collection::vec(prop_oneof![-3i64..0, 1i64..4], 2..5)) {
            let x = Graded1TAction::new(w.clone(), vec![]).unwrap();
            let e = saturated_blowup_exceptional(&x, DEFAULT_DEGREE_BOUND).unwrap();
            prop_assert_eq!(e.orbit_supports(), orbits_over_the_center(&w));
            let r = reichstein_fixed_points(&x).unwrap();
            prop_assert!(r.fixed.is_empty());
        }

        #[test]
        fn weight_is_additive(a in proptest::collection::vec(0u32..3, 3), b in proptest::collection::vec(0u32..3, 3), w in proptest::collection::vec(-3i64..4, 3)) {
            let f = Poly::monomial(a, BigRational::from_integer(1.into()));
            let g = Poly::monomial(b, BigRational::from_integer(2.into()));
            prop_assert_eq!(weight_of(&(&f * &g), &w).unwrap(), weight_of(&f, &w).unwrap() + weight_of(&g, &w).unwrap());
        }
    }
}
