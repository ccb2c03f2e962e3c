//! Smooth rational cones, fans and star subdivisions.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{primitive, smith_normal_form, to_rational, IntMatrix, QVector, RationalSubspace, Vector};
use crate::lp::LinearSystem;

/// A cone generated by primitive integer vectors, stored sorted so that
/// equal cones compare equal. Cones order by dimension, then
/// lexicographically by generators.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    dim: usize,
    rays: Vec<Vector>,
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, self.rays.len(), &self.rays).cmp(&(other.dim, other.rays.len(), &other.rays))
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self
            .rays
            .iter()
            .map(|r| {
                let e: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("({})", e.join(","))
            })
            .collect();
        write!(f, "cone[{}]", rays.join(","))
    }
}

impl Cone {
    /// Builds the cone spanned by `generators`, replacing each by the
    /// primitive vector on its ray and dropping duplicates.
    pub fn new(dim: usize, generators: &[Vector]) -> Result<Cone> {
        let mut rays = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
            }
            if g.iter().all(|x| x.is_zero()) {
                return Err(Error::Invalid("zero vector as cone generator".into()));
            }
            rays.push(primitive(g));
        }
        rays.sort();
        rays.dedup();
        Ok(Cone { dim, rays })
    }

    pub fn zero(dim: usize) -> Cone {
        Cone { dim, rays: Vec::new() }
    }

    pub fn ray(v: &[BigInt]) -> Result<Cone> {
        Cone::new(v.len(), &[v.to_vec()])
    }

    /// The cone spanned by the standard basis vectors with the given indices.
    pub fn coordinate(dim: usize, indices: &[usize]) -> Cone {
        let gens: Vec<Vector> = indices.iter().map(|&i| unit(dim, i)).collect();
        Cone::new(dim, &gens).expect("unit vectors are valid generators")
    }

    pub fn orthant(dim: usize) -> Cone {
        Cone::coordinate(dim, &(0..dim).collect::<Vec<_>>())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    /// Number of generators; equals the dimension for simplicial cones.
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn has_ray(&self, ray: &[BigInt]) -> bool {
        self.rays.binary_search_by(|r| r.as_slice().cmp(ray)).is_ok()
    }

    /// Generator-subset containment, which is the face relation for
    /// simplicial cones.
    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.has_ray(r))
    }

    pub fn join(&self, other: &Cone) -> Cone {
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        rays.sort();
        rays.dedup();
        Cone { dim: self.dim, rays }
    }

    pub fn with_ray(&self, ray: &[BigInt]) -> Cone {
        let mut rays = self.rays.clone();
        rays.push(primitive(ray));
        rays.sort();
        rays.dedup();
        Cone { dim: self.dim, rays }
    }

    pub fn without_rays(&self, removed: &Cone) -> Cone {
        Cone { dim: self.dim, rays: self.rays.iter().filter(|r| !removed.has_ray(r)).cloned().collect() }
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        Cone { dim: self.dim, rays: self.rays.iter().filter(|r| other.has_ray(r)).cloned().collect() }
    }

    pub fn barycenter(&self) -> Vector {
        let mut u = vec![BigInt::zero(); self.dim];
        for r in &self.rays {
            for (a, b) in u.iter_mut().zip(r) {
                *a += b;
            }
        }
        u
    }

    pub fn span(&self) -> RationalSubspace {
        RationalSubspace::span_integer(self.dim, &self.rays)
    }

    /// True iff the generators extend to a basis of ℤⁿ.
    pub fn is_smooth(&self) -> bool {
        if self.rays.is_empty() {
            return true;
        }
        if self.rays.len() > self.dim {
            return false;
        }
        let s = smith_normal_form(&IntMatrix::from_columns(self.dim, &self.rays));
        let f = s.invariant_factors();
        f.len() == self.rays.len() && f.iter().all(|x| x.is_one())
    }

    /// All faces of a smooth cone, i.e. all generator subsets.
    pub fn faces(&self) -> Result<Vec<Cone>> {
        if !self.is_smooth() {
            return Err(Error::NotSmooth(self.to_string()));
        }
        Ok(self.subsets())
    }

    pub(crate) fn subsets(&self) -> Vec<Cone> {
        let k = self.rays.len();
        (0u64..1 << k)
            .map(|mask| Cone { dim: self.dim, rays: (0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.rays[i].clone()).collect() })
            .collect()
    }

    /// Exact membership of a rational vector.
    pub fn contains(&self, v: &[BigRational]) -> Result<bool> {
        self.check_dim(v.len())?;
        let k = self.rays.len();
        let mut s = LinearSystem::new(k);
        for i in 0..self.dim {
            let row: QVector = self.rays.iter().map(|r| BigRational::from_integer(r[i].clone())).collect();
            s.eq(row, v[i].clone());
        }
        for i in 0..k {
            s.ge(unit_q(k, i), BigRational::zero());
        }
        Ok(s.is_feasible())
    }

    /// Membership in the relative interior: `v` must be a combination of the
    /// generators with every coefficient strictly positive.
    pub fn relint_contains(&self, v: &[BigRational]) -> Result<bool> {
        self.check_dim(v.len())?;
        // unknowns (a_1..a_k, s): s·v = Σ a_i g_i, a_i ≥ 1, s ≥ 1
        let k = self.rays.len();
        let mut s = LinearSystem::new(k + 1);
        for i in 0..self.dim {
            let mut row: QVector = self.rays.iter().map(|r| BigRational::from_integer(r[i].clone())).collect();
            row.push(-v[i].clone());
            s.eq(row, BigRational::zero());
        }
        for i in 0..=k {
            s.ge(unit_q(k + 1, i), BigRational::one());
        }
        Ok(s.is_feasible())
    }

    pub fn contains_int(&self, v: &[BigInt]) -> Result<bool> {
        self.contains(&to_rational(v))
    }

    pub fn relint_contains_int(&self, v: &[BigInt]) -> Result<bool> {
        self.relint_contains(&to_rational(v))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found });
        }
        Ok(())
    }
}

pub fn unit(dim: usize, i: usize) -> Vector {
    let mut v = vec![BigInt::zero(); dim];
    v[i] = BigInt::one();
    v
}

fn unit_q(dim: usize, i: usize) -> QVector {
    let mut v = vec![BigRational::zero(); dim];
    v[i] = BigRational::one();
    v
}

/// A fan: a face-closed set of cones, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fan {
    dim: usize,
    cones: BTreeSet<Cone>,
}

impl Fan {
    pub fn empty(dim: usize) -> Fan {
        Fan { dim, cones: BTreeSet::new() }
    }

    /// The fan generated by the given cones and all their faces. Cones are
    /// assumed simplicial; pairwise compatibility is checked by [`Fan::validate`].
    pub fn from_cones(dim: usize, generating: impl IntoIterator<Item = Cone>) -> Fan {
        let mut cones = BTreeSet::new();
        for c in generating {
            assert_eq!(c.dim, dim, "cone in the wrong lattice");
            for f in c.subsets() {
                cones.insert(f);
            }
        }
        Fan { dim, cones }
    }

    /// Wraps a cone set that is already face-closed.
    pub(crate) fn from_closed(dim: usize, cones: BTreeSet<Cone>) -> Fan {
        debug_assert!(cones.iter().all(|c| c.subsets().iter().all(|f| cones.contains(f))));
        Fan { dim, cones }
    }

    /// All faces of the positive orthant of ℤⁿ, i.e. the fan of Aⁿ.
    pub fn affine_space(dim: usize) -> Fan {
        Fan::from_cones(dim, [Cone::orthant(dim)])
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn cones(&self) -> &BTreeSet<Cone> {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn contains(&self, c: &Cone) -> bool {
        self.cones.contains(c)
    }

    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones.iter().filter(|c| !self.cones.iter().any(|d| d.len() > c.len() && c.is_face_of(d))).cloned().collect()
    }

    /// The rays of the fan, in canonical order.
    pub fn rays(&self) -> Vec<Vector> {
        self.cones.iter().filter(|c| c.len() == 1).map(|c| c.rays[0].clone()).collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(Cone::is_smooth)
    }

    /// The cones containing `tau`: the orbit closure `V(τ)`.
    pub fn star(&self, tau: &Cone) -> Result<BTreeSet<Cone>> {
        if !self.contains(tau) {
            return Err(Error::NotMember(tau.to_string()));
        }
        Ok(self.cones.iter().filter(|c| tau.is_face_of(c)).cloned().collect())
    }

    /// Cones containing at least one of `taus` (membership not required).
    pub fn star_of_set<'a>(&self, taus: impl IntoIterator<Item = &'a Cone> + Clone) -> BTreeSet<Cone> {
        self.cones.iter().filter(|c| taus.clone().into_iter().any(|t| t.is_face_of(c))).cloned().collect()
    }

    /// The open subfan obtained by deleting the given stars.
    pub fn remove_stars<'a>(&self, taus: impl IntoIterator<Item = &'a Cone> + Clone) -> Fan {
        let cones = self.cones.iter().filter(|c| !taus.clone().into_iter().any(|t| t.is_face_of(c))).cloned().collect();
        Fan { dim: self.dim, cones }
    }

    /// Star subdivision at the barycenter of `sigma0`.
    pub fn star_subdivision(&self, sigma0: &Cone) -> Result<Fan> {
        if !self.contains(sigma0) {
            return Err(Error::NotMember(sigma0.to_string()));
        }
        if !sigma0.is_smooth() {
            return Err(Error::NotSmooth(sigma0.to_string()));
        }
        if sigma0.is_empty() {
            return Err(Error::Invalid("cannot subdivide at the zero cone".into()));
        }
        let u = sigma0.barycenter();
        let mut cones = BTreeSet::new();
        for sigma in &self.cones {
            if !sigma0.is_face_of(sigma) {
                cones.insert(sigma.clone());
                continue;
            }
            for tau in sigma.subsets() {
                if !sigma0.is_face_of(&tau) {
                    cones.insert(tau.with_ray(&u));
                    cones.insert(tau);
                }
            }
        }
        Ok(Fan::from_closed(self.dim, cones))
    }

    /// Checks smoothness and that any two cones meet in a common face.
    pub fn validate(&self) -> Result<()> {
        for c in &self.cones {
            if !c.is_smooth() {
                return Err(Error::NotSmooth(c.to_string()));
            }
        }
        let maximal = self.maximal_cones();
        for (i, a) in maximal.iter().enumerate() {
            for b in &maximal[i + 1..] {
                if !meet_in_common_face(a, b) {
                    return Err(Error::Invalid(format!("cones {a} and {b} do not meet in a common face")));
                }
            }
        }
        Ok(())
    }
}

/// For simplicial cones: true iff `a ∩ b` is spanned by their shared rays.
pub fn meet_in_common_face(a: &Cone, b: &Cone) -> bool {
    let shared = a.intersect(b);
    let (ka, kb) = (a.len(), b.len());
    let n = ka + kb;
    for (offset, cone) in [(0, a), (ka, b)] {
        for (i, r) in cone.rays.iter().enumerate() {
            if shared.has_ray(r) {
                continue;
            }
            // Σ α_i a_i = Σ β_j b_j, α, β ≥ 0, with the current coefficient ≥ 1
            let mut s = LinearSystem::new(n);
            for d in 0..a.dim {
                let row: QVector = a
                    .rays
                    .iter()
                    .map(|g| BigRational::from_integer(g[d].clone()))
                    .chain(b.rays.iter().map(|g| BigRational::from_integer(-g[d].clone())))
                    .collect();
                s.eq(row, BigRational::zero());
            }
            for j in 0..n {
                let rhs = if j == offset + i { BigRational::one() } else { BigRational::zero() };
                s.ge(unit_q(n, j), rhs);
            }
            if s.is_feasible() {
                return false;
            }
        }
    }
    true
}
