//! Hilbert bases of affine monoids `{w ∈ L : ⟨a_i, w⟩ ≥ 0, ⟨b_j, w⟩ = 0}`.
//!
//! The cone is first cut down to its linear span and split into its
//! lineality part and a pointed complement. Every irreducible element of a
//! pointed cone lies in the fundamental parallelepiped of some simplicial
//! cone spanned by extreme rays, so those points are the candidates; the
//! irreducible ones are then found by increasing degree.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    complete_to_basis, dot, kernel_lattice, lattice_basis, lattice_contains, rational_solve, smith_normal_form, to_rational,
    unimodular_inverse, IntMatrix, Vector,
};
use crate::lp::LinearSystem;

/// Largest rank of a pointed cone the enumeration will attempt.
pub const MAX_RANK: usize = 7;
/// Cap on the number of parallelepiped points examined.
pub const MAX_CANDIDATES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    dim: usize,
    lattice: Vec<Vector>,
    inequalities: Vec<Vector>,
    equalities: Vec<Vector>,
}

/// Minimal generators: a basis of the unit group and the irreducible
/// elements of a pointed complement (unique only when there are no units).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HilbertBasis {
    pub units: Vec<Vector>,
    pub basis: Vec<Vector>,
}

impl Monoid {
    /// `lattice` is a basis of the ambient lattice inside `ℤ^dim`.
    pub fn new(dim: usize, lattice: Vec<Vector>, inequalities: Vec<Vector>, equalities: Vec<Vector>) -> Self {
        Monoid { dim, lattice, inequalities, equalities }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn lattice(&self) -> &[Vector] {
        &self.lattice
    }

    pub fn inequalities(&self) -> &[Vector] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Vector] {
        &self.equalities
    }

    /// Membership in the real cone cut out by the constraints.
    pub fn cone_contains(&self, w: &[BigInt]) -> bool {
        self.inequalities.iter().all(|a| !dot(a, w).is_negative()) && self.equalities.iter().all(|b| dot(b, w).is_zero())
    }

    pub fn contains(&self, w: &[BigInt]) -> bool {
        if !self.cone_contains(w) {
            return false;
        }
        if self.lattice.is_empty() {
            return w.iter().all(Zero::is_zero);
        }
        lattice_contains(&IntMatrix::from_columns(self.dim, &self.lattice), w)
    }

    /// Same real cone, compared through generators.
    pub fn same_cone(&self, other: &Monoid) -> Result<bool> {
        Ok(self.cone_within(other)? && other.cone_within(self)?)
    }

    /// Every generator of `self` lies in `other`.
    pub fn cone_within(&self, other: &Monoid) -> Result<bool> {
        let hb = self.hilbert_basis()?;
        let neg = |v: &Vector| v.iter().map(|x| -x).collect::<Vector>();
        Ok(hb.basis.iter().chain(&hb.units).all(|v| other.contains(v)) && hb.units.iter().all(|v| other.contains(&neg(v))))
    }

    pub fn hilbert_basis(&self) -> Result<HilbertBasis> {
        let n = self.dim;
        if self.lattice.is_empty() {
            return Ok(HilbertBasis::default());
        }
        // lattice basis of the linear span, as columns of `g`
        let mut g = IntMatrix::from_columns(n, &self.lattice);
        if !self.equalities.is_empty() {
            g = restrict(&g, &self.equalities);
        }
        let rows_of = |g: &IntMatrix| -> Vec<Vector> {
            self.inequalities.iter().map(|a| g.transpose().mul_vec(a)).filter(|r| !r.iter().all(Zero::is_zero)).collect()
        };
        let mut rows = rows_of(&g);
        let implicit: Vec<Vector> = rows
            .iter()
            .filter(|a| {
                let mut sys = LinearSystem::new(g.cols());
                for r in &rows {
                    sys.ge_int(r, 0);
                }
                sys.ge_int(a, 1);
                !sys.is_feasible()
            })
            .cloned()
            .collect();
        if !implicit.is_empty() {
            let k = kernel_lattice(&IntMatrix::from_rows(g.cols(), implicit));
            g = g.mul(&IntMatrix::from_columns(g.cols(), &k));
            rows = rows_of(&g);
        }
        let c = g.cols();
        if c == 0 {
            return Ok(HilbertBasis::default());
        }
        let lineality = if rows.is_empty() {
            (0..c).map(|j| IntMatrix::identity(c).column(j)).collect()
        } else {
            kernel_lattice(&IntMatrix::from_rows(c, rows.clone()))
        };
        let full = complete_to_basis(c, &lineality).ok_or_else(|| Error::Internal("lineality space is not saturated".into()))?;
        let units: Vec<Vector> = lineality.iter().map(|v| g.mul_vec(v)).collect();
        let units = lattice_basis(n, &units);
        let rest: Vec<usize> = (lineality.len()..c).collect();
        let lift = g.mul(&full.select_columns(&rest));
        let pointed_rows: Vec<Vector> =
            rows.iter().map(|a| full.select_columns(&rest).transpose().mul_vec(a)).filter(|r| !r.iter().all(Zero::is_zero)).collect();
        let basis = pointed_hilbert_basis(rest.len(), &pointed_rows)?;
        let mut basis: Vec<Vector> = basis.iter().map(|b| lift.mul_vec(b)).collect();
        basis.sort();
        Ok(HilbertBasis { units, basis })
    }
}

/// Columns of `g` restricted to the sublattice where `eqs` vanish.
fn restrict(g: &IntMatrix, eqs: &[Vector]) -> IntMatrix {
    let e = IntMatrix::from_rows(g.rows(), eqs.to_vec()).mul(g);
    let k = kernel_lattice(&e);
    g.mul(&IntMatrix::from_columns(g.cols(), &k))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Primitive extreme rays of the full-dimensional pointed cone `{x : A x ≥ 0}`.
pub fn extreme_rays(dim: usize, rows: &[Vector]) -> Vec<Vector> {
    let feasible = |v: &Vector| rows.iter().all(|a| !dot(a, v).is_negative());
    let mut rays = BTreeSet::new();
    for pick in subsets(rows.len(), dim - 1) {
        let candidates: Vec<Vector> = if pick.is_empty() {
            vec![vec![BigInt::from(1)]]
        } else {
            let m = IntMatrix::from_rows(dim, pick.iter().map(|&i| rows[i].clone()).collect());
            let k = kernel_lattice(&m);
            if k.len() != 1 {
                continue;
            }
            k
        };
        let v = &candidates[0];
        let neg: Vector = v.iter().map(|x| -x).collect();
        if feasible(v) {
            rays.insert(v.clone());
        } else if feasible(&neg) {
            rays.insert(neg);
        }
    }
    rays.into_iter().collect()
}

/// Points of `ℤ^e ∩ {Σ λ_i r_i : 0 ≤ λ_i < 1}` for linearly independent `r_i`.
fn parallelepiped_points(rays: &[Vector]) -> Vec<Vector> {
    let e = rays.len();
    let r = IntMatrix::from_columns(e, rays);
    let smith = smith_normal_form(&r);
    let pinv = unimodular_inverse(&smith.p).expect("Smith transforms are unimodular");
    let factors: Vec<BigInt> = (0..e).map(|i| smith.d.get(i, i).clone()).collect();
    let rows = r.to_rational_rows();
    let mut out = Vec::new();
    let mut digits = vec![BigInt::zero(); e];
    loop {
        let x = pinv.mul_vec(&digits);
        let lambda = rational_solve(&rows, &to_rational(&x), e).expect("rays are independent");
        let frac: Vec<BigRational> = lambda.iter().map(|l| l - l.floor()).collect();
        let point: Vector = (0..e)
            .map(|i| {
                let s: BigRational = (0..e).map(|j| frac[j].clone() * BigRational::from_integer(rays[j][i].clone())).sum();
                s.to_integer()
            })
            .collect();
        out.push(point);
        // odometer over ∏ ℤ/d_i
        let mut i = 0;
        loop {
            if i == e {
                return out;
            }
            digits[i] += 1;
            if digits[i] < factors[i] {
                break;
            }
            digits[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Hilbert basis of `{x ∈ ℤ^dim : A x ≥ 0}` for a pointed cone.
fn pointed_hilbert_basis(dim: usize, rows: &[Vector]) -> Result<Vec<Vector>> {
    if dim == 0 {
        return Ok(Vec::new());
    }
    if dim > MAX_RANK {
        return Err(Error::SizeLimit(format!("cone of rank {dim} exceeds the limit {MAX_RANK}")));
    }
    let rays = extreme_rays(dim, rows);
    let mut candidates: BTreeSet<Vector> = rays.iter().cloned().collect();
    let mut budget = MAX_CANDIDATES;
    for pick in subsets(rays.len(), dim) {
        let chosen: Vec<Vector> = pick.iter().map(|&i| rays[i].clone()).collect();
        let det = IntMatrix::from_columns(dim, &chosen).det().abs();
        if det.is_zero() {
            continue;
        }
        let count = det.to_usize().unwrap_or(usize::MAX);
        if count > budget {
            return Err(Error::SizeLimit(format!("more than {MAX_CANDIDATES} candidate points")));
        }
        budget -= count;
        if count == 1 {
            continue;
        }
        candidates.extend(parallelepiped_points(&chosen).into_iter().filter(|p| !p.iter().all(Zero::is_zero)));
    }
    let weight: Vec<BigInt> = (0..dim).map(|j| rows.iter().map(|a| a[j].clone()).sum()).collect();
    let mut ordered: Vec<(BigInt, Vector)> = candidates.into_iter().map(|v| (dot(&weight, &v), v)).collect();
    ordered.sort();
    let inside = |v: &Vector| rows.iter().all(|a| !dot(a, v).is_negative());
    let mut kept: Vec<Vector> = Vec::new();
    for (_, v) in ordered {
        let reducible = kept.iter().any(|h| {
            let diff: Vector = v.iter().zip(h).map(|(a, b)| a - b).collect();
            inside(&diff)
        });
        if !reducible {
            kept.push(v);
        }
    }
    Ok(kept)
}

/// Minimal generators of the lattice of relations `Σ c_i g_i = 0` among
/// monoid generators; each gives a binomial `∏ g^{c⁺} = ∏ g^{c⁻}`.
pub fn relation_lattice(dim: usize, generators: &[Vector]) -> Vec<Vector> {
    if generators.is_empty() {
        return Vec::new();
    }
    kernel_lattice(&IntMatrix::from_columns(dim, generators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;
    use proptest::prelude::*;

    fn unit_lattice(n: usize) -> Vec<Vector> {
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
    }

    /// Irreducible elements of a pointed monoid found by scanning a box.
    fn brute_force(m: &Monoid, radius: i64) -> Vec<Vector> {
        let n = m.ambient_dim();
        let mut points: Vec<Vector> = vec![vec![]];
        for _ in 0..n {
            points = points
                .into_iter()
                .flat_map(|p| {
                    (-radius..=radius).map(move |x| {
                        let mut q = p.clone();
                        q.push(BigInt::from(x));
                        q
                    })
                })
                .collect();
        }
        let members: Vec<Vector> = points.into_iter().filter(|p| !p.iter().all(Zero::is_zero) && m.contains(p)).collect();
        let mut out: Vec<Vector> = members
            .iter()
            .filter(|w| {
                !members.iter().any(|v| {
                    let diff: Vector = w.iter().zip(v).map(|(a, b)| a - b).collect();
                    v != *w && m.contains(&diff)
                })
            })
            .cloned()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn opposite_weights_give_xy() {
        let m = Monoid::new(2, vec![vector(&[1, 1])], vec![vector(&[1, 0]), vector(&[0, 1])], vec![]);
        assert_eq!(m.hilbert_basis().unwrap().basis, vec![vector(&[1, 1])]);
    }

    #[test]
    fn mu2_invariants() {
        let m = Monoid::new(2, vec![vector(&[2, 0]), vector(&[1, 1])], vec![vector(&[1, 0]), vector(&[0, 1])], vec![]);
        let hb = m.hilbert_basis().unwrap();
        assert_eq!(hb.basis, vec![vector(&[0, 2]), vector(&[1, 1]), vector(&[2, 0])]);
        assert_eq!(relation_lattice(2, &hb.basis), vec![vector(&[1, -2, 1])]);
    }

    #[test]
    fn units_and_lineality() {
        let m = Monoid::new(2, unit_lattice(2), vec![vector(&[1, 0])], vec![]);
        let hb = m.hilbert_basis().unwrap();
        assert_eq!(hb.units, vec![vector(&[0, 1])]);
        assert_eq!(hb.basis.len(), 1);
        let whole = Monoid::new(2, unit_lattice(2), vec![], vec![]);
        assert_eq!(whole.hilbert_basis().unwrap().units.len(), 2);
        // x ≥ 0 and −x ≥ 0 force x = 0
        let thin = Monoid::new(2, unit_lattice(2), vec![vector(&[1, 0]), vector(&[-1, 0]), vector(&[0, 1])], vec![]);
        let hb = thin.hilbert_basis().unwrap();
        assert!(hb.units.is_empty());
        assert_eq!(hb.basis, vec![vector(&[0, 1])]);
    }

    #[test]
    fn classic_cone() {
        // cone((1,0),(1,3)) has Hilbert basis (1,0),(1,1),(1,2),(1,3)
        let m = Monoid::new(2, unit_lattice(2), vec![vector(&[0, 1]), vector(&[3, -1])], vec![]);
        assert_eq!(m.hilbert_basis().unwrap().basis, brute_force(&m, 4));
        assert_eq!(m.hilbert_basis().unwrap().basis.len(), 4);
    }

    #[test]
    fn rank_limit() {
        let m = Monoid::new(8, unit_lattice(8), unit_lattice(8), vec![]);
        assert!(matches!(m.hilbert_basis(), Err(Error::SizeLimit(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matches_box_enumeration(
            rays in proptest::collection::vec(proptest::collection::vec(-2i64..3, 3), 3),
            sub in 1i64..3,
        ) {
            // dual description of a simplicial cone; a sublattice of index `sub`
            let r = IntMatrix::from_columns(3, &rays.iter().map(|v| vector(v)).collect::<Vec<_>>());
            prop_assume!(!r.det().is_zero());
            let ineqs: Vec<Vector> = (0..3).map(|i| {
                let others: Vec<Vector> = (0..3).filter(|&j| j != i).map(|j| vector(&rays[j])).collect();
                let k = kernel_lattice(&IntMatrix::from_rows(3, others));
                let f = k[0].clone();
                if dot(&f, &vector(&rays[i])).is_negative() { f.iter().map(|x| -x).collect() } else { f }
            }).collect();
            let lattice = vec![vector(&[sub, 0, 0]), vector(&[0, 1, 0]), vector(&[0, 0, 1])];
            let m = Monoid::new(3, lattice, ineqs, vec![]);
            let hb = m.hilbert_basis().unwrap();
            prop_assert!(hb.units.is_empty());
            let bound = hb.basis.iter().flatten().map(|x| x.abs().to_i64().unwrap()).max().unwrap_or(0);
            prop_assume!(bound <= 4);
            prop_assert_eq!(hb.basis, brute_force(&m, 4));
        }
    }
}
