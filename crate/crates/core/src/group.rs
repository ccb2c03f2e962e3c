//! Diagonalizable groups acting on the torus of a toric variety.
//!
//! A group is given by its character group `A = ℤ^s / R·ℤ^q` and a weight
//! map sending each coordinate character `e_j^*` of the ambient torus to a
//! class in `A`. Smith normal form splits `A` into a free part of rank `r`
//! and cyclic torsion; only the free part matters for stabilizer dimensions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, kernel_lattice, lattice_basis, smith_normal_form, IntMatrix, RationalSubspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalizableGroup {
    n: usize,
    /// `r × n`: the free part of each coordinate weight.
    free_weights: IntMatrix,
    /// Cyclic factors `ℤ/d` (with `d > 1`) and each coordinate's residue.
    torsion: Vec<(BigInt, Vector)>,
}

impl DiagonalizableGroup {
    /// Group `ℤ^free_rank ⊕ ⊕ ℤ/t_i` with one weight per coordinate, each a
    /// vector of length `free_rank + torsion.len()`.
    pub fn new(free_rank: usize, torsion: &[BigInt], weights: &[Vector]) -> Result<Self> {
        let s = free_rank + torsion.len();
        for (j, w) in weights.iter().enumerate() {
            if w.len() != s {
                return Err(Error::Invalid(format!("weight of coordinate {j} has length {}, expected {s}", w.len())));
            }
        }
        if let Some(t) = torsion.iter().find(|t| !t.is_positive()) {
            return Err(Error::Invalid(format!("torsion order {t} must be positive")));
        }
        let mut relations = IntMatrix::zeros(s, torsion.len());
        for (i, t) in torsion.iter().enumerate() {
            relations.set(free_rank + i, i, t.clone());
        }
        let w = IntMatrix::from_columns(s, weights);
        Ok(Self::from_presentation(&relations, &w))
    }

    /// A torus `G_m^r` acting with the given per-coordinate weights.
    pub fn torus(weights: &[Vector]) -> Result<Self> {
        let r = weights.first().map_or(0, |w| w.len());
        Self::new(r, &[], weights)
    }

    /// `G_m` acting with the given weights.
    pub fn gm(weights: &[i64]) -> Self {
        let w: Vec<Vector> = weights.iter().map(|&x| vec![BigInt::from(x)]).collect();
        Self::new(1, &[], &w).expect("rank-one weights are well formed")
    }

    /// General presentation: `relations` is `s × q`, `weights` is `s × n`.
    pub fn from_presentation(relations: &IntMatrix, weights: &IntMatrix) -> Self {
        assert_eq!(relations.rows(), weights.rows(), "presentation size mismatch");
        let n = weights.cols();
        let smith = smith_normal_form(relations);
        let factors = smith.invariant_factors();
        let transformed = smith.p.mul(weights);
        let mut torsion = Vec::new();
        for (i, d) in factors.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let residues = transformed.row(i).iter().map(|x| x.mod_floor(d)).collect();
            torsion.push((d.clone(), residues));
        }
        let free_rows: Vec<Vector> = (factors.len()..weights.rows()).map(|i| transformed.row(i).to_vec()).collect();
        DiagonalizableGroup { n, free_weights: IntMatrix::from_rows(n, free_rows), torsion }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn free_rank(&self) -> usize {
        self.free_weights.rows()
    }

    /// Dimension of the group.
    pub fn dim(&self) -> usize {
        self.free_rank()
    }

    pub fn free_weights(&self) -> &IntMatrix {
        &self.free_weights
    }

    pub fn torsion(&self) -> &[(BigInt, Vector)] {
        &self.torsion
    }

    pub fn torsion_orders(&self) -> Vec<BigInt> {
        self.torsion.iter().map(|(d, _)| d.clone()).collect()
    }

    /// Per-coordinate weights in normalized form: free part, then torsion residues.
    pub fn coordinate_weights(&self) -> Vec<Vector> {
        (0..self.n)
            .map(|j| {
                let mut w = self.free_weights.column(j);
                w.extend(self.torsion.iter().map(|(_, t)| t[j].clone()));
                w
            })
            .collect()
    }

    /// Rank of the free weight matrix.
    pub fn weight_rank(&self) -> usize {
        self.free_weights.rank()
    }

    /// Dimension of the kernel of `G → T`, the stabilizer of a point of the
    /// open torus orbit.
    pub fn generic_stabilizer_dim(&self) -> usize {
        self.free_rank() - self.weight_rank()
    }

    /// The image of the cocharacters of `G` in `N_ℚ`.
    pub fn cocharacter_space(&self) -> RationalSubspace {
        RationalSubspace::span_integer(self.n, &self.free_weights.row_vectors())
    }

    /// The element of `N` given by pairing a cocharacter `y ∈ ℤ^r` with
    /// each coordinate weight.
    pub fn cocharacter_image(&self, y: &[BigInt]) -> Vector {
        self.free_weights.transpose().mul_vec(y)
    }

    /// True iff the character `m ∈ M` restricts trivially to `G`.
    pub fn is_invariant(&self, m: &[BigInt]) -> bool {
        self.free_weights.mul_vec(m).iter().all(Zero::is_zero) && self.torsion.iter().all(|(d, t)| dot(t, m).mod_floor(d).is_zero())
    }

    /// Basis of the lattice `K ⊆ M` of invariant characters.
    pub fn invariant_lattice(&self) -> Vec<Vector> {
        // K is the projection of ker [W_free; W_tors | 0; diag(d)] onto M
        let k = self.torsion.len();
        let r = self.free_rank();
        let mut rows = Vec::with_capacity(r + k);
        for i in 0..r {
            let mut row = self.free_weights.row(i).to_vec();
            row.extend(std::iter::repeat_n(BigInt::zero(), k));
            rows.push(row);
        }
        for (i, (d, t)) in self.torsion.iter().enumerate() {
            let mut row = t.clone();
            row.extend((0..k).map(|l| if l == i { d.clone() } else { BigInt::zero() }));
            rows.push(row);
        }
        let system = IntMatrix::from_rows(self.n + k, rows);
        let kernel: Vec<Vector> = kernel_lattice(&system).into_iter().map(|v| v[..self.n].to_vec()).collect();
        lattice_basis(self.n, &kernel)
    }

    /// The same character group acting on the coordinates `coords` only.
    pub fn restrict(&self, coords: &[usize]) -> Self {
        let pick = |v: &Vector| coords.iter().map(|&j| v[j].clone()).collect::<Vector>();
        DiagonalizableGroup {
            n: coords.len(),
            free_weights: IntMatrix::from_rows(coords.len(), self.free_weights.row_vectors().iter().map(pick).collect()),
            torsion: self.torsion.iter().map(|(d, t)| (d.clone(), pick(t))).collect(),
        }
    }

    /// Appends coordinates on which the group acts trivially.
    pub fn with_trivial_coordinates(&self, extra: usize) -> Self {
        let pad = |v: &Vector| {
            let mut v = v.clone();
            v.extend(std::iter::repeat_n(BigInt::zero(), extra));
            v
        };
        DiagonalizableGroup {
            n: self.n + extra,
            free_weights: IntMatrix::from_rows(self.n + extra, self.free_weights.row_vectors().iter().map(pad).collect()),
            torsion: self.torsion.iter().map(|(d, t)| (d.clone(), pad(t))).collect(),
        }
    }
}
