//! Exact rational feasibility by Fourier–Motzkin elimination.
//!
//! Systems here are tiny (a handful of variables), so the doubly exponential
//! worst case of FM never bites; in exchange we get exact witnesses without
//! any pivoting rules to get wrong.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{rational_rref, QVector};

/// A row `coeffs · x ≥ rhs`, stored with primitive integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    coeffs: Vec<BigInt>,
    rhs: BigRational,
}

impl Row {
    fn normalized(coeffs: &[BigRational], rhs: &BigRational) -> Row {
        let l = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Row { coeffs: ints, rhs: rhs.clone() };
        }
        let scale = BigRational::from_integer(l) / BigRational::from_integer(g.clone());
        Row { coeffs: ints.iter().map(|x| x / &g).collect(), rhs: rhs * scale }
    }

    fn value(&self, x: &[BigRational]) -> BigRational {
        self.coeffs.iter().zip(x).fold(BigRational::zero(), |acc, (c, v)| acc + BigRational::from_integer(c.clone()) * v)
    }
}

/// A conjunction of linear equalities and inequalities over ℚ.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    nvars: usize,
    ineqs: Vec<(QVector, BigRational)>,
    eqs: Vec<(QVector, BigRational)>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, ..Default::default() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Adds `coeffs · x ≥ rhs`.
    pub fn ge(&mut self, coeffs: QVector, rhs: BigRational) -> &mut Self {
        assert_eq!(coeffs.len(), self.nvars);
        self.ineqs.push((coeffs, rhs));
        self
    }

    /// Adds `coeffs · x = rhs`.
    pub fn eq(&mut self, coeffs: QVector, rhs: BigRational) -> &mut Self {
        assert_eq!(coeffs.len(), self.nvars);
        self.eqs.push((coeffs, rhs));
        self
    }

    pub fn ge_int(&mut self, coeffs: &[BigInt], rhs: i64) -> &mut Self {
        self.ge(int_row(coeffs), BigRational::from_integer(rhs.into()))
    }

    pub fn eq_int(&mut self, coeffs: &[BigInt], rhs: i64) -> &mut Self {
        self.eq(int_row(coeffs), BigRational::from_integer(rhs.into()))
    }

    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }

    /// A feasible point, or `None`. The point is deterministic: during
    /// back-substitution every variable takes the value 0 when allowed,
    /// otherwise the integer nearest 0 inside its bounds, otherwise the
    /// nearer bound.
    pub fn solve(&self) -> Option<QVector> {
        let n = self.nvars;
        // x = offset + basis · t, parametrizing the affine solution set of the equalities
        let (offset, basis) = self.equality_parametrization()?;
        let k = basis.len();
        let rows: Vec<Row> = self
            .ineqs
            .iter()
            .map(|(a, b)| {
                let coeffs: QVector = basis.iter().map(|v| a.iter().zip(v).fold(BigRational::zero(), |s, (x, y)| s + x * y)).collect();
                let shift = a.iter().zip(&offset).fold(BigRational::zero(), |s, (x, y)| s + x * y);
                Row::normalized(&coeffs, &(b - shift))
            })
            .collect();
        let t = fourier_motzkin(k, rows)?;
        let mut x = offset;
        for (ti, v) in t.iter().zip(&basis) {
            for j in 0..n {
                x[j] += ti * &v[j];
            }
        }
        Some(x)
    }

    fn equality_parametrization(&self) -> Option<(QVector, Vec<QVector>)> {
        let n = self.nvars;
        let aug: Vec<QVector> = self.eqs.iter().map(|(a, b)| a.iter().cloned().chain(std::iter::once(b.clone())).collect()).collect();
        let (rref, pivots) = rational_rref(&aug);
        if pivots.contains(&n) {
            return None;
        }
        let mut offset = vec![BigRational::zero(); n];
        for (i, &p) in pivots.iter().enumerate() {
            offset[p] = rref[i][n].clone();
        }
        let basis = (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![BigRational::zero(); n];
                v[f] = BigRational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -rref[i][f].clone();
                }
                v
            })
            .collect();
        Some((offset, basis))
    }
}

fn int_row(coeffs: &[BigInt]) -> QVector {
    coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Drops trivially satisfied rows and merges parallel rows, keeping the
/// tightest right-hand side. Returns `None` on a violated constant row.
fn simplify(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut out: Vec<Row> = Vec::new();
    let mut sorted = rows;
    sorted.sort();
    for r in sorted {
        if r.coeffs.iter().all(|c| c.is_zero()) {
            if r.rhs.is_positive() {
                return None;
            }
            continue;
        }
        match out.last_mut() {
            Some(last) if last.coeffs == r.coeffs => {
                if r.rhs > last.rhs {
                    last.rhs = r.rhs;
                }
            }
            _ => out.push(r),
        }
    }
    Some(out)
}

fn fourier_motzkin(nvars: usize, rows: Vec<Row>) -> Option<QVector> {
    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(nvars + 1);
    let mut current = simplify(rows)?;
    for var in (0..nvars).rev() {
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in &current {
            match r.coeffs[var].sign() {
                num_bigint::Sign::Plus => lower.push(r.clone()),
                num_bigint::Sign::Minus => upper.push(r.clone()),
                num_bigint::Sign::NoSign => rest.push(r.clone()),
            }
        }
        for lo in &lower {
            for up in &upper {
                // lo: a x_v + ... ≥ b (a>0); up: -c x_v + ... ≥ d (c>0)
                let a = &lo.coeffs[var];
                let c = -&up.coeffs[var];
                let coeffs: QVector = lo.coeffs.iter().zip(&up.coeffs).map(|(p, q)| BigRational::from_integer(p * &c + q * a)).collect();
                let rhs = &lo.rhs * BigRational::from_integer(c.clone()) + &up.rhs * BigRational::from_integer(a.clone());
                rest.push(Row::normalized(&coeffs, &rhs));
            }
        }
        stages.push(current);
        current = simplify(rest)?;
    }
    // every remaining row is constant and was checked by `simplify`
    let mut x = vec![BigRational::zero(); nvars];
    for (var, rows) in (0..nvars).zip(stages.iter().rev()) {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for r in rows {
            let c = &r.coeffs[var];
            if c.is_zero() {
                continue;
            }
            let mut partial = x.clone();
            partial[var] = BigRational::zero();
            let bound = (&r.rhs - r.value(&partial)) / BigRational::from_integer(c.clone());
            if c.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        x[var] = pick_value(lo, hi)?;
    }
    Some(x)
}

fn pick_value(lo: Option<BigRational>, hi: Option<BigRational>) -> Option<BigRational> {
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    let zero = BigRational::zero();
    let above_lo = lo.as_ref().is_none_or(|l| *l <= zero);
    let below_hi = hi.as_ref().is_none_or(|h| *h >= zero);
    if above_lo && below_hi {
        return Some(zero);
    }
    if !above_lo {
        let l = lo.unwrap();
        let c = l.ceil();
        let fits = hi.as_ref().is_none_or(|h| c <= *h);
        Some(if fits { c } else { l })
    } else {
        let h = hi.unwrap();
        let f = h.floor();
        let fits = lo.as_ref().is_none_or(|l| f >= *l);
        Some(if fits { f } else { h })
    }
}
