//! Endomorphisms `x ↦ M x + τ` of complex tori: validation, iteration,
//! analytic eigenvalue data, the unity-free test, fixed subtori, and the
//! splitting of eigenvalues along invariant subtori.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::scalar::{frac_mod1, ser};
use crate::exactnum::{cyclotomic_root_count, Cx, CyclotomicCount, IntPolynomial, Poly, QuadComplex, RealQuad};
use crate::matlin::{integer_kernel, restrict_and_quotient, IntMatrix, Matrix};
use crate::torus::{make_torus_quadratic, quotient_torus, subtorus_from_lattice, ComplexTorus, Subtorus};

/// `f(x) = M x + τ (mod Z^{2n})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusEndomorphism {
    #[serde(skip)]
    torus: ComplexTorus,
    #[serde(rename = "M")]
    m: IntMatrix,
    #[serde(serialize_with = "ser::rational_vec")]
    tau: Vec<BigRational>,
    surjective: bool,
}

pub fn make_endo(t: &ComplexTorus, m: IntMatrix, tau: Vec<BigRational>) -> Result<TorusEndomorphism> {
    let d = t.rank();
    if m.rows() != d || m.cols() != d {
        return Err(Error::domain(format!("matrix is {}x{}, torus lattice has rank {d}", m.rows(), m.cols())));
    }
    if tau.len() != d {
        return Err(Error::domain(format!("translation has {} entries, expected {d}", tau.len())));
    }
    if !t.commutes_with(&m.to_rational()) {
        return Err(Error::NotHolomorphic);
    }
    let surjective = !m.det_int()?.is_zero();
    let tau = tau.iter().map(frac_mod1).collect();
    Ok(TorusEndomorphism { torus: t.clone(), m, tau, surjective })
}

impl TorusEndomorphism {
    pub fn torus(&self) -> &ComplexTorus {
        &self.torus
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn tau(&self) -> &[BigRational] {
        &self.tau
    }

    pub fn dim(&self) -> usize {
        self.torus.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    /// `τ = 0` and `det M ≠ 0`.
    pub fn is_isogeny(&self) -> bool {
        self.surjective && self.tau.iter().all(Zero::is_zero)
    }

    pub fn det(&self) -> BigInt {
        self.m.det_int().expect("square")
    }

    pub fn require_surjective(&self) -> Result<()> {
        if self.surjective {
            Ok(())
        } else {
            Err(Error::NotSurjective)
        }
    }

    /// `self ∘ g`: `x ↦ M_f (M_g x + τ_g) + τ_f`.
    pub fn compose(&self, g: &TorusEndomorphism) -> Result<TorusEndomorphism> {
        if self.torus != g.torus {
            return Err(Error::domain("composition of maps on different tori"));
        }
        let mut tau = self.m.to_rational().mul_vec(&g.tau);
        for (t, s) in tau.iter_mut().zip(&self.tau) {
            *t += s;
        }
        make_endo(&self.torus, &self.m * &g.m, tau)
    }

    /// `f^k`: matrix `M^k`, translation `(M^{k-1} + … + I) τ mod 1`.
    pub fn iterate(&self, k: u64) -> Result<TorusEndomorphism> {
        if k == 0 {
            return Err(Error::domain("iterate needs k >= 1"));
        }
        let mr = self.m.to_rational();
        let mut tau = vec![BigRational::zero(); self.tau.len()];
        for _ in 0..k {
            tau = mr.mul_vec(&tau);
            for (t, s) in tau.iter_mut().zip(&self.tau) {
                *t += s;
            }
            tau = tau.iter().map(frac_mod1).collect();
        }
        make_endo(&self.torus, self.m.pow(k), tau)
    }

    /// The homomorphism part `x ↦ M x`.
    pub fn linear_part(&self) -> TorusEndomorphism {
        TorusEndomorphism { tau: vec![BigRational::zero(); self.tau.len()], ..self.clone() }
    }
}

/// Analytic and rational characteristic polynomials of `f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenData {
    /// `det(x I - M)`, degree `2n`.
    pub h1_charpoly: IntPolynomial,
    /// Characteristic polynomial of `M` on the `+i` eigenspace of `J`,
    /// degree `n`; coefficients in `Q(sqrt D)(i)`.
    pub analytic_charpoly: Poly<QuadComplex>,
    /// Root-of-unity eigenvalues on `H^{1,0}`, with multiplicity.
    pub u_count: usize,
    pub cyclotomic: CyclotomicCount,
}

fn lift_int(x: &BigInt) -> QuadComplex {
    Cx::real(RealQuad::rational(BigRational::from_integer(x.clone())))
}

/// Basis of `ker(J - iI)` with an identity block at the free positions.
fn plus_i_eigenspace(t: &ComplexTorus) -> (Vec<Vec<QuadComplex>>, Vec<usize>) {
    let d = t.rank();
    let j = t.j().map(|x| Cx::real(x.clone()));
    let shifted = &j - &Matrix::<QuadComplex>::identity(d).scale(&Cx::i());
    let basis = shifted.nullspace();
    let free: Vec<usize> = basis.iter().map(|v| v.iter().rposition(|x| x.is_one()).expect("free coordinate")).collect();
    (basis, free)
}

/// Matrix of `M` restricted to the `+i` eigenspace of `J`.
pub fn analytic_matrix(f: &TorusEndomorphism) -> Result<Matrix<QuadComplex>> {
    let t = &f.torus;
    let (basis, free) = plus_i_eigenspace(t);
    let n = basis.len();
    if n != t.dim() {
        return Err(Error::InvariantViolation(format!("+i eigenspace has dimension {n}, expected {}", t.dim())));
    }
    let m = f.m.map(lift_int);
    let mut r = Matrix::<QuadComplex>::zeros(n, n);
    for (k, v) in basis.iter().enumerate() {
        let image = m.mul_vec(v);
        // coordinates are read off at the free positions
        let coords: Vec<QuadComplex> = free.iter().map(|&p| image[p].clone()).collect();
        let mut recon = vec![QuadComplex::zero(); image.len()];
        for (c, b) in coords.iter().zip(&basis) {
            for (o, x) in recon.iter_mut().zip(b) {
                *o = o.clone() + c.clone() * x.clone();
            }
        }
        if recon != image {
            return Err(Error::InvariantViolation("M does not preserve ker(J - iI)".into()));
        }
        for (l, c) in coords.into_iter().enumerate() {
            r.set(l, k, c);
        }
    }
    Ok(r)
}

pub fn eigen_data(f: &TorusEndomorphism) -> Result<EigenData> {
    let h1 = f.m.charpoly_int()?;
    let analytic = analytic_matrix(f)?.charpoly()?;
    let lift = h1.map(lift_int);
    if analytic.clone() * analytic.conj() != lift {
        return Err(Error::InvariantViolation("h1 charpoly differs from analytic x conjugate".into()));
    }
    let cyclotomic = cyclotomic_root_count(&h1)?;
    if cyclotomic.count % 2 == 1 {
        return Err(Error::InvariantViolation("odd number of root-of-unity eigenvalues".into()));
    }
    Ok(EigenData { h1_charpoly: h1, analytic_charpoly: analytic, u_count: cyclotomic.count / 2, cyclotomic })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UnityFree {
    pub verdict: bool,
    pub u_f: usize,
}

pub fn unity_free(f: &TorusEndomorphism) -> Result<UnityFree> {
    f.require_surjective()?;
    let u_f = eigen_data(f)?.u_count;
    Ok(UnityFree { verdict: u_f == 0, u_f })
}

/// A positive-dimensional subtorus fixed pointwise by an iterate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedSubtorus {
    /// Smallest `k` such that `M^k` fixes a positive-dimensional subtorus.
    pub k: u64,
    /// The saturated lattice `ker(M^k - I)`.
    pub subtorus: Subtorus,
    /// Least common multiple of all root-of-unity orders among the
    /// eigenvalues.
    pub lcm: u64,
    /// `ker(M^lcm - I)`: the largest subtorus fixed pointwise by an iterate.
    pub lcm_subtorus: Subtorus,
}

fn kernel_of_power_minus_identity(f: &TorusEndomorphism, k: u64) -> Result<Subtorus> {
    let d = f.torus.rank();
    let lattice = integer_kernel(&(&f.m.pow(k) - &IntMatrix::identity(d)));
    subtorus_from_lattice(&f.torus, lattice)
}

pub fn fixed_subtorus(f: &TorusEndomorphism) -> Result<Option<FixedSubtorus>> {
    f.require_surjective()?;
    let cyc = eigen_data(f)?.cyclotomic;
    let Some(k) = cyc.orders().min() else {
        return Ok(None);
    };
    let lcm = cyc.orders().fold(1u64, num_integer::lcm);
    let subtorus = kernel_of_power_minus_identity(f, k)?;
    let lcm_subtorus = kernel_of_power_minus_identity(f, lcm)?;
    if subtorus.rank() == 0 {
        return Err(Error::InvariantViolation(format!("ker(M^{k} - I) is zero")));
    }
    Ok(Some(FixedSubtorus { k, subtorus, lcm, lcm_subtorus }))
}

/// Eigenvalue splitting along an invariant subtorus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenSplit {
    /// Analytic characteristic polynomial of `f` (the multiset Γ).
    pub gamma: Poly<QuadComplex>,
    /// Analytic characteristic polynomial on the subtorus (Δ).
    pub delta: Poly<QuadComplex>,
    /// Analytic characteristic polynomial on the quotient (Γ − Δ).
    pub quotient: Poly<QuadComplex>,
    pub h1_sub: IntPolynomial,
    pub h1_quotient: IntPolynomial,
    pub m_sub: IntMatrix,
    pub m_quotient: IntMatrix,
}

pub fn eigen_split(f: &TorusEndomorphism, s: &Subtorus) -> Result<EigenSplit> {
    let t = &f.torus;
    if s.lattice.ambient_rank != t.rank() {
        return Err(Error::domain("subtorus lives in a different torus"));
    }
    let s = subtorus_from_lattice(t, s.lattice.clone())?;
    let rq = restrict_and_quotient(&f.m.to_rational(), &s.lattice)?;
    let ja = restrict_and_quotient(t.j_rational_part(), &s.lattice)?;
    let jb = restrict_and_quotient(t.j_sqrt_part(), &s.lattice)?;
    let sub_torus = make_torus_quadratic(ja.restricted, jb.restricted, t.radicand())?;
    let quot = quotient_torus(t, &s)?;
    let m_sub = rq.restricted.to_integer().expect("integral restriction");
    let m_quotient = rq.quotient.to_integer().expect("integral quotient");
    let r = s.rank();
    let sub = make_endo(&sub_torus, m_sub.clone(), vec![BigRational::zero(); r])?;
    let q = make_endo(&quot.torus, m_quotient.clone(), vec![BigRational::zero(); t.rank() - r])?;
    let gamma = eigen_data(f)?.analytic_charpoly;
    let ds = eigen_data(&sub)?;
    let dq = eigen_data(&q)?;
    if ds.analytic_charpoly.clone() * dq.analytic_charpoly.clone() != gamma {
        return Err(Error::InvariantViolation("Γ != Δ · (Γ − Δ)".into()));
    }
    Ok(EigenSplit {
        gamma,
        delta: ds.analytic_charpoly,
        quotient: dq.analytic_charpoly,
        h1_sub: ds.h1_charpoly,
        h1_quotient: dq.h1_charpoly,
        m_sub,
        m_quotient,
    })
}

/// `prod (x - r^k)` over the roots `r` of monic `p`, computed as the
/// resultant `Res_y(p(y), x - y^k)` (Sylvester determinant over `Z[x]`).
pub fn power_composition(p: &IntPolynomial, k: usize) -> Result<IntPolynomial> {
    if !p.is_monic() || k == 0 {
        return Err(Error::domain("power_composition needs monic p and k >= 1"));
    }
    let d = p.deg();
    let size = d + k;
    let pc: Vec<IntPolynomial> = p.coeffs().iter().rev().map(|c| IntPolynomial::constant(c.clone())).collect();
    // q(y) = -y^k + x, descending in y
    let mut qc = vec![IntPolynomial::zero(); k + 1];
    qc[0] = IntPolynomial::constant(-BigInt::one());
    qc[k] = IntPolynomial::from_i64(&[0, 1]);
    let mut syl = Matrix::<IntPolynomial>::zeros(size, size);
    for r in 0..k {
        for (i, c) in pc.iter().enumerate() {
            syl.set(r, r + i, c.clone());
        }
    }
    for r in 0..d {
        for (i, c) in qc.iter().enumerate() {
            syl.set(k + r, r + i, c.clone());
        }
    }
    let cp = syl.charpoly_ring()?;
    let det = cp.coeff(0);
    Ok(if size % 2 == 1 { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use crate::matlin::{saturate, RationalMatrix};
    use crate::torus::{make_subtorus, make_torus};

    fn gaussian() -> ComplexTorus {
        make_torus(RationalMatrix::from_i64(&[&[0, -1], &[1, 0]])).unwrap()
    }

    fn ee() -> ComplexTorus {
        ComplexTorus::product(&[gaussian(), gaussian()]).unwrap()
    }

    fn zero(d: usize) -> Vec<BigRational> {
        vec![rat(0, 1); d]
    }

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn make_endo_examples() {
        let e = gaussian();
        assert!(make_endo(&e, IntMatrix::from_i64(&[&[2, 0], &[0, 2]]), zero(2)).is_ok());
        assert!(make_endo(&e, IntMatrix::from_i64(&[&[0, -1], &[1, 0]]), zero(2)).is_ok());
        assert_eq!(make_endo(&e, IntMatrix::from_i64(&[&[1, 1], &[0, 1]]), zero(2)), Err(Error::NotHolomorphic));
        assert!(matches!(make_endo(&e, IntMatrix::identity(4), zero(4)), Err(Error::Domain(_))));
    }

    #[test]
    fn iterate_examples() {
        let e = gaussian();
        let f = make_endo(&e, IntMatrix::from_i64(&[&[2, 0], &[0, 2]]), zero(2)).unwrap();
        assert_eq!(f.iterate(1).unwrap(), f);
        assert_eq!(f.iterate(3).unwrap().matrix(), &IntMatrix::from_i64(&[&[8, 0], &[0, 8]]));
        let g = make_endo(&e, IntMatrix::identity(2), vec![rat(1, 3), rat(1, 3)]).unwrap();
        assert_eq!(g.iterate(3).unwrap().tau(), &zero(2)[..]);
        assert_eq!(g.iterate(2).unwrap().tau(), &[rat(2, 3), rat(2, 3)][..]);
    }

    #[test]
    fn eigen_data_examples() {
        let e = gaussian();
        let f = make_endo(&e, IntMatrix::from_i64(&[&[2, 0], &[0, 2]]), zero(2)).unwrap();
        let ed = eigen_data(&f).unwrap();
        assert_eq!(ed.h1_charpoly, ip(&[4, -4, 1]));
        assert_eq!(ed.analytic_charpoly.to_string(), "x - 2");
        let g = make_endo(&e, IntMatrix::from_i64(&[&[1, -2], &[2, 1]]), zero(2)).unwrap();
        let ed = eigen_data(&g).unwrap();
        assert_eq!(ed.h1_charpoly, ip(&[5, -2, 1]));
        // the root of the analytic polynomial is 1 + 2i or its conjugate,
        // depending on the orientation of J; check the product exactly
        let root = -ed.analytic_charpoly.coeff(0);
        assert_eq!(root.norm_sq(), RealQuad::rational(rat(5, 1)));
        assert_eq!(root.re, RealQuad::rational(rat(1, 1)));
    }

    #[test]
    fn unity_free_and_fixed_subtorus() {
        let m21 = make_endo(&ee(), IntMatrix::diag(&[2, 2, 1, 1].map(BigInt::from)), zero(4)).unwrap();
        assert_eq!(unity_free(&m21).unwrap(), UnityFree { verdict: false, u_f: 1 });
        let fs = fixed_subtorus(&m21).unwrap().unwrap();
        assert_eq!(fs.k, 1);
        assert_eq!(fs.subtorus.rank(), 2);
        assert_eq!(fs.subtorus.lattice, saturate(&IntMatrix::from_i64(&[&[0, 0], &[0, 0], &[1, 0], &[0, 1]])).unwrap());
        let i = make_endo(&gaussian(), IntMatrix::from_i64(&[&[0, -1], &[1, 0]]), zero(2)).unwrap();
        let fs = fixed_subtorus(&i).unwrap().unwrap();
        assert_eq!((fs.k, fs.subtorus.rank()), (4, 2));
        let id = make_endo(&gaussian(), IntMatrix::identity(2), zero(2)).unwrap();
        assert_eq!(unity_free(&id).unwrap(), UnityFree { verdict: false, u_f: 1 });
        let zero_map = make_endo(&gaussian(), IntMatrix::zeros(2, 2), zero(2)).unwrap();
        assert_eq!(unity_free(&zero_map), Err(Error::NotSurjective));
    }

    #[test]
    fn eigen_split_examples() {
        let t = ee();
        let first = make_subtorus(&t, &IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]])).unwrap();
        let diag = make_subtorus(&t, &IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 0], &[0, 1]])).unwrap();
        let f = make_endo(&t, IntMatrix::diag(&[2, 2, 3, 3].map(BigInt::from)), zero(4)).unwrap();
        let s = eigen_split(&f, &first).unwrap();
        assert_eq!(s.delta.to_string(), "x - 2");
        assert_eq!(s.quotient.to_string(), "x - 3");
        assert_eq!(eigen_split(&f, &diag), Err(Error::InvarianceViolation { column: 0 }));
        let shear = IntMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let g = make_endo(&t, shear, zero(4)).unwrap();
        let s = eigen_split(&g, &first).unwrap();
        assert_eq!(s.delta.to_string(), "x - 1");
        assert_eq!(s.quotient.to_string(), "x - 1");
    }

    #[test]
    fn power_composition_matches_matrix_power() {
        let c = IntMatrix::from_i64(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 3, 4, 3]]);
        let p = c.charpoly_int().unwrap();
        for k in 1..=4u64 {
            assert_eq!(power_composition(&p, k as usize).unwrap(), c.pow(k).charpoly_int().unwrap());
        }
    }
}
