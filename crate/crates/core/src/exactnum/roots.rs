//! Certified enclosures of polynomial root magnitudes.
//!
//! Each square-free factor is solved numerically (Aberth iteration, first in
//! `f64`, then in dyadic rationals of growing precision) and the result is
//! certified with the Gerschgorin form of the Weierstrass inclusion theorem:
//! for distinct approximations `z_i` of the roots of a monic `p` of degree
//! `d`, every root lies in a disk centred at `z_i - W_i` with radius
//! `(d - 1)|W_i|`, `W_i = p(z_i) / prod_{j != i} (z_i - z_j)`, and a disk
//! disjoint from all others holds exactly one root. All of that is evaluated
//! in exact rational arithmetic. Roots on the unit circle are identified by an
//! exact count and reported with magnitude exactly 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::complex::{Cx, GaussianRational};
use super::poly::{IntPolynomial, Poly, RatPolynomial};
use super::scalar::{from_f64, round_dyadic, sqrt_bounds, to_f64};
use super::sturm::{real_root_count, unit_circle_root_count};
use crate::error::{Error, Result};

/// Default width of magnitude enclosures: `10^-9`.
pub fn default_precision() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MagnitudeEntry {
    pub lower: BigRational,
    pub upper: BigRational,
    pub multiplicity: usize,
    /// Certified to lie exactly on the unit circle (then `lower = upper = 1`).
    pub on_unit_circle: bool,
    /// `|z|^2` when it is known exactly.
    pub exact_square: Option<BigRational>,
}

impl MagnitudeEntry {
    pub fn approx(&self) -> f64 {
        (to_f64(&self.lower) + to_f64(&self.upper)) / 2.0
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// Whether the enclosure contains `sqrt(q)`, decided exactly.
    pub fn contains_sqrt(&self, q: &BigRational) -> bool {
        if let Some(sq) = &self.exact_square {
            return sq == q;
        }
        &self.lower * &self.lower <= *q && *q <= &self.upper * &self.upper
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }
}

impl Serialize for MagnitudeEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MagnitudeEntry", 5)?;
        st.serialize_field("approx", &self.approx())?;
        st.serialize_field("lower", &self.lower.to_string())?;
        st.serialize_field("upper", &self.upper.to_string())?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("on_unit_circle", &self.on_unit_circle)?;
        st.end()
    }
}

/// Root magnitudes with multiplicity, sorted by decreasing magnitude.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedMagnitudeMultiset {
    pub entries: Vec<MagnitudeEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SideCounts {
    pub above_one: usize,
    pub on_circle: usize,
    pub below_one: usize,
}

impl CertifiedMagnitudeMultiset {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Enclosures of the `k`-th powers of the magnitudes: the magnitudes of
    /// the roots of the polynomial whose roots are the `k`-th powers.
    pub fn power(&self, k: u32) -> CertifiedMagnitudeMultiset {
        let entries = self
            .entries
            .iter()
            .map(|e| MagnitudeEntry {
                lower: num_traits::pow(e.lower.clone(), k as usize),
                upper: num_traits::pow(e.upper.clone(), k as usize),
                multiplicity: e.multiplicity,
                on_unit_circle: e.on_unit_circle,
                exact_square: e.exact_square.as_ref().map(|q| num_traits::pow(q.clone(), k as usize)),
            })
            .collect();
        CertifiedMagnitudeMultiset { entries }
    }

    /// One reference per root, largest first.
    pub fn expanded(&self) -> Vec<&MagnitudeEntry> {
        self.entries.iter().flat_map(|e| std::iter::repeat_n(e, e.multiplicity)).collect()
    }

    /// Every entry is certified above, on, or below the unit circle.
    pub fn side_counts(&self) -> SideCounts {
        let one = BigRational::one();
        let mut c = SideCounts::default();
        for e in &self.entries {
            if e.on_unit_circle {
                c.on_circle += e.multiplicity;
            } else if e.lower > one {
                c.above_one += e.multiplicity;
            } else {
                debug_assert!(e.upper < one);
                c.below_one += e.multiplicity;
            }
        }
        c
    }
}

/// A certified root (or conjugate pair) of one square-free factor.
#[derive(Clone, Debug)]
struct RootMagnitude {
    lower: BigRational,
    upper: BigRational,
    count: usize,
    on_circle: bool,
    exact_square: Option<BigRational>,
}

/// Certified magnitudes of all roots of `p`, each enclosure no wider than
/// `precision`.
pub fn root_magnitudes(p: &IntPolynomial, precision: &BigRational) -> Result<CertifiedMagnitudeMultiset> {
    if !precision.is_positive() {
        return Err(Error::domain("precision must be positive"));
    }
    if p.is_zero() {
        return Err(Error::domain("root_magnitudes of the zero polynomial"));
    }
    let mut entries: Vec<MagnitudeEntry> = Vec::new();
    for (factor, mult) in p.to_rational().square_free_decomposition() {
        for r in isolate_magnitudes(&factor, precision)? {
            entries.push(MagnitudeEntry {
                lower: r.lower,
                upper: r.upper,
                multiplicity: r.count * mult,
                on_unit_circle: r.on_circle,
                exact_square: r.exact_square,
            });
        }
    }
    Ok(CertifiedMagnitudeMultiset { entries: merge_entries(entries) })
}

fn merge_entries(entries: Vec<MagnitudeEntry>) -> Vec<MagnitudeEntry> {
    let mut out: Vec<MagnitudeEntry> = Vec::new();
    for e in entries {
        let same = out.iter_mut().find(|o| {
            (o.on_unit_circle && e.on_unit_circle) || (o.exact_square.is_some() && o.exact_square == e.exact_square)
        });
        match same {
            Some(o) => o.multiplicity += e.multiplicity,
            None => out.push(e),
        }
    }
    out.sort_by(|a, b| b.upper.cmp(&a.upper).then(b.lower.cmp(&a.lower)));
    out
}

fn bits_for(precision: &BigRational) -> u32 {
    // 2^-bits well below precision
    let mut bits = 8u32;
    let mut unit = BigRational::one();
    while &unit > precision {
        unit /= BigRational::from_integer(BigInt::from(2));
        bits += 1;
    }
    bits + 8
}

fn magnitude_from_square(sq: BigRational, bits: u32) -> RootMagnitude {
    let (lo, hi) = sqrt_bounds(&sq, bits);
    let on_circle = sq.is_one();
    RootMagnitude { lower: lo, upper: hi, count: 1, on_circle, exact_square: Some(sq) }
}

fn isolate_magnitudes(s: &RatPolynomial, precision: &BigRational) -> Result<Vec<RootMagnitude>> {
    let s = s.monic();
    let d = s.deg();
    let min_bits = bits_for(precision);
    match d {
        0 => return Ok(Vec::new()),
        1 => {
            let r = -s.coeff(0);
            return Ok(vec![magnitude_from_square(&r * &r, min_bits)]);
        }
        2 => {
            let (c0, c1) = (s.coeff(0), s.coeff(1));
            let disc = &c1 * &c1 - BigRational::from_integer(4.into()) * &c0;
            if disc.is_negative() {
                let mut m = magnitude_from_square(c0, min_bits);
                m.count = 2;
                return Ok(vec![m]);
            }
        }
        _ => {}
    }

    let n_real = real_root_count(&s);
    let n_circle = unit_circle_root_count(&s);
    let (mut reals, mut uppers) = symmetrize(aberth_f64(&s), n_real);

    let mut bits = min_bits.max(64);
    // the floating-point roots usually certify as they stand
    let zs = to_dyadic(&reals, &uppers, bits);
    if let Some(found) = certify(&s, &zs, n_circle, precision, bits) {
        return Ok(found);
    }
    while bits <= 1 << 14 {
        let mut zs = to_dyadic(&reals, &uppers, bits);
        aberth_refine(&s, &mut zs, bits);
        if let Some(found) = certify(&s, &zs, n_circle, precision, bits) {
            return Ok(found);
        }
        reals = zs.reals.iter().map(to_f64).collect();
        uppers = zs.uppers.iter().map(|z| Cx::new(to_f64(&z.re), to_f64(&z.im))).collect();
        bits *= 2;
    }
    Err(Error::Resource(format!("root isolation for {s} did not converge")))
}

/// Roots split into real ones and one representative per conjugate pair.
#[derive(Clone, Debug)]
struct SymmetricApprox {
    reals: Vec<BigRational>,
    uppers: Vec<GaussianRational>,
}

impl SymmetricApprox {
    fn all(&self) -> Vec<GaussianRational> {
        let mut v: Vec<GaussianRational> = self.reals.iter().cloned().map(Cx::real).collect();
        v.extend(self.uppers.iter().cloned());
        v.extend(self.uppers.iter().map(|z| z.conj()));
        v
    }
}

fn to_dyadic(reals: &[f64], uppers: &[Cx<f64>], bits: u32) -> SymmetricApprox {
    let r = |x: f64| round_dyadic(&from_f64(x), bits);
    SymmetricApprox {
        reals: reals.iter().map(|&x| r(x)).collect(),
        uppers: uppers.iter().map(|z| Cx::new(r(z.re), r(z.im))).collect(),
    }
}

fn aberth_f64(s: &RatPolynomial) -> Vec<Cx<f64>> {
    let c: Vec<f64> = s.coeffs().iter().map(to_f64).collect();
    let d = c.len() - 1;
    let p = Poly::new(c.iter().map(|&x| Cx::real(x)).collect::<Vec<Cx<f64>>>());
    let dp = p.derivative();
    let radius = (0..d).map(|k| c[k].abs().powf(1.0 / (d - k) as f64)).fold(0.0f64, f64::max) * 2.0 + 1e-3;
    let mut z: Vec<Cx<f64>> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Cx::new(radius * t.cos(), radius * t.sin())
        })
        .collect();
    let (mut best, mut stalled) = (f64::INFINITY, 0);
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for i in 0..d {
            let pz = p.eval(&z[i]);
            let dpz = dp.eval(&z[i]);
            if pz.norm_sq() == 0.0 {
                continue;
            }
            let ratio = pz / dpz;
            let mut sum = Cx::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i].clone() - z[j].clone();
                    if diff.norm_sq() > 0.0 {
                        sum = sum + Cx::new(1.0, 0.0) / diff;
                    }
                }
            }
            let w = ratio.clone() / (Cx::new(1.0, 0.0) - ratio * sum);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            worst = worst.max(w.norm_sq().sqrt() / (1.0 + z[i].norm_sq().sqrt()));
            z[i] = z[i].clone() - w;
        }
        if worst < 1e-15 {
            break;
        }
        // at the rounding floor the corrections stop shrinking
        if worst < best * 0.5 {
            (best, stalled) = (worst, 0);
        } else {
            stalled += 1;
            if stalled >= 8 && best < 1e-8 {
                break;
            }
        }
    }
    z
}

fn symmetrize(z: Vec<Cx<f64>>, n_real: usize) -> (Vec<f64>, Vec<Cx<f64>>) {
    let mut by_im = z;
    by_im.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    let mut reals: Vec<f64> = by_im[..n_real].iter().map(|z| z.re).collect();
    let mut rest: Vec<Cx<f64>> = by_im[n_real..].to_vec();
    rest.sort_by(|a, b| b.im.total_cmp(&a.im));
    let mut uppers: Vec<Cx<f64>> = rest[..rest.len() / 2].iter().map(|z| Cx::new(z.re, z.im.abs().max(1e-9))).collect();
    reals.sort_by(f64::total_cmp);
    for k in 1..reals.len() {
        if reals[k] - reals[k - 1] < 1e-12 {
            reals[k] = reals[k - 1] + 1e-9;
        }
    }
    uppers.sort_by(|a, b| a.re.total_cmp(&b.re));
    (reals, uppers)
}

/// Aberth iterations at a fixed dyadic precision, preserving conjugate
/// symmetry.
fn aberth_refine(s: &RatPolynomial, zs: &mut SymmetricApprox, bits: u32) {
    let ds = s.derivative();
    let sc: Poly<GaussianRational> = s.map(|c| Cx::real(c.clone()));
    let dsc: Poly<GaussianRational> = ds.map(|c| Cx::real(c.clone()));
    let tol = BigRational::new(BigInt::one(), BigInt::one() << (2 * bits as usize));
    for _ in 0..12 {
        let all = zs.all();
        let step = |i: usize| -> Option<(GaussianRational, BigRational)> {
            let z = &all[i];
            let pz = sc.eval(z);
            if pz.is_zero() {
                return Some((z.clone(), BigRational::zero()));
            }
            let dpz = dsc.eval(z);
            if dpz.is_zero() {
                return None;
            }
            let ratio = pz / dpz;
            let mut sum = GaussianRational::zero();
            for (j, w) in all.iter().enumerate() {
                if j != i {
                    let diff = z.clone() - w.clone();
                    if diff.is_zero() {
                        return None;
                    }
                    sum = sum + GaussianRational::one() / diff;
                }
            }
            let denom = GaussianRational::one() - ratio.clone() * sum;
            if denom.is_zero() {
                return None;
            }
            let w = ratio / denom;
            let moved = w.norm_sq();
            let next = z.clone() - w;
            Some((Cx::new(round_dyadic(&next.re, bits), round_dyadic(&next.im, bits)), moved))
        };
        let mut worst = BigRational::zero();
        let nr = zs.reals.len();
        for i in 0..nr {
            if let Some((z, moved)) = step(i) {
                zs.reals[i] = z.re;
                worst = worst.max(moved);
            }
        }
        for k in 0..zs.uppers.len() {
            if let Some((z, moved)) = step(nr + k) {
                if z.im.is_positive() {
                    zs.uppers[k] = z;
                }
                worst = worst.max(moved);
            }
        }
        if worst < tol {
            break;
        }
    }
}

struct Disk {
    center: GaussianRational,
    radius_sq: BigRational,
}

fn disks_disjoint(a: &Disk, b: &Disk) -> bool {
    let diff = a.center.clone() - b.center.clone();
    let slack = diff.norm_sq() - &a.radius_sq - &b.radius_sq;
    if !slack.is_positive() {
        return false;
    }
    let four = BigRational::from_integer(4.into());
    &slack * &slack > four * &a.radius_sq * &b.radius_sq
}

/// Grid, in bits, onto which approximations are snapped when that hits an
/// exact root.
const SNAP_BITS: u32 = 8;

/// Gaussian integer `(re, im)`.
type GaussInt = (BigInt, BigInt);

fn gmul(a: &GaussInt, b: &GaussInt) -> GaussInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gnorm(a: &GaussInt) -> BigInt {
    &a.0 * &a.0 + &a.1 * &a.1
}

/// `round(a / n)` for `n > 0`.
fn div_round(a: &BigInt, n: &BigInt) -> BigInt {
    let two_n: BigInt = n * 2;
    let twice: BigInt = a * 2 + n;
    twice.div_floor(&two_n)
}

/// Weierstrass inclusion disks for dyadic approximations `zs` (denominators
/// dividing `2^bits`) of the roots of the monic `s`.
///
/// Everything is carried as Gaussian integers over powers of two, so no
/// gcds are taken until the end. With `z_i = Z_i / 2^b`, `D` the common
/// denominator of `s` and `c = D s`:
/// `p(z_i) = P_i / (D 2^{bd})`, `prod (z_i - z_j) = Q_i / 2^{b(d-1)}`, and
/// `W_i = P_i conj(Q_i) / (D |Q_i|^2 2^b)`. Centres are rounded to
/// `2^{-2b}` and the rounding absorbed into the radius via
/// `(r + e)^2 <= 2 r^2 + 2 e^2`.
fn weierstrass_disks(s: &RatPolynomial, zs: &[GaussianRational], bits: u32) -> Option<Vec<Disk>> {
    let d = zs.len();
    let b = bits as usize;
    let unit = BigInt::one() << b;
    let scale = BigRational::from_integer(unit.clone());
    let to_int = |q: &BigRational| {
        let x = q * &scale;
        debug_assert!(x.is_integer(), "approximation is not dyadic");
        x.to_integer()
    };
    let ints: Vec<GaussInt> = zs.iter().map(|z| (to_int(&z.re), to_int(&z.im))).collect();
    let den = s.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let coeffs: Vec<BigInt> =
        s.coeffs().iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let grid = BigInt::one() << (2 * b);
    let radius_den = BigInt::one() << (4 * b);
    let spread = BigInt::from(2 * (d - 1) * (d - 1));
    // P = sum_k c_k Z^k 2^{b(d-k)} by Horner
    let eval = |z: &GaussInt| {
        let mut p: GaussInt = (coeffs[d].clone(), BigInt::zero());
        for (steps, c) in coeffs[..d].iter().rev().enumerate() {
            p = gmul(&p, z);
            p.0 += c << (b * (steps + 1));
        }
        p
    };
    // snap approximations of simple exact roots (such as Gaussian integers)
    // onto them, so the disk has radius zero and the magnitude is exact
    let coarse = BigInt::one() << (b - SNAP_BITS as usize);
    let ints: Vec<GaussInt> = ints
        .into_iter()
        .map(|z| {
            let snap = |x: &BigInt| div_round(x, &coarse) * &coarse;
            let snapped = (snap(&z.0), snap(&z.1));
            let p = eval(&snapped);
            if p.0.is_zero() && p.1.is_zero() {
                snapped
            } else {
                z
            }
        })
        .collect();
    let mut disks = Vec::with_capacity(d);
    for (i, z) in ints.iter().enumerate() {
        let p = eval(z);
        let mut q: GaussInt = (BigInt::one(), BigInt::zero());
        for (j, w) in ints.iter().enumerate() {
            if j != i {
                q = gmul(&q, &(&z.0 - &w.0, &z.1 - &w.1));
            }
        }
        let q_norm = gnorm(&q);
        if q_norm.is_zero() {
            return None;
        }
        let n = &den * &q_norm;
        let r = gmul(&p, &(q.0.clone(), -q.1.clone()));
        // centre (Z N - R) / (N 2^b), rounded to the 2^{-2b} grid
        let cre_num = (&z.0 * &n - &r.0) << b;
        let cim_num = (&z.1 * &n - &r.1) << b;
        let cre = div_round(&cre_num, &n);
        let cim = div_round(&cim_num, &n);
        let exact = p.0.is_zero() && p.1.is_zero() && (&cre * &n == cre_num) && (&cim * &n == cim_num);
        let radius_num = if exact {
            BigInt::zero()
        } else {
            // 2 (d-1)^2 |P|^2 2^{2b} / (D^2 |Q|^2), rounded up, plus the
            // rounding term 2 e^2 2^{4b} <= 1
            let num = (&spread * gnorm(&p)) << (2 * b);
            let dd = &den * &den * &q_norm;
            num.div_ceil(&dd) + 1
        };
        disks.push(Disk {
            center: Cx::new(BigRational::new(cre, grid.clone()), BigRational::new(cim, grid.clone())),
            radius_sq: BigRational::new(radius_num, radius_den.clone()),
        });
    }
    Some(disks)
}

fn certify(
    s: &RatPolynomial,
    zs: &SymmetricApprox,
    n_circle: usize,
    precision: &BigRational,
    bits: u32,
) -> Option<Vec<RootMagnitude>> {
    let all = zs.all();
    let disks = weierstrass_disks(s, &all, bits)?;
    let d = all.len();
    for i in 0..d {
        for j in i + 1..d {
            if !disks_disjoint(&disks[i], &disks[j]) {
                return None;
            }
        }
    }

    let one = BigRational::one();
    let mut mags = Vec::with_capacity(d);
    let mut maybe_on_circle = 0;
    for disk in &disks {
        let c2 = disk.center.norm_sq();
        let (clo, chi) = sqrt_bounds(&c2, bits);
        let (_, rhi) = sqrt_bounds(&disk.radius_sq, bits);
        let lower = (clo - &rhi).max(BigRational::zero());
        let upper = chi + &rhi;
        let maybe = lower <= one && one <= upper;
        if maybe {
            maybe_on_circle += 1;
        }
        let exact = disk.radius_sq.is_zero().then_some(c2);
        mags.push((lower, upper, maybe, exact));
    }
    if maybe_on_circle != n_circle {
        return None;
    }

    let nr = zs.reals.len();
    let nu = zs.uppers.len();
    let mut out = Vec::with_capacity(nr + nu);
    for (idx, (lower, upper, on_circle, exact)) in mags.into_iter().enumerate().take(nr + nu) {
        let count = if idx < nr { 1 } else { 2 };
        if on_circle {
            out.push(RootMagnitude {
                lower: one.clone(),
                upper: one.clone(),
                count,
                on_circle: true,
                exact_square: Some(one.clone()),
            });
        } else {
            if &(&upper - &lower) > precision {
                return None;
            }
            out.push(RootMagnitude { lower, upper, count, on_circle: false, exact_square: exact });
        }
    }
    Some(out)
}
