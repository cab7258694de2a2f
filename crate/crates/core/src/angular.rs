//! Spinor spherical harmonics and the angular operator algebra.
//!
//! Conventions: Condon–Shortley phase for `Y_lm`; inside a sector with total
//! angular momentum `j`, the footnote index is `m = m_j - 1/2` and the two
//! orbital channels are `l_A = j - 1/2` and `l_B = j + 1/2`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// A number in `Z/2`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const HALF: Self = Self(1);

    pub const fn from_twice(twice: i32) -> Self {
        Self(twice)
    }

    /// Exact conversion from a float; fails unless `2x` is an integer.
    pub fn from_f64(x: f64) -> Result<Self> {
        let t = 2.0 * x;
        if t.fract() != 0.0 || !t.is_finite() || t.abs() > i32::MAX as f64 {
            return Err(Error::Domain(format!("{x} is not a multiple of 1/2")));
        }
        Ok(Self(t as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// True for odd multiples of 1/2.
    pub const fn is_half_odd(self) -> bool {
        self.0 % 2 != 0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Orbital channel of a spinor harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// `l = j - 1/2`.
    A,
    /// `l = j + 1/2`.
    B,
}

/// Fixed `(j, m_j)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngularSector {
    j: HalfInteger,
    m_j: HalfInteger,
}

impl AngularSector {
    pub fn new(j: HalfInteger, m_j: HalfInteger) -> Result<Self> {
        if !j.is_half_odd() || j.twice() < 1 {
            return Err(Error::Domain(format!("j = {j} must be a positive odd half-integer")));
        }
        if !m_j.is_half_odd() || m_j.twice().abs() > j.twice() {
            return Err(Error::Domain(format!("m_j = {m_j} not in -j..=j for j = {j}")));
        }
        Ok(Self { j, m_j })
    }

    pub fn j(&self) -> HalfInteger {
        self.j
    }

    pub fn m_j(&self) -> HalfInteger {
        self.m_j
    }

    pub fn l_a(&self) -> u32 {
        ((self.j.twice() - 1) / 2) as u32
    }

    pub fn l_b(&self) -> u32 {
        self.l_a() + 1
    }

    /// The footnote index `m = m_j - 1/2`.
    fn m(&self) -> i32 {
        (self.m_j.twice() - 1) / 2
    }

    /// All `m_j` values of the multiplet, ascending.
    pub fn multiplet(j: HalfInteger) -> Result<Vec<Self>> {
        (-j.twice()..=j.twice())
            .step_by(2)
            .map(|t| Self::new(j, HalfInteger::from_twice(t)))
            .collect()
    }
}

/// Two complex amplitudes (spin up, spin down).
pub type Spinor = [Complex64; 2];

/// Orthonormal `Y_lm(theta, phi)` with the Condon–Shortley phase.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let p = normalized_legendre(l, m.unsigned_abs(), theta.cos(), theta.sin());
    let y = Complex64::from_polar(p, f64::from(m.abs()) * phi);
    if m >= 0 {
        Ok(y)
    } else if m % 2 == 0 {
        Ok(y.conj())
    } else {
        Ok(-y.conj())
    }
}

/// `Y_lm`, or zero when `|m| > l` (the footnote coefficients vanish there).
fn ylm_or_zero(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    spherical_harmonic(l, m, theta, phi).unwrap_or_default()
}

/// sqrt((2l+1)/4pi (l-m)!/(l+m)!) P_l^m(x), Condon–Shortley phase, m >= 0.
///
/// Upward recurrence in `l` with the normalization folded into the coefficients.
fn normalized_legendre(l: u32, m: u32, x: f64, sin_theta: f64) -> f64 {
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for i in 1..=m {
        let fi = f64::from(i);
        pmm *= -((2.0 * fi + 1.0) / (2.0 * fi)).sqrt() * sin_theta;
    }
    if l == m {
        return pmm;
    }
    let fm = f64::from(m);
    let mut prev = pmm;
    let mut cur = (2.0 * fm + 3.0).sqrt() * x * pmm;
    for ll in (m + 2)..=l {
        let fl = f64::from(ll);
        let a = ((4.0 * fl * fl - 1.0) / (fl * fl - fm * fm)).sqrt();
        let fl1 = fl - 1.0;
        let a_prev = ((4.0 * fl1 * fl1 - 1.0) / (fl1 * fl1 - fm * fm)).sqrt();
        let next = a * (x * cur - prev / a_prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Spinor harmonic with `l = l_A`.
pub fn phi_a(s: &AngularSector, theta: f64, phi: f64) -> Spinor {
    let l = s.l_a();
    let m = s.m();
    let fl = f64::from(l);
    let fm = f64::from(m);
    let norm = 1.0 / (2.0 * fl + 1.0).sqrt();
    [
        ylm_or_zero(l, m, theta, phi) * ((fl + fm + 1.0).max(0.0).sqrt() * norm),
        ylm_or_zero(l, m + 1, theta, phi) * ((fl - fm).max(0.0).sqrt() * norm),
    ]
}

/// Spinor harmonic with `l = l_B`.
pub fn phi_b(s: &AngularSector, theta: f64, phi: f64) -> Spinor {
    let l = s.l_a();
    let m = s.m();
    let fl = f64::from(l);
    let fm = f64::from(m);
    let norm = 1.0 / (2.0 * fl + 3.0).sqrt();
    [
        ylm_or_zero(l + 1, m, theta, phi) * (-(fl - fm + 1.0).max(0.0).sqrt() * norm),
        ylm_or_zero(l + 1, m + 1, theta, phi) * ((fl + 2.0 + fm).max(0.0).sqrt() * norm),
    ]
}

/// Spinor harmonic of the given channel.
pub fn phi(s: &AngularSector, channel: Channel, theta: f64, phi: f64) -> Spinor {
    match channel {
        Channel::A => phi_a(s, theta, phi),
        Channel::B => phi_b(s, theta, phi),
    }
}

/// `(sigma . rhat) chi` at direction `(theta, phi)`.
pub fn sigma_dot_rhat(chi: &Spinor, theta: f64, phi: f64) -> Spinor {
    let (st, ct) = theta.sin_cos();
    let e = Complex64::from_polar(st, phi);
    [chi[0] * ct + e.conj() * chi[1], e * chi[0] - chi[1] * ct]
}

/// Tensor-product rule on the sphere: Gauss–Legendre in cos(theta), uniform in phi.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    cos_theta: GaussLegendre,
    n_phi: usize,
}

impl Default for SphereQuadrature {
    /// 64 x 128 points, exact for band limits well above l = 10.
    fn default() -> Self {
        Self::new(64, 128)
    }
}

impl SphereQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        Self { cos_theta: GaussLegendre::new(n_theta), n_phi }
    }

    /// Iterator over `(theta, phi, weight)`.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let dphi = 2.0 * PI / self.n_phi as f64;
        self.cos_theta
            .nodes
            .iter()
            .zip(&self.cos_theta.weights)
            .flat_map(move |(&x, &w)| {
                (0..self.n_phi).map(move |k| (x.acos(), k as f64 * dphi, w * dphi))
            })
    }

    /// `<u|v>` over the sphere.
    pub fn inner<U, V>(&self, u: U, v: V) -> Complex64
    where
        U: Fn(f64, f64) -> Spinor,
        V: Fn(f64, f64) -> Spinor,
    {
        self.points()
            .map(|(t, p, w)| {
                let a = u(t, p);
                let b = v(t, p);
                (a[0].conj() * b[0] + a[1].conj() * b[1]) * w
            })
            .sum()
    }
}

/// Max over the rule's points of `|(sigma.rhat) phi_A + phi_B|` and `|(sigma.rhat) phi_B + phi_A|`.
pub fn sigma_dot_rhat_residual(s: &AngularSector, quad: &SphereQuadrature) -> f64 {
    quad.points()
        .map(|(t, p, _)| {
            let a = phi_a(s, t, p);
            let b = phi_b(s, t, p);
            let sa = sigma_dot_rhat(&a, t, p);
            let sb = sigma_dot_rhat(&b, t, p);
            let r1 = ((sa[0] + b[0]).norm_sqr() + (sa[1] + b[1]).norm_sqr()).sqrt();
            let r2 = ((sb[0] + a[0]).norm_sqr() + (sb[1] + a[1]).norm_sqr()).sqrt();
            r1.max(r2)
        })
        .fold(0.0, f64::max)
}

/// Eigenvalue of `sigma . L` on the channel: `l_A` on A, `-(j + 3/2)` on B.
pub fn sigma_dot_l_eigenvalue(j: HalfInteger, channel: Channel) -> i32 {
    match channel {
        Channel::A => (j.twice() - 1) / 2,
        Channel::B => -(j.twice() + 3) / 2,
    }
}

/// Raising (`up = true`) or lowering coefficient `sqrt(j(j+1) - m_j(m_j +- 1))`;
/// zero when the target leaves the multiplet.
pub fn j_ladder_element(j: HalfInteger, m_j: HalfInteger, up: bool) -> f64 {
    let target = if up { m_j.twice() + 2 } else { m_j.twice() - 2 };
    if target.abs() > j.twice() {
        return 0.0;
    }
    let jj = j.value();
    let m = m_j.value();
    let step = if up { 1.0 } else { -1.0 };
    (jj * (jj + 1.0) - m * (m + step)).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i32) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    fn sector(j2: i32, m2: i32) -> AngularSector {
        AngularSector::new(h(j2), h(m2)).unwrap()
    }

    #[test]
    fn low_order_harmonics_match_closed_forms() {
        let y00 = spherical_harmonic(0, 0, 0.3, 1.1).unwrap();
        assert!((y00.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15 && y00.im == 0.0);
        let t = 0.7;
        let y10 = spherical_harmonic(1, 0, t, 2.0).unwrap();
        assert!((y10.re - (3.0 / (4.0 * PI)).sqrt() * t.cos()).abs() < 1e-15);
        // Y_11 = -sqrt(3/8pi) sin(t) e^{i phi}: the Condon–Shortley sign.
        let y11 = spherical_harmonic(1, 1, t, 0.0).unwrap();
        assert!((y11.re + (3.0 / (8.0 * PI)).sqrt() * t.sin()).abs() < 1e-15);
        let y22 = spherical_harmonic(2, 2, t, 0.4).unwrap();
        let want = Complex64::from_polar((15.0 / (32.0 * PI)).sqrt() * t.sin().powi(2), 0.8);
        assert!((y22 - want).norm() < 1e-15);
    }

    #[test]
    fn out_of_range_m_is_domain_error() {
        assert!(matches!(spherical_harmonic(2, 3, 0.1, 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn y32_is_unit_normalized() {
        let q = SphereQuadrature::default();
        let n: f64 = q
            .points()
            .map(|(t, p, w)| spherical_harmonic(3, 2, t, p).unwrap().norm_sqr() * w)
            .sum();
        assert!((n - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negative_m_conjugation_symmetry() {
        for l in 0..6u32 {
            for m in 1..=l as i32 {
                let a = spherical_harmonic(l, -m, 0.9, 2.3).unwrap();
                let b = spherical_harmonic(l, m, 0.9, 2.3).unwrap().conj();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((a - b * sign).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn ground_sector_spinors() {
        let s = sector(1, 1);
        let a = phi_a(&s, 0.4, 0.2);
        assert!((a[0].re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15 && a[1].norm() == 0.0);
        let b = phi_b(&s, 0.4, 0.2);
        let y10 = spherical_harmonic(1, 0, 0.4, 0.2).unwrap();
        let y11 = spherical_harmonic(1, 1, 0.4, 0.2).unwrap();
        assert!((b[0] + y10 * (1.0f64 / 3.0).sqrt()).norm() < 1e-15);
        assert!((b[1] - y11 * (2.0f64 / 3.0).sqrt()).norm() < 1e-15);
        let q = SphereQuadrature::default();
        let nb = q.inner(|t, p| phi_b(&s, t, p), |t, p| phi_b(&s, t, p));
        assert!((nb.re - 1.0).abs() < 1e-10);
        let ab = q.inner(|t, p| phi_a(&s, t, p), |t, p| phi_b(&s, t, p));
        assert!(ab.norm() < 1e-10);
    }

    #[test]
    fn orthonormal_up_to_nine_halves() {
        let q = SphereQuadrature::default();
        let mut states = Vec::new();
        for j2 in (1..=9).step_by(2) {
            for s in AngularSector::multiplet(h(j2)).unwrap() {
                states.push((s, Channel::A));
                states.push((s, Channel::B));
            }
        }
        // Sample the values once; 60 spinors on 8192 points.
        let pts: Vec<_> = q.points().collect();
        let vals: Vec<Vec<Spinor>> = states
            .iter()
            .map(|(s, c)| pts.iter().map(|&(t, p, _)| phi(s, *c, t, p)).collect())
            .collect();
        for i in 0..states.len() {
            for k in i..states.len() {
                let ip: Complex64 = pts
                    .iter()
                    .enumerate()
                    .map(|(n, &(_, _, w))| {
                        let (a, b) = (vals[i][n], vals[k][n]);
                        (a[0].conj() * b[0] + a[1].conj() * b[1]) * w
                    })
                    .sum();
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-10, "{:?} vs {:?}: {ip}", states[i], states[k]);
            }
        }
    }

    #[test]
    fn sigma_dot_rhat_swaps_channels() {
        let q = SphereQuadrature::default();
        for s in AngularSector::multiplet(h(1)).unwrap().iter().chain(&AngularSector::multiplet(h(3)).unwrap()) {
            assert!(sigma_dot_rhat_residual(s, &q) < 1e-12, "{s:?}");
        }
        assert!(sigma_dot_rhat_residual(&sector(5, 5), &q) < 1e-12);
    }

    #[test]
    fn sigma_dot_rhat_residual_detects_wrong_phase() {
        // Dropping the Condon–Shortley sign on odd m breaks the identity.
        let s = sector(1, 1);
        let (t, p) = (0.8, 0.3);
        let a = phi_a(&s, t, p);
        let mut b = phi_b(&s, t, p);
        b[1] = -b[1];
        let sa = sigma_dot_rhat(&a, t, p);
        assert!((sa[0] + b[0]).norm() + (sa[1] + b[1]).norm() > 0.1);
    }

    #[test]
    fn sigma_dot_rhat_is_an_involution() {
        let s = sector(5, -3);
        for (t, p, _) in SphereQuadrature::new(8, 16).points() {
            let b = phi_b(&s, t, p);
            let bb = sigma_dot_rhat(&sigma_dot_rhat(&b, t, p), t, p);
            assert!((bb[0] - b[0]).norm() + (bb[1] - b[1]).norm() < 1e-12);
        }
    }

    /// `sigma . L` by finite differences: L_z = -i d/dphi,
    /// L_+- = e^{+-i phi}(+-d/dtheta + i cot(theta) d/dphi).
    fn sigma_dot_l_fd(f: impl Fn(f64, f64) -> Spinor, t: f64, p: f64) -> Spinor {
        let e = 1e-5;
        let i = Complex64::i();
        let dt = |c: usize| (f(t + e, p)[c] - f(t - e, p)[c]) / (2.0 * e);
        let dp = |c: usize| (f(t, p + e)[c] - f(t, p - e)[c]) / (2.0 * e);
        let cot = t.cos() / t.sin();
        let lz = |c: usize| -i * dp(c);
        let lp = |c: usize| Complex64::from_polar(1.0, p) * (dt(c) + i * cot * dp(c));
        let lm = |c: usize| Complex64::from_polar(1.0, -p) * (-dt(c) + i * cot * dp(c));
        [lz(0) + lm(1), lp(0) - lz(1)]
    }

    #[test]
    fn sigma_dot_l_eigenvalues_by_finite_differences() {
        for (j2, m2) in [(1, 1), (1, -1), (3, 1), (5, 3), (5, -5)] {
            let s = sector(j2, m2);
            for c in [Channel::A, Channel::B] {
                let lam = f64::from(sigma_dot_l_eigenvalue(h(j2), c));
                for (t, p) in [(0.7, 0.4), (1.9, 2.5), (1.2, 5.0)] {
                    let got = sigma_dot_l_fd(|t, p| phi(&s, c, t, p), t, p);
                    let v = phi(&s, c, t, p);
                    let err = (got[0] - v[0] * lam).norm() + (got[1] - v[1] * lam).norm();
                    assert!(err < 1e-7, "j={j2}/2 m={m2}/2 {c:?}: {err}");
                }
            }
        }
        assert_eq!(sigma_dot_l_eigenvalue(h(1), Channel::A), 0);
        assert_eq!(sigma_dot_l_eigenvalue(h(1), Channel::B), -2);
        assert_eq!(sigma_dot_l_eigenvalue(h(5), Channel::A), 2);
    }

    #[test]
    fn raising_operator_by_finite_differences() {
        // J_+ = L_+ + S_+ maps phi_{m_j} to ladder * phi_{m_j+1}.
        let e = 1e-5;
        let i = Complex64::i();
        for (j2, m2) in [(1, -1), (3, -1), (5, 1)] {
            let s = sector(j2, m2);
            let up = sector(j2, m2 + 2);
            let c = j_ladder_element(h(j2), h(m2), true);
            for ch in [Channel::A, Channel::B] {
                let (t, p) = (1.1, 0.6);
                let f = |t: f64, p: f64| phi(&s, ch, t, p);
                let lp = |k: usize| {
                    let dt = (f(t + e, p)[k] - f(t - e, p)[k]) / (2.0 * e);
                    let dp = (f(t, p + e)[k] - f(t, p - e)[k]) / (2.0 * e);
                    Complex64::from_polar(1.0, p) * (dt + i * (t.cos() / t.sin()) * dp)
                };
                let v = f(t, p);
                let jp = [lp(0) + v[1], lp(1)];
                let w = phi(&up, ch, t, p);
                let err = (jp[0] - w[0] * c).norm() + (jp[1] - w[1] * c).norm();
                assert!(err < 1e-7, "{j2} {m2} {ch:?}: {err}");
            }
        }
    }

    #[test]
    fn ladder_elements() {
        assert_eq!(j_ladder_element(h(1), h(-1), true), 1.0);
        assert_eq!(j_ladder_element(h(1), h(1), true), 0.0);
        assert!((j_ladder_element(h(3), h(1), true) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(j_ladder_element(h(3), h(-3), false), 0.0);
    }

    #[test]
    fn sector_validation() {
        assert!(AngularSector::new(h(2), h(0)).is_err());
        assert!(AngularSector::new(h(1), h(3)).is_err());
        let s = sector(5, -1);
        assert_eq!((s.l_a(), s.l_b()), (2, 3));
        assert_eq!(HalfInteger::from_f64(2.5).unwrap(), h(5));
        assert!(HalfInteger::from_f64(0.3).is_err());
        assert_eq!(h(5).to_string(), "5/2");
    }
}
