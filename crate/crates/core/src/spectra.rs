//! Closed-form Dirac–Coulomb and monopolar spectra, degeneracies and level depressions.

use std::fmt;

use crate::angular::HalfInteger;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Sign of the Dirac quantum number `kappa`.
///
/// `kappa = -(j + 1/2)` when the upper component carries `l = j - 1/2` (channel A);
/// the operator `K = beta(Sigma.L + 1)` then has eigenvalue `-kappa = +(j + 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KappaSign {
    Negative,
    Positive,
}

impl KappaSign {
    pub fn signum(self) -> i32 {
        match self {
            Self::Negative => -1,
            Self::Positive => 1,
        }
    }

    pub fn from_signum(s: i32) -> Result<Self> {
        match s {
            -1 => Ok(Self::Negative),
            1 => Ok(Self::Positive),
            _ => Err(Error::Domain(format!("kappa sign must be +1 or -1, got {s}"))),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Negative => Self::Positive,
            Self::Positive => Self::Negative,
        }
    }
}

/// Bound Dirac–Coulomb state labels `(n, j, sign kappa)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuantumNumbers {
    n: u32,
    j: HalfInteger,
    kappa_sign: KappaSign,
}

impl QuantumNumbers {
    pub fn new(n: u32, j: HalfInteger, kappa_sign: KappaSign) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("principal quantum number must be >= 1".into()));
        }
        if !j.is_half_odd() || j.twice() < 1 {
            return Err(Error::Domain(format!("j = {j} must be a positive odd half-integer")));
        }
        let k = (j.twice() + 1) / 2;
        if k as u32 > n {
            return Err(Error::Domain(format!("j + 1/2 = {k} exceeds n = {n}")));
        }
        if k as u32 == n && kappa_sign == KappaSign::Positive {
            return Err(Error::Domain(format!("n = j + 1/2 = {n} admits only kappa < 0")));
        }
        Ok(Self { n, j, kappa_sign })
    }

    /// Every valid state with `n <= n_max`, ordered by `(n, j, kappa sign)`.
    pub fn enumerate(n_max: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=n_max {
            for k in 1..=n as i32 {
                for s in [KappaSign::Negative, KappaSign::Positive] {
                    if let Ok(q) = Self::new(n, HalfInteger::from_twice(2 * k - 1), s) {
                        out.push(q);
                    }
                }
            }
        }
        out
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn j(&self) -> HalfInteger {
        self.j
    }

    pub fn kappa_sign(&self) -> KappaSign {
        self.kappa_sign
    }

    /// `|kappa| = j + 1/2`.
    pub fn kappa_abs(&self) -> u32 {
        ((self.j.twice() + 1) / 2) as u32
    }

    /// Signed Dirac `kappa`.
    pub fn kappa(&self) -> i32 {
        self.kappa_sign.signum() * self.kappa_abs() as i32
    }

    /// Eigenvalue of `K = beta(Sigma.L + 1)`, equal to `-kappa`.
    pub fn k_eigenvalue(&self) -> i32 {
        -self.kappa()
    }

    /// Radial quantum number `n - |kappa|`.
    pub fn n_radial(&self) -> u32 {
        self.n - self.kappa_abs()
    }

    /// Orbital angular momentum of the upper component.
    pub fn l(&self) -> u32 {
        match self.kappa_sign {
            KappaSign::Negative => self.kappa_abs() - 1,
            KappaSign::Positive => self.kappa_abs(),
        }
    }

    /// Spectroscopic label such as `2P1/2`.
    pub fn label(&self) -> String {
        format!("{}{}{}/2", self.n, orbital_letter(self.l()), self.j.twice())
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Spectroscopic letter for orbital angular momentum `l`.
pub fn orbital_letter(l: u32) -> char {
    const LETTERS: &[u8] = b"SPDFGHIKLMNOQRTUVWXYZ";
    LETTERS.get(l as usize).map_or('?', |&b| b as char)
}

/// Monopolar labels: radial quantum number, `j'` and the half-integer charge `q = eg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonopoleQuantumNumbers {
    n_radial: u32,
    j_prime: HalfInteger,
    q: HalfInteger,
}

impl MonopoleQuantumNumbers {
    pub fn new(n_radial: u32, j_prime: HalfInteger, q: HalfInteger) -> Result<Self> {
        if j_prime.twice() < 0 {
            return Err(Error::Domain(format!("j' = {j_prime} must be nonnegative")));
        }
        if j_prime.twice() + 1 <= q.twice().abs() {
            return Err(Error::Domain(format!(
                "j' + 1/2 must exceed |q| (j' = {j_prime}, q = {q}); the kappa' = 0 sector is not supported"
            )));
        }
        Ok(Self { n_radial, j_prime, q })
    }

    pub fn n_radial(&self) -> u32 {
        self.n_radial
    }

    pub fn j_prime(&self) -> HalfInteger {
        self.j_prime
    }

    pub fn q(&self) -> HalfInteger {
        self.q
    }
}

fn kappa_nu(kappa: f64, a: f64) -> Result<f64> {
    if a >= kappa {
        return Err(Error::SupercriticalCoupling { a, kappa });
    }
    Ok(((kappa - a) * (kappa + a)).sqrt())
}

/// `x = a^2 / d^2` for the effective principal number `d`.
fn energy_from_denominator(a: f64, d: f64) -> f64 {
    (1.0 + (a / d).powi(2)).powf(-0.5)
}

/// Effective principal number `n - |kappa| + sqrt(kappa^2 - a^2)`.
fn sommerfeld_denominator(qn: &QuantumNumbers, a: f64) -> Result<f64> {
    Ok(f64::from(qn.n_radial()) + kappa_nu(f64::from(qn.kappa_abs()), a)?)
}

/// `E/M = (1 + a^2/(n - |kappa| + sqrt(kappa^2 - a^2))^2)^(-1/2)`.
pub fn sommerfeld_energy(qn: &QuantumNumbers, c: &PhysicalConstants) -> Result<f64> {
    Ok(energy_from_denominator(c.a(), sommerfeld_denominator(qn, c.a())?))
}

/// `E/M - 1` without cancellation.
pub fn sommerfeld_binding(qn: &QuantumNumbers, c: &PhysicalConstants) -> Result<f64> {
    let x = (c.a() / sommerfeld_denominator(qn, c.a())?).powi(2);
    let s = (1.0 + x).sqrt();
    Ok(-x / (s * (s + 1.0)))
}

/// Nonrelativistic binding energy `-a^2 / (2 n^2)`.
pub fn bohr_energy(n: u32, c: &PhysicalConstants) -> f64 {
    -c.a() * c.a() / (2.0 * f64::from(n).powi(2))
}

/// `2(2j+1)` states share `(n, j)` unless `n = j + 1/2`, where only `2j+1` do.
pub fn degeneracy(n: u32, j: HalfInteger) -> Result<u32> {
    if !j.is_half_odd() || j.twice() < 1 {
        return Err(Error::Domain(format!("j = {j} must be a positive odd half-integer")));
    }
    let k = ((j.twice() + 1) / 2) as u32;
    let mult = j.twice() as u32 + 1;
    match n.cmp(&k) {
        std::cmp::Ordering::Less => Err(Error::Domain(format!("j + 1/2 = {k} exceeds n = {n}"))),
        std::cmp::Ordering::Equal => Ok(mult),
        std::cmp::Ordering::Greater => Ok(2 * mult),
    }
}

/// `kappa' = sqrt((j' + 1/2 + q)(j' + 1/2 - q))`.
pub fn monopolar_kappa(j_prime: HalfInteger, q: HalfInteger) -> Result<f64> {
    if j_prime.twice() + 1 <= q.twice().abs() {
        return Err(Error::Domain(format!("j' + 1/2 must exceed |q| (j' = {j_prime}, q = {q})")));
    }
    let k = j_prime.value() + 0.5;
    let q = q.value();
    Ok(((k + q) * (k - q)).sqrt())
}

fn monopolar_denominator(m: &MonopoleQuantumNumbers, a: f64) -> Result<f64> {
    let kp = monopolar_kappa(m.j_prime, m.q)?;
    Ok(f64::from(m.n_radial) + kappa_nu(kp, a)?)
}

/// `E'/M = (1 + a^2/(n_radial + sqrt(kappa'^2 - a^2))^2)^(-1/2)`.
pub fn monopolar_energy(m: &MonopoleQuantumNumbers, c: &PhysicalConstants) -> Result<f64> {
    Ok(energy_from_denominator(c.a(), monopolar_denominator(m, c.a())?))
}

/// Downward shift in Hz of the level `(n, j)` once a monopole of charge `q` is present,
/// pairing it with the monopolar level of equal `j' = j` and equal radial number.
pub fn depression(n: u32, j: HalfInteger, q: HalfInteger, c: &PhysicalConstants) -> Result<f64> {
    let qn = QuantumNumbers::new(n, j, KappaSign::Negative)?;
    MonopoleQuantumNumbers::new(qn.n_radial(), j, q)?;
    let a = c.a();
    let kappa = f64::from(qn.kappa_abs());
    let nu = kappa_nu(kappa, a)?;
    let nu_p = kappa_nu(monopolar_kappa(j, q)?, a)?;
    let d = f64::from(qn.n_radial()) + nu;
    let d_p = f64::from(qn.n_radial()) + nu_p;
    // d - d' = nu - nu' = q^2 / (nu + nu') exactly, so nothing below cancels.
    let qq = q.value() * q.value();
    let dd = qq / (nu + nu_p);
    let x = (a / d).powi(2);
    let x_p = (a / d_p).powi(2);
    let dx = a * a * dd * (d + d_p) / (d * d * d_p * d_p);
    let e = (1.0 + x).powf(-0.5);
    let e_p = (1.0 + x_p).powf(-0.5);
    let de2 = dx / ((1.0 + x) * (1.0 + x_p));
    Ok(c.to_frequency(de2 / (e + e_p)))
}

/// Energy difference in units of M to Hz.
pub fn to_frequency(delta_e: f64, c: &PhysicalConstants) -> f64 {
    c.to_frequency(delta_e)
}
