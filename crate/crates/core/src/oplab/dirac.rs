//! Explicit 4x4 Dirac matrices, the nonabelian reduction identity and the
//! field strength of `A = i W(r) Sigma x r`.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::builders::GaugeProfile;

/// 4x4 complex matrix in the Dirac representation.
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn pauli(k: usize) -> [[Complex64; 2]; 2] {
    match k {
        0 => [[ZERO, ONE], [ONE, ZERO]],
        1 => [[ZERO, -I], [I, ZERO]],
        _ => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

fn blocks(tl: [[Complex64; 2]; 2], tr: [[Complex64; 2]; 2], bl: [[Complex64; 2]; 2], br: [[Complex64; 2]; 2]) -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = tl[i][j];
            m[i][j + 2] = tr[i][j];
            m[i + 2][j] = bl[i][j];
            m[i + 2][j + 2] = br[i][j];
        }
    }
    m
}

const Z2: [[Complex64; 2]; 2] = [[ZERO; 2]; 2];
const I2: [[Complex64; 2]; 2] = [[ONE, ZERO], [ZERO, ONE]];

/// `alpha_k` for `k = 0, 1, 2`.
pub fn alpha(k: usize) -> Mat4 {
    blocks(Z2, pauli(k), pauli(k), Z2)
}

/// `Sigma_k = diag(sigma_k, sigma_k)`.
pub fn sigma(k: usize) -> Mat4 {
    blocks(pauli(k), Z2, Z2, pauli(k))
}

pub fn beta() -> Mat4 {
    blocks(I2, Z2, Z2, [[-ONE, ZERO], [ZERO, -ONE]])
}

pub fn gamma5() -> Mat4 {
    blocks(Z2, I2, I2, Z2)
}

pub fn mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

pub fn add(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut m = *a;
    m.iter_mut().flatten().zip(b.iter().flatten()).for_each(|(x, y)| *x += y);
    m
}

pub fn scale(a: &Mat4, s: Complex64) -> Mat4 {
    let mut m = *a;
    m.iter_mut().flatten().for_each(|x| *x *= s);
    m
}

pub fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `sum_k c_k M_k`.
pub fn dot(c: [f64; 3], m: impl Fn(usize) -> Mat4) -> Mat4 {
    (0..3).fold([[ZERO; 4]; 4], |acc, k| add(&acc, &scale(&m(k), Complex64::new(c[k], 0.0))))
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `(Sigma x v)_k = eps_{kab} Sigma_a v_b`.
pub fn sigma_cross(v: [f64; 3], k: usize) -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    for a in 0..3 {
        for b in 0..3 {
            let e = levi_civita(k, a, b) * v[b];
            if e != 0.0 {
                m = add(&m, &scale(&sigma(a), Complex64::new(e, 0.0)));
            }
        }
    }
    m
}

/// `max |alpha.(i Sigma x n) + 2 alpha.n|` for a unit vector `n`: the
/// reduction of `-e alpha.A` to `2 e W r alpha.rhat`.
pub fn reduction_identity_residual(n: [f64; 3]) -> f64 {
    let lhs = (0..3).fold([[ZERO; 4]; 4], |acc, k| add(&acc, &mul(&alpha(k), &scale(&sigma_cross(n, k), I))));
    let rhs = scale(&dot(n, alpha), Complex64::new(-2.0, 0.0));
    max_abs_diff(&lhs, &rhs)
}

fn norm3(r: [f64; 3]) -> Result<f64> {
    let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::Domain("field strength needs r != 0".into()));
    }
    Ok(n)
}

/// Closed-form field strength `B_i = i(2W - r W') Sigma_i + i(2W^2 + W'/r)(Sigma.r) r_i`.
///
/// This expression differs from [`field_strength_from_potential`] for every
/// nonzero `W`; both are kept so that the two routes can be compared.
pub fn field_strength(profile: &GaugeProfile, r: [f64; 3]) -> Result<[Mat4; 3]> {
    let rn = norm3(r)?;
    let (w, dw) = (profile.value(rn), profile.derivative(rn));
    let c1 = I * (2.0 * w - rn * dw);
    let c2 = I * (2.0 * w * w + dw / rn);
    let sr = dot(r, sigma);
    Ok([0, 1, 2].map(|i| add(&scale(&sigma(i), c1), &scale(&sr, c2 * r[i]))))
}

/// `B_i = (curl A)_i + (A x A)_i` evaluated directly from `A_k = i W eps_{kab} Sigma_a r_b`
/// and its exact derivative, without any closed-form simplification.
pub fn field_strength_from_potential(profile: &GaugeProfile, r: [f64; 3]) -> Result<[Mat4; 3]> {
    let rn = norm3(r)?;
    let (w, dw) = (profile.value(rn), profile.derivative(rn));
    let pot: [Mat4; 3] = [0, 1, 2].map(|k| scale(&sigma_cross(r, k), I * w));
    // d_j A_k = i W' (r_j / r) (Sigma x r)_k + i W eps_{kaj} Sigma_a.
    let grad = |j: usize, k: usize| -> Mat4 {
        let radial = scale(&sigma_cross(r, k), I * dw * r[j] / rn);
        let direct = (0..3).fold([[ZERO; 4]; 4], |acc, a| add(&acc, &scale(&sigma(a), I * w * levi_civita(k, a, j))));
        add(&radial, &direct)
    };
    Ok([0, 1, 2].map(|i| {
        let mut b = [[ZERO; 4]; 4];
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0.0 {
                    let term = add(&grad(j, k), &scale(&mul(&pot[j], &pot[k]), ONE));
                    b = add(&b, &scale(&term, Complex64::new(e, 0.0)));
                }
            }
        }
        b
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn points() -> Vec<[f64; 3]> {
        let mut s = 12345u64;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        (0..20).map(|_| [next(), next(), next()]).collect()
    }

    fn unit(v: [f64; 3]) -> [f64; 3] {
        let n = norm3(v).unwrap();
        v.map(|x| x / n)
    }

    #[test]
    fn clifford_relations() {
        let id = mul(&beta(), &beta());
        for i in 0..3 {
            for j in 0..3 {
                let anti = add(&mul(&alpha(i), &alpha(j)), &mul(&alpha(j), &alpha(i)));
                let want = if i == j { scale(&id, Complex64::new(2.0, 0.0)) } else { [[ZERO; 4]; 4] };
                assert!(max_abs_diff(&anti, &want) < 1e-15);
            }
            // alpha = gamma5 Sigma.
            assert!(max_abs_diff(&alpha(i), &mul(&gamma5(), &sigma(i))) < 1e-15);
        }
    }

    #[test]
    fn reduction_identity_at_random_directions() {
        for p in points() {
            assert!(reduction_identity_residual(unit(p)) < 1e-14);
        }
        // Sigma.(Sigma x r) = 2i Sigma.r.
        for p in points() {
            let lhs = (0..3).fold([[ZERO; 4]; 4], |acc, k| add(&acc, &mul(&sigma(k), &sigma_cross(p, k))));
            assert!(max_abs_diff(&lhs, &scale(&dot(p, sigma), 2.0 * I)) < 1e-14);
        }
    }

    #[test]
    fn constant_profile_matches_plug_in() {
        let c = 0.7;
        let prof = GaugeProfile::constant(c);
        for p in points() {
            let b = field_strength(&prof, p).unwrap();
            let sr = dot(p, sigma);
            for i in 0..3 {
                let want = add(&scale(&sigma(i), 2.0 * I * c), &scale(&sr, 2.0 * I * c * c * p[i]));
                assert!(max_abs_diff(&b[i], &want) < 1e-14);
            }
        }
    }

    #[test]
    fn potential_route_matches_independent_closed_form() {
        // Hand reduction of curl A + A x A: i(2W + rW') Sigma - i(2W^2 + W'/r)(Sigma.r) r.
        for prof in [GaugeProfile::inverse_square(), GaugeProfile::constant(0.3), GaugeProfile::new("r", |r| r, |_| 1.0)] {
            for p in points() {
                let rn = norm3(p).unwrap();
                let (w, dw) = (prof.value(rn), prof.derivative(rn));
                let b = field_strength_from_potential(&prof, p).unwrap();
                let sr = dot(p, sigma);
                for i in 0..3 {
                    let want = add(&scale(&sigma(i), I * (2.0 * w + rn * dw)), &scale(&sr, -I * (2.0 * w * w + dw / rn) * p[i]));
                    let tol = 1e-12 * (1.0 + w.abs() + w * w).max(1.0 / rn.powi(4));
                    assert!(max_abs_diff(&b[i], &want) < tol);
                }
            }
        }
    }

    #[test]
    fn origin_is_rejected() {
        assert!(field_strength(&GaugeProfile::inverse_square(), [0.0; 3]).is_err());
    }
}
