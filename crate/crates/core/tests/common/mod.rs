//! Reference computations that share no code with the library's numerics.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotlab::linalg::ComplexMatrix;

/// Characteristic polynomial coefficients `c[0..=n]` of `a` (monic,
/// `c[n] = 1`) by the Faddeev–LeVerrier recursion.
pub fn charpoly(a: &[Vec<C>]) -> Vec<C> {
    let n = a.len();
    let mut c = vec![C::new(0.0, 0.0); n + 1];
    c[n] = C::new(1.0, 0.0);
    let mut m = vec![vec![C::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![C::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = C::new(0.0, 0.0);
                for l in 0..n {
                    s += a[i][l] * m[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += c[n - k + 1];
        }
        m = next;
        let mut tr = C::new(0.0, 0.0);
        for i in 0..n {
            for l in 0..n {
                tr += a[i][l] * m[l][i];
            }
        }
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[C], x: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for coef in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + coef;
    }
    (p, dp)
}

/// All roots of the monic polynomial `c` by Durand–Kerner iteration,
/// each polished with Newton steps.
pub fn poly_roots(c: &[C]) -> Vec<C> {
    let n = c.len() - 1;
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]).0 / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..5 {
            let (p, dp) = horner(c, *r);
            if dp.norm() < 1e-300 {
                break;
            }
            *r -= p / dp;
        }
    }
    z
}

/// Eigenvalues of a Hermitian matrix as sorted real parts of the
/// characteristic roots.
pub fn charpoly_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let a: Vec<Vec<C>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    let mut ev: Vec<f64> = poly_roots(&charpoly(&a)).iter().map(|r| r.re).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Random Hermitian matrix with entries in the unit box.
pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut data = vec![C::new(0.0, 0.0); n * n];
    for i in 0..n {
        data[i * n + i] = C::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            data[i * n + j] = z;
            data[j * n + i] = z.conj();
        }
    }
    ComplexMatrix::new(n, n, data).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random point of the non-negative unit octant.
pub fn random_octant_point(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Brute-force maximum of `½ + ½(α + β)γ` over `α, β` on a grid of the
/// given step with `γ = √(1 − α² − β²)`. Returns `(value, α, β)`.
pub fn grid_max_closed_form(step: f64) -> (f64, f64, f64) {
    let n = (1.0 / step).round() as usize;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=n {
        let a = i as f64 * step;
        for j in 0..=n {
            let b = j as f64 * step;
            let rest = 1.0 - a * a - b * b;
            if rest < 0.0 {
                break;
            }
            let v = 0.5 + 0.5 * (a + b) * rest.sqrt();
            if v > best.0 {
                best = (v, a, b);
            }
        }
    }
    best
}

/// Equal-prior Helstrom probability for two pure states:
/// `½(1 + √(1 − |⟨ψ|φ⟩|²))`.
pub fn pure_helstrom(psi: &[C], phi: &[C]) -> f64 {
    let overlap: C = psi.iter().zip(phi).map(|(a, b)| a.conj() * b).sum();
    0.5 * (1.0 + (1.0 - overlap.norm_sqr()).max(0.0).sqrt())
}

pub fn cos2_pi_8() -> f64 {
    (2.0 + 2f64.sqrt()) / 4.0
}
