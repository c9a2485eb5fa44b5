//! Shared helpers for the acceptance suite: a seeded RNG, an independent
//! wavefunction-matching solver for barrier amplitudes, and random
//! two-qubit state/unitary generators.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use spinmom::fermion::{momentum_inside, FermionBarrierParams, Spin};
use spinmom::qmat::{kron, ComplexMatrix, SpinDensity};

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Transmission and reflection amplitudes computed the long way: match
/// value and derivative of exp(ipx) + r exp(-ipx) | A exp(iqx) + B
/// exp(-iqx) | t exp(ipx) at both interfaces and solve the resulting 4x4
/// complex system by Gaussian elimination with partial pivoting.
pub fn matching_amplitudes(
    p: f64,
    s: Spin,
    prm: &FermionBarrierParams,
) -> (Complex64, Complex64) {
    let q = momentum_inside(p, s, prm);
    let l = prm.length;
    let i = Complex64::i();
    let pc = c(p, 0.0);
    let ep = (i * p * l).exp();
    let eq = (i * q * l).exp();
    let emq = (-i * q * l).exp();
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    // Unknowns (r, A, B, t); rows: value at 0, derivative at 0, value at
    // L, derivative at L.
    let mut a = [
        [one, -one, -one, z],
        [i * pc, i * q, -i * q, z],
        [z, eq, emq, -ep],
        [z, i * q * eq, -i * q * emq, -i * pc * ep],
    ];
    let mut b = [-one, i * pc, z, z];
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&r1, &r2| a[r1][col].norm().partial_cmp(&a[r2][col].norm()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                let sub = f * a[col][k];
                a[row][k] -= sub;
            }
            let sub = f * b[col];
            b[row] -= sub;
        }
    }
    let mut x = [z; 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for k in (row + 1)..4 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    (x[3], x[0])
}

/// Random mixed two-qubit state A A^dagger / tr, exactly Hermitized so the
/// validating constructor accepts it.
pub fn random_density(rng: &mut ChaCha12Rng) -> SpinDensity {
    let mut a = ComplexMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            a[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let mut rho = a.mul(&a.adjoint());
    hermitize(&mut rho);
    let tr = rho.trace().re;
    let rho = rho.scale(c(1.0 / tr, 0.0));
    SpinDensity::new(rho).expect("A A^dagger / tr is a valid density")
}

/// Product of two independent single-qubit unitaries.
pub fn random_local_unitary(rng: &mut ChaCha12Rng) -> ComplexMatrix {
    let mut u2 = || {
        let chi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let psi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let gamma: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let g = c(0.0, gamma).exp();
        ComplexMatrix::from_rows(&[
            vec![
                g * c(0.0, phi).exp() * chi.cos(),
                g * c(0.0, psi).exp() * chi.sin(),
            ],
            vec![
                -g * c(0.0, -psi).exp() * chi.sin(),
                g * c(0.0, -phi).exp() * chi.cos(),
            ],
        ])
    };
    let a = u2();
    let b = u2();
    kron(&a, &b)
}

/// Conjugate rho by u and rebuild through the validating constructor,
/// cleaning the last-bit asymmetry of the triple product.
pub fn conjugated_density(rho: &SpinDensity, u: &ComplexMatrix) -> SpinDensity {
    let mut moved = u.mul(rho.matrix()).mul(&u.adjoint());
    hermitize(&mut moved);
    SpinDensity::new(moved).expect("unitary conjugation preserves density-ness")
}

fn hermitize(m: &mut ComplexMatrix) {
    for i in 0..4 {
        m[(i, i)] = c(m[(i, i)].re, 0.0);
        for j in (i + 1)..4 {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
}
