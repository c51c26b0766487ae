//! Additive and multiplicative characters of F_q and Gauss sums.
//!
//! chi_1(x) = exp(2 pi i Tr(x) / p) is read from a table of the p-th roots of
//! unity, psi_k(g^l) = exp(2 pi i k l / (q-1)) from a table of the (q-1)-th
//! roots. psi_k(0) = 0 for every k, the trivial character included.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::scalar::Scalar;

/// Quadratic character: 0 at 0, +1 on squares, -1 on non-squares.
pub fn eta(ctx: &FieldCtx, x: Fe) -> Result<i32> {
    if ctx.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    Ok(match ctx.log(x) {
        None => 0,
        Some(l) if l % 2 == 0 => 1,
        Some(_) => -1,
    })
}

fn unit_roots<T: Scalar>(m: u64) -> Vec<Complex<T>> {
    (0..m)
        .map(|t| {
            let (s, c) = (std::f64::consts::TAU * t as f64 / m as f64).sin_cos();
            Complex::new(T::from_f64(c), T::from_f64(s))
        })
        .collect()
}

/// Character tables of one field.
#[derive(Clone, Debug)]
pub struct Characters<'f, T: Scalar> {
    field: &'f FieldCtx,
    additive: Vec<Complex<T>>,
    multiplicative: Vec<Complex<T>>,
}

impl<'f, T: Scalar> Characters<'f, T> {
    pub fn new(field: &'f FieldCtx) -> Self {
        Self {
            field,
            additive: unit_roots(field.p() as u64),
            multiplicative: unit_roots(field.q() as u64 - 1),
        }
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    /// exp(2 pi i t / p) for t in F_p.
    pub fn root_p(&self, t: u32) -> Complex<T> {
        self.additive[(t % self.field.p()) as usize]
    }

    pub fn chi1(&self, x: Fe) -> Complex<T> {
        self.additive[self.field.trace(x) as usize]
    }

    /// psi_k(x); k is taken modulo q - 1.
    pub fn psi(&self, k: u64, x: Fe) -> Complex<T> {
        match self.field.log(x) {
            None => Complex::new(T::zero(), T::zero()),
            Some(l) => {
                let order = self.field.q() as u64 - 1;
                self.multiplicative[((k % order) * l as u64 % order) as usize]
            }
        }
    }

    pub fn eta(&self, x: Fe) -> Result<i32> {
        eta(self.field, x)
    }

    /// G(psi_k, chi_1) = sum over z != 0 of psi_k(z) chi_1(z).
    pub fn gauss_sum(&self, k: u64) -> Complex<T> {
        self.field
            .nonzero()
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| {
                acc + self.psi(k, z) * self.chi1(z)
            })
    }

    /// G(conj psi_j, chi_1) for every j in [0, q-1).
    pub fn conjugate_gauss_sums(&self) -> Vec<Complex<T>> {
        let order = self.field.q() as u64 - 1;
        (0..order).map(|j| self.gauss_sum((order - j) % order)).collect()
    }
}
