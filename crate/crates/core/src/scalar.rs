//! Real scalar abstraction for the character and Weil-sum machinery.
//!
//! Field arithmetic is exact; only the complex accumulators are generic. `f64`
//! is the working precision everywhere tolerances are pinned. `f32` is
//! supported for cheap exploratory sums.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst};

pub trait Scalar: Float + FloatConst + Debug + Display + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self;

    fn to_f64(self) -> f64;

    fn from_u64(x: u64) -> Self {
        Self::from_f64(x as f64)
    }

    fn from_i64(x: i64) -> Self {
        Self::from_f64(x as f64)
    }
}

impl Scalar for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }
}

/// `i^k` as an exact unit complex.
pub fn i_pow<T: Scalar>(k: u64) -> Complex<T> {
    let (o, z) = (T::one(), T::zero());
    match k % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -o),
    }
}

/// `(-1)^k` as a real scalar.
pub fn sign<T: Scalar>(k: u64) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

pub fn real<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
