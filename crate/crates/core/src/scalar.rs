//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating point type the linear algebra is generic over (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the chosen real type.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

/// Sine of the principal angle between two vectors; 0 when collinear up to a phase.
pub fn collinearity_error<T: Real>(x: &[Cplx<T>], y: &[Cplx<T>]) -> T {
    assert_eq!(x.len(), y.len(), "vector length mismatch");
    let nx = vec_norm(x);
    let ny = vec_norm(y);
    if nx == T::zero() || ny == T::zero() {
        return if nx == ny { T::zero() } else { T::one() };
    }
    // Norm of the rejection of y from x, which keeps full relative accuracy
    // for nearly collinear vectors.
    let proj = vec_dot(x, y) / (nx * nx);
    let rej: T = x.iter().zip(y).map(|(a, b)| (b - a * proj).norm_sqr()).sum();
    (rej.sqrt() / ny).min(T::one())
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Real>(x: &[Cplx<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Standard inner product `Σ conj(x_i) y_i`.
pub fn vec_dot<T: Real>(x: &[Cplx<T>], y: &[Cplx<T>]) -> Cplx<T> {
    assert_eq!(x.len(), y.len(), "vector length mismatch");
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}
