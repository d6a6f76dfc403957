//! Scalar abstraction over the real and complex fields.
//!
//! Every numerical routine in this crate is written once against [`Scalar`]
//! and instantiated for `f32`, `f64`, `Complex<f32>` and `Complex<f64>`.
//! The real part type of a scalar is always a [`RealScalar`].

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// The number field a matrix lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Number of real coordinates per scalar entry (1 or 2). This is the
    /// `β` that multiplies `m·n·τ²` in the SURE constant.
    pub fn beta(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Entry type of a [`Matrix`](crate::Matrix).
pub trait Scalar:
    'static
    + Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + Num
    + NumAssign
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
{
    type Real: RealScalar;

    const FIELD: Field;

    fn from_real(re: Self::Real) -> Self;

    /// Builds a scalar from its real and imaginary parts. Returns `None`
    /// for the real field when `im` is nonzero.
    fn from_parts(re: Self::Real, im: Self::Real) -> Option<Self>;

    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn conj(self) -> Self;

    /// Squared modulus.
    fn abs_sqr(self) -> Self::Real;

    /// Modulus, computed without intermediate overflow.
    fn modulus(self) -> Self::Real;

    #[inline]
    fn scale(self, r: Self::Real) -> Self {
        self * Self::from_real(r)
    }

    fn is_finite_value(self) -> bool;

    /// Unit directions spanning the field as a real vector space:
    /// `[1]` for reals, `[1, i]` for complex numbers.
    fn unit_directions() -> &'static [Self];

    /// Draws an entry whose every real coordinate is `N(0, std²)`.
    fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R, std: Self::Real) -> Self;
}

/// Real scalar types. A real scalar is its own real part.
pub trait RealScalar:
    Scalar<Real = Self>
    + Float
    + FloatConst
    + FromPrimitive
    + PartialOrd
    + Display
    + LowerExp
    + Default
{
    /// Converts an `f64` constant. Panics only for types that cannot hold
    /// ordinary finite constants, which none of the supported types do.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite constant")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("representable count")
    }

    fn to_f64_lossy(self) -> f64;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;
            const FIELD: Field = Field::Real;

            #[inline]
            fn from_real(re: $t) -> Self {
                re
            }
            #[inline]
            fn from_parts(re: $t, im: $t) -> Option<Self> {
                if im == 0.0 {
                    Some(re)
                } else {
                    None
                }
            }
            #[inline]
            fn re(self) -> $t {
                self
            }
            #[inline]
            fn im(self) -> $t {
                0.0
            }
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn abs_sqr(self) -> $t {
                self * self
            }
            #[inline]
            fn modulus(self) -> $t {
                self.abs()
            }
            #[inline]
            fn is_finite_value(self) -> bool {
                <$t>::is_finite(self)
            }
            fn unit_directions() -> &'static [Self] {
                &[1.0]
            }
            fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R, std: $t) -> Self {
                let z: $t = StandardNormal.sample(rng);
                z * std
            }
        }

        impl RealScalar for $t {
            #[inline]
            fn to_f64_lossy(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

macro_rules! impl_complex {
    ($t:ty) => {
        impl Scalar for Complex<$t> {
            type Real = $t;
            const FIELD: Field = Field::Complex;

            #[inline]
            fn from_real(re: $t) -> Self {
                Complex::new(re, 0.0)
            }
            #[inline]
            fn from_parts(re: $t, im: $t) -> Option<Self> {
                Some(Complex::new(re, im))
            }
            #[inline]
            fn re(self) -> $t {
                self.re
            }
            #[inline]
            fn im(self) -> $t {
                self.im
            }
            #[inline]
            fn conj(self) -> Self {
                Complex::conj(&self)
            }
            #[inline]
            fn abs_sqr(self) -> $t {
                self.norm_sqr()
            }
            #[inline]
            fn modulus(self) -> $t {
                self.re.hypot(self.im)
            }
            #[inline]
            fn scale(self, r: $t) -> Self {
                Complex::new(self.re * r, self.im * r)
            }
            #[inline]
            fn is_finite_value(self) -> bool {
                self.re.is_finite() && self.im.is_finite()
            }
            fn unit_directions() -> &'static [Self] {
                const DIRS: [Complex<$t>; 2] = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)];
                &DIRS
            }
            fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R, std: $t) -> Self {
                let re: $t = StandardNormal.sample(rng);
                let im: $t = StandardNormal.sample(rng);
                Complex::new(re * std, im * std)
            }
        }
    };
}

impl_complex!(f32);
impl_complex!(f64);
