//! Scalar traits shared by the solvers.
//!
//! The assignment solver only needs an ordered ring ([`Cost`]), so it runs on
//! floats, machine integers and exact rationals alike. Geometry, dynamics and
//! the reference solutions need transcendental functions and use [`Real`].

use std::fmt::{Debug, Display, LowerExp};

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Signed};

/// Value type for assignment costs and dual potentials.
pub trait Cost: Copy + PartialOrd + Signed + Debug + Send + Sync + 'static {
    /// `false` for NaN and infinities; always `true` for exact types.
    fn is_finite_cost(&self) -> bool;

    /// Slack used when deciding whether a reduced cost is zero, given the
    /// largest entry of the matrix. Exact types use zero.
    fn tie_tolerance(max_entry: Self) -> Self;
}

macro_rules! impl_cost_float {
    ($t:ty, $rel:expr) => {
        impl Cost for $t {
            fn is_finite_cost(&self) -> bool {
                self.is_finite()
            }

            fn tie_tolerance(max_entry: Self) -> Self {
                $rel * (1.0 + max_entry.abs())
            }
        }
    };
}

impl_cost_float!(f64, 1e-9);
impl_cost_float!(f32, 1e-5);

macro_rules! impl_cost_exact {
    ($($t:ty),*) => {$(
        impl Cost for $t {
            fn is_finite_cost(&self) -> bool {
                true
            }

            fn tie_tolerance(_max_entry: Self) -> Self {
                <$t as num_traits::Zero>::zero()
            }
        }
    )*};
}

impl_cost_exact!(i32, i64, i128, Ratio<i64>, Ratio<i128>);

/// Floating point scalar for everything geometric.
pub trait Real: Cost + Float + FloatConst + FromPrimitive + Display + LowerExp + Default {
    /// Converts an `f64` literal. Every implementor can represent (a rounding of) any `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
