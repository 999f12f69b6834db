use std::fmt;
use std::ops::{Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, Rational};

/// An affine function `x -> coeffs . x + offset` on R^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFunc {
    pub coeffs: Vec<Rational>,
    pub offset: Rational,
}

impl AffineFunc {
    pub fn new(coeffs: Vec<Rational>, offset: Rational) -> Self {
        AffineFunc { coeffs, offset }
    }

    pub fn constant(dim: usize, value: Rational) -> Self {
        AffineFunc::new(vec![Rational::zero(); dim], value)
    }

    pub fn zero(dim: usize) -> Self {
        AffineFunc::constant(dim, Rational::zero())
    }

    /// The coordinate function `x -> x_axis`.
    pub fn coordinate(dim: usize, axis: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[axis] = Rational::one();
        AffineFunc::new(coeffs, Rational::zero())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        debug_assert_eq!(x.len(), self.dim());
        dot(&self.coeffs, x) + &self.offset
    }

    pub fn try_eval(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        Ok(self.eval(x))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        AffineFunc::new(self.coeffs.iter().map(|c| c * factor).collect(), &self.offset * factor)
    }

    pub fn add(&self, other: &AffineFunc) -> Self {
        AffineFunc::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            &self.offset + &other.offset,
        )
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim() })
        }
    }
}

impl Sub for &AffineFunc {
    type Output = AffineFunc;

    fn sub(self, rhs: &AffineFunc) -> AffineFunc {
        AffineFunc::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(), &self.offset - &rhs.offset)
    }
}

impl Neg for &AffineFunc {
    type Output = AffineFunc;

    fn neg(self) -> AffineFunc {
        AffineFunc::new(self.coeffs.iter().map(|c| -c).collect(), -&self.offset)
    }
}

/// Human-readable form over variables `x1..xd`, e.g. `2*x1 - x2 + 1/2`.
impl fmt::Display for AffineFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (wrote, c.is_negative()) {
                (false, true) => write!(f, "-")?,
                (true, true) => write!(f, " - ")?,
                (true, false) => write!(f, " + ")?,
                (false, false) => {}
            }
            if mag.is_one() {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "{}*x{}", mag, i + 1)?;
            }
            wrote = true;
        }
        if !wrote {
            return write!(f, "{}", self.offset);
        }
        if !self.offset.is_zero() {
            let sep = if self.offset.is_negative() { " - " } else { " + " };
            write!(f, "{}{}", sep, self.offset.abs())?;
        }
        Ok(())
    }
}
