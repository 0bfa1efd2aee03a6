//! Order-2 complex jets: a holomorphic function's value together with its
//! first and second derivatives at a point.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `(f(τ), f′(τ), f″(τ))` at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub val: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

/// Binary operations understood by [`Jet2::compose`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl Jet2 {
    pub const fn new(val: Complex64, d1: Complex64, d2: Complex64) -> Self {
        Self { val, d1, d2 }
    }

    /// The independent variable seeded at `tau`.
    pub const fn variable(tau: Complex64) -> Self {
        Self::new(tau, ONE, ZERO)
    }

    pub const fn constant(c: Complex64) -> Self {
        Self::new(c, ZERO, ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.d1 == ZERO && self.d2 == ZERO
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Rejects jets with a NaN or infinite component.
    pub(crate) fn checked(self, what: &str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Domain(format!("{what}: non-finite result")))
        }
    }

    /// `self / b`, failing where `b` vanishes.
    pub fn checked_div(self, b: Self) -> Result<Self> {
        if b.val == ZERO {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(self * b.recip_unchecked())
    }

    fn recip_unchecked(self) -> Self {
        let r = self.val.inv();
        let r2 = r * r;
        // (1/b)′ = -b′/b², (1/b)″ = 2b′²/b³ - b″/b²
        Self::new(r, -self.d1 * r2, 2.0 * self.d1 * self.d1 * r2 * r - self.d2 * r2)
    }

    /// Applies an outer function `φ` given `φ(a), φ′(a), φ″(a)`:
    /// `(φ∘a)′ = φ′a′`, `(φ∘a)″ = φ″a′² + φ′a″`.
    pub fn chain(self, phi: Complex64, dphi: Complex64, ddphi: Complex64) -> Self {
        Self::new(phi, dphi * self.d1, ddphi * self.d1 * self.d1 + dphi * self.d2)
    }

    pub fn exp(self) -> Self {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    /// Natural logarithm whose value is `log_val` (one branch of `log a`).
    /// Derivatives do not depend on the branch.
    pub(crate) fn log_with(self, log_val: Complex64) -> Result<Self> {
        if self.val == ZERO {
            return Err(Error::Domain("log at zero".into()));
        }
        let r = self.val.inv();
        Ok(self.chain(log_val, r, -r * r))
    }

    /// Square root whose value is `root` (one of `±√a`).
    pub(crate) fn sqrt_with(self, root: Complex64) -> Result<Self> {
        if self.val == ZERO {
            return Err(Error::Domain("sqrt at zero".into()));
        }
        let d = 0.5 / root;
        // d/da (½ a^{-1/2}) = -¼ a^{-3/2}
        let dd = -0.5 * d / self.val;
        Ok(self.chain(root, d, dd))
    }

    /// `a^n` for an integer exponent, by exact power rule.
    pub(crate) fn powi(self, n: i32) -> Result<Self> {
        match n {
            0 => return Ok(Self::constant(ONE)),
            1 => return Ok(self),
            _ => {}
        }
        if self.val == ZERO && n < 0 {
            return Err(Error::Domain("negative power of zero".into()));
        }
        let nf = f64::from(n);
        let pw = |k: i32| -> Complex64 {
            if k == 0 {
                ONE
            } else {
                self.val.powi(k)
            }
        };
        let phi = pw(n);
        let dphi = nf * pw(n - 1);
        let ddphi = nf * (nf - 1.0) * pw(n - 2);
        Ok(self.chain(phi, dphi, ddphi))
    }

    /// `a^b = exp(b · L)` where `L` is the jet of the chosen branch of `log a`.
    pub(crate) fn pow_via_log(log_a: Self, b: Self) -> Self {
        (b * log_a).exp()
    }

    /// Combines two jets with the principal branch for `Pow`.
    pub fn compose(self, b: Self, op: JetOp) -> Result<Self> {
        let out = match op {
            JetOp::Add => self + b,
            JetOp::Sub => self - b,
            JetOp::Mul => self * b,
            JetOp::Div => self.checked_div(b)?,
            JetOp::Pow => {
                if let Some(n) = integer_exponent(&b) {
                    self.powi(n)?
                } else {
                    if self.val == ZERO {
                        return Err(Error::Domain("pow with zero base".into()));
                    }
                    Self::pow_via_log(self.log_with(self.val.ln())?, b)
                }
            }
        };
        out.checked("jet composition")
    }
}

/// Returns `n` when `b` is a constant jet whose value is a small real integer.
pub(crate) fn integer_exponent(b: &Jet2) -> Option<i32> {
    if !b.is_constant() || b.val.im != 0.0 {
        return None;
    }
    let re = b.val.re;
    if re.fract() == 0.0 && re.abs() <= 1024.0 {
        Some(re as i32)
    } else {
        None
    }
}

impl Add for Jet2 {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        Self::new(self.val + b.val, self.d1 + b.d1, self.d2 + b.d2)
    }
}

impl Sub for Jet2 {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        Self::new(self.val - b.val, self.d1 - b.d1, self.d2 - b.d2)
    }
}

impl Neg for Jet2 {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.val, -self.d1, -self.d2)
    }
}

/// Leibniz rule: `(ab)″ = a″b + 2a′b′ + ab″`.
impl Mul for Jet2 {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        Self::new(
            self.val * b.val,
            self.d1 * b.val + self.val * b.d1,
            self.d2 * b.val + 2.0 * self.d1 * b.d1 + self.val * b.d2,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn jet(a: f64, b: f64, cc: f64) -> Jet2 {
        Jet2::new(c(a), c(b), c(cc))
    }

    #[test]
    fn mul_of_square_jets() {
        let t2 = jet(1.0, 2.0, 2.0);
        assert_eq!(t2.compose(t2, JetOp::Mul).unwrap(), jet(1.0, 4.0, 12.0));
    }

    #[test]
    fn add_zero_is_identity() {
        let x = Jet2::new(Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5), c(-7.0));
        let zero = Jet2::constant(c(0.0));
        assert_eq!(x.compose(zero, JetOp::Add).unwrap(), x);
    }

    #[test]
    fn self_division_is_one() {
        let x = Jet2::new(
            Complex64::new(0.7, 0.2),
            Complex64::new(-1.0, 3.0),
            Complex64::new(0.5, 0.5),
        );
        let q = x.compose(x, JetOp::Div).unwrap();
        assert!((q.val - 1.0).norm() < 1e-15);
        assert!(q.d1.norm() < 1e-14);
        assert!(q.d2.norm() < 1e-13);
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        let x = jet(1.0, 1.0, 0.0);
        let z = jet(0.0, 1.0, 0.0);
        assert!(matches!(x.compose(z, JetOp::Div), Err(Error::Domain(_))));
    }

    #[test]
    fn integer_pow_matches_repeated_mul() {
        let x = Jet2::variable(Complex64::new(-0.4, 0.9));
        let cube = x * x * x;
        let p = x.compose(Jet2::constant(c(3.0)), JetOp::Pow).unwrap();
        assert!((p.val - cube.val).norm() < 1e-15);
        assert!((p.d1 - cube.d1).norm() < 1e-15);
        assert!((p.d2 - cube.d2).norm() < 1e-14);
    }

    #[test]
    fn integer_pow_of_negative_real_base() {
        let x = Jet2::variable(c(-2.0));
        let p = x.compose(Jet2::constant(c(2.0)), JetOp::Pow).unwrap();
        assert_eq!(p, jet(4.0, -4.0, 2.0));
    }

    #[test]
    fn zero_base_rules() {
        let zero = Jet2::variable(c(0.0));
        assert!(zero.compose(Jet2::constant(c(-1.0)), JetOp::Pow).is_err());
        assert!(zero.compose(Jet2::constant(c(0.5)), JetOp::Pow).is_err());
        assert_eq!(
            zero.compose(Jet2::constant(c(2.0)), JetOp::Pow).unwrap(),
            jet(0.0, 0.0, 2.0)
        );
    }

    #[test]
    fn general_pow_matches_exp_log() {
        // tau^tau at tau = 1: value 1, d1 = 1, d2 = 2
        let x = Jet2::variable(c(1.0));
        let p = x.compose(x, JetOp::Pow).unwrap();
        assert!((p.val - 1.0).norm() < 1e-15);
        assert!((p.d1 - 1.0).norm() < 1e-15);
        assert!((p.d2 - 2.0).norm() < 1e-15);
    }
}
