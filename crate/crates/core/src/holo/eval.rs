//! Jet evaluation of expression trees.
//!
//! Two branch policies exist. [`eval_jet`] uses principal branches and
//! rejects points on a cut. [`eval_jet_on_sheet`] evaluates at a point of the
//! universal cover of the punctured plane, given in polar form `(r, θ)` with
//! θ unrestricted, by continuing every multivalued node along the arc from
//! `(r, 0)` to `(r, θ)`; it is what grids use for multi-sheet domains.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::expr::{Expr, Func};
use super::jet::{integer_exponent, Jet2};
use crate::error::{Error, Result};

/// Largest angular step taken while continuing branches along an arc.
pub const CONTINUATION_STEP: f64 = PI / 32.0;

enum Branching<'a> {
    /// Principal branches; points on the negative real axis are rejected.
    Principal,
    /// Principal branches without the cut check, recording every choice.
    Seed(&'a mut Vec<Complex64>),
    /// Pick the branch nearest to the previously recorded value.
    Continue(&'a mut Vec<Complex64>, usize),
}

impl Branching<'_> {
    fn next_slot(&mut self) -> usize {
        match self {
            Branching::Principal => 0,
            Branching::Seed(values) => values.len(),
            Branching::Continue(_, cursor) => {
                *cursor += 1;
                *cursor - 1
            }
        }
    }

    fn on_cut(&self, a: Complex64) -> bool {
        matches!(self, Branching::Principal) && a.im == 0.0 && a.re < 0.0
    }

    fn log(&mut self, a: Complex64) -> Result<Complex64> {
        if self.on_cut(a) {
            return Err(Error::Domain(format!("log on branch cut at {a}")));
        }
        let principal = a.ln();
        let slot = self.next_slot();
        Ok(match self {
            Branching::Principal => principal,
            Branching::Seed(values) => {
                values.push(principal);
                principal
            }
            Branching::Continue(values, _) => {
                let prev = values[slot];
                let k = ((prev.im - principal.im) / (2.0 * PI)).round();
                let v = Complex64::new(principal.re, principal.im + 2.0 * PI * k);
                values[slot] = v;
                v
            }
        })
    }

    fn sqrt(&mut self, a: Complex64) -> Result<Complex64> {
        if self.on_cut(a) {
            return Err(Error::Domain(format!("sqrt on branch cut at {a}")));
        }
        let principal = a.sqrt();
        let slot = self.next_slot();
        Ok(match self {
            Branching::Principal => principal,
            Branching::Seed(values) => {
                values.push(principal);
                principal
            }
            Branching::Continue(values, _) => {
                let prev = values[slot];
                let v = if (principal - prev).norm_sqr() <= (principal + prev).norm_sqr() {
                    principal
                } else {
                    -principal
                };
                values[slot] = v;
                v
            }
        })
    }
}

fn eval_node(e: &Expr, x: &Jet2, br: &mut Branching<'_>) -> Result<Jet2> {
    let out = match e {
        Expr::Const(c) => Jet2::constant(*c),
        Expr::Var => *x,
        Expr::Add(a, b) => eval_node(a, x, br)? + eval_node(b, x, br)?,
        Expr::Sub(a, b) => eval_node(a, x, br)? - eval_node(b, x, br)?,
        Expr::Mul(a, b) => eval_node(a, x, br)? * eval_node(b, x, br)?,
        Expr::Div(a, b) => eval_node(a, x, br)?.checked_div(eval_node(b, x, br)?)?,
        Expr::Neg(a) => -eval_node(a, x, br)?,
        Expr::Pow(a, b) => {
            let base = eval_node(a, x, br)?;
            let exponent = eval_node(b, x, br)?;
            match integer_exponent(&exponent) {
                Some(n) => base.powi(n)?,
                None => pow_general(base, exponent, br)?,
            }
        }
        Expr::Call(f, a) => apply(*f, eval_node(a, x, br)?, br)?,
    };
    out.checked("expression node")
}

fn pow_general(base: Jet2, exponent: Jet2, br: &mut Branching<'_>) -> Result<Jet2> {
    let zero = Complex64::new(0.0, 0.0);
    if base.val == zero {
        // 0^c is only differentiable for constant real c >= 2 or c == 1.
        let c = exponent.val;
        if exponent.is_constant() && c.im == 0.0 && c.re > 0.0 {
            let pw = |k: f64| -> Result<Complex64> {
                if k > 0.0 {
                    Ok(zero)
                } else if k == 0.0 {
                    Ok(Complex64::new(1.0, 0.0))
                } else {
                    Err(Error::Domain("zero base with fractional exponent".into()))
                }
            };
            let p = c.re;
            return Ok(base.chain(pw(p)?, p * pw(p - 1.0)?, p * (p - 1.0) * pw(p - 2.0)?));
        }
        return Err(Error::Domain("pow with zero base".into()));
    }
    let log_val = br.log(base.val)?;
    Ok(Jet2::pow_via_log(base.log_with(log_val)?, exponent))
}

fn apply(f: Func, a: Jet2, br: &mut Branching<'_>) -> Result<Jet2> {
    let v = a.val;
    Ok(match f {
        Func::Exp => a.exp(),
        Func::Log => {
            if v.norm_sqr() == 0.0 {
                return Err(Error::Domain("log at zero".into()));
            }
            let l = br.log(v)?;
            a.log_with(l)?
        }
        Func::Sqrt => {
            if v.norm_sqr() == 0.0 {
                return Err(Error::Domain("sqrt at zero".into()));
            }
            let s = br.sqrt(v)?;
            a.sqrt_with(s)?
        }
        Func::Sin => {
            let (s, c) = (v.sin(), v.cos());
            a.chain(s, c, -s)
        }
        Func::Cos => {
            let (s, c) = (v.sin(), v.cos());
            a.chain(c, -s, -c)
        }
        Func::Tan => {
            let c = v.cos();
            if c.norm_sqr() == 0.0 {
                return Err(Error::Domain("tan at a pole".into()));
            }
            let t = v.tan();
            let sec2 = (c * c).inv();
            a.chain(t, sec2, 2.0 * sec2 * t)
        }
        Func::Sinh => {
            let (s, c) = (v.sinh(), v.cosh());
            a.chain(s, c, s)
        }
        Func::Cosh => {
            let (s, c) = (v.sinh(), v.cosh());
            a.chain(c, s, c)
        }
        Func::Tanh => {
            let c = v.cosh();
            if c.norm_sqr() == 0.0 {
                return Err(Error::Domain("tanh at a pole".into()));
            }
            let t = v.tanh();
            let sech2 = (c * c).inv();
            a.chain(t, sech2, -2.0 * sech2 * t)
        }
    })
}

/// Evaluates `(f(τ), f′(τ), f″(τ))` with principal branches.
///
/// Fails with [`Error::Domain`] at singular nodes, on the negative real cut
/// of `log`, `sqrt` and non-integer powers, and on non-finite results.
pub fn eval_jet(e: &Expr, tau: Complex64) -> Result<Jet2> {
    if !tau.is_finite() {
        return Err(Error::Domain(format!("non-finite parameter {tau}")));
    }
    eval_node(e, &Jet2::variable(tau), &mut Branching::Principal)
}

/// Evaluates at `τ = r·e^{iθ}` on the sheet reached by continuing from the
/// positive real axis along the circle of radius `r`.
pub fn eval_jet_on_sheet(e: &Expr, r: f64, theta: f64) -> Result<Jet2> {
    if !(r.is_finite() && theta.is_finite()) || r < 0.0 {
        return Err(Error::Domain(format!("invalid polar point ({r}, {theta})")));
    }
    let at = |t: f64| Complex64::from_polar(r, t);
    if !e.has_branches() || r == 0.0 {
        return eval_node(e, &Jet2::variable(at(theta)), &mut Branching::Principal);
    }
    let mut values = Vec::new();
    let seed = eval_node(e, &Jet2::variable(at(0.0)), &mut Branching::Seed(&mut values))?;
    if theta == 0.0 {
        return Ok(seed);
    }
    let steps = (theta.abs() / CONTINUATION_STEP).ceil().max(1.0) as usize;
    let mut last = seed;
    for k in 1..=steps {
        let t = if k == steps {
            theta
        } else {
            theta * (k as f64) / (steps as f64)
        };
        last = eval_node(e, &Jet2::variable(at(t)), &mut Branching::Continue(&mut values, 0))?;
    }
    Ok(last)
}
