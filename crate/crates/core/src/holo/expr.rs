use std::fmt;

use num_complex::Complex64;

/// Elementary functions accepted by the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Functions with more than one branch.
    pub fn is_multivalued(self) -> bool {
        matches!(self, Func::Log | Func::Sqrt)
    }
}

/// Expression tree in the single variable `tau`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(re: f64) -> Expr {
        Expr::Const(Complex64::new(re, 0.0))
    }

    /// True when some node may need a branch choice during evaluation.
    pub fn has_branches(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => false,
            Expr::Neg(a) => a.has_branches(),
            Expr::Call(f, a) => f.is_multivalued() || a.has_branches(),
            Expr::Pow(a, b) => {
                let integer = matches!(**b, Expr::Const(c) if c.im == 0.0 && c.re.fract() == 0.0);
                !integer || a.has_branches() || b.has_branches()
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_branches() || b.has_branches()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // `{:?}` is the shortest string that parses back to the same f64.
    let s = format!("{x:?}");
    f.write_str(s.strip_suffix(".0").unwrap_or(&s))
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimal parentheses the grammar needs, so the output
/// parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => f.write_str("tau"),
            Expr::Const(c) => match (c.re, c.im) {
                (re, im) if im == 0.0 && re.is_sign_positive() => write_real(f, re),
                (re, im) if re == 0.0 && re.is_sign_positive() && im > 0.0 => {
                    if im == 1.0 {
                        f.write_str("i")
                    } else {
                        write_real(f, im)?;
                        f.write_str("i")
                    }
                }
                // Not produced by the parser; printed as an equivalent expression.
                (re, im) => {
                    f.write_str(if re.is_sign_negative() { "(-" } else { "(" })?;
                    write_real(f, re.abs())?;
                    if im != 0.0 {
                        f.write_str(if im < 0.0 { " - " } else { " + " })?;
                        write_real(f, im.abs())?;
                        f.write_str("*i")?;
                    }
                    f.write_str(")")
                }
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let op = if matches!(self, Expr::Add(..)) { " + " } else { " - " };
                write_operand(f, a, a.precedence() < 1)?;
                f.write_str(op)?;
                write_operand(f, b, b.precedence() <= 1)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = if matches!(self, Expr::Mul(..)) { "*" } else { "/" };
                write_operand(f, a, a.precedence() < 2)?;
                f.write_str(op)?;
                // a unary minus is allowed as a right operand
                write_operand(f, b, b.precedence() <= 2)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, a.precedence() < 3)
            }
            Expr::Pow(a, b) => {
                write_operand(f, a, a.precedence() <= 4)?;
                f.write_str("^")?;
                write_operand(f, b, b.precedence() < 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
