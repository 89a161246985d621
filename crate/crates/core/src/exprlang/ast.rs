use std::fmt;

use num_bigint::BigUint;

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u64 = 1 << 32;

/// Variable-free arithmetic over nonnegative integer literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Literal(BigUint),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Exponents are literals, never expressions.
    Pow(Box<Expr>, u64),
}

impl Expr {
    pub fn lit(v: impl Into<BigUint>) -> Self {
        Expr::Literal(v.into())
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(base: Expr, exponent: u64) -> Self {
        Expr::Pow(Box::new(base), exponent)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Literal(_) => 4,
        }
    }

    fn write_at(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Literal(v) => write!(f, "{v}")?,
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(1, f)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_at(2, f)?;
            }
            Expr::Mul(a, b) => {
                a.write_at(2, f)?;
                f.write_str(" * ")?;
                b.write_at(3, f)?;
            }
            Expr::Pow(base, e) => {
                base.write_at(4, f)?;
                write!(f, "^{e}")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Renders with the fewest parentheses that re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(0, f)
    }
}

/// Syntactic upper bound on bit length: `|value| < 2^bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SizeBound {
    pub bits: u128,
}

impl SizeBound {
    pub fn of(e: &Expr) -> Self {
        Self { bits: bits_bound(e) }
    }

    /// Bound for `|lhs - rhs|`, at least one bit.
    pub fn of_difference(lhs: &Expr, rhs: &Expr) -> Self {
        let b = bits_bound(lhs).max(bits_bound(rhs)).saturating_add(1);
        Self { bits: b.max(1) }
    }

    /// Largest bound over every node of the tree.
    pub fn max_over_nodes(e: &Expr) -> Self {
        fn walk(e: &Expr) -> u128 {
            let own = bits_bound(e);
            let kids = match e {
                Expr::Literal(_) => 0,
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => walk(a).max(walk(b)),
                Expr::Pow(a, _) => walk(a),
            };
            own.max(kids)
        }
        Self { bits: walk(e) }
    }
}

fn bits_bound(e: &Expr) -> u128 {
    match e {
        Expr::Literal(v) => v.bits() as u128,
        Expr::Add(a, b) | Expr::Sub(a, b) => bits_bound(a).max(bits_bound(b)).saturating_add(1),
        Expr::Mul(a, b) => bits_bound(a).saturating_add(bits_bound(b)),
        Expr::Pow(_, 0) => 1,
        Expr::Pow(a, e) => bits_bound(a).saturating_mul(*e as u128),
    }
}
