//! Hamiltonian functions given as closed-form expressions or sampled grids.

use std::fmt;

use meval::{ContextProvider, FuncEvalError};
use serde::{Deserialize, Serialize};

use crate::{GgError, Result};

/// Variables and functions visible to expressions: `x`, `y`, `t`, `r`
/// (Euclidean radius), `pi`, `e`, and the usual elementary functions.
struct Vars {
    x: f64,
    y: f64,
    t: f64,
}

impl ContextProvider for Vars {
    fn get_var(&self, name: &str) -> Option<f64> {
        match name {
            "x" => Some(self.x),
            "y" => Some(self.y),
            "t" => Some(self.t),
            "r" => Some(self.x.hypot(self.y)),
            "pi" => Some(std::f64::consts::PI),
            "e" => Some(std::f64::consts::E),
            _ => None,
        }
    }

    fn eval_func(&self, name: &str, args: &[f64]) -> std::result::Result<f64, FuncEvalError> {
        let one = |f: fn(f64) -> f64| {
            if args.len() == 1 {
                Ok(f(args[0]))
            } else {
                Err(FuncEvalError::NumberArgs(1))
            }
        };
        let two = |f: fn(f64, f64) -> f64| {
            if args.len() == 2 {
                Ok(f(args[0], args[1]))
            } else {
                Err(FuncEvalError::NumberArgs(2))
            }
        };
        match name {
            "sin" => one(f64::sin),
            "cos" => one(f64::cos),
            "tan" => one(f64::tan),
            "exp" => one(f64::exp),
            "ln" => one(f64::ln),
            "sqrt" => one(f64::sqrt),
            "abs" => one(f64::abs),
            "sinh" => one(f64::sinh),
            "cosh" => one(f64::cosh),
            "tanh" => one(f64::tanh),
            "floor" => one(f64::floor),
            "atan2" => two(f64::atan2),
            "min" => two(f64::min),
            "max" => two(f64::max),
            _ => Err(FuncEvalError::UnknownFunction),
        }
    }
}

/// A parsed scalar expression in `x, y, t`.
#[derive(Clone)]
pub struct Expression {
    source: String,
    expr: meval::Expr,
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({:?})", self.source)
    }
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Expression {
    pub fn parse(source: &str) -> Result<Self> {
        let expr: meval::Expr = source.parse().map_err(|e| GgError::Parse(format!("expression `{source}`: {e}")))?;
        let out = Self { source: source.to_string(), expr };
        // surface unknown names now rather than mid-integration
        out.expr
            .eval_with_context(Vars { x: 0.1, y: 0.2, t: 0.3 })
            .map_err(|e| GgError::Parse(format!("expression `{source}`: {e}")))?;
        Ok(out)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        self.expr.eval_with_context(Vars { x, y, t }).unwrap_or(f64::NAN)
    }
}

/// Values on a regular grid over `[x0, x1] x [y0, y1]`, interpolated by
/// bicubic Hermite patches with finite-difference slopes (C^1 overall).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    /// Row-major values, `values[j][i]` at `(x_i, y_j)`.
    pub values: Vec<Vec<f64>>,
}

fn hermite(p0: f64, p1: f64, m0: f64, m1: f64, s: f64) -> (f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    let v = (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * m1;
    let d = (6.0 * s2 - 6.0 * s) * p0 + (3.0 * s2 - 4.0 * s + 1.0) * m0 + (-6.0 * s2 + 6.0 * s) * p1 + (3.0 * s2 - 2.0 * s) * m1;
    (v, d)
}

impl GridFunction {
    pub fn validate(&self) -> Result<()> {
        let ny = self.values.len();
        if ny < 2 || self.values.iter().any(|r| r.len() != self.values[0].len()) || self.values[0].len() < 2 {
            return Err(GgError::InvalidInput("grid needs at least 2x2 rectangular values".into()));
        }
        if !(self.x1 > self.x0 && self.y1 > self.y0) {
            return Err(GgError::InvalidInput("grid extent is empty".into()));
        }
        if self.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(GgError::InvalidInput("grid contains non-finite values".into()));
        }
        Ok(())
    }

    fn nx(&self) -> usize {
        self.values[0].len()
    }

    fn ny(&self) -> usize {
        self.values.len()
    }

    fn at(&self, i: isize, j: isize) -> f64 {
        let i = i.clamp(0, self.nx() as isize - 1) as usize;
        let j = j.clamp(0, self.ny() as isize - 1) as usize;
        self.values[j][i]
    }

    /// Slope along x at a node in grid units.
    fn sx(&self, i: isize, j: isize) -> f64 {
        if i <= 0 {
            self.at(1, j) - self.at(0, j)
        } else if i >= self.nx() as isize - 1 {
            self.at(i, j) - self.at(i - 1, j)
        } else {
            0.5 * (self.at(i + 1, j) - self.at(i - 1, j))
        }
    }

    fn sy(&self, i: isize, j: isize) -> f64 {
        if j <= 0 {
            self.at(i, 1) - self.at(i, 0)
        } else if j >= self.ny() as isize - 1 {
            self.at(i, j) - self.at(i, j - 1)
        } else {
            0.5 * (self.at(i, j + 1) - self.at(i, j - 1))
        }
    }

    fn sxy(&self, i: isize, j: isize) -> f64 {
        let up = (j + 1).min(self.ny() as isize - 1);
        let dn = (j - 1).max(0);
        (self.sx(i, up) - self.sx(i, dn)) / (up - dn) as f64
    }

    /// Value and gradient; outside the grid the boundary value is held.
    pub fn eval_grad(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let hx = (self.x1 - self.x0) / (self.nx() - 1) as f64;
        let hy = (self.y1 - self.y0) / (self.ny() - 1) as f64;
        let gx = ((x - self.x0) / hx).clamp(0.0, (self.nx() - 1) as f64);
        let gy = ((y - self.y0) / hy).clamp(0.0, (self.ny() - 1) as f64);
        let i = (gx.floor() as isize).min(self.nx() as isize - 2);
        let j = (gy.floor() as isize).min(self.ny() as isize - 2);
        let (s, u) = (gx - i as f64, gy - j as f64);
        // interpolate along x on rows j and j+1 for values and y-slopes
        let row = |jj: isize| {
            let (v, dv) = hermite(self.at(i, jj), self.at(i + 1, jj), self.sx(i, jj), self.sx(i + 1, jj), s);
            let (m, dm) = hermite(self.sy(i, jj), self.sy(i + 1, jj), self.sxy(i, jj), self.sxy(i + 1, jj), s);
            (v, dv, m, dm)
        };
        let (v0, dv0, m0, dm0) = row(j);
        let (v1, dv1, m1, dm1) = row(j + 1);
        let (val, dval_du) = hermite(v0, v1, m0, m1, u);
        let (dx_grid, _) = hermite(dv0, dv1, dm0, dm1, u);
        let inside_x = x > self.x0 && x < self.x1;
        let inside_y = y > self.y0 && y < self.y1;
        let gxv = if inside_x { dx_grid / hx } else { 0.0 };
        let gyv = if inside_y { dval_du / hy } else { 0.0 };
        (val, gxv, gyv)
    }
}

/// Source of a Hamiltonian function.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    Expr(Expression),
    Grid(GridFunction),
}

/// Step of the central differences used for expression gradients.
const FD_STEP: f64 = 1e-6;

impl ScalarField {
    pub fn value(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            ScalarField::Expr(e) => e.eval(x, y, t),
            ScalarField::Grid(g) => g.eval_grad(x, y).0,
        }
    }

    /// `(dH/dx, dH/dy)`.
    pub fn gradient(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        match self {
            ScalarField::Expr(e) => {
                let h = FD_STEP;
                let gx = (e.eval(x + h, y, t) - e.eval(x - h, y, t)) / (2.0 * h);
                let gy = (e.eval(x, y + h, t) - e.eval(x, y - h, t)) / (2.0 * h);
                (gx, gy)
            }
            ScalarField::Grid(g) => {
                let (_, gx, gy) = g.eval_grad(x, y);
                (gx, gy)
            }
        }
    }

    pub fn depends_on_time(&self) -> bool {
        match self {
            ScalarField::Expr(e) => {
                let probes = [(0.1, 0.2), (-0.3, 0.05), (0.4, -0.35)];
                probes.iter().any(|&(x, y)| {
                    let a = e.eval(x, y, 0.0);
                    let b = e.eval(x, y, 0.731);
                    !(a == b || (a.is_nan() && b.is_nan()))
                })
            }
            ScalarField::Grid(_) => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ScalarField::Expr(e) => e.source().to_string(),
            ScalarField::Grid(g) => format!("grid {}x{}", g.nx(), g.ny()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let e = Expression::parse("(1 - x^2 - y^2)/2").unwrap();
        assert!((e.eval(0.5, 0.0, 0.0) - 0.375).abs() < 1e-15);
        let e = Expression::parse("sin(2*pi*x) * cos(2*pi*y) + t*r").unwrap();
        assert!((e.eval(0.25, 0.0, 1.0) - 1.25).abs() < 1e-12);
        assert!(Expression::parse("foo(x)").is_err());
        assert!(Expression::parse("x +").is_err());
        assert!(Expression::parse("z").is_err());
    }

    #[test]
    fn grid_reproduces_quadratic_and_gradient() {
        let n = 41;
        let f = |x: f64, y: f64| x * x - 0.5 * x * y + y;
        let values = (0..n)
            .map(|j| (0..n).map(|i| f(-1.0 + 2.0 * i as f64 / (n - 1) as f64, -1.0 + 2.0 * j as f64 / (n - 1) as f64)).collect())
            .collect();
        let g = GridFunction { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0, values };
        g.validate().unwrap();
        let (v, gx, gy) = g.eval_grad(0.123, -0.377);
        assert!((v - f(0.123, -0.377)).abs() < 1e-3);
        assert!((gx - (2.0 * 0.123 + 0.5 * 0.377)).abs() < 1e-2);
        assert!((gy - (-0.5 * 0.123 + 1.0)).abs() < 1e-2);
    }

    #[test]
    fn gradient_by_differences() {
        let f = ScalarField::Expr(Expression::parse("x^2*y").unwrap());
        let (gx, gy) = f.gradient(0.3, 0.7, 0.0);
        assert!((gx - 0.42).abs() < 1e-8 && (gy - 0.09).abs() < 1e-8);
        assert!(!f.depends_on_time());
        assert!(ScalarField::Expr(Expression::parse("x*t").unwrap()).depends_on_time());
    }
}
