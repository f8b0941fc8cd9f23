use super::sym::vn_gram;
use super::{check_det, CoeffModule, ModuleSpec};
use crate::error::{Error, Result};
use crate::fflin::{Field, Matrix, PrimeField};
use crate::modgrp::IntMat2;

/// `U_d`: functions `f` on `F_p^2 \ {0}` with `f(l x) = l^d f(x)`.
///
/// Basis: `X^{d-i} Y^i` for `0 <= i <= d`, then `X^i Y^{p-1+d-i}` for
/// `d <= i <= p-1`. Internally elements are also described by their values on
/// the line representatives `(1, t)`, `t in F_p`, and `(0, 1)`.
#[derive(Clone, Debug)]
pub struct UdModule {
    d: u32,
    field: PrimeField,
    /// monomial coordinates -> line values
    to_lines: Matrix<PrimeField>,
    from_lines: Matrix<PrimeField>,
}

fn pw(f: &PrimeField, x: u64, e: u32) -> u64 {
    if e == 0 {
        1
    } else {
        f.pow(x, e as u128)
    }
}

impl UdModule {
    pub fn new(d: u32, field: PrimeField) -> Result<Self> {
        let p = field.p();
        if d as u64 >= p {
            return Err(Error::Precondition(format!("U_d needs 0 <= d <= p-1, got d = {d}, p = {p}")));
        }
        let n = p as usize + 1;
        let exps = Self::exponents(d, p);
        let lines = Self::line_reps(p);
        let to_lines = Matrix::from_fn(field, n, n, |k, j| {
            let (x, y) = lines[k];
            let (ex, ey) = exps[j];
            field.mul(pw(&field, x, ex), pw(&field, y, ey))
        });
        let from_lines = to_lines.inverse().expect("U_d monomials are independent functions");
        Ok(UdModule {
            d,
            field,
            to_lines,
            from_lines,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Exponents `(e_X, e_Y)` of the basis monomials.
    pub fn exponents(d: u32, p: u64) -> Vec<(u32, u32)> {
        let p = p as u32;
        let mut v: Vec<(u32, u32)> = (0..=d).map(|i| (d - i, i)).collect();
        v.extend((d..p).map(|i| (i, p - 1 + d - i)));
        v
    }

    fn line_reps(p: u64) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = (0..p).map(|t| (1, t)).collect();
        v.push((0, 1));
        v
    }

    /// `(line index, l)` with `(x, y) = l * rep`, or `None` at the origin.
    fn locate(&self, x: u64, y: u64) -> Option<(usize, u64)> {
        let f = &self.field;
        if x != 0 {
            Some((f.mul(y, f.inv(x).unwrap()) as usize, x))
        } else if y != 0 {
            Some((f.p() as usize, y))
        } else {
            None
        }
    }

    /// Evaluates the element with monomial coordinates `v` at `(x, y)`.
    pub fn evaluate(&self, v: &[u64], x: u64, y: u64) -> u64 {
        let f = &self.field;
        match self.locate(x % f.p(), y % f.p()) {
            None => 0,
            Some((k, l)) => {
                let vals = self.to_lines.mul_vec(v);
                f.mul(pw(f, l, self.d), vals[k])
            }
        }
    }

    fn line_action(&self, a: &IntMat2) -> Matrix<PrimeField> {
        let f = self.field;
        let p = f.p();
        let [ea, eb, ec, ed] = a.reduce_mod(p as i128).map(|x| x as u64);
        let reps = Self::line_reps(p);
        let n = p as usize + 1;
        let mut m = Matrix::zeros(f, n, n);
        for (k, &(x, y)) in reps.iter().enumerate() {
            let u = f.add(f.mul(x, ea), f.mul(y, ec));
            let v = f.add(f.mul(x, eb), f.mul(y, ed));
            if let Some((j, l)) = self.locate(u, v) {
                m.set(k, j, pw(&f, l, self.d));
            }
        }
        m
    }
}

pub fn ud_action(d: u32, field: PrimeField, a: &IntMat2) -> Result<Matrix<PrimeField>> {
    UdModule::new(d, field)?.act(a)
}

/// `(incl, proj)` for `0 -> V_d -> U_d -> V_{p-1-d} -> 0`.
///
/// `proj(f)` is the vector `w` with `<w, g> = sum_x f(x) g(x)` for every
/// `g` in `V_{p-1-d}`, the left side being the invariant pairing on `V_{p-1-d}`.
pub fn ud_exact_sequence(d: u32, field: PrimeField) -> Result<(Matrix<PrimeField>, Matrix<PrimeField>)> {
    UdModule::new(d, field)?;
    let f = field;
    let p = f.p();
    let dim_u = p as usize + 1;
    let incl = Matrix::from_fn(f, dim_u, d as usize + 1, |i, j| (i == j) as u64);
    let n = (p - 1) as u32 - d;
    let exps = UdModule::exponents(d, p);
    // phi[i][j] = sum over nonzero points of (basis_j of U_d)(x) * (X^{n-i} Y^i)(x)
    let mut phi = Matrix::zeros(f, n as usize + 1, dim_u);
    for x in 0..p {
        for y in 0..p {
            if x == 0 && y == 0 {
                continue;
            }
            let fj: Vec<u64> = exps.iter().map(|&(ex, ey)| f.mul(pw(&f, x, ex), pw(&f, y, ey))).collect();
            for i in 0..=n {
                let g = f.mul(pw(&f, x, n - i), pw(&f, y, i));
                if g == 0 {
                    continue;
                }
                for (j, &v) in fj.iter().enumerate() {
                    let cur = phi.get(i as usize, j);
                    phi.set(i as usize, j, f.add(cur, f.mul(g, v)));
                }
            }
        }
    }
    let gram_t_inv = vn_gram(n, f)?.transpose().inverse().expect("pairing is perfect");
    let proj = gram_t_inv.mul(&phi);
    Ok((incl, proj))
}

impl CoeffModule for UdModule {
    fn field(&self) -> PrimeField {
        self.field
    }
    fn dim(&self) -> usize {
        self.field.p() as usize + 1
    }
    fn act(&self, a: &IntMat2) -> Result<Matrix<PrimeField>> {
        check_det(a)?;
        Ok(self.from_lines.mul(&self.line_action(a)).mul(&self.to_lines))
    }
    fn period(&self) -> u64 {
        self.field.p()
    }
    fn scalar_weight(&self) -> Option<u32> {
        Some(self.d)
    }
    fn spec(&self) -> ModuleSpec {
        ModuleSpec::Ud { d: self.d }
    }
}
