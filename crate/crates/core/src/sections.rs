//! Sections of powers of the dualizing sheaf.
//!
//! On each chart `omega_C` is generated by the residue symbol
//! `ds ^ deps / eps^2` (resp. `dt ^ deta / eta^2`). On the overlap the two
//! generators differ by the unit `u = J * t^(2g+2)`, where `J` is the
//! Jacobian of `(s, eps)` with respect to `(t, eta)`. A section of
//! `omega^q` is a pair of polynomial expressions
//! `(alpha(s) + beta(s) eps) tau_1^q` and `(a(t) + b(t) eta) tau_2^q` that
//! agree on the overlap; it is stored through its `U_2` expression.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{kernel_basis, rref, ChartFunction, LaurentPoly, Rational, SparseExactMatrix};
use crate::ribbon::{PointOnLine, Ribbon};

/// Default highest power of `omega` kept in a [`SectionRing`]; Koszul
/// cells in rows `q <= 3` need `R_4` as a target.
pub const DEFAULT_MAX_POWER: u32 = 4;

const DEGREE_SLACK: i64 = 2;

/// `tau_1 = u * tau_2` on the overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaTransition {
    pub unit: ChartFunction,
}

/// Computes the transition unit from the gluing. The ambient lifts
/// `s = (t + F eta)^-1` and `eps = t^(-g-1) eta` are differentiated before
/// reducing modulo `eta^2`.
pub fn omega_transition(r: &Ribbon) -> OmegaTransition {
    let g = r.genus() as i64;
    let f = r.gluing_function();
    let w = ChartFunction::new(LaurentPoly::t(), f.clone());
    let w_inv2 = w.pow(-2).expect("t + F eta is a unit");
    // ds/dt = -w^-2 (1 + F' eta), ds/deta = -w^-2 F
    let ds_dt = -&(&w_inv2 * &ChartFunction::new(LaurentPoly::one(), f.derivative()));
    let ds_deta = -&(&w_inv2 * &ChartFunction::from_reduced(f));
    // deps/dt = -(g+1) t^(-g-2) eta, deps/deta = t^(-g-1)
    let de_dt = ChartFunction::eta_monomial(Rational::from_integer((-(g + 1)).into()), -g - 2);
    let de_deta = ChartFunction::from_reduced(LaurentPoly::monomial(Rational::one(), -g - 1));
    let jac = &(&ds_dt * &de_deta) - &(&ds_deta * &de_dt);
    let twist = ChartFunction::from_reduced(LaurentPoly::monomial(Rational::one(), 2 * g + 2));
    OmegaTransition { unit: &jac * &twist }
}

/// `dim H^0(omega^q)` for a ribbon of genus `g >= 2`.
pub fn expected_dimension(genus: u32, q: u32) -> usize {
    match q {
        0 => 1,
        1 => genus as usize,
        _ => (2 * q as usize - 1) * (genus as usize - 1),
    }
}

/// Basis of `R_q = H^0(C, omega_C^q)` in `U_2` coordinates.
///
/// Coordinates of a section `(a + b eta) tau_2^q` are
/// `(a_0, ..., a_cap, b_0, ..., b_cap)`; the basis is the reduced row
/// echelon form of the solution space in that order.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    ribbon: Ribbon,
    power: u32,
    cap: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl SectionSpace {
    pub fn ribbon(&self) -> &Ribbon {
        &self.ribbon
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Highest `t`-degree representable in either coordinate block.
    pub fn degree_cap(&self) -> usize {
        self.cap
    }

    pub fn basis(&self) -> Vec<ChartFunction> {
        self.rows.iter().map(|row| self.to_chart(row)).collect()
    }

    pub fn basis_element(&self, i: usize) -> ChartFunction {
        self.to_chart(&self.rows[i])
    }

    fn to_chart(&self, coords: &[Rational]) -> ChartFunction {
        let w = self.cap + 1;
        ChartFunction::new(
            LaurentPoly::from_coeffs(&coords[..w]),
            LaurentPoly::from_coeffs(&coords[w..]),
        )
    }

    fn to_coords(&self, x: &ChartFunction) -> Result<Vec<Rational>> {
        let w = self.cap + 1;
        let mut out = vec![Rational::zero(); 2 * w];
        for (block, poly) in [(0, &x.reduced), (w, &x.nilpotent)] {
            for (e, c) in poly.terms() {
                if e < 0 || e as usize >= w {
                    return Err(Error::NotInSpan);
                }
                out[block + e as usize] = c.clone();
            }
        }
        Ok(out)
    }

    /// Coordinates of `x` in the stored basis.
    pub fn coordinates(&self, x: &ChartFunction) -> Result<Vec<Rational>> {
        let v = self.to_coords(x)?;
        let coeffs: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![Rational::zero(); v.len()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (acc, y) in rebuilt.iter_mut().zip(row) {
                if !y.is_zero() {
                    *acc += c * y;
                }
            }
        }
        if rebuilt != v {
            return Err(Error::NotInSpan);
        }
        Ok(coeffs)
    }

    /// Sparse coordinates of `x` in the stored basis.
    pub fn sparse_coordinates(&self, x: &ChartFunction) -> Result<Vec<(u32, Rational)>> {
        Ok(self
            .coordinates(x)?
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c))
            .collect())
    }

    /// The section with the given coordinates.
    pub fn element(&self, coords: &[Rational]) -> ChartFunction {
        assert_eq!(coords.len(), self.dimension());
        let mut out = ChartFunction::zero();
        for (c, i) in coords.iter().zip(0..) {
            if !c.is_zero() {
                out = &out + &self.basis_element(i).scale(c);
            }
        }
        out
    }
}

/// Exact basis of `R_q`, found as the kernel of the gluing condition
/// `(alpha(s) + beta(s) eps) u^q = a(t) + b(t) eta` with polynomial
/// unknowns of bounded degree. The degree cap is doubled once if the
/// dimension misses the Riemann-Roch value.
pub fn section_space(r: &Ribbon, q: u32) -> Result<SectionSpace> {
    let transition = omega_transition(r);
    let base_cap = (q as i64 * (r.genus() as i64 - 1) + DEGREE_SLACK) as usize;
    match solve_sections(r, &transition, q, base_cap) {
        Ok(space) => Ok(space),
        Err(Error::DimensionMismatch { .. }) => solve_sections(r, &transition, q, 2 * base_cap),
        Err(e) => Err(e),
    }
}

/// Same as [`section_space`] with an explicit degree cap and no retry.
pub fn section_space_with_cap(r: &Ribbon, q: u32, cap: usize) -> Result<SectionSpace> {
    solve_sections(r, &omega_transition(r), q, cap)
}

fn solve_sections(r: &Ribbon, tr: &OmegaTransition, q: u32, cap: usize) -> Result<SectionSpace> {
    let g = r.genus() as i64;
    let f = r.gluing_function();
    let uq = tr.unit.pow(q as i64)?;
    let s = ChartFunction::new(
        LaurentPoly::monomial(Rational::one(), -1),
        -(&LaurentPoly::monomial(Rational::one(), -2) * &f),
    );
    let eps = ChartFunction::eta_monomial(Rational::one(), -g - 1);

    // unknown order: alpha_0..cap, beta_0..cap, a_0..cap, b_0..cap
    let w = cap + 1;
    let mut columns: Vec<ChartFunction> = Vec::with_capacity(4 * w);
    let mut s_pow = ChartFunction::one();
    let mut alpha_cols = Vec::with_capacity(w);
    let mut beta_cols = Vec::with_capacity(w);
    for _ in 0..w {
        let term = &s_pow * &uq;
        beta_cols.push(&term * &eps);
        alpha_cols.push(term);
        s_pow = &s_pow * &s;
    }
    columns.extend(alpha_cols);
    columns.extend(beta_cols);
    for k in 0..w {
        columns.push(ChartFunction::from_reduced(LaurentPoly::monomial(-Rational::one(), k as i64)));
    }
    for k in 0..w {
        columns.push(ChartFunction::eta_monomial(-Rational::one(), k as i64));
    }

    let mut row_index: HashMap<(bool, i64), usize> = HashMap::new();
    let mut triplets = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        for (nil, poly) in [(false, &col.reduced), (true, &col.nilpotent)] {
            for (e, c) in poly.terms() {
                let n = row_index.len();
                let i = *row_index.entry((nil, e)).or_insert(n);
                triplets.push((i, j, c.clone()));
            }
        }
    }
    let system = SparseExactMatrix::from_triplets(row_index.len(), columns.len(), triplets);
    let mut rows: Vec<Vec<Rational>> = kernel_basis(&system)
        .into_iter()
        .map(|v| v[2 * w..].to_vec())
        .collect();
    let pivots = rref(&mut rows);

    let expected = expected_dimension(r.genus(), q);
    if rows.len() != expected {
        return Err(Error::DimensionMismatch {
            power: q,
            expected,
            found: rows.len(),
        });
    }
    Ok(SectionSpace {
        ribbon: r.clone(),
        power: q,
        cap,
        rows,
        pivots,
    })
}

/// `R_0, ..., R_max` with the multiplication maps `V (x) R_q -> R_(q+1)`.
#[derive(Clone, Debug)]
pub struct SectionRing {
    ribbon: Ribbon,
    spaces: Vec<SectionSpace>,
    table: MultiplicationTable,
}

/// Structure constants of `V (x) R_q -> R_(q+1)`: `products[q][i][j]` is
/// `v_i * r_j` in the basis of `R_(q+1)`.
#[derive(Clone, Debug)]
pub struct MultiplicationTable {
    pub products: Vec<ProductBlock>,
}

/// `block[i][j]`: sparse coordinates of `v_i * r_j`.
pub type ProductBlock = Vec<Vec<Vec<(u32, Rational)>>>;

impl SectionRing {
    pub fn new(r: &Ribbon) -> Result<Self> {
        Self::with_max_power(r, DEFAULT_MAX_POWER)
    }

    pub fn with_max_power(r: &Ribbon, max_power: u32) -> Result<Self> {
        let spaces = (0..=max_power)
            .into_par_iter()
            .map(|q| section_space(r, q))
            .collect::<Result<Vec<_>>>()?;
        let v_basis = spaces[1].basis();
        let products = (0..max_power as usize)
            .into_par_iter()
            .map(|q| {
                let src = spaces[q].basis();
                v_basis
                    .iter()
                    .map(|v| {
                        src.iter()
                            .map(|x| spaces[q + 1].sparse_coordinates(&(v * x)))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ribbon: r.clone(),
            spaces,
            table: MultiplicationTable { products },
        })
    }

    pub fn ribbon(&self) -> &Ribbon {
        &self.ribbon
    }

    pub fn max_power(&self) -> u32 {
        self.spaces.len() as u32 - 1
    }

    pub fn space(&self, q: u32) -> &SectionSpace {
        &self.spaces[q as usize]
    }

    pub fn dimension(&self, q: u32) -> usize {
        self.spaces.get(q as usize).map_or(0, SectionSpace::dimension)
    }

    pub fn table(&self) -> &MultiplicationTable {
        &self.table
    }

    /// Product of `x in R_q1` and `y in R_q2`, both given by coordinates,
    /// as coordinates in `R_(q1+q2)`.
    pub fn multiply(&self, q1: u32, x: &[Rational], q2: u32, y: &[Rational]) -> Result<Vec<Rational>> {
        let target = self
            .spaces
            .get((q1 + q2) as usize)
            .ok_or_else(|| Error::InvalidInput(format!("R_{} not computed", q1 + q2)))?;
        let xs = self.space(q1).element(x);
        let ys = self.space(q2).element(y);
        target.coordinates(&(&xs * &ys))
    }

    /// Matrix of `V (x) R_q -> R_(q+1)`; column `i * dim R_q + j` is
    /// `v_i (x) r_j`.
    pub fn mult_matrix(&self, q: u32) -> SparseExactMatrix {
        let products = &self.table.products[q as usize];
        let columns = products
            .iter()
            .flat_map(|row| row.iter().cloned())
            .collect();
        SparseExactMatrix::from_columns(self.dimension(q + 1), columns)
    }

    /// Dimension of the common kernel of evaluating `V` at the reduced
    /// points `pts`, and the points at which every section of `V` vanishes.
    pub fn evaluation_check(&self, pts: &[PointOnLine]) -> (usize, Vec<PointOnLine>) {
        let v = self.space(1);
        let degree = self.ribbon.genus() as i64 - 1;
        let values: Vec<Vec<Rational>> = pts
            .iter()
            .map(|pt| {
                v.basis()
                    .iter()
                    .map(|sec| match pt {
                        PointOnLine::Affine(t0) => sec.reduced.eval(t0),
                        // value of alpha at s = 0, read from a = +-t^(g-1) alpha(1/t)
                        PointOnLine::Infinity => sec.reduced.coeff(degree),
                    })
                    .collect()
            })
            .collect();
        let base_points = pts
            .iter()
            .zip(&values)
            .filter(|(_, vals)| vals.iter().all(Zero::is_zero))
            .map(|(p, _)| p.clone())
            .collect();
        let kernel = if values.is_empty() {
            v.dimension()
        } else {
            kernel_basis(&SparseExactMatrix::from_dense(&values)).len()
        };
        (kernel, base_points)
    }
}

/// Debug view of a basis: `U_2` expressions with exact coefficients.
#[derive(Serialize)]
pub struct BasisDump {
    pub genus: u32,
    pub power: u32,
    pub sections: Vec<SectionDump>,
}

#[derive(Serialize)]
pub struct SectionDump {
    pub reduced: Vec<(i64, String)>,
    pub nilpotent: Vec<(i64, String)>,
}

impl SectionSpace {
    pub fn dump(&self) -> BasisDump {
        let terms = |p: &LaurentPoly| p.terms().map(|(e, c)| (e, c.to_string())).collect();
        BasisDump {
            genus: self.ribbon.genus(),
            power: self.power,
            sections: self
                .basis()
                .iter()
                .map(|s| SectionDump {
                    reduced: terms(&s.reduced),
                    nilpotent: terms(&s.nilpotent),
                })
                .collect(),
        }
    }
}
