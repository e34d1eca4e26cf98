//! Fit a linear ODE with polynomial coefficients to an exact power series,
//! verify annihilation exactly, and report singular points.
//!
//! All linear algebra runs over arbitrary-precision rationals: a returned ODE
//! annihilates the input series exactly through every computable order, not
//! approximately.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{ExactSeries, Rat, Variable};

/// Linear ODE sum_i p_i(var) y^{(i)} = 0 with integer polynomial
/// coefficients; `coeffs[i][j]` multiplies var^j y^{(i)}.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianOde {
    pub variable: Variable,
    pub order: usize,
    pub degree: usize,
    pub coeffs: Vec<Vec<BigInt>>,
    /// Number of equations beyond those needed to pin the solution, all of
    /// which the solution satisfies.
    pub margin: usize,
}

// ---------------------------------------------------------------------------
// exact linear algebra
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place. Pivot rows are chosen by smallest
/// combined numerator/denominator bit length (deterministic; keeps entry
/// growth down). Returns the pivot column of each eliminated row.
pub(crate) fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut best: Option<(usize, u64)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if !row[c].is_zero() {
                let bits = row[c].numer().bits() + row[c].denom().bits();
                if best.map(|(_, b)| bits < b).unwrap_or(true) {
                    best = Some((i, bits));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for j in c..ncols {
            let v = &rows[r][j] * &inv;
            rows[r][j] = v;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// One deterministic kernel vector of the row set (first free column set to
/// one), or None when the kernel is trivial.
pub(crate) fn nullspace_vector(rows: &mut [Vec<Rat>]) -> Option<Vec<Rat>> {
    if rows.is_empty() {
        return None;
    }
    let ncols = rows[0].len();
    let pivots = rref(rows);
    if pivots.len() == ncols {
        return None;
    }
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free = (0..ncols).find(|&c| !is_pivot[c])?;
    let mut x = vec![Rat::zero(); ncols];
    x[free] = Rat::one();
    for (i, &p) in pivots.iter().enumerate() {
        if p < free {
            x[p] = -rows[i][free].clone();
        }
    }
    Some(x)
}

/// Solve an overdetermined exact system A x = b; None when inconsistent or
/// underdetermined.
pub(crate) fn solve_exact(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut rows: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(r, rhs)| {
            let mut row = r.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.iter().any(|&p| p == ncols) {
        return None; // inconsistent
    }
    if pivots.len() != ncols {
        return None; // underdetermined
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = rows[i][ncols].clone();
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// ODE guessing
// ---------------------------------------------------------------------------

/// Coefficients of D^i s: entry m of table[i] is [var^m] s^{(i)}.
fn derivative_table(s: &ExactSeries, max_order: usize) -> Vec<Vec<Rat>> {
    let mut table = Vec::with_capacity(max_order + 1);
    table.push(s.coeffs().to_vec());
    for i in 1..=max_order {
        let prev: &Vec<Rat> = &table[i - 1];
        let next: Vec<Rat> = (1..prev.len())
            .map(|m| &prev[m] * Rat::from(BigInt::from(m)))
            .collect();
        table.push(next);
    }
    table
}

// Modular pre-screen: candidate (order, degree) cells are ranked by a rank
// computation over Z_p with a fixed 61-bit prime before any exact solve.
// A kernel over Q implies a kernel mod p (the factorial denominators in the
// series never contain p), so the screen can only skip cells that genuinely
// have no solution; every accepted cell is still solved and verified exactly.
const SCREEN_PRIME: u64 = (1 << 61) - 1;

fn mod_mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % SCREEN_PRIME as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= SCREEN_PRIME;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base);
        }
        base = mod_mul(base, base);
        exp >>= 1;
    }
    acc
}

fn mod_inv(a: u64) -> u64 {
    mod_pow(a, SCREEN_PRIME - 2)
}

fn rat_mod_p(v: &Rat) -> Option<u64> {
    let p = BigInt::from(SCREEN_PRIME);
    let num = ((v.numer() % &p) + &p) % &p;
    let den = ((v.denom() % &p) + &p) % &p;
    let den = den.to_u64()?;
    if den == 0 {
        return None; // bad reduction; caller falls back to the exact path
    }
    Some(mod_mul(num.to_u64()?, mod_inv(den)))
}

/// Rank of the matrix over Z_p.
fn modp_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = mod_inv(rows[rank][c]);
        for j in c..ncols {
            rows[rank][j] = mod_mul(rows[rank][j], inv);
        }
        for i in 0..nrows {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in c..ncols {
                    let sub = mod_mul(rows[rank][j], f);
                    rows[i][j] = (rows[i][j] + SCREEN_PRIME - sub) % SCREEN_PRIME;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

fn normalize(kernel: Vec<Rat>, order: usize, degree: usize) -> Vec<Vec<BigInt>> {
    let mut lcm = BigInt::one();
    for v in &kernel {
        lcm = lcm.lcm(v.denom());
    }
    let mut ints: Vec<BigInt> = kernel.iter().map(|v| v.numer() * &lcm / v.denom()).collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    if !content.is_zero() && !content.is_one() {
        for v in &mut ints {
            *v /= &content;
        }
    }
    let mut coeffs: Vec<Vec<BigInt>> = (0..=order)
        .map(|i| ints[i * (degree + 1)..(i + 1) * (degree + 1)].to_vec())
        .collect();
    let negative_lead = coeffs[order]
        .iter()
        .rev()
        .find(|c| !c.is_zero())
        .map(|c| c.is_negative())
        .unwrap_or(false);
    if negative_lead {
        for p in &mut coeffs {
            for c in p.iter_mut() {
                *c = -c.clone();
            }
        }
    }
    coeffs
}

/// Search for the smallest (order, then degree) linear ODE with polynomial
/// coefficients annihilating `s` through its full truncation, requiring at
/// least `min_margin` equations of overdetermination. Ok(None) when nothing
/// is found within the bounds — not an error state.
pub fn guess_ode(
    s: &ExactSeries,
    max_order: usize,
    max_degree: usize,
    min_margin: usize,
) -> Result<Option<FuchsianOde>> {
    if max_order == 0 {
        return Err(Error::domain("max_order must be >= 1".to_string()));
    }
    if s.order() < (max_order + 1) * (max_degree + 1) + min_margin {
        return Err(Error::domain(format!(
            "series order {} too small for bounds ({} unknowns + margin {})",
            s.order(),
            (max_order + 1) * (max_degree + 1),
            min_margin
        )));
    }
    let table = derivative_table(s, max_order);
    // one modular image of the table drives the cheap pre-screen
    let table_p: Option<Vec<Vec<u64>>> = table
        .iter()
        .map(|row| row.iter().map(rat_mod_p).collect::<Option<Vec<u64>>>())
        .collect();
    for order in 1..=max_order {
        for degree in 0..=max_degree {
            let unknowns = (order + 1) * (degree + 1);
            let nequations = s.order() - order;
            if nequations < unknowns - 1 + min_margin {
                continue;
            }
            if let Some(tp) = &table_p {
                let rows_p: Vec<Vec<u64>> = (0..nequations)
                    .map(|e| {
                        let mut row = Vec::with_capacity(unknowns);
                        for tp_i in tp.iter().take(order + 1) {
                            for j in 0..=degree {
                                row.push(if e >= j && e - j < tp_i.len() {
                                    tp_i[e - j]
                                } else {
                                    0
                                });
                            }
                        }
                        row
                    })
                    .collect();
                let rank = modp_rank(rows_p);
                if rank == unknowns || nequations - rank < min_margin {
                    continue; // no kernel (or not enough margin) over Z_p
                }
            }
            let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(nequations);
            for e in 0..nequations {
                let mut row = Vec::with_capacity(unknowns);
                for table_i in table.iter().take(order + 1) {
                    for j in 0..=degree {
                        let v = if e >= j && e - j < table_i.len() {
                            table_i[e - j].clone()
                        } else {
                            Rat::zero()
                        };
                        row.push(v);
                    }
                }
                rows.push(row);
            }
            let nrows = rows.len();
            if let Some(kernel) = nullspace_vector(&mut rows) {
                let rank = rows.iter().filter(|r| r.iter().any(|v| !v.is_zero())).count();
                let margin = nrows - rank;
                if margin < min_margin {
                    continue;
                }
                let coeffs = normalize(kernel, order, degree);
                let ode = FuchsianOde {
                    variable: s.variable(),
                    order,
                    degree,
                    coeffs,
                    margin,
                };
                if ode.coeffs[order].iter().all(|c| c.is_zero()) {
                    continue;
                }
                let (ok, _) = verify_annihilation(&ode, s);
                if !ok {
                    return Err(Error::internal(
                        "guessed ODE failed exact annihilation".to_string(),
                    ));
                }
                return Ok(Some(ode));
            }
        }
    }
    Ok(None)
}

/// Exact check that the ODE annihilates the truncated series through all
/// computable orders; on failure reports the first failing coefficient index.
pub fn verify_annihilation(ode: &FuchsianOde, s: &ExactSeries) -> (bool, Option<usize>) {
    if ode.variable != s.variable() || s.order() <= ode.order {
        return (false, Some(0));
    }
    let table = derivative_table(s, ode.order);
    let check_through = s.order() - ode.order;
    for e in 0..check_through {
        let mut acc = Rat::zero();
        for (i, poly) in ode.coeffs.iter().enumerate() {
            for (j, c) in poly.iter().enumerate() {
                if c.is_zero() || e < j {
                    continue;
                }
                if e - j < table[i].len() {
                    acc += Rat::from(c.clone()) * &table[i][e - j];
                }
            }
        }
        if !acc.is_zero() {
            return (false, Some(e));
        }
    }
    (true, None)
}

// ---------------------------------------------------------------------------
// singular points of the leading polynomial
// ---------------------------------------------------------------------------

/// Durand-Kerner roots of an exact integer polynomial (ascending coeffs).
fn poly_roots(coeffs: &[BigInt]) -> Vec<Complex64> {
    let Some(hi) = coeffs.iter().rposition(|c| !c.is_zero()) else {
        return vec![];
    };
    let lo = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); lo];
    let deg = hi - lo;
    if deg == 0 {
        return roots;
    }
    let lead_f = coeffs[hi].to_f64().unwrap_or(1.0);
    let monic: Vec<f64> = (lo..=hi)
        .map(|i| coeffs[i].to_f64().unwrap_or(0.0) / lead_f)
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let mut zs: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= zs[i] - zs[j];
                }
            }
            let step = eval(zs[i]) / den;
            zs[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    roots.extend(zs);
    roots
}

/// Roots of the leading coefficient polynomial with multiplicities
/// (clustered to 1e-7), sorted by (re, im).
pub fn singular_points(ode: &FuchsianOde) -> Vec<(Complex64, usize)> {
    let roots = poly_roots(&ode.coeffs[ode.order]);
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for r in roots {
        if let Some(c) = clusters.iter_mut().find(|(z, _)| (*z - r).norm() < 1e-7) {
            c.1 += 1;
        } else {
            clusters.push((r, 1));
        }
    }
    clusters.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    clusters
}

/// Exact polynomial division over the rationals; None unless exact.
pub(crate) fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Option<Vec<Rat>> {
    let dn = den.iter().rposition(|c| !c.is_zero())?;
    let nn = match num.iter().rposition(|c| !c.is_zero()) {
        Some(v) => v,
        None => return Some(vec![Rat::zero()]),
    };
    if nn < dn {
        return None;
    }
    let mut rem: Vec<Rat> = num.to_vec();
    let mut quot = vec![Rat::zero(); nn - dn + 1];
    for k in (0..=nn - dn).rev() {
        let c = &rem[k + dn] / &den[dn];
        quot[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=dn {
            let v = &den[j] * &c;
            rem[k + j] -= v;
        }
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(quot)
    } else {
        None
    }
}

/// Cyclotomic polynomial Phi_m, ascending exact coefficients.
pub fn cyclotomic(m: u32) -> Vec<Rat> {
    assert!(m >= 1);
    let mut acc = vec![Rat::zero(); m as usize + 1];
    acc[0] = -Rat::one();
    acc[m as usize] = Rat::one();
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic(d);
            acc = poly_div_exact(&acc, &phi_d).expect("cyclotomic division is exact");
        }
    }
    acc
}

/// All m <= max_m with Phi_m dividing the ODE's leading polynomial (exact
/// division test).
pub fn cyclotomic_factors(ode: &FuchsianOde, max_m: u32) -> Vec<u32> {
    let lead: Vec<Rat> = ode.coeffs[ode.order]
        .iter()
        .map(|c| Rat::from(c.clone()))
        .collect();
    let mut found = Vec::new();
    for m in 1..=max_m {
        let phi = cyclotomic(m);
        if phi.len() > lead.len() {
            continue;
        }
        if poly_div_exact(&lead, &phi).is_some() {
            found.push(m);
        }
    }
    found
}

/// JSON export: order, degree, margin and the integer coefficient matrix.
pub fn ode_to_json(ode: &FuchsianOde) -> serde_json::Value {
    serde_json::json!({
        "variable": ode.variable.to_string(),
        "order": ode.order,
        "degree": ode.degree,
        "margin": ode.margin,
        "coefficients": ode
            .coeffs
            .iter()
            .map(|p| p.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

/// Parse the JSON produced by [`ode_to_json`].
pub fn ode_from_json(v: &serde_json::Value) -> Result<FuchsianOde> {
    let variable = match v["variable"].as_str() {
        Some("t") => Variable::T,
        Some("x") => Variable::X,
        Some("z") => Variable::Z,
        Some("q_quarter") => Variable::QQuarter,
        other => return Err(Error::domain(format!("bad variable tag {other:?}"))),
    };
    let order = v["order"].as_u64().ok_or_else(|| Error::domain("missing order"))? as usize;
    let degree = v["degree"].as_u64().ok_or_else(|| Error::domain("missing degree"))? as usize;
    let margin = v["margin"].as_u64().unwrap_or(0) as usize;
    let coeffs = v["coefficients"]
        .as_array()
        .ok_or_else(|| Error::domain("missing coefficients"))?
        .iter()
        .map(|p| {
            p.as_array()
                .ok_or_else(|| Error::domain("bad coefficient row"))
                .and_then(|row| {
                    row.iter()
                        .map(|c| {
                            c.as_str()
                                .ok_or_else(|| Error::domain("coefficient must be a string"))
                                .and_then(|s| {
                                    s.parse::<BigInt>()
                                        .map_err(|e| Error::domain(format!("bad integer: {e}")))
                                })
                        })
                        .collect()
                })
        })
        .collect::<Result<Vec<Vec<BigInt>>>>()?;
    Ok(FuchsianOde {
        variable,
        order,
        degree,
        coeffs,
        margin,
    })
}
