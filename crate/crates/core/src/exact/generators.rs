//! Exact series generators: hypergeometric series for K/E/2F1 and
//! term-by-term expansion of the diagonal n-fold integrands.
//!
//! The integrand expansion works variable by variable: every t-carrying
//! factor — the (1 +- t^{h} x_1..x_d) geometric factors, the (1 - t x_i)^{+-1/2}
//! binomials, the (1 - t x_i x_j)^{-2} geometric squares and the squared
//! Vandermonde polynomials — is expanded into per-variable monomials, and
//! each variable is integrated out against an exact half-integer beta moment.
//! The full monomial cross-product is never materialized: for a fixed tuple
//! of coupling indices the remaining sums factor into short one-variable
//! series that are convolved.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::moments::half_moment;
use crate::exact::series::{rat, ExactSeries, Rat, Variable};

/// 2F1 coefficient series: sum_n (a)_n (b)_n / ((c)_n n!) t^n, exact.
pub fn series_2f1(a: &Rat, b: &Rat, c: &Rat, order: usize) -> Result<ExactSeries> {
    if c.is_integer() && *c <= Rat::zero() {
        return Err(Error::domain(format!(
            "series_2f1 undefined for c a nonpositive integer, got {c}"
        )));
    }
    let mut coeffs = Vec::with_capacity(order);
    let mut term = Rat::one();
    for n in 0..order {
        coeffs.push(term.clone());
        let nr = Rat::from(BigInt::from(n));
        term = term * (a + &nr) * (b + &nr) / ((c + &nr) * (&nr + Rat::one()));
    }
    Ok(ExactSeries::new(Variable::T, coeffs))
}

/// Series of (2/pi) K(t): coefficient_n = ((1/2)_n / n!)^2.
pub fn series_k(order: usize) -> ExactSeries {
    series_2f1(&rat(1, 2), &rat(1, 2), &rat(1, 1), order).expect("c = 1 is valid")
}

/// Series of (2/pi) E(t) = F(-1/2, 1/2; 1; t).
pub fn series_e(order: usize) -> ExactSeries {
    series_2f1(&rat(-1, 2), &rat(1, 2), &rat(1, 1), order).expect("c = 1 is valid")
}

/// One variable of a diagonal integrand: x^{x_half2/2} (1-x)^{omx_half2/2}
/// (1 - t x)^{bin_half2/2}, all exponent numerators odd.
#[derive(Debug, Clone, Copy)]
struct VarFactor {
    x_half2: i64,
    omx_half2: i64,
    bin_half2: i64,
}

/// Full description of one n-fold diagonal integrand.
#[derive(Debug, Clone)]
struct DiagonalIntegrand {
    vars: Vec<VarFactor>,
    /// (1 - t x_i x_j)^{-2} coupling factors.
    pairs: Vec<(usize, usize)>,
    /// Variable groups carrying prod_{i<j} (x_i - x_j)^2.
    vdm_groups: Vec<Vec<usize>>,
    /// (1 + t^{h2/2} X)/(1 - t^{h2/2} X) with X the product of all variables.
    geom_h2: Option<i64>,
    /// Leading power t^{pre_h2/2}.
    pre_h2: i64,
    /// Rational prefactor; the pi powers cancel against the moments.
    pre_rat: Rat,
}

/// Monomial list for the product of the squared Vandermonde groups:
/// (coefficient, per-variable extra exponents).
fn vandermonde_terms(spec: &DiagonalIntegrand) -> Vec<(Rat, Vec<i64>)> {
    let nv = spec.vars.len();
    let mut terms: Vec<(Rat, Vec<i64>)> = vec![(Rat::one(), vec![0; nv])];
    for group in &spec.vdm_groups {
        for a in 0..group.len() {
            for b in a + 1..group.len() {
                let (i, j) = (group[a], group[b]);
                // multiply by (x_i - x_j)^2 = x_i^2 - 2 x_i x_j + x_j^2
                let mut next = Vec::with_capacity(terms.len() * 3);
                for (c, e) in &terms {
                    for (dc, di, dj) in [(1i64, 2i64, 0i64), (-2, 1, 1), (1, 0, 2)] {
                        let mut e2 = e.clone();
                        e2[i] += di;
                        e2[j] += dj;
                        next.push((c * rat(dc, 1), e2));
                    }
                }
                // merge duplicates
                let mut map: HashMap<Vec<i64>, Rat> = HashMap::new();
                for (c, e) in next {
                    *map.entry(e).or_insert_with(Rat::zero) += c;
                }
                terms = map.into_iter().map(|(e, c)| (c, e)).collect();
                terms.retain(|(c, _)| !c.is_zero());
                terms.sort_by(|a, b| a.1.cmp(&b.1));
            }
        }
    }
    terms
}

/// Coefficients of (1 - u)^{s/2} up to u^{tmax}.
fn binomial_series(s_half2: i64, tmax: usize) -> Vec<Rat> {
    let alpha = Rat::new(BigInt::from(s_half2), BigInt::from(2));
    let mut out = Vec::with_capacity(tmax + 1);
    let mut c = Rat::one();
    for m in 0..=tmax {
        out.push(c.clone());
        let mr = Rat::from(BigInt::from(m));
        c = c * (&alpha - &mr) / (&mr + Rat::one()) * rat(-1, 1);
    }
    out
}

/// Per-variable reduced series: S_i(e)(t) = sum_m bin_m moment(x_exp + e + m) t^m.
struct VarSeriesCache {
    bins: Vec<Vec<Rat>>,
    factors: Vec<VarFactor>,
    tmax: usize,
    cache: HashMap<(usize, i64), Vec<Rat>>,
}

impl VarSeriesCache {
    fn new(spec: &DiagonalIntegrand, tmax: usize) -> Self {
        VarSeriesCache {
            bins: spec
                .vars
                .iter()
                .map(|v| binomial_series(v.bin_half2, tmax))
                .collect(),
            factors: spec.vars.clone(),
            tmax,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, var: usize, extra: i64) -> Result<&Vec<Rat>> {
        if !self.cache.contains_key(&(var, extra)) {
            let f = self.factors[var];
            let mut coeffs = Vec::with_capacity(self.tmax + 1);
            for m in 0..=self.tmax {
                let moment = half_moment(f.x_half2 + 2 * (extra + m as i64), f.omx_half2)?;
                coeffs.push(&self.bins[var][m] * moment);
            }
            self.cache.insert((var, extra), coeffs);
        }
        Ok(self.cache.get(&(var, extra)).unwrap())
    }
}

/// Truncated product of the per-variable series for a fixed coupling tuple.
fn convolve_vars(
    cache: &mut VarSeriesCache,
    extras: &[i64],
    tmax: usize,
) -> Result<Vec<Rat>> {
    let mut acc = vec![Rat::zero(); tmax + 1];
    acc[0] = Rat::one();
    for (var, &e) in extras.iter().enumerate() {
        let s = cache.get(var, e)?.clone();
        let mut next = vec![Rat::zero(); tmax + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in s.iter().enumerate() {
                if i + j > tmax {
                    break;
                }
                if !b.is_zero() {
                    next[i + j] += a * b;
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Expand the integrand into a series in x = t^{1/2}; out[e] multiplies x^e.
fn expand(spec: &DiagonalIntegrand, xorder: usize) -> Result<Vec<Rat>> {
    let mut out = vec![Rat::zero(); xorder];
    if spec.pre_h2 as usize >= xorder {
        return Ok(out);
    }
    let tmax = (xorder - 1 - spec.pre_h2 as usize) / 2;
    let mut cache = VarSeriesCache::new(spec, tmax);
    let vdm = vandermonde_terms(spec);
    let npairs = spec.pairs.len();

    // geometric index g, then a tuple of pair indices, then the Vandermonde
    // monomial; the per-variable remainder factorizes.
    let mut pair_idx = vec![0i64; npairs];
    let mut g = 0i64;
    loop {
        let geom_cost = spec.geom_h2.unwrap_or(0) * g;
        if spec.pre_h2 + geom_cost >= xorder as i64 {
            break;
        }
        let w_g = if g == 0 { Rat::one() } else { rat(2, 1) };

        // enumerate pair indices by odometer with cost pruning
        pair_idx.iter_mut().for_each(|p| *p = 0);
        'tuples: loop {
            let pair_cost: i64 = 2 * pair_idx.iter().sum::<i64>();
            let h = spec.pre_h2 + geom_cost + pair_cost;
            if h < xorder as i64 {
                let mut w = &spec.pre_rat * &w_g;
                for &p in &pair_idx {
                    w *= rat(p + 1, 1);
                }
                let mut extras_base = vec![g; spec.vars.len()];
                for (pi, &(a, b)) in spec.pairs.iter().enumerate() {
                    extras_base[a] += pair_idx[pi];
                    extras_base[b] += pair_idx[pi];
                }
                let budget = ((xorder as i64 - 1 - h) / 2) as usize;
                for (vc, ve) in &vdm {
                    let extras: Vec<i64> = extras_base
                        .iter()
                        .zip(ve.iter())
                        .map(|(a, b)| a + b)
                        .collect();
                    let prod = convolve_vars(&mut cache, &extras, budget)?;
                    let wv = &w * vc;
                    for (j, c) in prod.iter().enumerate() {
                        if !c.is_zero() {
                            out[(h + 2 * j as i64) as usize] += &wv * c;
                        }
                    }
                }
            }

            // odometer increment with pruning: find the first position that
            // can still grow within budget
            let mut pos = 0;
            loop {
                if pos == npairs {
                    break 'tuples;
                }
                pair_idx[pos] += 1;
                let cost: i64 = 2 * pair_idx.iter().sum::<i64>();
                if spec.pre_h2 + geom_cost + cost < xorder as i64 {
                    break;
                }
                pair_idx[pos] = 0;
                pos += 1;
            }
        }

        if spec.geom_h2.is_none() || spec.geom_h2 == Some(0) {
            break;
        }
        g += 1;
    }
    Ok(out)
}

/// Exact series of the diagonal susceptibility sector chi_d^{(n)}, n in 1..=3.
///
/// Odd sectors are series in x = t^{1/2}; even sectors in t.
pub fn series_chid(n: u8, order: usize) -> Result<ExactSeries> {
    let spec = match n {
        1 => DiagonalIntegrand {
            vars: vec![VarFactor {
                x_half2: -1,
                omx_half2: -1,
                bin_half2: -1,
            }],
            pairs: vec![],
            vdm_groups: vec![],
            geom_h2: Some(1),
            pre_h2: 0,
            pre_rat: Rat::one(),
        },
        2 => DiagonalIntegrand {
            vars: vec![
                VarFactor {
                    x_half2: 1,
                    omx_half2: -1,
                    bin_half2: -1,
                },
                VarFactor {
                    x_half2: -1,
                    omx_half2: 1,
                    bin_half2: 1,
                },
            ],
            pairs: vec![(0, 1)],
            vdm_groups: vec![],
            geom_h2: Some(2),
            pre_h2: 2,
            pre_rat: Rat::one(),
        },
        3 => DiagonalIntegrand {
            vars: vec![
                VarFactor {
                    x_half2: -1,
                    omx_half2: -1,
                    bin_half2: -1,
                },
                VarFactor {
                    x_half2: 1,
                    omx_half2: 1,
                    bin_half2: 1,
                },
                VarFactor {
                    x_half2: -1,
                    omx_half2: -1,
                    bin_half2: -1,
                },
            ],
            pairs: vec![(0, 1), (2, 1)],
            vdm_groups: vec![vec![0, 2]],
            geom_h2: Some(3),
            pre_h2: 4,
            pre_rat: rat(1, 2),
        },
        _ => {
            return Err(Error::unsupported(format!(
                "exact chi_d series implemented for n in 1..=3, got {n}"
            )))
        }
    };
    if n % 2 == 1 {
        Ok(ExactSeries::new(Variable::X, expand(&spec, order)?))
    } else {
        // even sector: integer t powers only
        let xcoeffs = expand(&spec, 2 * order)?;
        ExactSeries::new(Variable::X, xcoeffs).even_to_t()
    }
}

/// Exact series of the diagonal form factor f^{(n)}_{N,N}, n in 1..=4.
///
/// Returned in x = t^{1/2} for odd n (the series has half-integer t powers
/// when N is odd) and in t for even n.
pub fn ff_exact_series(n: u8, big_n: u32, order: usize) -> Result<ExactSeries> {
    if n == 0 || n > 4 {
        return Err(Error::unsupported(format!(
            "exact form factor series implemented for n in 1..=4, got {n}"
        )));
    }
    let nn = big_n as i64;
    let spec = if n % 2 == 0 {
        let m = (n / 2) as usize;
        let mut vars = Vec::new();
        for v in 1..=2 * m {
            if v % 2 == 1 {
                vars.push(VarFactor {
                    x_half2: 2 * nn + 1,
                    omx_half2: -1,
                    bin_half2: -1,
                });
            } else {
                vars.push(VarFactor {
                    x_half2: 2 * nn - 1,
                    omx_half2: 1,
                    bin_half2: 1,
                });
            }
        }
        let mut pairs = Vec::new();
        for j in 0..m {
            for k in 0..m {
                pairs.push((2 * j, 2 * k + 1)); // (odd paper index, even paper index)
            }
        }
        let odds: Vec<usize> = (0..2 * m).step_by(2).collect();
        let evens: Vec<usize> = (1..2 * m).step_by(2).collect();
        let mfact: BigInt = (1..=m as u64).product::<u64>().into();
        DiagonalIntegrand {
            vars,
            pairs,
            vdm_groups: vec![odds, evens],
            geom_h2: None,
            pre_h2: 2 * (m as i64) * (nn + m as i64),
            pre_rat: Rat::new(BigInt::one(), &mfact * &mfact),
        }
    } else {
        let m = ((n - 1) / 2) as usize;
        let mut vars = Vec::new();
        for v in 1..=2 * m + 1 {
            if v % 2 == 1 {
                vars.push(VarFactor {
                    x_half2: 2 * nn - 1,
                    omx_half2: -1,
                    bin_half2: -1,
                });
            } else {
                vars.push(VarFactor {
                    x_half2: 2 * nn + 1,
                    omx_half2: 1,
                    bin_half2: 1,
                });
            }
        }
        let mut pairs = Vec::new();
        for j in 0..m + 1 {
            for k in 0..m {
                pairs.push((2 * j, 2 * k + 1));
            }
        }
        let odds: Vec<usize> = (0..2 * m + 1).step_by(2).collect();
        let evens: Vec<usize> = (1..2 * m + 1).step_by(2).collect();
        let mfact: BigInt = (1..=m as u64).product::<u64>().into();
        let m1fact: BigInt = (1..=(m + 1) as u64).product::<u64>().into();
        DiagonalIntegrand {
            vars,
            pairs,
            vdm_groups: vec![odds, evens],
            geom_h2: None,
            pre_h2: (2 * m as i64 + 1) * nn + 2 * (m as i64) * (m as i64 + 1),
            pre_rat: Rat::new(BigInt::one(), mfact * m1fact),
        }
    };
    let xs = ExactSeries::new(Variable::X, expand(&spec, if n % 2 == 0 { 2 * order } else { order })?);
    if n % 2 == 0 {
        xs.even_to_t()
    } else {
        Ok(xs)
    }
}
