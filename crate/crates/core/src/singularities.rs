//! Unit-circle singularity families of the susceptibility sectors, their
//! exponents, density-of-singularities evidence for the natural boundary,
//! and the image of |k| = 1 in the nome plane.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{rat, Rat};
use crate::special::agm_complex;
use std::f64::consts::PI;

/// Kind of local behavior at a singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityClass {
    Logarithmic,
    Algebraic,
}

/// Where a singularity family comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularitySource {
    Bulk,
    Diagonal,
}

/// One singular point on the unit circle of s (bulk) or t (diagonal).
#[derive(Debug, Clone)]
pub struct SingularityRecord {
    /// sector index: the superscript of the sector it belongs to
    pub sector: u32,
    pub location: Complex64,
    pub angle: f64,
    /// local exponent: the sector behaves like eps^{exponent} (times log for
    /// the logarithmic class)
    pub exponent: Rat,
    pub log_flag: bool,
    pub source: SingularitySource,
    /// representative (j, k) indices that generated the angle
    pub indices: (u32, u32),
}

const ANGLE_DEDUP: f64 = 1e-12;

/// Exponent of the bulk sector at its unit-circle singularities:
/// odd sector 2m+1 behaves like eps^{2m(m+1)-1} ln eps, even sector 2m like
/// eps^{2m^2 - 3/2}.
pub fn bulk_exponent(sector: u32) -> (Rat, bool) {
    if sector % 2 == 1 {
        let m = (sector as i64 - 1) / 2;
        (rat(2 * m * (m + 1) - 1, 1), true)
    } else {
        let m = sector as i64 / 2;
        (rat(4 * m * m - 3, 2), false)
    }
}

/// Exponent of the diagonal sector at its unit-circle singularities:
/// even sector 2n behaves like eps^{2n^2-1} ln eps, odd sector 2n+1 like
/// eps^{(n+1)^2 - 1/2}.
pub fn diagonal_exponent(sector: u32) -> (Rat, bool) {
    if sector % 2 == 0 {
        let n = sector as i64 / 2;
        (rat(2 * n * n - 1, 1), true)
    } else {
        let n = (sector as i64 - 1) / 2;
        (rat(2 * (n + 1) * (n + 1) - 1, 2), false)
    }
}

/// All distinct angles theta with 2 cos(theta) = cos(2 pi j/n) + cos(2 pi k/n)
/// for (j, k) in {0..n-1}^2, both branches +-theta, deduplicated. Ordering is
/// deterministic: ascending angle in [0, 2 pi), ties impossible after dedup.
pub fn nickel_enumerate(sector: u32) -> Result<Vec<SingularityRecord>> {
    if sector == 0 || sector > 200 {
        return Err(Error::domain(format!(
            "sector must lie in 1..=200, got {sector}"
        )));
    }
    let n = sector;
    let (exponent, log_flag) = bulk_exponent(sector);
    let mut found: Vec<(f64, (u32, u32))> = Vec::new();
    for j in 0..n {
        for k in 0..n {
            let c = ((2.0 * PI * k as f64 / n as f64).cos()
                + (2.0 * PI * j as f64 / n as f64).cos())
                / 2.0;
            debug_assert!(c.abs() <= 1.0 + 1e-15);
            let theta = c.clamp(-1.0, 1.0).acos();
            for angle in [theta, 2.0 * PI - theta] {
                let angle = if (angle - 2.0 * PI).abs() < ANGLE_DEDUP { 0.0 } else { angle };
                match found.binary_search_by(|probe| probe.0.partial_cmp(&angle).unwrap()) {
                    Ok(_) => {}
                    Err(pos) => {
                        let close_left = pos > 0 && (angle - found[pos - 1].0) < ANGLE_DEDUP;
                        let close_right =
                            pos < found.len() && (found[pos].0 - angle) < ANGLE_DEDUP;
                        if !close_left && !close_right {
                            found.insert(pos, (angle, (j, k)));
                        }
                    }
                }
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|(angle, indices)| SingularityRecord {
            sector,
            location: Complex64::new(angle.cos(), angle.sin()),
            angle,
            exponent: exponent.clone(),
            log_flag,
            source: SingularitySource::Bulk,
            indices,
        })
        .collect())
}

/// Diagonal-sector singularities on |t| = 1. Even sector 2n: the n-th roots
/// of unity; odd sector 2n+1: t = exp(4 pi i m/(2n+1)) (squares of the
/// (2n+1)-th roots of unity, the principal-sheet solutions of t^{n+1/2} = 1).
pub fn diagonal_singularities(sector: u32) -> Result<Vec<SingularityRecord>> {
    if sector == 0 || sector > 200 {
        return Err(Error::domain(format!(
            "sector must lie in 1..=200, got {sector}"
        )));
    }
    let (exponent, log_flag) = diagonal_exponent(sector);
    let angles: Vec<(f64, (u32, u32))> = if sector % 2 == 0 {
        let n = sector / 2;
        (0..n)
            .map(|m| (2.0 * PI * m as f64 / n as f64, (m, 0)))
            .collect()
    } else {
        let order = sector; // 2n+1
        (0..order)
            .map(|m| {
                let a = 4.0 * PI * m as f64 / order as f64;
                (a.rem_euclid(2.0 * PI), (m, 0))
            })
            .collect()
    };
    let mut records: Vec<SingularityRecord> = angles
        .into_iter()
        .map(|(angle, indices)| SingularityRecord {
            sector,
            location: Complex64::new(angle.cos(), angle.sin()),
            angle,
            exponent: exponent.clone(),
            log_flag,
            source: SingularitySource::Diagonal,
            indices,
        })
        .collect();
    records.sort_by(|a, b| a.angle.partial_cmp(&b.angle).unwrap());
    Ok(records)
}

/// One row of the density table: singular angles accumulated over all bulk
/// sectors <= sector, and the widest angular gap left on the circle.
#[derive(Debug, Clone, Copy)]
pub struct DensityRow {
    pub sector: u32,
    pub cumulative_count: usize,
    pub max_gap: f64,
}

/// Cumulative density of bulk singular angles: the maximal gap must never
/// grow with the sector index (the circle fills in).
pub fn density_report(n_max: u32) -> Result<Vec<DensityRow>> {
    if n_max == 0 || n_max > 200 {
        return Err(Error::domain(format!("n_max must lie in 1..=200, got {n_max}")));
    }
    let mut angles: Vec<f64> = Vec::new();
    let mut rows = Vec::with_capacity(n_max as usize);
    for sector in 1..=n_max {
        for rec in nickel_enumerate(sector)? {
            match angles.binary_search_by(|p| p.partial_cmp(&rec.angle).unwrap()) {
                Ok(_) => {}
                Err(pos) => {
                    let close_left = pos > 0 && (rec.angle - angles[pos - 1]) < ANGLE_DEDUP;
                    let close_right =
                        pos < angles.len() && (angles[pos] - rec.angle) < ANGLE_DEDUP;
                    if !close_left && !close_right {
                        angles.insert(pos, rec.angle);
                    }
                }
            }
        }
        let max_gap = if angles.len() < 2 {
            2.0 * PI
        } else {
            let mut g: f64 = 2.0 * PI - angles.last().unwrap() + angles[0];
            for w in angles.windows(2) {
                g = g.max(w[1] - w[0]);
            }
            g
        };
        rows.push(DensityRow {
            sector,
            cumulative_count: angles.len(),
            max_gap,
        });
    }
    Ok(rows)
}

/// One sample of the nome curve.
#[derive(Debug, Clone, Copy)]
pub struct QCurvePoint {
    pub phi: f64,
    pub q: Complex64,
}

/// q(k) for k = e^{i phi} via the principal-branch complex AGM:
/// q = exp(-pi agm(1, k')/agm(1, k)), k' = sqrt(1 - k^2).
fn q_of_phi(phi: f64) -> Complex64 {
    // the exact limits: K(k) diverges at phi = 0, and both AGMs vanish
    // log-slowly at phi = pi; the curve passes through q = 1 at both
    if phi.rem_euclid(PI) == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let k = Complex64::new(phi.cos(), phi.sin());
    let kprime = (Complex64::new(1.0, 0.0) - k * k).sqrt();
    let one = Complex64::new(1.0, 0.0);
    let agm_k = agm_complex(one, k);
    let agm_kp = agm_complex(one, kprime);
    (-Complex64::new(PI, 0.0) * agm_kp / agm_k).exp()
}

/// Check continuity of the path between two samples by recursive bisection:
/// a smooth arc shrinks under subdivision, a branch flip keeps a fixed-size
/// jump in one subinterval. Errors out with the offending phi when a jump
/// survives.
fn check_continuity(phi0: f64, q0: Complex64, phi1: f64, q1: Complex64, depth: u32) -> Result<()> {
    let jump = (q1 - q0).norm();
    // the curve stays inside the closed unit disc, so any move below this
    // threshold cannot be a branch flip
    if jump < 0.05 {
        return Ok(());
    }
    if depth == 0 {
        return Err(Error::precision(format!(
            "branch-tracking discontinuity near phi = {}: |dq| = {jump}",
            0.5 * (phi0 + phi1)
        )));
    }
    let mid = 0.5 * (phi0 + phi1);
    let qm = q_of_phi(mid);
    let sub = (qm - q0).norm().max((q1 - qm).norm());
    if sub > 0.9 * jump {
        // subdivision is not helping: genuine discontinuity
        return Err(Error::precision(format!(
            "branch-tracking discontinuity near phi = {mid}: |dq| = {jump}"
        )));
    }
    check_continuity(phi0, q0, mid, qm, depth - 1)?;
    check_continuity(mid, qm, phi1, q1, depth - 1)
}

/// True at the phi values where q = 1 is attached as an exact limit
/// (k = +-1, where one of the AGMs degenerates and |dq/dphi| diverges
/// logarithmically).
fn is_limit_point(phi: f64) -> bool {
    phi.rem_euclid(PI) == 0.0
}

/// Ordered polyline of the image of |k| = 1 in the q-plane, phi in [0, 2 pi],
/// tracked from the real limit q(k=1) = 1. Continuity is verified on every
/// segment except those touching the exact limit points, where the approach
/// to q = 1 is logarithmically slow by nature rather than a branch artifact.
pub fn qcurve(samples: usize) -> Result<Vec<QCurvePoint>> {
    if samples < 16 {
        return Err(Error::domain(format!("need at least 16 samples, got {samples}")));
    }
    let mut pts = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let phi = 2.0 * PI * i as f64 / samples as f64;
        pts.push(QCurvePoint {
            phi,
            q: q_of_phi(phi),
        });
    }
    for w in pts.windows(2) {
        if is_limit_point(w[0].phi) || is_limit_point(w[1].phi) {
            continue;
        }
        check_continuity(w[0].phi, w[0].q, w[1].phi, w[1].q, 40)?;
    }
    Ok(pts)
}
