//! Zero ordinates on the critical line: Riemann–Siegel Z, Gram-block
//! bracketing, zero files, and the count audit against N̄.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::special::{gram_point, mean_count, rs_theta};
use crate::{Error, Result};

/// Default bisection tolerance for [`find_zeros`].
pub const DEFAULT_TOL: f64 = 1e-9;
/// Finest subdivision of a Gram interval tried inside a failing block.
pub const MAX_SUBDIVISION: usize = 64;
/// Largest |count − (N̄(t_max) − N̄(t_min))| accepted by [`verify_count`].
pub const COUNT_SLACK: f64 = 3.0;

const MIN_HEIGHT: f64 = 10.0;
const MIN_TOL: f64 = 1e-10;
const PARITY_GUARD: f64 = 1e-6;
const MAX_GOOD_SEARCH: i64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSource {
    Computed,
    Imported,
}

/// Sorted positive zero ordinates on a height window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    ordinates: Vec<f64>,
    t_min: f64,
    t_max: f64,
    source: ZeroSource,
    claimed_complete: bool,
}

impl ZeroSet {
    /// Checks that the ordinates are positive, strictly increasing and inside
    /// [t_min, t_max]. The set is not claimed complete.
    pub fn new(ordinates: Vec<f64>, t_min: f64, t_max: f64, source: ZeroSource) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min <= t_max && t_min >= 0.0) {
            return Err(Error::InvalidParameter(format!("bad zero window [{t_min}, {t_max}]")));
        }
        if let Some(w) = ordinates.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(format!("ordinates not strictly increasing at {}", w[1])));
        }
        if let Some(g) = ordinates.iter().find(|&&g| !(g > 0.0 && g >= t_min && g <= t_max)) {
            return Err(Error::InvalidParameter(format!("ordinate {g} outside [{t_min}, {t_max}]")));
        }
        Ok(Self { ordinates, t_min, t_max, source, claimed_complete: false })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn source(&self) -> ZeroSource {
        self.source
    }

    pub fn claimed_complete(&self) -> bool {
        self.claimed_complete
    }

    /// Ordinates in [lo, hi].
    pub fn in_range(&self, lo: f64, hi: f64) -> &[f64] {
        let a = self.ordinates.partition_point(|&g| g < lo);
        let b = self.ordinates.partition_point(|&g| g <= hi);
        &self.ordinates[a..b.max(a)]
    }

    /// Copy with the `index`-th ordinate dropped; never claimed complete.
    pub fn without(&self, index: usize) -> ZeroSet {
        let mut ordinates = self.ordinates.clone();
        ordinates.remove(index);
        ZeroSet { ordinates, claimed_complete: false, ..*self }
    }
}

// Riemann–Siegel remainder coefficients C_j as series in z = 2p − 1:
// even j in z², odd j as z times a series in z².
const C0: [f64; 22] = [
    0.3826834323650898,
    0.43724046807752043,
    0.1323765754803435,
    -0.013605026047674188,
    -0.013567621970103581,
    -0.0016237253231444653,
    0.0002970535373337969,
    7.94330087952147e-05,
    4.6556124614504504e-07,
    -1.4327251630955106e-06,
    -1.0354847112312946e-07,
    1.2357927083861738e-08,
    1.7881083857954906e-09,
    -3.391414389927036e-11,
    -1.6326633902565907e-11,
    -3.7851093185412205e-13,
    9.327423259201725e-14,
    5.221843015978137e-15,
    -3.350673072744264e-16,
    -3.4124265228117265e-17,
    5.751203341432399e-19,
    1.4895301363211506e-19,
];
const C1: [f64; 20] = [
    -0.026825102628375348,
    0.013784773426351853,
    0.03849125048223508,
    0.009871066299062077,
    -0.0033107597608584044,
    -0.0014647808577954152,
    -1.3207940624876963e-05,
    5.9227487018471416e-05,
    5.980242585373449e-06,
    -9.641322456169826e-07,
    -1.8334733722714413e-07,
    4.4670875627178334e-09,
    2.7096350821772744e-09,
    7.785288654315851e-11,
    -2.343762601089369e-11,
    -1.5830172789987521e-12,
    1.211994157372379e-13,
    1.4583781161108306e-14,
    -2.878630525813192e-16,
    -8.662862902123724e-17,
];
const C2: [f64; 21] = [
    0.005188542830293168,
    0.00030946583880634744,
    -0.011335941078229373,
    0.0022330457419581446,
    0.00519663740886233,
    0.0003439914407620834,
    -0.0005910648427470583,
    -0.00010229972547935857,
    2.0888392216992754e-05,
    5.927665493096536e-06,
    -1.6423838362436276e-07,
    -1.5161199700940684e-07,
    -5.907803698206668e-09,
    2.0911514859478188e-09,
    1.781564958329235e-10,
    -1.6164072455353832e-11,
    -2.3806962496667617e-12,
    5.398265295542595e-14,
    1.9750142196969516e-14,
    5.681507616736562e-18,
    1.6242867941481982e-18,
];
const C3: [f64; 19] = [
    -0.0013397160907194568,
    0.003744215136379394,
    -0.0013303178919321468,
    -0.0022654660765471786,
    0.0009548499998506731,
    0.0006010038458963604,
    -0.00010128858286776622,
    -6.865733449299826e-05,
    5.985366791538599e-07,
    3.331659851239947e-06,
    2.1919289102435082e-07,
    -7.890884245681494e-08,
    -9.414685081295262e-09,
    9.57011621088348e-10,
    1.8763137453470662e-10,
    -4.4378376793233995e-12,
    -2.242673850561735e-12,
    -3.846801385368337e-15,
    -1.2966923228023615e-15,
];
const C4: [f64; 20] = [
    0.00046483389361763383,
    -0.001005660736534047,
    0.00024044856573725794,
    0.0010283086149702322,
    -0.0007657861071755644,
    -0.00020365286803084818,
    0.0002321229049106873,
    3.2602144243865195e-05,
    -2.5579062517949524e-05,
    -4.107464438915745e-06,
    1.1781113640371294e-06,
    2.445656142248458e-07,
    -2.3915824767344323e-08,
    -7.505214207035756e-09,
    1.3312279416258429e-10,
    1.344062675422562e-10,
    8.255317191230658e-13,
    3.443526029739563e-13,
    1.5992334460605823e-16,
    5.0785414642945365e-17,
];

fn series_even(c: &[f64], z2: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * z2 + x)
}

/// Riemann–Siegel Z(t) for t >= 10, with remainder terms C₀ through C₄.
pub fn rs_z(t: f64) -> Result<f64> {
    if !(t >= MIN_HEIGHT) || !t.is_finite() {
        return Err(Error::Domain { what: "rs_z", value: t });
    }
    Ok(z_unchecked(t))
}

/// Same formula without the domain check; needs t > 2π.
fn z_unchecked(t: f64) -> f64 {
    let a = (t / std::f64::consts::TAU).sqrt();
    let n = a.floor() as u64;
    let p = a - n as f64;
    let theta = rs_theta(t).expect("t > 0");
    let mut main = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        main += (theta - t * kf.ln()).cos() / kf.sqrt();
    }
    let z = 2.0 * p - 1.0;
    let z2 = z * z;
    let inv = a.recip();
    let r = series_even(&C0, z2)
        + inv * (z * series_even(&C1, z2)
            + inv * (series_even(&C2, z2) + inv * (z * series_even(&C3, z2) + inv * series_even(&C4, z2))));
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main + sign * r / a.sqrt()
}

fn gram_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 }
}

#[derive(Clone, Copy, Debug)]
struct GramPoint {
    n: i64,
    t: f64,
    z: f64,
}

impl GramPoint {
    fn at(n: i64) -> Result<Self> {
        let t: f64 = gram_point(n)?;
        Ok(Self { n, t, z: z_unchecked(t) })
    }

    fn is_good(&self) -> bool {
        gram_sign(self.n) * self.z > 0.0
    }
}

/// Largest n >= −1 with g_n <= t.
fn gram_index_below(t: f64) -> Result<i64> {
    let mut n = ((rs_theta(t)? / std::f64::consts::PI).floor() as i64).max(-1);
    while n > -1 && gram_point::<f64>(n)? > t {
        n -= 1;
    }
    Ok(n)
}

/// Smallest n with g_n >= t.
fn gram_index_above(t: f64) -> Result<i64> {
    let mut n = ((rs_theta(t)? / std::f64::consts::PI).ceil() as i64).max(-1);
    while gram_point::<f64>(n)? < t {
        n += 1;
    }
    Ok(n)
}

struct BlockOutcome {
    zeros: Vec<f64>,
    balanced: bool,
}

fn count_changes(zs: &[f64]) -> usize {
    zs.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count()
}

/// Bisects a sign change of Z on [a, b] down to width `tol`.
fn bisect(mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> f64 {
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = z_unchecked(m);
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Zeros of one block between consecutive good Gram points, refining the
/// sampling until b − a sign changes are seen.
fn solve_block(points: &[GramPoint], t_min: f64, t_max: f64, tol: f64) -> Result<BlockOutcome> {
    let first = points[0];
    let last = points[points.len() - 1];
    let expected = (last.n - first.n) as usize;

    let mut ts: Vec<f64> = points.iter().map(|g| g.t).collect();
    let mut zs: Vec<f64> = points.iter().map(|g| g.z).collect();
    let mut found = count_changes(&zs);
    let mut m = 1;
    while found < expected && m < MAX_SUBDIVISION {
        m *= 2;
        ts.clear();
        zs.clear();
        for w in points.windows(2) {
            let h = (w[1].t - w[0].t) / m as f64;
            ts.push(w[0].t);
            zs.push(w[0].z);
            for j in 1..m {
                let t = w[0].t + h * j as f64;
                ts.push(t);
                zs.push(z_unchecked(t));
            }
        }
        ts.push(last.t);
        zs.push(last.z);
        found = count_changes(&zs);
    }
    if found < expected {
        return Err(Error::IncompleteDetection { lo: first.t, hi: last.t, found, expected });
    }

    let mut zeros = Vec::with_capacity(found);
    for i in 0..ts.len() - 1 {
        let (a, b) = (ts[i], ts[i + 1]);
        if (zs[i] > 0.0) == (zs[i + 1] > 0.0) || b < t_min || a > t_max {
            continue;
        }
        let g = bisect(a, b, zs[i], tol);
        if g >= t_min && g <= t_max {
            zeros.push(g);
        }
    }
    Ok(BlockOutcome { zeros, balanced: found == expected })
}

/// Zeros of Z(t) in [t_min, t_max], each located to within `tol`.
///
/// The window is widened to good Gram points on both sides and split into
/// Gram blocks, which are solved in parallel and concatenated in order.
pub fn find_zeros(t_min: f64, t_max: f64, tol: f64) -> Result<ZeroSet> {
    if !(t_min >= MIN_HEIGHT) || !(t_max > t_min) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "zero window must satisfy 10 <= t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::InvalidParameter(format!("tol must be >= 1e-10, got {tol}")));
    }

    let mut n_lo = gram_index_below(t_min)?;
    while !GramPoint::at(n_lo)?.is_good() {
        if n_lo == -1 {
            return Err(Error::Numerical("no good Gram point below the window".into()));
        }
        n_lo -= 1;
    }
    let mut n_hi = gram_index_above(t_max)?;
    let start_hi = n_hi;
    while !GramPoint::at(n_hi)?.is_good() {
        n_hi += 1;
        if n_hi - start_hi > MAX_GOOD_SEARCH {
            return Err(Error::Numerical("no good Gram point above the window".into()));
        }
    }

    let points: Vec<GramPoint> =
        (n_lo..=n_hi).into_par_iter().map(GramPoint::at).collect::<Vec<_>>().into_iter().collect::<Result<_>>()?;
    let good: Vec<usize> = points.iter().enumerate().filter(|(_, g)| g.is_good()).map(|(i, _)| i).collect();

    let outcomes: Vec<Result<BlockOutcome>> = good
        .par_windows(2)
        .map(|w| solve_block(&points[w[0]..=w[1]], t_min, t_max, tol))
        .collect();

    let mut ordinates = Vec::new();
    let mut balanced = true;
    for outcome in outcomes {
        let block = outcome?;
        balanced &= block.balanced;
        ordinates.extend(block.zeros);
    }
    ordinates.dedup();

    let mut set = ZeroSet::new(ordinates, t_min, t_max, ZeroSource::Computed)?;
    set.claimed_complete = balanced && verify_count(&set).pass;
    Ok(set)
}

/// Result of comparing a zero count with the smooth count N̄.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub count: usize,
    /// N̄(t_max) − N̄(t_min).
    pub expected: f64,
    /// count − expected.
    pub discrepancy: f64,
    /// Whether the count has the parity forced by the signs of Z at the
    /// endpoints; `None` when an endpoint is too close to a zero or below 2π.
    pub parity_ok: Option<bool>,
    /// S(t_min) = N(t_min) − N̄(t_min), known only below the first zero.
    pub s_at_t_min: Option<f64>,
    /// S(t_max), known only when the window starts below the first zero.
    pub s_at_t_max: Option<f64>,
    pub pass: bool,
}

/// Every zero lies above this height (γ₁ = 14.1347…).
pub const FIRST_ZERO_LOWER: f64 = 14.134;
const PARITY_FLOOR: f64 = 7.0;

/// Audits |zs| against N̄(t_max) − N̄(t_min).
pub fn verify_count(zs: &ZeroSet) -> CountReport {
    let count = zs.len();
    let (lo, hi) = (zs.t_min, zs.t_max);
    let expected = if hi > lo && lo > 0.0 {
        mean_count::<f64>(hi).unwrap() - mean_count::<f64>(lo).unwrap()
    } else {
        0.0
    };
    let discrepancy = count as f64 - expected;

    let parity_ok = if hi > lo && lo >= PARITY_FLOOR {
        let (za, zb) = (z_unchecked(lo), z_unchecked(hi));
        (za.abs() > PARITY_GUARD && zb.abs() > PARITY_GUARD)
            .then_some(((za > 0.0) != (zb > 0.0)) == (count % 2 == 1))
    } else {
        None
    };

    let (s_at_t_min, s_at_t_max) = if lo > 0.0 && lo < FIRST_ZERO_LOWER {
        let n_lo = mean_count::<f64>(lo).unwrap();
        (Some(-n_lo), Some(count as f64 - mean_count::<f64>(hi).unwrap()))
    } else {
        (None, None)
    };

    let pass = discrepancy.abs() <= COUNT_SLACK && parity_ok != Some(false);
    CountReport { count, expected, discrepancy, parity_ok, s_at_t_min, s_at_t_max, pass }
}

/// Zeros read from a table, with any ordering complaints.
#[derive(Clone, Debug)]
pub struct ImportedZeros {
    pub zeros: ZeroSet,
    pub warnings: Vec<String>,
}

/// Reads a zero file: one decimal per line, `#` comments, γ = value + `t_offset`.
pub fn import_zeros(path: impl AsRef<Path>, t_offset: f64) -> Result<ImportedZeros> {
    let file = File::open(path)?;
    parse_zeros(BufReader::new(file), t_offset)
}

/// As [`import_zeros`], from any reader. The window is the span of the
/// ordinates (empty input gives [0, 0]).
pub fn parse_zeros(reader: impl BufRead, t_offset: f64) -> Result<ImportedZeros> {
    if !t_offset.is_finite() {
        return Err(Error::InvalidParameter(format!("zero offset must be finite, got {t_offset}")));
    }
    let mut values = Vec::new();
    let mut warnings = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let v: f64 = s.parse().map_err(|e| Error::Parse { line: i + 1, message: format!("{s:?}: {e}") })?;
        let g = v + t_offset;
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::Parse { line: i + 1, message: format!("ordinate {g} is not a positive number") });
        }
        if let Some(&prev) = values.last() {
            if g <= prev {
                warnings.push(format!("line {}: {g} does not increase on {prev}", i + 1));
            }
        }
        values.push(g);
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    let (t_min, t_max) = match (values.first(), values.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0.0, 0.0),
    };
    let mut zeros = ZeroSet::new(values, t_min, t_max, ZeroSource::Imported)?;
    zeros.claimed_complete = verify_count(&zeros).pass;
    Ok(ImportedZeros { zeros, warnings })
}
