//! Moments of `A_p(λ)`, their Catalan-weighted limits, the two candidate
//! limiting densities and histogram diagnostics.
//!
//! Every moment sum is an exact `i128`; floating point only enters when a sum
//! is divided by `p^{m+1}` for reporting.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::char_sums::GaussContext;
use crate::check::Check;
use crate::curves::{clausen_trace, surface_a_table};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::gn_hyper::GnEvaluator;

/// Largest moment order accepted by the moment routines.
pub const MAX_MOMENT: u32 = 8;

/// Absolute tolerance requested from the quadrature routine.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// The `i`-th Catalan number `(2i)!/(i!(i+1)!)`.
pub fn catalan(i: u32) -> BigInt {
    let mut c = BigInt::one();
    for k in 0..i {
        c = c * (2 * (2 * k as u64 + 1)) / (k as u64 + 2);
    }
    c
}

/// `Σ_{i=0}^m (-1)^i (m choose i) C_i`, the limit of `Σ_λ A_p(λ)^m / p^{m+1}`.
pub fn catalan_moment_coef(m: u32) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for i in 0..=m {
        let term = &binom * catalan(i);
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * (m - i) / (i + 1);
    }
    total
}

fn small(x: &BigInt) -> i64 {
    x.to_i64()
        .expect("moment coefficients for m <= 8 fit in i64")
}

/// Which values a [`MomentReport`] summarizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MomentSource {
    /// `A_p(λ)`, `λ ∈ F_p^×`.
    #[serde(rename = "A_p")]
    Surface,
    /// `p · (-Γ_p(1/3)³ ₃G₃(λ))`, `λ != 1`.
    #[serde(rename = "3G3")]
    G3,
    /// `₉G₉(λ)`, `λ != 1`.
    #[serde(rename = "9G9")]
    G9,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub p: u64,
    pub m_max: u32,
    pub source: MomentSource,
    /// `Σ v^m` for `m = 1..=m_max`.
    pub raw: Vec<i128>,
    /// `raw[m] / p^{m+1}` as reduced fractions.
    pub normalized: Vec<String>,
    pub normalized_approx: Vec<f64>,
    pub targets: Vec<i64>,
    pub gaps: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<Check>,
}

impl MomentReport {
    fn from_values(
        p: u64,
        values: &[i64],
        m_max: u32,
        source: MomentSource,
        targets: Vec<i64>,
    ) -> Self {
        let raw = power_sums(values, m_max);
        let mut normalized = Vec::new();
        let mut normalized_approx = Vec::new();
        let mut gaps = Vec::new();
        for (i, s) in raw.iter().enumerate() {
            let m = i as u32 + 1;
            let q = BigRational::new(BigInt::from(*s), BigInt::from(p).pow(m + 1));
            let v = q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap();
            normalized.push(q.to_string());
            normalized_approx.push(v);
            gaps.push(v - targets[i] as f64);
        }
        MomentReport {
            p,
            m_max,
            source,
            raw,
            normalized,
            normalized_approx,
            targets,
            gaps,
            cross_checks: Vec::new(),
        }
    }
}

/// `[Σ v, Σ v², ..., Σ v^{m_max}]`, exact.
pub fn power_sums(values: &[i64], m_max: u32) -> Vec<i128> {
    let zero = vec![0i128; m_max as usize];
    values
        .par_iter()
        .fold(
            || zero.clone(),
            |mut acc, &v| {
                let mut x = 1i128;
                for slot in acc.iter_mut() {
                    x *= v as i128;
                    *slot += x;
                }
                acc
            },
        )
        .reduce(
            || zero.clone(),
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

fn check_m_max(m_max: u32) -> Result<()> {
    if m_max == 0 || m_max > MAX_MOMENT {
        return Err(Error::Precondition(format!(
            "moment order must be in 1..={MAX_MOMENT}, got {m_max}"
        )));
    }
    Ok(())
}

/// Power sums of `A_p(λ)` over `λ ∈ F_p^×`, with targets `catalan_moment_coef(m)`.
pub fn empirical_moments(f: &PrimeField, m_max: u32) -> Result<MomentReport> {
    check_m_max(m_max)?;
    let table = surface_a_table(f);
    let targets = (1..=m_max)
        .map(|m| small(&catalan_moment_coef(m)))
        .collect();
    Ok(MomentReport::from_values(
        f.p(),
        &table,
        m_max,
        MomentSource::Surface,
        targets,
    ))
}

/// Which hypergeometric family [`gn_moment_check`] sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GnFamily {
    G3,
    G9,
}

/// Power sums of the decoded hypergeometric values over `λ != 1`, with
/// targets `(-1)^m · catalan_moment_coef(m)`.
///
/// For `₃G₃` the summed integer is `p · (-Γ_p(1/3)³) ₃G₃(λ)`; for `₉G₉` it is
/// `₉G₉(λ)` itself. Both equal `-A_p(1-λ)` for `λ ∉ {0, 1}` and vanish at
/// `λ = 0`, where `-A_p(1) = 1`. Hence
/// `raw[m] = (-1)^m Σ_{λ≠0} A_p(λ)^m - 1`, which is recorded as a cross-check.
pub fn gn_moment_check(ctx: &GaussContext, family: GnFamily, m_max: u32) -> Result<MomentReport> {
    check_m_max(m_max)?;
    let f = ctx.field();
    let p = f.p();
    let ev = GnEvaluator::new(ctx);
    // Warm the coefficient cache before the parallel sweep.
    let (source, values) = match family {
        GnFamily::G3 => {
            ev.g3_times_p(0, true)?;
            let v: Result<Vec<i64>> = (0..p)
                .into_par_iter()
                .filter(|&l| l != 1)
                .map(|l| ev.g3_times_p(l, true).map(|d| d.value as i64))
                .collect();
            (MomentSource::G3, v?)
        }
        GnFamily::G9 => {
            ev.g9_decoded(0)?;
            let v: Result<Vec<i64>> = (0..p)
                .into_par_iter()
                .filter(|&l| l != 1)
                .map(|l| ev.g9_decoded(l).map(|d| d.value as i64))
                .collect();
            (MomentSource::G9, v?)
        }
    };
    let targets = (1..=m_max)
        .map(|m| {
            let c = small(&catalan_moment_coef(m));
            if m % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let mut report = MomentReport::from_values(p, &values, m_max, source, targets);
    let a_sums = power_sums(&surface_a_table(f), m_max);
    for (i, (raw, a)) in report.raw.iter().zip(&a_sums).enumerate() {
        let m = i as u32 + 1;
        let sign = if m.is_multiple_of(2) { 1 } else { -1 };
        report.cross_checks.push(Check::equal(
            "gn_moment_vs_surface",
            format!("p={p} m={m}"),
            *raw,
            sign * a - 1,
        ));
    }
    Ok(report)
}

/// The two candidate limiting densities of `A_p(λ)/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `√((3-t)/(1+t))/(2π)` on `(-1, 3)`.
    A,
    /// `√((3+t)/(1-t))/(2π)` on `(-3, 1)`.
    B,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::A => "a",
            Model::B => "b",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Model::A => 1.0,
            Model::B => -1.0,
        }
    }
}

pub fn density(model: Model, t: f64) -> f64 {
    let u = model.sign() * t;
    if u <= -1.0 || u >= 3.0 {
        return 0.0;
    }
    ((3.0 - u) / (1.0 + u)).sqrt() / (2.0 * PI)
}

/// `∫_{-1}^{x} √((3-u)/(1+u))/(2π) du` via `u = s² - 1`, which turns the
/// integrand into `√(4-s²)/π` on `[0, √(1+x)]`.
fn mass_a(x: f64) -> f64 {
    if x <= -1.0 {
        return 0.0;
    }
    if x >= 3.0 {
        return 1.0;
    }
    let upper = (1.0 + x).sqrt();
    let out = quadrature::double_exponential::integrate(
        |s| (4.0 - s * s).max(0.0).sqrt() / PI,
        0.0,
        upper,
        QUADRATURE_TOL,
    );
    out.integral
}

pub fn model_cdf(model: Model, t: f64) -> f64 {
    match model {
        Model::A => mass_a(t),
        Model::B => 1.0 - mass_a(-t),
    }
}

/// `∫ t^m f(t) dt` over the support, by quadrature in the same variable.
pub fn model_moment(model: Model, m: u32) -> f64 {
    let out = quadrature::double_exponential::integrate(
        |s| {
            let u = s * s - 1.0;
            (model.sign() * u).powi(m as i32) * (4.0 - s * s).max(0.0).sqrt() / PI
        },
        0.0,
        2.0,
        QUADRATURE_TOL,
    );
    out.integral
}

#[derive(Clone, Debug, Serialize)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
    pub empirical_density: f64,
    /// Mean of model density `a` over the bin.
    pub model_a: f64,
    pub model_b: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramReport {
    pub p: u64,
    pub samples: u64,
    pub bins: Vec<Bin>,
    pub ks_a: f64,
    pub ks_b: f64,
    pub winner: Model,
}

impl HistogramReport {
    /// Rows `bin_left,bin_right,count,empirical_density,model_a,model_b`.
    pub fn to_csv_rows(&self) -> Vec<[String; 6]> {
        self.bins
            .iter()
            .map(|b| {
                [
                    b.left.to_string(),
                    b.right.to_string(),
                    b.count.to_string(),
                    b.empirical_density.to_string(),
                    b.model_a.to_string(),
                    b.model_b.to_string(),
                ]
            })
            .collect()
    }
}

pub const CSV_HEADER: [&str; 6] = [
    "bin_left",
    "bin_right",
    "count",
    "empirical_density",
    "model_a",
    "model_b",
];

/// Kolmogorov–Smirnov distance between the empirical law of `values[i]/p` and
/// a model CDF.
pub fn ks_distance(p: u64, values: &[i64], model: Model) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        let cdf = model_cdf(model, v as f64 / p as f64);
        d = d.max((i as f64 / n - cdf).abs());
        d = d.max((j as f64 / n - cdf).abs());
        i = j;
    }
    d
}

/// Histogram of `values[i]/p` on `[-3, 3]` with both model overlays.
pub fn histogram(p: u64, values: &[i64], bins: usize) -> Result<HistogramReport> {
    if bins < 10 {
        return Err(Error::Precondition(format!(
            "need at least 10 bins, got {bins}"
        )));
    }
    let mut counts = vec![0u64; bins];
    for &v in values {
        if v.unsigned_abs() > 3 * p {
            return Err(Error::Precondition(format!("value {v} exceeds 3p")));
        }
        // floor((v + 3p) · bins / 6p), with the right edge folded into the last bin.
        let k = ((v + 3 * p as i64) as u128 * bins as u128 / (6 * p) as u128) as usize;
        counts[k.min(bins - 1)] += 1;
    }
    let n = values.len() as f64;
    let width = 6.0 / bins as f64;
    let bins_out = counts
        .iter()
        .enumerate()
        .map(|(k, &count)| {
            let left = -3.0 + k as f64 * width;
            let right = -3.0 + (k + 1) as f64 * width;
            let mean = |m| (model_cdf(m, right) - model_cdf(m, left)) / width;
            Bin {
                left,
                right,
                count,
                empirical_density: count as f64 / (n * width),
                model_a: mean(Model::A),
                model_b: mean(Model::B),
            }
        })
        .collect();
    let ks_a = ks_distance(p, values, Model::A);
    let ks_b = ks_distance(p, values, Model::B);
    Ok(HistogramReport {
        p,
        samples: values.len() as u64,
        bins: bins_out,
        ks_a,
        ks_b,
        winner: if ks_b < ks_a { Model::B } else { Model::A },
    })
}

/// Histogram of `A_p(λ)/p` over `λ ∈ F_p^×`.
pub fn distribution_report(f: &PrimeField, bins: usize) -> Result<HistogramReport> {
    histogram(f.p(), &surface_a_table(f), bins)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClausenMomentReport {
    pub p: u64,
    /// `Σ_λ a_Cl(λ²)^{2j}` for `j = 1..=j_max`, over `λ ∈ F_p^×` with `λ² != -1`.
    pub raw: Vec<i128>,
    pub normalized: Vec<f64>,
    /// Catalan numbers `C_j`.
    pub targets: Vec<u64>,
}

/// Even moments of the Clausen traces at square parameters, scaled by `p^{j+1}`.
pub fn clausen_even_moments(f: &PrimeField, j_max: u32) -> Result<ClausenMomentReport> {
    check_m_max(j_max)?;
    let p = f.p();
    let traces: Vec<i64> = (1..p)
        .into_par_iter()
        .filter_map(|l| {
            let s = f.mul(l, l);
            (s != p - 1).then(|| clausen_trace(f, s).expect("λ² ∉ {0, -1}"))
        })
        .collect();
    let squares: Vec<i64> = traces.iter().map(|a| a * a).collect();
    let raw = power_sums(&squares, j_max);
    let normalized = raw
        .iter()
        .enumerate()
        .map(|(i, s)| *s as f64 / (p as f64).powi(i as i32 + 2))
        .collect();
    let targets = (1..=j_max).map(|j| catalan(j).to_u64().unwrap()).collect();
    Ok(ClausenMomentReport {
        p,
        raw,
        normalized,
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `F_a(t) = (π - θ + sin θ)/π` with `t = 1 + 2cos θ`.
    fn cdf_a_closed(t: f64) -> f64 {
        if t <= -1.0 {
            return 0.0;
        }
        if t >= 3.0 {
            return 1.0;
        }
        let theta = ((t - 1.0) / 2.0).acos();
        (PI - theta + theta.sin()) / PI
    }

    #[test]
    fn catalan_numbers() {
        let c: Vec<i64> = (0..7).map(|i| small(&catalan(i))).collect();
        assert_eq!(c, [1, 1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn moment_coefficients() {
        let c: Vec<i64> = (0..=6).map(|m| small(&catalan_moment_coef(m))).collect();
        assert_eq!(c, [1, 0, 1, -1, 3, -6, 15]);
    }

    #[test]
    fn densities_integrate_to_one_and_mirror() {
        for model in [Model::A, Model::B] {
            assert!((model_cdf(model, 3.0) - 1.0).abs() < 1e-12);
            assert!((model_moment(model, 0) - 1.0).abs() < 1e-8);
        }
        for k in -300..=300 {
            let t = k as f64 / 100.0;
            assert!((density(Model::A, t) - density(Model::B, -t)).abs() <= 1e-12);
        }
        assert_eq!(density(Model::A, -2.0), 0.0);
        assert_eq!(density(Model::B, 2.0), 0.0);
    }

    #[test]
    fn cdf_matches_closed_form() {
        for k in -120..=320 {
            let t = k as f64 / 100.0;
            assert!(
                (model_cdf(Model::A, t) - cdf_a_closed(t)).abs() < 1e-8,
                "t={t}"
            );
            assert!((model_cdf(Model::B, -t) - (1.0 - cdf_a_closed(t))).abs() < 1e-8);
        }
    }

    #[test]
    fn model_moments_are_catalan_coefficients_up_to_orientation() {
        for m in 0..=6u32 {
            let c = small(&catalan_moment_coef(m)) as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert!((model_moment(Model::B, m) - c).abs() < 1e-7, "m={m}");
            assert!((model_moment(Model::A, m) - sign * c).abs() < 1e-7, "m={m}");
        }
    }

    #[test]
    fn power_sums_exact() {
        assert_eq!(power_sums(&[2, -3, 5], 3), vec![4, 38, 106]);
    }

    #[test]
    fn moment_order_guard() {
        let f = PrimeField::new(7).unwrap();
        assert!(empirical_moments(&f, 9).is_err());
        assert!(empirical_moments(&f, 0).is_err());
    }

    #[test]
    fn histogram_counts_and_bounds() {
        let f = PrimeField::new(101).unwrap();
        let h = distribution_report(&f, 12).unwrap();
        assert_eq!(h.bins.iter().map(|b| b.count).sum::<u64>(), 100);
        assert!(histogram(5, &[16], 10).is_err());
        assert!(histogram(5, &[1], 9).is_err());
        let h = histogram(5, &[15, -15], 10).unwrap();
        assert_eq!((h.bins[0].count, h.bins[9].count), (1, 1));
    }

    #[test]
    fn ks_of_point_mass() {
        // All mass at t = 1: model a has F(1) = 1/3 + √3/(2π).
        let d = ks_distance(7, &[7, 7], Model::A);
        let f1 = cdf_a_closed(1.0);
        assert!((d - f1.max(1.0 - f1)).abs() < 1e-9);
    }
}
