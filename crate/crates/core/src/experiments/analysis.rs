//! Regression, rank correlation and threshold tables over sweep records.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sweep::RunRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub count: usize,
}

/// Least squares of `ys` on `xs`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParameter("x and y lengths differ".into()));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "a fit needs at least 3 points, got {n}"
        )));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("degenerate fit: all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        count: n,
    })
}

/// Pooled fit of `rounds_total` against `m`.
pub fn fit_rounds_vs_edges(records: &[RunRecord]) -> Result<LinearFit> {
    let xs: Vec<f64> = records.iter().map(|r| r.m as f64).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.rounds_total as f64).collect();
    linear_fit(&xs, &ys)
}

/// Key of a (p, Tmax/n) stratum; the ratio is rounded to 4 decimals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub p: f64,
    pub ratio: f64,
}

fn stratum_of(r: &RunRecord) -> Stratum {
    Stratum {
        p: r.p,
        ratio: (r.lifetime as f64 / r.n as f64 * 1e4).round() / 1e4,
    }
}

/// One fit per (p, Tmax/n) stratum. Strata that cannot be fitted are left
/// out.
pub fn fit_strata(records: &[RunRecord]) -> Vec<(Stratum, LinearFit)> {
    let mut groups: BTreeMap<(u64, u64), (Stratum, Vec<&RunRecord>)> = BTreeMap::new();
    for r in records {
        let s = stratum_of(r);
        groups
            .entry((s.p.to_bits(), s.ratio.to_bits()))
            .or_insert_with(|| (s, Vec::new()))
            .1
            .push(r);
    }
    let mut out: Vec<(Stratum, LinearFit)> = groups
        .into_values()
        .filter_map(|(s, rs)| {
            let owned: Vec<RunRecord> = rs.into_iter().cloned().collect();
            fit_rounds_vs_edges(&owned).ok().map(|f| (s, f))
        })
        .collect();
    out.sort_by(|a, b| (a.0.p, a.0.ratio).partial_cmp(&(b.0.p, b.0.ratio)).expect("finite"));
    out
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "spearman needs two equal-length samples of size >= 2".into(),
        ));
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::InvalidParameter(
            "spearman is undefined for a constant sample".into(),
        ));
    }
    Ok(cov / (vx * vy).sqrt())
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Mean discovery fraction for every p value, ascending in p. Records
/// without rounds are ignored.
pub fn fraction_by_p(records: &[RunRecord]) -> Vec<(f64, f64)> {
    let mut groups: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
    for r in records {
        if let Some(f) = r.discovery_fraction() {
            let e = groups.entry(r.p.to_bits()).or_insert((r.p, 0.0, 0));
            e.1 += f;
            e.2 += 1;
        }
    }
    let mut out: Vec<(f64, f64)> = groups.into_values().map(|(p, s, c)| (p, s / c as f64)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Spearman correlation between p and its mean discovery fraction.
pub fn p_fraction_correlation(records: &[RunRecord]) -> Result<f64> {
    let by_p = fraction_by_p(records);
    let (ps, fs): (Vec<f64>, Vec<f64>) = by_p.into_iter().unzip();
    spearman(&ps, &fs)
}

/// Records eligible for the threshold table: p > 0, m > 0 and at least one
/// round played.
fn threshold_eligible(r: &RunRecord) -> bool {
    r.p > 0.0 && r.m > 0 && r.rounds_total > 0
}

/// `n p / Tmax`.
pub fn density_ratio(r: &RunRecord) -> f64 {
    r.n as f64 * r.p / r.lifetime as f64
}

/// Means over records of `n p / Tmax` in `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdBucket {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub discovery_fraction: f64,
    pub decc_mean_size: f64,
    /// Components per edge record.
    pub decc_per_edge: f64,
}

/// Buckets per half decade of `n p / Tmax`. Empty buckets are omitted.
pub fn threshold_report(records: &[RunRecord]) -> Vec<ThresholdBucket> {
    let mut groups: BTreeMap<i64, Vec<&RunRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| threshold_eligible(r)) {
        let key = (2.0 * density_ratio(r).log10() + 1e-9).floor() as i64;
        groups.entry(key).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(key, rs)| {
            let mut b = summarize(&rs);
            b.lo = 10f64.powf(key as f64 / 2.0);
            b.hi = 10f64.powf((key + 1) as f64 / 2.0);
            b
        })
        .collect()
}

/// Summary over eligible records whose `n p / Tmax` satisfies `pred`.
pub fn threshold_group(records: &[RunRecord], pred: impl Fn(f64) -> bool) -> Option<ThresholdBucket> {
    let rs: Vec<&RunRecord> = records
        .iter()
        .filter(|r| threshold_eligible(r) && pred(density_ratio(r)))
        .collect();
    (!rs.is_empty()).then(|| summarize(&rs))
}

fn summarize(rs: &[&RunRecord]) -> ThresholdBucket {
    let c = rs.len() as f64;
    let (lo, hi) = rs
        .iter()
        .map(|r| density_ratio(r))
        .fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
    ThresholdBucket {
        lo,
        hi,
        count: rs.len(),
        discovery_fraction: rs.iter().filter_map(|r| r.discovery_fraction()).sum::<f64>() / c,
        decc_mean_size: rs.iter().map(|r| r.decc_mean_size).sum::<f64>() / c,
        decc_per_edge: rs.iter().map(|r| r.decc_count as f64 / r.m as f64).sum::<f64>() / c,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub records: usize,
    pub won: usize,
    pub pooled: Option<LinearFit>,
    /// Pooled fit over strata with `p >= 0.3`.
    pub dense: Option<LinearFit>,
    pub strata: Vec<(Stratum, LinearFit)>,
    pub fraction_by_p: Vec<(f64, f64)>,
    pub p_fraction_spearman: Option<f64>,
    pub thresholds: Vec<ThresholdBucket>,
    pub sparse_group: Option<ThresholdBucket>,
    pub dense_group: Option<ThresholdBucket>,
}

pub fn analyze(records: &[RunRecord]) -> AnalysisReport {
    let dense: Vec<RunRecord> = records.iter().filter(|r| r.p >= 0.3).cloned().collect();
    AnalysisReport {
        records: records.len(),
        won: records.iter().filter(|r| r.won).count(),
        pooled: fit_rounds_vs_edges(records).ok(),
        dense: fit_rounds_vs_edges(&dense).ok(),
        strata: fit_strata(records),
        fraction_by_p: fraction_by_p(records),
        p_fraction_spearman: p_fraction_correlation(records).ok(),
        thresholds: threshold_report(records),
        sparse_group: threshold_group(records, |x| x <= 0.01),
        dense_group: threshold_group(records, |x| x >= 1.0),
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let fit = |f: &Option<LinearFit>| match f {
            Some(f) => format!(
                "slope {:.4}  intercept {:.4}  r2 {:.4}  ({} runs)",
                f.slope, f.intercept, f.r_squared, f.count
            ),
            None => "n/a".into(),
        };
        let _ = writeln!(s, "runs: {}  won: {}", self.records, self.won);
        let _ = writeln!(s, "rounds ~ m, pooled: {}", fit(&self.pooled));
        let _ = writeln!(s, "rounds ~ m, p >= 0.3: {}", fit(&self.dense));
        let _ = writeln!(s, "\nper stratum (p, Tmax/n):");
        for (st, f) in &self.strata {
            let _ = writeln!(s, "  p={:<5} ratio={:<6} {}", st.p, st.ratio, fit(&Some(*f)));
        }
        let _ = writeln!(s, "\ndiscovery fraction by p:");
        for (p, f) in &self.fraction_by_p {
            let _ = writeln!(s, "  p={p:<5} {f:.4}");
        }
        match self.p_fraction_spearman {
            Some(rho) => {
                let _ = writeln!(s, "spearman(p, fraction): {rho:.4}");
            }
            None => {
                let _ = writeln!(s, "spearman(p, fraction): n/a");
            }
        }
        let _ = writeln!(s, "\nn p / Tmax buckets: [lo, hi) runs fraction decc_size decc/m");
        for b in &self.thresholds {
            let _ = writeln!(
                s,
                "  [{:.4}, {:.4}) {:>5} {:.4} {:.4} {:.4}",
                b.lo, b.hi, b.count, b.discovery_fraction, b.decc_mean_size, b.decc_per_edge
            );
        }
        for (name, g) in [("<= 0.01", &self.sparse_group), (">= 1", &self.dense_group)] {
            if let Some(b) = g {
                let _ = writeln!(
                    s,
                    "  n p / Tmax {name}: {} runs, fraction {:.4}, decc size {:.4}, decc/m {:.4}",
                    b.count, b.discovery_fraction, b.decc_mean_size, b.decc_per_edge
                );
            }
        }
        s
    }
}
