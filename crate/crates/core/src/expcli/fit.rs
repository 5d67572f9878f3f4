use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hlcount::CountResult;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least 4 rows with nonzero error, have {usable} ({excluded} zero-error rows excluded)")]
    TooFewPoints { usable: usize, excluded: usize },
    #[error("rows mix different (n, r): ({0}, {1}) and ({2}, {3})")]
    Mixed(usize, usize, usize, usize),
    #[error("row for field '{0}' has an unreadable field label")]
    BadField(String),
}

/// Least-squares line through `(ln q, ln abs_error)`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    /// Rows with zero error, left out of the regression.
    pub excluded: usize,
}

/// Fits `log abs_error ≈ slope · log q + intercept` over rows of one `(n, r)`.
pub fn fit_error_exponent(rows: &[CountResult]) -> Result<FitResult, FitError> {
    let mut pts = Vec::new();
    let mut excluded = 0;
    for r in rows {
        if (r.n, r.r()) != (rows[0].n, rows[0].r()) {
            return Err(FitError::Mixed(rows[0].n, rows[0].r(), r.n, r.r()));
        }
        let q = r.q().ok_or_else(|| FitError::BadField(r.field.clone()))?;
        if r.abs_error > 0.0 {
            pts.push(((q as f64).ln(), r.abs_error.ln()));
        } else {
            excluded += 1;
        }
    }
    if pts.len() < 4 {
        return Err(FitError::TooFewPoints { usable: pts.len(), excluded });
    }
    // order-independent sums
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    Ok(FitResult { slope, intercept: my - slope * mx, points: pts.len(), excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hlcount::{Mode, PiValue};

    fn row(field: &str, abs_error: f64) -> CountResult {
        CountResult {
            field: field.into(),
            n: 2,
            offsets: vec!["0".into(), "1".into()],
            mode: Mode::Exact,
            pi: PiValue::Exact(0),
            prediction: "0/1".into(),
            abs_error,
            normalized_error: 0.0,
            sample_size: None,
            ci_half_width: None,
            seed: None,
            shard: None,
            config_digest: String::new(),
            outside_hypotheses: false,
        }
    }

    #[test]
    fn synthetic_slope() {
        let qs = [(3, "3"), (5, "5"), (7, "7"), (9, "3^2"), (11, "11"), (25, "5^2")];
        let rows: Vec<_> = qs.iter().map(|&(q, l)| row(l, 0.7 * (q as f64).powf(1.5))).collect();
        let f = fit_error_exponent(&rows).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-9);
        assert!((f.intercept - 0.7f64.ln()).abs() < 1e-9);
        let mut rev = rows.clone();
        rev.reverse();
        assert_eq!(fit_error_exponent(&rev).unwrap(), f);
    }

    #[test]
    fn zero_rows_excluded() {
        let rows = vec![row("3", 0.0), row("5", 0.0), row("7", 0.0), row("11", 0.0)];
        assert_eq!(fit_error_exponent(&rows), Err(FitError::TooFewPoints { usable: 0, excluded: 4 }));
        let mut rows: Vec<_> = ["3", "5", "7", "11"].iter().map(|l| row(l, 2.0)).collect();
        rows.push(row("13", 0.0));
        let f = fit_error_exponent(&rows).unwrap();
        assert_eq!((f.points, f.excluded), (4, 1));
        assert!(f.slope.abs() < 1e-12);
    }

    #[test]
    fn mixed_rows_refused() {
        let mut rows: Vec<_> = ["3", "5", "7", "11"].iter().map(|l| row(l, 2.0)).collect();
        rows[2].n = 3;
        assert!(matches!(fit_error_exponent(&rows), Err(FitError::Mixed(..))));
    }
}
