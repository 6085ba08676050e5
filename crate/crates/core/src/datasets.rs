//! Built-in datasets.

use crate::error::{Error, Result};
use crate::estimators::ExcessSample;

/// Norwegian fire claims above 22.0 million NKr, 1983 to 1992.
pub const FIRE_CLAIMS: [f64; 17] = [
    42.719, 105.860, 29.172, 22.654, 61.992, 35.000, 26.891, 25.590, 24.130, 23.208, 37.772, 34.126, 27.990,
    53.472, 36.269, 31.088, 25.907,
];
pub const FIRE_THRESHOLD: f64 = 22.0;
pub const FIRE_YEARS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: &'static str,
    pub values: Vec<f64>,
    pub threshold: f64,
    pub years: f64,
}

impl Dataset {
    /// Excesses over the dataset threshold, with n = k (only the claims above
    /// the threshold are on record).
    pub fn excess_sample(&self) -> Result<ExcessSample> {
        let y: Vec<f64> = self.values.iter().map(|x| x - self.threshold).collect();
        let k = y.len();
        ExcessSample::new(self.threshold, y, k)?.with_years(self.years)
    }
}

pub fn builtin_dataset(name: &str) -> Result<Dataset> {
    match name.to_ascii_lowercase().as_str() {
        "fire" => Ok(Dataset {
            name: "fire",
            values: FIRE_CLAIMS.to_vec(),
            threshold: FIRE_THRESHOLD,
            years: FIRE_YEARS,
        }),
        _ => Err(Error::Unknown {
            kind: "dataset",
            name: name.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fire_shape() {
        let d = builtin_dataset("fire").unwrap();
        assert_eq!(d.values.len(), 17);
        assert!(d.values.iter().all(|&x| x > 22.0));
        let s = d.excess_sample().unwrap();
        assert_eq!((s.k(), s.n()), (17, 17));
        assert!((s.rate().unwrap() - 1.7).abs() < 1e-15);
        let total: f64 = FIRE_CLAIMS.iter().sum::<f64>() - 17.0 * 22.0;
        assert!((s.sum() - total).abs() < 1e-9);
    }

    #[test]
    fn nidd_is_not_embedded() {
        assert!(matches!(builtin_dataset("nidd"), Err(Error::Unknown { .. })));
    }
}
