//! Threshold grid syntax `lo:hi:count:log|lin`.

use sure_svt::risk::{lin_grid, log_grid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub log: bool,
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count, scale] = parts.as_slice() else {
            return Err(format!("grid must be lo:hi:count:log|lin, got '{s}'"));
        };
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("bad grid bound '{t}'"));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let count: usize = count.parse().map_err(|_| format!("bad grid count '{count}'"))?;
        let log = match *scale {
            "log" => true,
            "lin" => false,
            other => return Err(format!("grid scale must be log or lin, got '{other}'")),
        };
        if log && !(lo > 0.0) {
            return Err("log grid requires lo > 0".into());
        }
        if !(lo >= 0.0) {
            return Err("grid thresholds must be >= 0".into());
        }
        Ok(GridSpec { lo, hi, count, log })
    }
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, sure_svt::Error> {
        if self.log {
            log_grid(self.lo, self.hi, self.count)
        } else {
            lin_grid(self.lo, self.hi, self.count)
        }
    }
}
