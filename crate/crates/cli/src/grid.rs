use std::str::FromStr;

/// `start:stop:count`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("grid `{s}` is not start:stop:count"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("grid `{s}`: {e}"));
        let (start, stop) = (num(a)?, num(b)?);
        let count: usize = n.trim().parse().map_err(|e| format!("grid `{s}`: count: {e}"))?;
        if count == 0 {
            return Err(format!("grid `{s}`: count must be at least 1"));
        }
        if !start.is_finite() || !stop.is_finite() || start < 0.0 || stop < start {
            return Err(format!("grid `{s}`: need 0 ≤ start ≤ stop"));
        }
        Ok(Self { start, stop, count })
    }
}

impl GridSpec {
    /// Points in ascending order; `log` spaces them geometrically.
    pub fn points(&self, log: bool) -> Result<Vec<f64>, String> {
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        if log && self.start <= 0.0 {
            return Err("logarithmic grid needs start > 0".into());
        }
        let n = (self.count - 1) as f64;
        let mut pts: Vec<f64> = (0..self.count)
            .map(|i| {
                let f = i as f64 / n;
                if log {
                    (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + f * (self.stop - self.start)
                }
            })
            .collect();
        // exact endpoints, whatever the rounding did
        pts[0] = self.start;
        pts[self.count - 1] = self.stop;
        Ok(pts)
    }
}
